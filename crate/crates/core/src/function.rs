//! Step functions on a finite weighted grid, standing in for `L_p(S)`.
//!
//! Every cell has strictly positive measure, so "μ-almost everywhere" is
//! read as "on every cell". Sign tests are exact: a cell with value `0.0`
//! belongs to neither the positive nor the negative support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel;

/// Finite measure space: cell `i` has measure `weights[i] > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct MeasureGrid {
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawGrid {
    weights: Vec<f64>,
}

impl TryFrom<RawGrid> for MeasureGrid {
    type Error = Error;
    fn try_from(raw: RawGrid) -> Result<Self> {
        MeasureGrid::new(raw.weights)
    }
}

impl MeasureGrid {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::invalid("weights", "grid needs at least two cells"));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid("weights", format!("cell {} has non-positive or non-finite measure", i + 1)));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Refines the grid by splitting cell `cell` into two consecutive
    /// cells of measure `weights[cell] - piece` and `piece`.
    pub fn split_cell(&self, cell: usize, piece: f64) -> Result<MeasureGrid> {
        let w = *self.weights.get(cell).ok_or(Error::DimensionMismatch { left: cell + 1, right: self.len() })?;
        if !(piece > 0.0 && piece < w) {
            return Err(Error::invalid("piece", format!("{piece} not inside (0, {w})")));
        }
        let mut weights = self.weights.clone();
        weights[cell] = w - piece;
        weights.insert(cell + 1, piece);
        Ok(MeasureGrid { weights })
    }

    fn check(&self, f: &StepFunction) -> Result<()> {
        kernel::check_len(f.len(), self.len())
    }
}

/// Cell values of an element of `L_p(S)` (or of `L_q(S)` on the dual side,
/// in which case `exponent` holds `q`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction")]
pub struct StepFunction {
    p: f64,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawFunction {
    p: f64,
    values: Vec<f64>,
}

impl TryFrom<RawFunction> for StepFunction {
    type Error = Error;
    fn try_from(raw: RawFunction) -> Result<Self> {
        StepFunction::new(raw.p, raw.values)
    }
}

impl StepFunction {
    pub fn new(p: f64, values: Vec<f64>) -> Result<Self> {
        kernel::check_exponent(p)?;
        if values.is_empty() {
            return Err(Error::invalid("values", "function must have at least one cell"));
        }
        kernel::check_finite("values", &values)?;
        Ok(Self { p, values })
    }

    pub fn zeros(p: f64, n: usize) -> Result<Self> {
        Self::new(p, vec![0.0; n])
    }

    pub(crate) fn from_parts(p: f64, values: Vec<f64>) -> Self {
        Self { p, values }
    }

    /// The exponent of the space this function lives in.
    pub fn exponent(&self) -> f64 {
        self.p
    }

    pub fn conjugate_exponent(&self) -> f64 {
        kernel::conjugate(self.p)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_parts(self.p, self.values.iter().map(|v| factor * v).collect())
    }

    pub fn sub(&self, other: &StepFunction) -> Result<Self> {
        kernel::check_len(self.len(), other.len())?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.p, values))
    }

    pub fn add(&self, other: &StepFunction) -> Result<Self> {
        kernel::check_len(self.len(), other.len())?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.p, values))
    }

    /// `(sum |f_i|^p mu_i)^(1/p)`.
    pub fn norm(&self, grid: &MeasureGrid) -> Result<f64> {
        grid.check(self)?;
        Ok(kernel::norm(&self.values, Some(&grid.weights), self.p))
    }

    /// `<phi, f> = sum phi_i f_i mu_i`, with `self` the dual-side `phi`.
    pub fn pairing(&self, f: &StepFunction, grid: &MeasureGrid) -> Result<f64> {
        kernel::check_len(self.len(), f.len())?;
        grid.check(self)?;
        kernel::check_conjugate(f.p, self.p)?;
        Ok(kernel::pairing(&self.values, &f.values, Some(&grid.weights)))
    }

    /// `(Jf)(s) = |f(s)|^(p-1) sign(f(s)) / ||f||_p^(p-2)`; `J(0) = 0`.
    pub fn duality_j(&self, grid: &MeasureGrid) -> Result<StepFunction> {
        grid.check(self)?;
        Ok(Self::from_parts(self.conjugate_exponent(), kernel::duality(&self.values, Some(&grid.weights), self.p)))
    }

    /// `f+`: the value where `f > 0`, else 0.
    pub fn positive_part(&self) -> StepFunction {
        Self::from_parts(self.p, self.values.iter().map(|&v| if v > 0.0 { v } else { 0.0 }).collect())
    }

    /// `f-`: the value where `f < 0`, else 0.
    pub fn negative_part(&self) -> StepFunction {
        Self::from_parts(self.p, self.values.iter().map(|&v| if v < 0.0 { v } else { 0.0 }).collect())
    }

    /// `(f+, f-)` with `f = f+ + f-` exactly.
    pub fn pos_neg_parts(&self) -> (StepFunction, StepFunction) {
        (self.positive_part(), self.negative_part())
    }

    /// `f` in the positive cone: every cell `>= 0`, no tolerance.
    pub fn in_cone(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// `f <= g` on every cell.
    pub fn precedes(&self, other: &StepFunction) -> Result<bool> {
        kernel::check_len(self.len(), other.len())?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// The function on `grid.split_cell(cell, _)`: the value of `cell` is
    /// repeated on both halves.
    pub fn lift_split(&self, cell: usize) -> StepFunction {
        let mut values = self.values.clone();
        values.insert(cell + 1, values[cell]);
        Self::from_parts(self.p, values)
    }
}

/// `[lower, upper]` in the cellwise order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedInterval {
    lower: StepFunction,
    upper: StepFunction,
}

impl OrderedInterval {
    pub fn new(lower: StepFunction, upper: StepFunction) -> Result<Self> {
        if !lower.precedes(&upper)? {
            return Err(Error::invalid("interval", "lower endpoint exceeds upper endpoint on some cell"));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &StepFunction {
        &self.lower
    }

    pub fn upper(&self) -> &StepFunction {
        &self.upper
    }

    /// `lower_i <= phi_i <= upper_i` on every cell.
    pub fn contains(&self, phi: &StepFunction) -> Result<bool> {
        Ok(self.lower.precedes(phi)? && phi.precedes(&self.upper)?)
    }
}
