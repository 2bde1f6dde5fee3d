//! Closed-form Mordukhovich coderivatives of `P_{rB}`, `P_{rC_M}`,
//! `P_{K_p}` and `lambda I`, and a sampled limsup quotient that can
//! falsify a claimed membership `z* in D*P(x)(w*)`.
//!
//! At boundary points the closed forms only decide whether the zero
//! functional is a member; [`CoderivativeValue::PredicateOnly`] records
//! exactly that and nothing more.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{MeasureGrid, OrderedInterval, StepFunction};
use crate::kernel;
use crate::lp::{DualVector, IndexMask, LpVector};
use crate::projection::{self, on_boundary, ConvexSet, Direction};
use crate::sampling;

/// Relative tolerance for the "w* is a multiple of J(x)" tests and the
/// equality clauses evaluated at boundary points.
pub const PROPORTIONALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoderivativeValue {
    Singleton {
        value: DualVector,
    },
    Empty,
    Interval {
        interval: OrderedInterval,
    },
    /// Only `0 in D*P(x)(w*)` is decided; `None` means the available
    /// characterization could not settle it.
    PredicateOnly {
        zero_member: Option<bool>,
    },
}

impl CoderivativeValue {
    pub fn singleton(&self) -> Option<&DualVector> {
        match self {
            CoderivativeValue::Singleton { value } => Some(value),
            _ => None,
        }
    }

    /// Whether the zero functional belongs to the value, when known.
    pub fn contains_zero(&self) -> Option<bool> {
        match self {
            CoderivativeValue::Singleton { value } => Some(value.is_zero()),
            CoderivativeValue::Empty => Some(false),
            CoderivativeValue::Interval { interval } => {
                let zero = StepFunction::from_parts(interval.lower().exponent(), vec![0.0; interval.lower().len()]);
                interval.contains(&zero).ok()
            }
            CoderivativeValue::PredicateOnly { zero_member } => *zero_member,
        }
    }
}

fn check_pair(x: &LpVector, w: &DualVector) -> Result<()> {
    kernel::check_len(x.len(), w.len())?;
    kernel::check_conjugate(x.p(), w.q())
}

/// If `w = c j` (up to [`PROPORTIONALITY_TOL`]), returns `c`. `j_pair` is
/// `<j, x>` for the `x` that produced `j`, so that `c = <w, x> / <j, x>`.
fn multiple_of(w: &DualVector, j: &DualVector, x: &LpVector, j_pair: f64) -> Result<Option<f64>> {
    if j_pair == 0.0 {
        return Ok(None);
    }
    let c = w.pairing(x)? / j_pair;
    let residual = (w - &j.scale(c)).norm();
    Ok((residual <= PROPORTIONALITY_TOL * (1.0 + w.norm())).then_some(c))
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= PROPORTIONALITY_TOL * (1.0 + scale)
}

/// `D*P_{rB}(x)(w*)`.
///
/// * `||x|| < r`: `{w*}`.
/// * `||x|| > r`: `{(r/||x||)(w* - (<w*,x>/||x||^2) J(x))}`.
/// * `||x|| = r`: `{0}` for `w* = 0`, empty for `w* = J(x)`, zero-membership
///   true for negative multiples of `J(x)` and false for positive ones,
///   unknown otherwise.
pub fn coderivative_ball(x: &LpVector, r: f64, w: &DualVector) -> Result<CoderivativeValue> {
    check_pair(x, w)?;
    let norm = x.norm();
    if on_boundary(norm, r) {
        if w.is_zero() {
            return Ok(CoderivativeValue::Singleton { value: w.clone() });
        }
        let jx = x.duality_j();
        let value = match multiple_of(w, &jx, x, norm * norm)? {
            Some(c) if close(c, 1.0, 0.0) => CoderivativeValue::Empty,
            Some(c) if c < 0.0 => CoderivativeValue::PredicateOnly { zero_member: Some(true) },
            Some(c) if c > 0.0 => CoderivativeValue::PredicateOnly { zero_member: Some(false) },
            _ => CoderivativeValue::PredicateOnly { zero_member: None },
        };
        return Ok(value);
    }
    if norm < r {
        return Ok(CoderivativeValue::Singleton { value: w.clone() });
    }
    let jx = x.duality_j();
    let c = w.pairing(x)? / (norm * norm);
    let value = (w - &jx.scale(c)).scale(r / norm);
    Ok(CoderivativeValue::Singleton { value })
}

/// `D*P_{rC_M}(x)(w*)`.
///
/// Exterior points use `(r/||x_M||)(w*_M - (<w*_M, x_M>/||x_M||^2) J(x_M)) + w*_Mbar`.
/// On the boundary `||x_M|| = r` the zero functional belongs to the value
/// iff `w*_Mbar = 0`, `<w*_M, x_M> = -r ||w*_M||` and `-(J*(w*))_M` is not an
/// inward direction; the last clause goes through
/// [`projection::classify_direction`] and may come back unknown.
pub fn coderivative_cylinder(x: &LpVector, r: f64, mask: &IndexMask, w: &DualVector) -> Result<CoderivativeValue> {
    check_pair(x, w)?;
    let (x_on, _) = x.mask_decompose(mask)?;
    let (w_on, w_off) = w.mask_decompose(mask)?;
    let norm_on = x_on.norm();
    if on_boundary(norm_on, r) {
        return cylinder_boundary(x, r, mask, w, &x_on, &w_on, &w_off);
    }
    if norm_on < r {
        return Ok(CoderivativeValue::Singleton { value: w.clone() });
    }
    let j_on = x_on.duality_j();
    let c = w_on.pairing(&x_on)? / (norm_on * norm_on);
    let value = &(&w_on - &j_on.scale(c)).scale(r / norm_on) + &w_off;
    Ok(CoderivativeValue::Singleton { value })
}

fn cylinder_boundary(
    x: &LpVector,
    r: f64,
    mask: &IndexMask,
    w: &DualVector,
    x_on: &LpVector,
    w_on: &DualVector,
    w_off: &DualVector,
) -> Result<CoderivativeValue> {
    if w.is_zero() {
        return Ok(CoderivativeValue::Singleton { value: w.clone() });
    }
    let jx = x.duality_j();
    let x_norm = x.norm();
    if let Some(c) = multiple_of(w, &jx, x, x_norm * x_norm)? {
        if close(c, 1.0, 0.0) {
            return Ok(CoderivativeValue::Empty);
        }
    }
    // lambda J(x)_M with lambda < 0 is a stated member.
    let jx_on = jx.restrict(mask)?;
    if let Some(c) = multiple_of(w, &jx_on, x, jx_on.pairing(x)?)? {
        if c < 0.0 {
            return Ok(CoderivativeValue::PredicateOnly { zero_member: Some(true) });
        }
    }
    let w_norm = w.norm();
    let w_on_norm = w_on.norm();
    let off_vanishes = w_off.norm() <= PROPORTIONALITY_TOL * (1.0 + w_norm);
    let tight = close(w_on.pairing(x_on)?, -r * w_on_norm, r * w_on_norm);
    if !(off_vanishes && tight) {
        return Ok(CoderivativeValue::PredicateOnly { zero_member: Some(false) });
    }
    let v = w.duality_jstar().restrict(mask)?.scale(-1.0);
    if v.is_zero() {
        return Ok(CoderivativeValue::PredicateOnly { zero_member: Some(false) });
    }
    let set = ConvexSet::cylinder(r, mask.clone())?;
    let zero_member = match projection::classify_direction(&set, x, &v, &projection::DEFAULT_T_SAMPLES)? {
        Direction::Up => Some(true),
        Direction::Down => Some(false),
        Direction::Indeterminate => None,
    };
    Ok(CoderivativeValue::PredicateOnly { zero_member })
}

/// `0 in D*P_{K_p}(f)(phi)` iff no cell has (`phi != 0` and `f > 0`) or
/// (`phi < 0` and `f <= 0`).
pub fn cone_zero_membership(f: &StepFunction, phi: &StepFunction, grid: &MeasureGrid) -> Result<bool> {
    kernel::check_len(f.len(), grid.len())?;
    kernel::check_len(phi.len(), grid.len())?;
    Ok(!f.values().iter().zip(phi.values()).any(|(&fi, &pi)| (pi != 0.0 && fi > 0.0) || (pi < 0.0 && fi <= 0.0)))
}

/// `D*P_{K_p}(0)(psi) = [0, psi]` for `psi` in the dual cone.
pub fn coderivative_cone_at_origin(psi: &StepFunction) -> Result<CoderivativeValue> {
    if !psi.in_cone() {
        return Err(Error::NotInCone);
    }
    let zero = StepFunction::from_parts(psi.exponent(), vec![0.0; psi.len()]);
    Ok(CoderivativeValue::Interval { interval: OrderedInterval::new(zero, psi.clone())? })
}

/// `D*(lambda I)(x, lambda x)(w*) = {lambda w*}` at every base point.
pub fn coderivative_scaled_identity(lambda: f64, w: &DualVector) -> CoderivativeValue {
    CoderivativeValue::Singleton { value: w.scale(lambda) }
}

/// Single-valued maps on `l_p` the quotient test knows how to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VectorMap {
    Projection { set: ConvexSet },
    ScaledIdentity { lambda: f64 },
}

impl VectorMap {
    pub fn apply(&self, x: &LpVector) -> Result<LpVector> {
        match self {
            VectorMap::Projection { set: ConvexSet::Ball { r } } => Ok(projection::project_ball(x, *r)),
            VectorMap::Projection { set: ConvexSet::Cylinder { r, mask } } => projection::project_cylinder(x, *r, mask),
            VectorMap::Projection { set: ConvexSet::Cone { .. } } => {
                Err(Error::KindMismatch { set: "cone", input: "vector" })
            }
            VectorMap::ScaledIdentity { lambda } => Ok(x.scale(*lambda)),
        }
    }

    /// Closed-form coderivative at `x` in direction `w`.
    pub fn coderivative(&self, x: &LpVector, w: &DualVector) -> Result<CoderivativeValue> {
        match self {
            VectorMap::Projection { set: ConvexSet::Ball { r } } => coderivative_ball(x, *r, w),
            VectorMap::Projection { set: ConvexSet::Cylinder { r, mask } } => coderivative_cylinder(x, *r, mask, w),
            VectorMap::Projection { set: ConvexSet::Cone { .. } } => {
                Err(Error::KindMismatch { set: "cone", input: "vector" })
            }
            VectorMap::ScaledIdentity { lambda } => {
                check_pair(x, w)?;
                Ok(coderivative_scaled_identity(*lambda, w))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    #[serde(rename = "sup")]
    pub sup_quotient: f64,
    pub radii: Vec<f64>,
    #[serde(rename = "samples")]
    pub samples_used: usize,
}

/// Largest sampled value of
/// `(<z*, u - x> - <w*, P(u) - P(x)>) / (||u - x|| + ||P(u) - P(x)||)`
/// over `u = x + t d`, for each radius `t` and each direction `d` (random
/// unit directions followed by `±e_i`). A clearly positive result refutes
/// `z* in D*P(x)(w*)`; a small one is only consistent with it.
pub fn numeric_quotient_sup(
    map: &VectorMap,
    x: &LpVector,
    z: &DualVector,
    w: &DualVector,
    radii: &[f64],
    directions_per_radius: usize,
    seed: u64,
) -> Result<QuotientReport> {
    check_pair(x, z)?;
    check_pair(x, w)?;
    if radii.is_empty() || radii.iter().any(|t| !(*t > 0.0)) || radii.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::invalid("radii", "need strictly decreasing positive radii"));
    }
    if directions_per_radius == 0 {
        return Err(Error::invalid("directions_per_radius", "must be at least 1"));
    }
    let px = map.apply(x)?;
    let mut rng = sampling::seeded(seed);
    let axes = sampling::axis_directions(x.len());
    let mut sup = f64::NEG_INFINITY;
    let mut samples = 0;
    for &t in radii {
        let random = (0..directions_per_radius).map(|_| sampling::unit_direction(&mut rng, x.len(), x.p()));
        let directions: Vec<Vec<f64>> = random.chain(axes.iter().cloned()).collect();
        for d in directions {
            let step = LpVector::from_parts(x.p(), d.into_iter().map(|di| t * di).collect());
            let u = x + &step;
            let pu = map.apply(&u)?;
            let dp = &pu - &px;
            let denom = step.norm() + dp.norm();
            let q = if denom == 0.0 { 0.0 } else { (z.pairing(&step)? - w.pairing(&dp)?) / denom };
            sup = sup.max(q);
            samples += 1;
        }
    }
    Ok(QuotientReport { sup_quotient: sup, radii: radii.to_vec(), samples_used: samples })
}
