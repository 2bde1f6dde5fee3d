//! Covering constants
//! `alpha(F, x, y) = sup_{eta > 0} inf { ||z*|| : z* in D*F(x')(w*), x' in B(x, eta),
//! F(x') in B(y, eta), ||w*|| = 1 }` for the three projections and `lambda I`.
//!
//! The estimator samples the infimum, so each per-eta value is an upper
//! bound. It is exact in two situations. In the interior the closed form
//! is the identity, so every record equals 1. Wherever a zero exists, an
//! explicit witness `(u, w*)` with `0 in D*F(u)(w*)` supplies it.

use serde::{Deserialize, Serialize};

use crate::coderivative::{self, CoderivativeValue, VectorMap};
use crate::error::{Error, Result};
use crate::function::{MeasureGrid, StepFunction};
use crate::kernel;
use crate::lp::{DualVector, IndexMask, LpVector};
use crate::projection::{self, on_boundary, ConvexSet, Point, BOUNDARY_TOL};
use crate::sampling::{self, SampleRng};

/// Maps whose covering constant is estimated.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Projection(ConvexSet),
    ScaledIdentity(f64),
}

impl Target {
    /// `lambda I`; only `|lambda| <= 1` has a known covering constant.
    pub fn scaled_identity(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Target::ScaledIdentity(lambda))
    }

    fn vector_map(&self) -> Option<VectorMap> {
        match self {
            Target::Projection(ConvexSet::Cone { .. }) => None,
            Target::Projection(set) => Some(VectorMap::Projection { set: set.clone() }),
            Target::ScaledIdentity(lambda) => Some(VectorMap::ScaledIdentity { lambda: *lambda }),
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda.abs()))
    }
}

fn boundary_tol(r: f64) -> f64 {
    BOUNDARY_TOL * (1.0 + r)
}

/// The known value: 1 strictly inside the ball or cylinder, 0 on or
/// outside it, 0 for the cone, `|lambda|` for `lambda I`.
pub fn theoretical_covering_constant(target: &Target, base: &Point) -> Result<f64> {
    match target {
        Target::Projection(set @ (ConvexSet::Ball { r } | ConvexSet::Cylinder { r, .. })) => {
            let value = projection::boundary_functional(set, as_vector(set, base)?)?;
            Ok(if value < *r && !on_boundary(value, *r) { 1.0 } else { 0.0 })
        }
        Target::Projection(set @ ConvexSet::Cone { grid }) => {
            as_function(set, base, grid)?;
            Ok(0.0)
        }
        Target::ScaledIdentity(lambda) => {
            check_lambda(*lambda)?;
            Ok(lambda.abs())
        }
    }
}

fn as_vector<'a>(set: &ConvexSet, point: &'a Point) -> Result<&'a LpVector> {
    match point {
        Point::Vector(x) => Ok(x),
        Point::Function(_) => Err(Error::KindMismatch { set: set.kind(), input: "function" }),
    }
}

fn as_function<'a>(set: &ConvexSet, point: &'a Point, grid: &MeasureGrid) -> Result<&'a StepFunction> {
    match point {
        Point::Function(f) => {
            kernel::check_len(f.len(), grid.len())?;
            Ok(f)
        }
        Point::Vector(_) => Err(Error::KindMismatch { set: set.kind(), input: "vector" }),
    }
}

/// A point `u` and unit functional `w*` with `0 in D*P(u)(w*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorWitness {
    pub point: LpVector,
    pub dual: DualVector,
}

impl VectorWitness {
    /// Checks `u in B(base, eta)`, `P(u) in B(P(base), eta)`, `||w*|| = 1`
    /// and that the closed form at `u` contains zero. Distances get the
    /// boundary tolerance.
    pub fn certify(&self, set: &ConvexSet, base: &LpVector, eta: f64) -> Result<bool> {
        let r = match set {
            ConvexSet::Ball { r } | ConvexSet::Cylinder { r, .. } => *r,
            ConvexSet::Cone { .. } => return Err(Error::KindMismatch { set: "cone", input: "vector" }),
        };
        let map = VectorMap::Projection { set: set.clone() };
        let slack = eta + boundary_tol(r);
        let near = (&self.point - base).norm() <= slack;
        let image_near = (&map.apply(&self.point)? - &map.apply(base)?).norm() <= slack;
        let unit = (self.dual.norm() - 1.0).abs() <= 1e-9;
        // exterior cancellation leaves rounding of order eps * ||u||
        let zero = match map.coderivative(&self.point, &self.dual)? {
            CoderivativeValue::Singleton { value } => value.norm() <= 1e-12 * (1.0 + self.point.norm()),
            other => other.contains_zero() == Some(true),
        };
        Ok(near && image_near && unit && zero)
    }
}

/// Zero witness for `P_{rB}` near `base`, or `None` when
/// `eta < r - ||base||` and every admissible point is interior.
pub fn witness_zero_ball(base: &LpVector, eta: f64, r: f64) -> Option<VectorWitness> {
    witness_on_part(base, eta, r, &IndexMask::full(base.len()).ok()?)
}

/// Zero witness for `P_{rC_M}`: the ball construction applied to `base_M`
/// with `base_Mbar` carried along.
pub fn witness_zero_cylinder(base: &LpVector, eta: f64, r: f64, mask: &IndexMask) -> Result<Option<VectorWitness>> {
    mask.check_len(base.len())?;
    Ok(witness_on_part(base, eta, r, mask))
}

fn witness_on_part(base: &LpVector, eta: f64, r: f64, mask: &IndexMask) -> Option<VectorWitness> {
    if !(eta > 0.0 && r > 0.0) {
        return None;
    }
    let tol = boundary_tol(r);
    let (on, off) = base.mask_decompose(mask).ok()?;
    let norm = on.norm();
    let gap = r - norm;
    // Scale factor applied to `base_M`, or the length of `u_M` along the
    // first masked axis when `base_M = 0`.
    let u_on = if gap <= tol {
        on.scale(1.0 + eta / (2.0 * norm))
    } else if eta < gap - tol {
        return None;
    } else if norm == 0.0 {
        let len = if eta > gap + tol { 0.5 * (r + eta) } else { r };
        let mut e = vec![0.0; base.len()];
        e[mask.members()[0]] = len;
        LpVector::new(base.p(), e).ok()?
    } else if eta > gap + tol {
        on.scale(0.5 * (eta + norm + r) / norm)
    } else {
        on.scale(r / norm)
    };
    let len = u_on.norm();
    let dual = u_on.duality_j().scale(-1.0 / len);
    Some(VectorWitness { point: &u_on + &off, dual })
}

/// Zero witness for `P_{K_p}`, possibly on a refined grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeWitness {
    pub grid: MeasureGrid,
    /// The base point lifted to `grid`.
    pub base: StepFunction,
    pub point: StepFunction,
    pub dual: StepFunction,
}

impl ConeWitness {
    pub fn certify(&self, eta: f64) -> Result<bool> {
        let g = &self.grid;
        let near = self.point.sub(&self.base)?.norm(g)? <= eta;
        let image_near =
            projection::project_cone(&self.point).sub(&projection::project_cone(&self.base))?.norm(g)? <= eta;
        let unit = (self.dual.norm(g)? - 1.0).abs() <= 1e-9;
        let mixed = self.point.values().iter().any(|&v| v > 0.0) && self.point.values().iter().any(|&v| v < 0.0);
        let zero = coderivative::cone_zero_membership(&self.point, &self.dual, g)?;
        Ok(near && image_near && unit && mixed && zero)
    }
}

/// Builds `f` within `eta` of `base` with a strictly positive and a strictly
/// negative cell, and `phi = mu(E)^(-1/q)` on one negative cell `E`.
///
/// Flipping the sign of a whole cell can cost more than `eta` on a fixed
/// grid (e.g. `base = (1, 1)`, `eta = 0.5`). A cell is then split so that
/// a piece of small measure carries the new sign. Each modification costs
/// at most `eta / 4` in norm.
pub fn witness_zero_cone(base: &StepFunction, eta: f64, grid: &MeasureGrid) -> Result<ConeWitness> {
    kernel::check_len(base.len(), grid.len())?;
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid("eta", format!("{eta} is not a positive radius")));
    }
    let budget = eta / 4.0;
    let mut w = ConeWitness { grid: grid.clone(), base: base.clone(), point: base.clone(), dual: base.clone() };
    let negative = match w.point.values().iter().position(|&v| v < 0.0) {
        Some(i) => i,
        None => impose_sign(&mut w, -1.0, budget, None)?.0,
    };
    let negative = if w.point.values().iter().any(|&v| v > 0.0) {
        negative
    } else {
        match impose_sign(&mut w, 1.0, budget, Some(negative))?.1 {
            Some(split) if split < negative => negative + 1,
            _ => negative,
        }
    };
    let q = base.conjugate_exponent();
    let mut phi = vec![0.0; w.point.len()];
    phi[negative] = w.grid.weights()[negative].powf(-1.0 / q);
    w.dual = StepFunction::from_parts(q, phi);
    Ok(w)
}

/// Gives some cell other than `keep` the strict sign `sign` at norm cost at
/// most `budget`. Returns the index of that cell in the (possibly refined)
/// grid and the cell that was split, if any.
fn impose_sign(w: &mut ConeWitness, sign: f64, budget: f64, keep: Option<usize>) -> Result<(usize, Option<usize>)> {
    let p = w.point.exponent();
    let weights = w.grid.weights();
    let cost = |i: usize| w.point.values()[i].abs() * weights[i].powf(1.0 / p);
    let cell = (0..w.point.len())
        .filter(|&i| Some(i) != keep && sign * w.point.values()[i] <= 0.0)
        .min_by(|&a, &b| cost(a).total_cmp(&cost(b)))
        .ok_or_else(|| Error::invalid("grid", "no cell available for a sign change"))?;
    let value = w.point.values()[cell].abs();
    let mu = weights[cell];
    if cost(cell) < budget / 2.0 {
        let mut values = w.point.values().to_vec();
        values[cell] = sign * (budget / mu.powf(1.0 / p) - value);
        w.point = StepFunction::from_parts(p, values);
        return Ok((cell, None));
    }
    let piece = (0.5 * mu).min((budget / (value + 1.0)).powf(p));
    if !(piece > 0.0) {
        return Err(Error::invalid("eta", "too small to refine the grid at this exponent"));
    }
    w.grid = w.grid.split_cell(cell, piece)?;
    w.base = w.base.lift_split(cell);
    let mut values = w.point.lift_split(cell).values().to_vec();
    values[cell + 1] = sign;
    w.point = StepFunction::from_parts(p, values);
    Ok((cell + 1, Some(cell)))
}

/// Witness used at one eta of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessRecord {
    Vector(VectorWitness),
    Function(ConeWitness),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaWitness {
    pub eta: f64,
    #[serde(flatten)]
    pub witness: WitnessRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub eta_grid: Vec<f64>,
    pub per_eta_inf: Vec<f64>,
    pub alpha_hat: f64,
    pub witnesses: Vec<EtaWitness>,
}

impl CoveringReport {
    /// Two columns `eta,per_eta_inf`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eta,per_eta_inf\n");
        for (eta, value) in self.eta_grid.iter().zip(&self.per_eta_inf) {
            out.push_str(&format!("{eta:.16e},{value:.16e}\n"));
        }
        out
    }
}

/// 13 geometric points from `1e-3 * scale` to `4 * scale`, where
/// `scale = max(|r - boundary functional|, 1)` for the ball and cylinder and
/// 1 otherwise, so the grid straddles the distance to the boundary.
pub fn default_eta_grid(target: &Target, base: &Point) -> Result<Vec<f64>> {
    let scale = match target {
        Target::Projection(set @ (ConvexSet::Ball { r } | ConvexSet::Cylinder { r, .. })) => {
            let value = projection::boundary_functional(set, as_vector(set, base)?)?;
            (r - value).abs().max(1.0)
        }
        _ => 1.0,
    };
    let (lo, hi) = (1e-3 * scale, 4.0 * scale);
    let ratio = (hi / lo).powf(1.0 / 12.0);
    Ok((0..13).map(|k| if k == 12 { hi } else { lo * ratio.powi(k) }).collect())
}

fn check_eta_grid(eta_grid: &[f64]) -> Result<()> {
    if eta_grid.is_empty()
        || eta_grid.iter().any(|e| !(e.is_finite() && *e > 0.0))
        || eta_grid.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::invalid("eta_grid", "need positive, strictly increasing radii"));
    }
    Ok(())
}

/// Sampled estimate of the covering constant.
///
/// For each eta: the base point and `samples_per_eta` draws from
/// `B(base, eta)` whose image stays in `B(F(base), eta)` are paired with a
/// random unit dual direction, and `||z*||` is recorded for every
/// singleton value off the boundary band. A certified witness adds 0.
/// The domains grow with eta, so the reported value is the running
/// minimum, which is never larger than the fresh sample minimum.
pub fn estimate_covering_constant(
    target: &Target,
    base: &Point,
    eta_grid: &[f64],
    samples_per_eta: usize,
    seed: u64,
) -> Result<CoveringReport> {
    check_eta_grid(eta_grid)?;
    if samples_per_eta == 0 {
        return Err(Error::invalid("samples_per_eta", "must be at least 1"));
    }
    if let Target::ScaledIdentity(lambda) = target {
        check_lambda(*lambda)?;
    }
    let mut per_eta_inf = Vec::with_capacity(eta_grid.len());
    let mut witnesses = Vec::new();
    let mut running = f64::INFINITY;
    for (k, &eta) in eta_grid.iter().enumerate() {
        let mut rng = sampling::substream(seed, k as u64);
        let (sampled, witness) = match (target, base) {
            (Target::Projection(set @ ConvexSet::Cone { grid }), _) => {
                let f = as_function(set, base, grid)?;
                let sampled = cone_samples(f, grid, eta, samples_per_eta, &mut rng)?;
                let w = witness_zero_cone(f, eta, grid)?;
                let witness = if w.certify(eta)? { Some(WitnessRecord::Function(w)) } else { None };
                (sampled, witness)
            }
            (_, Point::Vector(x)) => {
                let map = target.vector_map().expect("cone handled above");
                let sampled = vector_samples(target, &map, x, eta, samples_per_eta, &mut rng)?;
                let witness = match target {
                    Target::Projection(set @ ConvexSet::Ball { r }) => {
                        witness_zero_ball(x, eta, *r).filter(|w| w.certify(set, x, eta).unwrap_or(false))
                    }
                    Target::Projection(set @ ConvexSet::Cylinder { r, mask }) => {
                        witness_zero_cylinder(x, eta, *r, mask)?.filter(|w| w.certify(set, x, eta).unwrap_or(false))
                    }
                    _ => None,
                };
                (sampled, witness.map(WitnessRecord::Vector))
            }
            (_, Point::Function(_)) => {
                let set = match target {
                    Target::Projection(set) => set.kind(),
                    Target::ScaledIdentity(_) => "scaled_identity",
                };
                return Err(Error::KindMismatch { set, input: "function" });
            }
        };
        let mut value = sampled;
        if let Some(witness) = witness {
            value = 0.0;
            witnesses.push(EtaWitness { eta, witness });
        }
        running = running.min(value);
        if !running.is_finite() {
            return Err(Error::invalid("samples_per_eta", format!("no admissible sample at eta = {eta}")));
        }
        per_eta_inf.push(running);
    }
    let alpha_hat = per_eta_inf.iter().copied().fold(0.0, f64::max);
    Ok(CoveringReport { eta_grid: eta_grid.to_vec(), per_eta_inf, alpha_hat, witnesses })
}

fn vector_samples(
    target: &Target,
    map: &VectorMap,
    base: &LpVector,
    eta: f64,
    samples: usize,
    rng: &mut SampleRng,
) -> Result<f64> {
    let (p, q, n) = (base.p(), base.q(), base.len());
    let image = map.apply(base)?;
    let mut best = f64::INFINITY;
    for k in 0..=samples {
        let x =
            if k == 0 { base.clone() } else { LpVector::from_parts(p, sampling::in_ball(rng, base.coords(), eta, p)) };
        let w = DualVector::from_parts(q, sampling::unit_direction(rng, n, q));
        if (&map.apply(&x)? - &image).norm() > eta {
            continue;
        }
        if let Target::Projection(set) = target {
            let value = projection::boundary_functional(set, &x)?;
            if let ConvexSet::Ball { r } | ConvexSet::Cylinder { r, .. } = set {
                if on_boundary(value, *r) {
                    continue;
                }
            }
        }
        if let CoderivativeValue::Singleton { value } = map.coderivative(&x, &w)? {
            best = best.min(value.norm());
        }
    }
    Ok(best)
}

/// The cone has no singleton closed form off the origin; samples only
/// contribute zeros certified by the cellwise membership rule.
fn cone_samples(base: &StepFunction, grid: &MeasureGrid, eta: f64, samples: usize, rng: &mut SampleRng) -> Result<f64> {
    let (p, q) = (base.exponent(), base.conjugate_exponent());
    let image = projection::project_cone(base);
    let mut best = f64::INFINITY;
    for k in 0..=samples {
        let f = if k == 0 {
            base.clone()
        } else {
            StepFunction::from_parts(p, sampling::in_weighted_ball(rng, base.values(), grid.weights(), eta, p))
        };
        let phi = StepFunction::from_parts(q, sampling::unit_weighted_direction(rng, grid.weights(), q));
        if projection::project_cone(&f).sub(&image)?.norm(grid)? > eta {
            continue;
        }
        if coderivative::cone_zero_membership(&f, &phi, grid)? {
            best = 0.0;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub targets_tested: usize,
    pub violations: usize,
    /// Largest `preimage distance - rho`; at least `-rho`.
    pub max_deficit: f64,
}

/// Samples targets `y'` in `B(P(x), alpha rho)` that lie in the set and
/// checks that some preimage of `y'` is within `rho + 1e-9` of `x`, i.e.
/// the covering inclusion with `V` the whole space.
pub fn covering_property_check(
    set: &ConvexSet,
    x: &Point,
    alpha: f64,
    rho: f64,
    target_samples: usize,
    seed: u64,
) -> Result<PropertyReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", format!("{alpha} is not positive")));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid("rho", format!("{rho} is not positive")));
    }
    let y = projection::project(set, x)?;
    let radius = alpha * rho;
    let mut rng = sampling::seeded(seed);
    let mut report = PropertyReport { targets_tested: 0, violations: 0, max_deficit: -rho };
    for _ in 0..target_samples {
        let target = match (&y, set) {
            (Point::Vector(y), _) => {
                Point::Vector(LpVector::from_parts(y.p(), sampling::in_ball(&mut rng, y.coords(), radius, y.p())))
            }
            (Point::Function(g), ConvexSet::Cone { grid }) => Point::Function(StepFunction::from_parts(
                g.exponent(),
                sampling::in_weighted_ball(&mut rng, g.values(), grid.weights(), radius, g.exponent()),
            )),
            (Point::Function(_), _) => unreachable!("projection output matches the set kind"),
        };
        if !projection::membership(set, &target)? {
            continue;
        }
        let deficit = projection::preimage_distance(set, x, &target)? - rho;
        report.targets_tested += 1;
        report.max_deficit = report.max_deficit.max(deficit);
        if deficit > 1e-9 {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: f64, c: &[f64]) -> LpVector {
        LpVector::new(p, c.to_vec()).unwrap()
    }

    fn f(p: f64, c: &[f64]) -> StepFunction {
        StepFunction::new(p, c.to_vec()).unwrap()
    }

    fn ball(r: f64) -> Target {
        Target::Projection(ConvexSet::ball(r).unwrap())
    }

    #[test]
    fn theoretical_values() {
        let inner = Point::Vector(v(2.0, &[0.5, 0.0]));
        assert_eq!(theoretical_covering_constant(&ball(1.0), &inner).unwrap(), 1.0);
        let on = Point::Vector(v(2.0, &[1.0, 0.0]));
        assert_eq!(theoretical_covering_constant(&ball(1.0), &on).unwrap(), 0.0);
        let grid = MeasureGrid::uniform(2).unwrap();
        let cone = Target::Projection(ConvexSet::cone(grid));
        assert_eq!(theoretical_covering_constant(&cone, &Point::Function(f(2.0, &[3.0, -1.0]))).unwrap(), 0.0);
        let t = Target::scaled_identity(-0.7).unwrap();
        assert_eq!(theoretical_covering_constant(&t, &inner).unwrap(), 0.7);
        assert!(matches!(Target::scaled_identity(1.2), Err(Error::LambdaOutOfRange(_))));
    }

    #[test]
    fn ball_witness_examples() {
        let x = v(2.0, &[2.0, 0.0]);
        let w = witness_zero_ball(&x, 0.1, 1.0).unwrap();
        assert!((w.point.coords()[0] - 2.05).abs() < 1e-15 && w.point.coords()[1] == 0.0);
        assert!((w.dual.coords()[0] + 1.0).abs() < 1e-15 && w.dual.coords()[1] == 0.0);
        let z = coderivative::coderivative_ball(&w.point, 1.0, &w.dual).unwrap();
        assert!(z.singleton().unwrap().norm() <= 1e-15);
        assert!(w.certify(&ConvexSet::ball(1.0).unwrap(), &x, 0.1).unwrap());

        let origin = v(2.0, &[0.0, 0.0]);
        let w = witness_zero_ball(&origin, 2.0, 1.0).unwrap();
        let len = w.point.norm();
        assert!(len > 1.0 && len < 2.0);
        assert!(w.certify(&ConvexSet::ball(1.0).unwrap(), &origin, 2.0).unwrap());

        assert!(witness_zero_ball(&v(2.0, &[0.5, 0.0]), 0.3, 1.0).is_none());
        let w = witness_zero_ball(&v(3.0, &[0.5, 0.0]), 0.5, 1.0).unwrap();
        assert!(on_boundary(w.point.norm(), 1.0));
        assert!(w.certify(&ConvexSet::ball(1.0).unwrap(), &v(3.0, &[0.5, 0.0]), 0.5).unwrap());
    }

    #[test]
    fn cylinder_witness_examples() {
        let m = IndexMask::from_one_based(&[1, 2]).unwrap();
        let set = ConvexSet::cylinder(1.0, m.clone()).unwrap();
        let x = v(2.0, &[2.0, 0.0, 9.0]);
        let w = witness_zero_cylinder(&x, 0.1, 1.0, &m).unwrap().unwrap();
        assert_eq!(w.point.coords()[2], 9.0);
        assert!((w.point.coords()[0] - 2.05).abs() < 1e-15);
        assert_eq!(w.dual.coords()[2], 0.0);
        assert!(w.certify(&set, &x, 0.1).unwrap());

        assert!(witness_zero_cylinder(&v(2.0, &[0.5, 0.0, 3.0]), 0.3, 1.0, &m).unwrap().is_none());

        let x = v(2.0, &[0.0, 0.0, 4.0]);
        let w = witness_zero_cylinder(&x, 2.0, 1.0, &m).unwrap().unwrap();
        assert!((w.point.restrict(&m).unwrap().norm() - 1.5).abs() < 1e-15);
        assert!(w.certify(&set, &x, 2.0).unwrap());
    }

    #[test]
    fn cone_witness_examples() {
        let grid = MeasureGrid::uniform(2).unwrap();
        for base in [[1.0, 1.0], [-1.0, -1.0], [0.0, 0.0], [2.0, -3.0], [-1.0, 0.0]] {
            for eta in [1e-3, 0.5, 4.0] {
                let w = witness_zero_cone(&f(2.0, &base), eta, &grid).unwrap();
                assert!(w.certify(eta).unwrap(), "{base:?} {eta}: {w:?}");
            }
        }
        let w = witness_zero_cone(&f(2.0, &[2.0, -3.0]), 0.5, &grid).unwrap();
        assert_eq!(w.point, f(2.0, &[2.0, -3.0]));
        assert_eq!(w.dual.values(), &[0.0, 1.0]);

        let grid = MeasureGrid::new(vec![4.0, 1.0]).unwrap();
        let w = witness_zero_cone(&f(2.0, &[-1.0, 3.0]), 0.5, &grid).unwrap();
        assert_eq!(w.dual.values(), &[0.5, 0.0]);
    }

    #[test]
    fn estimator_examples() {
        let x = Point::Vector(v(2.0, &[0.5, 0.0]));
        let rep = estimate_covering_constant(&ball(1.0), &x, &[0.3], 200, 1).unwrap();
        assert!((rep.per_eta_inf[0] - 1.0).abs() <= 1e-12);
        assert!(rep.witnesses.is_empty());

        let x = Point::Vector(v(2.0, &[2.0, 0.0]));
        let rep = estimate_covering_constant(&ball(1.0), &x, &[1e-3, 0.1, 1.0], 50, 1).unwrap();
        assert_eq!(rep.per_eta_inf, vec![0.0; 3]);
        assert_eq!(rep.alpha_hat, 0.0);
        assert_eq!(rep.witnesses.len(), 3);

        let t = Target::scaled_identity(0.5).unwrap();
        let x = Point::Vector(v(3.0, &[0.1, -2.0]));
        let rep = estimate_covering_constant(&t, &x, &[0.01, 0.1, 1.0], 50, 1).unwrap();
        assert!((rep.alpha_hat - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn estimator_rejects_bad_input() {
        let x = Point::Vector(v(2.0, &[0.5, 0.0]));
        assert!(estimate_covering_constant(&ball(1.0), &x, &[0.3, 0.1], 10, 0).is_err());
        assert!(estimate_covering_constant(&ball(1.0), &x, &[0.3], 0, 0).is_err());
        let t = Target::ScaledIdentity(1.2);
        assert!(matches!(estimate_covering_constant(&t, &x, &[0.3], 5, 0), Err(Error::LambdaOutOfRange(_))));
    }

    #[test]
    fn default_grid_shape() {
        let x = Point::Vector(v(2.0, &[0.5, 0.0]));
        let g = default_eta_grid(&ball(1.0), &x).unwrap();
        assert_eq!(g.len(), 13);
        assert!((g[0] - 1e-3).abs() < 1e-18 && g[12] == 4.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn property_check_examples() {
        let set = ConvexSet::ball(1.0).unwrap();
        let x = Point::Vector(v(2.0, &[0.2, 0.1]));
        let rep = covering_property_check(&set, &x, 0.9, 0.05, 200, 3).unwrap();
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.targets_tested, 200);

        let x = Point::Vector(v(2.0, &[2.0, 0.0]));
        let rep = covering_property_check(&set, &x, 0.5, 0.1, 200, 3).unwrap();
        assert!(rep.violations > 0);
        assert!(rep.max_deficit > 0.5);
    }

    #[test]
    fn csv_has_two_columns() {
        let rep =
            CoveringReport { eta_grid: vec![0.1, 0.2], per_eta_inf: vec![1.0, 0.0], alpha_hat: 1.0, witnesses: vec![] };
        let csv = rep.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("eta,per_eta_inf\n1.0000000000000001e-1,1.0000000000000000e0\n"));
    }
}
