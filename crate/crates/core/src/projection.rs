//! Metric projections onto the ball `rB`, the cylinder `rC_M` and the
//! positive cone `K_p`, plus the geometry built on them: variational
//! checks, preimage distances and boundary direction classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{MeasureGrid, StepFunction};
use crate::lp::{IndexMask, LpVector};
use crate::sampling;

/// Relative width of the band treated as "on the boundary":
/// `|functional - r| <= BOUNDARY_TOL * (1 + r)`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Step sizes probed by [`classify_direction`].
pub const DEFAULT_T_SAMPLES: [f64; 3] = [1e-2, 1e-4, 1e-6];

pub fn on_boundary(value: f64, r: f64) -> bool {
    (value - r).abs() <= BOUNDARY_TOL * (1.0 + r)
}

/// The three closed convex targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawSet")]
pub enum ConvexSet {
    Ball { r: f64 },
    Cylinder { r: f64, mask: IndexMask },
    Cone { grid: MeasureGrid },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawSet {
    Ball { r: f64 },
    Cylinder { r: f64, mask: IndexMask },
    Cone { grid: MeasureGrid },
}

impl TryFrom<RawSet> for ConvexSet {
    type Error = Error;
    fn try_from(raw: RawSet) -> Result<Self> {
        match raw {
            RawSet::Ball { r } => ConvexSet::ball(r),
            RawSet::Cylinder { r, mask } => ConvexSet::cylinder(r, mask),
            RawSet::Cone { grid } => Ok(ConvexSet::Cone { grid }),
        }
    }
}

fn check_radius(r: f64) -> Result<f64> {
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Err(Error::invalid("r", format!("radius must be positive, got {r}")))
    }
}

impl ConvexSet {
    pub fn ball(r: f64) -> Result<Self> {
        Ok(ConvexSet::Ball { r: check_radius(r)? })
    }

    pub fn cylinder(r: f64, mask: IndexMask) -> Result<Self> {
        Ok(ConvexSet::Cylinder { r: check_radius(r)?, mask })
    }

    pub fn cone(grid: MeasureGrid) -> Self {
        ConvexSet::Cone { grid }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConvexSet::Ball { .. } => "ball",
            ConvexSet::Cylinder { .. } => "cylinder",
            ConvexSet::Cone { .. } => "cone",
        }
    }
}

/// An element of whichever space the set lives in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Vector(LpVector),
    Function(StepFunction),
}

impl Point {
    pub fn kind(&self) -> &'static str {
        match self {
            Point::Vector(_) => "vector",
            Point::Function(_) => "function",
        }
    }
}

/// `P_{rB}(x)`: `x` inside the ball, `(r/||x||) x` outside.
pub fn project_ball(x: &LpVector, r: f64) -> LpVector {
    let n = x.norm();
    if n <= r {
        x.clone()
    } else {
        let factor = inward_factor(x, n, r);
        LpVector::from_parts(x.p(), x.coords().iter().map(|&c| factor * c).collect())
    }
}

/// `r / n`, lowered by ulps until `factor * part` has norm at most `r`, so
/// the image lies in the set and projecting it again is the identity.
fn inward_factor(part: &LpVector, n: f64, r: f64) -> f64 {
    let mut factor = r / n;
    let p = part.p();
    while crate::kernel::norm(&part.coords().iter().map(|&c| factor * c).collect::<Vec<_>>(), None, p) > r {
        factor = factor.next_down();
    }
    factor
}

/// `P_{rC_M}(x)`: `x` if `||x_M|| <= r`, else `(r/||x_M||) x_M + x_Mbar`.
///
/// Coordinates are scaled in place so that the full mask reproduces
/// [`project_ball`] bit for bit.
pub fn project_cylinder(x: &LpVector, r: f64, mask: &IndexMask) -> Result<LpVector> {
    let part = x.restrict(mask)?;
    let n = part.norm();
    if n <= r {
        return Ok(x.clone());
    }
    let factor = inward_factor(&part, n, r);
    let coords = x.coords().iter().enumerate().map(|(i, &c)| if mask.contains(i) { factor * c } else { c }).collect();
    Ok(LpVector::from_parts(x.p(), coords))
}

/// `P_{K_p}(f) = f+`.
pub fn project_cone(f: &StepFunction) -> StepFunction {
    f.positive_part()
}

fn vector_of<'a>(set: &ConvexSet, point: &'a Point) -> Result<&'a LpVector> {
    match point {
        Point::Vector(x) => Ok(x),
        Point::Function(_) => Err(Error::KindMismatch { set: set.kind(), input: point.kind() }),
    }
}

fn function_of<'a>(set: &ConvexSet, point: &'a Point, grid: &MeasureGrid) -> Result<&'a StepFunction> {
    match point {
        Point::Function(f) => {
            crate::kernel::check_len(f.len(), grid.len())?;
            Ok(f)
        }
        Point::Vector(_) => Err(Error::KindMismatch { set: set.kind(), input: point.kind() }),
    }
}

/// Value of the functional whose level `r` is the boundary:
/// `||x||` for the ball, `||x_M||` for the cylinder.
pub fn boundary_functional(set: &ConvexSet, x: &LpVector) -> Result<f64> {
    match set {
        ConvexSet::Ball { .. } => Ok(x.norm()),
        ConvexSet::Cylinder { mask, .. } => Ok(x.restrict(mask)?.norm()),
        ConvexSet::Cone { .. } => Err(Error::KindMismatch { set: "cone", input: "vector" }),
    }
}

pub fn project(set: &ConvexSet, point: &Point) -> Result<Point> {
    match set {
        ConvexSet::Ball { r } => Ok(Point::Vector(project_ball(vector_of(set, point)?, *r))),
        ConvexSet::Cylinder { r, mask } => Ok(Point::Vector(project_cylinder(vector_of(set, point)?, *r, mask)?)),
        ConvexSet::Cone { grid } => Ok(Point::Function(project_cone(function_of(set, point, grid)?))),
    }
}

/// Exact membership test.
pub fn membership(set: &ConvexSet, point: &Point) -> Result<bool> {
    match set {
        ConvexSet::Ball { r } => Ok(vector_of(set, point)?.norm() <= *r),
        ConvexSet::Cylinder { r, mask } => Ok(vector_of(set, point)?.restrict(mask)?.norm() <= *r),
        ConvexSet::Cone { grid } => Ok(function_of(set, point, grid)?.in_cone()),
    }
}

/// Norm of `a - b` in the set's ambient space.
pub fn distance(set: &ConvexSet, a: &Point, b: &Point) -> Result<f64> {
    match set {
        ConvexSet::Cone { grid } => {
            let fa = function_of(set, a, grid)?;
            let fb = function_of(set, b, grid)?;
            fa.sub(fb)?.norm(grid)
        }
        _ => {
            let xa = vector_of(set, a)?;
            let xb = vector_of(set, b)?;
            crate::kernel::check_len(xa.len(), xb.len())?;
            Ok((xa - xb).norm())
        }
    }
}

/// Outcome of sampling `<J(x - u), u - z>` over `z` in the set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalReport {
    pub min_slack: f64,
    pub samples: usize,
}

fn sample_member(set: &ConvexSet, rng: &mut sampling::SampleRng, like: &Point) -> Point {
    match (set, like) {
        (ConvexSet::Ball { r }, Point::Vector(x)) => {
            let z = sampling::in_ball(rng, &vec![0.0; x.len()], *r, x.p());
            Point::Vector(LpVector::from_parts(x.p(), z))
        }
        (ConvexSet::Cylinder { r, mask }, Point::Vector(x)) => {
            let m = mask.members().len();
            let base = sampling::in_ball(rng, &vec![0.0; m], *r, x.p());
            let spread = 1.0 + x.coords().iter().fold(0.0_f64, |a, c| a.max(c.abs()));
            let free = sampling::gaussian(rng, x.len());
            let mut z: Vec<f64> = free.into_iter().map(|g| spread * g).collect();
            for (k, &i) in mask.members().iter().enumerate() {
                z[i] = base[k];
            }
            Point::Vector(LpVector::from_parts(x.p(), z))
        }
        (ConvexSet::Cone { .. }, Point::Function(f)) => {
            let spread = 1.0 + f.values().iter().fold(0.0_f64, |a, c| a.max(c.abs()));
            let z = sampling::gaussian(rng, f.len()).into_iter().map(|g| spread * g.abs()).collect();
            Point::Function(StepFunction::from_parts(f.exponent(), z))
        }
        _ => unreachable!("kind checked by caller"),
    }
}

/// Samples `sample_count` points `z` of the set and returns the smallest
/// `<J(x - P(x)), P(x) - z>`. A clearly negative value falsifies the
/// variational characterization of the projection.
pub fn variational_check(set: &ConvexSet, x: &Point, sample_count: usize, seed: u64) -> Result<VariationalReport> {
    let u = project(set, x)?;
    let mut rng = sampling::seeded(seed);
    let mut min_slack = f64::INFINITY;
    for _ in 0..sample_count {
        let z = sample_member(set, &mut rng, x);
        let slack = match (x, &u, &z, set) {
            (Point::Vector(x), Point::Vector(u), Point::Vector(z), _) => (x - u).duality_j().pairing(&(u - z))?,
            (Point::Function(x), Point::Function(u), Point::Function(z), ConvexSet::Cone { grid }) => {
                x.sub(u)?.duality_j(grid)?.pairing(&u.sub(z)?, grid)?
            }
            _ => unreachable!("kinds agree after project"),
        };
        min_slack = min_slack.min(slack);
    }
    if sample_count == 0 {
        min_slack = 0.0;
    }
    Ok(VariationalReport { min_slack, samples: sample_count })
}

/// Golden-section search for the minimum of a convex function on `[a, b]`.
fn minimize_convex(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + b.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    f(a).min(f(b)).min(fc).min(fd)
}

/// `min ||t y_M + y_Mbar - x||` over `t >= 1`: the distance from `x` to the
/// preimage ray of a boundary point `y`.
fn ray_distance(x: &LpVector, y_on: &LpVector, y_off: &LpVector, r: f64) -> f64 {
    let eval = |t: f64| (&(&y_on.scale(t) + y_off) - x).norm();
    let at_one = eval(1.0);
    // ||t y_M + y_Mbar - x|| >= t r - ||y_Mbar - x||, which exceeds the
    // value at t = 1 once t passes `upper`.
    let upper = 1.0 + (at_one + (y_off - x).norm()) / r;
    minimize_convex(eval, 1.0, upper).min(at_one)
}

/// Distance from `x` to the preimage `{u : P(u) = y}` of a target `y` in
/// the set. Ball and cylinder preimages of boundary points are rays
/// `{t y_M + y_Mbar : t >= 1}`; interior points are their own preimage.
/// For the cone the preimage is `y + g` with `g <= 0` supported where
/// `y = 0`, and the minimum is taken cell by cell.
pub fn preimage_distance(set: &ConvexSet, x: &Point, y: &Point) -> Result<f64> {
    if !membership(set, y)? {
        return Err(Error::Infeasible);
    }
    match set {
        ConvexSet::Ball { r } => {
            let (x, y) = (vector_of(set, x)?, vector_of(set, y)?);
            crate::kernel::check_len(x.len(), y.len())?;
            if on_boundary(y.norm(), *r) {
                Ok(ray_distance(x, y, &LpVector::from_parts(y.p(), vec![0.0; y.len()]), *r))
            } else {
                Ok((y - x).norm())
            }
        }
        ConvexSet::Cylinder { r, mask } => {
            let (x, y) = (vector_of(set, x)?, vector_of(set, y)?);
            crate::kernel::check_len(x.len(), y.len())?;
            let (y_on, y_off) = y.mask_decompose(mask)?;
            if on_boundary(y_on.norm(), *r) {
                Ok(ray_distance(x, &y_on, &y_off, *r))
            } else {
                Ok((y - x).norm())
            }
        }
        ConvexSet::Cone { grid } => {
            let (x, y) = (function_of(set, x, grid)?, function_of(set, y, grid)?);
            let gap: Vec<f64> = x
                .values()
                .iter()
                .zip(y.values())
                .map(|(&xi, &yi)| if yi > 0.0 { yi - xi } else { xi.max(0.0) })
                .collect();
            StepFunction::from_parts(x.exponent(), gap).norm(grid)
        }
    }
}

/// Heuristic membership of `v` in the outward (`Up`) or inward (`Down`)
/// directional set at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
    Indeterminate,
}

/// Probes the boundary functional at `x + t v` for each `t` in
/// `t_samples`: `Up` if every probe is strictly above `r`, `Down` if every
/// probe is at most `r`. Never a proof.
pub fn classify_direction(set: &ConvexSet, x: &LpVector, v: &LpVector, t_samples: &[f64]) -> Result<Direction> {
    let r = match set {
        ConvexSet::Ball { r } | ConvexSet::Cylinder { r, .. } => *r,
        ConvexSet::Cone { .. } => return Err(Error::KindMismatch { set: "cone", input: "vector" }),
    };
    crate::kernel::check_len(x.len(), v.len())?;
    if v.is_zero() {
        return Err(Error::invalid("v", "direction must be nonzero"));
    }
    if t_samples.is_empty() || t_samples.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::invalid("t_samples", "need at least one positive step"));
    }
    let value = boundary_functional(set, x)?;
    if !on_boundary(value, r) {
        return Err(Error::NotOnBoundary { value, radius: r });
    }
    let mut above = 0;
    for &t in t_samples {
        if boundary_functional(set, &(x + &v.scale(t)))? > r {
            above += 1;
        }
    }
    Ok(match above {
        a if a == t_samples.len() => Direction::Up,
        0 => Direction::Down,
        _ => Direction::Indeterminate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(p: f64, c: &[f64]) -> LpVector {
        LpVector::new(p, c.to_vec()).unwrap()
    }

    fn f(p: f64, c: &[f64]) -> StepFunction {
        StepFunction::new(p, c.to_vec()).unwrap()
    }

    fn mask(ix: &[usize]) -> IndexMask {
        IndexMask::from_one_based(ix).unwrap()
    }

    #[test]
    fn ball_examples() {
        let y = project_ball(&v(2.0, &[3.0, 4.0]), 1.0);
        assert_relative_eq!(y.coords()[0], 0.6, max_relative = 1e-15);
        assert_relative_eq!(y.coords()[1], 0.8, max_relative = 1e-15);
        let inside = v(3.0, &[0.2, -0.3]);
        assert_eq!(project_ball(&inside, 1.0), inside);
        let y = project_ball(&v(3.0, &[2.0, 2.0]), 1.0);
        // norm oracle: ||(2,2)||_3 = 2 * 2^(1/3)
        let expect = 2.0 / (2.0 * 2f64.powf(1.0 / 3.0));
        assert_relative_eq!(y.coords()[0], expect, max_relative = 1e-14);
        assert_relative_eq!(y.coords()[1], 0.793701, epsilon = 1e-6);
    }

    #[test]
    fn cylinder_examples() {
        let y = project_cylinder(&v(2.0, &[3.0, 4.0, 7.0]), 1.0, &mask(&[1, 2])).unwrap();
        assert_relative_eq!(y.coords()[0], 0.6, max_relative = 1e-15);
        assert_relative_eq!(y.coords()[1], 0.8, max_relative = 1e-15);
        assert_eq!(y.coords()[2], 7.0);
        let x = v(2.0, &[0.1, 0.2, 70.0]);
        assert_eq!(project_cylinder(&x, 1.0, &mask(&[1, 2])).unwrap(), x);
        let x = v(3.0, &[2.0, -1.0, 0.5]);
        assert_eq!(project_cylinder(&x, 1.0, &IndexMask::full(3).unwrap()).unwrap(), project_ball(&x, 1.0));
    }

    #[test]
    fn cone_examples() {
        assert_eq!(project_cone(&f(2.0, &[2.0, -3.0, 0.0])).values(), &[2.0, 0.0, 0.0]);
        assert!(project_cone(&f(2.0, &[-2.0, -3.0, 0.0])).is_zero());
        let g = f(3.0, &[1.5, -0.5, 2.0]);
        assert_eq!(project_cone(&g.scale(2.5)), project_cone(&g).scale(2.5));
    }

    #[test]
    fn membership_examples() {
        let ball = ConvexSet::ball(1.0).unwrap();
        assert!(membership(&ball, &Point::Vector(v(2.0, &[0.6, 0.8]))).unwrap());
        let cyl = ConvexSet::cylinder(1.0, mask(&[1])).unwrap();
        assert!(membership(&cyl, &Point::Vector(v(2.0, &[0.5, 100.0]))).unwrap());
        let cone = ConvexSet::cone(MeasureGrid::uniform(2).unwrap());
        assert!(!membership(&cone, &Point::Function(f(2.0, &[0.0, -1e-12]))).unwrap());
        assert!(matches!(membership(&cone, &Point::Vector(v(2.0, &[1.0, 1.0]))), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn variational_examples() {
        let ball = ConvexSet::ball(1.0).unwrap();
        let rep = variational_check(&ball, &Point::Vector(v(2.0, &[0.3, 0.1])), 50, 1).unwrap();
        assert_eq!(rep.min_slack, 0.0);
        // hand evaluation: J(x - u) = (1, 0), u - z = (2, 0) at z = (-1, 0)
        let x = v(2.0, &[2.0, 0.0]);
        let u = project_ball(&x, 1.0);
        let z = v(2.0, &[-1.0, 0.0]);
        assert_eq!((&x - &u).duality_j().pairing(&(&u - &z)).unwrap(), 2.0);
        // cone sign bookkeeping: x - u = (0, -1), u - z = (1, -5)
        let grid = MeasureGrid::uniform(2).unwrap();
        let fx = f(2.0, &[1.0, -1.0]);
        let fu = project_cone(&fx);
        let fz = f(2.0, &[0.0, 5.0]);
        let slack = fx.sub(&fu).unwrap().duality_j(&grid).unwrap().pairing(&fu.sub(&fz).unwrap(), &grid).unwrap();
        assert_eq!(slack, 5.0);
        let cone = ConvexSet::cone(grid);
        assert!(variational_check(&cone, &Point::Function(fx), 100, 4).unwrap().min_slack >= 0.0);
    }

    #[test]
    fn preimage_examples() {
        let ball = ConvexSet::ball(1.0).unwrap();
        let x = Point::Vector(v(2.0, &[2.0, 0.0]));
        let y = Point::Vector(v(2.0, &[1.0, 0.0]));
        assert_relative_eq!(preimage_distance(&ball, &x, &y).unwrap(), 0.0, epsilon = 1e-12);
        let x = Point::Vector(v(2.0, &[0.0, 0.0]));
        // y on the sphere: ray {t(1,0)}, nearest at t = 1, distance 1
        assert_relative_eq!(preimage_distance(&ball, &x, &y).unwrap(), 1.0, epsilon = 1e-12);
        let cone = ConvexSet::cone(MeasureGrid::uniform(2).unwrap());
        let fx = Point::Function(f(2.0, &[-2.0, 3.0]));
        let fy = Point::Function(f(2.0, &[0.0, 3.0]));
        assert_eq!(preimage_distance(&cone, &fx, &fy).unwrap(), 0.0);
        let outside = Point::Vector(v(2.0, &[2.0, 0.0]));
        assert!(matches!(preimage_distance(&ball, &x, &outside), Err(Error::Infeasible)));
    }

    #[test]
    fn ray_distance_one_dimensional_oracle() {
        // y = (1,0) on the unit sphere, x = (3, 1): min over t >= 1 of
        // ||(t - 3, -1)||_2 is 1 at t = 3.
        let ball = ConvexSet::ball(1.0).unwrap();
        let d =
            preimage_distance(&ball, &Point::Vector(v(2.0, &[3.0, 1.0])), &Point::Vector(v(2.0, &[1.0, 0.0]))).unwrap();
        assert_relative_eq!(d, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn direction_examples() {
        let ball = ConvexSet::ball(1.0).unwrap();
        let x = v(2.0, &[1.0, 0.0]);
        let t = DEFAULT_T_SAMPLES;
        assert_eq!(classify_direction(&ball, &x, &v(2.0, &[1.0, 0.0]), &t).unwrap(), Direction::Up);
        assert_eq!(classify_direction(&ball, &x, &v(2.0, &[-1.0, 0.0]), &t).unwrap(), Direction::Down);
        assert_eq!(classify_direction(&ball, &x, &v(2.0, &[0.0, 1.0]), &t).unwrap(), Direction::Up);
        assert!(matches!(
            classify_direction(&ball, &v(2.0, &[0.5, 0.0]), &v(2.0, &[0.0, 1.0]), &t),
            Err(Error::NotOnBoundary { .. })
        ));
        assert!(classify_direction(&ball, &x, &v(2.0, &[0.0, 0.0]), &t).is_err());
    }

    #[test]
    fn set_serde() {
        let s = serde_json::to_string(&ConvexSet::cylinder(2.0, mask(&[1, 3])).unwrap()).unwrap();
        assert_eq!(s, r#"{"kind":"cylinder","r":2.0,"mask":[1,3]}"#);
        let b: ConvexSet = serde_json::from_str(r#"{"kind":"ball","r":1.5}"#).unwrap();
        assert_eq!(b, ConvexSet::Ball { r: 1.5 });
        assert!(serde_json::from_str::<ConvexSet>(r#"{"kind":"ball","r":-1}"#).is_err());
    }
}
