//! Stochastic fixed points `sigma(s) in G(sigma(s), s)` in `R^n` with the
//! Euclidean norm.
//!
//! Single-valued maps are solved by the scaled Picard iteration
//! `x <- g(x, s) / lambda`, which contracts with ratio `l / lambda` when
//! `g(., s)` has modulus `l < lambda`. Vertical-segment maps are solved by
//! nearest-point selection. Non-unique branches are checked by
//! substitution, never by iteration.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling;

pub type Evaluator = Arc<dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync>;

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Closed region of `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl Region {
    pub fn interval(lower: f64, upper: f64) -> Self {
        Region::Box { lower: vec![lower], upper: vec![upper] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Box { lower, .. } => lower.len(),
            Region::Ball { center, .. } => center.len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            Region::Box { lower, upper } => x.iter().zip(lower.iter().zip(upper)).all(|(v, (a, b))| a <= v && v <= b),
            Region::Ball { center, radius } => dist(x, center) <= *radius,
        }
    }

    fn sample(&self, rng: &mut sampling::SampleRng) -> Vec<f64> {
        match self {
            Region::Box { lower, upper } => lower.iter().zip(upper).map(|(a, b)| rng.random_range(*a..*b)).collect(),
            Region::Ball { center, radius } => sampling::in_ball(rng, center, *radius, 2.0),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match self {
            Region::Box { lower, upper } => {
                !lower.is_empty()
                    && lower.len() == upper.len()
                    && lower.iter().zip(upper).all(|(a, b)| a.is_finite() && b.is_finite() && a < b)
            }
            Region::Ball { center, radius } => {
                !center.is_empty() && center.iter().all(|c| c.is_finite()) && radius.is_finite() && *radius > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("region", "need a nonempty finite box or ball"))
        }
    }
}

/// Event interval; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::invalid("interval", format!("[{lower}, {upper}] is empty")));
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lower <= s && s <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventMeasure {
    /// Lebesgue measure on `[0, 1]`.
    UniformUnit,
    StandardNormal,
}

/// `mu(W)`. The normal CDF is `erfc(-x / sqrt 2) / 2`.
pub fn event_probability(w: Interval, measure: EventMeasure) -> f64 {
    match measure {
        EventMeasure::UniformUnit => (w.upper.min(1.0) - w.lower.max(0.0)).max(0.0),
        EventMeasure::StandardNormal => {
            let cdf = |x: f64| 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2);
            (cdf(w.upper) - cdf(w.lower)).clamp(0.0, 1.0)
        }
    }
}

/// `sigma(s) = g(sigma(s), s)` near `(base_point, s)`. `domain` is the
/// neighbourhood `U` on which `g(., s)` has modulus `modulus`;
/// `iteration_region` bounds the Picard iterates and defaults to `domain`.
#[derive(Clone)]
pub struct SingleValuedProblem {
    g: Evaluator,
    pub domain: Region,
    pub iteration_region: Region,
    pub event: Interval,
    pub base_point: Vec<f64>,
    pub modulus: f64,
}

impl fmt::Debug for SingleValuedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SingleValuedProblem")
            .field("domain", &self.domain)
            .field("iteration_region", &self.iteration_region)
            .field("event", &self.event)
            .field("base_point", &self.base_point)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

impl SingleValuedProblem {
    pub fn new(g: Evaluator, domain: Region, event: Interval, base_point: Vec<f64>, modulus: f64) -> Result<Self> {
        domain.check()?;
        if base_point.len() != domain.dim() {
            return Err(Error::DimensionMismatch { left: base_point.len(), right: domain.dim() });
        }
        if !(modulus > 0.0 && modulus < 1.0) {
            return Err(Error::invalid("modulus", format!("{modulus} is not in (0, 1)")));
        }
        Ok(Self { g, iteration_region: domain.clone(), domain, event, base_point, modulus })
    }

    pub fn with_iteration_region(mut self, region: Region) -> Result<Self> {
        region.check()?;
        if region.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch { left: region.dim(), right: self.domain.dim() });
        }
        self.iteration_region = region;
        Ok(self)
    }

    pub fn eval(&self, x: &[f64], s: f64) -> Vec<f64> {
        (self.g)(x, s)
    }

    /// `||lambda x - g(x, s)||`.
    pub fn residual(&self, x: &[f64], s: f64, lambda: f64) -> f64 {
        let gx = self.eval(x, s);
        euclid(&x.iter().zip(&gx).map(|(a, b)| lambda * a - b).collect::<Vec<_>>())
    }

    fn check_lambda(&self, lambda: f64) -> Result<()> {
        if lambda > self.modulus && lambda <= 1.0 {
            Ok(())
        } else {
            Err(Error::BadLambda { lambda, modulus: self.modulus })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixpointRecord {
    pub s: f64,
    pub sigma: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    /// Last ratio of successive steps above rounding level.
    pub observed_ratio: Option<f64>,
    pub bound_rhs: Option<f64>,
    pub bound_ok: Option<bool>,
}

impl FixpointRecord {
    fn new(s: f64, sigma: Vec<f64>, iterations: usize, residual: f64) -> Self {
        Self { s, sigma, iterations, residual, observed_ratio: None, bound_rhs: None, bound_ok: None }
    }

    fn with_bound(mut self, base: &[f64], rhs: f64) -> Self {
        self.bound_ok = Some(dist(&self.sigma, base) <= rhs + 1e-9);
        self.bound_rhs = Some(rhs);
        self
    }
}

/// CSV with columns `s, sigma_1.., iterations, residual, bound_rhs,
/// bound_ok`; unset bound fields are left empty.
pub fn records_to_csv(records: &[FixpointRecord]) -> String {
    let dim = records.first().map_or(1, |r| r.sigma.len());
    let mut out = String::from("s");
    for i in 1..=dim {
        out.push_str(&format!(",sigma_{i}"));
    }
    out.push_str(",iterations,residual,bound_rhs,bound_ok\n");
    for r in records {
        out.push_str(&format!("{:.16e}", r.s));
        for v in &r.sigma {
            out.push_str(&format!(",{v:.16e}"));
        }
        out.push_str(&format!(",{},{:.16e},", r.iterations, r.residual));
        if let Some(rhs) = r.bound_rhs {
            out.push_str(&format!("{rhs:.16e}"));
        }
        out.push(',');
        if let Some(ok) = r.bound_ok {
            out.push_str(if ok { "true" } else { "false" });
        }
        out.push('\n');
    }
    out
}

/// Steps below this size are dominated by rounding and do not enter the
/// observed ratio.
const RATIO_FLOOR: f64 = 1e-7;

/// Iterates `x <- g(x, s) / lambda` from `x0` until a step is at most
/// `tol`. On success `||lambda sigma - g(sigma, s)|| <= (1 + lambda) tol`.
pub fn picard_solve(
    problem: &SingleValuedProblem,
    s: f64,
    lambda: f64,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<FixpointRecord> {
    problem.check_lambda(lambda)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    if !problem.iteration_region.contains(x0) {
        return Err(Error::LeftDomain { iteration: 0, point: x0.to_vec() });
    }
    let mut x = x0.to_vec();
    let mut prev_step = f64::NAN;
    let mut ratio = None;
    for k in 1..=max_iter {
        let next: Vec<f64> = problem.eval(&x, s).into_iter().map(|v| v / lambda).collect();
        if !problem.iteration_region.contains(&next) {
            return Err(Error::LeftDomain { iteration: k, point: next });
        }
        let step = dist(&next, &x);
        if prev_step > RATIO_FLOOR && step > 0.0 {
            ratio = Some(step / prev_step);
        }
        prev_step = step;
        x = next;
        if step <= tol {
            let residual = problem.residual(&x, s, lambda);
            if residual > (1.0 + lambda) * tol {
                return Err(Error::NoConvergence { iterations: k, last_step: step });
            }
            let mut record = FixpointRecord::new(s, x, k, residual);
            record.observed_ratio = ratio;
            return Ok(record);
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, last_step: prev_step })
}

/// Record for a closed-form candidate: its substitution residual
/// `||lambda sigma - g(sigma, s)||`, zero iterations.
pub fn substitution_record(problem: &SingleValuedProblem, s: f64, lambda: f64, sigma: Vec<f64>) -> FixpointRecord {
    let residual = problem.residual(&sigma, s, lambda);
    FixpointRecord::new(s, sigma, 0, residual)
}

/// Largest sampled `||g(x,s) - g(u,s)|| / ||x - u||` over `x, u` in the
/// domain and `s` in the event interval; a lower bound on the modulus.
pub fn estimate_lipschitz(problem: &SingleValuedProblem, pair_samples: usize, seed: u64) -> Result<f64> {
    if pair_samples == 0 {
        return Err(Error::invalid("pair_samples", "must be at least 1"));
    }
    let ev = problem.event;
    if !(ev.lower.is_finite() && ev.upper.is_finite()) {
        return Err(Error::invalid("event", "sampling needs a bounded event interval"));
    }
    let mut rng = sampling::seeded(seed);
    let mut best = 0.0_f64;
    for _ in 0..pair_samples {
        let x = problem.domain.sample(&mut rng);
        let u = problem.domain.sample(&mut rng);
        let s = if ev.lower < ev.upper { rng.random_range(ev.lower..=ev.upper) } else { ev.lower };
        let d = dist(&x, &u);
        if d > 0.0 {
            best = best.max(dist(&problem.eval(&x, s), &problem.eval(&u, s)) / d);
        }
    }
    Ok(best)
}

fn check_alpha(alpha: f64, modulus: f64, lambda: f64) -> Result<()> {
    if alpha > modulus && alpha < lambda && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { alpha, modulus, lambda })
    }
}

/// Fills `bound_rhs = ||lambda xbar - g(xbar, s)|| / (alpha - l)` and
/// `bound_ok = ||sigma - xbar|| <= bound_rhs + 1e-9`.
pub fn residual_bound_check(
    record: &FixpointRecord,
    problem: &SingleValuedProblem,
    s: f64,
    lambda: f64,
    alpha: f64,
) -> Result<FixpointRecord> {
    check_alpha(alpha, problem.modulus, lambda)?;
    let rhs = problem.residual(&problem.base_point, s, lambda) / (alpha - problem.modulus);
    Ok(record.clone().with_bound(&problem.base_point, rhs))
}

/// `{(x, y) : lo <= y <= hi}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerticalSegment {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

impl VerticalSegment {
    pub fn new(x: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(x.is_finite() && lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::invalid("segment", format!("({x}, [{lo}, {hi}]) is not a vertical segment")));
        }
        Ok(Self { x, lo, hi })
    }

    pub fn shifted(&self, by: [f64; 2]) -> Self {
        Self { x: self.x + by[0], lo: self.lo + by[1], hi: self.hi + by[1] }
    }

    pub fn nearest(&self, p: [f64; 2]) -> [f64; 2] {
        [self.x, p[1].clamp(self.lo, self.hi)]
    }

    pub fn distance(&self, p: [f64; 2]) -> f64 {
        let q = self.nearest(p);
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    pub fn endpoints(&self) -> [[f64; 2]; 2] {
        [[self.x, self.lo], [self.x, self.hi]]
    }
}

/// `sup_{a in seg_a} dist(a, seg_b)`; attained at an endpoint of `seg_a`
/// because the distance to a convex set is convex.
pub fn hausdorff_excess(seg_a: &VerticalSegment, seg_b: &VerticalSegment) -> f64 {
    seg_a.endpoints().iter().map(|&e| seg_b.distance(e)).fold(0.0, f64::max)
}

pub type SegmentBase = Arc<dyn Fn([f64; 2]) -> VerticalSegment + Send + Sync>;
pub type Shift = Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>;

/// `G(x, s) = H(x) + w(s)` with `H(x)` a vertical segment.
#[derive(Clone)]
pub struct SegmentMapProblem {
    base: SegmentBase,
    shift: Shift,
    pub base_point: [f64; 2],
    pub modulus: f64,
}

impl fmt::Debug for SegmentMapProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SegmentMapProblem")
            .field("base_point", &self.base_point)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

impl SegmentMapProblem {
    pub fn new(base: SegmentBase, shift: Shift, base_point: [f64; 2], modulus: f64) -> Result<Self> {
        if !(modulus > 0.0 && modulus < 1.0) {
            return Err(Error::invalid("modulus", format!("{modulus} is not in (0, 1)")));
        }
        Ok(Self { base, shift, base_point, modulus })
    }

    pub fn segment(&self, x: [f64; 2], s: f64) -> VerticalSegment {
        (self.base)(x).shifted((self.shift)(s))
    }
}

pub fn segment_contains(problem: &SegmentMapProblem, x: [f64; 2], s: f64, tol: f64) -> bool {
    let seg = problem.segment(x, s);
    (x[0] - seg.x).abs() <= tol && x[1] >= seg.lo - tol && x[1] <= seg.hi + tol
}

/// Iterates `x <- nearest point of G(x, s) to x` until a step is at most
/// `tol`; the residual is `dist(sigma, G(sigma, s))`.
pub fn segment_selection_solve(
    problem: &SegmentMapProblem,
    s: f64,
    x0: [f64; 2],
    tol: f64,
    max_iter: usize,
) -> Result<FixpointRecord> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let mut x = x0;
    let mut prev_step = f64::NAN;
    let mut ratio = None;
    for k in 1..=max_iter {
        let next = problem.segment(x, s).nearest(x);
        let step = dist(&next, &x);
        if prev_step > RATIO_FLOOR && step > 0.0 {
            ratio = Some(step / prev_step);
        }
        prev_step = step;
        x = next;
        if step <= tol {
            let residual = problem.segment(x, s).distance(x);
            if !segment_contains(problem, x, s, 10.0 * tol) {
                return Err(Error::NoConvergence { iterations: k, last_step: step });
            }
            let mut record = FixpointRecord::new(s, x.to_vec(), k, residual);
            record.observed_ratio = ratio;
            return Ok(record);
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, last_step: prev_step })
}

/// Record for a closed-form candidate of a segment map.
pub fn segment_substitution_record(problem: &SegmentMapProblem, s: f64, sigma: [f64; 2]) -> FixpointRecord {
    let residual = problem.segment(sigma, s).distance(sigma);
    FixpointRecord::new(s, sigma.to_vec(), 0, residual)
}

/// Fills `bound_rhs = dist(lambda xbar, G(xbar, s)) / (alpha - l)`, the
/// segment distance being exact.
pub fn segment_bound_check(
    record: &FixpointRecord,
    problem: &SegmentMapProblem,
    s: f64,
    lambda: f64,
    alpha: f64,
) -> Result<FixpointRecord> {
    check_alpha(alpha, problem.modulus, lambda)?;
    let xb = problem.base_point;
    let rhs = problem.segment(xb, s).distance([lambda * xb[0], lambda * xb[1]]) / (alpha - problem.modulus);
    Ok(record.clone().with_bound(&xb, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExcessReport {
    pub pairs: usize,
    /// Largest `excess / ||x - u||`.
    pub max_ratio: f64,
    /// Largest `excess - l ||x - u||`.
    pub max_violation: f64,
}

/// Samples `x, u` in `[-half_width, half_width]^2` and `s` in
/// `[-s_max, s_max]` and compares `excess(G(x,s), G(u,s))` with
/// `l ||x - u||`.
pub fn segment_excess_check(
    problem: &SegmentMapProblem,
    pairs: usize,
    half_width: f64,
    s_max: f64,
    seed: u64,
) -> Result<ExcessReport> {
    if pairs == 0 || !(half_width > 0.0) || !(s_max >= 0.0) {
        return Err(Error::invalid("pairs", "need pairs >= 1, a positive width and s_max >= 0"));
    }
    let mut rng = sampling::seeded(seed);
    let mut report = ExcessReport { pairs, max_ratio: 0.0, max_violation: f64::NEG_INFINITY };
    for _ in 0..pairs {
        let mut draw = || [rng.random_range(-half_width..half_width), rng.random_range(-half_width..half_width)];
        let (x, u) = (draw(), draw());
        let s = rng.random_range(-s_max..=s_max);
        let excess = hausdorff_excess(&problem.segment(x, s), &problem.segment(u, s));
        let d = dist(&x, &u);
        if d > 0.0 {
            report.max_ratio = report.max_ratio.max(excess / d);
        }
        report.max_violation = report.max_violation.max(excess - problem.modulus * d);
    }
    Ok(report)
}

/// A closed-form solution branch on `[lower, upper]` (open at `lower` when
/// `lower_open`).
#[derive(Clone, Copy)]
pub struct Branch {
    pub name: &'static str,
    pub lower: f64,
    pub lower_open: bool,
    pub upper: f64,
    pub eval: fn(f64) -> f64,
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Branch")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("lower_open", &self.lower_open)
            .field("upper", &self.upper)
            .finish_non_exhaustive()
    }
}

impl Branch {
    pub fn covers(&self, s: f64) -> bool {
        (if self.lower_open { s > self.lower } else { s >= self.lower }) && s <= self.upper
    }
}

#[derive(Debug, Clone)]
pub struct ScalarExample {
    pub id: &'static str,
    pub problem: SingleValuedProblem,
    pub measure: EventMeasure,
    pub branches: Vec<Branch>,
}

impl ScalarExample {
    pub fn branch(&self, name: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct SegmentExample {
    pub id: &'static str,
    pub problem: SegmentMapProblem,
    pub measure: EventMeasure,
    /// Admissible labels `lambda` of the family `sigma_(lambda)`.
    pub family: (f64, f64),
}

impl SegmentExample {
    /// `sigma_(lambda)(s) = (4/3 s^2, lambda |s|)`.
    pub fn sigma(&self, lambda: f64, s: f64) -> [f64; 2] {
        [4.0 / 3.0 * s * s, lambda * s.abs()]
    }

    /// `dist((0,0), G((0,0), s)) = |s| sqrt(s^2 + 1)`.
    pub fn base_distance(&self, s: f64) -> f64 {
        s.abs() * (s * s + 1.0).sqrt()
    }
}

#[derive(Debug, Clone)]
pub enum BuiltinExample {
    Scalar(ScalarExample),
    Segment(SegmentExample),
}

/// Largest `gamma` for which the upper branch of the quadratic example
/// satisfies the distance bound on `[t, 1]`:
/// `1/2 + t / (2 (1 + sqrt(1 - t)))`.
pub fn gamma_threshold(t: f64) -> f64 {
    0.5 + t / (2.0 * (1.0 + (1.0 - t).sqrt()))
}

/// Upper branch `2 (1 + sqrt(1 - s))` against `|0 - g(0, s)| / (gamma - 1/2)`
/// on `[t, 1]`, sampled at `points` evenly spaced `s`. Returns the largest
/// `lhs / rhs`; the inequality holds when it is at most 1.
pub fn upper_branch_ratio(t: f64, gamma: f64, points: usize) -> f64 {
    let l = 0.5;
    (0..points.max(2))
        .map(|k| {
            let s = t + (1.0 - t) * k as f64 / (points.max(2) - 1) as f64;
            let lhs = 2.0 * (1.0 + (1.0 - s).sqrt());
            let rhs = s / (gamma - l);
            lhs / rhs
        })
        .fold(0.0, f64::max)
}

pub fn builtin_example(id: &str) -> Result<BuiltinExample> {
    let unit = Interval { lower: 0.0, upper: 1.0 };
    match id {
        "6.7" => {
            let g: Evaluator = Arc::new(|x, s| vec![0.25 * x[0] * x[0] + s]);
            let problem = SingleValuedProblem::new(g, Region::interval(-1.0, 1.0), unit, vec![0.0], 0.5)?
                .with_iteration_region(Region::interval(-2.0, 2.0))?;
            Ok(BuiltinExample::Scalar(ScalarExample {
                id: "6.7",
                problem,
                measure: EventMeasure::UniformUnit,
                branches: vec![
                    Branch {
                        name: "sigma",
                        lower: 0.0,
                        lower_open: false,
                        upper: 1.0,
                        eval: |s| 2.0 * (1.0 - (1.0 - s).sqrt()),
                    },
                    Branch {
                        name: "zeta",
                        lower: 0.0,
                        lower_open: false,
                        upper: 1.0,
                        eval: |s| 2.0 * (1.0 + (1.0 - s).sqrt()),
                    },
                ],
            }))
        }
        "6.8" => {
            let g: Evaluator = Arc::new(|x, s| vec![0.25 * x[0] * x[0] * s]);
            let problem = SingleValuedProblem::new(g, Region::interval(-1.0, 1.0), unit, vec![0.0], 0.5)?;
            Ok(BuiltinExample::Scalar(ScalarExample {
                id: "6.8",
                problem,
                measure: EventMeasure::UniformUnit,
                branches: vec![
                    Branch { name: "sigma", lower: 0.0, lower_open: false, upper: 1.0, eval: |_| 0.0 },
                    Branch { name: "zeta", lower: 0.0, lower_open: true, upper: 1.0, eval: |s| 4.0 / s },
                ],
            }))
        }
        "6.9" => {
            let base: SegmentBase = Arc::new(|x: [f64; 2]| VerticalSegment {
                x: 0.25 * x[0],
                lo: 0.0,
                hi: 0.25 * (1.0 + x[1] * x[1]).sqrt(),
            });
            let shift: Shift = Arc::new(|s: f64| [s * s, s.abs()]);
            Ok(BuiltinExample::Segment(SegmentExample {
                id: "6.9",
                problem: SegmentMapProblem::new(base, shift, [0.0, 0.0], 0.5)?,
                measure: EventMeasure::StandardNormal,
                family: (1.0, 4.0 / 3.0),
            }))
        }
        other => Err(Error::UnknownExample(other.to_string())),
    }
}
