//! Seeded verification suites. Each check reports a measured value and
//! passes iff `measured <= threshold`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coderivative::{self, CoderivativeValue, VectorMap};
use crate::covering::{self, CoveringReport, Target, WitnessRecord};
use crate::error::{Error, Result};
use crate::fixpoint::{self, BuiltinExample, ScalarExample, SegmentExample};
use crate::function::{MeasureGrid, StepFunction};
use crate::lp::{DualVector, IndexMask, LpVector};
use crate::projection::{self, ConvexSet, Point};
use crate::sampling::{self, SampleRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Duality,
    Projection,
    Coderivative,
    Covering,
    Fixpoint,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Duality, Suite::Projection, Suite::Coderivative, Suite::Covering, Suite::Fixpoint];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Projection => "projection",
            Suite::Coderivative => "coderivative",
            Suite::Covering => "covering",
            Suite::Fixpoint => "fixpoint",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::invalid("suite", format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub id: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

struct Checks {
    suite: Suite,
    out: Vec<CheckResult>,
}

impl Checks {
    fn new(suite: Suite) -> Self {
        Self { suite, out: Vec::new() }
    }

    fn push(&mut self, id: impl Into<String>, measured: f64, threshold: f64) {
        self.out.push(CheckResult {
            suite: self.suite,
            id: id.into(),
            passed: measured <= threshold,
            measured,
            threshold,
        });
    }

    fn flag(&mut self, id: impl Into<String>, ok: bool) {
        self.push(id, if ok { 0.0 } else { 1.0 }, 0.0);
    }
}

/// Runs one suite; results are sorted by check id.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckResult>> {
    let mut checks = Checks::new(suite);
    match suite {
        Suite::Duality => duality(&mut checks, seed)?,
        Suite::Projection => projections(&mut checks, seed)?,
        Suite::Coderivative => coderivatives(&mut checks, seed)?,
        Suite::Covering => coverings(&mut checks, seed)?,
        Suite::Fixpoint => fixpoints(&mut checks, seed)?,
    }
    checks.out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(checks.out)
}

/// Runs every suite in canonical order.
pub fn run_all(seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        out.extend(run_suite(suite, seed)?);
    }
    Ok(out)
}

const EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];

fn tag(p: f64) -> String {
    format!("p{p}")
}

/// Nonzero Gaussian coordinates with a random magnitude in `[0.1, 10]`.
fn random_coords(rng: &mut SampleRng, n: usize) -> Vec<f64> {
    loop {
        let scale = 10f64.powf(rng.random_range(-1.0..1.0));
        let v: Vec<f64> = sampling::gaussian(rng, n).into_iter().map(|g| scale * g).collect();
        if v.iter().any(|x| *x != 0.0) {
            return v;
        }
    }
}

fn random_vector(rng: &mut SampleRng, p: f64) -> LpVector {
    let n = rng.random_range(2..=6);
    LpVector::new(p, random_coords(rng, n)).expect("finite coordinates")
}

fn random_grid(rng: &mut SampleRng, n: usize) -> MeasureGrid {
    MeasureGrid::new((0..n).map(|_| rng.random_range(0.1..2.0)).collect()).expect("positive weights")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

fn duality(c: &mut Checks, seed: u64) -> Result<()> {
    for (k, &p) in EXPONENTS.iter().enumerate() {
        let mut rng = sampling::substream(seed, k as u64);
        let (mut identity, mut subgradient, mut involution, mut holder) =
            (0.0_f64, 0.0_f64, 0.0_f64, f64::NEG_INFINITY);
        let (mut refinement, mut split) = (0.0_f64, 0usize);
        for _ in 0..1000 {
            let x = random_vector(&mut rng, p);
            let y = LpVector::new(p, random_coords(&mut rng, x.len()))?;
            let (nx, ny) = (x.norm(), y.norm());
            let (jx, jy) = (x.duality_j(), y.duality_j());
            identity = identity.max(rel(jx.pairing(&x)?, nx * nx)).max(rel(jx.norm(), nx));
            let diff = &x - &y;
            let mid = nx * nx - ny * ny;
            let scale = 1.0 + nx * nx + ny * ny;
            let left = mid - 2.0 * jy.pairing(&diff)?;
            let right = 2.0 * jx.pairing(&diff)? - mid;
            subgradient = subgradient.max(-left.min(right) / scale);
            involution = involution.max((&jx.duality_jstar() - &x).norm() / (1.0 + nx));
            let w = DualVector::new(p / (p - 1.0), random_coords(&mut rng, x.len()))?;
            holder = holder.max(w.pairing(&x)?.abs() - w.norm() * nx);

            let mask = IndexMask::from_zero_based((0..x.len()).filter(|i| i % 2 == 0))?;
            let (on, off) = x.mask_decompose(&mask)?;
            let recomposed = on
                .coords()
                .iter()
                .zip(off.coords())
                .zip(x.coords())
                .all(|((a, b), v)| (a + b).to_bits() == v.to_bits() && (*a == 0.0 || *b == 0.0));
            split += usize::from(!recomposed);
            let x_on = on.norm();
            if x_on > 0.0 {
                let factor = (x_on / nx).powf(p - 2.0);
                let sub = x.duality_j_on_subspace(&mask)?;
                for &i in mask.members() {
                    refinement = refinement.max(rel(jx.coords()[i], factor * sub.coords()[i]));
                }
            }
        }
        c.push(format!("identity.{}", tag(p)), identity, 1e-9);
        c.push(format!("subgradient.{}", tag(p)), subgradient, 1e-10);
        c.push(format!("involution.{}", tag(p)), involution, 1e-9);
        c.push(format!("holder.{}", tag(p)), holder, 1e-12);
        c.push(format!("decomposition.{}", tag(p)), split as f64, 0.0);
        c.push(format!("refinement.{}", tag(p)), refinement, 1e-9);
    }

    for (k, &p) in EXPONENTS.iter().enumerate() {
        let mut rng = sampling::substream(seed, 10 + k as u64);
        let mut worst = 0.0_f64;
        let mut parts = 0usize;
        let mut done = 0;
        while done < 500 {
            let n = rng.random_range(2..=8);
            let grid = random_grid(&mut rng, n);
            let f = StepFunction::new(p, random_coords(&mut rng, n))?;
            let (pos, neg) = f.pos_neg_parts();
            if pos.is_zero() || neg.is_zero() {
                continue;
            }
            done += 1;
            let exact = pos
                .values()
                .iter()
                .zip(neg.values())
                .zip(f.values())
                .all(|((a, b), v)| (a + b).to_bits() == v.to_bits() && (*a == 0.0 || *b == 0.0));
            parts += usize::from(!exact);
            let (nf, np, nn) = (f.norm(&grid)?, pos.norm(&grid)?, neg.norm(&grid)?);
            let jf = f.duality_j(&grid)?;
            let (jp, jn) = (pos.duality_j(&grid)?, neg.duality_j(&grid)?);
            let fp = (np / nf).powf(p - 2.0);
            let fneg_factor = (nn / nf).powf(p - 2.0);
            for i in 0..n {
                let plus = jf.values()[i].max(0.0);
                let minus = jf.values()[i].min(0.0);
                worst = worst.max(rel(plus, fp * jp.values()[i]));
                worst = worst.max(rel(minus, fneg_factor * jn.values()[i]));
            }
            let denom = nf.powf(p - 2.0);
            worst = worst.max(rel(jf.pairing(&pos, &grid)?, np.powf(p) / denom));
            worst = worst.max(rel(jf.pairing(&neg, &grid)?, nn.powf(p) / denom));
        }
        c.push(format!("cone_parts.{}", tag(p)), worst, 1e-9);
        c.push(format!("cone_recomposition.{}", tag(p)), parts as f64, 0.0);
    }
    Ok(())
}

fn sample_in_set(rng: &mut SampleRng, set: &ConvexSet, like: &Point) -> Point {
    match (set, like) {
        (ConvexSet::Ball { r }, Point::Vector(x)) => {
            Point::Vector(LpVector::from_parts(x.p(), sampling::in_ball(rng, &vec![0.0; x.len()], *r, x.p())))
        }
        (ConvexSet::Cylinder { r, mask }, Point::Vector(x)) => {
            let inner = sampling::in_ball(rng, &vec![0.0; mask.members().len()], *r, x.p());
            let mut z: Vec<f64> = sampling::gaussian(rng, x.len()).into_iter().map(|g| 3.0 * g).collect();
            for (k, &i) in mask.members().iter().enumerate() {
                z[i] = inner[k];
            }
            Point::Vector(LpVector::from_parts(x.p(), z))
        }
        (ConvexSet::Cone { .. }, Point::Function(f)) => Point::Function(StepFunction::from_parts(
            f.exponent(),
            sampling::gaussian(rng, f.len()).into_iter().map(|g| 3.0 * g.abs()).collect(),
        )),
        _ => unreachable!("kinds match by construction"),
    }
}

/// Random set of each family with a matching input point.
fn random_instance(rng: &mut SampleRng, family: usize, p: f64) -> Result<(ConvexSet, Point)> {
    let n = rng.random_range(2..=6);
    let coords = random_coords(rng, n);
    let r = rng.random_range(0.5..3.0);
    Ok(match family {
        0 => (ConvexSet::ball(r)?, Point::Vector(LpVector::new(p, coords)?)),
        1 => {
            let m = rng.random_range(1..=n);
            let mask = IndexMask::from_zero_based(0..m)?;
            (ConvexSet::cylinder(r, mask)?, Point::Vector(LpVector::new(p, coords)?))
        }
        _ => (ConvexSet::cone(random_grid(rng, n)), Point::Function(StepFunction::new(p, coords)?)),
    })
}

fn projections(c: &mut Checks, seed: u64) -> Result<()> {
    const FAMILIES: [&str; 3] = ["ball", "cylinder", "cone"];
    for (fam, name) in FAMILIES.iter().enumerate() {
        let mut rng = sampling::substream(seed, fam as u64);
        let (mut idem, mut minimal, mut variational) = (0usize, f64::NEG_INFINITY, 0.0_f64);
        for k in 0..100 {
            let p = EXPONENTS[k % 3];
            let (set, x) = random_instance(&mut rng, fam, p)?;
            let u = projection::project(&set, &x)?;
            idem += usize::from(projection::project(&set, &u)? != u);
            let gap = projection::distance(&set, &x, &u)?;
            for _ in 0..200 {
                let z = sample_in_set(&mut rng, &set, &x);
                minimal = minimal.max(gap - projection::distance(&set, &x, &z)?);
            }
            let report = projection::variational_check(&set, &x, 200, rng.random())?;
            variational = variational.max(-report.min_slack);
        }
        c.push(format!("idempotence.{name}"), idem as f64, 0.0);
        c.push(format!("minimality.{name}"), minimal, 1e-10);
        c.push(format!("variational.{name}"), variational, 1e-10);
    }

    for (k, &p) in EXPONENTS.iter().enumerate() {
        let mut rng = sampling::substream(seed, 10 + k as u64);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let n = rng.random_range(2..=8);
            let grid = random_grid(&mut rng, n);
            let f = StepFunction::new(p, random_coords(&mut rng, n))?;
            let g = StepFunction::new(p, random_coords(&mut rng, n))?;
            let image = projection::project_cone(&f).sub(&projection::project_cone(&g))?.norm(&grid)?;
            worst = worst.max(image - f.sub(&g)?.norm(&grid)?);
        }
        c.push(format!("nonexpansive.{}", tag(p)), worst, 1e-12);
    }

    let mut rng = sampling::substream(seed, 20);
    let mut mismatches = 0usize;
    for k in 0..200 {
        let x = random_vector(&mut rng, EXPONENTS[k % 3]);
        let r = rng.random_range(0.5..3.0);
        let full = projection::project_cylinder(&x, r, &IndexMask::full(x.len())?)?;
        let ball = projection::project_ball(&x, r);
        mismatches += usize::from(full.coords().iter().zip(ball.coords()).any(|(a, b)| a.to_bits() != b.to_bits()));
    }
    c.push("cylinder_full_mask", mismatches as f64, 0.0);
    Ok(())
}

/// A point with `||x_M|| / r` drawn from `[lo, hi]`; `mask` of `None`
/// means the ball.
fn scaled_point(
    rng: &mut SampleRng,
    n: usize,
    p: f64,
    r: f64,
    mask: Option<&IndexMask>,
    lo: f64,
    hi: f64,
) -> Result<LpVector> {
    let x = LpVector::new(p, random_coords(rng, n))?;
    let part = match mask {
        Some(m) => x.restrict(m)?.norm(),
        None => x.norm(),
    };
    let target = r * rng.random_range(lo..hi);
    let factor = target / part;
    let coords = (0..n)
        .map(|i| if mask.is_none_or(|m| m.contains(i)) { x.coords()[i] * factor } else { x.coords()[i] })
        .collect();
    LpVector::new(p, coords)
}

const QUOTIENT_RADII: [f64; 3] = [1e-2, 1e-3, 1e-4];

fn coderivatives(c: &mut Checks, seed: u64) -> Result<()> {
    let mut rng = sampling::substream(seed, 0);
    let (mut consistent, mut fired, mut exterior) = (0.0_f64, 0usize, 0usize);
    for k in 0..100 {
        let n = rng.random_range(2..=4);
        let p = [2.0, 3.0][k % 2];
        let r = 1.0;
        let cylinder = k % 4 >= 2;
        let outside = k % 8 >= 4;
        let mask = IndexMask::from_zero_based(0..(n - 1).max(1))?;
        let (lo, hi) = if outside { (1.2, 3.0) } else { (0.2, 0.8) };
        let x = scaled_point(&mut rng, n, p, r, cylinder.then_some(&mask), lo, hi)?;
        let set = if cylinder { ConvexSet::cylinder(r, mask)? } else { ConvexSet::ball(r)? };
        let map = VectorMap::Projection { set };
        let q = x.q();
        let w = DualVector::new(q, sampling::unit_direction(&mut rng, n, q))?;
        let z = match map.coderivative(&x, &w)? {
            CoderivativeValue::Singleton { value } => value,
            other => return Err(Error::invalid("instance", format!("expected a singleton, got {other:?}"))),
        };
        let run_seed = rng.random();
        let report = coderivative::numeric_quotient_sup(&map, &x, &z, &w, &QUOTIENT_RADII, 64, run_seed)?;
        consistent = consistent.max(report.sup_quotient);
        if outside {
            exterior += 1;
            let d = DualVector::new(q, sampling::unit_direction(&mut rng, n, q))?;
            let bad = &z + &d.scale(0.1);
            let report = coderivative::numeric_quotient_sup(&map, &x, &bad, &w, &QUOTIENT_RADII, 64, run_seed)?;
            fired += usize::from(report.sup_quotient >= 2e-2);
        }
    }
    c.push("quotient_consistency", consistent, 5e-2);
    c.push("falsifier_misses", (exterior - fired) as f64, (exterior / 20) as f64);

    let mut rng = sampling::substream(seed, 1);
    let mut identity = 0.0_f64;
    for k in 0..20 {
        let lambda = rng.random_range(-1.0..1.0);
        let x = random_vector(&mut rng, EXPONENTS[k % 3]);
        let w = DualVector::new(x.q(), sampling::unit_direction(&mut rng, x.len(), x.q()))?;
        let map = VectorMap::ScaledIdentity { lambda };
        let z = coderivative::coderivative_scaled_identity(lambda, &w);
        let z = z.singleton().expect("scaled identity is single-valued");
        let report = coderivative::numeric_quotient_sup(&map, &x, z, &w, &QUOTIENT_RADII, 64, rng.random())?;
        identity = identity.max(report.sup_quotient);
    }
    c.push("quotient_scaled_identity", identity, 5e-2);

    let mut rng = sampling::substream(seed, 2);
    let (mut agree, mut annihilate) = (0.0_f64, 0.0_f64);
    for k in 0..200 {
        let p = EXPONENTS[k % 3];
        let x = random_vector(&mut rng, p);
        let r = rng.random_range(0.2..3.0);
        let w = DualVector::new(x.q(), random_coords(&mut rng, x.len()))?;
        let full = IndexMask::full(x.len())?;
        let a = coderivative::coderivative_ball(&x, r, &w)?;
        let b = coderivative::coderivative_cylinder(&x, r, &full, &w)?;
        if let (Some(a), Some(b)) = (a.singleton(), b.singleton()) {
            agree = agree.max((a - b).norm());
        }
        let outside = x.scale(r * rng.random_range(1.1..3.0) / x.norm());
        let lambda = rng.random_range(-3.0..3.0);
        if let Some(z) = coderivative::coderivative_ball(&outside, r, &outside.duality_j().scale(lambda))?.singleton() {
            annihilate = annihilate.max(z.norm() / (lambda.abs() * outside.norm()));
        }
    }
    c.push("cylinder_ball_agreement", agree, 1e-12);
    c.push("exterior_annihilation", annihilate, 1e-12);

    let mut rng = sampling::substream(seed, 3);
    let (mut interval_errors, mut sign_errors) = (0usize, 0usize);
    for k in 0..200 {
        let p = EXPONENTS[k % 3];
        let q = p / (p - 1.0);
        let n = rng.random_range(2..=6);
        let grid = random_grid(&mut rng, n);
        let psi = StepFunction::new(q, sampling::gaussian(&mut rng, n).into_iter().map(f64::abs).collect())?;
        let phi = StepFunction::new(q, sampling::gaussian(&mut rng, n))?;
        let CoderivativeValue::Interval { interval } = coderivative::coderivative_cone_at_origin(&psi)? else {
            return Err(Error::invalid("interval", "origin coderivative is not an interval"));
        };
        let cellwise = phi.values().iter().zip(psi.values()).all(|(a, b)| 0.0 <= *a && a <= b);
        interval_errors += usize::from(interval.contains(&phi)? != cellwise);

        let magnitudes: Vec<f64> = sampling::gaussian(&mut rng, n).into_iter().map(|g| g.abs() + 1e-3).collect();
        let nonpositive = StepFunction::new(p, magnitudes.iter().map(|m| -m).collect())?;
        sign_errors += usize::from(!coderivative::cone_zero_membership(&nonpositive, &psi, &grid)?);
        let positive = StepFunction::new(p, magnitudes)?;
        let j = positive.duality_j(&grid)?;
        sign_errors += usize::from(coderivative::cone_zero_membership(&positive, &j, &grid)?);
    }
    c.push("cone_origin_interval", interval_errors as f64, 0.0);
    c.push("cone_sign_classes", sign_errors as f64, 0.0);
    Ok(())
}

/// Largest `|per_eta - expected|` over the grid.
fn deviation(report: &CoveringReport, expected: impl Fn(f64) -> f64) -> f64 {
    report.eta_grid.iter().zip(&report.per_eta_inf).map(|(&eta, &v)| (v - expected(eta)).abs()).fold(0.0, f64::max)
}

fn monotone(report: &CoveringReport) -> bool {
    report.per_eta_inf.windows(2).all(|w| w[1] <= w[0])
}

fn witnesses_valid(target: &Target, base: &Point, report: &CoveringReport) -> Result<bool> {
    for w in &report.witnesses {
        let ok = match (&w.witness, target, base) {
            (WitnessRecord::Vector(v), Target::Projection(set), Point::Vector(x)) => v.certify(set, x, w.eta)?,
            (WitnessRecord::Function(f), _, _) => f.certify(w.eta)?,
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The grid used by the ball and cylinder reproductions.
pub const REPRODUCTION_ETAS: [f64; 6] = [0.1, 0.25, 0.4, 0.5, 0.6, 1.0];

fn coverings(c: &mut Checks, seed: u64) -> Result<()> {
    let mut rng = sampling::substream(seed, 0);
    let mut structural = 0usize;
    for p in [2.0, 3.0] {
        let direction = LpVector::new(p, random_coords(&mut rng, 3))?;
        for radius in [0.5, 1.0, 1.5] {
            let x = direction.scale(radius / direction.norm());
            let base = Point::Vector(x.clone());
            let ball = Target::Projection(ConvexSet::ball(1.0)?);
            let report = covering::estimate_covering_constant(&ball, &base, &REPRODUCTION_ETAS, 200, seed)?;
            let expected = covering::theoretical_covering_constant(&ball, &base)?;
            let id = format!("ball.{}.norm{radius}", tag(p));
            if radius < 1.0 {
                c.push(format!("{id}.per_eta"), deviation(&report, |eta| if eta < 0.5 { 1.0 } else { 0.0 }), 1e-9);
            } else {
                c.push(format!("{id}.per_eta"), deviation(&report, |_| 0.0), 0.0);
            }
            c.push(
                format!("{id}.alpha_hat"),
                (report.alpha_hat - expected).abs(),
                if radius < 1.0 { 1e-9 } else { 0.0 },
            );
            structural += usize::from(!monotone(&report) || !witnesses_valid(&ball, &base, &report)?);

            let full = Target::Projection(ConvexSet::cylinder(1.0, IndexMask::full(3)?)?);
            let twin = covering::estimate_covering_constant(&full, &base, &REPRODUCTION_ETAS, 200, seed)?;
            let same = twin.alpha_hat.to_bits() == report.alpha_hat.to_bits()
                && twin.per_eta_inf.iter().zip(&report.per_eta_inf).all(|(a, b)| a.to_bits() == b.to_bits());
            c.flag(format!("cylinder_full_mask.{}.norm{radius}", tag(p)), same);

            let mask = IndexMask::from_one_based(&[1, 2])?;
            let on = LpVector::new(p, random_coords(&mut rng, 2))?;
            let on = on.scale(radius / on.norm());
            let mut coords = on.coords().to_vec();
            coords.extend(random_coords(&mut rng, 2));
            let base = Point::Vector(LpVector::new(p, coords)?);
            let cyl = Target::Projection(ConvexSet::cylinder(1.0, mask)?);
            let report = covering::estimate_covering_constant(&cyl, &base, &REPRODUCTION_ETAS, 200, seed)?;
            let expected = if radius < 1.0 { 1.0 } else { 0.0 };
            c.push(
                format!("cylinder.{}.norm{radius}.alpha_hat", tag(p)),
                (report.alpha_hat - expected).abs(),
                if radius < 1.0 { 1e-9 } else { 0.0 },
            );
            structural += usize::from(!monotone(&report) || !witnesses_valid(&cyl, &base, &report)?);
        }
    }

    for (k, &p) in EXPONENTS.iter().enumerate() {
        let mut rng = sampling::substream(seed, 10 + k as u64);
        let grid = MeasureGrid::new(vec![0.25, 1.0, 0.5, 2.0, 0.75, 1.5, 0.1, 3.0])?;
        let target = Target::Projection(ConvexSet::cone(grid.clone()));
        let mut worst = 0.0_f64;
        let mut missing = 0usize;
        for i in 0..20 {
            let raw = sampling::gaussian(&mut rng, 8);
            let values = match i % 3 {
                0 => raw.into_iter().map(f64::abs).collect(),
                1 => raw.into_iter().map(|v| -v.abs()).collect(),
                _ => raw,
            };
            let base = Point::Function(StepFunction::new(p, values)?);
            let etas = covering::default_eta_grid(&target, &base)?;
            let report = covering::estimate_covering_constant(&target, &base, &etas, 20, rng.random())?;
            worst = worst.max(report.alpha_hat);
            missing += report.eta_grid.len() - report.witnesses.len();
            structural += usize::from(!monotone(&report) || !witnesses_valid(&target, &base, &report)?);
        }
        c.push(format!("cone.{}.alpha_hat", tag(p)), worst, 0.0);
        c.push(format!("cone.{}.witness_gaps", tag(p)), missing as f64, 0.0);
    }

    let mut rng = sampling::substream(seed, 20);
    for lambda in [1.0, 0.5, -0.7] {
        let base = Point::Vector(random_vector(&mut rng, 3.0));
        let target = Target::scaled_identity(lambda)?;
        let etas = covering::default_eta_grid(&target, &base)?;
        let report = covering::estimate_covering_constant(&target, &base, &etas, 50, seed)?;
        c.push(format!("scaled_identity.lambda{lambda}"), (report.alpha_hat - lambda.abs()).abs(), 1e-9);
        structural += usize::from(!monotone(&report));
    }
    c.flag(
        "scaled_identity.rejects_lambda1.2",
        matches!(Target::scaled_identity(1.2), Err(Error::LambdaOutOfRange(_))),
    );
    c.push("report_structure", structural as f64, 0.0);

    let ball = ConvexSet::ball(1.0)?;
    let inner = LpVector::new(2.0, vec![0.3, -0.2, 0.1])?;
    let rho = 0.1 * (1.0 - inner.norm());
    let report = covering::covering_property_check(&ball, &Point::Vector(inner), 0.9, rho, 500, seed)?;
    c.push("property.interior_violations", report.violations as f64, 0.0);
    let outer = Point::Vector(LpVector::new(2.0, vec![2.0, 0.0])?);
    let report = covering::covering_property_check(&ball, &outer, 0.5, 0.1, 500, seed)?;
    c.flag("property.exterior_detects", report.violations > 0);
    Ok(())
}

fn scalar(id: &str) -> Result<ScalarExample> {
    match fixpoint::builtin_example(id)? {
        BuiltinExample::Scalar(e) => Ok(e),
        BuiltinExample::Segment(_) => Err(Error::UnknownExample(id.to_string())),
    }
}

fn segment(id: &str) -> Result<SegmentExample> {
    match fixpoint::builtin_example(id)? {
        BuiltinExample::Segment(e) => Ok(e),
        BuiltinExample::Scalar(_) => Err(Error::UnknownExample(id.to_string())),
    }
}

/// `{0, 0.01, ..., 0.99}`.
pub fn quadratic_s_grid() -> Vec<f64> {
    (0..100).map(|k| k as f64 / 100.0).collect()
}

const TOL: f64 = 1e-13;
const ALPHAS: [f64; 3] = [0.6, 0.75, 0.9];

fn fixpoints(c: &mut Checks, seed: u64) -> Result<()> {
    let e = scalar("6.7")?;
    let sigma = e.branch("sigma").expect("branch").eval;
    let zeta = e.branch("zeta").expect("branch").eval;
    let (mut closed, mut bound_fail, mut ratio, mut zeta_res) = (0.0_f64, 0usize, 0.0_f64, 0.0_f64);
    for s in quadratic_s_grid() {
        let rec = fixpoint::picard_solve(&e.problem, s, 1.0, &[0.0], TOL, 100_000)?;
        closed = closed.max((rec.sigma[0] - sigma(s)).abs());
        for alpha in ALPHAS {
            bound_fail +=
                usize::from(fixpoint::residual_bound_check(&rec, &e.problem, s, 1.0, alpha)?.bound_ok != Some(true));
        }
        if s <= 0.75 {
            ratio = ratio.max(rec.observed_ratio.unwrap_or(0.0));
        }
        zeta_res = zeta_res.max(fixpoint::substitution_record(&e.problem, s, 1.0, vec![zeta(s)]).residual);
    }
    c.push("quadratic.closed_form", closed, 1e-8);
    c.push("quadratic.bound_failures", bound_fail as f64, 0.0);
    c.push("quadratic.step_ratio", ratio, e.problem.modulus + 0.05);
    c.push("quadratic.upper_branch_residual", zeta_res, 1e-12);
    for t in [0.3, 0.6] {
        let gamma = fixpoint::gamma_threshold(t);
        c.push(format!("quadratic.upper_branch_bound.t{t}"), fixpoint::upper_branch_ratio(t, gamma, 1001), 1.0 + 1e-12);
    }
    let rec = fixpoint::substitution_record(&e.problem, 0.1, 1.0, vec![zeta(0.1)]);
    let fails = ALPHAS
        .iter()
        .map(|&a| fixpoint::residual_bound_check(&rec, &e.problem, 0.1, 1.0, a))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|r| r.bound_ok == Some(false));
    c.flag("quadratic.upper_branch_bound_fails_s0.1", fails);
    c.push("quadratic.lipschitz", fixpoint::estimate_lipschitz(&e.problem, 2000, seed)?, e.problem.modulus + 1e-9);

    let e = scalar("6.8")?;
    let zeta = e.branch("zeta").expect("branch").eval;
    let (mut zero, mut zeta_res, mut bound_true) = (0.0_f64, 0.0_f64, 0usize);
    for k in 1..=10 {
        let s = k as f64 / 10.0;
        let rec = fixpoint::picard_solve(&e.problem, s, 1.0, &[0.0], TOL, 1000)?;
        zero = zero.max(rec.sigma[0].abs()).max(rec.residual);
        let z = zeta(s);
        let sub = fixpoint::substitution_record(&e.problem, s, 1.0, vec![z]);
        zeta_res = zeta_res.max(sub.residual / (1.0 + 16.0 / (s * s)));
        for alpha in ALPHAS {
            bound_true +=
                usize::from(fixpoint::residual_bound_check(&sub, &e.problem, s, 1.0, alpha)?.bound_ok != Some(false));
        }
    }
    c.push("cubic.zero_solution", zero, 1e-12);
    c.push("cubic.upper_branch_residual", zeta_res, 1e-10);
    c.push("cubic.upper_branch_bound_holds", bound_true as f64, 0.0);
    c.push("cubic.lipschitz", fixpoint::estimate_lipschitz(&e.problem, 2000, seed)?, e.problem.modulus + 1e-9);

    let e = segment("6.9")?;
    let grid = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    let (mut outside, mut bound_fail, mut dist_err, mut selection) = (0usize, 0usize, 0.0_f64, 0.0_f64);
    for &s in &grid {
        for lambda in [1.0, 1.1, 1.33] {
            let sigma = e.sigma(lambda, s);
            outside += usize::from(!fixpoint::segment_contains(&e.problem, sigma, s, 1e-12));
            let rec = fixpoint::segment_substitution_record(&e.problem, s, sigma);
            for alpha in ALPHAS {
                bound_fail +=
                    usize::from(fixpoint::segment_bound_check(&rec, &e.problem, s, 1.0, alpha)?.bound_ok != Some(true));
            }
        }
        dist_err = dist_err.max((e.problem.segment([0.0, 0.0], s).distance([0.0, 0.0]) - e.base_distance(s)).abs());
        let rec = fixpoint::segment_selection_solve(&e.problem, s, [0.0, 0.0], TOL, 1000)?;
        let target = e.sigma(1.0, s);
        selection = selection.max((rec.sigma[0] - target[0]).hypot(rec.sigma[1] - target[1]));
    }
    c.push("segment.membership_failures", outside as f64, 0.0);
    c.push("segment.bound_failures", bound_fail as f64, 0.0);
    c.push("segment.base_distance", dist_err, 1e-12);
    c.push("segment.selection", selection, 1e-8);
    let excess = fixpoint::segment_excess_check(&e.problem, 1000, 5.0, 2.0, seed)?;
    c.push("segment.excess", excess.max_violation, 1e-12);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("all".parse::<Suite>().is_err());
    }

    #[test]
    fn results_are_sorted_and_seed_stable() {
        let a = run_suite(Suite::Fixpoint, 3).unwrap();
        let b = run_suite(Suite::Fixpoint, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].id <= w[1].id));
    }
}
