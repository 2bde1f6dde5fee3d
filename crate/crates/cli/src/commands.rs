use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use banach_cover::covering::{self, CoveringReport, Target};
use banach_cover::fixpoint::{self, BuiltinExample, FixpointRecord};
use banach_cover::projection;
use banach_cover::suite::{self, Suite};
use banach_cover::{CheckResult, ConvexSet, Error, IndexMask, LpVector, MeasureGrid, Point, StepFunction};

use crate::output::{parse_grid, parse_indices, parse_reals, verdict, Failure, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    Ball,
    Cylinder,
    Cone,
}

/// Set descriptor and input point shared by `project` and `covering`.
#[derive(Debug, Args)]
pub struct SetArgs {
    /// Radius of the ball or cylinder.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Exponent of the space.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// 1-based indices of the cylinder's constrained coordinates, e.g. 1,2.
    #[arg(long)]
    mask: Option<String>,
    /// Cell measures of the cone's grid; unit cells when omitted.
    #[arg(long)]
    weights: Option<String>,
    /// The point: coordinates, or cell values for the cone.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
}

impl SetArgs {
    fn radius(&self) -> Result<f64, Failure> {
        self.r.ok_or_else(|| Failure::input("--r", "required for the ball and cylinder"))
    }

    fn coords(&self) -> Result<Vec<f64>, Failure> {
        parse_reals("--x", &self.x)
    }

    fn build(&self, kind: SetKind) -> Result<(ConvexSet, Point), Failure> {
        let coords = self.coords()?;
        Ok(match kind {
            SetKind::Ball => (ConvexSet::ball(self.radius()?)?, Point::Vector(LpVector::new(self.p, coords)?)),
            SetKind::Cylinder => {
                let raw = self.mask.as_deref().ok_or_else(|| Failure::input("--mask", "required for the cylinder"))?;
                let mask = IndexMask::from_one_based(&parse_indices("--mask", raw)?)?;
                if let Some(&last) = mask.members().last() {
                    if last >= coords.len() {
                        return Err(Error::MaskOutOfRange { index: last + 1, len: coords.len() }.into());
                    }
                }
                (ConvexSet::cylinder(self.radius()?, mask)?, Point::Vector(LpVector::new(self.p, coords)?))
            }
            SetKind::Cone => {
                let grid = match &self.weights {
                    Some(raw) => MeasureGrid::new(parse_reals("--weights", raw)?)?,
                    None => MeasureGrid::uniform(coords.len())?,
                };
                if grid.len() != coords.len() {
                    return Err(Failure::input(
                        "--weights",
                        format!("{} cells for {} values", grid.len(), coords.len()),
                    ));
                }
                (ConvexSet::cone(grid), Point::Function(StepFunction::new(self.p, coords)?))
            }
        })
    }
}

fn point_values(point: &Point) -> &[f64] {
    match point {
        Point::Vector(v) => v.coords(),
        Point::Function(f) => f.values(),
    }
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long, value_enum)]
    set: SetKind,
    #[command(flatten)]
    point: SetArgs,
}

#[derive(Serialize)]
struct ProjectReport<'a> {
    command: &'static str,
    set: &'a ConvexSet,
    p: f64,
    x: &'a [f64],
    projection: &'a [f64],
    distance: f64,
}

pub fn project(config: &RunConfig, args: ProjectArgs) -> Result<bool, Failure> {
    let (set, point) = args.point.build(args.set)?;
    let image = projection::project(&set, &point)?;
    let distance = projection::distance(&set, &point, &image)?;
    let report = ProjectReport {
        command: "project",
        set: &set,
        p: args.point.p,
        x: point_values(&point),
        projection: point_values(&image),
        distance,
    };
    config.emit(&report, || {
        let mut out = String::from("quantity,index,value\n");
        for (name, values) in [("input", report.x), ("projection", report.projection)] {
            for (i, v) in values.iter().enumerate() {
                out.push_str(&format!("{name},{},{v:.16e}\n", i + 1));
            }
        }
        out.push_str(&format!("distance,,{distance:.16e}\n"));
        out
    })?;
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetKind {
    Ball,
    Cylinder,
    Cone,
    /// `lambda I`.
    Identity,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    #[arg(long, value_enum)]
    set: TargetKind,
    #[command(flatten)]
    point: SetArgs,
    /// Scale of `lambda I`, |lambda| <= 1.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Increasing radii; a grid straddling the boundary distance when omitted.
    #[arg(long)]
    eta_grid: Option<String>,
    #[arg(long, default_value_t = 200)]
    samples_per_eta: usize,
}

#[derive(Serialize)]
struct CoveringOutput<'a> {
    command: &'static str,
    seed: u64,
    target: Value,
    p: f64,
    x: &'a [f64],
    report: &'a CoveringReport,
    theoretical: f64,
    tolerance: f64,
    passed: bool,
}

pub fn covering(config: &RunConfig, args: CoveringArgs) -> Result<bool, Failure> {
    let (target, base, described) = match args.set {
        TargetKind::Identity => {
            let lambda = args.lambda.ok_or_else(|| Failure::input("--lambda", "required for the identity target"))?;
            let target = Target::scaled_identity(lambda)?;
            let base = Point::Vector(LpVector::new(args.point.p, args.point.coords()?)?);
            (target, base, json!({ "kind": "identity", "lambda": lambda }))
        }
        kind => {
            let kind = match kind {
                TargetKind::Ball => SetKind::Ball,
                TargetKind::Cylinder => SetKind::Cylinder,
                _ => SetKind::Cone,
            };
            let (set, base) = args.point.build(kind)?;
            let described = serde_json::to_value(&set).expect("sets serialize");
            (Target::Projection(set), base, described)
        }
    };
    let eta_grid = match &args.eta_grid {
        Some(raw) => parse_reals("--eta-grid", raw)?,
        None => covering::default_eta_grid(&target, &base)?,
    };
    let report = covering::estimate_covering_constant(&target, &base, &eta_grid, args.samples_per_eta, config.seed)?;
    let theoretical = covering::theoretical_covering_constant(&target, &base)?;
    let tolerance = config.tolerance("covering", 1e-9);
    let passed = (report.alpha_hat - theoretical).abs() <= tolerance;
    eprintln!(
        "{} covering alpha_hat={} theoretical={theoretical} tolerance={tolerance:e}",
        verdict(passed),
        report.alpha_hat
    );
    let output = CoveringOutput {
        command: "covering",
        seed: config.seed,
        target: described,
        p: args.point.p,
        x: point_values(&base),
        report: &report,
        theoretical,
        tolerance,
        passed,
    };
    config.emit(&output, || report.to_csv())?;
    Ok(passed)
}

#[derive(Debug, Args)]
pub struct FixpointArgs {
    /// Built-in example: 6.7, 6.8 or 6.9.
    #[arg(long)]
    example: String,
    /// `start:stop:step` or a comma list; a per-example default when omitted.
    #[arg(long, allow_hyphen_values = true)]
    s_grid: Option<String>,
    /// Equation scale for 6.7 and 6.8; family label of sigma_(lambda) for 6.9.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Fills the a-priori distance bound for this alpha.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    max_iter: usize,
}

#[derive(Serialize)]
struct FailedSolve {
    s: f64,
    error: String,
}

#[derive(Serialize)]
struct FixpointOutput<'a> {
    command: &'static str,
    example: &'a str,
    method: &'static str,
    lambda: f64,
    alpha: Option<f64>,
    records: &'a [FixpointRecord],
    failures: &'a [FailedSolve],
}

fn default_s_grid(example: &str) -> &'static str {
    match example {
        "6.7" => "0:0.99:0.01",
        "6.8" => "0:1:0.1",
        _ => "-2,-1,-0.5,0,0.5,1,2",
    }
}

pub fn fixpoint(config: &RunConfig, args: FixpointArgs) -> Result<bool, Failure> {
    let example = fixpoint::builtin_example(&args.example)?;
    let grid = parse_grid("--s-grid", args.s_grid.as_deref().unwrap_or(default_s_grid(&args.example)))?;
    let tol = config.tolerance("picard", 1e-13);
    let mut records = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    let method = match &example {
        BuiltinExample::Scalar(e) => {
            for &s in &grid {
                match fixpoint::picard_solve(&e.problem, s, args.lambda, &e.problem.base_point, tol, args.max_iter) {
                    Ok(rec) => records.push(match args.alpha {
                        Some(alpha) => fixpoint::residual_bound_check(&rec, &e.problem, s, args.lambda, alpha)?,
                        None => rec,
                    }),
                    Err(err @ (Error::NoConvergence { .. } | Error::LeftDomain { .. })) => {
                        failures.push(FailedSolve { s, error: err.to_string() })
                    }
                    Err(err) => return Err(err.into()),
                }
            }
            "picard"
        }
        BuiltinExample::Segment(e) => {
            let (lo, hi) = e.family;
            if !(lo..=hi).contains(&args.lambda) {
                return Err(Failure::input("--lambda", format!("family label must lie in [{lo}, {hi}]")));
            }
            for &s in &grid {
                let sigma = e.sigma(args.lambda, s);
                let rec = fixpoint::segment_substitution_record(&e.problem, s, sigma);
                if !fixpoint::segment_contains(&e.problem, sigma, s, 1e-12) {
                    failures.push(FailedSolve {
                        s,
                        error: format!("sigma not in G(sigma, s): distance {:e}", rec.residual),
                    });
                }
                // the set-valued equation is unscaled; lambda only labels the branch
                records.push(match args.alpha {
                    Some(alpha) => fixpoint::segment_bound_check(&rec, &e.problem, s, 1.0, alpha)?,
                    None => rec,
                });
            }
            "closed_form"
        }
    };
    if !failures.is_empty() {
        let list: Vec<String> = failures.iter().map(|f| f.s.to_string()).collect();
        eprintln!("FAIL fixpoint {}: no fixed point at s = {}", args.example, list.join(", "));
    } else {
        eprintln!("PASS fixpoint {}: {} records", args.example, records.len());
    }
    let output = FixpointOutput {
        command: "fixpoint",
        example: &args.example,
        method,
        lambda: args.lambda,
        alpha: args.alpha,
        records: &records,
        failures: &failures,
    };
    config.emit(&output, || fixpoint::records_to_csv(&records))?;
    Ok(failures.is_empty())
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all, duality, projection, coderivative, covering or fixpoint.
    #[arg(long, default_value = "all")]
    suite: String,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    command: &'static str,
    suite: &'a str,
    seed: u64,
    passed: usize,
    failed: usize,
    checks: &'a [CheckResult],
}

pub fn verify(config: &RunConfig, args: VerifyArgs) -> Result<bool, Failure> {
    let results = if args.suite == "all" {
        suite::run_all(config.seed)
    } else {
        let which: Suite = args.suite.parse().map_err(|_| {
            Failure::input(
                "--suite",
                format!("{:?} is not one of all, duality, projection, coderivative, covering, fixpoint", args.suite),
            )
        })?;
        suite::run_suite(which, config.seed)
    }
    .map_err(|err| Failure::verification(format!("suite aborted: {err}")))?;
    for c in &results {
        eprintln!("{} {}/{} measured={:e} threshold={:e}", verdict(c.passed), c.suite, c.id, c.measured, c.threshold);
    }
    let passed = results.iter().filter(|c| c.passed).count();
    let failed = results.len() - passed;
    eprintln!("{passed} passed, {failed} failed");
    let output =
        VerifyOutput { command: "verify", suite: &args.suite, seed: config.seed, passed, failed, checks: &results };
    config.emit(&output, || {
        let mut out = String::from("suite,id,passed,measured,threshold\n");
        for c in &results {
            out.push_str(&format!("{},{},{},{:.16e},{:.16e}\n", c.suite, c.id, c.passed, c.measured, c.threshold));
        }
        out
    })?;
    Ok(failed == 0)
}
