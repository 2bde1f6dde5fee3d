use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use banach_cover::Error;
use serde::Serialize;

use crate::{Format, RunArgs, SEED_ENV};

pub const SCHEMA: &str = "banach-cover/1";

const TOLERANCE_NAMES: [&str; 2] = ["covering", "picard"];

/// A run that could not produce a verdict. Input errors name the offending
/// field and exit with 2; an aborted verification exits with 1.
#[derive(Debug)]
pub enum Failure {
    Input { field: String, message: String },
    Verification(String),
}

impl Failure {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        Failure::Input { field: field.into(), message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Failure::Verification(message.into())
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Input { .. } => 2,
            Failure::Verification(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input { field, message } => write!(f, "invalid {field}: {message}"),
            Failure::Verification(message) => f.write_str(message),
        }
    }
}

/// Attributes a library error to the flag that caused it.
pub fn field_of(err: &Error) -> &'static str {
    match err {
        Error::InvalidExponent(_) | Error::ExponentMismatch { .. } => "--p",
        Error::DimensionMismatch { .. } | Error::NotInCone => "--x",
        Error::Invalid { .. } => "input",
        Error::EmptyMask | Error::MaskOutOfRange { .. } => "--mask",
        Error::NotOnBoundary { .. } | Error::Infeasible => "--x",
        Error::KindMismatch { .. } => "--set",
        Error::LambdaOutOfRange(_) | Error::BadLambda { .. } => "--lambda",
        Error::AlphaOutOfRange { .. } => "--alpha",
        Error::NoConvergence { .. } | Error::LeftDomain { .. } => "--s-grid",
        Error::UnknownExample(_) => "--example",
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let field = match &err {
            Error::Invalid { field: "coords" | "values", .. } => "--x".to_string(),
            Error::Invalid { field, .. } => format!("--{}", field.replace('_', "-")),
            other => field_of(other).to_string(),
        };
        Failure::input(field, err.to_string())
    }
}

/// Seed, output sink and tolerance overrides; identical configs and inputs
/// give byte-identical reports.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn resolve(args: RunArgs) -> Result<Self, Failure> {
        let seed = match std::env::var(SEED_ENV) {
            Ok(raw) => raw
                .trim()
                .parse()
                .map_err(|_| Failure::input(SEED_ENV, format!("{raw:?} is not an unsigned 64-bit integer")))?,
            Err(std::env::VarError::NotPresent) => args.seed,
            Err(std::env::VarError::NotUnicode(_)) => return Err(Failure::input(SEED_ENV, "not valid unicode")),
        };
        let mut tolerances = BTreeMap::new();
        for (name, value) in args.tolerances {
            if !TOLERANCE_NAMES.contains(&name.as_str()) {
                return Err(Failure::input(
                    "--tol",
                    format!("unknown tolerance {name:?} (known: {})", TOLERANCE_NAMES.join(", ")),
                ));
            }
            tolerances.insert(name, value);
        }
        Ok(Self { seed, format: args.format, out: args.out, tolerances })
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        debug_assert!(TOLERANCE_NAMES.contains(&name));
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// Writes the JSON body (with the schema tag) or the CSV table.
    pub fn emit<T: Serialize>(&self, body: &T, csv: impl FnOnce() -> String) -> Result<(), Failure> {
        let text = match self.format {
            Format::Json => {
                let tagged = Tagged { schema: SCHEMA, body };
                let mut s = serde_json::to_string_pretty(&tagged).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => csv(),
        };
        match &self.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| Failure::input("--out", format!("{}: {e}", path.display())))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Serialize)]
struct Tagged<'a, T> {
    schema: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

/// Parses `a,b,c` into reals, naming `field` on failure.
pub fn parse_reals(field: &str, raw: &str) -> Result<Vec<f64>, Failure> {
    raw.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::input(field, format!("{part:?} is not a finite number")))
        })
        .collect()
}

/// Parses `a,b,c` into 1-based indices.
pub fn parse_indices(field: &str, raw: &str) -> Result<Vec<usize>, Failure> {
    raw.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<usize>().map_err(|_| Failure::input(field, format!("{part:?} is not a positive index")))
        })
        .collect()
}

/// `start:stop:step` (inclusive of `stop` up to rounding) or a comma list.
pub fn parse_grid(field: &str, raw: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = raw.split(':').collect();
    match parts.as_slice() {
        [_] => parse_reals(field, raw),
        [start, stop, step] => {
            let [start, stop, step] = [*start, *stop, *step].map(|p| parse_reals(field, p).map(|v| v[0]));
            let (start, stop, step) = (start?, stop?, step?);
            if !(step > 0.0) || stop < start {
                return Err(Failure::input(field, "need step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            if count > 1_000_000 {
                return Err(Failure::input(field, "more than a million grid points"));
            }
            // multiply rather than accumulate so k * step carries one rounding
            Ok((0..=count).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(Failure::input(field, "expected start:stop:step or a comma-separated list")),
    }
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("--s-grid", "0:0.99:0.01").unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 0.0);
        assert!((g[99] - 0.99).abs() < 1e-15);
        assert_eq!(parse_grid("--s-grid", "-2,0.5").unwrap(), vec![-2.0, 0.5]);
        assert_eq!(parse_grid("--s-grid", "1:1:0.5").unwrap(), vec![1.0]);
        assert!(parse_grid("--s-grid", "1:0:0.5").is_err());
        assert!(parse_grid("--s-grid", "0:1").is_err());
    }

    #[test]
    fn lists_name_their_field() {
        let Failure::Input { field, .. } = parse_reals("--x", "3,a").unwrap_err() else {
            panic!("input error expected")
        };
        assert_eq!(field, "--x");
        assert!(parse_reals("--x", "1,inf").is_err());
        assert_eq!(parse_indices("--mask", "1, 2").unwrap(), vec![1, 2]);
        assert!(parse_indices("--mask", "-1").is_err());
    }

    #[test]
    fn library_errors_map_to_flags() {
        let f: Failure = Error::InvalidExponent(0.5).into();
        assert!(f.to_string().starts_with("invalid --p"));
        let f: Failure = Error::Invalid { field: "samples_per_eta", reason: "x".into() }.into();
        assert!(f.to_string().starts_with("invalid --samples-per-eta"));
        assert_eq!(f.code(), 2);
    }
}
