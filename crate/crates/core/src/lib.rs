//! Metric projections, normalized duality mappings, Mordukhovich
//! coderivatives and covering constants in finite truncations of `l_p` and
//! step-function discretizations of `L_p(S)`, plus stochastic fixed-point
//! solvers built on them.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coderivative;
pub mod covering;
pub mod error;
pub mod fixpoint;
pub mod function;
pub mod kernel;
pub mod lp;
pub mod projection;
pub mod sampling;
pub mod suite;

pub use coderivative::{CoderivativeValue, QuotientReport, VectorMap};
pub use covering::{CoveringReport, Target};
pub use error::{Error, Result};
pub use fixpoint::{BuiltinExample, FixpointRecord};
pub use function::{MeasureGrid, OrderedInterval, StepFunction};
pub use lp::{pairing, DualVector, IndexMask, LpVector};
pub use projection::{ConvexSet, Direction, Point};
pub use suite::{CheckResult, Suite};
