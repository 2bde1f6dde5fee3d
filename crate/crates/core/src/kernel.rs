//! Slice-level numerics shared by the sequence and function spaces.
//!
//! Every routine takes optional cell weights; `None` means unit weights,
//! which is the counting measure of `l_p`.

use crate::error::{Error, Result};

pub const MIN_EXPONENT: f64 = 1.0 + 1e-6;
pub const MAX_EXPONENT: f64 = 1e6;
pub const CONJUGACY_TOL: f64 = 1e-12;

pub fn check_exponent(p: f64) -> Result<f64> {
    if p.is_finite() && p > MIN_EXPONENT && p < MAX_EXPONENT {
        Ok(p)
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// The Hölder conjugate `p / (p - 1)`.
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

pub fn are_conjugate(p: f64, q: f64) -> bool {
    (1.0 / p + 1.0 / q - 1.0).abs() <= CONJUGACY_TOL
}

/// Exponents naming the same space; a `p -> q -> p` round trip may drift an ulp.
pub fn same_exponent(p: f64, q: f64) -> bool {
    (1.0 / p - 1.0 / q).abs() <= CONJUGACY_TOL
}

pub fn check_conjugate(p: f64, q: f64) -> Result<()> {
    if are_conjugate(p, q) {
        Ok(())
    } else {
        Err(Error::ExponentMismatch { p, q })
    }
}

pub fn check_finite(field: &'static str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::invalid(field, format!("entry {} is not finite", i + 1))),
        None => Ok(()),
    }
}

pub fn check_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

#[inline]
fn weight(weights: Option<&[f64]>, i: usize) -> f64 {
    weights.map_or(1.0, |w| w[i])
}

/// `(sum_i w_i |x_i|^p)^(1/p)`, scaled by the largest magnitude so that
/// large or tiny coordinates do not overflow.
pub fn norm(values: &[f64], weights: Option<&[f64]>, p: f64) -> f64 {
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let sum: f64 = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let t = v / scale;
                weight(weights, i) * t * t
            })
            .sum();
        return scale * sum.sqrt();
    }
    let sum: f64 = values.iter().enumerate().map(|(i, v)| weight(weights, i) * (v.abs() / scale).powf(p)).sum();
    scale * sum.powf(1.0 / p)
}

/// Coordinates of the normalized duality mapping,
/// `|x_i|^(p-1) sign(x_i) / ||x||^(p-2)`, evaluated as
/// `||x|| (|x_i|/||x||)^(p-1) sign(x_i)`. The zero vector maps to zero.
pub fn duality(values: &[f64], weights: Option<&[f64]>, p: f64) -> Vec<f64> {
    if p == 2.0 {
        return values.to_vec();
    }
    let n = norm(values, weights, p);
    if n == 0.0 {
        return vec![0.0; values.len()];
    }
    values.iter().map(|&v| if v == 0.0 { 0.0 } else { n * (v.abs() / n).powf(p - 1.0) * v.signum() }).collect()
}

/// `sum_i w_i a_i b_i`.
pub fn pairing(a: &[f64], b: &[f64], weights: Option<&[f64]>) -> f64 {
    a.iter().zip(b).enumerate().map(|(i, (x, y))| weight(weights, i) * x * y).sum()
}
