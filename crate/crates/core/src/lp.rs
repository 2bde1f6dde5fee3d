//! Finitely supported elements of `l_p` and its dual `l_q`.
//!
//! An [`LpVector`] of length `n` is the sequence `(x_1, ..., x_n, 0, 0, ...)`,
//! so every identity exercised on it holds exactly in `l_p`, not just
//! approximately.

use std::collections::BTreeSet;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel;

/// Element of `l_p` supported on the first `n` indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPrimal")]
pub struct LpVector {
    p: f64,
    coords: Vec<f64>,
}

/// Element of the dual `l_q`, `1/p + 1/q = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDual")]
pub struct DualVector {
    q: f64,
    coords: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPrimal {
    p: f64,
    coords: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDual {
    q: f64,
    coords: Vec<f64>,
}

impl TryFrom<RawPrimal> for LpVector {
    type Error = Error;
    fn try_from(raw: RawPrimal) -> Result<Self> {
        LpVector::new(raw.p, raw.coords)
    }
}

impl TryFrom<RawDual> for DualVector {
    type Error = Error;
    fn try_from(raw: RawDual) -> Result<Self> {
        DualVector::new(raw.q, raw.coords)
    }
}

fn check_coords(coords: &[f64]) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::invalid("coords", "vector must have at least one coordinate"));
    }
    kernel::check_finite("coords", coords)
}

impl LpVector {
    pub fn new(p: f64, coords: Vec<f64>) -> Result<Self> {
        kernel::check_exponent(p)?;
        check_coords(&coords)?;
        Ok(Self { p, coords })
    }

    pub fn zeros(p: f64, n: usize) -> Result<Self> {
        Self::new(p, vec![0.0; n])
    }

    /// Builds a vector whose coordinates were produced by arithmetic on
    /// already validated vectors.
    pub(crate) fn from_parts(p: f64, coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Self { p, coords }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent of the dual space.
    pub fn q(&self) -> f64 {
        kernel::conjugate(self.p)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    /// `(sum |x_i|^p)^(1/p)`.
    pub fn norm(&self) -> f64 {
        kernel::norm(&self.coords, None, self.p)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_parts(self.p, self.coords.iter().map(|c| factor * c).collect())
    }

    /// Normalized duality mapping `J: l_p -> l_q`,
    /// `J(x)_i = |x_i|^(p-1) sign(x_i) / ||x||_p^(p-2)`, with `J(0) = 0`.
    pub fn duality_j(&self) -> DualVector {
        DualVector::from_parts(self.q(), kernel::duality(&self.coords, None, self.p))
    }

    /// Splits `x` into `(x_M, x_Mbar)`: the part on the mask and the rest.
    pub fn mask_decompose(&self, mask: &IndexMask) -> Result<(LpVector, LpVector)> {
        mask.check_len(self.len())?;
        let (on, off) = mask.split(&self.coords);
        Ok((Self::from_parts(self.p, on), Self::from_parts(self.p, off)))
    }

    /// `x_M`, zero off the mask.
    pub fn restrict(&self, mask: &IndexMask) -> Result<LpVector> {
        Ok(self.mask_decompose(mask)?.0)
    }

    /// `J(x_M)` with the norm taken inside `l_p^M`. For `x_M = 0` this is the
    /// zero functional.
    pub fn duality_j_on_subspace(&self, mask: &IndexMask) -> Result<DualVector> {
        Ok(self.restrict(mask)?.duality_j())
    }

    fn check_same_space(&self, other: &LpVector) {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        assert!(kernel::same_exponent(self.p, other.p), "exponent mismatch");
    }
}

impl DualVector {
    pub fn new(q: f64, coords: Vec<f64>) -> Result<Self> {
        kernel::check_exponent(q)?;
        check_coords(&coords)?;
        Ok(Self { q, coords })
    }

    pub fn zeros(q: f64, n: usize) -> Result<Self> {
        Self::new(q, vec![0.0; n])
    }

    pub(crate) fn from_parts(q: f64, coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Self { q, coords }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Exponent of the predual space.
    pub fn p(&self) -> f64 {
        kernel::conjugate(self.q)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    pub fn norm(&self) -> f64 {
        kernel::norm(&self.coords, None, self.q)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_parts(self.q, self.coords.iter().map(|c| factor * c).collect())
    }

    /// Canonical pairing `<w, x> = sum w_i x_i`.
    pub fn pairing(&self, x: &LpVector) -> Result<f64> {
        kernel::check_len(self.len(), x.len())?;
        kernel::check_conjugate(x.p(), self.q)?;
        Ok(kernel::pairing(&self.coords, &x.coords, None))
    }

    /// Normalized duality mapping `J*: l_q -> l_p`, the inverse of `J`.
    pub fn duality_jstar(&self) -> LpVector {
        LpVector::from_parts(self.p(), kernel::duality(&self.coords, None, self.q))
    }

    pub fn mask_decompose(&self, mask: &IndexMask) -> Result<(DualVector, DualVector)> {
        mask.check_len(self.len())?;
        let (on, off) = mask.split(&self.coords);
        Ok((Self::from_parts(self.q, on), Self::from_parts(self.q, off)))
    }

    pub fn restrict(&self, mask: &IndexMask) -> Result<DualVector> {
        Ok(self.mask_decompose(mask)?.0)
    }

    fn check_same_space(&self, other: &DualVector) {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        assert!(kernel::same_exponent(self.q, other.q), "exponent mismatch");
    }
}

/// `<w, x>`; errors on dimension or exponent mismatch.
pub fn pairing(w: &DualVector, x: &LpVector) -> Result<f64> {
    w.pairing(x)
}

macro_rules! impl_linear_ops {
    ($ty:ident, $exp:ident) => {
        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                self.check_same_space(rhs);
                let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect();
                $ty::from_parts(self.$exp, coords)
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                self.check_same_space(rhs);
                let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect();
                $ty::from_parts(self.$exp, coords)
            }
        }
    };
}

impl_linear_ops!(LpVector, p);
impl_linear_ops!(DualVector, q);

/// Nonempty subset `M` of the index set. Stored 0-based; serialized as a
/// sorted 1-based array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexMask {
    members: Vec<usize>,
}

impl IndexMask {
    /// Mask from 1-based indices, as written in the math and on the CLI.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0) {
            return Err(Error::MaskOutOfRange { index: bad, len: 0 });
        }
        Self::from_zero_based(indices.iter().map(|i| i - 1))
    }

    pub fn from_zero_based(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = indices.into_iter().collect();
        if members.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(Self { members: members.into_iter().collect() })
    }

    /// `M = {1..n}`.
    pub fn full(n: usize) -> Result<Self> {
        Self::from_zero_based(0..n)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// 0-based members in increasing order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|i| i + 1).collect()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&last) if last >= n => Err(Error::MaskOutOfRange { index: last + 1, len: n }),
            _ => Ok(()),
        }
    }

    pub fn is_full(&self, n: usize) -> bool {
        self.members.len() == n && self.check_len(n).is_ok()
    }

    fn split(&self, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut on = vec![0.0; values.len()];
        let mut off = values.to_vec();
        for &i in &self.members {
            on[i] = values[i];
            off[i] = 0.0;
        }
        (on, off)
    }
}

impl TryFrom<Vec<usize>> for IndexMask {
    type Error = Error;
    fn try_from(indices: Vec<usize>) -> Result<Self> {
        Self::from_one_based(&indices)
    }
}

impl From<IndexMask> for Vec<usize> {
    fn from(mask: IndexMask) -> Self {
        mask.one_based()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(p: f64, c: &[f64]) -> LpVector {
        LpVector::new(p, c.to_vec()).unwrap()
    }

    fn oracle_norm(c: &[f64], p: f64) -> f64 {
        c.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }

    #[test]
    fn norm_examples() {
        assert_eq!(v(2.0, &[3.0, 4.0]).norm(), 5.0);
        assert_eq!(v(3.7, &[0.0, 0.0]).norm(), 0.0);
        let n = v(3.0, &[1.0, 1.0]).norm();
        assert_relative_eq!(n, oracle_norm(&[1.0, 1.0], 3.0), max_relative = 1e-15);
        assert_relative_eq!(n, 1.259921, epsilon = 1e-6);
    }

    #[test]
    fn rejects_bad_exponents_and_entries() {
        assert!(matches!(LpVector::new(1.0, vec![1.0]), Err(Error::InvalidExponent(_))));
        assert!(LpVector::new(1.0 + 1e-7, vec![1.0]).is_err());
        assert!(LpVector::new(1e6, vec![1.0]).is_err());
        assert!(LpVector::new(2.0, vec![]).is_err());
        assert!(LpVector::new(2.0, vec![f64::NAN]).is_err());
    }

    #[test]
    fn pairing_examples_and_errors() {
        let x = v(2.0, &[3.0, 4.0]);
        let w = DualVector::new(2.0, vec![1.0, 0.0]).unwrap();
        assert_eq!(w.pairing(&x).unwrap(), 3.0);
        assert_eq!(DualVector::zeros(2.0, 2).unwrap().pairing(&x).unwrap(), 0.0);
        let w = DualVector::new(2.0, vec![1.0, 2.0]).unwrap();
        let y = v(2.0, &[1.0, 2.0]);
        assert_eq!(pairing(&w, &y).unwrap(), 5.0);

        let short = DualVector::new(2.0, vec![1.0]).unwrap();
        assert!(matches!(short.pairing(&x), Err(Error::DimensionMismatch { .. })));
        let wrong_q = DualVector::new(3.0, vec![1.0, 0.0]).unwrap();
        assert!(matches!(wrong_q.pairing(&x), Err(Error::ExponentMismatch { .. })));
    }

    #[test]
    fn duality_examples() {
        assert_eq!(v(2.0, &[3.0, 4.0]).duality_j().coords(), &[3.0, 4.0]);
        let x = v(3.0, &[1.0, 1.0]);
        let j = x.duality_j();
        let expected = 2f64.powf(-1.0 / 3.0);
        for c in j.coords() {
            assert_relative_eq!(*c, expected, max_relative = 1e-14);
        }
        // independent evaluation: <J(x), x> = ||x||^2
        let direct: f64 = j.coords().iter().zip(x.coords()).map(|(a, b)| a * b).sum();
        assert_relative_eq!(direct, oracle_norm(&[1.0, 1.0], 3.0).powi(2), max_relative = 1e-14);
        assert!(v(1.8, &[0.0, 0.0, 0.0]).duality_j().is_zero());
    }

    #[test]
    fn jstar_examples() {
        let w = DualVector::new(2.0, vec![0.0, -1.0]).unwrap();
        assert_eq!(w.duality_jstar().coords(), &[0.0, -1.0]);
        assert!(DualVector::zeros(1.5, 3).unwrap().duality_jstar().is_zero());
        let x = v(3.0, &[1.0, 1.0]);
        let back = x.duality_j().duality_jstar();
        assert_relative_eq!(back.p(), 3.0, max_relative = 1e-12);
        for c in back.coords() {
            assert_relative_eq!(*c, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn decompose_examples() {
        let m = IndexMask::from_one_based(&[1, 2]).unwrap();
        let (a, b) = v(2.0, &[1.0, 2.0, 3.0]).mask_decompose(&m).unwrap();
        assert_eq!(a.coords(), &[1.0, 2.0, 0.0]);
        assert_eq!(b.coords(), &[0.0, 0.0, 3.0]);
        let (a, b) = LpVector::zeros(2.0, 3).unwrap().mask_decompose(&m).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let x = v(2.5, &[1.0, -2.0, 3.0]);
        let (a, b) = x.mask_decompose(&IndexMask::full(3).unwrap()).unwrap();
        assert_eq!(a, x);
        assert!(b.is_zero());
        let too_big = IndexMask::from_one_based(&[4]).unwrap();
        assert!(matches!(x.mask_decompose(&too_big), Err(Error::MaskOutOfRange { index: 4, len: 3 })));
    }

    #[test]
    fn subspace_duality_examples() {
        let m = IndexMask::from_one_based(&[1, 2]).unwrap();
        let j = v(2.0, &[3.0, 4.0, 7.0]).duality_j_on_subspace(&m).unwrap();
        assert_eq!(j.coords(), &[3.0, 4.0, 0.0]);
        let j = v(3.0, &[1.0, 1.0, 5.0]).duality_j_on_subspace(&m).unwrap();
        let e = 2f64.powf(-1.0 / 3.0);
        assert_relative_eq!(j.coords()[0], e, max_relative = 1e-14);
        assert_relative_eq!(j.coords()[1], e, max_relative = 1e-14);
        assert_eq!(j.coords()[2], 0.0);
        let x = v(3.0, &[1.0, -2.0, 0.0]);
        assert_eq!(x.duality_j_on_subspace(&m).unwrap(), x.duality_j());
    }

    #[test]
    fn mask_validation_and_serde() {
        assert!(matches!(IndexMask::from_one_based(&[]), Err(Error::EmptyMask)));
        assert!(IndexMask::from_one_based(&[0]).is_err());
        let m = IndexMask::from_one_based(&[3, 1, 3]).unwrap();
        assert_eq!(m.members(), &[0, 2]);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[1,3]");
        let back: IndexMask = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<IndexMask>("[]").is_err());
    }

    #[test]
    fn vector_serde() {
        let x = v(3.0, &[1.0, -0.5]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":3.0,"coords":[1.0,-0.5]}"#);
        assert_eq!(serde_json::from_str::<LpVector>(&s).unwrap(), x);
        assert!(serde_json::from_str::<LpVector>(r#"{"p":0.5,"coords":[1.0]}"#).is_err());
    }
}
