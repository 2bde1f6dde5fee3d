//! Seeded samplers. All randomness in the crate flows through
//! [`seeded`], so identical seeds give identical reports on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::kernel;

pub type SampleRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sub-task `index` of a seeded run.
pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

pub fn gaussian(rng: &mut SampleRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Gaussian draw normalized to unit `p`-norm. Uniform on the sphere when
/// `p = 2`; full support on the sphere otherwise.
pub fn unit_direction(rng: &mut SampleRng, n: usize, p: f64) -> Vec<f64> {
    loop {
        let g = gaussian(rng, n);
        let norm = kernel::norm(&g, None, p);
        if norm > 1e-12 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Point of the closed `p`-norm ball of the given radius around `center`.
pub fn in_ball(rng: &mut SampleRng, center: &[f64], radius: f64, p: f64) -> Vec<f64> {
    let n = center.len();
    let d = unit_direction(rng, n, p);
    let rho = radius * rng.random::<f64>().powf(1.0 / n as f64);
    center.iter().zip(d).map(|(c, di)| c + rho * di).collect()
}

/// Gaussian draw normalized to unit weighted `p`-norm
/// `(sum w_i |d_i|^p)^(1/p)`.
pub fn unit_weighted_direction(rng: &mut SampleRng, weights: &[f64], p: f64) -> Vec<f64> {
    loop {
        let g = gaussian(rng, weights.len());
        let norm = kernel::norm(&g, Some(weights), p);
        if norm > 1e-12 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Point of the closed weighted `p`-norm ball around `center`.
pub fn in_weighted_ball(rng: &mut SampleRng, center: &[f64], weights: &[f64], radius: f64, p: f64) -> Vec<f64> {
    let d = unit_weighted_direction(rng, weights, p);
    let rho = radius * rng.random::<f64>().powf(1.0 / center.len() as f64);
    center.iter().zip(d).map(|(c, di)| c + rho * di).collect()
}

/// `±e_i` for every coordinate.
pub fn axis_directions(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = sign;
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = gaussian(&mut seeded(7), 5);
        let b = gaussian(&mut seeded(7), 5);
        assert_eq!(a, b);
        assert_ne!(gaussian(&mut substream(7, 0), 5), gaussian(&mut substream(7, 1), 5));
    }

    #[test]
    fn unit_directions_have_unit_norm() {
        let mut rng = seeded(1);
        for p in [1.5, 2.0, 3.0] {
            let d = unit_direction(&mut rng, 4, p);
            assert!((kernel::norm(&d, None, p) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = seeded(3);
        let c = [1.0, -2.0, 0.5];
        for _ in 0..200 {
            let x = in_ball(&mut rng, &c, 0.3, 3.0);
            let diff: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
            assert!(kernel::norm(&diff, None, 3.0) <= 0.3 + 1e-12);
        }
        let w = [0.5, 2.0, 1.5];
        for _ in 0..200 {
            let x = in_weighted_ball(&mut rng, &c, &w, 0.3, 1.5);
            let diff: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
            assert!(kernel::norm(&diff, Some(&w), 1.5) <= 0.3 + 1e-12);
        }
        let d = unit_weighted_direction(&mut rng, &w, 3.0);
        assert!((kernel::norm(&d, Some(&w), 3.0) - 1.0).abs() < 1e-14);
    }
}
