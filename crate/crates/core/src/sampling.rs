//! Seeded random matrices: GUE samples, Haar unitaries and per-trial seeds.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::frobenius;
use crate::matalg::MatrixTuple;
use crate::scalar::{cr, CMat, Real};

/// Generator used for every seeded experiment.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`; independent of scheduling order.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0xA5A5_A5A5)))
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = StandardNormal.sample(rng);
    T::lit(x)
}

/// GUE sample: real standard normal diagonal, standard complex normal
/// (`E|z|^2 = 1`) off-diagonal entries, hermitian by construction.
pub fn gue<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat<T> {
    let half = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut m = CMat::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = cr(normal(rng));
        for j in (i + 1)..d {
            let re: T = normal(rng);
            let im: T = normal(rng);
            let z = Complex::new(re * half, im * half);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn gue_tuple<T: Real, R: Rng + ?Sized>(d: usize, len: usize, rng: &mut R) -> MatrixTuple<T> {
    MatrixTuple::from_hermitian(d, (0..len).map(|_| gue(d, rng)).collect())
}

/// GUE tuple rescaled to tuple norm `radius`.
pub fn gue_direction<T: Real, R: Rng + ?Sized>(
    d: usize,
    len: usize,
    radius: T,
    rng: &mut R,
) -> MatrixTuple<T> {
    let g = gue_tuple::<T, _>(d, len, rng);
    let norm = g.norm();
    let zero = MatrixTuple::zeros(d, len);
    zero.add_scaled(&g, radius / norm)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat<T> {
    let half = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let g = CMat::<T>::from_fn(d, d, |_, _| {
        let re: T = normal(rng);
        let im: T = normal(rng);
        Complex::new(re * half, im * half)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let modulus = rjj.norm_sqr().sqrt();
        if modulus > T::zero() {
            let phase = rjj.unscale(modulus);
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// `|u* u - 1|_F`.
pub fn unitarity_defect<T: Real>(u: &CMat<T>) -> T {
    let n = u.nrows();
    frobenius(&(u.adjoint() * u - CMat::identity(n, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gue_is_hermitian_and_reproducible() {
        let a: CMat<f64> = gue(4, &mut rng_from_seed(7));
        let b: CMat<f64> = gue(4, &mut rng_from_seed(7));
        assert_eq!(a, b);
        assert_eq!(a.adjoint(), a);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_from_seed(3);
        for d in 1..6 {
            let u: CMat<f64> = haar_unitary(d, &mut rng);
            assert!(unitarity_defect(&u) < 1e-12);
        }
    }

    #[test]
    fn trial_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
    }

    #[test]
    fn direction_has_requested_norm() {
        let t: MatrixTuple<f64> = gue_direction(3, 2, 1e-3, &mut rng_from_seed(1));
        assert!((t.norm() - 1e-3).abs() < 1e-15);
    }
}
