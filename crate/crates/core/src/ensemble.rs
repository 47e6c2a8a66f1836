//! Seeded random matrix ensembles for the verification harness.
//!
//! Entries have independent standard normal real and imaginary parts.
//! Every trial draws from its own ChaCha stream so results do not depend on
//! the order in which trials are executed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operators::DenseOperator;

pub type TrialRng = ChaCha8Rng;

/// RNG for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DenseOperator {
    let data = (0..rows * cols).map(|_| random_complex(rng)).collect();
    DenseOperator::new(rows, cols, data).expect("finite gaussian entries")
}

/// Dimension in `2..=8`.
pub fn random_dim<R: Rng + ?Sized>(rng: &mut R) -> usize {
    rng.random_range(2..=8)
}

/// Unitary from modified Gram-Schmidt (two passes) on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseOperator {
    loop {
        let g = random_gaussian(rng, n, n);
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g.get(i, j)).collect()).collect();
        let mut ok = true;
        for j in 0..n {
            for _ in 0..2 {
                for k in 0..j {
                    let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                    let qk = cols[k].clone();
                    for (x, q) in cols[j].iter_mut().zip(&qk) {
                        *x -= proj * q;
                    }
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
        if ok {
            let mut u = DenseOperator::zeros(n, n);
            for (j, col) in cols.iter().enumerate() {
                for (i, &z) in col.iter().enumerate() {
                    u.set(i, j, z);
                }
            }
            return u;
        }
    }
}

/// Positive semidefinite `a* a` for Gaussian `a`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseOperator {
    let a = random_gaussian(rng, n, n);
    a.adjoint().compose(&a).expect("square")
}

/// Diagonal operator with Gaussian complex entries.
pub fn random_diagonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseOperator {
    let d: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
    DenseOperator::diagonal(&d)
}

/// Unit vector of dimension `n`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}
