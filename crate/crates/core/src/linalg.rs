//! Dense complex linear algebra at desk scale: one-sided Jacobi SVD and a
//! Hermitian eigensolver built on the real symmetric embedding.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::DenseOperator;

const JACOBI_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

/// Thin SVD `a = u · diag(sigma) · v*` with `sigma` nonincreasing.
///
/// For an `m x n` input, `u` is `m x k`, `v` is `n x k`, `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseOperator,
    pub sigma: Vec<f64>,
    pub v: DenseOperator,
}

pub fn svd(a: &DenseOperator) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut vcols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= JACOBI_EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column j by the phase of gamma so the 2x2 Gram block is real.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, i, j, phase, c, s);
                rotate(&mut vcols, i, j, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut u = DenseOperator::zeros(m, n);
    let mut v = DenseOperator::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        for r in 0..m {
            let val = if s > 0.0 { cols[j][r] / s } else { Complex64::new(0.0, 0.0) };
            u.set(r, k, val);
        }
        for r in 0..n {
            v.set(r, k, vcols[j][r]);
        }
    }
    Svd { u, sigma, v }
}

fn rotate(cols: &mut [Vec<Complex64>], i: usize, j: usize, phase: Complex64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    let ci = &mut left[i];
    let cj = &mut right[0];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let yp = *y * phase;
        let xi = *x;
        *x = xi * c - yp * s;
        *y = xi * s + yp * c;
    }
}

/// Singular values only, nonincreasing.
pub fn singular_values(a: &DenseOperator) -> Vec<f64> {
    svd(a).sigma
}

/// Eigen-decomposition of a Hermitian matrix via its real symmetric
/// embedding `[[Re A, -Im A], [Im A, Re A]]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    dim: usize,
    /// Eigenvalues of the `2n x 2n` embedding, ascending (each eigenvalue of A twice).
    embedded_values: Vec<f64>,
    /// Column-major eigenvectors of the embedding.
    embedded_vectors: Vec<f64>,
}

impl HermitianEigen {
    pub fn new(a: &DenseOperator) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
        let skew = a.sub(&a.adjoint())?.frobenius_norm();
        if skew > 1e-10 * scale {
            return Err(Error::InvalidOperator(format!(
                "matrix is not Hermitian (‖a - a*‖ = {skew:e})"
            )));
        }
        let dim = 2 * n;
        let mut m = vec![0.0; dim * dim];
        for r in 0..n {
            for c in 0..n {
                // Symmetrize so rounding in the input cannot break the solver.
                let z = 0.5 * (a.get(r, c) + a.get(c, r).conj());
                m[r * dim + c] = z.re;
                m[(r + n) * dim + (c + n)] = z.re;
                m[(r + n) * dim + c] = z.im;
                m[r * dim + (c + n)] = -z.im;
            }
        }
        let (values, vectors) = symmetric_jacobi(m, dim);
        Ok(Self {
            dim: n,
            embedded_values: values,
            embedded_vectors: vectors,
        })
    }

    /// Eigenvalues of A, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.embedded_values
            .chunks(2)
            .map(|pair| 0.5 * (pair[0] + pair[1]))
            .collect()
    }

    /// `f(A) = Q diag(f(λ)) Q*`, assembled from the embedding.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> DenseOperator {
        let n = self.dim;
        let dim = 2 * n;
        let fv: Vec<f64> = self.embedded_values.iter().map(|&l| f(l)).collect();
        let w = &self.embedded_vectors;
        let entry = |r: usize, c: usize| -> f64 { (0..dim).map(|k| w[k * dim + r] * fv[k] * w[k * dim + c]).sum() };
        let mut out = DenseOperator::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, Complex64::new(entry(r, c), entry(r + n, c)));
            }
        }
        out
    }
}

/// Cyclic Jacobi for a dense real symmetric matrix (row-major input).
///
/// Returns eigenvalues ascending and eigenvectors stored so that
/// `vectors[k * n + r]` is component `r` of eigenvector `k`.
fn symmetric_jacobi(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        w[i * n + i] = 1.0;
    }
    let fro: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[r * n + c].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_EPS * fro || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let wkp = w[k * n + p];
                    let wkq = w[k * n + q];
                    w[k * n + p] = c * wkp - s * wkq;
                    w[k * n + q] = s * wkp + c * wkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (slot, &k) in order.iter().enumerate() {
        for r in 0..n {
            vectors[slot * n + r] = w[r * n + k];
        }
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{random_gaussian, random_unitary, trial_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn svd_of_nilpotent() {
        let a = DenseOperator::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let s = svd(&a);
        assert!((s.sigma[0] - 1.0).abs() < 1e-15);
        assert!(s.sigma[1].abs() < 1e-15);
    }

    #[test]
    fn svd_reconstructs_rectangular_inputs() {
        for (seed, (m, n)) in [(2, 5), (5, 2), (4, 4), (1, 3), (6, 1)].into_iter().enumerate() {
            let mut rng = trial_rng(11, seed as u64);
            let a = random_gaussian(&mut rng, m, n);
            let s = svd(&a);
            let k = m.min(n);
            assert_eq!(s.sigma.len(), k);
            let mut diag = DenseOperator::zeros(k, k);
            for i in 0..k {
                diag.set(i, i, c(s.sigma[i], 0.0));
            }
            let back = s.u.compose(&diag).unwrap().compose(&s.v.adjoint()).unwrap();
            assert!(back.sub(&a).unwrap().frobenius_norm() < 1e-12 * a.frobenius_norm());
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn svd_matches_nalgebra_reference() {
        for trial in 0..20 {
            let mut rng = trial_rng(5, trial);
            let n = 2 + (trial as usize % 7);
            let a = random_gaussian(&mut rng, n, n);
            let reference = nalgebra::DMatrix::from_fn(n, n, |r, cc| a.get(r, cc));
            let mut expected: Vec<f64> = reference.singular_values().iter().copied().collect();
            expected.sort_by(|x, y| y.total_cmp(x));
            let got = singular_values(&a);
            for (g, e) in got.iter().zip(&expected) {
                assert!((g - e).abs() <= 1e-10 * e.max(1e-300) + 1e-13, "{g} vs {e}");
            }
        }
    }

    #[test]
    fn hermitian_eigen_of_unitary_conjugated_diagonal() {
        let mut rng = trial_rng(3, 0);
        let u = random_unitary(&mut rng, 5);
        let d = DenseOperator::diagonal(&[c(-2.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(3.0, 0.0), c(7.0, 0.0)]);
        let a = u.compose(&d).unwrap().compose(&u.adjoint()).unwrap();
        let eig = HermitianEigen::new(&a).unwrap();
        let vals = eig.eigenvalues();
        for (g, e) in vals.iter().zip([-2.0, 0.5, 1.0, 3.0, 7.0]) {
            assert!((g - e).abs() < 1e-12, "{g} vs {e}");
        }
        let back = eig.apply(|x| x);
        assert!(back.sub(&a).unwrap().frobenius_norm() < 1e-12);
        let sq = eig.apply(|x| x * x);
        assert!(sq.sub(&a.compose(&a).unwrap()).unwrap().frobenius_norm() < 1e-10);
    }

    #[test]
    fn hermitian_eigen_rejects_non_hermitian() {
        let a = DenseOperator::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(HermitianEigen::new(&a).is_err());
        let r = DenseOperator::zeros(2, 3);
        assert!(matches!(HermitianEigen::new(&r), Err(Error::NonSquare { .. })));
    }
}
