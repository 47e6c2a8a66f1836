//! Compact operator representations and their singular-value spectra.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::orlicz::OrliczFunction;

/// Relative tolerance for grouping equal singular values.
pub const MULTIPLICITY_REL_TOL: f64 = 1e-8;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidOperator(format!("dimensions must be positive, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidOperator(format!("non-finite entry at index {i}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, re: &[f64]) -> Result<Self> {
        Self::new(rows, cols, re.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.data[r * self.cols + c] = z;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(self)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

/// `x e_n = a_n e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    diag: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn new(diag: Vec<Complex64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidOperator("diagonal must have at least one entry".into()));
        }
        if let Some(i) = diag.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidOperator(format!("non-finite diagonal entry at index {i}")));
        }
        Ok(Self { diag })
    }

    pub fn from_real(diag: &[f64]) -> Result<Self> {
        Self::new(diag.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn to_dense(&self) -> DenseOperator {
        DenseOperator::diagonal(&self.diag)
    }
}

/// `ξ ↦ ⟨h, ξ⟩ e` for unit vectors `e`, `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneOperator {
    e: Vec<Complex64>,
    h: Vec<Complex64>,
}

impl RankOneOperator {
    pub fn new(e: Vec<Complex64>, h: Vec<Complex64>) -> Result<Self> {
        if e.len() != h.len() || e.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "rank-one vectors must share a positive dimension, got {} and {}",
                e.len(),
                h.len()
            )));
        }
        for (name, v) in [("e", &e), ("h", &h)] {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidOperator(format!("{name} must be a unit vector, has norm {norm}")));
            }
        }
        Ok(Self { e, h })
    }

    /// `e_k ⊗ e_k` in dimension `n`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidOperator(format!("basis index {k} out of range for dimension {n}")));
        }
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = Complex64::new(1.0, 0.0);
        Self::new(e.clone(), e)
    }

    pub fn e(&self) -> &[Complex64] {
        &self.e
    }

    pub fn h(&self) -> &[Complex64] {
        &self.h
    }

    /// The matrix `e h*`.
    pub fn to_dense(&self) -> DenseOperator {
        let n = self.e.len();
        let mut m = DenseOperator::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, self.e[r] * self.h[c].conj());
            }
        }
        m
    }
}

/// Two-sided bound on `Σ_{n >= N} φ(c · s(n))`, the part of a modular left
/// out after summing the first `N` terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBracket {
    pub lower: f64,
    pub upper: f64,
}

impl TailBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

type SingularFormula = dyn Fn(usize) -> f64 + Send + Sync;
type TailFormula = dyn Fn(usize, f64, &OrliczFunction) -> Option<TailBracket> + Send + Sync;

/// Operator given spectrally: singular values `s(n)`, `n >= 0`, plus a tail
/// bracket for the modular. The library never infers decay on its own.
#[derive(Clone)]
pub struct AnalyticOperator {
    name: String,
    singular: Arc<SingularFormula>,
    tail: Arc<TailFormula>,
}

impl AnalyticOperator {
    pub fn new<S, T>(name: impl Into<String>, singular: S, tail: T) -> Self
    where
        S: Fn(usize) -> f64 + Send + Sync + 'static,
        T: Fn(usize, f64, &OrliczFunction) -> Option<TailBracket> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            singular: Arc::new(singular),
            tail: Arc::new(tail),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn singular_value(&self, n: usize) -> f64 {
        (self.singular)(n)
    }

    /// Bracket for `Σ_{n >= terms} φ(c · s(n))`; `None` if no bound is known
    /// for `φ`. An infinite lower bound certifies divergence.
    pub fn tail_bracket(&self, terms: usize, c: f64, f: &OrliczFunction) -> Option<TailBracket> {
        (self.tail)(terms, c, f)
    }

    /// Upper bound for `Σ_{n >= terms} φ(c · s(n))`.
    pub fn tail_bound(&self, terms: usize, c: f64, f: &OrliczFunction) -> Option<f64> {
        self.tail_bracket(terms, c, f).map(|b| b.upper)
    }

    /// Checks monotonicity of `s` and of the tail bound on the given sample indices.
    pub fn validate(&self, samples: &[usize], f: &OrliczFunction) -> Result<()> {
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            let (a, b) = (self.singular_value(w[0]), self.singular_value(w[1]));
            if !(a >= b && b >= 0.0) {
                return Err(Error::InvalidOperator(format!(
                    "{}: singular values not nonincreasing at n={} -> {}",
                    self.name, w[0], w[1]
                )));
            }
            if let (Some(ta), Some(tb)) = (self.tail_bound(w[0], 1.0, f), self.tail_bound(w[1], 1.0, f)) {
                if tb > ta {
                    return Err(Error::InvalidOperator(format!(
                        "{}: tail bound increases between N={} and N={}",
                        self.name, w[0], w[1]
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AnalyticOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticOperator").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum CompactOperator {
    Dense(DenseOperator),
    Diagonal(DiagonalOperator),
    Analytic(AnalyticOperator),
    RankOne(RankOneOperator),
}

impl CompactOperator {
    pub fn is_finite_rank(&self) -> bool {
        !matches!(self, CompactOperator::Analytic(_))
    }

    /// Dense matrix for finite representations.
    pub fn to_dense(&self) -> Option<DenseOperator> {
        match self {
            CompactOperator::Dense(d) => Some(d.clone()),
            CompactOperator::Diagonal(d) => Some(d.to_dense()),
            CompactOperator::RankOne(r) => Some(r.to_dense()),
            CompactOperator::Analytic(_) => None,
        }
    }

    /// All singular values of a finite representation, nonincreasing.
    pub(crate) fn finite_singular_values(&self) -> Option<Vec<f64>> {
        match self {
            CompactOperator::Dense(d) => Some(d.singular_values()),
            CompactOperator::Diagonal(d) => {
                let mut v: Vec<f64> = d.entries().iter().map(|z| z.norm()).collect();
                v.sort_by(|a, b| b.total_cmp(a));
                Some(v)
            }
            CompactOperator::RankOne(_) => Some(vec![1.0]),
            CompactOperator::Analytic(_) => None,
        }
    }
}

impl From<DenseOperator> for CompactOperator {
    fn from(d: DenseOperator) -> Self {
        CompactOperator::Dense(d)
    }
}

impl From<DiagonalOperator> for CompactOperator {
    fn from(d: DiagonalOperator) -> Self {
        CompactOperator::Diagonal(d)
    }
}

impl From<AnalyticOperator> for CompactOperator {
    fn from(a: AnalyticOperator) -> Self {
        CompactOperator::Analytic(a)
    }
}

impl From<RankOneOperator> for CompactOperator {
    fn from(r: RankOneOperator) -> Self {
        CompactOperator::RankOne(r)
    }
}

/// Nonincreasing singular values with multiplicity groups.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularSpectrum {
    /// Every singular value, repeated according to multiplicity.
    pub values: Vec<f64>,
    /// Sizes of consecutive groups of (numerically) equal values.
    pub multiplicities: Vec<usize>,
    pub truncated_at: Option<usize>,
}

impl SingularSpectrum {
    pub fn from_values(mut values: Vec<f64>, truncated_at: Option<usize>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let multiplicities = group_multiplicities(&values);
        Self {
            values,
            multiplicities,
            truncated_at,
        }
    }

    /// `(value, multiplicity)` per group, leading value of each group.
    pub fn groups(&self) -> Vec<(f64, usize)> {
        let mut start = 0;
        self.multiplicities
            .iter()
            .map(|&m| {
                let g = (self.values[start], m);
                start += m;
                g
            })
            .collect()
    }
}

/// Greedy grouping from the largest value down at relative tolerance
/// [`MULTIPLICITY_REL_TOL`]. Input must be nonincreasing.
pub fn group_multiplicities(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let lead = values[i];
        let mut j = i + 1;
        while j < values.len() && lead - values[j] <= MULTIPLICITY_REL_TOL * lead {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out
}

/// Singular values of any representation. `max_terms` only binds for
/// analytic operators.
pub fn singular_values(op: &CompactOperator, max_terms: usize) -> Result<SingularSpectrum> {
    if max_terms == 0 {
        return Err(Error::Domain("max_terms must be at least 1".into()));
    }
    match op {
        CompactOperator::Analytic(a) => {
            let values: Vec<f64> = (0..max_terms).map(|n| a.singular_value(n)).collect();
            if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::InvalidOperator(format!("{}: invalid singular value at n={i}", a.name())));
            }
            Ok(SingularSpectrum::from_values(values, Some(max_terms)))
        }
        _ => Ok(SingularSpectrum::from_values(
            op.finite_singular_values().expect("finite representation"),
            None,
        )),
    }
}

pub fn adjoint(op: &DenseOperator) -> DenseOperator {
    op.adjoint()
}

pub fn compose(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    a.compose(b)
}

pub fn trace(op: &DenseOperator) -> Result<Complex64> {
    op.trace()
}

/// `s_1`, the largest singular value.
pub fn operator_norm(op: &CompactOperator) -> f64 {
    match op {
        CompactOperator::Analytic(a) => a.singular_value(0),
        _ => op
            .finite_singular_values()
            .and_then(|v| v.first().copied())
            .unwrap_or(0.0),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    #[serde(default)]
    im: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalFile {
    diag_re: Vec<f64>,
    #[serde(default)]
    diag_im: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OperatorFile {
    Matrix(MatrixFile),
    Diagonal(DiagonalFile),
}

fn combine(re: Vec<f64>, im: Option<Vec<f64>>, what: &str) -> Result<Vec<Complex64>> {
    let im = im.unwrap_or_else(|| vec![0.0; re.len()]);
    if im.len() != re.len() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: real part has {} entries, imaginary part {}",
            re.len(),
            im.len()
        )));
    }
    Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
}

/// Parses the matrix (`rows`/`cols`/`re`/`im`) or diagonal
/// (`diag_re`/`diag_im`) JSON formats.
pub fn parse_operator_json(text: &str) -> Result<CompactOperator> {
    let file: OperatorFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "operator JSON must be {{\"rows\",\"cols\",\"re\"[,\"im\"]}} or {{\"diag_re\"[,\"diag_im\"]}}: {e}"
        ))
    })?;
    match file {
        OperatorFile::Matrix(m) => {
            let data = combine(m.re, m.im, "matrix")?;
            Ok(DenseOperator::new(m.rows, m.cols, data)?.into())
        }
        OperatorFile::Diagonal(d) => Ok(DiagonalOperator::new(combine(d.diag_re, d.diag_im, "diagonal")?)?.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{random_gaussian, random_unitary, trial_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_value_examples() {
        let a: CompactOperator = DenseOperator::from_real(2, 2, &[3.0, 0.0, 0.0, -4.0]).unwrap().into();
        let s = singular_values(&a, 1).unwrap();
        assert!((s.values[0] - 4.0).abs() < 1e-14 && (s.values[1] - 3.0).abs() < 1e-14);
        assert_eq!(s.multiplicities, vec![1, 1]);
        assert_eq!(s.truncated_at, None);

        let n: CompactOperator = DenseOperator::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap().into();
        let s = singular_values(&n, 1).unwrap();
        assert_eq!(s.values.len(), 2);
        assert!((s.values[0] - 1.0).abs() < 1e-15 && s.values[1].abs() < 1e-15);

        let mut rng = trial_rng(9, 0);
        let e = crate::ensemble::random_unit_vector(&mut rng, 4);
        let h = crate::ensemble::random_unit_vector(&mut rng, 4);
        let r: CompactOperator = RankOneOperator::new(e, h).unwrap().into();
        assert_eq!(singular_values(&r, 1).unwrap().values, vec![1.0]);
        let dense_r = r.to_dense().unwrap().singular_values();
        assert!((dense_r[0] - 1.0).abs() < 1e-13 && dense_r[1..].iter().all(|&x| x < 1e-13));
    }

    #[test]
    fn multiplicity_grouping() {
        let d: CompactOperator = DiagonalOperator::from_real(&[1.0, -2.0, 1.0 + 1e-12, 0.0, 0.0, 2.0]).unwrap().into();
        let s = singular_values(&d, 1).unwrap();
        assert_eq!(s.multiplicities, vec![2, 2, 2]);
        assert_eq!(s.groups()[1].1, 2);
        assert_eq!(s.multiplicities.iter().sum::<usize>(), s.values.len());
    }

    #[test]
    fn adjoint_examples() {
        let a = DenseOperator::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(adjoint(&a), DenseOperator::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap());
        let b = DenseOperator::new(2, 2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(b.adjoint().get(0, 0), c(0.0, -1.0));
        let g = random_gaussian(&mut trial_rng(1, 1), 3, 5);
        assert_eq!(g.adjoint().adjoint(), g);
    }

    #[test]
    fn compose_examples() {
        let a = DenseOperator::diagonal(&[c(2.0, 0.0), c(1.0, 0.0)]);
        let b = DenseOperator::diagonal(&[c(3.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(compose(&a, &b).unwrap(), DenseOperator::diagonal(&[c(6.0, 0.0), c(0.0, 0.0)]));
        let mut rng = trial_rng(2, 0);
        let x = random_gaussian(&mut rng, 3, 4);
        let y = random_gaussian(&mut rng, 4, 2);
        assert_eq!(DenseOperator::identity(3).compose(&x).unwrap(), x);
        let lhs = x.compose(&y).unwrap().adjoint();
        let rhs = y.adjoint().compose(&x.adjoint()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() < 1e-13);
        assert!(matches!(compose(&x, &x), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn trace_examples() {
        let d = DenseOperator::diagonal(&[c(3.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(trace(&d).unwrap(), c(7.0, 0.0));
        let n = DenseOperator::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(trace(&n).unwrap(), c(0.0, 0.0));
        assert!(matches!(trace(&DenseOperator::zeros(2, 3)), Err(Error::NonSquare { .. })));

        let p = crate::ensemble::random_positive(&mut trial_rng(4, 4), 5);
        let sum: f64 = p.singular_values().iter().sum();
        assert!((trace(&p).unwrap().re - sum).abs() < 1e-10 * sum);
    }

    #[test]
    fn operator_norm_examples() {
        let d: CompactOperator = DiagonalOperator::from_real(&[3.0, 4.0]).unwrap().into();
        assert_eq!(operator_norm(&d), 4.0);
        let r: CompactOperator = RankOneOperator::basis(3, 1).unwrap().into();
        assert_eq!(operator_norm(&r), 1.0);
        let z: CompactOperator = DenseOperator::zeros(3, 3).into();
        assert_eq!(operator_norm(&z), 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(DenseOperator::new(2, 2, vec![c(f64::NAN, 0.0); 4]).is_err());
        assert!(matches!(DenseOperator::new(2, 2, vec![c(1.0, 0.0); 3]), Err(Error::DimensionMismatch(_))));
        assert!(DiagonalOperator::from_real(&[1.0, f64::INFINITY]).is_err());
        assert!(RankOneOperator::new(vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(singular_values(&DiagonalOperator::from_real(&[1.0]).unwrap().into(), 0).is_err());
    }

    #[test]
    fn unitary_invariance_and_adjoint_symmetry() {
        for trial in 0..30 {
            let mut rng = trial_rng(17, trial);
            let n = 2 + (trial as usize % 7);
            let x = random_gaussian(&mut rng, n, n);
            let u = random_unitary(&mut rng, n);
            let s = x.singular_values();
            for other in [
                u.compose(&x).unwrap(),
                x.compose(&u).unwrap(),
                x.adjoint(),
            ] {
                for (a, b) in s.iter().zip(other.singular_values()) {
                    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
                }
            }
            let conj = u.adjoint().compose(&x).unwrap().compose(&u).unwrap();
            assert!((conj.trace().unwrap() - x.trace().unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn horn_product_inequality() {
        for trial in 0..40 {
            let mut rng = trial_rng(23, trial);
            let n = 2 + (trial as usize % 7);
            let x = random_gaussian(&mut rng, n, n);
            let y = random_gaussian(&mut rng, n, n);
            let sx = x.singular_values();
            let sy = y.singular_values();
            let sxy = x.compose(&y).unwrap().singular_values();
            for i in 0..n {
                for j in 0..n - i {
                    // zero-based: s_{i+j}(xy) <= s_i(x) s_j(y)
                    assert!(sxy[i + j] <= sx[i] * sy[j] * (1.0 + 1e-10) + 1e-12, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn svd_residual() {
        for trial in 0..20 {
            let mut rng = trial_rng(29, trial);
            let n = 2 + (trial as usize % 7);
            let x = random_gaussian(&mut rng, n, n);
            let svd = linalg::svd(&x);
            let gram = x.adjoint().compose(&x).unwrap();
            for k in 0..n {
                let v = DenseOperator::new(n, 1, (0..n).map(|r| svd.v.get(r, k)).collect()).unwrap();
                let lhs = gram.compose(&v).unwrap();
                let rhs = v.scale(c(svd.sigma[k] * svd.sigma[k], 0.0));
                assert!(lhs.sub(&rhs).unwrap().frobenius_norm() <= 1e-8 * gram.frobenius_norm().max(1.0));
            }
        }
    }

    #[test]
    fn json_formats() {
        let m = parse_operator_json(r#"{"rows":2,"cols":2,"re":[3,0,0,-4]}"#).unwrap();
        assert_eq!(operator_norm(&m), 4.0);
        let m = parse_operator_json(r#"{"rows":1,"cols":2,"re":[0,0],"im":[1,0]}"#).unwrap();
        assert!((operator_norm(&m) - 1.0).abs() < 1e-15);
        let d = parse_operator_json(r#"{"diag_re":[1,2],"diag_im":[0,0]}"#).unwrap();
        assert!(matches!(d, CompactOperator::Diagonal(_)));
        assert!(matches!(
            parse_operator_json(r#"{"rows":2,"cols":2,"re":[1,2,3]}"#),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_operator_json(r#"{"rows":1,"cols":1,"re":[1],"im":[1,2]}"#),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(parse_operator_json("{\"foo\":1}"), Err(Error::Parse(_))));
    }
}
