//! Modulars, the Luxemburg norm, the Orlicz (Amemiya) norm and membership
//! in the Orlicz operator classes.
//!
//! For a compact operator `x` with singular values `s_n` and an Orlicz
//! function φ:
//!
//! * modular: `Tr φ(λx) = Σ φ(λ s_n)`
//! * Luxemburg norm: `inf { λ > 0 : Tr φ(x/λ) <= 1 }`
//! * Amemiya norm: `inf_k (1 + Tr φ(kx)) / k`, equal to the Orlicz norm
//!   `sup { Tr|xy| : Tr ψ(y) <= 1 }`
//!
//! Analytic operators are summed until their tail bracket is narrower than
//! the requested tolerance, so every value carries a rigorous error bar.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{AnalyticOperator, CompactOperator, DiagonalOperator, TailBracket};
use crate::optimize::{bisect_increasing, golden_section_min, CompensatedSum, MAX_BISECTION_ITERS};
use crate::orlicz::{ConjugateMode, Family, OrliczFunction, YoungFunction};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_EPS_TAIL: f64 = 1e-11;

/// Cap on summed terms for analytic operators.
pub const MAX_ANALYTIC_TERMS: usize = 1 << 24;

const FIRST_ANALYTIC_CHUNK: usize = 64;
const MAX_DOUBLINGS: usize = 1100;

/// `Tr φ(λx)`; the true value lies in `[value, value + tail_bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModularValue {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

impl ModularValue {
    /// Centre of the enclosing interval.
    pub fn estimate(&self) -> f64 {
        self.value + 0.5 * self.tail_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    Bisection,
    KEquation,
    GoldenSection,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub iterations: usize,
    pub bracket_width: f64,
    pub method: NormMethod,
}

impl NormResult {
    fn closed_form(value: f64) -> Self {
        Self {
            value,
            iterations: 0,
            bracket_width: 0.0,
            method: NormMethod::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipRationale {
    FiniteRank,
    Delta2Collapse,
    TailComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub in_s_phi: bool,
    pub in_e_phi: bool,
    pub witness_lambda: Option<f64>,
    pub rationale: MembershipRationale,
    pub detail: String,
}

/// Singular values as consumed by the norm routines.
enum Spectrum<'a> {
    Finite(Vec<f64>),
    Analytic(&'a AnalyticOperator),
}

impl<'a> Spectrum<'a> {
    fn of(op: &'a CompactOperator) -> Self {
        match op {
            CompactOperator::Analytic(a) => Spectrum::Analytic(a),
            other => Spectrum::Finite(other.finite_singular_values().expect("finite representation")),
        }
    }

    fn top(&self) -> f64 {
        match self {
            Spectrum::Finite(v) => v.first().copied().unwrap_or(0.0),
            Spectrum::Analytic(a) => a.singular_value(0),
        }
    }

    fn is_zero(&self) -> bool {
        self.top() == 0.0
    }

    /// `Σ term(s_n)`, with `tail(N)` bracketing the terms from index `N` on.
    fn sum<T, B>(&self, term: T, tail: B, eps_tail: f64) -> Result<ModularValue>
    where
        T: Fn(f64) -> f64,
        B: Fn(&AnalyticOperator, usize) -> Result<TailBracket>,
    {
        match self {
            Spectrum::Finite(values) => {
                let s: CompensatedSum = values.iter().map(|&v| term(v)).collect();
                Ok(ModularValue {
                    value: s.value(),
                    terms_used: values.len(),
                    tail_bound: 0.0,
                })
            }
            Spectrum::Analytic(a) => {
                let mut partial = CompensatedSum::new();
                let mut n = 0;
                let mut target = FIRST_ANALYTIC_CHUNK;
                loop {
                    while n < target {
                        partial.add(term(a.singular_value(n)));
                        n += 1;
                    }
                    let bracket = tail(a, n)?;
                    if bracket.lower.is_infinite() {
                        return Err(Error::Divergent { terms_used: n });
                    }
                    let current = ModularValue {
                        value: partial.value() + bracket.lower,
                        terms_used: n,
                        tail_bound: bracket.width().max(0.0),
                    };
                    if current.tail_bound < eps_tail {
                        return Ok(current);
                    }
                    if target >= MAX_ANALYTIC_TERMS {
                        return Err(Error::Truncation { partial: current });
                    }
                    target = (target * 2).min(MAX_ANALYTIC_TERMS);
                }
            }
        }
    }

    fn modular<F: YoungFunction + ?Sized>(&self, f: &F, lambda: f64, eps_tail: f64) -> Result<ModularValue> {
        self.sum(
            |s| f.value(lambda * s),
            |a, n| {
                let fam = family_for_tail(f, a)?;
                a.tail_bracket(n, lambda, fam)
                    .ok_or_else(|| no_tail_bound(a, fam))
            },
            eps_tail,
        )
    }

    /// `Σ ψ(h(k s_n))`, the left side of the Amemiya stationarity equation.
    fn conjugate_sum<F: YoungFunction + ?Sized>(&self, f: &F, k: f64, eps_tail: f64) -> Result<ModularValue> {
        self.sum(
            |s| f.conjugate_at_derivative(k * s),
            |a, n| {
                let fam = family_for_tail(f, a)?;
                let b = a.tail_bracket(n, k, fam).ok_or_else(|| no_tail_bound(a, fam))?;
                let (lo, hi) = conjugate_ratio_bounds(fam, k * a.singular_value(n));
                Ok(TailBracket {
                    lower: lo * b.lower,
                    upper: hi * b.upper,
                })
            },
            eps_tail,
        )
    }
}

fn family_for_tail<'f, F: YoungFunction + ?Sized>(f: &'f F, a: &AnalyticOperator) -> Result<&'f OrliczFunction> {
    f.as_family().ok_or_else(|| {
        Error::Unsupported(format!(
            "{} carries tail bounds only for the parametric families, not {}",
            a.name(),
            f.label()
        ))
    })
}

fn no_tail_bound(a: &AnalyticOperator, f: &OrliczFunction) -> Error {
    Error::Unsupported(format!("{} has no tail bound for {f}", a.name()))
}

/// Constants `(lo, hi)` with `lo φ(v) <= v h(v) - φ(v) <= hi φ(v)` for `0 <= v <= v0`.
fn conjugate_ratio_bounds(f: &OrliczFunction, v0: f64) -> (f64, f64) {
    match f.family() {
        Family::Power { p } => (p - 1.0, p - 1.0),
        Family::ScaledPower { alpha } => (1.0 - 1.0 / alpha, 1.0 - 1.0 / alpha),
        // The Taylor coefficients of v sinh v - cosh v + 1 are (2k - 1) times
        // those of cosh v - 1, so the ratio rises from 1 at v = 0.
        Family::CoshMinusOne => {
            if v0 <= 0.0 {
                (1.0, 1.0)
            } else {
                (1.0, f.conjugate_at_derivative(v0) / f.value(v0))
            }
        }
    }
}

fn check_tol(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// `Tr φ(λx)`.
pub fn modular<F: YoungFunction + ?Sized>(
    op: &CompactOperator,
    f: &F,
    lambda: f64,
    eps_tail: f64,
) -> Result<ModularValue> {
    check_tol("lambda", lambda)?;
    check_tol("eps_tail", eps_tail)?;
    Spectrum::of(op).modular(f, lambda, eps_tail)
}

/// Whether `Tr φ(x/λ) > 1`, treating a certified divergence as `> 1`.
/// Allowance for rounding in `Tr φ(x/λ) <= 1`, so that `φ(φ⁻¹(1))` evaluating
/// one ulp above 1 does not reject the exact rank-one norm.
const ROUNDING_SLACK: f64 = 8.0 * f64::EPSILON;

fn modular_exceeds_one<F: YoungFunction + ?Sized>(
    spec: &Spectrum<'_>,
    f: &F,
    lambda: f64,
    eps_tail: f64,
) -> Result<bool> {
    match spec.modular(f, 1.0 / lambda, eps_tail) {
        Ok(m) => Ok(m.estimate() > 1.0 + ROUNDING_SLACK),
        Err(Error::Divergent { .. }) => Ok(true),
        Err(e) => Err(e),
    }
}

/// Luxemburg norm `inf { λ > 0 : Tr φ(x/λ) <= 1 }` by bisection.
///
/// The lower bracket is `s_1 / φ⁻¹(1)`, below which the leading term alone
/// pushes the modular past 1; the upper bracket is found by doubling. The
/// returned value is the upper end of the final bracket, so
/// `Tr φ(x / value) <= 1` holds as computed.
pub fn luxemburg_norm<F: YoungFunction + ?Sized>(op: &CompactOperator, f: &F, rel_tol: f64) -> Result<NormResult> {
    check_tol("rel_tol", rel_tol)?;
    let spec = Spectrum::of(op);
    luxemburg_on(&spec, f, rel_tol)
}

fn luxemburg_on<F: YoungFunction + ?Sized>(spec: &Spectrum<'_>, f: &F, rel_tol: f64) -> Result<NormResult> {
    if spec.is_zero() {
        return Ok(NormResult::closed_form(0.0));
    }
    let eps_tail = rel_tol / 10.0;
    let floor = spec.top() / f.inverse_value(1.0);
    if !modular_exceeds_one(spec, f, floor, eps_tail)? {
        return Ok(NormResult {
            value: floor,
            iterations: 0,
            bracket_width: 0.0,
            method: NormMethod::Bisection,
        });
    }
    let mut lo = floor;
    let mut hi = 2.0 * floor;
    let mut doublings = 0;
    while modular_exceeds_one(spec, f, hi, eps_tail)? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NotInClass(format!(
                "Tr {}(x/λ) exceeds 1 for every λ up to {hi:e}",
                f.label()
            )));
        }
    }
    let mut iterations = 0;
    while hi - lo > rel_tol * hi && iterations < MAX_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular_exceeds_one(spec, f, mid, eps_tail)? {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(NormResult {
        value: hi,
        iterations,
        bracket_width: hi - lo,
        method: NormMethod::Bisection,
    })
}

/// Amemiya norm `inf_k (1 + Tr φ(kx)) / k`.
///
/// The minimizer solves `Σ ψ(h(k s_n)) = 1`, which is found by bisection
/// in `k`. When that equation has no root (for example `φ(t) = t`), the
/// objective is minimized by golden-section search over `log k` in
/// `[1e-8, 1e8] / ‖x‖_φ`.
pub fn amemiya_norm<F: YoungFunction + ?Sized>(op: &CompactOperator, f: &F, rel_tol: f64) -> Result<NormResult> {
    check_tol("rel_tol", rel_tol)?;
    let spec = Spectrum::of(op);
    if spec.is_zero() {
        return Ok(NormResult::closed_form(0.0));
    }
    let eps_tail = rel_tol / 10.0;
    let objective = |k: f64| -> Result<f64> {
        let m = spec.modular(f, k, eps_tail)?;
        Ok((1.0 + m.estimate()) / k)
    };
    let stationarity = |k: f64| -> Result<f64> { Ok(spec.conjugate_sum(f, k, eps_tail)?.estimate()) };

    if let Some((lo, hi)) = bracket_unit_root(&stationarity, 1.0 / spec.top())? {
        let mut err = None;
        let b = bisect_increasing(
            |k| match stationarity(k) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            },
            1.0,
            lo,
            hi,
            rel_tol,
            MAX_BISECTION_ITERS,
        );
        if let Some(e) = err {
            return Err(e);
        }
        let g_lo = objective(b.lo)?;
        let g_hi = objective(b.hi)?;
        let value = objective(b.root)?.min(g_lo).min(g_hi);
        return Ok(NormResult {
            value,
            iterations: b.iterations,
            bracket_width: (g_lo - g_hi).abs(),
            method: NormMethod::KEquation,
        });
    }

    let scale = luxemburg_on(&spec, f, rel_tol)?.value;
    let lo = (1e-8 / scale).ln();
    let hi = (1e8 / scale).ln();
    let mut err = None;
    let g = golden_section_min(
        |t| match objective(t.exp()) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        rel_tol,
        MAX_BISECTION_ITERS,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(NormResult {
        value: g.min,
        iterations: g.iterations,
        bracket_width: (objective((g.argmin - 0.5 * g.width).exp())? - objective((g.argmin + 0.5 * g.width).exp())?)
            .abs(),
        method: NormMethod::GoldenSection,
    })
}

/// Brackets a root of `g(k) = 1` for nondecreasing `g` with `g(0) = 0`,
/// starting from `k0`. `None` when `g` never reaches 1.
fn bracket_unit_root<G>(g: &G, k0: f64) -> Result<Option<(f64, f64)>>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut hi = k0;
    let mut doublings = 0;
    while g(hi)? < 1.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 || !hi.is_finite() {
            return Ok(None);
        }
    }
    let mut lo = hi;
    let mut halvings = 0;
    while g(lo)? >= 1.0 {
        lo *= 0.5;
        halvings += 1;
        if halvings > 200 || lo == 0.0 {
            return Ok(None);
        }
    }
    Ok(Some((lo, hi)))
}

/// Maximum supported support size for the brute-force sup oracle.
pub const ORACLE_MAX_SUPPORT: usize = 6;

/// Brute-force Orlicz norm `sup { Σ s_n y_n : y >= 0, Σ ψ(y_n) <= 1 }` for a
/// small diagonal operator.
///
/// The budget `b_n = ψ(y_n)` is redistributed between pairs of coordinates:
/// each pairwise move scans `grid` points along the pair's budget segment and
/// refines the best cell by golden section. Sweeps repeat until no move
/// improves the objective, from every vertex of the budget simplex, its
/// barycentre, and the split proportional to `s`.
pub fn orlicz_norm_sup_oracle(op: &DiagonalOperator, f: &OrliczFunction, grid: usize) -> Result<f64> {
    if grid < 100 {
        return Err(Error::Domain(format!("oracle grid must be at least 100, got {grid}")));
    }
    let s: Vec<f64> = op.entries().iter().map(|z| z.norm()).filter(|&v| v > 0.0).collect();
    if s.len() > ORACLE_MAX_SUPPORT {
        return Err(Error::Unsupported(format!(
            "sup oracle handles at most {ORACLE_MAX_SUPPORT} nonzero entries, got {}",
            s.len()
        )));
    }
    if s.is_empty() {
        return Ok(0.0);
    }
    let psi = f.complementary();
    if psi.mode() == ConjugateMode::Indicator {
        // ψ = 0 on [0, 1]: every y_n may be 1.
        return Ok(s.iter().sum());
    }
    let n = s.len();
    let objective = |b: &[f64]| -> f64 { s.iter().zip(b).map(|(&si, &bi)| si * psi.inverse_value(bi.max(0.0))).sum() };

    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut b = vec![0.0; n];
            b[i] = 1.0;
            b
        })
        .collect();
    starts.push(vec![1.0 / n as f64; n]);
    let total: f64 = s.iter().sum();
    starts.push(s.iter().map(|v| v / total).collect());

    let mut best = 0.0f64;
    for mut b in starts {
        let mut current = objective(&b);
        for _sweep in 0..500 {
            let before = current;
            for i in 0..n {
                for j in (i + 1)..n {
                    let pool = b[i] + b[j];
                    if pool <= 0.0 {
                        continue;
                    }
                    let pair = |t: f64| s[i] * psi.inverse_value(t) + s[j] * psi.inverse_value((pool - t).max(0.0));
                    let step = pool / grid as f64;
                    let (mut arg, mut val) = (b[i], pair(b[i]));
                    for g in 0..=grid {
                        let t = step * g as f64;
                        let v = pair(t);
                        if v > val {
                            arg = t;
                            val = v;
                        }
                    }
                    let lo = (arg - step).max(0.0);
                    let hi = (arg + step).min(pool);
                    let refined = golden_section_min(|t| -pair(t), lo, hi, 1e-15 * pool.max(1.0), 200);
                    if -refined.min > val {
                        arg = refined.argmin;
                    }
                    if pair(arg) > pair(b[i]) {
                        b[i] = arg;
                        b[j] = pool - arg;
                    }
                }
            }
            current = objective(&b);
            if current - before <= 1e-15 * current.abs() {
                break;
            }
        }
        best = best.max(current);
    }
    Ok(best)
}

/// `‖e ⊗ e‖_φ = 1 / φ⁻¹(1)`.
pub fn rank_one_luxemburg(f: &OrliczFunction) -> f64 {
    1.0 / f.inverse_value(1.0)
}

/// `ψ⁻¹(1/μ) · μ`: the Orlicz norm of a projection onto a singular value of
/// multiplicity `μ`.
pub fn rank_one_orlicz(f: &OrliczFunction, mu: usize) -> Result<f64> {
    if mu == 0 {
        return Err(Error::Domain("multiplicity must be positive".into()));
    }
    let psi = f.complementary();
    let m = mu as f64;
    Ok(psi.inverse(1.0 / m)? * m)
}

/// Scan points `λ = 2^j` used by [`classify_membership`].
pub const MEMBERSHIP_SCAN: std::ops::RangeInclusive<i32> = -20..=20;

#[derive(Debug, Clone, Copy, PartialEq)]
enum ScanOutcome {
    Finite,
    Divergent,
    Unknown,
}

/// Classifies membership of `op` in `S_φ` (finite modular for some λ) and
/// `E_φ` (finite modular for every λ).
pub fn classify_membership(op: &CompactOperator, f: &OrliczFunction) -> Result<MembershipVerdict> {
    let a = match op {
        CompactOperator::Analytic(a) => a,
        _ => {
            return Ok(MembershipVerdict {
                in_s_phi: true,
                in_e_phi: true,
                witness_lambda: Some(1.0),
                rationale: MembershipRationale::FiniteRank,
                detail: "finite rank: every modular is a finite sum".into(),
            })
        }
    };
    let spec = Spectrum::Analytic(a);
    let top = a.singular_value(0);
    let cert = f.delta2_check(top.max(f64::MIN_POSITIVE), 200)?;

    let scan: Vec<(f64, ScanOutcome)> = MEMBERSHIP_SCAN
        .map(|j| {
            let lambda = 2f64.powi(j);
            let eps = 1e-6 * f.value(lambda * top).max(1e-300);
            let outcome = match spec.modular(f, lambda, eps) {
                Ok(m) if m.value.is_finite() => ScanOutcome::Finite,
                Ok(_) => ScanOutcome::Unknown,
                Err(Error::Divergent { .. }) => ScanOutcome::Divergent,
                Err(_) => ScanOutcome::Unknown,
            };
            (lambda, outcome)
        })
        .collect();

    let witness = scan.iter().find(|(_, o)| *o == ScanOutcome::Finite).map(|(l, _)| *l);
    let all_finite = scan.iter().all(|(_, o)| *o == ScanOutcome::Finite);
    let all_divergent = scan.iter().all(|(_, o)| *o == ScanOutcome::Divergent);
    let count = |o: ScanOutcome| scan.iter().filter(|(_, x)| *x == o).count();
    let (lo_j, hi_j) = (MEMBERSHIP_SCAN.start(), MEMBERSHIP_SCAN.end());

    let verdict = match witness {
        Some(w) if cert.holds => MembershipVerdict {
            in_s_phi: true,
            in_e_phi: true,
            witness_lambda: Some(w),
            rationale: MembershipRationale::Delta2Collapse,
            detail: format!(
                "finite modular at λ = {w}; {f} satisfies the doubling condition near zero (k = {:.6}), so the modular is finite for every λ",
                cert.k
            ),
        },
        Some(w) => MembershipVerdict {
            in_s_phi: true,
            in_e_phi: all_finite,
            witness_lambda: Some(w),
            rationale: MembershipRationale::TailComparison,
            detail: format!(
                "finite modular at λ = {w}; {} of {} scanned λ in 2^[{lo_j}, {hi_j}] finite (evidence only, not a proof for E_φ)",
                count(ScanOutcome::Finite),
                scan.len()
            ),
        },
        None if all_divergent => MembershipVerdict {
            in_s_phi: false,
            in_e_phi: false,
            witness_lambda: None,
            rationale: MembershipRationale::TailComparison,
            detail: format!(
                "integral lower bound on the tail diverges at every scanned λ in 2^[{lo_j}, {hi_j}]"
            ),
        },
        None => MembershipVerdict {
            in_s_phi: false,
            in_e_phi: false,
            witness_lambda: None,
            rationale: MembershipRationale::TailComparison,
            detail: format!(
                "no finite modular found: {} divergent, {} undecided among scanned λ in 2^[{lo_j}, {hi_j}]",
                count(ScanOutcome::Divergent),
                count(ScanOutcome::Unknown)
            ),
        },
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{random_complex, random_gaussian, trial_rng};
    use crate::operators::{DenseOperator, RankOneOperator};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn diag(v: &[f64]) -> CompactOperator {
        DiagonalOperator::from_real(v).unwrap().into()
    }

    fn p(x: f64) -> OrliczFunction {
        OrliczFunction::power(x).unwrap()
    }

    #[test]
    fn modular_examples() {
        let m = modular(&diag(&[3.0, 4.0]), &p(2.0), 1.0, 1e-12).unwrap();
        assert_eq!(m.value, 25.0);
        assert_eq!(m.tail_bound, 0.0);
        assert_eq!(m.terms_used, 2);
        let z: CompactOperator = DenseOperator::zeros(3, 3).into();
        for f in [p(2.0), OrliczFunction::cosh_minus_one()] {
            assert_eq!(modular(&z, &f, 7.0, 1e-12).unwrap().value, 0.0);
        }
        assert!(modular(&z, &p(2.0), 0.0, 1e-12).is_err());
    }

    #[test]
    fn luxemburg_examples() {
        let n = luxemburg_norm(&diag(&[3.0, 4.0]), &p(2.0), 1e-12).unwrap();
        assert_relative_eq!(n.value, 5.0, max_relative = 1e-11);
        assert!(n.bracket_width <= 1e-12 * n.value);

        let e: CompactOperator = RankOneOperator::basis(3, 0).unwrap().into();
        let n = luxemburg_norm(&e, &OrliczFunction::cosh_minus_one(), 1e-10).unwrap();
        assert_relative_eq!(n.value, 1.0 / (2.0 + 3f64.sqrt()).ln(), max_relative = 1e-11);

        let z: CompactOperator = DenseOperator::zeros(2, 2).into();
        let n = luxemburg_norm(&z, &p(3.0), 1e-10).unwrap();
        assert_eq!((n.value, n.method), (0.0, NormMethod::ClosedForm));
    }

    #[test]
    fn power_family_collapses_to_schatten_norm() {
        for trial in 0..25 {
            let mut rng = trial_rng(31, trial);
            let x: CompactOperator = random_gaussian(&mut rng, 4, 4).into();
            let s = x.finite_singular_values().unwrap();
            for q in [1.0, 1.5, 2.0, 3.0] {
                let expect = s.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q);
                let got = luxemburg_norm(&x, &p(q), 1e-12).unwrap().value;
                assert_relative_eq!(got, expect, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn amemiya_examples() {
        let n = amemiya_norm(&diag(&[1.0]), &p(2.0), 1e-10).unwrap();
        assert_relative_eq!(n.value, 2.0, max_relative = 1e-10);
        assert_eq!(n.method, NormMethod::KEquation);
        let z: CompactOperator = DenseOperator::zeros(2, 2).into();
        assert_eq!(amemiya_norm(&z, &p(2.0), 1e-10).unwrap().value, 0.0);
        for alpha in [1.5, 2.0, 3.0] {
            let beta = alpha / (alpha - 1.0);
            let e: CompactOperator = RankOneOperator::basis(2, 1).unwrap().into();
            let n = amemiya_norm(&e, &OrliczFunction::scaled_power(alpha).unwrap(), 1e-10).unwrap();
            assert_relative_eq!(n.value, beta.powf(1.0 / beta), max_relative = 1e-9);
        }
    }

    #[test]
    fn amemiya_power_closed_form() {
        // (1 + Σ (k s)^p) / k is minimized at k^p (p - 1) Σ s^p = 1.
        for q in [1.5, 2.0, 3.0] {
            let x = diag(&[0.3, 1.2, 2.0]);
            let norm_p = [0.3f64, 1.2, 2.0].iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q);
            let expect = q / (q - 1.0).powf(1.0 - 1.0 / q) * norm_p;
            let got = amemiya_norm(&x, &p(q), 1e-10).unwrap();
            assert_relative_eq!(got.value, expect, max_relative = 1e-9);
        }
    }

    #[test]
    fn amemiya_falls_back_to_golden_section_for_linear_phi() {
        let x = diag(&[0.5, 1.5, 2.0]);
        let n = amemiya_norm(&x, &p(1.0), 1e-10).unwrap();
        assert_eq!(n.method, NormMethod::GoldenSection);
        assert_relative_eq!(n.value, 4.0, max_relative = 1e-7);
    }

    #[test]
    fn amemiya_agrees_with_golden_section_on_objective() {
        let f = OrliczFunction::cosh_minus_one();
        let x = diag(&[0.4, 1.1, 2.3]);
        let k_eq = amemiya_norm(&x, &f, 1e-10).unwrap();
        assert_eq!(k_eq.method, NormMethod::KEquation);
        let g = golden_section_min(
            |t| {
                let k = t.exp();
                (1.0 + modular(&x, &f, k, 1e-12).unwrap().value) / k
            },
            -10.0,
            10.0,
            1e-12,
            500,
        );
        assert_relative_eq!(k_eq.value, g.min, max_relative = 1e-10);
    }

    #[test]
    fn sup_oracle_examples() {
        let d1 = DiagonalOperator::from_real(&[1.0]).unwrap();
        assert!((orlicz_norm_sup_oracle(&d1, &p(2.0), 200).unwrap() - 2.0).abs() < 1e-4);
        let z = DiagonalOperator::from_real(&[0.0, 0.0]).unwrap();
        assert_eq!(orlicz_norm_sup_oracle(&z, &p(2.0), 200).unwrap(), 0.0);
        for alpha in [1.5, 2.0, 3.0] {
            let beta = alpha / (alpha - 1.0);
            let f = OrliczFunction::scaled_power(alpha).unwrap();
            let d = DiagonalOperator::from_real(&[1.0, 1.0]).unwrap();
            let expect = (beta / 2.0).powf(1.0 / beta) * 2.0;
            assert!((orlicz_norm_sup_oracle(&d, &f, 200).unwrap() - expect).abs() < 1e-4);
        }
        let big = DiagonalOperator::from_real(&[1.0; 7]).unwrap();
        assert!(matches!(orlicz_norm_sup_oracle(&big, &p(2.0), 200), Err(Error::Unsupported(_))));
        assert!(orlicz_norm_sup_oracle(&d1, &p(2.0), 10).is_err());
    }

    #[test]
    fn sup_oracle_matches_amemiya_on_random_diagonals() {
        for trial in 0..20 {
            let mut rng = trial_rng(37, trial);
            let n = 1 + (trial as usize % 5);
            let d = DiagonalOperator::new((0..n).map(|_| random_complex(&mut rng)).collect()).unwrap();
            for f in [p(2.0), p(3.0), OrliczFunction::scaled_power(2.5).unwrap()] {
                let oracle = orlicz_norm_sup_oracle(&d, &f, 100).unwrap();
                let am = amemiya_norm(&d.clone().into(), &f, 1e-10).unwrap().value;
                assert!((oracle - am).abs() <= 1e-4 * am.max(1.0), "{f}: {oracle} vs {am}");
            }
        }
    }

    #[test]
    fn rank_one_values() {
        for q in [1.0, 2.0, 5.0] {
            assert_eq!(rank_one_luxemburg(&p(q)), 1.0);
        }
        assert_relative_eq!(
            rank_one_luxemburg(&OrliczFunction::cosh_minus_one()),
            1.0 / (2.0 + 3f64.sqrt()).ln(),
            max_relative = 1e-12
        );
        for alpha in [1.5, 2.0, 3.0] {
            let f = OrliczFunction::scaled_power(alpha).unwrap();
            assert_relative_eq!(rank_one_luxemburg(&f), alpha.powf(-1.0 / alpha), max_relative = 1e-14);
            let beta = alpha / (alpha - 1.0);
            for mu in [1usize, 4] {
                let m = mu as f64;
                assert_relative_eq!(
                    rank_one_orlicz(&f, mu).unwrap(),
                    (beta / m).powf(1.0 / beta) * m,
                    max_relative = 1e-12
                );
            }
        }
        assert_relative_eq!(rank_one_orlicz(&p(2.0), 1).unwrap(), 2.0, max_relative = 1e-14);
        assert!(matches!(rank_one_orlicz(&p(1.0), 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rank_one_orlicz_matches_amemiya_on_identity_blocks() {
        for f in [p(2.0), p(3.0), OrliczFunction::scaled_power(1.5).unwrap(), OrliczFunction::cosh_minus_one()] {
            for mu in 1..=4 {
                let am = amemiya_norm(&diag(&vec![1.0; mu]), &f, 1e-10).unwrap().value;
                assert_relative_eq!(rank_one_orlicz(&f, mu).unwrap(), am, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn norm_sandwich_and_homogeneity() {
        for trial in 0..30 {
            let mut rng = trial_rng(41, trial);
            let x: CompactOperator = random_gaussian(&mut rng, 3, 3).into();
            for f in [p(2.0), OrliczFunction::cosh_minus_one()] {
                let lux = luxemburg_norm(&x, &f, 1e-10).unwrap().value;
                let orl = amemiya_norm(&x, &f, 1e-10).unwrap().value;
                assert!(lux <= orl * (1.0 + 1e-9) && orl <= 2.0 * lux * (1.0 + 1e-9), "{f}: {lux} {orl}");
                let scaled: CompactOperator = x.to_dense().unwrap().scale(Complex64::new(-0.0, 2.5)).into();
                let lux2 = luxemburg_norm(&scaled, &f, 1e-10).unwrap().value;
                assert_relative_eq!(lux2, 2.5 * lux, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn finite_rank_membership() {
        let x: CompactOperator = random_gaussian(&mut trial_rng(1, 1), 3, 3).into();
        let v = classify_membership(&x, &OrliczFunction::cosh_minus_one()).unwrap();
        assert!(v.in_s_phi && v.in_e_phi);
        assert_eq!(v.rationale, MembershipRationale::FiniteRank);
    }
}
