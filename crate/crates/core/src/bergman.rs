//! The Toeplitz operator with symbol `1 - |z|²` on the Bergman space of the
//! unit disk.
//!
//! In the orthonormal basis `e_n(z) = sqrt(n + 1) z^n` it is diagonal with
//! eigenvalues `1/(n + 2)`, `n >= 0`. It lies in every Schatten class
//! `S_p`, `p > 1`, but not in the trace class, and
//! `‖x‖_p = (ζ(p) - 1)^(1/p)`.

use crate::error::{Error, Result};
use crate::norms::{self, ModularValue};
use crate::operators::{AnalyticOperator, CompactOperator, TailBracket};
use crate::optimize::CompensatedSum;
use crate::orlicz::{Family, OrliczFunction};

/// Built-in operator name accepted wherever an operator is parsed.
pub const BERGMAN_NAME: &str = "bergman";

/// Exponents tabulated by the Bergman demo.
pub const DEMO_EXPONENTS: [f64; 4] = [1.5, 2.0, 3.0, 4.0];

/// Largest number of terms [`zeta`] is willing to sum.
pub const ZETA_MAX_TERMS: u64 = 400_000_000;

/// `s(n) = 1 / (n + 2)`.
pub fn singular_value(n: usize) -> f64 {
    1.0 / (n as f64 + 2.0)
}

/// `∫_a^∞ (t + 2)^(-p) dt`.
fn shifted_power_integral(a: f64, p: f64) -> f64 {
    if p <= 1.0 {
        f64::INFINITY
    } else {
        (a + 2.0).powf(1.0 - p) / (p - 1.0)
    }
}

/// Bracket for `Σ_{n >= terms} φ(c / (n + 2))`.
///
/// Each summand `g(n) = φ(c / (n + 2))` is convex and decreasing in `n`, so
/// the midpoint rule gives `g(n) <= ∫_{n-1/2}^{n+1/2} g` and the trapezoid
/// rule gives `Σ_{n >= N} g(n) >= ∫_N^∞ g + g(N)/2`.
///
/// For `cosh - 1` the integrals are replaced by the comparison
/// `t²/2 <= cosh t - 1 <= (t²/2) cosh t0` on `[0, t0]`, `t0 = c s(N)`.
pub fn tail_bracket(terms: usize, c: f64, f: &OrliczFunction) -> TailBracket {
    let n = terms as f64;
    match f.family() {
        Family::Power { p } => power_tail(n, c, p, 1.0),
        Family::ScaledPower { alpha } => power_tail(n, c, alpha, 1.0 / alpha),
        Family::CoshMinusOne => {
            let t0 = c * singular_value(terms);
            let sq = power_tail(n, c, 2.0, 0.5);
            TailBracket {
                lower: sq.lower,
                upper: sq.upper * t0.cosh(),
            }
        }
    }
}

/// Bracket for `coef · Σ_{n >= N} (c / (n + 2))^p`.
fn power_tail(n: f64, c: f64, p: f64, coef: f64) -> TailBracket {
    let cp = coef * c.powf(p);
    if p <= 1.0 {
        return TailBracket {
            lower: f64::INFINITY,
            upper: f64::INFINITY,
        };
    }
    TailBracket {
        lower: cp * (shifted_power_integral(n, p) + 0.5 * (n + 2.0).powf(-p)),
        upper: cp * shifted_power_integral(n - 0.5, p),
    }
}

pub fn bergman_operator() -> AnalyticOperator {
    AnalyticOperator::new(BERGMAN_NAME, singular_value, |terms, c, f| Some(tail_bracket(terms, c, f)))
}

/// ζ(p) with its enclosing interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: f64,
    pub half_width: f64,
    pub terms: u64,
}

/// `Σ_{n >= 1} n^(-p)` by direct summation. The tail after `N` terms lies
/// between `∫_{N+1}^∞ t^(-p) dt` and `∫_N^∞ t^(-p) dt`; the midpoint is
/// returned and `N` is chosen so that the half-width is at most `eps`.
pub fn zeta_bracketed(p: f64, eps: f64) -> Result<ZetaValue> {
    zeta_from(p, 1, eps)
}

/// `Σ_{n >= start} n^(-p)`, same bracketing as [`zeta_bracketed`].
fn zeta_from(p: f64, start: u64, eps: f64) -> Result<ZetaValue> {
    if !(p.is_finite() && p > 1.0 + 1e-6) {
        return Err(Error::Domain(format!("zeta needs p > 1 + 1e-6, got {p}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let half_width = |n: f64| (n.powf(1.0 - p) - (n + 1.0).powf(1.0 - p)) / (2.0 * (p - 1.0));
    let first = start as f64;
    // half_width(N) ~ N^(-p)/2; start from that estimate and fix up.
    let mut n = ((2.0 * eps).powf(-1.0 / p)).ceil().max(first);
    while n > first && half_width(n - 1.0) <= eps {
        n -= 1.0;
    }
    while half_width(n) > eps {
        n += 1.0;
    }
    if n > ZETA_MAX_TERMS as f64 {
        return Err(Error::Domain(format!(
            "zeta({p}) to {eps:e} needs {n:e} terms, above the {ZETA_MAX_TERMS} cap"
        )));
    }
    let terms = n as u64;
    let partial: CompensatedSum = (start..=terms).rev().map(|k| (k as f64).powf(-p)).collect();
    let upper_tail = n.powf(1.0 - p) / (p - 1.0);
    let lower_tail = (n + 1.0).powf(1.0 - p) / (p - 1.0);
    Ok(ZetaValue {
        value: partial.value() + 0.5 * (upper_tail + lower_tail),
        half_width: 0.5 * (upper_tail - lower_tail),
        terms,
    })
}

pub fn zeta(p: f64, eps: f64) -> Result<f64> {
    zeta_bracketed(p, eps).map(|z| z.value)
}

/// Relative tolerance on `ζ(p) - 1` inside [`bergman_schatten_norm`].
pub const SCHATTEN_ZETA_EPS: f64 = 1e-11;

/// `(ζ(p) - 1)^(1/p)`; refused for `p <= 1`, where the operator is not in `S_p`.
pub fn bergman_schatten_norm(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::NotInClass(format!(
            "the Bergman Toeplitz operator is not in S_p for p = {p} <= 1"
        )));
    }
    // Summing from n = 2 keeps relative accuracy when ζ(p) - 1 ~ 2^(-p) is tiny.
    let eps = SCHATTEN_ZETA_EPS * 2f64.powf(-p);
    Ok(zeta_from(p, 2, eps)?.value.powf(1.0 / p))
}

/// `Σ φ(1 / ((n + 2) · candidate)) - 1`, which vanishes at the Luxemburg norm
/// for functions satisfying the doubling condition near zero.
pub fn bergman_norm_equation_residual(f: &OrliczFunction, candidate: f64, eps_tail: f64) -> Result<Residual> {
    if !(candidate > 0.0 && candidate.is_finite()) {
        return Err(Error::Domain(format!("candidate norm must be positive, got {candidate}")));
    }
    let op = CompactOperator::Analytic(bergman_operator());
    let m: ModularValue = norms::modular(&op, f, 1.0 / candidate, eps_tail)?;
    Ok(Residual {
        value: m.estimate() - 1.0,
        uncertainty: 0.5 * m.tail_bound,
        terms_used: m.terms_used,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub uncertainty: f64,
    pub terms_used: usize,
}

/// One row of the Bergman demo table.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DemoRow {
    pub p: f64,
    pub closed_form: f64,
    pub computed: f64,
    pub difference: f64,
}

/// Closed form against library Luxemburg norm for each of [`DEMO_EXPONENTS`].
pub fn demo_table(rel_tol: f64) -> Result<Vec<DemoRow>> {
    let op = CompactOperator::Analytic(bergman_operator());
    DEMO_EXPONENTS
        .iter()
        .map(|&p| {
            let closed_form = bergman_schatten_norm(p)?;
            let computed = norms::luxemburg_norm(&op, &OrliczFunction::power(p)?, rel_tol)?.value;
            Ok(DemoRow {
                p,
                closed_form,
                computed,
                difference: computed - closed_form,
            })
        })
        .collect()
}
