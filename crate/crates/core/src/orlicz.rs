//! Parametric Orlicz functions, their complementary (Young-conjugate)
//! functions and doubling-condition certificates.
//!
//! Three families are supported:
//!
//! | spec string       | φ(t)            | h(t) = φ'(t)  |
//! |-------------------|-----------------|---------------|
//! | `power:p=P`       | t^P             | P t^(P-1)     |
//! | `scaled:alpha=A`  | t^A / A         | t^(A-1)       |
//! | `cosh`            | cosh(t) - 1     | sinh(t)       |
//!
//! Norm computations are written against the [`YoungFunction`] trait so
//! that the same code evaluates norms for φ and for its complement ψ.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{self, golden_section_min, solve_increasing};

/// A convex, strictly increasing, finite-valued function on `[0, ∞)` with
/// value 0 at 0, as consumed by modulars and norms.
///
/// Callers guarantee `t >= 0` and `y >= 0`; range checking happens in the
/// fallible wrappers on [`OrliczFunction`].
pub trait YoungFunction: Send + Sync {
    fn value(&self, t: f64) -> f64;

    /// Right derivative.
    fn derivative(&self, t: f64) -> f64;

    /// Generalized inverse `sup { t : value(t) <= y }`.
    fn inverse_value(&self, y: f64) -> f64;

    /// `v h(v) - φ(v)`, which equals `ψ(h(v))` by the equality case of the
    /// Young inequality.
    fn conjugate_at_derivative(&self, v: f64) -> f64 {
        (v * self.derivative(v) - self.value(v)).max(0.0)
    }

    /// The parametric family this function belongs to, if any. Analytic
    /// operators only carry tail bounds for the families.
    fn as_family(&self) -> Option<&OrliczFunction> {
        None
    }

    fn label(&self) -> String;
}

/// The parametric families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `t^p`, `p >= 1`.
    Power { p: f64 },
    /// `t^alpha / alpha`, `alpha > 1`.
    ScaledPower { alpha: f64 },
    /// `cosh(t) - 1`.
    CoshMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct OrliczFunction {
    family: Family,
}

impl OrliczFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidFunction(format!("power exponent must be a finite p >= 1, got {p}")));
        }
        Ok(Self { family: Family::Power { p } })
    }

    pub fn scaled_power(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::InvalidFunction(format!(
                "scaled power exponent must be a finite alpha > 1, got {alpha}"
            )));
        }
        Ok(Self {
            family: Family::ScaledPower { alpha },
        })
    }

    pub fn cosh_minus_one() -> Self {
        Self {
            family: Family::CoshMinusOne,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// φ(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_nonneg("argument", t)?;
        Ok(self.value(t))
    }

    /// φ⁻¹(y). Closed form for the power families, bisection otherwise.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        check_nonneg("inverse argument", y)?;
        Ok(self.inverse_value(y))
    }

    /// h(t), the right derivative of φ.
    pub fn right_derivative(&self, t: f64) -> Result<f64> {
        check_nonneg("argument", t)?;
        Ok(self.derivative(t))
    }

    pub fn complementary(&self) -> ComplementaryFunction {
        let mode = match self.family {
            Family::Power { p } if p == 1.0 => ConjugateMode::Indicator,
            Family::Power { .. } | Family::ScaledPower { .. } => ConjugateMode::ClosedForm,
            Family::CoshMinusOne => ConjugateMode::NumericLegendre,
        };
        ComplementaryFunction { source: *self, mode }
    }

    /// A constant `k` with `φ(2u) <= k φ(u)` for every `u > 0`, when one exists.
    pub fn global_doubling_constant(&self) -> Option<f64> {
        match self.family {
            Family::Power { p } => Some(2f64.powf(p)),
            Family::ScaledPower { alpha } => Some(2f64.powf(alpha)),
            Family::CoshMinusOne => None,
        }
    }

    /// Certifies the doubling condition near zero on `(0, u0]`.
    ///
    /// Power families are certified analytically; `cosh - 1` by
    /// [`delta2_scan`].
    pub fn delta2_check(&self, u0: f64, grid_size: usize) -> Result<Delta2Certificate> {
        if !(u0 > 0.0 && u0.is_finite()) {
            return Err(Error::Domain(format!("u0 must be positive, got {u0}")));
        }
        if grid_size < 2 {
            return Err(Error::Domain("grid_size must be at least 2".into()));
        }
        match self.global_doubling_constant() {
            Some(k) => Ok(Delta2Certificate {
                holds: true,
                u0,
                k,
                method: Delta2Method::Analytic,
            }),
            None => delta2_scan(self, u0, grid_size),
        }
    }
}

fn check_nonneg(what: &str, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("{what} must be nonnegative, got {x}")));
    }
    Ok(())
}

impl YoungFunction for OrliczFunction {
    fn value(&self, t: f64) -> f64 {
        match self.family {
            Family::Power { p } => t.powf(p),
            Family::ScaledPower { alpha } => t.powf(alpha) / alpha,
            // 2 sinh²(t/2) keeps full relative precision for small t.
            Family::CoshMinusOne => {
                let s = (0.5 * t).sinh();
                2.0 * s * s
            }
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match self.family {
            Family::Power { p } => {
                if p == 1.0 {
                    1.0
                } else {
                    p * t.powf(p - 1.0)
                }
            }
            Family::ScaledPower { alpha } => t.powf(alpha - 1.0),
            Family::CoshMinusOne => t.sinh(),
        }
    }

    fn inverse_value(&self, y: f64) -> f64 {
        match self.family {
            Family::Power { p } => y.powf(1.0 / p),
            Family::ScaledPower { alpha } => (alpha * y).powf(1.0 / alpha),
            Family::CoshMinusOne => 2.0 * (0.5 * y).sqrt().asinh(),
        }
    }

    fn conjugate_at_derivative(&self, v: f64) -> f64 {
        match self.family {
            Family::Power { p } => (p - 1.0) * v.powf(p),
            Family::ScaledPower { alpha } => (1.0 - 1.0 / alpha) * v.powf(alpha),
            Family::CoshMinusOne => (v * v.sinh() - self.value(v)).max(0.0),
        }
    }

    fn as_family(&self) -> Option<&OrliczFunction> {
        Some(self)
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Power { p } => write!(f, "power:p={p}"),
            Family::ScaledPower { alpha } => write!(f, "scaled:alpha={alpha}"),
            Family::CoshMinusOne => write!(f, "cosh"),
        }
    }
}

const GRAMMAR: &str = "accepted forms are \"power:p=<p >= 1>\", \"scaled:alpha=<alpha > 1>\", \"cosh\"";

impl FromStr for OrliczFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, args) = match lower.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (lower.as_str(), None),
        };
        let param = |key: &str| -> Result<f64> {
            let args = args.ok_or_else(|| Error::Parse(format!("missing parameter {key} in {s:?}; {GRAMMAR}")))?;
            let (k, v) = args
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed parameter in {s:?}; {GRAMMAR}")))?;
            if k.trim() != key {
                return Err(Error::Parse(format!("unknown parameter {:?} in {s:?}; {GRAMMAR}", k.trim())));
            }
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {:?} in {s:?}; {GRAMMAR}", v.trim())))
        };
        match name {
            "power" => OrliczFunction::power(param("p")?),
            "scaled" => OrliczFunction::scaled_power(param("alpha")?),
            "cosh" if args.is_none_or(str::is_empty) => Ok(OrliczFunction::cosh_minus_one()),
            _ => Err(Error::Parse(format!("unrecognized Orlicz function {s:?}; {GRAMMAR}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugateMode {
    ClosedForm,
    NumericLegendre,
    /// ψ = 0 on `[0, 1]` and +∞ beyond; the conjugate of `t`.
    Indicator,
}

/// ψ(u) = sup { uv - φ(v) : v >= 0 }.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplementaryFunction {
    source: OrliczFunction,
    mode: ConjugateMode,
}

impl ComplementaryFunction {
    /// Forces the numeric Legendre path for any source with a strictly
    /// increasing derivative.
    pub fn numeric(source: OrliczFunction) -> Result<Self> {
        if let Family::Power { p } = source.family {
            if p == 1.0 {
                return Err(Error::Unsupported(
                    "numeric conjugate of power:p=1 is an extended-value indicator".into(),
                ));
            }
        }
        Ok(Self {
            source,
            mode: ConjugateMode::NumericLegendre,
        })
    }

    pub fn source(&self) -> &OrliczFunction {
        &self.source
    }

    pub fn mode(&self) -> ConjugateMode {
        self.mode
    }

    /// Coefficient and exponent `(c, q)` when ψ(u) = c u^q in closed form.
    pub fn power_law(&self) -> Option<(f64, f64)> {
        if self.mode != ConjugateMode::ClosedForm {
            return None;
        }
        match self.source.family {
            Family::Power { p } => {
                let q = p / (p - 1.0);
                Some((power_conjugate_coefficient(p), q))
            }
            Family::ScaledPower { alpha } => {
                let beta = alpha / (alpha - 1.0);
                Some((1.0 / beta, beta))
            }
            Family::CoshMinusOne => None,
        }
    }

    /// The conjugate as a member of the families, when it is one.
    pub fn as_orlicz(&self) -> Option<OrliczFunction> {
        match (self.mode, self.source.family) {
            (ConjugateMode::ClosedForm, Family::ScaledPower { alpha }) => {
                OrliczFunction::scaled_power(alpha / (alpha - 1.0)).ok()
            }
            _ => None,
        }
    }

    /// Whether ψ is finite-valued and strictly increasing, so that it can
    /// itself play the role of an Orlicz function.
    pub fn is_admissible(&self) -> bool {
        self.mode != ConjugateMode::Indicator
    }

    /// ψ(u), possibly +∞ for the indicator case.
    pub fn eval(&self, u: f64) -> Result<f64> {
        check_nonneg("argument", u)?;
        Ok(self.value(u))
    }

    /// ψ⁻¹(y); refused for the indicator case, which is not invertible.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        check_nonneg("inverse argument", y)?;
        if self.mode == ConjugateMode::Indicator {
            return Err(Error::Unsupported("conjugate of power:p=1 is not invertible".into()));
        }
        Ok(self.inverse_value(y))
    }

    /// The maximizer `v*(u)` of `uv - φ(v)`, i.e. `h⁻¹(u)`.
    fn maximizer(&self, u: f64) -> f64 {
        legendre_maximizer(&self.source, u)
    }
}

/// `(1/q) p^(-q/p)`: the coefficient of `ψ(u) = c u^q` for `φ(t) = t^p`,
/// obtained from the stationary point `v = (u/p)^(1/(p-1))`.
pub fn power_conjugate_coefficient(p: f64) -> f64 {
    let q = p / (p - 1.0);
    p.powf(-q / p) / q
}

impl YoungFunction for ComplementaryFunction {
    fn value(&self, u: f64) -> f64 {
        match self.mode {
            ConjugateMode::Indicator => {
                if u <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ConjugateMode::ClosedForm => {
                let (c, q) = self.power_law().expect("closed form has a power law");
                c * u.powf(q)
            }
            ConjugateMode::NumericLegendre => {
                if u == 0.0 {
                    return 0.0;
                }
                let v = self.maximizer(u);
                (u * v - self.source.value(v)).max(0.0)
            }
        }
    }

    fn derivative(&self, u: f64) -> f64 {
        match self.mode {
            ConjugateMode::Indicator => 0.0,
            ConjugateMode::ClosedForm => {
                let (c, q) = self.power_law().expect("closed form has a power law");
                c * q * u.powf(q - 1.0)
            }
            ConjugateMode::NumericLegendre => self.maximizer(u),
        }
    }

    fn inverse_value(&self, y: f64) -> f64 {
        match self.mode {
            ConjugateMode::Indicator => 1.0,
            ConjugateMode::ClosedForm => {
                let (c, q) = self.power_law().expect("closed form has a power law");
                (y / c).powf(1.0 / q)
            }
            ConjugateMode::NumericLegendre => solve_increasing(|u| self.value(u), y).unwrap_or(f64::INFINITY),
        }
    }

    fn conjugate_at_derivative(&self, u: f64) -> f64 {
        match self.mode {
            // ψ* = φ, and ψ'(u) = v*(u).
            ConjugateMode::NumericLegendre => self.source.value(self.maximizer(u)),
            _ => (u * self.derivative(u) - self.value(u)).max(0.0),
        }
    }

    fn label(&self) -> String {
        format!("conjugate({})", self.source)
    }
}

/// Maximizer of `uv - f(v)` over `v >= 0`.
///
/// Solves the stationarity condition `f'(v) = u` by bisection; if the
/// derivative never reaches `u` the maximum is searched by golden section
/// over an expanding bracket.
fn legendre_maximizer<F: YoungFunction + ?Sized>(f: &F, u: f64) -> f64 {
    if u <= f.derivative(0.0) {
        return 0.0;
    }
    if let Some(v) = solve_increasing(|v| f.derivative(v), u) {
        return v;
    }
    let objective = |v: f64| -(u * v - f.value(v));
    let mut hi = 1.0;
    while objective(hi) > objective(0.5 * hi) && hi < 1e300 {
        hi *= 2.0;
    }
    golden_section_min(objective, 0.0, hi, optimize::ROOT_REL_TOL * hi, optimize::MAX_BISECTION_ITERS).argmin
}

/// Numeric Legendre transform `sup { uv - f(v) : v >= 0 }` of any
/// [`YoungFunction`].
pub fn legendre_transform<F: YoungFunction + ?Sized>(f: &F, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let v = legendre_maximizer(f, u);
    (u * v - f.value(v)).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Delta2Method {
    Analytic,
    GridScan,
}

/// Evidence for `φ(2u) <= k φ(u)` on `(0, u0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Delta2Certificate {
    pub holds: bool,
    pub u0: f64,
    pub k: f64,
    pub method: Delta2Method,
}

/// Supremum of `φ(2u)/φ(u)` over a log-spaced grid on `[u0 * 1e-6, u0]`.
pub fn delta2_scan<F: YoungFunction + ?Sized>(f: &F, u0: f64, grid_size: usize) -> Result<Delta2Certificate> {
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(Error::Domain(format!("u0 must be positive, got {u0}")));
    }
    if grid_size < 2 {
        return Err(Error::Domain("grid_size must be at least 2".into()));
    }
    let lo = (u0 * 1e-6).ln();
    let hi = u0.ln();
    let step = (hi - lo) / (grid_size - 1) as f64;
    let mut k: f64 = 0.0;
    for i in 0..grid_size {
        let u = (lo + step * i as f64).exp().min(u0);
        let base = f.value(u);
        if base <= 0.0 {
            return Ok(Delta2Certificate {
                holds: false,
                u0,
                k: f64::INFINITY,
                method: Delta2Method::GridScan,
            });
        }
        k = k.max(f.value(2.0 * u) / base);
    }
    Ok(Delta2Certificate {
        holds: k.is_finite(),
        u0,
        k,
        method: Delta2Method::GridScan,
    })
}
