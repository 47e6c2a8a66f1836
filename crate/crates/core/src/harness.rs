//! Verification of trace and norm inequalities on concrete operators.
//!
//! Each `check_*` function evaluates both sides of one inequality (or
//! identity) and returns a [`CheckReport`]. [`run_suite`] drives all of them
//! over seeded random ensembles.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{random_diagonal, random_dim, random_gaussian, random_positive, random_unitary, trial_rng, TrialRng};
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianEigen};
use crate::norms::{
    amemiya_norm, luxemburg_norm, modular, orlicz_norm_sup_oracle, rank_one_orlicz, DEFAULT_REL_TOL,
};
use crate::operators::{CompactOperator, DenseOperator, DiagonalOperator};
use crate::orlicz::{OrliczFunction, YoungFunction};

pub const ABS_TOL: f64 = 1e-8;
pub const REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Inequality,
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckReport>,
}

impl CheckReport {
    /// `lhs <= rhs` within `ABS_TOL + REL_TOL |rhs|`.
    pub fn inequality(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let tolerance = ABS_TOL + REL_TOL * rhs.abs();
        Self {
            name: name.into(),
            kind: CheckKind::Inequality,
            lhs,
            rhs,
            slack: rhs - lhs,
            tolerance,
            passed: lhs <= rhs + tolerance,
            inputs_digest: String::new(),
            error: None,
            note: None,
            parts: Vec::new(),
        }
    }

    /// `|lhs - rhs| <= tolerance`.
    pub fn identity_with(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Identity,
            lhs,
            rhs,
            slack: rhs - lhs,
            tolerance,
            passed: (lhs - rhs).abs() <= tolerance,
            inputs_digest: String::new(),
            error: None,
            note: None,
            parts: Vec::new(),
        }
    }

    pub fn identity(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::identity_with(name, lhs, rhs, ABS_TOL + REL_TOL * rhs.abs())
    }

    /// Conjunction of `parts`; headline numbers come from the tightest part.
    pub fn all(name: impl Into<String>, parts: Vec<CheckReport>) -> Self {
        let tightest = parts
            .iter()
            .min_by(|a, b| a.margin().total_cmp(&b.margin()))
            .expect("at least one part")
            .clone();
        Self {
            name: name.into(),
            passed: parts.iter().all(|p| p.passed),
            parts,
            ..tightest
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Inequality,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            tolerance: ABS_TOL,
            passed: false,
            inputs_digest: String::new(),
            error: Some(err.to_string()),
            note: None,
            parts: Vec::new(),
        }
    }

    /// Distance from failing; negative means failed.
    pub fn margin(&self) -> f64 {
        match self.kind {
            CheckKind::Inequality => self.rhs + self.tolerance - self.lhs,
            CheckKind::Identity => self.tolerance - (self.lhs - self.rhs).abs(),
        }
    }

    pub fn with_digest(mut self, digest: impl Into<String>) -> Self {
        let digest = digest.into();
        for p in &mut self.parts {
            p.inputs_digest.clone_from(&digest);
        }
        self.inputs_digest = digest;
        self
    }

    fn dims(x: &DenseOperator) -> String {
        format!("{}x{}", x.rows(), x.cols())
    }
}

fn trace_norm(x: &DenseOperator) -> f64 {
    x.singular_values().iter().sum()
}

fn lux<F: YoungFunction + ?Sized>(x: &DenseOperator, f: &F) -> Result<f64> {
    Ok(luxemburg_norm(&CompactOperator::Dense(x.clone()), f, DEFAULT_REL_TOL)?.value)
}

fn orlicz<F: YoungFunction + ?Sized>(x: &DenseOperator, f: &F) -> Result<f64> {
    Ok(amemiya_norm(&CompactOperator::Dense(x.clone()), f, DEFAULT_REL_TOL)?.value)
}

fn modular_at_one<F: YoungFunction + ?Sized>(x: &DenseOperator, f: &F) -> Result<f64> {
    Ok(modular(&CompactOperator::Dense(x.clone()), f, 1.0, DEFAULT_REL_TOL)?.value)
}

/// `Tr|xy| <= ‖x‖°_φ ‖y‖_ψ`. For `φ(t) = t` the conjugate is an indicator
/// and the check is routed to [`check_s1_endpoint`].
pub fn check_holder(x: &DenseOperator, y: &DenseOperator, f: &OrliczFunction) -> Result<CheckReport> {
    let psi = f.complementary();
    if !psi.is_admissible() {
        let mut r = check_s1_endpoint(x, y)?;
        r.name = format!("holder[{f}]->s1-endpoint");
        return Ok(r);
    }
    let lhs = trace_norm(&x.compose(y)?);
    let rhs = orlicz(x, f)? * lux(y, &psi)?;
    Ok(CheckReport::inequality(format!("holder[{f}]"), lhs, rhs).with_digest(CheckReport::dims(x)))
}

/// `Tr|xy| <= ‖x‖_p ‖y‖_q`, `1/p + 1/q = 1`.
pub fn check_schatten_holder(x: &DenseOperator, y: &DenseOperator, p: f64) -> Result<CheckReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("Schatten Hölder needs 1 < p < ∞, got {p}")));
    }
    let q = p / (p - 1.0);
    let lhs = trace_norm(&x.compose(y)?);
    let rhs = lux(x, &OrliczFunction::power(p)?)? * lux(y, &OrliczFunction::power(q)?)?;
    Ok(CheckReport::inequality(format!("schatten-holder[p={p}]"), lhs, rhs).with_digest(CheckReport::dims(x)))
}

/// `Tr|xy| <= ‖x‖_1 ‖y‖_∞` and `Tr|yx| <= ‖y‖_1 ‖x‖_∞`.
pub fn check_s1_endpoint(x: &DenseOperator, y: &DenseOperator) -> Result<CheckReport> {
    let xy = x.compose(y)?;
    let yx = y.compose(x)?;
    let parts = vec![
        CheckReport::inequality("s1-endpoint[xy]", trace_norm(&xy), trace_norm(x) * y.operator_norm()),
        CheckReport::inequality("s1-endpoint[yx]", trace_norm(&yx), trace_norm(y) * x.operator_norm()),
    ];
    Ok(CheckReport::all("s1-endpoint", parts).with_digest(CheckReport::dims(x)))
}

/// Relations between `Tr φ(x)` and `‖x‖_φ`:
///
/// * `‖x‖_φ > 1` implies `Tr φ(x) >= ‖x‖_φ`
/// * `‖x‖_φ <= 1` implies `Tr φ(x) <= ‖x‖_φ`
/// * `Tr φ(x / ‖x‖_φ) <= 1`
/// * `Tr φ(x / ‖x‖_φ) = 1` when φ satisfies the doubling condition near zero
pub fn check_modular_norm_bridge(x: &DenseOperator, f: &OrliczFunction) -> Result<CheckReport> {
    let norm = lux(x, f)?;
    if norm == 0.0 {
        return Err(Error::Domain("modular/norm bridge needs a nonzero operator".into()));
    }
    let trace = modular_at_one(x, f)?;
    let at_norm = modular(&CompactOperator::Dense(x.clone()), f, 1.0 / norm, DEFAULT_REL_TOL)?.value;
    let mut parts = vec![
        if norm > 1.0 {
            CheckReport::inequality("bridge[norm<=trace]", norm, trace)
        } else {
            CheckReport::inequality("bridge[trace<=norm]", trace, norm)
        },
        CheckReport::inequality("bridge[modular-at-norm<=1]", at_norm, 1.0),
    ];
    if f.delta2_check(x.operator_norm() / norm, 200)?.holds {
        parts.push(CheckReport::identity("bridge[modular-at-norm=1]", at_norm, 1.0));
    }
    Ok(CheckReport::all(format!("modular-norm-bridge[{f}]"), parts).with_digest(CheckReport::dims(x)))
}

/// `Tr φ(x + y) <= (k/2) [Tr φ(x) + Tr φ(y)]` for a global doubling constant `k`.
pub fn check_modular_triangle(x: &DenseOperator, y: &DenseOperator, f: &OrliczFunction) -> Result<CheckReport> {
    let k = f.global_doubling_constant().ok_or_else(|| {
        Error::Unsupported(format!("{f} has no global doubling constant; modular triangle check needs one"))
    })?;
    let sum = x.add(y)?;
    let lhs = modular_at_one(&sum, f)?;
    let rhs = 0.5 * k * (modular_at_one(x, f)? + modular_at_one(y, f)?);
    Ok(CheckReport::inequality(format!("modular-triangle[{f}]"), lhs, rhs).with_digest(CheckReport::dims(x)))
}

/// `‖yxz‖_φ <= ‖y‖_∞ ‖x‖_φ ‖z‖_∞` and the one-sided forms
/// `‖xy‖_φ <= ‖x‖_φ ‖y‖_∞`, `‖yx‖_φ <= ‖y‖_∞ ‖x‖_φ`.
pub fn check_ideal(
    y: &DenseOperator,
    x: &DenseOperator,
    z: &DenseOperator,
    f: &OrliczFunction,
) -> Result<CheckReport> {
    let nx = lux(x, f)?;
    let (ny, nz) = (y.operator_norm(), z.operator_norm());
    let yxz = y.compose(x)?.compose(z)?;
    let parts = vec![
        CheckReport::inequality("ideal[yxz]", lux(&yxz, f)?, ny * nx * nz),
        CheckReport::inequality("ideal[xy]", lux(&x.compose(y)?, f)?, nx * ny),
        CheckReport::inequality("ideal[yx]", lux(&y.compose(x)?, f)?, ny * nx),
    ];
    Ok(CheckReport::all(format!("ideal[{f}]"), parts).with_digest(CheckReport::dims(x)))
}

/// `‖u x v‖_φ = ‖x‖_φ` for unitaries `u`, `v`: the equality case of [`check_ideal`].
pub fn check_unitary_invariance(
    u: &DenseOperator,
    x: &DenseOperator,
    v: &DenseOperator,
    f: &OrliczFunction,
) -> Result<CheckReport> {
    let lhs = lux(&u.compose(x)?.compose(v)?, f)?;
    let rhs = lux(x, f)?;
    Ok(CheckReport::identity(format!("ideal-unitary-equality[{f}]"), lhs, rhs).with_digest(CheckReport::dims(x)))
}

/// For positive `x`, `Σ φ(s_n(x))` equals the trace of the matrix function
/// `φ(x)` computed from an eigendecomposition.
pub fn check_phi_maps_to_s1(x: &DenseOperator, f: &OrliczFunction) -> Result<CheckReport> {
    let eig = HermitianEigen::new(x)?;
    let values = eig.eigenvalues();
    let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(&min) = values.first() {
        if min < -1e-10 * top.max(f64::MIN_POSITIVE) {
            return Err(Error::NotPositive(format!("smallest eigenvalue {min:e}")));
        }
    }
    let lhs: f64 = linalg::singular_values(x).iter().map(|&s| f.value(s)).sum();
    let rhs = eig.apply(|l| f.value(l.max(0.0))).trace()?.re;
    Ok(CheckReport::identity(format!("phi-maps-to-s1[{f}]"), lhs, rhs).with_digest(CheckReport::dims(x)))
}

/// `|Tr(xy)| <= ‖y‖°_ψ ‖x‖_φ`, plus the rank-one construction from the top
/// singular pair of `y`: for `x₁ = e ⊗ h` with `y e = ‖y‖_∞ h`,
/// `Tr(y x₁) >= ‖y‖_∞` and the bound holds for `x₁` as well.
pub fn check_duality_bound(x: &DenseOperator, y: &DenseOperator, f: &OrliczFunction) -> Result<CheckReport> {
    let psi = f.complementary();
    if !psi.is_admissible() {
        return Err(Error::Unsupported(format!("conjugate of {f} is not an Orlicz function")));
    }
    let y_dual = orlicz(y, &psi)?;
    let lhs = x.compose(y)?.trace()?.norm();
    let mut parts = vec![CheckReport::inequality("duality[bound]", lhs, y_dual * lux(x, f)?)];

    let svd = linalg::svd(y);
    let n = y.cols();
    if svd.sigma.first().copied().unwrap_or(0.0) > 0.0 && y.is_square() {
        let e: Vec<Complex64> = (0..n).map(|r| svd.v.get(r, 0)).collect();
        let h: Vec<Complex64> = (0..n).map(|r| svd.u.get(r, 0)).collect();
        let mut rank_one = DenseOperator::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                rank_one.set(r, c, e[r] * h[c].conj());
            }
        }
        let paired = y.compose(&rank_one)?.trace()?;
        parts.push(CheckReport::inequality("duality[rank-one-attains]", y.operator_norm(), paired.re));
        let rank_one_norm = lux(&rank_one, f)?;
        parts.push(CheckReport::inequality(
            "duality[rank-one-bound]",
            rank_one.compose(y)?.trace()?.norm(),
            y_dual * rank_one_norm,
        ));
    }
    Ok(CheckReport::all(format!("duality[{f}]"), parts).with_digest(CheckReport::dims(x)))
}

/// `‖x‖_φ <= ‖x‖°_φ <= 2 ‖x‖_φ`.
pub fn check_norm_sandwich(x: &DenseOperator, f: &OrliczFunction) -> Result<CheckReport> {
    let lux_norm = lux(x, f)?;
    let orlicz_norm = orlicz(x, f)?;
    let parts = vec![
        CheckReport::inequality("sandwich[lower]", lux_norm, orlicz_norm),
        CheckReport::inequality("sandwich[upper]", orlicz_norm, 2.0 * lux_norm),
    ];
    Ok(CheckReport::all(format!("norm-sandwich[{f}]"), parts).with_digest(CheckReport::dims(x)))
}

/// Orlicz norm of the identity on `μ` coordinates three ways: the closed
/// form `ψ⁻¹(1/μ) μ`, the brute-force sup oracle, and `μ^(1-p)`. The report
/// asserts the first two agree within `1e-4`; the third is recorded in
/// `note` and does not affect `passed`.
pub fn check_rank_one_adjudication(p: f64, mu: usize) -> Result<CheckReport> {
    let f = OrliczFunction::power(p)?;
    let closed = rank_one_orlicz(&f, mu)?;
    let id = DiagonalOperator::from_real(&vec![1.0; mu])?;
    let oracle = orlicz_norm_sup_oracle(&id, &f, 400)?;
    let alternative = (mu as f64).powf(1.0 - p);
    let mut r = CheckReport::identity_with(format!("rank-one-orlicz[p={p},mu={mu}]"), closed, oracle, 1e-4);
    let agrees = (alternative - oracle).abs() <= 1e-4;
    r.note = Some(format!(
        "mu^(1-p) = {} {} the oracle value {}",
        crate::output::format_f64(alternative),
        if agrees { "matches" } else { "disagrees with" },
        crate::output::format_f64(oracle),
    ));
    Ok(r.with_digest(format!("p={p} mu={mu}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 42, trials: 500 }
    }
}

/// Aggregate over all reports sharing a name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub min_slack: f64,
}

pub fn summarize(reports: &[CheckReport]) -> Vec<CheckSummary> {
    let mut out: Vec<CheckSummary> = Vec::new();
    for r in reports {
        let slack = if r.slack.is_nan() { f64::NEG_INFINITY } else { r.slack };
        match out.iter_mut().find(|s| s.name == r.name) {
            Some(s) => {
                s.trials += 1;
                s.failures += usize::from(!r.passed);
                s.min_slack = s.min_slack.min(slack);
            }
            None => out.push(CheckSummary {
                name: r.name.clone(),
                trials: 1,
                failures: usize::from(!r.passed),
                min_slack: slack,
            }),
        }
    }
    out
}

/// Random dense or diagonal operator, alternating by trial.
fn dense_or_diagonal(rng: &mut TrialRng, trial: usize, n: usize) -> DenseOperator {
    if trial % 2 == 0 {
        random_gaussian(rng, n, n)
    } else {
        random_diagonal(rng, n)
    }
}

type TrialFn = dyn Fn(&mut TrialRng, usize) -> (String, Result<CheckReport>) + Sync;

struct Group {
    name: &'static str,
    run: Box<TrialFn>,
}

fn phi(spec: &str) -> OrliczFunction {
    spec.parse().expect("built-in function spec")
}

fn groups() -> Vec<Group> {
    let mut g: Vec<Group> = Vec::new();
    for spec in ["power:p=1.5", "power:p=2", "power:p=3", "cosh"] {
        let f = phi(spec);
        g.push(Group {
            name: "holder",
            run: Box::new(move |rng, _| {
                let n = random_dim(rng);
                let (x, y) = (random_gaussian(rng, n, n), random_gaussian(rng, n, n));
                (format!("{n}x{n} phi={f}"), check_holder(&x, &y, &f))
            }),
        });
    }
    for p in [1.5, 2.0, 3.0] {
        g.push(Group {
            name: "schatten-holder",
            run: Box::new(move |rng, _| {
                let n = random_dim(rng);
                let (x, y) = (random_gaussian(rng, n, n), random_gaussian(rng, n, n));
                (format!("{n}x{n} p={p}"), check_schatten_holder(&x, &y, p))
            }),
        });
    }
    g.push(Group {
        name: "s1-endpoint",
        run: Box::new(|rng, _| {
            let n = random_dim(rng);
            let (x, y) = (random_gaussian(rng, n, n), random_gaussian(rng, n, n));
            (format!("{n}x{n}"), check_s1_endpoint(&x, &y))
        }),
    });
    for spec in ["power:p=2", "power:p=3", "scaled:alpha=2.5", "cosh"] {
        let f = phi(spec);
        g.push(Group {
            name: "modular-norm-bridge",
            run: Box::new(move |rng, trial| {
                let n = random_dim(rng);
                let x = dense_or_diagonal(rng, trial, n);
                // Cycle through unit norm, the raw draw, and a random rescaling.
                let scale = match trial % 3 {
                    0 => match lux(&x, &f) {
                        Ok(v) => 1.0 / v,
                        Err(e) => return (format!("{n}x{n} phi={f}"), Err(e)),
                    },
                    1 => 1.0,
                    _ => 10f64.powf(rand::Rng::random_range(rng, -1.0..1.0)),
                };
                let x = x.scale(Complex64::new(scale, 0.0));
                (format!("{n}x{n} phi={f} scale={scale}"), check_modular_norm_bridge(&x, &f))
            }),
        });
    }
    for p in [1.5, 2.0, 3.0] {
        let f = OrliczFunction::power(p).expect("valid exponent");
        g.push(Group {
            name: "modular-triangle",
            run: Box::new(move |rng, _| {
                let n = random_dim(rng);
                let (x, y) = (random_gaussian(rng, n, n), random_gaussian(rng, n, n));
                (format!("{n}x{n} phi={f}"), check_modular_triangle(&x, &y, &f))
            }),
        });
    }
    for spec in ["power:p=2", "cosh"] {
        let f = phi(spec);
        g.push(Group {
            name: "ideal",
            run: Box::new(move |rng, _| {
                let n = random_dim(rng);
                let y = random_gaussian(rng, n, n);
                let x = random_gaussian(rng, n, n);
                let z = random_gaussian(rng, n, n);
                (format!("{n}x{n} phi={f}"), check_ideal(&y, &x, &z, &f))
            }),
        });
        g.push(Group {
            name: "ideal-unitary-equality",
            run: Box::new(move |rng, _| {
                let n = random_dim(rng);
                let x = random_gaussian(rng, n, n);
                let u = random_unitary(rng, n);
                let v = random_unitary(rng, n);
                (format!("{n}x{n} phi={f}"), check_unitary_invariance(&u, &x, &v, &f))
            }),
        });
    }
    for spec in ["power:p=2", "scaled:alpha=2.5", "cosh"] {
        let f = phi(spec);
        g.push(Group {
            name: "phi-maps-to-s1",
            run: Box::new(move |rng, _| {
                let n = random_dim(rng);
                let x = random_positive(rng, n);
                (format!("{n}x{n} phi={f}"), check_phi_maps_to_s1(&x, &f))
            }),
        });
    }
    for spec in ["power:p=2", "power:p=3", "cosh"] {
        let f = phi(spec);
        g.push(Group {
            name: "norm-sandwich",
            run: Box::new(move |rng, trial| {
                let n = random_dim(rng);
                let x = dense_or_diagonal(rng, trial, n);
                (format!("{n}x{n} phi={f}"), check_norm_sandwich(&x, &f))
            }),
        });
    }
    for spec in ["power:p=2", "power:p=3", "cosh"] {
        let f = phi(spec);
        g.push(Group {
            name: "duality",
            run: Box::new(move |rng, _| {
                let n = random_dim(rng);
                let (x, y) = (random_gaussian(rng, n, n), random_gaussian(rng, n, n));
                (format!("{n}x{n} phi={f}"), check_duality_bound(&x, &y, &f))
            }),
        });
    }
    g
}

/// Runs every check over `trials` seeded trials. Group `g`, trial `t` draws
/// from stream `g * 2^32 + t` of the seed, so the output depends only on
/// the configuration.
pub fn run_suite(config: &SuiteConfig) -> Vec<CheckReport> {
    let groups = groups();
    let mut reports = Vec::with_capacity(groups.len() * config.trials + 1);
    reports.push(
        check_rank_one_adjudication(2.0, 2)
            .unwrap_or_else(|e| CheckReport::failed("rank-one-orlicz", &e)),
    );
    for (gi, group) in groups.iter().enumerate() {
        let batch: Vec<CheckReport> = (0..config.trials)
            .into_par_iter()
            .map(|trial| {
                let stream = ((gi as u64) << 32) + trial as u64;
                let mut rng = trial_rng(config.seed, stream);
                let (inputs, outcome) = (group.run)(&mut rng, trial);
                let report = outcome.unwrap_or_else(|e| CheckReport::failed(group.name, &e));
                report.with_digest(format!("seed={} trial={trial} {inputs}", config.seed))
            })
            .collect();
        reports.extend(batch);
    }
    reports
}
