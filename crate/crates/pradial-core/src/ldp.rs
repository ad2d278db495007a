//! Rate functions for the norm statistic and the empirical (spectral)
//! measures, the numerical Legendre-Fenchel transform, scaled CGF estimation
//! and Laplace/Breitung asymptotic checks.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_p, param_err, Error, Result};
use crate::measure::{log_energy, moment_p, relative_entropy, MeasureRep};
use crate::quad::gk_adaptive;
use crate::special::ln_gamma;
use crate::stats::LogSumExp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Euclid,
    SelfAdjoint,
    NonSelfAdjoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateKind {
    Cone,
    Beta,
    Emp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateTarget {
    ConeEuclid,
    BetaEuclid,
    EmpEuclid,
    ConeH,
    BetaH,
    EmpH,
    ConeM,
    BetaM,
    EmpM,
}

impl RateTarget {
    pub fn geometry(self) -> Geometry {
        use RateTarget::*;
        match self {
            ConeEuclid | BetaEuclid | EmpEuclid => Geometry::Euclid,
            ConeH | BetaH | EmpH => Geometry::SelfAdjoint,
            ConeM | BetaM | EmpM => Geometry::NonSelfAdjoint,
        }
    }

    pub fn kind(self) -> RateKind {
        use RateTarget::*;
        match self {
            ConeEuclid | ConeH | ConeM => RateKind::Cone,
            BetaEuclid | BetaH | BetaM => RateKind::Beta,
            EmpEuclid | EmpH | EmpM => RateKind::Emp,
        }
    }

    pub fn name(self) -> &'static str {
        use RateTarget::*;
        match self {
            ConeEuclid => "cone-euclid",
            BetaEuclid => "beta-euclid",
            EmpEuclid => "emp-euclid",
            ConeH => "cone-H",
            BetaH => "beta-H",
            EmpH => "emp-H",
            ConeM => "cone-M",
            BetaM => "beta-M",
            EmpM => "emp-M",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        use RateTarget::*;
        [ConeEuclid, BetaEuclid, EmpEuclid, ConeH, BetaH, EmpH, ConeM, BetaM, EmpM]
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
    }
}

/// Convergence-speed class of log(1 - ϑ_n) relative to the LDP speed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KTheta {
    Critical,
    Greater,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFnSpec {
    pub target: RateTarget,
    pub p: f64,
    /// Only read by matrix targets.
    pub beta: u8,
    /// lim α_n/n (Euclid) or lim α_n/n² (matrix).
    pub alpha: f64,
    pub ktheta: KTheta,
    /// lim n^{-k} log(1 - ϑ_n), nonpositive.
    pub c: f64,
}

impl RateFnSpec {
    pub fn new(target: RateTarget, p: f64, beta: u8, alpha: f64, ktheta: KTheta, c: f64) -> Result<Self> {
        check_p(p)?;
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(param_err!("alpha must be finite and nonnegative, got {alpha}"));
        }
        if !(c <= 0.0) || c == f64::NEG_INFINITY {
            return Err(param_err!("correction c must be finite and nonpositive, got {c}"));
        }
        if target.geometry() != Geometry::Euclid && !matches!(beta, 1 | 2 | 4) {
            return Err(param_err!("beta must be 1, 2 or 4, got {beta}"));
        }
        Ok(RateFnSpec { target, p, beta, alpha, ktheta, c })
    }

    pub fn euclid(kind: RateKind, p: f64, alpha: f64, ktheta: KTheta, c: f64) -> Result<Self> {
        let t = match kind {
            RateKind::Cone => RateTarget::ConeEuclid,
            RateKind::Beta => RateTarget::BetaEuclid,
            RateKind::Emp => RateTarget::EmpEuclid,
        };
        Self::new(t, p, 1, alpha, ktheta, c)
    }

    /// The coefficient of the log term: 1/p, β/(2p) or β/p.
    pub fn gate(&self) -> f64 {
        let b = self.beta as f64;
        match self.target.geometry() {
            Geometry::Euclid => 1.0 / self.p,
            Geometry::SelfAdjoint => b / (2.0 * self.p),
            Geometry::NonSelfAdjoint => b / self.p,
        }
    }

    /// Speed exponent: 1 (speed n) or 2 (speed n²).
    pub fn speed_exponent(&self) -> u32 {
        if self.target.geometry() == Geometry::Euclid {
            1
        } else {
            2
        }
    }

    /// Correction entering the rate: c at critical speed, 0 otherwise.
    pub fn effective_c(&self) -> f64 {
        match self.ktheta {
            KTheta::Critical => self.c,
            KTheta::Greater => 0.0,
        }
    }

    /// Minimizer of the beta rate at critical speed.
    pub fn beta_minimizer(&self) -> f64 {
        match (self.ktheta, self.alpha > 0.0) {
            (KTheta::Critical, true) => self.gate() / (self.gate() + self.alpha),
            _ => 1.0,
        }
    }

    fn expect(&self, geometry: Geometry, kind: RateKind) -> Result<()> {
        if self.target.geometry() != geometry || self.target.kind() != kind {
            return Err(param_err!("spec targets {}, not the requested rate", self.target.name()));
        }
        Ok(())
    }
}

fn xlogx(a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * a.ln()
    }
}

/// log(√π p Γ(p/2) / (2^p √e Γ((p+1)/2))).
pub fn ln_cone_constant(p: f64) -> f64 {
    0.5 * PI.ln() + p.ln() + ln_gamma(0.5 * p) - p * LN_2 - 0.5 - ln_gamma(0.5 * (p + 1.0))
}

/// Additive constant of the self-adjoint (K = β/2p) or non-self-adjoint
/// (K = β/p) cone rate.
pub fn cone_constant(geometry: Geometry, p: f64, beta: u8) -> f64 {
    let b = beta as f64;
    match geometry {
        Geometry::Euclid => 0.0,
        Geometry::SelfAdjoint => b / (2.0 * p) * ln_cone_constant(p),
        Geometry::NonSelfAdjoint => b / p * ln_cone_constant(p),
    }
}

fn check_beta(beta: u8) -> Result<()> {
    if matches!(beta, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(param_err!("beta must be 1, 2 or 4, got {beta}"))
    }
}

/// H(μ‖N_p) + 1 - m_p(μ) when m_p(μ) ≤ 1, else +∞.
pub fn rate_cone_euclid(mu: &MeasureRep, p: f64) -> Result<f64> {
    let m = moment_p(mu, p)?;
    if m > 1.0 {
        return Ok(f64::INFINITY);
    }
    let h = relative_entropy(mu, &MeasureRep::scaled_gen_gaussian(p, 1.0)?)?;
    Ok(h + 1.0 - m)
}

/// (β/2)·E(μ) + (β/2p)·log-constant when m_p(μ) ≤ 1, else +∞.
pub fn rate_cone_h(mu: &MeasureRep, p: f64, beta: u8) -> Result<f64> {
    check_beta(beta)?;
    if moment_p(mu, p)? > 1.0 {
        return Ok(f64::INFINITY);
    }
    let e = log_energy(mu);
    if e == f64::INFINITY {
        return Ok(e);
    }
    Ok(0.5 * beta as f64 * e + cone_constant(Geometry::SelfAdjoint, p, beta))
}

/// (β/2)·E(μ) + (β/p)·log-constant when m_{p/2}(μ) ≤ 1, else +∞.
/// μ must live on the nonnegative half-line.
pub fn rate_cone_m(mu: &MeasureRep, p: f64, beta: u8) -> Result<f64> {
    check_beta(beta)?;
    check_p(p)?;
    if !mu.is_nonnegative() {
        return Err(Error::Domain("non-self-adjoint rates are defined on measures on [0, ∞)".into()));
    }
    if moment_p(mu, 0.5 * p)? > 1.0 {
        return Ok(f64::INFINITY);
    }
    let e = log_energy(mu);
    if e == f64::INFINITY {
        return Ok(e);
    }
    Ok(0.5 * beta as f64 * e + cone_constant(Geometry::NonSelfAdjoint, p, beta))
}

fn rate_beta_generic(x: f64, spec: &RateFnSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(alloc::format!("beta rate argument {x} outside [0, 1]")));
    }
    let g = spec.gate();
    let a = spec.alpha;
    Ok(match spec.ktheta {
        KTheta::Greater => {
            if x == 1.0 {
                0.0
            } else {
                f64::INFINITY
            }
        }
        KTheta::Critical if a == 0.0 => {
            if x == 0.0 {
                f64::INFINITY
            } else {
                -g * x.ln() - spec.c
            }
        }
        KTheta::Critical => {
            if x == 0.0 || x == 1.0 {
                f64::INFINITY
            } else {
                -g * (x / g).ln() - a * ((1.0 - x) / a).ln() - xlogx(g + a) - spec.c
            }
        }
    })
}

pub fn rate_beta_euclid(x: f64, spec: &RateFnSpec) -> Result<f64> {
    spec.expect(Geometry::Euclid, RateKind::Beta)?;
    rate_beta_generic(x, spec)
}

pub fn rate_beta_h(x: f64, spec: &RateFnSpec) -> Result<f64> {
    spec.expect(Geometry::SelfAdjoint, RateKind::Beta)?;
    rate_beta_generic(x, spec)
}

pub fn rate_beta_m(x: f64, spec: &RateFnSpec) -> Result<f64> {
    spec.expect(Geometry::NonSelfAdjoint, RateKind::Beta)?;
    rate_beta_generic(x, spec)
}

/// Beta rate for any beta-kind spec.
pub fn rate_beta(x: f64, spec: &RateFnSpec) -> Result<f64> {
    if spec.target.kind() != RateKind::Beta {
        return Err(param_err!("spec targets {}, not a beta rate", spec.target.name()));
    }
    rate_beta_generic(x, spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmpBranch {
    /// I_cone - c.
    Cone,
    /// I_cone plus the mixing and moment-penalty terms.
    MomentPenalty,
    Infinite,
}

/// Summands of an empirical-measure rate. `value` is their sum, or +∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmpRateParts {
    pub branch: EmpBranch,
    pub cone: f64,
    /// The moment entering the gate and the penalty.
    pub moment: f64,
    /// g log g - (g+α) log(g+α).
    pub mixing: f64,
    /// -α log((1 - m)/α).
    pub penalty: f64,
    /// -c.
    pub correction: f64,
    pub value: f64,
}

/// Case dispatch of the empirical-measure rates.
///
/// At k(ϑ) greater than critical the correction vanishes and the rate is the
/// cone rate for every α.
pub fn rate_emp_parts(mu: &MeasureRep, spec: &RateFnSpec) -> Result<EmpRateParts> {
    if spec.target.kind() != RateKind::Emp {
        return Err(param_err!("spec targets {}, not an empirical-measure rate", spec.target.name()));
    }
    let (p, beta) = (spec.p, spec.beta);
    let geometry = spec.target.geometry();
    let moment = match geometry {
        Geometry::NonSelfAdjoint => {
            if !mu.is_nonnegative() {
                return Err(Error::Domain("non-self-adjoint rates are defined on measures on [0, ∞)".into()));
            }
            moment_p(mu, 0.5 * p)?
        }
        _ => moment_p(mu, p)?,
    };
    let inf = EmpRateParts {
        branch: EmpBranch::Infinite,
        cone: f64::INFINITY,
        moment,
        mixing: 0.0,
        penalty: 0.0,
        correction: 0.0,
        value: f64::INFINITY,
    };
    let penalised = spec.alpha > 0.0 && spec.ktheta == KTheta::Critical;
    if moment > 1.0 || (penalised && moment >= 1.0) {
        return Ok(inf);
    }
    let cone = match geometry {
        Geometry::Euclid => rate_cone_euclid(mu, p)?,
        Geometry::SelfAdjoint => rate_cone_h(mu, p, beta)?,
        Geometry::NonSelfAdjoint => rate_cone_m(mu, p, beta)?,
    };
    if cone == f64::INFINITY {
        return Ok(EmpRateParts { cone, ..inf });
    }
    let correction = -spec.effective_c();
    if !penalised {
        return Ok(EmpRateParts { branch: EmpBranch::Cone, cone, moment, mixing: 0.0, penalty: 0.0, correction, value: cone + correction });
    }
    let (g, a) = (spec.gate(), spec.alpha);
    let mixing = xlogx(g) - xlogx(g + a);
    let penalty = -a * ((1.0 - moment) / a).ln();
    Ok(EmpRateParts {
        branch: EmpBranch::MomentPenalty,
        cone,
        moment,
        mixing,
        penalty,
        correction,
        value: cone + mixing + penalty + correction,
    })
}

pub fn rate_emp_euclid(mu: &MeasureRep, spec: &RateFnSpec) -> Result<f64> {
    spec.expect(Geometry::Euclid, RateKind::Emp)?;
    Ok(rate_emp_parts(mu, spec)?.value)
}

pub fn rate_emp_h(mu: &MeasureRep, spec: &RateFnSpec) -> Result<f64> {
    spec.expect(Geometry::SelfAdjoint, RateKind::Emp)?;
    Ok(rate_emp_parts(mu, spec)?.value)
}

pub fn rate_emp_m(mu: &MeasureRep, spec: &RateFnSpec) -> Result<f64> {
    spec.expect(Geometry::NonSelfAdjoint, RateKind::Emp)?;
    Ok(rate_emp_parts(mu, spec)?.value)
}

/// Golden-section minimisation of a unimodal function on [a, b].
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + c.abs() + d.abs()) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    (x, fx)
}

/// inf of the beta rate over [lo, hi] ⊂ [0, 1]; the rate is convex in x.
pub fn rate_beta_infimum(spec: &RateFnSpec, lo: f64, hi: f64) -> Result<f64> {
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(Error::Domain(alloc::format!("interval [{lo}, {hi}] not inside [0, 1]")));
    }
    let ends = rate_beta(lo, spec)?.min(rate_beta(hi, spec)?);
    if hi == lo {
        return Ok(ends);
    }
    let (_, fx) = golden_section_min(|x| rate_beta(x, spec).unwrap_or(f64::INFINITY), lo, hi, 1e-12);
    Ok(fx.min(ends))
}

/// min over z ∈ (0, p] of the Euclidean cone rate along the scaled family
/// z^{1/p} N_p, returned as (z, value).
pub fn cone_euclid_scaled_family_min(p: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    let rate = |z: f64| -> f64 {
        MeasureRep::scaled_gen_gaussian(p, z).and_then(|mu| rate_cone_euclid(&mu, p)).unwrap_or(f64::INFINITY)
    };
    let (z, v) = golden_section_min(rate, 1e-9, p, 1e-12);
    let edge = rate(p);
    Ok(if edge <= v { (p, edge) } else { (z, v) })
}

/// Ψ*(s) = sup_{y∈(0,1)} [s y + g log(1-y) + α log y], for α > 0.
pub fn psi_conjugate(s: f64, g: f64, alpha: f64) -> f64 {
    let b = s - g - alpha;
    let d = (b * b + 4.0 * s * alpha).sqrt();
    let y = if b > 0.0 { (d + b) / (2.0 * s) } else { 2.0 * alpha / (d - b) };
    s * y + g * (-y).ln_1p() + alpha * y.ln()
}

/// Analytic limit Λ(t) of the scaled CGF of the norm statistic at critical
/// speed, with gate g (1/p, β/2p or β/p), α and correction c.
pub fn beta_cgf_limit(t: f64, g: f64, alpha: f64, c: f64) -> f64 {
    if alpha > 0.0 {
        t + c - xlogx(g) - xlogx(alpha) + xlogx(g + alpha) + psi_conjugate(-t, g, alpha)
    } else if t >= -g {
        t + c
    } else {
        c - g + g * (g / -t).ln()
    }
}

/// (1/n^k) log[(1/N) Σ exp(n^k t B_i)].
pub fn scaled_cgf_estimate(samples: &[f64], t: f64, n: u64, k: u32) -> Result<f64> {
    if samples.is_empty() {
        return Err(param_err!("no samples"));
    }
    if !(k == 1 || k == 2) {
        return Err(param_err!("k must be 1 or 2, got {k}"));
    }
    if samples.iter().any(|b| !(0.0..=1.0).contains(b)) {
        return Err(Error::Domain("samples must lie in [0, 1]".into()));
    }
    let s = (n as f64).powi(k as i32);
    let mut acc = LogSumExp::default();
    for b in samples {
        acc.push(s * t * b);
    }
    Ok(acc.ln_mean() / s)
}

fn check_grid(t: &[f64], v: &[f64]) -> Result<()> {
    if t.len() < 3 || t.len() != v.len() {
        return Err(param_err!("grid needs at least three points with matching values"));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) || t.iter().chain(v).any(|x| !x.is_finite()) {
        return Err(param_err!("grid must be finite and strictly increasing"));
    }
    Ok(())
}

/// Quadratic through three grid points.
fn quad_interp(t: &[f64], v: &[f64], j: usize) -> impl Fn(f64) -> f64 {
    let (t0, t1, t2) = (t[j], t[j + 1], t[j + 2]);
    let (v0, v1, v2) = (v[j], v[j + 1], v[j + 2]);
    move |s: f64| {
        v0 * (s - t1) * (s - t2) / ((t0 - t1) * (t0 - t2))
            + v1 * (s - t0) * (s - t2) / ((t1 - t0) * (t1 - t2))
            + v2 * (s - t0) * (s - t1) / ((t2 - t0) * (t2 - t1))
    }
}

fn quad_slope(t: &[f64], v: &[f64], j: usize, s: f64) -> f64 {
    let (t0, t1, t2) = (t[j], t[j + 1], t[j + 2]);
    let (v0, v1, v2) = (v[j], v[j + 1], v[j + 2]);
    v0 * (2.0 * s - t1 - t2) / ((t0 - t1) * (t0 - t2))
        + v1 * (2.0 * s - t0 - t2) / ((t1 - t0) * (t1 - t2))
        + v2 * (2.0 * s - t0 - t1) / ((t2 - t0) * (t2 - t1))
}

/// Λ*(x) = sup_t [x t - Λ(t)] for Λ sampled on a grid.
///
/// The grid maximiser is refined by golden section on a local quadratic
/// interpolant. When the maximiser sits at a grid end and x exceeds the
/// one-sided slope there, the supremum leaves the domain and +∞ is returned.
pub fn legendre_transform(t: &[f64], v: &[f64], x: f64) -> Result<f64> {
    check_grid(t, v)?;
    let n = t.len();
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..n {
        let g = x * t[i] - v[i];
        if g > best_v {
            best_v = g;
            best = i;
        }
    }
    let slope_tol = 1e-9 * (1.0 + x.abs());
    if best == n - 1 && x > quad_slope(t, v, n - 3, t[n - 1]) + slope_tol {
        return Ok(f64::INFINITY);
    }
    if best == 0 && x < quad_slope(t, v, 0, t[0]) - slope_tol {
        return Ok(f64::INFINITY);
    }
    let j = best.saturating_sub(1).min(n - 3);
    let q = quad_interp(t, v, j);
    let lo = t[best.saturating_sub(1)];
    let hi = t[(best + 1).min(n - 1)];
    let (_, m) = golden_section_min(|s| q(s) - x * s, lo, hi, 1e-14);
    Ok((-m).max(best_v))
}

/// Λ* on a grid of arguments.
pub fn legendre_on_grid(t: &[f64], v: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter().map(|x| legendre_transform(t, v, *x)).collect()
}

type Func<'a> = &'a dyn Fn(f64) -> f64;

fn argmax(pfn: Func, a: f64, b: f64) -> (f64, f64) {
    let (x, m) = golden_section_min(|x| -pfn(x), a, b, 1e-13);
    (x, -m)
}

/// ∫_a^b q e^{n(p - shift)} with a breakpoint at `mid`.
fn scaled_integral(q: Func, pfn: Func, a: f64, b: f64, mid: f64, n: f64, shift: f64) -> f64 {
    let f = |x: f64| q(x) * (n * (pfn(x) - shift)).exp();
    let mut s = 0.0;
    if mid > a {
        s += gk_adaptive(f, a, mid, 1e-300, 1e-12).value;
    }
    if b > mid {
        s += gk_adaptive(f, mid, b, 1e-300, 1e-12).value;
    }
    s
}

/// Ratio of ∫_a^b q e^{np} to √(2π/(n|p''(x₀)|)) q(x₀) e^{np(x₀)}, x₀ the
/// interior maximiser of p.
pub fn laplace_check(q: Func, pfn: Func, interval: (f64, f64), n: f64) -> Result<f64> {
    let (a, b) = interval;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(param_err!("interval must be finite and nonempty"));
    }
    let (x0, p0) = argmax(pfn, a, b);
    let h = 1e-4 * (b - a);
    let d2 = (pfn(x0 + h) - 2.0 * p0 + pfn(x0 - h)) / (h * h);
    if !(d2 < 0.0) {
        return Err(Error::Domain("maximiser has nonnegative second derivative".into()));
    }
    let num = scaled_integral(q, pfn, a, b, x0, n, p0);
    Ok(num / ((2.0 * PI / (n * d2.abs())).sqrt() * q(x0)))
}

/// (1/n) log[s¹ + s² ∫ q e^{np}] and its predicted limit (1/n) log s² + p(x*).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptedCheck {
    pub value: f64,
    pub limit: f64,
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Adapted Laplace principle with sequences given through their logs.
pub fn laplace_adapted(q: Func, pfn: Func, interval: (f64, f64), n: f64, ln_s1: f64, ln_s2: f64) -> Result<AdaptedCheck> {
    let (a, b) = interval;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(param_err!("interval must be finite and nonempty"));
    }
    let (x0, p0) = argmax(pfn, a, b);
    let ln_int = n * p0 + scaled_integral(q, pfn, a, b, x0, n, p0).ln();
    Ok(AdaptedCheck { value: ln_add_exp(ln_s1, ln_s2 + ln_int) / n, limit: ln_s2 / n + p0 })
}

/// Ratio of ∫_0^1 q e^{np} to q(0) e^{np(0)} / (n|p'(0)|), for p maximal at 0.
pub fn breitung_check(q: Func, pfn: Func, n: f64) -> Result<f64> {
    let p0 = pfn(0.0);
    let h = 1e-5;
    let d1 = (-3.0 * p0 + 4.0 * pfn(h) - pfn(2.0 * h)) / (2.0 * h);
    if !(d1 < 0.0) {
        return Err(Error::Domain("p'(0) must be negative".into()));
    }
    let num = scaled_integral(q, pfn, 0.0, 1.0, 0.0, n, p0);
    Ok(num * n * d1.abs() / q(0.0))
}

/// Adapted boundary expansion on [0, 1].
pub fn breitung_adapted(q: Func, pfn: Func, n: f64, ln_s1: f64, ln_s2: f64) -> Result<AdaptedCheck> {
    let p0 = pfn(0.0);
    let ln_int = n * p0 + scaled_integral(q, pfn, 0.0, 1.0, 0.0, n, p0).ln();
    Ok(AdaptedCheck { value: ln_add_exp(ln_s1, ln_s2 + ln_int) / n, limit: ln_s2 / n + p0 })
}
