//! ℓ_p geometry: norms, volumes, cone/uniform/mixture samplers and the radial density ψ.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dist::{gamma_unit, gen_gaussian_abs, gen_gaussian_unchecked, RadialLawW, WVariant};
use crate::error::{check_p, param_err, Error, Result};
use crate::quad::tanh_sinh;
use crate::rng::RngStream;
use crate::special::{gamma_p, gamma_q, ln_gamma};

/// Which part of ℝ^n a sample lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orthant {
    Full,
    Nonnegative,
}

/// Provenance of a drawn vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMeta {
    pub seed: u64,
    pub stream: u64,
    pub generator: &'static str,
}

/// A point of B_p^n (or B_{p,+}^n) with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct PBallSample {
    pub coords: Vec<f64>,
    pub p: f64,
    pub orthant: Orthant,
    pub meta: SampleMeta,
}

impl PBallSample {
    /// ‖coords‖_p^p, which equals the norm-split statistic B for mixture samples.
    pub fn norm_pow(&self) -> f64 {
        sum_abs_pow(&self.coords, self.p)
    }
}

/// Σ|x_i|^p with the largest magnitude factored out.
pub(crate) fn sum_abs_pow(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if m.is_infinite() {
        return f64::INFINITY;
    }
    let s: f64 = if p == 2.0 {
        x.iter().map(|v| (v / m) * (v / m)).sum()
    } else if p == 1.0 {
        x.iter().map(|v| (v / m).abs()).sum()
    } else {
        x.iter().map(|v| (v.abs() / m).powf(p)).sum()
    };
    m.powf(p) * s
}

fn norm_unchecked(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 || m.is_infinite() {
        return m;
    }
    let s: f64 = x.iter().map(|v| (v.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

fn check_vec(x: &[f64], p: f64) -> Result<()> {
    check_p(p)?;
    if x.is_empty() {
        return Err(param_err!("empty vector"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(param_err!("non-finite entry"));
    }
    Ok(())
}

/// ‖x‖_p = (Σ|x_i|^p)^{1/p}; a quasi-norm for p < 1.
pub fn lp_norm(x: &[f64], p: f64) -> Result<f64> {
    check_vec(x, p)?;
    Ok(norm_unchecked(x, p))
}

/// ‖x‖_p^p.
pub fn lp_norm_pow(x: &[f64], p: f64) -> Result<f64> {
    check_vec(x, p)?;
    Ok(sum_abs_pow(x, p))
}

/// log vol_n(B_p^n) = n log(2Γ(1+1/p)) - log Γ(n/p + 1).
pub fn ln_ball_volume(n: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    if n == 0 {
        return Err(param_err!("dimension must be at least 1"));
    }
    let n = n as f64;
    Ok(n * (core::f64::consts::LN_2 + ln_gamma(1.0 + 1.0 / p)) - ln_gamma(n / p + 1.0))
}

pub fn ball_volume(n: usize, p: f64) -> Result<f64> {
    ln_ball_volume(n, p).map(|v| v.exp())
}

fn check_dim(n: usize, p: f64) -> Result<()> {
    check_p(p)?;
    if n == 0 {
        return Err(param_err!("dimension must be at least 1"));
    }
    Ok(())
}

pub(crate) fn base_draw(n: usize, p: f64, orthant: Orthant, rng: &mut RngStream) -> Vec<f64> {
    match orthant {
        Orthant::Full => (0..n).map(|_| gen_gaussian_unchecked(p, rng)).collect(),
        Orthant::Nonnegative => (0..n).map(|_| gen_gaussian_abs(p, rng)).collect(),
    }
}

fn meta(rng: &RngStream, generator: &'static str) -> SampleMeta {
    SampleMeta { seed: rng.seed(), stream: rng.stream(), generator }
}

fn cone_impl(n: usize, p: f64, orthant: Orthant, rng: &mut RngStream, tag: &'static str) -> Result<PBallSample> {
    check_dim(n, p)?;
    let m = meta(rng, tag);
    let mut x = base_draw(n, p, orthant, rng);
    let r = norm_unchecked(&x, p);
    for v in x.iter_mut() {
        *v /= r;
    }
    Ok(PBallSample { coords: x, p, orthant, meta: m })
}

fn uniform_impl(n: usize, p: f64, orthant: Orthant, rng: &mut RngStream, tag: &'static str) -> Result<PBallSample> {
    check_dim(n, p)?;
    let m = meta(rng, tag);
    let mut x = base_draw(n, p, orthant, rng);
    let r = norm_unchecked(&x, p);
    let u = rng.uniform_open().powf(1.0 / n as f64);
    for v in x.iter_mut() {
        *v = u * (*v / r);
    }
    Ok(PBallSample { coords: x, p, orthant, meta: m })
}

/// Scales `x` to x / (‖x‖_p^p + w)^{1/p}.
pub(crate) fn radial_mix(x: &mut [f64], p: f64, w: f64) {
    if w == 0.0 {
        let r = norm_unchecked(x, p);
        for v in x.iter_mut() {
            *v /= r;
        }
    } else {
        let d = (sum_abs_pow(x, p) + w).powf(1.0 / p);
        for v in x.iter_mut() {
            *v /= d;
        }
    }
}

fn pnpw_impl(n: usize, p: f64, law: &RadialLawW, orthant: Orthant, rng: &mut RngStream, tag: &'static str) -> Result<PBallSample> {
    check_dim(n, p)?;
    let m = meta(rng, tag);
    let mut x = base_draw(n, p, orthant, rng);
    let w = law.sample(rng);
    radial_mix(&mut x, p, w);
    Ok(PBallSample { coords: x, p, orthant, meta: m })
}

/// Cone measure on S_p^{n-1}: X/‖X‖_p with X ~ N_p^{⊗n}.
pub fn sample_cone(n: usize, p: f64, rng: &mut RngStream) -> Result<PBallSample> {
    cone_impl(n, p, Orthant::Full, rng, "cone")
}

/// Uniform law on B_p^n: U^{1/n} X/‖X‖_p.
pub fn sample_uniform_ball(n: usize, p: f64, rng: &mut RngStream) -> Result<PBallSample> {
    uniform_impl(n, p, Orthant::Full, rng, "uniform")
}

/// P_{n,p,W}: X / (‖X‖_p^p + W)^{1/p}.
pub fn sample_pnpw(n: usize, p: f64, law: &RadialLawW, rng: &mut RngStream) -> Result<PBallSample> {
    pnpw_impl(n, p, law, Orthant::Full, rng, "pnpw")
}

pub fn sample_cone_plus(n: usize, p: f64, rng: &mut RngStream) -> Result<PBallSample> {
    cone_impl(n, p, Orthant::Nonnegative, rng, "cone-plus")
}

pub fn sample_uniform_ball_plus(n: usize, p: f64, rng: &mut RngStream) -> Result<PBallSample> {
    uniform_impl(n, p, Orthant::Nonnegative, rng, "uniform-plus")
}

pub fn sample_pnpw_plus(n: usize, p: f64, law: &RadialLawW, rng: &mut RngStream) -> Result<PBallSample> {
    pnpw_impl(n, p, law, Orthant::Nonnegative, rng, "pnpw-plus")
}

/// One draw of B = ‖X‖_p^p / (‖X‖_p^p + W) for X with density ∝ e^{-‖x‖_p^p} f(x),
/// f homogeneous of degree `m`.
///
/// For m = 0 X is drawn coordinatewise; otherwise ‖X‖_p^p is drawn from its
/// polar-coordinate law Gamma((n+m)/p, 1).
pub fn norm_split_b(n: usize, p: f64, m: f64, law: &RadialLawW, rng: &mut RngStream) -> Result<f64> {
    check_dim(n, p)?;
    if !(m.is_finite() && m >= 0.0) {
        return Err(param_err!("homogeneity degree must be finite and nonnegative"));
    }
    let s = if m == 0.0 {
        let x = base_draw(n, p, Orthant::Full, rng);
        sum_abs_pow(&x, p)
    } else {
        gamma_unit((n as f64 + m) / p, rng)
    };
    let w = law.sample(rng);
    Ok(if w == 0.0 { 1.0 } else { s / (s + w) })
}

/// Parameters of the radial density ψ_f.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSpec {
    pub n: usize,
    pub p: f64,
    pub m: f64,
    pub law: RadialLawW,
}

impl PsiSpec {
    pub fn new(n: usize, p: f64, m: f64, law: RadialLawW) -> Result<Self> {
        check_dim(n, p)?;
        if !(m.is_finite() && m >= 0.0) {
            return Err(param_err!("homogeneity degree must be finite and nonnegative"));
        }
        Ok(PsiSpec { n, p, m, law })
    }

    /// (n + m)/p
    pub fn shape(&self) -> f64 {
        (self.n as f64 + self.m) / self.p
    }
}

/// ψ_f(s) for s ∈ [0, 1]; returns +∞ at s = 1 when the density blows up there.
pub fn psi_density(spec: &PsiSpec, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(alloc::format!("s = {s} outside [0, 1]")));
    }
    let sp = s.powf(spec.p);
    Ok(psi_parts(spec, sp, 1.0 - sp))
}

/// ψ evaluated from u = s^p and 1 - u supplied separately.
pub(crate) fn psi_parts(spec: &PsiSpec, u: f64, one_minus_u: f64) -> f64 {
    let a = spec.shape();
    let law = &spec.law;
    match law.variant() {
        WVariant::DiracAtZero => 0.0,
        WVariant::Exponential => 1.0,
        WVariant::Gamma | WVariant::Mixture => {
            let theta = law.theta();
            if theta >= 1.0 {
                return 0.0;
            }
            let alpha = law.alpha();
            if alpha == 1.0 {
                return 1.0 - theta;
            }
            let ln_coef = ln_gamma(alpha + a) - ln_gamma(alpha) - ln_gamma(a + 1.0);
            if one_minus_u == 0.0 {
                return if alpha < 1.0 { f64::INFINITY } else { 0.0 };
            }
            (1.0 - theta) * (ln_coef + (alpha - 1.0) * one_minus_u.ln()).exp()
        }
        WVariant::Tabulated => psi_tabulated(spec, a, u, one_minus_u),
    }
}

fn psi_tabulated(spec: &PsiSpec, a: f64, u: f64, one_minus_u: f64) -> f64 {
    let t = spec.law.table().expect("tabulated law carries a table");
    let lg = ln_gamma(a + 1.0);
    let knots = t.knots();
    let dens = t.density();
    let cm = t.continuous_mass();
    if u == 0.0 {
        // ∫ w^a W(dw) / Γ(a+1)
        let mut s = 0.0;
        for &(w, pi) in t.atoms() {
            if w > 0.0 {
                s += pi * (a * w.ln() - lg).exp();
            }
        }
        if cm > 0.0 {
            let mut c = 0.0;
            for k in 0..knots.len() - 1 {
                let (w0, w1) = (knots[k], knots[k + 1]);
                let slope = (dens[k + 1] - dens[k]) / (w1 - w0);
                let c0 = dens[k] - slope * w0;
                let mom = |w: f64| {
                    if w == 0.0 {
                        0.0
                    } else {
                        c0 * ((a + 1.0) * w.ln() - (a + 1.0).ln() - lg).exp() + slope * ((a + 2.0) * w.ln() - (a + 2.0).ln() - lg).exp()
                    }
                };
                c += mom(w1) - mom(w0);
            }
            s += cm * c;
        }
        return s;
    }
    if one_minus_u == 0.0 {
        return if cm > 0.0 && knots[0] == 0.0 { cm * dens[0] } else { 0.0 };
    }
    let eps = one_minus_u / u;
    let mut s = 0.0;
    for &(w, pi) in t.atoms() {
        if w > 0.0 {
            s += pi * (a * w.ln() - w / eps - (a + 1.0) * one_minus_u.ln() - lg).exp();
        }
    }
    if cm > 0.0 {
        // ∫ w^a e^{-w/ε} ρ(w) dw in v = w/ε, exact for the linear interpolant
        let inc = |shape: f64, v0: f64, v1: f64| -> f64 {
            if v0 >= shape {
                gamma_q(shape, v0) - gamma_q(shape, v1)
            } else {
                gamma_p(shape, v1) - gamma_p(shape, v0)
            }
        };
        let mut c = 0.0;
        for k in 0..knots.len() - 1 {
            let (w0, w1) = (knots[k], knots[k + 1]);
            let slope = (dens[k + 1] - dens[k]) / (w1 - w0);
            let c0 = dens[k] - slope * w0;
            let (v0, v1) = (w0 / eps, w1 / eps);
            c += c0 * inc(a + 1.0, v0, v1) + slope * eps * (a + 1.0) * inc(a + 2.0, v0, v1);
        }
        s += cm * c * (-(a + 1.0) * u.ln()).exp();
    }
    s
}

/// ∫₀¹ (n+m) s^{n+m-1} ψ(s) ds + W({0}), by tanh-sinh quadrature in u = s^p.
pub fn psi_normalization(spec: &PsiSpec) -> f64 {
    let a = spec.shape();
    let q = tanh_sinh(
        |_, du, dv| {
            let u = du;
            a * (u.ln() * (a - 1.0)).exp() * psi_parts(spec, u, dv)
        },
        0.0,
        1.0,
        1e-13,
    );
    q.value + spec.law.theta()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        assert_eq!(lp_norm(&[3.0, 4.0], 2.0).unwrap(), 5.0);
        assert_eq!(lp_norm(&[1.0, 1.0, 1.0, 1.0], 1.0).unwrap(), 4.0);
        assert!((lp_norm(&[2.0, 0.0], 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!(lp_norm(&[], 2.0).is_err());
        assert!(lp_norm(&[1.0], 0.0).is_err());
        assert!(lp_norm(&[f64::NAN], 1.0).is_err());
        // no overflow for huge entries
        assert!((lp_norm(&[1e300, 1e300], 2.0).unwrap() / (2f64.sqrt() * 1e300) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn volumes() {
        assert!((ball_volume(2, 2.0).unwrap() - core::f64::consts::PI).abs() < 1e-13);
        assert!((ball_volume(2, 1.0).unwrap() - 2.0).abs() < 1e-13);
        for p in [0.3, 1.0, 2.5, 7.0] {
            assert!((ball_volume(1, p).unwrap() - 2.0).abs() < 1e-13);
        }
        assert!(ln_ball_volume(100_000, 0.5).unwrap().is_finite());
    }

    #[test]
    fn psi_closed_forms() {
        let s = PsiSpec::new(4, 2.0, 0.0, RadialLawW::gamma(3.0).unwrap()).unwrap();
        assert!((psi_density(&s, 0.0).unwrap() - 6.0).abs() < 1e-12);
        let e = PsiSpec::new(7, 0.7, 3.0, RadialLawW::exponential()).unwrap();
        assert_eq!(psi_density(&e, 0.4).unwrap(), 1.0);
        let g1 = PsiSpec::new(7, 0.7, 3.0, RadialLawW::gamma(1.0).unwrap()).unwrap();
        assert_eq!(psi_density(&g1, 0.9).unwrap(), 1.0);
        let d = PsiSpec::new(3, 2.0, 0.0, RadialLawW::dirac()).unwrap();
        assert_eq!(psi_density(&d, 0.5).unwrap(), 0.0);
        let h = PsiSpec::new(3, 2.0, 0.0, RadialLawW::gamma(0.5).unwrap()).unwrap();
        assert_eq!(psi_density(&h, 1.0).unwrap(), f64::INFINITY);
        assert!(psi_density(&h, 1.5).is_err());
        assert!(psi_density(&h, -0.1).is_err());
    }

    #[test]
    fn norm_split_dirac_is_one() {
        let mut r = RngStream::new(1, 0);
        for _ in 0..100 {
            assert_eq!(norm_split_b(5, 1.5, 0.0, &RadialLawW::dirac(), &mut r).unwrap(), 1.0);
        }
    }
}
