//! Scalar samplers and densities: gamma, beta, generalized Gaussian, mixing law W.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_p, check_pos, param_err, Result};
use crate::rng::RngStream;
use crate::special::{beta_inc, gamma_p, ln_gamma};

/// Gamma(a, 1) for a > 0; Marsaglia-Tsang, boosted by U^{1/a} when a < 1.
pub(crate) fn gamma_unit(a: f64, rng: &mut RngStream) -> f64 {
    if a < 1.0 {
        let g = gamma_unit(a + 1.0, rng);
        let u = rng.uniform_open();
        return (g.ln() + u.ln() / a).exp();
    }
    let d = a - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = rng.uniform_open();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Gamma(a, b) in the rate parametrization, density b^a x^{a-1} e^{-bx} / Γ(a).
pub fn sample_gamma(a: f64, b: f64, rng: &mut RngStream) -> Result<f64> {
    check_pos("gamma shape", a)?;
    check_pos("gamma rate", b)?;
    Ok(gamma_unit(a, rng) / b)
}

/// Beta(a, b) as G1 / (G1 + G2).
pub fn sample_beta(a: f64, b: f64, rng: &mut RngStream) -> Result<f64> {
    check_pos("beta a", a)?;
    check_pos("beta b", b)?;
    Ok(beta_unchecked(a, b, rng))
}

pub(crate) fn beta_unchecked(a: f64, b: f64, rng: &mut RngStream) -> f64 {
    let g1 = gamma_unit(a, rng);
    let g2 = gamma_unit(b, rng);
    g1 / (g1 + g2)
}

/// Generalized Gaussian N_p, density e^{-|x|^p} / (2Γ(1+1/p)), as S G^{1/p}.
pub fn sample_gen_gaussian(p: f64, rng: &mut RngStream) -> Result<f64> {
    check_p(p)?;
    Ok(gen_gaussian_unchecked(p, rng))
}

#[inline]
pub(crate) fn gen_gaussian_unchecked(p: f64, rng: &mut RngStream) -> f64 {
    let s = rng.sign();
    s * gen_gaussian_abs(p, rng)
}

/// |X| for X ~ N_p, i.e. the law truncated to [0, ∞) and renormalized.
#[inline]
pub(crate) fn gen_gaussian_abs(p: f64, rng: &mut RngStream) -> f64 {
    let g = gamma_unit(1.0 / p, rng);
    if p == 2.0 {
        g.sqrt()
    } else if p == 1.0 {
        g
    } else {
        g.powf(1.0 / p)
    }
}

pub fn gen_gaussian_pdf(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    Ok(gen_gaussian_ln_pdf_unchecked(p, x).exp())
}

pub(crate) fn gen_gaussian_ln_pdf_unchecked(p: f64, x: f64) -> f64 {
    -x.abs().powf(p) - core::f64::consts::LN_2 - ln_gamma(1.0 + 1.0 / p)
}

/// CDF of N_p: 1/2 + sign(x) P(1/p, |x|^p) / 2.
pub fn gen_gaussian_cdf(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    let half = 0.5 * gamma_p(1.0 / p, x.abs().powf(p));
    Ok(if x >= 0.0 { 0.5 + half } else { 0.5 - half })
}

pub fn gamma_cdf(a: f64, b: f64, x: f64) -> f64 {
    gamma_p(a, b * x)
}

pub fn beta_cdf(a: f64, b: f64, x: f64) -> f64 {
    beta_inc(a, b, x)
}

/// Variant tag of a mixing law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WVariant {
    DiracAtZero,
    Exponential,
    Gamma,
    Mixture,
    Tabulated,
}

/// Tabulated mixing law: point masses plus a piecewise-linear density part.
///
/// `continuous_mass` is the weight of the density part; the density values are
/// normalized internally to unit trapezoid mass.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedW {
    atoms: Vec<(f64, f64)>,
    continuous_mass: f64,
    knots: Vec<f64>,
    density: Vec<f64>,
    cell_mass: Vec<f64>,
}

impl TabulatedW {
    pub fn new(atoms: Vec<(f64, f64)>, continuous_mass: f64, knots: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() && continuous_mass == 0.0 {
            return Err(param_err!("tabulated W is empty"));
        }
        for &(w, pi) in &atoms {
            if !(w.is_finite() && w >= 0.0) || !(pi.is_finite() && pi >= 0.0) {
                return Err(param_err!("tabulated atom ({w}, {pi}) invalid"));
            }
        }
        if !(continuous_mass >= 0.0) {
            return Err(param_err!("continuous mass must be nonnegative"));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum::<f64>() + continuous_mass;
        if (total - 1.0).abs() > 1e-12 {
            return Err(param_err!("tabulated weights sum to {total}, expected 1"));
        }
        let mut cell_mass = Vec::new();
        let mut density = density;
        if continuous_mass > 0.0 {
            if knots.len() < 2 || knots.len() != density.len() {
                return Err(param_err!("density grid needs >= 2 knots with matching values"));
            }
            if knots[0] < 0.0 || knots.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(param_err!("density knots must be increasing and nonnegative"));
            }
            if density.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(param_err!("density values must be finite and nonnegative"));
            }
            cell_mass = knots.windows(2).zip(density.windows(2)).map(|(k, d)| 0.5 * (k[1] - k[0]) * (d[0] + d[1])).collect();
            let z: f64 = cell_mass.iter().sum();
            if !(z > 0.0) {
                return Err(param_err!("density grid has zero mass"));
            }
            for v in density.iter_mut() {
                *v /= z;
            }
            for m in cell_mass.iter_mut() {
                *m /= z;
            }
        }
        Ok(TabulatedW { atoms, continuous_mass, knots, density, cell_mass })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }
    pub fn continuous_mass(&self) -> f64 {
        self.continuous_mass
    }
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }
    /// Density values normalized to unit mass.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    fn mass_at_zero(&self) -> f64 {
        self.atoms.iter().filter(|a| a.0 == 0.0).map(|a| a.1).sum()
    }

    fn sample(&self, rng: &mut RngStream) -> f64 {
        let mut u = rng.uniform();
        for &(w, pi) in &self.atoms {
            if u < pi {
                return w;
            }
            u -= pi;
        }
        if self.continuous_mass == 0.0 {
            // rounding slack
            return self.atoms.last().map(|a| a.0).unwrap_or(0.0);
        }
        self.sample_density(rng.uniform())
    }

    /// Inverse CDF of the piecewise-linear density (piecewise-quadratic CDF).
    fn sample_density(&self, mut u: f64) -> f64 {
        let last = self.cell_mass.len() - 1;
        for (k, &m) in self.cell_mass.iter().enumerate() {
            if u >= m && k < last {
                u -= m;
                continue;
            }
            let (x0, x1) = (self.knots[k], self.knots[k + 1]);
            let (d0, d1) = (self.density[k], self.density[k + 1]);
            let h = x1 - x0;
            let u = u.min(m);
            let s = (d1 - d0) / h;
            // solve d0 t + s t^2 / 2 = u for t in [0, h]
            let t = if s.abs() < 1e-300 || (s * h).abs() < 1e-12 * d0.max(1e-300) {
                if d0 > 0.0 {
                    u / d0
                } else {
                    0.0
                }
            } else {
                let disc = (d0 * d0 + 2.0 * s * u).max(0.0);
                2.0 * u / (d0 + disc.sqrt())
            };
            return x0 + t.clamp(0.0, h);
        }
        *self.knots.last().unwrap()
    }
}

/// Mixing measure W on [0, ∞).
#[derive(Clone, Debug, PartialEq)]
pub struct RadialLawW {
    theta: f64,
    alpha: f64,
    variant: WVariant,
    table: Option<TabulatedW>,
}

impl RadialLawW {
    pub fn dirac() -> Self {
        RadialLawW { theta: 1.0, alpha: 1.0, variant: WVariant::DiracAtZero, table: None }
    }

    pub fn exponential() -> Self {
        RadialLawW { theta: 0.0, alpha: 1.0, variant: WVariant::Exponential, table: None }
    }

    pub fn gamma(alpha: f64) -> Result<Self> {
        check_pos("alpha", alpha)?;
        Ok(RadialLawW { theta: 0.0, alpha, variant: WVariant::Gamma, table: None })
    }

    /// ϑδ₀ + (1-ϑ)Gamma(α, 1); α is ignored when ϑ = 1.
    pub fn mixture(theta: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(param_err!("theta must lie in [0, 1], got {theta}"));
        }
        if theta < 1.0 {
            check_pos("alpha", alpha)?;
        }
        Ok(RadialLawW { theta, alpha, variant: WVariant::Mixture, table: None })
    }

    pub fn tabulated(table: TabulatedW) -> Self {
        let theta = table.mass_at_zero();
        RadialLawW { theta, alpha: f64::NAN, variant: WVariant::Tabulated, table: Some(table) }
    }

    pub fn variant(&self) -> WVariant {
        self.variant
    }

    /// Mass W({0}).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Gamma shape of the continuous part (NaN for tabulated laws).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn table(&self) -> Option<&TabulatedW> {
        self.table.as_ref()
    }

    /// True when the law is ϑδ₀ + (1-ϑ)Gamma(α, 1) for some ϑ, α.
    pub fn is_gamma_mixture(&self) -> bool {
        self.variant != WVariant::Tabulated
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self.variant {
            WVariant::DiracAtZero => 0.0,
            WVariant::Exponential => -rng.uniform_open().ln(),
            WVariant::Gamma => gamma_unit(self.alpha, rng),
            WVariant::Mixture => {
                if self.theta >= 1.0 || (self.theta > 0.0 && rng.uniform() < self.theta) {
                    0.0
                } else {
                    gamma_unit(self.alpha, rng)
                }
            }
            WVariant::Tabulated => self.table.as_ref().unwrap().sample(rng),
        }
    }
}

/// One draw from W.
pub fn sample_w(law: &RadialLawW, rng: &mut RngStream) -> f64 {
    law.sample(rng)
}
