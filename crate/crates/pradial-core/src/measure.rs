//! Probability measures on ℝ and the functionals the rate functions need:
//! p-th moments, relative entropy against N_p and logarithmic energy.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_p, param_err, Result};
use crate::quad::{integrate, tanh_sinh, GaussLegendre};
use crate::special::{ln_beta, ln_gamma};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    RealLine,
    Nonnegative,
}

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Analytic families. Beta-type families live on [lo, hi].
#[derive(Clone)]
pub enum AnalyticFamily {
    /// Law of z^{1/p} X with X ~ N_p.
    ScaledGenGaussian { p: f64, z: f64 },
    BetaDensity { a: f64, b: f64, lo: f64, hi: f64 },
    Arcsine { lo: f64, hi: f64 },
    Uniform { lo: f64, hi: f64 },
    /// Density callable on [lo, hi]; either end may be infinite.
    Custom { density: DensityFn, lo: f64, hi: f64 },
}

impl fmt::Debug for AnalyticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticFamily::ScaledGenGaussian { p, z } => write!(f, "ScaledGenGaussian {{ p: {p}, z: {z} }}"),
            AnalyticFamily::BetaDensity { a, b, lo, hi } => write!(f, "BetaDensity {{ a: {a}, b: {b}, lo: {lo}, hi: {hi} }}"),
            AnalyticFamily::Arcsine { lo, hi } => write!(f, "Arcsine {{ lo: {lo}, hi: {hi} }}"),
            AnalyticFamily::Uniform { lo, hi } => write!(f, "Uniform {{ lo: {lo}, hi: {hi} }}"),
            AnalyticFamily::Custom { lo, hi, .. } => write!(f, "Custom {{ lo: {lo}, hi: {hi} }}"),
        }
    }
}

impl AnalyticFamily {
    pub fn support(&self) -> (f64, f64) {
        match *self {
            AnalyticFamily::ScaledGenGaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            AnalyticFamily::BetaDensity { lo, hi, .. } | AnalyticFamily::Arcsine { lo, hi } | AnalyticFamily::Uniform { lo, hi } => (lo, hi),
            AnalyticFamily::Custom { lo, hi, .. } => (lo, hi),
        }
    }

    fn beta_params(&self) -> Option<(f64, f64, f64, f64)> {
        match *self {
            AnalyticFamily::BetaDensity { a, b, lo, hi } => Some((a, b, lo, hi)),
            AnalyticFamily::Arcsine { lo, hi } => Some((0.5, 0.5, lo, hi)),
            AnalyticFamily::Uniform { lo, hi } => Some((1.0, 1.0, lo, hi)),
            _ => None,
        }
    }

    /// log density at x, given the distances to the support ends.
    fn ln_density(&self, x: f64, dlo: f64, dhi: f64) -> f64 {
        if let Some((a, b, lo, hi)) = self.beta_params() {
            let l = hi - lo;
            if dlo < 0.0 || dhi < 0.0 {
                return f64::NEG_INFINITY;
            }
            return (a - 1.0) * (dlo / l).ln() + (b - 1.0) * (dhi / l).ln() - l.ln() - ln_beta(a, b);
        }
        match self {
            AnalyticFamily::ScaledGenGaussian { p, z } => {
                let s = z.powf(1.0 / p);
                -(x / s).abs().powf(*p) - core::f64::consts::LN_2 - ln_gamma(1.0 + 1.0 / p) - s.ln()
            }
            AnalyticFamily::Custom { density, .. } => density(x).ln(),
            _ => unreachable!(),
        }
    }

    fn density(&self, x: f64, dlo: f64, dhi: f64) -> f64 {
        if let AnalyticFamily::Custom { density, .. } = self {
            return density(x);
        }
        self.ln_density(x, dlo, dhi).exp()
    }

    /// ∫ g(x, dlo, dhi) dx over [a, b] ⊂ support.
    fn integrate_piece<G: Fn(f64, f64, f64) -> f64>(&self, a: f64, b: f64, g: &G) -> f64 {
        let (lo, hi) = self.support();
        if a.is_finite() && b.is_finite() {
            let (oa, ob) = (a - lo, hi - b);
            tanh_sinh(|x, da, db| g(x, oa + da, ob + db), a, b, 1e-12).value
        } else {
            integrate(|x| g(x, x - lo, hi - x), a, b, 1e-14, 1e-12).value
        }
    }

    /// ∫ g(x, dlo, dhi) dx over the support, split at 0 when 0 is interior.
    fn integrate_support<G: Fn(f64, f64, f64) -> f64>(&self, g: &G) -> f64 {
        let (lo, hi) = self.support();
        if lo < 0.0 && hi > 0.0 {
            self.integrate_piece(lo, 0.0, g) + self.integrate_piece(0.0, hi, g)
        } else {
            self.integrate_piece(lo, hi, g)
        }
    }
}

/// Representation of a probability measure.
#[derive(Clone, Debug)]
pub enum MeasureForm {
    Atoms { points: Vec<f64>, weights: Vec<f64> },
    /// Piecewise-linear density through (knots, values), zero outside.
    Grid { knots: Vec<f64>, values: Vec<f64> },
    Analytic(AnalyticFamily),
}

#[derive(Clone, Debug)]
pub struct MeasureRep {
    pub form: MeasureForm,
    pub support: Support,
}

fn check_support_points(xs: &[f64], support: Support) -> Result<()> {
    if support == Support::Nonnegative && xs.iter().any(|x| *x < 0.0) {
        return Err(param_err!("negative point in a measure declared on the nonnegative half-line"));
    }
    Ok(())
}

fn trapezoid(knots: &[f64], values: &[f64]) -> f64 {
    knots.windows(2).zip(values.windows(2)).map(|(k, v)| 0.5 * (k[1] - k[0]) * (v[0] + v[1])).sum()
}

impl MeasureRep {
    pub fn atoms(points: Vec<f64>, weights: Vec<f64>, support: Support) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(param_err!("atoms need matching, nonempty points and weights"));
        }
        if points.iter().any(|x| !x.is_finite()) || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(param_err!("atoms must be finite with nonnegative weights"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(param_err!("atom weights sum to {total}, expected 1"));
        }
        check_support_points(&points, support)?;
        Ok(MeasureRep { form: MeasureForm::Atoms { points, weights }, support })
    }

    pub fn uniform_atoms(points: Vec<f64>, support: Support) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let weights = alloc::vec![w; points.len()];
        if points.is_empty() {
            return Err(param_err!("no atoms"));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(param_err!("atoms must be finite"));
        }
        check_support_points(&points, support)?;
        Ok(MeasureRep { form: MeasureForm::Atoms { points, weights }, support })
    }

    pub fn grid(knots: Vec<f64>, values: Vec<f64>, support: Support) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(param_err!("grid needs at least two knots with matching values"));
        }
        if knots.iter().any(|x| !x.is_finite()) || knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(param_err!("grid knots must be finite and strictly increasing"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(param_err!("grid density values must be finite and nonnegative"));
        }
        let mass = trapezoid(&knots, &values);
        if (mass - 1.0).abs() > 1e-9 {
            return Err(param_err!("grid density has trapezoid mass {mass}, expected 1"));
        }
        check_support_points(&knots, support)?;
        Ok(MeasureRep { form: MeasureForm::Grid { knots, values }, support })
    }

    /// Law of z^{1/p} X, X ~ N_p; z = 1 gives N_p itself.
    pub fn scaled_gen_gaussian(p: f64, z: f64) -> Result<Self> {
        check_p(p)?;
        crate::error::check_pos("z", z)?;
        Ok(MeasureRep { form: MeasureForm::Analytic(AnalyticFamily::ScaledGenGaussian { p, z }), support: Support::RealLine })
    }

    pub fn beta_density(a: f64, b: f64, lo: f64, hi: f64) -> Result<Self> {
        crate::error::check_pos("a", a)?;
        crate::error::check_pos("b", b)?;
        Self::interval_family(AnalyticFamily::BetaDensity { a, b, lo, hi }, lo, hi)
    }

    pub fn arcsine(lo: f64, hi: f64) -> Result<Self> {
        Self::interval_family(AnalyticFamily::Arcsine { lo, hi }, lo, hi)
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::interval_family(AnalyticFamily::Uniform { lo, hi }, lo, hi)
    }

    fn interval_family(fam: AnalyticFamily, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(param_err!("interval [{lo}, {hi}] invalid"));
        }
        let support = if lo >= 0.0 { Support::Nonnegative } else { Support::RealLine };
        Ok(MeasureRep { form: MeasureForm::Analytic(fam), support })
    }

    /// Density callable on [lo, hi]; its mass is checked by quadrature.
    pub fn custom(density: DensityFn, lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) || lo.is_nan() || hi.is_nan() {
            return Err(param_err!("interval [{lo}, {hi}] invalid"));
        }
        let fam = AnalyticFamily::Custom { density, lo, hi };
        let mass = fam.integrate_support(&|x, a, b| fam.density(x, a, b));
        if (mass - 1.0).abs() > 1e-9 {
            return Err(param_err!("custom density has mass {mass}, expected 1"));
        }
        let support = if lo >= 0.0 { Support::Nonnegative } else { Support::RealLine };
        Ok(MeasureRep { form: MeasureForm::Analytic(fam), support })
    }

    /// Whether the measure charges (-∞, 0) at most on a null set.
    pub fn is_nonnegative(&self) -> bool {
        match &self.form {
            MeasureForm::Atoms { points, weights } => points.iter().zip(weights).all(|(x, w)| *x >= 0.0 || *w == 0.0),
            MeasureForm::Grid { knots, values } => knots.iter().zip(values).all(|(x, v)| *x >= 0.0 || *v == 0.0),
            MeasureForm::Analytic(f) => f.support().0 >= 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        match &self.form {
            MeasureForm::Atoms { weights, .. } => weights.iter().sum(),
            MeasureForm::Grid { knots, values } => trapezoid(knots, values),
            MeasureForm::Analytic(f) => f.integrate_support(&|x, a, b| f.density(x, a, b)),
        }
    }

    /// Density at x (grid and analytic forms).
    pub fn density(&self, x: f64) -> Option<f64> {
        match &self.form {
            MeasureForm::Atoms { .. } => None,
            MeasureForm::Grid { knots, values } => Some(grid_density(knots, values, x)),
            MeasureForm::Analytic(f) => {
                let (lo, hi) = f.support();
                if x < lo || x > hi {
                    return Some(0.0);
                }
                Some(f.density(x, x - lo, hi - x))
            }
        }
    }

    /// The image measure under x ↦ x + a.
    pub fn translated(&self, a: f64) -> Result<Self> {
        let support = Support::RealLine;
        match &self.form {
            MeasureForm::Atoms { points, weights } => MeasureRep::atoms(points.iter().map(|x| x + a).collect(), weights.clone(), support),
            MeasureForm::Grid { knots, values } => MeasureRep::grid(knots.iter().map(|x| x + a).collect(), values.clone(), support),
            MeasureForm::Analytic(f) => match *f {
                AnalyticFamily::BetaDensity { a: pa, b, lo, hi } => MeasureRep::beta_density(pa, b, lo + a, hi + a),
                AnalyticFamily::Arcsine { lo, hi } => MeasureRep::arcsine(lo + a, hi + a),
                AnalyticFamily::Uniform { lo, hi } => MeasureRep::uniform(lo + a, hi + a),
                _ => Err(param_err!("translation not representable for this family")),
            },
        }
    }

    /// Histogram of an atomic measure with bins of width `h`, as a grid density.
    ///
    /// Knots sit at bin centres (value = bin mass / h) with a zero knot one bin
    /// beyond each end, so the trapezoid mass is exactly the atom mass.
    pub fn histogram_projection(&self, h: f64) -> Result<Self> {
        crate::error::check_pos("bin width", h)?;
        let MeasureForm::Atoms { points, weights } = &self.form else {
            return Err(param_err!("histogram projection applies to atomic measures"));
        };
        let lo = points.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = points.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let start = (lo / h).floor() * h;
        let nb = (((hi - start) / h).floor() as usize) + 1;
        let mut mass = alloc::vec![0.0; nb];
        for (x, w) in points.iter().zip(weights) {
            let k = (((x - start) / h).floor() as usize).min(nb - 1);
            mass[k] += w;
        }
        let mut knots = Vec::with_capacity(nb + 2);
        let mut values = Vec::with_capacity(nb + 2);
        knots.push(start - 0.5 * h);
        values.push(0.0);
        for (k, m) in mass.iter().enumerate() {
            knots.push(start + (k as f64 + 0.5) * h);
            values.push(m / h);
        }
        knots.push(start + (nb as f64 + 0.5) * h);
        values.push(0.0);
        let support = if knots[0] >= 0.0 { Support::Nonnegative } else { Support::RealLine };
        MeasureRep::grid(knots, values, support)
    }
}

fn grid_density(knots: &[f64], values: &[f64], x: f64) -> f64 {
    if x < knots[0] || x > knots[knots.len() - 1] {
        return 0.0;
    }
    let k = match knots.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => return values[i],
        Err(i) => i - 1,
    };
    let t = (x - knots[k]) / (knots[k + 1] - knots[k]);
    values[k] + t * (values[k + 1] - values[k])
}

/// ∫ g(x) ρ(x) dx for a grid density, Gauss-Legendre per cell, cells split at 0.
fn grid_expect<G: Fn(f64, f64) -> f64>(knots: &[f64], values: &[f64], g: G) -> f64 {
    let gl = GaussLegendre::new(16);
    let mut s = 0.0;
    for k in 0..knots.len() - 1 {
        let (x0, x1) = (knots[k], knots[k + 1]);
        let (v0, v1) = (values[k], values[k + 1]);
        if v0 == 0.0 && v1 == 0.0 {
            continue;
        }
        let rho = |x: f64| v0 + (x - x0) / (x1 - x0) * (v1 - v0);
        let piece = |a: f64, b: f64| gl.integrate(|x| g(x, rho(x)), a, b);
        if x0 < 0.0 && x1 > 0.0 {
            s += piece(x0, 0.0) + piece(0.0, x1);
        } else {
            s += piece(x0, x1);
        }
    }
    s
}

/// m_p(μ) = ∫|x|^p μ(dx).
pub fn moment_p(mu: &MeasureRep, p: f64) -> Result<f64> {
    check_p(p)?;
    let v = match &mu.form {
        MeasureForm::Atoms { points, weights } => points.iter().zip(weights).map(|(x, w)| w * x.abs().powf(p)).sum(),
        MeasureForm::Grid { knots, values } => grid_expect(knots, values, |x, r| x.abs().powf(p) * r),
        MeasureForm::Analytic(f) => match *f {
            AnalyticFamily::ScaledGenGaussian { p: q, z } => {
                if p == q {
                    z / q
                } else {
                    (p / q * z.ln() + ln_gamma((p + 1.0) / q) - ln_gamma(1.0 / q)).exp()
                }
            }
            _ => f.integrate_support(&|x, a, b| {
                let r = f.density(x, a, b);
                if r == 0.0 {
                    0.0
                } else {
                    x.abs().powf(p) * r
                }
            }),
        },
    };
    Ok(if v.is_finite() { v } else { f64::INFINITY })
}

/// H(ν‖μ) for μ = law of z^{1/p} X, X ~ N_p. Atoms give +∞.
pub fn relative_entropy(nu: &MeasureRep, mu: &MeasureRep) -> Result<f64> {
    let (p, zr) = match &mu.form {
        MeasureForm::Analytic(AnalyticFamily::ScaledGenGaussian { p, z }) => (*p, *z),
        _ => return Err(param_err!("reference measure must be a generalized Gaussian")),
    };
    let reference = AnalyticFamily::ScaledGenGaussian { p, z: zr };
    let ln_ref = |x: f64| reference.ln_density(x, f64::INFINITY, f64::INFINITY);
    let h = match &nu.form {
        MeasureForm::Atoms { .. } => f64::INFINITY,
        MeasureForm::Grid { knots, values } => grid_expect(knots, values, |x, r| if r > 0.0 { r * (r.ln() - ln_ref(x)) } else { 0.0 }),
        MeasureForm::Analytic(f) => match *f {
            AnalyticFamily::ScaledGenGaussian { p: q, z } if q == p => -(z / zr).ln() / p - 1.0 / p + z / (p * zr),
            _ => f.integrate_support(&|x, a, b| {
                let lr = f.ln_density(x, a, b);
                if lr == f64::NEG_INFINITY {
                    0.0
                } else {
                    lr.exp() * (lr - ln_ref(x))
                }
            }),
        },
    };
    Ok(if h.is_nan() { f64::INFINITY } else { h })
}

/// -∬ log|x - y| μ(dx) μ(dy). Atoms: pairwise sum over distinct indices,
/// coincident atoms give +∞.
pub fn log_energy(mu: &MeasureRep) -> f64 {
    match &mu.form {
        MeasureForm::Atoms { points, weights } => {
            let mut s = 0.0;
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    if weights[i] == 0.0 || weights[j] == 0.0 {
                        continue;
                    }
                    let d = (points[i] - points[j]).abs();
                    if d == 0.0 {
                        return f64::INFINITY;
                    }
                    s -= 2.0 * weights[i] * weights[j] * d.ln();
                }
            }
            s
        }
        MeasureForm::Grid { knots, values } => grid_log_energy(knots, values),
        MeasureForm::Analytic(f) => analytic_log_energy(f),
    }
}

/// ∫ ρ(y) log|x - y| dy for a piecewise-linear density, exact per cell.
fn grid_log_potential(knots: &[f64], values: &[f64], x: f64) -> f64 {
    // antiderivatives of log|u| and u log|u|
    let f0 = |u: f64| if u == 0.0 { 0.0 } else { u * u.abs().ln() - u };
    let f1 = |u: f64| if u == 0.0 { 0.0 } else { 0.5 * u * u * u.abs().ln() - 0.25 * u * u };
    let mut s = 0.0;
    for k in 0..knots.len() - 1 {
        let (x0, x1) = (knots[k], knots[k + 1]);
        let (v0, v1) = (values[k], values[k + 1]);
        if v0 == 0.0 && v1 == 0.0 {
            continue;
        }
        let slope = (v1 - v0) / (x1 - x0);
        let a = v0 + slope * (x - x0);
        let (u0, u1) = (x0 - x, x1 - x);
        s += a * (f0(u1) - f0(u0)) + slope * (f1(u1) - f1(u0));
    }
    s
}

fn grid_log_energy(knots: &[f64], values: &[f64]) -> f64 {
    // the potential has x log x kinks at the knots, so each cell goes through tanh-sinh
    let mut s = 0.0;
    for k in 0..knots.len() - 1 {
        let (x0, x1) = (knots[k], knots[k + 1]);
        let (v0, v1) = (values[k], values[k + 1]);
        if v0 == 0.0 && v1 == 0.0 {
            continue;
        }
        let h = x1 - x0;
        s += tanh_sinh(
            |x, da, db| {
                let r = if da <= db { v0 + da / h * (v1 - v0) } else { v1 + db / h * (v0 - v1) };
                if r == 0.0 {
                    0.0
                } else {
                    r * grid_log_potential(knots, values, x)
                }
            },
            x0,
            x1,
            1e-11,
        )
        .value;
    }
    -s
}

fn analytic_log_energy(f: &AnalyticFamily) -> f64 {
    let (lo, hi) = f.support();
    // U(x) = ∫ ρ(y) log|x - y| dy, split at y = x
    let potential = |x: f64| -> f64 {
        if lo.is_finite() && hi.is_finite() {
            let (xl, xh) = (x - lo, hi - x);
            let left = tanh_sinh(|y, da, db| f.density(y, da, xh + db) * db.ln(), lo, x, 1e-12).value;
            let right = tanh_sinh(|y, da, db| f.density(y, xl + da, db) * da.ln(), x, hi, 1e-12).value;
            left + right
        } else {
            let left = integrate(
                |t| {
                    let d = t / (1.0 - t);
                    let y = x - d;
                    f.density(y, y - lo, hi - y) * d.ln() / ((1.0 - t) * (1.0 - t))
                },
                0.0,
                1.0,
                1e-14,
                1e-12,
            )
            .value;
            let right = integrate(
                |t| {
                    let d = t / (1.0 - t);
                    let y = x + d;
                    f.density(y, y - lo, hi - y) * d.ln() / ((1.0 - t) * (1.0 - t))
                },
                0.0,
                1.0,
                1e-14,
                1e-12,
            )
            .value;
            left + right
        }
    };
    -f.integrate_support(&|x, a, b| {
        let r = f.density(x, a, b);
        if r == 0.0 {
            0.0
        } else {
            r * potential(x)
        }
    })
}
