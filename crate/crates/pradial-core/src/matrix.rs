//! Matrix p-balls: Weyl constants, spectral samplers, Haar assembly and Gaussian oracles.

use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dist::RadialLawW;
use crate::error::{check_p, param_err, Error, Result};
use crate::lpgeom::sum_abs_pow;
use crate::mcmc::{mcmc_sample, mix_samples, ChainConfig, ChainDiagnostics, McmcOutput};
use crate::measure::{MeasureRep, Support};
use crate::rng::RngStream;
use crate::special::ln_gamma;
use crate::weight::WeightFn;

pub use crate::weight::{ln_delta_beta, ln_nabla_beta};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    SelfAdjoint,
    NonSelfAdjoint,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta == 1.0 || beta == 2.0 || beta == 4.0 {
        Ok(())
    } else {
        Err(param_err!("beta must be 1, 2 or 4, got {beta}"))
    }
}

/// Σ_k [log 2 + (βk/2) log 2π - (β/2) log 2 - log Γ(βk/2)] - n log(2π^{β/2}/Γ(β/2)) - log n!
fn ln_weyl_common(n: usize, beta: f64) -> (f64, f64) {
    let ln2 = core::f64::consts::LN_2;
    let ln2pi = (2.0 * core::f64::consts::PI).ln();
    let prod: f64 = (1..=n)
        .map(|k| {
            let bk = beta * k as f64 / 2.0;
            ln2 + bk * ln2pi - beta / 2.0 * ln2 - ln_gamma(bk)
        })
        .sum();
    let sphere = ln2 + beta / 2.0 * core::f64::consts::PI.ln() - ln_gamma(beta / 2.0);
    let head = -ln_gamma(n as f64 + 1.0) - n as f64 * sphere;
    (head, prod)
}

/// log c^H_{n,β}.
pub fn ln_weyl_const_h(n: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if n == 0 {
        return Err(param_err!("n must be at least 1"));
    }
    let (head, prod) = ln_weyl_common(n, beta);
    Ok(head + prod)
}

/// log c^M_{n,β}.
pub fn ln_weyl_const_m(n: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if n == 0 {
        return Err(param_err!("n must be at least 1"));
    }
    let (head, prod) = ln_weyl_common(n, beta);
    let nf = n as f64;
    Ok(head - beta / 2.0 * nf * (nf - 1.0) * core::f64::consts::LN_2 + 2.0 * prod)
}

pub fn weyl_const_h(n: usize, beta: f64) -> Result<f64> {
    ln_weyl_const_h(n, beta).map(|v| v.exp())
}

pub fn weyl_const_m(n: usize, beta: f64) -> Result<f64> {
    ln_weyl_const_m(n, beta).map(|v| v.exp())
}

/// Parameters of P^H_{n,p,W,β} or P^M_{n,p,W,β}.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub n: usize,
    pub beta: f64,
    pub p: f64,
    pub kind: MatrixKind,
    pub law: RadialLawW,
}

impl EnsembleSpec {
    pub fn new(n: usize, beta: f64, p: f64, kind: MatrixKind, law: RadialLawW) -> Result<Self> {
        check_beta(beta)?;
        check_p(p)?;
        if n == 0 {
            return Err(param_err!("n must be at least 1"));
        }
        Ok(EnsembleSpec { n, beta, p, kind, law })
    }

    /// Degree of the repulsion factor: βn(n-1)/2 or (β/2)n² - n.
    pub fn degree(&self) -> f64 {
        self.weight().degree(self.n)
    }

    pub fn weight(&self) -> WeightFn {
        match self.kind {
            MatrixKind::SelfAdjoint => WeightFn::Delta { beta: self.beta },
            MatrixKind::NonSelfAdjoint => WeightFn::Nabla { beta: self.beta },
        }
    }

    /// Exponent of the ℓ-norm the spectral vector is measured in: p, or p/2 for s².
    pub fn exponent(&self) -> f64 {
        match self.kind {
            MatrixKind::SelfAdjoint => self.p,
            MatrixKind::NonSelfAdjoint => self.p / 2.0,
        }
    }

    /// First parameter of the beta part of the norm-split law: (n+m)/exponent.
    pub fn beta_shape(&self) -> f64 {
        (self.n as f64 + self.degree()) / self.exponent()
    }
}

/// Sorted eigenvalues (or squared singular values) with an optional assembled matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSample {
    pub values: Vec<f64>,
    /// ℓ-exponent of the ball the vector lies in.
    pub exponent: f64,
    pub kind: MatrixKind,
    pub matrix: Option<CMatrix>,
}

impl SpectralSample {
    /// Norm-split statistic ‖values‖_exponent^exponent.
    pub fn norm_split(&self) -> f64 {
        sum_abs_pow(&self.values, self.exponent)
    }
}

#[derive(Clone, Debug)]
pub struct SpectralOutput {
    pub samples: Vec<SpectralSample>,
    pub diagnostics: ChainDiagnostics,
}

fn spectral(spec: &EnsembleSpec, cfg: &ChainConfig, rng: &RngStream) -> Result<SpectralOutput> {
    let out = mcmc_sample(spec.n, spec.exponent(), &spec.weight(), cfg, rng)?;
    Ok(spectral_from_mcmc(spec, out, rng))
}

/// Turns merged chain output for `spec.weight()` at exponent `spec.exponent()`
/// into spectral samples; `rng` must be the stream the chains were split from.
pub fn spectral_from_mcmc(spec: &EnsembleSpec, out: McmcOutput, rng: &RngStream) -> SpectralOutput {
    let f = spec.weight();
    let q = spec.exponent();
    let tag = match spec.kind {
        MatrixKind::SelfAdjoint => "eigen-ph",
        MatrixKind::NonSelfAdjoint => "singular-pm",
    };
    let mixed = mix_samples(out, q, &spec.law, f.orthant(), rng, tag);
    let samples = mixed
        .samples
        .into_iter()
        .map(|s| SpectralSample { values: s.coords, exponent: q, kind: spec.kind, matrix: None })
        .collect();
    SpectralOutput { samples, diagnostics: mixed.diagnostics }
}

/// Ordered eigenvalues of P^H_{n,p,W,β}: X/(‖X‖_p^p + W)^{1/p}, X ∝ e^{-‖x‖_p^p} Δ_β(x).
pub fn sample_eigenvalues_ph(spec: &EnsembleSpec, cfg: &ChainConfig, rng: &RngStream) -> Result<SpectralOutput> {
    if spec.kind != MatrixKind::SelfAdjoint {
        return Err(param_err!("eigenvalue sampler needs a self-adjoint spec"));
    }
    spectral(spec, cfg, rng)
}

/// Ordered squared singular values of P^M_{n,p,W,β}:
/// X/(‖X‖_{p/2}^{p/2} + W)^{2/p}, X ∝ e^{-‖x‖_{p/2}^{p/2}} ∇_β(x) on ℝ^n₊.
pub fn sample_sq_singular_pm(spec: &EnsembleSpec, cfg: &ChainConfig, rng: &RngStream) -> Result<SpectralOutput> {
    if spec.kind != MatrixKind::NonSelfAdjoint {
        return Err(param_err!("singular-value sampler needs a non-self-adjoint spec"));
    }
    spectral(spec, cfg, rng)
}

fn check_assembly_beta(beta: f64) -> Result<()> {
    if beta == 4.0 {
        return Err(Error::Unsupported(alloc::string::String::from("matrix assembly for beta = 4")));
    }
    if beta != 1.0 && beta != 2.0 {
        return Err(param_err!("beta must be 1 or 2 for matrix assembly, got {beta}"));
    }
    Ok(())
}

/// n×n Gaussian matrix: real N(0, var) entries (β = 1), or complex with
/// real and imaginary parts N(0, var/2) each (β = 2).
fn gaussian_matrix(n: usize, beta: f64, var: f64, rng: &mut RngStream) -> CMatrix {
    let sd = if beta == 1.0 { var.sqrt() } else { (var / 2.0).sqrt() };
    DMatrix::from_fn(n, n, |_, _| {
        let re = sd * rng.normal();
        let im = if beta == 1.0 { 0.0 } else { sd * rng.normal() };
        Complex64::new(re, im)
    })
}

/// Haar-distributed orthogonal (β = 1) or unitary (β = 2) matrix by QR with phase fix.
pub fn haar_matrix(n: usize, beta: f64, rng: &mut RngStream) -> Result<CMatrix> {
    check_assembly_beta(beta)?;
    let g = gaussian_matrix(n, beta, 1.0, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let a = d.norm();
        let ph = if a == 0.0 { Complex64::new(1.0, 0.0) } else { d / a };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    Ok(q)
}

/// U diag(λ) U* with U Haar.
pub fn assemble_matrix_h(values: &[f64], beta: f64, rng: &mut RngStream) -> Result<CMatrix> {
    check_assembly_beta(beta)?;
    let n = values.len();
    let u = haar_matrix(n, beta, rng)?;
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { Complex64::new(0.0, 0.0) });
    let mut a = &u * d * u.adjoint();
    // exact self-adjointness
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in i + 1..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    Ok(a)
}

/// U diag(s) V* with independent Haar U, V.
pub fn assemble_matrix_m(singular: &[f64], beta: f64, rng: &mut RngStream) -> Result<CMatrix> {
    check_assembly_beta(beta)?;
    if singular.iter().any(|s| !(*s >= 0.0)) {
        return Err(param_err!("singular values must be nonnegative"));
    }
    let n = singular.len();
    let u = haar_matrix(n, beta, rng)?;
    let v = haar_matrix(n, beta, rng)?;
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(singular[i], 0.0) } else { Complex64::new(0.0, 0.0) });
    Ok(&u * d * v.adjoint())
}

/// Ascending eigenvalues of a self-adjoint matrix.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let e = SymmetricEigen::new(a.clone());
    let mut v: Vec<f64> = e.eigenvalues.iter().cloned().collect();
    v.sort_by(|x, y| x.total_cmp(y));
    v
}

/// Ascending singular values.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = a.clone().singular_values().iter().cloned().collect();
    v.sort_by(|x, y| x.total_cmp(y));
    v
}

/// Empirical spectral measure: atoms at n^{1/p} λ_i, or n^{2/p} s_i² on ℝ₊, weight 1/n each.
pub fn empirical_spectral_measure(sample: &SpectralSample, p: f64) -> Result<MeasureRep> {
    check_p(p)?;
    let n = sample.values.len();
    if n == 0 {
        return Err(param_err!("empty spectral sample"));
    }
    let (scale, support) = match sample.kind {
        MatrixKind::SelfAdjoint => ((n as f64).powf(1.0 / p), Support::RealLine),
        MatrixKind::NonSelfAdjoint => ((n as f64).powf(2.0 / p), Support::Nonnegative),
    };
    let pts: Vec<f64> = sample.values.iter().map(|v| scale * v).collect();
    MeasureRep::uniform_atoms(pts, support)
}

/// Eigenvalues of a self-adjoint Gaussian matrix with density ∝ e^{-tr A²}
/// (β = 1 real symmetric, β = 2 complex Hermitian); the joint eigenvalue
/// density is ∝ e^{-‖λ‖₂²} Δ_β(λ).
pub fn gaussian_ensemble_oracle(n: usize, beta: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    check_assembly_beta(beta)?;
    // tr A² = Σ a_ii² + 2 Σ_{i<j} |a_ij|²: diagonal variance 1/2, off-diagonal
    // real and imaginary parts variance 1/4 each (1/4 for the real entry at β = 1)
    let mut a = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let off = 0.5;
    for i in 0..n {
        a[(i, i)] = Complex64::new(core::f64::consts::FRAC_1_SQRT_2 * rng.normal(), 0.0);
        for j in i + 1..n {
            let re = off * rng.normal();
            let im = if beta == 2.0 { off * rng.normal() } else { 0.0 };
            a[(i, j)] = Complex64::new(re, im);
            a[(j, i)] = Complex64::new(re, -im);
        }
    }
    Ok(hermitian_eigenvalues(&a))
}

/// GUE oracle: eigenvalue density ∝ e^{-‖λ‖₂²} Δ₂(λ).
pub fn gue_eigenvalue_oracle(n: usize, rng: &mut RngStream) -> Vec<f64> {
    gaussian_ensemble_oracle(n, 2.0, rng).expect("beta = 2 is supported")
}

/// Squared singular values of an n×n Gaussian matrix with density ∝ e^{-tr AA*};
/// their joint density is ∝ e^{-Σx_i} ∇_β(x) on ℝ^n₊.
pub fn laguerre_oracle(n: usize, beta: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    check_assembly_beta(beta)?;
    let a = gaussian_matrix(n, beta, 0.5 * beta, rng);
    let mut s: Vec<f64> = singular_values(&a).into_iter().map(|v| v * v).collect();
    s.sort_by(|x, y| x.total_cmp(y));
    Ok(s)
}
