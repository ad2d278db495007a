//! Metropolis-within-Gibbs sampling of C e^{-‖x‖_p^p} f(x) and normalizing constants.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dist::{gamma_unit, RadialLawW};
use crate::error::{check_p, param_err, Error, Result};
use crate::lpgeom::{base_draw, radial_mix, sum_abs_pow, Orthant, PBallSample, SampleMeta};
use crate::rng::RngStream;
use crate::special::ln_gamma;
use crate::stats::{ess, LogSumExp};
use crate::weight::WeightFn;

/// Chain hyperparameters. Burn-in and thinning count sweeps (n coordinate updates each).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    /// Initial proposal scale per coordinate; empty selects a scale from n, p and m.
    pub steps: Vec<f64>,
    pub burn_in: usize,
    pub thin: usize,
    pub chains: usize,
    /// Total number of emitted samples, split evenly over chains.
    pub draws: usize,
    /// Robbins-Monro gain decay scale, in proposals per coordinate.
    pub adapt_window: usize,
    pub target_accept: f64,
    /// Minimum pooled ESS; below it the diagnostics flag a failure.
    pub ess_floor: f64,
    /// Exact Gibbs update of ‖x‖_p^p after each sweep (it is Gamma((n+m)/p, 1)
    /// and independent of the direction).
    pub radial_refresh: bool,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            steps: Vec::new(),
            burn_in: 2000,
            thin: 2,
            chains: 4,
            draws: 10_000,
            adapt_window: 100,
            target_accept: 0.44,
            ess_floor: 0.0,
            radial_refresh: true,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.thin == 0 {
            return Err(param_err!("thinning stride must be at least 1"));
        }
        if self.chains == 0 {
            return Err(param_err!("need at least one chain"));
        }
        if !(self.target_accept > 0.0 && self.target_accept < 1.0) {
            return Err(param_err!("target acceptance must lie in (0, 1)"));
        }
        if !self.steps.is_empty() && (self.steps.len() != n || self.steps.iter().any(|s| !(s.is_finite() && *s > 0.0))) {
            return Err(param_err!("steps must be empty or n positive values"));
        }
        if self.adapt_window == 0 {
            return Err(param_err!("adaptation window must be positive"));
        }
        Ok(())
    }

    fn per_chain(&self, chain: usize) -> usize {
        let base = self.draws / self.chains;
        base + usize::from(chain < self.draws % self.chains)
    }
}

/// Output of one chain.
#[derive(Clone, Debug)]
pub struct ChainRun {
    pub chain: usize,
    pub samples: Vec<Vec<f64>>,
    pub accepted: Vec<u64>,
    pub proposed: Vec<u64>,
    pub steps: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainDiagnostics {
    /// Post-burn-in acceptance rate per coordinate, pooled over chains.
    pub acceptance: Vec<f64>,
    /// Adapted proposal scales, one vector per chain.
    pub steps: Vec<Vec<f64>>,
    /// Pooled ESS of each sorted coordinate.
    pub ess: Vec<f64>,
    pub min_ess: f64,
    pub draws: usize,
    pub failed: bool,
}

#[derive(Clone, Debug)]
pub struct McmcOutput {
    /// Emitted samples, each sorted ascending, ordered by (chain, index).
    pub samples: Vec<Vec<f64>>,
    pub diagnostics: ChainDiagnostics,
}

fn check_args(n: usize, p: f64, f: &WeightFn, cfg: &ChainConfig) -> Result<()> {
    check_p(p)?;
    if n == 0 {
        return Err(param_err!("dimension must be at least 1"));
    }
    cfg.validate(n)?;
    if let WeightFn::Custom(_) = f {
        return Ok(());
    }
    if let Some(b) = f.beta() {
        if !(b == 1.0 || b == 2.0 || b == 4.0) {
            return Err(param_err!("beta must be 1, 2 or 4"));
        }
    }
    Ok(())
}

/// Runs chain `chain` on the stream `rng.split(chain)`.
pub fn run_chain(n: usize, p: f64, f: &WeightFn, cfg: &ChainConfig, chain: usize, rng: &RngStream) -> Result<ChainRun> {
    check_args(n, p, f, cfg)?;
    let mut rng = rng.split(chain as u64);
    let m = f.degree(n);
    let orth = f.orthant();
    let shape = (n as f64 + m) / p;
    let mut steps = if cfg.steps.is_empty() { alloc::vec![(shape / n as f64).powf(1.0 / p); n] } else { cfg.steps.clone() };
    let mut log_steps: Vec<f64> = steps.iter().map(|s| s.ln()).collect();

    let mut x = base_draw(n, p, orth, &mut rng);
    let mut tries = 0;
    while f.ln_eval(&x) == f64::NEG_INFINITY {
        x = base_draw(n, p, orth, &mut rng);
        tries += 1;
        if tries > 1000 {
            return Err(Error::Degenerate(alloc::string::String::from("no starting point with positive weight")));
        }
    }
    let mut abs_pow: Vec<f64> = x.iter().map(|v| v.abs().powf(p)).collect();

    let keep = cfg.per_chain(chain);
    let mut samples = Vec::with_capacity(keep);
    let mut accepted = alloc::vec![0u64; n];
    let mut proposed = alloc::vec![0u64; n];
    let mut adapt_count = alloc::vec![0u64; n];
    let mut scratch = Vec::new();
    let total_sweeps = cfg.burn_in + keep * cfg.thin;

    for sweep in 0..total_sweeps {
        let burning = sweep < cfg.burn_in;
        for _ in 0..n {
            let i = rng.below(n as u64) as usize;
            let mut y = x[i] + steps[i] * rng.normal();
            if orth == Orthant::Nonnegative {
                y = y.abs();
            }
            let ok = if y == 0.0 && orth == Orthant::Nonnegative {
                false
            } else {
                let ya = y.abs().powf(p);
                let d = abs_pow[i] - ya + f.ln_ratio_coord(&x, i, y, &mut scratch);
                let acc = d >= 0.0 || rng.uniform_open().ln() < d;
                if acc {
                    x[i] = y;
                    abs_pow[i] = ya;
                }
                acc
            };
            if burning {
                adapt_count[i] += 1;
                let gain = 1.0 / (1.0 + adapt_count[i] as f64 / cfg.adapt_window as f64).powf(0.6);
                let a = if ok { 1.0 } else { 0.0 };
                log_steps[i] += gain * (a - cfg.target_accept);
                steps[i] = log_steps[i].exp();
            } else {
                proposed[i] += 1;
                accepted[i] += u64::from(ok);
            }
        }
        if cfg.radial_refresh {
            let s: f64 = abs_pow.iter().sum();
            if s > 0.0 {
                let g = gamma_unit(shape, &mut rng);
                let t = (g / s).powf(1.0 / p);
                for (v, a) in x.iter_mut().zip(abs_pow.iter_mut()) {
                    *v *= t;
                    *a = v.abs().powf(p);
                }
            }
        }
        if !burning && (sweep - cfg.burn_in + 1).is_multiple_of(cfg.thin) {
            let mut s = x.clone();
            s.sort_by(|a, b| a.total_cmp(b));
            samples.push(s);
        }
    }
    Ok(ChainRun { chain, samples, accepted, proposed, steps })
}

/// Deterministic merge of chain runs (sorted by chain id) with diagnostics.
pub fn merge_chains(mut runs: Vec<ChainRun>, cfg: &ChainConfig) -> McmcOutput {
    runs.sort_by_key(|r| r.chain);
    let n = runs.first().map(|r| r.accepted.len()).unwrap_or(0);
    let mut acc = alloc::vec![0u64; n];
    let mut prop = alloc::vec![0u64; n];
    let mut ess_sum = alloc::vec![0.0; n];
    for r in &runs {
        for i in 0..n {
            acc[i] += r.accepted[i];
            prop[i] += r.proposed[i];
        }
        for (i, e) in ess_sum.iter_mut().enumerate() {
            let series: Vec<f64> = r.samples.iter().map(|s| s[i]).collect();
            *e += ess(&series);
        }
    }
    let acceptance: Vec<f64> = acc.iter().zip(&prop).map(|(a, p)| if *p == 0 { f64::NAN } else { *a as f64 / *p as f64 }).collect();
    let min_ess = ess_sum.iter().cloned().fold(f64::INFINITY, f64::min);
    let steps = runs.iter().map(|r| r.steps.clone()).collect();
    let samples: Vec<Vec<f64>> = runs.into_iter().flat_map(|r| r.samples).collect();
    let draws = samples.len();
    McmcOutput {
        samples,
        diagnostics: ChainDiagnostics { acceptance, steps, ess: ess_sum, min_ess, draws, failed: min_ess < cfg.ess_floor },
    }
}

/// Samples the density ∝ e^{-‖x‖_p^p} f(x) by random-scan Metropolis-within-Gibbs.
///
/// Chains run one after another on split streams; a parallel driver can call
/// [`run_chain`] per chain and [`merge_chains`] to obtain identical output.
pub fn mcmc_sample(n: usize, p: f64, f: &WeightFn, cfg: &ChainConfig, rng: &RngStream) -> Result<McmcOutput> {
    let runs = (0..cfg.chains).map(|c| run_chain(n, p, f, cfg, c, rng)).collect::<Result<Vec<_>>>()?;
    Ok(merge_chains(runs, cfg))
}

/// Uniform random permutation of the coordinates.
pub fn permute_uniform(x: &mut [f64], rng: &mut RngStream) {
    rng.shuffle(x);
}

/// Estimate of C_{n,p,f} with the underlying E[f(X)] in log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormConstEstimate {
    /// log C^{-1}
    pub ln_inv_const: f64,
    /// standard error of log C^{-1} (equal to the relative error of C^{-1})
    pub ln_std_err: f64,
    pub constant: f64,
    pub constant_std_err: f64,
    pub inv_const: f64,
    pub inv_const_std_err: f64,
    pub samples: u64,
}

/// C_{n,p,f}^{-1} = (2Γ(1+1/p))^n E[f(X)], X ~ N_p^{⊗n} (Γ(1+1/p)^n and |N_p| on the orthant).
pub fn estimate_norm_const(n: usize, p: f64, f: &WeightFn, budget: u64, rng: &mut RngStream) -> Result<NormConstEstimate> {
    check_p(p)?;
    if n == 0 || budget < 2 {
        return Err(param_err!("need n >= 1 and a budget of at least 2"));
    }
    let orth = f.orthant();
    let mut acc = LogSumExp::default();
    for _ in 0..budget {
        let x = base_draw(n, p, orth, rng);
        acc.push(f.ln_eval(&x));
    }
    let ln_mean = acc.ln_mean();
    if ln_mean == f64::NEG_INFINITY {
        return Err(Error::Degenerate(alloc::string::String::from("weight vanished on every draw")));
    }
    let per = ln_gamma(1.0 + 1.0 / p) + if orth == Orthant::Full { core::f64::consts::LN_2 } else { 0.0 };
    let ln_inv = n as f64 * per + ln_mean;
    let rel = acc.rel_std_err();
    let inv = ln_inv.exp();
    let c = (-ln_inv).exp();
    Ok(NormConstEstimate {
        ln_inv_const: ln_inv,
        ln_std_err: rel,
        constant: c,
        constant_std_err: c * rel,
        inv_const: inv,
        inv_const_std_err: inv * rel,
        samples: budget,
    })
}

/// Weighted mixture samples with their chain diagnostics.
#[derive(Clone, Debug)]
pub struct WeightedOutput {
    pub samples: Vec<PBallSample>,
    pub diagnostics: ChainDiagnostics,
}

/// Applies the radial mixing X / (‖X‖_q^q + W)^{1/q} to MCMC output.
/// W is drawn from the stream `rng.split(u64::MAX)`.
pub fn mix_samples(out: McmcOutput, q: f64, law: &RadialLawW, orth: Orthant, rng: &RngStream, tag: &'static str) -> WeightedOutput {
    let mut wrng = rng.split(u64::MAX);
    let meta = SampleMeta { seed: rng.seed(), stream: rng.stream(), generator: tag };
    let samples = out
        .samples
        .into_iter()
        .map(|mut x| {
            let w = law.sample(&mut wrng);
            radial_mix(&mut x, q, w);
            PBallSample { coords: x, p: q, orthant: orth, meta: meta.clone() }
        })
        .collect();
    WeightedOutput { samples, diagnostics: out.diagnostics }
}

/// P_{n,p,W,f}: X/(‖X‖_p^p + W)^{1/p} with X from [`mcmc_sample`]; samples sorted ascending.
pub fn sample_weighted_pnpw(n: usize, p: f64, f: &WeightFn, law: &RadialLawW, cfg: &ChainConfig, rng: &RngStream) -> Result<WeightedOutput> {
    let out = mcmc_sample(n, p, f, cfg, rng)?;
    Ok(mix_samples(out, p, law, f.orthant(), rng, "weighted-pnpw"))
}

/// B = ‖X‖_p^p/(‖X‖_p^p + W) read off a mixture sample.
pub fn norm_split_of(sample: &PBallSample) -> f64 {
    sum_abs_pow(&sample.coords, sample.p)
}
