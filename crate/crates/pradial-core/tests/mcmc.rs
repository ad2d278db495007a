use pradial_core::lpgeom::{lp_norm, Orthant};
use pradial_core::mcmc::*;
use pradial_core::stats::{chi_square_test, ess, ks_test};
use pradial_core::{Error, RadialLawW, RngStream, WeightFn};
use statrs::distribution::{Beta, ContinuousCDF};

#[test]
fn adapted_acceptance_in_band() {
    let cfg = ChainConfig { draws: 8_000, ..Default::default() };
    for (n, p, f) in [
        (3, 2.0, WeightFn::delta(1.0).unwrap()),
        (4, 1.0, WeightFn::delta(2.0).unwrap()),
        (3, 1.0, WeightFn::nabla(2.0).unwrap()),
        (5, 0.8, WeightFn::One),
    ] {
        let out = mcmc_sample(n, p, &f, &cfg, &RngStream::new(31, 0)).unwrap();
        for a in &out.diagnostics.acceptance {
            assert!((0.2..=0.6).contains(a), "{n} {p}: {:?}", out.diagnostics.acceptance);
        }
        assert_eq!(out.samples.len(), 8_000);
        assert!(out.samples.iter().all(|s| s.windows(2).all(|w| w[0] <= w[1])));
    }
}

#[test]
fn chains_are_reproducible_and_order_free() {
    let cfg = ChainConfig { draws: 2_000, chains: 3, ..Default::default() };
    let f = WeightFn::delta(2.0).unwrap();
    let rng = RngStream::new(32, 5);
    let a = mcmc_sample(3, 2.0, &f, &cfg, &rng).unwrap();
    let b = mcmc_sample(3, 2.0, &f, &cfg, &rng).unwrap();
    assert_eq!(a.samples, b.samples);
    // chains computed out of order merge to the same output
    let mut runs: Vec<_> = (0..3).rev().map(|c| run_chain(3, 2.0, &f, &cfg, c, &rng).unwrap()).collect();
    runs.swap(0, 1);
    let c = merge_chains(runs, &cfg);
    assert_eq!(a.samples, c.samples);
    let d = mcmc_sample(3, 2.0, &f, &cfg, &RngStream::new(32, 6)).unwrap();
    assert_ne!(a.samples, d.samples);
}

#[test]
fn weighted_norm_split_is_beta() {
    // B ~ Beta((n+m)/p, α) for the weighted law as well
    let (n, p, alpha) = (3, 2.0, 1.5);
    let f = WeightFn::delta(1.0).unwrap();
    let m = f.degree(n);
    let cfg = ChainConfig { draws: 20_000, ..Default::default() };
    let out = sample_weighted_pnpw(n, p, &f, &RadialLawW::gamma(alpha).unwrap(), &cfg, &RngStream::new(33, 0)).unwrap();
    let b: Vec<f64> = out.samples.iter().map(norm_split_of).collect();
    let d = Beta::new((n as f64 + m) / p, alpha).unwrap();
    let ks = ks_test(&b, |x| d.cdf(x));
    assert!(ks.statistic < 0.02, "{ks:?}");
}

#[test]
fn unweighted_exponential_mixture_is_uniform_ball() {
    let (n, p) = (4, 1.5);
    let cfg = ChainConfig { draws: 20_000, ..Default::default() };
    let out = sample_weighted_pnpw(n, p, &WeightFn::One, &RadialLawW::exponential(), &cfg, &RngStream::new(34, 0)).unwrap();
    let r: Vec<f64> = out.samples.iter().map(|s| lp_norm(&s.coords, p).unwrap()).collect();
    let ks = ks_test(&r, |x| x.clamp(0.0, 1.0).powi(n as i32));
    assert!(ks.statistic < 0.02, "{ks:?}");
}

#[test]
fn nonnegative_weights_stay_in_orthant() {
    let cfg = ChainConfig { draws: 2_000, ..Default::default() };
    let out = mcmc_sample(4, 1.0, &WeightFn::nabla(1.0).unwrap(), &cfg, &RngStream::new(35, 0)).unwrap();
    assert!(out.samples.iter().flatten().all(|v| *v > 0.0));
}

#[test]
fn norm_const_for_gue_two() {
    // ∫ e^{-x₁²-x₂²}(x₁-x₂)² dx = π
    let est = estimate_norm_const(2, 2.0, &WeightFn::delta(2.0).unwrap(), 200_000, &mut RngStream::new(36, 0)).unwrap();
    let z = (est.inv_const - std::f64::consts::PI) / est.inv_const_std_err;
    assert!(z.abs() < 4.0, "{est:?}");
    let one = estimate_norm_const(3, 1.0, &WeightFn::One, 10, &mut RngStream::new(36, 1)).unwrap();
    assert!((one.ln_inv_const - 3.0 * 2f64.ln()).abs() < 1e-14);
}

fn never(_: &[f64]) -> f64 {
    f64::NEG_INFINITY
}

#[test]
fn degenerate_weight_fails() {
    let f = WeightFn::custom(never, 1.0, Orthant::Full).unwrap();
    assert!(matches!(estimate_norm_const(3, 2.0, &f, 100, &mut RngStream::new(37, 0)), Err(Error::Degenerate(_))));
    assert!(matches!(mcmc_sample(3, 2.0, &f, &ChainConfig::default(), &RngStream::new(37, 0)), Err(Error::Degenerate(_))));
}

#[test]
fn config_validation() {
    let f = WeightFn::One;
    let bad = ChainConfig { thin: 0, ..Default::default() };
    assert!(mcmc_sample(2, 2.0, &f, &bad, &RngStream::new(1, 0)).is_err());
    let bad = ChainConfig { steps: vec![0.1], ..Default::default() };
    assert!(mcmc_sample(2, 2.0, &f, &bad, &RngStream::new(1, 0)).is_err());
    let bad = ChainConfig { target_accept: 1.0, ..Default::default() };
    assert!(mcmc_sample(2, 2.0, &f, &bad, &RngStream::new(1, 0)).is_err());
}

#[test]
fn ess_floor_flags_failure() {
    let cfg = ChainConfig { draws: 400, ess_floor: 1e6, ..Default::default() };
    let out = mcmc_sample(2, 2.0, &WeightFn::One, &cfg, &RngStream::new(38, 0)).unwrap();
    assert!(out.diagnostics.failed);
}

#[test]
fn ess_of_iid_and_correlated_series() {
    let mut r = RngStream::new(39, 0);
    let iid: Vec<f64> = (0..20_000).map(|_| r.normal()).collect();
    let e = ess(&iid);
    assert!(e > 15_000.0 && e < 25_000.0, "{e}");
    let mut x = 0.0;
    let ar: Vec<f64> = (0..20_000).map(|_| { x = 0.9 * x + r.normal(); x }).collect();
    // AR(1) with φ = 0.9: N (1-φ)/(1+φ) ≈ 1053
    let e = ess(&ar);
    assert!(e > 700.0 && e < 1500.0, "{e}");
}

#[test]
fn permutation_is_uniform() {
    let mut r = RngStream::new(40, 0);
    let mut counts = [0.0; 6];
    for _ in 0..60_000 {
        let mut v = [0.0, 1.0, 2.0];
        permute_uniform(&mut v, &mut r);
        let idx = match (v[0] as u8, v[1] as u8) {
            (0, 1) => 0,
            (0, 2) => 1,
            (1, 0) => 2,
            (1, 2) => 3,
            (2, 0) => 4,
            _ => 5,
        };
        counts[idx] += 1.0;
    }
    let (_, pval) = chi_square_test(&counts, &[10_000.0; 6], 5.0);
    assert!(pval > 0.001, "{counts:?}");
}
