use pradial_core::dist::*;
use pradial_core::lpgeom::*;
use pradial_core::stats::{ks_test, mean};
use pradial_core::{RadialLawW, RngStream, TabulatedW};
use statrs::distribution::{Beta, ContinuousCDF, Gamma};
use statrs::function::gamma::ln_gamma as sr_ln_gamma;

fn rng(seed: u64) -> RngStream {
    RngStream::new(seed, 0)
}

#[test]
fn gamma_and_beta_samplers_match_reference_cdfs() {
    let mut r = rng(101);
    for (a, b) in [(0.3, 1.0), (1.0, 2.0), (4.5, 0.5)] {
        let xs: Vec<f64> = (0..20_000).map(|_| sample_gamma(a, b, &mut r).unwrap()).collect();
        let g = Gamma::new(a, b).unwrap();
        let ks = ks_test(&xs, |x| g.cdf(x));
        assert!(ks.p_value > 0.001, "gamma({a},{b}) {ks:?}");
    }
    for (a, b) in [(0.5, 0.5), (2.0, 7.0), (25.0, 1.0)] {
        let xs: Vec<f64> = (0..20_000).map(|_| sample_beta(a, b, &mut r).unwrap()).collect();
        let d = Beta::new(a, b).unwrap();
        let ks = ks_test(&xs, |x| d.cdf(x));
        assert!(ks.p_value > 0.001, "beta({a},{b}) {ks:?}");
    }
}

#[test]
fn gen_gaussian_pdf_integrates_to_one() {
    // composite Simpson in t with x = t², window tail mass below 1e-12
    for p in [0.5, 1.0, 2.0, 3.0, 8.0] {
        let l = (30.0f64).powf(1.0 / p).sqrt();
        let m = 200_000;
        let h = l / m as f64;
        let g = |t: f64| 2.0 * t * gen_gaussian_pdf(p, t * t).unwrap();
        let mut s = g(0.0) + g(l);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * g(i as f64 * h);
        }
        let total = 2.0 * s * h / 3.0;
        assert!((total - 1.0).abs() < 1e-9, "p = {p}: {total}");
    }
}

#[test]
fn gen_gaussian_sampler_matches_cdf() {
    let mut r = rng(7);
    for p in [0.5, 1.0, 2.0, 5.0] {
        let xs: Vec<f64> = (0..20_000).map(|_| sample_gen_gaussian(p, &mut r).unwrap()).collect();
        let ks = ks_test(&xs, |x| gen_gaussian_cdf(p, x).unwrap());
        assert!(ks.p_value > 0.001, "p = {p}: {ks:?}");
    }
}

#[test]
fn uniform_ball_radius_law() {
    // P(‖X‖_p ≤ r) = r^n
    let mut r = rng(8);
    let (n, p) = (6, 1.5);
    let rs: Vec<f64> = (0..20_000).map(|_| lp_norm(&sample_uniform_ball(n, p, &mut r).unwrap().coords, p).unwrap()).collect();
    let ks = ks_test(&rs, |x| x.clamp(0.0, 1.0).powi(n as i32));
    assert!(ks.p_value > 0.001, "{ks:?}");
}

#[test]
fn cone_samples_lie_on_sphere() {
    let mut r = rng(9);
    for p in [0.4, 1.0, 3.0] {
        for _ in 0..200 {
            let s = sample_cone(10, p, &mut r).unwrap();
            assert!((s.norm_pow() - 1.0).abs() < 1e-12);
            let s = sample_cone_plus(10, p, &mut r).unwrap();
            assert!(s.coords.iter().all(|v| *v >= 0.0));
        }
    }
}

#[test]
fn scaled_first_coordinate_is_near_gen_gaussian() {
    // ‖X‖_p^p ≈ n/p, so n^{1/p} x₁ → p^{1/p} N_p; the two scalings agree at p = 1
    let mut r = rng(10);
    let n = 200;
    for p in [1.0, 1.5, 3.0] {
        let xs: Vec<f64> = (0..10_000).map(|_| (n as f64).powf(1.0 / p) * sample_cone(n, p, &mut r).unwrap().coords[0]).collect();
        let scale = p.powf(1.0 / p);
        let ks = ks_test(&xs, |x| gen_gaussian_cdf(p, x / scale).unwrap());
        assert!(ks.statistic < 0.02, "p = {p}: {ks:?}");
    }
}

#[test]
fn coordinates_are_centred() {
    let mut r = rng(14);
    let (n, p, draws) = (5, 0.8, 100_000);
    let mut sums = vec![0.0; n];
    let mut sq = vec![0.0; n];
    for _ in 0..draws {
        let s = sample_cone(n, p, &mut r).unwrap();
        for i in 0..n {
            sums[i] += s.coords[i];
            sq[i] += s.coords[i] * s.coords[i];
        }
    }
    for i in 0..n {
        let m = sums[i] / draws as f64;
        let sd = (sq[i] / draws as f64 - m * m).sqrt() / (draws as f64).sqrt();
        assert!(m.abs() < 4.0 * sd, "coordinate {i}: {m} vs {sd}");
    }
}

#[test]
fn norm_split_follows_beta_mixture() {
    let mut r = rng(11);
    for (n, p, m, alpha) in [(20, 1.0, 0.0, 3.0), (5, 2.0, 10.0, 1.5), (12, 0.7, 2.5, 0.8)] {
        let law = RadialLawW::gamma(alpha).unwrap();
        let a = (n as f64 + m) / p;
        let xs: Vec<f64> = (0..20_000).map(|_| norm_split_b(n, p, m, &law, &mut r).unwrap()).collect();
        let d = Beta::new(a, alpha).unwrap();
        let ks = ks_test(&xs, |x| d.cdf(x));
        assert!(ks.p_value > 0.001, "{n} {p} {m} {alpha}: {ks:?}");
    }
    // ϑ = 0.3 puts that much mass at exactly 1
    let law = RadialLawW::mixture(0.3, 2.0).unwrap();
    let xs: Vec<f64> = (0..20_000).map(|_| norm_split_b(8, 2.0, 0.0, &law, &mut r).unwrap()).collect();
    let ones = xs.iter().filter(|x| **x == 1.0).count() as f64 / xs.len() as f64;
    assert!((ones - 0.3).abs() < 0.015, "{ones}");
}

/// ψ from its defining integral (1-u)^{-(a+1)} Γ(a+1)^{-1} ∫ w^a e^{-w u/(1-u)} W(dw),
/// Gamma(α) W, by Simpson's rule in t with w = t².
fn psi_gamma_oracle(n: usize, p: f64, m: f64, alpha: f64, s: f64) -> f64 {
    let a = (n as f64 + m) / p;
    let u = s.powf(p);
    let rate = 1.0 / (1.0 - u);
    let mode = ((a + alpha - 1.0).max(0.0) / rate).max(1e-3);
    let upper = (mode + 60.0 * (a + alpha).sqrt() / rate + 80.0 / rate).sqrt();
    let steps = 200_000;
    let h = upper / steps as f64;
    let ln_norm = sr_ln_gamma(alpha) + sr_ln_gamma(a + 1.0);
    let g = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        let w = t * t;
        2.0 * t * ((a + alpha - 1.0) * w.ln() - w * rate - ln_norm).exp()
    };
    let mut acc = g(0.0) + g(upper);
    for i in 1..steps {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
    }
    acc * h / 3.0 * rate.powf(a + 1.0) / rate.powf(0.0)
}

#[test]
fn psi_gamma_closed_form_matches_defining_integral() {
    let mut r = rng(12);
    for _ in 0..10 {
        let n = 1 + r.below(12) as usize;
        let p = 0.5 + 3.0 * r.uniform();
        let m = 4.0 * r.uniform();
        let alpha = 0.5 + 4.0 * r.uniform();
        let s = 0.05 + 0.9 * r.uniform();
        let spec = PsiSpec::new(n, p, m, RadialLawW::gamma(alpha).unwrap()).unwrap();
        let got = psi_density(&spec, s).unwrap();
        let want = psi_gamma_oracle(n, p, m, alpha, s);
        assert!((got - want).abs() < 1e-8 * want.max(1.0), "{n} {p} {m} {alpha} {s}: {got} vs {want}");
    }
}

#[test]
fn psi_exponential_is_identically_one() {
    for s in [0.0, 0.1, 0.5, 0.99, 1.0] {
        let spec = PsiSpec::new(9, 1.3, 2.0, RadialLawW::exponential()).unwrap();
        assert!((psi_density(&spec, s).unwrap() - 1.0).abs() < 1e-12);
    }
}

fn tabulated_law() -> RadialLawW {
    let knots: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
    let dens: Vec<f64> = knots.iter().map(|w| w * (-w).exp()).collect();
    let t = TabulatedW::new(vec![(0.0, 0.2), (1.5, 0.1)], 0.7, knots, dens).unwrap();
    RadialLawW::tabulated(t)
}

#[test]
fn psi_normalization_identity_for_every_variant() {
    let laws = [
        RadialLawW::dirac(),
        RadialLawW::exponential(),
        RadialLawW::gamma(0.6).unwrap(),
        RadialLawW::gamma(3.0).unwrap(),
        RadialLawW::mixture(0.4, 2.5).unwrap(),
        tabulated_law(),
    ];
    for law in laws {
        for (n, p, m) in [(3, 2.0, 0.0), (5, 0.8, 4.0), (2, 4.0, 1.0)] {
            let spec = PsiSpec::new(n, p, m, law.clone()).unwrap();
            let v = psi_normalization(&spec);
            assert!((v - 1.0).abs() < 1e-8, "{:?} {n} {p} {m}: {v}", law.variant());
        }
    }
}

#[test]
fn tabulated_w_sampler_matches_its_mean() {
    let law = tabulated_law();
    let mut r = rng(13);
    let xs: Vec<f64> = (0..100_000).map(|_| law.sample(&mut r)).collect();
    // atoms 0.2·0 + 0.1·1.5 plus 0.7 × (mean of the normalised interpolant ≈ 2)
    let t = law.table().unwrap();
    let (k, d) = (t.knots(), t.density());
    let (mut m0, mut m1) = (0.0, 0.0);
    for i in 0..k.len() - 1 {
        let h = k[i + 1] - k[i];
        m0 += 0.5 * h * (d[i] + d[i + 1]);
        m1 += h * (d[i] * (2.0 * k[i] + k[i + 1]) + d[i + 1] * (k[i] + 2.0 * k[i + 1])) / 6.0;
    }
    let want = 0.15 + 0.7 * m1 / m0;
    assert!((mean(&xs) - want).abs() < 0.02, "{} vs {want}", mean(&xs));
    assert!(xs.iter().all(|x| *x >= 0.0));
}

#[test]
fn samplers_are_reproducible_per_stream() {
    let law = RadialLawW::mixture(0.2, 1.0).unwrap();
    let a = sample_pnpw(7, 1.2, &law, &mut RngStream::new(42, 3)).unwrap();
    let b = sample_pnpw(7, 1.2, &law, &mut RngStream::new(42, 3)).unwrap();
    assert_eq!(a.coords, b.coords);
    let c = sample_pnpw(7, 1.2, &law, &mut RngStream::new(42, 4)).unwrap();
    assert_ne!(a.coords, c.coords);
}
