use pradial_core::ldp::*;
use pradial_core::measure::*;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn np_density(p: f64, x: f64) -> f64 {
    (-x.abs().powf(p)).exp() / (2.0 * statrs::function::gamma::gamma(1.0 + 1.0 / p))
}

#[test]
fn moments_against_quadrature() {
    for p in [0.7, 1.0, 2.0, 3.5] {
        let mu = MeasureRep::scaled_gen_gaussian(p, 1.0).unwrap();
        // symmetric: 2∫_0^L x^p ρ(x) dx in x = t²
        let l = 40f64.powf(1.0 / p).sqrt();
        let oracle = 2.0 * simpson(|t| 2.0 * t * (t * t).powf(p) * np_density(p, t * t), 0.0, l, 100_000);
        assert!((moment_p(&mu, p).unwrap() - oracle).abs() < 1e-9, "p = {p}");
        assert!((moment_p(&mu, p).unwrap() - 1.0 / p).abs() < 1e-15);
    }
    let d0 = MeasureRep::atoms(vec![0.0], vec![1.0], Support::RealLine).unwrap();
    assert_eq!(moment_p(&d0, 1.3).unwrap(), 0.0);
    let u = MeasureRep::uniform(0.0, 1.0).unwrap();
    assert!((moment_p(&u, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    let arc = MeasureRep::arcsine(-1.0, 1.0).unwrap();
    assert!((moment_p(&arc, 2.0).unwrap() - 0.5).abs() < 1e-10);
    let heavy = MeasureRep::custom(Arc::new(|x: f64| 1.0 / (PI * (1.0 + x * x))), f64::NEG_INFINITY, f64::INFINITY);
    // Cauchy mass check passes; its first moment diverges
    if let Ok(c) = heavy {
        assert!(moment_p(&c, 1.0).unwrap() > 10.0);
    }
}

#[test]
fn relative_entropy_examples() {
    let n2 = MeasureRep::scaled_gen_gaussian(2.0, 1.0).unwrap();
    assert_eq!(relative_entropy(&n2, &n2).unwrap(), 0.0);
    let z2 = MeasureRep::scaled_gen_gaussian(2.0, 2.0).unwrap();
    let h = relative_entropy(&z2, &n2).unwrap();
    // direct quadrature of ∫ ν log(ν/μ)
    let nu = |x: f64| (-x * x / 2.0).exp() / (2.0 * PI).sqrt();
    let mu = |x: f64| (-x * x).exp() / PI.sqrt();
    let oracle = simpson(|x| nu(x) * (nu(x) / mu(x)).ln(), -12.0, 12.0, 40_000);
    assert!((h - oracle).abs() < 1e-10, "{h} vs {oracle}");
    assert!((h - 0.15343).abs() < 1e-5);
    let atoms = MeasureRep::uniform_atoms(vec![0.1, 0.2], Support::RealLine).unwrap();
    assert_eq!(relative_entropy(&atoms, &n2).unwrap(), f64::INFINITY);
    // uniform on [0,1] against N_2: 1/3 + log √π, through the quadrature path
    let u = MeasureRep::uniform(0.0, 1.0).unwrap();
    let want = 1.0 / 3.0 + 0.5 * PI.ln();
    assert!((relative_entropy(&u, &n2).unwrap() - want).abs() < 1e-10);
    let g = MeasureRep::grid(vec![0.0, 1.0], vec![1.0, 1.0], Support::Nonnegative).unwrap();
    assert!((relative_entropy(&g, &n2).unwrap() - want).abs() < 1e-12);
    assert!(relative_entropy(&u, &u).is_err());
}

#[test]
fn log_energy_oracles() {
    // arcsine: x = cos θ with θ uniform, offset midpoint grids avoid the diagonal
    let m = 2000;
    let h = PI / m as f64;
    let mut s = 0.0;
    for i in 0..m {
        let a = (i as f64 + 0.5) * h;
        for j in 0..m {
            let b = (j as f64 + 0.25) * h;
            s -= (a.cos() - b.cos()).abs().ln();
        }
    }
    let oracle = s / (m * m) as f64;
    let arc = log_energy(&MeasureRep::arcsine(-1.0, 1.0).unwrap());
    assert!((arc - oracle).abs() < 1e-3, "{arc} vs {oracle}");
    assert!((arc - 2f64.ln()).abs() < 1e-3);
    // uniform: |X - Y| has density 2(1 - d)
    let oracle = -simpson(|d| if d == 0.0 { 0.0 } else { 2.0 * (1.0 - d) * d.ln() }, 0.0, 1.0, 1_000_000);
    let u = log_energy(&MeasureRep::uniform(0.0, 1.0).unwrap());
    assert!((u - oracle).abs() < 1e-3 && (u - 1.5).abs() < 1e-8, "{u} vs {oracle}");
    let two = MeasureRep::atoms(vec![0.0, 1.0], vec![0.5, 0.5], Support::RealLine).unwrap();
    assert_eq!(log_energy(&two), 0.0);
}

#[test]
fn log_energy_translation_invariance() {
    let g = MeasureRep::grid(vec![-1.0, -0.2, 0.3, 1.1], vec![0.0, 1.0, 0.9, 0.0], Support::RealLine);
    let g = match g {
        Ok(g) => g,
        Err(_) => {
            let knots = vec![-1.0, -0.2, 0.3, 1.1];
            let vals = [0.0, 1.0, 0.9, 0.0];
            let mass: f64 = knots.windows(2).zip(vals.windows(2)).map(|(k, v): (&[f64], &[f64])| 0.5 * (k[1] - k[0]) * (v[0] + v[1])).sum();
            MeasureRep::grid(knots, vals.iter().map(|v| v / mass).collect(), Support::RealLine).unwrap()
        }
    };
    let e0 = log_energy(&g);
    for a in [-3.0, 0.5, 7.25] {
        assert!((log_energy(&g.translated(a).unwrap()) - e0).abs() < 1e-8);
    }
    let b = MeasureRep::beta_density(2.0, 3.0, 0.0, 2.0).unwrap();
    let e1 = log_energy(&b);
    assert!((log_energy(&b.translated(-1.0).unwrap()) - e1).abs() < 1e-8);
}

#[test]
fn grid_log_energy_matches_analytic_family() {
    // fine grid of the arcsine-free Beta(2,2) density against the analytic value
    let b = MeasureRep::beta_density(2.0, 2.0, 0.0, 1.0).unwrap();
    let k = 400;
    let knots: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
    let vals: Vec<f64> = knots.iter().map(|x| 6.0 * x * (1.0 - x)).collect();
    let mass: f64 = vals.iter().sum::<f64>() / k as f64;
    let g = MeasureRep::grid(knots, vals.iter().map(|v| v / mass).collect(), Support::Nonnegative).unwrap();
    assert!((log_energy(&g) - log_energy(&b)).abs() < 1e-4);
}

#[test]
fn histogram_projection_gives_finite_entropy() {
    let pts: Vec<f64> = (0..200).map(|i| -2.0 + 4.0 * (i as f64 + 0.5) / 200.0).collect();
    let atoms = MeasureRep::uniform_atoms(pts, Support::RealLine).unwrap();
    let n2 = MeasureRep::scaled_gen_gaussian(2.0, 1.0).unwrap();
    assert_eq!(relative_entropy(&atoms, &n2).unwrap(), f64::INFINITY);
    let g = atoms.histogram_projection(0.1).unwrap();
    assert!(relative_entropy(&g, &n2).unwrap().is_finite());
    assert!((g.total_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn cone_euclid_examples() {
    let big = MeasureRep::atoms(vec![-1.5f64.sqrt(), 1.5f64.sqrt()], vec![0.5, 0.5], Support::RealLine).unwrap();
    assert_eq!(rate_cone_euclid(&big, 2.0).unwrap(), f64::INFINITY);
    let n2 = MeasureRep::scaled_gen_gaussian(2.0, 1.0).unwrap();
    assert!((rate_cone_euclid(&n2, 2.0).unwrap() - 0.5).abs() < 1e-15);
    for p in [0.5, 1.0, 2.0, 4.0] {
        let mu = MeasureRep::scaled_gen_gaussian(p, p).unwrap();
        let want = 1.0 - (1.0 + p.ln()) / p;
        assert!((rate_cone_euclid(&mu, p).unwrap() - want).abs() < 1e-14);
        let (z, v) = cone_euclid_scaled_family_min(p).unwrap();
        assert!((v - want).abs() < 1e-10 && (z - p).abs() < 1e-6);
    }
    assert_eq!(rate_cone_euclid(&MeasureRep::scaled_gen_gaussian(1.0, 1.0).unwrap(), 1.0).unwrap(), 0.0);
}

#[test]
fn emp_euclid_compositional_value() {
    let spec = RateFnSpec::new(RateTarget::EmpEuclid, 2.0, 1, 1.0, KTheta::Critical, 0.0).unwrap();
    let mu = MeasureRep::scaled_gen_gaussian(2.0, 1.0).unwrap();
    // I_cone by quadrature: H = 0 against itself, m_2 by Simpson
    let m = simpson(|x| x * x * (-x * x).exp() / PI.sqrt(), -12.0, 12.0, 40_000);
    let cone = 0.0 + 1.0 - m;
    let want = cone + 0.5 * 0.5f64.ln() - 1.5 * 1.5f64.ln() - (1.0 - m).ln();
    assert!((rate_emp_euclid(&mu, &spec).unwrap() - want).abs() < 1e-10);
}

#[test]
fn cone_h_examples() {
    assert!((cone_constant(Geometry::SelfAdjoint, 2.0, 2) + 0.25).abs() < 1e-12);
    let far = MeasureRep::atoms(vec![-2.0, 2.0], vec![0.5, 0.5], Support::RealLine).unwrap();
    assert_eq!(rate_cone_h(&far, 2.0, 2).unwrap(), f64::INFINITY);
    let tie = MeasureRep::atoms(vec![0.3, 0.3, -0.1], vec![0.25, 0.25, 0.5], Support::RealLine).unwrap();
    assert_eq!(rate_cone_h(&tie, 2.0, 1).unwrap(), f64::INFINITY);
    let neg = MeasureRep::uniform(-0.5, 0.5).unwrap();
    assert!(rate_cone_m(&neg, 2.0, 2).is_err());
}

#[test]
fn emp_h_summands_against_closed_forms() {
    // uniform on [-a, a]: m_p = a^p/(p+1), log-energy 3/2 - log(2a)
    let (a, p, beta, alpha, c) = (0.8, 2.0, 2u8, 0.3, -0.05);
    let mu = MeasureRep::uniform(-a, a).unwrap();
    let spec = RateFnSpec::new(RateTarget::EmpH, p, beta, alpha, KTheta::Critical, c).unwrap();
    let parts = rate_emp_parts(&mu, &spec).unwrap();
    let m = a.powf(p) / (p + 1.0);
    let e = 1.5 - (2.0 * a).ln();
    let g = beta as f64 / (2.0 * p);
    let lnk = 0.5 * PI.ln() + p.ln() + statrs::function::gamma::ln_gamma(p / 2.0) - p * 2f64.ln() - 0.5 - statrs::function::gamma::ln_gamma((p + 1.0) / 2.0);
    let cone = beta as f64 / 2.0 * e + g * lnk;
    assert!((parts.moment - m).abs() < 1e-10);
    assert!((parts.cone - cone).abs() < 1e-8);
    assert!((parts.mixing - (g * g.ln() - (g + alpha) * (g + alpha).ln())).abs() < 1e-14);
    assert!((parts.penalty + alpha * ((1.0 - m) / alpha).ln()).abs() < 1e-10);
    assert_eq!(parts.correction, -c);
    assert!((parts.value - (cone + parts.mixing + parts.penalty - c)).abs() < 1e-8);
    assert_eq!(parts.branch, EmpBranch::MomentPenalty);
}

#[test]
fn emp_m_uses_half_moment_gate() {
    let mu = MeasureRep::atoms(vec![0.0, 2.0], vec![0.5, 0.5], Support::Nonnegative).unwrap();
    // m_1 = 1 exactly at p = 2; m_2 = 2 > 1 would wrongly close the gate
    let spec0 = RateFnSpec::new(RateTarget::EmpM, 2.0, 2, 0.0, KTheta::Critical, 0.0).unwrap();
    assert!(rate_emp_m(&mu, &spec0).unwrap().is_finite());
    let spec1 = RateFnSpec::new(RateTarget::EmpM, 2.0, 2, 0.5, KTheta::Critical, 0.0).unwrap();
    assert_eq!(rate_emp_m(&mu, &spec1).unwrap(), f64::INFINITY);
}

#[test]
fn beta_rate_minimisers() {
    for (t, p, beta, alpha) in [
        (RateTarget::BetaEuclid, 2.0, 1u8, 2.0),
        (RateTarget::BetaH, 1.5, 2, 0.7),
        (RateTarget::BetaM, 3.0, 1, 4.0),
    ] {
        let spec = RateFnSpec::new(t, p, beta, alpha, KTheta::Critical, 0.0).unwrap();
        let (x, v) = golden_section_min(|x| rate_beta(x, &spec).unwrap(), 1e-9, 1.0 - 1e-9, 1e-12);
        assert!((x - spec.beta_minimizer()).abs() < 1e-6);
        assert!(v.abs() < 1e-10);
    }
}

#[test]
fn legendre_examples() {
    let t: Vec<f64> = (0..1001).map(|i| -4.0 + 8.0 * i as f64 / 1000.0).collect();
    let v: Vec<f64> = t.iter().map(|s| s.exp() - 1.0).collect();
    for x in [0.2, 0.5, 1.0, 3.0, 10.0] {
        let want = x * f64::ln(x) - x + 1.0;
        assert!((legendre_transform(&t, &v, x).unwrap() - want).abs() < 1e-6, "x = {x}");
    }
    // biconjugation of a quartic
    let t: Vec<f64> = (0..1001).map(|i| -2.0 + 4.0 * i as f64 / 1000.0).collect();
    let v: Vec<f64> = t.iter().map(|s| s.powi(4) / 4.0 + s * s).collect();
    let xs: Vec<f64> = (0..1001).map(|i| -9.0 + 18.0 * i as f64 / 1000.0).collect();
    let star = legendre_on_grid(&t, &v, &xs).unwrap();
    for (s, want) in t.iter().zip(&v).filter(|(s, _)| s.abs() <= 1.5) {
        let got = legendre_transform(&xs, &star, *s).unwrap();
        assert!((got - want).abs() < 1e-5, "t = {s}: {got} vs {want}");
    }
    assert!(legendre_transform(&[0.0, 1.0], &[0.0, 1.0], 0.5).is_err());
}

#[test]
fn laplace_and_breitung_examples() {
    let one = |_: f64| 1.0;
    let quad = |x: f64| -(x - 0.3) * (x - 0.3);
    let r = laplace_check(&one, &quad, (0.0, 1.0), 200.0).unwrap();
    assert!((r - 1.0).abs() < 0.02);
    let rs: Vec<f64> = [50.0, 100.0, 200.0, 400.0].iter().map(|n| laplace_check(&one, &quad, (0.0, 1.0), *n).unwrap()).collect();
    assert!(rs.windows(2).all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs() + 1e-12), "{rs:?}");
    let lin = |x: f64| -x;
    let r = breitung_check(&one, &lin, 30.0).unwrap();
    assert!((r - (1.0 - (-30f64).exp())).abs() < 1e-8);
    let q = |x: f64| 1.0 + x;
    let pf = |x: f64| -x - x * x;
    assert!((breitung_check(&q, &pf, 400.0).unwrap() - 1.0).abs() < 0.02);
    let ad = laplace_adapted(&one, &quad, (0.0, 1.0), 400.0, 0.0, 0.5 * 400.0).unwrap();
    assert!((ad.value - ad.limit).abs() < 0.02);
    let ad = breitung_adapted(&q, &pf, 400.0, 0.0, 0.5 * 400.0).unwrap();
    assert!((ad.value - ad.limit).abs() < 0.02);
    assert!(breitung_check(&one, &|x: f64| x, 10.0).is_err());
}

fn arb_atoms() -> impl Strategy<Value = MeasureRep> {
    prop::collection::vec(-0.9f64..0.9, 2..12).prop_map(|pts| MeasureRep::uniform_atoms(pts, Support::RealLine).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emp_equals_cone_without_mixing(mu in arb_atoms(), p in 0.5f64..4.0) {
        let se = RateFnSpec::new(RateTarget::EmpEuclid, p, 1, 0.0, KTheta::Critical, 0.0).unwrap();
        prop_assert_eq!(rate_emp_euclid(&mu, &se).unwrap(), rate_cone_euclid(&mu, p).unwrap());
        let sh = RateFnSpec::new(RateTarget::EmpH, p, 2, 0.0, KTheta::Critical, 0.0).unwrap();
        prop_assert_eq!(rate_emp_h(&mu, &sh).unwrap().to_bits(), rate_cone_h(&mu, p, 2).unwrap().to_bits());
    }

    #[test]
    fn atom_log_energy_translation_exact(pts in prop::collection::vec(-5i32..5, 2..8), shift in -4i32..4) {
        // integer atoms keep every difference exact
        let mut pts: Vec<f64> = pts.into_iter().map(f64::from).collect();
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        prop_assume!(pts.len() >= 2);
        let mu = MeasureRep::uniform_atoms(pts, Support::RealLine).unwrap();
        let e = log_energy(&mu);
        prop_assert_eq!(log_energy(&mu.translated(f64::from(shift)).unwrap()), e);
    }

    #[test]
    fn beta_rate_nonnegative(p in 0.3f64..5.0, alpha in 0.0f64..5.0, x in 0.0f64..=1.0) {
        for t in [RateTarget::BetaEuclid, RateTarget::BetaH, RateTarget::BetaM] {
            let spec = RateFnSpec::new(t, p, 2, alpha, KTheta::Critical, 0.0).unwrap();
            prop_assert!(rate_beta(x, &spec).unwrap() >= -1e-8);
        }
    }

    #[test]
    fn cgf_monotone_in_t(bs in prop::collection::vec(0.0f64..=1.0, 1..50), t in -3.0f64..3.0, dt in 0.0f64..1.0) {
        let a = scaled_cgf_estimate(&bs, t, 50, 1).unwrap();
        let b = scaled_cgf_estimate(&bs, t + dt, 50, 1).unwrap();
        prop_assert!(b >= a - 1e-15);
    }
}
