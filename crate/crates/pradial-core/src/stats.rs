//! Goodness-of-fit tests, effective sample size and streaming accumulators.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::{beta_inc, gamma_q};

/// KS statistic sup|F_n - F|; sorts `xs` in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(xs: &mut [f64], cdf: F) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Kolmogorov survival function Q(λ) = P(K > λ).
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let y = (-PI * PI / (8.0 * lambda * lambda)).exp();
        let mut s = 0.0;
        let mut k = 1;
        loop {
            let t = y.powi((2 * k - 1) * (2 * k - 1));
            s += t;
            if t < 1e-17 * s || k > 50 {
                break;
            }
            k += 1;
        }
        (1.0 - (2.0 * PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        let mut sign = 1.0;
        for k in 1..=100 {
            let t = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
            s += sign * t;
            if t < 1e-17 {
                break;
            }
            sign = -sign;
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value for a KS distance `d` at effective size `n`
/// (with the Stephens small-sample correction).
pub fn ks_pvalue(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// One-sample KS test of `xs` against `cdf`.
pub fn ks_test<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> KsResult {
    let mut v = xs.to_vec();
    let d = ks_statistic(&mut v, cdf);
    KsResult { statistic: d, p_value: ks_pvalue(d, xs.len() as f64), n: xs.len() }
}

/// Two-sample KS test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    KsResult { statistic: d, p_value: ks_pvalue(d, ne), n: a.len() + b.len() }
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(stat: f64, dof: f64) -> f64 {
    gamma_q(0.5 * dof, 0.5 * stat)
}

/// Pearson chi-square test of observed counts against expected counts.
pub fn chi_square_test(observed: &[f64], expected: &[f64], dof: f64) -> (f64, f64) {
    let stat: f64 = observed.iter().zip(expected).map(|(o, e)| (o - e) * (o - e) / e).sum();
    (stat, chi_square_sf(stat, dof))
}

/// Exact two-sided binomial p-value (doubled smaller tail) for `k` hits in `n` trials.
pub fn binomial_two_sided(k: u64, n: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    // P(X <= k) = I_{1-p}(n-k, k+1), P(X >= k) = I_p(k, n-k+1)
    let lower = if k >= n { 1.0 } else { beta_inc((n - k) as f64, k as f64 + 1.0, 1.0 - p) };
    let upper = if k == 0 { 1.0 } else { beta_inc(k as f64, (n - k) as f64 + 1.0, p) };
    (2.0 * lower.min(upper)).min(1.0)
}

/// Central binomial interval [lo, hi] for the count, at two-sided level `1 - alpha`,
/// using the exact CDF.
pub fn binomial_interval(n: u64, p: f64, alpha: f64) -> (u64, u64) {
    let cdf = |k: u64| if k >= n { 1.0 } else { beta_inc((n - k) as f64, k as f64 + 1.0, 1.0 - p) };
    let mut lo = 0;
    while lo < n && cdf(lo) < 0.5 * alpha {
        lo += 1;
    }
    let mut hi = lo;
    while hi < n && cdf(hi) < 1.0 - 0.5 * alpha {
        hi += 1;
    }
    (lo, hi)
}

/// Rule-of-three 95% upper bound on an event probability after zero hits.
pub fn rule_of_three(n: u64) -> f64 {
    3.0 / n as f64
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Effective sample size by Geyer's initial monotone sequence estimator.
pub fn ess(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 4 {
        return n as f64;
    }
    let m = mean(xs);
    let c: Vec<f64> = xs.iter().map(|x| x - m).collect();
    let c0 = c.iter().map(|x| x * x).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return n as f64;
    }
    let acov = |k: usize| -> f64 { c[..n - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64 };
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut k = 0;
    while 2 * k + 1 < n {
        let g = acov(2 * k) + acov(2 * k + 1);
        if g <= 0.0 {
            break;
        }
        let g = g.min(prev);
        sum += g;
        prev = g;
        k += 1;
    }
    let tau = (2.0 * sum / c0 - 1.0).max(1.0 / n as f64);
    (n as f64 / tau).min(n as f64 * 10.0)
}

/// Streaming log-sum-exp accumulator for `log Σ exp(v_i)` and `log Σ exp(2 v_i)`.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    max: f64,
    s1: f64,
    s2: f64,
    count: u64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, s1: 0.0, s2: 0.0, count: 0 }
    }
}

impl LogSumExp {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        if v == f64::NEG_INFINITY {
            return;
        }
        if v > self.max {
            let r = (self.max - v).exp();
            self.s1 *= r;
            self.s2 *= r * r;
            self.max = v;
        }
        let e = (v - self.max).exp();
        self.s1 += e;
        self.s2 += e * e;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// log of the mean of exp(v_i).
    pub fn ln_mean(&self) -> f64 {
        if self.s1 == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.max + self.s1.ln() - (self.count as f64).ln()
    }

    /// Relative standard error of the mean of exp(v_i).
    pub fn rel_std_err(&self) -> f64 {
        let n = self.count as f64;
        if self.s1 == 0.0 || n < 2.0 {
            return f64::INFINITY;
        }
        let m1 = self.s1 / n;
        let m2 = self.s2 / n;
        let var = (m2 - m1 * m1).max(0.0) * n / (n - 1.0);
        (var / n).sqrt() / m1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn kolmogorov_branches_agree() {
        // both series are valid at the switch point
        let l: f64 = 1.18;
        let y = (-PI * PI / (8.0 * l * l)).exp();
        let small: f64 = 1.0 - (2.0 * PI).sqrt() / l * (1..20).map(|k| y.powi((2 * k - 1) * (2 * k - 1))).sum::<f64>();
        let large: f64 = 2.0 * (1..50).map(|k| (if k % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * (k * k) as f64 * l * l).exp()).sum::<f64>();
        assert!((small - large).abs() < 1e-12);
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_sf(1.6276) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn ks_uniform_passes() {
        let mut r = RngStream::new(1, 1);
        let xs: Vec<f64> = (0..10_000).map(|_| r.uniform()).collect();
        let t = ks_test(&xs, |x| x.clamp(0.0, 1.0));
        assert!(t.p_value > 0.001);
        let shifted: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert!(ks_test(&shifted, |x| x).p_value < 1e-6);
    }

    #[test]
    fn two_sample_same_law() {
        let mut r = RngStream::new(2, 1);
        let a: Vec<f64> = (0..5000).map(|_| r.normal()).collect();
        let b: Vec<f64> = (0..7000).map(|_| r.normal()).collect();
        assert!(ks_two_sample(&a, &b).p_value > 0.001);
        let c: Vec<f64> = b.iter().map(|x| x + 0.2).collect();
        assert!(ks_two_sample(&a, &c).p_value < 1e-6);
    }

    #[test]
    fn ess_iid_and_ar1() {
        let mut r = RngStream::new(3, 1);
        let iid: Vec<f64> = (0..20_000).map(|_| r.normal()).collect();
        let e = ess(&iid);
        assert!(e > 17_000.0 && e < 23_000.0, "{e}");
        // AR(1) with phi = 0.9 has tau = (1+phi)/(1-phi) = 19
        let mut x = 0.0;
        let ar: Vec<f64> = (0..200_000)
            .map(|_| {
                x = 0.9 * x + r.normal();
                x
            })
            .collect();
        let e = ess(&ar);
        let expect = 200_000.0 / 19.0;
        assert!((e / expect - 1.0).abs() < 0.15, "{e}");
    }

    #[test]
    fn binomial_exact() {
        // n=10, p=0.5, k=0: two-sided = 2 * 2^-10
        assert!((binomial_two_sided(0, 10, 0.5) - 2.0 / 1024.0).abs() < 1e-14);
        assert_eq!(binomial_two_sided(5, 10, 0.5), 1.0);
        let (lo, hi) = binomial_interval(1_000_000, 0.3, 0.01);
        assert!(lo < 300_000 && hi > 300_000);
        assert!((hi - lo) < 3000);
    }

    #[test]
    fn log_sum_exp_stream() {
        let mut acc = LogSumExp::default();
        for v in [1000.0, 1001.0, 999.0, f64::NEG_INFINITY] {
            acc.push(v);
        }
        let exact = 1000.0 + (1.0 + 1f64.exp() + (-1f64).exp()).ln() - 4f64.ln();
        assert!((acc.ln_mean() - exact).abs() < 1e-12);
    }
}
