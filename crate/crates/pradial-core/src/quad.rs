//! Numerical integration: adaptive Gauss-Kronrod, tanh-sinh and fixed Gauss-Legendre.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::FRAC_PI_2;
#[allow(unused_imports)]
use num_traits::Float;

/// Integral estimate with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub err: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Quad {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Quad { value: k * h, err: ((k - g) * h).abs() }
}

struct Seg {
    a: f64,
    b: f64,
    q: Quad,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.q.err == o.q.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> Ordering {
        self.q.err.total_cmp(&o.q.err)
    }
}

/// Globally adaptive 7/15 Gauss-Kronrod on a finite interval.
pub fn gk_adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quad {
    if a == b {
        return Quad { value: 0.0, err: 0.0 };
    }
    let first = gk15(&mut f, a, b);
    let mut total = first;
    let mut heap = BinaryHeap::new();
    heap.push(Seg { a, b, q: first });
    for _ in 0..5000 {
        if total.err <= abs_tol.max(rel_tol * total.value.abs()) {
            break;
        }
        let Some(s) = heap.pop() else { break };
        let m = 0.5 * (s.a + s.b);
        if m <= s.a || m >= s.b {
            heap.push(s);
            break;
        }
        let l = gk15(&mut f, s.a, m);
        let r = gk15(&mut f, m, s.b);
        total.value += l.value + r.value - s.q.value;
        total.err += l.err + r.err - s.q.err;
        heap.push(Seg { a: s.a, b: m, q: l });
        heap.push(Seg { a: m, b: s.b, q: r });
    }
    // re-sum to shed accumulated rounding from the running updates
    let mut v = 0.0;
    let mut e = 0.0;
    for s in heap.iter() {
        v += s.q.value;
        e += s.q.err;
    }
    Quad { value: v, err: e }
}

/// Integral over [a, b] where either end may be infinite.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quad {
    integrate_impl(&mut f, a, b, abs_tol, rel_tol)
}

fn integrate_impl(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quad {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => gk_adaptive(f, a, b, abs_tol, rel_tol),
        (true, false) => gk_adaptive(
            |t| {
                let d = 1.0 - t;
                f(a + t / d) / (d * d)
            },
            0.0,
            1.0,
            abs_tol,
            rel_tol,
        ),
        (false, true) => gk_adaptive(
            |t| {
                let d = 1.0 - t;
                f(b - t / d) / (d * d)
            },
            0.0,
            1.0,
            abs_tol,
            rel_tol,
        ),
        (false, false) => {
            let l = integrate_impl(f, f64::NEG_INFINITY, 0.0, abs_tol * 0.5, rel_tol);
            let r = integrate_impl(f, 0.0, f64::INFINITY, abs_tol * 0.5, rel_tol);
            Quad { value: l.value + r.value, err: l.err + r.err }
        }
    }
}

/// Tanh-sinh (double exponential) quadrature on a finite interval.
///
/// The integrand receives `(x, x - a, b - x)` with both distances computed
/// without cancellation, so endpoint singularities can be evaluated exactly.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Quad {
    let half = 0.5 * (b - a);
    if half == 0.0 {
        return Quad { value: 0.0, err: 0.0 };
    }
    const TMAX: f64 = 6.1;
    let mut eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        // distance to the nearer endpoint
        let d = half * 2.0 * e / (1.0 + e);
        if d == 0.0 || w == 0.0 {
            return 0.0;
        }
        let (x, da, db) = if t >= 0.0 { (b - d, 2.0 * half - d, d) } else { (a + d, d, 2.0 * half - d) };
        let v = f(x, da, db);
        // integrands written in x alone can overflow at the extreme nodes
        if !v.is_finite() && d < 1e-6 * half {
            return 0.0;
        }
        w * v
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut j = 1;
    while (j as f64) * h <= TMAX {
        let t = j as f64 * h;
        sum += eval(t) + eval(-t);
        j += 1;
    }
    let mut est = sum * h * half;
    let mut err = f64::INFINITY;
    for level in 1..=12 {
        h *= 0.5;
        let mut j = 1;
        while (j as f64) * h <= TMAX {
            let t = j as f64 * h;
            sum += eval(t) + eval(-t);
            j += 2;
        }
        let next = sum * h * half;
        err = (next - est).abs();
        est = next;
        if level >= 3 && err <= tol * est.abs().max(1e-300) {
            break;
        }
    }
    Quad { value: est, err }
}

/// Fixed-order Gauss-Legendre rule.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        let mut nodes = alloc::vec![0.0; m];
        let mut weights = alloc::vec![0.0; m];
        for i in 0..m.div_ceil(2) {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=m {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }
}
