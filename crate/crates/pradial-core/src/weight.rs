//! Homogeneous weights f: constant, Vandermonde-type Δ_β and singular-value ∇_β.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{param_err, Error, Result};
use crate::lpgeom::{sum_abs_pow, Orthant};

/// A user weight given by its log and degree of homogeneity.
#[derive(Clone, Copy, Debug)]
pub struct CustomWeight {
    pub ln_f: fn(&[f64]) -> f64,
    pub degree: f64,
    pub orthant: Orthant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    ConstantOne,
    DeltaBeta,
    NablaBeta,
    Custom,
}

/// Homogeneous weight f with log-evaluation; zeros of f evaluate to -∞.
#[derive(Clone, Copy, Debug)]
pub enum WeightFn {
    One,
    /// ∏_{i<j} |x_i - x_j|^β
    Delta { beta: f64 },
    /// ∏_{i<j} |x_i - x_j|^β ∏ x_i^{β/2 - 1} on ℝ^n₊
    Nabla { beta: f64 },
    Custom(CustomWeight),
}

fn check_beta(beta: f64) -> Result<()> {
    if beta == 1.0 || beta == 2.0 || beta == 4.0 {
        Ok(())
    } else {
        Err(param_err!("beta must be 1, 2 or 4, got {beta}"))
    }
}

impl WeightFn {
    pub fn delta(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(WeightFn::Delta { beta })
    }

    pub fn nabla(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(WeightFn::Nabla { beta })
    }

    pub fn custom(ln_f: fn(&[f64]) -> f64, degree: f64, orthant: Orthant) -> Result<Self> {
        if !(degree.is_finite() && degree >= 0.0) {
            return Err(param_err!("degree must be finite and nonnegative"));
        }
        Ok(WeightFn::Custom(CustomWeight { ln_f, degree, orthant }))
    }

    pub fn kind(&self) -> WeightKind {
        match self {
            WeightFn::One => WeightKind::ConstantOne,
            WeightFn::Delta { .. } => WeightKind::DeltaBeta,
            WeightFn::Nabla { .. } => WeightKind::NablaBeta,
            WeightFn::Custom(_) => WeightKind::Custom,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self {
            WeightFn::Delta { beta } | WeightFn::Nabla { beta } => Some(*beta),
            _ => None,
        }
    }

    /// Degree of homogeneity m in dimension n.
    pub fn degree(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            WeightFn::One => 0.0,
            WeightFn::Delta { beta } => beta * nf * (nf - 1.0) / 2.0,
            WeightFn::Nabla { beta } => beta / 2.0 * nf * nf - nf,
            WeightFn::Custom(c) => c.degree,
        }
    }

    pub fn orthant(&self) -> Orthant {
        match self {
            WeightFn::Nabla { .. } => Orthant::Nonnegative,
            WeightFn::Custom(c) => c.orthant,
            _ => Orthant::Full,
        }
    }

    /// log f(x).
    pub fn ln_eval(&self, x: &[f64]) -> f64 {
        match self {
            WeightFn::One => 0.0,
            WeightFn::Delta { beta } => ln_delta_unchecked(x, *beta),
            WeightFn::Nabla { beta } => ln_nabla_unchecked(x, *beta),
            WeightFn::Custom(c) => (c.ln_f)(x),
        }
    }

    /// log f(x') - log f(x) where x' is x with coordinate i replaced by y.
    pub(crate) fn ln_ratio_coord(&self, x: &[f64], i: usize, y: f64, scratch: &mut Vec<f64>) -> f64 {
        match self {
            WeightFn::One => 0.0,
            WeightFn::Delta { beta } => beta * pair_ratio(x, i, y),
            WeightFn::Nabla { beta } => {
                let r = beta * pair_ratio(x, i, y);
                if *beta == 2.0 {
                    r
                } else {
                    r + (beta / 2.0 - 1.0) * (y.ln() - x[i].ln())
                }
            }
            WeightFn::Custom(c) => {
                scratch.clear();
                scratch.extend_from_slice(x);
                scratch[i] = y;
                (c.ln_f)(scratch) - (c.ln_f)(x)
            }
        }
    }
}

fn pair_ratio(x: &[f64], i: usize, y: f64) -> f64 {
    let xi = x[i];
    let mut s = 0.0;
    for (j, &xj) in x.iter().enumerate() {
        if j == i {
            continue;
        }
        let d = y - xj;
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        s += (d.abs() / (xi - xj).abs()).ln();
    }
    s
}

fn ln_delta_unchecked(x: &[f64], beta: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = (x[i] - x[j]).abs();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += d.ln();
        }
    }
    beta * s
}

fn ln_nabla_unchecked(x: &[f64], beta: f64) -> f64 {
    let mut s = ln_delta_unchecked(x, beta);
    if beta != 2.0 {
        let e = beta / 2.0 - 1.0;
        for &v in x {
            if v == 0.0 {
                // x^{e}: +∞ for β = 1 is excluded by convention, 0 for β = 4
                return f64::NEG_INFINITY;
            }
            s += e * v.ln();
        }
    }
    s
}

/// log Δ_β(x) = β Σ_{i<j} log|x_i - x_j|.
pub fn ln_delta_beta(x: &[f64], beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(ln_delta_unchecked(x, beta))
}

/// log ∇_β(x) on ℝ^n₊; -∞ on ties and at zero coordinates when β ≠ 2.
pub fn ln_nabla_beta(x: &[f64], beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if x.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::Domain(alloc::string::String::from("nabla weight requires nonnegative coordinates")));
    }
    Ok(ln_nabla_unchecked(x, beta))
}

/// Unnormalized log density -‖x‖_p^p + log f(x).
pub fn log_target(x: &[f64], p: f64, f: &WeightFn) -> Result<f64> {
    crate::error::check_p(p)?;
    if f.orthant() == Orthant::Nonnegative && x.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::Domain(alloc::string::String::from("weight is defined on the nonnegative orthant only")));
    }
    Ok(-sum_abs_pow(x, p) + f.ln_eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert!((ln_delta_beta(&[1.0, 2.0, 3.0], 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((ln_nabla_beta(&[1.0, 4.0], 2.0).unwrap() - 9f64.ln()).abs() < 1e-14);
        assert!((ln_nabla_beta(&[1.0, 2.0], 4.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(ln_delta_beta(&[1.0, 1.0], 2.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(ln_nabla_beta(&[0.0, 1.0], 1.0).unwrap(), f64::NEG_INFINITY);
        assert!(ln_nabla_beta(&[-1.0, 1.0], 2.0).is_err());
        assert!(ln_delta_beta(&[1.0, 2.0], 3.0).is_err());
    }

    #[test]
    fn log_target_values() {
        assert_eq!(log_target(&[0.0, 0.0], 2.0, &WeightFn::One).unwrap(), 0.0);
        let d = WeightFn::delta(1.0).unwrap();
        assert!((log_target(&[1.0, 2.0, 3.0], 2.0, &d).unwrap() - (2f64.ln() - 14.0)).abs() < 1e-13);
        assert_eq!(log_target(&[1.0, 1.0, 3.0], 2.0, &d).unwrap(), f64::NEG_INFINITY);
        assert!(log_target(&[-1.0, 1.0], 2.0, &WeightFn::nabla(2.0).unwrap()).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(WeightFn::delta(2.0).unwrap().degree(4), 12.0);
        assert_eq!(WeightFn::nabla(2.0).unwrap().degree(3), 6.0);
        assert_eq!(WeightFn::nabla(1.0).unwrap().degree(3), 1.5);
        assert_eq!(WeightFn::One.degree(9), 0.0);
    }

    #[test]
    fn coordinate_ratio_matches_full_eval() {
        let x = [0.3, 1.7, 2.2, 0.9];
        let mut scratch = Vec::new();
        for f in [WeightFn::delta(1.0).unwrap(), WeightFn::nabla(1.0).unwrap(), WeightFn::nabla(4.0).unwrap()] {
            let mut y = x;
            y[2] = 1.1;
            let full = f.ln_eval(&y) - f.ln_eval(&x);
            assert!((f.ln_ratio_coord(&x, 2, 1.1, &mut scratch) - full).abs() < 1e-12);
        }
    }
}
