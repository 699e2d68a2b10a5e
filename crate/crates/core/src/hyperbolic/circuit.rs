//! Circuit sums `Σ_{n≥0} S((a+n)ℓ)` by direct summation and their small-ℓ
//! expansions.

use std::f64::consts::PI;

use serde::Serialize;

use super::special::{lambda_fn, lambda_star, ln_gamma, s_fn, NeumaierSum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircuitSum {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// Bound on `Σ_{n≥N} S(t_N + nℓ)` from `S(t) ≤ (2/3)/sinh² t`.
pub fn circuit_tail_bound(t_n: f64, ell: f64) -> f64 {
    let q = (-2.0 * t_n).exp();
    8.0 / 3.0 * q / ((1.0 - q).powi(2) * -(-2.0 * ell).exp_m1())
}

fn check_params(a: f64, ell: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::NonpositiveParam { name: "a", value: a });
    }
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::NonpositiveParam { name: "ell", value: ell });
    }
    Ok(())
}

pub fn circuit_sum_brute(a: f64, ell: f64, tail_tol: f64) -> Result<CircuitSum> {
    check_params(a, ell)?;
    if !(tail_tol > 0.0) {
        return Err(Error::NonpositiveParam { name: "tail_tol", value: tail_tol });
    }
    let mut acc = NeumaierSum::new();
    let mut n = 0usize;
    loop {
        let t = (a + n as f64) * ell;
        let bound = circuit_tail_bound(t, ell);
        if t > 0.5 && bound < tail_tol {
            return Ok(CircuitSum { value: acc.value(), terms: n, tail_bound: bound });
        }
        acc.add(s_fn(t)?);
        n += 1;
        if n > 500_000_000 {
            return Err(Error::NumericBlowup(format!("circuit sum did not converge at ell = {ell}")));
        }
    }
}

/// `2/ℓ + log(Γ(a+1)² ℓ^{2a−1}/(2^{2a} π)) + 2a − 1`, as printed.
pub fn circuit_sum_asymptotic(a: f64, ell: f64) -> Result<f64> {
    check_params(a, ell)?;
    Ok(2.0 / ell + 2.0 * ln_gamma(a + 1.0) + (2.0 * a - 1.0) * ell.ln() - 2.0 * a * 2f64.ln() - PI.ln()
        + 2.0 * a
        - 1.0)
}

/// The same expansion with `Γ(a)` in place of `Γ(a+1)`; this is the one the
/// direct sums converge to.
pub fn circuit_sum_asymptotic_corrected(a: f64, ell: f64) -> Result<f64> {
    check_params(a, ell)?;
    Ok(2.0 / ell + 2.0 * ln_gamma(a) + (2.0 * a - 1.0) * ell.ln() - 2.0 * a * 2f64.ln() - PI.ln() + 2.0 * a - 1.0)
}

fn unit_open(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::OutOfRange { value: a, range: "(0, 1)" });
    }
    Ok(())
}

/// `4/ℓ + 2 log λ(a)` for `0 < a < 1`, as printed.
pub fn two_sided_asymptotic(a: f64, ell: f64) -> Result<f64> {
    unit_open(a)?;
    check_params(a, ell)?;
    Ok(4.0 / ell + 2.0 * lambda_fn(a)?.ln())
}

/// `4/ℓ − 2 log(2 sin πa)`, the limit of the two-sided direct sums.
pub fn two_sided_asymptotic_corrected(a: f64, ell: f64) -> Result<f64> {
    unit_open(a)?;
    check_params(a, ell)?;
    Ok(4.0 / ell + 2.0 * lambda_star(a)?.ln())
}

/// `2/ℓ + log(ℓ/(4π)) + 1`.
pub fn a1_asymptotic(ell: f64) -> Result<f64> {
    check_params(1.0, ell)?;
    Ok(2.0 / ell + (ell / (4.0 * PI)).ln() + 1.0)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}
