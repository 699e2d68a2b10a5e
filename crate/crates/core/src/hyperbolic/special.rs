//! The functions `R`, `S`, `λ(a)`, a real log-gamma and compensated summation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `2 Σ_{k≥1} w^k/(2k+1)` for `0 ≤ w ≤ 1/4`.
fn odd_series(w: f64) -> f64 {
    let mut acc: f64 = 0.0;
    let mut p = w;
    let mut k = 1.0;
    while p > 1e-18 * acc.max(f64::MIN_POSITIVE) || k < 2.0 {
        acc += p / (2.0 * k + 1.0);
        p *= w;
        k += 1.0;
        if p == 0.0 {
            break;
        }
    }
    2.0 * acc
}

/// `R(u) = u log|(u+1)/(u−1)| − 2`.
pub fn r_fn(u: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::SingularArgument(u));
    }
    let a = u.abs();
    if a == 1.0 {
        return Err(Error::SingularArgument(u));
    }
    Ok(if a < 1.0 {
        2.0 * a * a.atanh() - 2.0
    } else if a < 2.0 {
        2.0 * a * (1.0 / a).atanh() - 2.0
    } else {
        odd_series(1.0 / (a * a))
    })
}

/// `S(t) = R(cosh t)`.
pub fn s_fn(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::SingularArgument(t));
    }
    if t < 1.3 {
        // log((c+1)/(c−1)) = 2 log coth(t/2)
        let c = t.cosh();
        Ok(2.0 * c * (1.0 / (t / 2.0).tanh()).ln() - 2.0)
    } else {
        let e = (-t).exp();
        let sech = 2.0 * e / (1.0 + e * e);
        Ok(odd_series(sech * sech))
    }
}

/// `λ(a) = a(1−a)/(2 sin πa)`, extended by `1/(2π)` at the endpoints.
pub fn lambda_fn(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange { value: a, range: "[0, 1]" });
    }
    let a = if a > 0.5 { 1.0 - a } else { a };
    if a == 0.0 {
        return Ok(1.0 / (2.0 * PI));
    }
    Ok(a * (1.0 - a) / (2.0 * (PI * a).sin()))
}

/// `1/(2 sin πa)`, extended by `1/(2π)` at the endpoints: the constant that
/// the two-sided circuit sums actually converge to.
pub fn lambda_star(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange { value: a, range: "[0, 1]" });
    }
    let a = if a > 0.5 { 1.0 - a } else { a };
    if a == 0.0 {
        return Ok(1.0 / (2.0 * PI));
    }
    Ok(1.0 / (2.0 * (PI * a).sin()))
}

/// Which cusp-sector constant a tessellation sum uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorConstant {
    /// `a(1−a)/(2 sin πa)`
    Printed,
    /// `1/(2 sin πa)`
    CircuitLimit,
}

impl SectorConstant {
    pub fn eval(self, a: f64) -> Result<f64> {
        match self {
            SectorConstant::Printed => lambda_fn(a),
            SectorConstant::CircuitLimit => lambda_star(a),
        }
    }
}

const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

/// `log Γ(x)` for `x > 0`; NaN otherwise.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return f64::NAN;
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < 10.0 {
        prod *= z;
        z += 1.0;
    }
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let mut corr = 0.0;
    let mut p = zi;
    for c in STIRLING {
        corr += c * p;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + corr - prod.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn r_values() {
        assert!(close(r_fn(0.5).unwrap(), 3f64.ln() / 2.0 - 2.0, 1e-15));
        assert_eq!(r_fn(0.0).unwrap(), -2.0);
        assert_eq!(r_fn(1.0).unwrap_err(), Error::SingularArgument(1.0));
        assert!(r_fn(-1.0).is_err());
        let u: f64 = 10.0;
        let series: f64 = (1..40).map(|k| 2.0 / ((2 * k + 1) as f64 * u.powi(2 * k))).sum();
        assert!(close(r_fn(u).unwrap(), series, 1e-12));
        // the direct formula on both sides of the switch
        for u in [1.5f64, 1.99, 2.0, 2.01, 3.0, 7.0] {
            let direct = u * ((u + 1.0) / (u - 1.0)).ln() - 2.0;
            assert!(close(r_fn(u).unwrap(), direct, 1e-12), "{u}");
        }
    }

    #[test]
    fn s_matches_r() {
        for t in [0.01, 0.3, 1.0, 1.29, 1.31, 2.0, 5.0] {
            let r = r_fn(f64::cosh(t)).unwrap();
            assert!(close(s_fn(t).unwrap(), r, 1e-11), "{t}");
        }
        assert!(s_fn(0.0).is_err());
        assert_eq!(s_fn(800.0).unwrap(), 0.0);
    }

    #[test]
    fn s_small_t_expansion() {
        for t in [1e-1f64, 3e-2, 1e-2, 3e-3, 1e-3] {
            let approx = 2.0 * (2.0 / t).ln() - 2.0;
            assert!((s_fn(t).unwrap() - approx).abs() <= 2.0 * t * t * (1.0 / t).ln(), "{t}");
        }
    }

    #[test]
    fn s_exponential_decay() {
        for i in 0..60 {
            let t = 1.0 + i as f64 * 0.5;
            assert!(s_fn(t).unwrap() <= (-2.0 * t).exp() * 10.0);
        }
    }

    #[test]
    fn lambda_values() {
        assert!(close(lambda_fn(0.0).unwrap(), 1.0 / (2.0 * PI), 1e-15));
        assert!(close(lambda_fn(1.0).unwrap(), 1.0 / (2.0 * PI), 1e-15));
        assert!(close(lambda_fn(0.25).unwrap(), 3.0 * 2f64.sqrt() / 32.0, 1e-15));
        assert!(close(lambda_fn(0.5).unwrap(), 0.125, 1e-15));
        assert!(lambda_fn(1.5).is_err());
        for i in 0..=1000 {
            let v = lambda_fn(i as f64 / 1000.0).unwrap();
            assert!((0.125 - 1e-15..=1.0 / (2.0 * PI) + 1e-15).contains(&v));
        }
        assert!(close(lambda_star(0.5).unwrap(), 0.5, 1e-15));
        assert!(close(lambda_star(1e-9).unwrap(), 1.0 / (2.0 * PI * 1e-9), 1e-9));
    }

    #[test]
    fn ln_gamma_values() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert!(close(ln_gamma(0.5), 0.5 * PI.ln(), 1e-14));
        assert!(close(ln_gamma(0.25), 1.288_022_524_698_077_5, 1e-14));
        let mut f = 1.0f64;
        for n in 1..25 {
            assert!(close(ln_gamma(n as f64 + 1.0), f.ln(), 1e-13), "{n}");
            f *= (n + 1) as f64;
        }
        assert!(ln_gamma(0.0).is_nan());
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    proptest! {
        #[test]
        fn gamma_recurrence(x in 0.01f64..30.0) {
            prop_assert!((ln_gamma(x + 1.0) - ln_gamma(x) - x.ln()).abs() < 1e-12 * (1.0 + ln_gamma(x + 1.0).abs()));
        }

        #[test]
        fn gamma_reflection(x in 0.01f64..0.99) {
            let lhs = ln_gamma(x) + ln_gamma(1.0 - x);
            let rhs = (PI / (PI * x).sin()).ln();
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn lambda_symmetric(a in 0.0f64..=1.0) {
            prop_assert!((lambda_fn(a).unwrap() - lambda_fn(1.0 - a).unwrap()).abs() < 1e-15);
        }

        #[test]
        fn r_even(u in -50.0f64..50.0) {
            prop_assume!((u.abs() - 1.0).abs() > 1e-6);
            prop_assert_eq!(r_fn(u).unwrap(), r_fn(-u).unwrap());
        }
    }
}
