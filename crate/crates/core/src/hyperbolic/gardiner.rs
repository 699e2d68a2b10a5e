//! Partial sums of `Σ_{n∈ℤ} 1/(z−n)²`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::special::NeumaierSum;
use crate::error::{Error, Result};

/// `Σ_{|n|≤N} 1/(z−n)²`.
pub fn gardiner_cusp_partial_sum(z: Complex64, n: u64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(z.re, z.im));
    }
    if n == 0 {
        return Err(Error::NonpositiveParam { name: "N", value: 0.0 });
    }
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let mut push = |k: f64| {
        let w = (z - k).powi(-2);
        re.add(w.re);
        im.add(w.im);
    };
    // smallest terms first
    for k in (1..=n).rev() {
        push(k as f64);
        push(-(k as f64));
    }
    push(0.0);
    Ok(Complex64::new(re.value(), im.value()))
}

/// `π²/sin²(πz)`.
pub fn gardiner_cusp_limit(z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(z.re, z.im));
    }
    Ok(PI * PI / (z * PI).sin().powi(2))
}
