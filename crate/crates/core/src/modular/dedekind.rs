//! Weighted `R`-sums over ultraparallel tessellation lines and the distance
//! relation between a 323-line and a 2-line.

use std::f64::consts::PI;

use serde::Serialize;

use super::enumerate::{lines_near_standard, NearLine, STANDARD_THREE, STANDARD_TWO};
use super::lines::{LineKind, TessLine};
use crate::error::{Error, Result};
use crate::hyperbolic::{r_fn, NeumaierSum};

/// `+1` for 323-lines, `−1` for 2-lines.
pub fn orbit_weight(kind: LineKind) -> f64 {
    match kind {
        LineKind::TwoLine => -1.0,
        LineKind::ThreeTwoThreeLine => 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shell {
    /// Upper end of the shell in `cosh d`.
    pub upper: f64,
    pub count: usize,
    /// Running sum through this shell.
    pub partial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedSum {
    pub sum: f64,
    pub count: usize,
    pub shells: Vec<Shell>,
    /// Heuristic tail `2N/(3C²)` from `R(u) ≈ 2/(3u²)` and linear growth of
    /// the line count.
    pub tail_estimate: f64,
}

/// `Σ w(η) R(cosh d)` over lines ultraparallel to the reference with
/// `cosh d ≤ cutoff`, in canonical order. Shells are unit intervals in `cosh d`.
pub fn weighted_ultraparallel_sum(lines: &[NearLine], cutoff: f64) -> Result<WeightedSum> {
    let mut acc = NeumaierSum::new();
    let mut count = 0;
    let mut shells: Vec<Shell> = Vec::new();
    for n in lines.iter().filter(|n| !n.intersecting && n.u <= cutoff) {
        let upper = n.u.ceil().max(2.0);
        if shells.last().is_none_or(|s| s.upper < upper) {
            if let Some(s) = shells.last_mut() {
                s.partial = acc.value();
            }
            shells.push(Shell { upper, count: 0, partial: 0.0 });
        }
        acc.add(orbit_weight(n.kind) * r_fn(n.u)?);
        count += 1;
        shells.last_mut().unwrap().count += 1;
    }
    if count == 0 {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    shells.last_mut().unwrap().partial = acc.value();
    Ok(WeightedSum { sum: acc.value(), count, shells, tail_estimate: 2.0 * count as f64 / (3.0 * cutoff * cutoff) })
}

/// `6 log 3 + 4 log π − 26 log 2`, as printed.
pub fn dedekind_target_printed() -> f64 {
    6.0 * 3f64.ln() + 4.0 * PI.ln() - 26.0 * 2f64.ln()
}

/// `log(π⁴/36)`, the limit obtained with the circuit-limit cusp constant.
pub fn dedekind_target_corrected() -> f64 {
    4.0 * PI.ln() - 2.0 * 2f64.ln() - 2.0 * 3f64.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DedekindRow {
    pub cutoff: f64,
    pub partial_sum_323: f64,
    pub partial_sum_2: f64,
    pub delta: f64,
    pub error: f64,
    pub error_corrected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DedekindReport {
    pub reference_323: TessLine,
    pub reference_2: TessLine,
    pub partial_sum_323: f64,
    pub partial_sum_2: f64,
    pub delta: f64,
    pub target: f64,
    pub error: f64,
    pub target_corrected: f64,
    pub error_corrected: f64,
    /// Richardson extrapolation in `1/cutoff` from the last two rows.
    pub extrapolated: f64,
    pub extrapolated_error: f64,
    pub extrapolated_error_corrected: f64,
    pub tail_estimate: f64,
    pub table: Vec<DedekindRow>,
}

/// Rows at the given cutoffs, sharing one enumeration at the largest.
pub fn dedekind_table(cutoffs: &[f64]) -> Result<Vec<DedekindRow>> {
    let top = cutoffs.iter().cloned().fold(f64::NAN, f64::max);
    if !(top >= 10.0) {
        return Err(Error::CutoffTooSmall(top));
    }
    let l3 = lines_near_standard(&STANDARD_THREE, top)?;
    let l2 = lines_near_standard(&STANDARD_TWO, top)?;
    let (t, tc) = (dedekind_target_printed(), dedekind_target_corrected());
    cutoffs
        .iter()
        .map(|&c| {
            let s3 = weighted_ultraparallel_sum(&l3, c)?.sum;
            let s2 = weighted_ultraparallel_sum(&l2, c)?.sum;
            let delta = s3 - s2;
            Ok(DedekindRow {
                cutoff: c,
                partial_sum_323: s3,
                partial_sum_2: s2,
                delta,
                error: delta - t,
                error_corrected: delta - tc,
            })
        })
        .collect()
}

pub fn dedekind_relation(cutoff: f64) -> Result<DedekindReport> {
    if !(cutoff >= 10.0) {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    let mut cutoffs = vec![];
    let mut c = 10.0;
    while c < cutoff / 2.0 {
        cutoffs.push(c);
        c *= 2.0;
    }
    cutoffs.push(cutoff / 2.0);
    cutoffs.push(cutoff);
    cutoffs.retain(|&c| c >= 10.0);
    cutoffs.dedup();
    let table = dedekind_table(&cutoffs)?;
    let last = table.last().unwrap().clone();
    let extrapolated = match table.len() {
        1 => last.delta,
        n => {
            let (a, b) = (&table[n - 2], &table[n - 1]);
            (b.cutoff * b.delta - a.cutoff * a.delta) / (b.cutoff - a.cutoff)
        }
    };
    let l3 = lines_near_standard(&STANDARD_THREE, cutoff)?;
    let l2 = lines_near_standard(&STANDARD_TWO, cutoff)?;
    let tail = weighted_ultraparallel_sum(&l3, cutoff)?.tail_estimate + weighted_ultraparallel_sum(&l2, cutoff)?.tail_estimate;
    Ok(DedekindReport {
        reference_323: STANDARD_THREE,
        reference_2: STANDARD_TWO,
        partial_sum_323: last.partial_sum_323,
        partial_sum_2: last.partial_sum_2,
        delta: last.delta,
        target: dedekind_target_printed(),
        error: last.error,
        target_corrected: dedekind_target_corrected(),
        error_corrected: last.error_corrected,
        extrapolated,
        extrapolated_error: extrapolated - dedekind_target_printed(),
        extrapolated_error_corrected: extrapolated - dedekind_target_corrected(),
        tail_estimate: tail,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::enumerate::lines_near;

    #[test]
    fn targets() {
        let t = dedekind_target_printed();
        assert!(t > -6.9 && t < -6.8);
        assert!((t - (3f64.powi(6) * PI.powi(4) / 2f64.powi(26)).ln()).abs() < 1e-13);
        assert!((dedekind_target_corrected() - (PI.powi(4) / 36.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn term_at_cosh_three() {
        let lines = lines_near_standard(&STANDARD_TWO, 3.0).unwrap();
        let l = lines.iter().find(|n| n.u == 3.0).unwrap();
        assert!((r_fn(l.u).unwrap() - (3.0 * 2f64.ln() - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn reference_excluded() {
        let lines = lines_near_standard(&STANDARD_THREE, 20.0).unwrap();
        assert!(lines.iter().all(|n| n.line != STANDARD_THREE));
    }

    #[test]
    fn small_cutoff_has_no_terms() {
        let lines = lines_near_standard(&STANDARD_TWO, 1.5).unwrap();
        assert!(matches!(weighted_ultraparallel_sum(&lines, 1.5), Err(Error::CutoffTooSmall(_))));
    }

    #[test]
    fn swapping_references_negates() {
        let rows = dedekind_table(&[20.0]).unwrap();
        let l3 = lines_near(&TessLine::new(1, 0, -1).unwrap(), 20.0).unwrap();
        let l2 = lines_near(&TessLine::new(1, -1, 0).unwrap(), 20.0).unwrap();
        let swapped = weighted_ultraparallel_sum(&l2, 20.0).unwrap().sum - weighted_ultraparallel_sum(&l3, 20.0).unwrap().sum;
        assert!((swapped + rows[0].delta).abs() < 1e-12);
    }

    #[test]
    fn settles_in_cutoff() {
        let rows = dedekind_table(&[25.0, 50.0, 100.0, 200.0, 400.0]).unwrap();
        let errs: Vec<f64> = rows.iter().map(|r| r.error_corrected.abs()).collect();
        // the partial sums oscillate, but the envelope shrinks
        assert!(errs[4] < errs[2] && errs[3] < errs[2], "{errs:?}");
        assert!(errs[4] < 2e-3, "{errs:?}");
        assert!((rows[4].delta - rows[3].delta).abs() < 2e-3);
    }

    #[test]
    fn shells_partition_the_sum() {
        let lines = lines_near_standard(&STANDARD_TWO, 30.0).unwrap();
        let s = weighted_ultraparallel_sum(&lines, 30.0).unwrap();
        assert_eq!(s.shells.iter().map(|x| x.count).sum::<usize>(), s.count);
        assert_eq!(s.shells.last().unwrap().partial, s.sum);
    }
}
