//! Tessellation lines near a reference line, by orbit search and by exact
//! factorization.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::lines::{mat_det, ExactRelation, LineKind, Mat, TessLine, S, T, T_INV};
use crate::error::{Error, Result};

/// A line with its position relative to a reference line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearLine {
    pub line: TessLine,
    pub kind: LineKind,
    /// `|cos θ|` when intersecting, `cosh d` when ultraparallel.
    pub u: f64,
    pub intersecting: bool,
    /// `N²·4/D` with `N` the pairing against the standard reference; orders
    /// lines by `u` exactly.
    #[serde(skip)]
    key: i128,
}

pub const STANDARD_TWO: TessLine = TessLine { a: 0, b: 1, c: 0 };
pub const STANDARD_THREE: TessLine = TessLine { a: 0, b: 2, c: -1 };

fn near(reference: &TessLine, line: TessLine) -> Option<NearLine> {
    let kind = line.kind()?;
    let n = reference.pairing(&line) as i128;
    let key = n * n * 4 / line.disc() as i128;
    match reference.relation(&line) {
        ExactRelation::Intersecting(u) => Some(NearLine { line, kind, u, intersecting: true, key }),
        ExactRelation::Ultraparallel(u) => Some(NearLine { line, kind, u, intersecting: false, key }),
        _ => None,
    }
}

fn sort_canonical(v: &mut [NearLine]) {
    v.sort_by(|x, y| x.key.cmp(&y.key).then(x.line.cmp(&y.line)));
}

/// Breadth-first orbit search from `seed` under `T`, `T⁻¹`, `S`, expanding
/// only lines with `u ≤ prune` relative to `reference` and returning those
/// with `u ≤ bound`.
pub fn enumerate_lines_bfs(
    seed: &TessLine,
    reference: &TessLine,
    bound: f64,
    prune: f64,
    max_word: usize,
) -> Result<Vec<NearLine>> {
    let seed = TessLine::new(seed.a, seed.b, seed.c)?;
    let mut seen = HashSet::from([seed]);
    let mut queue = VecDeque::from([(seed, 0usize)]);
    let mut out = Vec::new();
    while let Some((l, depth)) = queue.pop_front() {
        let rel = reference.relation(&l);
        let u = match rel {
            ExactRelation::Equal | ExactRelation::Asymptotic => 1.0,
            r => r.abs_u().unwrap(),
        };
        if u <= bound {
            if let Some(n) = near(reference, l) {
                out.push(n);
            }
        }
        if u > prune || depth == max_word {
            continue;
        }
        for g in [T, T_INV, S] {
            let m = l.act(&g);
            if seen.insert(m) {
                queue.push_back((m, depth + 1));
            }
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// BFS with growing word length until the count within `bound` is stable
/// for two consecutive rounds. The prune radius is quadratic in `bound`:
/// words between nearby lines can pass well outside the ball.
pub fn enumerate_lines(seed: &TessLine, reference: &TessLine, bound: f64) -> Result<Vec<NearLine>> {
    let prune = 2.0 * (bound + 2.0) * (bound + 2.0);
    let mut word = 8;
    let mut last = enumerate_lines_bfs(seed, reference, bound, prune, word)?;
    let mut stable = 0;
    while stable < 2 {
        word += 8;
        let next = enumerate_lines_bfs(seed, reference, bound, prune, word)?;
        if next.len() == last.len() {
            stable += 1;
        } else {
            stable = 0;
        }
        last = next;
    }
    Ok(last)
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize + 1;
    let mut sieve = vec![true; n.max(2)];
    let mut out = Vec::new();
    for i in 2..n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn divisors(mut n: u64, primes: &[u64]) -> Vec<u64> {
    let mut ds = vec![1u64];
    for &p in primes {
        if p * p > n {
            break;
        }
        if !n.is_multiple_of(p) {
            continue;
        }
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    if n > 1 {
        let len = ds.len();
        for i in 0..len {
            ds.push(ds[i] * n);
        }
    }
    ds
}

/// All tessellation lines (discriminant 1 or 4) intersecting or ultraparallel
/// to the standard reference `(0,1,0)` or `(0,2,−1)` with `u ≤ cutoff`.
pub fn lines_near_standard(reference: &TessLine, cutoff: f64) -> Result<Vec<NearLine>> {
    let three = match *reference {
        STANDARD_TWO => false,
        STANDARD_THREE => true,
        r => return Err(Error::UnsupportedGroup(format!("no exact enumeration about {r}"))),
    };
    if !(cutoff > 1.0) {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    let max_m = (2.0 * cutoff).floor() as i64 + 1;
    let primes = small_primes(((max_m * max_m + 4) as f64).sqrt() as u64 + 2);
    let mut out: Vec<NearLine> = [1i64, 4]
        .par_iter()
        .flat_map(|&d| {
            let sd = if d == 1 { 1 } else { 2 };
            let top = (cutoff * sd as f64).floor() as i64;
            let primes = &primes;
            (-top..=top).into_par_iter().flat_map_iter(move |m| {
                let mut found = Vec::new();
                if m * m == d {
                    return Vec::new();
                }
                if three {
                    // pairing 2(a + b); with m = a + b: 4ac = a² − 2am − P, P = D − m²
                    let p = d - m * m;
                    for a in divisors(p.unsigned_abs(), primes) {
                        let a = a as i64;
                        let k = p / a;
                        let num = a - 2 * m - k;
                        if num % 4 != 0 {
                            continue;
                        }
                        if let Some(l) = TessLine::primitive(a, m - a, num / 4) {
                            found.push(l);
                        }
                    }
                } else {
                    // pairing b; ac = (b² − D)/4
                    let q = m * m - d;
                    if q % 4 != 0 {
                        return Vec::new();
                    }
                    let n = q / 4;
                    for a in divisors(n.unsigned_abs(), primes) {
                        let a = a as i64;
                        if let Some(l) = TessLine::primitive(a, m, n / a) {
                            found.push(l);
                        }
                    }
                }
                found.into_iter().filter_map(|l| near(reference, l)).filter(|n| n.u <= cutoff).collect::<Vec<_>>()
            })
        })
        .collect();
    sort_canonical(&mut out);
    out.dedup_by(|x, y| x.line == y.line);
    Ok(out)
}

/// `g ∈ PSL(2,ℤ)` with `g(standard) = reference`, and which standard.
pub fn standard_frame(reference: &TessLine) -> Result<(TessLine, Mat)> {
    let (x, y) = reference
        .endpoints()
        .ok_or_else(|| Error::UnsupportedGroup(format!("{reference} is not a tessellation line")))?;
    let det = x.p * y.q - x.q * y.p;
    match reference.kind() {
        Some(LineKind::TwoLine) => {
            // ∞ ↦ x, 0 ↦ y
            let g = if det == 1 { [[x.p, y.p], [x.q, y.q]] } else { [[y.p, x.p], [y.q, x.q]] };
            debug_assert_eq!(mat_det(&g), 1);
            Ok((STANDARD_TWO, g))
        }
        Some(LineKind::ThreeTwoThreeLine) => {
            // ∞ ↦ x, 1/2 ↦ y
            let s = det.signum();
            let g = [[x.p, (s * y.p - x.p) / 2], [x.q, (s * y.q - x.q) / 2]];
            debug_assert_eq!(mat_det(&g), 1);
            Ok((STANDARD_THREE, g))
        }
        None => Err(Error::UnsupportedGroup(format!("{reference} is not a tessellation line"))),
    }
}

/// Lines near an arbitrary tessellation line, mapped from the standard frame.
pub fn lines_near(reference: &TessLine, cutoff: f64) -> Result<Vec<NearLine>> {
    let (std, g) = standard_frame(reference)?;
    let base = lines_near_standard(&std, cutoff)?;
    Ok(base.into_iter().map(|n| NearLine { line: n.line.act(&g), ..n }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_complete() {
        let primes = small_primes(100);
        for n in 1..2000u64 {
            let mut d = divisors(n, &primes);
            d.sort();
            let want: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
            assert_eq!(d, want);
        }
    }

    #[test]
    fn orbit_discriminants() {
        let two = enumerate_lines_bfs(&STANDARD_TWO, &STANDARD_TWO, 6.0, 30.0, 10).unwrap();
        let seed3 = TessLine::new(1, 0, -1).unwrap();
        let three = enumerate_lines_bfs(&seed3, &STANDARD_TWO, 6.0, 30.0, 10).unwrap();
        assert!(!two.is_empty() && !three.is_empty());
        assert!(two.iter().all(|n| n.line.disc() == 1));
        assert!(three.iter().all(|n| n.line.disc() == 4));
        // the unit circle passes through i and e^{iπ/3}
        let unit = TessLine::new(1, 0, -1).unwrap();
        assert!(three.iter().any(|n| n.line == unit));
        let (x, y) = (0.5f64, 3f64.sqrt() / 2.0);
        assert!((unit.a as f64 * (x * x + y * y) + unit.b as f64 * x + unit.c as f64).abs() < 1e-15);
    }

    #[test]
    fn exact_matches_orbit_search() {
        for reference in [STANDARD_TWO, STANDARD_THREE] {
            let exact = lines_near_standard(&reference, 12.0).unwrap();
            let mut bfs = enumerate_lines(&STANDARD_TWO, &reference, 12.0).unwrap();
            bfs.extend(enumerate_lines(&TessLine::new(1, 0, -1).unwrap(), &reference, 12.0).unwrap());
            sort_canonical(&mut bfs);
            let a: Vec<TessLine> = exact.iter().map(|n| n.line).collect();
            let b: Vec<TessLine> = bfs.iter().map(|n| n.line).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn frames_map_standard_to_reference() {
        for r in [(1, -2, 0), (1, 0, -1), (0, 1, -1), (1, -1, 0), (3, -5, 2), (2, -3, 1), (8, -10, 3)] {
            let l = TessLine::new(r.0, r.1, r.2).unwrap();
            let (std, g) = standard_frame(&l).unwrap();
            assert_eq!(std.act(&g), l);
        }
    }

    #[test]
    fn mapped_neighbourhood_has_same_distances() {
        let reference = TessLine::new(1, -2, 0).unwrap();
        for n in lines_near(&reference, 8.0).unwrap() {
            let u = reference.relation(&n.line).abs_u().unwrap();
            assert!((u - n.u).abs() < 1e-12);
        }
    }

    #[test]
    fn known_neighbours_of_axis() {
        let near = lines_near_standard(&STANDARD_TWO, 3.0).unwrap();
        // (1,2) at cosh d = 3; only (1,0,−1) crosses
        assert!(near.iter().any(|n| n.line == TessLine::new(1, -3, 2).unwrap() && n.u == 3.0));
        let crossing: Vec<_> = near.iter().filter(|n| n.intersecting).collect();
        assert_eq!(crossing.len(), 1);
        assert_eq!(crossing[0].line, TessLine::new(1, 0, -1).unwrap());
    }
}
