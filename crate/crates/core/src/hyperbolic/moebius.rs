//! Möbius maps of the upper half plane, boundary points, cross ratios and the
//! relative position of two geodesics.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// A point of `ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

pub use BoundaryPoint::{Finite, Infinity};

impl BoundaryPoint {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinity)
    }

    fn close_to(&self, other: &BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (Infinity, Infinity) => true,
            (Finite(x), Finite(y)) => (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())),
            _ => false,
        }
    }
}

/// Real 2×2 matrix `(a b; c d)` acting by `z ↦ (az + b)/(cz + d)`; identified
/// with its negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoebiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        MoebiusMap { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Scales to determinant 1; fails when the determinant is not positive.
    pub fn normalized(&self) -> Result<Self> {
        let det = self.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::NumericBlowup(format!("determinant {det}")));
        }
        let s = det.sqrt().recip();
        Ok(MoebiusMap::new(self.a * s, self.b * s, self.c * s, self.d * s))
    }

    pub fn compose(&self, o: &MoebiusMap) -> MoebiusMap {
        MoebiusMap::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Inverse of a determinant-1 map.
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn kind(&self, tol: f64) -> MapKind {
        let t = self.trace().abs();
        if (t - 2.0).abs() <= tol {
            MapKind::Parabolic
        } else if t > 2.0 {
            MapKind::Hyperbolic
        } else {
            MapKind::Elliptic
        }
    }

    pub fn apply(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            Infinity => {
                if self.c == 0.0 {
                    Infinity
                } else {
                    Finite(self.a / self.c)
                }
            }
            Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    Infinity
                } else {
                    Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// The orientation-preserving map sending `(0, ∞, 1)` to `(p, q, r)`.
    pub fn from_three(p: BoundaryPoint, q: BoundaryPoint, r: BoundaryPoint) -> Result<MoebiusMap> {
        // columns: image of ∞ is (a, c), image of 0 is (b, d), scaled so (a+b, c+d) ∝ r
        let col = |x: BoundaryPoint| match x {
            Finite(v) => (v, 1.0),
            Infinity => (1.0, 0.0),
        };
        let (qa, qc) = col(q);
        let (pb, pd) = col(p);
        let (ra, rc) = col(r);
        // solve s*(qa,qc) + t*(pb,pd) = (ra,rc)
        let det = qa * pd - pb * qc;
        if det == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        let s = (ra * pd - pb * rc) / det;
        let t = (qa * rc - ra * qc) / det;
        if s == 0.0 || t == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        let m = MoebiusMap::new(s * qa, t * pb, s * qc, t * pd);
        let det = m.det();
        let m = if det < 0.0 { MoebiusMap::new(-m.a, m.b, -m.c, m.d) } else { m };
        // flipping the sign of one column alone would move r; only orientation
        // flips here, so re-check
        if m.det() <= 0.0 {
            return Err(Error::CoincidentPoints);
        }
        m.normalized()
    }
}

fn distinct(ps: &[BoundaryPoint]) -> bool {
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if ps[i] == ps[j] {
                return false;
            }
        }
    }
    true
}

/// `(p - r)(q - s) / ((p - s)(q - r))`, with a point at infinity cancelled.
pub fn cross_ratio(p: BoundaryPoint, q: BoundaryPoint, r: BoundaryPoint, s: BoundaryPoint) -> Result<f64> {
    if !distinct(&[p, q, r, s]) {
        return Err(Error::CoincidentPoints);
    }
    let v = match (p, q, r, s) {
        (Finite(p), Finite(q), Finite(r), Finite(s)) => (p - r) * (q - s) / ((p - s) * (q - r)),
        (Infinity, Finite(q), Finite(r), Finite(s)) => (q - s) / (q - r),
        (Finite(p), Infinity, Finite(r), Finite(s)) => (p - r) / (p - s),
        (Finite(p), Finite(q), Infinity, Finite(s)) => (q - s) / (p - s),
        (Finite(p), Finite(q), Finite(r), Infinity) => (p - r) / (q - r),
        _ => return Err(Error::CoincidentPoints),
    };
    Ok(v)
}

/// Unordered geodesic with endpoints on `ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicLine {
    pub p: BoundaryPoint,
    pub q: BoundaryPoint,
}

impl GeodesicLine {
    pub fn new(p: BoundaryPoint, q: BoundaryPoint) -> Result<Self> {
        if p == q {
            return Err(Error::CoincidentPoints);
        }
        Ok(GeodesicLine { p, q })
    }

    pub fn finite(p: f64, q: f64) -> Result<Self> {
        Self::new(Finite(p), Finite(q))
    }

    pub fn vertical(x: f64) -> Self {
        GeodesicLine { p: Finite(x), q: Infinity }
    }

    /// Line `a(x² + y²) + bx + c = 0`.
    pub fn from_triple(a: i64, b: i64, c: i64) -> Result<Self> {
        let (a, b, c) = (a as f64, b as f64, c as f64);
        let disc = b * b - 4.0 * a * c;
        if !(disc > 0.0) {
            return Err(Error::OutOfRange { value: disc, range: "positive discriminant" });
        }
        if a == 0.0 {
            return Ok(GeodesicLine::vertical(-c / b));
        }
        let sq = disc.sqrt();
        // stable roots
        let t = -0.5 * (b + b.signum().max(0.0) * sq + (1.0 - b.signum().max(0.0)) * -sq);
        let (r1, r2) = if t == 0.0 { (sq / (2.0 * a), -sq / (2.0 * a)) } else { (t / a, c / t) };
        GeodesicLine::finite(r1.min(r2), r1.max(r2))
    }

    pub fn image(&self, g: &MoebiusMap) -> GeodesicLine {
        GeodesicLine { p: g.apply(self.p), q: g.apply(self.q) }
    }

    pub fn shares_endpoint(&self, o: &GeodesicLine, tol: f64) -> bool {
        self.p.close_to(&o.p, tol) || self.p.close_to(&o.q, tol) || self.q.close_to(&o.p, tol) || self.q.close_to(&o.q, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LineRelation {
    /// `cos θ` at the crossing, signed by the configuration.
    Intersecting(f64),
    /// `cosh d` of the common perpendicular.
    Ultraparallel(f64),
    Asymptotic,
    Equal,
}

impl LineRelation {
    /// `|u|` for the non-degenerate cases.
    pub fn abs_u(&self) -> Option<f64> {
        match *self {
            LineRelation::Intersecting(c) => Some(c.abs()),
            LineRelation::Ultraparallel(c) => Some(c),
            _ => None,
        }
    }
}

/// Conjugates `l1` to `(0, ∞)` and reads `u = (κ + 1)/(κ − 1)` from the ratio
/// `κ` of the image endpoints of `l2`.
pub fn line_relation(l1: &GeodesicLine, l2: &GeodesicLine) -> LineRelation {
    let g = |z: BoundaryPoint| -> BoundaryPoint {
        match (l1.p, l1.q, z) {
            (Finite(p), Infinity, Finite(z)) => Finite(z - p),
            (Finite(_), Infinity, Infinity) => Infinity,
            (Infinity, Finite(q), Finite(z)) => Finite(1.0 / (z - q)),
            (Infinity, Finite(_), Infinity) => Finite(0.0),
            (Finite(p), Finite(q), Finite(z)) => {
                if z == q {
                    Infinity
                } else {
                    Finite((z - p) / (z - q))
                }
            }
            (Finite(_), Finite(_), Infinity) => Finite(1.0),
            (Infinity, Infinity, _) => unreachable!("degenerate line"),
        }
    };
    let (x, y) = (g(l2.p), g(l2.q));
    let is_end = |v: BoundaryPoint| matches!(v, Infinity) || v == Finite(0.0);
    match (is_end(x), is_end(y)) {
        (true, true) => return LineRelation::Equal,
        (true, false) | (false, true) => return LineRelation::Asymptotic,
        _ => {}
    }
    let (Finite(x), Finite(y)) = (x, y) else { unreachable!() };
    let u = (x + y) / (y - x);
    if x * y > 0.0 {
        LineRelation::Ultraparallel(u.abs())
    } else {
        LineRelation::Intersecting(u)
    }
}

/// Hyperbolic distance between two points of the upper half plane.
pub fn distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm_sqr();
    (1.0 + num / (2.0 * z.im * w.im)).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_map(rng: &mut ChaCha8Rng) -> MoebiusMap {
        loop {
            let m = MoebiusMap::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            if m.det() > 0.1 {
                return m.normalized().unwrap();
            }
        }
    }

    fn fin(p: BoundaryPoint) -> f64 {
        match p {
            Finite(x) => x,
            Infinity => f64::INFINITY,
        }
    }

    #[test]
    fn cross_ratio_with_infinity() {
        assert_eq!(cross_ratio(Finite(2.0), Finite(0.0), Finite(1.0), Infinity).unwrap(), -1.0);
        assert_eq!(
            cross_ratio(Finite(1.0), Finite(1.0), Finite(2.0), Finite(3.0)).unwrap_err(),
            Error::CoincidentPoints
        );
    }

    #[test]
    fn cross_ratio_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let g = random_map(&mut rng);
            let pts: Vec<f64> = (0..4).map(|_| rng.random_range(-5.0..5.0)).collect();
            let before = cross_ratio(Finite(pts[0]), Finite(pts[1]), Finite(pts[2]), Finite(pts[3])).unwrap();
            let img: Vec<BoundaryPoint> = pts.iter().map(|&x| g.apply(Finite(x))).collect();
            let after = cross_ratio(img[0], img[1], img[2], img[3]).unwrap();
            assert!((before - after).abs() <= 1e-9 * (1.0 + before.abs()), "{before} {after}");
        }
    }

    #[test]
    fn cross_ratio_swap_identity() {
        // [p,q,r,s] + [p,r,q,s] = 1 for this normalization
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let v: Vec<f64> = (0..4).map(|_| rng.random_range(-5.0..5.0)).collect();
            let (p, q, r, s) = (Finite(v[0]), Finite(v[1]), Finite(v[2]), Finite(v[3]));
            let a = cross_ratio(p, q, r, s).unwrap();
            let b = cross_ratio(p, q, s, r).unwrap();
            assert!((a * b - 1.0).abs() < 1e-9 * (1.0 + a.abs() * b.abs()));
        }
    }

    #[test]
    fn relations() {
        let axis = GeodesicLine::new(Finite(0.0), Infinity).unwrap();
        assert_eq!(line_relation(&axis, &GeodesicLine::finite(-1.0, 1.0).unwrap()), LineRelation::Intersecting(0.0));
        assert_eq!(line_relation(&axis, &GeodesicLine::finite(1.0, 2.0).unwrap()), LineRelation::Ultraparallel(3.0));
        assert_eq!(line_relation(&axis, &GeodesicLine::finite(0.0, 1.0).unwrap()), LineRelation::Asymptotic);
        assert_eq!(line_relation(&axis, &axis), LineRelation::Equal);
    }

    #[test]
    fn relation_symmetric_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let v: Vec<f64> = (0..4).map(|_| rng.random_range(-4.0..4.0)).collect();
            let l1 = GeodesicLine::finite(v[0], v[1]).unwrap();
            let l2 = GeodesicLine::finite(v[2], v[3]).unwrap();
            let r = line_relation(&l1, &l2).abs_u().unwrap();
            let s = line_relation(&l2, &l1).abs_u().unwrap();
            assert!((r - s).abs() < 1e-9 * (1.0 + r));
            let g = random_map(&mut rng);
            let t = line_relation(&l1.image(&g), &l2.image(&g)).abs_u().unwrap();
            assert!((r - t).abs() < 1e-8 * (1.0 + r), "{r} {t}");
        }
    }

    #[test]
    fn ultraparallel_matches_distance() {
        // cosh of the distance between the feet of the common perpendicular
        // of (0,∞) and the circle over (1, 4): feet at i·2 and at 2 + ...
        let axis = GeodesicLine::new(Finite(0.0), Infinity).unwrap();
        let c = GeodesicLine::finite(1.0, 4.0).unwrap();
        let u = line_relation(&axis, &c).abs_u().unwrap();
        // the perpendicular is the circle |z| = 2; it meets (1,4) at 2 e^{iφ}
        let (cx, r) = (2.5, 1.5);
        let x = (4.0 - r * r + cx * cx) / (2.0 * cx);
        let foot = Complex64::new(x, (4.0 - x * x).sqrt());
        let d = distance(Complex64::new(0.0, 2.0), foot);
        assert!((d.cosh() - u).abs() < 1e-12);
    }

    #[test]
    fn triple_endpoints() {
        let l = GeodesicLine::from_triple(1, -3, 2).unwrap();
        assert_eq!((fin(l.p), fin(l.q)), (1.0, 2.0));
        let v = GeodesicLine::from_triple(0, 2, -1).unwrap();
        assert_eq!(v, GeodesicLine::vertical(0.5));
        let c = GeodesicLine::from_triple(1, 0, -1).unwrap();
        assert_eq!((fin(c.p), fin(c.q)), (-1.0, 1.0));
    }

    #[test]
    fn three_point_map() {
        let g = MoebiusMap::from_three(Finite(1.0), Finite(3.0), Finite(2.0)).unwrap();
        assert!((g.det() - 1.0).abs() < 1e-12);
        assert!(g.apply(Finite(0.0)).close_to(&Finite(1.0), 1e-12));
        assert!(g.apply(Infinity).close_to(&Finite(3.0), 1e-12));
        assert!(g.apply(Finite(1.0)).close_to(&Finite(2.0), 1e-12));
    }

    #[test]
    fn classification() {
        assert_eq!(MoebiusMap::new(1.0, 2.0, 0.0, 1.0).kind(1e-12), MapKind::Parabolic);
        assert_eq!(MoebiusMap::new(2.0, 0.0, 0.0, 0.5).kind(1e-12), MapKind::Hyperbolic);
        assert_eq!(MoebiusMap::new(0.0, -1.0, 1.0, 0.0).kind(1e-12), MapKind::Elliptic);
    }
}
