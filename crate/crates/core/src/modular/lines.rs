//! Tessellation lines as primitive integer triples.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{BoundaryPoint, GeodesicLine};

/// Integer `2×2` matrix `[[a, b], [c, d]]`, acting on the upper half plane.
pub type Mat = [[i64; 2]; 2];

pub const IDENTITY: Mat = [[1, 0], [0, 1]];
pub const T: Mat = [[1, 1], [0, 1]];
pub const T_INV: Mat = [[1, -1], [0, 1]];
pub const S: Mat = [[0, -1], [1, 0]];

pub fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

pub fn mat_det(x: &Mat) -> i64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

/// Inverse of a determinant-one matrix.
pub fn mat_inv(x: &Mat) -> Mat {
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

/// A point of `ℚ ∪ {∞}` as a primitive pair `(p, q)` with `q ≥ 0`; `∞ = (1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cusp {
    pub p: i64,
    pub q: i64,
}

impl Cusp {
    pub const INFINITY: Cusp = Cusp { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Self {
        let g = num_integer::gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Cusp { p, q }
    }

    pub fn integer(n: i64) -> Self {
        Cusp { p: n, q: 1 }
    }

    pub fn apply(&self, g: &Mat) -> Cusp {
        Cusp::new(g[0][0] * self.p + g[0][1] * self.q, g[1][0] * self.p + g[1][1] * self.q)
    }

    /// Residue class mod 2: `∞ ↦ (1,0)`, `0 ↦ (0,1)`, `1 ↦ (1,1)`.
    pub fn class_mod2(&self) -> (u8, u8) {
        (self.p.rem_euclid(2) as u8, self.q.rem_euclid(2) as u8)
    }

    pub fn to_boundary(&self) -> BoundaryPoint {
        if self.q == 0 {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(self.p as f64 / self.q as f64)
        }
    }

    /// `|det|` of the two primitive vectors.
    pub fn cross(&self, o: &Cusp) -> i64 {
        (self.p * o.q - self.q * o.p).abs()
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            0 => write!(f, "inf"),
            1 => write!(f, "{}", self.p),
            q => write!(f, "{}/{}", self.p, q),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    TwoLine,
    ThreeTwoThreeLine,
}

/// Line `a(x² + y²) + bx + c = 0`, primitive, first nonzero entry positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TessLine {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl PartialOrd for TessLine {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TessLine {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.a, self.b, self.c).cmp(&(o.a, o.b, o.c))
    }
}

impl fmt::Display for TessLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Relative position of two lines from exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExactRelation {
    Equal,
    Asymptotic,
    /// `|u| = |cos θ| < 1`
    Intersecting(f64),
    /// `|u| = cosh d > 1`
    Ultraparallel(f64),
}

impl ExactRelation {
    pub fn abs_u(&self) -> Option<f64> {
        match *self {
            ExactRelation::Intersecting(u) | ExactRelation::Ultraparallel(u) => Some(u),
            _ => None,
        }
    }
}

impl TessLine {
    /// Normalizes sign; rejects imprimitive or non-hyperbolic triples.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let g = num_integer::gcd(num_integer::gcd(a, b), c);
        if g != 1 {
            return Err(Error::SeedNotPrimitive(a, b, c));
        }
        if b * b - 4 * a * c <= 0 {
            return Err(Error::SeedNotPrimitive(a, b, c));
        }
        Ok(Self::normalized(a, b, c))
    }

    /// Sign normalization only.
    pub(crate) fn normalized(a: i64, b: i64, c: i64) -> Self {
        let first = if a != 0 { a } else if b != 0 { b } else { c };
        if first < 0 {
            TessLine { a: -a, b: -b, c: -c }
        } else {
            TessLine { a, b, c }
        }
    }

    /// Primitive normalized triple, or `None` if the gcd is not one.
    pub(crate) fn primitive(a: i64, b: i64, c: i64) -> Option<Self> {
        (num_integer::gcd(num_integer::gcd(a, b), c) == 1).then(|| Self::normalized(a, b, c))
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn kind(&self) -> Option<LineKind> {
        match self.disc() {
            1 => Some(LineKind::TwoLine),
            4 => Some(LineKind::ThreeTwoThreeLine),
            _ => None,
        }
    }

    /// Image under `z ↦ (αz + β)/(γz + δ)`.
    pub fn act(&self, g: &Mat) -> TessLine {
        let [[al, be], [ga, de]] = *g;
        let (a, b, c) = (self.a, self.b, self.c);
        TessLine::normalized(
            a * de * de - b * de * ga + c * ga * ga,
            -2 * a * de * be + b * (de * al + be * ga) - 2 * c * ga * al,
            a * be * be - b * be * al + c * al * al,
        )
    }

    /// Rational endpoints, defined when the discriminant is a square.
    pub fn endpoints(&self) -> Option<(Cusp, Cusp)> {
        let d = self.disc();
        let s = (d as f64).sqrt().round() as i64;
        if s * s != d {
            return None;
        }
        if self.a == 0 {
            return Some((Cusp::INFINITY, Cusp::new(-self.c, self.b)));
        }
        let (r1, r2) = (Cusp::new(-self.b - s, 2 * self.a), Cusp::new(-self.b + s, 2 * self.a));
        Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
    }

    /// The line with the given rational endpoints.
    pub fn through(x: Cusp, y: Cusp) -> Result<TessLine> {
        if x == y {
            return Err(Error::CoincidentPoints);
        }
        // q1 q2 z² − (p1 q2 + p2 q1) z + p1 p2
        let (a, b, c) = (x.q * y.q, -(x.p * y.q + y.p * x.q), x.p * y.p);
        let g = num_integer::gcd(num_integer::gcd(a, b), c);
        Ok(TessLine::normalized(a / g, b / g, c / g))
    }

    pub fn geodesic(&self) -> GeodesicLine {
        GeodesicLine::from_triple(self.a, self.b, self.c).expect("hyperbolic triple")
    }

    /// `N = b₁b₂ − 2a₁c₂ − 2a₂c₁`, so that `u = N/√(D₁D₂)`.
    pub fn pairing(&self, o: &TessLine) -> i64 {
        self.b * o.b - 2 * self.a * o.c - 2 * o.a * self.c
    }

    pub fn relation(&self, o: &TessLine) -> ExactRelation {
        if self == o {
            return ExactRelation::Equal;
        }
        let n = self.pairing(o) as i128;
        let dd = self.disc() as i128 * o.disc() as i128;
        let u = (n.unsigned_abs() as f64) / (dd as f64).sqrt();
        match (n * n).cmp(&dd) {
            Ordering::Equal => ExactRelation::Asymptotic,
            Ordering::Less => ExactRelation::Intersecting(u),
            Ordering::Greater => ExactRelation::Ultraparallel(u),
        }
    }
}
