//! Developing maps into the upper half plane.
//!
//! A decorated ideal vertex is stored as a vector `v ∈ ℝ²` up to sign: the
//! horocycle of Euclidean diameter `D` at `p` is `(p, 1)/√D` and the horocycle
//! at height `h` about `∞` is `(√h, 0)`. Then `λ = |det(v, w)|` and `SL(2,ℝ)`
//! acts linearly.

use std::collections::VecDeque;

use serde::Serialize;

use crate::coords;
use crate::error::{Error, Result};
use crate::hyperbolic::{BoundaryPoint, MoebiusMap};
use crate::surface::{next, prev, Corner, IdealTriangulation, Slot};

pub type Spinor = [f64; 2];

pub fn det(u: Spinor, v: Spinor) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

pub fn lambda_between(u: Spinor, v: Spinor) -> f64 {
    det(u, v).abs()
}

fn lin(x: f64, u: Spinor, y: f64, v: Spinor) -> Spinor {
    [x * u[0] + y * v[0], x * u[1] + y * v[1]]
}

fn act(g: &MoebiusMap, v: Spinor) -> Spinor {
    [g.a * v[0] + g.b * v[1], g.c * v[0] + g.d * v[1]]
}

/// A horocycle: Euclidean diameter at a finite point, height at `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Horocycle {
    pub base: BoundaryPoint,
    pub size: f64,
}

impl Horocycle {
    pub fn new(base: BoundaryPoint, size: f64) -> Result<Self> {
        if !(size > 0.0) || !size.is_finite() {
            return Err(Error::NonpositiveParam { name: "horocycle size", value: size });
        }
        Ok(Horocycle { base, size })
    }

    pub fn spinor(&self) -> Spinor {
        match self.base {
            BoundaryPoint::Infinity => [self.size.sqrt(), 0.0],
            BoundaryPoint::Finite(p) => {
                let s = self.size.sqrt().recip();
                [p * s, s]
            }
        }
    }

    pub fn from_spinor(v: Spinor) -> Self {
        if v[1] == 0.0 {
            Horocycle { base: BoundaryPoint::Infinity, size: v[0] * v[0] }
        } else {
            Horocycle { base: BoundaryPoint::Finite(v[0] / v[1]), size: 1.0 / (v[1] * v[1]) }
        }
    }
}

/// Signed distance between two horocycles along the geodesic joining their
/// base points; negative when the horodiscs overlap.
pub fn horocycle_distance(h1: &Horocycle, h2: &Horocycle) -> Result<f64> {
    match (h1.base, h2.base) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Err(Error::CoincidentPoints),
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(_)) => Ok((h1.size / h2.size).ln()),
        (BoundaryPoint::Finite(_), BoundaryPoint::Infinity) => Ok((h2.size / h1.size).ln()),
        (BoundaryPoint::Finite(p1), BoundaryPoint::Finite(p2)) => {
            if p1 == p2 {
                return Err(Error::CoincidentPoints);
            }
            Ok(2.0 * ((p1 - p2).abs() / (h1.size * h2.size).sqrt()).ln())
        }
    }
}

/// `λ = e^{δ/2}`.
pub fn horocycle_lambda(h1: &Horocycle, h2: &Horocycle) -> Result<f64> {
    Ok((horocycle_distance(h1, h2)? / 2.0).exp())
}

/// Input data for a development.
#[derive(Debug, Clone, PartialEq)]
pub enum Coordinates {
    Shears(Vec<f64>),
    Lambda(Vec<f64>),
}

/// One placed copy of a triangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    pub tri: usize,
    pub depth: usize,
    pub parent: Option<usize>,
    /// Side of this triangle shared with the parent.
    pub via_side: Option<usize>,
    /// Decorated vertices `P_0, P_1, P_2`.
    pub vertices: [Spinor; 3],
}

impl Placement {
    /// Maps the model triangle `(0, ∞, −1)` onto this one, vertex by vertex.
    pub fn map(&self) -> MoebiusMap {
        let [v0, v1, v2] = self.vertices;
        // v2 = p v0 + q v1
        let d = det(v0, v1);
        let p = det(v2, v1) / d;
        let q = det(v0, v2) / d;
        let m = MoebiusMap::new(-q * v1[0], p * v0[0], -q * v1[1], p * v0[1]);
        let s = m.det().abs().sqrt().recip();
        MoebiusMap::new(m.a * s, m.b * s, m.c * s, m.d * s)
    }

    pub fn points(&self) -> [BoundaryPoint; 3] {
        self.vertices.map(|v| Horocycle::from_spinor(v).base)
    }
}

#[derive(Debug, Clone)]
pub struct DecoratedRealization {
    tri: IdealTriangulation,
    shears: Vec<f64>,
    lambda: Option<Vec<f64>>,
    placements: Vec<Placement>,
}

const COLLISION_TOL: f64 = 1e-13;

fn check_distinct(u: Spinor, v: Spinor) -> Result<()> {
    let n = (u[0].hypot(u[1])) * (v[0].hypot(v[1]));
    let d = det(u, v);
    if !d.is_finite() || !n.is_finite() || d.abs() <= COLLISION_TOL * n {
        return Err(Error::NumericBlowup(format!("vertex collision, |det| = {:e}", d.abs())));
    }
    Ok(())
}

/// Base placement of triangle `t` at `(0, ∞, −1)`, decorated to match `λ` if given.
fn base_vertices(t: &IdealTriangulation, tri: usize, lambda: Option<&[f64]>) -> [Spinor; 3] {
    let (c0, c1, c2) = match lambda {
        None => (1.0, 1.0, 1.0),
        Some(l) => {
            let s = t.triangles()[tri].map(|e| l[e]);
            // λ(s_0) = c0 c1, λ(s_1) = c1 c2, λ(s_2) = c2 c0
            ((s[0] * s[2] / s[1]).sqrt(), (s[0] * s[1] / s[2]).sqrt(), (s[1] * s[2] / s[0]).sqrt())
        }
    };
    [[0.0, c0], [c1, 0.0], [-c2, c2]]
}

impl DecoratedRealization {
    pub fn triangulation(&self) -> &IdealTriangulation {
        &self.tri
    }

    pub fn shears(&self) -> &[f64] {
        &self.shears
    }

    pub fn is_decorated(&self) -> bool {
        self.lambda.is_some()
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    /// Vertices of the neighbour across side `side` of a placement with
    /// vertices `v`, as `(neighbour slot, neighbour vertices)`.
    fn cross(&self, tri: usize, v: &[Spinor; 3], side: usize) -> Result<(Slot, [Spinor; 3])> {
        let t = &self.tri;
        let here = Slot { tri, side };
        let there = t.partner(here);
        let e = t.edge_at(here);
        let (va, vb, vc) = (v[side], v[next(side)], v[prev(side)]);
        let lam_ad = match &self.lambda {
            Some(l) => l[t.triangles()[there.tri][next(there.side)]],
            None => 1.0,
        };
        let dab = det(va, vb);
        // C = p A + q B; the new vertex lies on the other side of AB
        let p = det(vc, vb) / dab;
        let q = det(va, vc) / dab;
        let y = lam_ad / dab.abs();
        let ratio = self.shears[e].exp() * lambda_between(vb, vc) * lam_ad / lambda_between(vc, va);
        let x = ratio / dab.abs() * -(p * q).signum();
        let vd = lin(x, va, y, vb);
        check_distinct(va, vd)?;
        check_distinct(vb, vd)?;
        let mut out = [[0.0; 2]; 3];
        out[there.side] = vb;
        out[next(there.side)] = va;
        out[prev(there.side)] = vd;
        Ok((there, out))
    }

    /// Signed distance between the decorating horocycles at the ends of side
    /// `side` of placement `k`.
    pub fn side_distance(&self, k: usize, side: usize) -> Result<f64> {
        let p = &self.placements[k];
        self.require_decorated(p.tri, side)?;
        let h1 = Horocycle::from_spinor(p.vertices[side]);
        let h2 = Horocycle::from_spinor(p.vertices[next(side)]);
        horocycle_distance(&h1, &h2)
    }

    fn require_decorated(&self, tri: usize, side: usize) -> Result<()> {
        if self.lambda.is_none() {
            return Err(Error::UndecoratedCusp(self.tri.cusp_of_corner(Corner { tri, idx: prev(side) })));
        }
        Ok(())
    }

    fn find_side(&self, e: usize) -> Result<(usize, usize)> {
        let slots = self.tri.slots(e);
        for (k, p) in self.placements.iter().enumerate() {
            for s in slots {
                if s.tri == p.tri {
                    return Ok((k, s.side));
                }
            }
        }
        Err(Error::IncompleteDevelopment(e))
    }

    /// `λ_e` read off the developed horocycles.
    pub fn measure_lambda(&self, e: usize) -> Result<f64> {
        let (k, side) = self.find_side(e)?;
        self.require_decorated(self.placements[k].tri, side)?;
        let v = self.placements[k].vertices;
        Ok(lambda_between(v[side], v[next(side)]))
    }

    /// Shear of edge `e` from the developed quadrilateral.
    pub fn measure_shear(&self, e: usize) -> Result<f64> {
        let (k, side) = self.find_side(e)?;
        let v = self.placements[k].vertices;
        let (_, w) = self.cross(self.placements[k].tri, &v, side)?;
        let there = self.tri.partner(Slot { tri: self.placements[k].tri, side });
        let (a, b, c, d) = (v[side], v[next(side)], v[prev(side)], w[prev(there.side)]);
        Ok((lambda_between(c, a) * lambda_between(d, b) / (lambda_between(b, c) * lambda_between(a, d))).ln())
    }

    /// Largest endpoint mismatch between a placement and its parent along the
    /// shared side, computed from the placement maps.
    pub fn edge_mismatch(&self) -> f64 {
        let model = [BoundaryPoint::Finite(0.0), BoundaryPoint::Infinity, BoundaryPoint::Finite(-1.0)];
        let pts = |k: usize| -> [BoundaryPoint; 3] {
            let m = self.placements[k].map();
            model.map(|z| m.apply(z))
        };
        let dist = |x: BoundaryPoint, y: BoundaryPoint| -> f64 {
            // chordal distance on the circle ℝ ∪ {∞}
            let s = |p: BoundaryPoint| match p {
                BoundaryPoint::Infinity => [0.0, 1.0],
                BoundaryPoint::Finite(t) => {
                    let n = (1.0 + t * t).sqrt();
                    [1.0 / n, t / n]
                }
            };
            let (a, b) = (s(x), s(y));
            det(a, b).abs()
        };
        let mut worst: f64 = 0.0;
        for (k, p) in self.placements.iter().enumerate() {
            let (Some(par), Some(side)) = (p.parent, p.via_side) else { continue };
            let here = Slot { tri: p.tri, side };
            let there = self.tri.partner(here);
            let (mine, theirs) = (pts(k), pts(par));
            worst = worst
                .max(dist(mine[side], theirs[next(there.side)]))
                .max(dist(mine[next(side)], theirs[there.side]));
        }
        worst
    }

    /// Walks once around the link of `cusp` starting from a placed corner and
    /// returns the deck transformation relating the two copies of the start
    /// triangle.
    pub fn cusp_holonomy(&self, cusp: usize) -> Result<MoebiusMap> {
        let (k, c) = self.placed_corner(cusp)?;
        self.holonomy_at(k, c.idx)
    }

    fn placed_corner(&self, cusp: usize) -> Result<(usize, Corner)> {
        if cusp >= self.tri.num_cusps() {
            return Err(Error::IncompleteDevelopment(cusp));
        }
        let link = &self.tri.cusp_links()[cusp];
        self.placements
            .iter()
            .enumerate()
            .find_map(|(k, p)| link.corners.iter().find(|c| c.tri == p.tri).map(|c| (k, *c)))
            .ok_or(Error::IncompleteDevelopment(cusp))
    }

    /// Holonomy around the cusp at corner `idx` of placement `k`, fixing that
    /// lift of the cusp.
    pub fn holonomy_at(&self, k: usize, idx: usize) -> Result<MoebiusMap> {
        let first = &self.placements[k];
        let start = Corner { tri: first.tri, idx };
        let len = self.tri.cusp_links()[self.tri.cusp_of_corner(start)].len();
        let mut v = first.vertices;
        let mut corner = start;
        for _ in 0..len {
            let (slot, w) = self.cross(corner.tri, &v, corner.idx)?;
            v = w;
            corner = Corner { tri: slot.tri, idx: prev(slot.side) };
        }
        debug_assert_eq!(corner, start);
        let again = Placement { vertices: v, ..first.clone() };
        Ok(again.map().compose(&first.map().inverse()))
    }

    /// Spinor at `cusp` rescaled so that it decorates by the horocycle of
    /// length one in the quotient.
    pub fn canonical_horocycle(&self, cusp: usize) -> Result<Spinor> {
        let (k, c) = self.placed_corner(cusp)?;
        let g = self.holonomy_at(k, c.idx)?;
        canonical_spinor(&g, self.placements[k].vertices[next(c.idx)])
    }

    /// Signed distance between the length-one horocycles at the ends of `e`.
    pub fn reduced_length(&self, e: usize) -> Result<f64> {
        let (k, side) = self.find_side(e)?;
        let v = self.placements[k].vertices;
        // corner j sits at vertex j + 1
        let a = canonical_spinor(&self.holonomy_at(k, prev(side))?, v[side])?;
        let b = canonical_spinor(&self.holonomy_at(k, side)?, v[next(side)])?;
        Ok(2.0 * lambda_between(a, b).ln())
    }
}

/// `|t|` in `g w = w + t det(v, w) v` for a parabolic `g` fixing `v`.
fn parabolic_coefficient(g: &MoebiusMap, v: Spinor) -> Result<f64> {
    if g.kind(1e-9) != crate::hyperbolic::MapKind::Parabolic {
        return Err(Error::NumericBlowup(format!("cusp holonomy is not parabolic, trace {}", g.trace())));
    }
    let w = if v[0].abs() > v[1].abs() { [0.0, 1.0] } else { [1.0, 0.0] };
    let gw = act(g, w);
    Ok((det(gw, w) / det(v, w).powi(2)).abs())
}

/// Rescales `v` (fixed by the parabolic `g`) to the length-one horocycle of
/// the cyclic group generated by `g`.
pub fn canonical_spinor(g: &MoebiusMap, v: Spinor) -> Result<Spinor> {
    let s = parabolic_coefficient(g, v)?.sqrt();
    Ok([v[0] * s, v[1] * s])
}

/// Breadth-first development to combinatorial depth `depth` from triangle 0.
pub fn develop(t: &IdealTriangulation, input: &Coordinates, depth: usize) -> Result<DecoratedRealization> {
    let (shears, lambda) = match input {
        Coordinates::Shears(s) => {
            if s.len() != t.num_edges() {
                return Err(Error::LengthMismatch(s.len(), t.num_edges()));
            }
            if let Some(x) = s.iter().find(|x| !x.is_finite()) {
                return Err(Error::NumericBlowup(format!("shear {x}")));
            }
            (s.clone(), None)
        }
        Coordinates::Lambda(l) => {
            if l.len() != t.num_edges() {
                return Err(Error::LengthMismatch(l.len(), t.num_edges()));
            }
            (coords::shear_coords(t, l)?, Some(l.clone()))
        }
    };
    let mut real = DecoratedRealization { tri: t.clone(), shears, lambda, placements: Vec::new() };
    real.placements.push(Placement {
        tri: 0,
        depth: 0,
        parent: None,
        via_side: None,
        vertices: base_vertices(t, 0, real.lambda.as_deref()),
    });
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let p = real.placements[k].clone();
        if p.depth >= depth {
            continue;
        }
        for side in 0..3 {
            if p.via_side == Some(side) {
                continue;
            }
            let (slot, v) = real.cross(p.tri, &p.vertices, side)?;
            real.placements.push(Placement {
                tri: slot.tri,
                depth: p.depth + 1,
                parent: Some(k),
                via_side: Some(slot.side),
                vertices: v,
            });
            queue.push_back(real.placements.len() - 1);
        }
    }
    Ok(real)
}

/// Deck transformations `M' M⁻¹` between the first placement of each
/// triangle and its later copies.
pub fn deck_transformations(real: &DecoratedRealization) -> Vec<MoebiusMap> {
    let mut first: Vec<Option<MoebiusMap>> = vec![None; real.tri.num_triangles()];
    let mut out = Vec::new();
    for p in &real.placements {
        let m = p.map();
        match &first[p.tri] {
            None => first[p.tri] = Some(m),
            Some(f) => out.push(m.compose(&f.inverse())),
        }
    }
    out
}

/// Holonomy of `g` applied to a spinor.
pub fn apply_spinor(g: &MoebiusMap, v: Spinor) -> Spinor {
    act(g, v)
}

/// Numerical signed distance between two horocycles by integrating the
/// hyperbolic arclength along the joining geodesic.
pub fn horocycle_distance_quadrature(h1: &Horocycle, h2: &Horocycle) -> Result<f64> {
    match (h1.base, h2.base) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Err(Error::CoincidentPoints),
        (BoundaryPoint::Finite(_), BoundaryPoint::Infinity) => horocycle_distance_quadrature(h2, h1),
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(_)) => {
            // along the vertical line: from y = D up to y = h, ds = dy/y
            let (lo, hi) = (h2.size, h1.size);
            let v = integrate(|y| 1.0 / y, lo.min(hi), lo.max(hi));
            Ok(if hi >= lo { v } else { -v })
        }
        (BoundaryPoint::Finite(p1), BoundaryPoint::Finite(p2)) => {
            if p1 == p2 {
                return Err(Error::CoincidentPoints);
            }
            let (left, right) = if p1 < p2 { (h1, h2) } else { (h2, h1) };
            let (BoundaryPoint::Finite(pl), BoundaryPoint::Finite(pr)) = (left.base, right.base) else { unreachable!() };
            let c = 0.5 * (pl + pr);
            let r = 0.5 * (pr - pl);
            let z = |th: f64| (c + r * th.cos(), r * th.sin());
            // inside the horodisc at `p` with diameter `d`
            let inside = |th: f64, p: f64, d: f64| {
                let (x, y) = z(th);
                (x - p).powi(2) + (y - d / 2.0).powi(2) - (d / 2.0).powi(2)
            };
            let th_r = bisect(|th| inside(th, pr, right.size), true);
            let th_l = bisect(|th| inside(std::f64::consts::PI - th, pl, left.size), true);
            let th_l = std::f64::consts::PI - th_l;
            let v = integrate(|th| 1.0 / th.sin(), th_r.min(th_l), th_r.max(th_l));
            Ok(if th_l >= th_r { v } else { -v })
        }
    }
}

/// Root of `f` on `(0, π)` where `f < 0` near `0`.
fn bisect(f: impl Fn(f64) -> f64, _neg_first: bool) -> f64 {
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Adaptive Simpson quadrature.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(&f, a, b, fa, fm, fb, whole, 1e-13, 50)
}
