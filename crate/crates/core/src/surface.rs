//! Combinatorial ideal triangulations of punctured surfaces.
//!
//! A triangle lists its sides `s0, s1, s2` counterclockwise; side `s_i` runs
//! from vertex `P_i` to `P_{i+1}`. Corner `j` sits at `P_{j+1}`, between
//! `s_j` and `s_{j+1}`. Each edge label fills exactly two side-slots and the
//! gluing between them is the orientation-reversing one.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub tri: usize,
    pub side: usize,
}

/// Vertex sector `idx` of triangle `tri`, between sides `idx` and `idx + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Corner {
    pub tri: usize,
    pub idx: usize,
}

/// End of an edge, relative to the orientation it has in its first slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum End {
    Tail,
    Head,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SideEnd {
    pub edge: usize,
    pub end: End,
}

/// Counterclockwise cycle around one cusp. `ends[k]` is the side crossed when
/// leaving `corners[k]`, so `ends[k-1], corners[k], ends[k]` are consecutive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspLink {
    pub id: usize,
    pub corners: Vec<Corner>,
    pub ends: Vec<SideEnd>,
}

impl CuspLink {
    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn edge_sequence(&self) -> Vec<usize> {
        self.ends.iter().map(|s| s.edge).collect()
    }
}

/// Raw input form: `{"triangles": [["a","b","c"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationSpec {
    pub triangles: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct IdealTriangulation {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    triangles: Vec<[usize; 3]>,
    slots: Vec<[Slot; 2]>,
    links: Vec<CuspLink>,
    corner_cusp: Vec<[usize; 3]>,
    genus: usize,
}

#[inline]
pub fn next(i: usize) -> usize {
    (i + 1) % 3
}

#[inline]
pub fn prev(i: usize) -> usize {
    (i + 2) % 3
}

impl IdealTriangulation {
    pub fn from_labels<S: AsRef<str>>(triangles: &[[S; 3]]) -> Result<Self> {
        let raw: Vec<Vec<String>> =
            triangles.iter().map(|t| t.iter().map(|s| s.as_ref().to_string()).collect()).collect();
        Self::validate(&raw)
    }

    pub fn from_spec(spec: &TriangulationSpec) -> Result<Self> {
        Self::validate(&spec.triangles)
    }

    pub fn to_spec(&self) -> TriangulationSpec {
        TriangulationSpec {
            triangles: self
                .triangles
                .iter()
                .map(|t| t.iter().map(|&e| self.labels[e].clone()).collect())
                .collect(),
        }
    }

    pub fn validate(raw: &[Vec<String>]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(t) = raw.iter().position(|t| t.len() != 3) {
            return Err(Error::NonsurfaceGluing(format!("triangle {t} does not have 3 sides")));
        }
        if raw.len() % 2 == 1 {
            return Err(Error::NonsurfaceGluing(format!(
                "{} side-slots cannot be paired",
                3 * raw.len()
            )));
        }
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        let mut occ: Vec<Vec<Slot>> = Vec::new();
        let mut triangles = Vec::with_capacity(raw.len());
        for (t, tri) in raw.iter().enumerate() {
            let mut ids = [0usize; 3];
            for (i, lab) in tri.iter().enumerate() {
                let id = *index.entry(lab.clone()).or_insert_with(|| {
                    labels.push(lab.clone());
                    occ.push(Vec::new());
                    labels.len() - 1
                });
                occ[id].push(Slot { tri: t, side: i });
                ids[i] = id;
            }
            triangles.push(ids);
        }
        for (id, o) in occ.iter().enumerate() {
            if o.len() != 2 {
                return Err(Error::EdgeDegree { label: labels[id].clone(), count: o.len() });
            }
        }
        for (id, o) in occ.iter().enumerate() {
            if o[0].tri == o[1].tri {
                return Err(Error::SelfFolded(labels[id].clone()));
            }
        }
        let slots: Vec<[Slot; 2]> = occ.iter().map(|o| [o[0], o[1]]).collect();

        let mut s = IdealTriangulation {
            labels,
            index,
            triangles,
            slots,
            links: Vec::new(),
            corner_cusp: Vec::new(),
            genus: 0,
        };
        s.check_connected()?;
        s.build_links()?;

        let t = s.triangles.len() as i64;
        let e = s.labels.len() as i64;
        let n = s.links.len() as i64;
        let two_minus_2g = t - e + n;
        if two_minus_2g > 2 || (2 - two_minus_2g) % 2 != 0 {
            return Err(Error::NonsurfaceGluing(format!("Euler characteristic {two_minus_2g}")));
        }
        s.genus = ((2 - two_minus_2g) / 2) as usize;
        Ok(s)
    }

    fn check_connected(&self) -> Result<()> {
        let nt = self.triangles.len();
        let mut seen = vec![false; nt];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for i in 0..3 {
                let u = self.partner(Slot { tri: t, side: i }).tri;
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(t) => Err(Error::NonsurfaceGluing(format!("triangle {t} is not connected to triangle 0"))),
            None => Ok(()),
        }
    }

    /// Walks corners counterclockwise: from corner `(t, j)` cross side `s_j`
    /// into its partner slot `(t', i')` and continue at corner `(t', i'-1)`.
    fn build_links(&mut self) -> Result<()> {
        let nt = self.triangles.len();
        let mut cusp_of = vec![[usize::MAX; 3]; nt];
        let mut links = Vec::new();
        for t0 in 0..nt {
            for j0 in 0..3 {
                if cusp_of[t0][j0] != usize::MAX {
                    continue;
                }
                let id = links.len();
                let mut corners = Vec::new();
                let mut ends = Vec::new();
                let (mut t, mut j) = (t0, j0);
                loop {
                    if cusp_of[t][j] != usize::MAX {
                        if (t, j) == (t0, j0) {
                            break;
                        }
                        return Err(Error::NonsurfaceGluing(format!(
                            "corner walk from ({t0},{j0}) re-entered ({t},{j})"
                        )));
                    }
                    cusp_of[t][j] = id;
                    corners.push(Corner { tri: t, idx: j });
                    let here = Slot { tri: t, side: j };
                    let edge = self.triangles[t][j];
                    let end = if self.slots[edge][0] == here { End::Head } else { End::Tail };
                    ends.push(SideEnd { edge, end });
                    let p = self.partner(here);
                    t = p.tri;
                    j = prev(p.side);
                }
                links.push(CuspLink { id, corners, ends });
            }
        }
        self.links = links;
        self.corner_cusp = cusp_of;
        Ok(())
    }

    pub fn partner(&self, s: Slot) -> Slot {
        let e = self.triangles[s.tri][s.side];
        let [a, b] = self.slots[e];
        if a == s { b } else { a }
    }

    pub fn num_edges(&self) -> usize {
        self.labels.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_cusps(&self) -> usize {
        self.links.len()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `(g, n)`.
    pub fn signature(&self) -> (usize, usize) {
        (self.genus, self.links.len())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn edge_id(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownEdge(label.to_string()))
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn slots(&self, e: usize) -> [Slot; 2] {
        self.slots[e]
    }

    pub fn edge_at(&self, s: Slot) -> usize {
        self.triangles[s.tri][s.side]
    }

    pub fn cusp_links(&self) -> &[CuspLink] {
        &self.links
    }

    pub fn cusp_of_corner(&self, c: Corner) -> usize {
        self.corner_cusp[c.tri][c.idx]
    }

    /// Cusp at the given end of an edge.
    pub fn cusp_of_end(&self, e: usize, end: End) -> usize {
        // In the first slot (t, i) the edge runs P_i -> P_{i+1}; the head P_{i+1}
        // is corner i and the tail P_i is corner i-1.
        let s = self.slots[e][0];
        match end {
            End::Head => self.corner_cusp[s.tri][s.side],
            End::Tail => self.corner_cusp[s.tri][prev(s.side)],
        }
    }

    /// Edges opposite to and adjacent to a corner: `(opp, adj1, adj2)`.
    pub fn corner_sides(&self, c: Corner) -> (usize, usize, usize) {
        let t = &self.triangles[c.tri];
        (t[(c.idx + 2) % 3], t[c.idx], t[next(c.idx)])
    }

    /// Fock count: over all corners, `+1` at `(a, b)` when side `a` immediately
    /// precedes side `b` counterclockwise, antisymmetrized.
    pub fn epsilon_matrix(&self) -> Vec<Vec<i64>> {
        let ne = self.num_edges();
        let mut m = vec![vec![0i64; ne]; ne];
        for t in &self.triangles {
            for j in 0..3 {
                // counterclockwise at corner j: s_{j+1} then s_j
                let (a, b) = (t[next(j)], t[j]);
                m[a][b] += 1;
                m[b][a] -= 1;
            }
        }
        m
    }

    /// Entry `(c, e)` counts the side-ends of `e` in the link of cusp `c`.
    pub fn balance_matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.num_edges()]; self.num_cusps()];
        for l in &self.links {
            for s in &l.ends {
                m[l.id][s.edge] += 1;
            }
        }
        m
    }

    pub fn balanced_basis(&self) -> Vec<Vec<Q>> {
        let m: Vec<Vec<Q>> =
            self.balance_matrix().iter().map(|r| r.iter().map(|&x| exact::q(x)).collect()).collect();
        exact::kernel_basis(&m, self.num_edges())
    }

    pub fn balanced_dimension(&self) -> usize {
        let m: Vec<Vec<Q>> =
            self.balance_matrix().iter().map(|r| r.iter().map(|&x| exact::q(x)).collect()).collect();
        self.num_edges() - exact::rank(&m)
    }

    pub fn is_balanced(&self, w: &WeightSystem) -> bool {
        self.link_sums(w).iter().all(|s| s.is_zero())
    }

    pub fn is_balanced_f64(&self, w: &[f64], tol: f64) -> bool {
        self.links.iter().all(|l| l.ends.iter().map(|s| w[s.edge]).sum::<f64>().abs() <= tol)
    }

    /// Per-cusp sums of the weights of the side-ends in each link.
    pub fn link_sums(&self, w: &WeightSystem) -> Vec<Q> {
        self.links.iter().map(|l| l.ends.iter().map(|s| &w.0[s.edge]).sum()).collect()
    }

    pub fn first_unbalanced(&self, w: &WeightSystem) -> Option<usize> {
        self.link_sums(w).iter().position(|s| !s.is_zero())
    }

    /// Canonical form up to relabeling of nothing: rotate each triangle to start
    /// at its smallest label, then sort the triangle list.
    pub fn canonical_triangles(&self) -> Vec<[String; 3]> {
        let mut v: Vec<[String; 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let names = [0, 1, 2].map(|i| self.labels[t[i]].clone());
                let r = (0..3).min_by(|&a, &b| names[a].cmp(&names[b])).unwrap();
                [names[r].clone(), names[(r + 1) % 3].clone(), names[(r + 2) % 3].clone()]
            })
            .collect();
        v.sort();
        v
    }

    /// Replaces the triangles adjacent to `e` by the two triangles of the other
    /// diagonal, keeping the label. With `e` in slots `(t, i)` and `(t', i')`,
    /// `t = (e, a, b)` and `t' = (e, c, d)` become `(b, c, e)` and `(d, a, e)`.
    pub fn flip(&self, e: usize) -> Result<Self> {
        let q = self.quad(e);
        if q.a == q.d || q.b == q.c {
            return Err(Error::SelfFolded(self.labels[e].clone()));
        }
        let mut raw: Vec<Vec<String>> = self
            .triangles
            .iter()
            .map(|t| t.iter().map(|&x| self.labels[x].clone()).collect())
            .collect();
        let l = |x: usize| self.labels[x].clone();
        raw[q.left] = vec![l(q.b), l(q.c), l(e)];
        raw[q.right] = vec![l(q.d), l(q.a), l(e)];
        Self::validate(&raw)
    }

    pub fn can_flip(&self, e: usize) -> bool {
        let q = self.quad(e);
        q.a != q.d && q.b != q.c
    }

    /// Quadrilateral around `e`, oriented by its first slot.
    pub fn quad(&self, e: usize) -> Quad {
        let [s0, s1] = self.slots[e];
        let t = &self.triangles[s0.tri];
        let u = &self.triangles[s1.tri];
        Quad {
            left: s0.tri,
            right: s1.tri,
            a: t[next(s0.side)],
            b: t[prev(s0.side)],
            c: u[next(s1.side)],
            d: u[prev(s1.side)],
        }
    }
}

/// Sides of the two triangles next to an edge `e` oriented tail to head: in the
/// left triangle `a` meets the head and `b` the tail; in the right triangle `c`
/// meets the tail and `d` the head. Going counterclockwise around either end
/// of `e`, the `b, d` side comes before `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quad {
    pub left: usize,
    pub right: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// Exact weight per edge, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem(pub Vec<Q>);

impl WeightSystem {
    pub fn zero(ne: usize) -> Self {
        WeightSystem(vec![Q::zero(); ne])
    }

    pub fn from_ints(w: &[i64]) -> Self {
        WeightSystem(w.iter().map(|&x| exact::q(x)).collect())
    }

    pub fn from_labels(t: &IdealTriangulation, map: &BTreeMap<String, Q>) -> Result<Self> {
        for k in map.keys() {
            t.edge_id(k)?;
        }
        let w = t
            .labels()
            .iter()
            .map(|l| map.get(l).cloned().ok_or_else(|| Error::MissingWeight(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightSystem(w))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(exact::to_f64).collect()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }
}

/// Triangulations used throughout the test suite.
pub mod standard {
    use super::IdealTriangulation;

    /// Square with diagonal `γ`, opposite sides glued.
    pub fn punctured_torus() -> IdealTriangulation {
        IdealTriangulation::from_labels(&[["alpha", "beta", "gamma"], ["alpha", "beta", "gamma"]]).unwrap()
    }

    /// Two triangles glued along all three sides.
    pub fn pillow() -> IdealTriangulation {
        IdealTriangulation::from_labels(&[["alpha", "beta", "gamma"], ["gamma", "beta", "alpha"]]).unwrap()
    }

    /// Boundary of a tetrahedron; edge `"ij"` joins vertices `i` and `j`.
    pub fn tetrahedron() -> IdealTriangulation {
        let faces = [[1, 2, 3], [1, 3, 4], [1, 4, 2], [2, 4, 3]];
        let name = |a: i32, b: i32| format!("{}{}", a.min(b), a.max(b));
        let tris: Vec<[String; 3]> =
            faces.iter().map(|f| [name(f[0], f[1]), name(f[1], f[2]), name(f[2], f[0])]).collect();
        IdealTriangulation::from_labels(&tris).unwrap()
    }

    /// Punctured torus with one triangle subdivided at a new cusp.
    pub fn twice_punctured_torus() -> IdealTriangulation {
        IdealTriangulation::from_labels(&[
            ["alpha", "beta", "gamma"],
            ["alpha", "y", "x"],
            ["beta", "z", "y"],
            ["gamma", "x", "z"],
        ])
        .unwrap()
    }

    /// Octagon `a b a' b' c d c' d'` fanned from one vertex.
    pub fn genus_two() -> IdealTriangulation {
        let sides = ["a", "b", "a", "b", "c", "d", "c", "d"];
        let diag = |k: usize| format!("d{k}");
        let tris: Vec<[String; 3]> = (1..7)
            .map(|k| {
                let first = if k == 1 { sides[0].to_string() } else { diag(k) };
                let last = if k == 6 { sides[7].to_string() } else { diag(k + 1) };
                [first, sides[k].to_string(), last]
            })
            .collect();
        IdealTriangulation::from_labels(&tris).unwrap()
    }

    pub fn suite() -> Vec<(&'static str, IdealTriangulation)> {
        vec![
            ("(1,1)", punctured_torus()),
            ("(0,3)", pillow()),
            ("(0,4)", tetrahedron()),
            ("(1,2)", twice_punctured_torus()),
            ("(2,1)", genus_two()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use crate::exact::q;

    fn names(t: &IdealTriangulation, l: &CuspLink) -> Vec<String> {
        l.ends.iter().map(|s| t.label(s.edge).to_string()).collect()
    }

    fn rotations_contain(seq: &[String], pat: &[&str]) -> bool {
        (0..seq.len()).any(|r| (0..seq.len()).all(|k| seq[(r + k) % seq.len()] == pat[k]))
    }

    #[test]
    fn torus_counts_and_link() {
        let t = punctured_torus();
        assert_eq!(t.signature(), (1, 1));
        assert_eq!((t.num_edges(), t.num_triangles()), (3, 2));
        let l = &t.cusp_links()[0];
        assert!(rotations_contain(&names(&t, l), &["alpha", "gamma", "beta", "alpha", "gamma", "beta"]));
    }

    #[test]
    fn pillow_has_three_two_cusps() {
        let t = pillow();
        assert_eq!(t.signature(), (0, 3));
        assert!(t.cusp_links().iter().all(|l| l.len() == 2));
    }

    #[test]
    fn suite_signatures() {
        let want = [(1, 1), (0, 3), (0, 4), (1, 2), (2, 1)];
        for ((_, t), w) in suite().iter().zip(want) {
            assert_eq!(t.signature(), w);
            let (g, n) = (w.0 as i64, w.1 as i64);
            assert_eq!(t.num_edges() as i64, 6 * g - 6 + 3 * n);
            assert_eq!(t.num_triangles() as i64, 4 * g - 4 + 2 * n);
            let total: usize = t.cusp_links().iter().map(|l| l.len()).sum();
            assert_eq!(total, 2 * t.num_edges());
            assert_eq!(t.balanced_dimension() as i64, 6 * g - 6 + 2 * n);
        }
    }

    #[test]
    fn side_ends_visited_once() {
        for (_, t) in suite() {
            let mut seen = std::collections::HashSet::new();
            for l in t.cusp_links() {
                for s in &l.ends {
                    assert!(seen.insert(*s));
                }
            }
            assert_eq!(seen.len(), 2 * t.num_edges());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(IdealTriangulation::validate(&[]).unwrap_err(), Error::EmptyInput);
        let e = IdealTriangulation::from_labels(&[["x", "y", "z"], ["y", "z", "w"]]).unwrap_err();
        assert!(matches!(e, Error::EdgeDegree { .. }));
        let e = IdealTriangulation::from_labels(&[["x", "x", "y"]]).unwrap_err();
        assert!(matches!(e, Error::NonsurfaceGluing(_)));
        let e = IdealTriangulation::from_labels(&[["x", "x", "y"], ["y", "z", "z"]]).unwrap_err();
        assert!(matches!(e, Error::SelfFolded(_)));
        let e = IdealTriangulation::from_labels(&[
            ["a", "b", "c"],
            ["a", "b", "c"],
            ["d", "e", "f"],
            ["d", "e", "f"],
        ])
        .unwrap_err();
        assert!(matches!(e, Error::NonsurfaceGluing(_)));
    }

    #[test]
    fn epsilon_entries() {
        for (_, t) in suite() {
            let m = t.epsilon_matrix();
            for i in 0..t.num_edges() {
                assert_eq!(m[i][i], 0);
                for j in 0..t.num_edges() {
                    assert_eq!(m[i][j], -m[j][i]);
                    assert!(m[i][j].abs() <= 2);
                }
            }
        }
        let t = punctured_torus();
        let m = t.epsilon_matrix();
        let (a, b, g) = (0, 1, 2);
        assert_eq!(m[a][b].abs(), 2);
        assert_eq!(m[b][g].abs(), 2);
        assert_eq!(m[g][a].abs(), 2);
        assert_eq!(m[a][b], m[b][g]);
        assert_eq!(m[b][g], m[g][a]);
    }

    #[test]
    fn epsilon_row_sums_count_corner_roles() {
        for (_, t) in suite() {
            let m = t.epsilon_matrix();
            for e in 0..t.num_edges() {
                let mut first = 0;
                let mut second = 0;
                for tri in t.triangles() {
                    for j in 0..3 {
                        if tri[next(j)] == e {
                            first += 1;
                        }
                        if tri[j] == e {
                            second += 1;
                        }
                    }
                }
                assert_eq!(m[e].iter().sum::<i64>(), first - second);
            }
        }
    }

    #[test]
    fn disjoint_edges_have_zero_epsilon() {
        let t = tetrahedron();
        let m = t.epsilon_matrix();
        assert_eq!(m[t.edge_id("12").unwrap()][t.edge_id("34").unwrap()], 0);
    }

    #[test]
    fn torus_balance() {
        let t = punctured_torus();
        assert_eq!(t.balance_matrix(), vec![vec![2, 2, 2]]);
        assert!(t.is_balanced(&WeightSystem(vec![q(3), q(-5), q(2)])));
        assert!(!t.is_balanced(&WeightSystem::from_ints(&[1, 0, 0])));
        assert!(t.is_balanced(&WeightSystem::zero(3)));
        assert_eq!(pillow().balanced_dimension(), 0);
    }

    #[test]
    fn missing_weight() {
        let t = punctured_torus();
        let mut m = BTreeMap::new();
        m.insert("alpha".to_string(), q(1));
        assert_eq!(WeightSystem::from_labels(&t, &m).unwrap_err(), Error::MissingWeight("beta".into()));
    }

    #[test]
    fn flip_is_involution() {
        for (_, t) in suite() {
            for e in 0..t.num_edges() {
                if !t.can_flip(e) {
                    continue;
                }
                let f = t.flip(e).unwrap();
                assert_eq!(f.signature(), t.signature());
                let back = f.flip(f.edge_id(t.label(e)).unwrap()).unwrap();
                assert_eq!(back.canonical_triangles(), t.canonical_triangles());
            }
        }
    }

    #[test]
    fn links_invariant_under_triangle_reordering() {
        let t = twice_punctured_torus();
        let mut spec = t.to_spec();
        spec.triangles.reverse();
        let u = IdealTriangulation::from_spec(&spec).unwrap();
        let canon = |t: &IdealTriangulation| {
            let mut v: Vec<Vec<String>> = t
                .cusp_links()
                .iter()
                .map(|l| {
                    let s = names(t, l);
                    (0..s.len()).map(|r| s[r..].iter().chain(&s[..r]).cloned().collect::<Vec<_>>()).min().unwrap()
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(canon(&t), canon(&u));
    }
}
