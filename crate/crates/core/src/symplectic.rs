//! The elementary 2-form on balanced cusp sequences, Poisson brackets of
//! balanced lengths, shear weight systems and four exact expressions for the
//! Weil–Petersson form in the `d log λ` basis.

use num_traits::Zero;
use serde::Serialize;

use crate::coords;
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::surface::{IdealTriangulation, WeightSystem};

/// `½ Σ_j (A_j + A_{j-1}) b_j`, partial sums `A` taken from `a`.
pub fn omega_cusp(a: &[Q], b: &[Q]) -> Result<Q> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let sa: Q = a.iter().sum();
    let sb: Q = b.iter().sum();
    if !sa.is_zero() || !sb.is_zero() {
        return Err(Error::Unbalanced { cusp: 0 });
    }
    let mut prev = Q::zero();
    let mut acc = Q::zero();
    for (aj, bj) in a.iter().zip(b) {
        let cur = &prev + aj;
        acc += (&cur + &prev) * bj;
        prev = cur;
    }
    Ok(acc / exact::q(2))
}

/// Alternating form `½ Σ_j (A_j b_j - B_j a_j)`.
pub fn omega_cusp_alternating(a: &[Q], b: &[Q]) -> Result<Q> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if !a.iter().sum::<Q>().is_zero() || !b.iter().sum::<Q>().is_zero() {
        return Err(Error::Unbalanced { cusp: 0 });
    }
    let (mut pa, mut pb, mut acc) = (Q::zero(), Q::zero(), Q::zero());
    for (aj, bj) in a.iter().zip(b) {
        pa += aj;
        pb += bj;
        acc += &pa * bj - &pb * aj;
    }
    Ok(acc / exact::q(2))
}

fn link_weights(t: &IdealTriangulation, w: &WeightSystem, cusp: usize) -> Vec<Q> {
    t.cusp_links()[cusp].ends.iter().map(|s| w.0[s.edge].clone()).collect()
}

fn require_balanced(t: &IdealTriangulation, w: &WeightSystem) -> Result<()> {
    if w.0.len() != t.num_edges() {
        return Err(Error::LengthMismatch(w.0.len(), t.num_edges()));
    }
    match t.first_unbalanced(w) {
        Some(c) => Err(Error::Unbalanced { cusp: c }),
        None => Ok(()),
    }
}

/// Sum over cusps of [`omega_cusp`] on the counterclockwise link sequences.
pub fn omega_total(t: &IdealTriangulation, wa: &WeightSystem, wb: &WeightSystem) -> Result<Q> {
    require_balanced(t, wa)?;
    require_balanced(t, wb)?;
    let mut total = Q::zero();
    for c in 0..t.num_cusps() {
        total += omega_cusp(&link_weights(t, wa, c), &link_weights(t, wb, c))?;
    }
    Ok(total)
}

/// `{L(A), L(B)} = 2 ω`.
pub fn poisson_bracket(t: &IdealTriangulation, wa: &WeightSystem, wb: &WeightSystem) -> Result<Q> {
    Ok(omega_total(t, wa, wb)? * exact::q(2))
}

/// `ω_WP(σ_A, σ_B) = ½ ω`.
pub fn wp_shear_pairing(t: &IdealTriangulation, wa: &WeightSystem, wb: &WeightSystem) -> Result<Q> {
    Ok(omega_total(t, wa, wb)? / exact::q(2))
}

/// `+1` on the `b, d` sides of the quadrilateral of `e`, `-1` on `a, c`.
pub fn shear_weight_system(t: &IdealTriangulation, e: usize) -> WeightSystem {
    WeightSystem::from_ints(&coords::shear_forms(t)[e])
}

#[derive(Debug, Clone, Serialize)]
pub struct FockReport {
    pub omega: Vec<Vec<i64>>,
    pub epsilon: Vec<Vec<i64>>,
    pub first_failure: Option<(usize, usize)>,
}

impl FockReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Compares `ω(W_e, W_f)` against `2 ε_ef` for every pair of edges.
pub fn fock_check(t: &IdealTriangulation) -> FockReport {
    let ne = t.num_edges();
    let w: Vec<WeightSystem> = (0..ne).map(|e| shear_weight_system(t, e)).collect();
    let eps = t.epsilon_matrix();
    let mut omega = vec![vec![0i64; ne]; ne];
    let mut first_failure = None;
    for e in 0..ne {
        for f in 0..ne {
            let v = omega_total(t, &w[e], &w[f]).expect("shear weights are balanced");
            assert!(v.is_integer());
            omega[e][f] = exact::to_f64(&v) as i64;
            if first_failure.is_none() && omega[e][f] != 2 * eps[e][f] {
                first_failure = Some((e, f));
            }
        }
    }
    FockReport { omega, epsilon: eps, first_failure }
}

/// Antisymmetric integer matrix of a 2-form in the basis `d log λ_e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormMatrix(pub Vec<Vec<i64>>);

impl FormMatrix {
    pub fn zero(n: usize) -> Self {
        FormMatrix(vec![vec![0; n]; n])
    }

    /// Adds `u ∧ v`, i.e. `u vᵀ - v uᵀ`.
    pub fn add_wedge(&mut self, u: &[i64], v: &[i64]) {
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                let d = ui * vj;
                if d != 0 {
                    self.0[i][j] += d;
                    self.0[j][i] -= d;
                }
            }
        }
    }

    pub fn scaled(&self, k: i64) -> FormMatrix {
        FormMatrix(self.0.iter().map(|r| r.iter().map(|x| k * x).collect()).collect())
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.0.len();
        (0..n).all(|i| self.0[i][i] == 0 && (0..n).all(|j| self.0[i][j] == -self.0[j][i]))
    }

    pub fn kernel_dimension(&self) -> usize {
        let m: Vec<Vec<Q>> = self.0.iter().map(|r| r.iter().map(|&x| exact::q(x)).collect()).collect();
        self.0.len() - exact::rank(&m)
    }

    pub fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.0.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                s += m as f64 * u[i] * v[j];
            }
        }
        s
    }
}

fn unit(n: usize, e: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[e] = 1;
    v
}

/// `d log h` of each corner: `x_opp - x_adj1 - x_adj2`.
fn dlog_h(t: &IdealTriangulation) -> Vec<[Vec<i64>; 3]> {
    let n = t.num_edges();
    t.triangles()
        .iter()
        .map(|tri| {
            [0, 1, 2].map(|j| {
                let mut v = vec![0; n];
                v[tri[(j + 2) % 3]] += 1;
                v[tri[j]] -= 1;
                v[tri[(j + 1) % 3]] -= 1;
                v
            })
        })
        .collect()
}

/// `Σ_triangles λ̃_a∧λ̃_b + λ̃_b∧λ̃_c + λ̃_c∧λ̃_a` with `a, b, c` clockwise.
pub fn wp_form_lambda(t: &IdealTriangulation) -> FormMatrix {
    let n = t.num_edges();
    let mut m = FormMatrix::zero(n);
    for tri in t.triangles() {
        let cw = [tri[2], tri[1], tri[0]];
        for k in 0..3 {
            m.add_wedge(&unit(n, cw[k]), &unit(n, cw[(k + 1) % 3]));
        }
    }
    m
}

/// Same sum over the three corners of each triangle, clockwise.
pub fn wp_form_h_triangles(t: &IdealTriangulation) -> FormMatrix {
    let mut m = FormMatrix::zero(t.num_edges());
    for h in dlog_h(t) {
        let cw = [&h[2], &h[1], &h[0]];
        for k in 0..3 {
            m.add_wedge(cw[k], cw[(k + 1) % 3]);
        }
    }
    m
}

/// `Σ_cusps Σ_j h̃_j ∧ h̃_{j+1}` with corners in counterclockwise link order.
pub fn wp_form_h_cusps(t: &IdealTriangulation) -> FormMatrix {
    let h = dlog_h(t);
    let mut m = FormMatrix::zero(t.num_edges());
    for l in t.cusp_links() {
        let p = l.corners.len();
        for k in 0..p {
            let (c0, c1) = (l.corners[k], l.corners[(k + 1) % p]);
            m.add_wedge(&h[c0.tri][c0.idx], &h[c1.tri][c1.idx]);
        }
    }
    m
}

/// `½ Σ_e d log λ_e ∧ dσ_e`.
pub fn wp_form_lambda_sigma(t: &IdealTriangulation) -> FormMatrix {
    let n = t.num_edges();
    let s = coords::shear_forms(t);
    let mut twice = FormMatrix::zero(n);
    for (e, row) in s.iter().enumerate() {
        twice.add_wedge(&unit(n, e), row);
    }
    FormMatrix(
        twice
            .0
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| {
                        assert!(x % 2 == 0, "λσ form has an odd entry");
                        x / 2
                    })
                    .collect()
            })
            .collect(),
    )
}

pub fn all_forms(t: &IdealTriangulation) -> [FormMatrix; 4] {
    [wp_form_lambda(t), wp_form_h_triangles(t), wp_form_h_cusps(t), wp_form_lambda_sigma(t)]
}

#[derive(Debug, Clone)]
pub struct LprReport {
    /// Coefficients of `L(B)` in `x = log λ`.
    pub length_form: Vec<Q>,
    /// Coefficients of `Σ_cusps ω(σ(x), b)` in `x`.
    pub omega_form: Vec<Q>,
    pub length_value: Q,
    pub omega_value: Q,
    /// `L(B)` on a basis of the zero-shear subspace.
    pub zero_shear_values: Vec<Q>,
}

impl LprReport {
    pub fn passed(&self) -> bool {
        self.length_form == self.omega_form
            && self.length_value == self.omega_value
            && self.zero_shear_values.iter().all(|v| v.is_zero())
    }
}

/// `L(B)(λ) = Σ_cusps ω(σ(λ), b)` as linear functionals of `log λ`, plus the
/// vanishing of `L(B)` wherever all shears vanish.
pub fn lpr_check(t: &IdealTriangulation, x: &[Q], wb: &WeightSystem) -> Result<LprReport> {
    require_balanced(t, wb)?;
    if x.len() != t.num_edges() {
        return Err(Error::LengthMismatch(x.len(), t.num_edges()));
    }
    let n = t.num_edges();
    let s = coords::shear_forms(t);
    let mut omega_form = Vec::with_capacity(n);
    for f in 0..n {
        let col = WeightSystem((0..n).map(|e| exact::q(s[e][f])).collect());
        omega_form.push(omega_total(t, &col, wb)?);
    }
    let length_form = coords::balanced_length_form(wb);
    let sigma = WeightSystem(coords::shear_coords_log(t, x));
    let omega_value = omega_total(t, &sigma, wb)?;
    let length_value = coords::balanced_length_log(x, wb);
    let sq: Vec<Vec<Q>> = s.iter().map(|r| r.iter().map(|&c| exact::q(c)).collect()).collect();
    let zero_shear_values =
        exact::kernel_basis(&sq, n).iter().map(|k| coords::balanced_length_log(k, wb)).collect();
    Ok(LprReport { length_form, omega_form, length_value, omega_value, zero_shear_values })
}

/// Cyclic rotation by `r` places.
pub fn rotate<T: Clone>(v: &[T], r: usize) -> Vec<T> {
    let n = v.len();
    (0..n).map(|k| v[(k + r) % n].clone()).collect()
}
