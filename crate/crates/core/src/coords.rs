//! Penner coordinates on a fixed triangulation: λ-lengths, h-lengths, shears,
//! Ptolemy flips, decoration rescaling and the length of a balanced sum.
//!
//! Multiplicative identities are generic over the scalar so they can run
//! exactly over rationals. Logarithmic quantities have a formal-log form, in
//! which `x_e = log λ_e` is an exact rational and shears are integer linear
//! functionals of `x`.

use num_traits::{Num, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::surface::{prev, End, IdealTriangulation, WeightSystem};

pub fn check_positive<T: Num + PartialOrd + Clone>(t: &IdealTriangulation, lambda: &[T]) -> Result<()> {
    if lambda.len() != t.num_edges() {
        return Err(Error::LengthMismatch(lambda.len(), t.num_edges()));
    }
    match lambda.iter().position(|x| *x <= T::zero()) {
        Some(e) => Err(Error::NonpositiveLambda(t.label(e).to_string())),
        None => Ok(()),
    }
}

/// `h` for every corner, `h[t][j] = λ_opp / (λ_adj1 λ_adj2)`.
pub fn h_lengths<T: Num + PartialOrd + Clone>(t: &IdealTriangulation, lambda: &[T]) -> Result<Vec<[T; 3]>> {
    check_positive(t, lambda)?;
    Ok(t.triangles()
        .iter()
        .map(|tri| {
            [0, 1, 2].map(|j| {
                let opp = lambda[tri[(j + 2) % 3]].clone();
                opp / (lambda[tri[j]].clone() * lambda[tri[(j + 1) % 3]].clone())
            })
        })
        .collect())
}

/// For each edge, the products of the two corners touching it in each of its
/// triangles: `(left, right)`. Both equal `1/λ_e²`.
pub fn coupling_products<T: Num + PartialOrd + Clone>(
    t: &IdealTriangulation,
    h: &[[T; 3]],
) -> Vec<(T, T)> {
    (0..t.num_edges())
        .map(|e| {
            let [s0, s1] = t.slots(e);
            let p = |s: crate::surface::Slot| h[s.tri][prev(s.side)].clone() * h[s.tri][s.side].clone();
            (p(s0), p(s1))
        })
        .collect()
}

/// Shear as integer coefficients over `log λ`: `σ_e = x_b + x_d - x_a - x_c`.
/// Coinciding sides accumulate.
pub fn shear_forms(t: &IdealTriangulation) -> Vec<Vec<i64>> {
    let ne = t.num_edges();
    (0..ne)
        .map(|e| {
            let q = t.quad(e);
            let mut v = vec![0i64; ne];
            v[q.b] += 1;
            v[q.d] += 1;
            v[q.a] -= 1;
            v[q.c] -= 1;
            v
        })
        .collect()
}

pub fn shear_coords(t: &IdealTriangulation, lambda: &[f64]) -> Result<Vec<f64>> {
    check_positive(t, lambda)?;
    let logs: Vec<f64> = lambda.iter().map(|x| x.ln()).collect();
    Ok(shear_forms(t).iter().map(|row| row.iter().zip(&logs).map(|(&c, x)| c as f64 * x).sum()).collect())
}

/// Shears for formal logarithms `x_e = log λ_e`.
pub fn shear_coords_log(t: &IdealTriangulation, x: &[Q]) -> Vec<Q> {
    shear_forms(t).iter().map(|row| apply(row, x)).collect()
}

pub fn apply(row: &[i64], x: &[Q]) -> Q {
    row.iter().zip(x).filter(|(c, _)| **c != 0).map(|(&c, v)| exact::q(c) * v).sum()
}

/// Flip `e` and apply the Ptolemy relation `λ' λ_e = λ_a λ_c + λ_b λ_d`.
pub fn ptolemy_flip<T: Num + PartialOrd + Clone>(
    t: &IdealTriangulation,
    lambda: &[T],
    e: usize,
) -> Result<(IdealTriangulation, Vec<T>)> {
    check_positive(t, lambda)?;
    let q = t.quad(e);
    let new_t = t.flip(e)?;
    let l = |i: usize| lambda[i].clone();
    let new_e = (l(q.a) * l(q.c) + l(q.b) * l(q.d)) / l(e);
    let mut out = vec![T::zero(); new_t.num_edges()];
    for (old, v) in lambda.iter().enumerate() {
        let id = new_t.edge_id(t.label(old)).expect("flip keeps labels");
        out[id] = if old == e { new_e.clone() } else { v.clone() };
    }
    Ok((new_t, out))
}

/// Number of side-ends of each edge at cusp `c`.
pub fn ends_at_cusp(t: &IdealTriangulation, c: usize) -> Vec<i64> {
    let mut k = vec![0i64; t.num_edges()];
    for e in 0..t.num_edges() {
        for end in [End::Tail, End::Head] {
            if t.cusp_of_end(e, end) == c {
                k[e] += 1;
            }
        }
    }
    k
}

/// Shrinks the horocycle at `cusp` by hyperbolic distance `s`:
/// `λ_e ← λ_e e^{s k_e / 2}` with `k_e` the number of ends of `e` there.
pub fn rescale_decoration(t: &IdealTriangulation, lambda: &[f64], cusp: usize, s: f64) -> Vec<f64> {
    let k = ends_at_cusp(t, cusp);
    lambda.iter().zip(k).map(|(l, k)| l * (0.5 * s * k as f64).exp()).collect()
}

pub fn rescale_decoration_log(t: &IdealTriangulation, x: &[Q], cusp: usize, s: &Q) -> Vec<Q> {
    let k = ends_at_cusp(t, cusp);
    x.iter().zip(k).map(|(v, k)| v + s * exact::qr(k, 2)).collect()
}

/// `L = Σ 2 w_e log λ_e`.
pub fn balanced_length(t: &IdealTriangulation, lambda: &[f64], w: &[f64]) -> Result<f64> {
    check_positive(t, lambda)?;
    if w.len() != lambda.len() {
        return Err(Error::LengthMismatch(w.len(), lambda.len()));
    }
    Ok(lambda.iter().zip(w).map(|(l, w)| 2.0 * w * l.ln()).sum())
}

pub fn balanced_length_log(x: &[Q], w: &WeightSystem) -> Q {
    x.iter().zip(&w.0).map(|(x, w)| exact::q(2) * x * w).sum()
}

/// Coefficients of `L(w)` as a linear functional of `x = log λ`.
pub fn balanced_length_form(w: &WeightSystem) -> Vec<Q> {
    w.0.iter().map(|v| exact::q(2) * v).collect()
}

pub fn all_zero(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn is_positive_q(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qr};
    use crate::surface::standard::*;
    use crate::surface::IdealTriangulation;

    #[test]
    fn unit_lambdas_give_unit_h() {
        let t = tetrahedron();
        let h = h_lengths(&t, &vec![q(1); 6]).unwrap();
        assert!(h.iter().flatten().all(|x| *x == q(1)));
    }

    #[test]
    fn h_opposite() {
        let t = punctured_torus();
        // λ_alpha = 2, others 1; corner 1 of triangle 0 is opposite alpha
        let h = h_lengths(&t, &[q(2), q(1), q(1)]).unwrap();
        assert_eq!(h[0][1], q(2));
    }

    #[test]
    fn nonpositive_rejected() {
        let t = punctured_torus();
        assert!(matches!(h_lengths(&t, &[1.0, 0.0, 1.0]), Err(Error::NonpositiveLambda(_))));
        assert!(matches!(shear_coords(&t, &[1.0, -1.0, 1.0]), Err(Error::NonpositiveLambda(_))));
    }

    #[test]
    fn coupling_exact() {
        let t = twice_punctured_torus();
        let lam: Vec<Q> = (0..t.num_edges() as i64).map(|i| qr(i + 2, 3 + i % 2)).collect();
        let h = h_lengths(&t, &lam).unwrap();
        for (e, (l, r)) in coupling_products(&t, &h).into_iter().enumerate() {
            assert_eq!(l, r);
            assert_eq!(l, (lam[e].clone() * lam[e].clone()).recip());
        }
    }

    #[test]
    fn diamond_shear_is_one() {
        // embedded quadrilateral inside the tetrahedron
        let t = tetrahedron();
        let e = 0;
        let qd = t.quad(e);
        let mut lam = vec![1.0; 6];
        lam[qd.b] = 0.5f64.exp();
        lam[qd.d] = 0.5f64.exp();
        let s = shear_coords(&t, &lam).unwrap();
        assert!((s[e] - 1.0).abs() < 1e-15);
        assert!(shear_coords(&t, &[3.0; 6]).unwrap().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn torus_shear_is_doubled_ratio() {
        let t = punctured_torus();
        let f = shear_forms(&t);
        assert_eq!(f[0][0], 0);
        assert_eq!(f[0][1].abs(), 2);
        assert_eq!(f[0][1], -f[0][2]);
    }

    #[test]
    fn shear_independent_of_edge_orientation() {
        // reversing triangle order swaps which slot is first for every edge
        for (_, t) in suite() {
            let mut spec = t.to_spec();
            spec.triangles.reverse();
            let u = IdealTriangulation::from_spec(&spec).unwrap();
            let fu = shear_forms(&u);
            let ft = shear_forms(&t);
            for e in 0..t.num_edges() {
                let eu = u.edge_id(t.label(e)).unwrap();
                for f in 0..t.num_edges() {
                    let fu_id = u.edge_id(t.label(f)).unwrap();
                    assert_eq!(ft[e][f], fu[eu][fu_id]);
                }
            }
        }
    }

    #[test]
    fn cusp_shear_sums_vanish() {
        for (_, t) in suite() {
            let f = shear_forms(&t);
            for l in t.cusp_links() {
                let mut v = vec![0i64; t.num_edges()];
                for s in &l.ends {
                    for (k, c) in f[s.edge].iter().enumerate() {
                        v[k] += c;
                    }
                }
                assert!(v.iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn flip_unit_lambdas() {
        let t = tetrahedron();
        let (u, lam) = ptolemy_flip(&t, &vec![q(1); 6], 0).unwrap();
        assert_eq!(lam[u.edge_id(t.label(0)).unwrap()], q(2));
        let (w, back) = ptolemy_flip(&u, &lam, u.edge_id(t.label(0)).unwrap()).unwrap();
        assert_eq!(w.canonical_triangles(), t.canonical_triangles());
        for e in 0..6 {
            assert_eq!(back[w.edge_id(t.label(e)).unwrap()], q(1));
        }
    }

    #[test]
    fn rescale_preserves_shears() {
        let t = twice_punctured_torus();
        let lam: Vec<f64> = (0..6).map(|i| 0.7 + 0.3 * i as f64).collect();
        let s0 = shear_coords(&t, &lam).unwrap();
        let r = rescale_decoration(&t, &lam, 1, 0.8);
        let s1 = shear_coords(&t, &r).unwrap();
        for (a, b) in s0.iter().zip(&s1) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(rescale_decoration(&t, &lam, 0, 0.0), lam);
    }

    #[test]
    fn shear_weight_length_is_twice_shear() {
        let t = tetrahedron();
        let x: Vec<Q> = (0..6).map(|i| qr(i * i - 3, i + 1)).collect();
        let sig = shear_coords_log(&t, &x);
        for e in 0..6 {
            let w = WeightSystem::from_ints(&shear_forms(&t)[e]);
            assert_eq!(balanced_length_log(&x, &w), q(2) * &sig[e]);
        }
    }

    #[test]
    fn length_of_unit_lambda_is_zero() {
        let t = punctured_torus();
        assert_eq!(balanced_length(&t, &[1.0; 3], &[1.0, 2.0, -3.0]).unwrap(), 0.0);
        assert!(matches!(balanced_length(&t, &[1.0; 3], &[1.0]), Err(Error::LengthMismatch(..))));
    }
}
