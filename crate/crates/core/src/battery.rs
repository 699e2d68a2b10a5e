//! The acceptance battery. Each criterion is a list of named checks carrying
//! the compared quantities, the tolerance and the observed error.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coords;
use crate::exact::{self, Q};
use crate::hyperbolic::{
    circuit_sum_asymptotic, circuit_sum_asymptotic_corrected, circuit_sum_brute, gardiner_cusp_limit,
    gardiner_cusp_partial_sum, lambda_fn, log_log_slope, r_fn, SectorConstant,
};
use crate::modular::dedekind::dedekind_relation;
use crate::modular::gamma2::{reduced_length, shpr_pairing, Label, Weights};
use crate::realization::{develop, Coordinates};
use crate::surface::{standard, IdealTriangulation, WeightSystem};
use crate::symplectic::{all_forms, fock_check, lpr_check, omega_total};

pub const DEFAULT_SEED: u64 = 0x7e1c_2024;

/// `TEICH_SEED` if set and numeric, else the default.
pub fn seed_from_env() -> u64 {
    std::env::var("TEICH_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub tolerance: Option<f64>,
    pub error: Option<f64>,
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

impl Check {
    pub fn exact(name: impl Into<String>, lhs: Value, rhs: Value) -> Check {
        Check { name: name.into(), status: status(lhs == rhs), lhs, rhs, tolerance: Some(0.0), error: None }
    }

    pub fn within(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Check {
        let err = (lhs - rhs).abs();
        Check { name: name.into(), status: status(err <= tol), lhs: json!(lhs), rhs: json!(rhs), tolerance: Some(tol), error: Some(err) }
    }

    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check { name: name.into(), status: status(value <= bound), lhs: json!(value), rhs: json!(bound), tolerance: None, error: None }
    }

    pub fn holds(name: impl Into<String>, ok: bool, detail: Value) -> Check {
        Check { name: name.into(), status: status(ok), lhs: detail, rhs: Value::Null, tolerance: None, error: None }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub id: String,
    pub title: String,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Criterion {
    fn new(id: &str, title: &str, checks: Vec<Check>) -> Criterion {
        let ok = checks.iter().all(Check::passed);
        Criterion { id: id.into(), title: title.into(), status: status(ok), checks }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// `PASS 6 ...` with failing checks listed underneath.
    pub fn summary(&self) -> String {
        let mut s = format!("{} {:<4} {}", if self.passed() { "PASS" } else { "FAIL" }, self.id, self.title);
        for c in self.checks.iter().filter(|c| !c.passed()) {
            s.push_str(&format!("\n       failed: {} (lhs {}, rhs {}", c.name, c.lhs, c.rhs));
            if let Some(e) = c.error {
                s.push_str(&format!(", error {e:.3e}"));
            }
            s.push(')');
        }
        s
    }
}

fn runtime_check(start: Instant, bound: f64) -> Check {
    Check::at_most("runtime seconds", start.elapsed().as_secs_f64(), bound)
}

/// `count` triangulations, each reached from `t` by 1 to 12 random flips.
pub fn flip_variants(t: &IdealTriangulation, count: usize, rng: &mut ChaCha8Rng) -> Vec<IdealTriangulation> {
    (0..count)
        .map(|_| {
            let mut v = t.clone();
            for _ in 0..rng.random_range(1..=12) {
                let flippable: Vec<usize> = (0..v.num_edges()).filter(|&e| v.can_flip(e)).collect();
                if flippable.is_empty() {
                    break;
                }
                v = v.flip(flippable[rng.random_range(0..flippable.len())]).expect("flippable edge");
            }
            v
        })
        .collect()
}

/// The standard suite plus 100 flip variants of each.
pub fn suite_with_variants(seed: u64) -> Vec<(String, IdealTriangulation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, t) in standard::suite() {
        let variants = flip_variants(&t, 100, &mut rng);
        out.push((name.to_string(), t));
        out.extend(variants.into_iter().enumerate().map(|(i, v)| (format!("{name}/flip{i}"), v)));
    }
    out
}

pub fn random_q(rng: &mut ChaCha8Rng) -> Q {
    exact::qr(rng.random_range(-30..=30), rng.random_range(1..=12))
}

pub fn random_positive_q(rng: &mut ChaCha8Rng) -> Q {
    exact::qr(rng.random_range(1..=30), rng.random_range(1..=12))
}

/// Random rational combination of a basis of balanced weights.
pub fn random_balanced(t: &IdealTriangulation, rng: &mut ChaCha8Rng) -> WeightSystem {
    let basis = t.balanced_basis();
    let mut w = vec![Q::zero(); t.num_edges()];
    for b in &basis {
        let c = random_q(rng);
        for (x, y) in w.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    WeightSystem(w)
}

fn first_failure(names: &[(String, bool)]) -> Value {
    names.iter().find(|(_, ok)| !ok).map(|(n, _)| json!(n)).unwrap_or(Value::Null)
}

/// Criterion 1: the four WP form constructions agree as integer matrices.
pub fn criterion_forms(seed: u64) -> Criterion {
    let start = Instant::now();
    let all = suite_with_variants(seed);
    let results: Vec<(String, bool)> = all
        .iter()
        .map(|(n, t)| {
            let f = all_forms(t);
            (n.clone(), f[0] == f[1] && f[1] == f[2] && f[2] == f[3])
        })
        .collect();
    let equal = results.iter().filter(|r| r.1).count();
    Criterion::new(
        "1",
        "four form constructions are equal",
        vec![
            Check::exact("triangulations with four equal matrices", json!(equal), json!(all.len())),
            Check::holds("first disagreement", equal == all.len(), first_failure(&results)),
            runtime_check(start, 1.0),
        ],
    )
}

/// Companion to 1: the relations the four constructions do satisfy.
pub fn companion_forms(seed: u64) -> Criterion {
    let all = suite_with_variants(seed);
    let mut counts = [0usize; 3];
    for (_, t) in &all {
        let [lambda, h_tri, h_cusp, lambda_sigma] = all_forms(t);
        counts[0] += (lambda == lambda_sigma) as usize;
        counts[1] += (h_tri == h_cusp) as usize;
        counts[2] += (h_tri == lambda.scaled(4)) as usize;
    }
    let n = json!(all.len());
    Criterion::new(
        "1c",
        "lambda = lambda-sigma, h-triangle = h-cusp = 4 lambda",
        vec![
            Check::exact("lambda form equals lambda-sigma form", json!(counts[0]), n.clone()),
            Check::exact("h-triangle form equals h-cusp form", json!(counts[1]), n.clone()),
            Check::exact("h forms equal 4 times lambda form", json!(counts[2]), n),
        ],
    )
}

/// Criterion 2: `ω(W_e, W_f) = 2 ε_ef`.
pub fn criterion_fock(seed: u64) -> Criterion {
    let start = Instant::now();
    let all = suite_with_variants(seed);
    let results: Vec<(String, bool)> = all.iter().map(|(n, t)| (n.clone(), fock_check(t).passed())).collect();
    let ok = results.iter().filter(|r| r.1).count();
    Criterion::new(
        "2",
        "omega(W_e, W_f) = 2 eps_ef",
        vec![
            Check::exact("triangulations where every pair agrees", json!(ok), json!(all.len())),
            Check::holds("first disagreement", ok == all.len(), first_failure(&results)),
            runtime_check(start, 1.0),
        ],
    )
}

/// Criterion 3: on the punctured torus `ω = ad − bc`.
pub fn criterion_torus_bracket(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
    let t = standard::punctured_torus();
    let mut ok = 0;
    let mut first = Value::Null;
    for _ in 0..100 {
        let (a, b, c, d) = (random_q(&mut rng), random_q(&mut rng), random_q(&mut rng), random_q(&mut rng));
        let w_ab = WeightSystem(vec![a.clone(), b.clone(), -&a - &b]);
        let w_cd = WeightSystem(vec![c.clone(), d.clone(), -&c - &d]);
        let got = omega_total(&t, &w_cd, &w_ab).expect("balanced");
        let want = &a * &d - &b * &c;
        if got == want {
            ok += 1;
        } else if first.is_null() {
            first = json!({"omega": exact::fmt_rational(&got), "ad-bc": exact::fmt_rational(&want)});
        }
    }
    Criterion::new(
        "3",
        "punctured torus bracket equals ad - bc",
        vec![Check::exact("random rational (a,b,c,d) matching", json!(ok), json!(100)), Check::holds("first mismatch", ok == 100, first)],
    )
}

/// Criterion 4: `L(B)(λ) = Σ ω(σ(λ), b)` in formal-log mode, and `L(B) = 0`
/// on the zero-shear locus.
pub fn criterion_lpr(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
    let mut checks = Vec::new();
    for (name, t) in standard::suite() {
        let mut ok = 0;
        for _ in 0..100 {
            let wb = random_balanced(&t, &mut rng);
            let x: Vec<Q> = (0..t.num_edges()).map(|_| random_q(&mut rng)).collect();
            ok += lpr_check(&t, &x, &wb).map(|r| r.passed()).unwrap_or(false) as usize;
        }
        checks.push(Check::exact(format!("{name}: random balanced B"), json!(ok), json!(100)));
    }
    Criterion::new("4", "L(B) = sum over cusps of omega(sigma, b)", checks)
}

const CIRCUIT_A: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const CIRCUIT_ELL: [f64; 5] = [0.2, 0.1, 0.05, 0.02, 0.01];

fn circuit_checks(asymptotic: fn(f64, f64) -> crate::Result<f64>) -> Vec<Check> {
    let mut checks = Vec::new();
    for a in CIRCUIT_A {
        let mut diffs = Vec::new();
        let mut tail: f64 = 0.0;
        for ell in CIRCUIT_ELL {
            let b = circuit_sum_brute(a, ell, 1e-15).expect("valid parameters");
            tail = tail.max(b.tail_bound);
            diffs.push((b.value - asymptotic(a, ell).expect("valid parameters")).abs());
        }
        let decreasing = diffs.windows(2).all(|w| w[1] < w[0]);
        checks.push(Check::holds(format!("a = {a}: |brute - asymptotic| decreasing in ell"), decreasing, json!(diffs)));
        checks.push(Check::at_most(format!("a = {a}: -(log-log slope)"), -log_log_slope(&CIRCUIT_ELL, &diffs), -0.9));
        checks.push(Check::at_most(format!("a = {a}: truncation tail bound"), tail, 1e-14));
    }
    checks
}

/// Criterion 5: the small-ℓ circuit-sum expansion.
pub fn criterion_circuit() -> Criterion {
    let start = Instant::now();
    let mut checks = circuit_checks(circuit_sum_asymptotic);
    checks.push(runtime_check(start, 10.0));
    Criterion::new("5", "circuit-sum expansion", checks)
}

/// Companion to 5 with `Γ(a)` in the constant term.
pub fn companion_circuit() -> Criterion {
    Criterion::new("5c", "circuit-sum expansion with Gamma(a)", circuit_checks(circuit_sum_asymptotic_corrected))
}

pub const DEDEKIND_CUTOFF: f64 = 5000.0;

fn dedekind_checks(corrected: bool) -> Vec<Check> {
    let start = Instant::now();
    let r = dedekind_relation(DEDEKIND_CUTOFF).expect("cutoff is large enough");
    let target = if corrected { r.target_corrected } else { r.target };
    let n = r.table.len();
    let gap = (r.table[n - 1].delta - r.table[n - 2].delta).abs();
    vec![
        Check::within("delta at cutoff 5000", r.delta, target, 1e-2),
        Check::within("extrapolated delta", r.extrapolated, target, 1e-3),
        Check::at_most("Cauchy gap between the last two cutoffs", gap, 1e-2),
        runtime_check(start, 300.0),
    ]
}

/// Criterion 6: the Dedekind distance relation.
pub fn criterion_dedekind() -> Criterion {
    Criterion::new("6", "Dedekind relation converges to 6log3 + 4logpi - 26log2", dedekind_checks(false))
}

pub fn companion_dedekind() -> Criterion {
    Criterion::new("6c", "Dedekind relation converges to log(pi^4/36)", dedekind_checks(true))
}

pub const SHPR_CUTOFFS: [f64; 4] = [100.0, 200.0, 400.0, 800.0];

fn shpr_checks(constant: SectorConstant) -> Vec<Check> {
    let s = Weights::sigma();
    let values: Vec<f64> =
        SHPR_CUTOFFS.iter().map(|&c| shpr_pairing("gamma2", &s, &s, c, constant).expect("balanced weights").value).collect();
    let last = *values.last().unwrap();
    vec![
        Check::within("self pairing at cutoff 800", last, 0.0, 5e-3),
        Check::holds("|value| shrinks from cutoff 100 to 800", last.abs() < values[0].abs(), json!(values)),
    ]
}

fn shpr_term_checks() -> Vec<Check> {
    let two = reduced_length(&Label::Gamma.reference()).expect("tessellation line");
    let three = reduced_length(&Label::A.reference()).expect("tessellation line");
    vec![
        Check::within("R(cos pi/3)", r_fn(0.5).unwrap(), 3f64.ln() / 2.0 - 2.0, 1e-12),
        Check::within("R(cos pi/2)", r_fn(0.0).unwrap(), -2.0, 1e-12),
        Check::within("lambda(0)", lambda_fn(0.0).unwrap(), 1.0 / (2.0 * PI), 1e-12),
        Check::within("lambda(1/4)", lambda_fn(0.25).unwrap(), 3.0 * 2f64.sqrt() / 32.0, 1e-12),
        Check::within("lambda(1/2)", lambda_fn(0.5).unwrap(), 0.125, 1e-12),
        Check::within("reduced length of a 2-line", two, 2.0 * 2f64.ln(), 1e-12),
        Check::within("reduced length of a 323-line", three, 4.0 * 2f64.ln(), 1e-12),
    ]
}

/// Criterion 7: the self pairing of `σ = a+b+c−α−β−γ` on the level-two
/// quotient tends to zero.
pub fn criterion_shpr() -> Criterion {
    let mut checks = shpr_term_checks();
    checks.extend(shpr_checks(SectorConstant::Printed));
    Criterion::new("7", "gamma2 self pairing tends to 0", checks)
}

pub fn companion_shpr() -> Criterion {
    Criterion::new("7c", "gamma2 self pairing tends to 0 with 1/(2 sin pi a)", shpr_checks(SectorConstant::CircuitLimit))
}

/// Criterion 8: developed structures are complete, and λ and shears survive
/// the round trip.
pub fn criterion_realization(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
    let mut checks = Vec::new();
    for (name, t) in [("(1,1)", standard::punctured_torus()), ("(0,4)", standard::tetrahedron())] {
        let basis: Vec<Vec<f64>> = t.balanced_basis().iter().map(|b| b.iter().map(exact::to_f64).collect()).collect();
        let (mut trace_err, mut shear_err, mut lambda_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..200 {
            let mut s = vec![0.0; t.num_edges()];
            for b in &basis {
                let c: f64 = rng.random_range(-1.5..1.5);
                for (x, y) in s.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            let r = develop(&t, &Coordinates::Shears(s.clone()), 2).expect("development");
            for c in 0..t.num_cusps() {
                trace_err = trace_err.max((r.cusp_holonomy(c).expect("covered").trace().abs() - 2.0).abs());
            }
            for (e, x) in s.iter().enumerate() {
                shear_err = shear_err.max((r.measure_shear(e).expect("placed") - x).abs());
            }
            let l: Vec<f64> = (0..t.num_edges()).map(|_| rng.random_range(0.2..5.0)).collect();
            let r = develop(&t, &Coordinates::Lambda(l.clone()), 2).expect("development");
            for (e, x) in l.iter().enumerate() {
                lambda_err = lambda_err.max((r.measure_lambda(e).expect("decorated") / x - 1.0).abs());
            }
        }
        checks.push(Check::at_most(format!("{name}: max ||trace| - 2| over balanced shears"), trace_err, 1e-9));
        checks.push(Check::at_most(format!("{name}: max relative lambda round-trip error"), lambda_err, 1e-9));
        checks.push(Check::at_most(format!("{name}: max measured shear error"), shear_err, 1e-10));
    }
    Criterion::new("8", "realization holonomy and round trips", checks)
}

/// Criterion 9: exact coordinate identities.
pub fn criterion_coordinates(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 9);
    let suite = standard::suite();
    let flippable_suite: Vec<&IdealTriangulation> =
        suite.iter().map(|(_, t)| t).filter(|t| (0..t.num_edges()).any(|e| t.can_flip(e))).collect();
    let mut ok = [0usize; 4];
    for i in 0..1000 {
        let t = &suite[i % suite.len()].1;
        let n = t.num_edges();
        let lambda: Vec<Q> = (0..n).map(|_| random_positive_q(&mut rng)).collect();

        let h = coords::h_lengths(t, &lambda).expect("positive");
        let coupled = coords::coupling_products(t, &h)
            .iter()
            .zip(&lambda)
            .all(|((l, r), x)| l == r && *l == Q::from_integer(1.into()) / (x * x));
        ok[0] += coupled as usize;

        let x: Vec<Q> = (0..n).map(|_| random_q(&mut rng)).collect();
        let sigma = WeightSystem(coords::shear_coords_log(t, &x));
        ok[1] += t.is_balanced(&sigma) as usize;

        let tf = flippable_suite[i % flippable_suite.len()];
        let lf: Vec<Q> = (0..tf.num_edges()).map(|_| random_positive_q(&mut rng)).collect();
        let flippable: Vec<usize> = (0..tf.num_edges()).filter(|&e| tf.can_flip(e)).collect();
        let e = flippable[rng.random_range(0..flippable.len())];
        let (t1, l1) = coords::ptolemy_flip(tf, &lf, e).expect("flippable");
        let e1 = t1.edge_id(tf.label(e)).expect("label kept");
        let (t2, l2) = coords::ptolemy_flip(&t1, &l1, e1).expect("flippable");
        let back = t2.canonical_triangles() == tf.canonical_triangles()
            && tf.labels().iter().enumerate().all(|(k, lab)| l2[t2.edge_id(lab).unwrap()] == lf[k])
            && l1.iter().all(|v| v.is_positive());
        ok[2] += back as usize;

        let w = random_balanced(t, &mut rng);
        let cusp = rng.random_range(0..t.num_cusps());
        let moved = coords::rescale_decoration_log(t, &x, cusp, &random_q(&mut rng));
        ok[3] += (coords::balanced_length_log(&moved, &w) == coords::balanced_length_log(&x, &w)) as usize;
    }
    Criterion::new(
        "9",
        "coordinate identities",
        vec![
            Check::exact("coupling equation", json!(ok[0]), json!(1000)),
            Check::exact("cusp shear sums vanish", json!(ok[1]), json!(1000)),
            Check::exact("Ptolemy flip is an involution", json!(ok[2]), json!(1000)),
            Check::exact("balanced length ignores the decoration", json!(ok[3]), json!(1000)),
        ],
    )
}

/// Criterion 10: the balanced space has dimension `6g − 6 + 2n`.
pub fn criterion_dimension() -> Criterion {
    let checks = standard::suite()
        .into_iter()
        .map(|(name, t)| {
            let (g, n) = (t.genus() as i64, t.num_cusps() as i64);
            Check::exact(format!("{name}: balanced dimension"), json!(t.balanced_dimension()), json!(6 * g - 6 + 2 * n))
        })
        .collect();
    Criterion::new("10", "balanced dimension is 6g - 6 + 2n", checks)
}

/// Criterion 11: the Gardiner cusp series.
pub fn criterion_gardiner() -> Criterion {
    let z = Complex64::new(0.37, 0.59);
    let s = gardiner_cusp_partial_sum(z, 100_000).expect("upper half plane");
    let l = gardiner_cusp_limit(z).expect("upper half plane");
    let err = (s - l).norm();
    Criterion::new(
        "11",
        "Gardiner partial sum at N = 1e5",
        vec![Check {
            name: "|partial sum - pi^2/sin^2(pi z)|".into(),
            status: status(err <= 1e-4),
            lhs: json!([s.re, s.im]),
            rhs: json!([l.re, l.im]),
            tolerance: Some(1e-4),
            error: Some(err),
        }],
    )
}

/// Every criterion in order, each followed by its companion if it has one.
pub fn run_all(seed: u64) -> Vec<Criterion> {
    vec![
        criterion_forms(seed),
        companion_forms(seed),
        criterion_fock(seed),
        criterion_torus_bracket(seed),
        criterion_lpr(seed),
        criterion_circuit(),
        companion_circuit(),
        criterion_dedekind(),
        companion_dedekind(),
        criterion_shpr(),
        companion_shpr(),
        criterion_realization(seed),
        criterion_coordinates(seed),
        criterion_dimension(),
        criterion_gardiner(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variants_are_reproducible() {
        let a = suite_with_variants(7);
        let b = suite_with_variants(7);
        assert_eq!(a.len(), 505);
        for ((n1, t1), (n2, t2)) in a.iter().zip(&b) {
            assert_eq!(n1, n2);
            assert_eq!(t1.canonical_triangles(), t2.canonical_triangles());
        }
        // flips move away from the base triangulation
        let base = standard::tetrahedron().canonical_triangles();
        assert!(a.iter().filter(|(n, _)| n.starts_with("(0,4)")).any(|(_, t)| t.canonical_triangles() != base));
    }

    #[test]
    fn random_balanced_is_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (_, t) in standard::suite() {
            for _ in 0..10 {
                assert!(t.is_balanced(&random_balanced(&t, &mut rng)));
            }
        }
    }

    #[test]
    fn check_constructors() {
        assert!(Check::within("x", 1.0, 1.0 + 1e-13, 1e-12).passed());
        assert!(!Check::within("x", 1.0, 1.1, 1e-12).passed());
        assert!(Check::exact("n", json!(3), json!(3)).passed());
        assert!(!Check::at_most("t", 2.0, 1.0).passed());
        let c = Criterion::new("0", "demo", vec![Check::holds("bad", false, json!(1))]);
        assert!(c.summary().starts_with("FAIL 0"));
        assert!(c.summary().contains("failed: bad"));
    }
}
