//! The level-two principal congruence quotient: a thrice-punctured sphere
//! carrying three 323-geodesics `a, b, c` (both ends at one cusp) and three
//! 2-geodesics `α, β, γ` (joining two cusps).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_integer::Integer;
use serde::Serialize;

use super::enumerate::lines_near;
use super::lines::{mat_inv, Cusp, LineKind, Mat, TessLine};
use crate::error::{Error, Result};
use crate::hyperbolic::{r_fn, MoebiusMap, NeumaierSum, SectorConstant};
use crate::realization::{canonical_spinor, lambda_between};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    A,
    B,
    C,
    Alpha,
    Beta,
    Gamma,
}

pub const LABELS: [Label; 6] = [Label::A, Label::B, Label::C, Label::Alpha, Label::Beta, Label::Gamma];

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::A => "a",
            Label::B => "b",
            Label::C => "c",
            Label::Alpha => "alpha",
            Label::Beta => "beta",
            Label::Gamma => "gamma",
        }
    }

    pub fn parse(s: &str) -> Result<Label> {
        LABELS.into_iter().find(|l| l.name() == s).ok_or_else(|| Error::UnknownEdge(s.to_string()))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn kind(self) -> LineKind {
        match self {
            Label::A | Label::B | Label::C => LineKind::ThreeTwoThreeLine,
            _ => LineKind::TwoLine,
        }
    }

    /// Oriented reference lift `(start, end)`.
    pub fn reference_ends(self) -> (Cusp, Cusp) {
        let (inf, c) = (Cusp::INFINITY, Cusp::new);
        match self {
            Label::A => (inf, c(1, 2)),
            Label::B => (c(0, 1), c(2, 1)),
            Label::C => (c(-1, 1), c(1, 1)),
            Label::Alpha => (c(0, 1), c(1, 1)),
            Label::Beta => (inf, c(1, 1)),
            Label::Gamma => (inf, c(0, 1)),
        }
    }

    pub fn reference(self) -> TessLine {
        let (x, y) = self.reference_ends();
        TessLine::through(x, y).expect("distinct ends")
    }
}

/// Cusp classes mod 2, indexed `∞ = 0`, `0 = 1`, `1 = 2`.
pub fn cusp_class(x: &Cusp) -> usize {
    match x.class_mod2() {
        (1, 0) => 0,
        (0, 1) => 1,
        (1, 1) => 2,
        _ => unreachable!("primitive pair"),
    }
}

pub const CUSP_NAMES: [&str; 3] = ["inf", "0", "1"];

/// Label of a tessellation line from the classes of its ends.
pub fn label_of(line: &TessLine) -> Result<Label> {
    let (x, y) = line.endpoints().ok_or_else(|| Error::UnsupportedGroup(format!("{line} has irrational ends")))?;
    let (i, j) = (cusp_class(&x), cusp_class(&y));
    let l = match (line.kind(), i.min(j), i.max(j)) {
        (Some(LineKind::ThreeTwoThreeLine), 0, 0) => Label::A,
        (Some(LineKind::ThreeTwoThreeLine), 1, 1) => Label::B,
        (Some(LineKind::ThreeTwoThreeLine), 2, 2) => Label::C,
        (Some(LineKind::TwoLine), 1, 2) => Label::Alpha,
        (Some(LineKind::TwoLine), 0, 2) => Label::Beta,
        (Some(LineKind::TwoLine), 0, 1) => Label::Gamma,
        _ => return Err(Error::UnsupportedGroup(format!("{line} is not a tessellation line"))),
    };
    Ok(l)
}

/// Maps of each cusp class to `∞`.
pub const TO_INFINITY: [Mat; 3] = [[[1, 0], [0, 1]], [[0, -1], [1, 0]], [[0, -1], [1, -1]]];

/// Weights on `a, b, c, α, β, γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weights(pub [f64; 6]);

impl Weights {
    pub fn get(&self, l: Label) -> f64 {
        self.0[l.index()]
    }

    pub fn from_map(map: &BTreeMap<String, f64>) -> Result<Weights> {
        let mut w = [0.0; 6];
        for (k, v) in map {
            w[Label::parse(k)?.index()] = *v;
        }
        Ok(Weights(w))
    }

    /// `a + b + c − α − β − γ`.
    pub fn sigma() -> Weights {
        Weights([1.0, 1.0, 1.0, -1.0, -1.0, -1.0])
    }
}

/// An end of one of the six geodesics at a cusp, with its position as a
/// fraction of the length-one horocycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspEnd {
    pub cusp: usize,
    pub label: Label,
    pub fraction: f64,
}

/// The four ends at each cusp: vertical lines `x ∈ {0, ½, 1, 3/2}` in the
/// frame where the cusp is at `∞` with width 2.
pub fn cusp_ends() -> Vec<CuspEnd> {
    let mut out = Vec::new();
    for k in 0..3 {
        let back = mat_inv(&TO_INFINITY[k]);
        for (twice_x, vertical) in [(0, (0, 1, 0)), (1, (0, 2, -1)), (2, (0, 1, -1)), (3, (0, 2, -3))] {
            let l = TessLine::new(vertical.0, vertical.1, vertical.2).unwrap().act(&back);
            out.push(CuspEnd { cusp: k, label: label_of(&l).unwrap(), fraction: twice_x as f64 / 4.0 });
        }
    }
    out
}

/// Balance of a weight system: the ends at each cusp sum to zero.
pub fn check_balanced(w: &Weights) -> Result<()> {
    let ends = cusp_ends();
    for k in 0..3 {
        let s: f64 = ends.iter().filter(|e| e.cusp == k).map(|e| w.get(e.label)).sum();
        if s.abs() > 1e-12 * (1.0 + w.0.iter().map(|x| x.abs()).sum::<f64>()) {
            return Err(Error::Unbalanced { cusp: k });
        }
    }
    Ok(())
}

/// `g ∈ SL(2,ℤ)` with `g(∞) = x`.
fn to_cusp(x: &Cusp) -> Mat {
    if x.q == 0 {
        return [[1, 0], [0, 1]];
    }
    let e = x.p.extended_gcd(&x.q);
    // p·e.x + q·e.y = 1
    [[x.p, -e.y], [x.q, e.x]]
}

/// Parabolic generator of the stabilizer of `x` in the level-two group.
pub fn cusp_parabolic(x: &Cusp) -> MoebiusMap {
    let g = to_cusp(x);
    let gi = mat_inv(&g);
    let t2: Mat = [[1, 2], [0, 1]];
    let m = super::lines::mat_mul(&super::lines::mat_mul(&g, &t2), &gi);
    MoebiusMap::new(m[0][0] as f64, m[0][1] as f64, m[1][0] as f64, m[1][1] as f64)
}

/// Signed length between the length-one horocycles at the ends of a line.
pub fn reduced_length(line: &TessLine) -> Result<f64> {
    let (x, y) = line.endpoints().ok_or_else(|| Error::UnsupportedGroup(format!("{line}")))?;
    let vx = canonical_spinor(&cusp_parabolic(&x), [x.p as f64, x.q as f64])?;
    let vy = canonical_spinor(&cusp_parabolic(&y), [y.p as f64, y.q as f64])?;
    Ok(2.0 * lambda_between(vx, vy).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedTerm {
    pub label: Label,
    pub weight: f64,
    pub reduced_length: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspTerm {
    pub cusp: &'static str,
    pub first: Label,
    pub second: Label,
    pub fraction: f64,
    pub weight: f64,
    pub log_lambda: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionTerm {
    pub reference: Label,
    pub line: TessLine,
    pub label: Label,
    pub cos: f64,
    pub weight: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UltraparallelTerm {
    pub reference: Label,
    pub label: Label,
    pub count: usize,
    pub weight: f64,
    pub r_sum: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingTermLedger {
    pub constant: SectorConstant,
    pub cutoff: f64,
    pub reduced: Vec<ReducedTerm>,
    pub cusp: Vec<CuspTerm>,
    pub intersections: Vec<IntersectionTerm>,
    pub ultraparallels: Vec<UltraparallelTerm>,
    pub reduced_total: f64,
    pub cusp_total: f64,
    pub intersection_total: f64,
    pub ultraparallel_total: f64,
    /// All terms with unit coefficients.
    pub value: f64,
    /// `(2/π)(reduced + cusp) + ℛ`, the coefficients as printed.
    pub value_printed_scaling: f64,
    pub tail_estimate: f64,
}

/// Gradient pairing of two balanced weight systems on the level-two quotient.
pub fn shpr_pairing(group: &str, wa: &Weights, wb: &Weights, cutoff: f64, constant: SectorConstant) -> Result<PairingTermLedger> {
    if group != "gamma2" {
        return Err(Error::UnsupportedGroup(group.to_string()));
    }
    check_balanced(wa)?;
    check_balanced(wb)?;
    if !(cutoff > 1.0) {
        return Err(Error::CutoffTooSmall(cutoff));
    }

    let mut reduced = Vec::new();
    for l in LABELS {
        let w = wa.get(l) * wb.get(l);
        if w != 0.0 {
            let red = reduced_length(&l.reference())?;
            reduced.push(ReducedTerm { label: l, weight: w, reduced_length: red, value: w * (red + 2.0) });
        }
    }

    let ends = cusp_ends();
    let mut cusp = Vec::new();
    for e1 in &ends {
        for e2 in ends.iter().filter(|e| e.cusp == e1.cusp) {
            let w = wa.get(e1.label) * wb.get(e2.label);
            if w == 0.0 {
                continue;
            }
            let fraction = (e2.fraction - e1.fraction).rem_euclid(1.0);
            let log_lambda = constant.eval(fraction)?.ln();
            cusp.push(CuspTerm {
                cusp: CUSP_NAMES[e1.cusp],
                first: e1.label,
                second: e2.label,
                fraction,
                weight: w,
                log_lambda,
                value: w * log_lambda,
            });
        }
    }

    let mut intersections = Vec::new();
    let mut ultraparallels = Vec::new();
    let mut tail = 0.0;
    for j in LABELS {
        let aj = wa.get(j);
        if aj == 0.0 {
            continue;
        }
        let lines = lines_near(&j.reference(), cutoff)?;
        let mut sums: BTreeMap<Label, (usize, NeumaierSum)> = BTreeMap::new();
        let mut n_ultra = 0usize;
        for n in &lines {
            let lab = label_of(&n.line)?;
            let bk = wb.get(lab);
            if n.intersecting {
                let r = r_fn(n.u)?;
                intersections.push(IntersectionTerm {
                    reference: j,
                    line: n.line,
                    label: lab,
                    cos: n.u,
                    weight: aj * bk,
                    value: aj * bk * r,
                });
            } else {
                let e = sums.entry(lab).or_insert((0, NeumaierSum::new()));
                e.0 += 1;
                e.1.add(r_fn(n.u)?);
                n_ultra += 1;
            }
        }
        tail += aj.abs() * wb.0.iter().map(|x| x.abs()).fold(0.0, f64::max) * 2.0 * n_ultra as f64 / (3.0 * cutoff * cutoff);
        for (lab, (count, s)) in sums {
            let w = aj * wb.get(lab);
            ultraparallels.push(UltraparallelTerm {
                reference: j,
                label: lab,
                count,
                weight: w,
                r_sum: s.value(),
                value: w * s.value(),
            });
        }
    }

    let total = |it: &mut dyn Iterator<Item = f64>| it.collect::<NeumaierSum>().value();
    let reduced_total = total(&mut reduced.iter().map(|t| t.value));
    let cusp_total = total(&mut cusp.iter().map(|t| t.value));
    let intersection_total = total(&mut intersections.iter().map(|t| t.value));
    let ultraparallel_total = total(&mut ultraparallels.iter().map(|t| t.value));
    let value = reduced_total + cusp_total + intersection_total + ultraparallel_total;
    Ok(PairingTermLedger {
        constant,
        cutoff,
        reduced,
        cusp,
        intersections,
        ultraparallels,
        reduced_total,
        cusp_total,
        intersection_total,
        ultraparallel_total,
        value,
        value_printed_scaling: 2.0 / PI * (reduced_total + cusp_total) + intersection_total + ultraparallel_total,
        tail_estimate: tail,
    })
}

/// `k` in the level-two group with `k(∞) = x`, for `x` in the class of `∞`.
fn level_two_to(x: &Cusp) -> Mat {
    let mut g = to_cusp(x);
    // first column is ≡ (1,0); make the second ≡ (0,1)
    if g[0][1].rem_euclid(2) == 1 {
        g[0][1] += g[0][0];
        g[1][1] += g[1][0];
    }
    g
}

/// Orientation of a lift of a labelled line, consistent with the reference
/// lift under the level-two group.
pub fn oriented_ends(label: Label, line: &TessLine) -> Result<(Cusp, Cusp)> {
    let (x, y) = line.endpoints().ok_or_else(|| Error::UnsupportedGroup(format!("{line}")))?;
    let (s, e) = label.reference_ends();
    if label.kind() == LineKind::TwoLine {
        // ends lie in different classes; order them like the reference
        return Ok(if cusp_class(&x) == cusp_class(&s) { (x, y) } else { (y, x) });
    }
    let k = TO_INFINITY[cusp_class(&s)];
    let (s, e, x0, y0) = (s.apply(&k), e.apply(&k), x.apply(&k), y.apply(&k));
    let r = e.apply(&mat_inv(&level_two_to(&s)));
    let same = |p: &Cusp, q: &Cusp| {
        let rq = q.apply(&mat_inv(&level_two_to(p)));
        // rq − r ∈ 2ℤ
        rq.q != 0 && (rq.p * r.q - r.p * rq.q) % (2 * r.q * rq.q) == 0
    };
    if same(&x0, &y0) {
        Ok((x, y))
    } else if same(&y0, &x0) {
        Ok((y, x))
    } else {
        Err(Error::UnsupportedGroup(format!("{line} is not a lift of {}", label.name())))
    }
}

/// Integer triple of the line from `x` to `y`, signed by orientation.
pub fn oriented_triple(x: &Cusp, y: &Cusp) -> (i64, i64, i64) {
    let t = (x.q * y.q, -(x.p * y.q + y.p * x.q), x.p * y.p);
    let plus = y.q == 0 || (x.q != 0 && x.p * y.q < y.p * x.q);
    if plus {
        t
    } else {
        (-t.0, -t.1, -t.2)
    }
}

/// One crossing of a lift with the fundamental segment of a closed geodesic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub line: TessLine,
    pub from: Cusp,
    pub to: Cusp,
    /// Position along the axis in `[0, ℓ)`.
    pub position: f64,
    pub cos: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosSum {
    pub label: Label,
    pub translation_length: f64,
    pub crossings: Vec<Crossing>,
    pub value: f64,
    /// Set when there are no crossings.
    pub no_intersections: bool,
}

/// Axis of a hyperbolic `B` as (repelling, attracting) fixed points.
fn axis(b: &Mat) -> Result<(f64, f64, f64)> {
    let [[p, _], [r, s]] = *b;
    let tr = (p + s) as f64;
    if tr.abs() <= 2.0 || r == 0 {
        return Err(Error::UnsupportedGroup(format!("{b:?} is not hyperbolic")));
    }
    let disc = tr * tr - 4.0;
    let roots = [((p - s) as f64 + disc.sqrt()) / (2.0 * r as f64), ((p - s) as f64 - disc.sqrt()) / (2.0 * r as f64)];
    // attracting: |r x + s| > 1
    let att = if (r as f64 * roots[0] + s as f64).abs() > 1.0 { 0 } else { 1 };
    Ok((roots[1 - att], roots[att], 2.0 * (tr.abs() / 2.0).acosh()))
}

/// `Σ cos θ_p` over the crossings of lifts of `label` with one period of the
/// axis of `b`, angles measured from the lift to the axis.
pub fn intersection_cos_sum(label: Label, b: &Mat) -> Result<CosSum> {
    let [[p, q], [r, s]] = *b;
    if p * s - q * r != 1 || p.rem_euclid(2) != 1 || s.rem_euclid(2) != 1 || q.rem_euclid(2) != 0 || r.rem_euclid(2) != 0 {
        return Err(Error::UnsupportedGroup(format!("{b:?} is not in the level-two group")));
    }
    let (rep, att, ell) = axis(b)?;
    // M(z) = (z − rep)/(att − z) sends the axis to iℝ₊, B to scaling by e^ℓ
    let m = |x: f64| (x - rep) / (att - x);
    let m_inf = -1.0;
    let inv = |t: f64| -> (f64, f64) {
        // point of the axis at height e^t on iℝ₊, pulled back
        let w = num_complex::Complex64::new(0.0, t.exp());
        let z = (w * att + rep) / (w + 1.0);
        (z.re, z.im)
    };
    let (x0, y0) = inv(0.0);
    let (x1, y1) = inv(ell);
    let (xlo, xhi, ymin) = (x0.min(x1), x0.max(x1), y0.min(y1));
    // oriented axis triple from rep to att
    let axis_t = {
        let t = (r, s - p, -q);
        let plus = att > rep;
        let t = if t.0 > 0 { t } else { (-t.0, -t.1, -t.2) };
        if plus {
            t
        } else {
            (-t.0, -t.1, -t.2)
        }
    };
    let axis_disc = (axis_t.1 * axis_t.1 - 4 * axis_t.0 * axis_t.2) as f64;

    let mut candidates = Vec::new();
    for d in [1i64, 4] {
        let sd = if d == 1 { 1 } else { 2 };
        for n in (xlo.floor() as i64 - 1)..=(xhi.ceil() as i64 + 1) {
            // verticals
            for c in [-(n * sd), -(2 * n + 1)] {
                if let Some(l) = TessLine::primitive(0, sd, c) {
                    if l.disc() == d {
                        candidates.push(l);
                    }
                }
            }
        }
        let amax = (sd as f64 / (2.0 * ymin)).floor() as i64;
        for a in 1..=amax {
            let rad = sd as f64 / (2.0 * a as f64);
            let (clo, chi) = (xlo - rad, xhi + rad);
            // center −b/(2a) ∈ [clo, chi]
            for bb in (-(2.0 * a as f64 * chi).ceil() as i64)..=(-(2.0 * a as f64 * clo)).floor() as i64 {
                let num = bb * bb - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                if let Some(l) = TessLine::primitive(a, bb, num / (4 * a)) {
                    candidates.push(l);
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut crossings = Vec::new();
    for l in candidates {
        if label_of(&l)? != label {
            continue;
        }
        let (from, to) = oriented_ends(label, &l)?;
        let ends = [from, to].map(|c| if c.q == 0 { m_inf } else { m(c.p as f64 / c.q as f64) });
        if ends[0] * ends[1] >= 0.0 {
            continue;
        }
        let position = 0.5 * (-ends[0] * ends[1]).ln();
        let eps = 1e-9 * ell;
        if position < -eps || position >= ell - eps {
            continue;
        }
        let position = position.max(0.0);
        let t = oriented_triple(&from, &to);
        let n = (t.1 * axis_t.1 - 2 * t.0 * axis_t.2 - 2 * axis_t.0 * t.2) as f64;
        let cos = n / ((l.disc() as f64) * axis_disc).sqrt();
        crossings.push(Crossing { line: l, from, to, position, cos });
    }
    crossings.sort_by(|a, b| a.position.total_cmp(&b.position));
    let value = crossings.iter().map(|c| c.cos).collect::<NeumaierSum>().value();
    Ok(CosSum { label, translation_length: ell, no_intersections: crossings.is_empty(), crossings, value })
}

/// `Σ_j 𝔞_j Σ_p cos θ_p`.
pub fn weighted_cos_sum(w: &Weights, b: &Mat) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for l in LABELS {
        if w.get(l) != 0.0 {
            acc.add(w.get(l) * intersection_cos_sum(l, b)?.value);
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{lambda_fn, lambda_star};
    use crate::modular::dedekind::dedekind_target_corrected;

    #[test]
    fn reference_labels() {
        for l in LABELS {
            assert_eq!(label_of(&l.reference()).unwrap(), l);
        }
        assert_eq!(Label::A.reference(), TessLine::new(0, 2, -1).unwrap());
        assert_eq!(Label::Gamma.reference(), TessLine::new(0, 1, 0).unwrap());
    }

    #[test]
    fn each_cusp_sees_four_ends() {
        let ends = cusp_ends();
        assert_eq!(ends.len(), 12);
        let mut count = [0usize; 6];
        for e in &ends {
            count[e.label.index()] += 1;
        }
        assert_eq!(count, [2; 6]);
        // at ∞: γ, a, β, a
        let at_inf: Vec<Label> = ends.iter().filter(|e| e.cusp == 0).map(|e| e.label).collect();
        assert_eq!(at_inf, vec![Label::Gamma, Label::A, Label::Beta, Label::A]);
        check_balanced(&Weights::sigma()).unwrap();
        assert_eq!(check_balanced(&Weights([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])).unwrap_err(), Error::Unbalanced { cusp: 0 });
    }

    #[test]
    fn reduced_lengths() {
        for l in LABELS {
            let want = match l.kind() {
                LineKind::TwoLine => 2.0 * 2f64.ln(),
                LineKind::ThreeTwoThreeLine => 4.0 * 2f64.ln(),
            };
            assert!((reduced_length(&l.reference()).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn term_values() {
        assert!((r_fn(0.5).unwrap() - (3f64.ln() / 2.0 - 2.0)).abs() < 1e-12);
        assert!((r_fn(0.0).unwrap() + 2.0).abs() < 1e-12);
        assert!((lambda_fn(0.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert!((lambda_fn(0.25).unwrap() - 3.0 * 2f64.sqrt() / 32.0).abs() < 1e-12);
        assert!((lambda_fn(0.5).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn intersections_of_323_reference() {
        let led = shpr_pairing("gamma2", &Weights::sigma(), &Weights::sigma(), 5.0, SectorConstant::Printed).unwrap();
        let at_a: Vec<_> = led.intersections.iter().filter(|t| t.reference == Label::A).collect();
        let threes: Vec<_> = at_a.iter().filter(|t| t.label.kind() == LineKind::ThreeTwoThreeLine).collect();
        let twos: Vec<_> = at_a.iter().filter(|t| t.label.kind() == LineKind::TwoLine).collect();
        // two order-3 points with two other 323-lines each, one order-2 point
        assert_eq!(threes.len(), 4);
        assert!(threes.iter().all(|t| (t.cos - 0.5).abs() < 1e-15));
        assert_eq!(twos.len(), 1);
        assert_eq!(twos[0].cos, 0.0);
        assert!((led.intersection_total - (6.0 * 3f64.ln() - 12.0)).abs() < 1e-12);
    }

    #[test]
    fn bookkeeping_constants() {
        let printed = shpr_pairing("gamma2", &Weights::sigma(), &Weights::sigma(), 5.0, SectorConstant::Printed).unwrap();
        let l2 = 2f64.ln();
        assert!((printed.reduced_total - (18.0 * l2 + 12.0)).abs() < 1e-12);
        let want = 60.0 * l2 - 12.0 * PI.ln() - 24.0 * 3f64.ln();
        assert!((printed.cusp_total - want).abs() < 1e-12, "{}", printed.cusp_total);
        let fixed = shpr_pairing("gamma2", &Weights::sigma(), &Weights::sigma(), 5.0, SectorConstant::CircuitLimit).unwrap();
        assert!((fixed.cusp_total - (-12.0 * l2 - 12.0 * PI.ln())).abs() < 1e-12);
        let _ = lambda_star(0.5);
    }

    #[test]
    fn corrected_self_pairing_vanishes() {
        let led = shpr_pairing("gamma2", &Weights::sigma(), &Weights::sigma(), 400.0, SectorConstant::CircuitLimit).unwrap();
        let constants = led.reduced_total + led.cusp_total + led.intersection_total;
        assert!((constants + 3.0 * dedekind_target_corrected()).abs() < 1e-12);
        assert!(led.value.abs() < 5e-3, "{}", led.value);
    }

    #[test]
    fn bad_inputs() {
        let w = Weights::sigma();
        assert!(matches!(shpr_pairing("sl2z", &w, &w, 10.0, SectorConstant::Printed), Err(Error::UnsupportedGroup(_))));
        let bad = Weights([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(shpr_pairing("gamma2", &bad, &w, 10.0, SectorConstant::Printed), Err(Error::Unbalanced { .. })));
    }

    #[test]
    fn orientation_consistent_under_group() {
        let gens: [Mat; 4] = [[[1, 2], [0, 1]], [[1, -2], [0, 1]], [[1, 0], [2, 1]], [[1, 0], [-2, 1]]];
        for l in LABELS {
            let (s, e) = l.reference_ends();
            let mut g: Mat = [[1, 0], [0, 1]];
            for step in 0..12 {
                g = super::super::lines::mat_mul(&g, &gens[(step * 7 + l.index()) % 4]);
                let (gs, ge) = (s.apply(&g), e.apply(&g));
                let line = TessLine::through(gs, ge).unwrap();
                assert_eq!(label_of(&line).unwrap(), l);
                assert_eq!(oriented_ends(l, &line).unwrap(), (gs, ge), "{l:?} step {step}");
            }
        }
    }

    /// Angle between oriented circles at their crossing, from Euclidean
    /// tangent vectors.
    fn tangent_cos(from: &Cusp, to: &Cusp, rep: f64, att: f64) -> f64 {
        let pt = |c: &Cusp| if c.q == 0 { f64::INFINITY } else { c.p as f64 / c.q as f64 };
        let (x1, y1) = (pt(from), pt(to));
        // crossing of the two geodesics
        let (cx, rr) = (0.5 * (rep + att), 0.5 * (att - rep).abs());
        let point = if x1.is_infinite() || y1.is_infinite() {
            let x = if x1.is_infinite() { y1 } else { x1 };
            (x, (rr * rr - (x - cx).powi(2)).sqrt())
        } else {
            let (c1, r1) = (0.5 * (x1 + y1), 0.5 * (x1 - y1).abs());
            let x = (r1 * r1 - rr * rr + cx * cx - c1 * c1) / (2.0 * (cx - c1));
            (x, (rr * rr - (x - cx).powi(2)).sqrt())
        };
        let tangent = |a: f64, b: f64| -> (f64, f64) {
            if b.is_infinite() {
                return (0.0, 1.0);
            }
            if a.is_infinite() {
                return (0.0, -1.0);
            }
            let c = 0.5 * (a + b);
            let (dx, dy) = (point.0 - c, point.1);
            // moving from a to b: clockwise over the top when a < b
            let t = if a < b { (dy, -dx) } else { (-dy, dx) };
            let n = t.0.hypot(t.1);
            (t.0 / n, t.1 / n)
        };
        let u = tangent(x1, y1);
        let v = tangent(rep, att);
        u.0 * v.0 + u.1 * v.1
    }

    #[test]
    fn cos_sum_matches_tangent_oracle() {
        for b in [[[3, 2], [4, 3]], [[5, 2], [2, 1]], [[1, 2], [2, 5]], [[7, 4], [12, 7]], [[-3, 2], [-2, 1]].map(|r| r.map(|x: i64| -x))] {
            let Ok((rep, att, _)) = axis(&b) else { continue };
            for l in LABELS {
                let s = intersection_cos_sum(l, &b).unwrap();
                let mut oracle = 0.0;
                for c in &s.crossings {
                    let t = tangent_cos(&c.from, &c.to, rep, att);
                    assert!((t - c.cos).abs() < 1e-9, "{l:?} {b:?}: {} vs {}", c.cos, t);
                    oracle += t;
                }
                assert!((oracle - s.value).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn orthogonal_crossing() {
        // the axis |z| = 1/√2 meets x = 0 at a right angle
        let s = intersection_cos_sum(Label::Gamma, &[[3, 2], [4, 3]]).unwrap();
        let on_axis: Vec<_> = s.crossings.iter().filter(|c| c.line == TessLine::new(0, 1, 0).unwrap()).collect();
        assert_eq!(on_axis.len(), 1);
        assert!(on_axis[0].cos.abs() < 1e-15);
    }

    #[test]
    fn crossing_count_is_period_independent() {
        // B and B² see the same lifts per unit length
        let b: Mat = [[3, 2], [4, 3]];
        let b2 = super::super::lines::mat_mul(&b, &b);
        for l in LABELS {
            let one = intersection_cos_sum(l, &b).unwrap();
            let two = intersection_cos_sum(l, &b2).unwrap();
            assert_eq!(two.crossings.len(), 2 * one.crossings.len());
            assert!((two.value - 2.0 * one.value).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_level_two() {
        assert!(matches!(intersection_cos_sum(Label::A, &[[2, 1], [1, 1]]), Err(Error::UnsupportedGroup(_))));
        assert!(matches!(intersection_cos_sum(Label::A, &[[1, 2], [0, 1]]), Err(Error::UnsupportedGroup(_))));
    }
}
