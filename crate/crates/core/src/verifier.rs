//! The case analysis of the structure theorem, run on a triple
//! `(P, S_ℂ, S_ℝ)`: hypotheses, rich-curve detection, and the sub-conditions
//! of each case on every detected curve.
//!
//! "Evinces" is checked by cardinality: the on-curve set has the size of the
//! certified binary rank of the intersection point's restriction, and the
//! point lies in the span of that set. The case-(a) point is computed
//! directly as an intersection of spans; the auxiliary quadric-surface point
//! used in one branch of the proof is not reconstructed.

use serde::{Deserialize, Serialize};

use crate::binary::{complex_rank, real_rank, BinaryDecomposition, BinaryForm, Minimality};
use crate::curves::{
    find_rich_conics, find_rich_lines, split_on_curve, ConicParametrization, CurveSpec, Line,
};
use crate::error::Result;
use crate::factory::{curve_sample, CaseLabel, Instance, Status};
use crate::form::HomogeneousForm;
use crate::points::{PointSet, ProjectivePoint};
use crate::spans::{
    combine_points, h1_ideal, intersect_with_points, lemma_c2_check, membership, point_generators,
    span_coefficients, unique_intersection_point, Field, Generator, Intersection, LemmaC2,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn push(checks: &mut Vec<Check>, name: &str, passed: bool, detail: impl Into<String>) -> bool {
    checks.push(Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    });
    passed
}

/// Detection thresholds; `None` keeps the theorem's `d+2` and `2d+2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Thresholds {
    pub line: Option<usize>,
    pub conic: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectedCurve {
    pub curve: CurveSpec,
    /// Points of `S_ℂ ∪ S_ℝ` on the curve.
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detection {
    pub lines: Vec<DetectedCurve>,
    pub conics: Vec<DetectedCurve>,
    pub line_pairs: Vec<DetectedCurve>,
    pub notes: Vec<String>,
}

impl Detection {
    pub fn is_empty(&self) -> bool {
        self.lines.is_empty() && self.conics.is_empty() && self.line_pairs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPoint {
    pub name: String,
    pub intersection: Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub case: CaseLabel,
    pub curve: CurveSpec,
    pub conditions: Vec<Check>,
    pub points: Vec<NamedPoint>,
    /// `lemma_c2_check` on `(S_ℂ, S_ℝ)` with this curve.
    pub lemma_c2: Option<LemmaC2>,
    pub passed: bool,
}

impl Verdict {
    /// Whether every check of a clause such as `"a.ii"` passed; `None` if
    /// the clause was not evaluated.
    pub fn clause(&self, clause: &str) -> Option<bool> {
        let prefix = format!("{clause}/");
        let mut hits = self
            .conditions
            .iter()
            .filter(|c| c.name == clause || c.name.starts_with(&prefix))
            .peekable();
        hits.peek()?;
        Some(hits.all(|c| c.passed))
    }

    pub fn point(&self, name: &str) -> Option<&Intersection> {
        self.points
            .iter()
            .find(|p| p.name == name)
            .map(|p| &p.intersection)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Pass,
    Fail,
    OutsideScope,
    InvalidInput,
}

/// The full outcome of `classify`. Field order is the serialized order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub m: usize,
    pub d: u32,
    pub seed: Option<u64>,
    pub expected_case: Option<CaseLabel>,
    pub validation: Vec<Check>,
    pub hypotheses: Vec<Check>,
    /// How the global rank hypotheses are backed: `assumed` for raw
    /// triples, otherwise from the instance's minimality certificates.
    pub rank_hypotheses: String,
    pub h1_total: Option<usize>,
    pub detected: Option<Detection>,
    pub verdicts: Vec<Verdict>,
    pub passing_cases: Vec<CaseLabel>,
    pub headline: Option<CaseLabel>,
    pub overall: Overall,
    pub notes: Vec<String>,
}

impl CaseReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Shape checks; failures make every later stage meaningless.
pub fn validate(inst: &Instance) -> Vec<Check> {
    let mut out = Vec::new();
    let (m, d) = (inst.m, inst.d);
    push(
        &mut out,
        "degree",
        d >= 1 && inst.p.degree() == d,
        format!("P has degree {}, d = {d}", inst.p.degree()),
    );
    push(
        &mut out,
        "variables",
        inst.p.num_vars() == m + 1,
        format!("P has {} variables, m = {m}", inst.p.num_vars()),
    );
    push(
        &mut out,
        "dimension",
        inst.s_c.m() == m && inst.s_r.m() == m,
        format!("S_C in P^{}, S_R in P^{}", inst.s_c.m(), inst.s_r.m()),
    );
    push(
        &mut out,
        "S_C_nonempty",
        !inst.s_c.is_empty(),
        format!("{} points", inst.s_c.len()),
    );
    push(
        &mut out,
        "S_R_nonempty",
        !inst.s_r.is_empty(),
        format!("{} points", inst.s_r.len()),
    );
    push(
        &mut out,
        "P_real",
        inst.p.is_real(),
        "P must be defined over R",
    );
    push(
        &mut out,
        "S_R_real",
        inst.s_r.is_real(),
        "S_R must consist of real points",
    );
    out
}

/// Budget, rank inequality, both memberships and `h¹(I_{S_ℂ∪S_ℝ}(d)) > 0`.
/// Returns the checks and `h¹` of the union.
pub fn check_hypotheses(inst: &Instance) -> Result<(Vec<Check>, usize)> {
    let mut out = Vec::new();
    let d = inst.d as usize;
    let (nc, nr) = (inst.s_c.len(), inst.s_r.len());
    push(
        &mut out,
        "budget",
        nc + nr <= 3 * d - 1,
        format!("{nc} + {nr} against 3d-1 = {}", 3 * d - 1),
    );
    push(
        &mut out,
        "rank_inequality",
        nc < nr,
        format!("|S_C| = {nc}, |S_R| = {nr}"),
    );
    let mc = membership(&inst.p, &inst.s_c, inst.d, Field::Complex)?;
    push(
        &mut out,
        "membership_C",
        mc,
        "P in the complex span of nu_d(S_C)",
    );
    let mr = membership(&inst.p, &inst.s_r, inst.d, Field::Real)?;
    push(
        &mut out,
        "membership_R",
        mr,
        "P in the real span of nu_d(S_R)",
    );
    let h1 = h1_ideal(&inst.s_c.union(&inst.s_r)?, inst.d)?.h1;
    push(
        &mut out,
        "h1_positive",
        h1 > 0,
        format!("h1 of the union is {h1}"),
    );
    Ok((out, h1))
}

/// Rich lines and conics of `S_ℂ ∪ S_ℝ`, and disjoint pairs of rich lines.
pub fn detect_structure(inst: &Instance, thresholds: &Thresholds) -> Result<Detection> {
    let d = inst.d as usize;
    let union = inst.s_c.union(&inst.s_r)?;
    let line_t = thresholds.line.unwrap_or(d + 2);
    let conic_t = thresholds.conic.unwrap_or(2 * d + 2);
    let mut det = Detection::default();
    for (line, count) in find_rich_lines(&union, line_t) {
        det.lines.push(DetectedCurve {
            curve: CurveSpec::line(line),
            count,
        });
    }
    for (curve, count) in find_rich_conics(&union, conic_t) {
        det.conics.push(DetectedCurve { curve, count });
    }
    if inst.m >= 3 {
        let candidates = find_rich_lines(&union, (d + 1).min(line_t));
        for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                let ((l, a), (r, b)) = (&candidates[i], &candidates[j]);
                if l.meet(r)?.is_some() {
                    continue;
                }
                if *a >= line_t && *b >= line_t {
                    let curve = CurveSpec::two_disjoint_lines(l.clone(), r.clone())?;
                    det.line_pairs.push(DetectedCurve {
                        curve,
                        count: a + b,
                    });
                } else if *a >= line_t || *b >= line_t {
                    det.notes.push(format!("disjoint lines with {a} and {b} points: handled as case (a) on the richer line"));
                } else if *a == d + 1 && *b == d + 1 {
                    det.notes.push(format!(
                        "disjoint lines with exactly d+1 = {} points each: excluded configuration, no case applies",
                        d + 1
                    ));
                }
            }
        }
    }
    if det.is_empty() {
        det.notes
            .push("no rich line or conic: dichotomy violated, input outside theorem scope".into());
    }
    Ok(det)
}

fn intersection_ok(i: &Intersection) -> bool {
    i.point().is_some_and(|p| p.real)
}

fn describe(i: &Intersection) -> String {
    match i {
        Intersection::Point(p) => format!("unique point, real = {}", p.real),
        Intersection::NotUnique { dim } => format!("not unique, projective dimension {dim}"),
    }
}

fn rank_detail(dec: &BinaryDecomposition) -> String {
    match &dec.minimality {
        Some(Minimality::SearchBounded { lower_bound }) => {
            format!("{} (search-bounded, at least {lower_bound})", dec.rank)
        }
        _ => dec.rank.to_string(),
    }
}

/// `n` evinces the rank of `f` over `field`: equal size and exact minimality.
fn evinces(
    checks: &mut Vec<Check>,
    name: &str,
    f: &BinaryForm,
    n: usize,
    field: Field,
) -> Option<usize> {
    let dec = match field {
        Field::Complex => complex_rank(f),
        Field::Real => real_rank(f),
    };
    match dec {
        Ok(dec) => {
            let exact = dec.minimality == Some(Minimality::Exact);
            push(
                checks,
                name,
                exact && dec.rank == n,
                format!("set of size {n}, rank {}", rank_detail(&dec)),
            );
            Some(dec.rank)
        }
        Err(e) => {
            push(checks, name, false, format!("rank engine failed: {e}"));
            None
        }
    }
}

fn memberships(
    checks: &mut Vec<Check>,
    name: &str,
    f: &HomogeneousForm,
    c: &PointSet,
    r: &PointSet,
    d: u32,
) -> Result<()> {
    let mc = membership(f, c, d, Field::Complex)?;
    let mr = f.is_real() && membership(f, r, d, Field::Real)?;
    push(
        checks,
        name,
        mc && mr,
        format!("complex span {mc}, real span {mr}"),
    );
    Ok(())
}

fn finish(
    case: CaseLabel,
    curve: CurveSpec,
    conditions: Vec<Check>,
    points: Vec<NamedPoint>,
    inst: &Instance,
) -> Verdict {
    let lemma_c2 = if inst.d > curve.degree() {
        lemma_c2_check(&inst.s_c, &inst.s_r, &curve, inst.d).ok()
    } else {
        None
    };
    let passed = !conditions.is_empty() && conditions.iter().all(|c| c.passed);
    Verdict {
        case,
        curve,
        conditions,
        points,
        lemma_c2,
        passed,
    }
}

fn errored(
    case: CaseLabel,
    curve: CurveSpec,
    mut conditions: Vec<Check>,
    points: Vec<NamedPoint>,
    err: crate::Error,
) -> Verdict {
    push(&mut conditions, "error", false, err.to_string());
    Verdict {
        case,
        curve,
        conditions,
        points,
        lemma_c2: None,
        passed: false,
    }
}

/// The curve point computed against three different spanning families;
/// pushes one named point per family and checks they agree and are real.
fn curve_point(
    checks: &mut Vec<Check>,
    points: &mut Vec<NamedPoint>,
    name: &str,
    clause: &str,
    inst: &Instance,
    families: [(&str, &PointSet, &PointSet); 3],
) -> Result<Option<HomogeneousForm>> {
    let mut forms = Vec::new();
    let mut details = Vec::new();
    for (label, e, t) in families {
        let i = if t.is_empty() {
            Intersection::NotUnique { dim: -1 }
        } else {
            unique_intersection_point(&inst.p, e, t, inst.d)?
        };
        details.push(format!("{label}: {}", describe(&i)));
        forms.push(i.point().filter(|p| p.real).map(|p| p.form.clone()));
        points.push(NamedPoint {
            name: format!("{name}[{label}]"),
            intersection: i,
        });
    }
    let agree = forms.iter().all(|f| f.is_some() && *f == forms[0]);
    push(
        checks,
        &format!("{clause}/point"),
        agree,
        details.join("; "),
    );
    Ok(if agree { forms[0].clone() } else { None })
}

pub fn verify_case_a(inst: &Instance, line: &Line) -> Verdict {
    let curve = CurveSpec::line(line.clone());
    let mut checks = Vec::new();
    let mut points = Vec::new();
    match case_a(inst, line, &curve, &mut checks, &mut points) {
        Ok(()) => finish(CaseLabel::A, curve, checks, points, inst),
        Err(e) => errored(CaseLabel::A, curve, checks, points, e),
    }
}

fn case_a(
    inst: &Instance,
    line: &Line,
    curve: &CurveSpec,
    checks: &mut Vec<Check>,
    points: &mut Vec<NamedPoint>,
) -> Result<()> {
    let d = inst.d;
    push(checks, "real_curve", line.is_real(), "line defined over R");
    let (c_on, c_off) = split_on_curve(&inst.s_c, curve)?;
    let (r_on, r_off) = split_on_curve(&inst.s_r, curve)?;
    push(
        checks,
        "a.i",
        c_off.same_set(&r_off),
        format!("{} and {} points off the line", c_off.len(), r_off.len()),
    );
    let sample = curve_sample(curve, d, None)?;
    let families = [
        ("S_C,l", &c_off, &c_on),
        ("S_R,l", &r_off, &r_on),
        ("line", &c_off, &sample),
    ];
    if let Some(pl) = curve_point(checks, points, "P_l", "a.ii", inst, families)? {
        let g = BinaryForm::from_form(&line.restrict(&pl)?)?;
        evinces(checks, "a.ii/complex", &g, c_on.len(), Field::Complex);
        evinces(checks, "a.ii/real", &g, r_on.len(), Field::Real);
        memberships(checks, "a.ii/membership", &pl, &c_on, &r_on, d)?;
    }
    let n = c_on.union(&r_on)?.len();
    let k = d as usize;
    push(
        checks,
        "a.iii/count",
        n >= k + 2,
        format!("{n} points on the line, need d+2 = {}", k + 2),
    );
    push(
        checks,
        "a.iii/strict",
        c_on.len() < r_on.len(),
        format!("{} < {}", c_on.len(), r_on.len()),
    );
    Ok(())
}

pub fn verify_case_b(inst: &Instance, conic: &CurveSpec) -> Verdict {
    let mut checks = Vec::new();
    let mut points = Vec::new();
    match case_b(inst, conic, &mut checks, &mut points) {
        Ok(()) => finish(CaseLabel::B, conic.clone(), checks, points, inst),
        Err(e) => errored(CaseLabel::B, conic.clone(), checks, points, e),
    }
}

fn case_b(
    inst: &Instance,
    curve: &CurveSpec,
    checks: &mut Vec<Check>,
    points: &mut Vec<NamedPoint>,
) -> Result<()> {
    let d = inst.d;
    let k = d as usize;
    push(
        checks,
        "real_curve",
        curve.is_real(),
        "conic defined over R",
    );
    let (c_on, c_off) = split_on_curve(&inst.s_c, curve)?;
    let (r_on, r_off) = split_on_curve(&inst.s_r, curve)?;
    push(
        checks,
        "b.i",
        c_off.same_set(&r_off),
        format!("{} and {} points off the conic", c_off.len(), r_off.len()),
    );
    match curve {
        CurveSpec::SmoothConic { conic } => {
            let base = r_on.iter().chain(c_on.iter()).find(|p| p.is_real());
            let param = match base.map(|b| ConicParametrization::from_point(conic, b)) {
                Some(Ok(param)) => param,
                other => {
                    let why = match other {
                        Some(Err(e)) => e.to_string(),
                        _ => "no real point of the sets on the conic".into(),
                    };
                    push(checks, "b.ii/parametrization", false, why);
                    return Ok(());
                }
            };
            let sample = curve_sample(curve, d, Some(&param))?;
            let families = [
                ("S_C,C", &c_off, &c_on),
                ("S_R,C", &r_off, &r_on),
                ("conic", &c_off, &sample),
            ];
            if let Some(pc) = curve_point(checks, points, "P_C", "b.ii", inst, families)? {
                let g = BinaryForm::from_form(&param.restrict(&pc)?)?;
                evinces(checks, "b.ii/complex", &g, c_on.len(), Field::Complex);
                evinces(checks, "b.ii/real", &g, r_on.len(), Field::Real);
                memberships(checks, "b.ii/membership", &pc, &c_on, &r_on, d)?;
            }
            push(checks, "b.iv", true, "conic is smooth");
        }
        CurveSpec::ReducibleConic { lines, .. } => {
            let sample = curve_sample(curve, d, None)?;
            let families = [
                ("S_C,C", &c_off, &c_on),
                ("S_R,C", &r_off, &r_on),
                ("conic", &c_off, &sample),
            ];
            if let Some(pc) = curve_point(checks, points, "P_C", "b.ii", inst, families)? {
                branchwise(checks, &pc, &c_on, &r_on, lines, d)?;
                memberships(checks, "b.ii/membership", &pc, &c_on, &r_on, d)?;
            }
            let node = lines[0].meet(&lines[1])?;
            let union = c_on.union(&r_on)?;
            let counts: Vec<usize> = lines
                .iter()
                .map(|l| {
                    union
                        .iter()
                        .filter(|p| l.contains(p) && Some(*p) != node.as_ref())
                        .count()
                })
                .collect();
            push(
                checks,
                "b.iv",
                counts.iter().all(|&c| c >= k + 1),
                format!(
                    "off-node branch counts {counts:?}, need d+1 = {} each",
                    k + 1
                ),
            );
        }
        _ => {
            push(
                checks,
                "b.ii/parametrization",
                false,
                "curve is not a conic",
            );
            return Ok(());
        }
    }
    let n = c_on.union(&r_on)?.len();
    push(
        checks,
        "b.iii/count",
        n >= 2 * k + 2,
        format!("{n} points on the conic, need 2d+2 = {}", 2 * k + 2),
    );
    push(
        checks,
        "b.iii/strict",
        c_on.len() < r_on.len(),
        format!("{} < {}", c_on.len(), r_on.len()),
    );
    Ok(())
}

/// On a line pair, the curve point splits along the branches through its
/// coefficients on each set; ranks are checked per branch and added.
fn branchwise(
    checks: &mut Vec<Check>,
    pc: &HomogeneousForm,
    c_on: &PointSet,
    r_on: &PointSet,
    lines: &[Line; 2],
    d: u32,
) -> Result<()> {
    for (set, field, clause) in [
        (c_on, Field::Complex, "b.ii/complex"),
        (r_on, Field::Real, "b.ii/real"),
    ] {
        let Some(lambda) = span_coefficients(pc, set, d, field)? else {
            push(
                checks,
                clause,
                false,
                "curve point outside the span of the set",
            );
            continue;
        };
        let mut total = 0;
        let mut details = Vec::new();
        let mut ok = true;
        for (b, line) in lines.iter().enumerate() {
            // The node, if used, is counted on the first branch.
            let on: Vec<usize> = (0..set.len())
                .filter(|&i| {
                    line.contains(&set.points()[i])
                        && (b == 0 || !lines[0].contains(&set.points()[i]))
                })
                .collect();
            let pts: Vec<&ProjectivePoint> = on.iter().map(|&i| &set.points()[i]).collect();
            let coeffs: Vec<_> = on.iter().map(|&i| lambda[i].clone()).collect();
            if pts.is_empty() {
                ok = false;
                details.push(format!("branch {} carries no point", b + 1));
                continue;
            }
            let part = combine_points(&pts, &coeffs, d)?;
            let g = BinaryForm::from_form(&line.restrict(&part)?)?;
            let mut sub = Vec::new();
            let rank = evinces(&mut sub, clause, &g, pts.len(), field);
            ok &= sub.iter().all(|c| c.passed);
            total += rank.unwrap_or(0);
            details.extend(
                sub.into_iter()
                    .map(|c| format!("branch {}: {}", b + 1, c.detail)),
            );
        }
        ok &= total == set.len();
        push(
            checks,
            clause,
            ok,
            format!("{}; ranks add to {total}", details.join("; ")),
        );
    }
    Ok(())
}

pub fn verify_case_c(inst: &Instance, lines: &[Line; 2]) -> Verdict {
    let mut checks = Vec::new();
    let mut points = Vec::new();
    let curve = match CurveSpec::two_disjoint_lines(lines[0].clone(), lines[1].clone()) {
        Ok(c) => c,
        Err(e) => {
            // Meeting lines still get a verdict so the report shows why.
            let curve = CurveSpec::Line {
                line: lines[0].clone(),
            };
            push(&mut checks, "c/disjoint", false, e.to_string());
            return Verdict {
                case: CaseLabel::C,
                curve,
                conditions: checks,
                points,
                lemma_c2: None,
                passed: false,
            };
        }
    };
    match case_c(inst, lines, &curve, &mut checks, &mut points) {
        Ok(()) => finish(CaseLabel::C, curve, checks, points, inst),
        Err(e) => errored(CaseLabel::C, curve, checks, points, e),
    }
}

fn case_c(
    inst: &Instance,
    lines: &[Line; 2],
    curve: &CurveSpec,
    checks: &mut Vec<Check>,
    points: &mut Vec<NamedPoint>,
) -> Result<()> {
    let d = inst.d;
    let k = d as usize;
    push(
        checks,
        "c/disjoint",
        inst.m >= 3,
        format!("disjoint lines in P^{}", inst.m),
    );
    push(
        checks,
        "real_curve",
        curve.is_real(),
        "both lines defined over R",
    );
    let (c_on, c_off) = split_on_curve(&inst.s_c, curve)?;
    let (r_on, r_off) = split_on_curve(&inst.s_r, curve)?;
    push(
        checks,
        "c.i",
        c_off.same_set(&r_off),
        format!("{} and {} points off the lines", c_off.len(), r_off.len()),
    );
    let union = c_on.union(&r_on)?;
    let counts: Vec<usize> = lines
        .iter()
        .map(|l| union.iter().filter(|p| l.contains(p)).count())
        .collect();
    push(
        checks,
        "c.ii",
        counts.iter().all(|&c| c >= k + 2),
        format!("line counts {counts:?}, need d+2 = {} each", k + 2),
    );

    let samples: Vec<PointSet> = lines
        .iter()
        .map(|l| curve_sample(&CurveSpec::line(l.clone()), d, None))
        .collect::<Result<_>>()?;
    let both = samples[0].union(&samples[1])?;
    let families = [
        ("S_C,Gamma", &c_off, &c_on),
        ("S_R,Gamma", &r_off, &r_on),
        ("lines", &c_off, &both),
    ];
    let Some(o) = curve_point(checks, points, "O_Gamma", "c.iii", inst, families)? else {
        return Ok(());
    };
    memberships(checks, "c.iii/membership", &o, &c_on, &r_on, d)?;

    let mut sums = [0usize; 2];
    let mut ok_sums = true;
    for (i, name) in [(0, "O_l"), (1, "O_r")] {
        let mut u = vec![Generator::Form(&o)];
        u.extend(point_generators(&samples[1 - i]));
        let t: Vec<&ProjectivePoint> = samples[i].iter().collect();
        let inter = intersect_with_points(&u, &t, d)?;
        push(
            checks,
            &format!("c.iv/point_{}", &name[2..]),
            intersection_ok(&inter),
            describe(&inter),
        );
        let form = inter.point().filter(|p| p.real).map(|p| p.form.clone());
        points.push(NamedPoint {
            name: name.into(),
            intersection: inter,
        });
        let Some(form) = form else {
            ok_sums = false;
            continue;
        };
        let line = &lines[i];
        let lc = c_on.filter(|p| line.contains(p));
        let lr = r_on.filter(|p| line.contains(p));
        let g = BinaryForm::from_form(&line.restrict(&form)?)?;
        let side = &name[2..];
        let rc = evinces(
            checks,
            &format!("c.iv/complex_{side}"),
            &g,
            lc.len(),
            Field::Complex,
        );
        let rr = evinces(
            checks,
            &format!("c.iv/real_{side}"),
            &g,
            lr.len(),
            Field::Real,
        );
        memberships(
            checks,
            &format!("c.iv/membership_{side}"),
            &form,
            &lc,
            &lr,
            d,
        )?;
        match (rc, rr) {
            (Some(a), Some(b)) => {
                sums[0] += a;
                sums[1] += b;
            }
            _ => ok_sums = false,
        }
    }
    // The ranks of O_Gamma are taken as the sums over the two lines.
    push(
        checks,
        "c.iii/complex",
        ok_sums && sums[0] == c_on.len(),
        format!(
            "|S_C,Gamma| = {}, summed complex ranks {}",
            c_on.len(),
            sums[0]
        ),
    );
    push(
        checks,
        "c.iii/real",
        ok_sums && sums[1] == r_on.len(),
        format!(
            "|S_R,Gamma| = {}, summed real ranks {}",
            r_on.len(),
            sums[1]
        ),
    );
    Ok(())
}

pub fn classify(inst: &Instance) -> CaseReport {
    classify_with(inst, &Thresholds::default())
}

/// Hypotheses, detection, then case (a) on lines by count, case (b) on
/// conics, case (c) on disjoint pairs. All verdicts are kept; the headline is
/// the first passing one.
pub fn classify_with(inst: &Instance, thresholds: &Thresholds) -> CaseReport {
    let mut report = CaseReport {
        m: inst.m,
        d: inst.d,
        seed: inst.seed,
        expected_case: inst.case_label,
        validation: validate(inst),
        hypotheses: Vec::new(),
        rank_hypotheses: rank_backing(inst),
        h1_total: None,
        detected: None,
        verdicts: Vec::new(),
        passing_cases: Vec::new(),
        headline: None,
        overall: Overall::InvalidInput,
        notes: Vec::new(),
    };
    if report.validation.iter().any(|c| !c.passed) {
        report.notes.push("input validation failed".into());
        return report;
    }
    match check_hypotheses(inst) {
        Ok((checks, h1)) => {
            report.hypotheses = checks;
            report.h1_total = Some(h1);
        }
        Err(e) => {
            report
                .notes
                .push(format!("hypothesis checks failed to run: {e}"));
            return report;
        }
    }
    if report.hypotheses.iter().any(|c| !c.passed) {
        report.overall = Overall::OutsideScope;
        report
            .notes
            .push("theorem hypotheses do not hold: input outside theorem scope".into());
        return report;
    }
    let det = match detect_structure(inst, thresholds) {
        Ok(det) => det,
        Err(e) => {
            report.overall = Overall::Fail;
            report
                .notes
                .push(format!("structure detection failed: {e}"));
            return report;
        }
    };
    for c in &det.lines {
        if let CurveSpec::Line { line } = &c.curve {
            report.verdicts.push(verify_case_a(inst, line));
        }
    }
    for c in &det.conics {
        report.verdicts.push(verify_case_b(inst, &c.curve));
    }
    for c in &det.line_pairs {
        if let CurveSpec::TwoDisjointLines { lines } = &c.curve {
            report.verdicts.push(verify_case_c(inst, lines));
        }
    }
    for v in report.verdicts.iter().filter(|v| v.passed) {
        if !report.passing_cases.contains(&v.case) {
            report.passing_cases.push(v.case);
        }
    }
    report.headline = report.verdicts.iter().find(|v| v.passed).map(|v| v.case);
    report.overall = if report.headline.is_some() {
        Overall::Pass
    } else if det.is_empty() {
        Overall::OutsideScope
    } else {
        Overall::Fail
    };
    report.detected = Some(det);
    report
}

fn rank_backing(inst: &Instance) -> String {
    if inst.certificates.is_empty() {
        return "assumed".into();
    }
    let status = |name: &str| inst.certificate(name).map(|c| c.status);
    match (status("global_minimality_C"), status("global_minimality_R")) {
        (Some(Status::Pass), Some(Status::Pass)) => "certified".into(),
        (Some(Status::Pass), _) => "complex side certified, real side structural-only".into(),
        _ => "structural-only".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::BinaryForm;
    use crate::factory::{generate, make_case_a, BinaryPart};
    use crate::scalar::Scalar;
    use num_traits::One;
    use proptest::prelude::*;

    fn pt(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_ints(c).unwrap()
    }

    fn worked() -> Instance {
        let f = HomogeneousForm::from_terms(
            2,
            3,
            [
                (vec![3, 0], Scalar::from_i64(2)),
                (vec![1, 2], Scalar::from_i64(-6)),
            ],
        )
        .unwrap();
        let part = BinaryPart::sylvester(&BinaryForm::from_form(&f).unwrap()).unwrap();
        let line = Line::through(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        make_case_a(
            2,
            3,
            &part,
            &PointSet::from_ints(2, &[&[0, 0, 1]]).unwrap(),
            &line,
        )
        .unwrap()
    }

    #[test]
    fn worked_instance_passes_case_a() {
        let inst = worked();
        let report = classify(&inst);
        assert_eq!(report.overall, Overall::Pass);
        assert_eq!(report.headline, Some(CaseLabel::A));
        assert!(report.h1_total.unwrap() >= 1);
        let v = &report.verdicts[0];
        for clause in ["a.i", "a.ii", "a.iii"] {
            assert_eq!(v.clause(clause), Some(true), "{clause}");
        }
        // P_l restricts to 2x³ − 6xy², normalized to leading coefficient 1.
        let pl = v.point("P_l[line]").unwrap().point().unwrap();
        let expected = HomogeneousForm::from_terms(
            3,
            3,
            [
                (vec![3, 0, 0], Scalar::one()),
                (vec![1, 2, 0], Scalar::from_i64(-3)),
            ],
        )
        .unwrap();
        assert_eq!(pl.form, expected);
        assert_eq!(
            report.rank_hypotheses,
            "complex side certified, real side structural-only"
        );
    }

    #[test]
    fn moved_off_line_point_breaks_a_i() {
        let mut inst = worked();
        let moved: Vec<ProjectivePoint> = inst
            .s_r
            .iter()
            .map(|p| {
                if *p == pt(&[0, 0, 1]) {
                    pt(&[1, 2, 3])
                } else {
                    p.clone()
                }
            })
            .collect();
        inst.s_r = PointSet::new(2, moved).unwrap();
        let line = Line::through(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        let v = verify_case_a(&inst, &line);
        assert_eq!(v.clause("a.i"), Some(false));
        assert!(!v.passed);
    }

    #[test]
    fn line_with_d_plus_one_points_fails_a_iii() {
        let inst = worked();
        let line = Line::through(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        assert_eq!(verify_case_a(&inst, &line).clause("a.iii"), Some(true));
        // Dropping one real point on the line leaves d+1 = 4 points there.
        let first = inst.s_r.iter().find(|p| line.contains(p)).unwrap().clone();
        let kept: Vec<ProjectivePoint> =
            inst.s_r.iter().filter(|p| **p != first).cloned().collect();
        let thin = Instance {
            s_r: PointSet::new(2, kept).unwrap(),
            ..inst
        };
        let v = verify_case_a(&thin, &line);
        assert_eq!(v.clause("a.iii"), Some(false));
    }

    #[test]
    fn reducible_branch_with_d_points_fails_b_iv() {
        let inst = generate(CaseLabel::B, 5, 2, 1).unwrap();
        let Some(CurveSpec::ReducibleConic { lines, .. }) = inst.curve.clone() else {
            panic!("odd seed gives a line pair")
        };
        // Remove two real points from the first branch: it keeps 2 + (d−2) = d points off the node.
        let mut dropped = 0;
        let kept: Vec<ProjectivePoint> = inst
            .s_r
            .iter()
            .filter(|p| {
                if dropped < 2 && lines[0].contains(p) {
                    dropped += 1;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        let thin = Instance {
            s_r: PointSet::new(inst.m, kept).unwrap(),
            ..inst.clone()
        };
        let v = verify_case_b(&thin, inst.curve.as_ref().unwrap());
        assert_eq!(v.clause("b.iv"), Some(false));
        let v = verify_case_b(&inst, inst.curve.as_ref().unwrap());
        assert!(v.passed, "{:?}", v.conditions);
    }

    #[test]
    fn equal_sizes_are_outside_scope() {
        // A random real cubic in the plane with the same five points on both sides.
        let s = PointSet::from_ints(
            2,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 2, 3]],
        )
        .unwrap();
        let pts: Vec<&ProjectivePoint> = s.iter().collect();
        let coeffs: Vec<Scalar> = [1, -2, 3, 1, -1]
            .iter()
            .map(|&c| Scalar::from_i64(c))
            .collect();
        let p = combine_points(&pts, &coeffs, 3).unwrap();
        let report = classify(&Instance::raw(2, 3, p, s.clone(), s));
        assert_eq!(report.overall, Overall::OutsideScope);
        assert_eq!(report.rank_hypotheses, "assumed");
        assert!(
            !report
                .hypotheses
                .iter()
                .find(|c| c.name == "rank_inequality")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn empty_complex_set_is_invalid() {
        let inst = worked();
        let report = classify(&Instance {
            s_c: PointSet::empty(2),
            ..inst
        });
        assert_eq!(report.overall, Overall::InvalidInput);
        assert!(report
            .validation
            .iter()
            .any(|c| c.name == "S_C_nonempty" && !c.passed));
    }

    #[test]
    fn exclusion_note_for_two_thin_lines() {
        // Two skew lines of P^3 with d+1 = 4 points each.
        let l: Vec<ProjectivePoint> = (0..4).map(|j| pt(&[1, j, 0, 0])).collect();
        let r: Vec<ProjectivePoint> = (0..4).map(|j| pt(&[0, 0, 1, j])).collect();
        let s_r = PointSet::new(3, l.iter().chain(&r).cloned().collect()).unwrap();
        let inst = Instance::raw(3, 3, HomogeneousForm::zero(4, 3), PointSet::empty(3), s_r);
        let det = detect_structure(&inst, &Thresholds::default()).unwrap();
        assert!(det.line_pairs.is_empty() && det.lines.is_empty());
        assert!(
            det.notes
                .iter()
                .any(|n| n.contains("excluded configuration")),
            "{:?}",
            det.notes
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let inst = generate(CaseLabel::C, 5, 3, 3).unwrap();
        let a = classify(&inst).to_json().unwrap();
        let b = classify(&inst).to_json().unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]
        /// Round trip: factory instances pass with their own case label, and
        /// every intersection point is real.
        #[test]
        fn factory_round_trip(seed in 0u64..500, case_idx in 0usize..3, d in 3u32..6, m in 2usize..4) {
            let case = CaseLabel::ALL[case_idx];
            prop_assume!(crate::factory::check_parameters(case, d, m).is_ok());
            let inst = generate(case, d, m, seed).unwrap();
            let report = classify(&inst);
            prop_assert_eq!(report.overall, Overall::Pass);
            prop_assert!(report.passing_cases.contains(&case));
            for v in report.verdicts.iter().filter(|v| v.passed) {
                prop_assert!(v.points.iter().all(|p| p.intersection.point().is_some_and(|q| q.real)));
                prop_assert_ne!(&v.lemma_c2, &Some(LemmaC2::Conclusion { equal: false }));
            }
        }
    }
}
