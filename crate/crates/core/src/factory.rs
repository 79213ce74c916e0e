//! Ground-truth instances for the three cases of the real/complex rank
//! structure theorem. A curve part carries a binary form whose complex and
//! real decompositions differ in size; shared off-curve points complete `P`.
//! Every certificate is recomputed from the assembled data.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binary::{
    complex_rank, real_rank, BinaryDecomposition, BinaryForm, Minimality, Support,
};
use crate::curves::{split_on_curve, Conic, ConicParametrization, CurveSpec, Line, Subspace};
use crate::error::{Error, Result};
use crate::form::{power_of_coords, HomogeneousForm};
use crate::linalg::ExactMatrix;
use crate::points::{PointSet, ProjectivePoint};
use crate::scalar::{rat, Scalar};
use crate::spans::{
    catalecticant_bound, combine_points, h1_ideal, intersect_with_points, lemma_c2_check,
    point_generators, span_coefficients, spans_disjoint, unique_intersection_point, Field,
    Generator, Intersection, LemmaC2,
};

/// Largest `d` accepted; conic parts become binary forms of degree `2d`.
pub const MAX_D: u32 = 8;
const ATTEMPTS: usize = 200;
/// Whole-instance retries in `generate` after a failed certificate.
const RETRIES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseLabel {
    A,
    B,
    C,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 3] = [CaseLabel::A, CaseLabel::B, CaseLabel::C];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::A => "a",
            CaseLabel::B => "b",
            CaseLabel::C => "c",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(CaseLabel::A),
            "b" => Ok(CaseLabel::B),
            "c" => Ok(CaseLabel::C),
            _ => Err(Error::Parse(format!(
                "unknown case {s:?}, expected a, b or c"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Holds by construction but is not certified by an exact lower bound.
    StructuralOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Certificate {
    fn new(name: &str, status: Status, detail: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }
}

/// `P` with a complex and a real decomposition. Factory output fills every
/// field; a raw triple leaves the optional ones empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub m: usize,
    pub d: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub case_label: Option<CaseLabel>,
    #[serde(rename = "P")]
    pub p: HomogeneousForm,
    #[serde(rename = "S_C")]
    pub s_c: PointSet,
    #[serde(rename = "S_R")]
    pub s_r: PointSet,
    /// Coefficients of `P` on the powers of `S_C`, in its order.
    #[serde(default)]
    pub coeffs_c: Vec<Scalar>,
    #[serde(default)]
    pub coeffs_r: Vec<Scalar>,
    /// Signs of `coeffs_r`. Scales stay in the coefficients: absorbing them
    /// into the points would need `d`-th roots.
    #[serde(default)]
    pub signs_r: Vec<i8>,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub certificates: Vec<Certificate>,
}

impl Instance {
    /// A triple without ground truth.
    pub fn raw(m: usize, d: u32, p: HomogeneousForm, s_c: PointSet, s_r: PointSet) -> Self {
        Instance {
            m,
            d,
            seed: None,
            case_label: None,
            p,
            s_c,
            s_r,
            coeffs_c: Vec::new(),
            coeffs_r: Vec::new(),
            signs_r: Vec::new(),
            curve: None,
            certificates: Vec::new(),
        }
    }

    pub fn certificate(&self, name: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// A real binary form with exact complex and real decompositions.
#[derive(Clone, Debug)]
pub struct BinaryPart {
    pub form: BinaryForm,
    pub complex: BinaryDecomposition,
    pub real: BinaryDecomposition,
}

impl BinaryPart {
    /// Both decompositions from the rank engines; their supports must be exact.
    pub fn sylvester(form: &BinaryForm) -> Result<Self> {
        let complex = complex_rank(form)?;
        let real = real_rank(form)?;
        for dec in [&complex, &real] {
            exact_support(dec)?;
        }
        Ok(BinaryPart {
            form: form.clone(),
            complex,
            real,
        })
    }
}

/// `α(x+βy)^k + ᾱ(x+β̄y)^k`. For non-real `β` and `k ≥ 3` its complex rank
/// is 2 and its real rank is `k`.
pub fn conjugate_pair_form(alpha: &Scalar, beta: &Scalar, k: u32) -> Result<BinaryForm> {
    let mut c = Vec::with_capacity(k as usize + 1);
    let (mut pb, mut pc) = (Scalar::one(), Scalar::one());
    let ac = alpha.conj();
    let bc = beta.conj();
    for _ in 0..=k {
        c.push(&(alpha * &pb) + &(&ac * &pc));
        pb = &pb * beta;
        pc = &pc * &bc;
    }
    BinaryForm::from_scaled(c)
}

fn exact_support(dec: &BinaryDecomposition) -> Result<(&[ProjectivePoint], &[Scalar])> {
    match &dec.support {
        Support::Exact { points, coeffs } => Ok((points, coeffs)),
        Support::Implicit { .. } => Err(Error::constraint(
            "binary_ranks",
            "decomposition support is only known through isolating boxes",
        )),
    }
}

/// Real points whose Veronese images span `⟨ν_d(curve)⟩`: `d+1` per line,
/// `2d+1` on a smooth conic (via `param`), and the node plus `d` points per
/// branch on a line pair.
pub fn curve_sample(
    curve: &CurveSpec,
    d: u32,
    param: Option<&ConicParametrization>,
) -> Result<PointSet> {
    let k = d as usize;
    let pts = match curve {
        CurveSpec::Line { line } => line.sample(k + 1)?,
        CurveSpec::SmoothConic { .. } => {
            let param = param.ok_or_else(|| {
                Error::DegenerateParametrization("smooth conic needs a parametrization".into())
            })?;
            param.sample(2 * k + 1)?
        }
        CurveSpec::ReducibleConic { lines, .. } => {
            let node = lines[0]
                .meet(&lines[1])?
                .ok_or_else(|| Error::InvalidInput("branches do not meet".into()))?;
            let mut pts = vec![node.clone()];
            for l in lines {
                pts.extend(l.sample(k + 2)?.into_iter().filter(|p| *p != node).take(k));
            }
            pts
        }
        CurveSpec::TwoDisjointLines { lines } => {
            let mut pts = lines[0].sample(k + 1)?;
            pts.extend(lines[1].sample(k + 1)?);
            pts
        }
    };
    PointSet::new(curve.m(), pts)
}

/// A rational map ℙ¹ → curve together with the restriction carrying forms in
/// the span of the curve's Veronese image to binary forms.
#[derive(Clone, Debug)]
enum Chart {
    Line(Line),
    Conic(ConicParametrization),
}

impl Chart {
    fn point_at(&self, s: &Scalar, t: &Scalar) -> Result<ProjectivePoint> {
        match self {
            Chart::Line(l) => l.point_at(s, t),
            Chart::Conic(c) => c.point_at(s, t),
        }
    }

    fn restrict(&self, f: &HomogeneousForm) -> Result<BinaryForm> {
        BinaryForm::from_form(&match self {
            Chart::Line(l) => l.restrict(f)?,
            Chart::Conic(c) => c.restrict(f)?,
        })
    }

    fn binary_degree(&self, d: u32) -> u32 {
        match self {
            Chart::Line(_) => d,
            Chart::Conic(_) => 2 * d,
        }
    }

    /// The curve point over `bp ∈ ℙ¹` and `κ` with
    /// `restrict((pt·x)^d) = κ·(a·u + b·v)^D`.
    fn push(&self, bp: &ProjectivePoint, d: u32) -> Result<(ProjectivePoint, Scalar)> {
        let pt = self.point_at(&bp.coords()[0], &bp.coords()[1])?;
        let image = self.restrict(&power_of_coords(pt.coords(), d)?)?;
        let expected = BinaryForm::power_of_point(bp, self.binary_degree(d))?;
        let k = expected
            .scaled()
            .iter()
            .position(|c| !c.is_zero())
            .expect("a pure power is nonzero");
        let kappa = &image.scaled()[k] / &expected.scaled()[k];
        let carried = !kappa.is_zero()
            && image
                .scaled()
                .iter()
                .zip(expected.scaled())
                .all(|(x, y)| *x == &kappa * y);
        if !carried {
            return Err(Error::DegenerateParametrization(
                "restriction does not carry pure powers to pure powers".into(),
            ));
        }
        Ok((pt, kappa))
    }
}

/// The part of the construction supported on one line or conic.
#[derive(Clone, Debug)]
struct CurvePart {
    name: &'static str,
    chart: Chart,
    complex: Vec<ProjectivePoint>,
    real: Vec<ProjectivePoint>,
    /// The part's summand of `P`, in `⟨ν_d(curve)⟩`.
    form: HomogeneousForm,
}

impl CurvePart {
    fn from_binary(
        name: &'static str,
        chart: Chart,
        part: &BinaryPart,
        m: usize,
        d: u32,
    ) -> Result<Self> {
        if part.form.degree() != chart.binary_degree(d) {
            return Err(Error::InvalidInput(format!(
                "binary form on {name} has degree {}, expected {}",
                part.form.degree(),
                chart.binary_degree(d)
            )));
        }
        let (cpts, ccoef) = exact_support(&part.complex)?;
        let (rpts, _) = exact_support(&part.real)?;
        let mut form = HomogeneousForm::zero(m + 1, d);
        let mut complex = Vec::new();
        for (bp, l) in cpts.iter().zip(ccoef) {
            let (pt, kappa) = chart.push(bp, d)?;
            form = form.add(&power_of_coords(pt.coords(), d)?.scale(&(l / &kappa)))?;
            complex.push(pt);
        }
        let real = rpts
            .iter()
            .map(|bp| chart.push(bp, d).map(|(pt, _)| pt))
            .collect::<Result<Vec<_>>>()?;
        if chart.restrict(&form)? != part.form {
            return Err(Error::DegenerateParametrization(format!(
                "embedding on {name} does not restrict back"
            )));
        }
        Ok(CurvePart {
            name,
            chart,
            complex,
            real,
            form,
        })
    }

    /// A conjugate-pair form on the chart with an exact real decomposition
    /// of full size. Points in `avoid` are never used.
    fn random(
        rng: &mut ChaCha8Rng,
        name: &'static str,
        chart: Chart,
        d: u32,
        avoid: &[ProjectivePoint],
    ) -> Result<Self> {
        for _ in 0..ATTEMPTS {
            let beta = Scalar::new(small_rational(rng, 3, 2), nonzero_rational(rng, 3, 2));
            let alpha = nonzero_gaussian(rng, 3);
            let pc = chart.point_at(&Scalar::one(), &beta)?;
            let pcc = pc.conjugate();
            let form = combine_points(&[&pc, &pcc], &[alpha.clone(), alpha.conj()], d)?;
            let binary = chart.restrict(&form)?;
            let Some(params) = apolar_real_points(rng, &binary) else {
                continue;
            };
            let real = params
                .iter()
                .map(|[s, t]| chart.point_at(s, t))
                .collect::<Result<Vec<_>>>()?;
            if real.iter().any(|p| avoid.contains(p)) {
                continue;
            }
            return Ok(CurvePart {
                name,
                chart,
                complex: vec![pc, pcc],
                real,
                form,
            });
        }
        Err(Error::SearchExhausted(format!(
            "no admissible gap form on {name}"
        )))
    }
}

/// `D` distinct real points of ℙ¹ whose `D`-th powers span `f` (degree `D`):
/// `D−1` random rational roots, the last one forced by the single apolarity
/// condition `Σ c_j g_j = 0`.
fn apolar_real_points(rng: &mut ChaCha8Rng, f: &BinaryForm) -> Option<Vec<[Scalar; 2]>> {
    let dd = f.degree() as usize;
    let c = f.scaled();
    let mut roots: Vec<BigRational> = Vec::with_capacity(dd);
    while roots.len() + 1 < dd {
        let r = small_rational(rng, 9, 3);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    // e = Π (u − r_i), from the constant term up.
    let mut e = vec![Scalar::one()];
    for r in &roots {
        let r = Scalar::real(r.clone());
        let mut next = vec![Scalar::zero(); e.len() + 1];
        for (j, ej) in e.iter().enumerate() {
            next[j + 1] += ej;
            next[j] -= &(ej * &r);
        }
        e = next;
    }
    // The chart polynomial e·(a + b·u) is apolar iff a·A + b·B = 0.
    let a_sum = e
        .iter()
        .zip(c)
        .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y));
    let b_sum = e
        .iter()
        .zip(&c[1..])
        .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y));
    let mut pts: Vec<[Scalar; 2]> = roots
        .iter()
        .map(|r| [Scalar::one(), Scalar::real(r.clone())])
        .collect();
    if a_sum.is_zero() {
        if b_sum.is_zero() {
            return None;
        }
        pts.push([Scalar::zero(), Scalar::one()]);
    } else {
        let u = &b_sum / &a_sum;
        if !u.is_real() || roots.contains(u.re()) {
            return None;
        }
        pts.push([Scalar::one(), u]);
    }
    Some(pts)
}

fn small_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn nonzero_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    let n = rng.gen_range(1..=num) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(n, rng.gen_range(1..=den))
}

fn nonzero_gaussian(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    loop {
        let z = Scalar::gaussian(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if !z.is_zero() {
            return z;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, m: usize, bound: i64) -> ProjectivePoint {
    loop {
        let c: Vec<i64> = (0..=m).map(|_| rng.gen_range(-bound..=bound)).collect();
        if let Ok(p) = ProjectivePoint::from_ints(&c) {
            return p;
        }
    }
}

/// `k` random real points whose span has full rank `k`.
fn independent_points(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Result<Vec<ProjectivePoint>> {
    for _ in 0..ATTEMPTS {
        let pts: Vec<ProjectivePoint> = (0..k).map(|_| random_point(rng, m, 3)).collect();
        let refs: Vec<&ProjectivePoint> = pts.iter().collect();
        if Subspace::span_points(&refs)?.rank() == k {
            return Ok(pts);
        }
    }
    Err(Error::SearchExhausted(format!(
        "no {k} independent points in P^{m}"
    )))
}

fn random_line(rng: &mut ChaCha8Rng, m: usize) -> Result<Line> {
    let p = independent_points(rng, m, 2)?;
    Line::through(&p[0], &p[1])
}

/// A smooth real conic `T^{-T}·A₀·T^{-1}` on a random plane, where `A₀` is
/// `q₀q₂ − q₁²`, with the parametrization `q = T·(s², st, t²)`.
fn random_conic(rng: &mut ChaCha8Rng, m: usize) -> Result<ConicParametrization> {
    let pts = independent_points(rng, m, 3)?;
    let refs: Vec<&ProjectivePoint> = pts.iter().collect();
    let plane = Subspace::span_points(&refs)?;
    let half = Scalar::from_ratio(1, 2);
    let a0 = ExactMatrix::from_rows(vec![
        vec![Scalar::zero(), Scalar::zero(), half.clone()],
        vec![Scalar::zero(), Scalar::from_i64(-1), Scalar::zero()],
        vec![half, Scalar::zero(), Scalar::zero()],
    ])?;
    for _ in 0..ATTEMPTS {
        let rows = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| Scalar::from_i64(rng.gen_range(-2..=2)))
                    .collect()
            })
            .collect();
        let t = ExactMatrix::from_rows(rows)?;
        if t.determinant()?.is_zero() {
            continue;
        }
        let ti = t.inverse()?;
        let a = ti.transpose().mul(&a0)?.mul(&ti)?;
        let matrix: [[Scalar; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| a.get(i, j).clone()));
        let conic = Conic::new(plane.clone(), matrix)?;
        return ConicParametrization::new(conic, t);
    }
    Err(Error::SearchExhausted(
        "no invertible conic transform".into(),
    ))
}

/// Random off-curve real points, resampled until the genericity
/// certificates hold against `sample`.
fn random_off_curve(
    rng: &mut ChaCha8Rng,
    m: usize,
    k: usize,
    curve: &CurveSpec,
    sample: &PointSet,
    d: u32,
) -> Result<PointSet> {
    for _ in 0..ATTEMPTS {
        let mut e = PointSet::empty(m);
        while e.len() < k {
            let p = random_point(rng, m, 4);
            if !curve.contains(&p) {
                e.insert(p)?;
            }
        }
        if h1_ideal(&e.union(sample)?, d)?.h1 == 0 {
            return Ok(e);
        }
    }
    Err(Error::SearchExhausted("no generic off-curve points".into()))
}

fn check(certs: &mut Vec<Certificate>, name: &str, ok: bool, detail: String) -> Result<()> {
    if !ok {
        return Err(Error::constraint(name, detail));
    }
    certs.push(Certificate::new(name, Status::Pass, detail));
    Ok(())
}

fn intersection_detail(i: &Intersection) -> (bool, String) {
    match i {
        Intersection::Point(p) => (p.real, format!("unique point, real = {}", p.real)),
        Intersection::NotUnique { dim } => (
            false,
            format!("intersection has projective dimension {dim}"),
        ),
    }
}

/// Builds `P`, both point sets and every certificate from the curve parts and
/// the shared off-curve points `e`.
fn assemble(
    m: usize,
    d: u32,
    label: CaseLabel,
    curve: CurveSpec,
    parts: Vec<CurvePart>,
    e: PointSet,
    sample: PointSet,
) -> Result<Instance> {
    let mut certs = Vec::new();
    let dup = |err: Error| Error::constraint("distinct_points", err.to_string());
    let s_c = PointSet::new(
        m,
        parts
            .iter()
            .flat_map(|p| p.complex.iter().cloned())
            .chain(e.iter().cloned())
            .collect(),
    )
    .map_err(dup)?;
    let s_r = PointSet::new(
        m,
        parts
            .iter()
            .flat_map(|p| p.real.iter().cloned())
            .chain(e.iter().cloned())
            .collect(),
    )
    .map_err(dup)?;
    let (nc, nr) = (s_c.len(), s_r.len());
    let bound = 3 * d as usize - 1;
    check(
        &mut certs,
        "budget",
        nc + nr <= bound,
        format!("{nc} + {nr} = {} against the bound 3d-1 = {bound}", nc + nr),
    )?;

    let union = s_c.union(&s_r)?;
    let k = d as usize;
    match &curve {
        CurveSpec::Line { line } => {
            let n = union.iter().filter(|p| line.contains(p)).count();
            check(
                &mut certs,
                "a.iii",
                n >= k + 2,
                format!("{n} points on the line, need at least d+2 = {}", k + 2),
            )?;
        }
        CurveSpec::SmoothConic { conic } => {
            let n = union.iter().filter(|p| conic.contains(p)).count();
            check(
                &mut certs,
                "b.iii",
                n >= 2 * k + 2,
                format!(
                    "{n} points on the conic, need at least 2d+2 = {}",
                    2 * k + 2
                ),
            )?;
        }
        CurveSpec::ReducibleConic { conic, lines } => {
            let n = union.iter().filter(|p| conic.contains(p)).count();
            check(
                &mut certs,
                "b.iii",
                n >= 2 * k + 2,
                format!(
                    "{n} points on the conic, need at least 2d+2 = {}",
                    2 * k + 2
                ),
            )?;
            let node = lines[0]
                .meet(&lines[1])?
                .ok_or_else(|| Error::InvalidInput("branches do not meet".into()))?;
            let counts: Vec<usize> = lines
                .iter()
                .map(|l| {
                    union
                        .iter()
                        .filter(|p| l.contains(p) && **p != node)
                        .count()
                })
                .collect();
            check(
                &mut certs,
                "b.iv",
                counts.iter().all(|&c| c >= k + 1),
                format!(
                    "off-node branch counts {counts:?}, need at least d+1 = {} each",
                    k + 1
                ),
            )?;
        }
        CurveSpec::TwoDisjointLines { lines } => {
            let counts: Vec<usize> = lines
                .iter()
                .map(|l| union.iter().filter(|p| l.contains(p)).count())
                .collect();
            check(
                &mut certs,
                "c.ii",
                counts.iter().all(|&c| c >= k + 2),
                format!("line counts {counts:?}, need at least d+2 = {} each", k + 2),
            )?;
        }
    }
    check(
        &mut certs,
        "rank_gap",
        nc < nr,
        format!("|S_C| = {nc} < |S_R| = {nr}"),
    )?;

    check(
        &mut certs,
        "off_curve_real",
        e.is_real() && e.iter().all(|p| !curve.contains(p)),
        format!("{} shared points off the curve", e.len()),
    )?;
    let (_, off_c) = split_on_curve(&s_c, &curve)?;
    let (_, off_r) = split_on_curve(&s_r, &curve)?;
    check(
        &mut certs,
        "off_curve_agreement",
        off_c.same_set(&off_r),
        format!("{} points on both sides", off_c.len()),
    )?;

    let mut p = HomogeneousForm::zero(m + 1, d);
    for part in &parts {
        p = p.add(&part.form)?;
    }
    for q in e.iter() {
        p = p.add(&power_of_coords(q.coords(), d)?)?;
    }
    check(
        &mut certs,
        "P_real",
        p.is_real(),
        "all coefficients of P are real".into(),
    )?;

    let mut coeffs = Vec::new();
    for (name, s, field) in [
        ("membership_C", &s_c, Field::Complex),
        ("membership_R", &s_r, Field::Real),
    ] {
        let lambda = span_coefficients(&p, s, d, field)?;
        let exact = lambda.as_ref().is_some_and(|l| {
            let pts: Vec<&ProjectivePoint> = s.iter().collect();
            combine_points(&pts, l, d).is_ok_and(|q| q == p)
        });
        let full = lambda
            .as_ref()
            .is_some_and(|l| l.iter().all(|c| !c.is_zero()));
        check(
            &mut certs,
            name,
            exact && full,
            format!("P is an exact combination of all {} powers", s.len()),
        )?;
        coeffs.push(lambda.expect("checked"));
    }
    let coeffs_r = coeffs.pop().expect("two entries");
    let coeffs_c = coeffs.pop().expect("two entries");

    for part in &parts {
        let f = part.chart.restrict(&part.form)?;
        let rc = complex_rank(&f)?;
        let rr = real_rank(&f)?;
        let name = format!("binary_ranks[{}]", part.name);
        let sizes_match = rc.rank == part.complex.len() && rr.rank == part.real.len();
        if !sizes_match {
            return Err(Error::constraint(
                &name,
                format!(
                    "ranks ({}, {}) but sets of size ({}, {})",
                    rc.rank,
                    rr.rank,
                    part.complex.len(),
                    part.real.len()
                ),
            ));
        }
        let status = match rr.minimality {
            Some(Minimality::Exact) => Status::Pass,
            _ => Status::StructuralOnly,
        };
        certs.push(Certificate::new(
            &name,
            status,
            format!(
                "r_C = {}, r_R = {} on a binary form of degree {}",
                rc.rank,
                rr.rank,
                f.degree()
            ),
        ));
    }

    check(
        &mut certs,
        "span_disjoint",
        spans_disjoint(&e, &sample, d)?,
        "<nu_d(E)> meets <nu_d(curve)> nowhere".into(),
    )?;
    let h1 = h1_ideal(&e.union(&sample)?, d)?.h1;
    check(
        &mut certs,
        "h1_generic",
        h1 == 0,
        format!(
            "h1 of E plus {} spanning curve points is {h1}",
            sample.len()
        ),
    )?;
    match lemma_c2_check(&s_c, &s_r, &curve, d)? {
        LemmaC2::Conclusion { equal } => check(
            &mut certs,
            "lemma_c2",
            equal,
            format!(
                "hypothesis holds in degree {}, agreement = {equal}",
                d - curve.degree()
            ),
        )?,
        LemmaC2::HypothesisFails { h1 } => certs.push(Certificate::new(
            "lemma_c2",
            Status::StructuralOnly,
            format!(
                "hypothesis fails in degree {} (h1 = {h1})",
                d - curve.degree()
            ),
        )),
    }

    let curve_point = unique_intersection_point(&p, &e, &sample, d)?;
    match &curve {
        CurveSpec::TwoDisjointLines { lines } => {
            let (ok, detail) = intersection_detail(&curve_point);
            check(&mut certs, "O_Gamma", ok, detail)?;
            let o = curve_point.point().expect("checked").form.clone();
            let per_line: Vec<PointSet> = lines
                .iter()
                .map(|l| sample.filter(|q| l.contains(q)))
                .collect();
            for (i, name) in [(0, "O_l"), (1, "O_r")] {
                let other = &per_line[1 - i];
                let mut u = vec![Generator::Form(&o)];
                u.extend(point_generators(other));
                let t: Vec<&ProjectivePoint> = per_line[i].iter().collect();
                let (ok, detail) = intersection_detail(&intersect_with_points(&u, &t, d)?);
                check(&mut certs, name, ok, detail)?;
            }
        }
        _ => {
            let (ok, detail) = intersection_detail(&curve_point);
            check(&mut certs, "curve_point", ok, detail)?;
        }
    }

    let cat = catalecticant_bound(&p)?;
    let status = if cat == nc {
        Status::Pass
    } else if cat < nc {
        Status::StructuralOnly
    } else {
        Status::Fail
    };
    certs.push(Certificate::new(
        "global_minimality_C",
        status,
        format!("catalecticant bound {cat}, |S_C| = {nc}"),
    ));
    certs.push(Certificate::new(
        "global_minimality_R",
        Status::StructuralOnly,
        "real rank certified on the curve parts only".to_string(),
    ));

    let signs_r = coeffs_r
        .iter()
        .map(|c| if c.re().is_positive() { 1 } else { -1 })
        .collect();
    Ok(Instance {
        m,
        d,
        seed: None,
        case_label: Some(label),
        p,
        s_c,
        s_r,
        coeffs_c,
        coeffs_r,
        signs_r,
        curve: Some(curve),
        certificates: certs,
    })
}

fn check_common(m: usize, d: u32, e: &PointSet) -> Result<()> {
    if !(3..=MAX_D).contains(&d) {
        return Err(Error::InvalidInput(format!("d = {d} outside 3..={MAX_D}")));
    }
    if m < 2 {
        return Err(Error::InvalidInput(
            "instances live in P^m with m >= 2".into(),
        ));
    }
    if e.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            found: e.m() + 1,
        });
    }
    if !e.is_real() {
        return Err(Error::NonReal("off-curve points".into()));
    }
    Ok(())
}

fn check_line(m: usize, line: &Line) -> Result<()> {
    if line.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            found: line.m() + 1,
        });
    }
    if !line.is_real() {
        return Err(Error::NonReal("line".into()));
    }
    Ok(())
}

/// Case (a): the binary part embedded on `line`, plus `(e·x)^d` for each `e ∈ E`.
pub fn make_case_a(
    m: usize,
    d: u32,
    part: &BinaryPart,
    e: &PointSet,
    line: &Line,
) -> Result<Instance> {
    check_common(m, d, e)?;
    check_line(m, line)?;
    let curve = CurveSpec::line(line.clone());
    let parts = vec![CurvePart::from_binary(
        "line",
        Chart::Line(line.clone()),
        part,
        m,
        d,
    )?];
    let sample = curve_sample(&curve, d, None)?;
    assemble(m, d, CaseLabel::A, curve, parts, e.clone(), sample)
}

/// Case (b) on a smooth conic: `part` has degree `2d` and is pushed forward
/// through `param`.
pub fn make_case_b(
    m: usize,
    d: u32,
    part: &BinaryPart,
    e: &PointSet,
    param: &ConicParametrization,
) -> Result<Instance> {
    check_common(m, d, e)?;
    if param.conic().plane().ambient() != m + 1 {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            found: param.conic().plane().ambient(),
        });
    }
    let curve = CurveSpec::smooth_conic(param.conic().clone())?;
    if !curve.is_real() {
        return Err(Error::NonReal("conic".into()));
    }
    let parts = vec![CurvePart::from_binary(
        "conic",
        Chart::Conic(param.clone()),
        part,
        m,
        d,
    )?];
    let sample = curve_sample(&curve, d, Some(param))?;
    assemble(m, d, CaseLabel::B, curve, parts, e.clone(), sample)
}

/// Case (b) on the reducible conic `lines[0] ∪ lines[1]`, one part per branch.
pub fn make_case_b_reducible(
    m: usize,
    d: u32,
    parts: [&BinaryPart; 2],
    e: &PointSet,
    lines: [&Line; 2],
) -> Result<Instance> {
    check_common(m, d, e)?;
    for l in lines {
        check_line(m, l)?;
    }
    let curve = CurveSpec::reducible_conic(lines[0].clone(), lines[1].clone())?;
    let built = vec![
        CurvePart::from_binary("branch_1", Chart::Line(lines[0].clone()), parts[0], m, d)?,
        CurvePart::from_binary("branch_2", Chart::Line(lines[1].clone()), parts[1], m, d)?,
    ];
    let sample = curve_sample(&curve, d, None)?;
    assemble(m, d, CaseLabel::B, curve, built, e.clone(), sample)
}

/// Case (c) on two disjoint lines, which needs `m ≥ 3`.
pub fn make_case_c(
    m: usize,
    d: u32,
    parts: [&BinaryPart; 2],
    e: &PointSet,
    lines: [&Line; 2],
) -> Result<Instance> {
    if m < 3 {
        return Err(Error::constraint(
            "disjoint_lines",
            format!("two lines in P^{m} always meet; case (c) needs m >= 3"),
        ));
    }
    check_common(m, d, e)?;
    for l in lines {
        check_line(m, l)?;
    }
    if lines[0].meet(lines[1])?.is_some() {
        return Err(Error::constraint("disjoint_lines", "the two lines meet"));
    }
    let curve = CurveSpec::two_disjoint_lines(lines[0].clone(), lines[1].clone())?;
    let built = vec![
        CurvePart::from_binary("line_1", Chart::Line(lines[0].clone()), parts[0], m, d)?,
        CurvePart::from_binary("line_2", Chart::Line(lines[1].clone()), parts[1], m, d)?,
    ];
    let sample = curve_sample(&curve, d, None)?;
    assemble(m, d, CaseLabel::C, curve, built, e.clone(), sample)
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-call stream seed, so batches agree regardless of scheduling.
fn derive_seed(seed: u64, case: CaseLabel, d: u32, m: usize) -> u64 {
    [case as u64, d as u64, m as u64]
        .iter()
        .fold(splitmix(seed), |h, &v| splitmix(h ^ v))
}

/// Largest number of shared off-curve points within the `3d−1` budget.
fn max_off_curve(case: CaseLabel, d: u32, reducible: bool) -> usize {
    let d = d as usize;
    match case {
        // 2 + d + 2k ≤ 3d − 1
        CaseLabel::A => d - 2,
        // 2 + 2d + 2k ≤ 3d − 1
        CaseLabel::B if !reducible => (d - 3) / 2,
        // 4 + 2d + 2k ≤ 3d − 1
        _ => (d - 5) / 2,
    }
}

/// Whether `generate` supports the parameters; case (c) and the reducible
/// conic need `d ≥ 5` to fit two gaps of size `2 + d` in the budget.
pub fn check_parameters(case: CaseLabel, d: u32, m: usize) -> Result<()> {
    if !(3..=MAX_D).contains(&d) {
        return Err(Error::InvalidInput(format!("d = {d} outside 3..={MAX_D}")));
    }
    match case {
        CaseLabel::A | CaseLabel::B if m < 2 => {
            Err(Error::InvalidInput("cases (a) and (b) need m >= 2".into()))
        }
        CaseLabel::C if m < 3 => Err(Error::constraint(
            "disjoint_lines",
            format!("two lines in P^{m} always meet; case (c) needs m >= 3"),
        )),
        CaseLabel::C if d < 5 => Err(Error::constraint(
            "budget",
            format!(
                "two lines with at least d+2 points each need 2d+4 = {} > 3d-1 = {}",
                2 * d + 4,
                3 * d - 1
            ),
        )),
        _ => Ok(()),
    }
}

fn attempt(
    rng: &mut ChaCha8Rng,
    case: CaseLabel,
    d: u32,
    m: usize,
    reducible: bool,
) -> Result<Instance> {
    let k = rng.gen_range(0..=max_off_curve(case, d, reducible));
    let (curve, parts, param) = match case {
        CaseLabel::A => {
            let line = random_line(rng, m)?;
            let part = CurvePart::random(rng, "line", Chart::Line(line.clone()), d, &[])?;
            (CurveSpec::line(line), vec![part], None)
        }
        CaseLabel::B if !reducible => {
            let param = random_conic(rng, m)?;
            let part = CurvePart::random(rng, "conic", Chart::Conic(param.clone()), d, &[])?;
            (
                CurveSpec::smooth_conic(param.conic().clone())?,
                vec![part],
                Some(param),
            )
        }
        CaseLabel::B => {
            let pts = independent_points(rng, m, 3)?;
            let node = pts[0].clone();
            let l1 = Line::through(&pts[1], &node)?;
            let l2 = Line::through(&pts[2], &node)?;
            let avoid = [node];
            let p1 = CurvePart::random(rng, "branch_1", Chart::Line(l1.clone()), d, &avoid)?;
            let p2 = CurvePart::random(rng, "branch_2", Chart::Line(l2.clone()), d, &avoid)?;
            (CurveSpec::reducible_conic(l1, l2)?, vec![p1, p2], None)
        }
        CaseLabel::C => {
            let pts = independent_points(rng, m, 4)?;
            let l = Line::through(&pts[0], &pts[1])?;
            let r = Line::through(&pts[2], &pts[3])?;
            let p1 = CurvePart::random(rng, "line_1", Chart::Line(l.clone()), d, &[])?;
            let p2 = CurvePart::random(rng, "line_2", Chart::Line(r.clone()), d, &[])?;
            (CurveSpec::two_disjoint_lines(l, r)?, vec![p1, p2], None)
        }
    };
    let sample = curve_sample(&curve, d, param.as_ref())?;
    let e = random_off_curve(rng, m, k, &curve, &sample, d)?;
    assemble(m, d, case, curve, parts, e, sample)
}

/// A seeded instance of the given case. Identical arguments give identical
/// instances. Case (b) uses a line pair for odd seeds when `d ≥ 5` and a
/// smooth conic otherwise.
pub fn generate(case: CaseLabel, d: u32, m: usize, seed: u64) -> Result<Instance> {
    check_parameters(case, d, m)?;
    let reducible = case == CaseLabel::B && d >= 5 && seed % 2 == 1;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, case, d, m));
    let mut last = None;
    for _ in 0..RETRIES {
        match attempt(&mut rng, case, d, m, reducible) {
            Ok(mut inst) => {
                inst.seed = Some(seed);
                return Ok(inst);
            }
            Err(err @ Error::Constraint { .. }) => last = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::HomogeneousForm;
    use proptest::prelude::*;

    fn pt(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_ints(c).unwrap()
    }

    fn gaussian_pt(c: &[(i64, i64)]) -> ProjectivePoint {
        ProjectivePoint::new(c.iter().map(|&(a, b)| Scalar::gaussian(a, b)).collect()).unwrap()
    }

    fn binary(terms: &[(u32, i64)], d: u32) -> BinaryForm {
        let f = HomogeneousForm::from_terms(
            2,
            d,
            terms
                .iter()
                .map(|&(k, c)| (vec![d - k, k], Scalar::from_i64(c))),
        )
        .unwrap();
        BinaryForm::from_form(&f).unwrap()
    }

    fn z0_line() -> Line {
        Line::through(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap()
    }

    fn constraint_name(r: Result<Instance>) -> String {
        match r {
            Err(Error::Constraint { certificate, .. }) => certificate,
            other => panic!("expected a constraint error, got {other:?}"),
        }
    }

    #[test]
    fn worked_cubic_instance() {
        // 2x³ − 6xy² on z = 0 plus z³.
        let part = BinaryPart::sylvester(&binary(&[(0, 2), (2, -6)], 3)).unwrap();
        let e = PointSet::from_ints(2, &[&[0, 0, 1]]).unwrap();
        let inst = make_case_a(2, 3, &part, &e, &z0_line()).unwrap();
        let expected_p = HomogeneousForm::from_terms(
            3,
            3,
            [
                (vec![3, 0, 0], Scalar::from_i64(2)),
                (vec![1, 2, 0], Scalar::from_i64(-6)),
                (vec![0, 0, 3], Scalar::one()),
            ],
        )
        .unwrap();
        assert_eq!(inst.p, expected_p);
        let s_c = PointSet::new(
            2,
            vec![
                gaussian_pt(&[(1, 0), (0, 1), (0, 0)]),
                gaussian_pt(&[(1, 0), (0, -1), (0, 0)]),
                pt(&[0, 0, 1]),
            ],
        )
        .unwrap();
        let s_r =
            PointSet::from_ints(2, &[&[1, 0, 0], &[1, 1, 0], &[1, -1, 0], &[0, 0, 1]]).unwrap();
        assert!(inst.s_c.same_set(&s_c));
        assert!(inst.s_r.same_set(&s_r));
        assert!(inst.certificates.iter().all(|c| c.status != Status::Fail));
        assert_eq!(inst.certificate("a.iii").unwrap().status, Status::Pass);
        assert_eq!(
            inst.certificate("budget").unwrap().detail,
            "3 + 4 = 7 against the bound 3d-1 = 8"
        );
        assert_eq!(
            inst.certificate("binary_ranks[line]").unwrap().status,
            Status::Pass
        );
        // Catalecticant bound 3 meets |S_C|.
        assert_eq!(
            inst.certificate("global_minimality_C").unwrap().status,
            Status::Pass
        );
        assert_eq!(inst.signs_r.len(), 4);
    }

    #[test]
    fn instance_on_the_line_only() {
        let part = BinaryPart::sylvester(&binary(&[(0, 2), (2, -6)], 3)).unwrap();
        let inst = make_case_a(2, 3, &part, &PointSet::empty(2), &z0_line()).unwrap();
        assert_eq!((inst.s_c.len(), inst.s_r.len()), (2, 3));
        assert_eq!(
            inst.certificate("curve_point").unwrap().status,
            Status::Pass
        );
    }

    #[test]
    fn budget_violation_names_the_bound() {
        // x²y has complex and real rank 3.
        let part = BinaryPart::sylvester(&binary(&[(1, 1)], 3)).unwrap();
        assert_eq!((part.complex.rank, part.real.rank), (3, 3));
        let e = PointSet::from_ints(2, &[&[0, 0, 1], &[1, 1, 1]]).unwrap();
        let err = make_case_a(2, 3, &part, &e, &z0_line()).unwrap_err();
        assert!(err.to_string().contains("3d-1 = 8"), "{err}");
        assert!(err.to_string().contains("10"), "{err}");
        assert_eq!(err.kind(), "constraint");
    }

    #[test]
    fn case_c_errors() {
        assert_eq!(
            constraint_name(generate(CaseLabel::C, 5, 2, 1)),
            "disjoint_lines"
        );
        assert_eq!(constraint_name(generate(CaseLabel::C, 4, 3, 1)), "budget");
        let l = Line::through(&pt(&[1, 0, 0, 0]), &pt(&[0, 1, 0, 0])).unwrap();
        let r = Line::through(&pt(&[0, 0, 1, 0]), &pt(&[0, 0, 0, 1])).unwrap();
        let gap =
            BinaryPart::sylvester(&conjugate_pair_form(&Scalar::one(), &Scalar::i(), 5).unwrap())
                .unwrap();
        // x⁵ + y⁵ has the same two points on both sides.
        let flat = BinaryPart::sylvester(&binary(&[(0, 1), (5, 1)], 5)).unwrap();
        let err = make_case_c(3, 5, [&gap, &flat], &PointSet::empty(3), [&l, &r]);
        assert_eq!(constraint_name(err), "c.ii");
        let ok = make_case_c(3, 5, [&gap, &gap], &PointSet::empty(3), [&l, &r]).unwrap();
        for name in ["O_Gamma", "O_l", "O_r", "c.ii"] {
            assert_eq!(ok.certificate(name).unwrap().status, Status::Pass, "{name}");
        }
        let meeting = Line::through(&pt(&[1, 0, 0, 0]), &pt(&[0, 0, 1, 0])).unwrap();
        assert_eq!(
            constraint_name(make_case_c(
                3,
                5,
                [&gap, &gap],
                &PointSet::empty(3),
                [&l, &meeting]
            )),
            "disjoint_lines"
        );
    }

    #[test]
    fn conic_threshold_violation() {
        let param = ConicParametrization::new(
            Conic::in_plane_p2([
                [Scalar::zero(), Scalar::zero(), Scalar::from_ratio(1, 2)],
                [Scalar::zero(), Scalar::from_i64(-1), Scalar::zero()],
                [Scalar::from_ratio(1, 2), Scalar::zero(), Scalar::zero()],
            ])
            .unwrap(),
            ExactMatrix::identity(3),
        )
        .unwrap();
        let flat = BinaryPart::sylvester(&binary(&[(0, 1), (6, 1)], 6)).unwrap();
        assert_eq!(
            constraint_name(make_case_b(2, 3, &flat, &PointSet::empty(2), &param)),
            "b.iii"
        );
        let gap = BinaryPart::sylvester(
            &conjugate_pair_form(&Scalar::one(), &Scalar::gaussian(1, 1), 6).unwrap(),
        )
        .unwrap();
        let inst = make_case_b(2, 3, &gap, &PointSet::empty(2), &param).unwrap();
        assert_eq!((inst.s_c.len(), inst.s_r.len()), (2, 6));
        assert_eq!(
            inst.certificate("binary_ranks[conic]").unwrap().status,
            Status::Pass
        );
    }

    #[test]
    fn reducible_conic_instance() {
        // Both branches meet at [1:7:0], parameter [1:7] on each.
        let l1 = Line::through(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        let l2 = Line::through(&pt(&[1, 7, 0]), &pt(&[0, 1, 1])).unwrap();
        let gap = BinaryPart::sylvester(
            &conjugate_pair_form(&Scalar::one(), &Scalar::gaussian(1, 1), 5).unwrap(),
        )
        .unwrap();
        let inst =
            make_case_b_reducible(2, 5, [&gap, &gap], &PointSet::empty(2), [&l1, &l2]).unwrap();
        assert_eq!(inst.certificate("b.iv").unwrap().status, Status::Pass);
    }

    #[test]
    fn generation_is_deterministic() {
        for case in CaseLabel::ALL {
            let a = generate(case, 5, 3, 42).unwrap();
            let b = generate(case, 5, 3, 42).unwrap();
            assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
            assert_eq!(a.case_label, Some(case));
            assert_eq!(a.seed, Some(42));
        }
        assert_ne!(
            generate(CaseLabel::A, 4, 2, 1).unwrap(),
            generate(CaseLabel::A, 4, 2, 2).unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let inst = generate(CaseLabel::B, 3, 2, 7).unwrap();
        let back: Instance = serde_json::from_str(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);
        let one = r#"{"re": "1/1", "im": "0/1"}"#;
        let zero = r#"{"re": "0/1", "im": "0/1"}"#;
        let raw = format!(
            r#"{{"m": 1, "d": 2, "P": {{"m": 1, "d": 2, "terms": [{{"exp": [2, 0], "re": "1/1", "im": "0/1"}}]}},
            "S_C": {{"m": 1, "points": [[{one}, {zero}]]}}, "S_R": {{"m": 1, "points": [[{one}, {zero}]]}}}}"#
        );
        let inst: Instance = serde_json::from_str(&raw).unwrap();
        assert!(inst.curve.is_none() && inst.certificates.is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        /// Every emitted certificate passes or is flagged structural-only,
        /// and the budget and rank gap hold.
        #[test]
        fn generated_certificates_hold(seed in 0u64..1000, case_idx in 0usize..3, d in 3u32..7, m in 2usize..5) {
            let case = CaseLabel::ALL[case_idx];
            prop_assume!(check_parameters(case, d, m).is_ok());
            let inst = generate(case, d, m, seed).unwrap();
            prop_assert!(inst.certificates.iter().all(|c| c.status != Status::Fail));
            prop_assert!(inst.s_c.len() + inst.s_r.len() <= 3 * d as usize - 1);
            prop_assert!(inst.s_c.len() < inst.s_r.len());
            prop_assert!(inst.p.is_real() && inst.s_r.is_real());
        }
    }
}
