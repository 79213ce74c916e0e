//! Linear algebra of Veronese images.
//!
//! A point `p` of ℙ^m stands for the pure power `(p·x)^d`. Spans are compared
//! through Gram matrices of the Bombieri inner product
//! `⟨F, G⟩ = Σ_α F_α·conj(G_α) / multinomial(α)`, for which
//! `⟨(p·x)^d, (q·x)^d⟩ = (p·q̄)^d` and `⟨F, (q·x)^d⟩ = F(q̄)`. The inner product is
//! positive definite, so the Gram matrix of a family has the same rank and
//! kernel as the family itself, and every question reduces to a matrix whose
//! size is the number of generators rather than the number of monomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curves::CurveSpec;
use crate::error::{Error, Result};
use crate::form::{
    binomial, monomial_count, monomials, multinomial, power_of_coords, HomogeneousForm,
};
use crate::linalg::ExactMatrix;
use crate::points::{PointSet, ProjectivePoint};
use crate::scalar::Scalar;

/// The ambient space of `ν_d : ℙ^m → ℙ^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeroneseSpace {
    pub m: usize,
    pub d: u32,
    pub n: usize,
}

impl VeroneseSpace {
    pub fn new(m: usize, d: u32) -> Self {
        let n = binomial((m + d as usize) as u64, d as u64) as usize - 1;
        debug_assert_eq!(n + 1, monomial_count(m + 1, d));
        VeroneseSpace { m, d, n }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

/// Rows are the degree-`d` monomials evaluated at each canonical point.
pub fn veronese_eval_matrix(s: &PointSet, d: u32) -> ExactMatrix {
    let mons = monomials(s.m() + 1, d);
    let rows = s
        .iter()
        .map(|p| {
            mons.iter()
                .map(|mon| {
                    mon.exps()
                        .iter()
                        .zip(p.coords())
                        .fold(Scalar::one(), |acc, (&e, c)| &acc * &c.pow(e))
                })
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).unwrap_or_else(|_| ExactMatrix::zeros(0, mons.len()))
}

/// A generator of a linear span in the space of degree-`d` forms.
#[derive(Clone, Copy, Debug)]
pub enum Generator<'a> {
    /// The pure power of a point.
    Point(&'a [Scalar]),
    Form(&'a HomogeneousForm),
}

fn conj_vec(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(Scalar::conj).collect()
}

/// Bombieri inner product, linear in `a` and conjugate-linear in `b`.
fn inner(a: Generator<'_>, b: Generator<'_>, d: u32) -> Result<Scalar> {
    match (a, b) {
        (Generator::Point(p), Generator::Point(q)) => {
            let dot = p
                .iter()
                .zip(q)
                .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * &y.conj()));
            Ok(dot.pow(d))
        }
        (Generator::Form(f), Generator::Point(q)) => f.evaluate(&conj_vec(q)),
        (Generator::Point(p), Generator::Form(g)) => Ok(g.evaluate(&conj_vec(p))?.conj()),
        (Generator::Form(f), Generator::Form(g)) => {
            let mut acc = Scalar::zero();
            for (mon, c) in f.terms() {
                let other = g.coeff(mon.exps());
                if !other.is_zero() {
                    let w = BigRational::new(BigInt::one(), multinomial(mon.exps()));
                    acc += &(c * &other.conj()).scale(&w);
                }
            }
            Ok(acc)
        }
    }
}

/// `G[i][j] = ⟨v_j, v_i⟩`, so `G·x = 0` iff `Σ x_j v_j = 0`.
pub fn gram_matrix(gens: &[Generator<'_>], d: u32) -> Result<ExactMatrix> {
    let k = gens.len();
    let mut g = ExactMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = inner(gens[j], gens[i], d)?;
            if i != j {
                g.set(j, i, v.conj());
            }
            g.set(i, j, v);
        }
    }
    Ok(g)
}

/// Vector-space dimension of the span of the generators.
pub fn span_rank(gens: &[Generator<'_>], d: u32) -> Result<usize> {
    Ok(gram_matrix(gens, d)?.rank())
}

/// Basis of linear relations `Σ x_j v_j = 0`.
pub fn dependencies(gens: &[Generator<'_>], d: u32) -> Result<Vec<Vec<Scalar>>> {
    Ok(gram_matrix(gens, d)?.kernel())
}

pub fn point_generators(s: &PointSet) -> Vec<Generator<'_>> {
    s.iter().map(|p| Generator::Point(p.coords())).collect()
}

/// `Σ c_j (p_j·x)^d`.
pub fn combine_points(
    points: &[&ProjectivePoint],
    coeffs: &[Scalar],
    d: u32,
) -> Result<HomogeneousForm> {
    let n = points
        .first()
        .ok_or_else(|| Error::InvalidInput("no points to combine".into()))?
        .coords()
        .len();
    let mut acc = HomogeneousForm::zero(n, d);
    for (p, c) in points.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&power_of_coords(p.coords(), d)?.scale(c))?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub set_size: usize,
    /// Projective dimension of `⟨ν_d(S)⟩`; −1 for the empty set.
    pub span_dim: i64,
    pub h1: usize,
    pub independent: bool,
}

/// `h¹(I_S(d)) = ♯S − 1 − dim⟨ν_d(S)⟩`.
pub fn h1_ideal(s: &PointSet, d: u32) -> Result<SpanReport> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let rank = span_rank(&point_generators(s), d)?;
    let h1 = s.len() - rank;
    Ok(SpanReport {
        set_size: s.len(),
        span_dim: rank as i64 - 1,
        h1,
        independent: h1 == 0,
    })
}

fn check_form(p: &HomogeneousForm, s: &PointSet, d: u32) -> Result<()> {
    if p.degree() != d {
        return Err(Error::InvalidInput(format!(
            "form has degree {}, expected {d}",
            p.degree()
        )));
    }
    if p.num_vars() != s.m() + 1 {
        return Err(Error::DimensionMismatch {
            expected: s.m() + 1,
            found: p.num_vars(),
        });
    }
    Ok(())
}

fn check_real(p: &HomogeneousForm, s: &PointSet, field: Field) -> Result<()> {
    if field == Field::Real {
        if !p.is_real() {
            return Err(Error::NonReal("the form".into()));
        }
        if let Some(q) = s.iter().find(|q| !q.is_real()) {
            return Err(Error::NonReal(format!("point {:?}", q.coords())));
        }
    }
    Ok(())
}

/// Coefficients `λ` with `Σ λ_i (p_i·x)^d = P`, or `None` if `P` is outside
/// the span. For `field = Real` the solution is real: a real system has a
/// real solution whenever it has a complex one.
pub fn span_coefficients(
    p: &HomogeneousForm,
    s: &PointSet,
    d: u32,
    field: Field,
) -> Result<Option<Vec<Scalar>>> {
    check_form(p, s, d)?;
    check_real(p, s, field)?;
    if s.is_empty() {
        return Ok(p.is_zero().then(Vec::new));
    }
    let gens = point_generators(s);
    let g = gram_matrix(&gens, d)?;
    let mut with_p = gens.clone();
    with_p.push(Generator::Form(p));
    if span_rank(&with_p, d)? != g.rank() {
        return Ok(None);
    }
    // Normal equations G·λ = (⟨P, v_i⟩)_i; inside the span they are exact.
    let rhs = gens
        .iter()
        .map(|&v| inner(Generator::Form(p), v, d))
        .collect::<Result<Vec<_>>>()?;
    let lambda = g
        .solve(&rhs)?
        .ok_or_else(|| Error::InvalidInput("inconsistent normal equations".into()))?;
    Ok(Some(lambda))
}

/// Whether `P ∈ ⟨ν_d(S)⟩` with coefficients in `field`.
pub fn membership(p: &HomogeneousForm, s: &PointSet, d: u32, field: Field) -> Result<bool> {
    Ok(span_coefficients(p, s, d, field)?.is_some())
}

/// A point of ℙ^N produced by an intersection, with its coefficients on the
/// spanning points it was expressed over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    /// Projectively normalized form.
    pub form: HomogeneousForm,
    pub coeffs: Vec<Scalar>,
    pub real: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Intersection {
    Point(IntersectionPoint),
    /// Projective dimension of the intersection (−1 when empty).
    NotUnique {
        dim: i64,
    },
}

impl Intersection {
    pub fn point(&self) -> Option<&IntersectionPoint> {
        match self {
            Intersection::Point(p) => Some(p),
            Intersection::NotUnique { .. } => None,
        }
    }
}

/// `⟨U⟩ ∩ ⟨ν_d(T)⟩` when it is a single point, where `U` is an arbitrary family.
pub fn intersect_with_points(
    u: &[Generator<'_>],
    t: &[&ProjectivePoint],
    d: u32,
) -> Result<Intersection> {
    let w: Vec<Generator<'_>> = t.iter().map(|p| Generator::Point(p.coords())).collect();
    let mut all = u.to_vec();
    all.extend(w.iter().copied());
    let g = gram_matrix(&all, d)?;
    let ru = span_rank(u, d)?;
    let gw = gram_matrix(&w, d)?;
    let rw = gw.rank();
    let dim = ru as i64 + rw as i64 - g.rank() as i64;
    if dim != 1 {
        return Ok(Intersection::NotUnique { dim: dim - 1 });
    }
    for k in g.kernel() {
        let b = &k[u.len()..];
        // ‖Σ b_j w_j‖² = Σ conj(b_i) G_w[i][j] b_j.
        let gb = gw.mul_vec(b)?;
        let norm = b
            .iter()
            .zip(&gb)
            .fold(Scalar::zero(), |acc, (x, y)| &acc + &(&x.conj() * y));
        if norm.is_zero() {
            continue;
        }
        let form = combine_points(t, b, d)?;
        let lead = form.terms().next().expect("nonzero form").1.inv()?;
        let form = form.scale(&lead);
        let coeffs: Vec<Scalar> = b.iter().map(|c| c * &lead).collect();
        let real = form.is_real();
        return Ok(Intersection::Point(IntersectionPoint {
            form,
            coeffs,
            real,
        }));
    }
    Err(Error::InvalidInput(
        "intersection of dimension 0 without a witness".into(),
    ))
}

/// `⟨{P} ∪ ν_d(E)⟩ ∩ ⟨ν_d(T)⟩` when it is a single point.
pub fn unique_intersection_point(
    p: &HomogeneousForm,
    e: &PointSet,
    t: &PointSet,
    d: u32,
) -> Result<Intersection> {
    check_form(p, t, d)?;
    if e.m() != t.m() {
        return Err(Error::DimensionMismatch {
            expected: t.m() + 1,
            found: e.m() + 1,
        });
    }
    let mut u = vec![Generator::Form(p)];
    u.extend(point_generators(e));
    let tp: Vec<&ProjectivePoint> = t.iter().collect();
    intersect_with_points(&u, &tp, d)
}

/// Whether `⟨ν_d(A)⟩ ∩ ⟨ν_d(B)⟩ = ∅`, by Grassmann's dimension count.
pub fn spans_disjoint(a: &PointSet, b: &PointSet, d: u32) -> Result<bool> {
    let ga = point_generators(a);
    let gb = point_generators(b);
    let mut all = ga.clone();
    all.extend(gb.iter().copied());
    Ok(span_rank(&ga, d)? + span_rank(&gb, d)? == span_rank(&all, d)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LemmaC2 {
    HypothesisFails { h1: usize },
    Conclusion { equal: bool },
}

/// Checks `h¹(I_{(A∪B)∖curve}(d−t)) = 0` for a curve of degree `t` and, when
/// it holds, whether `A` and `B` agree off the curve.
pub fn lemma_c2_check(a: &PointSet, b: &PointSet, curve: &CurveSpec, d: u32) -> Result<LemmaC2> {
    let t = curve.degree();
    if d <= t {
        return Err(Error::InvalidInput(format!(
            "degree {d} must exceed curve degree {t}"
        )));
    }
    let off_a = a.filter(|p| !curve.contains(p));
    let off_b = b.filter(|p| !curve.contains(p));
    let union = off_a.union(&off_b)?;
    let h1 = h1_ideal(&union, d - t)?.h1;
    if h1 > 0 {
        return Ok(LemmaC2::HypothesisFails { h1 });
    }
    Ok(LemmaC2::Conclusion {
        equal: off_a.same_set(&off_b),
    })
}

/// The catalecticant matrix of `P` from degree `a` to degree `d − a`, with
/// entries `P_{α+β} / multinomial(α+β)`. Its rank bounds the Waring rank below.
pub fn catalecticant(p: &HomogeneousForm, a: u32) -> Result<ExactMatrix> {
    let d = p.degree();
    if a > d {
        return Err(Error::InvalidInput(
            "catalecticant split exceeds degree".into(),
        ));
    }
    let n = p.num_vars();
    let rows = monomials(n, a);
    let cols = monomials(n, d - a);
    let mut mat = ExactMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            let exp: Vec<u32> = r.exps().iter().zip(c.exps()).map(|(x, y)| x + y).collect();
            let v = p.coeff(&exp);
            if !v.is_zero() {
                mat.set(
                    i,
                    j,
                    v.scale(&BigRational::new(BigInt::one(), multinomial(&exp))),
                );
            }
        }
    }
    Ok(mat)
}

/// Largest catalecticant rank over all splits, a lower bound for the complex rank.
pub fn catalecticant_bound(p: &HomogeneousForm) -> Result<usize> {
    let d = p.degree();
    (1..=d / 2).try_fold(usize::from(!p.is_zero()), |best, a| {
        Ok(best.max(catalecticant(p, a)?.rank()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Line;
    use crate::scalar::rat;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pts(m: usize, rows: &[&[i64]]) -> PointSet {
        PointSet::from_ints(m, rows).unwrap()
    }

    fn form(m: usize, d: u32, terms: &[(&[u32], i64)]) -> HomogeneousForm {
        HomogeneousForm::from_terms(
            m + 1,
            d,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Scalar::from_i64(*c))),
        )
        .unwrap()
    }

    #[test]
    fn veronese_dimension() {
        assert_eq!(VeroneseSpace::new(2, 3).n, 9);
        assert_eq!(VeroneseSpace::new(4, 6).n, 209);
    }

    #[test]
    fn eval_matrix_examples() {
        let m = veronese_eval_matrix(&pts(1, &[&[1, 0], &[0, 1]]), 2);
        assert_eq!(m.row(0), &[Scalar::one(), Scalar::zero(), Scalar::zero()]);
        assert_eq!(m.row(1), &[Scalar::zero(), Scalar::zero(), Scalar::one()]);
        let ones = veronese_eval_matrix(&pts(1, &[&[1, 1]]), 3);
        assert!(ones.row(0).iter().all(|c| *c == Scalar::one()));
    }

    #[test]
    fn eval_matrix_matches_monomial_oracle() {
        let p = ProjectivePoint::new(vec![
            Scalar::one(),
            Scalar::from_ratio(-2, 3),
            Scalar::from_ratio(5, 7),
        ])
        .unwrap();
        let s = PointSet::new(2, vec![p.clone()]).unwrap();
        let m = veronese_eval_matrix(&s, 4);
        let mut k = 0;
        // Graded lex in three variables, written out by hand.
        for a in (0..=4u32).rev() {
            for b in (0..=4 - a).rev() {
                let c = 4 - a - b;
                let x = p.coords();
                let v = &(&x[0].pow(a) * &x[1].pow(b)) * &x[2].pow(c);
                assert_eq!(m.get(0, k), &v);
                k += 1;
            }
        }
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_ideal(&pts(1, &[&[1, 0], &[0, 1]]), 1).unwrap().h1, 0);
        let five = pts(
            2,
            &[&[1, 0, 0], &[1, 1, 0], &[1, 2, 0], &[1, 3, 0], &[1, 4, 0]],
        );
        let r = h1_ideal(&five, 3).unwrap();
        assert_eq!((r.h1, r.span_dim, r.independent), (1, 3, false));
        assert_eq!(veronese_eval_matrix(&five, 3).rank(), 4);
        for d in 3..=6u32 {
            let line: Vec<Vec<i64>> = (0..d as i64 + 2).map(|t| vec![1, t, 2 * t]).collect();
            let rows: Vec<&[i64]> = line.iter().map(Vec::as_slice).collect();
            assert_eq!(h1_ideal(&pts(2, &rows), d).unwrap().h1, 1);
        }
    }

    #[test]
    fn membership_examples() {
        let f = form(1, 3, &[(&[3, 0], 1), (&[0, 3], 1)]);
        assert!(membership(&f, &pts(1, &[&[1, 0], &[0, 1]]), 3, Field::Complex).unwrap());
        let g = form(1, 3, &[(&[3, 0], 2), (&[1, 2], -6)]);
        let conj_pair = PointSet::new(
            1,
            vec![
                ProjectivePoint::new(vec![Scalar::one(), Scalar::i()]).unwrap(),
                ProjectivePoint::new(vec![Scalar::one(), -Scalar::i()]).unwrap(),
            ],
        )
        .unwrap();
        let lambda = span_coefficients(&g, &conj_pair, 3, Field::Complex)
            .unwrap()
            .unwrap();
        assert_eq!(lambda, vec![Scalar::one(), Scalar::one()]);
        assert!(matches!(
            membership(&g, &conj_pair, 3, Field::Real),
            Err(Error::NonReal(_))
        ));
        let x3 = form(1, 3, &[(&[3, 0], 1)]);
        assert!(!membership(&x3, &pts(1, &[&[0, 1]]), 3, Field::Complex).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let s = pts(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]);
        let coeffs = [
            Scalar::from_i64(2),
            Scalar::from_i64(-3),
            Scalar::from_i64(5),
        ];
        let all: Vec<&ProjectivePoint> = s.iter().collect();
        let p = combine_points(&all, &coeffs, 3).unwrap();

        let same = unique_intersection_point(&p, &PointSet::empty(2), &s, 3).unwrap();
        assert!(same.point().unwrap().form.projectively_equal(&p));

        let e = pts(2, &[&[1, 0, 0]]);
        let t = pts(2, &[&[0, 1, 0], &[1, 1, 1]]);
        let got = unique_intersection_point(&p, &e, &t, 3).unwrap();
        let expect = combine_points(&all[1..], &coeffs[1..], 3).unwrap();
        let pt = got.point().unwrap();
        assert!(pt.form.projectively_equal(&expect));
        assert!(pt.real);
        // Re-solve: the point lies in ⟨ν(T)⟩ and in ⟨{P} ∪ ν(E)⟩.
        assert!(membership(&pt.form, &t, 3, Field::Complex).unwrap());
        let diff = p
            .sub(&combine_points(&all[..1], &coeffs[..1], 3).unwrap())
            .unwrap();
        assert!(diff.projectively_equal(&pt.form));

        // Five collinear points: the halves' spans meet, so the answer is not unique.
        let line: Vec<&[i64]> = vec![&[1, 0, 0], &[1, 1, 0], &[1, 2, 0], &[1, 3, 0], &[1, 4, 0]];
        let all5 = pts(2, &line);
        let ones = vec![Scalar::one(); 5];
        let p5 = combine_points(&all5.iter().collect::<Vec<_>>(), &ones, 3).unwrap();
        let r =
            unique_intersection_point(&p5, &pts(2, &line[..2]), &pts(2, &line[2..]), 3).unwrap();
        assert!(matches!(r, Intersection::NotUnique { .. }));
    }

    #[test]
    fn lemma_c2_examples() {
        let line = CurveSpec::line(
            Line::through(
                &ProjectivePoint::from_ints(&[1, 0, 0]).unwrap(),
                &ProjectivePoint::from_ints(&[0, 1, 0]).unwrap(),
            )
            .unwrap(),
        );
        let a = pts(2, &[&[1, 0, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(
            lemma_c2_check(&a, &a, &line, 3).unwrap(),
            LemmaC2::Conclusion { equal: true }
        );
        let b = pts(2, &[&[1, 0, 0], &[0, 0, 1], &[1, 2, 1]]);
        assert_eq!(
            lemma_c2_check(&a, &b, &line, 3).unwrap(),
            LemmaC2::Conclusion { equal: false }
        );
        // Four collinear off-line points fail to impose independent conditions on conics.
        let c = pts(2, &[&[0, 0, 1], &[1, 1, 1], &[2, 2, 1], &[3, 3, 1]]);
        assert!(matches!(
            lemma_c2_check(&c, &c, &line, 3).unwrap(),
            LemmaC2::HypothesisFails { h1: 1 }
        ));
    }

    #[test]
    fn catalecticant_of_power_sum() {
        let s = pts(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let p = combine_points(&s.iter().collect::<Vec<_>>(), &vec![Scalar::one(); 4], 4).unwrap();
        assert_eq!(catalecticant_bound(&p).unwrap(), 4);
    }

    fn random_points(rng: &mut ChaCha8Rng, m: usize, k: usize, complex: bool) -> PointSet {
        let mut s = PointSet::empty(m);
        while s.len() < k {
            let c = (0..=m)
                .map(|_| {
                    let im = if complex { rng.gen_range(-2..3) } else { 0 };
                    Scalar::new(rat(rng.gen_range(-3..4), rng.gen_range(1..3)), rat(im, 1))
                })
                .collect();
            if let Ok(p) = ProjectivePoint::new(c) {
                s.insert(p).unwrap();
            }
        }
        s
    }

    #[test]
    fn gram_rank_matches_evaluation_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..20 {
            let m = 1 + trial % 3;
            let d = 1 + (trial % 4) as u32;
            let k = rng.gen_range(1..12);
            let s = random_points(&mut rng, m, k, trial % 2 == 0);
            assert_eq!(
                span_rank(&point_generators(&s), d).unwrap(),
                veronese_eval_matrix(&s, d).rank()
            );
        }
    }

    #[test]
    fn membership_matches_direct_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let s = random_points(&mut rng, 2, 4, true);
            let extra = random_points(&mut rng, 2, 1, true);
            let q = extra.points()[0].clone();
            let p = power_of_coords(q.coords(), 3).unwrap();
            // Direct route: solve Σ λ_i (p_i·x)^d = P over all monomial coefficients.
            let cols: Vec<Vec<Scalar>> = s
                .iter()
                .map(|pt| power_of_coords(pt.coords(), 3).unwrap().dense())
                .collect();
            let direct = ExactMatrix::from_columns(&cols)
                .unwrap()
                .solve(&p.dense())
                .unwrap()
                .is_some();
            assert_eq!(membership(&p, &s, 3, Field::Complex).unwrap(), direct);
        }
    }

    proptest! {
        #[test]
        fn collinear_h1_law(d in 1u32..7, extra in 0usize..4, a in -3i64..4, b in 1i64..4) {
            let k = d as usize + 1 + extra;
            let rows: Vec<Vec<i64>> = (0..k as i64).map(|t| vec![b, a + t, t]).collect();
            let s = PointSet::from_ints(2, &rows.iter().map(Vec::as_slice).collect::<Vec<_>>()).unwrap();
            let r = h1_ideal(&s, d).unwrap();
            prop_assert_eq!(r.h1, extra);
            prop_assert_eq!(r.h1 as i64, r.set_size as i64 - 1 - r.span_dim);
        }

        #[test]
        fn span_grows_by_at_most_one(seed in 0u64..1000, d in 1u32..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_points(&mut rng, 2, 8, seed % 2 == 0);
            let mut prev = -1i64;
            let mut acc = PointSet::empty(2);
            for p in s.iter() {
                acc.insert(p.clone()).unwrap();
                let r = h1_ideal(&acc, d).unwrap();
                prop_assert!(r.span_dim >= prev && r.span_dim <= prev + 1);
                let n = VeroneseSpace::new(2, d).n as i64;
                prop_assert!(r.h1 as i64 >= (acc.len() as i64 - (n + 1)).max(0));
                prev = r.span_dim;
            }
        }

        #[test]
        fn membership_invariant_under_scaling_and_permutation(seed in 0u64..1000, c in 1i64..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_points(&mut rng, 2, 4, true);
            let coeffs: Vec<Scalar> = (0..4).map(|_| Scalar::from_i64(rng.gen_range(-3..4))).collect();
            let p = combine_points(&s.iter().collect::<Vec<_>>(), &coeffs, 3).unwrap();
            prop_assume!(!p.is_zero());
            let mut rev = s.points().to_vec();
            rev.reverse();
            let rev = PointSet::new(2, rev).unwrap();
            let scaled = p.scale(&Scalar::from_ratio(c, 3));
            prop_assert!(membership(&p, &s, 3, Field::Complex).unwrap());
            prop_assert!(membership(&scaled, &rev, 3, Field::Complex).unwrap());
            let q = random_points(&mut rng, 2, 1, false);
            let pq = p.add(&power_of_coords(q.points()[0].coords(), 3).unwrap()).unwrap();
            let a = membership(&pq, &s, 3, Field::Complex).unwrap();
            prop_assert_eq!(a, membership(&pq.scale(&Scalar::from_i64(c)), &rev, 3, Field::Complex).unwrap());
        }

        /// Real points span real and complex spaces of the same dimension.
        #[test]
        fn real_and_complex_spans_agree(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_points(&mut rng, 2, 6, false);
            let g = gram_matrix(&point_generators(&s), 3).unwrap();
            prop_assert!(g.is_real());
            let (_, piv) = g.rref();
            prop_assert_eq!(piv.len(), g.rank());
            let coeffs: Vec<Scalar> = (0..6).map(|_| Scalar::from_i64(rng.gen_range(-3..4))).collect();
            let p = combine_points(&s.iter().collect::<Vec<_>>(), &coeffs, 3).unwrap();
            prop_assume!(!p.is_zero());
            let lam = span_coefficients(&p, &s, 3, Field::Real).unwrap().unwrap();
            prop_assert!(lam.iter().all(Scalar::is_real));
        }

        #[test]
        fn intersection_point_reverifies(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_points(&mut rng, 2, 5, seed % 2 == 0);
            let coeffs: Vec<Scalar> = (0..5).map(|_| Scalar::from_i64(rng.gen_range(1..4))).collect();
            let all: Vec<&ProjectivePoint> = s.iter().collect();
            let p = combine_points(&all, &coeffs, 3).unwrap();
            let e = PointSet::new(2, s.points()[..2].to_vec()).unwrap();
            let t = PointSet::new(2, s.points()[2..].to_vec()).unwrap();
            if let Intersection::Point(pt) = unique_intersection_point(&p, &e, &t, 3).unwrap() {
                prop_assert!(membership(&pt.form, &t, 3, Field::Complex).unwrap());
                let mut gens = vec![Generator::Form(&p)];
                gens.extend(point_generators(&e));
                gens.push(Generator::Form(&pt.form));
                prop_assert_eq!(span_rank(&gens, 3).unwrap(), span_rank(&gens[..gens.len() - 1], 3).unwrap());
            }
        }
    }
}
