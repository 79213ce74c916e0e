//! Waring decompositions of binary forms.
//!
//! A binary form is stored by its scaled coefficients `c_k` with
//! `f = Σ C(d,k)·c_k·x^{d−k}·y^k`, so that the power `(a·x + b·y)^d` has
//! `c_k = a^{d−k}·b^k` and the degree-`r` Hankel matrix is `H[i][j] = c_{i+j}`.
//! A kernel vector `g` of `H_r` is read as `q(s,t) = Σ g_j·s^{r−j}·t^j`; if `q`
//! has `r` distinct roots `[a:b]`, then `f` is a combination of the powers of
//! the corresponding linear forms `a·x + b·y`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curves::ConicParametrization;
use crate::error::{Error, Result};
use crate::form::{binomial, HomogeneousForm};
use crate::interval::{solve_square, CInterval};
use crate::linalg::ExactMatrix;
use crate::points::ProjectivePoint;
use crate::poly::{count_real_roots, UniPoly};
use crate::roots::{aberth_f64, certified_width, exact_roots, isolate};
use crate::scalar::Scalar;
use crate::spans::Field;

/// Degrees above this are rejected.
pub const MAX_DEGREE: u32 = 16;
/// Height bound of the rational grid used by the real-rooted search.
pub const SEARCH_DEPTH: u32 = 12;
/// Grid tuples tried per kernel before giving up at that rank.
const TUPLE_CAP: usize = 800;
/// Accepted but inexact candidates tried before settling for isolated roots.
const EXACT_ATTEMPTS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    c: Vec<Scalar>,
}

impl BinaryForm {
    pub fn from_scaled(c: Vec<Scalar>) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::InvalidInput(
                "binary form needs degree at least 1".into(),
            ));
        }
        Ok(BinaryForm { c })
    }

    pub fn from_form(f: &HomogeneousForm) -> Result<Self> {
        if f.num_vars() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: f.num_vars(),
            });
        }
        let d = f.degree();
        let c = (0..=d)
            .map(|k| f.coeff(&[d - k, k]) / Scalar::from_i64(binomial(d as u64, k as u64) as i64))
            .collect();
        BinaryForm::from_scaled(c)
    }

    /// Scaled coefficients of `(a·x + b·y)^d`.
    pub fn power_of_point(p: &ProjectivePoint, d: u32) -> Result<Self> {
        let [a, b] = p1_coords(p)?;
        BinaryForm::from_scaled(point_row(&a, &b, d))
    }

    pub fn degree(&self) -> u32 {
        (self.c.len() - 1) as u32
    }

    pub fn scaled(&self) -> &[Scalar] {
        &self.c
    }

    pub fn to_form(&self) -> HomogeneousForm {
        let d = self.degree();
        HomogeneousForm::from_terms(
            2,
            d,
            (0..=d).map(|k| {
                (
                    vec![d - k, k],
                    &self.c[k as usize] * &Scalar::from_i64(binomial(d as u64, k as u64) as i64),
                )
            }),
        )
        .expect("exponents sum to d")
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.c.iter().all(Scalar::is_real)
    }

    /// The `(d−r+1)×(r+1)` Hankel matrix.
    pub fn hankel(&self, r: u32) -> ExactMatrix {
        let d = self.degree();
        let rows = (0..=(d - r) as usize)
            .map(|i| (0..=r as usize).map(|j| self.c[i + j].clone()).collect())
            .collect();
        ExactMatrix::from_rows(rows).expect("rectangular")
    }
}

fn p1_coords(p: &ProjectivePoint) -> Result<[Scalar; 2]> {
    match p.coords() {
        [a, b] => Ok([a.clone(), b.clone()]),
        c => Err(Error::DimensionMismatch {
            expected: 2,
            found: c.len(),
        }),
    }
}

/// `(a^d, a^{d−1}b, …, b^d)`.
fn point_row(a: &Scalar, b: &Scalar, d: u32) -> Vec<Scalar> {
    (0..=d).map(|k| &a.pow(d - k) * &b.pow(k)).collect()
}

/// `q(a, b) = Σ g_j a^{r−j} b^j`.
fn eval_homogeneous(g: &[Scalar], pt: &[Scalar; 2]) -> Scalar {
    let r = g.len() as u32 - 1;
    g.iter().enumerate().fold(Scalar::zero(), |acc, (j, gj)| {
        &acc + &(&(gj * &pt[0].pow(r - j as u32)) * &pt[1].pow(j as u32))
    })
}

/// Chart `s = 1` of `q`, and the multiplicity of the root `[0:1]`.
fn chart(g: &[Scalar]) -> (UniPoly, usize) {
    let u = UniPoly::new(g.to_vec());
    let inf = match u.degree() {
        Some(deg) => g.len() - 1 - deg,
        None => g.len(),
    };
    (u, inf)
}

fn is_squarefree_h(g: &[Scalar]) -> bool {
    let (u, inf) = chart(g);
    inf <= 1 && u.is_squarefree()
}

fn is_real_rooted_h(g: &[Scalar]) -> bool {
    if !g.iter().all(Scalar::is_real) || !is_squarefree_h(g) {
        return false;
    }
    let (u, _) = chart(g);
    count_real_roots(&u) == u.degree().expect("nonzero")
}

/// Floating-point screen run before the exact tests: rejects a candidate
/// whose approximate roots are clearly non-real (for the real field) or
/// clearly clustered. It never accepts on its own.
fn plausible(u: &UniPoly, field: Field) -> bool {
    let z = aberth_f64(u);
    let scale = |w: &num_complex::Complex64| 1.0 + w.norm();
    if field == Field::Real && z.iter().any(|w| w.im.abs() > 1e-6 * scale(w)) {
        return false;
    }
    z.iter()
        .enumerate()
        .all(|(i, a)| z[i + 1..].iter().all(|b| (a - b).norm() > 1e-9 * scale(a)))
}

fn kernel_vectors(f: &BinaryForm, r: u32) -> Vec<Vec<Scalar>> {
    f.hankel(r).kernel()
}

/// Kernel basis of `H_r` as binary forms `Σ g_j x^{r−j} y^j` of degree `r`.
pub fn hankel_kernel(f: &BinaryForm, r: u32) -> Result<Vec<HomogeneousForm>> {
    if r == 0 || r > f.degree() {
        return Err(Error::InvalidInput(format!(
            "kernel degree {r} outside 1..={}",
            f.degree()
        )));
    }
    kernel_vectors(f, r)
        .into_iter()
        .map(|g| {
            HomogeneousForm::from_terms(
                2,
                r,
                g.into_iter()
                    .enumerate()
                    .map(|(j, c)| (vec![r - j as u32, j as u32], c)),
            )
        })
        .collect()
}

/// Common factor of all kernel elements: chart gcd and `[0:1]` multiplicity.
fn common_factor(ker: &[Vec<Scalar>]) -> (UniPoly, usize) {
    let mut h = UniPoly::zero();
    let mut inf = usize::MAX;
    for g in ker {
        let (u, i) = chart(g);
        h = h.gcd(&u);
        inf = inf.min(i);
    }
    (h, inf)
}

/// Rational points of ℙ¹: `[1:0]`, `[0:1]`, then `[1:±p/q]` by height.
fn grid(depth: u32) -> Vec<[Scalar; 2]> {
    let mut out = vec![
        [Scalar::one(), Scalar::zero()],
        [Scalar::zero(), Scalar::one()],
    ];
    let coprime = |a: u32, b: u32| num_integer::gcd(a, b) == 1;
    for h in 1..=depth {
        let mut vals: Vec<(u32, u32)> = (1..h.max(2))
            .filter(|&q| coprime(h, q))
            .map(|q| (h, q))
            .collect();
        vals.extend((1..h).filter(|&p| coprime(p, h)).map(|p| (p, h)));
        for (p, q) in vals {
            let v = Scalar::from_ratio(p as i64, q as i64);
            out.push([Scalar::one(), v.clone()]);
            out.push([Scalar::one(), -v]);
        }
    }
    out
}

/// Next `k`-subset of `0..n` in colexicographic order, so tuples over small
/// grid points come first.
fn next_colex(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, cj) in c.iter_mut().enumerate().take(i) {
                *cj = j;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Minimality {
    /// Every smaller rank was excluded by an exact test.
    Exact,
    /// Some smaller rank was only excluded by the bounded grid search; the
    /// rank is at least `lower_bound`.
    SearchBounded { lower_bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Support {
    Exact {
        points: Vec<ProjectivePoint>,
        coeffs: Vec<Scalar>,
    },
    /// Points `[1:u]` for `u` in each box, plus `[0:1]` when `at_infinity`;
    /// coefficients follow the same order with `[0:1]` last.
    Implicit {
        generator: HomogeneousForm,
        boxes: Vec<CInterval>,
        at_infinity: bool,
        coeffs: Vec<CInterval>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryDecomposition {
    pub rank: usize,
    pub field: Field,
    #[serde(flatten)]
    pub support: Support,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimality: Option<Minimality>,
}

impl BinaryDecomposition {
    pub fn is_exact(&self) -> bool {
        matches!(self.support, Support::Exact { .. })
    }

    pub fn points(&self) -> Option<&[ProjectivePoint]> {
        match &self.support {
            Support::Exact { points, .. } => Some(points),
            Support::Implicit { .. } => None,
        }
    }

    /// `Σ λ_i (a_i x + b_i y)^d` in exact mode.
    pub fn reconstruct(&self, d: u32) -> Option<HomogeneousForm> {
        let Support::Exact { points, coeffs } = &self.support else {
            return None;
        };
        let mut c = vec![Scalar::zero(); d as usize + 1];
        for (p, l) in points.iter().zip(coeffs) {
            for (ck, v) in c
                .iter_mut()
                .zip(point_row(&p.coords()[0], &p.coords()[1], d))
            {
                *ck += &(l * &v);
            }
        }
        Some(BinaryForm { c }.to_form())
    }

    /// Exact equality in exact mode; in implicit mode every coefficient of
    /// the residual is enclosed by an interval containing 0 and narrower
    /// than `1e-30`.
    pub fn verify(&self, f: &BinaryForm) -> bool {
        match &self.support {
            Support::Exact { points, coeffs } => {
                points.len() == self.rank
                    && coeffs.len() == self.rank
                    && (self.field == Field::Complex
                        || (points.iter().all(|p| p.is_real())
                            && coeffs.iter().all(Scalar::is_real)))
                    && self
                        .reconstruct(f.degree())
                        .is_some_and(|g| g == f.to_form())
            }
            Support::Implicit {
                boxes,
                at_infinity,
                coeffs,
                ..
            } => {
                boxes.len() + usize::from(*at_infinity) == self.rank
                    && residuals(f, boxes, *at_infinity, coeffs).is_some_and(|res| {
                        let bound = certified_width();
                        res.iter().all(|r| r.contains_zero() && r.width() < bound)
                    })
            }
        }
    }
}

fn interval_row(boxes: &[CInterval], at_infinity: bool, k: u32, d: u32) -> Vec<CInterval> {
    let mut row: Vec<CInterval> = boxes.iter().map(|b| b.pow(k)).collect();
    if at_infinity {
        row.push(if k == d {
            CInterval::one()
        } else {
            CInterval::zero()
        });
    }
    row
}

fn residuals(
    f: &BinaryForm,
    boxes: &[CInterval],
    at_infinity: bool,
    coeffs: &[CInterval],
) -> Option<Vec<CInterval>> {
    let d = f.degree();
    if coeffs.len() != boxes.len() + usize::from(at_infinity) {
        return None;
    }
    Some(
        (0..=d)
            .map(|k| {
                let row = interval_row(boxes, at_infinity, k, d);
                let acc = row
                    .iter()
                    .zip(coeffs)
                    .fold(CInterval::zero(), |acc, (v, l)| acc.add(&v.mul(l)));
                acc.sub(&CInterval::point(&f.c[k as usize]))
            })
            .collect(),
    )
}

/// Coefficients `λ` with `f = Σ λ_i (a_i x + b_i y)^d` for given points of
/// ℙ¹, if `f` lies in the span of their powers.
pub fn coefficients_at(f: &BinaryForm, points: &[ProjectivePoint]) -> Result<Option<Vec<Scalar>>> {
    let d = f.degree();
    let cols = points
        .iter()
        .map(|p| p1_coords(p).map(|[a, b]| point_row(&a, &b, d)))
        .collect::<Result<Vec<_>>>()?;
    if cols.is_empty() {
        return Ok(f.is_zero().then(Vec::new));
    }
    ExactMatrix::from_columns(&cols)?.solve(&f.c)
}

/// Builds the decomposition supported on the roots of the square-free
/// kernel element `g`. `hints` are known finite roots `u` of the chart.
fn decomposition_from_generator(
    f: &BinaryForm,
    g: &[Scalar],
    hints: &[Scalar],
    field: Field,
) -> Result<Option<BinaryDecomposition>> {
    let (u, inf) = chart(g);
    let rank = g.len() - 1;
    let Some(roots) = exact_roots(&u, hints) else {
        return Ok(None);
    };
    let mut points = roots
        .iter()
        .map(|z| ProjectivePoint::new(vec![Scalar::one(), z.clone()]))
        .collect::<Result<Vec<_>>>()?;
    if inf == 1 {
        points.push(ProjectivePoint::new(vec![Scalar::zero(), Scalar::one()])?);
    }
    points.sort();
    let coeffs = coefficients_at(f, &points)?
        .ok_or_else(|| Error::InvalidInput("kernel element does not support the form".into()))?;
    Ok(Some(BinaryDecomposition {
        rank,
        field,
        support: Support::Exact { points, coeffs },
        minimality: None,
    }))
}

/// Decomposition with certified root boxes and interval coefficients.
fn implicit_decomposition(
    f: &BinaryForm,
    g: &[Scalar],
    field: Field,
) -> Result<BinaryDecomposition> {
    let (u, inf) = chart(g);
    let rank = g.len() - 1;
    let d = f.degree();
    let isolated = isolate(&u, field == Field::Real)?;
    let boxes: Vec<CInterval> = isolated
        .iter()
        .map(|(z, rho)| CInterval::around(z, rho))
        .collect();
    let at_infinity = inf == 1;
    // Pick rows whose midpoint matrix has full column rank.
    let mids: Vec<Scalar> = isolated.iter().map(|(z, _)| z.clone()).collect();
    let mut chosen: Vec<u32> = Vec::new();
    let mut mid_rows: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..=d {
        let mut row: Vec<Scalar> = mids.iter().map(|z| z.pow(k)).collect();
        if at_infinity {
            row.push(if k == d {
                Scalar::one()
            } else {
                Scalar::zero()
            });
        }
        mid_rows.push(row);
        if ExactMatrix::from_rows(mid_rows.clone())?.rank() == mid_rows.len() {
            chosen.push(k);
        } else {
            mid_rows.pop();
        }
        if chosen.len() == rank {
            break;
        }
    }
    if chosen.len() != rank {
        return Err(Error::SearchExhausted(
            "no nonsingular coefficient system".into(),
        ));
    }
    let a = chosen
        .iter()
        .map(|&k| interval_row(&boxes, at_infinity, k, d))
        .collect();
    let b = chosen
        .iter()
        .map(|&k| CInterval::point(&f.c[k as usize]))
        .collect();
    let coeffs = solve_square(a, b)?;
    let generator = HomogeneousForm::from_terms(
        2,
        rank as u32,
        g.iter()
            .enumerate()
            .map(|(j, c)| (vec![(rank - j) as u32, j as u32], c.clone())),
    )?;
    let dec = BinaryDecomposition {
        rank,
        field,
        support: Support::Implicit {
            generator,
            boxes,
            at_infinity,
            coeffs,
        },
        minimality: None,
    };
    if !dec.verify(f) {
        return Err(Error::SearchExhausted(
            "interval reconstruction is not tight enough".into(),
        ));
    }
    Ok(dec)
}

/// Searches the kernel for an element accepted by the field's test,
/// imposing roots at tuples of grid points. Exact supports are preferred.
fn pick(
    f: &BinaryForm,
    ker: &[Vec<Scalar>],
    field: Field,
    common: &(UniPoly, usize),
) -> Result<Option<BinaryDecomposition>> {
    let k = ker.len();
    let r = ker[0].len() - 1;
    let pts: Vec<[Scalar; 2]> = grid(SEARCH_DEPTH)
        .into_iter()
        .filter(|pt| {
            if pt[0].is_zero() {
                common.1 == 0
            } else {
                !common.0.eval(&pt[1]).is_zero()
            }
        })
        .collect();
    if k - 1 > pts.len() {
        return Ok(None);
    }
    let accept = |g: &[Scalar]| {
        let (u, _) = chart(g);
        if !plausible(&u, field) {
            return false;
        }
        match field {
            Field::Real => is_real_rooted_h(g),
            Field::Complex => is_squarefree_h(g),
        }
    };
    // Kernel values at grid points, filled on first use.
    let mut values: Vec<Option<Vec<Scalar>>> = vec![None; pts.len()];
    let mut tuple: Vec<usize> = (0..k - 1).collect();
    let mut fallback: Option<Vec<Scalar>> = None;
    let mut inexact = 0;
    for _ in 0..TUPLE_CAP {
        let fixed: Vec<&[Scalar; 2]> = tuple.iter().map(|&i| &pts[i]).collect();
        let rows: Vec<Vec<Scalar>> = tuple
            .iter()
            .map(|&i| {
                values[i]
                    .get_or_insert_with(|| {
                        ker.iter().map(|g| eval_homogeneous(g, &pts[i])).collect()
                    })
                    .clone()
            })
            .collect();
        let alpha = if rows.is_empty() {
            Some(vec![Scalar::one()])
        } else {
            ExactMatrix::from_rows(rows)?.kernel().into_iter().next()
        };
        if let Some(alpha) = alpha {
            let g: Vec<Scalar> = (0..=r)
                .map(|j| {
                    ker.iter()
                        .zip(&alpha)
                        .fold(Scalar::zero(), |acc, (v, a)| &acc + &(&v[j] * a))
                })
                .collect();
            if accept(&g) {
                let hints: Vec<Scalar> = fixed
                    .iter()
                    .filter(|pt| !pt[0].is_zero())
                    .map(|pt| pt[1].clone())
                    .collect();
                if let Some(dec) = decomposition_from_generator(f, &g, &hints, field)? {
                    return Ok(Some(dec));
                }
                inexact += 1;
                fallback.get_or_insert(g);
                if inexact >= EXACT_ATTEMPTS {
                    break;
                }
            }
        }
        if !next_colex(&mut tuple, pts.len()) {
            break;
        }
    }
    fallback
        .map(|g| implicit_decomposition(f, &g, field))
        .transpose()
}

fn check_input(f: &BinaryForm) -> Result<()> {
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero form has no rank".into()));
    }
    if f.degree() > MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "degree {} exceeds {MAX_DEGREE}",
            f.degree()
        )));
    }
    Ok(())
}

/// Complex Waring rank: the least `r` whose Hankel kernel contains a
/// square-free element. A kernel has a square-free element exactly when
/// the common factor of its elements is square-free.
pub fn complex_rank(f: &BinaryForm) -> Result<BinaryDecomposition> {
    check_input(f)?;
    for r in 1..=f.degree() {
        let ker = kernel_vectors(f, r);
        if ker.is_empty() {
            continue;
        }
        let common = common_factor(&ker);
        if common.1 > 1 || !common.0.is_squarefree() {
            continue;
        }
        let mut dec = pick(f, &ker, Field::Complex, &common)?.ok_or_else(|| {
            Error::SearchExhausted(format!("no square-free kernel element found at r = {r}"))
        })?;
        dec.minimality = Some(Minimality::Exact);
        return Ok(dec);
    }
    Err(Error::SearchExhausted(
        "no square-free kernel element up to the degree".into(),
    ))
}

/// Real Waring rank of a real form: the least `r ≥ r_ℂ` whose Hankel kernel
/// contains a real form with `r` distinct real roots.
pub fn real_rank(f: &BinaryForm) -> Result<BinaryDecomposition> {
    check_input(f)?;
    if !f.is_real() {
        return Err(Error::NonReal("real rank of a non-real form".into()));
    }
    let rc = complex_rank(f)?.rank as u32;
    let mut lower: Option<usize> = None;
    for r in rc..=f.degree() {
        let ker = kernel_vectors(f, r);
        if ker.is_empty() {
            continue;
        }
        let common = common_factor(&ker);
        let (h, inf) = &common;
        // Every kernel element is divisible by h: a repeated or non-real
        // root of h rules out this r exactly.
        if *inf > 1 || !h.is_squarefree() || count_real_roots(h) != h.degree().expect("nonzero gcd")
        {
            continue;
        }
        match pick(f, &ker, Field::Real, &common)? {
            Some(mut dec) => {
                dec.minimality = Some(match lower {
                    None => Minimality::Exact,
                    Some(lower_bound) => Minimality::SearchBounded { lower_bound },
                });
                return Ok(dec);
            }
            // A one-dimensional kernel was tested exactly.
            None if ker.len() == 1 => {}
            None => {
                lower.get_or_insert(r as usize);
            }
        }
    }
    Err(Error::SearchExhausted(
        "no real-rooted kernel element up to the degree".into(),
    ))
}

/// Literal pullback `F(p₀(s,t), p₁(s,t), p₂(s,t))` along a conic
/// parametrization, a binary form of degree `2d`.
pub fn pullback_conic(f: &HomogeneousForm, param: &ConicParametrization) -> Result<BinaryForm> {
    BinaryForm::from_form(&param.substitute(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Conic;
    use crate::form::{combine, LinearForm};
    use proptest::prelude::*;

    fn bf(terms: &[(u32, u32, i64)]) -> BinaryForm {
        let d = terms[0].0 + terms[0].1;
        BinaryForm::from_form(
            &HomogeneousForm::from_terms(
                2,
                d,
                terms
                    .iter()
                    .map(|&(a, b, c)| (vec![a, b], Scalar::from_i64(c))),
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn pt(a: i64, b: i64) -> ProjectivePoint {
        ProjectivePoint::from_ints(&[a, b]).unwrap()
    }

    fn gap() -> BinaryForm {
        bf(&[(3, 0, 2), (1, 2, -6)])
    }

    #[test]
    fn hankel_kernel_examples() {
        let k = hankel_kernel(&bf(&[(3, 0, 1)]), 1).unwrap();
        assert_eq!(
            k,
            vec![HomogeneousForm::from_terms(2, 1, [(vec![0, 1], Scalar::one())]).unwrap()]
        );
        let k = hankel_kernel(&gap(), 2).unwrap();
        assert_eq!(k.len(), 1);
        let sum_sq = HomogeneousForm::from_terms(
            2,
            2,
            [(vec![2, 0], Scalar::one()), (vec![0, 2], Scalar::one())],
        )
        .unwrap();
        assert!(k[0].projectively_equal(&sum_sq));
        assert_eq!(gap().scaled(), &[2, 0, -2, 0].map(Scalar::from_i64));
    }

    #[test]
    fn gap_form_ranks_and_decompositions() {
        let f = gap();
        let c = complex_rank(&f).unwrap();
        assert_eq!(c.rank, 2);
        let i_pt =
            |s: i64| ProjectivePoint::new(vec![Scalar::one(), Scalar::gaussian(0, s)]).unwrap();
        assert_eq!(
            c.support,
            Support::Exact {
                points: vec![i_pt(-1), i_pt(1)],
                coeffs: vec![Scalar::one(), Scalar::one()]
            }
        );
        let r = real_rank(&f).unwrap();
        assert_eq!(r.rank, 3);
        assert_eq!(r.minimality, Some(Minimality::Exact));
        assert_eq!(
            r.support,
            Support::Exact {
                points: vec![pt(1, -1), pt(1, 0), pt(1, 1)],
                coeffs: [-1, 4, -1].map(Scalar::from_i64).to_vec()
            }
        );
        assert!(c.verify(&f) && r.verify(&f));
        let expected = combine(
            &[
                (Scalar::from_i64(4), LinearForm::from_ints(&[1, 0]).unwrap()),
                (
                    Scalar::from_i64(-1),
                    LinearForm::from_ints(&[1, 1]).unwrap(),
                ),
                (
                    Scalar::from_i64(-1),
                    LinearForm::from_ints(&[1, -1]).unwrap(),
                ),
            ],
            3,
        )
        .unwrap();
        assert_eq!(r.reconstruct(3).unwrap(), expected);
    }

    #[test]
    fn small_examples() {
        for d in 1..=8 {
            let f = bf(&[(d, 0, 1)]);
            assert_eq!(complex_rank(&f).unwrap().rank, 1);
            assert_eq!(real_rank(&f).unwrap().rank, 1);
        }
        let c = complex_rank(&bf(&[(2, 1, 1)])).unwrap();
        assert_eq!(c.rank, 3);
        assert!(c.verify(&bf(&[(2, 1, 1)])));
        let f = bf(&[(3, 0, 1), (0, 3, 1)]);
        let r = real_rank(&f).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.points().unwrap(), &[pt(0, 1), pt(1, 0)]);
    }

    /// Classical closed form for monomials, frozen here as the oracle.
    #[test]
    fn monomial_law() {
        for d in 2..=8u32 {
            for a in 1..d {
                let b = d - a;
                let f = bf(&[(a, b, 1)]);
                let c = complex_rank(&f).unwrap();
                assert_eq!(c.rank as u32, a.max(b) + 1, "x^{a} y^{b}");
                assert!(c.verify(&f));
            }
        }
    }

    #[test]
    fn implicit_mode_is_certified() {
        // Scaled coefficients (1, 0, 1, 1): the rank-2 generator u² − u − 1
        // has irrational roots.
        let f = BinaryForm::from_scaled([1, 0, 1, 1].map(Scalar::from_i64).to_vec()).unwrap();
        let c = complex_rank(&f).unwrap();
        assert_eq!(c.rank, 2);
        assert!(!c.is_exact());
        assert!(c.verify(&f));
        let r = real_rank(&f).unwrap();
        assert_eq!(r.rank, 2);
        assert!(r.verify(&f));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["mode"], "implicit");
        assert_eq!(json["field"], "R");
        let back: BinaryDecomposition = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn json_shape_exact() {
        let c = complex_rank(&gap()).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["coeffs", "field", "minimality", "mode", "points", "rank"]
        );
        assert_eq!(v["points"][1][1]["im"], "1/1");
    }

    #[test]
    fn pullback_examples() {
        let h = Scalar::from_ratio(1, 2);
        let z = Scalar::zero();
        let m = [
            [z.clone(), z.clone(), h.clone()],
            [z.clone(), Scalar::from_i64(-1), z.clone()],
            [h, z.clone(), z],
        ];
        let param =
            ConicParametrization::new(Conic::in_plane_p2(m).unwrap(), ExactMatrix::identity(3))
                .unwrap();
        let zf = HomogeneousForm::from_terms(3, 1, [(vec![0, 0, 1], Scalar::one())]).unwrap();
        assert_eq!(
            pullback_conic(&zf, &param).unwrap().to_form(),
            HomogeneousForm::from_terms(2, 2, [(vec![0, 2], Scalar::one())]).unwrap()
        );
        let xz = HomogeneousForm::from_terms(3, 2, [(vec![1, 0, 1], Scalar::one())]).unwrap();
        let p = pullback_conic(&xz, &param).unwrap();
        assert_eq!(p.degree(), 4);
        assert_eq!(
            p.to_form(),
            HomogeneousForm::from_terms(2, 4, [(vec![2, 2], Scalar::one())]).unwrap()
        );
    }

    fn arb_real_form(max_d: u32) -> impl Strategy<Value = BinaryForm> {
        (1..=max_d).prop_flat_map(|d| {
            proptest::collection::vec(-4i64..5, d as usize + 1).prop_filter_map(
                "nonzero",
                move |c| {
                    let f = HomogeneousForm::from_terms(
                        2,
                        d,
                        c.iter()
                            .enumerate()
                            .map(|(k, &v)| (vec![d - k as u32, k as u32], Scalar::from_i64(v))),
                    )
                    .ok()?;
                    (!f.is_zero()).then(|| BinaryForm::from_form(&f).unwrap())
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// r_ℂ ≤ r_ℝ ≤ d, both decompositions reconstruct, and the complex
        /// support of a real form is closed under conjugation.
        #[test]
        fn rank_bounds_and_reconstruction(f in arb_real_form(6)) {
            let c = complex_rank(&f).unwrap();
            let r = real_rank(&f).unwrap();
            prop_assert!(c.rank <= r.rank && r.rank <= f.degree() as usize);
            prop_assert!(c.verify(&f));
            prop_assert!(r.verify(&f));
            match &c.support {
                Support::Exact { points, .. } => {
                    for p in points {
                        prop_assert!(points.contains(&p.conjugate()));
                    }
                }
                Support::Implicit { generator, .. } => prop_assert!(generator.is_real()),
            }
        }

        /// Ranks are unchanged by an invertible rational change of variables.
        #[test]
        fn gl2_invariance(f in arb_real_form(5), m in proptest::array::uniform4(-3i64..4)) {
            prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
            let lin = |a: i64, b: i64| HomogeneousForm::from_terms(2, 1, [(vec![1, 0], Scalar::from_i64(a)), (vec![0, 1], Scalar::from_i64(b))]).unwrap();
            let g = BinaryForm::from_form(&f.to_form().substitute(&[lin(m[0], m[1]), lin(m[2], m[3])]).unwrap()).unwrap();
            prop_assert_eq!(complex_rank(&f).unwrap().rank, complex_rank(&g).unwrap().rank);
            prop_assert_eq!(real_rank(&f).unwrap().rank, real_rank(&g).unwrap().rank);
        }

        /// At r = d the kernel dimension is d + 1 − rank of the single row.
        #[test]
        fn top_kernel_dimension(f in arb_real_form(8)) {
            let d = f.degree();
            prop_assert_eq!(hankel_kernel(&f, d).unwrap().len(), d as usize);
        }
    }
}
