//! Homogeneous forms with exact coefficients, linear forms and their powers.
//!
//! Monomials are ordered graded-lexicographically with `x0^d` first. That
//! order fixes both the serialized term order and every matrix column order
//! in the crate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, GaussInt, Scalar};

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type MonomialCache = Mutex<HashMap<(usize, u32), Arc<Vec<Monomial>>>>;

/// All degree-`d` monomials in `n` variables, in graded lex order.
pub fn monomials(n: usize, d: u32) -> Arc<Vec<Monomial>> {
    static CACHE: OnceLock<MonomialCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(n, d)) {
        return v.clone();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fill_monomials(&mut cur, 0, d, &mut out);
    let out = Arc::new(out);
    cache.lock().unwrap().insert((n, d), out.clone());
    out
}

fn fill_monomials(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(Monomial(cur.clone()));
        return;
    }
    if cur.is_empty() {
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill_monomials(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

/// Number of degree-`d` monomials in `n` variables, `C(n-1+d, d)`.
pub fn monomial_count(n: usize, d: u32) -> usize {
    binomial((n as u64) - 1 + d as u64, d as u64) as usize
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `d! / (α₀! ⋯ αₘ!)` for `d = |α|`.
pub fn multinomial(alpha: &[u32]) -> BigInt {
    let d: u32 = alpha.iter().sum();
    alpha
        .iter()
        .fold(factorial(d), |acc, &a| acc / factorial(a))
}

/// Scale a coordinate vector so that its first nonzero entry is 1.
/// Returns `None` for the zero vector.
pub(crate) fn normalize_projective(mut coords: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let lead = coords.iter().find(|c| !c.is_zero())?.inv().ok()?;
    for c in coords.iter_mut() {
        *c = &*c * &lead;
    }
    Some(coords)
}

/// A linear form `Σ aₖ xₖ`, stored by its canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct LinearForm {
    coeffs: Vec<Scalar>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        let coeffs = normalize_projective(coeffs)
            .ok_or_else(|| Error::InvalidInput("linear form with all coefficients zero".into()))?;
        Ok(LinearForm { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        LinearForm::new(coeffs.iter().map(|&c| Scalar::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    pub fn conjugate(&self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(Scalar::conj).collect(),
        }
    }
}

/// A degree-`d` form in `num_vars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousForm {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl HomogeneousForm {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        HomogeneousForm {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut f = HomogeneousForm::zero(num_vars, degree);
        for (exp, c) in terms {
            if exp.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: exp.len(),
                });
            }
            let deg: u32 = exp.iter().sum();
            if deg != degree {
                return Err(Error::InvalidInput(format!(
                    "monomial {exp:?} has degree {deg}, form has degree {degree}"
                )));
            }
            f.add_term(Monomial(exp), &c);
        }
        Ok(f)
    }

    /// Build from a dense coefficient vector in graded lex order.
    pub fn from_dense(num_vars: usize, degree: u32, coeffs: &[Scalar]) -> Result<Self> {
        let mons = monomials(num_vars, degree);
        if coeffs.len() != mons.len() {
            return Err(Error::DimensionMismatch {
                expected: mons.len(),
                found: coeffs.len(),
            });
        }
        let mut f = HomogeneousForm::zero(num_vars, degree);
        for (m, c) in mons.iter().zip(coeffs) {
            f.add_term(m.clone(), c);
        }
        Ok(f)
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Projective dimension `m` of the ambient space, i.e. `num_vars − 1`.
    pub fn m(&self) -> usize {
        self.num_vars - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exp.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// Dense coefficient vector in graded lex order.
    pub fn dense(&self) -> Vec<Scalar> {
        monomials(self.num_vars, self.degree)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_default())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    pub fn field_tag(&self) -> FieldTag {
        if self.is_real() {
            FieldTag::Rational
        } else {
            FieldTag::GaussianRational
        }
    }

    fn check_compatible(&self, other: &HomogeneousForm) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree as usize,
                found: other.degree as usize,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.add(&other.scale(&Scalar::from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> HomogeneousForm {
        let mut out = HomogeneousForm::zero(self.num_vars, self.degree);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        out
    }

    pub fn mul(&self, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let mut out = HomogeneousForm::zero(self.num_vars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn conjugate(&self) -> HomogeneousForm {
        HomogeneousForm {
            num_vars: self.num_vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: point.len(),
            });
        }
        // Integer arithmetic throughout, one division at the end.
        let (lp, q) = GaussInt::clear_denominators(point);
        let (lc, coeffs) = GaussInt::clear_denominators(self.terms.values());
        let powers: Vec<Vec<GaussInt>> = q.iter().map(|z| z.powers(self.degree)).collect();
        let mut acc = GaussInt::zero();
        for (m, c) in self.terms.keys().zip(&coeffs) {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[k][e as usize]);
                }
            }
            acc.add_assign(&t);
        }
        Ok(acc.to_scalar().scale(&BigRational::new(
            BigInt::one(),
            lc * num_traits::pow(lp, self.degree as usize),
        )))
    }

    /// Substitute `x_k ↦ images[k]`; all images must share one degree and one
    /// variable count.
    pub fn substitute(&self, images: &[HomogeneousForm]) -> Result<HomogeneousForm> {
        if images.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: images.len(),
            });
        }
        let first = &images[0];
        for im in images {
            first.check_compatible(im)?;
        }
        let (nv, e) = (first.num_vars, first.degree);
        let one = HomogeneousForm::constant(nv, Scalar::one());
        let mut powers: Vec<Vec<HomogeneousForm>> = Vec::with_capacity(images.len());
        for im in images {
            let mut p = vec![one.clone()];
            for k in 1..=self.degree as usize {
                let next = p[k - 1].mul(im)?;
                p.push(next);
            }
            powers.push(p);
        }
        let mut out = HomogeneousForm::zero(nv, e * self.degree);
        for (m, c) in &self.terms {
            let mut t = HomogeneousForm::constant(nv, c.clone());
            for (k, &ek) in m.0.iter().enumerate() {
                if ek > 0 {
                    t = t.mul(&powers[k][ek as usize])?;
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, &cc);
            }
        }
        Ok(out)
    }

    fn constant(num_vars: usize, c: Scalar) -> HomogeneousForm {
        let mut f = HomogeneousForm::zero(num_vars, 0);
        f.add_term(Monomial(vec![0; num_vars]), &c);
        f
    }

    /// The representative whose leading coefficient (graded lex) is 1.
    pub fn projective_normalized(&self) -> Option<HomogeneousForm> {
        let lead = self.terms.values().next()?.inv().ok()?;
        Some(self.scale(&lead))
    }

    /// Equality as points of projective space.
    pub fn projectively_equal(&self, other: &HomogeneousForm) -> bool {
        match (self.projective_normalized(), other.projective_normalized()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => true,
            _ => false,
        }
    }
}

/// `L^d` expanded with multinomial coefficients.
pub fn power_of_linear(l: &LinearForm, d: u32) -> Result<HomogeneousForm> {
    power_of_coords(l.coeffs(), d)
}

pub(crate) fn power_of_coords(coeffs: &[Scalar], d: u32) -> Result<HomogeneousForm> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "power degree must be at least 1".into(),
        ));
    }
    let n = coeffs.len();
    let (l, q) = GaussInt::clear_denominators(coeffs);
    let powers: Vec<Vec<GaussInt>> = q.iter().map(|z| z.powers(d)).collect();
    let inv = BigRational::new(BigInt::one(), num_traits::pow(l, d as usize));
    let mut f = HomogeneousForm::zero(n, d);
    for m in monomials(n, d).iter() {
        let mut t = GaussInt {
            re: multinomial(&m.0),
            im: BigInt::zero(),
        };
        for (k, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&powers[k][e as usize]);
            }
        }
        f.add_term(m.clone(), &t.to_scalar().scale(&inv));
    }
    Ok(f)
}

/// `Σ cᵢ Lᵢ^d`.
pub fn combine(terms: &[(Scalar, LinearForm)], d: u32) -> Result<HomogeneousForm> {
    let n = terms
        .first()
        .ok_or_else(|| Error::InvalidInput("combine needs at least one term".into()))?
        .1
        .num_vars();
    let mut acc = HomogeneousForm::zero(n, d);
    for (c, l) in terms {
        if l.num_vars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: l.num_vars(),
            });
        }
        acc = acc.add(&power_of_linear(l, d)?.scale(c))?;
    }
    Ok(acc)
}

pub fn conjugate_form(f: &HomogeneousForm) -> HomogeneousForm {
    f.conjugate()
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    #[serde(flatten)]
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    m: usize,
    d: u32,
    terms: Vec<TermRepr>,
}

impl Serialize for HomogeneousForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            m: self.m(),
            d: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exp: m.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FormRepr::deserialize(d)?;
        if r.d == 0 {
            return Err(D::Error::custom("form degree must be at least 1"));
        }
        HomogeneousForm::from_terms(r.m + 1, r.d, r.terms.into_iter().map(|t| (t.exp, t.coeff)))
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(n: i64) -> Scalar {
        Scalar::from_i64(n)
    }

    fn lf(c: &[i64]) -> LinearForm {
        LinearForm::from_ints(c).unwrap()
    }

    /// Naive expansion oracle: multiply `L` by itself `d` times.
    fn naive_power(l: &LinearForm, d: u32) -> HomogeneousForm {
        let n = l.num_vars();
        let lin = HomogeneousForm::from_terms(
            n,
            1,
            l.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; n];
                e[k] = 1;
                (e, c.clone())
            }),
        )
        .unwrap();
        let mut acc = lin.clone();
        for _ in 1..d {
            acc = acc.mul(&lin).unwrap();
        }
        acc
    }

    #[test]
    fn grlex_order() {
        let m: Vec<Vec<u32>> = monomials(3, 2).iter().map(|m| m.0.clone()).collect();
        assert_eq!(
            m,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        assert_eq!(monomial_count(5, 6), 210);
        assert_eq!(monomials(5, 6).len(), 210);
    }

    #[test]
    fn power_of_single_variable() {
        let f = power_of_linear(&lf(&[1, 0]), 3).unwrap();
        assert_eq!(
            f,
            HomogeneousForm::from_terms(2, 3, [(vec![3, 0], s(1))]).unwrap()
        );
    }

    #[test]
    fn binomial_square() {
        let f = power_of_linear(&lf(&[1, 1]), 2).unwrap();
        let want = HomogeneousForm::from_terms(
            2,
            2,
            [(vec![2, 0], s(1)), (vec![1, 1], s(2)), (vec![0, 2], s(1))],
        )
        .unwrap();
        assert_eq!(f, want);
    }

    #[test]
    fn power_of_x_plus_iy() {
        let l = LinearForm::new(vec![s(1), Scalar::i()]).unwrap();
        let f = power_of_linear(&l, 3).unwrap();
        let want = HomogeneousForm::from_terms(
            2,
            3,
            [
                (vec![3, 0], s(1)),
                (vec![2, 1], Scalar::gaussian(0, 3)),
                (vec![1, 2], s(-3)),
                (vec![0, 3], Scalar::gaussian(0, -1)),
            ],
        )
        .unwrap();
        assert_eq!(f, want);
        // Evaluation oracle at 5 rational points.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let q = vec![
                Scalar::real(rat(rng.gen_range(-9..9), rng.gen_range(1..5))),
                Scalar::real(rat(rng.gen_range(-9..9), rng.gen_range(1..5))),
            ];
            let lq = &(&q[0] * &l.coeffs()[0]) + &(&q[1] * &l.coeffs()[1]);
            assert_eq!(f.evaluate(&q).unwrap(), lq.pow(3));
        }
    }

    #[test]
    fn combine_examples() {
        let x3y3 = combine(&[(s(1), lf(&[1, 0])), (s(1), lf(&[0, 1]))], 3).unwrap();
        assert_eq!(
            x3y3,
            HomogeneousForm::from_terms(2, 3, [(vec![3, 0], s(1)), (vec![0, 3], s(1))]).unwrap()
        );
        let target =
            HomogeneousForm::from_terms(2, 3, [(vec![3, 0], s(2)), (vec![1, 2], s(-6))]).unwrap();
        let pair = combine(
            &[
                (s(1), LinearForm::new(vec![s(1), Scalar::i()]).unwrap()),
                (
                    s(1),
                    LinearForm::new(vec![s(1), Scalar::gaussian(0, -1)]).unwrap(),
                ),
            ],
            3,
        )
        .unwrap();
        assert_eq!(pair, target);
        assert_eq!(
            naive_power(&lf(&[1, 1]), 3)
                .add(&naive_power(&lf(&[1, -1]), 3))
                .unwrap()
                .scale(&s(-1))
                .add(&naive_power(&lf(&[1, 0]), 3).scale(&s(4)))
                .unwrap(),
            target
        );
        let real3 = combine(
            &[
                (s(4), lf(&[1, 0])),
                (s(-1), lf(&[1, 1])),
                (s(-1), lf(&[1, -1])),
            ],
            3,
        )
        .unwrap();
        assert_eq!(real3, target);
        assert!(pair.is_real());
    }

    #[test]
    fn combine_rejects_mixed_dimensions() {
        let r = combine(&[(s(1), lf(&[1, 0])), (s(1), lf(&[0, 1, 0]))], 2);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        assert!(combine(&[], 2).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let f = HomogeneousForm::from_terms(2, 3, [(vec![3, 0], s(1)), (vec![0, 3], Scalar::i())])
            .unwrap();
        let g = HomogeneousForm::from_terms(
            2,
            3,
            [(vec![3, 0], s(1)), (vec![0, 3], Scalar::gaussian(0, -1))],
        )
        .unwrap();
        assert_eq!(conjugate_form(&f), g);
        let real = combine(&[(s(2), lf(&[1, 2, 3]))], 4).unwrap();
        assert_eq!(conjugate_form(&real), real);
    }

    #[test]
    fn json_shape() {
        let f = HomogeneousForm::from_terms(
            2,
            2,
            [(vec![0, 2], s(1)), (vec![2, 0], Scalar::from_ratio(1, 2))],
        )
        .unwrap();
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(
            js,
            r#"{"m":1,"d":2,"terms":[{"exp":[2,0],"re":"1/2","im":"0/1"},{"exp":[0,2],"re":"1/1","im":"0/1"}]}"#
        );
        let back: HomogeneousForm = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<HomogeneousForm>(
            r#"{"m":1,"d":2,"terms":[{"exp":[1,0],"re":"1","im":"0"}]}"#
        )
        .is_err());
    }

    fn arb_coords(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
        proptest::collection::vec((-4i64..5, -3i64..4), n).prop_filter_map("nonzero", |v| {
            let c: Vec<Scalar> = v.into_iter().map(|(a, b)| Scalar::gaussian(a, b)).collect();
            if c.iter().all(Scalar::is_zero) {
                None
            } else {
                Some(c)
            }
        })
    }

    proptest! {
        #[test]
        fn power_evaluates_to_power(l in arb_coords(3), q in arb_coords(3), d in 1u32..6) {
            let lf = LinearForm::new(l).unwrap();
            let f = power_of_linear(&lf, d).unwrap();
            let lq = lf.coeffs().iter().zip(&q).fold(Scalar::zero(), |a, (x, y)| &a + &(x * y));
            prop_assert_eq!(f.evaluate(&q).unwrap(), lq.pow(d));
            prop_assert_eq!(f, naive_power(&lf, d));
        }

        #[test]
        fn combine_is_linear(l1 in arb_coords(3), l2 in arb_coords(3), c in -20i64..20, k in 1i64..9) {
            let (a, b) = (LinearForm::new(l1).unwrap(), LinearForm::new(l2).unwrap());
            let r = Scalar::from_ratio(c, k);
            let base = combine(&[(s(1), a.clone()), (s(3), b.clone())], 3).unwrap();
            let scaled = combine(&[(r.clone(), a), (&r * &s(3), b)], 3).unwrap();
            prop_assert_eq!(scaled, base.scale(&r));
        }

        #[test]
        fn conjugate_pairs_give_real_forms(l in arb_coords(3), c in (-5i64..5, -5i64..5), d in 1u32..5) {
            let a = LinearForm::new(l).unwrap();
            let coef = Scalar::gaussian(c.0, c.1);
            let f = combine(&[(coef.clone(), a.clone()), (coef.conj(), a.conjugate())], d).unwrap();
            prop_assert!(f.is_real());
            prop_assert_eq!(conjugate_form(&conjugate_form(&f)), f);
        }
    }
}
