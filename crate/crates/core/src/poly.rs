//! Dense univariate polynomials over ℚ(i), with Sturm sequences for real ones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        UniPoly::new(vec![c])
    }

    /// `u − z`.
    pub fn linear_root(z: &Scalar) -> Self {
        UniPoly::new(vec![-z, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * z) + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_default();
                    let b = o.coeffs.get(k).cloned().unwrap_or_default();
                    &a + &b
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().expect("nonzero").inv().expect("nonzero");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    let v = &r[k + j] - &(&c * dj);
                    r[k + j] = v;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().expect("nonzero")),
            None => UniPoly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Real parts of the coefficients.
    pub fn real_coeffs(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| c.re().clone()).collect()
    }
}

/// Dense real polynomial helpers for Sturm sequences.
fn eval_real(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rem_real(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let c = r.last().expect("nonempty") / b.last().expect("nonzero");
        let shift = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &c * bj;
        }
        r = trim(r);
    }
    r
}

/// The Sturm sequence of a real polynomial. Entries are scaled by positive
/// rationals to keep coefficients small, which leaves sign patterns intact.
pub fn sturm_sequence(p: &UniPoly) -> Vec<Vec<BigRational>> {
    debug_assert!(p.is_real());
    let p0 = trim(p.real_coeffs());
    if p0.is_empty() {
        return Vec::new();
    }
    let p1 = trim(p.derivative().real_coeffs());
    let mut seq = vec![p0, p1];
    while seq.last().is_some_and(|q| !q.is_empty()) {
        let n = seq.len();
        let r = rem_real(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        let scale = r.last().expect("nonempty").abs();
        seq.push(r.into_iter().map(|c| -c / &scale).collect());
    }
    seq.retain(|q| !q.is_empty());
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            n += 1;
        }
        prev = s;
    }
    n
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_at_infinity(q: &[BigRational], negative: bool) -> i8 {
    let s = sign(q.last().expect("nonempty"));
    if negative && (q.len() - 1) % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Number of distinct real roots of a nonzero real polynomial.
pub fn count_real_roots(p: &UniPoly) -> usize {
    let seq = sturm_sequence(p);
    if seq.is_empty() {
        return 0;
    }
    let at_neg = sign_changes(seq.iter().map(|q| sign_at_infinity(q, true)));
    let at_pos = sign_changes(seq.iter().map(|q| sign_at_infinity(q, false)));
    at_neg - at_pos
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_real_roots_in(seq: &[Vec<BigRational>], a: &BigRational, b: &BigRational) -> usize {
    let at = |x: &BigRational| sign_changes(seq.iter().map(|q| sign(&eval_real(q, x))));
    at(a) - at(b)
}

/// Isolating intervals `(lo, hi]` of width below `width` for the real roots
/// of a square-free real polynomial, in increasing order.
pub fn isolate_real_roots(p: &UniPoly, width: &BigRational) -> Vec<(BigRational, BigRational)> {
    let seq = sturm_sequence(p);
    if seq.is_empty() {
        return Vec::new();
    }
    let lead = p.lead().expect("nonzero").re().abs();
    let bound = p
        .coeffs()
        .iter()
        .fold(BigRational::zero(), |acc, c| acc.max(c.re().abs() / &lead))
        + BigRational::one();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let n = count_real_roots_in(&seq, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 && &b - &a < *width {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| Scalar::from_i64(x)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (u−1)²(u+2) and (u−1)(u+3).
        let a = poly(&[2, -3, 0, 1]);
        let b = poly(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), poly(&[-1, 1]));
        assert!(!a.is_squarefree());
        assert!(b.is_squarefree());
        assert!(poly(&[1, 0, 1]).is_squarefree());
    }

    #[test]
    fn divrem_roundtrip() {
        let a = poly(&[5, -1, 3, 2, 7]);
        let b = poly(&[1, 2, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&poly(&[1, 0, 1])), 0);
        assert_eq!(count_real_roots(&poly(&[-1, 0, 1])), 2);
        // u³ − 3u has three real roots.
        assert_eq!(count_real_roots(&poly(&[0, -3, 0, 1])), 3);
        // Repeated roots count once.
        assert_eq!(count_real_roots(&poly(&[1, -2, 1])), 1);
        let roots = isolate_real_roots(&poly(&[0, -3, 0, 1]), &rat(1, 1000));
        assert_eq!(roots.len(), 3);
        assert!(roots[1].0 < BigRational::zero() && roots[1].1 >= BigRational::zero());
    }

    proptest! {
        /// Sturm agrees with a product of chosen linear factors and an
        /// irreducible quadratic.
        #[test]
        fn sturm_matches_constructed_roots(roots in proptest::collection::btree_set(-20i64..20, 0..6), q in 1i64..5) {
            let mut p = poly(&[q, 0, 1]);
            for r in &roots {
                p = p.mul(&poly(&[-*r, 1]));
            }
            prop_assert_eq!(count_real_roots(&p), roots.len());
            prop_assert!(p.is_squarefree());
            let iso = isolate_real_roots(&p, &rat(1, 100));
            prop_assert_eq!(iso.len(), roots.len());
            for ((a, b), r) in iso.iter().zip(&roots) {
                let r = BigRational::from_integer(BigInt::from(*r));
                prop_assert!(*a < r && r <= *b);
            }
        }
    }
}
