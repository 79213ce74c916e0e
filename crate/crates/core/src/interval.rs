//! Interval arithmetic over ℂ (rectangular boxes). Endpoints live on a fixed
//! dyadic grid and every operation rounds outward onto it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Scalar};

/// Endpoints are multiples of `2^-GRID_BITS`, stored as integer mantissas.
pub const GRID_BITS: u32 = 400;

fn grid() -> BigInt {
    BigInt::one() << GRID_BITS
}

fn floor_mantissa(x: &BigRational) -> BigInt {
    (x.numer() << GRID_BITS as usize).div_floor(x.denom())
}

fn ceil_mantissa(x: &BigRational) -> BigInt {
    (x.numer() << GRID_BITS as usize).div_ceil(x.denom())
}

fn shr_floor(x: &BigInt) -> BigInt {
    x >> GRID_BITS as usize
}

fn shr_ceil(x: &BigInt) -> BigInt {
    -((-x) >> GRID_BITS as usize)
}

fn to_rational(m: &BigInt) -> BigRational {
    BigRational::new(m.clone(), grid())
}

/// A closed real interval with dyadic endpoints; constructors round outward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval::new(x.clone(), x)
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval {
            lo: floor_mantissa(&lo),
            hi: ceil_mantissa(&hi),
        }
    }

    pub fn lo(&self) -> BigRational {
        to_rational(&self.lo)
    }

    pub fn hi(&self) -> BigRational {
        to_rational(&self.hi)
    }

    pub fn width(&self) -> BigRational {
        to_rational(&(&self.hi - &self.lo))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let scaled = x.numer() << GRID_BITS as usize;
        &self.lo * x.denom() <= scaled && scaled <= &self.hi * x.denom()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, grid() << 1usize)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("4 items");
        let hi = c.iter().max().expect("4 items");
        Interval {
            lo: shr_floor(lo),
            hi: shr_ceil(hi),
        }
    }

    pub fn square(&self) -> Interval {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let (small, big) = if a < b { (a, b) } else { (b, a) };
        let lo = if self.contains_zero() {
            BigInt::zero()
        } else {
            shr_floor(&(&small * &small))
        };
        Interval {
            lo,
            hi: shr_ceil(&(&big * &big)),
        }
    }

    /// Reciprocal of a strictly positive interval.
    fn recip_positive(&self) -> Result<Interval> {
        if !self.lo.is_positive() {
            return Err(Error::DivisionByZero);
        }
        let one = BigInt::one() << (2 * GRID_BITS as usize);
        Ok(Interval {
            lo: one.div_floor(&self.hi),
            hi: one.div_ceil(&self.lo),
        })
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            lo: String,
            hi: String,
        }
        Repr {
            lo: format_rational(&self.lo()),
            hi: format_rational(&self.hi()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            lo: String,
            hi: String,
        }
        let r = Repr::deserialize(d)?;
        let lo = parse_rational(&r.lo).map_err(serde::de::Error::custom)?;
        let hi = parse_rational(&r.hi).map_err(serde::de::Error::custom)?;
        if lo > hi {
            return Err(serde::de::Error::custom("interval with lo > hi"));
        }
        Ok(Interval::new(lo, hi))
    }
}

/// A rectangle `re × im` in ℂ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn point(z: &Scalar) -> Self {
        CInterval {
            re: Interval::point(z.re().clone()),
            im: Interval::point(z.im().clone()),
        }
    }

    /// The square of half-width `rho` centered at `z`.
    pub fn around(z: &Scalar, rho: &BigRational) -> Self {
        CInterval {
            re: Interval::new(z.re() - rho, z.re() + rho),
            im: Interval::new(z.im() - rho, z.im() + rho),
        }
    }

    pub fn zero() -> Self {
        CInterval::point(&Scalar::zero())
    }

    pub fn one() -> Self {
        CInterval::point(&Scalar::one())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, z: &Scalar) -> bool {
        self.re.contains(z.re()) && self.im.contains(z.im())
    }

    pub fn width(&self) -> BigRational {
        self.re.width().max(self.im.width())
    }

    pub fn mid(&self) -> Scalar {
        Scalar::new(self.re.mid(), self.im.mid())
    }

    pub fn add(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn pow(&self, e: u32) -> CInterval {
        (0..e).fold(CInterval::one(), |acc, _| acc.mul(self))
    }

    /// `self / o`, failing when `o` may vanish.
    pub fn div(&self, o: &CInterval) -> Result<CInterval> {
        let norm = o.re.square().add(&o.im.square());
        let inv = norm.recip_positive()?;
        let conj = CInterval {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let num = self.mul(&conj);
        Ok(CInterval {
            re: num.re.mul(&inv),
            im: num.im.mul(&inv),
        })
    }
}

/// Interval Gaussian elimination for a square system, pivoting on the
/// entry whose midpoint has the largest modulus. Fails when a pivot box
/// may contain zero.
pub fn solve_square(mut a: Vec<Vec<CInterval>>, mut b: Vec<CInterval>) -> Result<Vec<CInterval>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.len(),
        });
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by_key(|&r| a[r][col].mid().norm_sqr())
            .expect("nonempty range");
        a.swap(col, piv);
        b.swap(col, piv);
        if a[col][col].contains_zero() {
            return Err(Error::DivisionByZero);
        }
        for r in col + 1..n {
            let f = a[r][col].div(&a[col][col])?;
            for j in col..n {
                let v = a[r][j].sub(&f.mul(&a[col][j]));
                a[r][j] = v;
            }
            b[r] = b[r].sub(&f.mul(&b[col]));
        }
    }
    let mut x = vec![CInterval::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc = acc.sub(&a[i][j].mul(&x[j]));
        }
        x[i] = acc.div(&a[i][i])?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    proptest! {
        /// Interval operations enclose the exact results for points inside.
        #[test]
        fn enclosure(a in -50i64..50, b in -50i64..50, c in -50i64..50, e in -50i64..50, w in 1i64..100) {
            let x = Scalar::new(rat(a, 7), rat(b, 3));
            let y = Scalar::new(rat(c, 5), rat(e, 11));
            let rho = rat(1, w * 1000);
            let bx = CInterval::around(&x, &rho);
            let by = CInterval::around(&y, &rho);
            prop_assert!(bx.mul(&by).contains(&(&x * &y)));
            prop_assert!(bx.add(&by).contains(&(&x + &y)));
            prop_assert!(bx.sub(&by).contains(&(&x - &y)));
            if !by.contains_zero() {
                prop_assert!(bx.div(&by).unwrap().contains(&(&x / &y)));
            }
        }
    }

    #[test]
    fn interval_solve_encloses_exact_solution() {
        // [[2, 1], [1, 3]]·x = [3, 5] has x = [4/5, 7/5].
        let rho = rat(1, 1_000_000);
        let a = vec![
            vec![
                CInterval::around(&Scalar::from_i64(2), &rho),
                CInterval::point(&Scalar::one()),
            ],
            vec![
                CInterval::point(&Scalar::one()),
                CInterval::around(&Scalar::from_i64(3), &rho),
            ],
        ];
        let b = vec![
            CInterval::point(&Scalar::from_i64(3)),
            CInterval::point(&Scalar::from_i64(5)),
        ];
        let x = solve_square(a, b).unwrap();
        assert!(x[0].contains(&Scalar::from_ratio(4, 5)));
        assert!(x[1].contains(&Scalar::from_ratio(7, 5)));
        assert!(x[0].width() < rat(1, 10_000));
    }

    #[test]
    fn division_by_box_around_zero_fails() {
        let z = CInterval::around(&Scalar::zero(), &rat(1, 10));
        assert!(CInterval::one().div(&z).is_err());
    }
}
