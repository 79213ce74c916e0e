//! Roots of univariate polynomials over ℚ(i): exact roots when they lie in
//! ℚ(i), certified isolating boxes otherwise.
//!
//! Approximations come from Aberth iteration, first in `f64` and then in
//! dyadic rationals. A disk of radius `n·|p(z)/p'(z)|` around any `z` contains
//! a root of a degree-`n` polynomial; when these disks are pairwise disjoint
//! each holds exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::Scalar;

/// Width bound for every certified enclosure: `1e-30`.
pub fn certified_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(30))
}

/// Target box width: every half-width is below `1e-31`.
pub fn target_radius() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(31))
}

fn to_c64(p: &UniPoly) -> Vec<Complex64> {
    p.coeffs().iter().map(Scalar::to_complex_f64).collect()
}

fn horner_c64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

/// Floating-point Aberth iteration; approximations only.
pub(crate) fn aberth_f64(p: &UniPoly) -> Vec<Complex64> {
    let c = to_c64(p);
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n].norm();
    let radius = 1.0 + c[..n].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5,
                0.4 + std::f64::consts::TAU * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, dv) = horner_c64(&c, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

fn dyadic(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

fn round_to(x: &BigRational, bits: u32) -> BigRational {
    let g = BigInt::one() << bits;
    let n = x.numer() * &g;
    let two = BigInt::from(2);
    // Round half away from zero.
    let q = (&n * &two
        + if n.is_negative() {
            -x.denom()
        } else {
            x.denom().clone()
        })
        / (x.denom() * &two);
    BigRational::new(q, g)
}

fn round_scalar(z: &Scalar, bits: u32) -> Scalar {
    Scalar::new(round_to(z.re(), bits), round_to(z.im(), bits))
}

/// Complex fixed-point value `(re + i·im) / 2^scale`; used only to produce
/// approximations, never for certified claims.
#[derive(Clone)]
struct Fixed {
    re: BigInt,
    im: BigInt,
}

struct FixedCtx {
    scale: u32,
}

impl FixedCtx {
    fn from_rational(&self, x: &BigRational) -> BigInt {
        let n = x.numer() << self.scale;
        let d = x.denom();
        let two = BigInt::from(2);
        (&n * &two + if n.is_negative() { -d } else { d.clone() }) / (d * &two)
    }

    fn from_scalar(&self, z: &Scalar) -> Fixed {
        Fixed {
            re: self.from_rational(z.re()),
            im: self.from_rational(z.im()),
        }
    }

    fn to_scalar(&self, z: &Fixed, bits: u32) -> Scalar {
        let g = BigInt::one() << self.scale;
        round_scalar(
            &Scalar::new(
                BigRational::new(z.re.clone(), g.clone()),
                BigRational::new(z.im.clone(), g),
            ),
            bits,
        )
    }

    fn add(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed {
            re: &a.re + &b.re,
            im: &a.im + &b.im,
        }
    }

    fn sub(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    fn mul(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.scale,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.scale,
        }
    }

    fn div(&self, a: &Fixed, b: &Fixed) -> Option<Fixed> {
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        let re = (&a.re * &b.re + &a.im * &b.im) << self.scale;
        let im = (&a.im * &b.re - &a.re * &b.im) << self.scale;
        Some(Fixed {
            re: re / &den,
            im: im / &den,
        })
    }

    fn one(&self) -> Fixed {
        Fixed {
            re: BigInt::one() << self.scale,
            im: BigInt::zero(),
        }
    }

    fn eval(&self, c: &[Fixed], z: &Fixed) -> (Fixed, Fixed) {
        let zero = Fixed {
            re: BigInt::zero(),
            im: BigInt::zero(),
        };
        let (mut v, mut dv) = (zero.clone(), zero);
        for a in c.iter().rev() {
            dv = self.add(&self.mul(&dv, z), &v);
            v = self.add(&self.mul(&v, z), a);
        }
        (v, dv)
    }
}

/// Aberth iteration in fixed point with 64 guard bits; results are rounded
/// to `2^-bits`.
fn aberth_refine(p: &UniPoly, start: &[Scalar], bits: u32) -> Vec<Scalar> {
    let ctx = FixedCtx { scale: bits + 64 };
    let c: Vec<Fixed> = p.coeffs().iter().map(|a| ctx.from_scalar(a)).collect();
    let n = start.len();
    let mut z: Vec<Fixed> = start.iter().map(|a| ctx.from_scalar(a)).collect();
    let tol = BigInt::one() << 64u32;
    for _ in 0..64 {
        let mut done = true;
        for k in 0..n {
            let (v, dv) = ctx.eval(&c, &z[k]);
            let Some(ratio) = ctx.div(&v, &dv) else {
                continue;
            };
            let mut s = Fixed {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
            for j in (0..n).filter(|&j| j != k) {
                if let Some(inv) = ctx.div(&ctx.one(), &ctx.sub(&z[k], &z[j])) {
                    s = ctx.add(&s, &inv);
                }
            }
            let denom = ctx.sub(&ctx.one(), &ctx.mul(&ratio, &s));
            let w = ctx.div(&ratio, &denom).unwrap_or(ratio);
            if w.re.abs() > tol || w.im.abs() > tol {
                done = false;
            }
            z[k] = ctx.sub(&z[k], &w);
        }
        if done {
            break;
        }
    }
    z.iter().map(|x| ctx.to_scalar(x, bits)).collect()
}

/// A dyadic upper bound of `√x` with denominator `2^bits`, within
/// `2^{1−bits}` of the true value.
pub fn sqrt_upper(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let scaled: BigInt = (x.numer() << (2 * bits as usize)) / x.denom() + BigInt::one();
    BigRational::new(scaled.sqrt() + BigInt::one(), BigInt::one() << bits)
}

/// Gaussian-integer coefficients `(re, im)` of `L·p` for a common
/// denominator `L`.
fn integer_coeffs(p: &UniPoly) -> Vec<(BigInt, BigInt)> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    p.coeffs()
        .iter()
        .map(|c| {
            let scale = |x: &BigRational| x.numer() * (&l / x.denom());
            (scale(c.re()), scale(c.im()))
        })
        .collect()
}

/// `Σ c_k·Z^k·2^{bits·(n−k)}` for `Z = X + iY`, the value at `Z/2^bits`
/// scaled by `2^{bits·n}`.
fn eval_scaled(c: &[(BigInt, BigInt)], x: &BigInt, y: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let n = c.len() - 1;
    let (mut vr, mut vi) = c[n].clone();
    for k in (0..n).rev() {
        let shift = bits as usize * (n - k);
        let (nr, ni) = (&vr * x - &vi * y, &vr * y + &vi * x);
        vr = nr + (&c[k].0 << shift);
        vi = ni + (&c[k].1 << shift);
    }
    (vr, vi)
}

/// Radii `ρ_i ≥ n·|p(z_i)/p'(z_i)|`, if the disks are pairwise disjoint.
/// Centers must be multiples of `2^-bits`.
fn certify(p: &UniPoly, z: &[Scalar], bits: u32) -> Option<Vec<BigRational>> {
    let c = integer_coeffs(p);
    // Derivative with the same denominator, so the ratio is exact.
    let dc: Vec<(BigInt, BigInt)> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, (a, b))| (a * k, b * k))
        .collect();
    let n = BigInt::from(z.len());
    let g = BigInt::one() << bits;
    let mut radii = Vec::with_capacity(z.len());
    for zi in z {
        let x = zi.re().numer() * (&g / zi.re().denom());
        let y = zi.im().numer() * (&g / zi.im().denom());
        let (vr, vi) = eval_scaled(&c, &x, &y, bits);
        let (dr, di) = eval_scaled(&dc, &x, &y, bits);
        let dnorm = &dr * &dr + &di * &di;
        if dnorm.is_zero() {
            return None;
        }
        // p/p' = V / (D·2^bits); the common denominator cancels.
        let ratio = BigRational::new(
            &n * &n * (&vr * &vr + &vi * &vi),
            dnorm << (2 * bits as usize),
        );
        radii.push(sqrt_upper(&ratio, 2 * bits));
    }
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let sum = &radii[i] + &radii[j];
            if sum.clone() * sum >= (&z[i] - &z[j]).norm_sqr() {
                return None;
            }
        }
    }
    Some(radii)
}

/// Certified centers and radii for all roots of a square-free polynomial,
/// each radius below [`target_radius`]. With `real`, every root is known to
/// be real and the centers are kept on the real axis, so each disk isolates
/// a real root.
pub fn isolate(p: &UniPoly, real: bool) -> Result<Vec<(Scalar, BigRational)>> {
    let n = p
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero polynomial has no isolated roots".into()))?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let start: Vec<Scalar> = aberth_f64(p)
        .into_iter()
        .map(|z| {
            let im = if real {
                BigRational::zero()
            } else {
                dyadic(z.im)
            };
            Scalar::new(dyadic(z.re), im)
        })
        .collect();
    let target = target_radius();
    let mut z = start;
    for bits in [160u32, 320, 640, 1280] {
        z = aberth_refine(p, &z, bits);
        if let Some(r) = certify(p, &z, bits) {
            if r.iter().all(|x| *x < target) {
                return Ok(z.into_iter().zip(r).collect());
            }
        }
    }
    Err(Error::SearchExhausted(
        "root isolation did not certify".into(),
    ))
}

/// Exact square root of a nonnegative rational, if it is rational.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (a, b) = (x.numer().sqrt(), x.denom().sqrt());
    (&a * &a == *x.numer() && &b * &b == *x.denom()).then(|| BigRational::new(a, b))
}

/// A square root in ℚ(i), if one exists.
pub fn gaussian_sqrt(z: &Scalar) -> Option<Scalar> {
    if z.im().is_zero() {
        return if z.re().is_negative() {
            rational_sqrt(&-z.re()).map(|r| Scalar::new(BigRational::zero(), r))
        } else {
            rational_sqrt(z.re()).map(Scalar::real)
        };
    }
    let modulus = rational_sqrt(&z.norm_sqr())?;
    let two = BigRational::from_integer(BigInt::from(2));
    let x = rational_sqrt(&((&modulus + z.re()) / &two))?;
    let y = z.im() / (&two * &x);
    Some(Scalar::new(x, y))
}

/// Continued-fraction convergents of `x` with denominators up to `bound`,
/// by the integer Euclidean algorithm.
fn convergents(x: &BigRational, bound: &BigInt) -> Vec<BigRational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    while !d.is_zero() {
        let a = n.div_floor(&d);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > *bound {
            break;
        }
        out.push(BigRational::new_raw(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let r = &n - &a * &d;
        (n, d) = (d, r);
    }
    out
}

/// All roots of `p` if every root lies in ℚ(i), else `None`. `hints` are
/// candidate roots tried first by exact division.
pub fn exact_roots(p: &UniPoly, hints: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut rem = p.clone();
    let mut roots = Vec::new();
    for h in hints {
        while rem.degree().unwrap_or(0) > 0 && rem.eval(h).is_zero() {
            rem = rem.divrem(&UniPoly::linear_root(h)).0;
            roots.push(h.clone());
        }
    }
    let bound = BigInt::one() << 60;
    loop {
        let c = rem.coeffs();
        match rem.degree()? {
            0 => return Some(roots),
            1 => {
                roots.push(-&(&c[0] / &c[1]));
                return Some(roots);
            }
            2 => {
                let (a, b, cc) = (&c[2], &c[1], &c[0]);
                let disc = &(b * b) - &(&Scalar::from_i64(4) * &(a * cc));
                let s = gaussian_sqrt(&disc)?;
                let two_a = &Scalar::from_i64(2) * a;
                roots.push(&(&-b + &s) / &two_a);
                roots.push(&(&-b - &s) / &two_a);
                return Some(roots);
            }
            _ => {
                let approx = aberth_refine(
                    &rem,
                    &aberth_f64(&rem)
                        .into_iter()
                        .map(|z| Scalar::new(dyadic(z.re), dyadic(z.im)))
                        .collect::<Vec<_>>(),
                    200,
                );
                // Only candidates within 2^-150 of the refined value can be
                // roots; anything farther is skipped without exact evaluation.
                let close = BigRational::new(BigInt::one(), BigInt::one() << 150u32);
                let mut found = None;
                'search: for z in &approx {
                    let coarse = round_scalar(z, 140);
                    let res = convergents(coarse.re(), &bound);
                    let ims = convergents(coarse.im(), &bound);
                    for re in res
                        .iter()
                        .rev()
                        .take(2)
                        .filter(|c| (*c - z.re()).abs() < close)
                    {
                        for im in ims
                            .iter()
                            .rev()
                            .take(2)
                            .filter(|c| (*c - z.im()).abs() < close)
                        {
                            let cand = Scalar::new(re.clone(), im.clone());
                            if rem.eval(&cand).is_zero() {
                                found = Some(cand);
                                break 'search;
                            }
                        }
                    }
                }
                let root = found?;
                rem = rem.divrem(&UniPoly::linear_root(&root)).0;
                roots.push(root);
            }
        }
    }
}

/// Midpoint of a box as an `f64` pair, for diagnostics.
pub fn approx_f64(z: &Scalar) -> (f64, f64) {
    (
        z.re().to_f64().unwrap_or(f64::NAN),
        z.im().to_f64().unwrap_or(f64::NAN),
    )
}
