//! Exact dense linear algebra over ℚ(i).
//!
//! Ranks use fraction-free (Bareiss) elimination on integer-scaled rows;
//! kernels and solves use reduced row echelon form over [`Scalar`]. Pivots
//! are always chosen in column order, so results are deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{GaussInt, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(ExactMatrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<Self> {
        Ok(ExactMatrix::from_rows(cols.to_vec())?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Scalar::is_real)
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = self_add(out.get(i, j), &(a * b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.is_real() {
            bareiss_rank(
                self.gauss_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|z| z.re).collect())
                    .collect(),
            )
        } else {
            bareiss_rank(self.gauss_rows())
        }
    }

    /// Each row scaled by the lcm of its denominators.
    fn gauss_rows(&self) -> Vec<Vec<GaussInt>> {
        (0..self.rows)
            .map(|i| GaussInt::clear_denominators(self.row(i)).1)
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        if self.rows == 0 || self.cols == 0 {
            return (self.clone(), Vec::new());
        }
        let mut out = ExactMatrix::zeros(self.rows, self.cols);
        let pivots;
        if self.is_real() {
            let mut a: Vec<Vec<BigInt>> = self
                .gauss_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|z| z.re).collect())
                .collect();
            pivots = gauss_jordan(&mut a);
            for (i, &c) in pivots.iter().enumerate() {
                for j in c..self.cols {
                    if !a[i][j].is_zero() {
                        out.set(
                            i,
                            j,
                            Scalar::real(BigRational::new(a[i][j].clone(), a[i][c].clone())),
                        );
                    }
                }
            }
        } else {
            let mut a = self.gauss_rows();
            pivots = gauss_jordan(&mut a);
            for (i, &c) in pivots.iter().enumerate() {
                // x / p = x·conj(p) / |p|².
                let p = &a[i][c];
                let norm = &p.re * &p.re + &p.im * &p.im;
                let conj = GaussInt {
                    re: p.re.clone(),
                    im: -&p.im,
                };
                for j in c..self.cols {
                    if !a[i][j].is_nil() {
                        let z = a[i][j].mul(&conj);
                        out.set(
                            i,
                            j,
                            Scalar::new(
                                BigRational::new(z.re, norm.clone()),
                                BigRational::new(z.im, norm.clone()),
                            ),
                        );
                    }
                }
            }
        }
        (out, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right kernel `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free);
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = ExactMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in c + 1..m.rows {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.cols,
            });
        }
        let mut aug = ExactMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        let mut inv = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

fn self_add(a: &Scalar, b: &Scalar) -> Scalar {
    a + b
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// An integral domain with exact division, enough for Bareiss elimination.
trait Domain: Clone {
    fn is_nil(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    /// `self / o`, assuming the quotient lies in the domain.
    fn exact_div(&self, o: &Self) -> Self;
    fn unit() -> Self;
}

impl Domain for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn exact_div(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)));
        self / o
    }
    fn unit() -> Self {
        One::one()
    }
}

impl Domain for GaussInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussInt::mul(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn exact_div(&self, o: &Self) -> Self {
        let n = &o.re * &o.re + &o.im * &o.im;
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        debug_assert!(Zero::is_zero(&(&re % &n)) && Zero::is_zero(&(&im % &n)));
        GaussInt {
            re: re / &n,
            im: im / n,
        }
    }
    fn unit() -> Self {
        GaussInt {
            re: One::one(),
            im: Zero::zero(),
        }
    }
}

/// Fraction-free Gauss–Jordan elimination in place. After each step every
/// entry is a minor of the input, so the division by the previous pivot is
/// exact; all pivots end up equal to the last one. Returns pivot columns.
fn gauss_jordan<T: Domain>(a: &mut [Vec<T>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = T::unit();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let r = pivots.len();
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_nil()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let piv = &pivot_row[c];
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let lead = row[c].clone();
            for j in 0..cols {
                if j != c && !(row[j].is_nil() && pivot_row[j].is_nil()) {
                    row[j] = piv
                        .mul(&row[j])
                        .sub(&lead.mul(&pivot_row[j]))
                        .exact_div(&prev);
                }
            }
            row[c] = lead.sub(&lead);
        }
        prev = piv.clone();
        pivots.push(c);
    }
    pivots
}

fn bareiss_rank<T: Domain>(mut a: Vec<Vec<T>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = T::unit();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_nil()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = pivot_row[c].mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = v.exact_div(&prev);
            }
            row[c] = lead.sub(&lead);
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}
