//! Lines, planes and conics of ℙ^m, incidence with point sets, and
//! enumeration of curves carrying many points.
//!
//! Every linear subspace is stored by the reduced row echelon form of a
//! spanning set, which is canonical. A conic is a symmetric 3×3 matrix in
//! the coordinates of its plane, scaled so its first nonzero upper entry is 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::HomogeneousForm;
use crate::linalg::ExactMatrix;
use crate::points::{PointSet, ProjectivePoint};
use crate::scalar::Scalar;
use num_traits::{One, Zero};

/// A projective subspace given by the RREF rows of a spanning set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(rows: &[Vec<Scalar>]) -> Result<Subspace> {
        let mat = ExactMatrix::from_rows(rows.to_vec())?;
        let (r, pivots) = mat.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Subspace { basis, pivots })
    }

    pub fn span_points(points: &[&ProjectivePoint]) -> Result<Subspace> {
        Subspace::span(
            &points
                .iter()
                .map(|p| p.coords().to_vec())
                .collect::<Vec<_>>(),
        )
    }

    /// Rebuilds pivot data after deserialization.
    fn restore(basis: Vec<Vec<Scalar>>) -> Result<Subspace> {
        let s = Subspace::span(&basis)?;
        if s.basis != basis {
            return Err(Error::InvalidInput(
                "subspace basis is not in reduced echelon form".into(),
            ));
        }
        Ok(s)
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Vector-space dimension (projective dimension + 1).
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }

    /// Coordinates of `v` in the basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (ci, row) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (r, b) in residual.iter_mut().zip(row) {
                *r -= &(ci * b);
            }
        }
        residual.iter().all(Scalar::is_zero).then_some(c)
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        p.coords().len() == self.ambient() && self.coordinates(p.coords()).is_some()
    }

    /// The point with coordinates `c` in the basis.
    pub fn point_at(&self, c: &[Scalar]) -> Result<ProjectivePoint> {
        let mut v = vec![Scalar::zero(); self.ambient()];
        for (ci, row) in c.iter().zip(&self.basis) {
            for (x, b) in v.iter_mut().zip(row) {
                *x += &(ci * b);
            }
        }
        ProjectivePoint::new(v)
    }

    pub fn is_real(&self) -> bool {
        self.basis.iter().flatten().all(Scalar::is_real)
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(&rows)
    }
}

/// A line of ℙ^m.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line(Subspace);

impl Line {
    pub fn through(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<Line> {
        let s = Subspace::span_points(&[p, q])?;
        if s.rank() != 2 {
            return Err(Error::InvalidInput(
                "a line needs two distinct points".into(),
            ));
        }
        Ok(Line(s))
    }

    pub fn subspace(&self) -> &Subspace {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.ambient() - 1
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.0.contains(p)
    }

    pub fn is_real(&self) -> bool {
        self.0.is_real()
    }

    /// Binary coordinates `[s:t]` with `p = s·b₀ + t·b₁`.
    pub fn binary_coords(&self, p: &ProjectivePoint) -> Option<[Scalar; 2]> {
        self.0
            .coordinates(p.coords())
            .map(|c| [c[0].clone(), c[1].clone()])
    }

    pub fn point_at(&self, s: &Scalar, t: &Scalar) -> Result<ProjectivePoint> {
        self.0.point_at(&[s.clone(), t.clone()])
    }

    /// `k` distinct points `[1:j]` for `j < k−1` and `[0:1]`; real when the line is.
    pub fn sample(&self, k: usize) -> Result<Vec<ProjectivePoint>> {
        sample_params(k)
            .iter()
            .map(|[s, t]| self.point_at(s, t))
            .collect()
    }

    /// The common point, `None` if disjoint; errors if the lines coincide.
    pub fn meet(&self, other: &Line) -> Result<Option<ProjectivePoint>> {
        let j = self.0.join(&other.0)?;
        match j.rank() {
            2 => Err(Error::InvalidInput("lines coincide".into())),
            4 => Ok(None),
            _ => {
                // Solve a·b₀ + b·b₁ = c·c₀ + e·c₁ for a nonzero combination.
                let cols: Vec<Vec<Scalar>> = self
                    .0
                    .basis
                    .iter()
                    .cloned()
                    .chain(other.0.basis.iter().map(|r| r.iter().map(|x| -x).collect()))
                    .collect();
                let k = ExactMatrix::from_columns(&cols)?.kernel();
                let v = &k[0];
                Ok(Some(self.0.point_at(&v[..2])?))
            }
        }
    }

    /// Restriction of a form to the line via the pivot substitution
    /// `x_{p₀} ↦ u, x_{p₁} ↦ v`, all other variables ↦ 0. A point `[s:t]` of the
    /// line then pulls `(point·x)^d` back to `(s·u + t·v)^d`.
    pub fn restrict(&self, f: &HomogeneousForm) -> Result<HomogeneousForm> {
        let n = self.0.ambient();
        if f.num_vars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.num_vars(),
            });
        }
        let (p0, p1) = (self.0.pivots[0], self.0.pivots[1]);
        let terms = f.terms().filter_map(|(mon, c)| {
            let e = mon.exps();
            let other = e
                .iter()
                .enumerate()
                .any(|(k, &x)| x > 0 && k != p0 && k != p1);
            (!other).then(|| (vec![e[p0], e[p1]], c.clone()))
        });
        HomogeneousForm::from_terms(2, f.degree(), terms)
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Subspace::restore(Vec::<Vec<Scalar>>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.basis.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let basis = Vec::<Vec<Scalar>>::deserialize(d)?;
        let s = Subspace::restore(basis).map_err(serde::de::Error::custom)?;
        if s.rank() != 2 {
            return Err(serde::de::Error::custom("line basis must have 2 rows"));
        }
        Ok(Line(s))
    }
}

/// A conic on a plane of ℙ^m.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conic {
    plane: Subspace,
    matrix: [[Scalar; 3]; 3],
}

impl Conic {
    /// `matrix` is symmetric in plane coordinates; it is rescaled canonically.
    pub fn new(plane: Subspace, matrix: [[Scalar; 3]; 3]) -> Result<Conic> {
        if plane.rank() != 3 {
            return Err(Error::InvalidInput(
                "conic plane must have 3 basis rows".into(),
            ));
        }
        for i in 0..3 {
            for j in 0..3 {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidInput("conic matrix must be symmetric".into()));
                }
            }
        }
        let lead = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
            .iter()
            .map(|&(i, j)| &matrix[i][j])
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("zero conic".into()))?
            .inv()?;
        let matrix = matrix.map(|row| row.map(|c| &c * &lead));
        Ok(Conic { plane, matrix })
    }

    /// The conic in ℙ² with the given symmetric matrix.
    pub fn in_plane_p2(matrix: [[Scalar; 3]; 3]) -> Result<Conic> {
        let id = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        if i == j {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect::<Vec<_>>();
        Conic::new(Subspace::span(&id)?, matrix)
    }

    /// The unique conic through five coplanar points, if there is exactly one.
    pub fn through_five(pts: &[&ProjectivePoint; 5]) -> Result<Option<Conic>> {
        let plane = Subspace::span_points(pts)?;
        if plane.rank() != 3 {
            return Ok(None);
        }
        let rows: Vec<Vec<Scalar>> = pts
            .iter()
            .map(|p| {
                let q = plane
                    .coordinates(p.coords())
                    .expect("point spans the plane");
                quadratic_monomials(&q)
            })
            .collect();
        let k = ExactMatrix::from_rows(rows)?.kernel();
        if k.len() != 1 {
            return Ok(None);
        }
        Ok(Some(Conic::new(plane, matrix_from_quadric(&k[0]))?))
    }

    /// The reducible conic `l₁ ∪ l₂` of two distinct meeting lines.
    pub fn line_pair(l1: &Line, l2: &Line) -> Result<Conic> {
        let plane = l1.0.join(&l2.0)?;
        if plane.rank() != 3 {
            return Err(Error::InvalidInput("lines are equal or skew".into()));
        }
        let eq = |l: &Line| -> Vec<Scalar> {
            let a = plane.coordinates(&l.0.basis[0]).expect("line in plane");
            let b = plane.coordinates(&l.0.basis[1]).expect("line in plane");
            cross(&a, &b)
        };
        let (u, v) = (eq(l1), eq(l2));
        let half = Scalar::from_ratio(1, 2);
        let matrix: [[Scalar; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| &(&(&u[i] * &v[j]) + &(&u[j] * &v[i])) * &half)
        });
        Conic::new(plane, matrix)
    }

    pub fn plane(&self) -> &Subspace {
        &self.plane
    }

    pub fn matrix(&self) -> &[[Scalar; 3]; 3] {
        &self.matrix
    }

    /// Value of the quadratic form at plane coordinates `q`.
    pub fn eval_plane(&self, q: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &(&(&q[i] * &self.matrix[i][j]) * &q[j]);
            }
        }
        acc
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        p.coords().len() == self.plane.ambient()
            && self
                .plane
                .coordinates(p.coords())
                .is_some_and(|q| self.eval_plane(&q).is_zero())
    }

    pub fn is_smooth(&self) -> bool {
        let m =
            ExactMatrix::from_rows(self.matrix.iter().map(|r| r.to_vec()).collect()).expect("3x3");
        !m.determinant().expect("square").is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.plane.is_real() && self.matrix.iter().flatten().all(Scalar::is_real)
    }
}

fn quadratic_monomials(q: &[Scalar]) -> Vec<Scalar> {
    vec![
        &q[0] * &q[0],
        &q[0] * &q[1],
        &q[0] * &q[2],
        &q[1] * &q[1],
        &q[1] * &q[2],
        &q[2] * &q[2],
    ]
}

/// Symmetric matrix of `a q₀² + b q₀q₁ + c q₀q₂ + d q₁² + e q₁q₂ + f q₂²`.
fn matrix_from_quadric(k: &[Scalar]) -> [[Scalar; 3]; 3] {
    let h = Scalar::from_ratio(1, 2);
    let (b, c, e) = (&k[1] * &h, &k[2] * &h, &k[4] * &h);
    [
        [k[0].clone(), b.clone(), c.clone()],
        [b, k[3].clone(), e.clone()],
        [c, e, k[5].clone()],
    ]
}

fn cross(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

#[derive(Serialize, Deserialize)]
struct ConicRepr {
    plane: Vec<Vec<Scalar>>,
    matrix: [[Scalar; 3]; 3],
}

impl Serialize for Conic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConicRepr {
            plane: self.plane.basis.clone(),
            matrix: self.matrix.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Conic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ConicRepr::deserialize(d)?;
        let plane = Subspace::restore(r.plane).map_err(serde::de::Error::custom)?;
        Conic::new(plane, r.matrix).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Line,
    SmoothConic,
    ReducibleConic,
    TwoDisjointLines,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    Line { line: Line },
    SmoothConic { conic: Conic },
    ReducibleConic { conic: Conic, lines: [Line; 2] },
    TwoDisjointLines { lines: [Line; 2] },
}

impl CurveSpec {
    pub fn line(line: Line) -> CurveSpec {
        CurveSpec::Line { line }
    }

    pub fn smooth_conic(conic: Conic) -> Result<CurveSpec> {
        if !conic.is_smooth() {
            return Err(Error::InvalidInput("conic is singular".into()));
        }
        Ok(CurveSpec::SmoothConic { conic })
    }

    pub fn reducible_conic(l1: Line, l2: Line) -> Result<CurveSpec> {
        let conic = Conic::line_pair(&l1, &l2)?;
        let lines = if l1 <= l2 { [l1, l2] } else { [l2, l1] };
        Ok(CurveSpec::ReducibleConic { conic, lines })
    }

    pub fn two_disjoint_lines(l1: Line, l2: Line) -> Result<CurveSpec> {
        if l1.meet(&l2)?.is_some() {
            return Err(Error::InvalidInput("lines are not disjoint".into()));
        }
        let lines = if l1 <= l2 { [l1, l2] } else { [l2, l1] };
        Ok(CurveSpec::TwoDisjointLines { lines })
    }

    pub fn kind(&self) -> CurveKind {
        match self {
            CurveSpec::Line { .. } => CurveKind::Line,
            CurveSpec::SmoothConic { .. } => CurveKind::SmoothConic,
            CurveSpec::ReducibleConic { .. } => CurveKind::ReducibleConic,
            CurveSpec::TwoDisjointLines { .. } => CurveKind::TwoDisjointLines,
        }
    }

    /// Degree of the curve: 1 for a line, 2 otherwise.
    pub fn degree(&self) -> u32 {
        match self {
            CurveSpec::Line { .. } => 1,
            _ => 2,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            CurveSpec::Line { line } => line.m(),
            CurveSpec::SmoothConic { conic } | CurveSpec::ReducibleConic { conic, .. } => {
                conic.plane.ambient() - 1
            }
            CurveSpec::TwoDisjointLines { lines } => lines[0].m(),
        }
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        match self {
            CurveSpec::Line { line } => line.contains(p),
            CurveSpec::SmoothConic { conic } | CurveSpec::ReducibleConic { conic, .. } => {
                conic.contains(p)
            }
            CurveSpec::TwoDisjointLines { lines } => lines.iter().any(|l| l.contains(p)),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            CurveSpec::Line { line } => line.is_real(),
            CurveSpec::SmoothConic { conic } | CurveSpec::ReducibleConic { conic, .. } => {
                conic.is_real()
            }
            CurveSpec::TwoDisjointLines { lines } => lines.iter().all(Line::is_real),
        }
    }
}

/// `(S ∩ curve, S ∖ curve)`, each in the order of `s`.
pub fn split_on_curve(s: &PointSet, curve: &CurveSpec) -> Result<(PointSet, PointSet)> {
    if s.m() != curve.m() {
        return Err(Error::DimensionMismatch {
            expected: curve.m() + 1,
            found: s.m() + 1,
        });
    }
    let on = s.filter(|p| curve.contains(p));
    let off = s.difference(&on);
    Ok((on, off))
}

/// Lines spanned by pairs of points of `s` that carry at least `threshold`
/// points (thresholds below 2 act as 2). Sorted by count descending, then by
/// canonical basis.
pub fn find_rich_lines(s: &PointSet, threshold: usize) -> Vec<(Line, usize)> {
    let threshold = threshold.max(2);
    let pts = s.points();
    let mut seen: BTreeMap<Vec<usize>, Line> = BTreeMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            // A line is determined by its incidence set; skip pairs already covered.
            if seen.keys().any(|inc| inc.contains(&i) && inc.contains(&j)) {
                continue;
            }
            let line = Line::through(&pts[i], &pts[j]).expect("distinct points");
            let inc: Vec<usize> = (0..pts.len()).filter(|&k| line.contains(&pts[k])).collect();
            seen.insert(inc, line);
        }
    }
    let mut out: Vec<(Line, usize)> = seen
        .into_iter()
        .filter(|(inc, _)| inc.len() >= threshold)
        .map(|(inc, l)| (l, inc.len()))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Conics carrying at least `threshold ≥ 5` points of `s`: smooth conics
/// through five points of `s`, and pairs of meeting lines each spanned by two
/// points of `s`. Sorted by count descending, then by canonical data.
pub fn find_rich_conics(s: &PointSet, threshold: usize) -> Vec<(CurveSpec, usize)> {
    let threshold = threshold.max(5);
    let pts = s.points();
    let n = pts.len();
    let mut found: BTreeMap<Conic, CurveSpec> = BTreeMap::new();
    if n >= threshold {
        // A smooth conic with ≥ threshold points of s meets the first
        // n − threshold + 5 points in at least five of them.
        let prefix = n - threshold + 5;
        for combo in subsets(prefix, 5) {
            let five: [&ProjectivePoint; 5] = std::array::from_fn(|k| &pts[combo[k]]);
            if let Ok(Some(c)) = Conic::through_five(&five) {
                if c.is_smooth() && !found.contains_key(&c) {
                    let count = pts.iter().filter(|p| c.contains(p)).count();
                    if count >= threshold {
                        found.insert(c.clone(), CurveSpec::SmoothConic { conic: c });
                    }
                }
            }
        }
        let lines = find_rich_lines(s, 2);
        let incidence: Vec<Vec<bool>> = lines
            .iter()
            .map(|(l, _)| pts.iter().map(|p| l.contains(p)).collect())
            .collect();
        for a in 0..lines.len() {
            for b in a + 1..lines.len() {
                let count = (0..n)
                    .filter(|&k| incidence[a][k] || incidence[b][k])
                    .count();
                if count < threshold {
                    continue;
                }
                if let Ok(CurveSpec::ReducibleConic { conic, lines: pair }) =
                    CurveSpec::reducible_conic(lines[a].0.clone(), lines[b].0.clone())
                {
                    found
                        .entry(conic.clone())
                        .or_insert(CurveSpec::ReducibleConic { conic, lines: pair });
                }
            }
        }
    }
    let mut out: Vec<(Conic, CurveSpec, usize)> = found
        .into_iter()
        .map(|(c, spec)| {
            let count = pts.iter().filter(|p| c.contains(p)).count();
            (c, spec, count)
        })
        .collect();
    out.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    out.into_iter()
        .map(|(_, spec, count)| (spec, count))
        .collect()
}

fn sample_params(k: usize) -> Vec<[Scalar; 2]> {
    let mut out: Vec<[Scalar; 2]> = (0..k.saturating_sub(1))
        .map(|j| [Scalar::one(), Scalar::from_i64(j as i64)])
        .collect();
    if k > 0 {
        out.push([Scalar::zero(), Scalar::one()]);
    }
    out
}

/// All increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// A quadratic parametrization `[s:t] ↦ G·(s², st, t²)` of a smooth conic,
/// where `G` is the `(m+1)×3` matrix `Bᵀ·T`, `B` the plane basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicParametrization {
    conic: Conic,
    /// Plane coordinates of the images of s², st, t² (columns).
    t: ExactMatrix,
    t_inv: ExactMatrix,
}

impl ConicParametrization {
    /// Validates that `t` maps `(s², st, t²)` onto the conic bijectively.
    pub fn new(conic: Conic, t: ExactMatrix) -> Result<Self> {
        if t.rows() != 3 || t.cols() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: t.rows(),
            });
        }
        let t_inv = t.inverse().map_err(|_| {
            Error::DegenerateParametrization("component quadrics are dependent".into())
        })?;
        // q(s,t)ᵀ A q(s,t) must vanish identically: test 5 parameter values of a quartic.
        let p = ConicParametrization { conic, t, t_inv };
        for (s, u) in [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2)] {
            let q = p.plane_coords(&Scalar::from_i64(s), &Scalar::from_i64(u));
            if !p.conic.eval_plane(&q).is_zero() {
                return Err(Error::DegenerateParametrization(
                    "image does not lie on the conic".into(),
                ));
            }
        }
        Ok(p)
    }

    /// Projection from a point `q0` of the conic, with `q0` in ℙ^m.
    pub fn from_point(conic: &Conic, q0: &ProjectivePoint) -> Result<Self> {
        if !conic.contains(q0) {
            return Err(Error::InvalidInput("base point is not on the conic".into()));
        }
        if !conic.is_smooth() {
            return Err(Error::DegenerateParametrization("conic is singular".into()));
        }
        let q0 = conic.plane.coordinates(q0.coords()).expect("on plane");
        // Complete q0 to a basis with two unit vectors.
        let units: Vec<Vec<Scalar>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        if i == j {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut w = Vec::new();
        for e in &units {
            let mut rows = vec![q0.clone()];
            rows.extend(w.iter().cloned());
            rows.push(e.clone());
            if ExactMatrix::from_rows(rows)?.rank() == w.len() + 2 {
                w.push(e.clone());
            }
            if w.len() == 2 {
                break;
            }
        }
        let a = &conic.matrix;
        let bil = |x: &[Scalar], y: &[Scalar]| -> Scalar {
            let mut acc = Scalar::zero();
            for i in 0..3 {
                for j in 0..3 {
                    acc += &(&(&x[i] * &a[i][j]) * &y[j]);
                }
            }
            acc
        };
        let (w1, w2) = (&w[0], &w[1]);
        let two = Scalar::from_i64(2);
        let (a11, a12, a22) = (bil(w1, w1), bil(w1, w2), bil(w2, w2));
        let (b1, b2) = (&two * &bil(&q0, w1), &two * &bil(&q0, w2));
        // Second intersection of the line through q0 and w = s·w1 + t·w2:
        // p = (wᵀAw)·q0 − 2(q0ᵀAw)·w.
        let col = |qc: &Scalar, terms: &[(&Scalar, &Vec<Scalar>)]| -> Vec<Scalar> {
            (0..3)
                .map(|i| {
                    let mut v = qc * &q0[i];
                    for (c, vec) in terms {
                        v -= &(*c * &vec[i]);
                    }
                    v
                })
                .collect()
        };
        let c_ss = col(&a11, &[(&b1, w1)]);
        let c_st = col(&(&two * &a12), &[(&b1, w2), (&b2, w1)]);
        let c_tt = col(&a22, &[(&b2, w2)]);
        let t = ExactMatrix::from_columns(&[c_ss, c_st, c_tt])?;
        ConicParametrization::new(conic.clone(), t)
    }

    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    fn plane_coords(&self, s: &Scalar, t: &Scalar) -> Vec<Scalar> {
        self.t.mul_vec(&[s * s, s * t, t * t]).expect("3 columns")
    }

    pub fn point_at(&self, s: &Scalar, t: &Scalar) -> Result<ProjectivePoint> {
        self.conic.plane.point_at(&self.plane_coords(s, t))
    }

    /// `k` distinct conic points with parameters as in [`Line::sample`].
    pub fn sample(&self, k: usize) -> Result<Vec<ProjectivePoint>> {
        sample_params(k)
            .iter()
            .map(|[s, t]| self.point_at(s, t))
            .collect()
    }

    /// `[s:t]` with `point_at(s,t) = p`, for `p` on the conic.
    pub fn parameter_of(&self, p: &ProjectivePoint) -> Option<[Scalar; 2]> {
        if !self.conic.contains(p) {
            return None;
        }
        let q = self.conic.plane.coordinates(p.coords())?;
        let phi = self.t_inv.mul_vec(&q).ok()?;
        if !phi[0].is_zero() {
            Some([phi[0].clone(), phi[1].clone()])
        } else {
            Some([Scalar::zero(), Scalar::one()])
        }
    }

    /// The `(m+1)×3` matrix `G` with `x(s,t) = G·(s², st, t²)`.
    pub fn ambient_matrix(&self) -> ExactMatrix {
        let b = ExactMatrix::from_rows(self.conic.plane.basis.clone()).expect("rows");
        b.transpose().mul(&self.t).expect("3 columns")
    }

    /// Literal substitution `F(G·(s², st, t²))`, a binary form of degree 2d.
    pub fn substitute(&self, f: &HomogeneousForm) -> Result<HomogeneousForm> {
        let g = self.ambient_matrix();
        if f.num_vars() != g.rows() {
            return Err(Error::DimensionMismatch {
                expected: g.rows(),
                found: f.num_vars(),
            });
        }
        let images = (0..g.rows())
            .map(|k| {
                HomogeneousForm::from_terms(
                    2,
                    2,
                    [
                        (vec![2, 0], g.get(k, 0).clone()),
                        (vec![1, 1], g.get(k, 1).clone()),
                        (vec![0, 2], g.get(k, 2).clone()),
                    ],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        f.substitute(&images)
    }

    /// Apolar restriction: substitute `x = H·(u², 2uv, v²)` with `GᵀH = I`.
    /// The pure power of the conic point with parameter `[s:t]` maps to
    /// `(s·u + t·v)^{2d}`, so Waring ranks of forms in the span of the
    /// conic's Veronese image equal binary ranks of the restriction.
    pub fn restrict(&self, f: &HomogeneousForm) -> Result<HomogeneousForm> {
        let n = self.conic.plane.ambient();
        if f.num_vars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.num_vars(),
            });
        }
        let tinv_t = self.t_inv.transpose();
        let two = Scalar::from_i64(2);
        let mut images = vec![HomogeneousForm::zero(2, 2); n];
        for (j, &p) in self.conic.plane.pivots.iter().enumerate() {
            // Row p of H is row j of T⁻ᵀ.
            let h = tinv_t.row(j);
            images[p] = HomogeneousForm::from_terms(
                2,
                2,
                [
                    (vec![2, 0], h[0].clone()),
                    (vec![1, 1], &two * &h[1]),
                    (vec![0, 2], h[2].clone()),
                ],
            )?;
        }
        f.substitute(&images)
    }
}
