//! Points of ℙ^m over ℚ(i) and finite point sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::form::normalize_projective;
use crate::scalar::{FieldTag, Scalar};

/// A point stored by its canonical representative (first nonzero coordinate 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(
                "a projective point needs at least 2 coordinates".into(),
            ));
        }
        let coords = normalize_projective(coords).ok_or_else(|| {
            Error::InvalidInput("projective point with all coordinates zero".into())
        })?;
        Ok(ProjectivePoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        ProjectivePoint::new(coords.iter().map(|&c| Scalar::from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Ambient projective dimension.
    pub fn m(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_real(&self) -> bool {
        self.coords.iter().all(Scalar::is_real)
    }

    pub fn field_tag(&self) -> FieldTag {
        self.coords
            .iter()
            .fold(FieldTag::Rational, |t, c| t.join(c.field_tag()))
    }

    pub fn conjugate(&self) -> ProjectivePoint {
        // Conjugation preserves a leading 1, so the result is still canonical.
        ProjectivePoint {
            coords: self.coords.iter().map(Scalar::conj).collect(),
        }
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<Scalar>::deserialize(d)?;
        ProjectivePoint::new(coords).map_err(serde::de::Error::custom)
    }
}

/// A finite set of distinct points of one ℙ^m, kept in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    m: usize,
    points: Vec<ProjectivePoint>,
}

impl PointSet {
    pub fn empty(m: usize) -> Self {
        PointSet {
            m,
            points: Vec::new(),
        }
    }

    /// Rejects duplicates and points of the wrong dimension.
    pub fn new(m: usize, points: Vec<ProjectivePoint>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if p.m() != m {
                return Err(Error::DimensionMismatch {
                    expected: m + 1,
                    found: p.m() + 1,
                });
            }
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!(
                    "duplicate point {:?}",
                    p.coords
                )));
            }
        }
        Ok(PointSet { m, points })
    }

    /// Like `new` but silently drops repeated points.
    pub fn from_points_dedup(
        m: usize,
        points: impl IntoIterator<Item = ProjectivePoint>,
    ) -> Result<Self> {
        let mut out = PointSet::empty(m);
        for p in points {
            out.insert(p)?;
        }
        Ok(out)
    }

    pub fn from_ints(m: usize, rows: &[&[i64]]) -> Result<Self> {
        let pts = rows
            .iter()
            .map(|r| ProjectivePoint::from_ints(r))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(m, pts)
    }

    /// Returns whether the point was new.
    pub fn insert(&mut self, p: ProjectivePoint) -> Result<bool> {
        if p.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m + 1,
                found: p.m() + 1,
            });
        }
        if self.contains(&p) {
            return Ok(false);
        }
        self.points.push(p);
        Ok(true)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ProjectivePoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.points.contains(p)
    }

    pub fn is_real(&self) -> bool {
        self.points.iter().all(ProjectivePoint::is_real)
    }

    pub fn field_tag(&self) -> FieldTag {
        self.points
            .iter()
            .fold(FieldTag::Rational, |t, p| t.join(p.field_tag()))
    }

    /// Points of `self` followed by the new points of `other`.
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        let mut out = self.clone();
        for p in other.iter() {
            out.insert(p.clone())?;
        }
        Ok(out)
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet {
            m: self.m,
            points: self
                .points
                .iter()
                .filter(|p| !other.contains(p))
                .cloned()
                .collect(),
        }
    }

    pub fn filter(&self, pred: impl Fn(&ProjectivePoint) -> bool) -> PointSet {
        PointSet {
            m: self.m,
            points: self.points.iter().filter(|p| pred(p)).cloned().collect(),
        }
    }

    /// Equality as sets, ignoring order.
    pub fn same_set(&self, other: &PointSet) -> bool {
        self.m == other.m && self.sorted_points() == other.sorted_points()
    }

    pub fn sorted_points(&self) -> Vec<ProjectivePoint> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    pub fn coordinate_rows(&self) -> Vec<Vec<Scalar>> {
        self.points.iter().map(|p| p.coords.clone()).collect()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a ProjectivePoint;
    type IntoIter = std::slice::Iter<'a, ProjectivePoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Closure of `s` under coordinate-wise conjugation. New conjugates follow
/// the original points in order.
pub fn conjugation_orbit(s: &PointSet) -> PointSet {
    let mut out = s.clone();
    for p in s.iter() {
        out.insert(p.conjugate()).expect("same dimension");
    }
    out
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    m: usize,
    points: Vec<ProjectivePoint>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointSetRepr {
            m: self.m,
            points: self.points.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PointSetRepr::deserialize(d)?;
        PointSet::new(r.m, r.points).map_err(serde::de::Error::custom)
    }
}
