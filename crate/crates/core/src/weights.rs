use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::{Functional3, Point2};

/// Sign of an integer value; `Plus` for `a >= 0`, `Minus` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    #[inline]
    pub fn of(value: i64) -> Sign {
        if value >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Render a slice of signs as a compact `+-+-` string.
pub fn sign_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.as_char()).collect()
}

/// Integer weights keyed by lattice point. JSON form:
/// `[{"vertex": [x, y], "value": v}, ...]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<WeightEntry>", into = "Vec<WeightEntry>")]
pub struct WeightVector {
    entries: BTreeMap<Point2, i64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct WeightEntry {
    vertex: Point2,
    value: i64,
}

impl From<Vec<WeightEntry>> for WeightVector {
    fn from(v: Vec<WeightEntry>) -> Self {
        v.into_iter().map(|e| (e.vertex, e.value)).collect()
    }
}

impl From<WeightVector> for Vec<WeightEntry> {
    fn from(w: WeightVector) -> Self {
        w.iter().map(|(vertex, value)| WeightEntry { vertex, value }).collect()
    }
}

impl WeightVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zip vertices with values. Later duplicates overwrite earlier ones.
    pub fn from_pairs(vertices: &[Point2], values: &[i64]) -> Self {
        assert_eq!(vertices.len(), values.len(), "vertex/value length mismatch");
        let entries = vertices.iter().copied().zip(values.iter().copied()).collect();
        WeightVector { entries }
    }

    pub fn zero(vertices: &[Point2]) -> Self {
        WeightVector { entries: vertices.iter().map(|&v| (v, 0)).collect() }
    }

    /// The vector `(m(v))_v`, i.e. an element of the image of the pairing map.
    pub fn affine(vertices: &[Point2], m: Functional3) -> Self {
        WeightVector { entries: vertices.iter().map(|&v| (v, m.eval(v))).collect() }
    }

    pub fn get(&self, v: Point2) -> Option<i64> {
        self.entries.get(&v).copied()
    }

    pub fn insert(&mut self, v: Point2, value: i64) -> Option<i64> {
        self.entries.insert(v, value)
    }

    pub fn contains(&self, v: Point2) -> bool {
        self.entries.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = Point2> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point2, i64)> + '_ {
        self.entries.iter().map(|(&p, &v)| (p, v))
    }

    /// Values listed in the order of `vertices`; `None` if a vertex is missing.
    pub fn values_on(&self, vertices: &[Point2]) -> Option<Vec<i64>> {
        vertices.iter().map(|v| self.get(*v)).collect()
    }

    /// Key-subset restriction. `None` if some requested key is absent.
    pub fn restrict(&self, vertices: &[Point2]) -> Option<WeightVector> {
        let mut out = WeightVector::new();
        for &v in vertices {
            out.insert(v, self.get(v)?);
        }
        Some(out)
    }

    pub fn same_keys(&self, other: &WeightVector) -> bool {
        self.entries.len() == other.entries.len() && self.entries.keys().zip(other.entries.keys()).all(|(a, b)| a == b)
    }

    /// Entrywise `self - other` on a common key set.
    pub fn sub(&self, other: &WeightVector) -> Option<WeightVector> {
        if !self.same_keys(other) {
            return None;
        }
        let entries = self.entries.iter().map(|(&p, &a)| (p, a - other.entries[&p])).collect();
        Some(WeightVector { entries })
    }

    pub fn add(&self, other: &WeightVector) -> Option<WeightVector> {
        if !self.same_keys(other) {
            return None;
        }
        let entries = self.entries.iter().map(|(&p, &a)| (p, a + other.entries[&p])).collect();
        Some(WeightVector { entries })
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.values().map(|v| v.abs()).max().unwrap_or(0)
    }
}

impl FromIterator<(Point2, i64)> for WeightVector {
    fn from_iter<I: IntoIterator<Item = (Point2, i64)>>(iter: I) -> Self {
        WeightVector { entries: iter.into_iter().collect() }
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {v}")?;
        }
        write!(f, "}}")
    }
}

/// Per-vertex signs of `m(v) + b_v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    entries: BTreeMap<Point2, Sign>,
}

impl SignVector {
    pub fn get(&self, v: Point2) -> Option<Sign> {
        self.entries.get(&v).copied()
    }

    pub fn insert(&mut self, v: Point2, s: Sign) {
        self.entries.insert(v, s);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point2, Sign)> + '_ {
        self.entries.iter().map(|(&p, &s)| (p, s))
    }

    pub fn on(&self, vertices: &[Point2]) -> Option<Vec<Sign>> {
        vertices.iter().map(|v| self.get(*v)).collect()
    }

    pub fn minus_set(&self) -> Vec<Point2> {
        self.entries.iter().filter(|(_, &s)| s == Sign::Minus).map(|(&p, _)| p).collect()
    }
}

impl FromIterator<(Point2, Sign)> for SignVector {
    fn from_iter<I: IntoIterator<Item = (Point2, Sign)>>(iter: I) -> Self {
        SignVector { entries: iter.into_iter().collect() }
    }
}

/// Signs of `m(v) + b_v` for every key of `b`.
pub fn sign_vector(b: &WeightVector, m: Functional3) -> SignVector {
    b.iter().map(|(p, v)| (p, Sign::of(m.eval(p) + v))).collect()
}
