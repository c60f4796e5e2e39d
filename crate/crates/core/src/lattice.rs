//! Exact planar lattice geometry.
//!
//! Points live in the plane `z = 1`; a point `(x, y)` stands for the ray
//! generator `(x, y, 1)`. All predicates use integer arithmetic with `i128`
//! intermediates.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::weights::WeightVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("all input points are collinear")]
    CollinearInput,
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(Point2),
    #[error("vertex {0} is not a strict corner of the polygon")]
    NotStrictlyConvex(Point2),
    #[error("vertices are not listed in cyclic convex order")]
    NotCyclicOrder,
    #[error("segment {0} -> {1} contains interior lattice points")]
    NotPrimitiveEdge(Point2, Point2),
    #[error("corner points are collinear")]
    CollinearCorner,
    #[error("weight vector keys do not match the group's vertices")]
    IndexMismatch,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Point2 {
    pub x: i64,
    pub y: i64,
}

impl Point2 {
    pub const fn new(x: i64, y: i64) -> Self {
        Point2 { x, y }
    }

    pub fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, k: i64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }

    /// `gcd(|x|, |y|)`; zero only for the origin.
    pub fn content(self) -> i64 {
        self.x.abs().gcd(&self.y.abs())
    }

    pub fn is_primitive(self) -> bool {
        self.content() == 1
    }
}

impl From<[i64; 2]> for Point2 {
    fn from(a: [i64; 2]) -> Self {
        Point2::new(a[0], a[1])
    }
}

impl From<Point2> for [i64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// `det(a, b) = a.x * b.y - a.y * b.x`.
#[inline]
pub fn det(a: Point2, b: Point2) -> i128 {
    a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128
}

/// Orientation of `o -> a -> b`: positive for a left turn.
#[inline]
pub fn cross(o: Point2, a: Point2, b: Point2) -> i128 {
    det(a.sub(o), b.sub(o))
}

/// An integer linear functional on `Z^3`, evaluated on `(x, y, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct Functional3 {
    pub m1: i64,
    pub m2: i64,
    pub m3: i64,
}

impl Functional3 {
    pub const fn new(m1: i64, m2: i64, m3: i64) -> Self {
        Functional3 { m1, m2, m3 }
    }

    #[inline]
    pub fn eval(self, p: Point2) -> i64 {
        self.m1 * p.x + self.m2 * p.y + self.m3
    }
}

impl From<[i64; 3]> for Functional3 {
    fn from(a: [i64; 3]) -> Self {
        Functional3::new(a[0], a[1], a[2])
    }
}

impl From<Functional3> for [i64; 3] {
    fn from(m: Functional3) -> Self {
        [m.m1, m.m2, m.m3]
    }
}

impl fmt::Display for Functional3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m1, self.m2, self.m3)
    }
}

/// A convex lattice polygon in canonical form: counter-clockwise, starting at
/// the lexicographically smallest vertex, every vertex a strict corner.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePolygon {
    vertices: Vec<Point2>,
}

impl LatticePolygon {
    /// Validate a cyclic vertex list (either orientation) and canonicalize it.
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(GeometryError::DuplicateVertex(v));
            }
        }
        let mut orient = 0i128;
        for i in 0..n {
            let c = cross(vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]);
            if c == 0 {
                return Err(GeometryError::NotStrictlyConvex(vertices[i]));
            }
            if orient == 0 {
                orient = c.signum();
            } else if c.signum() != orient {
                return Err(GeometryError::NotStrictlyConvex(vertices[i]));
            }
        }
        let mut vs = vertices;
        if orient < 0 {
            vs.reverse();
        }
        // Consistent turns can still wind more than once (a star polygon).
        let hull = monotone_chain(&vs);
        if hull.len() != n {
            return Err(GeometryError::NotCyclicOrder);
        }
        let start = vs.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i).unwrap();
        vs.rotate_left(start);
        if vs != hull {
            return Err(GeometryError::NotCyclicOrder);
        }
        Ok(LatticePolygon { vertices: vs })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        let n = self.vertices.len();
        self.vertices[i % n]
    }

    pub fn index_of(&self, v: Point2) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    pub fn is_vertex(&self, v: Point2) -> bool {
        self.index_of(v).is_some()
    }

    /// Closed containment.
    pub fn contains(&self, p: Point2) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0)
    }

    /// Strict interior containment.
    pub fn contains_strictly(&self, p: Point2) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) > 0)
    }

    pub fn on_boundary(&self, p: Point2) -> bool {
        self.contains(p) && !self.contains_strictly(p)
    }

    pub fn contains_polygon(&self, other: &LatticePolygon) -> bool {
        other.vertices.iter().all(|&v| self.contains(v))
    }

    /// Boundary lattice points in counter-clockwise order from the first vertex.
    pub fn boundary_points(&self) -> Vec<Point2> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            let a = self.vertices[i];
            out.push(a);
            out.extend(segment_lattice_points(a, self.vertices[(i + 1) % n]));
        }
        out
    }

    pub fn min_corner(&self) -> Point2 {
        let x = self.vertices.iter().map(|v| v.x).min().unwrap();
        let y = self.vertices.iter().map(|v| v.y).min().unwrap();
        Point2::new(x, y)
    }

    pub fn max_corner(&self) -> Point2 {
        let x = self.vertices.iter().map(|v| v.x).max().unwrap();
        let y = self.vertices.iter().map(|v| v.y).max().unwrap();
        Point2::new(x, y)
    }

    pub fn translate(&self, t: Point2) -> LatticePolygon {
        LatticePolygon { vertices: self.vertices.iter().map(|v| v.add(t)).collect() }
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl<'de> Deserialize<'de> for LatticePolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point2>,
        }
        let raw = Raw::deserialize(d)?;
        LatticePolygon::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// Andrew's monotone chain; drops collinear points. Output starts at the
/// lexicographically smallest point and runs counter-clockwise.
fn monotone_chain(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn convex_hull(points: &[Point2]) -> Result<LatticePolygon, GeometryError> {
    let hull = monotone_chain(points);
    if hull.len() < 3 {
        return Err(GeometryError::CollinearInput);
    }
    Ok(LatticePolygon { vertices: hull })
}

/// All lattice points of the closed polygon, sorted.
pub fn lattice_points(p: &LatticePolygon) -> Vec<Point2> {
    let lo = p.min_corner();
    let hi = p.max_corner();
    let mut out = Vec::new();
    for x in lo.x..=hi.x {
        for y in lo.y..=hi.y {
            let q = Point2::new(x, y);
            if p.contains(q) {
                out.push(q);
            }
        }
    }
    out
}

/// Twice the Euclidean area.
pub fn normalized_volume(p: &LatticePolygon) -> i64 {
    let n = p.vertices.len();
    let twice: i128 = (0..n).map(|i| det(p.vertices[i], p.vertices[(i + 1) % n])).sum();
    twice as i64
}

/// Interior lattice points of the open segment `]a, b[`, ordered from `a`.
pub fn segment_lattice_points(a: Point2, b: Point2) -> Vec<Point2> {
    let d = b.sub(a);
    let g = d.content();
    if g <= 1 {
        return Vec::new();
    }
    let step = Point2::new(d.x / g, d.y / g);
    (1..g).map(|i| a.add(step.scale(i))).collect()
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    cross(a, b, p) == 0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// `p -> A p + t` with `det A = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularMap {
    pub a: [[i64; 2]; 2],
    pub t: Point2,
}

impl UnimodularMap {
    pub const IDENTITY: UnimodularMap = UnimodularMap { a: [[1, 0], [0, 1]], t: Point2::new(0, 0) };

    /// Returns `None` unless `det a = ±1`.
    pub fn new(a: [[i64; 2]; 2], t: Point2) -> Option<Self> {
        let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        (d == 1 || d == -1).then_some(UnimodularMap { a, t })
    }

    pub fn det(&self) -> i64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn linear(&self, p: Point2) -> Point2 {
        Point2::new(self.a[0][0] * p.x + self.a[0][1] * p.y, self.a[1][0] * p.x + self.a[1][1] * p.y)
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        self.linear(p).add(self.t)
    }

    pub fn inverse(&self) -> UnimodularMap {
        let d = self.det();
        let a = [[self.a[1][1] * d, -self.a[0][1] * d], [-self.a[1][0] * d, self.a[0][0] * d]];
        let lin = UnimodularMap { a, t: Point2::new(0, 0) };
        let t = lin.linear(self.t).scale(-1);
        UnimodularMap { a, t }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        let mut a = [[0i64; 2]; 2];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.a[i][0] * other.a[0][j] + self.a[i][1] * other.a[1][j];
            }
        }
        UnimodularMap { a, t: self.apply(other.t) }
    }
}

/// Bezout coefficients `(s, t)` with `s*a + t*b = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Map a lattice corner to `(0,0), (0,1), (n,-q)` with `n > 0`, `0 <= q < n`.
///
/// The edge `v_m1 -> v_0` must be primitive. The far edge may carry lattice
/// points; then `gcd(n, q)` is their count plus one (e.g. `(3, 0)`).
pub fn normalize_corner(v_m1: Point2, v_0: Point2, v_rp1: Point2) -> Result<(i64, i64, UnimodularMap), GeometryError> {
    let e = v_0.sub(v_m1);
    let f = v_rp1.sub(v_m1);
    if !e.is_primitive() {
        return Err(GeometryError::NotPrimitiveEdge(v_m1, v_0));
    }
    let alpha = det(f, e) as i64;
    if alpha == 0 {
        return Err(GeometryError::CollinearCorner);
    }
    // w with det(w, e) = 1: t*e.y + s*e.x = 1 gives w = (t, -s).
    let (_, s, t) = ext_gcd(e.x, e.y);
    let mut w = Point2::new(t, -s);
    let mut n = alpha;
    if alpha < 0 {
        w = w.scale(-1);
        n = -alpha;
    }
    // f = n*w + beta*e; det(w, e) = ±1 so beta = det(w, f) / det(w, e).
    let dwe = det(w, e) as i64;
    let beta = det(w, f) as i64 / dwe;
    let k = num_integer::Integer::div_ceil(&beta, &n);
    let w = w.add(e.scale(k));
    let q = -(beta - n * k);
    debug_assert!((0..n).contains(&q));
    // A = [w e]^{-1}
    let b = [[w.x, e.x], [w.y, e.y]];
    let inv = UnimodularMap::new(b, Point2::new(0, 0)).expect("basis (w, e) is unimodular").inverse();
    let t = inv.linear(v_m1).scale(-1);
    Ok((n, q, UnimodularMap { a: inv.a, t }))
}

/// The cokernel `Z^k / ρ(Z^3)` of the pairing map `m -> (m(v_i))_i`, presented
/// by a Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterGroup {
    /// Free rank of the group.
    pub rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<i64>,
    /// Image of each standard generator, free coordinates first.
    pub weights: Vec<Vec<i64>>,
    points: Vec<Point2>,
    u: Vec<Vec<i64>>,
    diag: Vec<i64>,
}

impl CharacterGroup {
    /// Build the group for an arbitrary finite point list.
    pub fn from_points(points: &[Point2]) -> CharacterGroup {
        let k = points.len();
        let a: Vec<Vec<i128>> = points.iter().map(|p| vec![p.x as i128, p.y as i128, 1]).collect();
        let (diag, u) = smith_rows(a, 3);
        let r = diag.len();
        let torsion: Vec<i64> = diag.iter().copied().filter(|&d| d > 1).collect();
        let mut g = CharacterGroup { rank: k - r, torsion, weights: Vec::new(), points: points.to_vec(), u, diag };
        g.weights = (0..k)
            .map(|j| {
                let mut e = vec![0i64; k];
                e[j] = 1;
                g.reduce(&e)
            })
            .collect();
        g
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// The invariant factors of the pairing matrix, including ones.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.diag
    }

    fn reduce(&self, b: &[i64]) -> Vec<i64> {
        let k = self.points.len();
        let y: Vec<i128> = (0..k).map(|i| (0..k).map(|j| self.u[i][j] as i128 * b[j] as i128).sum()).collect();
        let r = self.diag.len();
        let mut out: Vec<i64> = y[r..].iter().map(|&v| v as i64).collect();
        for i in 0..r {
            let d = self.diag[i] as i128;
            if d > 1 {
                out.push(y[i].rem_euclid(d) as i64);
            }
        }
        out
    }

    /// Class of a value list ordered like `points()`.
    pub fn character_of_values(&self, values: &[i64]) -> Vec<i64> {
        assert_eq!(values.len(), self.points.len());
        self.reduce(values)
    }

    pub fn character(&self, b: &WeightVector) -> Result<Vec<i64>, GeometryError> {
        if b.len() != self.points.len() {
            return Err(GeometryError::IndexMismatch);
        }
        let values = b.values_on(&self.points).ok_or(GeometryError::IndexMismatch)?;
        Ok(self.reduce(&values))
    }

    pub fn order_if_finite(&self) -> Option<i64> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }
}

pub fn group_weights(p: &LatticePolygon) -> CharacterGroup {
    CharacterGroup::from_points(p.vertices())
}

pub fn class_character(b: &WeightVector, g: &CharacterGroup) -> Result<Vec<i64>, GeometryError> {
    g.character(b)
}

/// Smith normal form of an `k x c` matrix by row and column operations.
/// Returns the nonzero diagonal (a divisibility chain of positive entries)
/// and the row transform `U` with `U A V = D`.
fn smith_rows(mut a: Vec<Vec<i128>>, cols: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let k = a.len();
    let mut u: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < k.min(cols) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..k {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..k {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    for j in 0..cols {
                        a[i][j] -= q * a[t][j];
                    }
                    for j in 0..k {
                        u[i][j] -= q * u[t][j];
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut() {
                        let v = row[t];
                        row[j] -= q * v;
                    }
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let mut bad = None;
                'scan: for i in t + 1..k {
                    for j in t + 1..cols {
                        if a[i][j] % a[t][t] != 0 {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in 0..cols {
                            a[t][j] += a[i][j];
                        }
                        for j in 0..k {
                            u[t][j] += u[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..k {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
                u.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        if a[t][t] < 0 {
            for j in 0..cols {
                a[t][j] = -a[t][j];
            }
            for j in 0..k {
                u[t][j] = -u[t][j];
            }
        }
        diag.push(a[t][t] as i64);
        t += 1;
    }
    let u = u.into_iter().map(|row| row.into_iter().map(|v| v as i64).collect()).collect();
    (diag, u)
}
