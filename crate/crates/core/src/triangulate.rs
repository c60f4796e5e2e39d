//! Nested polygon sequences and their triangulations: rectangle corner cutting
//! along Farey slopes, and triangle shaving by removing one corner vertex at a
//! time.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::induction::{
    hull_chain, triangle_steps, Coeff, Corner, InductionDatum, InductionError, InductionStep, SignSequence,
};
use crate::lattice::{
    convex_hull, cross, det, lattice_points, normalized_volume, on_segment, segment_lattice_points, GeometryError,
    LatticePolygon, Point2,
};
use crate::weights::{Sign, WeightVector};

/// Deepest Farey row tried before a cut is reported as failed.
pub const FAREY_ROW_BOUND: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulateError {
    #[error("no Farey slope up to row {rows} cuts the {corner} region at apex {apex}")]
    CutFailure { corner: CornerKind, apex: Point2, rows: usize },
    #[error("cut at {apex} changes more than the apex in the vertex set")]
    DegenerateCut { apex: Point2 },
    #[error("sequence cannot be continued at {0}")]
    StuckSequence(LatticePolygon),
    #[error("region removed at {0} is not a fan of triangles")]
    NonTriangleRegion(Point2),
    #[error("{0} is not a convex combination of its references")]
    NotConvex(Point2),
    #[error("P is not contained in P_0")]
    NotContained,
    #[error("sign configuration has {got} entries, plan needs {want}")]
    SignConfig { got: usize, want: usize },
    #[error("vertex {0} missing from weight vector")]
    KeyMissing(Point2),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Induction(#[from] InductionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CornerKind {
    NW,
    NE,
    SE,
    SW,
}

impl fmt::Display for CornerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl CornerKind {
    pub const ORDER: [CornerKind; 4] = [CornerKind::NW, CornerKind::NE, CornerKind::SE, CornerKind::SW];

    fn negative(self) -> bool {
        matches!(self, CornerKind::NE | CornerKind::SW)
    }

    fn point(self, c: i64, d: i64) -> Point2 {
        match self {
            CornerKind::NW => Point2::new(0, d),
            CornerKind::NE => Point2::new(c, d),
            CornerKind::SE => Point2::new(c, 0),
            CornerKind::SW => Point2::new(0, 0),
        }
    }
}

/// A rational slope `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    pub num: i64,
    pub den: i64,
}

impl Slope {
    pub fn new(num: i64, den: i64) -> Slope {
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        Slope { num: s * num / g, den: s * den / g }
    }

    /// Direction vector `(den, num)`.
    pub fn direction(self) -> Point2 {
        Point2::new(self.den, self.num)
    }

    pub fn as_ratio(self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::str::FromStr for Slope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once('/').ok_or_else(|| format!("bad slope {s:?}"))?;
        let num: i64 = a.trim().parse().map_err(|_| format!("bad slope {s:?}"))?;
        let den: i64 = b.trim().parse().map_err(|_| format!("bad slope {s:?}"))?;
        if den == 0 {
            return Err(format!("bad slope {s:?}"));
        }
        Ok(Slope::new(num, den))
    }
}

/// Rows of the Stern–Brocot tree below `1/1`, left to right.
#[derive(Clone, Debug)]
pub struct FareyRows {
    /// sorted fractions seen so far, bracketed by 0/1 and 1/0
    seen: Vec<(i64, i64)>,
    row: usize,
}

impl FareyRows {
    pub fn new() -> Self {
        FareyRows { seen: vec![(0, 1), (1, 0)], row: 0 }
    }
}

impl Default for FareyRows {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for FareyRows {
    /// `(row index starting at 1, fractions as (num, den))`
    type Item = (usize, Vec<(i64, i64)>);

    fn next(&mut self) -> Option<Self::Item> {
        let mut merged = Vec::with_capacity(self.seen.len() * 2);
        let mut row = Vec::with_capacity(self.seen.len());
        for w in self.seen.windows(2) {
            merged.push(w[0]);
            let m = (w[0].0 + w[1].0, w[0].1 + w[1].1);
            merged.push(m);
            row.push(m);
        }
        merged.push(*self.seen.last().unwrap());
        self.seen = merged;
        self.row += 1;
        Some((self.row, row))
    }
}

/// The slope stream for a corner: `1/1; 1/2, 2/1; 1/3, ...`, negated for NE/SW.
pub fn farey_slopes(kind: CornerKind) -> impl Iterator<Item = Slope> {
    let sign = if kind.negative() { -1 } else { 1 };
    FareyRows::new().flat_map(move |(_, row)| row.into_iter().map(move |(p, q)| Slope::new(sign * p, q)))
}

/// Translate so both coordinate minima are zero; returns `(P', c, d)`.
pub fn embed_rectangle(p: &LatticePolygon) -> (LatticePolygon, LatticePolygon, i64, i64) {
    let lo = p.min_corner();
    let moved = p.translate(Point2::new(-lo.x, -lo.y));
    let hi = moved.max_corner();
    let (c, d) = (hi.x, hi.y);
    let rect = LatticePolygon::new(vec![Point2::new(0, 0), Point2::new(c, 0), Point2::new(c, d), Point2::new(0, d)])
        .expect("non-degenerate polygon spans a rectangle");
    (moved, rect, c, d)
}

/// Translate to touch both axes and pick the smallest `(c, d)` (by `c + d`,
/// then `c`) with `d x + c y <= c d` on every vertex; returns `(P', P_0, c, d)`.
pub fn embed_triangle(p: &LatticePolygon) -> (LatticePolygon, LatticePolygon, i64, i64) {
    let lo = p.min_corner();
    let moved = p.translate(Point2::new(-lo.x, -lo.y));
    let hi = moved.max_corner();
    let fits = |c: i64, d: i64| {
        moved.vertices().iter().all(|v| d as i128 * v.x as i128 + c as i128 * v.y as i128 <= c as i128 * d as i128)
    };
    let mut s = 2;
    loop {
        for c in 1..s {
            let d = s - c;
            if c >= hi.x && d >= hi.y && fits(c, d) {
                let tri = LatticePolygon::new(vec![Point2::new(0, 0), Point2::new(c, 0), Point2::new(0, d)])
                    .expect("triangle");
                return (moved, tri, c, d);
            }
        }
        s += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Gulotta,
    Iu,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Gulotta => write!(f, "gulotta"),
            Mode::Iu => write!(f, "iu"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutRecord {
    pub removed_vertex: Point2,
    /// `v_0 .. v_{r+1}` in counter-clockwise order along the new boundary.
    pub chain: Vec<Point2>,
    pub slope: Option<Slope>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NestedSequence {
    pub mode: Mode,
    /// `P_0 ⊋ P_1 ⊋ .. ⊋ P_l`
    pub polygons: Vec<LatticePolygon>,
    pub cuts: Vec<CutRecord>,
}

impl NestedSequence {
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn outer(&self) -> &LatticePolygon {
        &self.polygons[0]
    }

    pub fn inner(&self) -> &LatticePolygon {
        self.polygons.last().unwrap()
    }
}

fn primitive(v: Point2) -> (Point2, i64) {
    let g = v.content();
    (Point2::new(v.x / g, v.y / g), g)
}

fn neighbours(poly: &LatticePolygon, v: Point2) -> (Point2, Point2) {
    let i = poly.index_of(v).expect("apex is a vertex");
    let n = poly.len();
    (poly.vertex(i + n - 1), poly.vertex(i + 1))
}

struct Cut {
    a: Point2,
    b: Point2,
    slope: Slope,
}

/// Largest corner triangle at `apex` with hypotenuse parallel to `slope`.
fn try_slope(current: &LatticePolygon, inner: &LatticePolygon, apex: Point2, slope: Slope) -> Option<Cut> {
    let (pred, succ) = neighbours(current, apex);
    let (e1, len1) = primitive(pred.sub(apex));
    let (e2, len2) = primitive(succ.sub(apex));
    let h = slope.direction();
    let s = det(e2, h);
    let t = det(e1, h);
    if s == 0 || t == 0 || (s > 0) != (t > 0) {
        return None;
    }
    let g = s.abs().gcd(&t.abs());
    let (s0, t0) = ((s.abs() / g) as i64, (t.abs() / g) as i64);
    let mut k = (len1 / s0).min(len2 / t0);
    // keep the inner polygon on the closed far side of the hypotenuse:
    // with f(x) = det(dir, x - apex), the line at dilation k is f = k * f(a1)
    let a1 = apex.add(e1.scale(s0));
    let dir = apex.add(e2.scale(t0)).sub(a1);
    let step = det(dir, a1.sub(apex));
    for &v in inner.vertices() {
        let kmax = Integer::div_floor(&det(dir, v.sub(apex)), &step);
        k = k.min(kmax.max(0) as i64);
    }
    if k < 1 {
        return None;
    }
    Some(Cut { a: apex.add(e1.scale(k * s0)), b: apex.add(e2.scale(k * t0)), slope })
}

fn find_cut(
    current: &LatticePolygon,
    inner: &LatticePolygon,
    apex: Point2,
    kind: CornerKind,
) -> Result<Cut, TriangulateError> {
    let sign = if kind.negative() { -1 } else { 1 };
    for (row, fracs) in FareyRows::new() {
        if row > FAREY_ROW_BOUND {
            break;
        }
        for (p, q) in fracs {
            if let Some(cut) = try_slope(current, inner, apex, Slope::new(sign * p, q)) {
                return Ok(cut);
            }
        }
    }
    Err(TriangulateError::CutFailure { corner: kind, apex, rows: FAREY_ROW_BOUND })
}

/// Replace `apex` by `a, b` and check that nothing else changed.
fn saw(current: &LatticePolygon, apex: Point2, a: Point2, b: Point2) -> Result<LatticePolygon, TriangulateError> {
    let mut vs: Vec<Point2> = Vec::with_capacity(current.len() + 1);
    for &v in current.vertices() {
        if v == apex {
            vs.push(a);
            vs.push(b);
        } else {
            vs.push(v);
        }
    }
    vs.dedup();
    if vs.first() == vs.last() {
        vs.pop();
    }
    let next = LatticePolygon::new(vs).map_err(|_| TriangulateError::DegenerateCut { apex })?;
    Ok(next)
}

fn segment_chain(a: Point2, b: Point2) -> Vec<Point2> {
    let mut out = vec![a];
    out.extend(segment_lattice_points(a, b));
    out.push(b);
    out
}

/// Corner cutting of the rectangle `p0` down to `p`.
pub fn gulotta_sequence(p: &LatticePolygon, p0: &LatticePolygon) -> Result<NestedSequence, TriangulateError> {
    if !p0.contains_polygon(p) {
        return Err(TriangulateError::NotContained);
    }
    let hi = p0.max_corner();
    let (c, d) = (hi.x, hi.y);
    let mut current = p0.clone();
    let mut polygons = vec![current.clone()];
    let mut cuts = Vec::new();
    for kind in CornerKind::ORDER {
        let corner = kind.point(c, d);
        if p.is_vertex(corner) {
            continue;
        }
        let mut queue = VecDeque::from([corner]);
        while let Some(apex) = queue.pop_front() {
            if p.is_vertex(apex) || !current.is_vertex(apex) {
                continue;
            }
            let (pred, succ) = neighbours(&current, apex);
            let cut = find_cut(&current, p, apex, kind)?;
            let next = saw(&current, apex, cut.a, cut.b)?;
            cuts.push(CutRecord { removed_vertex: apex, chain: segment_chain(cut.a, cut.b), slope: Some(cut.slope) });
            if cut.a != pred {
                queue.push_back(cut.a);
            }
            if cut.b != succ {
                queue.push_back(cut.b);
            }
            current = next;
            polygons.push(current.clone());
        }
    }
    if current != *p {
        return Err(TriangulateError::StuckSequence(current));
    }
    Ok(NestedSequence { mode: Mode::Gulotta, polygons, cuts })
}

/// Which corner vertex is removed next in triangle shaving.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IuOrder {
    /// Largest `(y, x)` first.
    #[default]
    YxDescending,
    /// Smallest `x`, then largest `y`.
    LeftFirst,
}

/// Triangle shaving of `p0` down to `p`.
pub fn iu_sequence(p: &LatticePolygon, p0: &LatticePolygon) -> Result<NestedSequence, TriangulateError> {
    iu_sequence_with(p, p0, IuOrder::default())
}

pub fn iu_sequence_with(
    p: &LatticePolygon,
    p0: &LatticePolygon,
    order: IuOrder,
) -> Result<NestedSequence, TriangulateError> {
    if !p0.contains_polygon(p) {
        return Err(TriangulateError::NotContained);
    }
    let mut current = p0.clone();
    let mut polygons = vec![current.clone()];
    let mut cuts = Vec::new();
    while current != *p {
        let cands = current.vertices().iter().copied().filter(|v| !p.contains(*v));
        let pick = match order {
            IuOrder::YxDescending => cands.max_by_key(|v| (v.y, v.x)),
            IuOrder::LeftFirst => cands.min_by_key(|v| (v.x, -v.y)),
        };
        let Some(v) = pick else {
            return Err(TriangulateError::StuckSequence(current));
        };
        let (pred, succ) = neighbours(&current, v);
        let v0 = v.add(primitive(pred.sub(v)).0);
        let vr1 = v.add(primitive(succ.sub(v)).0);
        let rest: Vec<Point2> = lattice_points(&current).into_iter().filter(|&q| q != v).collect();
        let next = convex_hull(&rest)?;
        let chain = boundary_walk(&next, v0, vr1).ok_or(TriangulateError::StuckSequence(next.clone()))?;
        cuts.push(CutRecord { removed_vertex: v, chain, slope: None });
        current = next;
        polygons.push(current.clone());
    }
    Ok(NestedSequence { mode: Mode::Iu, polygons, cuts })
}

/// Boundary lattice points of `poly` walking counter-clockwise from `a` to `b`.
fn boundary_walk(poly: &LatticePolygon, a: Point2, b: Point2) -> Option<Vec<Point2>> {
    let bd = poly.boundary_points();
    let n = bd.len();
    let ia = bd.iter().position(|&q| q == a)?;
    let mut out = Vec::new();
    for k in 0..=n {
        let q = bd[(ia + k) % n];
        out.push(q);
        if q == b {
            return Some(out);
        }
    }
    None
}

/// Fan from the first canonical vertex.
pub fn base_triangulation(p: &LatticePolygon) -> Vec<[Point2; 3]> {
    let v = p.vertices();
    (1..v.len() - 1).map(|i| [v[0], v[i], v[i + 1]]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub mode: Mode,
    pub sequence: NestedSequence,
    /// `V_0`, sorted.
    pub all_vertices: Vec<Point2>,
    /// Triangulation of `P_l`.
    pub base: Vec<[Point2; 3]>,
    /// Triangles of `P_{i-1} - P_i` for each cut `i = 1..=l`.
    pub regions: Vec<Vec<[Point2; 3]>>,
    /// `V_0 ⊇ .. ⊇ V_l`, each sorted.
    pub stage_vertices: Vec<Vec<Point2>>,
    /// `V'_0 ⊆ .. ⊆ V'_l`, each sorted.
    pub cumulative_vertices: Vec<Vec<Point2>>,
}

impl Triangulation {
    pub fn stages(&self) -> usize {
        self.stage_vertices.len()
    }

    /// Triangles of the stage-`i` triangulation of `P_i`.
    pub fn triangles_at(&self, i: usize) -> Vec<[Point2; 3]> {
        let mut out = self.base.clone();
        for r in &self.regions[i..] {
            out.extend(r);
        }
        out
    }

    /// Triangles of `P_0`.
    pub fn triangles(&self) -> Vec<[Point2; 3]> {
        self.triangles_at(0)
    }

    /// Cone edges from a removed vertex to interior chain points.
    pub fn extra_diagonals(&self) -> Vec<(Point2, Point2)> {
        let mut out = Vec::new();
        for (cut, region) in self.sequence.cuts.iter().zip(&self.regions) {
            let ends = [cut.chain[0], *cut.chain.last().unwrap()];
            for t in region {
                for &q in &t[1..] {
                    if !ends.contains(&q) && !out.contains(&(t[0], q)) {
                        out.push((t[0], q));
                    }
                }
            }
        }
        out
    }
}

fn sorted(set: &BTreeSet<Point2>) -> Vec<Point2> {
    set.iter().copied().collect()
}

/// Cone every removed region and compute the stage vertex sets.
pub fn assemble(seq: &NestedSequence, base: &[[Point2; 3]]) -> Result<Triangulation, TriangulateError> {
    let l = seq.cuts.len();
    let mut stage: Vec<BTreeSet<Point2>> = vec![BTreeSet::new(); l + 1];
    for i in (0..=l).rev() {
        let mut s: BTreeSet<Point2> = seq.polygons[i].vertices().iter().copied().collect();
        if i < l {
            s.extend(stage[i + 1].iter().copied());
        }
        stage[i] = s;
    }
    let mut cumulative: Vec<BTreeSet<Point2>> = Vec::with_capacity(l + 1);
    for i in 0..=l {
        let mut s: BTreeSet<Point2> = seq.polygons[i].vertices().iter().copied().collect();
        if i > 0 {
            s.extend(cumulative[i - 1].iter().copied());
        }
        cumulative.push(s);
    }
    let mut regions = Vec::with_capacity(l);
    for (j, cut) in seq.cuts.iter().enumerate() {
        let vi = &stage[j + 1];
        let last = cut.chain.len() - 1;
        let targets: Vec<usize> = (0..=last).filter(|&k| k == 0 || k == last || vi.contains(&cut.chain[k])).collect();
        let apex = cut.removed_vertex;
        let mut tris = Vec::new();
        for w in targets.windows(2) {
            let (a, b) = (cut.chain[w[0]], cut.chain[w[1]]);
            if cross(apex, a, b) == 0 {
                return Err(TriangulateError::NonTriangleRegion(apex));
            }
            for &m in &cut.chain[w[0] + 1..w[1]] {
                if !on_segment(a, b, m) {
                    return Err(TriangulateError::NonTriangleRegion(apex));
                }
            }
            tris.push(oriented([apex, a, b]));
        }
        regions.push(tris);
    }
    Ok(Triangulation {
        mode: seq.mode,
        sequence: seq.clone(),
        all_vertices: sorted(&stage[0]),
        base: base.iter().map(|t| oriented(*t)).collect(),
        regions,
        stage_vertices: stage.iter().map(sorted).collect(),
        cumulative_vertices: cumulative.iter().map(sorted).collect(),
    })
}

/// Counter-clockwise vertex order, keeping the first vertex.
fn oriented(t: [Point2; 3]) -> [Point2; 3] {
    if cross(t[0], t[1], t[2]) < 0 {
        [t[0], t[2], t[1]]
    } else {
        t
    }
}

/// Interiors of two triangles are disjoint iff some edge line separates them.
fn interiors_disjoint(s: &[Point2; 3], t: &[Point2; 3]) -> bool {
    let sep = |a: &[Point2; 3], b: &[Point2; 3]| {
        (0..3).any(|i| {
            let (p, q) = (a[i], a[(i + 1) % 3]);
            let side = cross(p, q, a[(i + 2) % 3]).signum();
            b.iter().all(|&v| cross(p, q, v) * side <= 0)
        })
    };
    sep(s, t) || sep(t, s)
}

/// Exact tiling test: nondegenerate triangles inside `poly`, pairwise
/// interior-disjoint, volumes summing to the polygon's, and no vertex in the
/// relative interior of another triangle's edge.
pub fn is_tiling(triangles: &[[Point2; 3]], poly: &LatticePolygon) -> bool {
    let mut vol: i128 = 0;
    for t in triangles {
        let a = cross(t[0], t[1], t[2]).abs();
        if a == 0 || !t.iter().all(|&v| poly.contains(v)) {
            return false;
        }
        vol += a;
    }
    if vol != normalized_volume(poly) as i128 {
        return false;
    }
    let verts: BTreeSet<Point2> = triangles.iter().flatten().copied().collect();
    for (i, s) in triangles.iter().enumerate() {
        for t in &triangles[i + 1..] {
            if !interiors_disjoint(s, t) {
                return false;
            }
        }
        for k in 0..3 {
            let (a, b) = (s[k], s[(k + 1) % 3]);
            if verts.iter().any(|&v| v != a && v != b && on_segment(a, b, v)) {
                return false;
            }
        }
    }
    true
}

/// How the free signs of a plan are chosen.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum SignConfig {
    #[default]
    AllMinus,
    /// One sign for every free step.
    Fixed(Sign),
    /// Explicit signs for the free steps in plan order.
    PerStep(Vec<Sign>),
}

impl SignConfig {
    fn pick(&self, k: usize) -> Sign {
        match self {
            SignConfig::AllMinus => Sign::Minus,
            SignConfig::Fixed(s) => *s,
            SignConfig::PerStep(v) => v[k],
        }
    }
}

/// Base vertices of the seed collections: rectangle corners counter-clockwise
/// from the origin, or the triangle corners `(c,0), (0,d), (0,0)`.
pub fn plan_base(seq: &NestedSequence) -> Vec<Point2> {
    let p0 = seq.outer();
    let hi = p0.max_corner();
    match seq.mode {
        Mode::Gulotta => vec![Point2::new(0, 0), Point2::new(hi.x, 0), Point2::new(hi.x, hi.y), Point2::new(0, hi.y)],
        Mode::Iu => vec![Point2::new(hi.x, 0), Point2::new(0, hi.y), Point2::new(0, 0)],
    }
}

/// `v = (1-t) from + t to` at lattice distance one from `from`.
fn edge_step(v: Point2, from: Point2, to: Point2) -> Result<InductionStep, TriangulateError> {
    let (_, len) = primitive(to.sub(from));
    let k = primitive(v.sub(from)).1;
    if !on_segment(from, to, v) || v == from || v == to {
        return Err(TriangulateError::NotConvex(v));
    }
    Ok(InductionStep { vertex: v, coeffs: vec![(from, Coeff::new(len - k, len)), (to, Coeff::new(k, len))] })
}

/// Induction datum and signs along the sequence.
pub fn induction_plan(
    seq: &NestedSequence,
    signs: &SignConfig,
) -> Result<(InductionDatum, SignSequence), TriangulateError> {
    let base = plan_base(seq);
    let mut steps: Vec<InductionStep> = Vec::new();
    let mut out_signs: Vec<Sign> = Vec::new();
    let mut free = 0usize;
    let mut present: BTreeSet<Point2> = seq.outer().vertices().iter().copied().collect();
    let push_free = |step: InductionStep, steps: &mut Vec<InductionStep>, out: &mut Vec<Sign>, free: &mut usize| {
        steps.push(step);
        out.push(match signs {
            SignConfig::PerStep(v) if *free >= v.len() => Sign::Minus,
            _ => signs.pick(*free),
        });
        *free += 1;
    };
    for (i, cut) in seq.cuts.iter().enumerate() {
        let prev = &seq.polygons[i];
        let next = &seq.polygons[i + 1];
        let apex = cut.removed_vertex;
        let (pred, succ) = neighbours(prev, apex);
        let v0 = cut.chain[0];
        let vr1 = *cut.chain.last().unwrap();
        match seq.mode {
            Mode::Gulotta => {
                for (v, far) in [(v0, pred), (vr1, succ)] {
                    if next.is_vertex(v) && !present.contains(&v) {
                        push_free(edge_step(v, apex, far)?, &mut steps, &mut out_signs, &mut free);
                    }
                }
            }
            Mode::Iu => {
                for (v, far) in [(v0, pred), (vr1, succ)] {
                    if !present.contains(&v) {
                        push_free(edge_step(v, apex, far)?, &mut steps, &mut out_signs, &mut free);
                    }
                }
                let corner =
                    Corner { v_m1: apex, v_0: v0, v_rp1: vr1, chain: cut.chain[1..cut.chain.len() - 1].to_vec() };
                if hull_chain(apex, v0, vr1)? != corner.chain {
                    return Err(InductionError::ChainMismatch.into());
                }
                for s in triangle_steps(&corner)? {
                    steps.push(s);
                    out_signs.push(Sign::Minus);
                }
            }
        }
        present.extend(next.vertices().iter().copied());
    }
    if let SignConfig::PerStep(v) = signs {
        if v.len() != free {
            return Err(TriangulateError::SignConfig { got: v.len(), want: free });
        }
    }
    let at = |k: usize| steps.get(k).map(|s| s.vertex).unwrap_or_default();
    let datum = InductionDatum::new(base, steps.clone()).map_err(|e| match e {
        InductionError::InvalidDatum { step, .. } => TriangulateError::NotConvex(at(step)),
        other => other.into(),
    })?;
    Ok((datum, SignSequence(out_signs)))
}

/// Number of sign choices `induction_plan` consumes from a `PerStep` config.
pub fn free_step_count(seq: &NestedSequence) -> usize {
    match induction_plan(seq, &SignConfig::AllMinus) {
        Ok((datum, _)) => match seq.mode {
            Mode::Gulotta => datum.len(),
            Mode::Iu => {
                let tri: usize = seq.cuts.iter().map(|c| c.chain.len() - 2).sum();
                datum.len() - tri
            }
        },
        Err(_) => 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedCollection {
    pub base_vertices: Vec<Point2>,
    pub members: Vec<WeightVector>,
}

/// `{(0,i,i+j,j)} ∪ {(0,i,i+j+1,j)}` for `0 <= i < c`, `0 <= j < d` on the
/// rectangle corners.
pub fn seed_gulotta(c: i64, d: i64) -> SeedCollection {
    let base = vec![Point2::new(0, 0), Point2::new(c, 0), Point2::new(c, d), Point2::new(0, d)];
    let mut members = Vec::with_capacity((2 * c * d) as usize);
    for eps in 0..2 {
        for i in 0..c {
            for j in 0..d {
                members.push(WeightVector::from_pairs(&base, &[0, i, i + j + eps, j]));
            }
        }
    }
    SeedCollection { base_vertices: base, members }
}

/// `{(i,j,1)}` for `0 <= i < c`, `0 <= j < d` on `(c,0), (0,d), (0,0)`.
pub fn seed_iu(c: i64, d: i64) -> SeedCollection {
    let base = vec![Point2::new(c, 0), Point2::new(0, d), Point2::new(0, 0)];
    let mut members = Vec::with_capacity((c * d) as usize);
    for i in 0..c {
        for j in 0..d {
            members.push(WeightVector::from_pairs(&base, &[i, j, 1]));
        }
    }
    SeedCollection { base_vertices: base, members }
}

pub fn restrict(s: &[WeightVector], v: &[Point2]) -> Result<Vec<WeightVector>, TriangulateError> {
    s.iter()
        .map(|b| {
            if let Some(missing) = v.iter().find(|p| !b.contains(**p)) {
                return Err(TriangulateError::KeyMissing(*missing));
            }
            Ok(b.restrict(v).expect("keys checked"))
        })
        .collect()
}
