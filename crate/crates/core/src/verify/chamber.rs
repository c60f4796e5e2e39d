//! Exact enumeration of the sign vectors `v -> sign(m(v) + c_v)` over all
//! functionals `m`, and integer realization of a given sign vector.
//!
//! Masks are `u128` bitsets over an indexed point list; bit `i` set means the
//! `i`-th point has sign `-`.

use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::FxHashSet;

use num_integer::Integer;

use crate::lattice::{cross, Functional3, Point2};
use crate::weights::{Sign, SignVector, WeightVector};

use super::complex::MAX_MASK_VERTICES;

/// A point of the threshold arrangement together with the sign vectors of the
/// open cells around it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representative {
    /// `(m1, m2, m3) = num / den` with `den > 0`; `None` when all points are
    /// collinear and the arrangement has no vertices.
    pub vertex: Option<([i128; 3], i128)>,
    /// Indices of the points whose threshold plane passes through `vertex`.
    pub incident: Vec<usize>,
    pub masks: Vec<u128>,
}

/// A finite set of sign vectors containing `sign_vector(b, m)` for every real
/// (hence every integer) `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberCover {
    pub vertices: Vec<Point2>,
    pub representatives: Vec<Representative>,
}

impl ChamberCover {
    pub fn masks(&self) -> BTreeSet<u128> {
        self.representatives.iter().flat_map(|r| r.masks.iter().copied()).collect()
    }

    pub fn sign_vectors(&self) -> BTreeSet<SignVector> {
        self.masks().into_iter().map(|m| mask_sign_vector(&self.vertices, m)).collect()
    }

    pub fn contains(&self, s: &SignVector) -> bool {
        match mask_of(&self.vertices, s) {
            Some(mask) => self.representatives.iter().any(|r| r.masks.contains(&mask)),
            None => false,
        }
    }
}

pub fn mask_of(vertices: &[Point2], s: &SignVector) -> Option<u128> {
    let mut mask = 0u128;
    for (i, v) in vertices.iter().enumerate() {
        if s.get(*v)? == Sign::Minus {
            mask |= 1 << i;
        }
    }
    Some(mask)
}

pub fn mask_signs(mask: u128, n: usize) -> Vec<Sign> {
    (0..n).map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect()
}

pub fn mask_sign_vector(vertices: &[Point2], mask: u128) -> SignVector {
    vertices.iter().copied().zip(mask_signs(mask, vertices.len())).collect()
}

/// Mask of `sign(m(p_i) + c_i)`.
pub fn eval_mask(points: &[Point2], values: &[i64], m: Functional3) -> u128 {
    let mut mask = 0u128;
    for (i, (&p, &c)) in points.iter().zip(values).enumerate() {
        if m.eval(p) + c < 0 {
            mask |= 1 << i;
        }
    }
    mask
}

fn full(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn det3(r: [[i128; 3]; 3]) -> i128 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// Subsets of the indexed points cut off by an open half-plane in general
/// position.
fn planar_cuts(points: &[Point2], idx: &[usize]) -> Vec<u128> {
    let all = idx.iter().fold(0u128, |m, &i| m | 1 << i);
    let mut out = vec![0, all];
    for &a in idx {
        for &b in idx {
            if a == b {
                continue;
            }
            let (pa, pb) = (points[a], points[b]);
            let dir = pb.sub(pa);
            let mut left = 0u128;
            let mut on: Vec<(i64, usize)> = Vec::new();
            for &q in idx {
                match cross(pa, pb, points[q]).signum() {
                    1 => left |= 1 << q,
                    0 => {
                        let d = points[q].sub(pa);
                        on.push((d.x * dir.x + d.y * dir.y, q));
                    }
                    _ => {}
                }
            }
            on.sort();
            let mut pre = 0u128;
            let on_all = on.iter().fold(0u128, |m, &(_, q)| m | 1 << q);
            out.push(left);
            for &(_, q) in &on {
                pre |= 1 << q;
                out.push(left | pre);
                out.push(left | (on_all & !pre));
            }
        }
    }
    out
}

/// All sign masks when every point lies on one line.
fn collinear_cover(points: &[Point2], values: &[i64]) -> Vec<u128> {
    let n = points.len();
    let mut out = vec![0, full(n)];
    if n < 2 {
        return out;
    }
    let e = points[1].sub(points[0]);
    let g = e.content();
    let e = Point2::new(e.x / g, e.y / g);
    let ee = e.x * e.x + e.y * e.y;
    let t: Vec<i128> = points
        .iter()
        .map(|p| {
            let d = p.sub(points[0]);
            ((d.x * e.x + d.y * e.y) / ee) as i128
        })
        .collect();
    let c: Vec<i128> = values.iter().map(|&v| v as i128).collect();
    for u in 0..n {
        for v in 0..n {
            if t[u] >= t[v] {
                continue;
            }
            let dt = t[v] - t[u];
            let dc = c[v] - c[u];
            let mut below = 0u128;
            let mut on: Vec<(i128, usize)> = Vec::new();
            for w in 0..n {
                let lhs = (c[w] - c[u]) * dt;
                let rhs = dc * (t[w] - t[u]);
                if lhs < rhs {
                    below |= 1 << w;
                } else if lhs == rhs {
                    on.push((t[w], w));
                }
            }
            on.sort();
            let on_all = on.iter().fold(0u128, |m, &(_, w)| m | 1 << w);
            let mut pre = 0u128;
            out.push(below);
            for &(_, w) in &on {
                pre |= 1 << w;
                out.push(below | pre);
                out.push(below | (on_all & !pre));
            }
        }
    }
    out
}

fn all_collinear(points: &[Point2]) -> bool {
    points.len() < 3 || points[2..].iter().all(|&q| cross(points[0], points[1], q) == 0)
}

/// Points strictly below and on the plane through `num / den`.
fn classify(xs: &[i128], ys: &[i128], cs: &[i128], [n1, n2, n3, d]: [i128; 4], inputs_small: bool) -> (u128, u128) {
    let (mut below, mut zero) = (0u128, 0u128);
    const SMALL: i128 = 1 << 28;
    let small = |v: &i128| (-SMALL..=SMALL).contains(v);
    if inputs_small && [n1, n2, n3, d].iter().all(small) {
        let [n1, n2, n3, d] = [n1, n2, n3, d].map(|v| v as i64);
        for z in 0..xs.len() {
            let h = n1 * xs[z] as i64 + n2 * ys[z] as i64 + n3 + cs[z] as i64 * d;
            below |= ((h < 0) as u128) << z;
            zero |= ((h == 0) as u128) << z;
        }
    } else {
        for z in 0..xs.len() {
            let h = n1 * xs[z] + n2 * ys[z] + n3 + cs[z] * d;
            below |= ((h < 0) as u128) << z;
            zero |= ((h == 0) as u128) << z;
        }
    }
    (below, zero)
}

type Vertex = Option<([i128; 3], i128)>;

/// Calls `visit(vertex, incident, masks)` once per distinct incidence set of
/// the threshold arrangement. `masks` may repeat entries.
fn arrangement(points: &[Point2], values: &[i64], mut visit: impl FnMut(Vertex, u128, Vec<u128>)) {
    let n = points.len();
    assert!(n <= MAX_MASK_VERTICES, "at most 128 points");
    assert_eq!(n, values.len());
    if all_collinear(points) {
        visit(None, full(n), collinear_cover(points, values));
        return;
    }
    let xs: Vec<i128> = points.iter().map(|p| p.x as i128).collect();
    let ys: Vec<i128> = points.iter().map(|p| p.y as i128).collect();
    let cs: Vec<i128> = values.iter().map(|&v| v as i128).collect();
    // the fast path in `classify` needs small inputs as well
    let inputs_small = xs.iter().chain(&ys).chain(&cs).all(|v| v.abs() <= 1 << 28);
    let mut seen: FxHashSet<u128> = FxHashSet::default();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                let d = det3([[xs[u], ys[u], 1], [xs[v], ys[v], 1], [xs[w], ys[w], 1]]);
                if d == 0 {
                    continue;
                }
                let n1 = det3([[-cs[u], ys[u], 1], [-cs[v], ys[v], 1], [-cs[w], ys[w], 1]]);
                let n2 = det3([[xs[u], -cs[u], 1], [xs[v], -cs[v], 1], [xs[w], -cs[w], 1]]);
                let n3 = det3([[xs[u], ys[u], -cs[u]], [xs[v], ys[v], -cs[v]], [xs[w], ys[w], -cs[w]]]);
                let s = d.signum();
                let (below, zero) = classify(&xs, &ys, &cs, [n1 * s, n2 * s, n3 * s, d * s], inputs_small);
                if !seen.insert(zero) {
                    continue;
                }
                let masks: Vec<u128> = if zero.count_ones() == 3 {
                    let bits = [1u128 << u, 1u128 << v, 1u128 << w];
                    (0..8u32).map(|k| (0..3).filter(|&j| k >> j & 1 == 1).fold(below, |m, j| m | bits[j])).collect()
                } else {
                    let incident: Vec<usize> = (0..n).filter(|&z| zero >> z & 1 == 1).collect();
                    planar_cuts(points, &incident).into_iter().map(|l| below | l).collect()
                };
                visit(Some(([n1 * s, n2 * s, n3 * s], d * s)), zero, masks);
            }
        }
    }
}

fn representatives(points: &[Point2], values: &[i64]) -> Vec<Representative> {
    let n = points.len();
    let mut out = Vec::new();
    arrangement(points, values, |vertex, zero, mut masks| {
        masks.sort_unstable();
        masks.dedup();
        let incident = (0..n).filter(|&z| zero >> z & 1 == 1).collect();
        out.push(Representative { vertex, incident, masks });
    });
    out
}

/// Sorted, deduplicated masks of every sign vector realized by a real
/// functional.
pub fn cover_masks(points: &[Point2], values: &[i64]) -> Vec<u128> {
    let mut set: FxHashSet<u128> = FxHashSet::default();
    arrangement(points, values, |_, _, masks| set.extend(masks));
    let mut all: Vec<u128> = set.into_iter().collect();
    all.sort_unstable();
    all
}

pub fn chamber_cover(vertices: &[Point2], b: &WeightVector) -> ChamberCover {
    let values: Vec<i64> =
        vertices.iter().map(|v| b.get(*v).unwrap_or_else(|| panic!("weight missing at {v}"))).collect();
    ChamberCover { vertices: vertices.to_vec(), representatives: representatives(vertices, &values) }
}

/// Sign masks realized on the box `[-r, r]^3`, each with the witness of
/// smallest `|m1| + |m2| + |m3|`.
pub fn box_masks(points: &[Point2], values: &[i64], r: i64) -> BTreeMap<u128, Functional3> {
    let mut out: BTreeMap<u128, Functional3> = BTreeMap::new();
    let norm = |m: &Functional3| (m.m1.abs() + m.m2.abs() + m.m3.abs(), *m);
    for m1 in -r..=r {
        for m2 in -r..=r {
            for m3 in -r..=r {
                let m = Functional3::new(m1, m2, m3);
                let mask = eval_mask(points, values, m);
                out.entry(mask)
                    .and_modify(|w| {
                        if norm(&m) < norm(w) {
                            *w = m;
                        }
                    })
                    .or_insert(m);
            }
        }
    }
    out
}

/// Integer `(m1, m2)` must satisfy `a m1 + b m2 <= e` for each constraint.
#[derive(Clone, Copy, Debug)]
struct Halfplane {
    a: i128,
    b: i128,
    e: i128,
}

/// A radius `R` such that the constraint system has an integer solution iff
/// it has one with `|m1|, |m2| <= R`: `3Δ` with `Δ` bounding every
/// subdeterminant of `[A | e]`.
fn search_radius(cons: &[Halfplane]) -> i128 {
    let d = cons.iter().map(|h| h.a.abs().max(h.b.abs())).max().unwrap_or(0);
    let e = cons.iter().map(|h| h.e.abs()).max().unwrap_or(0);
    let delta = [d, e, 2 * d * d, 2 * d * e, 6 * d * d * e].into_iter().max().unwrap();
    3 * delta.max(1)
}

/// The radius used by [`realize`] for the given data and target.
pub fn realization_radius(points: &[Point2], values: &[i64], minus: u128) -> i128 {
    search_radius(&Realizer::new(points, values).constraints(minus))
}

/// Integer realization for many masks over one point configuration and one
/// value vector.
#[derive(Clone, Debug)]
pub struct Realizer<'a> {
    points: &'a [Point2],
    values: &'a [i64],
    /// Distinct differences `p_v - p_u`.
    dirs: Vec<(i128, i128)>,
    /// Index of `-dirs[k]`.
    opposite: Vec<usize>,
    /// `dir_of[u * n + v]` indexes `p_v - p_u`.
    dir_of: Vec<usize>,
}

impl<'a> Realizer<'a> {
    pub fn new(points: &'a [Point2], values: &'a [i64]) -> Self {
        let n = points.len();
        let mut index: BTreeMap<(i128, i128), usize> = BTreeMap::new();
        let mut dir_of = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                let d = points[v].sub(points[u]);
                let key = (d.x as i128, d.y as i128);
                let next = index.len();
                dir_of.push(*index.entry(key).or_insert(next));
            }
        }
        let mut dirs = vec![(0, 0); index.len()];
        for (&d, &k) in &index {
            dirs[k] = d;
        }
        let opposite = dirs.iter().map(|&(a, b)| index[&(-a, -b)]).collect();
        Realizer { points, values, dirs, opposite, dir_of }
    }

    /// Tightest right-hand side per direction, `None` where no pair applies.
    fn tightest(&self, minus: u128) -> Vec<Option<i128>> {
        let n = self.points.len();
        let mut tight: Vec<Option<i128>> = vec![None; self.dirs.len()];
        for u in (0..n).filter(|&u| minus >> u & 1 == 0) {
            for v in (0..n).filter(|&v| minus >> v & 1 == 1) {
                let e = self.values[u] as i128 - self.values[v] as i128 - 1;
                let slot = &mut tight[self.dir_of[u * n + v]];
                *slot = Some(slot.map_or(e, |t| t.min(e)));
            }
        }
        tight
    }

    fn halfplanes(&self, tight: Vec<Option<i128>>) -> Vec<Halfplane> {
        tight.into_iter().zip(&self.dirs).filter_map(|(e, &(a, b))| e.map(|e| Halfplane { a, b, e })).collect()
    }

    fn constraints(&self, minus: u128) -> Vec<Halfplane> {
        self.halfplanes(self.tightest(minus))
    }

    /// An integer functional with the given `-` set, if one exists. The
    /// search radius makes the answer exact.
    pub fn realize(&self, minus: u128) -> Option<Functional3> {
        let tight = self.tightest(minus);
        // two opposite directions that leave no room settle most masks
        let clash = tight.iter().zip(&self.opposite).any(|(e, &k)| match (e, tight[k]) {
            (Some(x), Some(y)) => x + y < 0,
            _ => false,
        });
        if clash {
            return None;
        }
        solve(self.points, self.values, minus, &self.halfplanes(tight))
    }
}

/// Exact real interval of feasible `m1`, as inclusive integer bounds
/// (`None` = unbounded); `Err` if the system is infeasible over the reals.
fn m1_range(cons: &[Halfplane]) -> Result<(Option<i128>, Option<i128>), ()> {
    let (mut lo, mut hi): (Option<i128>, Option<i128>) = (None, None);
    let mut bound = |alpha: i128, beta: i128| -> Result<(), ()> {
        // alpha * m1 <= beta
        match alpha.signum() {
            0 => {
                if beta < 0 {
                    return Err(());
                }
            }
            1 => {
                let v = Integer::div_floor(&beta, &alpha);
                hi = Some(hi.map_or(v, |h| h.min(v)));
            }
            _ => {
                let v = Integer::div_ceil(&beta, &alpha);
                lo = Some(lo.map_or(v, |l| l.max(v)));
            }
        }
        Ok(())
    };
    for h in cons.iter().filter(|h| h.b == 0) {
        bound(h.a, h.e)?;
    }
    for up in cons.iter().filter(|h| h.b > 0) {
        for low in cons.iter().filter(|h| h.b < 0) {
            let nb = -low.b;
            bound(up.b * low.a + nb * up.a, nb * up.e + up.b * low.e)?;
        }
    }
    if let (Some(l), Some(h)) = (lo, hi) {
        if l > h {
            return Err(());
        }
    }
    Ok((lo, hi))
}

fn m2_for(cons: &[Halfplane], m1: i128) -> Option<i128> {
    let (mut lo, mut hi): (Option<i128>, Option<i128>) = (None, None);
    for h in cons {
        let rhs = h.e - h.a * m1;
        match h.b.signum() {
            0 => {
                if rhs < 0 {
                    return None;
                }
            }
            1 => {
                let v = Integer::div_floor(&rhs, &h.b);
                hi = Some(hi.map_or(v, |x| x.min(v)));
            }
            _ => {
                let v = Integer::div_ceil(&rhs, &h.b);
                lo = Some(lo.map_or(v, |x| x.max(v)));
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l > h => None,
        _ => Some(0i128.clamp(lo.unwrap_or(i128::MIN), hi.unwrap_or(i128::MAX))),
    }
}

/// An integer functional with the given `-` set, if one exists. The search
/// radius makes the answer exact.
pub fn realize(points: &[Point2], values: &[i64], minus: u128) -> Option<Functional3> {
    Realizer::new(points, values).realize(minus)
}

fn solve(points: &[Point2], values: &[i64], minus: u128, cons: &[Halfplane]) -> Option<Functional3> {
    let n = points.len();
    let (lo, hi) = m1_range(cons).ok()?;
    let r = search_radius(cons);
    let lo = lo.unwrap_or(-r).max(-r);
    let hi = hi.unwrap_or(r).min(r);
    if lo > hi {
        return None;
    }
    let start = 0i128.clamp(lo, hi);
    let mut step = 0i128;
    let (m1, m2) = loop {
        let cands = if step == 0 { vec![start] } else { vec![start + step, start - step] };
        if cands.iter().all(|c| *c < lo || *c > hi) {
            return None;
        }
        if let Some(found) =
            cands.into_iter().filter(|c| (lo..=hi).contains(c)).find_map(|m1| m2_for(cons, m1).map(|m2| (m1, m2)))
        {
            break found;
        }
        step += 1;
    };
    let key = |i: usize| -(m1 * points[i].x as i128 + m2 * points[i].y as i128 + values[i] as i128);
    let plus_max = (0..n).filter(|&i| minus >> i & 1 == 0).map(key).max();
    let minus_min = (0..n).filter(|&i| minus >> i & 1 == 1).map(|i| key(i) - 1).min();
    let m3 = plus_max.or(minus_min).unwrap_or(0);
    let m = Functional3::new(m1 as i64, m2 as i64, m3 as i64);
    debug_assert_eq!(eval_mask(points, values, m), minus);
    Some(m)
}
