//! Convex induction of weight vectors: floor/ceiling extension along convex
//! combinations, interval induction and triangle induction at a corner.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hj::{hj_expand, HjError};
use crate::lattice::{normalize_corner, Functional3, GeometryError, Point2};
use crate::weights::{Sign, WeightVector};

pub type Coeff = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InductionError {
    #[error("weights are not defined exactly on the datum base")]
    DomainMismatch,
    #[error("sign sequence has length {got}, datum has {want} steps")]
    SignLength { got: usize, want: usize },
    #[error("{0} is not an unused lattice point of the open segment")]
    BadOrdering(Point2),
    #[error("chain does not match the lattice hull chain of the corner")]
    ChainMismatch,
    #[error("difference is not induced at step {0}")]
    NotInduced(usize),
    #[error("invalid datum at step {step}: {reason}")]
    InvalidDatum { step: usize, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Hj(#[from] HjError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InductionStep {
    pub vertex: Point2,
    pub coeffs: Vec<(Point2, Coeff)>,
}

impl InductionStep {
    /// References with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = Point2> + '_ {
        self.coeffs.iter().filter(|(_, t)| !t.is_zero()).map(|(p, _)| *p)
    }
}

/// Base vertices plus convex steps. A step may name a vertex that was already
/// assigned; its value is then overwritten from that point on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InductionDatum {
    base: Vec<Point2>,
    steps: Vec<InductionStep>,
}

impl InductionDatum {
    pub fn new(base: Vec<Point2>, steps: Vec<InductionStep>) -> Result<Self, InductionError> {
        let mut known: BTreeSet<Point2> = BTreeSet::new();
        for &v in &base {
            if !known.insert(v) {
                return Err(InductionError::InvalidDatum { step: 0, reason: format!("duplicate base vertex {v}") });
            }
        }
        for (i, s) in steps.iter().enumerate() {
            let bad = |reason: String| InductionError::InvalidDatum { step: i, reason };
            if s.coeffs.is_empty() {
                return Err(bad("no coefficients".into()));
            }
            let mut sum = Coeff::zero();
            let mut px = Ratio::<i128>::zero();
            let mut py = Ratio::<i128>::zero();
            for &(p, t) in &s.coeffs {
                if !known.contains(&p) {
                    return Err(bad(format!("reference {p} is not yet defined")));
                }
                if t < Coeff::zero() || t > Coeff::one() {
                    return Err(bad(format!("coefficient {t} outside [0,1]")));
                }
                sum += t;
                let t = Ratio::new(*t.numer() as i128, *t.denom() as i128);
                px += t * Ratio::from_integer(p.x as i128);
                py += t * Ratio::from_integer(p.y as i128);
            }
            if !sum.is_one() {
                return Err(bad(format!("coefficients sum to {sum}")));
            }
            if px != Ratio::from_integer(s.vertex.x as i128) || py != Ratio::from_integer(s.vertex.y as i128) {
                return Err(bad(format!("{} is not the stated convex combination", s.vertex)));
            }
            known.insert(s.vertex);
        }
        Ok(InductionDatum { base, steps })
    }

    pub fn empty(base: Vec<Point2>) -> Self {
        InductionDatum { base, steps: Vec::new() }
    }

    pub fn base(&self) -> &[Point2] {
        &self.base
    }

    pub fn steps(&self) -> &[InductionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Base followed by step vertices, first occurrence only.
    pub fn all_vertices(&self) -> Vec<Point2> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.base.iter().copied().chain(self.steps.iter().map(|s| s.vertex)) {
            if seen.insert(v) {
                out.push(v);
            }
        }
        out
    }

    /// Concatenate, re-validating.
    pub fn extend(&self, steps: Vec<InductionStep>) -> Result<Self, InductionError> {
        let mut all = self.steps.clone();
        all.extend(steps);
        InductionDatum::new(self.base.clone(), all)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SignSequence(pub Vec<Sign>);

impl SignSequence {
    pub fn all(sign: Sign, len: usize) -> Self {
        SignSequence(vec![sign; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Result of an induction with the per-step values kept. `steps[i]` is the
/// value assigned at step `i`; `values` holds the final value per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InducedWeights {
    pub base: WeightVector,
    pub steps: Vec<i64>,
    pub values: WeightVector,
}

impl InducedWeights {
    /// Replay `f(step, current values)` with the values visible at each step.
    fn replay<F: FnMut(usize, &WeightVector) -> bool>(&self, datum: &InductionDatum, mut f: F) -> bool {
        let mut cur = self.base.clone();
        for (i, s) in datum.steps.iter().enumerate() {
            if !f(i, &cur) {
                return false;
            }
            cur.insert(s.vertex, self.steps[i]);
        }
        true
    }
}

fn combination(step: &InductionStep, cur: &WeightVector) -> Ratio<i128> {
    let mut x = Ratio::<i128>::zero();
    for &(p, t) in &step.coeffs {
        let bv = cur.get(p).expect("datum validated") as i128;
        x += Ratio::new(*t.numer() as i128 * bv, *t.denom() as i128);
    }
    x
}

fn round(x: Ratio<i128>, s: Sign) -> i64 {
    match s {
        Sign::Minus => x.floor().to_integer() as i64,
        Sign::Plus => x.ceil().to_integer() as i64,
    }
}

pub fn induce_traced(
    b: &WeightVector,
    datum: &InductionDatum,
    signs: &SignSequence,
) -> Result<InducedWeights, InductionError> {
    if signs.len() != datum.len() {
        return Err(InductionError::SignLength { got: signs.len(), want: datum.len() });
    }
    let base = b.restrict(&datum.base).ok_or(InductionError::DomainMismatch)?;
    if base.len() != b.len() {
        return Err(InductionError::DomainMismatch);
    }
    let mut cur = base.clone();
    let mut steps = Vec::with_capacity(datum.len());
    for (s, &sign) in datum.steps.iter().zip(&signs.0) {
        let v = round(combination(s, &cur), sign);
        steps.push(v);
        cur.insert(s.vertex, v);
    }
    Ok(InducedWeights { base, steps, values: cur })
}

pub fn induce(b: &WeightVector, datum: &InductionDatum, signs: &SignSequence) -> Result<WeightVector, InductionError> {
    induce_traced(b, datum, signs).map(|w| w.values)
}

/// Each step's sign at `m` lies among the signs of its support at that time.
pub fn check_sign_membership(b: &InducedWeights, datum: &InductionDatum, m: Functional3) -> bool {
    if b.steps.len() != datum.len() {
        return false;
    }
    b.replay(datum, |i, cur| {
        let step = &datum.steps[i];
        let s = Sign::of(m.eval(step.vertex) + b.steps[i]);
        step.support().any(|p| Sign::of(m.eval(p) + cur.get(p).unwrap()) == s)
    })
}

/// A sign sequence under which `b1 - b2` is induced from the base difference,
/// preferring `-` when floor and ceiling agree.
pub fn difference_is_induced(
    b1: &InducedWeights,
    b2: &InducedWeights,
    datum: &InductionDatum,
) -> Result<SignSequence, InductionError> {
    if b1.steps.len() != datum.len() || b2.steps.len() != datum.len() {
        return Err(InductionError::DomainMismatch);
    }
    let mut cur = b1.base.sub(&b2.base).ok_or(InductionError::DomainMismatch)?;
    let mut out = Vec::with_capacity(datum.len());
    for (i, s) in datum.steps.iter().enumerate() {
        let x = combination(s, &cur);
        let d = b1.steps[i] - b2.steps[i];
        let sign = if d == round(x, Sign::Minus) {
            Sign::Minus
        } else if d == round(x, Sign::Plus) {
            Sign::Plus
        } else {
            return Err(InductionError::NotInduced(i));
        };
        out.push(sign);
        cur.insert(s.vertex, d);
    }
    Ok(SignSequence(out))
}

/// Interval induction on `]a, b[` in the given order; each new point refers to
/// its nearest already-present neighbours.
pub fn interval_datum(a: Point2, b: Point2, ordering: &[Point2]) -> Result<InductionDatum, InductionError> {
    let d = b.sub(a);
    let g = d.content();
    if g == 0 {
        return Err(InductionError::BadOrdering(a));
    }
    let step = Point2::new(d.x / g, d.y / g);
    // positions 0..=g along the segment
    let mut present = vec![false; g as usize + 1];
    present[0] = true;
    present[g as usize] = true;
    let mut steps = Vec::new();
    for &p in ordering {
        let off = p.sub(a);
        let k = if step.x != 0 { off.x / step.x } else { off.y / step.y };
        if !(1..g).contains(&k) || a.add(step.scale(k)) != p || present[k as usize] {
            return Err(InductionError::BadOrdering(p));
        }
        let lo = (0..k).rev().find(|&j| present[j as usize]).unwrap();
        let hi = (k + 1..=g).find(|&j| present[j as usize]).unwrap();
        let span = hi - lo;
        steps.push(InductionStep {
            vertex: p,
            coeffs: vec![
                (a.add(step.scale(lo)), Coeff::new(hi - k, span)),
                (a.add(step.scale(hi)), Coeff::new(k - lo, span)),
            ],
        });
        present[k as usize] = true;
    }
    if present.iter().any(|x| !x) {
        let missing = present.iter().position(|x| !x).unwrap() as i64;
        return Err(InductionError::BadOrdering(a.add(step.scale(missing))));
    }
    InductionDatum::new(vec![a, b], steps)
}

/// At most one sign change along `chain`.
pub fn interval_pattern_holds(b: &WeightVector, chain: &[Point2], m: Functional3) -> bool {
    let Some(values) = b.values_on(chain) else {
        return false;
    };
    let signs: Vec<Sign> = chain.iter().zip(values).map(|(p, v)| Sign::of(m.eval(*p) + v)).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count() <= 1
}

/// A corner `v_{-1}, v_0, v_{r+1}` together with the chain `v_1 .. v_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Corner {
    pub v_m1: Point2,
    pub v_0: Point2,
    pub v_rp1: Point2,
    pub chain: Vec<Point2>,
}

impl Corner {
    /// Build a corner with its lattice hull chain.
    pub fn with_hull_chain(v_m1: Point2, v_0: Point2, v_rp1: Point2) -> Result<Corner, InductionError> {
        let chain = hull_chain(v_m1, v_0, v_rp1)?;
        Ok(Corner { v_m1, v_0, v_rp1, chain })
    }

    /// `v_0, v_1, .., v_r, v_{r+1}`.
    pub fn full_chain(&self) -> Vec<Point2> {
        let mut out = Vec::with_capacity(self.chain.len() + 2);
        out.push(self.v_0);
        out.extend(&self.chain);
        out.push(self.v_rp1);
        out
    }

    /// `v_{-1}, v_0, .., v_{r+1}`.
    pub fn points(&self) -> Vec<Point2> {
        let mut out = vec![self.v_m1];
        out.extend(self.full_chain());
        out
    }

    pub fn r(&self) -> usize {
        self.chain.len()
    }

    /// The corner `(v_{-1}, v_0, v_l)` with chain `v_1 .. v_{l-1}`.
    pub fn truncate(&self, l: usize) -> Corner {
        let full = self.full_chain();
        Corner { v_m1: self.v_m1, v_0: self.v_0, v_rp1: full[l], chain: full[1..l].to_vec() }
    }
}

/// Interior chain `v_1 .. v_r` of the corner: the boundary of the hull of the
/// lattice points of the triangle other than `v_{-1}`, between `v_0` and `v_{r+1}`.
pub fn hull_chain(v_m1: Point2, v_0: Point2, v_rp1: Point2) -> Result<Vec<Point2>, InductionError> {
    let (n, q, map) = normalize_corner(v_m1, v_0, v_rp1)?;
    if q == 0 {
        return if n == 1 { Ok(Vec::new()) } else { Err(InductionError::ChainMismatch) };
    }
    let exp = hj_expand(n, q)?;
    let inv = map.inverse();
    let (mut prev, mut cur) = (Point2::new(0, 1), Point2::new(1, 0));
    let mut out = Vec::with_capacity(exp.r());
    for j in 1..=exp.r() {
        out.push(inv.apply(cur));
        let next = cur.scale(exp.a[j - 1]).sub(prev);
        prev = cur;
        cur = next;
    }
    debug_assert_eq!(cur, Point2::new(n, -q));
    Ok(out)
}

fn corner_i_seq(corner: &Corner) -> Result<Vec<i64>, InductionError> {
    let (n, q, _) = normalize_corner(corner.v_m1, corner.v_0, corner.v_rp1)?;
    if q == 0 && n != 1 {
        return Err(InductionError::ChainMismatch);
    }
    if hull_chain(corner.v_m1, corner.v_0, corner.v_rp1)? != corner.chain {
        return Err(InductionError::ChainMismatch);
    }
    if q == 0 {
        return Ok(vec![1, 0]);
    }
    Ok(hj_expand(n, q)?.i_seq)
}

/// Floor-rule triangle induction: `b_1 .. b_r`.
pub fn triangle_induce(b_m1: i64, b_0: i64, b_rp1: i64, corner: &Corner) -> Result<Vec<i64>, InductionError> {
    let i = corner_i_seq(corner)?;
    let r = corner.r();
    let mut out = Vec::with_capacity(r);
    let mut prev = b_0 as i128;
    for j in 1..=r {
        let (ip, ij) = (i[j - 1] as i128, i[j] as i128);
        let num = (ip - ij - 1) * b_m1 as i128 + ij * prev + b_rp1 as i128;
        let v = Integer::div_floor(&num, &ip);
        out.push(v as i64);
        prev = v;
    }
    Ok(out)
}

/// Steps for `v_1 .. v_r` with coefficients on `(v_{-1}, v_{j-1}, v_{r+1})`.
pub fn triangle_steps(corner: &Corner) -> Result<Vec<InductionStep>, InductionError> {
    let i = corner_i_seq(corner)?;
    let full = corner.full_chain();
    Ok((1..=corner.r())
        .map(|j| {
            let ip = i[j - 1];
            InductionStep {
                vertex: full[j],
                coeffs: vec![
                    (corner.v_m1, Coeff::new(ip - i[j] - 1, ip)),
                    (full[j - 1], Coeff::new(i[j], ip)),
                    (corner.v_rp1, Coeff::new(1, ip)),
                ],
            }
        })
        .collect())
}

/// Signs along `(v_{-1}, v_0, .., v_{r+1})` match `(σ, (¬σ)^p, σ^q, (¬σ)^r)`.
pub fn triangle_pattern_holds(c: &WeightVector, corner: &Corner, m: Functional3) -> bool {
    let pts = corner.points();
    let Some(values) = c.values_on(&pts) else {
        return false;
    };
    let signs: Vec<Sign> = pts.iter().zip(values).map(|(p, v)| Sign::of(m.eval(*p) + v)).collect();
    let sigma = signs[0];
    // phase 0: ¬σ run, 1: σ run, 2: ¬σ run
    let mut phase = 0;
    for &s in &signs[1..] {
        let want = if phase == 1 { sigma } else { sigma.flip() };
        if s != want {
            phase += 1;
            if phase > 2 {
                return false;
            }
        }
    }
    true
}

/// Every truncation `(v_{-1}, v_0, v_l)` reproduces `b_1 .. b_{l-1}`.
pub fn truncation_consistent(corner: &Corner, b_m1: i64, b_0: i64, b_rp1: i64) -> bool {
    let Ok(full) = triangle_induce(b_m1, b_0, b_rp1, corner) else {
        return false;
    };
    let mut values = vec![b_0];
    values.extend(&full);
    values.push(b_rp1);
    (1..=corner.r() + 1).all(|l| {
        let t = corner.truncate(l);
        matches!(triangle_induce(b_m1, b_0, values[l], &t), Ok(v) if v == values[1..l])
    })
}
