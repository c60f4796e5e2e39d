//! Ext-vanishing between all pairs of a weight collection on one stage.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{CharacterGroup, Functional3, GeometryError, Point2};
use crate::weights::{sign_string, WeightVector};

use super::chamber::{box_masks, cover_masks, mask_signs, Realizer};
use super::complex::StageComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("weight vector {index} has no value at {vertex}")]
    MissingWeight { index: usize, vertex: Point2 },
    #[error("more than {bound} sign assignments (explored {explored})")]
    ExplosionGuard { bound: usize, explored: usize },
    #[error("{0} has no sign: not a polygon vertex and not induced")]
    Uncovered(Point2),
    #[error("datum base point {0} is not a polygon vertex")]
    BaseNotVertex(Point2),
    #[error("invalid corner cut: {0}")]
    BadCut(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// How the functionals `m` are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "radius")]
pub enum VerifyMode {
    /// Every sign vector of a real functional, filtered by exact integer
    /// realizability.
    Chamber,
    /// Every integer functional in `[-r, r]^3`.
    Box(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub b: WeightVector,
    pub bprime: WeightVector,
    /// Signs of `b' - b` over the sorted stage vertices.
    pub signs: String,
    pub witness: Option<Functional3>,
    /// `(b̃_0, b̃_1)` of the V-complex.
    pub betti: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    #[serde(rename = "pairs")]
    pub pairs_checked: usize,
    #[serde(rename = "vectors")]
    pub sign_vectors_checked: usize,
    /// Affine classes among the differences `b' - b`.
    pub classes: usize,
    /// Non-contractible real sign vectors that no integer `m` realizes.
    pub unrealizable: usize,
    pub failures: Vec<Failure>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

/// Values of every member on `vertices`, in order.
pub(crate) fn value_table(s: &[WeightVector], vertices: &[Point2]) -> Result<Vec<Vec<i64>>, VerifyError> {
    s.iter()
        .enumerate()
        .map(|(index, b)| {
            vertices.iter().map(|&v| b.get(v).ok_or(VerifyError::MissingWeight { index, vertex: v })).collect()
        })
        .collect()
}

/// Ordered pairs `(i, j)` grouped by the affine class of `s[j] - s[i]`;
/// returns one representative pair and difference per class, in first-seen
/// order.
pub(crate) fn difference_classes(values: &[Vec<i64>], group: &CharacterGroup) -> Vec<((usize, usize), Vec<i64>)> {
    let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for i in 0..values.len() {
        for j in 0..values.len() {
            let diff: Vec<i64> = values[j].iter().zip(&values[i]).map(|(a, b)| a - b).collect();
            let key = group.character_of_values(&diff);
            if !seen.contains_key(&key) {
                seen.insert(key, out.len());
                out.push(((i, j), diff));
            }
        }
    }
    out
}

struct ClassOutcome {
    checked: usize,
    unrealizable: usize,
    failures: Vec<(u128, Option<Functional3>, (usize, usize, usize))>,
}

fn check_class(complex: &StageComplex, diff: &[i64], mode: VerifyMode) -> ClassOutcome {
    let points = complex.vertices();
    let mut out = ClassOutcome { checked: 0, unrealizable: 0, failures: Vec::new() };
    match mode {
        VerifyMode::Chamber => {
            let realizer = Realizer::new(points, diff);
            for mask in cover_masks(points, diff) {
                out.checked += 1;
                if complex.contractible(mask) {
                    continue;
                }
                match realizer.realize(mask) {
                    Some(m) => out.failures.push((mask, Some(m), complex.betti(mask))),
                    None => out.unrealizable += 1,
                }
            }
        }
        VerifyMode::Box(r) => {
            for (mask, m) in box_masks(points, diff, r) {
                out.checked += 1;
                if !complex.contractible(mask) {
                    out.failures.push((mask, Some(m), complex.betti(mask)));
                }
            }
        }
    }
    out
}

/// Check that every `V_{D_{b'-b}, m}` on the stage triangulation is empty or
/// contractible.
pub fn ext_vanishing(
    triangles: &[[Point2; 3]],
    s: &[WeightVector],
    mode: VerifyMode,
) -> Result<VerificationReport, VerifyError> {
    let complex = StageComplex::new(triangles);
    let vertices = complex.vertices().to_vec();
    let values = value_table(s, &vertices)?;
    let group = CharacterGroup::from_points(&vertices);
    let classes = difference_classes(&values, &group);
    let outcomes: Vec<ClassOutcome> = classes.par_iter().map(|(_, diff)| check_class(&complex, diff, mode)).collect();
    let mut report = VerificationReport {
        mode,
        pairs_checked: s.len() * s.len(),
        sign_vectors_checked: 0,
        classes: classes.len(),
        unrealizable: 0,
        failures: Vec::new(),
        verdict: Verdict::Certified,
    };
    for (((i, j), _), o) in classes.iter().zip(outcomes) {
        report.sign_vectors_checked += o.checked;
        report.unrealizable += o.unrealizable;
        for (mask, witness, betti) in o.failures {
            report.failures.push(Failure {
                b: s[*i].restrict(&vertices).expect("checked"),
                bprime: s[*j].restrict(&vertices).expect("checked"),
                signs: sign_string(&mask_signs(mask, vertices.len())),
                witness,
                betti: (betti.1, betti.2),
            });
        }
    }
    report.verdict = if report.failures.iter().any(|f| f.witness.is_some()) {
        Verdict::Refuted
    } else if !report.failures.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::Certified
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::new(x, y)
    }

    fn conifold() -> (Vec<[Point2; 3]>, Vec<Point2>) {
        let sq = vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)];
        (vec![[sq[0], sq[1], sq[2]], [sq[0], sq[2], sq[3]]], sq)
    }

    #[test]
    fn conifold_certified() {
        let (t, sq) = conifold();
        let s = vec![WeightVector::from_pairs(&sq, &[0, 0, 0, 0]), WeightVector::from_pairs(&sq, &[0, 0, 1, 0])];
        for mode in [VerifyMode::Chamber, VerifyMode::Box(8)] {
            let r = ext_vanishing(&t, &s, mode).unwrap();
            assert_eq!(r.verdict, Verdict::Certified, "{mode:?}");
            assert_eq!(r.pairs_checked, 4);
        }
    }

    #[test]
    fn sabotage_refuted() {
        let (t, sq) = conifold();
        let s = vec![WeightVector::zero(&sq), WeightVector::from_pairs(&sq, &[0, 1, 0, 1])];
        let r = ext_vanishing(&t, &s, VerifyMode::Chamber).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        // diagonal (0,0)-(1,1): the two off-diagonal corners are negative at m = 0
        let f = &r.failures[0];
        assert_eq!((f.signs.as_str(), f.witness, f.betti), ("+--+", Some(Functional3::new(0, 0, 0)), (1, 0)));
        // the other diagonal: signs (-,+,-,+) counter-clockwise at m = (0,0,-1)
        let other = vec![[sq[0], sq[1], sq[3]], [sq[1], sq[2], sq[3]]];
        let r = ext_vanishing(&other, &s, VerifyMode::Chamber).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let f = &r.failures[0];
        assert_eq!((f.signs.as_str(), f.witness, f.betti), ("-++-", Some(Functional3::new(0, 0, -1)), (1, 0)));
    }

    #[test]
    fn missing_weight_is_reported() {
        let (t, sq) = conifold();
        let s = vec![WeightVector::zero(&sq[..3])];
        assert!(matches!(ext_vanishing(&t, &s, VerifyMode::Chamber), Err(VerifyError::MissingWeight { .. })));
    }
}
