//! Cohen–Macaulay tests on the polygon vertices, class counting and the
//! volume certificate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::induction::{induce, Coeff, InductionDatum, InductionStep, SignSequence};
use crate::lattice::{convex_hull, normalized_volume, on_segment, CharacterGroup, Functional3, LatticePolygon, Point2};
use crate::triangulate::SeedCollection;
use crate::weights::{Sign, WeightVector};

use super::chamber::{cover_masks, Realizer};
use super::ext::{difference_classes, value_table, VerifyError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmResult {
    pub ok: bool,
    /// An integer functional whose signs break the cyclic pattern.
    pub witness: Option<Functional3>,
}

/// At most one `+ -> -` step read cyclically.
fn cyclic_ok(mask: u128, n: usize) -> bool {
    let flips = (0..n).filter(|&i| mask >> i & 1 == 0 && mask >> ((i + 1) % n) & 1 == 1).count();
    flips <= 1
}

fn cm_values(points: &[Point2], values: &[i64]) -> CmResult {
    let realizer = Realizer::new(points, values);
    for mask in cover_masks(points, values) {
        if cyclic_ok(mask, points.len()) {
            continue;
        }
        if let Some(m) = realizer.realize(mask) {
            return CmResult { ok: false, witness: Some(m) };
        }
    }
    CmResult { ok: true, witness: None }
}

/// Every integer sign pattern on the counter-clockwise vertices is
/// `+..+-..-` up to rotation.
pub fn cm_check(p: &LatticePolygon, b: &WeightVector) -> Result<CmResult, VerifyError> {
    let values = value_table(std::slice::from_ref(b), p.vertices())?.remove(0);
    Ok(cm_values(p.vertices(), &values))
}

fn all_differences_cm(
    vertices: &[Point2],
    s: &[WeightVector],
) -> Result<Option<(usize, usize, Functional3)>, VerifyError> {
    let values = value_table(s, vertices)?;
    let group = CharacterGroup::from_points(vertices);
    for ((i, j), diff) in difference_classes(&values, &group) {
        if let Some(m) = cm_values(vertices, &diff).witness {
            return Ok(Some((i, j, m)));
        }
    }
    Ok(None)
}

/// `cm_check(b' - b)` for every ordered pair.
pub fn endo_cm_check(p: &LatticePolygon, s: &[WeightVector]) -> Result<bool, VerifyError> {
    Ok(all_differences_cm(p.vertices(), s)?.is_none())
}

/// The first ordered pair `(i, j)` for which `s[j] - s[i]` is not CM, with a
/// witness.
pub fn endo_cm_failure(
    p: &LatticePolygon,
    s: &[WeightVector],
) -> Result<Option<(usize, usize, Functional3)>, VerifyError> {
    all_differences_cm(p.vertices(), s)
}

/// No difference of two seeds shows `+-+-` or `-+-+` on the four corners.
pub fn rectangle_condition(s0: &SeedCollection) -> bool {
    assert_eq!(s0.base_vertices.len(), 4, "rectangle seeds live on four corners");
    // on four cyclic points the forbidden patterns are exactly the non-CM ones
    matches!(all_differences_cm(&s0.base_vertices, &s0.members), Ok(None))
}

/// Number of affine classes among the restrictions to `vertices`.
pub fn count_classes(vertices: &[Point2], s: &[WeightVector]) -> Result<usize, VerifyError> {
    let values = value_table(s, vertices)?;
    let group = CharacterGroup::from_points(vertices);
    let set: BTreeSet<Vec<i64>> = values.iter().map(|v| group.character_of_values(v)).collect();
    Ok(set.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NccrCertificate {
    pub cm_ok: bool,
    pub class_count: usize,
    pub volume: i64,
    pub verdict: bool,
}

pub fn nccr_certificate(p: &LatticePolygon, s: &[WeightVector]) -> Result<NccrCertificate, VerifyError> {
    let cm_ok = endo_cm_check(p, s)?;
    let class_count = count_classes(p.vertices(), s)?;
    let volume = normalized_volume(p);
    Ok(NccrCertificate { cm_ok, class_count, volume, verdict: cm_ok && class_count as i64 == volume })
}

/// Removal of the triangle `(apex, on_pred, on_succ)` where the two points lie
/// on the edges from `apex` to its neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerCut {
    pub apex: Point2,
    pub on_pred: Point2,
    pub on_succ: Point2,
}

impl CornerCut {
    /// The polygon left after the cut and the 2-term steps for the new points.
    pub fn apply(&self, p: &LatticePolygon) -> Result<(LatticePolygon, Vec<InductionStep>), VerifyError> {
        let k = p.index_of(self.apex).ok_or_else(|| VerifyError::BadCut(format!("{} is not a vertex", self.apex)))?;
        let n = p.len();
        let pred = p.vertex(k + n - 1);
        let succ = p.vertex(k + 1);
        let mut steps = Vec::new();
        for (q, far) in [(self.on_pred, pred), (self.on_succ, succ)] {
            if q == self.apex || !on_segment(self.apex, far, q) {
                return Err(VerifyError::BadCut(format!("{q} is not on an edge at {}", self.apex)));
            }
            if q != far {
                let len = far.sub(self.apex).content();
                let t = q.sub(self.apex).content();
                steps.push(InductionStep {
                    vertex: q,
                    coeffs: vec![(self.apex, Coeff::new(len - t, len)), (far, Coeff::new(t, len))],
                });
            }
        }
        let mut pts: Vec<Point2> = p.vertices().iter().copied().filter(|&v| v != self.apex).collect();
        pts.extend([self.on_pred, self.on_succ]);
        let q = convex_hull(&pts)?;
        Ok((q, steps))
    }
}

/// For CM `b`, every sign choice for the new points gives a CM projection to
/// the cut polygon. `None` when `b` itself is not CM.
pub fn projection_preserves_cm(
    p: &LatticePolygon,
    b: &WeightVector,
    cut: &CornerCut,
) -> Result<Option<bool>, VerifyError> {
    if !cm_check(p, b)?.ok {
        return Ok(None);
    }
    let (q, steps) = cut.apply(p)?;
    let datum = InductionDatum::new(p.vertices().to_vec(), steps).map_err(|e| VerifyError::BadCut(e.to_string()))?;
    let base = b.restrict(p.vertices()).ok_or(VerifyError::MissingWeight { index: 0, vertex: p.vertex(0) })?;
    for choice in 0..1u32 << datum.len() {
        let signs = SignSequence(
            (0..datum.len()).map(|i| if choice >> i & 1 == 1 { Sign::Plus } else { Sign::Minus }).collect(),
        );
        let induced = induce(&base, &datum, &signs).map_err(|e| VerifyError::BadCut(e.to_string()))?;
        let projected = induced.restrict(q.vertices()).expect("cut polygon vertices are induced");
        if !cm_check(&q, &projected)?.ok {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}
