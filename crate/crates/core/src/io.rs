//! JSON file formats: polygons, plans, weight collections and reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::induction::{Coeff, InductionDatum, InductionError, InductionStep, SignSequence};
use crate::lattice::{LatticePolygon, Point2};
use crate::triangulate::{assemble, CutRecord, Mode, NestedSequence, Slope, TriangulateError, Triangulation};
use crate::weights::Sign;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad slope {0:?}")]
    Slope(String),
    #[error("plan triangles do not match the cut sequence")]
    Inconsistent,
    #[error(transparent)]
    Triangulate(#[from] TriangulateError),
    #[error(transparent)]
    Induction(#[from] InductionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub vertex: Point2,
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub vertex: Point2,
    pub coeffs: Vec<CoeffJson>,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSteps {
    pub base: Vec<Point2>,
    pub steps: Vec<StepJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutJson {
    pub removed: Point2,
    pub chain: Vec<Point2>,
    /// `"p/q"` for Gulotta cuts.
    pub slope: Option<String>,
}

/// A triangulation with its induction plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub mode: Mode,
    pub polygon_0: LatticePolygon,
    /// `P_0, .., P_l`.
    pub nested: Vec<LatticePolygon>,
    pub cuts: Vec<CutJson>,
    /// All triangles of `P_0`.
    pub triangles: Vec<[Point2; 3]>,
    /// The triangulation of `P_l` the regions are added to.
    pub base_triangles: Vec<[Point2; 3]>,
    pub stage_vertices: Vec<Vec<Point2>>,
    pub plan: PlanSteps,
}

impl PlanSteps {
    pub fn new(datum: &InductionDatum, signs: &SignSequence) -> Self {
        PlanSteps {
            base: datum.base().to_vec(),
            steps: datum
                .steps()
                .iter()
                .zip(&signs.0)
                .map(|(s, &sign)| StepJson {
                    vertex: s.vertex,
                    coeffs: s
                        .coeffs
                        .iter()
                        .map(|(p, c)| CoeffJson { vertex: *p, num: *c.numer(), den: *c.denom() })
                        .collect(),
                    sign,
                })
                .collect(),
        }
    }

    pub fn datum(&self) -> Result<(InductionDatum, SignSequence), IoError> {
        let steps = self
            .steps
            .iter()
            .map(|s| InductionStep {
                vertex: s.vertex,
                coeffs: s.coeffs.iter().map(|c| (c.vertex, Coeff::new(c.num, c.den))).collect(),
            })
            .collect();
        let datum = InductionDatum::new(self.base.clone(), steps)?;
        Ok((datum, SignSequence(self.steps.iter().map(|s| s.sign).collect())))
    }
}

impl PlanFile {
    pub fn new(t: &Triangulation, datum: &InductionDatum, signs: &SignSequence) -> Self {
        PlanFile {
            mode: t.mode,
            polygon_0: t.sequence.outer().clone(),
            nested: t.sequence.polygons.clone(),
            cuts: t
                .sequence
                .cuts
                .iter()
                .map(|c| CutJson {
                    removed: c.removed_vertex,
                    chain: c.chain.clone(),
                    slope: c.slope.map(|s| s.to_string()),
                })
                .collect(),
            triangles: t.triangles(),
            base_triangles: t.base.clone(),
            stage_vertices: t.stage_vertices.clone(),
            plan: PlanSteps::new(datum, signs),
        }
    }

    /// Rebuild the triangulation and check it against the stored triangles.
    pub fn triangulation(&self) -> Result<Triangulation, IoError> {
        let cuts = self
            .cuts
            .iter()
            .map(|c| {
                let slope = match &c.slope {
                    Some(s) => Some(s.parse::<Slope>().map_err(|_| IoError::Slope(s.clone()))?),
                    None => None,
                };
                Ok(CutRecord { removed_vertex: c.removed, chain: c.chain.clone(), slope })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let seq = NestedSequence { mode: self.mode, polygons: self.nested.clone(), cuts };
        let t = assemble(&seq, &self.base_triangles)?;
        if t.triangles() != self.triangles || t.stage_vertices != self.stage_vertices {
            return Err(IoError::Inconsistent);
        }
        Ok(t)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}
