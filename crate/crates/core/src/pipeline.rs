//! End-to-end construction and certification for one polygon.

use thiserror::Error;

use crate::induction::{induce, InductionDatum, InductionError, SignSequence};
use crate::lattice::LatticePolygon;
use crate::triangulate::{
    assemble, base_triangulation, embed_rectangle, embed_triangle, gulotta_sequence, induction_plan, iu_sequence,
    restrict, seed_gulotta, seed_iu, Mode, SeedCollection, SignConfig, TriangulateError, Triangulation,
};
use crate::verify::{ext_vanishing, nccr_certificate, NccrCertificate, VerificationReport, VerifyError, VerifyMode};
use crate::weights::WeightVector;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("triangulation: {0}")]
    Triangulate(#[from] TriangulateError),
    #[error("induction of seed {index}: {source}")]
    Induction { index: usize, source: InductionError },
    #[error("verification of stage {stage}: {source}")]
    Verify { stage: usize, source: VerifyError },
    #[error("certificate: {0}")]
    Certificate(VerifyError),
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub polygon: LatticePolygon,
    pub mode: Mode,
    pub signs: SignConfig,
    pub triangulation: Triangulation,
    pub datum: InductionDatum,
    pub sign_sequence: SignSequence,
    pub seed: SeedCollection,
    /// Seeds induced to every vertex of the triangulation.
    pub induced: Vec<WeightVector>,
    /// `restricted[i]`: the induced set restricted to the stage vertices `V_i`.
    pub restricted: Vec<Vec<WeightVector>>,
    /// One report per stage when verification was requested.
    pub reports: Vec<VerificationReport>,
    pub certificate: NccrCertificate,
}

impl PipelineRun {
    /// `P` in the coordinates of the run (translated into the embedding).
    pub fn inner(&self) -> &LatticePolygon {
        self.triangulation.sequence.inner()
    }

    /// The restriction to the vertices of `P`.
    pub fn final_set(&self) -> &[WeightVector] {
        self.restricted.last().expect("at least one stage")
    }

    pub fn stages_certified(&self) -> bool {
        self.reports.iter().all(|r| r.certified())
    }
}

pub fn build_triangulation(polygon: &LatticePolygon, mode: Mode) -> Result<Triangulation, TriangulateError> {
    let (pp, p0, _, _) = match mode {
        Mode::Gulotta => embed_rectangle(polygon),
        Mode::Iu => embed_triangle(polygon),
    };
    let seq = match mode {
        Mode::Gulotta => gulotta_sequence(&pp, &p0)?,
        Mode::Iu => iu_sequence(&pp, &p0)?,
    };
    assemble(&seq, &base_triangulation(&pp))
}

pub fn seed_for(t: &Triangulation) -> SeedCollection {
    let hi = t.sequence.outer().max_corner();
    match t.mode {
        Mode::Gulotta => seed_gulotta(hi.x, hi.y),
        Mode::Iu => seed_iu(hi.x, hi.y),
    }
}

/// Embed, cut, assemble, plan, seed, induce every seed with the same datum
/// and signs, restrict to each stage, verify each stage (if asked) and
/// certify on `P`.
pub fn run_pipeline(
    polygon: &LatticePolygon,
    mode: Mode,
    signs: &SignConfig,
    verify: Option<VerifyMode>,
) -> Result<PipelineRun, PipelineError> {
    let triangulation = build_triangulation(polygon, mode)?;
    let (datum, sign_sequence) = induction_plan(&triangulation.sequence, signs)?;
    let seed = seed_for(&triangulation);
    let induced: Vec<WeightVector> = seed
        .members
        .iter()
        .enumerate()
        .map(|(index, b)| {
            induce(b, &datum, &sign_sequence).map_err(|source| PipelineError::Induction { index, source })
        })
        .collect::<Result<_, _>>()?;
    let restricted: Vec<Vec<WeightVector>> =
        triangulation.stage_vertices.iter().map(|v| restrict(&induced, v)).collect::<Result<_, _>>()?;
    let mut reports = Vec::new();
    if let Some(vm) = verify {
        for (stage, s) in restricted.iter().enumerate() {
            let r = ext_vanishing(&triangulation.triangles_at(stage), s, vm)
                .map_err(|source| PipelineError::Verify { stage, source })?;
            reports.push(r);
        }
    }
    let inner = triangulation.sequence.inner().clone();
    let certificate =
        nccr_certificate(&inner, restricted.last().expect("stage l")).map_err(PipelineError::Certificate)?;
    Ok(PipelineRun {
        polygon: polygon.clone(),
        mode,
        signs: signs.clone(),
        triangulation,
        datum,
        sign_sequence,
        seed,
        induced,
        restricted,
        reports,
        certificate,
    })
}
