//! Both pipelines on the pentagon with per-stage statistics.
//!
//! `cargo run --release -p nccr-core --example pentagon`

use std::time::Instant;

use nccr_core::fixtures;
use nccr_core::pipeline::run_pipeline;
use nccr_core::triangulate::{Mode, SignConfig};
use nccr_core::verify::VerifyMode;

fn main() {
    for mode in [Mode::Gulotta, Mode::Iu] {
        let start = Instant::now();
        let run = run_pipeline(&fixtures::pentagon(), mode, &SignConfig::AllMinus, Some(VerifyMode::Chamber))
            .expect("pipeline");
        let c = run.certificate;
        println!(
            "{mode}: {} stages in {:.2?}; certificate {} ({} classes, volume {})",
            run.reports.len(),
            start.elapsed(),
            c.verdict,
            c.class_count,
            c.volume
        );
        for (i, r) in run.reports.iter().enumerate() {
            println!(
                "  stage {i}: {:?}, {} pairs in {} classes, {} sign vectors, {} unrealizable",
                r.verdict, r.pairs_checked, r.classes, r.sign_vectors_checked, r.unrealizable
            );
        }
    }
}
