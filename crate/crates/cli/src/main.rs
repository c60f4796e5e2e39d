use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nccr_core::fixtures;
use nccr_core::induction::induce;
use nccr_core::io::{from_json, to_json, PlanFile};
use nccr_core::lattice::{group_weights, LatticePolygon};
use nccr_core::pipeline::{build_triangulation, run_pipeline, seed_for};
use nccr_core::render::{render_polygon, render_triangulation};
use nccr_core::triangulate::{induction_plan, restrict, Mode, SignConfig, Triangulation};
use nccr_core::verify::{ext_vanishing, nccr_certificate, Verdict, VerificationReport, VerifyMode};
use nccr_core::weights::{Sign, WeightVector};

#[derive(Parser)]
#[command(name = "nccr", version, about = "Toric NCCR construction and certification for lattice polygons")]
struct Cli {
    /// Worker threads for verification sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Gulotta,
    Iu,
}

impl From<Method> for Mode {
    fn from(m: Method) -> Mode {
        match m {
            Method::Gulotta => Mode::Gulotta,
            Method::Iu => Mode::Iu,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepMode {
    Chamber,
    Box,
}

#[derive(Subcommand)]
enum Command {
    /// Build the cut sequence, triangulation and induction plan.
    Triangulate {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        polygon: PathBuf,
        /// `all-minus`, `all-plus`, or a JSON file with one sign per free step.
        #[arg(long, default_value = "all-minus")]
        signs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Induce a seed collection through a plan onto every vertex.
    Induce {
        #[arg(long)]
        plan: PathBuf,
        /// `gulotta`, `iu`, or a JSON list of weight vectors on the plan base.
        #[arg(long)]
        seed: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ext-vanishing on every stage of a plan.
    Verify {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        seed: String,
        #[arg(long, value_enum, default_value = "chamber")]
        mode: SweepMode,
        #[arg(long, default_value_t = 8)]
        box_radius: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CM of all endomorphisms and the class count against the volume.
    Certify {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Character group and vertex weights of a polygon.
    Weights {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG of a plan or a bare polygon.
    Render {
        #[arg(long, conflicts_with = "polygon", required_unless_present = "polygon")]
        plan: Option<PathBuf>,
        #[arg(long)]
        polygon: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the bundled fixture polygons into a directory.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
    /// The whole pipeline; writes every artifact into a directory.
    Run {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, default_value = "all-minus")]
        signs: String,
        #[arg(long, value_enum, default_value = "chamber")]
        mode: SweepMode,
        #[arg(long, default_value_t = 8)]
        box_radius: i64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Write via a temporary file and rename, or print when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
            Ok(())
        }
    }
}

fn read<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn sign_config(arg: &str) -> Result<SignConfig> {
    Ok(match arg {
        "all-minus" => SignConfig::AllMinus,
        "all-plus" => SignConfig::Fixed(Sign::Plus),
        path => SignConfig::PerStep(read::<Vec<Sign>>(Path::new(path))?),
    })
}

fn verify_mode(mode: SweepMode, radius: i64) -> VerifyMode {
    match mode {
        SweepMode::Chamber => VerifyMode::Chamber,
        SweepMode::Box => VerifyMode::Box(radius),
    }
}

fn seed_members(arg: &str, t: &Triangulation) -> Result<Vec<WeightVector>> {
    let wanted = match arg {
        "gulotta" => Some(Mode::Gulotta),
        "iu" => Some(Mode::Iu),
        _ => None,
    };
    match wanted {
        Some(m) if m != t.mode => bail!("seed {arg} does not match a {} plan", t.mode),
        Some(_) => Ok(seed_for(t).members),
        None => read(Path::new(arg)),
    }
}

fn induced_set(plan: &PlanFile, t: &Triangulation, seed: &str) -> Result<Vec<WeightVector>> {
    let (datum, signs) = plan.plan.datum()?;
    seed_members(seed, t)?
        .iter()
        .enumerate()
        .map(|(i, b)| induce(b, &datum, &signs).with_context(|| format!("inducing seed {i}")))
        .collect()
}

fn worst(reports: &[VerificationReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Refuted) {
        Verdict::Refuted
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Certified
    }
}

fn verdict_code(v: Verdict) -> ExitCode {
    match v {
        Verdict::Certified => ExitCode::SUCCESS,
        Verdict::Refuted => ExitCode::from(2),
        Verdict::Inconclusive => ExitCode::from(3),
    }
}

#[derive(Serialize)]
struct StageReport<'a> {
    stage: usize,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

fn stage_reports(reports: &[VerificationReport]) -> Vec<StageReport<'_>> {
    reports.iter().enumerate().map(|(stage, report)| StageReport { stage, report }).collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Triangulate { method, polygon, signs, out } => {
            let p: LatticePolygon = read(&polygon)?;
            let t = build_triangulation(&p, method.into())?;
            let (datum, seq) = induction_plan(&t.sequence, &sign_config(&signs)?)?;
            emit(out.as_deref(), &to_json(&PlanFile::new(&t, &datum, &seq))?)?;
        }
        Command::Induce { plan, seed, out } => {
            let plan: PlanFile = read(&plan)?;
            let t = plan.triangulation()?;
            emit(out.as_deref(), &to_json(&induced_set(&plan, &t, &seed)?)?)?;
        }
        Command::Verify { plan, seed, mode, box_radius, out } => {
            let plan: PlanFile = read(&plan)?;
            let t = plan.triangulation()?;
            let induced = induced_set(&plan, &t, &seed)?;
            let mut reports = Vec::new();
            for (i, v) in t.stage_vertices.iter().enumerate() {
                let s = restrict(&induced, v)?;
                reports.push(ext_vanishing(&t.triangles_at(i), &s, verify_mode(mode, box_radius))?);
            }
            emit(out.as_deref(), &to_json(&stage_reports(&reports))?)?;
            return Ok(verdict_code(worst(&reports)));
        }
        Command::Certify { polygon, weights, out } => {
            let p: LatticePolygon = read(&polygon)?;
            let s: Vec<WeightVector> = read(&weights)?;
            let c = nccr_certificate(&p, &s)?;
            emit(out.as_deref(), &to_json(&c)?)?;
            return Ok(if c.verdict { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
        Command::Weights { polygon, out } => {
            let p: LatticePolygon = read(&polygon)?;
            emit(out.as_deref(), &to_json(&group_weights(&p))?)?;
        }
        Command::Render { plan, polygon, out } => {
            let svg = match (plan, polygon) {
                (Some(plan), _) => render_triangulation(&read::<PlanFile>(&plan)?.triangulation()?),
                (None, Some(p)) => render_polygon(&read(&p)?),
                (None, None) => bail!("--plan or --polygon is required"),
            };
            emit(out.as_deref(), &svg)?;
        }
        Command::Fixtures { out } => {
            fs::create_dir_all(&out)?;
            for (name, p) in fixtures::named() {
                emit(Some(&out.join(format!("{name}.json"))), &to_json(&p)?)?;
            }
        }
        Command::Run { method, polygon, signs, mode, box_radius, out } => {
            let p: LatticePolygon = read(&polygon)?;
            let r = run_pipeline(&p, method.into(), &sign_config(&signs)?, Some(verify_mode(mode, box_radius)))?;
            fs::create_dir_all(&out)?;
            let plan = PlanFile::new(&r.triangulation, &r.datum, &r.sign_sequence);
            emit(Some(&out.join("plan.json")), &to_json(&plan)?)?;
            emit(Some(&out.join("plan.svg")), &render_triangulation(&r.triangulation))?;
            emit(Some(&out.join("induced.json")), &to_json(&r.induced)?)?;
            emit(Some(&out.join("restricted.json")), &to_json(&r.final_set())?)?;
            emit(Some(&out.join("reports.json")), &to_json(&stage_reports(&r.reports))?)?;
            emit(Some(&out.join("certificate.json")), &to_json(&r.certificate)?)?;
            let v = worst(&r.reports);
            println!(
                "{} stages {:?}; certificate {} ({} classes, volume {})",
                r.reports.len(),
                v,
                r.certificate.verdict,
                r.certificate.class_count,
                r.certificate.volume
            );
            if v == Verdict::Certified && !r.certificate.verdict {
                return Ok(ExitCode::from(2));
            }
            return Ok(verdict_code(v));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
