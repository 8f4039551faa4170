use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use syzygy::field::FieldDescriptor;
use syzygy::koszul::{coordinate_ring_table, section_table, BettiTable};
use syzygy::models::{build_by_name, EmbeddedModel, DEFAULT_SEED};
use syzygy::projection::{random_subspace, resolve_lineage};
use syzygy::section::Twist;
use syzygy::verify::{
    summary_csv, verify_minimal_degree, verify_prop32_prop33, verify_thm12_linearly_normal, verify_thm12_projected,
    verify_thm13_bound, ProjectedRanges, Status, Theorem, VerificationReport,
};
use syzygy::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_FAIL: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "syzygy", version, about = "Koszul cohomology of embedded varieties and their projections")]
struct Cli {
    #[command(flatten)]
    session: Session,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Session {
    /// q for the rationals, fp:<p> for a prime field
    #[arg(long, global = true, default_value = "fp:32003")]
    field: String,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[arg(long, global = true)]
    pmax: Option<usize>,
    #[arg(long, global = true)]
    qmax: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Coordinate,
    Sections,
}

#[derive(Clone, Copy, ValueEnum)]
enum TwistArg {
    O,
    K,
}

#[derive(Subcommand)]
enum Command {
    /// Build a catalog model and write it as JSON
    Build {
        name: String,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        a: Vec<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project a model from t general points
    Project {
        model: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Koszul Betti table of a model
    Betti {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Sections)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = TwistArg::O)]
        twist: TwistArg,
    },
    /// Check one theorem on a model
    Verify {
        model: PathBuf,
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run every applicable check on the given models
    Report {
        #[arg(required = true)]
        models: Vec<PathBuf>,
    },
}

/// Failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::Parse(_) | Error::InvalidParameter(_) | Error::Shape(_) | Error::Unsupported(_) | Error::Json(_)) => {
                EXIT_USAGE
            }
            Some(Error::Contradiction(_)) => EXIT_FAIL,
            Some(_) => EXIT_INCONCLUSIVE,
            None => EXIT_USAGE,
        };
        Failure {
            code,
            message: format!("{err:#}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let s = &cli.session;
    let field = FieldDescriptor::parse(&s.field).map_err(|e| usage(e.to_string()))?;
    match cli.command {
        Command::Build { name, d, a, g, n, out } => {
            let params = build_params(&name, d, &a, g, n)?;
            eprintln!("seed: {}", s.seed);
            let model = build_by_name(&name, &params, s.seed).map_err(anyhow::Error::from)?;
            eprintln!("{}", model.describe());
            emit_model(&model, out.as_deref())?;
            Ok(0)
        }
        Command::Project { model, t, out } => {
            if t == 0 {
                return Err(usage("--t must be at least 1"));
            }
            let parent = load_model(&model)?;
            eprintln!("seed: {}", s.seed);
            let (child, _) = random_subspace(&parent, t, s.seed)
                .with_context(|| format!("projecting {} with seed {}", parent.name(), s.seed))?;
            eprintln!("{}", child.describe());
            emit_model(&child, out.as_deref())?;
            Ok(0)
        }
        Command::Betti { model, kind, twist } => {
            let model = load_model(&model)?;
            let p_max = s.pmax.unwrap_or(model.nvars());
            let q_max = s.qmax.unwrap_or(3);
            let table = match kind {
                Kind::Coordinate => coordinate_ring_table(&model, field, p_max, q_max),
                Kind::Sections => {
                    let twist = match twist {
                        TwistArg::O => Twist::Zero,
                        TwistArg::K => Twist::Canonical,
                    };
                    section_table(&model, field, twist, p_max, q_max)
                }
            }
            .map_err(anyhow::Error::from)?;
            print_table(&model, &table, matches!(kind, Kind::Sections) && matches!(twist, TwistArg::O), s.format)?;
            Ok(0)
        }
        Command::Verify { model, theorem, k } => {
            let model = load_model(&model)?;
            let theorem = Theorem::from_tag(&theorem).map_err(|e| usage(e.to_string()))?;
            let report = run_theorem(&model, theorem, k, s.seed, field)?;
            print_reports(std::slice::from_ref(&report), s.format)?;
            Ok(match report.status {
                Status::Pass => 0,
                Status::HypothesisNotMet => EXIT_HYPOTHESIS,
                Status::Fail => EXIT_FAIL,
            })
        }
        Command::Report { models } => {
            let mut reports = Vec::new();
            let mut procedures = Vec::new();
            for path in &models {
                let model = load_model(path)?;
                for theorem in applicable(&model) {
                    reports.push(run_theorem(&model, theorem, None, s.seed, field)?);
                }
                if model.metadata().t > 0 {
                    procedures.push(resolve_lineage(&model, field).map_err(anyhow::Error::from)?);
                }
            }
            match s.format {
                Format::Json => {
                    let value = serde_json::json!({ "seed": s.seed, "reports": reports, "procedures": procedures });
                    println!("{}", serde_json::to_string_pretty(&value).map_err(anyhow::Error::from)?);
                }
                Format::Csv => print!("{}", summary_csv(&reports)),
                Format::Pretty => {
                    print_reports(&reports, Format::Pretty)?;
                    for proc in &procedures {
                        println!("{}: resolution over {} steps, open cells left {:?}", proc.model, proc.steps.len(), proc.final_undetermined());
                    }
                }
            }
            let worst = reports
                .iter()
                .map(|r| match r.status {
                    Status::Fail => EXIT_FAIL,
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            Ok(worst)
        }
    }
}

fn build_params(name: &str, d: Option<u32>, a: &[u32], g: Option<u32>, n: Option<u32>) -> Result<Vec<u32>, Failure> {
    let missing = |flag: &str| usage(format!("{name} needs --{flag}"));
    let params = match name.replace('_', "-").as_str() {
        "rational-normal-curve" => vec![d.or_else(|| a.first().copied()).ok_or_else(|| missing("d"))?],
        "scroll" => {
            if a.is_empty() {
                return Err(missing("a"));
            }
            a.to_vec()
        }
        "veronese-surface" => vec![],
        "quadric-hypersurface" => vec![n.ok_or_else(|| missing("n"))?],
        "elliptic-normal-curve" => vec![d.ok_or_else(|| missing("d"))?],
        "hyperelliptic-curve" => vec![g.ok_or_else(|| missing("g"))?, d.ok_or_else(|| missing("d"))?],
        other => return Err(usage(format!("unknown constructor `{other}`"))),
    };
    Ok(params)
}

fn load_model(path: &Path) -> Result<EmbeddedModel, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    EmbeddedModel::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit_model(model: &EmbeddedModel, out: Option<&Path>) -> Result<(), Failure> {
    let json = model.to_json().map_err(anyhow::Error::from)?;
    match out {
        Some(path) => std::fs::write(path, json + "\n").map_err(|e| usage(format!("writing {}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn print_table(model: &EmbeddedModel, table: &BettiTable, projected_display: bool, format: Format) -> Result<(), Failure> {
    match format {
        Format::Pretty => {
            let open = if projected_display && model.metadata().t > 0 {
                ProjectedRanges::of(model).map(|r| r.undetermined(table.p_max)).unwrap_or_default()
            } else {
                Vec::new()
            };
            print!("{}", table.format_pretty(&open));
            if !open.is_empty() {
                println!("? = left open by the vanishing ranges for t = {}", model.metadata().t);
            }
        }
        Format::Json => println!("{}", table.to_json().map_err(anyhow::Error::from)?),
        Format::Csv => print!("{}", table.to_csv()),
    }
    Ok(())
}

fn applicable(model: &EmbeddedModel) -> Vec<Theorem> {
    let md = model.metadata();
    let mut out = vec![Theorem::MinimalDegree];
    if md.linearly_normal {
        out.push(Theorem::LinearlyNormalSyzygies);
    } else {
        out.push(Theorem::RegularityBound);
        if md.gonality.is_some() {
            out.push(Theorem::ProjectedSyzygies);
        }
    }
    if md.n >= 2 {
        out.push(Theorem::CurveSectionInvariance);
    }
    out
}

fn run_theorem(
    model: &EmbeddedModel,
    theorem: Theorem,
    k: Option<usize>,
    seed: u64,
    field: FieldDescriptor,
) -> Result<VerificationReport, Failure> {
    let report = match theorem {
        Theorem::MinimalDegree => verify_minimal_degree(model, field),
        Theorem::LinearlyNormalSyzygies => {
            let k = k.unwrap_or_else(|| (model.metadata().e as i64 - model.metadata().g).max(0) as usize);
            verify_thm12_linearly_normal(model, k, field)
        }
        Theorem::ProjectedSyzygies => verify_thm12_projected(model, field),
        Theorem::RegularityBound => verify_thm13_bound(model, field),
        Theorem::CurveSectionInvariance => {
            eprintln!("seed: {seed}");
            verify_prop32_prop33(model, seed, field)
        }
    };
    Ok(report.map_err(anyhow::Error::from)?)
}

fn print_reports(reports: &[VerificationReport], format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let json = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                serde_json::to_string_pretty(reports).map_err(Error::from)
            };
            println!("{}", json.map_err(anyhow::Error::from)?);
        }
        Format::Csv => print!("{}", summary_csv(reports)),
        Format::Pretty => {
            for r in reports {
                println!("{} [{}, seeds {:?}]", r.summary, r.field, r.seed_chain);
                for (label, items) in [("hypothesis", &r.hypotheses), ("conclusion", &r.conclusions)] {
                    for item in items.iter() {
                        println!("  {} {label}: {} ({})", if item.holds { "ok  " } else { "FAIL" }, item.name, item.evidence);
                    }
                }
                for note in &r.notes {
                    println!("  note: {note}");
                }
            }
        }
    }
    Ok(())
}
