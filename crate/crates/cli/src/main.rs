//! `waringlab`: generate instances, verify them, and compute binary ranks and
//! h¹ reports. All I/O is JSON; errors go to stderr as `{kind, message}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use waringlab_core::factory::{generate, CaseLabel, Instance};
use waringlab_core::suite::{run_suite, SuiteConfig};
use waringlab_core::verifier::{classify_with, Overall, Thresholds};
use waringlab_core::{complex_rank, h1_ideal, real_rank, BinaryForm, HomogeneousForm, PointSet};

#[derive(Parser, Debug)]
#[command(
    name = "waringlab",
    version,
    about = "Exact real and complex Waring rank laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Recorded in every output; drives all randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent (generate picks a name).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certified instance of one case.
    Generate {
        #[arg(long)]
        case: CaseLabel,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Classify an instance (or raw triple) and write the case report.
    Verify {
        input: PathBuf,
        /// Detection thresholds, e.g. `line=5,conic=10`.
        #[arg(long, value_parser = parse_thresholds)]
        threshold_overrides: Option<Thresholds>,
        #[command(flatten)]
        common: Common,
    },
    /// Complex and real rank of a binary form.
    Rank {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// h¹ of the ideal sheaf of a point set in degree d.
    H1 {
        input: PathBuf,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Generate-and-verify batches over a parameter grid.
    Suite {
        #[arg(long, value_delimiter = ',', default_values_t = CaseLabel::ALL)]
        case: Vec<CaseLabel>,
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
        d: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4])]
        m: Vec<usize>,
        /// Instances per case.
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl From<waringlab_core::Error> for Failure {
    fn from(e: waringlab_core::Error) -> Self {
        Failure {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        kind: "io",
        message: format!("{}: {e}", path.display()),
    }
}

fn parse_thresholds(s: &str) -> Result<Thresholds, String> {
    let mut t = Thresholds::default();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let k: usize = value
            .parse()
            .map_err(|_| format!("{value:?} is not a count"))?;
        match key {
            "line" => t.line = Some(k),
            "conic" => t.conic = Some(k),
            _ => return Err(format!("unknown threshold {key:?}; expected line or conic")),
        }
    }
    Ok(t)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure {
        kind: "parse",
        message: format!("{}: {e}", path.display()),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| io_failure(path, e)),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            // A closed pipe (`| head`) is the reader's choice, not a failure.
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(io_failure(Path::new("<stdout>"), e))
            }
            _ => Ok(()),
        },
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

/// Instance files carry their certificates; raw triples are `{m, d, P, S_C, S_R}`.
fn read_instance(path: &Path) -> Result<Instance, Failure> {
    read_json(path)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Generate { case, d, m, common } => {
            let inst = generate(case, d, m, common.seed)?;
            let path = common.out.unwrap_or_else(|| {
                PathBuf::from(format!(
                    "instance_{case}_d{d}_m{m}_seed{}.json",
                    common.seed
                ))
            });
            emit(Some(&path), &inst.to_json()?)?;
            println!("{}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            input,
            threshold_overrides,
            common,
        } => {
            let mut inst = read_instance(&input)?;
            // Raw triples have no seed of their own; record the run's.
            inst.seed.get_or_insert(common.seed);
            let report = classify_with(&inst, &threshold_overrides.unwrap_or_default());
            emit(common.out.as_deref(), &report.to_json()?)?;
            Ok(if report.overall == Overall::Pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Rank { input, common } => {
            let form: HomogeneousForm = read_json(&input)?;
            let f = BinaryForm::from_form(&form)?;
            let complex = complex_rank(&f)?;
            let real = if f.is_real() {
                Some(real_rank(&f)?)
            } else {
                None
            };
            let out: Value = json!({
                "seed": common.seed,
                "form": form,
                "r_C": complex.rank,
                "r_R": real.as_ref().map(|r| r.rank),
                "complex": complex,
                "real": real,
            });
            emit(common.out.as_deref(), &pretty(&out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::H1 { input, d, common } => {
            let s: PointSet = read_json(&input)?;
            let report = h1_ideal(&s, d)?;
            let out = json!({ "seed": common.seed, "d": d, "report": report });
            emit(common.out.as_deref(), &pretty(&out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Suite {
            case,
            d,
            m,
            count,
            common,
        } => {
            let config = SuiteConfig {
                cases: case,
                degrees: d,
                dims: m,
                per_case: count,
                seed: common.seed,
            };
            let summary = run_suite(&config)?;
            emit(common.out.as_deref(), &pretty(&summary))?;
            Ok(if summary.failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn fail(kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", json!({ "kind": kind, "message": message }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim()),
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => fail(f.kind, &f.message),
    }
}
