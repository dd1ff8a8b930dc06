use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tpskit::algebra::{is_tpp, tpp_to_tps};
use tpskit::json::{parse_algebra, parse_pair, parse_state, parse_tps, to_json, TpsJson};
use tpskit::observables::tps_from_observables;
use tpskit::refactor::{dual_verdict, tps_making_state_entangled, tps_making_state_product};
use tpskit::workbench::examples::DEFAULT_DEGREE;
use tpskit::workbench::{analyze, example_bargmann, example_bell, example_center_of_mass};
use tpskit::{ComplexVector, Error, Tolerance, Tps};

#[derive(Parser)]
#[command(name = "tpskit", version, about = "Tensor product structures and relative entanglement")]
struct Cli {
    /// Seed for the randomized constructions.
    #[arg(long, global = true, env = "TPSKIT_SEED", default_value_t = 0)]
    seed: u64,

    /// Tolerance overrides, e.g. `eig=1e-8,rank=1e-10,res=1e-10`.
    #[arg(long, global = true, value_name = "T")]
    tol: Option<TolArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt analysis of a state relative to a TPS.
    Analyze {
        #[arg(long, value_name = "F")]
        state: PathBuf,
        #[arg(long, value_name = "F")]
        tps: PathBuf,
    },
    /// TPS induced by a standard complete set of observables.
    BuildTps {
        #[arg(long, value_name = "F")]
        observables: PathBuf,
    },
    /// Build a TPS in which the given state is a product, entangled, or both.
    Refactor {
        #[arg(long, value_name = "F")]
        state: PathBuf,
        #[arg(long, value_name = "KxL")]
        shape: Shape,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        orthonormal: bool,
        /// Write the TPS files into this directory instead of stdout.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Check whether two algebras form a tensor product partition.
    VerifyTpp {
        #[arg(long, value_name = "F")]
        a1: PathBuf,
        #[arg(long, value_name = "F")]
        a2: PathBuf,
    },
    /// Run one of the worked examples.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        #[arg(long, value_name = "D", default_value_t = DEFAULT_DEGREE)]
        degree: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Product,
    Entangled,
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    Bell,
    Bargmann,
    Com,
}

#[derive(Clone, Copy)]
struct Shape(usize, usize);

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (k, l) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected KxL, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
        Ok(Shape(parse(k)?, parse(l)?))
    }
}

#[derive(Clone, Copy)]
struct TolArg(Tolerance);

impl FromStr for TolArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut tol = Tolerance::default();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let value: f64 = value.trim().parse().map_err(|e| format!("{key}: {e}"))?;
            match key.trim() {
                "eig" => tol.eig_cluster = value,
                "rank" => tol.rank_rel = value,
                "res" => tol.residual = value,
                other => return Err(format!("unknown tolerance `{other}` (use eig, rank, res)")),
            }
        }
        tol.validate().map_err(|e| e.to_string())?;
        Ok(TolArg(tol))
    }
}

/// Everything that ends a run early.
enum Failure {
    /// A well-formed input failed a structural check.
    Verification(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = format!("{}: {e}", e.code());
        if e.is_verification_failure() {
            Failure::Verification(msg)
        } else {
            Failure::Input(msg)
        }
    }
}

type Run = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Prefixes library errors with the file they came from.
fn load<T>(path: &Path, f: impl FnOnce(&str) -> tpskit::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    f(&text).map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", to_json(value));
}

fn refactor(
    w: &ComplexVector,
    Shape(k, l): Shape,
    mode: Mode,
    orthonormal: bool,
    out: Option<&Path>,
    tol: &Tolerance,
) -> Run {
    let built: Vec<(&str, Tps)> = match mode {
        Mode::Product => vec![("product", tps_making_state_product(w, k, l, orthonormal, tol)?)],
        Mode::Entangled => vec![("entangled", tps_making_state_entangled(w, k, l, orthonormal, tol)?)],
        Mode::Dual => {
            let (p, e) = dual_verdict(w, k, l, orthonormal, tol)?;
            vec![("product", p), ("entangled", e)]
        }
    };
    let mut summary = serde_json::Map::new();
    let mut ok = true;
    for (name, tps) in &built {
        let schmidt = tps.schmidt(w, tol)?;
        let product = schmidt.rank == 1;
        ok &= product == (*name == "product");
        let mut entry = json!({ "product": product, "schmidt_rank": schmidt.rank });
        match out {
            Some(dir) => {
                let file = dir.join(format!("{name}.json"));
                write(&file, &to_json(&TpsJson::from(tps)))?;
                entry["file"] = json!(file.display().to_string());
            }
            None => entry["tps"] = serde_json::to_value(TpsJson::from(tps)).expect("serializable"),
        }
        summary.insert((*name).to_owned(), entry);
    }
    emit(&summary);
    Ok(ok)
}

fn run(cli: Cli) -> Run {
    let tol = cli.tol.map(|t| t.0).unwrap_or_default();
    match cli.command {
        Command::Analyze { state, tps } => {
            let w = load(&state, parse_state)?;
            let tps = load(&tps, |s| parse_tps(s, &tol))?;
            emit(&analyze(&w, &tps, &tol)?);
            Ok(true)
        }
        Command::BuildTps { observables } => {
            let pair = load(&observables, |s| parse_pair(s, &tol))?;
            emit(&TpsJson::from(&tps_from_observables(&pair, &tol)?));
            Ok(true)
        }
        Command::Refactor { state, shape, mode, orthonormal, out } => {
            let w = load(&state, parse_state)?;
            refactor(&w, shape, mode, orthonormal, out.as_deref(), &tol)
        }
        Command::VerifyTpp { a1, a2 } => {
            let a1 = load(&a1, parse_algebra)?;
            let a2 = load(&a2, parse_algebra)?;
            let verdict = is_tpp(&a1, &a2, &tol)?;
            let tps = if verdict.is_tpp {
                Some(TpsJson::from(&tpp_to_tps(&a1, &a2, cli.seed, &tol)?))
            } else {
                None
            };
            emit(&json!({ "verdict": verdict, "tps": tps }));
            Ok(verdict.is_tpp)
        }
        Command::Example { name, degree } => {
            let report = match name {
                ExampleName::Bell => example_bell(&tol)?,
                ExampleName::Bargmann => example_bargmann(degree, &tol)?,
                ExampleName::Com => example_center_of_mass(degree, &tol)?,
            };
            emit(&report);
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("tpskit: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("tpskit: {msg}");
            ExitCode::from(2)
        }
    }
}
