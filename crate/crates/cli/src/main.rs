//! Command-line front end: one verb per pipeline stage.
//!
//! `run` accepts every experiment flag and/or a JSON config file whose field
//! names equal the flag names; explicit flags override file values. All
//! result files echo the resolved config, so a run can be reproduced from
//! its own manifest.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use algoprob::automaton::CaClass;
use algoprob::experiment::{compare_runs, run_experiment, run_ingest, ExperimentConfig};
use algoprob::ingestion::BitSource;
use algoprob::machine::TmClass;
use algoprob::symmetry::classes;
use algoprob::word::{word_text, WordLength};

#[derive(Parser)]
#[command(
    name = "algoprob",
    version,
    about = "Empirical algorithmic-probability distributions from small Turing machines and cellular automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print machine-space sizes.
    Spaces(SpacesArgs),
    /// Run an experiment: enumerate or sample machines, build and persist
    /// the word distribution and its symmetry-class table.
    Run(RunArgs),
    /// Print the symmetry classes of length-n binary words.
    Classes(ClassesArgs),
    /// Compare two persisted distributions; writes comparison.json and
    /// pairing.svg.
    Compare(CompareArgs),
    /// Build a distribution from the bits of an arbitrary binary file.
    Ingest(IngestArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SystemArg {
    Tm,
    Ca,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum InputArg {
    Regular,
    Random,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Occurrence,
    Distinct,
}

#[derive(Args)]
struct SpacesArgs {
    /// Machine family; with no arguments the standard spaces are listed.
    #[arg(long, value_enum)]
    system: Option<SystemArg>,
    /// Turing machine states (tm).
    #[arg(long)]
    states: Option<u8>,
    /// Turing machine tape symbols (tm).
    #[arg(long)]
    symbols: Option<u8>,
    /// Left neighbors (ca).
    #[arg(long)]
    left: Option<u8>,
    /// Right neighbors (ca).
    #[arg(long)]
    right: Option<u8>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; field names match the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    system: Option<SystemArg>,
    #[arg(long)]
    states: Option<u8>,
    #[arg(long)]
    symbols: Option<u8>,
    #[arg(long)]
    left: Option<u8>,
    #[arg(long)]
    right: Option<u8>,
    /// Transitions per machine (or CA steps). Default 100.
    #[arg(long)]
    steps: Option<u32>,
    /// Word length to count. Default 4.
    #[arg(long)]
    k: Option<u8>,
    /// Input tape for Turing machines.
    #[arg(long, value_enum)]
    input: Option<InputArg>,
    /// Counting mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Sample size; omit for exhaustive enumeration.
    #[arg(long)]
    sample: Option<u64>,
    /// Master seed for sampling and random tapes.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; default is hardware parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest space allowed without a sample plan.
    #[arg(long)]
    exhaustive_cap: Option<u64>,
}

#[derive(Args)]
struct ClassesArgs {
    /// Word length.
    #[arg(long)]
    n: u8,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Run directory or distribution CSV.
    #[arg(long)]
    left: PathBuf,
    /// Run directory or distribution CSV.
    #[arg(long)]
    right: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    /// Binary input file, or `-` for stdin.
    #[arg(long)]
    file: PathBuf,
    /// Word length to count. Default 4.
    #[arg(long)]
    k: Option<u8>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spaces(args) => spaces(args),
        Command::Run(args) => run(args),
        Command::Classes(args) => print_classes(args),
        Command::Compare(args) => compare(args),
        Command::Ingest(args) => ingest(args),
    }
}

fn spaces(args: SpacesArgs) -> Result<()> {
    match args.system {
        None => {
            for (states, symbols) in [(2u8, 2u8), (3, 2)] {
                let class = TmClass::new(states, symbols)?;
                println!("{class}\t{}", class.space_size()?);
            }
            for (left, right) in [(1u8, 1u8), (2, 1)] {
                let class = CaClass::new(left, right)?;
                println!("{class}\t{}", class.space_size());
            }
        }
        Some(SystemArg::Tm) => {
            let (Some(states), Some(symbols)) = (args.states, args.symbols) else {
                bail!("tm spaces need --states and --symbols");
            };
            let class = TmClass::new(states, symbols)?;
            println!("{class}\t{}", class.space_size()?);
        }
        Some(SystemArg::Ca) => {
            let (Some(left), Some(right)) = (args.left, args.right) else {
                bail!("ca spaces need --left and --right");
            };
            let class = CaClass::new(left, right)?;
            println!("{class}\t{}", class.space_size());
        }
    }
    Ok(())
}

/// Overlays present flags on the (optional) config file, then deserializes
/// the combined object, so missing-field errors name the field.
fn resolve_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut doc = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str::<serde_json::Value>(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => serde_json::json!({}),
    };
    let obj = doc
        .as_object_mut()
        .context("config file must hold a JSON object")?;

    let mut set = |key: &str, value: Option<serde_json::Value>| {
        if let Some(v) = value {
            obj.insert(key.to_string(), v);
        }
    };
    set(
        "system",
        args.system.map(|s| match s {
            SystemArg::Tm => "tm".into(),
            SystemArg::Ca => "ca".into(),
        }),
    );
    set("states", args.states.map(Into::into));
    set("symbols", args.symbols.map(Into::into));
    set("left", args.left.map(Into::into));
    set("right", args.right.map(Into::into));
    set("steps", args.steps.map(Into::into));
    set("k", args.k.map(Into::into));
    set(
        "input",
        args.input.map(|i| match i {
            InputArg::Regular => "regular".into(),
            InputArg::Random => "random".into(),
        }),
    );
    set(
        "mode",
        args.mode.map(|m| match m {
            ModeArg::Occurrence => "occurrence".into(),
            ModeArg::Distinct => "distinct".into(),
        }),
    );
    set("sample", args.sample.map(Into::into));
    set("seed", args.seed.map(Into::into));
    set("threads", args.threads.map(|t| serde_json::json!(t)));
    set(
        "out",
        args.out.as_ref().map(|p| p.display().to_string().into()),
    );
    set("exhaustive_cap", args.exhaustive_cap.map(Into::into));

    obj.entry("steps").or_insert(100.into());
    obj.entry("k").or_insert(4.into());

    serde_json::from_value(doc).context("invalid configuration")
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = resolve_config(&args)?;
    let artifacts = run_experiment(&cfg).context("experiment failed")?;
    println!("{}", cfg.label());
    println!("total windows: {}", artifacts.distribution.total());
    println!("wrote {}", artifacts.distribution_csv.display());
    println!("wrote {}", artifacts.classes_csv.display());
    println!("wrote {}", artifacts.manifest.display());
    Ok(())
}

fn print_classes(args: ClassesArgs) -> Result<()> {
    let n = WordLength::new(args.n)?;
    let mut table = String::from("representative,members,orbit_size\n");
    for class in classes(n) {
        table.push_str(&format!(
            "{},{},{}\n",
            word_text(class.representative(), n),
            class.members_text(n),
            class.members().len()
        ));
    }
    match args.out {
        Some(path) => {
            std::fs::write(&path, table)
                .with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<()> {
    let artifacts = compare_runs(&args.left, &args.right, &args.out)?;
    let report = &artifacts.report;
    println!("spearman_rho: {}", report.spearman_rho);
    println!("kendall_tau: {}", report.kendall_tau);
    println!("crossings: {}", report.crossings);
    println!("top_group_match: {}", report.top_group_match);
    println!("wrote {}", artifacts.report_json.display());
    println!("wrote {}", artifacts.pairing_svg.display());
    Ok(())
}

fn ingest(args: IngestArgs) -> Result<()> {
    let k = WordLength::new(args.k.unwrap_or(4))?;
    let source = if args.file.as_os_str() == "-" {
        BitSource::stdin()
    } else {
        BitSource::from_path(&args.file)
    };
    let artifacts = run_ingest(&source, k, &args.out)?;
    println!("{}", artifacts.distribution.source_label());
    println!("total windows: {}", artifacts.distribution.total());
    println!("wrote {}", artifacts.distribution_csv.display());
    println!("wrote {}", artifacts.manifest.display());
    Ok(())
}
