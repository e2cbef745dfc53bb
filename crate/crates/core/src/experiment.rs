//! End-to-end experiment orchestration: a validated configuration fans
//! machine indices out to a worker pool, workers accumulate private
//! distributions, and the merged result is persisted as CSV plus a JSON
//! manifest. Merging is exact integer addition, so the outcome is identical
//! for any thread count and any merge order; data files never contain
//! timestamps, which keeps reruns byte-identical.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{evolve, CaClass, CaRule};
use crate::comparison::{pairing_report, ComparisonReport};
use crate::error::{Error, Result};
use crate::ingestion::{file_distribution, BitSource};
use crate::machine::{simulate, MachineIndex, Tape, TmClass, TransitionTable};
use crate::plot::pairing_svg;
use crate::sampling::{random_tape, sample_indices, RandomTapeSpec, SamplePlan};
use crate::spectrum::{CountingMode, Distribution, DistributionBuilder};
use crate::symmetry::{group_distribution, ClassDistribution};
use crate::word::WordLength;

/// Which machine family to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Tm,
    Ca,
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SystemKind::Tm => write!(f, "tm"),
            SystemKind::Ca => write!(f, "ca"),
        }
    }
}

/// Input fed to Turing machines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    /// The blank all-0 tape.
    #[default]
    Regular,
    /// A fresh pseudo-random tape per machine, derived from the master seed
    /// and the machine index.
    Random,
}

impl std::fmt::Display for InputMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputMode::Regular => write!(f, "regular"),
            InputMode::Random => write!(f, "random"),
        }
    }
}

fn default_cap() -> u64 {
    1 << 24
}

/// A complete experiment description. Field names double as CLI flag names
/// and as the JSON schema of config files; the whole struct is echoed into
/// every result file header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub system: SystemKind,
    /// Turing machine states (tm only).
    #[serde(default)]
    pub states: Option<u8>,
    /// Turing machine tape symbols (tm only).
    #[serde(default)]
    pub symbols: Option<u8>,
    /// Left neighbors read by a CA rule (ca only).
    #[serde(default)]
    pub left: Option<u8>,
    /// Right neighbors read by a CA rule (ca only).
    #[serde(default)]
    pub right: Option<u8>,
    pub steps: u32,
    pub k: u8,
    #[serde(default)]
    pub input: InputMode,
    #[serde(default = "default_mode")]
    pub mode: CountingMode,
    /// Sample size; absent means exhaustive enumeration.
    #[serde(default)]
    pub sample: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; absent means hardware parallelism.
    #[serde(default)]
    pub threads: Option<usize>,
    pub out: PathBuf,
    /// Largest space that may be enumerated exhaustively.
    #[serde(default = "default_cap")]
    pub exhaustive_cap: u64,
}

fn default_mode() -> CountingMode {
    CountingMode::PerOccurrence
}

impl ExperimentConfig {
    pub fn word_length(&self) -> Result<WordLength> {
        WordLength::new(self.k)
    }

    /// Compact human-readable tag recorded as the distribution's source
    /// label.
    pub fn label(&self) -> String {
        let class = match self.system {
            SystemKind::Tm => format!(
                "tm({},{})",
                self.states.unwrap_or_default(),
                self.symbols.unwrap_or_default()
            ),
            SystemKind::Ca => format!(
                "ca({},{})",
                self.left.unwrap_or_default(),
                self.right.unwrap_or_default()
            ),
        };
        let plan = match self.sample {
            Some(n) => format!("sample={} seed={}", n, self.seed),
            None => "exhaustive".to_string(),
        };
        format!(
            "{class} steps={} k={} input={} mode={} {plan}",
            self.steps, self.k, self.input, self.mode
        )
    }
}

enum ResolvedSystem {
    Tm(TmClass),
    Ca(CaClass),
}

struct Resolved {
    system: ResolvedSystem,
    space: u64,
    /// Explicit machine indices; `None` means all of `0..space`.
    indices: Option<Vec<u64>>,
    k: WordLength,
}

impl Resolved {
    fn machine_count(&self) -> u64 {
        self.indices
            .as_ref()
            .map_or(self.space, |v| v.len() as u64)
    }
}

fn resolve(cfg: &ExperimentConfig) -> Result<Resolved> {
    let k = cfg.word_length()?;
    let invalid = |msg: String| Err(Error::InvalidConfig(msg));
    match cfg.system {
        SystemKind::Tm => {
            if cfg.left.is_some() || cfg.right.is_some() {
                return invalid("left/right apply to ca systems only".into());
            }
            let (Some(states), Some(symbols)) = (cfg.states, cfg.symbols) else {
                return invalid("tm systems need states and symbols".into());
            };
            if symbols != 2 {
                return invalid("word spectra require binary tapes (symbols = 2)".into());
            }
            let class = TmClass::new(states, symbols)?;
            let space = class.space_size()?;
            let indices = match cfg.sample {
                Some(size) => {
                    let plan = SamplePlan {
                        class,
                        size,
                        seed: cfg.seed,
                    };
                    let sample = sample_indices(&plan)?;
                    Some(sample.iter().map(|m| m.index()).collect())
                }
                None => {
                    if space > cfg.exhaustive_cap {
                        return invalid(format!(
                            "space size {space} exceeds the exhaustive cap {}; pass a sample size",
                            cfg.exhaustive_cap
                        ));
                    }
                    None
                }
            };
            Ok(Resolved {
                system: ResolvedSystem::Tm(class),
                space,
                indices,
                k,
            })
        }
        SystemKind::Ca => {
            if cfg.states.is_some() || cfg.symbols.is_some() {
                return invalid("states/symbols apply to tm systems only".into());
            }
            let (Some(left), Some(right)) = (cfg.left, cfg.right) else {
                return invalid("ca systems need left and right neighbor counts".into());
            };
            if cfg.input == InputMode::Random {
                return invalid("ca systems always start from the single-1 seed".into());
            }
            if cfg.sample.is_some() {
                return invalid("sampling is supported for tm systems only".into());
            }
            let class = CaClass::new(left, right)?;
            let space = class.space_size();
            if space > cfg.exhaustive_cap {
                return invalid(format!(
                    "rule space {space} exceeds the exhaustive cap {}",
                    cfg.exhaustive_cap
                ));
            }
            Ok(Resolved {
                system: ResolvedSystem::Ca(class),
                space,
                indices: None,
                k,
            })
        }
    }
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

fn tm_spectrum<I>(indices: I, class: TmClass, cfg: &ExperimentConfig, k: WordLength) -> Distribution
where
    I: IntoParallelIterator<Item = u64>,
{
    let steps = cfg.steps;
    let input = cfg.input;
    let seed = cfg.seed;
    let mode = cfg.mode;
    indices
        .into_par_iter()
        .fold(
            || DistributionBuilder::new(k, mode),
            move |mut builder, index| {
                let machine =
                    MachineIndex::new(class, index).expect("resolved indices are in range");
                let table = TransitionTable::decode(machine);
                let result = match input {
                    InputMode::Regular => simulate(&table, &Tape::blank(0), steps),
                    InputMode::Random => {
                        let tape = random_tape(&RandomTapeSpec {
                            radius: steps,
                            seed_base: seed,
                            machine_index: index,
                        });
                        simulate(&table, &tape, steps)
                    }
                };
                builder.add_output(&result.output);
                builder
            },
        )
        .map(|builder| builder.finish(""))
        .reduce(
            || Distribution::empty(k),
            |mut a, b| {
                a.merge_in_place(&b).expect("same word length");
                a
            },
        )
}

fn ca_spectrum(class: CaClass, cfg: &ExperimentConfig, k: WordLength) -> Distribution {
    let steps = cfg.steps;
    let mode = cfg.mode;
    (0..class.space_size())
        .into_par_iter()
        .fold(
            || DistributionBuilder::new(k, mode),
            move |mut builder, number| {
                let rule = CaRule::new(class, number).expect("enumerated rules are in range");
                let cone = evolve(rule, steps).light_cone_rows();
                builder.add_output_set(cone.rows().iter().map(Vec::as_slice));
                builder
            },
        )
        .map(|builder| builder.finish(""))
        .reduce(
            || Distribution::empty(k),
            |mut a, b| {
                a.merge_in_place(&b).expect("same word length");
                a
            },
        )
}

/// Builds the configured distribution without touching the filesystem.
pub fn run_distribution(cfg: &ExperimentConfig) -> Result<Distribution> {
    let resolved = resolve(cfg)?;
    let pool = thread_pool(cfg.threads)?;
    let mut distribution = pool.install(|| match (&resolved.system, &resolved.indices) {
        (ResolvedSystem::Tm(class), Some(indices)) => {
            tm_spectrum(indices.par_iter().copied(), *class, cfg, resolved.k)
        }
        (ResolvedSystem::Tm(class), None) => {
            tm_spectrum(0..resolved.space, *class, cfg, resolved.k)
        }
        (ResolvedSystem::Ca(class), _) => ca_spectrum(*class, cfg, resolved.k),
    });
    distribution.set_source_label(cfg.label());
    Ok(distribution)
}

/// Everything a finished run leaves behind.
#[derive(Debug)]
pub struct RunArtifacts {
    pub distribution: Distribution,
    pub grouped: ClassDistribution,
    pub distribution_csv: PathBuf,
    pub classes_csv: PathBuf,
    pub manifest: PathBuf,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    config: &'a ExperimentConfig,
    label: String,
    space_size: u64,
    machines_run: u64,
    distribution_total: u64,
    class_count: u64,
    wall_time_ms: u128,
    files: ManifestFiles,
}

#[derive(Serialize)]
struct ManifestFiles {
    distribution: &'static str,
    classes: &'static str,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs the experiment and persists the word-level CSV, the symmetry-class
/// CSV, and a manifest echoing the config. Only the manifest carries timing.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    let started = Instant::now();
    let resolved = resolve(cfg)?;
    let machines_run = resolved.machine_count();
    let space = resolved.space;

    let distribution = run_distribution(cfg)?;
    let grouped = group_distribution(&distribution);

    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let config_echo = serde_json::to_string(cfg).expect("config serializes");
    let comments = vec![format!("config: {config_echo}")];

    let distribution_csv = cfg.out.join("distribution.csv");
    write_file(&distribution_csv, &distribution.to_csv(&comments))?;
    let classes_csv = cfg.out.join("classes.csv");
    write_file(&classes_csv, &grouped.to_csv(&comments))?;

    let manifest = cfg.out.join("manifest.json");
    let manifest_body = serde_json::to_string_pretty(&RunManifest {
        config: cfg,
        label: cfg.label(),
        space_size: space,
        machines_run,
        distribution_total: distribution.total(),
        class_count: grouped.entries().len() as u64,
        wall_time_ms: started.elapsed().as_millis(),
        files: ManifestFiles {
            distribution: "distribution.csv",
            classes: "classes.csv",
        },
    })
    .expect("manifest serializes");
    write_file(&manifest, &manifest_body)?;

    Ok(RunArtifacts {
        distribution,
        grouped,
        distribution_csv,
        classes_csv,
        manifest,
    })
}

/// Loads a distribution from a run directory or a distribution CSV path.
pub fn load_distribution(path: &Path) -> Result<Distribution> {
    let csv_path = if path.is_dir() {
        path.join("distribution.csv")
    } else {
        path.to_path_buf()
    };
    let text = std::fs::read_to_string(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    Distribution::from_csv(&text, &csv_path, &csv_path.display().to_string())
}

/// Result files of a comparison.
#[derive(Debug)]
pub struct CompareArtifacts {
    pub report: ComparisonReport,
    pub report_json: PathBuf,
    pub pairing_svg: PathBuf,
}

/// Compares two persisted distributions and writes the report JSON plus the
/// rank-pairing SVG.
pub fn compare_runs(left: &Path, right: &Path, out: &Path) -> Result<CompareArtifacts> {
    let left_dist = load_distribution(left)?;
    let right_dist = load_distribution(right)?;
    let report = pairing_report(&left_dist, &right_dist)?;

    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let report_json = out.join("comparison.json");
    let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
    body.push('\n');
    write_file(&report_json, &body)?;

    let svg_path = out.join("pairing.svg");
    let svg = pairing_svg(
        &report,
        left_dist.source_label(),
        right_dist.source_label(),
    );
    write_file(&svg_path, &svg)?;

    Ok(CompareArtifacts {
        report,
        report_json,
        pairing_svg: svg_path,
    })
}

#[derive(Serialize)]
struct IngestManifest<'a> {
    command: &'static str,
    file: String,
    k: u8,
    length_bits: u64,
    distribution_total: u64,
    files: &'a [&'a str],
}

/// Ingest artifacts: the distribution plus where it was written.
#[derive(Debug)]
pub struct IngestArtifacts {
    pub distribution: Distribution,
    pub distribution_csv: PathBuf,
    pub manifest: PathBuf,
}

/// Builds and persists the sliding-window distribution of an external binary
/// source.
pub fn run_ingest(source: &BitSource, k: WordLength, out: &Path) -> Result<IngestArtifacts> {
    let bits = source.ingest_bits()?;
    let length_bits = bits.len() as u64;
    let distribution = file_distribution(source, k)?;

    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let echo = serde_json::json!({
        "command": "ingest",
        "file": source.label(),
        "k": k.get(),
    });
    let comments = vec![format!("config: {echo}")];
    let distribution_csv = out.join("distribution.csv");
    write_file(&distribution_csv, &distribution.to_csv(&comments))?;

    let manifest = out.join("manifest.json");
    let body = serde_json::to_string_pretty(&IngestManifest {
        command: "ingest",
        file: source.label(),
        k: k.get(),
        length_bits,
        distribution_total: distribution.total(),
        files: &["distribution.csv"],
    })
    .expect("manifest serializes");
    write_file(&manifest, &body)?;

    Ok(IngestArtifacts {
        distribution,
        distribution_csv,
        manifest,
    })
}
