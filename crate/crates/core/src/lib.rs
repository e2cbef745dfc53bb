//! Empirical algorithmic probability for short binary strings.
//!
//! This crate reconstructs an output-frequency distribution m_e(s) over
//! length-k binary words by exhaustively running (or uniformly sampling)
//! small Turing machines and one-dimensional cellular automata, and derives
//! the empirical complexity K_e(s) = -log2(m_e(s)). Words group into
//! symmetry classes (reversal, complementation, both), and ranked
//! distributions from different machine families — or from external data —
//! can be compared with rank-correlation metrics and a rank-pairing plot.
//!
//! Modules map onto the pipeline:
//!
//! * [`machine`] — enumerate, decode, and simulate s-state k-symbol Turing
//!   machines.
//! * [`automaton`] — evolve binary cellular automata from a single-1 seed
//!   and clip to the light cone.
//! * [`spectrum`] — sliding-window word counts, mergeable distributions,
//!   m_e / K_e, rankings.
//! * [`symmetry`] — the complexity-preserving Klein four-group on words,
//!   orbit enumeration, class-level grouping.
//! * [`comparison`] — Spearman / Kendall agreement metrics and rank-pairing
//!   reports.
//! * [`sampling`] — pinned deterministic generator, uniform samples without
//!   replacement, per-machine random tapes.
//! * [`ingestion`] — bit-level ingestion of external files.
//! * [`experiment`] — configuration, the parallel runner, and file output.

pub mod automaton;
pub mod comparison;
pub mod error;
pub mod experiment;
pub mod ingestion;
pub mod machine;
pub mod plot;
pub mod sampling;
pub mod spectrum;
pub mod symmetry;
pub mod word;

pub use error::{Error, Result};
