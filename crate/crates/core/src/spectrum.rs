//! Word-frequency spectra over machine outputs: sliding-window counts,
//! mergeable distributions, the empirical probability m_e and complexity
//! K_e = -log2(m_e), and deterministic rankings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{parse_word, word_text, WordLength};

/// How one output string contributes to the counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountingMode {
    /// Every sliding window of length k (stride 1) increments its word.
    #[serde(rename = "occurrence")]
    PerOccurrence,
    /// Each distinct word present in a machine's output increments by
    /// exactly one, no matter how often it occurs.
    #[serde(rename = "distinct")]
    PerMachineDistinct,
}

impl std::fmt::Display for CountingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountingMode::PerOccurrence => write!(f, "occurrence"),
            CountingMode::PerMachineDistinct => write!(f, "distinct"),
        }
    }
}

/// Counts of all 2^k binary words of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    word_length: WordLength,
    counts: Vec<u64>,
    total: u64,
    source_label: String,
}

impl Distribution {
    pub fn empty(word_length: WordLength) -> Distribution {
        Distribution {
            word_length,
            counts: vec![0; word_length.word_count()],
            total: 0,
            source_label: String::new(),
        }
    }

    pub fn with_label(word_length: WordLength, label: impl Into<String>) -> Distribution {
        Distribution {
            source_label: label.into(),
            ..Distribution::empty(word_length)
        }
    }

    /// Builds a distribution from explicit per-word counts (word value =
    /// slot index).
    pub fn from_counts(
        word_length: WordLength,
        counts: Vec<u64>,
        label: impl Into<String>,
    ) -> Result<Distribution> {
        if counts.len() != word_length.word_count() {
            return Err(Error::InvalidConfig(format!(
                "expected {} counts, got {}",
                word_length.word_count(),
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(Distribution {
            word_length,
            counts,
            total,
            source_label: label.into(),
        })
    }

    #[inline]
    pub fn word_length(&self) -> WordLength {
        self.word_length
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn count(&self, word: u16) -> u64 {
        self.counts[word as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn set_source_label(&mut self, label: impl Into<String>) {
        self.source_label = label.into();
    }

    /// Empirical probability of `word`. Errors on an empty distribution.
    pub fn m_e(&self, word: u16) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(self.counts[word as usize] as f64 / self.total as f64)
    }

    /// Empirical complexity -log2(m_e) in bits; `None` for words that never
    /// occurred. Errors on an empty distribution.
    pub fn k_e(&self, word: u16) -> Result<Option<f64>> {
        let m = self.m_e(word)?;
        Ok(if m > 0.0 { Some(-m.log2()) } else { None })
    }

    /// Adds `other` into `self` pointwise. Commutative and associative with
    /// [`Distribution::empty`] as identity, so shards may merge in any order.
    pub fn merge_in_place(&mut self, other: &Distribution) -> Result<()> {
        if self.word_length != other.word_length {
            return Err(Error::WordLengthMismatch {
                left: self.word_length.get(),
                right: other.word_length.get(),
            });
        }
        for (slot, &count) in self.counts.iter_mut().zip(&other.counts) {
            *slot += count;
        }
        self.total += other.total;
        if self.source_label.is_empty() {
            self.source_label = other.source_label.clone();
        }
        Ok(())
    }

    /// Ranks all 2^k words: count descending, ties broken lexicographically
    /// by word text (= ascending word value), ranks 1..=2^k.
    pub fn rank(&self) -> RankedDistribution {
        let mut order: Vec<u16> = (0..self.counts.len() as u32).map(|w| w as u16).collect();
        order.sort_by(|&a, &b| {
            self.counts[b as usize]
                .cmp(&self.counts[a as usize])
                .then(a.cmp(&b))
        });
        let entries = order
            .into_iter()
            .enumerate()
            .map(|(i, word)| {
                let count = self.counts[word as usize];
                let m_e = if self.total > 0 {
                    count as f64 / self.total as f64
                } else {
                    0.0
                };
                RankedEntry {
                    word,
                    count,
                    m_e,
                    k_e: (count > 0).then(|| -m_e.log2()),
                    rank: i as u32 + 1,
                }
            })
            .collect();
        RankedDistribution {
            word_length: self.word_length,
            entries,
        }
    }

    /// Renders the distribution as CSV, rows in rank order. `comments` lines
    /// are emitted first, each prefixed with `# `.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let k = self.word_length;
        let mut out = String::new();
        for line in comments {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str("word,count,m_e,K_e,rank\n");
        for e in self.rank().entries() {
            let k_e = e.k_e.map(format_k_e).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                word_text(e.word, k),
                e.count,
                format_m_e(e.m_e),
                k_e,
                e.rank
            );
        }
        out
    }

    /// Parses CSV produced by [`Distribution::to_csv`]. Only the word and
    /// count columns are authoritative; m_e, K_e and rank are derived.
    pub fn from_csv(text: &str, path: &std::path::Path, label: &str) -> Result<Distribution> {
        let mut word_length: Option<WordLength> = None;
        let mut counts: Vec<u64> = Vec::new();
        let mut filled: Vec<bool> = Vec::new();
        let mut saw_header = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !saw_header {
                if !line.starts_with("word,count,") {
                    return Err(Error::Csv {
                        path: path.to_path_buf(),
                        line: lineno + 1,
                        message: format!("unexpected header {line:?}"),
                    });
                }
                saw_header = true;
                continue;
            }
            let bad = |message: String| Error::Csv {
                path: path.to_path_buf(),
                line: lineno + 1,
                message,
            };
            let mut fields = line.split(',');
            let word_field = fields.next().ok_or_else(|| bad("missing word".into()))?;
            let count_field = fields.next().ok_or_else(|| bad("missing count".into()))?;
            let (word, k) =
                parse_word(word_field).map_err(|e| bad(format!("bad word: {e}")))?;
            let count: u64 = count_field
                .parse()
                .map_err(|e| bad(format!("bad count {count_field:?}: {e}")))?;
            match word_length {
                None => {
                    word_length = Some(k);
                    counts = vec![0; k.word_count()];
                    filled = vec![false; k.word_count()];
                }
                Some(existing) if existing != k => {
                    return Err(bad(format!(
                        "word length {} conflicts with earlier {}",
                        k.get(),
                        existing.get()
                    )));
                }
                Some(_) => {}
            }
            if filled[word as usize] {
                return Err(bad(format!("duplicate word {word_field}")));
            }
            filled[word as usize] = true;
            counts[word as usize] = count;
        }
        let word_length = word_length.ok_or_else(|| Error::Csv {
            path: path.to_path_buf(),
            line: 0,
            message: "no data rows".into(),
        })?;
        if let Some(missing) = filled.iter().position(|&f| !f) {
            return Err(Error::Csv {
                path: path.to_path_buf(),
                line: 0,
                message: format!(
                    "missing word {} (expected all {} words)",
                    word_text(missing as u16, word_length),
                    word_length.word_count()
                ),
            });
        }
        Distribution::from_counts(word_length, counts, label)
    }
}

pub(crate) fn format_m_e(value: f64) -> String {
    format!("{value:.9e}")
}

pub(crate) fn format_k_e(value: f64) -> String {
    format!("{value:.10}")
}

/// Merges two distributions of the same word length into a new one.
pub fn merge(a: &Distribution, b: &Distribution) -> Result<Distribution> {
    let mut out = a.clone();
    out.merge_in_place(b)?;
    Ok(out)
}

/// One row of a ranked distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub word: u16,
    pub count: u64,
    pub m_e: f64,
    /// `None` when the word never occurred; such words rank after all
    /// positive-count words.
    pub k_e: Option<f64>,
    pub rank: u32,
}

/// All 2^k words in rank order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedDistribution {
    word_length: WordLength,
    entries: Vec<RankedEntry>,
}

impl RankedDistribution {
    #[inline]
    pub fn word_length(&self) -> WordLength {
        self.word_length
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    /// Rank of each word, indexed by word value.
    pub fn rank_by_word(&self) -> Vec<u32> {
        let mut ranks = vec![0u32; self.entries.len()];
        for e in &self.entries {
            ranks[e.word as usize] = e.rank;
        }
        ranks
    }
}

#[inline]
fn roll_windows(bits: &[u8], k: WordLength, mut visit: impl FnMut(u16)) {
    let k = k.get() as usize;
    if bits.len() < k {
        return;
    }
    let mask = (1u32 << k) - 1;
    let mut window = 0u32;
    for (i, &bit) in bits.iter().enumerate() {
        debug_assert!(bit < 2, "spectrum counting requires binary outputs");
        window = (window << 1 | bit as u32) & mask;
        if i + 1 >= k {
            visit(window as u16);
        }
    }
}

/// Accumulates machine outputs into a count table. Reusable scratch for the
/// distinct mode lives here, so one builder per worker is the intended use.
#[derive(Debug)]
pub struct DistributionBuilder {
    word_length: WordLength,
    mode: CountingMode,
    counts: Vec<u64>,
    total: u64,
    seen: Vec<bool>,
    touched: Vec<u16>,
}

impl DistributionBuilder {
    pub fn new(word_length: WordLength, mode: CountingMode) -> DistributionBuilder {
        DistributionBuilder {
            word_length,
            mode,
            counts: vec![0; word_length.word_count()],
            total: 0,
            seen: vec![false; word_length.word_count()],
            touched: Vec::new(),
        }
    }

    /// Adds one machine's single output string.
    pub fn add_output(&mut self, bits: &[u8]) {
        match self.mode {
            CountingMode::PerOccurrence => self.add_occurrences(bits),
            CountingMode::PerMachineDistinct => {
                self.mark_distinct(bits);
                self.flush_distinct();
            }
        }
    }

    /// Adds all output rows of one machine. In occurrence mode each row
    /// counts independently; in distinct mode the rows share one distinct
    /// set, so a word appearing in many rows of the same machine still
    /// increments by one.
    pub fn add_output_set<'a>(&mut self, rows: impl IntoIterator<Item = &'a [u8]>) {
        match self.mode {
            CountingMode::PerOccurrence => {
                for row in rows {
                    self.add_occurrences(row);
                }
            }
            CountingMode::PerMachineDistinct => {
                for row in rows {
                    self.mark_distinct(row);
                }
                self.flush_distinct();
            }
        }
    }

    fn add_occurrences(&mut self, bits: &[u8]) {
        let counts = &mut self.counts;
        let mut added = 0u64;
        roll_windows(bits, self.word_length, |word| {
            counts[word as usize] += 1;
            added += 1;
        });
        self.total += added;
    }

    fn mark_distinct(&mut self, bits: &[u8]) {
        let seen = &mut self.seen;
        let touched = &mut self.touched;
        roll_windows(bits, self.word_length, |word| {
            if !seen[word as usize] {
                seen[word as usize] = true;
                touched.push(word);
            }
        });
    }

    fn flush_distinct(&mut self) {
        for &word in &self.touched {
            self.counts[word as usize] += 1;
            self.seen[word as usize] = false;
        }
        self.total += self.touched.len() as u64;
        self.touched.clear();
    }

    pub fn finish(self, label: impl Into<String>) -> Distribution {
        Distribution {
            word_length: self.word_length,
            counts: self.counts,
            total: self.total,
            source_label: label.into(),
        }
    }
}

/// Counts the length-k words of a single output string.
pub fn count_windows(output: &[u8], k: WordLength, mode: CountingMode) -> Distribution {
    let mut builder = DistributionBuilder::new(k, mode);
    builder.add_output(output);
    builder.finish("")
}

/// Sums [`count_windows`] over a stream of output strings.
pub fn build_distribution<'a>(
    outputs: impl IntoIterator<Item = &'a [u8]>,
    k: WordLength,
    mode: CountingMode,
    label: impl Into<String>,
) -> Distribution {
    let mut builder = DistributionBuilder::new(k, mode);
    for output in outputs {
        builder.add_output(output);
    }
    builder.finish(label)
}
