//! Agreement metrics between two ranked word distributions: Spearman's rho
//! over fractional ranks, tie-corrected Kendall tau-b, and the rank-pairing
//! data (one line per word, crossings counted as rank inversions).
//!
//! Metrics run over all 2^k words of the shared length, zero-count words
//! included (they tie at the bottom), so the domain is fixed across runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Distribution;
use crate::symmetry::group_distribution;
use crate::word::word_text;

/// One rank-pairing line: where a word sits in each ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingEntry {
    pub word: String,
    pub rank_left: u32,
    pub rank_right: u32,
}

/// Full comparison of two distributions over the same word length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub spearman_rho: f64,
    pub kendall_tau: f64,
    /// Whether the rank-1 symmetry classes of the two distributions
    /// coincide.
    pub top_group_match: bool,
    /// One entry per word, sorted by `rank_left`.
    pub pairing: Vec<PairingEntry>,
    /// Word pairs ordered oppositely by the two (strict, tie-broken)
    /// rankings.
    pub crossings: u64,
}

fn check_comparable(a: &Distribution, b: &Distribution) -> Result<()> {
    if a.word_length() != b.word_length() {
        return Err(Error::WordLengthMismatch {
            left: a.word_length().get(),
            right: b.word_length().get(),
        });
    }
    if a.total() == 0 || b.total() == 0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(())
}

/// Fractional ranks of `counts` ranked descending; tied counts share the
/// average of the positions they span.
fn average_ranks(counts: &[u64]) -> Vec<f64> {
    let n = counts.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]));
    let mut ranks = vec![0.0f64; n];
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && counts[order[end + 1]] == counts[order[start]] {
            end += 1;
        }
        // 1-based positions start+1 ..= end+1 share one average rank.
        let avg = (start + end + 2) as f64 / 2.0;
        for &slot in &order[start..=end] {
            ranks[slot] = avg;
        }
        start = end + 1;
    }
    ranks
}

/// Spearman rank correlation over all words, counts ranked descending, ties
/// given fractional ranks. Errors when either distribution has all counts
/// equal (zero rank variance).
pub fn spearman(a: &Distribution, b: &Distribution) -> Result<f64> {
    check_comparable(a, b)?;
    let ra = average_ranks(a.counts());
    let rb = average_ranks(b.counts());
    let n = ra.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in ra.iter().zip(&rb) {
        cov += (x - mean) * (y - mean);
        var_a += (x - mean) * (x - mean);
        var_b += (y - mean) * (y - mean);
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::DegenerateRanking);
    }
    Ok((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}

/// Pairs `i < j` with `values[i] > values[j]`, counted by a bottom-up merge
/// sort; `values` ends up sorted ascending.
fn sort_counting_inversions<T: Copy + Ord>(values: &mut [T]) -> u64 {
    let n = values.len();
    let mut buf = values.to_vec();
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        for lo in (0..n).step_by(2 * width) {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut out) = (lo, mid, lo);
            while i < mid || j < hi {
                let take_left =
                    i < mid && (j >= hi || values[i] <= values[j]);
                if take_left {
                    buf[out] = values[i];
                    i += 1;
                } else {
                    // values[j] sorts before mid - i remaining left items.
                    inversions += (mid - i) as u64;
                    buf[out] = values[j];
                    j += 1;
                }
                out += 1;
            }
        }
        values.copy_from_slice(&buf);
        width *= 2;
    }
    inversions
}

fn tied_pairs(sorted: &[u64]) -> u64 {
    let mut pairs = 0u64;
    let mut run = 1u64;
    for i in 1..sorted.len() {
        if sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            pairs += run * (run - 1) / 2;
            run = 1;
        }
    }
    pairs + run * (run - 1) / 2
}

/// Kendall tau-b (tie-corrected) over all words.
///
/// Sorts the count pairs by the first coordinate and counts discordant pairs
/// as merge-sort inversions of the second, which keeps the whole computation
/// O(n log n).
pub fn kendall(a: &Distribution, b: &Distribution) -> Result<f64> {
    check_comparable(a, b)?;
    let n = a.counts().len();
    let mut pairs: Vec<(u64, u64)> = a
        .counts()
        .iter()
        .copied()
        .zip(b.counts().iter().copied())
        .collect();
    pairs.sort_unstable();

    let n0 = n as u64 * (n as u64 - 1) / 2;
    let mut ties_a = 0u64;
    let mut ties_joint = 0u64;
    {
        let mut run_a = 1u64;
        let mut run_joint = 1u64;
        for i in 1..n {
            if pairs[i].0 == pairs[i - 1].0 {
                run_a += 1;
                if pairs[i].1 == pairs[i - 1].1 {
                    run_joint += 1;
                } else {
                    ties_joint += run_joint * (run_joint - 1) / 2;
                    run_joint = 1;
                }
            } else {
                ties_a += run_a * (run_a - 1) / 2;
                run_a = 1;
                ties_joint += run_joint * (run_joint - 1) / 2;
                run_joint = 1;
            }
        }
        ties_a += run_a * (run_a - 1) / 2;
        ties_joint += run_joint * (run_joint - 1) / 2;
    }

    let mut seconds: Vec<u64> = pairs.iter().map(|p| p.1).collect();
    let discordant = sort_counting_inversions(&mut seconds);
    // `seconds` is now sorted, ready for the b-side tie count.
    let ties_b = tied_pairs(&seconds);

    let denom_a = n0 - ties_a;
    let denom_b = n0 - ties_b;
    if denom_a == 0 || denom_b == 0 {
        return Err(Error::DegenerateRanking);
    }
    let s = n0 as i128 - ties_a as i128 - ties_b as i128 + ties_joint as i128
        - 2 * discordant as i128;
    let tau = s as f64 / ((denom_a as f64) * (denom_b as f64)).sqrt();
    Ok(tau.clamp(-1.0, 1.0))
}

/// Builds the full report: both metrics, the per-word rank pairing sorted by
/// left rank, the inversion count between the two strict rankings, and the
/// top-symmetry-class check.
pub fn pairing_report(a: &Distribution, b: &Distribution) -> Result<ComparisonReport> {
    check_comparable(a, b)?;
    let k = a.word_length();
    let ranked_a = a.rank();
    let rank_b_by_word = b.rank().rank_by_word();

    let pairing: Vec<PairingEntry> = ranked_a
        .entries()
        .iter()
        .map(|e| PairingEntry {
            word: word_text(e.word, k),
            rank_left: e.rank,
            rank_right: rank_b_by_word[e.word as usize],
        })
        .collect();

    let mut right_sequence: Vec<u32> = pairing.iter().map(|p| p.rank_right).collect();
    let crossings = sort_counting_inversions(&mut right_sequence);

    let top_group_match = group_distribution(a).top_class().representative()
        == group_distribution(b).top_class().representative();

    Ok(ComparisonReport {
        spearman_rho: spearman(a, b)?,
        kendall_tau: kendall(a, b)?,
        top_group_match,
        pairing,
        crossings,
    })
}
