//! The four complexity-preserving operations on binary words — identity,
//! reversal, complementation, and their composition — and the grouping of
//! words into orbits under that group (a Klein four-group). Orbit counts
//! follow from Burnside's lemma: reversal fixes palindromes,
//! reversal+complementation fixes anti-palindromes, complementation fixes
//! nothing.

use std::fmt::Write as _;

use crate::error::Result;
use crate::spectrum::{format_k_e, format_m_e, Distribution};
use crate::word::{word_text, WordLength};

/// One element of the symmetry group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryOp {
    Identity,
    Reversal,
    Complementation,
    ReversalComplementation,
}

impl SymmetryOp {
    pub const ALL: [SymmetryOp; 4] = [
        SymmetryOp::Identity,
        SymmetryOp::Reversal,
        SymmetryOp::Complementation,
        SymmetryOp::ReversalComplementation,
    ];

    /// Applies the operation to a word of length k.
    pub fn apply(self, word: u16, k: WordLength) -> u16 {
        match self {
            SymmetryOp::Identity => word,
            SymmetryOp::Reversal => reverse(word, k),
            SymmetryOp::Complementation => complement(word, k),
            SymmetryOp::ReversalComplementation => complement(reverse(word, k), k),
        }
    }

    /// Group composition: `self` after `other`.
    pub fn compose(self, other: SymmetryOp) -> SymmetryOp {
        use SymmetryOp::*;
        match (self, other) {
            (Identity, op) | (op, Identity) => op,
            (a, b) if a == b => Identity,
            (Reversal, Complementation) | (Complementation, Reversal) => ReversalComplementation,
            (Reversal, ReversalComplementation) | (ReversalComplementation, Reversal) => {
                Complementation
            }
            (Complementation, ReversalComplementation)
            | (ReversalComplementation, Complementation) => Reversal,
            _ => unreachable!(),
        }
    }
}

/// Reverses the k bits of a word.
pub fn reverse(word: u16, k: WordLength) -> u16 {
    let k = k.get();
    let mut out = 0u16;
    for i in 0..k {
        out |= (word >> i & 1) << (k - 1 - i);
    }
    out
}

/// Flips every bit of a word of length k.
pub fn complement(word: u16, k: WordLength) -> u16 {
    !word & k.mask() as u16
}

/// Lexicographically smallest member of the word's orbit.
pub fn canonical(word: u16, k: WordLength) -> u16 {
    SymmetryOp::ALL
        .iter()
        .map(|op| op.apply(word, k))
        .min()
        .expect("four images")
}

/// Number of orbits of length-n words under the group, by Burnside's lemma:
/// (2^n + 2^ceil(n/2) + 0 + fix_rc) / 4 with fix_rc = 2^(n/2) for even n and
/// 0 for odd n.
pub fn class_count(n: WordLength) -> u64 {
    let n = n.get() as u32;
    let identity = 1u64 << n;
    let reversal = 1u64 << n.div_ceil(2);
    let complementation = 0u64;
    let reversal_complementation = if n.is_multiple_of(2) { 1u64 << (n / 2) } else { 0 };
    (identity + reversal + complementation + reversal_complementation) / 4
}

/// An orbit: its lexicographically smallest member and all members sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryClass {
    representative: u16,
    members: Vec<u16>,
}

impl SymmetryClass {
    #[inline]
    pub fn representative(&self) -> u16 {
        self.representative
    }

    pub fn members(&self) -> &[u16] {
        &self.members
    }

    pub fn members_text(&self, k: WordLength) -> String {
        self.members
            .iter()
            .map(|&w| word_text(w, k))
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Partitions all 2^n words into orbits, sorted by representative.
pub fn classes(n: WordLength) -> Vec<SymmetryClass> {
    let size = n.word_count();
    let mut assigned = vec![false; size];
    let mut out = Vec::with_capacity(class_count(n) as usize);
    for word in 0..size as u32 {
        let word = word as u16;
        if assigned[word as usize] {
            continue;
        }
        let mut members: Vec<u16> = SymmetryOp::ALL.iter().map(|op| op.apply(word, n)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            assigned[m as usize] = true;
        }
        out.push(SymmetryClass {
            representative: members[0],
            members,
        });
    }
    out
}

/// One ranked row of a class-level distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEntry {
    pub class: SymmetryClass,
    pub count: u64,
    pub m_e: f64,
    pub k_e: Option<f64>,
    pub rank: u32,
}

/// A distribution folded onto symmetry classes: class count = sum of member
/// counts, class m_e and K_e recomputed from class totals.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution {
    word_length: WordLength,
    entries: Vec<ClassEntry>,
    total: u64,
}

impl ClassDistribution {
    #[inline]
    pub fn word_length(&self) -> WordLength {
        self.word_length
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Entries in rank order (count descending, representative ascending).
    pub fn entries(&self) -> &[ClassEntry] {
        &self.entries
    }

    /// Representative of the rank-1 class.
    pub fn top_class(&self) -> &SymmetryClass {
        &self.entries[0].class
    }

    /// Renders as CSV with the same conventions as the word-level table;
    /// members are `|`-separated.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let k = self.word_length;
        let mut out = String::new();
        for line in comments {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str("representative,members,count,m_e,K_e,rank\n");
        for e in &self.entries {
            let k_e = e.k_e.map(format_k_e).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                word_text(e.class.representative(), k),
                e.class.members_text(k),
                e.count,
                format_m_e(e.m_e),
                k_e,
                e.rank
            );
        }
        out
    }
}

/// Folds a word-level distribution onto its symmetry classes.
pub fn group_distribution(d: &Distribution) -> ClassDistribution {
    let k = d.word_length();
    let parts = classes(k);
    let total = d.total();
    let mut rows: Vec<(SymmetryClass, u64)> = parts
        .into_iter()
        .map(|class| {
            let count = class.members().iter().map(|&w| d.count(w)).sum();
            (class, count)
        })
        .collect();
    rows.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(a.0.representative().cmp(&b.0.representative()))
    });
    let entries = rows
        .into_iter()
        .enumerate()
        .map(|(i, (class, count))| {
            let m_e = if total > 0 {
                count as f64 / total as f64
            } else {
                0.0
            };
            ClassEntry {
                class,
                count,
                m_e,
                k_e: (count > 0).then(|| -m_e.log2()),
                rank: i as u32 + 1,
            }
        })
        .collect();
    ClassDistribution {
        word_length: k,
        entries,
        total,
    }
}

/// Parses a class CSV back to (representative text, count) pairs, mainly for
/// tests and tooling.
pub fn parse_class_csv(text: &str) -> Result<Vec<(String, u64)>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            continue;
        }
        let mut fields = line.split(',');
        let rep = fields.next().unwrap_or_default().to_string();
        let _members = fields.next();
        let count: u64 = fields
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|e| crate::error::Error::InvalidConfig(format!("bad class row: {e}")))?;
        rows.push((rep, count));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SplitMix64;
    use crate::word::parse_word;

    fn k(n: u8) -> WordLength {
        WordLength::new(n).unwrap()
    }

    fn apply_text(op: SymmetryOp, text: &str) -> String {
        let (w, klen) = parse_word(text).unwrap();
        word_text(op.apply(w, klen), klen)
    }

    #[test]
    fn op_definitions() {
        assert_eq!(apply_text(SymmetryOp::Reversal, "0011"), "1100");
        assert_eq!(apply_text(SymmetryOp::Complementation, "0011"), "1100");
        assert_eq!(apply_text(SymmetryOp::ReversalComplementation, "0010"), "1011");
        assert_eq!(apply_text(SymmetryOp::Identity, "0110"), "0110");
    }

    #[test]
    fn group_laws() {
        let k6 = k(6);
        let mut rng = SplitMix64::new(42);
        for _ in 0..200 {
            let w = (rng.next_u64() & 0x3f) as u16;
            for op in SymmetryOp::ALL {
                // Involutions.
                assert_eq!(op.apply(op.apply(w, k6), k6), w);
                for other in SymmetryOp::ALL {
                    // Composition table matches pointwise application.
                    let composed = op.compose(other).apply(w, k6);
                    assert_eq!(composed, op.apply(other.apply(w, k6), k6));
                }
            }
        }
    }

    #[test]
    fn canonical_examples() {
        let (w, k4) = parse_word("1010").unwrap();
        assert_eq!(word_text(canonical(w, k4), k4), "0101");
        let (w, _) = parse_word("0000").unwrap();
        assert_eq!(word_text(canonical(w, k4), k4), "0000");
        let (w, _) = parse_word("1111").unwrap();
        assert_eq!(word_text(canonical(w, k4), k4), "0000");
    }

    #[test]
    fn canonical_is_orbit_invariant_and_idempotent() {
        let k5 = k(5);
        let mut rng = SplitMix64::new(7);
        for _ in 0..200 {
            let w = (rng.next_u64() & 0x1f) as u16;
            let c = canonical(w, k5);
            assert_eq!(canonical(c, k5), c);
            for op in SymmetryOp::ALL {
                assert_eq!(canonical(op.apply(w, k5), k5), c);
            }
        }
    }

    #[test]
    fn class_count_landmarks() {
        assert_eq!(class_count(k(10)), 272);
        assert_eq!(class_count(k(4)), 6);
        assert_eq!(class_count(k(1)), 1);
        assert_eq!(class_count(k(2)), 2);
    }

    /// Independent orbit count: flood the op closure from each unvisited
    /// word.
    fn brute_force_orbits(n: WordLength) -> u64 {
        let size = n.word_count();
        let mut visited = vec![false; size];
        let mut orbits = 0;
        for w in 0..size as u32 {
            if visited[w as usize] {
                continue;
            }
            orbits += 1;
            let mut stack = vec![w as u16];
            while let Some(v) = stack.pop() {
                if std::mem::replace(&mut visited[v as usize], true) {
                    continue;
                }
                for op in SymmetryOp::ALL {
                    stack.push(op.apply(v, n));
                }
            }
        }
        orbits
    }

    #[test]
    fn burnside_matches_brute_force() {
        for n in 1..=12u8 {
            let klen = k(n);
            let expected = brute_force_orbits(klen);
            assert_eq!(class_count(klen), expected, "n={n}");
            assert_eq!(classes(klen).len() as u64, expected, "n={n}");
        }
    }

    #[test]
    fn classes_partition_all_words() {
        for n in [2u8, 4, 5, 10] {
            let klen = k(n);
            let parts = classes(klen);
            let mut seen = vec![false; klen.word_count()];
            for class in &parts {
                assert_eq!(class.members()[0], class.representative());
                assert!([1, 2, 4].contains(&class.members().len()));
                for &m in class.members() {
                    assert!(!seen[m as usize], "word counted twice");
                    seen[m as usize] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
            // Sorted by representative.
            let reps: Vec<u16> = parts.iter().map(SymmetryClass::representative).collect();
            let mut sorted = reps.clone();
            sorted.sort_unstable();
            assert_eq!(reps, sorted);
        }
    }

    #[test]
    fn alternating_words_share_a_class() {
        let parts = classes(k(4));
        assert_eq!(parts.len(), 6);
        let (w, k4) = parse_word("0101").unwrap();
        let class = parts
            .iter()
            .find(|c| c.members().contains(&w))
            .expect("0101 belongs somewhere");
        assert_eq!(class.members_text(k4), "0101|1010");
    }

    #[test]
    fn two_bit_classes() {
        let parts = classes(k(2));
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].members_text(k(2)), "00|11");
        assert_eq!(parts[1].members_text(k(2)), "01|10");
    }

    #[test]
    fn grouping_sums_member_counts() {
        let mut counts = vec![0u64; 16];
        counts[0b0101] = 5;
        counts[0b1010] = 7;
        let d = Distribution::from_counts(k(4), counts, "").unwrap();
        let grouped = group_distribution(&d);
        assert_eq!(grouped.total(), d.total());
        let top = &grouped.entries()[0];
        assert_eq!(word_text(top.class.representative(), k(4)), "0101");
        assert_eq!(top.count, 12);
        // Every other class is empty.
        assert!(grouped.entries()[1..].iter().all(|e| e.count == 0));
    }

    #[test]
    fn grouping_preserves_total() {
        let mut rng = SplitMix64::new(99);
        let counts: Vec<u64> = (0..32).map(|_| rng.next_u64() % 50).collect();
        let d = Distribution::from_counts(k(5), counts, "").unwrap();
        let grouped = group_distribution(&d);
        assert_eq!(
            grouped.entries().iter().map(|e| e.count).sum::<u64>(),
            d.total()
        );
        assert_eq!(grouped.entries().len() as u64, class_count(k(5)));
    }

    #[test]
    fn class_csv_shape() {
        let d = Distribution::from_counts(k(2), vec![3, 1, 1, 3], "").unwrap();
        let csv = group_distribution(&d).to_csv(&[]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "representative,members,count,m_e,K_e,rank");
        assert!(lines[1].starts_with("00,00|11,6,"));
        assert!(lines[2].starts_with("01,01|10,2,"));
        let parsed = parse_class_csv(&csv).unwrap();
        assert_eq!(parsed, vec![("00".into(), 6), ("01".into(), 2)]);
    }
}
