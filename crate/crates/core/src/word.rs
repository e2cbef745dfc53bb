//! Binary words of length 1..=16, packed into `u16` with the leftmost
//! character in the most significant used bit. Numeric order on the packed
//! value equals lexicographic order on the 0/1 text of equal length, so ties
//! everywhere in this crate break the same way.

use crate::error::{Error, Result};

/// Length of the counted substrings. Valid range is 1..=16 so a full count
/// table (one slot per word) stays small.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordLength(u8);

impl WordLength {
    pub fn new(k: u8) -> Result<Self> {
        if (1..=16).contains(&k) {
            Ok(WordLength(k))
        } else {
            Err(Error::WordLengthOutOfRange { k })
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    /// Number of distinct words of this length (2^k).
    #[inline]
    pub fn word_count(self) -> usize {
        1usize << self.0
    }

    #[inline]
    pub fn mask(self) -> u32 {
        (1u32 << self.0) - 1
    }
}

impl std::fmt::Display for WordLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Renders a packed word as its 0/1 text, most significant bit first.
pub fn word_text(word: u16, k: WordLength) -> String {
    let k = k.get();
    let mut s = String::with_capacity(k as usize);
    for i in (0..k).rev() {
        s.push(if word >> i & 1 == 1 { '1' } else { '0' });
    }
    s
}

/// Parses a 0/1 string into a packed word and its length.
pub fn parse_word(text: &str) -> Result<(u16, WordLength)> {
    let k = WordLength::new(text.len().try_into().unwrap_or(0))
        .map_err(|_| Error::BadWordText(text.to_string()))?;
    let mut word = 0u16;
    for c in text.chars() {
        word = (word << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::BadWordText(text.to_string())),
            };
    }
    Ok((word, k))
}
