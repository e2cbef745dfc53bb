//! Turns external binary data into word distributions so real-world bit
//! streams can be compared against machine-generated spectra. Bytes expand
//! most-significant-bit first and the whole source is treated as one string,
//! so windows cross byte boundaries.

use std::io::Read;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::spectrum::{count_windows, CountingMode, Distribution};
use crate::word::WordLength;

/// Where the bits come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BitOrigin {
    File(PathBuf),
    Stdin,
}

/// A readable source of raw bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSource {
    origin: BitOrigin,
}

impl BitSource {
    pub fn from_path(path: impl Into<PathBuf>) -> BitSource {
        BitSource {
            origin: BitOrigin::File(path.into()),
        }
    }

    pub fn stdin() -> BitSource {
        BitSource {
            origin: BitOrigin::Stdin,
        }
    }

    pub fn origin(&self) -> &BitOrigin {
        &self.origin
    }

    /// Human-readable origin, used as the distribution label.
    pub fn label(&self) -> String {
        match &self.origin {
            BitOrigin::File(path) => path.display().to_string(),
            BitOrigin::Stdin => "<stdin>".to_string(),
        }
    }

    fn read_bytes(&self) -> Result<Vec<u8>> {
        match &self.origin {
            BitOrigin::File(path) => {
                std::fs::read(path).map_err(|e| Error::io(path.clone(), e))
            }
            BitOrigin::Stdin => {
                let mut buf = Vec::new();
                std::io::stdin()
                    .read_to_end(&mut buf)
                    .map_err(|e| Error::io(Path::new("<stdin>"), e))?;
                Ok(buf)
            }
        }
    }

    /// Reads the source fully and expands it to one bit per element,
    /// MSB-first within each byte.
    pub fn ingest_bits(&self) -> Result<Vec<u8>> {
        Ok(bits_from_bytes(&self.read_bytes()?))
    }
}

/// MSB-first bit expansion.
pub fn bits_from_bytes(bytes: &[u8]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &byte in bytes {
        for shift in (0..8).rev() {
            bits.push(byte >> shift & 1);
        }
    }
    bits
}

/// Sliding-window occurrence counts over the whole ingested bit string.
pub fn file_distribution(source: &BitSource, k: WordLength) -> Result<Distribution> {
    let bits = source.ingest_bits()?;
    let mut d = count_windows(&bits, k, CountingMode::PerOccurrence);
    d.set_source_label(source.label());
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word_text;
    use std::io::Write;

    fn k(n: u8) -> WordLength {
        WordLength::new(n).unwrap()
    }

    fn bits_text(bits: &[u8]) -> String {
        bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }

    #[test]
    fn msb_first_expansion() {
        assert_eq!(bits_text(&bits_from_bytes(&[0xa5])), "10100101");
        assert_eq!(bits_from_bytes(&[]), Vec::<u8>::new());
        assert_eq!(bits_from_bytes(&[1, 2, 3]).len(), 24);
    }

    fn temp_file(bytes: &[u8]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(bytes).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn all_ones_byte() {
        let f = temp_file(&[0xff]);
        let d = file_distribution(&BitSource::from_path(f.path()), k(4)).unwrap();
        assert_eq!(d.total(), 5);
        assert_eq!(d.count(0b1111), 5);
    }

    #[test]
    fn two_zero_bytes() {
        let f = temp_file(&[0x00, 0x00]);
        let d = file_distribution(&BitSource::from_path(f.path()), k(4)).unwrap();
        assert_eq!(d.count(0b0000), 13);
        assert_eq!(d.total(), 13);
    }

    #[test]
    fn windows_cross_byte_boundaries() {
        // 0x0f 0xf0 = 0000111111110000: the word 1111 occurs 5 times, all in
        // the middle run.
        let f = temp_file(&[0x0f, 0xf0]);
        let d = file_distribution(&BitSource::from_path(f.path()), k(4)).unwrap();
        assert_eq!(d.count(0b1111), 5);
        assert_eq!(d.total(), 13);
    }

    #[test]
    fn empty_file_is_empty_distribution() {
        let f = temp_file(&[]);
        let source = BitSource::from_path(f.path());
        assert_eq!(source.ingest_bits().unwrap(), Vec::<u8>::new());
        let d = file_distribution(&source, k(4)).unwrap();
        assert_eq!(d.total(), 0);
    }

    #[test]
    fn total_is_window_count() {
        let f = temp_file(&[0xde, 0xad, 0xbe, 0xef]);
        for klen in [1u8, 3, 4, 8] {
            let d = file_distribution(&BitSource::from_path(f.path()), k(klen)).unwrap();
            assert_eq!(d.total(), 32 - klen as u64 + 1);
        }
    }

    #[test]
    fn label_carries_origin() {
        let f = temp_file(&[0xff]);
        let d = file_distribution(&BitSource::from_path(f.path()), k(2)).unwrap();
        assert_eq!(d.source_label(), f.path().display().to_string());
        // Sanity: the only word present is 11.
        let ranked = d.rank();
        assert_eq!(word_text(ranked.entries()[0].word, k(2)), "11");
    }

    #[test]
    fn missing_file_reports_origin() {
        let source = BitSource::from_path("/no/such/file.bin");
        let err = source.ingest_bits().unwrap_err();
        assert!(err.to_string().contains("/no/such/file.bin"));
    }

    #[test]
    fn same_file_same_distribution() {
        let f = temp_file(&[7, 77, 177, 250, 3]);
        let source = BitSource::from_path(f.path());
        let a = file_distribution(&source, k(5)).unwrap();
        let b = file_distribution(&source, k(5)).unwrap();
        assert_eq!(a, b);
    }
}
