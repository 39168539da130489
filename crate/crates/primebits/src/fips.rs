//! The four FIPS 140-1/2 power-up randomness tests, applied to 20000-bit
//! blocks.
//!
//! Each test returns its raw statistic together with the configured pass band
//! and a verdict. Chi-square statistics are held as exact fractions
//! ([`ChiSquare`]) so reported values match the printed digit: for a
//! 20000-bit block both the monobit and poker statistics are exact multiples
//! of 1/5000 and render losslessly at four decimals.
//!
//! Thresholds live in [`FipsConfig`]; the defaults are the FIPS 140-2 values
//! (monobit ones-count band, poker band, per-length run intervals, long-run
//! limit 26) and are calibrated for blocks of [`BLOCK_BITS`] bits. Blocks of
//! other multiple-of-4 lengths are accepted and their statistics are exact,
//! but the absolute bands keep their configured values.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::transform::BitSequence;

/// Block size the FIPS 140-1/2 tests are specified for.
pub const BLOCK_BITS: usize = 20_000;

/// FIPS 140-2 per-length run intervals (inclusive), applied separately to
/// runs of zeros and runs of ones; index 5 is the "length 6 and longer"
/// bucket.
pub const FIPS_140_2_RUN_BANDS: [(u64, u64); 6] = [
    (2315, 2685),
    (1114, 1386),
    (527, 723),
    (240, 384),
    (103, 209),
    (103, 209),
];

/// A chi-square statistic as an exact fraction.
///
/// Stored as `numer / denom` with integer parts, so equality and display are
/// free of float rounding. `Display` renders four decimals using integer
/// arithmetic (round half up).
#[derive(Debug, Clone, Copy)]
pub struct ChiSquare {
    numer: u128,
    denom: u64,
}

impl ChiSquare {
    pub fn from_ratio(numer: u128, denom: u64) -> Self {
        assert!(denom > 0, "chi-square denominator must be positive");
        Self { numer, denom }
    }

    pub fn as_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl PartialEq for ChiSquare {
    fn eq(&self, other: &Self) -> bool {
        self.numer * other.denom as u128 == other.numer * self.denom as u128
    }
}

impl Eq for ChiSquare {}

impl std::fmt::Display for ChiSquare {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let scaled = self.numer * 10_000;
        let denom = self.denom as u128;
        let mut q = scaled / denom;
        let r = scaled % denom;
        if 2 * r >= denom {
            q += 1;
        }
        write!(f, "{}.{:04}", q / 10_000, q % 10_000)
    }
}

impl Serialize for ChiSquare {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

/// A labelled block of bits, the input unit of the FIPS battery.
///
/// Length must be a positive multiple of 4 (the poker test consumes whole
/// nibbles); the canonical size is [`BLOCK_BITS`].
#[derive(Debug, Clone)]
pub struct BitBlock {
    bits: Vec<u8>,
    label: String,
}

impl BitBlock {
    pub fn new(bits: Vec<u8>, label: impl Into<String>) -> Result<Self> {
        if bits.is_empty() || bits.len() % 4 != 0 {
            return Err(Error::BlockLength { got: bits.len() });
        }
        if let Some(index) = bits.iter().position(|&b| b > 1) {
            return Err(Error::NonBinaryValue {
                index,
                value: bits[index],
            });
        }
        Ok(Self {
            bits,
            label: label.into(),
        })
    }

    /// Slice `len` bits out of an encoded sequence, starting at `start`.
    pub fn from_sequence(
        seq: &BitSequence,
        start: usize,
        len: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        if start + len > seq.len() {
            return Err(Error::InsufficientInput {
                needed: start + len,
                got: seq.len(),
            });
        }
        Self::new(seq.bits()[start..start + len].to_vec(), label)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Thresholds for the four tests. Defaults are the FIPS 140-2 values for
/// 20000-bit blocks.
#[derive(Debug, Clone)]
pub struct FipsConfig {
    /// Exclusive band on the ones count (monobit).
    pub monobit_band: (u64, u64),
    /// Chi-square significance bound for the monobit variant.
    pub monobit_chi_max: f64,
    /// Exclusive band on the poker statistic.
    pub poker_band: (f64, f64),
    /// Inclusive per-length run intervals (lengths 1..=5, then 6+). `None`
    /// skips the per-length verdict.
    pub run_bands: Option<[(u64, u64); 6]>,
    /// A block fails the long-run test iff it contains a run of this length
    /// or longer.
    pub long_run_limit: usize,
}

impl Default for FipsConfig {
    fn default() -> Self {
        Self {
            monobit_band: (9_725, 10_275),
            monobit_chi_max: 3.84,
            poker_band: (2.16, 46.17),
            run_bands: Some(FIPS_140_2_RUN_BANDS),
            long_run_limit: 26,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonobitResult {
    pub n0: u64,
    pub n1: u64,
    pub chi_square: ChiSquare,
    /// Ones count inside the FIPS band.
    pub fips_pass: bool,
    /// Chi-square below the significance bound.
    pub chi_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PokerResult {
    /// Occurrences of each 4-bit pattern, indexed by its MSB-first value.
    pub counts: [u64; 16],
    pub chi_square: ChiSquare,
    pub pass: bool,
}

/// Run counts per (bit value, run length).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunHistogram {
    /// `zeros[l-1]` = number of runs of zeros of length `l`.
    pub zeros: Vec<u64>,
    /// `ones[l-1]` = number of runs of ones of length `l`.
    pub ones: Vec<u64>,
}

impl RunHistogram {
    fn record(&mut self, value: u8, len: usize) {
        let side = if value == 0 { &mut self.zeros } else { &mut self.ones };
        if side.len() < len {
            side.resize(len, 0);
        }
        side[len - 1] += 1;
    }

    pub fn count(&self, value: u8, len: usize) -> u64 {
        let side = if value == 0 { &self.zeros } else { &self.ones };
        side.get(len - 1).copied().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.zeros.len().max(self.ones.len())
    }

    pub fn total_runs(&self) -> u64 {
        self.zeros.iter().sum::<u64>() + self.ones.iter().sum::<u64>()
    }

    /// Total bits covered: sum of count x length over both values.
    pub fn mass(&self) -> u64 {
        let side = |v: &[u64]| {
            v.iter()
                .enumerate()
                .map(|(i, &c)| c * (i as u64 + 1))
                .sum::<u64>()
        };
        side(&self.zeros) + side(&self.ones)
    }

    /// Counts summed over both bit values, indexed by length - 1.
    pub fn combined(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.max_len()];
        for (i, &c) in self.zeros.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in self.ones.iter().enumerate() {
            out[i] += c;
        }
        out
    }

    /// Per-value counts bucketed as lengths 1..=5 plus a 6-and-longer bucket,
    /// the shape the FIPS band table applies to.
    pub fn bucketed(&self) -> [[u64; 6]; 2] {
        let bucket = |v: &[u64]| {
            let mut b = [0u64; 6];
            for (i, &c) in v.iter().enumerate() {
                b[i.min(5)] += c;
            }
            b
        };
        [bucket(&self.zeros), bucket(&self.ones)]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunsResult {
    pub total_runs: u64,
    pub histogram: RunHistogram,
    /// Whether every per-length count sits in the configured band; `None`
    /// when no band table is configured.
    pub per_length_pass: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LongRunResult {
    pub longest_run: usize,
    pub pass: bool,
}

/// All four results for one block.
#[derive(Debug, Clone, Serialize)]
pub struct BlockResults {
    pub label: String,
    pub monobit: MonobitResult,
    pub poker: PokerResult,
    pub runs: RunsResult,
    pub long_run: LongRunResult,
}

impl FipsConfig {
    /// Frequency (monobit) test: balance of ones vs zeros, with both the
    /// FIPS band verdict and the chi-square variant `(n0-n1)^2 / n`.
    pub fn monobit(&self, block: &BitBlock) -> MonobitResult {
        let n = block.len() as u64;
        let n1 = block.bits().iter().map(|&b| b as u64).sum::<u64>();
        let n0 = n - n1;
        let diff = n0.abs_diff(n1) as u128;
        let chi_square = ChiSquare::from_ratio(diff * diff, n);
        MonobitResult {
            n0,
            n1,
            fips_pass: self.monobit_band.0 < n1 && n1 < self.monobit_band.1,
            chi_pass: chi_square.as_f64() < self.monobit_chi_max,
            chi_square,
        }
    }

    /// Poker test: uniformity of the 16 nibble patterns over non-overlapping
    /// 4-bit segments, read MSB-first in stream order.
    pub fn poker(&self, block: &BitBlock) -> PokerResult {
        let mut counts = [0u64; 16];
        for nibble in block.bits().chunks_exact(4) {
            let value = (nibble[0] << 3) | (nibble[1] << 2) | (nibble[2] << 1) | nibble[3];
            counts[value as usize] += 1;
        }
        let segments = (block.len() / 4) as u128;
        let sum_sq: u128 = counts.iter().map(|&c| c as u128 * c as u128).sum();
        // chi^2 = (16/k) * sum f^2 - k, exactly (16*sum f^2 - k^2) / k.
        let numer = 16 * sum_sq - segments * segments;
        let chi_square = ChiSquare::from_ratio(numer, segments as u64);
        let chi = chi_square.as_f64();
        PokerResult {
            counts,
            chi_square,
            pass: self.poker_band.0 < chi && chi < self.poker_band.1,
        }
    }

    /// Runs test: total number of maximal runs plus the per-(value, length)
    /// histogram. The ideal total for a balanced random block is half the
    /// block length.
    pub fn runs(&self, block: &BitBlock) -> RunsResult {
        let histogram = run_histogram(block.bits());
        let per_length_pass = self.run_bands.map(|bands| {
            histogram.bucketed().iter().all(|side| {
                side.iter()
                    .zip(bands.iter())
                    .all(|(&c, &(lo, hi))| lo <= c && c <= hi)
            })
        });
        RunsResult {
            total_runs: histogram.total_runs(),
            histogram,
            per_length_pass,
        }
    }

    /// Long-run test: fails iff any run reaches the configured limit
    /// (default 26).
    pub fn long_run(&self, block: &BitBlock) -> LongRunResult {
        let longest = longest_run(block.bits());
        LongRunResult {
            longest_run: longest,
            pass: longest < self.long_run_limit,
        }
    }

    /// All four tests on one block.
    pub fn test_block(&self, block: &BitBlock) -> BlockResults {
        BlockResults {
            label: block.label().to_owned(),
            monobit: self.monobit(block),
            poker: self.poker(block),
            runs: self.runs(block),
            long_run: self.long_run(block),
        }
    }
}

/// Monobit test with default FIPS 140-2 thresholds.
pub fn monobit_test(block: &BitBlock) -> MonobitResult {
    FipsConfig::default().monobit(block)
}

/// Poker test with default FIPS 140-2 thresholds.
pub fn poker_test(block: &BitBlock) -> PokerResult {
    FipsConfig::default().poker(block)
}

/// Runs test with default FIPS 140-2 thresholds.
pub fn runs_test(block: &BitBlock) -> RunsResult {
    FipsConfig::default().runs(block)
}

/// Long-run test with default FIPS 140-2 thresholds.
pub fn long_run_test(block: &BitBlock) -> LongRunResult {
    FipsConfig::default().long_run(block)
}

/// Number of maximal runs in a bit slice of any length: 1 plus the number of
/// adjacent unequal pairs, 0 for an empty slice. `"010101"` has 6 runs,
/// `"000011111"` has 2.
pub fn count_runs(bits: &[u8]) -> u64 {
    if bits.is_empty() {
        return 0;
    }
    1 + bits.windows(2).filter(|w| w[0] != w[1]).count() as u64
}

/// Length of the longest run of equal values; 0 for an empty slice.
pub fn longest_run(bits: &[u8]) -> usize {
    let mut longest = 0;
    let mut current = 0;
    let mut prev = None;
    for &b in bits {
        if Some(b) == prev {
            current += 1;
        } else {
            current = 1;
            prev = Some(b);
        }
        longest = longest.max(current);
    }
    longest
}

/// Per-(value, length) run histogram of a bit slice. Values must be 0 or 1.
pub fn run_histogram(bits: &[u8]) -> RunHistogram {
    let mut histogram = RunHistogram::default();
    let mut iter = bits.iter();
    let Some(&first) = iter.next() else {
        return histogram;
    };
    let mut value = first;
    let mut len = 1usize;
    for &b in iter {
        if b == value {
            len += 1;
        } else {
            histogram.record(value, len);
            value = b;
            len = 1;
        }
    }
    histogram.record(value, len);
    histogram
}
