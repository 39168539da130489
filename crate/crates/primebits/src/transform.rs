//! From primes to bits: gap sequence, second differences, and the
//! sign-encoded binary sequence.
//!
//! The pipeline is `PrimeStream -> GapSequence -> SecondDiffSequence ->
//! BitSequence`. Every stage is a pure transformation; identical input yields
//! a bit-identical result. The bit encoding maps a positive second difference
//! to 1, a negative one to 0, and drops zeros while counting them — the
//! discard rate decides how many primes a caller must generate for a given
//! bit budget, so it is never lost.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::primes::PrimeStream;

/// Differences of consecutive primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSequence {
    gaps: Vec<i64>,
    origin_index: usize,
}

impl GapSequence {
    /// `gaps[i] = p[i+1] - p[i]` over the source stream.
    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    /// Index of the first underlying prime in the source stream.
    pub fn origin_index(&self) -> usize {
        self.origin_index
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }
}

/// Differences of consecutive prime gaps. Elements may be negative or zero;
/// apart from a leading 1 when the stream starts at 2, every element is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondDiffSequence {
    diffs: Vec<i64>,
}

impl SecondDiffSequence {
    pub fn diffs(&self) -> &[i64] {
        &self.diffs
    }

    pub fn len(&self) -> usize {
        self.diffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diffs.is_empty()
    }

    /// Raw value dump, one decimal per line, for external plotting.
    pub fn write_values<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for d in &self.diffs {
            writeln!(w, "{d}")?;
        }
        Ok(())
    }
}

/// The sign-encoded binary sequence, with provenance back into the second
/// differences.
///
/// `bits[k]` is 1 where the source difference was positive and 0 where it was
/// negative; zero differences are discarded but counted. `d_index(k)` returns
/// the index in the source [`SecondDiffSequence`] that produced bit `k`, which
/// in turn pins down the underlying primes (`d[i]` spans primes `i..=i+2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSequence {
    bits: Vec<u8>,
    d_index: Vec<usize>,
    discarded_zeros: usize,
}

impl BitSequence {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, k: usize) -> u8 {
        self.bits[k]
    }

    /// Index into the source second-difference sequence for bit `k`.
    pub fn d_index(&self, k: usize) -> usize {
        self.d_index[k]
    }

    /// Number of zero differences dropped during encoding.
    pub fn discarded_zero_count(&self) -> usize {
        self.discarded_zeros
    }
}

/// Histogram of second-difference values with integer bins aligned so that 0
/// is a bin edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bin_edges: Vec<i64>,
    counts: Vec<u64>,
    bin_width: u64,
}

impl Histogram {
    /// Bin edges; bin `i` covers `[bin_edges[i], bin_edges[i+1])`.
    pub fn bin_edges(&self) -> &[i64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bin_width(&self) -> u64 {
        self.bin_width
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total mass, equal to the source sequence length.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Rows of `(bin lower edge, count)`.
    pub fn rows(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.bin_edges.iter().zip(self.counts.iter()).map(|(&e, &c)| (e, c))
    }

    /// Two-column tab-separated rows (lower edge, count), no header.
    pub fn write_tsv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for (edge, count) in self.rows() {
            writeln!(w, "{edge}\t{count}")?;
        }
        Ok(())
    }
}

/// Consecutive differences `p[i+1] - p[i]` of a prime stream.
pub fn first_difference(stream: &PrimeStream) -> Result<GapSequence> {
    let primes = stream.as_slice();
    if primes.len() < 2 {
        return Err(Error::InsufficientInput {
            needed: 2,
            got: primes.len(),
        });
    }
    let gaps = primes
        .windows(2)
        .map(|w| (w[1] - w[0]) as i64)
        .collect();
    Ok(GapSequence {
        gaps,
        origin_index: 0,
    })
}

/// Differences of consecutive gaps.
pub fn second_difference(gaps: &GapSequence) -> Result<SecondDiffSequence> {
    if gaps.len() < 2 {
        return Err(Error::InsufficientInput {
            needed: 2,
            got: gaps.len(),
        });
    }
    let diffs = gaps.gaps().windows(2).map(|w| w[1] - w[0]).collect();
    Ok(SecondDiffSequence { diffs })
}

/// Sign-encode the second differences: positive -> 1, negative -> 0, zero ->
/// discarded (and counted).
pub fn encode_bits(diffs: &SecondDiffSequence) -> BitSequence {
    let mut bits = Vec::with_capacity(diffs.len());
    let mut d_index = Vec::with_capacity(diffs.len());
    let mut discarded_zeros = 0usize;
    for (i, &d) in diffs.diffs().iter().enumerate() {
        match d.cmp(&0) {
            std::cmp::Ordering::Greater => {
                bits.push(1);
                d_index.push(i);
            }
            std::cmp::Ordering::Less => {
                bits.push(0);
                d_index.push(i);
            }
            std::cmp::Ordering::Equal => discarded_zeros += 1,
        }
    }
    BitSequence {
        bits,
        d_index,
        discarded_zeros,
    }
}

/// Bin the second differences into width-`bin_width` bins aligned at 0.
///
/// An empty input yields an empty histogram. Width 2 (the default used by the
/// CLI) gives one bin per attained value, since all differences beyond a
/// possible leading 1 are even.
pub fn histogram_of(diffs: &SecondDiffSequence, bin_width: u64) -> Result<Histogram> {
    if bin_width == 0 {
        return Err(Error::ZeroBinWidth);
    }
    let w = bin_width as i64;
    if diffs.is_empty() {
        return Ok(Histogram {
            bin_edges: Vec::new(),
            counts: Vec::new(),
            bin_width,
        });
    }
    let min = *diffs.diffs().iter().min().expect("nonempty");
    let max = *diffs.diffs().iter().max().expect("nonempty");
    let lo_edge = min.div_euclid(w) * w;
    let hi_bin = max.div_euclid(w); // index of the bin containing max
    let n_bins = (hi_bin - min.div_euclid(w) + 1) as usize;
    let mut counts = vec![0u64; n_bins];
    for &d in diffs.diffs() {
        counts[(d.div_euclid(w) - min.div_euclid(w)) as usize] += 1;
    }
    let bin_edges = (0..n_bins).map(|i| lo_edge + i as i64 * w).collect();
    Ok(Histogram {
        bin_edges,
        counts,
        bin_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{primes_up_to, PrimeStream};
    use proptest::prelude::*;

    fn stream_of(primes: &[u64]) -> PrimeStream {
        PrimeStream::new(primes[0], primes.to_vec())
    }

    #[test]
    fn first_difference_examples() {
        let s = stream_of(&[2, 3, 5, 7, 11, 13]);
        let g = first_difference(&s).unwrap();
        assert_eq!(g.gaps(), &[1, 2, 2, 4, 2]);

        let s = stream_of(&[11, 13, 17]);
        let g = first_difference(&s).unwrap();
        assert_eq!(g.gaps(), &[2, 4]);

        let s = primes_up_to(30).unwrap();
        let g = first_difference(&s).unwrap();
        assert_eq!(g.gaps(), &[1, 2, 2, 4, 2, 4, 2, 4, 6]);
        assert_eq!(g.len(), s.len() - 1);
    }

    #[test]
    fn first_difference_needs_two_primes() {
        let s = primes_up_to(3).unwrap(); // just [2]
        assert!(matches!(
            first_difference(&s),
            Err(Error::InsufficientInput { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn second_difference_examples() {
        let s = primes_up_to(30).unwrap();
        let g = first_difference(&s).unwrap();
        let d = second_difference(&g).unwrap();
        assert_eq!(d.diffs(), &[1, 0, 2, -2, 2, -2, 2, 2]);

        let s = stream_of(&[11, 13, 17]);
        let d = second_difference(&first_difference(&s).unwrap()).unwrap();
        assert_eq!(d.diffs(), &[2]);
    }

    #[test]
    fn second_difference_needs_two_gaps() {
        let s = stream_of(&[2, 3]);
        let g = first_difference(&s).unwrap();
        let g = GapSequence {
            gaps: g.gaps()[..1].to_vec(),
            origin_index: 0,
        };
        assert!(matches!(
            second_difference(&g),
            Err(Error::InsufficientInput { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn encode_examples() {
        let d = SecondDiffSequence {
            diffs: vec![1, 0, 2, -2],
        };
        let b = encode_bits(&d);
        assert_eq!(b.bits(), &[1, 1, 0]);
        assert_eq!(b.discarded_zero_count(), 1);
        assert_eq!(b.d_index(0), 0);
        assert_eq!(b.d_index(1), 2);
        assert_eq!(b.d_index(2), 3);

        let d = SecondDiffSequence {
            diffs: vec![1, 0, 2, -2, 2, -2, 2, 2],
        };
        let b = encode_bits(&d);
        assert_eq!(b.bits(), &[1, 1, 0, 1, 0, 1, 1]);
        assert_eq!(b.discarded_zero_count(), 1);
    }

    #[test]
    fn encode_all_zeros() {
        let d = SecondDiffSequence {
            diffs: vec![0, 0, 0],
        };
        let b = encode_bits(&d);
        assert!(b.is_empty());
        assert_eq!(b.discarded_zero_count(), 3);
    }

    #[test]
    fn histogram_examples() {
        let d = SecondDiffSequence {
            diffs: vec![1, 0, 2, -2],
        };
        let h = histogram_of(&d, 2).unwrap();
        assert_eq!(h.bin_edges(), &[-2, 0, 2]);
        assert_eq!(h.counts(), &[1, 2, 1]);
        assert_eq!(h.total(), 4);

        let empty = SecondDiffSequence { diffs: vec![] };
        let h = histogram_of(&empty, 7).unwrap();
        assert!(h.is_empty());

        assert!(matches!(histogram_of(&d, 0), Err(Error::ZeroBinWidth)));
    }

    #[test]
    fn histogram_tsv_rows() {
        let d = SecondDiffSequence {
            diffs: vec![1, 0, 2, -2],
        };
        let h = histogram_of(&d, 2).unwrap();
        let mut out = Vec::new();
        h.write_tsv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "-2\t1\n0\t2\n2\t1\n");
    }

    #[test]
    fn value_dump() {
        let d = SecondDiffSequence {
            diffs: vec![1, -2, 0],
        };
        let mut out = Vec::new();
        d.write_values(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1\n-2\n0\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        // |C| = |P|-1, |D| = |P|-2, |B| + discarded = |P|-2.
        #[test]
        fn length_arithmetic(limit in 7u64..20_000) {
            let s = primes_up_to(limit).unwrap();
            let g = first_difference(&s).unwrap();
            let d = second_difference(&g).unwrap();
            let b = encode_bits(&d);
            prop_assert_eq!(g.len(), s.len() - 1);
            prop_assert_eq!(d.len(), s.len() - 2);
            prop_assert_eq!(b.len() + b.discarded_zero_count(), s.len() - 2);
            let h = histogram_of(&d, 2).unwrap();
            prop_assert_eq!(h.total() as usize, d.len());
        }

        // Streams starting at p >= 3 have only even differences.
        #[test]
        fn parity_after_two(lower in 3u64..100_000) {
            let s = crate::primes::primes_starting_at(lower, 20).unwrap();
            let d = second_difference(&first_difference(&s).unwrap()).unwrap();
            for &v in d.diffs() {
                prop_assert_eq!(v.rem_euclid(2), 0);
            }
        }

        // Every emitted bit re-derives the sign of its source difference;
        // every skipped index is exactly a zero.
        #[test]
        fn sign_fidelity(limit in 10u64..20_000) {
            let s = primes_up_to(limit).unwrap();
            let d = second_difference(&first_difference(&s).unwrap()).unwrap();
            let b = encode_bits(&d);
            let mut covered = vec![false; d.len()];
            for k in 0..b.len() {
                let src = d.diffs()[b.d_index(k)];
                covered[b.d_index(k)] = true;
                if b.bit(k) == 1 {
                    prop_assert!(src > 0);
                } else {
                    prop_assert!(src < 0);
                }
            }
            for (i, was_covered) in covered.iter().enumerate() {
                if !was_covered {
                    prop_assert_eq!(d.diffs()[i], 0);
                }
            }
        }
    }
}
