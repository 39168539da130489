//! Prime generation via a segmented sieve of Eratosthenes.
//!
//! Two entry points cover the crate's needs: [`primes_up_to`] for "all primes
//! below a limit" and [`primes_starting_at`] for "a run of consecutive primes
//! from a lower bound", the latter growing segment by segment so starts near
//! 10^8 and beyond stay cheap. Base primes (everything up to the square root
//! of the highest value sieved so far) are cached per process and shared
//! across calls.

use std::io::{self, Write};
use std::sync::Mutex;

use crate::error::{Error, Result};

/// An ordered run of consecutive primes.
///
/// Construction guarantees the sequence is strictly increasing and gap-free:
/// every prime in `[start_bound, last]` is present. If `start_bound <= 2` the
/// first element is 2.
#[derive(Debug, Clone)]
pub struct PrimeStream {
    start_bound: u64,
    primes: Vec<u64>,
}

impl PrimeStream {
    pub(crate) fn new(start_bound: u64, primes: Vec<u64>) -> Self {
        Self { start_bound, primes }
    }

    /// The inclusive lower bound this stream was requested from.
    pub fn start_bound(&self) -> u64 {
        self.start_bound
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn first(&self) -> Option<u64> {
        self.primes.first().copied()
    }

    pub fn last(&self) -> Option<u64> {
        self.primes.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    /// Debug dump as newline-delimited decimal text.
    pub fn write_decimal<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for p in &self.primes {
            writeln!(w, "{p}")?;
        }
        Ok(())
    }
}

/// Largest value the default [`Sieve`] will produce.
pub const DEFAULT_MAX_LIMIT: u64 = 1 << 34;

/// Default number of odd candidates per sieve segment.
pub const DEFAULT_SEGMENT_CANDIDATES: usize = 1 << 20;

// Values above this would risk u64 overflow in segment arithmetic.
const ABSOLUTE_MAX_LIMIT: u64 = 1 << 62;

/// A segmented sieve with a configurable window size and capacity bound.
///
/// All methods are pure with respect to observable state; a `Sieve` can be
/// shared freely across threads.
#[derive(Debug, Clone)]
pub struct Sieve {
    segment_candidates: usize,
    max_limit: u64,
}

impl Default for Sieve {
    fn default() -> Self {
        Self {
            segment_candidates: DEFAULT_SEGMENT_CANDIDATES,
            max_limit: DEFAULT_MAX_LIMIT,
        }
    }
}

impl Sieve {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the number of odd candidates sieved per segment (window spans
    /// twice as many integers).
    pub fn with_segment_candidates(mut self, candidates: usize) -> Self {
        self.segment_candidates = candidates.max(16);
        self
    }

    /// Sets the largest value this sieve may produce; requests beyond it
    /// return [`Error::CapacityExceeded`].
    pub fn with_max_limit(mut self, max_limit: u64) -> Self {
        self.max_limit = max_limit.min(ABSOLUTE_MAX_LIMIT);
        self
    }

    /// All primes `p < limit`, in order. A limit below 2 yields an empty
    /// stream.
    pub fn primes_up_to(&self, limit: u64) -> Result<PrimeStream> {
        let mut primes = Vec::with_capacity(capacity_hint(limit));
        self.for_each_in_segments(2, Some(limit), |p| primes.push(p), |_| false)?;
        Ok(PrimeStream::new(2, primes))
    }

    /// At least `min_count` consecutive primes, the first being the smallest
    /// prime `>= lower`. Generation proceeds by whole segments, so the result
    /// usually carries a tail of extra primes beyond `min_count`.
    pub fn primes_starting_at(&self, lower: u64, min_count: usize) -> Result<PrimeStream> {
        let mut primes = Vec::with_capacity(min_count);
        self.for_each_in_segments(
            lower,
            None,
            |p| primes.push(p),
            |produced| produced >= min_count as u64,
        )?;
        Ok(PrimeStream::new(lower.max(2), primes))
    }

    /// Number of primes `p < limit`, consistent with
    /// `primes_up_to(limit).len()` without materializing the stream.
    pub fn count_primes(&self, limit: u64) -> Result<u64> {
        let mut count = 0u64;
        self.for_each_in_segments(2, Some(limit), |_| count += 1, |_| false)?;
        Ok(count)
    }

    /// Core segment loop. Emits primes in `[lo, upper)` in increasing order;
    /// `enough(produced)` is consulted after every segment (and once up
    /// front) to support count-driven generation. With `upper = None` the
    /// scan runs until `enough` says stop or the capacity bound is hit.
    fn for_each_in_segments<F, G>(
        &self,
        lo: u64,
        upper: Option<u64>,
        mut emit: F,
        mut enough: G,
    ) -> Result<()>
    where
        F: FnMut(u64),
        G: FnMut(u64) -> bool,
    {
        let lo = lo.max(2);
        if let Some(u) = upper {
            if u <= lo {
                return Ok(());
            }
            if u - 1 > self.max_limit {
                return Err(Error::CapacityExceeded {
                    requested: u - 1,
                    max: self.max_limit,
                });
            }
        }

        let mut produced = 0u64;
        if enough(produced) {
            return Ok(());
        }
        if lo <= 2 && upper.map_or(true, |u| u > 2) {
            emit(2);
            produced += 1;
            if enough(produced) {
                return Ok(());
            }
        }

        // Exclusive bound on values we may produce.
        let hard_end = upper.unwrap_or(u64::MAX).min(self.max_limit.saturating_add(1));
        let span = 2 * self.segment_candidates as u64;
        let mut flags = vec![false; self.segment_candidates];
        // First odd candidate >= max(lo, 3).
        let mut seg_start = if lo <= 3 { 3 } else { lo | 1 };

        while seg_start < hard_end {
            let seg_end = seg_start.saturating_add(span).min(hard_end);
            let n_cand = ((seg_end - seg_start) + 1) / 2;
            let flags = &mut flags[..n_cand as usize];
            flags.fill(false);

            let root = (seg_end - 1).isqrt();
            for &p in base_primes_through(root).iter() {
                if p == 2 {
                    continue;
                }
                let p2 = p * p;
                let mut m = if p2 >= seg_start {
                    p2
                } else {
                    seg_start.div_ceil(p) * p
                };
                if m % 2 == 0 {
                    m += p;
                }
                while m < seg_end {
                    flags[((m - seg_start) / 2) as usize] = true;
                    m += 2 * p;
                }
            }

            for (i, &composite) in flags.iter().enumerate() {
                if !composite {
                    emit(seg_start + 2 * i as u64);
                    produced += 1;
                }
            }
            if enough(produced) {
                return Ok(());
            }
            seg_start = seg_start.saturating_add(span);
        }

        if upper.is_none() {
            // Count-driven scan ran out of capacity before satisfying the
            // request.
            return Err(Error::CapacityExceeded {
                requested: self.max_limit,
                max: self.max_limit,
            });
        }
        Ok(())
    }
}

/// All primes `p < limit` using a default [`Sieve`].
pub fn primes_up_to(limit: u64) -> Result<PrimeStream> {
    Sieve::new().primes_up_to(limit)
}

/// At least `min_count` consecutive primes starting at the smallest prime
/// `>= lower`, using a default [`Sieve`].
pub fn primes_starting_at(lower: u64, min_count: usize) -> Result<PrimeStream> {
    Sieve::new().primes_starting_at(lower, min_count)
}

/// Number of primes below `limit`, using a default [`Sieve`].
pub fn count_primes(limit: u64) -> Result<u64> {
    Sieve::new().count_primes(limit)
}

fn capacity_hint(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    // pi(x) ~ x / ln x, padded a little.
    let x = limit as f64;
    (x / x.ln() * 1.1) as usize
}

// Base primes <= cached limit, including 2, shared across all sieves in the
// process. Grows geometrically so repeated battery runs never resieve.
static BASE_CACHE: Mutex<(u64, Vec<u64>)> = Mutex::new((0, Vec::new()));

fn base_primes_through(n: u64) -> Vec<u64> {
    let mut cache = BASE_CACHE.lock().expect("base prime cache poisoned");
    if n > cache.0 {
        let new_limit = n.max(cache.0.saturating_mul(2)).max(1 << 12);
        cache.1 = simple_sieve(new_limit);
        cache.0 = new_limit;
    }
    let cut = cache.1.partition_point(|&p| p <= n);
    cache.1[..cut].to_vec()
}

/// Plain monolithic sieve, used only for base primes (small n).
fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}
