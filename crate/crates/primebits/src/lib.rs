pub mod error;
pub mod fips;
pub mod primes;
pub mod transform;

pub use error::{Error, Result};
pub use fips::{
    count_runs, long_run_test, longest_run, monobit_test, poker_test, run_histogram, runs_test,
    BitBlock, BlockResults, ChiSquare, FipsConfig, LongRunResult, MonobitResult, PokerResult,
    RunHistogram, RunsResult, BLOCK_BITS,
};
pub use primes::{count_primes, primes_starting_at, primes_up_to, PrimeStream, Sieve};
pub use transform::{
    encode_bits, first_difference, histogram_of, second_difference, BitSequence, GapSequence,
    Histogram, SecondDiffSequence,
};
