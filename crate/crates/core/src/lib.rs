//! Average Common Substring (ACS) between run-length encoded sequences.
//!
//! `ACS(X, Y)` is the mean, over every position of X, of the longest prefix of
//! the suffix starting there that occurs anywhere in Y. This crate computes it
//! exactly from the run-length encodings in `O(N log N)` time and `O(N log N)`
//! words, where `N` is the total number of runs, independent of the decoded
//! lengths.
//!
//! The pipeline:
//!
//! 1. [`suffix`]: sort the suffixes that start at run boundaries into decoded
//!    lexicographic order, compute their decoded LCPs and the compact trie T.
//! 2. [`sigma`]: split T by the symbol of the run preceding each suffix, and
//!    annotate every node with `freq` and `weight`.
//! 3. [`engine`]: sum the match lengths of each run of X with two ancestor
//!    searches, then derive ACS and the symmetric distance.
//!
//! ```
//! use rle_acs::{acs, encode_bytes};
//!
//! let x = encode_bytes(b"aab", "x")?;
//! let y = encode_bytes(b"ab", "y")?;
//! let r = acs(&x, &y)?;
//! assert_eq!((r.lsum, r.x), (4, 3));
//! # Ok::<(), rle_acs::Error>(())
//! ```

pub mod bench;
pub mod cli;
pub mod engine;
mod error;
pub mod matrix;
pub mod oracle;
pub mod rle;
pub mod sigma;
pub mod suffix;
pub mod verify;

pub use engine::{acs, acs_self, dist, AcsEngine, AcsResult, DistResult, EngineOptions, LogBase};
pub use error::{Error, Result};
pub use matrix::{distance_matrix, DistanceMatrix};
pub use rle::{
    decode, encode, encode_bytes, parse_fasta, parse_rle_text, Alphabet, RleSeq, Run, Symbol,
};
