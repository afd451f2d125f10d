//! Star moments of the d-regular directed tree.
//!
//! `M(w)` counts closed walks at the root of the tree that follow the letter
//! pattern `w` (`1` = forward along an arc, `*` = backward). The crate
//! computes it four independent ways (brute-force path enumeration in the
//! free group, the skeleton fiber sum, the signed Catalan formula, and the
//! free moment-cumulant expansion) and checks the convergence of
//! `Tr A^w / n` for random and deterministic regular digraphs.

pub mod cli;
pub mod digraph;
pub mod error;
pub mod freegroup;
pub mod freeprob;
pub mod moments;
pub mod partitions;
pub mod randgraph;
pub mod words;

pub use error::{Error, Result};
pub use words::{parse_word, Letter, Word};

/// Serializes a big integer as a JSON string of decimal digits.
pub(crate) fn serde_decimal<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}
