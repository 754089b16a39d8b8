//! Quadratic reference implementations over decoded strings. Nothing here
//! touches the suffix or trie code; they exist to check it.

use crate::engine::AcsResult;
use crate::error::{Error, Result};
use crate::rle::{decode, RleSeq, Sentinel, SentinelMode, Symbol};
use crate::suffix::{MetaSuffixId, SeqTag, SuffixOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Longest decoded sequence the oracles will expand.
    pub max_len: u64,
    /// Largest `x * y` a quadratic loop may run over.
    pub max_product: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_len: 2000,
            max_product: 2000 * 2000,
        }
    }
}

impl OracleBudget {
    fn check(&self, x: u64, y: u64) -> Result<()> {
        if x > self.max_len || y > self.max_len {
            return Err(Error::OracleBudget(format!(
                "lengths {x} and {y}, limit {}",
                self.max_len
            )));
        }
        if x.saturating_mul(y) > self.max_product {
            return Err(Error::OracleBudget(format!(
                "product {x}*{y} over {}",
                self.max_product
            )));
        }
        Ok(())
    }
}

/// `L[i] = max_j lcp(X[i..], Y[j..])` by dynamic programming over all pairs.
pub fn brute_l(x: &[Symbol], y: &[Symbol], budget: &OracleBudget) -> Result<Vec<u64>> {
    budget.check(x.len() as u64, y.len() as u64)?;
    let mut best = vec![0u64; x.len()];
    // row[j] = lcp(X[i..], Y[j..]) for the current i, built from i + 1
    let mut row = vec![0u64; y.len() + 1];
    for i in (0..x.len()).rev() {
        for j in 0..y.len() {
            row[j] = if x[i] == y[j] { row[j + 1] + 1 } else { 0 };
        }
        best[i] = row[..y.len()].iter().copied().max().unwrap_or(0);
    }
    Ok(best)
}

pub fn brute_acs(x: &[Symbol], y: &[Symbol], budget: &OracleBudget) -> Result<AcsResult> {
    let l = brute_l(x, y, budget)?;
    Ok(AcsResult {
        lsum: l.iter().map(|&v| v as u128).sum(),
        x: x.len() as u64,
    })
}

/// Decoded body of a sequence, for feeding the oracles.
pub fn expand(seq: &RleSeq, budget: &OracleBudget) -> Result<Vec<Symbol>> {
    decode(seq, SentinelMode::Strip, budget.max_len)
}

/// Run-start suffixes of the sentinel-terminated decoded pair, sorted with a
/// plain slice comparison; LCPs by character scan.
pub fn brute_suffix_sort(x: &RleSeq, y: &RleSeq, budget: &OracleBudget) -> Result<SuffixOrder> {
    budget.check(x.text_length(), y.text_length())?;
    let tx = decode(
        &x.with_sentinel(Sentinel::First),
        SentinelMode::Keep,
        budget.max_len + 1,
    )?;
    let ty = decode(
        &y.with_sentinel(Sentinel::Second),
        SentinelMode::Keep,
        budget.max_len + 1,
    )?;

    let mut suffixes: Vec<(MetaSuffixId, &[Symbol])> = Vec::new();
    for (tag, seq, text) in [(SeqTag::X, x, &tx), (SeqTag::Y, y, &ty)] {
        let mut start = 0usize;
        for (run, r) in seq.runs().iter().enumerate() {
            suffixes.push((MetaSuffixId { seq: tag, run }, &text[start..]));
            start += r.length as usize;
        }
    }
    suffixes.sort_by(|a, b| a.1.cmp(b.1));

    let dlcp = suffixes
        .windows(2)
        .map(|w| {
            w[0].1
                .iter()
                .zip(w[1].1)
                .take_while(|(a, b)| a == b)
                .count() as u64
        })
        .collect();
    Ok(SuffixOrder {
        order: suffixes.into_iter().map(|(id, _)| id).collect(),
        dlcp,
    })
}
