//! ACS and the symmetric ACS distance.
//!
//! For the run `(σ, f)` of X at index `i`, the positions inside the run see
//! `σ^h` followed by the suffix starting at run `i + 1`, for `h = f, …, 1`.
//! With `m = maxRun(σ)` in Y, position `h` matches `m` symbols when `h > m`
//! and `h + strDepth(v_h)` otherwise, `v_h` being the deepest ancestor of that
//! suffix's leaf in `T_σ` with `freq >= h`. [`AcsEngine::compute_a`] sums a
//! whole run in two ancestor searches using the node weights;
//! [`AcsEngine::compute_l_per_position`] evaluates every position and is kept
//! for validation.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::rle::{RleSeq, Run};
use crate::sigma::{build_sigma_forest, FreqRule, SigmaForest, SigmaTrie};
use crate::suffix::{
    build_maxrun, build_suffix_order, build_trie, CompactTrie, MaxRunTable, MetaSuffixId, PairText,
    SeqTag, Trie,
};

/// Exact ACS value `lsum / x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcsResult {
    /// Sum over all positions of X of the longest match found in Y.
    pub lsum: u128,
    /// Decoded length of X, sentinel excluded.
    pub x: u64,
}

impl AcsResult {
    pub fn value(&self) -> f64 {
        self.lsum as f64 / self.x as f64
    }

    /// The value as a reduced fraction.
    pub fn ratio(&self) -> Ratio<u128> {
        Ratio::new(self.lsum, self.x as u128)
    }
}

impl fmt::Display for AcsResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lsum, self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
    Ten,
}

impl LogBase {
    pub fn log(self, v: f64) -> f64 {
        match self {
            LogBase::E => v.ln(),
            LogBase::Two => v.log2(),
            LogBase::Ten => v.log10(),
        }
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(format!("unknown log base {other:?} (expected e, 2 or 10)")),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::E => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistResult {
    pub dist: f64,
    pub log_base: LogBase,
    pub acs_xy: AcsResult,
    pub acs_yx: AcsResult,
    pub acs_xx: AcsResult,
    pub acs_yy: AcsResult,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EngineOptions {
    #[doc(hidden)]
    pub freq_rule: FreqRule,
}

/// Index structures for one ordered pair (X queried against Y).
#[derive(Debug, Clone)]
pub struct AcsEngine {
    pair: PairText,
    trie: Trie,
    maxrun: MaxRunTable,
    forest: SigmaForest,
}

impl AcsEngine {
    pub fn new(x: &RleSeq, y: &RleSeq) -> Result<Self> {
        Self::with_options(x, y, EngineOptions::default())
    }

    pub fn with_options(x: &RleSeq, y: &RleSeq, options: EngineOptions) -> Result<Self> {
        let pair = PairText::new(x, y);
        let order = build_suffix_order(&pair);
        let trie = build_trie(&pair, order);
        let maxrun = build_maxrun(pair.y());
        let forest = build_sigma_forest(&trie, options.freq_rule)?;
        Ok(AcsEngine {
            pair,
            trie,
            maxrun,
            forest,
        })
    }

    pub fn pair(&self) -> &PairText {
        &self.pair
    }

    pub fn trie(&self) -> &Trie {
        &self.trie
    }

    pub fn forest(&self) -> &SigmaForest {
        &self.forest
    }

    pub fn maxrun(&self) -> &MaxRunTable {
        &self.maxrun
    }

    /// Total node count over T and all σ-tries.
    pub fn node_count(&self) -> usize {
        self.trie.tree.node_count() + self.forest.node_total()
    }

    /// Sum of the match lengths over the positions of run `i` of X (0-based,
    /// `i < x′`).
    pub fn compute_a(&self, i: usize) -> Result<u128> {
        let run = self.pair.x().body()[i];
        if self.maxrun.get(run.symbol) == 0 {
            return Ok(0);
        }
        let (trie, w) = self.sigma_leaf(i);
        self.run_sum(trie, w, run)
    }

    fn run_sum(&self, trie: &SigmaTrie, w: u32, run: Run) -> Result<u128> {
        let (f, m) = (run.length as u128, self.maxrun.get(run.symbol) as u128);
        if m == 0 {
            return Ok(0);
        }
        let v = trie.lowest_anc_with_y(w).unwrap_or(CompactTrie::ROOT);
        let weight_v = trie.weight[v as usize];
        let a = if f > m {
            // weight(v) + (1 + 2 + … + m) + m (f - m)
            (m * (m + 1) / 2)
                .checked_add(m.checked_mul(f - m).ok_or(Error::AOverflow)?)
                .and_then(|s| s.checked_add(weight_v))
        } else {
            let u = trie
                .lowest_anc_freq_at_least(w, f as u64)
                .unwrap_or(CompactTrie::ROOT);
            let tail = f
                .checked_mul(trie.str_depth(u) as u128)
                .and_then(|s| s.checked_add(f * (f + 1) / 2));
            weight_v
                .checked_sub(trie.weight[u as usize])
                .zip(tail)
                .and_then(|(d, t)| d.checked_add(t))
        };
        a.ok_or(Error::AOverflow)
    }

    /// `compute_a` for every run of X. Runs are visited in σ-trie leaf order,
    /// which keeps neighbouring searches on shared ancestors.
    pub fn run_sums(&self) -> Result<Vec<u128>> {
        let body = self.pair.x().body();
        let mut sums = vec![0u128; body.len()];
        for trie in self.forest.tries.values() {
            for (rank, leaf) in trie.leaves.iter().enumerate() {
                if leaf.suffix.seq != SeqTag::X {
                    continue;
                }
                let i = leaf.suffix.run - 1;
                sums[i] = self.run_sum(trie, trie.tree.leaves[rank], body[i])?;
            }
        }
        Ok(sums)
    }

    pub fn acs(&self) -> Result<AcsResult> {
        let mut lsum: u128 = 0;
        for a in self.run_sums()? {
            lsum = lsum.checked_add(a).ok_or(Error::AOverflow)?;
        }
        Ok(AcsResult {
            lsum,
            x: self.pair.x().text_length(),
        })
    }

    /// Match length at every decoded position of X, one ancestor search per
    /// position. Refuses inputs longer than `cap`.
    pub fn compute_l_per_position(&self, cap: u64) -> Result<Vec<u64>> {
        let x = self.pair.x();
        if x.text_length() > cap {
            return Err(Error::ValidationCap {
                length: x.text_length(),
                cap,
            });
        }
        let mut out = Vec::with_capacity(x.text_length() as usize);
        for (i, run) in x.body().iter().enumerate() {
            let m = self.maxrun.get(run.symbol);
            if m == 0 {
                out.extend(std::iter::repeat_n(0, run.length as usize));
                continue;
            }
            let (trie, w) = self.sigma_leaf(i);
            for h in (1..=run.length).rev() {
                let l = if h > m {
                    m
                } else {
                    let v = trie
                        .lowest_anc_freq_at_least(w, h)
                        .unwrap_or(CompactTrie::ROOT);
                    h + trie.str_depth(v)
                };
                out.push(l);
            }
        }
        Ok(out)
    }

    // σ-trie of run i's symbol and the leaf of the suffix after run i
    fn sigma_leaf(&self, i: usize) -> (&SigmaTrie, u32) {
        let run = self.pair.x().body()[i];
        let trie = self
            .forest
            .get(run.symbol)
            .expect("every run of X annotates the suffix after it");
        let w = self
            .forest
            .leaf_of(MetaSuffixId::x(i + 1))
            .expect("suffix after a run is annotated");
        (trie, w)
    }
}

/// ACS of X with respect to Y.
pub fn acs(x: &RleSeq, y: &RleSeq) -> Result<AcsResult> {
    AcsEngine::new(x, y)?.acs()
}

/// ACS of a sequence of decoded length `x` against itself: every position
/// matches to the end, so the sum is `x (x + 1) / 2`.
pub fn acs_self(x: u64) -> AcsResult {
    let x128 = x as u128;
    AcsResult {
        lsum: x128 * (x128 + 1) / 2,
        x,
    }
}

/// Symmetric ACS distance.
pub fn dist(x: &RleSeq, y: &RleSeq, log_base: LogBase) -> Result<DistResult> {
    for s in [x, y] {
        if s.text_length() < 2 {
            return Err(Error::SequenceTooShort {
                name: s.name().to_string(),
                length: s.text_length(),
            });
        }
    }
    let acs_xy = acs(x, y)?;
    let acs_yx = acs(y, x)?;
    if acs_xy.lsum == 0 || acs_yx.lsum == 0 {
        return Err(Error::NoCommonSubstring(
            x.name().to_string(),
            y.name().to_string(),
        ));
    }
    let acs_xx = acs_self(x.text_length());
    let acs_yy = acs_self(y.text_length());
    let lx = log_base.log(x.text_length() as f64);
    let ly = log_base.log(y.text_length() as f64);
    let cross = ly / acs_xy.value() + lx / acs_yx.value();
    let own = lx / acs_xx.value() + ly / acs_yy.value();
    Ok(DistResult {
        dist: 0.5 * cross - 0.5 * own,
        log_base,
        acs_xy,
        acs_yx,
        acs_xx,
        acs_yy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rle::{encode_bytes, Alphabet};

    fn seq(s: &str) -> RleSeq {
        encode_bytes(s.as_bytes(), s).unwrap()
    }

    fn runs(name: &str, r: &[(char, u64)]) -> RleSeq {
        RleSeq::from_runs(
            name,
            r.iter()
                .map(|&(c, n)| Run::new(Alphabet::symbol(c as u8), n)),
        )
        .unwrap()
        .0
    }

    #[test]
    fn micro_example() {
        let e = AcsEngine::new(&seq("aab"), &seq("ab")).unwrap();
        assert_eq!(e.run_sums().unwrap(), vec![3, 1]);
        assert_eq!(e.compute_l_per_position(100).unwrap(), vec![1, 2, 1]);
        let r = e.acs().unwrap();
        assert_eq!((r.lsum, r.x), (4, 3));
        assert_eq!(r.to_string(), "4/3");
        assert_eq!(
            acs(&seq("ab"), &seq("aab")).unwrap().ratio(),
            Ratio::new(3, 2)
        );
    }

    #[test]
    fn unary_closed_form() {
        let e = AcsEngine::new(&runs("x", &[('a', 9)]), &runs("y", &[('a', 3)])).unwrap();
        assert_eq!(e.acs().unwrap().lsum, 24);
        assert_eq!(e.acs().unwrap().ratio(), Ratio::new(8, 3));
        assert_eq!(
            e.compute_l_per_position(100).unwrap(),
            vec![3, 3, 3, 3, 3, 3, 3, 2, 1]
        );
    }

    #[test]
    fn absent_symbol_contributes_nothing() {
        let e = AcsEngine::new(&seq("zzab"), &seq("ab")).unwrap();
        assert_eq!(e.compute_a(0).unwrap(), 0);
        assert_eq!(&e.compute_l_per_position(100).unwrap()[..2], &[0, 0]);
        assert_eq!(acs(&seq("xy"), &seq("ab")).unwrap().lsum, 0);
    }

    #[test]
    fn self_match() {
        for s in ["a", "ab", "abracadabra", "aaabbbaaab"] {
            let x = seq(s);
            assert_eq!(acs(&x, &x).unwrap(), acs_self(x.text_length()));
        }
        assert_eq!(acs_self(3).ratio(), Ratio::new(2, 1));
        assert_eq!(acs_self(1).ratio(), Ratio::new(1, 1));
        assert_eq!(acs_self(2).ratio(), Ratio::new(3, 2));
    }

    #[test]
    fn validation_cap() {
        let e = AcsEngine::new(&runs("x", &[('a', 50)]), &seq("a")).unwrap();
        assert!(matches!(
            e.compute_l_per_position(10),
            Err(Error::ValidationCap {
                length: 50,
                cap: 10
            })
        ));
    }

    #[test]
    fn dist_example() {
        let d = dist(&seq("aab"), &seq("ab"), LogBase::E).unwrap();
        let expected = 0.5 * (2f64.ln() / (4.0 / 3.0) + 3f64.ln() / 1.5)
            - 0.5 * (3f64.ln() / 2.0 + 2f64.ln() / 1.5);
        assert!((d.dist - expected).abs() < 1e-15);
        assert!((d.dist - 0.120432).abs() < 1e-6);
        let back = dist(&seq("ab"), &seq("aab"), LogBase::E).unwrap();
        assert_eq!(d.dist, back.dist);
        let x = seq("abcabd");
        assert_eq!(dist(&x, &x, LogBase::Two).unwrap().dist, 0.0);
    }

    #[test]
    fn dist_errors() {
        assert!(matches!(
            dist(&seq("a"), &seq("ab"), LogBase::E),
            Err(Error::SequenceTooShort { .. })
        ));
        assert!(matches!(
            dist(&seq("ab"), &seq("cd"), LogBase::E),
            Err(Error::NoCommonSubstring(..))
        ));
    }

    #[test]
    fn log_base_parse() {
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::E);
        assert_eq!("2".parse::<LogBase>().unwrap(), LogBase::Two);
        assert_eq!("10".parse::<LogBase>().unwrap(), LogBase::Ten);
        assert!("3".parse::<LogBase>().is_err());
        assert!((LogBase::Ten.log(1000.0) - 3.0).abs() < 1e-12);
    }
}
