//! Per-symbol compact tries.
//!
//! `T_σ` holds the leaves of T whose preceding run has symbol σ, in T's leaf
//! order. Each node stores `freq` (the longest preceding σ-run among the
//! reference-sequence leaves below it, 0 if there are none) and `weight`, the
//! root-path sum of `freq(child) * (strDepth(child) - strDepth(parent))`.
//! Since `freq` never increases going down, the lowest ancestor with
//! `freq >= h` is found by a binary-lifting search.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rle::Symbol;
use crate::suffix::{CompactTrie, MetaSuffixId, SeqTag, Trie, NONE};

/// How `freq` aggregates over the reference leaves of a subtree. Only `Max` is
/// correct; `Min` exists so the verification harness can prove it catches a
/// broken aggregation.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FreqRule {
    #[default]
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaLeaf {
    pub suffix: MetaSuffixId,
    /// Length of the σ-run right before the suffix.
    pub run_length: u64,
    /// Rank of the corresponding leaf in T.
    pub trie_rank: usize,
}

#[derive(Debug, Clone)]
pub struct SigmaTrie {
    pub symbol: Symbol,
    pub tree: CompactTrie,
    pub leaves: Vec<SigmaLeaf>,
    pub freq: Vec<u64>,
    pub weight: Vec<u128>,
    // up[v * levels + k]: ancestor 2^k levels above v, NONE past the root
    up: Vec<u32>,
    levels: usize,
}

impl SigmaTrie {
    fn new(symbol: Symbol, leaves: Vec<SigmaLeaf>, depths: &[u64], lcps: &[u64]) -> Self {
        let tree = CompactTrie::from_sorted(depths, lcps);
        let n = tree.node_count();
        SigmaTrie {
            symbol,
            tree,
            leaves,
            freq: vec![0; n],
            weight: vec![0; n],
            up: Vec::new(),
            levels: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.tree.node_count()
    }

    /// Computes `freq` bottom-up, `weight` top-down, and the ancestor index.
    pub fn annotate(&mut self, rule: FreqRule) -> Result<()> {
        let n = self.tree.node_count();
        let preorder = self.tree.preorder();

        let mut freq = vec![0u64; n];
        for &v in preorder.iter().rev() {
            let v = v as usize;
            let rank = self.tree.leaf_rank[v];
            if rank != NONE {
                let leaf = &self.leaves[rank as usize];
                if leaf.suffix.seq == SeqTag::Y {
                    freq[v] = leaf.run_length;
                }
                continue;
            }
            freq[v] = match rule {
                FreqRule::Max => self
                    .tree
                    .children(v as u32)
                    .iter()
                    .map(|&c| freq[c as usize])
                    .max()
                    .unwrap_or(0),
                FreqRule::Min => self
                    .tree
                    .children(v as u32)
                    .iter()
                    .map(|&c| freq[c as usize])
                    .filter(|&f| f > 0)
                    .min()
                    .unwrap_or(0),
            };
        }

        let mut weight = vec![0u128; n];
        for &v in &preorder {
            let v = v as usize;
            let p = self.tree.parent[v];
            if p == NONE {
                continue;
            }
            let span = self.tree.str_depth[v] - self.tree.str_depth[p as usize];
            weight[v] = (freq[v] as u128)
                .checked_mul(span as u128)
                .and_then(|inc| inc.checked_add(weight[p as usize]))
                .ok_or(Error::WeightOverflow)?;
        }

        let max_depth = self.tree.node_depth.iter().copied().max().unwrap_or(1);
        let levels = (u32::BITS - max_depth.leading_zeros()).max(1) as usize;
        // preorder puts every ancestor's row before its descendants' rows
        let mut up = vec![NONE; n * levels];
        for &v in &preorder {
            let v = v as usize;
            let mut a = self.tree.parent[v];
            for k in 0..levels {
                up[v * levels + k] = a;
                if a == NONE {
                    break;
                }
                a = up[a as usize * levels + k];
            }
        }

        self.freq = freq;
        self.weight = weight;
        self.up = up;
        self.levels = levels;
        Ok(())
    }

    /// Deepest ancestor of `node` (the node itself and the root included) with
    /// `freq >= h`.
    pub fn lowest_anc_freq_at_least(&self, node: u32, h: u64) -> Option<u32> {
        if self.freq[node as usize] >= h {
            return Some(node);
        }
        // climb while the jump target still fails the predicate
        let mut cur = node;
        for k in (0..self.levels).rev() {
            let a = self.up[cur as usize * self.levels + k];
            if a != NONE && self.freq[a as usize] < h {
                cur = a;
            }
        }
        let p = self.tree.parent[cur as usize];
        (p != NONE).then_some(p)
    }

    /// Deepest ancestor with a reference-sequence leaf below it.
    pub fn lowest_anc_with_y(&self, node: u32) -> Option<u32> {
        self.lowest_anc_freq_at_least(node, 1)
    }

    /// Ancestor of `node` whose node depth is `depth` (root = 1).
    pub fn ancestor_at_depth(&self, node: u32, depth: u32) -> Option<u32> {
        let have = self.tree.node_depth[node as usize];
        if depth == 0 || depth > have {
            return None;
        }
        let mut diff = have - depth;
        let mut cur = node;
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                cur = self.up[cur as usize * self.levels + k];
            }
            diff >>= 1;
            k += 1;
        }
        Some(cur)
    }

    pub fn str_depth(&self, node: u32) -> u64 {
        self.tree.str_depth[node as usize]
    }

    pub fn root_freq(&self) -> u64 {
        self.freq[CompactTrie::ROOT as usize]
    }

    /// Tab-separated dump: node, parent, strDepth, nodeDepth, freq, weight.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("node\tparent\tstr_depth\tnode_depth\tfreq\tweight\n");
        for v in 0..self.node_count() {
            let p = self.tree.parent[v];
            let parent = if p == NONE {
                "-".to_string()
            } else {
                p.to_string()
            };
            let _ = writeln!(
                out,
                "{v}\t{parent}\t{}\t{}\t{}\t{}",
                self.tree.str_depth[v], self.tree.node_depth[v], self.freq[v], self.weight[v]
            );
        }
        out
    }
}

/// All per-symbol tries of a pair, with a lookup from each annotated suffix to
/// its leaf node.
#[derive(Debug, Clone)]
pub struct SigmaForest {
    pub tries: BTreeMap<Symbol, SigmaTrie>,
    // x_leaf[r] = node of suffix X run r within T_{char}; r = 0 is unannotated
    x_leaf: Vec<u32>,
    y_leaf: Vec<u32>,
}

impl SigmaForest {
    pub fn get(&self, symbol: Symbol) -> Option<&SigmaTrie> {
        self.tries.get(&symbol)
    }

    /// Leaf node of an annotated suffix inside its σ-trie.
    pub fn leaf_of(&self, suffix: MetaSuffixId) -> Option<u32> {
        let table = match suffix.seq {
            SeqTag::X => &self.x_leaf,
            SeqTag::Y => &self.y_leaf,
        };
        table.get(suffix.run).copied().filter(|&v| v != NONE)
    }

    pub fn leaf_total(&self) -> usize {
        self.tries.values().map(|t| t.leaves.len()).sum()
    }

    pub fn node_total(&self) -> usize {
        self.tries.values().map(|t| t.node_count()).sum()
    }
}

/// Splits T into one compact trie per annotation symbol. LCPs between
/// consecutive σ-leaves are range minima of T's dlcp, answered from a
/// monotone stack.
pub fn extract_sigma_tries(trie: &Trie) -> SigmaForest {
    struct Pending {
        leaves: Vec<SigmaLeaf>,
        depths: Vec<u64>,
        lcps: Vec<u64>,
        last_rank: usize,
    }

    let dlcp = &trie.order.dlcp;
    let mut pending: Vec<Option<Pending>> = Vec::new();
    // (index into dlcp, value), values strictly increasing bottom to top
    let mut stack: Vec<(usize, u64)> = Vec::new();

    for (k, leaf) in trie.leaves.iter().enumerate() {
        if k > 0 {
            let v = dlcp[k - 1];
            while stack.last().is_some_and(|&(_, top)| top >= v) {
                stack.pop();
            }
            stack.push((k - 1, v));
        }
        let Some(run) = leaf.annotation else { continue };
        let depth = trie.tree.str_depth[trie.tree.leaves[k] as usize];
        let sl = SigmaLeaf {
            suffix: leaf.suffix,
            run_length: run.length,
            trie_rank: k,
        };
        let slot = run.symbol.0 as usize;
        if slot >= pending.len() {
            pending.resize_with(slot + 1, || None);
        }
        match &mut pending[slot] {
            Some(p) => {
                // min of dlcp[p.last_rank .. k]
                let at = stack.partition_point(|&(idx, _)| idx < p.last_rank);
                p.lcps.push(stack[at].1);
                p.leaves.push(sl);
                p.depths.push(depth);
                p.last_rank = k;
            }
            empty => {
                *empty = Some(Pending {
                    leaves: vec![sl],
                    depths: vec![depth],
                    lcps: Vec::new(),
                    last_rank: k,
                });
            }
        }
    }

    let max_run = |tag: SeqTag| {
        trie.leaves
            .iter()
            .filter(|l| l.suffix.seq == tag)
            .map(|l| l.suffix.run + 1)
            .max()
            .unwrap_or(0)
    };
    let mut x_leaf = vec![NONE; max_run(SeqTag::X)];
    let mut y_leaf = vec![NONE; max_run(SeqTag::Y)];
    let mut tries = BTreeMap::new();
    for (slot, p) in pending.into_iter().enumerate() {
        let Some(p) = p else { continue };
        let symbol = Symbol(slot as u32);
        let t = SigmaTrie::new(symbol, p.leaves, &p.depths, &p.lcps);
        for (rank, leaf) in t.leaves.iter().enumerate() {
            let node = t.tree.leaves[rank];
            match leaf.suffix.seq {
                SeqTag::X => x_leaf[leaf.suffix.run] = node,
                SeqTag::Y => y_leaf[leaf.suffix.run] = node,
            }
        }
        tries.insert(symbol, t);
    }
    SigmaForest {
        tries,
        x_leaf,
        y_leaf,
    }
}

/// Extracts and annotates every σ-trie.
pub fn build_sigma_forest(trie: &Trie, rule: FreqRule) -> Result<SigmaForest> {
    let mut forest = extract_sigma_tries(trie);
    for t in forest.tries.values_mut() {
        t.annotate(rule)?;
    }
    Ok(forest)
}
