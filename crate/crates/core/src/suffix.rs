//! Decoded-order sorting of run-start suffixes and the compact trie over them.
//!
//! Each run is mapped to a token `(symbol, group, signed length, next symbol)`,
//! where `group` is 0 when the following symbol is smaller than the run symbol
//! and 1 otherwise, and the length is negated in group 1. For maximal runs this
//! makes a single token comparison agree with decoded comparison: when two runs
//! share a symbol but differ in length, the shorter one's follower decides the
//! order. Suffixes of the token string are then sorted by prefix doubling.

use std::cmp::Ordering;

use crate::rle::{RleSeq, Run, Sentinel, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeqTag {
    X,
    Y,
}

/// A run-start suffix: the decoded suffix starting at run `run` (0-based,
/// the sentinel run included) of sequence `seq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaSuffixId {
    pub seq: SeqTag,
    pub run: usize,
}

impl MetaSuffixId {
    pub fn x(run: usize) -> Self {
        MetaSuffixId {
            seq: SeqTag::X,
            run,
        }
    }

    pub fn y(run: usize) -> Self {
        MetaSuffixId {
            seq: SeqTag::Y,
            run,
        }
    }
}

/// The query sequence X and reference Y, terminated by distinct sentinels and
/// laid out back to back as one run string.
#[derive(Debug, Clone)]
pub struct PairText {
    x: RleSeq,
    y: RleSeq,
    runs: Vec<Run>,
    // prefix[k] = decoded length of runs[..k]
    prefix: Vec<u64>,
    y_offset: usize,
}

impl PairText {
    pub fn new(x: &RleSeq, y: &RleSeq) -> Self {
        let x = x.with_sentinel(Sentinel::First);
        let y = y.with_sentinel(Sentinel::Second);
        let runs: Vec<Run> = x.runs().iter().chain(y.runs()).copied().collect();
        let mut prefix = Vec::with_capacity(runs.len() + 1);
        let mut acc = 0u64;
        prefix.push(0);
        for r in &runs {
            acc += r.length;
            prefix.push(acc);
        }
        let y_offset = x.runs().len();
        PairText {
            x,
            y,
            runs,
            prefix,
            y_offset,
        }
    }

    pub fn x(&self) -> &RleSeq {
        &self.x
    }

    pub fn y(&self) -> &RleSeq {
        &self.y
    }

    /// Number of run-start suffixes, sentinels included.
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn seq(&self, tag: SeqTag) -> &RleSeq {
        match tag {
            SeqTag::X => &self.x,
            SeqTag::Y => &self.y,
        }
    }

    pub fn position(&self, id: MetaSuffixId) -> usize {
        match id.seq {
            SeqTag::X => id.run,
            SeqTag::Y => self.y_offset + id.run,
        }
    }

    pub fn id_at(&self, position: usize) -> MetaSuffixId {
        if position < self.y_offset {
            MetaSuffixId::x(position)
        } else {
            MetaSuffixId::y(position - self.y_offset)
        }
    }

    pub fn run_at(&self, position: usize) -> Run {
        self.runs[position]
    }

    /// Decoded length of the suffix, sentinel included.
    pub fn suffix_len(&self, id: MetaSuffixId) -> u64 {
        let start = self.position(id);
        let end = match id.seq {
            SeqTag::X => self.y_offset,
            SeqTag::Y => self.runs.len(),
        };
        self.prefix[end] - self.prefix[start]
    }

    /// The run preceding the suffix, if any: its `char` and `freq`.
    pub fn preceding_run(&self, id: MetaSuffixId) -> Option<Run> {
        (id.run > 0).then(|| self.seq(id.seq).runs()[id.run - 1])
    }
}

/// Lexicographic comparison of two decoded run-start suffixes.
pub fn decoded_compare(pair: &PairText, a: MetaSuffixId, b: MetaSuffixId) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (mut i, mut j) = (pair.position(a), pair.position(b));
    loop {
        let (ra, rb) = (pair.runs[i], pair.runs[j]);
        if ra.symbol != rb.symbol {
            return ra.symbol.cmp(&rb.symbol);
        }
        if ra.length != rb.length {
            // Sentinels are unique, so equal symbols here are real runs and
            // both have a follower.
            let c = ra.symbol;
            return if ra.length < rb.length {
                pair.runs[i + 1].symbol.cmp(&c)
            } else {
                c.cmp(&pair.runs[j + 1].symbol)
            };
        }
        i += 1;
        j += 1;
    }
}

/// Decoded longest common prefix of two run-start suffixes.
pub fn decoded_lcp(pair: &PairText, a: MetaSuffixId, b: MetaSuffixId) -> u64 {
    if a == b {
        return pair.suffix_len(a);
    }
    let (mut i, mut j) = (pair.position(a), pair.position(b));
    let mut total = 0;
    loop {
        let (ra, rb) = (pair.runs[i], pair.runs[j]);
        if ra != rb {
            if ra.symbol == rb.symbol {
                total += ra.length.min(rb.length);
            }
            return total;
        }
        total += ra.length;
        i += 1;
        j += 1;
    }
}

/// Run-start suffixes in decoded lexicographic order with adjacent decoded LCPs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixOrder {
    pub order: Vec<MetaSuffixId>,
    /// `dlcp[k]` is the decoded LCP of `order[k]` and `order[k + 1]`.
    pub dlcp: Vec<u64>,
}

impl SuffixOrder {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Tab-separated dump: rank, sequence, run, dlcp to the next suffix.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("rank\tseq\trun\tdlcp\n");
        for (k, id) in self.order.iter().enumerate() {
            let lcp = self
                .dlcp
                .get(k)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!("{k}\t{:?}\t{}\t{lcp}\n", id.seq, id.run));
        }
        out
    }
}

fn token_key(runs: &[Run], k: usize) -> (Symbol, u8, i128, Symbol) {
    let run = runs[k];
    let next = if run.symbol.is_sentinel() {
        Symbol(0)
    } else {
        runs[k + 1].symbol
    };
    if next < run.symbol {
        (run.symbol, 0, run.length as i128, next)
    } else {
        (run.symbol, 1, -(run.length as i128), next)
    }
}

/// Dense ranks of the run tokens.
fn rank_tokens(runs: &[Run]) -> Vec<u32> {
    let keys: Vec<_> = (0..runs.len()).map(|k| token_key(runs, k)).collect();
    let mut idx: Vec<u32> = (0..runs.len() as u32).collect();
    idx.sort_unstable_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]));
    let mut rank = vec![0u32; runs.len()];
    let mut r = 0u32;
    for w in 0..idx.len() {
        if w > 0 && keys[idx[w] as usize] != keys[idx[w - 1] as usize] {
            r += 1;
        }
        rank[idx[w] as usize] = r;
    }
    rank
}

/// Suffix array of an integer string by prefix doubling with counting sorts.
/// `text` holds dense ranks in `0..n`.
fn prefix_doubling(text: &[u32]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let mut rank: Vec<u32> = text.to_vec();
    let mut classes = *rank.iter().max().unwrap() as usize + 1;
    let mut sa: Vec<u32> = vec![0; n];
    let mut count = vec![0usize; n.max(classes) + 1];

    // initial order by first token
    for &r in &rank {
        count[r as usize + 1] += 1;
    }
    for c in 1..=classes {
        count[c] += count[c - 1];
    }
    for (i, &r) in rank.iter().enumerate() {
        sa[count[r as usize]] = i as u32;
        count[r as usize] += 1;
    }

    let mut by_second: Vec<u32> = vec![0; n];
    let mut next_rank: Vec<u32> = vec![0; n];
    let mut k = 1usize;
    while classes < n {
        // order by second key: suffixes shorter than k first
        let mut w = 0;
        for i in n.saturating_sub(k)..n {
            by_second[w] = i as u32;
            w += 1;
        }
        for &s in &sa {
            if s as usize >= k {
                by_second[w] = s - k as u32;
                w += 1;
            }
        }
        // stable counting sort by first key
        count[..=classes].iter_mut().for_each(|c| *c = 0);
        for &r in &rank {
            count[r as usize + 1] += 1;
        }
        for c in 1..=classes {
            count[c] += count[c - 1];
        }
        for &s in &by_second {
            let r = rank[s as usize] as usize;
            sa[count[r]] = s;
            count[r] += 1;
        }
        let second = |i: usize| -> i64 {
            if i + k < n {
                rank[i + k] as i64
            } else {
                -1
            }
        };
        next_rank[sa[0] as usize] = 0;
        let mut r = 0u32;
        for w in 1..n {
            let (p, c) = (sa[w - 1] as usize, sa[w] as usize);
            if rank[p] != rank[c] || second(p) != second(c) {
                r += 1;
            }
            next_rank[c] = r;
        }
        std::mem::swap(&mut rank, &mut next_rank);
        classes = r as usize + 1;
        k *= 2;
    }
    sa
}

/// Sorts all run-start suffixes of the pair into decoded order and computes
/// decoded LCPs between neighbours.
pub fn build_suffix_order(pair: &PairText) -> SuffixOrder {
    let n = pair.len();
    let tokens = rank_tokens(&pair.runs);
    let sa = prefix_doubling(&tokens);

    let mut inverse = vec![0u32; n];
    for (k, &p) in sa.iter().enumerate() {
        inverse[p as usize] = k as u32;
    }

    // Kasai over token equality, converted to decoded units as we go.
    let mut dlcp = vec![0u64; n.saturating_sub(1)];
    let mut h = 0usize;
    for i in 0..n {
        let r = inverse[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && tokens[i + h] == tokens[j + h] {
            h += 1;
        }
        let full = pair.prefix[i + h] - pair.prefix[i];
        let (ri, rj) = (pair.runs[i + h], pair.runs[j + h]);
        let boundary = if ri.symbol == rj.symbol {
            ri.length.min(rj.length)
        } else {
            0
        };
        dlcp[r - 1] = full + boundary;
        h = h.saturating_sub(1);
    }

    SuffixOrder {
        order: sa.iter().map(|&p| pair.id_at(p as usize)).collect(),
        dlcp,
    }
}

pub(crate) const NONE: u32 = u32::MAX;

/// Arena-allocated compact trie over sorted leaves.
#[derive(Debug, Clone)]
pub struct CompactTrie {
    pub parent: Vec<u32>,
    /// Nodes on the path from the root, the root counting as 1.
    pub node_depth: Vec<u32>,
    pub str_depth: Vec<u64>,
    /// Node id of the k-th leaf in sorted order.
    pub leaves: Vec<u32>,
    /// For leaf nodes, their rank in `leaves`; `NONE` for internal nodes.
    pub leaf_rank: Vec<u32>,
    // children of v are child_list[child_start[v]..child_start[v + 1]], left to right
    child_start: Vec<u32>,
    child_list: Vec<u32>,
}

impl CompactTrie {
    pub const ROOT: u32 = 0;

    /// Stack construction from leaf string depths and the LCPs between
    /// consecutive leaves. Requires every `lcps[k]` to be smaller than both
    /// adjacent leaf depths.
    pub fn from_sorted(leaf_depths: &[u64], lcps: &[u64]) -> Self {
        debug_assert_eq!(lcps.len() + 1, leaf_depths.len().max(1));
        let cap = 2 * leaf_depths.len() + 1;
        let mut t = CompactTrie {
            parent: Vec::with_capacity(cap),
            node_depth: Vec::new(),
            str_depth: Vec::with_capacity(cap),
            leaves: Vec::with_capacity(leaf_depths.len()),
            leaf_rank: Vec::with_capacity(cap),
            child_start: Vec::new(),
            child_list: Vec::new(),
        };
        t.push_node(NONE, 0, NONE);
        let mut stack: Vec<u32> = vec![Self::ROOT];
        for (k, &depth) in leaf_depths.iter().enumerate() {
            if k > 0 {
                let l = lcps[k - 1];
                let mut last = NONE;
                while t.str_depth[*stack.last().unwrap() as usize] > l {
                    last = stack.pop().unwrap();
                }
                let top = *stack.last().unwrap();
                if t.str_depth[top as usize] < l {
                    debug_assert_ne!(last, NONE);
                    let mid = t.push_node(top, l, NONE);
                    t.parent[last as usize] = mid;
                    stack.push(mid);
                }
            }
            let top = *stack.last().unwrap();
            let leaf = t.push_node(top, depth, k as u32);
            t.leaves.push(leaf);
            stack.push(leaf);
        }
        t.link_children();
        t.assign_node_depths();
        t
    }

    fn push_node(&mut self, parent: u32, str_depth: u64, leaf_rank: u32) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(parent);
        self.str_depth.push(str_depth);
        self.leaf_rank.push(leaf_rank);
        id
    }

    // Siblings are created in left-to-right order, so bucketing node ids by
    // parent in increasing id order yields ordered child lists.
    fn link_children(&mut self) {
        let n = self.parent.len();
        let mut start = vec![0u32; n + 1];
        for &p in &self.parent {
            if p != NONE {
                start[p as usize + 1] += 1;
            }
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut list = vec![0u32; n.saturating_sub(1)];
        for (v, &p) in self.parent.iter().enumerate() {
            if p != NONE {
                list[fill[p as usize] as usize] = v as u32;
                fill[p as usize] += 1;
            }
        }
        self.child_start = start;
        self.child_list = list;
    }

    fn assign_node_depths(&mut self) {
        let mut depth = vec![0u32; self.parent.len()];
        for v in self.preorder() {
            let p = self.parent[v as usize];
            depth[v as usize] = if p == NONE { 1 } else { depth[p as usize] + 1 };
        }
        self.node_depth = depth;
    }

    pub fn children(&self, v: u32) -> &[u32] {
        let (a, b) = (
            self.child_start[v as usize] as usize,
            self.child_start[v as usize + 1] as usize,
        );
        &self.child_list[a..b]
    }

    /// Node ids with every parent before its children, left to right.
    pub fn preorder(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.parent.len());
        let mut stack = vec![Self::ROOT];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn is_leaf(&self, v: u32) -> bool {
        self.leaf_rank[v as usize] != NONE
    }

    pub fn parent_of(&self, v: u32) -> Option<u32> {
        let p = self.parent[v as usize];
        (p != NONE).then_some(p)
    }

    /// Leaf ranks covered by the subtree of `v`, as a half-open range.
    pub fn leaf_interval(&self, v: u32) -> (usize, usize) {
        let mut lo = v;
        while !self.is_leaf(lo) {
            lo = self.children(lo)[0];
        }
        let mut hi = v;
        while !self.is_leaf(hi) {
            hi = *self.children(hi).last().unwrap();
        }
        (
            self.leaf_rank[lo as usize] as usize,
            self.leaf_rank[hi as usize] as usize + 1,
        )
    }
}

/// Leaf annotation: the leaf's sequence and the run right before its suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrieLeaf {
    pub suffix: MetaSuffixId,
    pub annotation: Option<Run>,
}

/// The compact trie T over all run-start suffixes of a pair.
#[derive(Debug, Clone)]
pub struct Trie {
    pub tree: CompactTrie,
    pub leaves: Vec<TrieLeaf>,
    pub order: SuffixOrder,
}

impl Trie {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn internal_count(&self) -> usize {
        self.tree.node_count() - self.leaves.len()
    }
}

pub fn build_trie(pair: &PairText, order: SuffixOrder) -> Trie {
    let depths: Vec<u64> = order.order.iter().map(|&id| pair.suffix_len(id)).collect();
    let tree = CompactTrie::from_sorted(&depths, &order.dlcp);
    let leaves = order
        .order
        .iter()
        .map(|&suffix| TrieLeaf {
            suffix,
            annotation: pair.preceding_run(suffix),
        })
        .collect();
    Trie {
        tree,
        leaves,
        order,
    }
}

/// Longest run of each symbol in the reference sequence.
#[derive(Debug, Clone, Default)]
pub struct MaxRunTable {
    max: Vec<u64>,
}

impl MaxRunTable {
    pub fn get(&self, symbol: Symbol) -> u64 {
        self.max.get(symbol.0 as usize).copied().unwrap_or(0)
    }
}

pub fn build_maxrun(y: &RleSeq) -> MaxRunTable {
    let mut max = Vec::new();
    for run in y.body() {
        let s = run.symbol.0 as usize;
        if s >= max.len() {
            max.resize(s + 1, 0);
        }
        max[s] = max[s].max(run.length);
    }
    MaxRunTable { max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rle::{encode_bytes, Alphabet};

    fn pair(x: &str, y: &str) -> PairText {
        PairText::new(
            &encode_bytes(x.as_bytes(), "x").unwrap(),
            &encode_bytes(y.as_bytes(), "y").unwrap(),
        )
    }

    fn sym(c: char) -> Symbol {
        Alphabet::symbol(c as u8)
    }

    #[test]
    fn compare_examples() {
        let p = pair("aab", "ab");
        // aab⊥1 vs ab⊥2
        assert_eq!(
            decoded_compare(&p, MetaSuffixId::x(0), MetaSuffixId::y(0)),
            Ordering::Less
        );
        // b⊥1 vs b⊥2
        assert_eq!(
            decoded_compare(&p, MetaSuffixId::x(1), MetaSuffixId::y(1)),
            Ordering::Less
        );
        assert_eq!(
            decoded_compare(&p, MetaSuffixId::y(1), MetaSuffixId::x(1)),
            Ordering::Greater
        );
        // "aA.." vs "aaA.." with A < a
        let p = pair("aAb", "aaAb");
        assert_eq!(
            decoded_compare(&p, MetaSuffixId::x(0), MetaSuffixId::y(0)),
            Ordering::Less
        );
    }

    #[test]
    fn lcp_examples() {
        let p = pair("aab", "ab");
        assert_eq!(decoded_lcp(&p, MetaSuffixId::x(0), MetaSuffixId::y(0)), 1);
        let p = pair("aaa", "aaaaa");
        assert_eq!(decoded_lcp(&p, MetaSuffixId::x(0), MetaSuffixId::y(0)), 3);
        let p = pair("aab", "aab");
        assert_eq!(decoded_lcp(&p, MetaSuffixId::x(0), MetaSuffixId::y(0)), 3);
        assert_eq!(decoded_lcp(&p, MetaSuffixId::x(0), MetaSuffixId::x(0)), 4);
    }

    #[test]
    fn order_examples() {
        let p = pair("aab", "ab");
        let so = build_suffix_order(&p);
        use MetaSuffixId as M;
        assert_eq!(
            so.order,
            vec![M::x(2), M::y(2), M::x(0), M::y(0), M::x(1), M::y(1)]
        );
        assert_eq!(so.dlcp, vec![0, 0, 1, 0, 1]);

        let so = build_suffix_order(&pair("a", "a"));
        assert_eq!(so.order, vec![M::x(1), M::y(1), M::x(0), M::y(0)]);
        assert_eq!(so.dlcp, vec![0, 0, 1]);

        // run starts only: aaaa contributes aaaa⊥ and ⊥
        let so = build_suffix_order(&pair("aaaa", "b"));
        assert_eq!(so.len(), 4);
    }

    #[test]
    fn prefix_doubling_matches_naive() {
        let text = [2u32, 1, 2, 1, 2, 1, 0];
        let sa = prefix_doubling(&text);
        let mut naive: Vec<u32> = (0..text.len() as u32).collect();
        naive.sort_by(|&a, &b| text[a as usize..].cmp(&text[b as usize..]));
        assert_eq!(sa, naive);
    }

    #[test]
    fn trie_example() {
        let p = pair("aab", "ab");
        let trie = build_trie(&p, build_suffix_order(&p));
        let t = &trie.tree;
        assert_eq!(t.str_depth[CompactTrie::ROOT as usize], 0);
        assert_eq!(t.node_depth[CompactTrie::ROOT as usize], 1);
        assert_eq!(trie.leaf_count(), 6);
        // leaves 4, 5 are b⊥1, b⊥2
        let (l4, l5) = (t.leaves[4], t.leaves[5]);
        let parent = t.parent[l4 as usize];
        assert_eq!(parent, t.parent[l5 as usize]);
        assert_eq!(t.str_depth[parent as usize], 1);
        assert_eq!(trie.leaves[4].annotation, Some(Run::new(sym('a'), 2)));
        assert_eq!(trie.leaves[5].annotation, Some(Run::new(sym('a'), 1)));
        // first suffixes of each sequence carry no annotation
        assert_eq!(trie.leaves[2].annotation, None);
        assert_eq!(trie.leaves[3].annotation, None);
        assert_eq!(t.leaf_interval(parent), (4, 6));
        assert_eq!(t.leaf_interval(CompactTrie::ROOT), (0, 6));
    }

    #[test]
    fn maxrun_examples() {
        let y = encode_bytes(b"ab", "y").unwrap();
        let m = build_maxrun(&y);
        assert_eq!((m.get(sym('a')), m.get(sym('b'))), (1, 1));
        let y = encode_bytes(b"aabbba", "y").unwrap();
        let m = build_maxrun(&y);
        assert_eq!((m.get(sym('a')), m.get(sym('b'))), (2, 3));
        assert_eq!(m.get(sym('z')), 0);
        assert_eq!(m.get(Symbol(0)), 0);
    }

    #[test]
    fn tsv_dump() {
        let p = pair("ab", "b");
        let tsv = build_suffix_order(&p).to_tsv();
        assert!(tsv.starts_with("rank\tseq\trun\tdlcp\n0\tX\t2\t0\n"));
        assert_eq!(tsv.lines().count(), 6);
    }
}
