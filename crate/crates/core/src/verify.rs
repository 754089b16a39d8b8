//! Seeded random corpus and the engine-versus-oracle checks run on it.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Geometric};

use crate::engine::{acs_self, dist, AcsEngine, EngineOptions, LogBase};
use crate::error::Result;
use crate::oracle::{brute_l, brute_suffix_sort, expand, OracleBudget};
use crate::rle::{Alphabet, RleSeq, Run};
use crate::sigma::SigmaTrie;
use crate::suffix::{CompactTrie, Trie};

pub const ALPHABET_SIZES: [usize; 3] = [2, 4, 20];
pub const RUN_MEANS: [f64; 3] = [1.5, 4.0, 32.0];

/// Random sequence of about `len` decoded symbols over the first `sigma`
/// lowercase letters, with run lengths `1 + Geometric(1 / mean)`.
pub fn random_rle(rng: &mut impl Rng, name: &str, len: u64, sigma: usize, mean_run: f64) -> RleSeq {
    let geo = Geometric::new(1.0 / mean_run).expect("mean run length >= 1");
    let mut runs = Vec::new();
    let mut left = len.max(1);
    let mut prev: Option<usize> = None;
    while left > 0 {
        let mut c = rng.gen_range(0..sigma);
        if sigma > 1 && Some(c) == prev {
            c = (c + rng.gen_range(1..sigma)) % sigma;
        }
        let n = (1 + geo.sample(rng)).min(left);
        runs.push(Run::new(Alphabet::symbol(b'a' + c as u8), n));
        left -= n;
        prev = Some(c);
    }
    RleSeq::from_runs(name, runs)
        .expect("generated runs are valid")
        .0
}

/// Y built from slices of X's runs with occasional edits, so the pair shares
/// long substrings.
fn related_rle(rng: &mut impl Rng, x: &RleSeq, len: u64, sigma: usize, mean_run: f64) -> RleSeq {
    let body = x.body();
    let mut runs: Vec<Run> = Vec::new();
    let mut total = 0u64;
    while total < len {
        if rng.gen_bool(0.2) {
            let len = rng.gen_range(1..=8);
            let filler = random_rle(rng, "f", len, sigma, mean_run);
            runs.extend_from_slice(filler.body());
        } else {
            let start = rng.gen_range(0..body.len());
            let end = (start + rng.gen_range(1..=8)).min(body.len());
            for r in &body[start..end] {
                let mut r = *r;
                if rng.gen_bool(0.15) {
                    r.length = (r.length as i64 + rng.gen_range(-2i64..=2)).max(1) as u64;
                }
                runs.push(r);
            }
        }
        total = runs.iter().map(|r| r.length).sum();
    }
    // trim to the requested length
    let mut excess = total - len;
    while excess > 0 {
        let last = runs.last_mut().unwrap();
        if last.length > excess {
            last.length -= excess;
            excess = 0;
        } else {
            excess -= last.length;
            runs.pop();
        }
    }
    RleSeq::from_runs("y", runs)
        .expect("generated runs are valid")
        .0
}

/// Parameters of one corpus entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialShape {
    pub sigma: usize,
    pub mean_run: f64,
    pub related: bool,
}

/// Deterministic list of `trials` random pairs with combined decoded length at
/// most `n_max`, cycling through all alphabet sizes and run-length means.
pub fn corpus(seed: u64, trials: usize, n_max: u64) -> Vec<(TrialShape, RleSeq, RleSeq)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n_max = n_max.max(2);
    (0..trials)
        .map(|t| {
            let shape = TrialShape {
                sigma: ALPHABET_SIZES[t % 3],
                mean_run: RUN_MEANS[(t / 3) % 3],
                related: (t / 9) % 2 == 1,
            };
            let n = rng.gen_range(2..=n_max);
            let xl = rng.gen_range(1..n);
            let x = random_rle(&mut rng, "x", xl, shape.sigma, shape.mean_run);
            let y = if shape.related {
                related_rle(&mut rng, &x, n - xl, shape.sigma, shape.mean_run)
            } else {
                random_rle(&mut rng, "y", n - xl, shape.sigma, shape.mean_run)
            };
            (shape, x, y)
        })
        .collect()
}

/// A failed check, with both inputs for reproduction.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub check: &'static str,
    pub detail: String,
    pub x: RleSeq,
    pub y: RleSeq,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check failed: {}: {}", self.check, self.detail)?;
        writeln!(f, "{}", self.x)?;
        write!(f, "{}", self.y)
    }
}

/// Structural invariants of T: leaf order and interval-minimum string depths.
pub fn check_trie(trie: &Trie) -> std::result::Result<(), String> {
    let t = &trie.tree;
    if t.leaves.len() != trie.order.order.len() {
        return Err("leaf count differs from suffix count".into());
    }
    if t.node_count() > 2 * t.leaves.len() {
        return Err(format!(
            "{} nodes for {} leaves",
            t.node_count(),
            t.leaves.len()
        ));
    }
    for v in 0..t.node_count() as u32 {
        if let Some(p) = t.parent_of(v) {
            if t.str_depth[p as usize] >= t.str_depth[v as usize] {
                return Err(format!("strDepth not increasing into node {v}"));
            }
        }
        if t.is_leaf(v) {
            continue;
        }
        let (lo, hi) = t.leaf_interval(v);
        if hi - lo < 2 && v != CompactTrie::ROOT {
            return Err(format!("internal node {v} has a single leaf"));
        }
        let min = trie.order.dlcp[lo..hi - 1]
            .iter()
            .copied()
            .min()
            .unwrap_or(0);
        let expect = if v == CompactTrie::ROOT { 0 } else { min };
        if t.str_depth[v as usize] != expect {
            return Err(format!(
                "node {v}: strDepth {} but interval minimum {expect}",
                t.str_depth[v as usize]
            ));
        }
    }
    Ok(())
}

/// freq monotonicity, weight telescoping, and σ-trie string depths.
pub fn check_sigma(trie: &Trie, st: &SigmaTrie) -> std::result::Result<(), String> {
    let t = &st.tree;
    for v in 0..t.node_count() as u32 {
        let Some(p) = t.parent_of(v) else {
            if st.weight[v as usize] != 0 {
                return Err("root weight is not 0".into());
            }
            continue;
        };
        if st.freq[v as usize] > st.freq[p as usize] {
            return Err(format!("freq increases into node {v}"));
        }
        // weight as an explicit sum over the root path
        let mut sum: u128 = 0;
        let mut c = v;
        while let Some(q) = t.parent_of(c) {
            sum += st.freq[c as usize] as u128
                * (t.str_depth[c as usize] - t.str_depth[q as usize]) as u128;
            c = q;
        }
        if sum != st.weight[v as usize] {
            return Err(format!(
                "weight of node {v} is {} not {sum}",
                st.weight[v as usize]
            ));
        }
        if t.is_leaf(v) {
            continue;
        }
        let (lo, hi) = t.leaf_interval(v);
        let min = st.leaves[lo..hi]
            .windows(2)
            .map(|w| {
                trie.order.dlcp[w[0].trie_rank..w[1].trie_rank]
                    .iter()
                    .copied()
                    .min()
                    .unwrap()
            })
            .min()
            .unwrap_or(0);
        if t.str_depth[v as usize] != min {
            return Err(format!(
                "σ node {v}: strDepth {} but lcp {min}",
                t.str_depth[v as usize]
            ));
        }
    }
    Ok(())
}

/// Binary-lifting search against a walk up the parent chain, for every leaf
/// and every threshold that changes the answer.
pub fn check_search(st: &SigmaTrie) -> std::result::Result<(), String> {
    for &leaf in &st.tree.leaves {
        let mut thresholds: Vec<u64> = Vec::new();
        let mut c = Some(leaf);
        while let Some(v) = c {
            let f = st.freq[v as usize];
            thresholds.extend([f.max(1), f + 1]);
            c = st.tree.parent_of(v);
        }
        thresholds.sort_unstable();
        thresholds.dedup();
        for h in thresholds {
            let mut walk = Some(leaf);
            while let Some(v) = walk {
                if st.freq[v as usize] >= h {
                    break;
                }
                walk = st.tree.parent_of(v);
            }
            let got = st.lowest_anc_freq_at_least(leaf, h);
            if got != walk {
                return Err(format!(
                    "search from leaf {leaf}, h = {h}: {got:?} vs {walk:?}"
                ));
            }
        }
    }
    Ok(())
}

/// Runs every check on X against Y.
pub fn check_direction(
    x: &RleSeq,
    y: &RleSeq,
    budget: &OracleBudget,
    options: EngineOptions,
) -> Result<std::result::Result<(), (&'static str, String)>> {
    let engine = AcsEngine::with_options(x, y, options)?;
    let trie = engine.trie();

    let brute_order = brute_suffix_sort(x, y, budget)?;
    if trie.order != brute_order {
        return Ok(Err((
            "suffix order",
            "differs from the brute-force sort".into(),
        )));
    }
    if let Err(e) = check_trie(trie) {
        return Ok(Err(("trie structure", e)));
    }
    let annotated = trie
        .leaves
        .iter()
        .filter(|l| l.annotation.is_some())
        .count();
    if engine.forest().leaf_total() != annotated {
        return Ok(Err(("σ partition", "leaf totals differ".into())));
    }
    for st in engine.forest().tries.values() {
        if let Err(e) = check_sigma(trie, st) {
            return Ok(Err(("σ-trie structure", e)));
        }
        if let Err(e) = check_search(st) {
            return Ok(Err(("ancestor search", e)));
        }
    }

    let (xs, ys) = (expand(x, budget)?, expand(y, budget)?);
    let brute = brute_l(&xs, &ys, budget)?;
    let per_position = match engine.compute_l_per_position(budget.max_len) {
        Ok(l) => l,
        Err(e) => return Ok(Err(("per-position L", e.to_string()))),
    };
    if per_position != brute {
        let p = per_position.iter().zip(&brute).position(|(a, b)| a != b);
        return Ok(Err((
            "per-position L",
            format!("first difference at {p:?}"),
        )));
    }
    let sums = match engine.run_sums() {
        Ok(s) => s,
        Err(e) => return Ok(Err(("run sums", e.to_string()))),
    };
    let mut start = 0usize;
    for (i, run) in x.body().iter().enumerate() {
        let end = start + run.length as usize;
        let expect: u128 = brute[start..end].iter().map(|&v| v as u128).sum();
        if sums[i] != expect {
            return Ok(Err((
                "run sum",
                format!("run {i}: {} vs {expect}", sums[i]),
            )));
        }
        start = end;
    }
    let last = x.run_count() - 1;
    let closed = last_run_closed_form(x.body()[last], engine.maxrun().get(x.body()[last].symbol));
    if sums[last] != closed {
        return Ok(Err((
            "last-run closed form",
            format!("{} vs {closed}", sums[last]),
        )));
    }
    let lsum: u128 = brute.iter().map(|&v| v as u128).sum();
    let acs = engine.acs()?;
    if acs.lsum != lsum || acs.x != xs.len() as u64 {
        return Ok(Err(("ACS", format!("{acs} vs {lsum}/{}", xs.len()))));
    }
    Ok(Ok(()))
}

/// `f (f + 1) / 2` when the last run fits inside Y's longest run of its
/// symbol, `m (f - (m - 1) / 2)` otherwise.
pub fn last_run_closed_form(run: Run, m: u64) -> u128 {
    let (f, m) = (run.length as u128, m as u128);
    if f <= m {
        f * (f + 1) / 2
    } else {
        // m (f - (m - 1) / 2), kept integral
        m * (2 * f - m + 1) / 2
    }
}

/// Both directions plus the distance axioms.
pub fn check_pair(
    x: &RleSeq,
    y: &RleSeq,
    budget: &OracleBudget,
    options: EngineOptions,
) -> Result<Option<Mismatch>> {
    let fail = |check, detail| Mismatch {
        check,
        detail,
        x: x.clone(),
        y: y.clone(),
    };
    for (a, b) in [(x, y), (y, x)] {
        if let Err((check, detail)) = check_direction(a, b, budget, options)? {
            let detail = if std::ptr::eq(a, x) {
                detail
            } else {
                format!("{detail} (Y against X)")
            };
            return Ok(Some(fail(check, detail)));
        }
    }
    if x.text_length() >= 2 && y.text_length() >= 2 {
        for s in [x, y] {
            let d = dist(s, s, LogBase::E)?.dist;
            if d.abs() > 1e-12 {
                return Ok(Some(fail("Dist(X,X) = 0", format!("{d}"))));
            }
        }
        if let (Ok(dxy), Ok(dyx)) = (dist(x, y, LogBase::E), dist(y, x, LogBase::E)) {
            if (dxy.dist - dyx.dist).abs() > 1e-12 {
                return Ok(Some(fail(
                    "Dist symmetry",
                    format!("{} vs {}", dxy.dist, dyx.dist),
                )));
            }
            if dxy.acs_xx != acs_self(x.text_length()) {
                return Ok(Some(fail("self term", String::new())));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub trials: usize,
    pub passed: usize,
    pub first_failure: Option<Mismatch>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.first_failure.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_failure {
            None => write!(f, "{}/{} ok", self.passed, self.trials),
            Some(m) => write!(f, "{}/{} ok\n{m}", self.passed, self.trials),
        }
    }
}

/// Checks a fresh seeded corpus; stops at the first mismatch.
pub fn run_verification(
    seed: u64,
    trials: usize,
    n_max: u64,
    options: EngineOptions,
) -> Result<VerifyReport> {
    let budget = OracleBudget {
        max_len: n_max.max(2),
        max_product: n_max.max(2).pow(2),
    };
    let mut passed = 0;
    for (_, x, y) in corpus(seed, trials, n_max) {
        if let Some(m) = check_pair(&x, &y, &budget, options)? {
            return Ok(VerifyReport {
                trials,
                passed,
                first_failure: Some(m),
            });
        }
        passed += 1;
    }
    Ok(VerifyReport {
        trials,
        passed,
        first_failure: None,
    })
}
