//! Timing harness for the compressed-size scaling experiments.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::engine::{AcsEngine, AcsResult};
use crate::error::Result;
use crate::rle::{Alphabet, RleSeq, Run};

/// A pair with `runs` runs per sequence over a 4-letter alphabet. Base run
/// lengths are drawn from 1..=4 and multiplied by `scale`, so changing the
/// scale changes the decoded length but not the suffix order. Y copies X with
/// about one run in ten perturbed.
pub fn scaling_pair(runs: usize, scale: u64, seed: u64) -> (RleSeq, RleSeq) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut xs: Vec<(u8, u64)> = Vec::with_capacity(runs);
    for k in 0..runs {
        let mut c = rng.gen_range(0..4u8);
        if k > 0 && c == xs[k - 1].0 {
            c = (c + rng.gen_range(1..4)) % 4;
        }
        xs.push((c, rng.gen_range(1..=4)));
    }
    let mut ys = xs.clone();
    for run in ys.iter_mut() {
        if rng.gen_range(0..10) == 0 {
            run.1 = rng.gen_range(1..=4);
        }
    }
    // rotate Y so matches do not line up position by position
    ys.rotate_left(runs / 3);
    let build = |name: &str, v: &[(u8, u64)]| {
        RleSeq::from_runs(
            name,
            v.iter()
                .map(|&(c, n)| Run::new(Alphabet::symbol(b'a' + c), n * scale)),
        )
        .expect("scaled runs stay below the length cap")
        .0
    };
    (build("x", &xs), build("y", &ys))
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub label: String,
    /// Total runs N = x′ + y′.
    pub runs: usize,
    /// Total decoded length x + y.
    pub decoded: u64,
    pub build: Duration,
    pub query: Duration,
    pub nodes: usize,
    pub acs: AcsResult,
}

impl BenchRow {
    pub fn total(&self) -> Duration {
        self.build + self.query
    }
}

/// Best-of-`reps` timing of index construction and the ACS sum.
pub fn measure(label: impl Into<String>, x: &RleSeq, y: &RleSeq, reps: usize) -> Result<BenchRow> {
    let mut best: Option<BenchRow> = None;
    for _ in 0..reps.max(1) {
        let t0 = Instant::now();
        let engine = AcsEngine::new(x, y)?;
        let t1 = Instant::now();
        let acs = engine.acs()?;
        let t2 = Instant::now();
        let row = BenchRow {
            label: String::new(),
            runs: x.run_count() + y.run_count(),
            decoded: x.text_length() + y.text_length(),
            build: t1 - t0,
            query: t2 - t1,
            nodes: engine.node_count(),
            acs,
        };
        if best.as_ref().is_none_or(|b| row.total() < b.total()) {
            best = Some(row);
        }
    }
    let mut row = best.unwrap();
    row.label = label.into();
    Ok(row)
}

/// Runs-doubling sweep: one row per entry of `sizes` (total runs N).
pub fn doubling_sweep(sizes: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    sizes
        .iter()
        .map(|&n| {
            let (x, y) = scaling_pair(n / 2, 1, seed);
            measure(format!("N={n}"), &x, &y, reps)
        })
        .collect()
}

/// Fixed N, every run length multiplied by each entry of `scales`.
pub fn decoupling_sweep(n: usize, scales: &[u64], reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    scales
        .iter()
        .map(|&s| {
            let (x, y) = scaling_pair(n / 2, s, seed);
            measure(format!("scale={s}"), &x, &y, reps)
        })
        .collect()
}

/// The pair `(a, x_len)` against `(a, y_len)`.
pub fn unary_pair(x_len: u64, y_len: u64) -> (RleSeq, RleSeq) {
    let a = Alphabet::symbol(b'a');
    (
        RleSeq::from_runs("x", [Run::new(a, x_len)]).unwrap().0,
        RleSeq::from_runs("y", [Run::new(a, y_len)]).unwrap().0,
    )
}

/// `m (x - m) + m (m + 1) / 2` for `x >= m`, else `x (x + 1) / 2`.
pub fn unary_closed_form(x: u64, m: u64) -> u128 {
    let (x, m) = (x as u128, m as u128);
    if x >= m {
        m * (x - m) + m * (m + 1) / 2
    } else {
        x * (x + 1) / 2
    }
}

pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = String::from("label\tN\tdecoded\tbuild_ms\tquery_ms\ttotal_ms\tratio\tnodes\n");
    let mut prev: Option<Duration> = None;
    for r in rows {
        let ratio = prev
            .map(|p| format!("{:.2}", r.total().as_secs_f64() / p.as_secs_f64()))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{}\t{}",
            r.label,
            r.runs,
            r.decoded,
            r.build.as_secs_f64() * 1e3,
            r.query.as_secs_f64() * 1e3,
            r.total().as_secs_f64() * 1e3,
            ratio,
            r.nodes
        );
        prev = Some(r.total());
    }
    out
}
