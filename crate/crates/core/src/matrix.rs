//! Pairwise distance matrices and their PHYLIP / TSV renderings.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::engine::{dist, LogBase};
use crate::error::{Error, Result};
use crate::rle::RleSeq;

/// Symmetric matrix of distances in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Computes `dist` once per unordered pair on a pool of `threads` workers
/// (0 picks the rayon default).
pub fn distance_matrix(
    seqs: &[RleSeq],
    log_base: LogBase,
    threads: usize,
) -> Result<DistanceMatrix> {
    let mut seen = HashSet::new();
    for s in seqs {
        if !seen.insert(s.name()) {
            return Err(Error::DuplicateName(s.name().to_string()));
        }
    }
    let n = seqs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let compute = || -> Vec<Result<f64>> {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                dist(&seqs[i], &seqs[j], log_base)
                    .map(|d| d.dist)
                    .map_err(|e| {
                        Error::Pair(
                            seqs[i].name().to_string(),
                            seqs[j].name().to_string(),
                            Box::new(e),
                        )
                    })
            })
            .collect()
    };
    let results = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| std::io::Error::other(e.to_string()))?
        .install(compute);

    let mut values = vec![vec![0.0; n]; n];
    for (&(i, j), r) in pairs.iter().zip(results) {
        let d = r?;
        values[i][j] = d;
        values[j][i] = d;
    }
    Ok(DistanceMatrix {
        names: seqs.iter().map(|s| s.name().to_string()).collect(),
        values,
    })
}

impl DistanceMatrix {
    /// PHYLIP square format: a count line, then per row the name padded to 10
    /// characters followed by distances with 6 decimals. Longer names are an
    /// error unless `relaxed`, in which case they are written unpadded.
    pub fn to_phylip(&self, relaxed: bool) -> Result<String> {
        let mut out = format!("{}\n", self.names.len());
        for (name, row) in self.names.iter().zip(&self.values) {
            if name.chars().count() > 10 {
                if !relaxed {
                    return Err(Error::NameTooLong(name.clone()));
                }
                out.push_str(name);
            } else {
                let _ = write!(out, "{name:<10}");
            }
            for d in row {
                let _ = write!(out, " {d:.6}");
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            out.push('\t');
            out.push_str(name);
        }
        out.push('\n');
        for (name, row) in self.names.iter().zip(&self.values) {
            out.push_str(name);
            for d in row {
                let _ = write!(out, "\t{d:.6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Minimal reader for the square PHYLIP layout written above.
pub fn parse_phylip(text: &str) -> Result<DistanceMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let bad = |line: usize, message: &str| Error::Parse {
        line: line + 1,
        message: message.to_string(),
    };
    let (l0, first) = lines.next().ok_or_else(|| bad(0, "empty matrix"))?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| bad(l0, "first line must be the taxon count"))?;
    let mut names = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for (idx, line) in lines {
        let mut fields = line.split_whitespace();
        let name = fields.next().ok_or_else(|| bad(idx, "missing name"))?;
        let row: Vec<f64> = fields
            .map(|f| f.parse().map_err(|_| bad(idx, "invalid distance")))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(bad(idx, "row length differs from the taxon count"));
        }
        names.push(name.to_string());
        values.push(row);
    }
    if names.len() != n {
        return Err(bad(0, "row count differs from the taxon count"));
    }
    Ok(DistanceMatrix { names, values })
}
