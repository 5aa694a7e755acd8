//! Parameter sweeps: which spaces and distances to tabulate, and the
//! deterministic parallel driver that turns them into report rows.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundReport, ReportOptions};
use crate::error::{Error, Result};
use crate::graph::{Budgets, OrderPolicy};
use crate::space::{ParamsSpec, SrkParams};

/// Inclusive integer range written as `[lo, hi]`.
pub type Range = [usize; 2];

/// A family of spaces. Blocks are generated in canonical form: each block
/// has `n_i ≤ m_i` and the blocks are listed in non-increasing order, so
/// every space appears once up to block permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Pattern {
    Explicit(ParamsSpec),
    Ranges {
        q: Vec<u32>,
        t: Range,
        n: Range,
        m: Range,
        /// Skip spaces with more elements than this.
        #[serde(default)]
        max_space: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistanceSpec {
    /// `"all"`: every `d` from 1 to `Σ n_i + 1`.
    Keyword(String),
    List(Vec<usize>),
}

impl Default for DistanceSpec {
    fn default() -> Self {
        DistanceSpec::Keyword("all".into())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub patterns: Vec<Pattern>,
    #[serde(default)]
    pub d: DistanceSpec,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub order: OrderPolicy,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: SweepConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.budgets;
        if b.max_vertices == 0 || b.max_ball == 0 || b.max_nodes == 0 {
            return Err(Error::InvalidParams("budgets must be positive".into()));
        }
        if let DistanceSpec::Keyword(k) = &self.d {
            if k != "all" {
                return Err(Error::InvalidParams(format!("unknown distance keyword {k:?}; use \"all\" or a list")));
            }
        }
        for p in &self.patterns {
            if let Pattern::Ranges { q, t, n, m, .. } = p {
                if q.is_empty() {
                    return Err(Error::InvalidParams("a pattern needs at least one q".into()));
                }
                for (name, r) in [("t", t), ("n", n), ("m", m)] {
                    if r[0] == 0 || r[0] > r[1] {
                        return Err(Error::InvalidParams(format!("range {name} = {r:?} must satisfy 1 <= lo <= hi")));
                    }
                }
            }
        }
        Ok(())
    }

    /// All `(params, d)` rows in output order.
    pub fn instances(&self) -> Result<Vec<(SrkParams, usize)>> {
        let mut out = Vec::new();
        for p in &self.patterns {
            for params in expand_pattern(p)? {
                let ds: Vec<usize> = match &self.d {
                    DistanceSpec::Keyword(_) => (1..=params.max_weight() + 1).collect(),
                    DistanceSpec::List(list) => list.clone(),
                };
                out.extend(ds.into_iter().map(|d| (params.clone(), d)));
            }
        }
        Ok(out)
    }

    pub fn report_options(&self) -> ReportOptions {
        ReportOptions { budgets: self.budgets, order: self.order, eps: self.eps, compute_alpha: true }
    }
}

/// Canonical block lists with `t` blocks, shapes within the given ranges and
/// at most `max_entries` matrix entries in total.
fn canonical_blocks(t: Range, n: Range, m: Range, max_entries: usize) -> Vec<Vec<(usize, usize)>> {
    let mut shapes: Vec<(usize, usize)> = Vec::new();
    for ni in n[0]..=n[1] {
        for mi in m[0].max(ni)..=m[1] {
            shapes.push((ni, mi));
        }
    }
    shapes.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    for len in t[0]..=t[1] {
        let mut stack: Vec<(Vec<(usize, usize)>, usize)> = vec![(Vec::new(), 0)];
        while let Some((cur, from)) = stack.pop() {
            if cur.len() == len {
                out.push(cur);
                continue;
            }
            let used: usize = cur.iter().map(|&(a, b)| a * b).sum();
            for (i, &s) in shapes.iter().enumerate().skip(from).rev() {
                // every later block has at least one entry
                if used + s.0 * s.1 + (len - cur.len() - 1) > max_entries {
                    continue;
                }
                let mut next = cur.clone();
                next.push(s);
                stack.push((next, i));
            }
        }
    }
    out
}

fn expand_pattern(p: &Pattern) -> Result<Vec<SrkParams>> {
    match p {
        Pattern::Explicit(spec) => Ok(vec![spec.build()?]),
        Pattern::Ranges { q, t, n, m, max_space } => {
            let mut out = Vec::new();
            for &qq in q {
                let max_entries = match max_space {
                    Some(limit) => {
                        (1..).take_while(|&e| (qq as u64).checked_pow(e).is_some_and(|v| v <= *limit)).last().unwrap_or(0)
                            as usize
                    }
                    None => usize::MAX / 2,
                };
                for blocks in canonical_blocks(*t, *n, *m, max_entries) {
                    let (ns, ms): (Vec<usize>, Vec<usize>) = blocks.into_iter().unzip();
                    let params = SrkParams::with_order(qq, ns, ms)?;
                    if let Some(limit) = max_space {
                        if params.space_size_u64().is_none_or(|s| s > *limit) {
                            continue;
                        }
                    }
                    out.push(params);
                }
            }
            Ok(out)
        }
    }
}

/// Every space over GF(2) and GF(3) with at most `max_space` elements,
/// each listed once up to block order and transposition.
pub fn default_sweep(max_space: u64) -> SweepConfig {
    let entries = (max_space.max(2) as f64).log2().floor() as usize;
    SweepConfig {
        patterns: vec![Pattern::Ranges {
            q: vec![2, 3],
            t: [1, entries.max(1)],
            n: [1, entries.max(1)],
            m: [1, entries.max(1)],
            max_space: Some(max_space),
        }],
        d: DistanceSpec::default(),
        budgets: Budgets::default(),
        order: OrderPolicy::Lex,
        eps: None,
        format: Format::Csv,
        output: None,
    }
}

/// Spaces of the default sweep (without distances).
pub fn default_spaces(max_space: u64) -> Vec<SrkParams> {
    let config = default_sweep(max_space);
    config.patterns.iter().flat_map(|p| expand_pattern(p).expect("default pattern is valid")).collect()
}

/// Computes every row in parallel; rows come back in configuration order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<BoundReport>> {
    let instances = config.instances()?;
    let options = config.report_options();
    instances.par_iter().map(|(params, d)| bounds::bound_report(params, *d, &options)).collect()
}

/// Writes the rows in the configured format to `out`.
pub fn write_reports<W: std::io::Write>(config: &SweepConfig, reports: &[BoundReport], out: W) -> Result<()> {
    match config.format {
        Format::Csv => bounds::write_csv(out, reports),
        Format::Json => bounds::write_json(out, reports),
    }
}
