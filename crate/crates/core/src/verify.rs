//! Self-check suites: every finite formula the crate relies on, compared
//! against exhaustive enumeration or an independent computation.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::bounds::Field;
use crate::counting::{self, Nat};
use crate::error::{Error, Result};
use crate::gf::{self, FieldSpec, Matrix};
use crate::graph::{self, Budgets, OrderPolicy, PowerGraphSpec, DEFAULT_SEED};
use crate::space::{self, SrkParams};
use crate::sweep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RankDistribution,
    QIdentity,
    Marsaglia,
    Isometry,
    HammingInequality,
    Cayley,
    TriangleIdentity,
    GvChain,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::RankDistribution,
        Suite::QIdentity,
        Suite::Marsaglia,
        Suite::Isometry,
        Suite::HammingInequality,
        Suite::Cayley,
        Suite::TriangleIdentity,
        Suite::GvChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RankDistribution => "rank-distribution",
            Suite::QIdentity => "q-identity",
            Suite::Marsaglia => "marsaglia",
            Suite::Isometry => "isometry",
            Suite::HammingInequality => "hamming-inequality",
            Suite::Cayley => "cayley",
            Suite::TriangleIdentity => "triangle-identity",
            Suite::GvChain => "gv-chain",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            Error::InvalidParams(format!("unknown suite {s:?}; available: {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub budgets: Budgets,
    pub seed: u64,
    /// Largest space in the sweeps used by the graph suites.
    pub max_space: u64,
    /// Random 4×4 GF(3) pairs in the Marsaglia suite.
    pub marsaglia_samples: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budgets: Budgets::default(), seed: DEFAULT_SEED, max_space: 1024, marsaglia_samples: 100_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failures: u64,
    pub first_counterexample: Option<Json>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite, checks: 0, failures: 0, first_counterexample: None, notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> Json) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(counterexample());
            }
        }
    }
}

pub fn run_suite(suite: Suite, options: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        Suite::RankDistribution => rank_distribution(),
        Suite::QIdentity => q_identity(),
        Suite::Marsaglia => marsaglia(options),
        Suite::Isometry => weight_check(suite, &[1, 1], &[2, 2]),
        Suite::HammingInequality => weight_check(suite, &[1, 2], &[2, 2]),
        Suite::Cayley => cayley(options),
        Suite::TriangleIdentity => triangle_identity(options),
        Suite::GvChain => gv_chain(options),
    }
}

fn rank_distribution() -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::RankDistribution);
    for q in [2u32, 3] {
        let field = FieldSpec::from_order(q)?;
        for (n, m) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let mut observed = vec![0u64; n.min(m) + 1];
            for x in gf::enumerate_matrices(n, m, &field, gf::DEFAULT_ENUMERATION_BUDGET)? {
                observed[x.rank(&field)] += 1;
            }
            let expected: Vec<Nat> = (0..=n.min(m))
                .map(|r| counting::count_rank_matrices(n as u32, m as u32, r as u32, q as u64))
                .collect::<Result<_>>()?;
            let ok = observed.iter().zip(&expected).all(|(&o, e)| Nat::from(o) == *e);
            report.check(ok, || {
                json!({"q": q, "n": n, "m": m, "observed": observed,
                       "expected": expected.iter().map(|e| e.to_string()).collect::<Vec<_>>()})
            });
        }
    }
    Ok(report)
}

fn canonical_rank(n: usize, r: usize) -> Matrix {
    let mut x = Matrix::zeros(n, n);
    for i in 0..r {
        x.set(i, i, gf::FieldElem::ONE);
    }
    x
}

fn q_identity() -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::QIdentity);
    for q in [2u64, 3] {
        for n in 1..=6u32 {
            for i in 0..=n {
                for j in 0..=n {
                    let mut sum = Nat::zero();
                    for c in 0..=j {
                        sum += counting::q_closed(i, j, c, n, q)?;
                    }
                    let m = counting::square_rank_count(n, j, q);
                    report.check(sum == m, || {
                        json!({"identity": "sum_c Q = M", "q": q, "n": n, "i": i, "j": j,
                               "sum": sum.to_string(), "M": m.to_string()})
                    });
                }
            }
        }
    }
    // fixed rank-i X, every Y
    let field = FieldSpec::from_order(2)?;
    for n in [2usize, 3] {
        for i in 0..=n {
            let x = canonical_rank(n, i);
            let mut counts = vec![vec![0u64; n + 1]; n + 1];
            for y in gf::enumerate_matrices(n, n, &field, gf::DEFAULT_ENUMERATION_BUDGET)? {
                let c = gf::col_space_intersection_dim(&x, &y, &field)?;
                counts[y.rank(&field)][c] += 1;
            }
            for (j, row) in counts.iter().enumerate() {
                for (c, &observed) in row.iter().enumerate().take(j + 1) {
                    let closed = counting::q_closed(i as u32, j as u32, c as u32, n as u32, 2)?;
                    report.check(closed == Nat::from(observed), || {
                        json!({"identity": "Q vs enumeration", "q": 2, "n": n, "i": i, "j": j, "c": c,
                               "closed": closed.to_string(), "observed": observed})
                    });
                }
            }
        }
    }
    Ok(report)
}

/// `rk(X − Y) ≥ rk X + rk Y − dim(col X ∩ col Y) − dim(row X ∩ row Y)`.
fn marsaglia_holds(x: &Matrix, y: &Matrix, field: &FieldSpec) -> Result<(bool, [usize; 5])> {
    let (rx, ry) = (x.rank(field), y.rank(field));
    let c = gf::col_space_intersection_dim(x, y, field)?;
    let r = gf::row_space_intersection_dim(x, y, field)?;
    let diff = x.sub(y, field)?.rank(field);
    Ok((diff + c + r >= rx + ry, [rx, ry, c, r, diff]))
}

fn marsaglia(options: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Marsaglia);
    let dump = |q: u32, x: &Matrix, y: &Matrix, v: [usize; 5]| {
        json!({"q": q, "X": x.lex_index(q), "Y": y.lex_index(q), "rk_X": v[0], "rk_Y": v[1],
               "col_int": v[2], "row_int": v[3], "rk_diff": v[4]})
    };
    let f2 = FieldSpec::from_order(2)?;
    let all: Vec<Matrix> = gf::enumerate_matrices(2, 2, &f2, 16)?.collect();
    for x in &all {
        for y in &all {
            let (ok, v) = marsaglia_holds(x, y, &f2)?;
            report.check(ok, || dump(2, x, y, v));
        }
    }
    let f3 = FieldSpec::from_order(3)?;
    let total = 3u64.pow(16);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _ in 0..options.marsaglia_samples {
        let x = Matrix::from_lex_index(4, 4, 3, rng.gen_range(0..total));
        let y = Matrix::from_lex_index(4, 4, 3, rng.gen_range(0..total));
        let (ok, v) = marsaglia_holds(&x, &y, &f3)?;
        report.check(ok, || dump(3, &x, &y, v));
    }
    report.notes.push(format!("256 exhaustive GF(2) pairs, {} random GF(3) pairs", options.marsaglia_samples));
    Ok(report)
}

fn weight_check(suite: Suite, n: &[usize], m: &[usize]) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(suite);
    let params = SrkParams::with_order(2, n.to_vec(), m.to_vec())?;
    let size = params.space_size_u64().expect("tiny space");
    let check = space::wt_preservation_check(&params, size)?;
    let equality = suite == Suite::Isometry;
    report.check(check.checked == size, || json!({"checked": check.checked, "expected": size}));
    report.check(check.injective, || json!({"injective": false}));
    report.check(check.inequality_violations.is_empty(), || json!({"inequality_violations": check.inequality_violations}));
    if equality {
        report.check(check.equality_expected && check.equality_failures.is_empty(), || {
            json!({"equality_expected": check.equality_expected, "equality_failures": check.equality_failures})
        });
    }
    report.notes.push(format!(
        "{params}: {} elements, {} with srk < wt_H(f), bijective = {}",
        check.checked,
        check.equality_failures.len(),
        check.bijective
    ));
    Ok(report)
}

/// Every `(space, k)` with `1 ≤ k ≤ max weight` in the default sweep.
fn power_graph_instances(max_space: u64) -> Vec<PowerGraphSpec> {
    sweep::default_spaces(max_space)
        .into_iter()
        .flat_map(|p| (1..=p.max_weight()).map(move |k| PowerGraphSpec::new(p.clone(), k)))
        .collect()
}

/// Triangles of Γ^k counted on the explicit graph.
fn brute_triangles(spec: &PowerGraphSpec, budgets: &Budgets) -> Result<Nat> {
    let (_, g) = graph::build_graph(spec, budgets)?;
    let per_vertex: u64 = (0..g.len())
        .into_par_iter()
        .map(|u| {
            g.neighbors(u).iter().filter(|&v| v > u).map(|v| g.neighbors(u).intersection(g.neighbors(v)).count() as u64).sum::<u64>()
        })
        .sum();
    // each triangle is seen once per edge
    Ok(Nat::from(per_vertex / 3))
}

fn cayley(options: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Cayley);
    let budgets = Budgets { max_vertices: options.max_space, ..options.budgets };
    let instances = power_graph_instances(options.max_space);
    let results: Vec<_> = instances
        .par_iter()
        .map(|spec| -> Result<_> {
            let size = spec.params.space_size_u64().expect("bounded space");
            let cayley = graph::verify_cayley(spec, size, options.seed)?;
            let triangles = brute_triangles(spec, &budgets)?;
            let t = graph::exact_t(spec, &budgets)?;
            Ok((cayley, triangles, t))
        })
        .collect::<Result<_>>()?;
    for (spec, (cayley, triangles, t)) in instances.iter().zip(results) {
        let label = || format!("{} k={}", spec.params, spec.k);
        report.check(cayley.full_sweep && cayley.passed(), || {
            json!({"instance": label(), "degree_violations": cayley.degree_violations.iter().take(5).collect::<Vec<_>>(),
                   "translation_violations": cayley.translation_violations.iter().take(5).collect::<Vec<_>>()})
        });
        let size = counting::space_size(&spec.params);
        report.check(&triangles * 3u32 == &t * &size, || {
            json!({"instance": label(), "triangles": triangles.to_string(), "T": t.to_string(), "V": size.to_string()})
        });
    }
    report.notes.push(format!("{} power graphs with |V| <= {}", instances.len(), options.max_space));
    Ok(report)
}

fn triangle_identity(options: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::TriangleIdentity);
    let budgets = &options.budgets;
    let instances = power_graph_instances(options.max_space);
    let results: Vec<_> = instances
        .par_iter()
        .map(|spec| -> Result<_> {
            let t = graph::exact_t(spec, budgets)?;
            let pairs = graph::exact_t_pairs(spec, budgets)?;
            let (n, m) = (spec.params.n()[0], spec.params.m()[0]);
            let upper = if n == m && spec.k <= n { Some(counting::t_upper(&spec.params, spec.k)?) } else { None };
            Ok((t, pairs, upper))
        })
        .collect::<Result<_>>()?;
    let mut bounded = 0;
    for (spec, (t, pairs, upper)) in instances.iter().zip(results) {
        let label = || format!("{} k={}", spec.params, spec.k);
        report.check(t == pairs, || json!({"instance": label(), "convolution": t.to_string(), "pairs": pairs.to_string()}));
        if let Some(upper) = upper {
            bounded += 1;
            report.check(t <= upper, || json!({"instance": label(), "T": t.to_string(), "T_upper": upper.to_string()}));
        }
    }
    report.notes.push(format!("{} power graphs, {bounded} with a square leading block", instances.len()));
    Ok(report)
}

fn gv_chain(options: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::GvChain);
    let config = sweep::SweepConfig { budgets: options.budgets, order: OrderPolicy::Lex, ..sweep::default_sweep(options.max_space) };
    let rows = sweep::run_sweep(&config)?;
    let mut open = Vec::new();
    for row in &rows {
        let params = row.params.build()?;
        let label = format!("{params} d={}", row.d);
        let Field::Value(greedy) = row.greedy_code_size else {
            report.check(false, || json!({"instance": label, "greedy": row.greedy_code_size.to_string()}));
            continue;
        };
        let greedy_nat = Nat::from(greedy);
        report.check(row.gv_value <= greedy_nat, || json!({"instance": label, "gv": row.gv, "greedy": greedy}));
        match row.exact_alpha {
            Field::Value(alpha) => {
                report.check(greedy <= alpha, || json!({"instance": label, "greedy": greedy, "alpha": alpha}));
            }
            _ => {
                let spec = PowerGraphSpec::new(params.clone(), row.d - 1);
                let (lower, upper) = graph::alpha_bounds(&spec, &options.budgets)?;
                report.check(greedy <= upper && lower <= upper, || {
                    json!({"instance": label, "greedy": greedy, "alpha_lower": lower, "alpha_upper": upper})
                });
                open.push(format!("{label}: {lower} <= alpha <= {upper}"));
            }
        }
        match &row.partition {
            Field::Value(p) => {
                let distance_ok = p.min_class_distance.is_none_or(|d| d >= row.d);
                report.check(distance_ok, || json!({"instance": label, "min_class_distance": p.min_class_distance}));
                let floor = num_traits::ToPrimitive::to_f64(&row.gv_floor_ratio).unwrap_or(f64::INFINITY);
                report.check(p.avg_size >= floor, || {
                    json!({"instance": label, "avg_class": p.avg_size, "gv_ratio": row.gv_exact_ratio})
                });
            }
            other => report.check(false, || json!({"instance": label, "partition": other.to_string()})),
        }
    }
    report.notes.push(format!("{} instances with |V| <= {}", rows.len(), options.max_space));
    report.notes.push(format!("{} instances where alpha was not computed within the node budget", open.len()));
    report.notes.extend(open);
    Ok(report)
}
