//! The power graph Γ^k of a sum-rank space: vertices are the elements, and
//! two elements are adjacent when their sum-rank distance is between 1 and
//! `k`. It is a Cayley graph on the additive group with connecting set
//! `{X : 1 ≤ srk(X) ≤ k}`, so every local count can be taken at 0.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::counting::{self, Nat};
use crate::error::{Error, Result};
use crate::gf::Matrix;
use crate::mis::{self, BitGraph, MisOptions};
use crate::space::{self, IndexedSpace, ParamsSpec, SrkCode, SrkParams, SrkVector};

pub const DEFAULT_MAX_VERTICES: u64 = 4096;
pub const DEFAULT_MAX_BALL: u64 = 20_000;
pub const DEFAULT_MAX_NODES: u64 = 50_000_000;
pub const DEFAULT_SEED: u64 = 0x5352_4b21;

/// Perturbation rounds of the local search that seeds the exact solver.
const LOCAL_SEARCH_ROUNDS: u64 = 2_000;

/// Largest single block (in matrices) whose pair statistics are tabulated.
const BLOCK_TABLE_LIMIT: u64 = 1 << 22;

/// Largest space the implicit statistics will scan vertex by vertex.
const IMPLICIT_SCAN_LIMIT: u64 = 1 << 24;

/// Resource limits for the exact routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Largest vertex count for explicit-graph work (solver, partitions).
    pub max_vertices: u64,
    /// Largest ball volume for neighbourhood pair counting.
    pub max_ball: u64,
    /// Search-node limit for the independence-number solver.
    pub max_nodes: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_vertices: DEFAULT_MAX_VERTICES, max_ball: DEFAULT_MAX_BALL, max_nodes: DEFAULT_MAX_NODES }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerGraphSpec {
    pub params: SrkParams,
    pub k: usize,
}

impl PowerGraphSpec {
    pub fn new(params: SrkParams, k: usize) -> Self {
        PowerGraphSpec { params, k }
    }

    fn require_positive_k(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Precondition("the power graph needs k >= 1".into()));
        }
        Ok(())
    }

    fn indexed(&self, limit: u64, what: &'static str) -> Result<IndexedSpace> {
        match self.params.space_size_u64() {
            Some(size) if size <= limit => IndexedSpace::new(&self.params),
            _ => Err(Error::BudgetExceeded { what, budget: limit }),
        }
    }

    fn check_ball(&self, budgets: &Budgets) -> Result<Nat> {
        let ball = counting::ball_volume(&self.params, self.k);
        if ball > Nat::from(budgets.max_ball) {
            return Err(Error::BudgetExceeded { what: "ball volume", budget: budgets.max_ball });
        }
        Ok(ball)
    }
}

/// `ε*` with `+∞` for triangle-free neighbourhoods, serialized as `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsStar(pub f64);

impl EpsStar {
    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for EpsStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{:.12}", self.0)
        }
    }
}

impl Serialize for EpsStar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

pub(crate) mod nat_string {
    use serde::Serializer;

    use crate::counting::Nat;

    pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }
}

/// Exact local statistics of a power graph.
#[derive(Clone, Debug, Serialize)]
pub struct GraphStats {
    pub params: ParamsSpec,
    pub k: usize,
    #[serde(with = "nat_string")]
    pub num_vertices: Nat,
    /// Degree `D = V(k) − 1`.
    #[serde(rename = "D", with = "nat_string")]
    pub d: Nat,
    /// Edges inside the neighbourhood of any vertex.
    #[serde(rename = "T", with = "nat_string")]
    pub t: Nat,
    /// Total number of triangles, `T·|V|/3`.
    #[serde(rename = "Delta", with = "nat_string")]
    pub delta: Nat,
    pub eps_star: EpsStar,
}

/// Canonical rank-`r` matrix: identity in the top-left corner.
fn canonical_rank_matrix(n: usize, m: usize, r: usize) -> Matrix {
    let mut x = Matrix::zeros(n, m);
    for i in 0..r {
        x.set(i, i, crate::gf::FieldElem::ONE);
    }
    x
}

/// `table[a][b][c]` = ordered pairs `(X, Y)` of `n × m` matrices with
/// `rk X = a`, `rk Y = b`, `rk(X − Y) = c`. Uses the fact that the joint
/// rank profile only depends on `rk X` (left/right multiplication by
/// invertible matrices), so one representative per rank suffices.
fn block_pair_profile(n: usize, m: usize, params: &SrkParams) -> Result<Vec<Vec<Vec<Nat>>>> {
    let block = SrkParams::new(params.field().clone(), vec![n], vec![m])?;
    let size = block.space_size_u64().filter(|&s| s <= BLOCK_TABLE_LIMIT).ok_or(Error::BudgetExceeded {
        what: "block pair profile",
        budget: BLOCK_TABLE_LIMIT,
    })?;
    let space = IndexedSpace::new(&block)?;
    let r_max = n.min(m);
    let q = params.q() as u64;
    let mut table = vec![vec![vec![Nat::zero(); r_max + 1]; r_max + 1]; r_max + 1];
    for a in 0..=r_max {
        let x = canonical_rank_matrix(n, m, a).lex_index(params.q());
        let mut counts = vec![vec![0u64; r_max + 1]; r_max + 1];
        for y in 0..size {
            counts[space.weight(y)][space.distance(x, y)] += 1;
        }
        let multiplicity = counting::count_rank_matrices(n as u32, m as u32, a as u32, q)?;
        for b in 0..=r_max {
            for c in 0..=r_max {
                table[a][b][c] = &multiplicity * counts[b][c];
            }
        }
    }
    Ok(table)
}

/// Edges inside the neighbourhood of a vertex of Γ^k: unordered pairs of
/// distinct nonzero `X, Y` with `srk X, srk Y, srk(X − Y) ≤ k`.
///
/// Counted by convolving per-block joint rank profiles, truncated at `k`.
pub fn exact_t(spec: &PowerGraphSpec, budgets: &Budgets) -> Result<Nat> {
    spec.require_positive_k()?;
    let ball = spec.check_ball(budgets)?;
    let k = spec.k;
    // acc[sx][sy][sd] over blocks processed so far, all capped at k
    let mut acc = vec![vec![vec![Nat::zero(); k + 1]; k + 1]; k + 1];
    acc[0][0][0] = Nat::from(1u32);
    for (n, m) in spec.params.blocks() {
        let profile = block_pair_profile(n, m, &spec.params)?;
        let r = profile.len();
        let mut next = vec![vec![vec![Nat::zero(); k + 1]; k + 1]; k + 1];
        for sx in 0..=k {
            for sy in 0..=k {
                for sd in 0..=k {
                    let cur = &acc[sx][sy][sd];
                    if cur.is_zero() {
                        continue;
                    }
                    for a in 0..r.min(k + 1 - sx) {
                        for b in 0..r.min(k + 1 - sy) {
                            for c in 0..r.min(k + 1 - sd) {
                                let w = &profile[a][b][c];
                                if !w.is_zero() {
                                    next[sx + a][sy + b][sd + c] += cur * w;
                                }
                            }
                        }
                    }
                }
            }
        }
        acc = next;
    }
    let ordered: Nat = acc.iter().flatten().flatten().sum();
    // drop pairs with X = 0, Y = 0 or X = Y (each a copy of the ball,
    // pairwise meeting only at (0, 0))
    let nonzero_distinct = ordered + 2u32 - ball * 3u32;
    Ok(nonzero_distinct / 2u32)
}

/// Same quantity as [`exact_t`] by enumerating every pair of ball elements.
pub fn exact_t_pairs(spec: &PowerGraphSpec, budgets: &Budgets) -> Result<Nat> {
    spec.require_positive_k()?;
    spec.check_ball(budgets)?;
    let q = spec.params.q();
    let space = spec.indexed(u64::MAX, "pair enumeration")?;
    let mut ball = Vec::new();
    for w in 1..=spec.k {
        ball.extend(space::enumerate_sphere(&spec.params, w, budgets.max_ball)?.iter().map(|v| v.index(q)));
    }
    let k = spec.k;
    let total: u64 = (0..ball.len())
        .into_par_iter()
        .map(|i| ball[i + 1..].iter().filter(|&&y| space.distance(ball[i], y) <= k).count() as u64)
        .sum();
    Ok(Nat::from(total))
}

/// `|V|`, `D`, `T`, `Δ = T·|V|/3` and `ε*` for Γ^k.
pub fn graph_stats(spec: &PowerGraphSpec, budgets: &Budgets) -> Result<GraphStats> {
    spec.require_positive_k()?;
    let num_vertices = counting::space_size(&spec.params);
    let d = counting::degree(&spec.params, spec.k)?;
    let t = exact_t(spec, budgets)?;
    let product = &t * &num_vertices;
    if !(&product % 3u32).is_zero() {
        return Err(Error::Invariant(format!("T·|V| = {product} is not divisible by 3")));
    }
    let delta = product / 3u32;
    let eps_star = if d >= Nat::from(2u32) {
        EpsStar(counting::epsilon_star(&d, &t)?)
    } else {
        // D = 1 (only possible for q = 2, a single 1×1 block); no triangles.
        EpsStar(f64::INFINITY)
    };
    Ok(GraphStats { params: spec.params.to_spec(), k: spec.k, num_vertices, d, t, delta, eps_star })
}

#[derive(Clone, Debug, Serialize)]
pub struct CayleyReport {
    pub params: ParamsSpec,
    pub k: usize,
    #[serde(with = "nat_string")]
    pub expected_degree: Nat,
    pub full_sweep: bool,
    pub vertices_checked: u64,
    pub translations_checked: u64,
    /// `(vertex, observed degree)` for every mismatch.
    pub degree_violations: Vec<(u64, u64)>,
    /// `(x, y, z)` where adjacency of `(x, y)` and `(x + z, y + z)` differ.
    pub translation_violations: Vec<(u64, u64, u64)>,
}

impl CayleyReport {
    pub fn passed(&self) -> bool {
        self.degree_violations.is_empty() && self.translation_violations.is_empty()
    }
}

/// Checks regularity and translation invariance of Γ^k by brute force.
/// Spaces with at most `sample_size` vertices are swept completely;
/// otherwise vertices and translations are drawn from a seeded generator.
pub fn verify_cayley(spec: &PowerGraphSpec, sample_size: u64, seed: u64) -> Result<CayleyReport> {
    spec.require_positive_k()?;
    let space = spec.indexed(IMPLICIT_SCAN_LIMIT, "Cayley verification")?;
    let size = space.size();
    let k = spec.k;
    let expected = counting::degree(&spec.params, k)?;
    let expected_u64 = expected.to_u64().expect("degree below |V|");
    let full_sweep = size <= sample_size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<u64> = if full_sweep {
        (0..size).collect()
    } else {
        (0..sample_size).map(|_| rng.gen_range(0..size)).collect()
    };
    let adjacent = |x: u64, y: u64| {
        let d = space.distance(x, y);
        (1..=k).contains(&d)
    };
    let degree_violations: Vec<(u64, u64)> = vertices
        .par_iter()
        .filter_map(|&v| {
            let deg = (0..size).filter(|&u| adjacent(u, v)).count() as u64;
            (deg != expected_u64).then_some((v, deg))
        })
        .collect();

    let mut triples = vec![(0u64, size - 1, 0u64)];
    let samples = sample_size.max(1);
    for _ in 0..samples {
        triples.push((rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size)));
    }
    let translation_violations = triples
        .iter()
        .copied()
        .filter(|&(x, y, z)| adjacent(x, y) != adjacent(space.add(x, z), space.add(y, z)))
        .collect();

    Ok(CayleyReport {
        params: spec.params.to_spec(),
        k,
        expected_degree: expected,
        full_sweep,
        vertices_checked: vertices.len() as u64,
        translations_checked: triples.len() as u64,
        degree_violations,
        translation_violations,
    })
}

/// Connecting set `{X : 1 ≤ srk X ≤ k}` as element indices.
fn connecting_set(space: &IndexedSpace, k: usize) -> Vec<u64> {
    (1..space.size()).filter(|&x| space.weight(x) <= k).collect()
}

/// One element per orbit of `{X : srk X > k}` under the isometries fixing 0:
/// `X_i ↦ A_i X_i B_i` with invertible `A_i, B_i` makes the orbit depend only
/// on the per-block ranks, and equal-shape blocks may be permuted.
fn rank_profile_representatives(params: &SrkParams, k: usize) -> Result<Vec<usize>> {
    let shapes: Vec<(usize, usize)> = params.blocks().collect();
    let mut profiles = BTreeSet::new();
    let mut profile = vec![0usize; shapes.len()];
    loop {
        if profile.iter().sum::<usize>() > k {
            let mut canon = profile.clone();
            for shape in shapes.iter().collect::<BTreeSet<_>>() {
                let slots: Vec<usize> = (0..shapes.len()).filter(|&i| shapes[i] == *shape).collect();
                let mut ranks: Vec<usize> = slots.iter().map(|&i| profile[i]).collect();
                ranks.sort_unstable_by(|a, b| b.cmp(a));
                for (&i, r) in slots.iter().zip(ranks) {
                    canon[i] = r;
                }
            }
            profiles.insert(canon);
        }
        // next profile in mixed radix
        let mut i = 0;
        while i < shapes.len() && profile[i] == shapes[i].0.min(shapes[i].1) {
            profile[i] = 0;
            i += 1;
        }
        if i == shapes.len() {
            break;
        }
        profile[i] += 1;
    }
    let q = params.q();
    profiles
        .into_iter()
        .map(|ranks| {
            let blocks = shapes.iter().zip(&ranks).map(|(&(n, m), &r)| canonical_rank_matrix(n, m, r)).collect();
            Ok(SrkVector::from_blocks(params, blocks)?.index(q) as usize)
        })
        .collect()
}

/// A clique of Γ^k through 0, grown greedily over the ball. In a
/// vertex-transitive graph `α · ω ≤ |V|`, so it bounds the independence
/// number from above.
fn greedy_clique(space: &IndexedSpace, k: usize) -> Vec<u64> {
    let conn = connecting_set(space, k);
    let mut best = vec![0];
    for order in [conn.clone(), conn.iter().rev().copied().collect()] {
        let mut clique = vec![0];
        for x in order {
            if clique.iter().all(|&c| space.distance(c, x) <= k) {
                clique.push(x);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// Explicit adjacency of Γ^k.
pub fn build_graph(spec: &PowerGraphSpec, budgets: &Budgets) -> Result<(IndexedSpace, BitGraph)> {
    let space = spec.indexed(budgets.max_vertices, "explicit graph vertices")?;
    let n = space.size() as usize;
    let mut g = BitGraph::new(n);
    if spec.k > 0 {
        let conn = connecting_set(&space, spec.k);
        for x in 0..n as u64 {
            for &s in &conn {
                let y = space.add(x, s);
                if y > x {
                    g.add_edge(x as usize, y as usize);
                }
            }
        }
    }
    Ok((space, g))
}

#[derive(Clone, Debug)]
pub struct MisResult {
    pub size: usize,
    pub witness: SrkCode,
    pub nodes: u64,
}

/// Exact independence number of Γ^k, which equals the largest code size
/// with minimum distance `k + 1`, together with an optimal code.
pub fn max_independent_set(spec: &PowerGraphSpec, budgets: &Budgets) -> Result<MisResult> {
    let solved = solve_alpha(&spec.params, spec.k, budgets)?;
    if solved.lower != solved.upper {
        return Err(Error::BudgetExceeded { what: "independence-number search nodes", budget: budgets.max_nodes });
    }
    let space = IndexedSpace::new(&spec.params)?;
    let witness = space.code_from_indices(solved.witness)?;
    if let Some(d) = witness.cached_min_distance() {
        if d <= spec.k {
            return Err(Error::Invariant(format!("solver returned a code of minimum distance {d}")));
        }
    }
    Ok(MisResult { size: witness.len(), witness, nodes: solved.nodes })
}

/// Lower and upper bounds on α(Γ^k) within the node budget; equal when
/// the search finished.
pub fn alpha_bounds(spec: &PowerGraphSpec, budgets: &Budgets) -> Result<(usize, usize)> {
    let solved = solve_alpha(&spec.params, spec.k, budgets)?;
    Ok((solved.lower, solved.upper))
}

/// Bounds on α(Γ^k); `witness` realizes `lower`.
#[derive(Clone, Debug)]
struct AlphaBounds {
    lower: usize,
    upper: usize,
    witness: Vec<u64>,
    nodes: u64,
}

type AlphaKey = (u32, Vec<(usize, usize)>, usize, u64);

/// Values of α (or upper bounds on it) already established, keyed by the
/// normalized block shapes. Shared so that sweeps reuse sub-results.
fn alpha_cache() -> &'static Mutex<HashMap<AlphaKey, usize>> {
    static CACHE: OnceLock<Mutex<HashMap<AlphaKey, usize>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Block shapes with `n ≤ m` (transposing keeps ranks), empty blocks
/// dropped, sorted.
fn normalized_shapes(shapes: impl Iterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = shapes.filter(|&(n, m)| n > 0 && m > 0).map(|(n, m)| (n.min(m), n.max(m))).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Upper bound on α(Γ^k) for the space with the given block shapes.
fn alpha_upper(q: u32, shapes: &[(usize, usize)], k: usize, budgets: &Budgets) -> Result<usize> {
    if shapes.is_empty() || k >= shapes.iter().map(|&(n, _)| n).sum() {
        return Ok(1);
    }
    let key = (q, shapes.to_vec(), k, budgets.max_nodes);
    if let Some(&v) = alpha_cache().lock().expect("cache lock").get(&key) {
        return Ok(v);
    }
    let (n, m): (Vec<usize>, Vec<usize>) = shapes.iter().copied().unzip();
    let params = SrkParams::with_order(q, n, m)?;
    let value = solve_alpha(&params, k, budgets)?.upper;
    Ok(value)
}

/// Solves α(Γ^k) by branch and bound, seeded with the best greedy code and
/// stopped early at the best available upper bound. For a vertex-transitive
/// graph `α(G)/|G| ≤ α(H)/|H|` for every induced subgraph `H`; the bound
/// uses a clique and the subspaces with one row or column of a block zero.
fn solve_alpha(params: &SrkParams, k: usize, budgets: &Budgets) -> Result<AlphaBounds> {
    let spec = PowerGraphSpec::new(params.clone(), k);
    let (space, graph) = build_graph(&spec, budgets)?;
    if k == 0 {
        let all: Vec<u64> = (0..space.size()).collect();
        return Ok(AlphaBounds { lower: all.len(), upper: all.len(), witness: all, nodes: 0 });
    }
    let greedy = [OrderPolicy::Lex, OrderPolicy::WeightThenLex]
        .into_iter()
        .map(|policy| greedy_indices(&space, k, policy))
        .max_by_key(|code| code.len())
        .expect("two candidates");

    let q = params.q();
    let shapes: Vec<(usize, usize)> = params.blocks().collect();
    let mut upper = (space.size() / greedy_clique(&space, k).len() as u64) as usize;
    for i in 0..shapes.len() {
        let (n, m) = shapes[i];
        for (reduced, factor) in [((n - 1, m), m), ((n, m - 1), n)] {
            if upper <= greedy.len() {
                break;
            }
            let mut sub = shapes.clone();
            sub[i] = reduced;
            let sub_alpha = alpha_upper(q, &normalized_shapes(sub.into_iter()), k, budgets)?;
            upper = upper.min(sub_alpha.saturating_mul((q as usize).pow(factor as u32)));
        }
    }

    let mut greedy = greedy;
    if greedy.len() < upper {
        let start: Vec<usize> = greedy.iter().map(|&v| v as usize).collect();
        let improved = mis::improve_independent_set(&graph, &start, LOCAL_SEARCH_ROUNDS, DEFAULT_SEED);
        if improved.len() > greedy.len() {
            greedy = improved.iter().map(|&v| v as u64).collect();
        }
    }
    let mut out = if greedy.len() >= upper {
        AlphaBounds { lower: greedy.len(), upper: greedy.len(), witness: greedy, nodes: 0 }
    } else {
        let options = MisOptions {
            forced_vertex: Some(0),
            incumbent: greedy.iter().map(|&v| v as usize).collect(),
            node_limit: Some(budgets.max_nodes),
            upper_bound: Some(upper),
            second_vertices: Some(rank_profile_representatives(params, k)?),
        };
        let outcome = mis::maximum_independent_set(&graph, &options);
        let lower = outcome.set.len();
        AlphaBounds {
            lower,
            upper: if outcome.optimal { lower } else { upper },
            witness: outcome.set.iter().map(|&v| v as u64).collect(),
            nodes: outcome.nodes,
        }
    };
    out.upper = out.upper.max(out.lower);
    let key = (q, normalized_shapes(shapes.into_iter()), k, budgets.max_nodes);
    alpha_cache().lock().expect("cache lock").insert(key, out.upper);
    Ok(out)
}

/// Vertex order used by the greedy constructions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderPolicy {
    /// Canonical serialization order.
    #[default]
    Lex,
    /// By sum-rank weight, ties in canonical order.
    WeightThenLex,
}

impl FromStr for OrderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(OrderPolicy::Lex),
            "weight-then-lex" => Ok(OrderPolicy::WeightThenLex),
            other => Err(Error::InvalidParams(format!("unknown order policy {other:?}"))),
        }
    }
}

impl fmt::Display for OrderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderPolicy::Lex => "lex",
            OrderPolicy::WeightThenLex => "weight-then-lex",
        })
    }
}

fn vertex_order(space: &IndexedSpace, policy: OrderPolicy) -> Vec<u64> {
    let mut order: Vec<u64> = (0..space.size()).collect();
    if policy == OrderPolicy::WeightThenLex {
        order.sort_by_key(|&x| (space.weight(x), x));
    }
    order
}

fn greedy_indices(space: &IndexedSpace, k: usize, policy: OrderPolicy) -> Vec<u64> {
    let conn = connecting_set(space, k);
    let mut blocked = vec![false; space.size() as usize];
    let mut kept = Vec::new();
    for v in vertex_order(space, policy) {
        if blocked[v as usize] {
            continue;
        }
        kept.push(v);
        for &s in &conn {
            blocked[space.add(v, s) as usize] = true;
        }
    }
    kept
}

/// Sphere-covering construction: scan vertices in order and keep each one at
/// distance more than `k` from everything kept so far.
pub fn greedy_gv_code(spec: &PowerGraphSpec, policy: OrderPolicy, budgets: &Budgets) -> Result<SrkCode> {
    let space = spec.indexed(budgets.max_vertices, "greedy code vertices")?;
    if spec.k == 0 {
        return space.code_from_indices((0..space.size()).collect());
    }
    space.code_from_indices(greedy_indices(&space, spec.k, policy))
}

/// Greedy colouring of Γ^k; every colour class is a code of minimum
/// distance at least `k + 1` (or a single word).
pub fn greedy_partition(spec: &PowerGraphSpec, policy: OrderPolicy, budgets: &Budgets) -> Result<Vec<SrkCode>> {
    let space = spec.indexed(budgets.max_vertices, "partition vertices")?;
    let n = space.size() as usize;
    let conn = if spec.k == 0 { Vec::new() } else { connecting_set(&space, spec.k) };
    let mut color = vec![usize::MAX; n];
    let mut classes: Vec<Vec<u64>> = Vec::new();
    let mut seen = Vec::new();
    for v in vertex_order(&space, policy) {
        seen.clear();
        seen.resize(classes.len() + 1, false);
        for &s in &conn {
            let c = color[space.add(v, s) as usize];
            if c < seen.len() {
                seen[c] = true;
            }
        }
        let c = seen.iter().position(|&used| !used).expect("one slot is always free");
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(v);
        color[v as usize] = c;
    }
    classes.into_iter().map(|class| space.code_from_indices(class)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(q: u32, n: &[usize], m: &[usize], k: usize) -> PowerGraphSpec {
        PowerGraphSpec::new(SrkParams::with_order(q, n.to_vec(), m.to_vec()).unwrap(), k)
    }

    fn nat(x: u64) -> Nat {
        Nat::from(x)
    }

    #[test]
    fn exact_t_examples() {
        let b = Budgets::default();
        assert_eq!(exact_t(&spec(2, &[1, 1], &[1, 1], 1), &b).unwrap(), nat(0));
        assert_eq!(exact_t(&spec(2, &[1, 1, 1], &[1, 1, 1], 2), &b).unwrap(), nat(12));
        assert_eq!(exact_t(&spec(2, &[2], &[2], 2), &b).unwrap(), nat(105));
        let tight = Budgets { max_ball: 5, ..b };
        assert!(matches!(exact_t(&spec(2, &[2], &[2], 1), &tight), Err(Error::BudgetExceeded { .. })));
        assert!(exact_t(&spec(2, &[2], &[2], 0), &b).is_err());
    }

    #[test]
    fn exact_t_routes_agree() {
        let b = Budgets::default();
        for s in [
            spec(2, &[2], &[2], 1),
            spec(2, &[1, 2], &[2, 2], 1),
            spec(2, &[1, 2], &[2, 2], 2),
            spec(3, &[1, 1, 1], &[1, 1, 2], 2),
            spec(2, &[2, 1], &[3, 1], 2),
            spec(4, &[1, 1], &[1, 1], 1),
        ] {
            assert_eq!(exact_t(&s, &b).unwrap(), exact_t_pairs(&s, &b).unwrap(), "{}", s.params);
        }
    }

    #[test]
    fn stats_examples() {
        let b = Budgets::default();
        let cube = graph_stats(&spec(2, &[1, 1, 1], &[1, 1, 1], 2), &b).unwrap();
        assert_eq!((cube.num_vertices.clone(), cube.d.clone(), cube.t.clone(), cube.delta.clone()), (
            nat(8),
            nat(6),
            nat(12),
            nat(32)
        ));
        assert!((cube.eps_star.0 - 0.613147).abs() < 1e-6);

        let c4 = graph_stats(&spec(2, &[1, 1], &[1, 1], 1), &b).unwrap();
        assert_eq!((c4.d.clone(), c4.t.clone(), c4.delta.clone()), (nat(2), nat(0), nat(0)));
        assert!(c4.eps_star.is_infinite());
        assert_eq!(serde_json::to_value(c4.eps_star).unwrap(), serde_json::json!("inf"));

        let rank = graph_stats(&spec(2, &[2], &[2], 1), &b).unwrap();
        assert_eq!(rank.d, nat(9));
        assert!(rank.t <= counting::t_upper(&SrkParams::with_order(2, vec![2], vec![2]).unwrap(), 1).unwrap());
    }

    #[test]
    fn cayley_examples() {
        let r = verify_cayley(&spec(2, &[1, 2], &[2, 2], 1), 1024, DEFAULT_SEED).unwrap();
        assert!(r.full_sweep && r.passed());
        assert_eq!(r.vertices_checked, 64);
        let complete = verify_cayley(&spec(2, &[1, 1], &[1, 1], 2), 1024, 7).unwrap();
        assert_eq!(complete.expected_degree, nat(3));
        assert!(complete.passed());
        let sampled = verify_cayley(&spec(3, &[2, 2], &[2, 2], 1), 20, 1).unwrap();
        assert!(!sampled.full_sweep && sampled.passed());
    }

    #[test]
    fn independence_numbers() {
        let b = Budgets::default();
        for (s, alpha) in [
            (spec(2, &[1, 1], &[1, 1], 1), 2),
            (spec(2, &[1, 1, 1], &[1, 1, 1], 1), 4),
            (spec(2, &[2], &[2], 1), 4),
            (spec(2, &[1, 1], &[1, 1], 2), 1),
            (spec(3, &[1, 1], &[1, 1], 0), 9),
        ] {
            let r = max_independent_set(&s, &b).unwrap();
            assert_eq!(r.size, alpha, "{}", s.params);
            if r.size >= 2 {
                assert!(space::min_distance(&r.witness).unwrap() > s.k);
            }
        }
        let tiny = Budgets { max_vertices: 8, ..b };
        assert!(max_independent_set(&spec(2, &[2], &[2], 1), &tiny).is_err());
    }

    #[test]
    fn greedy_examples() {
        let b = Budgets::default();
        let cube = spec(2, &[1, 1, 1], &[1, 1, 1], 1);
        let classes = greedy_partition(&cube, OrderPolicy::Lex, &b).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.len() == 4 && c.cached_min_distance() == Some(2)));
        assert_eq!(greedy_gv_code(&cube, OrderPolicy::Lex, &b).unwrap().len(), 4);

        let complete = spec(2, &[1, 1], &[1, 1], 2);
        let classes = greedy_partition(&complete, OrderPolicy::WeightThenLex, &b).unwrap();
        assert_eq!(classes.len(), 4);

        let rank = spec(2, &[2], &[2], 1);
        let classes = greedy_partition(&rank, OrderPolicy::Lex, &b).unwrap();
        assert!(classes.len() <= 10);
        assert!(classes.iter().all(|c| c.cached_min_distance().is_none_or(|d| d >= 2)));
        assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), 16);
        assert!(greedy_gv_code(&rank, OrderPolicy::Lex, &b).unwrap().len() >= 2);
        let whole = greedy_gv_code(&spec(2, &[2], &[2], 0), OrderPolicy::Lex, &b).unwrap();
        assert_eq!(whole.len(), 16);
    }

    #[test]
    fn order_policy_parsing() {
        assert_eq!("lex".parse::<OrderPolicy>().unwrap(), OrderPolicy::Lex);
        assert_eq!("weight-then-lex".parse::<OrderPolicy>().unwrap(), OrderPolicy::WeightThenLex);
        assert!("random".parse::<OrderPolicy>().is_err());
    }
}
