//! Exact maximum independent set by branch and bound over bitsets.
//!
//! The search is the classic maximum-clique scheme run on the complement:
//! candidates are greedily covered by cliques of the input graph (each
//! clique holds at most one vertex of an independent set), the number of
//! cliques bounds the gain, and vertices are expanded from the last clique
//! backwards. Vertex order is fixed (degeneracy order of the complement), so
//! results are deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset { words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Smallest element of `self` that is neither in `other` nor `skip`.
    pub fn first_outside(&self, other: &Bitset, skip: usize) -> Option<usize> {
        self.words.iter().zip(&other.words).enumerate().find_map(|(i, (&a, &b))| {
            let mut w = a & !b;
            if skip / 64 == i {
                w &= !(1 << (skip % 64));
            }
            (w != 0).then(|| i * 64 + w.trailing_zeros() as usize)
        })
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Undirected simple graph stored as adjacency bitsets.
#[derive(Clone, Debug)]
pub struct BitGraph {
    n: usize,
    adj: Vec<Bitset>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        BitGraph { n, adj: vec![Bitset::new(n); n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }

    /// Vertices ordered so that, in the complement graph, each vertex has
    /// the fewest remaining neighbours when removed; returned reversed so
    /// the densest core of the complement comes first.
    fn complement_degeneracy_order(&self) -> Vec<usize> {
        let n = self.n;
        let mut deg: Vec<usize> = (0..n).map(|v| n - 1 - self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).expect("vertex left");
            removed[v] = true;
            order.push(v);
            for u in 0..n {
                if !removed[u] && u != v && !self.adjacent(u, v) {
                    deg[u] -= 1;
                }
            }
        }
        order.reverse();
        order
    }
}

#[derive(Clone, Debug, Default)]
pub struct MisOptions {
    /// Vertex that must be part of the solution. Valid without loss of
    /// generality for vertex-transitive graphs.
    pub forced_vertex: Option<usize>,
    /// Known independent set used as the starting incumbent.
    pub incumbent: Vec<usize>,
    /// Abort after this many search nodes.
    pub node_limit: Option<u64>,
    /// A proven upper bound on α; the search stops once it is reached.
    pub upper_bound: Option<usize>,
    /// Second vertices to branch on below the forced vertex. Sound when
    /// every independent set through the forced vertex is mapped onto one
    /// containing a listed vertex by an automorphism fixing the forced one.
    pub second_vertices: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisOutcome {
    /// Best independent set found, sorted.
    pub set: Vec<usize>,
    pub nodes: u64,
    /// False when the node limit stopped the search early.
    pub optimal: bool,
}

struct Search<'a> {
    /// Adjacency of the input graph in relabelled order.
    adj: &'a [Bitset],
    /// Non-adjacency (excluding self) in relabelled order.
    non_adj: &'a [Bitset],
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    target: usize,
    aborted: bool,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: Bitset) {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        // Greedy clique cover of the candidates.
        let mut order = Vec::with_capacity(candidates.count());
        let mut uncovered = candidates.clone();
        let mut cliques = 0usize;
        while !uncovered.is_empty() {
            cliques += 1;
            let mut avail = uncovered.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                uncovered.remove(v);
                avail.intersect_with(&self.adj[v]);
                order.push((v, cliques));
            }
        }
        for &(v, bound) in order.iter().rev() {
            if current.len() + bound <= self.best.len() || self.best.len() >= self.target {
                return;
            }
            current.push(v);
            let next = candidates.intersection(&self.non_adj[v]);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
                if self.aborted {
                    return;
                }
            }
            current.pop();
            candidates.remove(v);
        }
    }
}

/// Finds a maximum independent set of `graph`.
pub fn maximum_independent_set(graph: &BitGraph, options: &MisOptions) -> MisOutcome {
    let n = graph.len();
    if n == 0 {
        return MisOutcome { set: Vec::new(), nodes: 0, optimal: true };
    }
    let order = graph.complement_degeneracy_order();
    let mut position = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let mut adj = vec![Bitset::new(n); n];
    let mut non_adj = vec![Bitset::full(n); n];
    for (pos, &v) in order.iter().enumerate() {
        non_adj[pos].remove(pos);
        for u in graph.neighbors(v).iter() {
            adj[pos].insert(position[u]);
            non_adj[pos].remove(position[u]);
        }
    }

    let incumbent: Vec<usize> = if graph.is_independent(&options.incumbent) {
        options.incumbent.iter().map(|&v| position[v]).collect()
    } else {
        Vec::new()
    };
    let mut search = Search {
        adj: &adj,
        non_adj: &non_adj,
        best: incumbent,
        nodes: 0,
        node_limit: options.node_limit.unwrap_or(u64::MAX),
        target: options.upper_bound.unwrap_or(usize::MAX),
        aborted: false,
    };

    match options.forced_vertex {
        Some(v) => {
            let root = position[v];
            if search.best.is_empty() {
                search.best = vec![root];
            }
            match &options.second_vertices {
                Some(seconds) => {
                    for &w in seconds {
                        let second = position[w];
                        if !non_adj[root].contains(second) || search.aborted {
                            continue;
                        }
                        let mut current = vec![root, second];
                        let candidates = non_adj[root].intersection(&non_adj[second]);
                        if candidates.is_empty() {
                            if search.best.len() < 2 {
                                search.best = current;
                            }
                        } else {
                            search.expand(&mut current, candidates);
                        }
                    }
                }
                None => {
                    let candidates = non_adj[root].clone();
                    if !candidates.is_empty() {
                        search.expand(&mut vec![root], candidates);
                    }
                }
            }
        }
        None => {
            let mut current = Vec::new();
            search.expand(&mut current, Bitset::full(n));
        }
    }

    let mut set: Vec<usize> = search.best.iter().map(|&p| order[p]).collect();
    set.sort_unstable();
    MisOutcome { set, nodes: search.nodes, optimal: !search.aborted }
}

/// Iterated local search for a large independent set: (1,2)-swaps to a
/// local optimum, then a seeded random forced insertion as perturbation.
/// Only ever used to seed the exact search with a better incumbent.
pub fn improve_independent_set(graph: &BitGraph, start: &[usize], iterations: u64, seed: u64) -> Vec<usize> {
    let n = graph.len();
    if n == 0 || !graph.is_independent(start) {
        return start.to_vec();
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| graph.neighbors(v).iter().collect()).collect();
    let mut state = LocalState::new(graph, &adj);
    for &v in start {
        state.insert(v);
    }
    for v in 0..n {
        state.add_if_free(v);
    }
    for v in state.members() {
        state.queued[v] = true;
        state.queue.push(v);
    }
    state.two_improve();
    let mut best = state.members();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..iterations {
        let v = rng.gen_range(0..n);
        if state.in_set[v] {
            continue;
        }
        let saved = state.members();
        state.force(v);
        state.two_improve();
        if state.size > best.len() {
            best = state.members();
        } else if state.size < saved.len() && rng.gen_range(0..=saved.len()) != 0 {
            state.reset(&saved);
        }
    }
    best.sort_unstable();
    best
}

struct LocalState<'a> {
    graph: &'a BitGraph,
    adj: &'a [Vec<usize>],
    in_set: Vec<bool>,
    /// Number of solution neighbours.
    tight: Vec<usize>,
    /// Sum of solution neighbours; names the neighbour when `tight` is 1.
    mate_sum: Vec<usize>,
    size: usize,
    queue: Vec<usize>,
    queued: Vec<bool>,
}

impl<'a> LocalState<'a> {
    fn new(graph: &'a BitGraph, adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        LocalState {
            graph,
            adj,
            in_set: vec![false; n],
            tight: vec![0; n],
            mate_sum: vec![0; n],
            size: 0,
            queue: Vec::new(),
            queued: vec![false; n],
        }
    }

    fn members(&self) -> Vec<usize> {
        (0..self.in_set.len()).filter(|&v| self.in_set[v]).collect()
    }

    fn reset(&mut self, set: &[usize]) {
        for v in self.members() {
            self.remove(v);
        }
        for &v in set {
            self.insert(v);
        }
        self.queue.clear();
        self.queued.iter_mut().for_each(|q| *q = false);
    }

    /// Queues the solution vertices whose (1,2)-swap options may have
    /// changed around `v`: `v` itself and the unique solution neighbour of
    /// every 1-tight vertex next to it.
    fn touch(&mut self, v: usize) {
        let adj = self.adj;
        for &u in std::iter::once(&v).chain(&adj[v]) {
            let x = if self.in_set[u] {
                u
            } else if self.tight[u] == 1 {
                self.mate_sum[u]
            } else {
                continue;
            };
            if !self.queued[x] {
                self.queued[x] = true;
                self.queue.push(x);
            }
        }
    }

    fn insert(&mut self, v: usize) {
        self.in_set[v] = true;
        self.size += 1;
        for &u in &self.adj[v] {
            self.tight[u] += 1;
            self.mate_sum[u] += v;
        }
    }

    fn remove(&mut self, v: usize) {
        self.in_set[v] = false;
        self.size -= 1;
        for &u in &self.adj[v] {
            self.tight[u] -= 1;
            self.mate_sum[u] -= v;
        }
    }

    fn add_if_free(&mut self, v: usize) {
        if !self.in_set[v] && self.tight[v] == 0 {
            self.insert(v);
        }
    }

    /// Inserts `v`, evicts its solution neighbours and refills around them.
    fn force(&mut self, v: usize) {
        let adj = self.adj;
        let evicted: Vec<usize> = adj[v].iter().copied().filter(|&u| self.in_set[u]).collect();
        for &u in &evicted {
            self.remove(u);
        }
        self.insert(v);
        for &u in &evicted {
            for &y in &adj[u] {
                self.add_if_free(y);
            }
        }
        self.touch(v);
        for &u in &evicted {
            self.touch(u);
        }
    }

    /// Applies (1,2)-swaps around queued vertices until none is left.
    fn two_improve(&mut self) {
        let adj = self.adj;
        while let Some(x) = self.queue.pop() {
            self.queued[x] = false;
            if !self.in_set[x] {
                continue;
            }
            let mut one_tight = Bitset::new(adj.len());
            for &u in &adj[x] {
                if self.tight[u] == 1 {
                    one_tight.insert(u);
                }
            }
            let pair = one_tight
                .iter()
                .find_map(|u| one_tight.first_outside(self.graph.neighbors(u), u).map(|w| (u, w)));
            if let Some((u, w)) = pair {
                self.remove(x);
                self.insert(u);
                self.insert(w);
                for &y in &adj[x] {
                    self.add_if_free(y);
                }
                for z in [x, u, w] {
                    self.touch(z);
                }
            }
        }
    }
}
