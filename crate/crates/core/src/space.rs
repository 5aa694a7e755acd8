//! The ambient space F_q^{n×m}: tuples of matrices, sum-rank weight and
//! distance, enumeration, codes, and the expansion map into a Hamming space
//! over GF(q^m).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{poly, FieldElem, FieldSpec, Matrix};

/// Shape of a sum-rank space: block sizes `n_i × m_i` over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrkParams {
    field: FieldSpec,
    n: Vec<usize>,
    m: Vec<usize>,
}

impl SrkParams {
    pub fn new(field: FieldSpec, n: Vec<usize>, m: Vec<usize>) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::InvalidParams("at least one block is required".into()));
        }
        if n.len() != m.len() {
            return Err(Error::InvalidParams(format!(
                "n has {} blocks but m has {}",
                n.len(),
                m.len()
            )));
        }
        if n.iter().chain(&m).any(|&x| x == 0) {
            return Err(Error::InvalidParams("block dimensions must be positive".into()));
        }
        if let Some(i) = (0..n.len()).find(|&i| m[i] < n[i]) {
            return Err(Error::InvalidParams(format!(
                "block {} has m = {} < n = {}; blocks must satisfy m_i >= n_i (transpose the block)",
                i + 1,
                m[i],
                n[i]
            )));
        }
        Ok(SrkParams { field, n, m })
    }

    /// Builds params over GF(q), `q` a prime power.
    pub fn with_order(q: u32, n: Vec<usize>, m: Vec<usize>) -> Result<Self> {
        Self::new(FieldSpec::from_order(q)?, n, m)
    }

    /// The Hamming space of length `len` over GF(q): all blocks 1×1.
    pub fn hamming(q: u32, len: usize) -> Result<Self> {
        Self::with_order(q, vec![1; len], vec![1; len])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn n(&self) -> &[usize] {
        &self.n
    }
    pub fn m(&self) -> &[usize] {
        &self.m
    }
    /// Number of blocks `t`.
    pub fn t(&self) -> usize {
        self.n.len()
    }
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.n.iter().copied().zip(self.m.iter().copied())
    }
    /// `Σ n_i m_i`, the dimension over GF(q).
    pub fn total_entries(&self) -> usize {
        self.blocks().map(|(n, m)| n * m).sum()
    }
    /// Largest possible sum-rank weight, `Σ min(n_i, m_i)`.
    pub fn max_weight(&self) -> usize {
        self.blocks().map(|(n, m)| n.min(m)).sum()
    }
    /// `N = Σ n_i`, the length of the Hamming image.
    pub fn hamming_length(&self) -> usize {
        self.n.iter().sum()
    }
    pub fn max_m(&self) -> usize {
        *self.m.iter().max().expect("at least one block")
    }
    pub fn min_m(&self) -> usize {
        *self.m.iter().min().expect("at least one block")
    }

    /// `|V| = q^{Σ n_i m_i}` when it fits in a `u64`.
    pub fn space_size_u64(&self) -> Option<u64> {
        (self.q() as u64).checked_pow(self.total_entries() as u32)
    }

    pub fn to_spec(&self) -> ParamsSpec {
        ParamsSpec { q: self.q(), n: self.n.clone(), m: self.m.clone() }
    }
}

impl fmt::Display for SrkParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "q={} n=({}) m=({})", self.q(), join(&self.n), join(&self.m))
    }
}

/// Serializable form of [`SrkParams`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsSpec {
    pub q: u32,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
}

impl ParamsSpec {
    pub fn build(&self) -> Result<SrkParams> {
        SrkParams::with_order(self.q, self.n.clone(), self.m.clone())
    }
}

/// An element `(X_1, …, X_t)` of the space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SrkVector {
    blocks: Vec<Matrix>,
}

impl SrkVector {
    pub fn zero(params: &SrkParams) -> Self {
        SrkVector { blocks: params.blocks().map(|(n, m)| Matrix::zeros(n, m)).collect() }
    }

    pub fn from_blocks(params: &SrkParams, blocks: Vec<Matrix>) -> Result<Self> {
        let v = SrkVector { blocks };
        v.check_shape(params)?;
        Ok(v)
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn check_shape(&self, params: &SrkParams) -> Result<()> {
        if self.blocks.len() != params.t()
            || self.blocks.iter().zip(params.blocks()).any(|(b, (n, m))| b.rows() != n || b.cols() != m)
        {
            return Err(Error::ShapeMismatch(format!("vector does not conform to {params}")));
        }
        Ok(())
    }

    /// Position in the canonical order: blocks in order, entries row-major,
    /// read as a base-`q` number with the first entry most significant.
    pub fn index(&self, q: u32) -> u64 {
        self.blocks
            .iter()
            .flat_map(|b| b.entries())
            .fold(0u64, |acc, e| acc * q as u64 + e.0 as u64)
    }

    pub fn from_index(params: &SrkParams, mut index: u64) -> Self {
        let q = params.q() as u64;
        let mut blocks: Vec<Matrix> = Vec::with_capacity(params.t());
        for (n, m) in params.blocks().collect::<Vec<_>>().into_iter().rev() {
            let radix = q.pow((n * m) as u32);
            blocks.push(Matrix::from_lex_index(n, m, params.q(), index % radix));
            index /= radix;
        }
        blocks.reverse();
        SrkVector { blocks }
    }

    pub fn sub(&self, other: &SrkVector, field: &FieldSpec) -> Result<SrkVector> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::ShapeMismatch("different block counts".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.sub(b, field))
            .collect::<Result<_>>()?;
        Ok(SrkVector { blocks })
    }

    pub fn add(&self, other: &SrkVector, field: &FieldSpec) -> Result<SrkVector> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::ShapeMismatch("different block counts".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b, field))
            .collect::<Result<_>>()?;
        Ok(SrkVector { blocks })
    }

    /// Entry lists per block, row-major, as raw field indices.
    pub fn to_entry_lists(&self) -> Vec<Vec<u32>> {
        self.blocks.iter().map(|b| b.entries().iter().map(|e| e.0 as u32).collect()).collect()
    }

    pub fn from_entry_lists(params: &SrkParams, lists: &[Vec<u32>]) -> Result<Self> {
        if lists.len() != params.t() {
            return Err(Error::ShapeMismatch(format!(
                "word has {} blocks, expected {}",
                lists.len(),
                params.t()
            )));
        }
        let blocks = lists
            .iter()
            .zip(params.blocks())
            .map(|(list, (n, m))| {
                let entries = list.iter().map(|&x| params.field().elem(x)).collect::<Result<Vec<_>>>()?;
                Matrix::from_entries(n, m, entries)
            })
            .collect::<Result<_>>()?;
        Ok(SrkVector { blocks })
    }
}

/// `srk(X) = Σ rk(X_i)`.
pub fn srk_weight(x: &SrkVector, params: &SrkParams) -> usize {
    x.blocks.iter().map(|b| b.rank(params.field())).sum()
}

pub fn srk_distance(x: &SrkVector, y: &SrkVector, params: &SrkParams) -> Result<usize> {
    x.check_shape(params)?;
    y.check_shape(params)?;
    Ok(srk_weight(&x.sub(y, params.field())?, params))
}

/// Every element of the space in canonical order.
pub fn enumerate_space(params: &SrkParams, budget: u64) -> Result<impl Iterator<Item = SrkVector> + '_> {
    let size = params
        .space_size_u64()
        .filter(|&s| s <= budget)
        .ok_or(Error::BudgetExceeded { what: "space enumeration", budget })?;
    Ok((0..size).map(move |i| SrkVector::from_index(params, i)))
}

/// Every element of sum-rank weight exactly `w`, in canonical order.
pub fn enumerate_sphere(params: &SrkParams, w: usize, budget: u64) -> Result<Vec<SrkVector>> {
    let dist = crate::counting::weight_distribution(params);
    let size = dist.get(w).cloned().unwrap_or_default();
    if size > num_bigint::BigUint::from(budget) {
        return Err(Error::BudgetExceeded { what: "sphere enumeration", budget });
    }
    let field = params.field();
    let per_block: Vec<Vec<(Matrix, usize)>> = params
        .blocks()
        .map(|(n, m)| {
            Ok(crate::gf::enumerate_matrices(n, m, field, budget)?
                .map(|mat| {
                    let r = mat.rank(field);
                    (mat, r)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    // max weight reachable by blocks i.. (suffix sums)
    let mut tail_max = vec![0usize; params.t() + 1];
    for (i, (n, m)) in params.blocks().enumerate().collect::<Vec<_>>().into_iter().rev() {
        tail_max[i] = tail_max[i + 1] + n.min(m);
    }
    let mut out = Vec::new();
    let mut stack: Vec<Matrix> = Vec::with_capacity(params.t());
    fn rec(
        i: usize,
        remaining: usize,
        per_block: &[Vec<(Matrix, usize)>],
        tail_max: &[usize],
        stack: &mut Vec<Matrix>,
        out: &mut Vec<SrkVector>,
    ) {
        if i == per_block.len() {
            if remaining == 0 {
                out.push(SrkVector { blocks: stack.clone() });
            }
            return;
        }
        for (mat, r) in &per_block[i] {
            if *r > remaining || remaining - r > tail_max[i + 1] {
                continue;
            }
            stack.push(mat.clone());
            rec(i + 1, remaining - r, per_block, tail_max, stack, out);
            stack.pop();
        }
    }
    if w <= tail_max[0] {
        rec(0, w, &per_block, &tail_max, &mut stack, &mut out);
    }
    Ok(out)
}

/// A sum-rank-metric code: a nonempty set of distinct words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrkCode {
    params: SrkParams,
    words: Vec<SrkVector>,
    min_dist: Option<usize>,
}

impl SrkCode {
    /// Words are kept in canonical order; duplicates are rejected.
    pub fn new(params: SrkParams, mut words: Vec<SrkVector>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParams("a code must be nonempty".into()));
        }
        for w in &words {
            w.check_shape(&params)?;
        }
        let q = params.q();
        words.sort_by_cached_key(|w| w.index(q));
        if words.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidParams("code words must be distinct".into()));
        }
        let min_dist = compute_min_distance(&params, &words);
        Ok(SrkCode { params, words, min_dist })
    }

    pub(crate) fn from_sorted_unchecked(params: SrkParams, words: Vec<SrkVector>, min_dist: Option<usize>) -> Self {
        SrkCode { params, words, min_dist }
    }

    pub fn params(&self) -> &SrkParams {
        &self.params
    }
    pub fn words(&self) -> &[SrkVector] {
        &self.words
    }
    pub fn len(&self) -> usize {
        self.words.len()
    }
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
    /// Cached minimum distance; `None` for a single word.
    pub fn cached_min_distance(&self) -> Option<usize> {
        self.min_dist
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            q: self.params.q(),
            p: self.params.field().p(),
            e: self.params.field().e(),
            n: self.params.n().to_vec(),
            m: self.params.m().to_vec(),
            words: self.words.iter().map(SrkVector::to_entry_lists).collect(),
        }
    }

    pub fn from_file(file: &CodeFile) -> Result<Self> {
        let params = SrkParams::new(FieldSpec::new(file.p, file.e)?, file.n.clone(), file.m.clone())?;
        if params.q() != file.q {
            return Err(Error::InvalidParams(format!("q = {} but p^e = {}", file.q, params.q())));
        }
        let words = file
            .words
            .iter()
            .map(|w| SrkVector::from_entry_lists(&params, w))
            .collect::<Result<_>>()?;
        Self::new(params, words)
    }
}

fn compute_min_distance(params: &SrkParams, words: &[SrkVector]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = srk_weight(&a.sub(b, params.field()).expect("shapes checked"), params);
            best = Some(best.map_or(d, |x| x.min(d)));
        }
    }
    best
}

/// Minimum sum-rank distance over distinct pairs of codewords.
pub fn min_distance(code: &SrkCode) -> Result<usize> {
    if code.words.len() < 2 {
        return Err(Error::Precondition("minimum distance needs at least two codewords".into()));
    }
    Ok(compute_min_distance(&code.params, &code.words).expect("at least one pair"))
}

/// On-disk JSON form of a code. Each word is a list of blocks, each block a
/// row-major list of field element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub words: Vec<Vec<Vec<u32>>>,
}

/// GF(q^m) as an extension of GF(q), modulo the smallest monic irreducible
/// polynomial of degree `m` over GF(q). Elements are coordinate vectors in
/// the polynomial basis `1, α, …, α^{m−1}`.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: FieldSpec,
    degree: usize,
    modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem(pub Vec<FieldElem>);

impl ExtElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

impl ExtField {
    pub fn new(base: FieldSpec, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidParams("extension degree must be positive".into()));
        }
        let modulus = poly::smallest_irreducible(&base, degree);
        Ok(ExtField { base, degree, modulus })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![FieldElem::ZERO; self.degree])
    }

    /// `α^j` for `j < degree`.
    pub fn alpha_pow(&self, j: usize) -> ExtElem {
        let mut e = self.zero();
        e.0[j] = FieldElem::ONE;
        e
    }

    /// The polynomial basis `(1, α, …, α^{m−1})`.
    pub fn default_basis(&self) -> Vec<ExtElem> {
        (0..self.degree).map(|j| self.alpha_pow(j)).collect()
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.add(x, y)).collect())
    }

    pub fn scale(&self, c: FieldElem, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let raw = |e: &ExtElem| poly::trim(e.0.iter().map(|c| c.0 as u32).collect());
        let prod = poly::mul_mod(&self.base, &raw(a), &raw(b), &self.modulus);
        let mut out = self.zero();
        for (i, c) in prod.into_iter().enumerate() {
            out.0[i] = FieldElem(c as u16);
        }
        out
    }

    /// Whether `basis` has `degree` elements that are linearly independent over GF(q).
    pub fn is_basis(&self, basis: &[ExtElem]) -> bool {
        if basis.len() != self.degree || basis.iter().any(|b| b.0.len() != self.degree) {
            return false;
        }
        let entries = basis.iter().flat_map(|b| b.0.iter().copied()).collect();
        Matrix::from_entries(self.degree, self.degree, entries)
            .map(|mat| mat.rank(&self.base) == self.degree)
            .unwrap_or(false)
    }
}

/// A vector of length `N` over GF(q^m).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HammingVector {
    pub entries: Vec<ExtElem>,
}

impl HammingVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }
}

/// Expands every row of every block in the basis `α_1..α_m` over GF(q),
/// `m = max m_i`. Blocks narrower than `m` behave as if right-padded with
/// zero columns. The image has length `N = Σ n_i`.
pub fn f_map(x: &SrkVector, params: &SrkParams, ext: &ExtField, basis: &[ExtElem]) -> Result<HammingVector> {
    x.check_shape(params)?;
    if ext.degree() != params.max_m() || ext.base() != params.field() {
        return Err(Error::InvalidParams(format!(
            "extension field must be GF(q^{}) over GF({})",
            params.max_m(),
            params.q()
        )));
    }
    if !ext.is_basis(basis) {
        return Err(Error::InvalidParams("basis is not linearly independent over GF(q)".into()));
    }
    let mut entries = Vec::with_capacity(params.hamming_length());
    for block in x.blocks() {
        for r in 0..block.rows() {
            let mut acc = ext.zero();
            for (c, alpha) in basis.iter().enumerate().take(block.cols()) {
                let coeff = block.get(r, c);
                if !coeff.is_zero() {
                    acc = ext.add(&acc, &ext.scale(coeff, alpha));
                }
            }
            entries.push(acc);
        }
    }
    Ok(HammingVector { entries })
}

/// Outcome of checking `srk(X) ≤ wt_H(f(X))` over the whole space.
#[derive(Clone, Debug, Serialize)]
pub struct WeightCheckReport {
    pub params: ParamsSpec,
    pub checked: u64,
    /// Element indices with `srk(X) > wt_H(f(X))`; must be empty.
    pub inequality_violations: Vec<u64>,
    /// True when `n = (1,…,1)` and all `m_i` equal, where equality must hold.
    pub equality_expected: bool,
    /// Element indices with `srk(X) != wt_H(f(X))`.
    pub equality_failures: Vec<u64>,
    pub injective: bool,
    pub bijective: bool,
}

impl WeightCheckReport {
    pub fn passed(&self) -> bool {
        self.inequality_violations.is_empty()
            && self.injective
            && (!self.equality_expected || self.equality_failures.is_empty())
    }
}

pub fn wt_preservation_check(params: &SrkParams, budget: u64) -> Result<WeightCheckReport> {
    let ext = ExtField::new(params.field().clone(), params.max_m())?;
    let basis = ext.default_basis();
    let equality_expected =
        params.n().iter().all(|&n| n == 1) && params.m().iter().all(|&m| m == params.max_m());
    let mut report = WeightCheckReport {
        params: params.to_spec(),
        checked: 0,
        inequality_violations: Vec::new(),
        equality_expected,
        equality_failures: Vec::new(),
        injective: true,
        bijective: false,
    };
    let mut images = HashSet::new();
    let q = params.q();
    for x in enumerate_space(params, budget)? {
        let idx = x.index(q);
        let w = srk_weight(&x, params);
        let image = f_map(&x, params, &ext, &basis)?;
        let wh = image.weight();
        if w > wh {
            report.inequality_violations.push(idx);
        }
        if w != wh {
            report.equality_failures.push(idx);
        }
        if !images.insert(image) {
            report.injective = false;
        }
        report.checked += 1;
    }
    // |GF(q^m)^N| = q^{m·N}
    let target = (q as u64).checked_pow((params.max_m() * params.hamming_length()) as u32);
    report.bijective = report.injective && target == Some(report.checked);
    Ok(report)
}

/// Dense view of a space whose elements are addressed by their canonical
/// index. Per-block rank tables make weights and distances cheap.
#[derive(Clone, Debug)]
pub struct IndexedSpace {
    params: SrkParams,
    q: u64,
    size: u64,
    /// `q^{n_i m_i}` per block.
    radix: Vec<u64>,
    /// `rank_table[i][idx]` = rank of block matrix `idx`, when tabulated.
    rank_table: Vec<Option<Vec<u8>>>,
}

/// Blocks with at most this many matrices get a rank lookup table.
const RANK_TABLE_LIMIT: u64 = 1 << 22;

impl IndexedSpace {
    pub fn new(params: &SrkParams) -> Result<Self> {
        let size = params.space_size_u64().ok_or(Error::BudgetExceeded {
            what: "indexed space size",
            budget: u64::MAX,
        })?;
        let q = params.q() as u64;
        let field = params.field();
        let mut radix = Vec::new();
        let mut rank_table = Vec::new();
        for (n, m) in params.blocks() {
            let r = q.pow((n * m) as u32);
            radix.push(r);
            rank_table.push((r <= RANK_TABLE_LIMIT).then(|| {
                (0..r)
                    .map(|i| Matrix::from_lex_index(n, m, params.q(), i).rank(field) as u8)
                    .collect()
            }));
        }
        Ok(IndexedSpace { params: params.clone(), q, size, radix, rank_table })
    }

    pub fn params(&self) -> &SrkParams {
        &self.params
    }
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Block indices of element `x`, first block first.
    pub fn split(&self, mut x: u64) -> Vec<u64> {
        let mut out = vec![0; self.radix.len()];
        for i in (0..self.radix.len()).rev() {
            out[i] = x % self.radix[i];
            x /= self.radix[i];
        }
        out
    }

    pub fn block_rank(&self, block: usize, idx: u64) -> usize {
        match &self.rank_table[block] {
            Some(t) => t[idx as usize] as usize,
            None => {
                let (n, m) = (self.params.n()[block], self.params.m()[block]);
                Matrix::from_lex_index(n, m, self.params.q(), idx).rank(self.params.field())
            }
        }
    }

    pub fn weight(&self, mut x: u64) -> usize {
        let mut w = 0;
        for i in (0..self.radix.len()).rev() {
            w += self.block_rank(i, x % self.radix[i]);
            x /= self.radix[i];
        }
        w
    }

    fn combine(&self, mut x: u64, mut y: u64, negate_y: bool) -> u64 {
        let field = self.params.field();
        if field.p() == 2 {
            // Digits of GF(2^e) elements pack into contiguous bit fields.
            return x ^ y;
        }
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            let a = FieldElem((x % self.q) as u16);
            let mut b = FieldElem((y % self.q) as u16);
            if negate_y {
                b = field.neg(b);
            }
            out += field.add(a, b).0 as u64 * place;
            place *= self.q;
            x /= self.q;
            y /= self.q;
        }
        out
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        self.combine(x, y, false)
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.combine(x, y, true)
    }

    pub fn distance(&self, x: u64, y: u64) -> usize {
        self.weight(self.sub(x, y))
    }

    pub fn vector(&self, x: u64) -> SrkVector {
        SrkVector::from_index(&self.params, x)
    }

    /// Builds a code from element indices; the minimum distance is computed
    /// with the indexed rank tables.
    pub fn code_from_indices(&self, mut indices: Vec<u64>) -> Result<SrkCode> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::InvalidParams("a code must be nonempty".into()));
        }
        let mut min: Option<usize> = None;
        for (i, &a) in indices.iter().enumerate() {
            for &b in &indices[i + 1..] {
                let d = self.distance(a, b);
                min = Some(min.map_or(d, |x| x.min(d)));
            }
        }
        let words = indices.iter().map(|&i| self.vector(i)).collect();
        Ok(SrkCode::from_sorted_unchecked(self.params.clone(), words, min))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: u32, n: &[usize], m: &[usize]) -> SrkParams {
        SrkParams::with_order(q, n.to_vec(), m.to_vec()).unwrap()
    }

    fn mat(p: &SrkParams, rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(p.field(), rows).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SrkParams::with_order(2, vec![2], vec![1]).is_err());
        assert!(SrkParams::with_order(2, vec![1, 1], vec![1]).is_err());
        assert!(SrkParams::with_order(2, vec![], vec![]).is_err());
        assert!(SrkParams::with_order(6, vec![1], vec![1]).is_err());
        let p = params(4, &[2, 1, 1], &[2, 2, 2]);
        assert_eq!(p.field().p(), 2);
        assert_eq!(p.field().e(), 2);
        assert_eq!(p.total_entries(), 8);
        assert_eq!(p.max_weight(), 4);
        assert_eq!(p.hamming_length(), 4);
    }

    #[test]
    fn weight_examples() {
        let p = params(2, &[2], &[2]);
        assert_eq!(srk_weight(&SrkVector::zero(&p), &p), 0);
        let x = SrkVector::from_blocks(&p, vec![Matrix::identity(2)]).unwrap();
        assert_eq!(srk_weight(&x, &p), 2);

        let p = params(2, &[2, 1], &[2, 2]);
        let x = SrkVector::from_blocks(&p, vec![mat(&p, &[&[1, 1], &[1, 1]]), mat(&p, &[&[1, 0]])]).unwrap();
        assert_eq!(srk_weight(&x, &p), 2);
        assert_eq!(srk_distance(&x, &x, &p).unwrap(), 0);
        assert_eq!(srk_distance(&x, &SrkVector::zero(&p), &p).unwrap(), 2);
        let other = params(2, &[1, 1], &[2, 2]);
        assert!(srk_distance(&x, &SrkVector::zero(&other), &p).is_err());
    }

    #[test]
    fn index_round_trip() {
        let p = params(3, &[1, 2], &[2, 2]);
        for i in [0u64, 1, 17, 728] {
            assert_eq!(SrkVector::from_index(&p, i).index(3), i);
        }
        let all: Vec<_> = enumerate_space(&p, 1000).unwrap().collect();
        assert_eq!(all.len(), 729);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sphere_examples() {
        let p = params(2, &[2], &[2]);
        assert_eq!(enumerate_sphere(&p, 0, 100).unwrap(), vec![SrkVector::zero(&p)]);
        assert_eq!(enumerate_sphere(&p, 1, 100).unwrap().len(), 9);
        let p = params(2, &[1, 1], &[1, 1]);
        let s = enumerate_sphere(&p, 1, 100).unwrap();
        let idx: Vec<_> = s.iter().map(|v| v.index(2)).collect();
        assert_eq!(idx, vec![1, 2]);
        assert!(enumerate_sphere(&p, 5, 100).unwrap().is_empty());
        assert!(matches!(
            enumerate_sphere(&params(2, &[2], &[2]), 1, 5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn sphere_filter_matches() {
        let p = params(3, &[1, 2], &[1, 2]);
        let all: Vec<_> = enumerate_space(&p, 1 << 20).unwrap().collect();
        for w in 0..=3 {
            let filtered: Vec<_> = all.iter().filter(|x| srk_weight(x, &p) == w).cloned().collect();
            assert_eq!(enumerate_sphere(&p, w, 1 << 20).unwrap(), filtered);
        }
    }

    #[test]
    fn code_min_distance() {
        let p = params(2, &[1, 1, 1], &[1, 1, 1]);
        let words: Vec<_> = [0b000, 0b110, 0b101, 0b011].iter().map(|&i| SrkVector::from_index(&p, i)).collect();
        let code = SrkCode::new(p.clone(), words).unwrap();
        assert_eq!(min_distance(&code).unwrap(), 2);
        assert_eq!(code.cached_min_distance(), Some(2));

        let all: Vec<_> = enumerate_space(&p, 100).unwrap().collect();
        assert_eq!(min_distance(&SrkCode::new(p.clone(), all).unwrap()).unwrap(), 1);

        let x = SrkVector::from_index(&p, 0b111);
        let pair = SrkCode::new(p.clone(), vec![SrkVector::zero(&p), x.clone()]).unwrap();
        assert_eq!(min_distance(&pair).unwrap(), 3);

        let single = SrkCode::new(p.clone(), vec![x.clone()]).unwrap();
        assert!(min_distance(&single).is_err());
        assert!(SrkCode::new(p.clone(), vec![x.clone(), x]).is_err());
        assert!(SrkCode::new(p, vec![]).is_err());
    }

    #[test]
    fn code_file_round_trip() {
        let p = params(4, &[1, 2], &[2, 2]);
        let words = [3u64, 77, 4000].iter().map(|&i| SrkVector::from_index(&p, i)).collect();
        let code = SrkCode::new(p, words).unwrap();
        let json = serde_json::to_string(&code.to_file()).unwrap();
        let back: CodeFile = serde_json::from_str(&json).unwrap();
        assert_eq!(SrkCode::from_file(&back).unwrap(), code);
    }

    #[test]
    fn f_map_examples() {
        let p = params(2, &[1], &[2]);
        let ext = ExtField::new(p.field().clone(), 2).unwrap();
        let basis = ext.default_basis();
        let x = SrkVector::from_blocks(&p, vec![mat(&p, &[&[1, 0]])]).unwrap();
        let h = f_map(&x, &p, &ext, &basis).unwrap();
        assert_eq!(h.entries, vec![ext.alpha_pow(0)]);
        assert_eq!(f_map(&SrkVector::zero(&p), &p, &ext, &basis).unwrap().weight(), 0);

        let p = params(2, &[1, 1], &[2, 2]);
        let x = SrkVector::from_blocks(&p, vec![mat(&p, &[&[1, 1]]), mat(&p, &[&[0, 1]])]).unwrap();
        let h = f_map(&x, &p, &ext, &basis).unwrap();
        let one_plus_alpha = ext.add(&ext.alpha_pow(0), &ext.alpha_pow(1));
        assert_eq!(h.entries, vec![one_plus_alpha, ext.alpha_pow(1)]);

        let bad = vec![ext.alpha_pow(1), ext.alpha_pow(1)];
        assert!(f_map(&x, &p, &ext, &bad).is_err());
    }

    #[test]
    fn ext_field_is_a_field() {
        let base = FieldSpec::new(2, 1).unwrap();
        let ext = ExtField::new(base, 2).unwrap();
        // x^2 + x + 1 over GF(2)
        assert_eq!(ext.modulus(), &[1, 1, 1]);
        let a = ext.alpha_pow(1);
        // α^2 = α + 1
        assert_eq!(ext.mul(&a, &a), ext.add(&ext.alpha_pow(0), &a));
    }

    #[test]
    fn weight_check_examples() {
        let r = wt_preservation_check(&params(2, &[1, 1], &[2, 2]), 1 << 20).unwrap();
        assert_eq!(r.checked, 16);
        assert!(r.equality_expected && r.equality_failures.is_empty());
        assert!(r.injective && r.bijective && r.passed());

        let r = wt_preservation_check(&params(2, &[2], &[2]), 1 << 20).unwrap();
        assert_eq!(r.checked, 16);
        assert!(r.inequality_violations.is_empty());
        assert!(!r.equality_expected);
        // [[1,0],[1,0]] has rank 1 but two nonzero rows.
        let x = SrkVector::from_blocks(&params(2, &[2], &[2]), vec![Matrix::from_rows(
            &FieldSpec::new(2, 1).unwrap(),
            &[&[1, 0], &[1, 0]],
        )
        .unwrap()])
        .unwrap();
        assert!(r.equality_failures.contains(&x.index(2)));
        assert!(r.passed());
    }

    #[test]
    fn indexed_space_agrees_with_matrices() {
        for p in [params(3, &[1, 2], &[2, 2]), params(4, &[1, 1], &[1, 2]), params(2, &[2, 1], &[3, 1])] {
            let space = IndexedSpace::new(&p).unwrap();
            let field = p.field();
            let n = space.size();
            for x in (0..n).step_by(7) {
                let vx = space.vector(x);
                assert_eq!(space.weight(x), srk_weight(&vx, &p));
                for y in (0..n).step_by(53) {
                    let vy = space.vector(y);
                    assert_eq!(space.sub(x, y), vx.sub(&vy, field).unwrap().index(p.q()));
                    assert_eq!(space.add(x, y), vx.add(&vy, field).unwrap().index(p.q()));
                }
            }
        }
    }
}
