//! Exact closed-form combinatorics: Gaussian binomials, rank counts, ball
//! volumes, and the pair/intersection counts used to bound the number of
//! edges inside a neighbourhood of the power graph.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::space::SrkParams;

/// Arbitrary-precision nonnegative integer used for every count.
pub type Nat = BigUint;

pub fn pow(q: u64, e: u64) -> Nat {
    num_traits::pow(Nat::from(q), e as usize)
}

fn exact_div(num: Nat, den: &Nat) -> Nat {
    let (quot, rem) = num.div_rem(den);
    assert!(rem.is_zero(), "closed form produced a non-integral count");
    quot
}

/// Number of `k`-dimensional subspaces of GF(q)^n; zero when `k > n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    let k = k.min(n - k);
    let mut num = Nat::one();
    let mut den = Nat::one();
    for i in 0..k as u64 {
        num *= pow(q, n as u64 - i) - 1u32;
        den *= pow(q, i + 1) - 1u32;
    }
    exact_div(num, &den)
}

/// `∏_{i<r} (q^m − q^i)`: ordered `r`-tuples of independent vectors in GF(q)^m.
fn independent_tuples(m: u32, r: u32, q: u64) -> Nat {
    (0..r as u64).fold(Nat::one(), |acc, i| acc * (pow(q, m as u64) - pow(q, i)))
}

/// Number of `n × m` matrices of rank `r` over GF(q).
pub fn count_rank_matrices(n: u32, m: u32, r: u32, q: u64) -> Result<Nat> {
    if r > n.min(m) {
        return Err(Error::Precondition(format!("rank {r} exceeds min({n}, {m})")));
    }
    Ok(gaussian_binomial(n, r, q) * independent_tuples(m, r, q))
}

/// Number of `n × n` matrices of rank `k`, via the product
/// `∏_{ℓ<k} (q^n − q^ℓ)² / (q^k − q^ℓ)`.
pub fn square_rank_count(n: u32, k: u32, q: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    let mut num = Nat::one();
    let mut den = Nat::one();
    for l in 0..k as u64 {
        let a = pow(q, n as u64) - pow(q, l);
        num *= &a * &a;
        den *= pow(q, k as u64) - pow(q, l);
    }
    exact_div(num, &den)
}

/// Rank histogram of one `n × m` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDistribution {
    pub n: u32,
    pub m: u32,
    /// `counts[r]` = number of matrices of rank `r`.
    pub counts: Vec<Nat>,
}

impl RankDistribution {
    pub fn new(n: u32, m: u32, q: u64) -> Self {
        let counts = (0..=n.min(m))
            .map(|r| count_rank_matrices(n, m, r, q).expect("rank in range"))
            .collect();
        RankDistribution { n, m, counts }
    }

    pub fn total(&self) -> Nat {
        self.counts.iter().sum()
    }
}

/// `dist[w]` = number of elements of sum-rank weight exactly `w`, obtained by
/// convolving the per-block rank histograms.
pub fn weight_distribution(params: &SrkParams) -> Vec<Nat> {
    let q = params.q() as u64;
    let mut dist = vec![Nat::one()];
    for (n, m) in params.blocks() {
        let block = RankDistribution::new(n as u32, m as u32, q);
        let mut next = vec![Nat::zero(); dist.len() + block.counts.len() - 1];
        for (w, a) in dist.iter().enumerate() {
            for (r, b) in block.counts.iter().enumerate() {
                next[w + r] += a * b;
            }
        }
        dist = next;
    }
    dist
}

/// `V_q(n, m, k)`: number of elements of sum-rank weight at most `k`.
pub fn ball_volume(params: &SrkParams, k: usize) -> Nat {
    weight_distribution(params).into_iter().take(k + 1).sum()
}

/// `|V| = q^{Σ n_i m_i}`.
pub fn space_size(params: &SrkParams) -> Nat {
    pow(params.q() as u64, params.total_entries() as u64)
}

/// Degree of the power graph Γ^k, i.e. `V(k) − 1`.
pub fn degree(params: &SrkParams, k: usize) -> Result<Nat> {
    if k == 0 {
        return Err(Error::Precondition("the power graph needs k >= 1".into()));
    }
    Ok(ball_volume(params, k) - 1u32)
}

/// Number of `j`-dimensional subspaces `V ⊆ GF(q)^n` with `dim(U ∩ V) = c`
/// for a fixed `i`-dimensional `U`:
/// `q^{(i−c)(j−c)} [i choose c]_q [n−i choose j−c]_q`.
pub fn subspace_intersection_count(n: u32, i: u32, j: u32, c: u32, q: u64) -> Nat {
    if i > n || j > n || c > i.min(j) {
        return Nat::zero();
    }
    pow(q, ((i - c) * (j - c)) as u64) * gaussian_binomial(i, c, q) * gaussian_binomial(n - i, j - c, q)
}

/// Number of rank-`j` matrices `Y ∈ GF(q)^{n×n}` with
/// `dim(col X ∩ col Y) = c` for a fixed rank-`i` matrix `X`.
pub fn q_closed(i: u32, j: u32, c: u32, n: u32, q: u64) -> Result<Nat> {
    if c > j {
        return Err(Error::Precondition(format!("c = {c} exceeds j = {j}")));
    }
    if i > n || j > n {
        return Err(Error::Precondition(format!("ranks ({i}, {j}) exceed n = {n}")));
    }
    Ok(subspace_intersection_count(n, i, j, c, q) * independent_tuples(n, j, q))
}

/// Upper bound on the number of pairs `(X, Y)` of `n × n` matrices with
/// `rk X = i`, `rk Y = j`, `rk(X − Y) ≤ k`:
/// `M(i) · 2 · Σ_{c=⌈(i+j−k)/2⌉}^{j} Q(i, j, c)`.
pub fn p_upper(i: u32, j: u32, k: u32, n: u32, q: u64) -> Result<Nat> {
    if i < j {
        return Err(Error::Precondition(format!("need i >= j, got i = {i}, j = {j}")));
    }
    if i + j < k {
        return Err(Error::Precondition(format!("need i + j >= k, got {i} + {j} < {k}")));
    }
    if i > n {
        return Err(Error::Precondition(format!("rank {i} exceeds n = {n}")));
    }
    let start = (i + j - k).div_ceil(2);
    let mut sum = Nat::zero();
    for c in start..=j {
        sum += q_closed(i, j, c, n, q)?;
    }
    Ok(square_rank_count(n, i, q) * 2u32 * sum)
}

/// Upper bound on the number of edges inside one neighbourhood of Γ^k for
/// params whose first block is square `n × n`, with `1 ≤ k ≤ n`:
/// `2 q^{2 Σ_{ℓ≥2} n_ℓ m_ℓ} Σ_{i=1}^{k} Σ_{j=1}^{i} P(i, j, k)`,
/// where terms with `i + j < k` use the trivial pair count `M(i) M(j)`.
pub fn t_upper(params: &SrkParams, k: usize) -> Result<Nat> {
    let (n, m) = (params.n()[0], params.m()[0]);
    if n != m {
        return Err(Error::Precondition(format!("leading block {n}x{m} is not square")));
    }
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("need 1 <= k <= {n}, got k = {k}")));
    }
    let q = params.q() as u64;
    let (n, k) = (n as u32, k as u32);
    let tail: usize = params.blocks().skip(1).map(|(a, b)| a * b).sum();
    let mut sum = Nat::zero();
    for i in 1..=k {
        for j in 1..=i {
            sum += if i + j >= k {
                p_upper(i, j, k, n, q)?
            } else {
                square_rank_count(n, i, q) * square_rank_count(n, j, q)
            };
        }
    }
    Ok(pow(q, 2 * tail as u64) * 2u32 * sum)
}

/// Natural logarithm of a big integer; `-inf` for zero.
pub fn ln_nat(x: &Nat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ε* = 2 − ln T / ln D`, the largest ε with `T ≤ D^{2−ε}`.
/// A triangle-free neighbourhood (`T = 0`) yields `+∞`.
pub fn epsilon_star(d: &Nat, t: &Nat) -> Result<f64> {
    if *d < Nat::from(2u32) {
        return Err(Error::Precondition("epsilon* needs D >= 2".into()));
    }
    if t.is_zero() {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 - ln_nat(t) / ln_nat(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(x: u64) -> Nat {
        Nat::from(x)
    }

    fn params(q: u32, n: &[usize], m: &[usize]) -> SrkParams {
        SrkParams::with_order(q, n.to_vec(), m.to_vec()).unwrap()
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(5, 0, 3), nat(1));
        assert_eq!(gaussian_binomial(2, 1, 2), nat(3));
        assert_eq!(gaussian_binomial(4, 2, 2), nat(35));
        assert_eq!(gaussian_binomial(2, 3, 2), nat(0));
        for n in 0..7 {
            for k in 0..=n {
                for q in [2, 3, 4] {
                    assert_eq!(gaussian_binomial(n, k, q), gaussian_binomial(n, n - k, q));
                }
            }
        }
    }

    #[test]
    fn rank_count_examples() {
        assert_eq!(count_rank_matrices(2, 2, 0, 2).unwrap(), nat(1));
        assert_eq!(count_rank_matrices(2, 2, 1, 2).unwrap(), nat(9));
        assert_eq!(count_rank_matrices(2, 2, 2, 2).unwrap(), nat(6));
        assert!(count_rank_matrices(2, 3, 3, 2).is_err());
    }

    #[test]
    fn rank_counts_sum_to_space() {
        for n in 1..=4 {
            for m in 1..=4 {
                for q in [2u64, 3, 4] {
                    let d = RankDistribution::new(n, m, q);
                    assert_eq!(d.counts[0], nat(1));
                    assert_eq!(d.total(), pow(q, (n * m) as u64));
                }
            }
        }
    }

    #[test]
    fn square_product_matches_rectangular_formula() {
        for n in 0..=6 {
            for k in 0..=n {
                for q in [2u64, 3, 5] {
                    assert_eq!(square_rank_count(n, k, q), count_rank_matrices(n, n, k, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn ball_volume_examples() {
        let p = params(2, &[2], &[2]);
        assert_eq!(ball_volume(&p, 0), nat(1));
        assert_eq!(ball_volume(&p, 1), nat(10));
        assert_eq!(ball_volume(&params(2, &[1, 1], &[1, 1]), 2), nat(4));
        assert_eq!(ball_volume(&params(3, &[1, 2], &[2, 2]), 0), nat(1));
    }

    #[test]
    fn ball_volume_monotone_and_saturates() {
        for p in [params(2, &[1, 2], &[3, 2]), params(3, &[2, 1], &[2, 1]), params(4, &[1, 1, 1], &[2, 1, 1])] {
            let mut prev = Nat::zero();
            for k in 0..=p.max_weight() + 2 {
                let v = ball_volume(&p, k);
                assert!(v >= prev);
                prev = v;
            }
            assert_eq!(ball_volume(&p, p.max_weight()), space_size(&p));
        }
    }

    #[test]
    fn space_size_examples() {
        assert_eq!(space_size(&params(2, &[1, 1], &[1, 1])), nat(4));
        assert_eq!(space_size(&params(2, &[2], &[2])), nat(16));
        assert_eq!(space_size(&params(3, &[1, 2], &[2, 2])), nat(729));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&params(2, &[1, 1], &[1, 1]), 1).unwrap(), nat(2));
        assert_eq!(degree(&params(2, &[2], &[2]), 1).unwrap(), nat(9));
        assert_eq!(degree(&params(2, &[1, 1, 1], &[1, 1, 1]), 2).unwrap(), nat(6));
        assert!(degree(&params(2, &[2], &[2]), 0).is_err());
    }

    #[test]
    fn q_closed_examples() {
        assert_eq!(q_closed(1, 1, 1, 2, 2).unwrap(), nat(3));
        assert_eq!(q_closed(1, 1, 0, 2, 2).unwrap(), nat(6));
        // j − c > n − i
        assert_eq!(q_closed(2, 2, 0, 3, 2).unwrap(), nat(0));
        assert!(q_closed(1, 1, 2, 2, 2).is_err());
    }

    #[test]
    fn q_sums_to_rank_count() {
        for q in [2u64, 3] {
            for n in 0..=6 {
                for i in 0..=n {
                    for j in 0..=n {
                        let s: Nat = (0..=j).map(|c| q_closed(i, j, c, n, q).unwrap()).sum();
                        assert_eq!(s, square_rank_count(n, j, q), "q={q} n={n} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn subspace_count_examples() {
        assert_eq!(subspace_intersection_count(2, 1, 1, 1, 2), nat(1));
        assert_eq!(subspace_intersection_count(2, 1, 1, 0, 2), nat(2));
        for n in 0..6 {
            for i in 0..=n {
                for j in 0..=n {
                    let s: Nat = (0..=j).map(|c| subspace_intersection_count(n, i, j, c, 3)).sum();
                    assert_eq!(s, gaussian_binomial(n, j, 3));
                }
            }
        }
    }

    #[test]
    fn p_upper_examples() {
        assert_eq!(p_upper(1, 1, 2, 2, 2).unwrap(), nat(162));
        assert_eq!(p_upper(1, 1, 0, 2, 2).unwrap(), nat(54));
        assert!(p_upper(1, 2, 2, 2, 2).is_err());
        assert!(p_upper(1, 1, 3, 2, 2).is_err());
    }

    #[test]
    fn t_upper_examples() {
        assert_eq!(t_upper(&params(2, &[2], &[2]), 1).unwrap(), nat(108));
        // extra blocks multiply by q^{2 Σ n m}
        let with_tail = t_upper(&params(2, &[2, 1], &[2, 1]), 1).unwrap();
        assert_eq!(with_tail, nat(108 * 4));
        assert!(t_upper(&params(2, &[1, 2], &[2, 2]), 1).is_err());
        assert!(t_upper(&params(2, &[2], &[2]), 3).is_err());
        assert!(t_upper(&params(2, &[2], &[2]), 0).is_err());
    }

    #[test]
    fn epsilon_star_examples() {
        assert_eq!(epsilon_star(&nat(7), &nat(49)).unwrap(), 0.0);
        assert_eq!(epsilon_star(&nat(7), &nat(1)).unwrap(), 2.0);
        let e = epsilon_star(&nat(6), &nat(12)).unwrap();
        assert!((e - 0.613147).abs() < 1e-6, "{e}");
        assert!(epsilon_star(&nat(6), &nat(0)).unwrap().is_infinite());
        assert!(epsilon_star(&nat(1), &nat(1)).is_err());
    }

    #[test]
    fn ln_nat_large_values() {
        let x = pow(3, 2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((ln_nat(&x) - expected).abs() / expected < 1e-12);
        assert_eq!(ln_nat(&nat(1)), 0.0);
    }
}
