//! Slow, obviously-correct reference computations over prime fields,
//! written without the library's arithmetic.

#![allow(dead_code)]

/// Rank of a matrix over GF(p), `p` prime, by plain row reduction.
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = (1..p).find(|&x| x * rows[rank][c] % p == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] + p * p - f * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Row-major `rows × cols` matrix with entry digits of `index` in base `p`
/// (most significant first).
pub fn matrix_from_index(rows: usize, cols: usize, p: u32, mut index: u64) -> Vec<Vec<u32>> {
    let mut flat = vec![0u32; rows * cols];
    for slot in flat.iter_mut().rev() {
        *slot = (index % p as u64) as u32;
        index /= p as u64;
    }
    flat.chunks(cols.max(1)).map(|c| c.to_vec()).collect()
}

pub fn sub(a: &[Vec<u32>], b: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u + p - v) % p).collect()).collect()
}

pub fn hconcat(a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    a.iter().zip(b).map(|(x, y)| x.iter().chain(y).copied().collect()).collect()
}

pub fn transpose(a: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|c| a.iter().map(|r| r[c]).collect()).collect()
}

/// Blocks of an element of the space with the given shapes, decoded from its
/// canonical index (blocks in order, row-major entries, base `p`).
pub fn decode(shapes: &[(usize, usize)], p: u32, mut index: u64) -> Vec<Vec<Vec<u32>>> {
    let mut blocks = Vec::new();
    for &(n, m) in shapes.iter().rev() {
        let radix = (p as u64).pow((n * m) as u32);
        blocks.push(matrix_from_index(n, m, p, index % radix));
        index /= radix;
    }
    blocks.reverse();
    blocks
}

pub fn srk_distance(shapes: &[(usize, usize)], p: u32, x: u64, y: u64) -> usize {
    let (a, b) = (decode(shapes, p, x), decode(shapes, p, y));
    a.iter().zip(&b).map(|(u, v)| rank_mod_p(sub(u, v, p), p)).sum()
}

pub fn space_size(shapes: &[(usize, usize)], p: u32) -> u64 {
    (p as u64).pow(shapes.iter().map(|&(n, m)| n * m).sum::<usize>() as u32)
}

/// Largest set of vertices pairwise at distance `> k`, by exhaustive search
/// over all independent sets. Only for graphs with at most 64 vertices.
pub fn brute_alpha(shapes: &[(usize, usize)], p: u32, k: usize) -> usize {
    let n = space_size(shapes, p) as usize;
    assert!(n <= 64);
    let mut adj = vec![0u64; n];
    for x in 0..n {
        for y in 0..n {
            if x != y && srk_distance(shapes, p, x as u64, y as u64) <= k {
                adj[x] |= 1 << y;
            }
        }
    }
    fn best(adj: &[u64], candidates: u64) -> usize {
        if candidates == 0 {
            return 0;
        }
        let v = candidates.trailing_zeros() as usize;
        let rest = candidates & !(1u64 << v);
        // either v is in the set or it is not
        (1 + best(adj, rest & !adj[v])).max(best(adj, rest))
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    best(&adj, all)
}
