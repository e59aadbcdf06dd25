//! Minimum-weight perfect matching on a small complete graph with optional
//! (missing) edges.

use mwmatching::{Matching, SENTINEL};

/// Largest vertex count handled by the subset dynamic program.
pub const DP_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingRoute {
    /// Subset dynamic program, exact, `O(2^k k)`.
    Subsets,
    /// Weighted blossom algorithm.
    Blossom,
    /// Subsets up to [`DP_LIMIT`] vertices, blossom beyond.
    Auto,
}

/// A minimum-weight perfect matching of vertices `0..k`, where `weight[i][j]`
/// is `None` for a missing edge. Returns the total weight and the matched
/// pairs `(i, j)` with `i < j`, sorted, or `None` if no perfect matching
/// exists.
pub fn min_perfect_matching(
    weight: &[Vec<Option<u32>>],
    route: MatchingRoute,
) -> Option<(u64, Vec<(usize, usize)>)> {
    let k = weight.len();
    if k % 2 == 1 {
        return None;
    }
    if k == 0 {
        return Some((0, Vec::new()));
    }
    let pairs = match route {
        MatchingRoute::Subsets => by_subsets(weight)?,
        MatchingRoute::Blossom => by_blossom(weight)?,
        MatchingRoute::Auto if k <= DP_LIMIT => by_subsets(weight)?,
        MatchingRoute::Auto => by_blossom(weight)?,
    };
    let total = pairs.iter().map(|&(i, j)| u64::from(weight[i][j].expect("matched edge exists"))).sum();
    Some((total, pairs))
}

fn by_subsets(weight: &[Vec<Option<u32>>]) -> Option<Vec<(usize, usize)>> {
    let k = weight.len();
    assert!(k <= 24, "subset matching on {k} vertices");
    let full = (1usize << k) - 1;
    // best[mask] = cheapest matching of the vertices in mask.
    let mut best = vec![u64::MAX; 1 << k];
    let mut choice = vec![(0usize, 0usize); 1 << k];
    best[0] = 0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = rest & !(1 << j);
            if let (Some(w), true) = (weight[i][j], best[sub] != u64::MAX) {
                let cost = best[sub] + u64::from(w);
                if cost < best[mask] {
                    best[mask] = cost;
                    choice[mask] = (i, j);
                }
            }
        }
    }
    if best[full] == u64::MAX {
        return None;
    }
    let mut pairs = Vec::with_capacity(k / 2);
    let mut mask = full;
    while mask != 0 {
        let (i, j) = choice[mask];
        pairs.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    pairs.sort_unstable();
    Some(pairs)
}

fn by_blossom(weight: &[Vec<Option<u32>>]) -> Option<Vec<(usize, usize)>> {
    let k = weight.len();
    let heaviest = weight.iter().flatten().flatten().copied().max().unwrap_or(0);
    // Among maximum-cardinality matchings, maximizing Σ(big - w) minimizes Σ w.
    let big = i32::try_from(heaviest).expect("distances fit in i32") + 1;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if let Some(w) = weight[i][j] {
                edges.push((i, j, big - w as i32));
            }
        }
    }
    if edges.is_empty() {
        return None;
    }
    let mate = Matching::new(edges).max_cardinality().solve();
    let mut pairs = Vec::with_capacity(k / 2);
    for i in 0..k {
        let j = *mate.get(i).unwrap_or(&SENTINEL);
        if j == SENTINEL {
            return None;
        }
        if i < j {
            pairs.push((i, j));
        }
    }
    Some(pairs)
}
