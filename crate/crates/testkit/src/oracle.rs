//! Naive iterative-deletion k-core oracle.
//!
//! For each `k = 0, 1, ...` it starts from the full vertex set and repeatedly
//! deletes vertices of degree below `k` until nothing changes, recomputing
//! degrees from the raw edge list every round. Coreness of `v` is the last
//! `k` at which `v` survives. Quadratic-ish, fine for small graphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleDirection {
    Total,
    In,
    Out,
}

/// Edge contributions `(source, target, weight)` after optional collapsing of
/// parallel edges to one per ordered pair.
fn weighted(pairs: &[(usize, usize, u32)], count_multiplicity: bool) -> Vec<(usize, usize, u64)> {
    if count_multiplicity {
        pairs.iter().map(|&(s, t, m)| (s, t, m as u64)).collect()
    } else {
        let distinct: BTreeSet<(usize, usize)> = pairs.iter().map(|&(s, t, _)| (s, t)).collect();
        distinct.into_iter().map(|(s, t)| (s, t, 1)).collect()
    }
}

fn degree_within(v: usize, alive: &[bool], edges: &[(usize, usize, u64)], direction: OracleDirection) -> u64 {
    let mut d = 0;
    for &(s, t, w) in edges {
        if !alive[s] || !alive[t] {
            continue;
        }
        let counts = match direction {
            OracleDirection::Total => (s == v) as u64 + (t == v) as u64,
            OracleDirection::In => (t == v) as u64,
            OracleDirection::Out => (s == v) as u64,
        };
        d += counts * w;
    }
    d
}

/// Coreness per vertex by repeated whole-graph deletion rounds.
pub fn naive_coreness(
    n: usize,
    pairs: &[(usize, usize, u32)],
    direction: OracleDirection,
    count_multiplicity: bool,
) -> Vec<usize> {
    let edges = weighted(pairs, count_multiplicity);
    let mut core = vec![0; n];
    let mut k = 0usize;
    loop {
        let alive = surviving(n, &edges, direction, k);
        if !alive.iter().any(|&a| a) {
            break;
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
        k += 1;
    }
    core
}

/// Vertex set of the k-core computed by fixpoint deletion.
pub fn surviving(n: usize, edges: &[(usize, usize, u64)], direction: OracleDirection, k: usize) -> Vec<bool> {
    let mut alive = vec![true; n];
    loop {
        let doomed: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && degree_within(v, &alive, edges, direction) < k as u64)
            .collect();
        if doomed.is_empty() {
            return alive;
        }
        for v in doomed {
            alive[v] = false;
        }
    }
}

/// Same fixpoint as [`naive_coreness`] but deleting one randomly chosen
/// under-degree vertex at a time, to exercise order independence.
pub fn random_order_coreness<R: Rng>(
    n: usize,
    pairs: &[(usize, usize, u32)],
    direction: OracleDirection,
    count_multiplicity: bool,
    rng: &mut R,
) -> Vec<usize> {
    let edges = weighted(pairs, count_multiplicity);
    let mut core = vec![0; n];
    let mut k = 0usize;
    loop {
        let mut alive = vec![true; n];
        loop {
            let mut doomed: Vec<usize> = (0..n)
                .filter(|&v| alive[v] && degree_within(v, &alive, &edges, direction) < k as u64)
                .collect();
            if doomed.is_empty() {
                break;
            }
            doomed.shuffle(rng);
            alive[doomed[0]] = false;
        }
        if !alive.iter().any(|&a| a) {
            break;
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
        k += 1;
    }
    core
}

/// Total degree of `v` inside the vertex set `members`.
pub fn degree_in_set(
    v: usize,
    members: &[bool],
    pairs: &[(usize, usize, u32)],
    direction: OracleDirection,
    count_multiplicity: bool,
) -> u64 {
    degree_within(v, members, &weighted(pairs, count_multiplicity), direction)
}
