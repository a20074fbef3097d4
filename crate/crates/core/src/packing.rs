//! Exact `K_k`-factor search on small graphs (cluster graphs).

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub const FACTOR_MAX_VERTICES: usize = 64;

/// A set of vertex-disjoint `k`-cliques covering every vertex, or `None` when
/// exhaustive search proves none exists. Errors when `k ∤ t`.
pub fn kk_factor(r: &SimpleGraph, k: usize) -> Result<Option<Vec<Vec<usize>>>> {
    let t = r.vertex_count();
    if k == 0 {
        return Err(Error::pre("clique size must be positive"));
    }
    if !t.is_multiple_of(k) {
        return Err(Error::pre(format!("a K_{k}-factor needs k | t, got t = {t}")));
    }
    if t > FACTOR_MAX_VERTICES {
        return Err(Error::budget(format!("K_k-factor search limited to {FACTOR_MAX_VERTICES} vertices, got {t}")));
    }
    if t == 0 {
        return Ok(Some(Vec::new()));
    }
    let adj: Vec<u64> = (0..t).map(|v| r.neighbors(v).iter().fold(0u64, |m, w| m | 1 << w)).collect();
    let full = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    let mut failed = HashSet::new();
    let mut chosen = Vec::new();
    Ok(search(&adj, k, full, &mut failed, &mut chosen).then_some(chosen))
}

fn search(adj: &[u64], k: usize, uncovered: u64, failed: &mut HashSet<u64>, chosen: &mut Vec<Vec<usize>>) -> bool {
    if uncovered == 0 {
        return true;
    }
    if failed.contains(&uncovered) {
        return false;
    }
    let v = uncovered.trailing_zeros() as usize;
    let rest = uncovered & !(1u64 << v);
    let mut clique = vec![v];
    if extend(adj, k, rest, adj[v] & rest, &mut clique, failed, chosen) {
        return true;
    }
    failed.insert(uncovered);
    false
}

/// Grows `clique` inside `cand`, then recurses on the remaining vertices.
fn extend(
    adj: &[u64],
    k: usize,
    rest: u64,
    cand: u64,
    clique: &mut Vec<usize>,
    failed: &mut HashSet<u64>,
    chosen: &mut Vec<Vec<usize>>,
) -> bool {
    if clique.len() == k {
        let used = clique.iter().fold(0u64, |m, &w| m | 1 << w);
        chosen.push(clique.clone());
        if search(adj, k, rest & !used, failed, chosen) {
            return true;
        }
        chosen.pop();
        return false;
    }
    let mut c = cand;
    while c != 0 {
        let w = c.trailing_zeros() as usize;
        c &= c - 1;
        clique.push(w);
        // Continue only with higher-indexed vertices to avoid repeats.
        if extend(adj, k, rest, adj[w] & c, clique, failed, chosen) {
            return true;
        }
        clique.pop();
    }
    false
}

/// Checks that `factor` is a set of disjoint `k`-cliques of `r` covering it.
pub fn is_factor(r: &SimpleGraph, k: usize, factor: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; r.vertex_count()];
    for c in factor {
        if c.len() != k {
            return false;
        }
        for (a, &u) in c.iter().enumerate() {
            if u >= seen.len() || std::mem::replace(&mut seen[u], true) {
                return false;
            }
            if c[a + 1..].iter().any(|&w| !r.has_edge(u, w)) {
                return false;
            }
        }
    }
    seen.into_iter().all(|s| s)
}
