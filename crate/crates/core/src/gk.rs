//! `g_k(ρ, n)`: the minimum number of `K_k` in an `n`-vertex graph with at
//! least `ρ·C(n,2)` edges, normalized by `C(n,k)`, by exhaustive search over
//! graphs up to isomorphism.
//!
//! Adding an edge never destroys a clique, so the minimum over `≥ m` edges is
//! attained at exactly `m = ⌈ρ·C(n,2)⌉` edges. Graphs with `m` edges are
//! generated level by level by single-edge augmentation with canonical-form
//! deduplication (from the complement side when `m > C(n,2)/2`).

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{ceil_usize, frac, int, Rational};

pub const GK_MAX_VERTICES: usize = 9;

type Adj = [u16; GK_MAX_VERTICES];

fn pair_bit(n: usize, i: usize, j: usize) -> u32 {
    let (i, j) = (i.min(j), i.max(j));
    // Row-major index of (i, j) among pairs i < j.
    (i * (2 * n - i - 1) / 2 + (j - i - 1)) as u32
}

fn encode(adj: &Adj, n: usize, labels: &[usize]) -> u64 {
    // labels[v] = new label of v.
    let mut code = 0u64;
    for u in 0..n {
        let mut row = adj[u];
        while row != 0 {
            let v = row.trailing_zeros() as usize;
            row &= row - 1;
            if u < v {
                code |= 1u64 << pair_bit(n, labels[u], labels[v]);
            }
        }
    }
    code
}

fn decode(code: u64, n: usize) -> Adj {
    let mut adj = [0u16; GK_MAX_VERTICES];
    for i in 0..n {
        for j in i + 1..n {
            if code >> pair_bit(n, i, j) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Splits cells by neighbour counts into each cell until stable. Cell order
/// depends only on isomorphism-invariant data.
fn refine(adj: &Adj, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u16> = cells.iter().map(|c| c.iter().fold(0u16, |m, &v| m | 1 << v)).collect();
        let mut next = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let sig = |v: usize| -> Vec<u32> { masks.iter().map(|&m| (adj[v] & m).count_ones()).collect() };
            let mut keyed: Vec<(Vec<u32>, usize)> = cell.iter().map(|&v| (sig(v), v)).collect();
            keyed.sort();
            let mut group: Vec<usize> = vec![keyed[0].1];
            for w in keyed.windows(2) {
                if w[0].0 != w[1].0 {
                    next.push(std::mem::take(&mut group));
                    changed = true;
                }
                group.push(w[1].1);
            }
            next.push(group);
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn all_twins(adj: &Adj, cell: &[usize]) -> bool {
    cell.iter().enumerate().all(|(a, &u)| {
        cell[a + 1..].iter().all(|&v| (adj[u] & !(1 << v)) == (adj[v] & !(1 << u)))
    })
}

fn search(adj: &Adj, n: usize, cells: Vec<Vec<usize>>, best: &mut u64) {
    let cells = refine(adj, cells);
    let Some(pos) = cells.iter().position(|c| c.len() > 1) else {
        let mut labels = vec![0; n];
        for (l, c) in cells.iter().enumerate() {
            labels[c[0]] = l;
        }
        *best = (*best).max(encode(adj, n, &labels));
        return;
    };
    let cell = &cells[pos];
    if all_twins(adj, cell) {
        // Any order within a twin class is an automorphism.
        let mut split = cells[..pos].to_vec();
        split.extend(cell.iter().map(|&v| vec![v]));
        split.extend_from_slice(&cells[pos + 1..]);
        search(adj, n, split, best);
        return;
    }
    for &v in cell {
        let mut split = cells[..pos].to_vec();
        split.push(vec![v]);
        split.push(cell.iter().copied().filter(|&w| w != v).collect());
        split.extend_from_slice(&cells[pos + 1..]);
        search(adj, n, split, best);
    }
}

/// Canonical code: the largest adjacency code over the labellings reached by
/// individualisation and refinement.
fn canonical(adj: &Adj, n: usize) -> u64 {
    let mut best = 0;
    search(adj, n, vec![(0..n).collect()], &mut best);
    best
}

fn count_k_cliques(adj: &Adj, n: usize, k: usize) -> u64 {
    fn rec(adj: &Adj, cand: u16, depth: usize) -> u64 {
        if depth == 0 {
            return 1;
        }
        let mut total = 0;
        let mut c = cand;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            // Only higher-indexed continuations.
            total += rec(adj, adj[v] & c, depth - 1);
        }
        total
    }
    rec(adj, ((1u32 << n) - 1) as u16, k)
}

/// Nonisomorphic `n`-vertex graphs with exactly `m` edges, as canonical codes.
pub fn graphs_with_edges(n: usize, m: usize) -> Result<Vec<u64>> {
    if n > GK_MAX_VERTICES {
        return Err(Error::budget(format!("graph enumeration limited to {GK_MAX_VERTICES} vertices")));
    }
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Ok(Vec::new());
    }
    let complement_side = m > total / 2;
    let steps = if complement_side { total - m } else { m };
    let mut level: Vec<u64> = vec![canonical(&[0; GK_MAX_VERTICES], n)];
    for _ in 0..steps {
        let next: HashSet<u64> = level
            .par_iter()
            .flat_map_iter(|&code| {
                let adj = decode(code, n);
                let mut out = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if adj[i] >> j & 1 == 0 {
                            let mut a = adj;
                            a[i] |= 1 << j;
                            a[j] |= 1 << i;
                            out.push(canonical(&a, n));
                        }
                    }
                }
                out
            })
            .collect();
        level = next.into_iter().collect();
        level.sort_unstable();
    }
    if complement_side {
        let full = if total == 0 { 0 } else { (1u64 << total) - 1 };
        let mut comp: Vec<u64> = level.iter().map(|&c| canonical(&decode(full ^ c, n), n)).collect();
        comp.sort_unstable();
        comp.dedup();
        level = comp;
    }
    Ok(level)
}

fn turan_edges(n: usize, r: usize) -> usize {
    // Complete r-partite graph with parts as equal as possible.
    let parts: Vec<usize> = (0..r).map(|i| n / r + usize::from(i < n % r)).collect();
    let s: usize = parts.iter().sum();
    (s * s - parts.iter().map(|p| p * p).sum::<usize>()) / 2
}

/// Exact `g_k(ρ, n)` for `n ≤ 9`.
pub fn gk_bruteforce(k: usize, rho: &Rational, n: usize) -> Result<Rational> {
    if k < 2 {
        return Err(Error::pre("clique size must be at least 2"));
    }
    if rho.is_negative() || rho > &Rational::one() {
        return Err(Error::pre(format!("ρ must lie in [0,1], got {rho}")));
    }
    if n > GK_MAX_VERTICES {
        return Err(Error::budget(format!("g_k brute force limited to n ≤ {GK_MAX_VERTICES}, got {n}")));
    }
    if n < k {
        return Ok(Rational::zero());
    }
    let total = n * (n - 1) / 2;
    let m = ceil_usize(&(rho * int(total as i64)));
    // The Turán graph T(n, k−1) is K_k-free.
    if turan_edges(n, k - 1) >= m {
        return Ok(Rational::zero());
    }
    let graphs = graphs_with_edges(n, m)?;
    let min = graphs
        .par_iter()
        .map(|&c| count_k_cliques(&decode(c, n), n, k))
        .min()
        .expect("at least one graph");
    let cnk = (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
    Ok(frac(min as i64, cnk as i64))
}

/// `g_k(ρ)` at the largest tractable `n`, with the classical zero region
/// `ρ ≤ 1 − 1/(k−1)` applied exactly.
pub fn gk_estimate(k: usize, rho: &Rational) -> Result<Rational> {
    if k >= 2 && rho <= &(int(1) - frac(1, (k as i64 - 1).max(1))) {
        return Ok(Rational::zero());
    }
    gk_bruteforce(k, rho, GK_MAX_VERTICES.min(8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_census_small() {
        // Nonisomorphic graphs on 4 vertices by edge count: 1 1 2 3 2 1 1.
        let counts: Vec<usize> = (0..=6).map(|m| graphs_with_edges(4, m).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 2, 1, 1]);
        let total5: usize = (0..=10).map(|m| graphs_with_edges(5, m).unwrap().len()).sum();
        assert_eq!(total5, 34);
        let total6: usize = (0..=15).map(|m| graphs_with_edges(6, m).unwrap().len()).sum();
        assert_eq!(total6, 156);
    }

    #[test]
    fn canonical_is_label_invariant() {
        let n = 6;
        let mut a = [0u16; GK_MAX_VERTICES];
        for &(u, v) in &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)] {
            a[u] |= 1 << v;
            a[v] |= 1 << u;
        }
        let perm = [5, 3, 0, 1, 4, 2];
        let mut b = [0u16; GK_MAX_VERTICES];
        for u in 0..n {
            for v in 0..n {
                if a[u] >> v & 1 == 1 {
                    b[perm[u]] |= 1 << perm[v];
                }
            }
        }
        assert_eq!(canonical(&a, n), canonical(&b, n));
    }

    #[test]
    fn gk_known_values() {
        assert_eq!(gk_bruteforce(3, &int(1), 6).unwrap(), int(1));
        assert_eq!(gk_bruteforce(3, &frac(9, 15), 6).unwrap(), int(0));
        assert_eq!(gk_bruteforce(3, &frac(4, 5), 6).unwrap(), frac(2, 5));
        assert!(gk_bruteforce(3, &frac(1, 2), 10).is_err());
    }
}
