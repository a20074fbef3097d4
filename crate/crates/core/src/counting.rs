//! Exact counting of canonical copies `G(H)`, constrained copies
//! `𝒞(H,G;H′,G′)`, extension degrees, and copies of `H` in a simple host.
//!
//! The kernel places pattern vertices in a fixed order and intersects the
//! bit-vector rows of already-placed neighbours. Canonical copies are
//! labelled tuples, so no automorphism factor is applied.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::multipartite::MultipartiteGraph;
use crate::pattern::PatternGraph;
use crate::rational::{from_biguint, serde_decimal, serde_fraction, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountResult {
    #[serde(with = "serde_decimal")]
    pub count: BigUint,
    /// `count / n^k`.
    #[serde(with = "serde_fraction")]
    pub normalized: Rational,
    /// `∏ (m_ij / n²) · n^k`.
    #[serde(with = "serde_fraction")]
    pub expected: Rational,
    /// `count / expected`; `None` when nothing is expected.
    pub ratio: Option<f64>,
}

impl CountResult {
    fn new(g: &MultipartiteGraph, count: BigUint) -> Self {
        let n = g.part_size();
        let k = g.pattern().vertex_count();
        let nk = BigUint::from(n).pow(k as u32);
        let normalized = if n == 0 { Rational::zero() } else { from_biguint(&count) / from_biguint(&nk) };
        let expected = expected_count(g);
        let ratio = (!expected.is_zero()).then(|| to_f64(&(from_biguint(&count) / &expected)));
        CountResult { count, normalized, expected, ratio }
    }
}

/// `∏ (m_ij / n²) · n^{v(H)}`.
pub fn expected_count(g: &MultipartiteGraph) -> Rational {
    let n = g.part_size();
    if n == 0 {
        return Rational::zero();
    }
    let n2 = BigUint::from(n * n);
    let mut q = from_biguint(&BigUint::from(n).pow(g.pattern().vertex_count() as u32));
    for m in g.edge_counts() {
        q *= from_biguint(&BigUint::from(m)) / from_biguint(&n2);
    }
    q
}

/// Saturating-free `u128` accumulator that spills into a `BigUint`.
#[derive(Default)]
struct Acc {
    small: u128,
    big: BigUint,
}

impl Acc {
    #[inline]
    fn add(&mut self, x: u128) {
        match self.small.checked_add(x) {
            Some(s) => self.small = s,
            None => {
                self.big += BigUint::from(self.small);
                self.small = x;
            }
        }
    }

    fn total(self) -> BigUint {
        self.big + BigUint::from(self.small)
    }
}

/// Vertex order: pinned vertices first, then greedily the vertex with most
/// already-placed neighbours (ties: higher degree, then lower index).
fn placement_order(h: &PatternGraph, pinned: &[bool]) -> Vec<usize> {
    let k = h.vertex_count();
    let mut order: Vec<usize> = (0..k).filter(|&v| pinned[v]).collect();
    let mut placed: u32 = order.iter().fold(0, |m, &v| m | 1 << v);
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by(|&x, &y| {
                let bx = (h.neighbor_mask(x) & placed).count_ones();
                let by = (h.neighbor_mask(y) & placed).count_ones();
                bx.cmp(&by).then(h.degree(x).cmp(&h.degree(y))).then(y.cmp(&x))
            })
            .expect("unplaced vertex");
        order.push(next);
        placed |= 1 << next;
    }
    order
}

struct Plan<'a> {
    g: &'a MultipartiteGraph,
    order: Vec<usize>,
    /// For each position, the earlier positions adjacent in `H`.
    back: Vec<Vec<usize>>,
    allowed: Vec<BitSet>,
    n: usize,
}

impl<'a> Plan<'a> {
    fn new(g: &'a MultipartiteGraph, restrict: &[Option<BitSet>]) -> Self {
        let h = g.pattern();
        let n = g.part_size();
        let pinned: Vec<bool> = restrict.iter().map(Option::is_some).collect();
        let order = placement_order(h, &pinned);
        let back = (0..order.len())
            .map(|l| (0..l).filter(|&j| h.has_edge(order[l], order[j])).collect())
            .collect();
        let allowed = order.iter().map(|&v| restrict[v].clone().unwrap_or_else(|| BitSet::full(n))).collect();
        Plan { g, order, back, allowed, n }
    }

    fn candidates(&self, level: usize, placed: &[usize], out: &mut BitSet) {
        let to = self.order[level];
        out.clone_from(&self.allowed[level]);
        for &j in &self.back[level] {
            let row = self.g.row(self.order[j], to, placed[j]).expect("pattern edge");
            out.intersect_with(row);
        }
    }

    fn recurse(&self, level: usize, placed: &mut Vec<usize>, bufs: &mut [BitSet], acc: &mut Acc) {
        let k = self.order.len();
        let (cur, rest) = bufs.split_first_mut().expect("buffer per level");
        self.candidates(level, placed, cur);
        if level + 1 == k {
            acc.add(cur.count() as u128);
            return;
        }
        for v in cur.iter() {
            placed.push(v);
            self.recurse(level + 1, placed, rest, acc);
            placed.pop();
        }
    }

    fn count(&self) -> BigUint {
        let k = self.order.len();
        if k == 0 || self.n == 0 {
            return BigUint::zero();
        }
        let mut first = BitSet::new(self.n);
        self.candidates(0, &[], &mut first);
        if k == 1 {
            return BigUint::from(first.count());
        }
        let roots = first.to_vec();
        roots
            .par_iter()
            .map(|&v| {
                let mut acc = Acc::default();
                let mut placed = Vec::with_capacity(k);
                placed.push(v);
                let mut bufs = vec![BitSet::new(self.n); k - 1];
                self.recurse(1, &mut placed, &mut bufs, &mut acc);
                acc.total()
            })
            .reduce(BigUint::zero, |a, b| a + b)
    }
}

fn count_restricted(g: &MultipartiteGraph, restrict: &[Option<BitSet>]) -> BigUint {
    Plan::new(g, restrict).count()
}

/// `G(H)`: tuples `(v_1..v_k) ∈ V_1 × … × V_k` with `v_i v_j ∈ E(G)` for
/// every `ij ∈ E(H)`.
pub fn canonical_count(g: &MultipartiteGraph) -> CountResult {
    let k = g.pattern().vertex_count();
    CountResult::new(g, count_restricted(g, &vec![None; k]))
}

/// `G` with the pairs of `H′` replaced by their intersection with `G′`.
fn constrained_host(g: &MultipartiteGraph, sub_edges: &[(usize, usize)], g_prime: &MultipartiteGraph) -> Result<MultipartiteGraph> {
    if g_prime.part_size() != g.part_size() || g_prime.pattern().vertex_count() != g.pattern().vertex_count() {
        return Err(Error::pre("G′ must have the same parts as G"));
    }
    let h = g.pattern();
    let mut pairs = g.pairs().to_vec();
    for &(a, b) in sub_edges {
        let (i, j) = (a.min(b), a.max(b));
        let e = h
            .edge_index(i, j)
            .ok_or_else(|| Error::pre(format!("H′ edge {}{} is not an edge of H", i + 1, j + 1)))?;
        let other = g_prime
            .pair(i, j)
            .ok_or_else(|| Error::pre(format!("G′ has no pair for H′ edge {}{}", i + 1, j + 1)))?;
        pairs[e] = pairs[e].intersection(other);
    }
    MultipartiteGraph::new(h.clone(), g.part_size(), pairs)
}

/// `|𝒞(H,G;H′,G′)|`: canonical copies whose `H′`-edges lie in `G′`.
/// `sub_edges` lists `E(H′)` as 0-indexed pattern edges.
pub fn constrained_count(g: &MultipartiteGraph, sub_edges: &[(usize, usize)], g_prime: &MultipartiteGraph) -> Result<CountResult> {
    let host = constrained_host(g, sub_edges, g_prime)?;
    let k = g.pattern().vertex_count();
    Ok(CountResult::new(g, count_restricted(&host, &vec![None; k])))
}

/// `deg_{H″}(e, G, G′)`: constrained copies containing the edge `e = (u, v)`
/// with `u ∈ V_i`, `v ∈ V_j`, `ij ∈ E(H)`.
pub fn extension_degree(
    g: &MultipartiteGraph,
    sub_edges: &[(usize, usize)],
    g_prime: &MultipartiteGraph,
    (i, j): (usize, usize),
    (u, v): (usize, usize),
) -> Result<BigUint> {
    let n = g.part_size();
    if g.pattern().edge_index(i, j).is_none() {
        return Err(Error::pre(format!("{}{} is not an edge of H", i + 1, j + 1)));
    }
    if u >= n || v >= n || !g.has_edge(i, u, j, v) {
        return Err(Error::pre(format!("edge ({u},{v}) is not present in pair {}{}", i + 1, j + 1)));
    }
    let host = constrained_host(g, sub_edges, g_prime)?;
    let mut restrict = vec![None; g.pattern().vertex_count()];
    restrict[i] = Some(BitSet::from_indices(n, [u]));
    restrict[j] = Some(BitSet::from_indices(n, [v]));
    Ok(count_restricted(&host, &restrict))
}

/// `μ*_H(G) = G(H) / N^k` for an explicit normalizer `N`.
pub fn mu_star(g: &MultipartiteGraph, normalizer: usize) -> Result<Rational> {
    if normalizer == 0 {
        return Err(Error::pre("normalizer must be at least 1"));
    }
    let count = canonical_count(g).count;
    let nk = BigUint::from(normalizer).pow(g.pattern().vertex_count() as u32);
    Ok(from_biguint(&count) / from_biguint(&nk))
}

/// Number of `k`-cliques of `g`.
pub fn count_cliques(g: &SimpleGraph, k: usize) -> BigUint {
    let n = g.vertex_count();
    match k {
        0 => return BigUint::one(),
        1 => return BigUint::from(n),
        2 => return BigUint::from(g.edge_count()),
        _ => {}
    }
    // Forward neighbourhoods: higher-indexed neighbours only.
    let forward: Vec<BitSet> = (0..n)
        .map(|v| {
            let mut row = g.neighbors(v).clone();
            for w in 0..=v {
                row.remove(w);
            }
            row
        })
        .collect();
    fn rec(forward: &[BitSet], cand: &BitSet, depth: usize, bufs: &mut [BitSet], acc: &mut Acc) {
        if depth == 1 {
            acc.add(cand.count() as u128);
            return;
        }
        let (cur, rest) = bufs.split_first_mut().expect("buffer per depth");
        for v in cand.iter() {
            cur.assign_intersection(cand, &forward[v]);
            if cur.count() + 1 >= depth {
                rec(forward, cur, depth - 1, rest, acc);
            }
        }
    }
    (0..n)
        .into_par_iter()
        .map(|v| {
            let mut acc = Acc::default();
            let mut bufs = vec![BitSet::new(n); k];
            rec(&forward, &forward[v], k - 1, &mut bufs, &mut acc);
            acc.total()
        })
        .reduce(BigUint::zero, |a, b| a + b)
}

/// Finds an injective homomorphism `H → host`, optionally with pattern
/// vertex `i` confined to `allowed[i]`. Returns the image of each vertex.
pub fn find_copy(host: &SimpleGraph, h: &PatternGraph, allowed: Option<&[BitSet]>) -> Option<Vec<usize>> {
    let k = h.vertex_count();
    let n = host.vertex_count();
    if k > n {
        return None;
    }
    let order = placement_order(h, &vec![false; k]);
    let back: Vec<Vec<usize>> = (0..k).map(|l| (0..l).filter(|&j| h.has_edge(order[l], order[j])).collect()).collect();
    let base: Vec<BitSet> = order
        .iter()
        .map(|&v| {
            let mut s = allowed.map_or_else(|| BitSet::full(n), |a| a[v].clone());
            let need = h.degree(v);
            for w in s.to_vec() {
                if host.degree(w) < need {
                    s.remove(w);
                }
            }
            s
        })
        .collect();
    fn rec(host: &SimpleGraph, back: &[Vec<usize>], base: &[BitSet], level: usize, placed: &mut Vec<usize>, used: &mut BitSet) -> bool {
        if level == base.len() {
            return true;
        }
        let mut cand = base[level].clone();
        cand.difference_with(used);
        for &j in &back[level] {
            cand.intersect_with(host.neighbors(placed[j]));
        }
        for v in cand.iter() {
            placed.push(v);
            used.insert(v);
            if rec(host, back, base, level + 1, placed, used) {
                return true;
            }
            used.remove(v);
            placed.pop();
        }
        false
    }
    let mut placed = Vec::with_capacity(k);
    let mut used = BitSet::new(n);
    if !rec(host, &back, &base, 0, &mut placed, &mut used) {
        return None;
    }
    let mut image = vec![0; k];
    for (l, &v) in order.iter().enumerate() {
        image[v] = placed[l];
    }
    Some(image)
}

/// Injective homomorphisms `H → host`; copies of `H` are this divided by
/// `|Aut(H)|`.
pub fn count_embeddings(host: &SimpleGraph, h: &PatternGraph) -> BigUint {
    let k = h.vertex_count();
    let n = host.vertex_count();
    if k > n {
        return BigUint::zero();
    }
    let order = placement_order(h, &vec![false; k]);
    let back: Vec<Vec<usize>> = (0..k).map(|l| (0..l).filter(|&j| h.has_edge(order[l], order[j])).collect()).collect();
    fn rec(host: &SimpleGraph, back: &[Vec<usize>], level: usize, placed: &mut Vec<usize>, used: &mut BitSet, acc: &mut Acc) {
        let n = host.vertex_count();
        let mut cand = BitSet::full(n);
        cand.difference_with(used);
        for &j in &back[level] {
            cand.intersect_with(host.neighbors(placed[j]));
        }
        if level + 1 == back.len() {
            acc.add(cand.count() as u128);
            return;
        }
        for v in cand.iter() {
            placed.push(v);
            used.insert(v);
            rec(host, back, level + 1, placed, used, acc);
            used.remove(v);
            placed.pop();
        }
    }
    if k == 1 {
        return BigUint::from(n);
    }
    (0..n)
        .into_par_iter()
        .map(|v| {
            let mut acc = Acc::default();
            let mut placed = vec![v];
            let mut used = BitSet::from_indices(n, [v]);
            rec(host, &back, 1, &mut placed, &mut used, &mut acc);
            acc.total()
        })
        .reduce(BigUint::zero, |a, b| a + b)
}

/// Unlabelled copies of `H` in `host`.
pub fn count_copies(host: &SimpleGraph, h: &PatternGraph) -> BigUint {
    count_embeddings(host, h) / BigUint::from(h.automorphism_count())
}

/// `count / C(n, k)` helper for clique densities.
pub fn clique_density(count: &BigUint, n: usize, k: usize) -> Rational {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    if c.is_zero() {
        return Rational::zero();
    }
    from_biguint(count) / from_biguint(&c)
}

/// `count` as `f64` for reports.
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipartite::Bipartite;
    use crate::rational::frac;

    #[test]
    fn complete_blowup_counts_every_tuple() {
        for h in [PatternGraph::complete(3), PatternGraph::cycle(4), PatternGraph::path(3)] {
            let k = h.vertex_count();
            let g = MultipartiteGraph::complete_blowup(h, 2);
            let r = canonical_count(&g);
            assert_eq!(r.count, BigUint::from(1u32 << k));
            assert_eq!(r.normalized, Rational::one());
            assert_eq!(r.ratio, Some(1.0));
        }
    }

    #[test]
    fn single_edge_counts_edges() {
        let h = PatternGraph::complete(2);
        let b = Bipartite::from_edges(3, &[(0, 1), (2, 2), (1, 0)]).unwrap();
        let g = MultipartiteGraph::new(h, 3, vec![b]).unwrap();
        assert_eq!(canonical_count(&g).count, BigUint::from(3u32));
    }

    #[test]
    fn path_with_matching_and_complete_pair() {
        let h = PatternGraph::path(3);
        let matching = Bipartite::from_edges(2, &[(0, 0), (1, 1)]).unwrap();
        let g = MultipartiteGraph::new(h, 2, vec![matching, Bipartite::complete(2)]).unwrap();
        assert_eq!(canonical_count(&g).count, BigUint::from(4u32));
    }

    #[test]
    fn extension_degree_in_complete_triangle_blowup() {
        let h = PatternGraph::complete(3);
        let g = MultipartiteGraph::complete_blowup(h.clone(), 2);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            for u in 0..2 {
                for v in 0..2 {
                    assert_eq!(extension_degree(&g, &[], &g, (i, j), (u, v)).unwrap(), BigUint::from(2u32));
                }
            }
        }
        let empty = MultipartiteGraph::empty(h, 2);
        assert!(extension_degree(&empty, &[], &empty, (0, 1), (0, 0)).is_err());
    }

    #[test]
    fn constrained_trivial_cases() {
        let h = PatternGraph::complete(3);
        let g = MultipartiteGraph::complete_blowup(h.clone(), 3);
        let gp = MultipartiteGraph::empty(h.clone(), 3);
        assert_eq!(constrained_count(&g, &[], &gp).unwrap().count, BigUint::from(27u32));
        assert_eq!(constrained_count(&g, &[(0, 1)], &gp).unwrap().count, BigUint::zero());
        assert_eq!(constrained_count(&g, h.edges(), &g).unwrap().count, BigUint::from(27u32));
        assert!(constrained_count(&g, &[], &MultipartiteGraph::empty(h, 4)).is_err());
    }

    #[test]
    fn mu_star_normalizers() {
        let h = PatternGraph::complete(3);
        let g = MultipartiteGraph::complete_blowup(h.clone(), 4);
        assert_eq!(mu_star(&g, 4).unwrap(), Rational::one());
        assert_eq!(mu_star(&g, 8).unwrap(), frac(1, 8));
        assert_eq!(mu_star(&MultipartiteGraph::empty(h, 4), 4).unwrap(), Rational::zero());
        let e = PatternGraph::complete(2);
        let b = Bipartite::from_edges(3, &[(0, 0), (1, 2)]).unwrap();
        assert_eq!(mu_star(&MultipartiteGraph::new(e, 3, vec![b]).unwrap(), 10).unwrap(), frac(2, 100));
        assert!(mu_star(&MultipartiteGraph::complete_blowup(PatternGraph::complete(2), 1), 0).is_err());
    }

    #[test]
    fn clique_counts() {
        assert_eq!(count_cliques(&SimpleGraph::complete(7), 3), BigUint::from(35u32));
        assert_eq!(count_cliques(&SimpleGraph::complete(7), 4), BigUint::from(35u32));
        assert_eq!(count_cliques(&SimpleGraph::cycle(5), 3), BigUint::zero());
        assert_eq!(count_cliques(&SimpleGraph::complete_multipartite(&[2, 2, 2]), 3), BigUint::from(8u32));
    }

    #[test]
    fn copies_and_search() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(count_copies(&k4, &PatternGraph::cycle(4)), BigUint::from(3u32));
        assert_eq!(count_copies(&k4, &PatternGraph::complete(3)), BigUint::from(4u32));
        let c5 = SimpleGraph::cycle(5);
        assert!(find_copy(&c5, &PatternGraph::complete(3), None).is_none());
        let img = find_copy(&c5, &PatternGraph::path(3), None).unwrap();
        assert!(c5.has_edge(img[0], img[1]) && c5.has_edge(img[1], img[2]));
        let k222 = SimpleGraph::complete_multipartite(&[2, 2, 2]);
        let allowed = vec![BitSet::from_indices(6, [0, 1]), BitSet::from_indices(6, [2, 3]), BitSet::from_indices(6, [4, 5])];
        assert!(find_copy(&k222, &PatternGraph::complete(3), Some(&allowed)).is_some());
    }
}
