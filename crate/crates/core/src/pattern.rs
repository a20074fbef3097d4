//! The fixed template graph `H`: 2-density, balance and chromatic number.
//!
//! Vertices are `0..k` internally; the JSON form uses the 1-indexed labels
//! `{1..k}`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, Rational};

/// Largest pattern the bitmask routines accept.
pub const MAX_PATTERN_VERTICES: usize = 32;

/// Exact chromatic number search budget.
pub const CHROMATIC_BUDGET: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    k: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    k: usize,
    edges: Vec<[usize; 2]>,
}

impl PatternGraph {
    /// Builds `H` on `0..k`; rejects loops, duplicate edges and `k < 2`.
    pub fn new(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if k < 2 {
            return Err(Error::pre(format!("pattern needs at least 2 vertices, got {k}")));
        }
        if k > MAX_PATTERN_VERTICES {
            return Err(Error::budget(format!("pattern has {k} vertices, limit is {MAX_PATTERN_VERTICES}")));
        }
        let mut adj = vec![0u32; k];
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= k || b >= k {
                return Err(Error::pre(format!("pattern edge ({a},{b}) out of range for k={k}")));
            }
            if a == b {
                return Err(Error::pre(format!("pattern loop at {a}")));
            }
            let (i, j) = (a.min(b), a.max(b));
            if adj[i] >> j & 1 == 1 {
                return Err(Error::pre(format!("duplicate pattern edge ({i},{j})")));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
            norm.push((i, j));
        }
        norm.sort_unstable();
        Ok(PatternGraph { k, edges: norm, adj })
    }

    pub fn complete(k: usize) -> Self {
        let edges: Vec<_> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        PatternGraph::new(k, &edges).expect("complete pattern")
    }

    pub fn cycle(len: usize) -> Self {
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        PatternGraph::new(len, &edges).expect("cycle pattern")
    }

    /// Path on `k` vertices (`k - 1` edges).
    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (0..k - 1).map(|i| (i, i + 1)).collect();
        PatternGraph::new(k, &edges).expect("path pattern")
    }

    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let mut label = Vec::new();
        for (p, &s) in parts.iter().enumerate() {
            label.extend(std::iter::repeat_n(p, s));
        }
        let k = label.len();
        let edges: Vec<_> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| label[i] != label[j])
            .collect();
        PatternGraph::new(k, &edges).expect("multipartite pattern")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PatternJson = serde_json::from_str(s)?;
        let mut edges = Vec::with_capacity(raw.edges.len());
        for [a, b] in raw.edges {
            if a == 0 || b == 0 {
                return Err(Error::Parse("pattern JSON vertices are 1-indexed".into()));
            }
            edges.push((a - 1, b - 1));
        }
        PatternGraph::new(raw.k, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json_form()).expect("pattern json")
    }

    fn json_form(&self) -> PatternJson {
        PatternJson { k: self.k, edges: self.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect() }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.k && j < self.k && self.adj[i] >> j & 1 == 1
    }

    /// Position of `ij` in [`edges`](Self::edges).
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).ok()
    }

    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.k).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `e(H[S])` for a vertex subset given as a bitmask.
    pub fn induced_edge_count(&self, mask: u32) -> usize {
        (0..self.k)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| (self.adj[v] & mask).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Spanning subgraph keeping only the listed edges.
    pub fn spanning_subgraph(&self, edges: &[(usize, usize)]) -> Result<Self> {
        for &(a, b) in edges {
            if !self.has_edge(a, b) {
                return Err(Error::pre(format!("({a},{b}) is not an edge of the pattern")));
            }
        }
        PatternGraph::new(self.k, edges)
    }

    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// `|Aut(H)|` by brute force over permutations; intended for `k ≤ 8`.
    pub fn automorphism_count(&self) -> u64 {
        let mut perm: Vec<usize> = (0..self.k).collect();
        let mut count = 0;
        let mut used = 0u32;
        self.aut_rec(0, &mut perm, &mut used, &mut count);
        count
    }

    fn aut_rec(&self, pos: usize, perm: &mut Vec<usize>, used: &mut u32, count: &mut u64) {
        if pos == self.k {
            *count += 1;
            return;
        }
        for img in 0..self.k {
            if *used >> img & 1 == 1 || self.degree(img) != self.degree(pos) {
                continue;
            }
            let ok = (0..pos).all(|q| self.has_edge(q, pos) == self.has_edge(perm[q], img));
            if ok {
                perm[pos] = img;
                *used |= 1 << img;
                self.aut_rec(pos + 1, perm, used, count);
                *used &= !(1 << img);
            }
        }
    }
}

/// `(e - 1) / (v - 2)` for `v ≥ 3`.
impl Serialize for PatternGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.json_form().serialize(s)
    }
}

pub fn d2(edges: usize, vertices: usize) -> Rational {
    debug_assert!(vertices >= 3);
    frac(edges as i64 - 1, vertices as i64 - 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    #[serde(with = "crate::rational::serde_fraction")]
    pub m2: Rational,
    /// Vertex subset attaining `m2`; for the `m₂(K₂) = 1/2` convention this
    /// is the two endpoints of an edge.
    pub maximizing_subset: Vec<usize>,
    pub balanced: bool,
    pub strictly_balanced: bool,
    pub chromatic_number: usize,
}

/// 2-density of `H`, maximised over vertex subsets.
///
/// Adding edges on a fixed vertex set never lowers `(e-1)/(v-2)`, so induced
/// subgraphs suffice. Ties go to the smallest subset, then the
/// lexicographically smallest one.
pub fn two_density(h: &PatternGraph) -> Result<DensityReport> {
    if h.edge_count() == 0 {
        return Err(Error::pre("2-density is undefined for an edgeless pattern"));
    }
    let k = h.vertex_count();
    let (a, b) = h.edges()[0];
    let mut best = frac(1, 2);
    let mut best_set = vec![a, b];
    let mut subsets: Vec<u32> = (0u32..(1u32 << k)).filter(|m| m.count_ones() >= 3).collect();
    subsets.sort_by_key(|&m| (m.count_ones(), subset_key(m, k)));
    for m in subsets {
        let val = d2(h.induced_edge_count(m), m.count_ones() as usize);
        if val > best {
            best = val;
            best_set = (0..k).filter(|&v| m >> v & 1 == 1).collect();
        }
    }
    let strictly_balanced = is_strictly_balanced(h);
    let balanced = if k == 2 { true } else { d2(h.edge_count(), k) == best };
    Ok(DensityReport {
        m2: best,
        maximizing_subset: best_set,
        balanced,
        strictly_balanced,
        chromatic_number: chromatic_number(h)?,
    })
}

fn subset_key(mask: u32, k: usize) -> Vec<usize> {
    (0..k).filter(|&v| mask >> v & 1 == 1).collect()
}

/// `m₂(H) > m₂(H')` for every proper subgraph `H'`.
///
/// Checked through proper vertex subsets with at least three vertices, plus
/// the single-edge subgraphs whose 2-density is `1/2` by convention.
pub fn is_strictly_balanced(h: &PatternGraph) -> bool {
    let k = h.vertex_count();
    if h.edge_count() == 0 {
        return false;
    }
    if k == 2 {
        return true;
    }
    let whole = d2(h.edge_count(), k);
    // A lone edge is a proper subgraph with m₂ = 1/2 unless H is K₂ itself.
    if whole <= frac(1, 2) {
        return false;
    }
    let full = (1u32 << k) - 1;
    (1u32..full).filter(|m| m.count_ones() >= 3).all(|m| d2(h.induced_edge_count(m), m.count_ones() as usize) < whole)
}

/// Exact chromatic number by backtracking over colourings with `c = 1, 2, …`
/// colours in DSatur order.
pub fn chromatic_number(h: &PatternGraph) -> Result<usize> {
    let k = h.vertex_count();
    if k > CHROMATIC_BUDGET {
        return Err(Error::budget(format!("chromatic number search limited to {CHROMATIC_BUDGET} vertices, got {k}")));
    }
    if h.edge_count() == 0 {
        return Ok(1);
    }
    // Order by degree descending so conflicts surface early.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    for colours in 2..=k {
        let mut assignment = vec![usize::MAX; k];
        if colour_rec(h, &order, 0, colours, 0, &mut assignment) {
            return Ok(colours);
        }
    }
    Ok(k)
}

fn colour_rec(h: &PatternGraph, order: &[usize], pos: usize, colours: usize, used: usize, a: &mut [usize]) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    // Symmetry breaking: a fresh colour is always the next unused index.
    let limit = (used + 1).min(colours);
    for c in 0..limit {
        let clash = (0..h.vertex_count()).any(|u| h.has_edge(u, v) && a[u] == c);
        if !clash {
            a[v] = c;
            if colour_rec(h, order, pos + 1, colours, used.max(c + 1), a) {
                return true;
            }
            a[v] = usize::MAX;
        }
    }
    false
}

/// `m₂(K_k) = (k+1)/2`.
pub fn clique_two_density(k: usize) -> Rational {
    if k == 2 {
        frac(1, 2)
    } else {
        frac(k as i64 + 1, 2)
    }
}

impl DensityReport {
    pub fn threshold_exponent(&self) -> Rational {
        Rational::one() / &self.m2
    }
}
