//! `k`-partite blow-ups shaped like a pattern `H`: classes `V_1..V_k` of size
//! `n`, with a bipartite edge set for every `ij ∈ E(H)` and nothing else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, SimpleGraph};
use crate::pattern::PatternGraph;

/// Bipartite graph between two classes of size `n`, stored in both
/// orientations so either side can be intersected cheaply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartite {
    fwd: Vec<BitSet>,
    rev: Vec<BitSet>,
    edges: usize,
}

impl Bipartite {
    pub fn empty(n: usize) -> Self {
        Bipartite { fwd: vec![BitSet::new(n); n], rev: vec![BitSet::new(n); n], edges: 0 }
    }

    pub fn complete(n: usize) -> Self {
        Bipartite { fwd: vec![BitSet::full(n); n], rev: vec![BitSet::full(n); n], edges: n * n }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = Bipartite::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::pre(format!("local edge ({u},{v}) out of range for part size {n}")));
            }
            if !b.fwd[u].insert(v) {
                return Err(Error::pre(format!("duplicate local edge ({u},{v})")));
            }
            b.rev[v].insert(u);
            b.edges += 1;
        }
        Ok(b)
    }

    pub fn part_size(&self) -> usize {
        self.fwd.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.fwd[u].contains(v)
    }

    /// Neighbours in the second class of `u` from the first class.
    #[inline]
    pub fn forward(&self, u: usize) -> &BitSet {
        &self.fwd[u]
    }

    #[inline]
    pub fn backward(&self, v: usize) -> &BitSet {
        &self.rev[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.fwd.iter().enumerate().flat_map(|(u, row)| row.iter().map(move |v| (u, v))).collect()
    }

    pub fn intersection(&self, other: &Bipartite) -> Bipartite {
        let fwd: Vec<BitSet> = self
            .fwd
            .iter()
            .zip(&other.fwd)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.intersect_with(b);
                r
            })
            .collect();
        let rev: Vec<BitSet> = self
            .rev
            .iter()
            .zip(&other.rev)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.intersect_with(b);
                r
            })
            .collect();
        let edges = fwd.iter().map(BitSet::count).sum();
        Bipartite { fwd, rev, edges }
    }

    pub fn is_subgraph_of(&self, other: &Bipartite) -> bool {
        self.fwd.iter().zip(&other.fwd).all(|(a, b)| a.is_subset(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipartiteGraph {
    pattern: PatternGraph,
    part_size: usize,
    /// Parallel to `pattern.edges()`.
    pairs: Vec<Bipartite>,
}

#[derive(Serialize, Deserialize)]
struct MultipartiteJson {
    pattern: serde_json::Value,
    part_size: usize,
    pairs: BTreeMap<String, Vec<[usize; 2]>>,
}

impl MultipartiteGraph {
    pub fn new(pattern: PatternGraph, part_size: usize, pairs: Vec<Bipartite>) -> Result<Self> {
        if pairs.len() != pattern.edge_count() {
            return Err(Error::pre(format!(
                "need one bipartite graph per pattern edge: {} given, {} edges",
                pairs.len(),
                pattern.edge_count()
            )));
        }
        if pairs.iter().any(|b| b.part_size() != part_size) {
            return Err(Error::pre("bipartite graph does not match part size"));
        }
        Ok(MultipartiteGraph { pattern, part_size, pairs })
    }

    /// Every pair complete: the blow-up `H(n)`.
    pub fn complete_blowup(pattern: PatternGraph, n: usize) -> Self {
        let pairs = vec![Bipartite::complete(n); pattern.edge_count()];
        MultipartiteGraph { pattern, part_size: n, pairs }
    }

    pub fn empty(pattern: PatternGraph, n: usize) -> Self {
        let pairs = vec![Bipartite::empty(n); pattern.edge_count()];
        MultipartiteGraph { pattern, part_size: n, pairs }
    }

    #[inline]
    pub fn pattern(&self) -> &PatternGraph {
        &self.pattern
    }

    #[inline]
    pub fn part_size(&self) -> usize {
        self.part_size
    }

    pub fn pairs(&self) -> &[Bipartite] {
        &self.pairs
    }

    /// Bipartite graph for `ij ∈ E(H)` oriented from the smaller index.
    pub fn pair(&self, i: usize, j: usize) -> Option<&Bipartite> {
        self.pattern.edge_index(i, j).map(|e| &self.pairs[e])
    }

    pub fn pair_edge_count(&self, i: usize, j: usize) -> usize {
        self.pair(i, j).map_or(0, Bipartite::edge_count)
    }

    /// Edge counts parallel to `pattern().edges()`.
    pub fn edge_counts(&self) -> Vec<usize> {
        self.pairs.iter().map(Bipartite::edge_count).collect()
    }

    /// Neighbours in class `to` of vertex `v` of class `from`.
    pub fn row(&self, from: usize, to: usize, v: usize) -> Option<&BitSet> {
        let e = self.pattern.edge_index(from, to)?;
        Some(if from < to { self.pairs[e].forward(v) } else { self.pairs[e].backward(v) })
    }

    pub fn has_edge(&self, i: usize, u: usize, j: usize, v: usize) -> bool {
        match self.pattern.edge_index(i, j) {
            Some(e) if i < j => self.pairs[e].has_edge(u, v),
            Some(e) => self.pairs[e].has_edge(v, u),
            None => false,
        }
    }

    /// Flattens to a simple graph; class `i` occupies `i*n .. (i+1)*n`.
    pub fn flatten(&self) -> SimpleGraph {
        let n = self.part_size;
        let mut b = GraphBuilder::new(n * self.pattern.vertex_count());
        for (&(i, j), pair) in self.pattern.edges().iter().zip(&self.pairs) {
            for (u, v) in pair.edges() {
                b.add_edge_if_absent(i * n + u, j * n + v);
            }
        }
        b.build()
    }

    pub fn to_json(&self) -> String {
        let pattern: serde_json::Value = serde_json::from_str(&self.pattern.to_json()).expect("pattern json");
        let pairs = self
            .pattern
            .edges()
            .iter()
            .zip(&self.pairs)
            .map(|(&(i, j), b)| (format!("{}-{}", i + 1, j + 1), b.edges().into_iter().map(|(u, v)| [u, v]).collect()))
            .collect();
        let raw = MultipartiteJson { pattern, part_size: self.part_size, pairs };
        serde_json::to_string(&raw).expect("multipartite json")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: MultipartiteJson = serde_json::from_str(s)?;
        let pattern = PatternGraph::from_json(&raw.pattern.to_string())?;
        let n = raw.part_size;
        let mut pairs = vec![None; pattern.edge_count()];
        for (key, edges) in &raw.pairs {
            let (a, b) = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                .ok_or_else(|| Error::Parse(format!("bad pair key {key:?}")))?;
            if a == 0 || b == 0 {
                return Err(Error::Parse(format!("pair key {key:?} must be 1-indexed")));
            }
            let (i, j) = (a - 1, b - 1);
            let e = pattern
                .edge_index(i, j)
                .ok_or_else(|| Error::Parse(format!("pair {key:?} is not an edge of the pattern")))?;
            let local: Vec<(usize, usize)> =
                edges.iter().map(|&[u, v]| if i < j { (u, v) } else { (v, u) }).collect();
            pairs[e] = Some(Bipartite::from_edges(n, &local)?);
        }
        let pairs = pairs.into_iter().map(|p| p.unwrap_or_else(|| Bipartite::empty(n))).collect();
        MultipartiteGraph::new(pattern, n, pairs)
    }
}

/// Extracts the `k`-partite structure of `g` on the given classes, keeping
/// only edges between classes `i`, `j` with `ij ∈ E(H)`.
pub fn induced_multipartite(g: &SimpleGraph, classes: &[Vec<usize>], h: &PatternGraph) -> Result<MultipartiteGraph> {
    let k = h.vertex_count();
    if classes.len() != k {
        return Err(Error::pre(format!("need {k} classes, got {}", classes.len())));
    }
    let n = classes[0].len();
    if classes.iter().any(|c| c.len() != n) {
        return Err(Error::pre("classes must have equal sizes"));
    }
    let mut seen = BitSet::new(g.vertex_count());
    for c in classes {
        for &v in c {
            if v >= g.vertex_count() {
                return Err(Error::pre(format!("vertex {v} outside the host graph")));
            }
            if !seen.insert(v) {
                return Err(Error::pre(format!("vertex {v} appears in two classes")));
            }
        }
    }
    let sets: Vec<BitSet> = classes.iter().map(|c| g.vertex_set(c)).collect();
    let mut pairs = Vec::with_capacity(h.edge_count());
    for &(i, j) in h.edges() {
        // Local index of each host vertex in class j.
        let mut local_j = vec![usize::MAX; g.vertex_count()];
        for (idx, &v) in classes[j].iter().enumerate() {
            local_j[v] = idx;
        }
        let mut b = Bipartite::empty(n);
        for (ui, &u) in classes[i].iter().enumerate() {
            let mut row = g.neighbors(u).clone();
            row.intersect_with(&sets[j]);
            for v in row.iter() {
                let vj = local_j[v];
                b.fwd[ui].insert(vj);
                b.rev[vj].insert(ui);
                b.edges += 1;
            }
        }
        pairs.push(b);
    }
    MultipartiteGraph::new(h.clone(), n, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_host_singletons_give_triangle() {
        let g = SimpleGraph::complete(3);
        let classes = vec![vec![0], vec![1], vec![2]];
        let m = induced_multipartite(&g, &classes, &PatternGraph::complete(3)).unwrap();
        assert_eq!(m.edge_counts(), vec![1, 1, 1]);
        assert_eq!(m.flatten(), SimpleGraph::complete(3));
    }

    #[test]
    fn empty_host_gives_empty_pairs() {
        let g = SimpleGraph::empty(6);
        let classes = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        let m = induced_multipartite(&g, &classes, &PatternGraph::complete(3)).unwrap();
        assert!(m.edge_counts().iter().all(|&c| c == 0));
    }

    #[test]
    fn non_pattern_edges_are_dropped() {
        let g = SimpleGraph::complete(6);
        let classes = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        let m = induced_multipartite(&g, &classes, &PatternGraph::path(3)).unwrap();
        assert_eq!(m.edge_counts(), vec![4, 4]);
        assert!(m.pair(0, 2).is_none());
    }

    #[test]
    fn class_validation() {
        let g = SimpleGraph::complete(6);
        let h = PatternGraph::complete(2);
        assert!(induced_multipartite(&g, &[vec![0, 1], vec![2]], &h).is_err());
        assert!(induced_multipartite(&g, &[vec![0, 1], vec![1, 2]], &h).is_err());
        assert!(induced_multipartite(&g, &[vec![0, 1]], &h).is_err());
    }

    #[test]
    fn json_round_trip_and_orientation() {
        let h = PatternGraph::path(3);
        let m = MultipartiteGraph::new(
            h,
            2,
            vec![Bipartite::from_edges(2, &[(0, 1)]).unwrap(), Bipartite::from_edges(2, &[(1, 0), (1, 1)]).unwrap()],
        )
        .unwrap();
        let back = MultipartiteGraph::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        // Reverse-oriented key flips the local pair.
        let r = r#"{"pattern":{"k":2,"edges":[[1,2]]},"part_size":2,"pairs":{"2-1":[[0,1]]}}"#;
        let g = MultipartiteGraph::from_json(r).unwrap();
        assert!(g.has_edge(0, 1, 1, 0));
        assert!(g.has_edge(1, 0, 0, 1));
        assert_eq!(g.row(1, 0, 0).unwrap().to_vec(), vec![1]);
    }
}
