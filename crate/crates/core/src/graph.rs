//! Host graphs with bit-vector adjacency and the density primitives built
//! on them.

use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rational::{frac, Rational};

/// Undirected simple graph on `0..n`. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<BitSet>,
    edge_count: usize,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimpleGraph(n={}, m={})", self.vertex_count(), self.edge_count)
    }
}

/// Accumulates edges, rejecting loops and repeats.
pub struct GraphBuilder {
    adj: Vec<BitSet>,
    edge_count: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { adj: vec![BitSet::new(n); n], edge_count: 0 }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::pre(format!("edge ({u},{v}) out of range for {n} vertices")));
        }
        if u == v {
            return Err(Error::pre(format!("loop at vertex {u}")));
        }
        if self.adj[u].contains(v) {
            return Err(Error::pre(format!("duplicate edge ({u},{v})")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_count += 1;
        Ok(())
    }

    /// Adds the edge if absent; returns whether it was new.
    pub fn add_edge_if_absent(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.adj[u].contains(v) {
            return false;
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_count += 1;
        true
    }

    pub fn build(self) -> SimpleGraph {
        SimpleGraph { adj: self.adj, edge_count: self.edge_count }
    }
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| {
                let mut row = BitSet::full(n);
                row.remove(v);
                row
            })
            .collect();
        SimpleGraph { adj, edge_count: n * n.saturating_sub(1) / 2 }
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::from_edges(n, &edges).expect("cycle")
    }

    /// Complete multipartite graph with parts laid out consecutively.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut label = Vec::with_capacity(n);
        for (p, &s) in parts.iter().enumerate() {
            label.extend(std::iter::repeat_n(p, s));
        }
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if label[u] != label[v] {
                    b.add_edge_if_absent(u, v);
                }
            }
        }
        b.build()
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Builds from symmetric adjacency rows; validates symmetry and loops.
    pub fn from_adjacency(adj: Vec<BitSet>) -> Result<Self> {
        let n = adj.len();
        let mut twice = 0;
        for (v, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::pre("adjacency row length mismatch"));
            }
            if row.contains(v) {
                return Err(Error::pre(format!("loop at vertex {v}")));
            }
            for u in row.iter() {
                if !adj[u].contains(v) {
                    return Err(Error::pre(format!("asymmetric adjacency at ({v},{u})")));
                }
            }
            twice += row.count();
        }
        Ok(SimpleGraph { adj, edge_count: twice / 2 })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.vertex_count() {
            out.extend(self.adj[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// `δ(G)`, with 0 for the graph on no vertices.
    pub fn min_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertex_set(&self, vertices: &[usize]) -> BitSet {
        BitSet::from_indices(self.vertex_count(), vertices.iter().copied())
    }

    /// `e(U, V)` counting each `u ∈ U` against `V`; pairs in `U ∩ V` count twice.
    pub fn edges_between(&self, u: &BitSet, v: &BitSet) -> usize {
        u.iter().map(|x| self.adj[x].intersection_count(v)).sum()
    }

    /// `e(G[U])`.
    pub fn edges_within(&self, u: &BitSet) -> usize {
        self.edges_between(u, u) / 2
    }

    /// Keeps exactly the edges for which `keep(u, v)` holds (`u < v`).
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> SimpleGraph {
        let n = self.vertex_count();
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                if keep(u, v) {
                    b.add_edge_if_absent(u, v);
                }
            }
        }
        b.build()
    }

    pub fn without_edges(&self, removed: &[(usize, usize)]) -> SimpleGraph {
        let mut adj = self.adj.clone();
        let mut m = self.edge_count;
        for &(u, v) in removed {
            if adj[u].remove(v) {
                adj[v].remove(u);
                m -= 1;
            }
        }
        SimpleGraph { adj, edge_count: m }
    }

    /// True when every edge of `self` is an edge of `other` (same order).
    pub fn is_subgraph_of(&self, other: &SimpleGraph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.adj.iter().zip(&other.adj).all(|(a, b)| a.is_subset(b))
    }

    /// Subgraph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.add_edge_if_absent(i, j);
                }
            }
        }
        b.build()
    }

    /// Serializes in the `vertices N` / `edge u v` text format.
    pub fn to_edge_list(&self, header_comments: &[String]) -> String {
        let mut s = String::new();
        for c in header_comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "vertices {}", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "edge {u} {v}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
        let mut builder: Option<GraphBuilder> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: {raw:?}", lineno + 1));
            match (&mut builder, parts.as_slice()) {
                (None, ["vertices", n]) => {
                    let n: usize = n.parse().map_err(|_| err("bad vertex count"))?;
                    builder = Some(GraphBuilder::new(n));
                }
                (None, _) => return Err(err("expected `vertices <N>` first")),
                (Some(b), ["edge", u, v]) => {
                    let u: usize = u.parse().map_err(|_| err("bad vertex"))?;
                    let v: usize = v.parse().map_err(|_| err("bad vertex"))?;
                    b.add_edge(u, v).map_err(|e| err(&e.to_string()))?;
                }
                (Some(_), _) => return Err(err("expected `edge <u> <v>`")),
            }
        }
        builder.map(GraphBuilder::build).ok_or_else(|| Error::Parse("missing `vertices` line".into()))
    }
}

/// A pair of disjoint vertex sets `(U, V)` of some host graph.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct VertexSetPair {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

impl VertexSetPair {
    /// Sorts both sides; errors on overlap or repeated vertices.
    pub fn new(mut u: Vec<usize>, mut v: Vec<usize>) -> Result<Self> {
        u.sort_unstable();
        v.sort_unstable();
        if u.windows(2).any(|w| w[0] == w[1]) || v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::pre("vertex set contains a repeated vertex"));
        }
        let (mut i, mut j) = (0, 0);
        while i < u.len() && j < v.len() {
            match u[i].cmp(&v[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    return Err(Error::pre(format!("vertex {} lies in both sets", u[i])));
                }
            }
        }
        Ok(VertexSetPair { u, v })
    }

    pub fn swapped(&self) -> Self {
        VertexSetPair { u: self.v.clone(), v: self.u.clone() }
    }
}

/// `e(U, V) / (|U| |V|)` as an exact fraction.
pub fn pair_density(g: &SimpleGraph, pair: &VertexSetPair) -> Result<Rational> {
    if pair.u.is_empty() || pair.v.is_empty() {
        return Err(Error::pre("pair density needs two nonempty sets"));
    }
    let n = g.vertex_count();
    if pair.u.iter().chain(&pair.v).any(|&x| x >= n) {
        return Err(Error::pre("vertex set refers to a vertex outside the graph"));
    }
    let e = g.edges_between(&g.vertex_set(&pair.u), &g.vertex_set(&pair.v));
    Ok(frac(e as i64, (pair.u.len() * pair.v.len()) as i64))
}

pub fn min_degree(g: &SimpleGraph) -> usize {
    g.min_degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn densities() {
        let g = SimpleGraph::from_edges(4, &[(0, 2), (1, 3), (1, 2)]).unwrap();
        let p = VertexSetPair::new(vec![0, 1], vec![2, 3]).unwrap();
        assert_eq!(pair_density(&g, &p).unwrap(), frac(3, 4));
        let k = SimpleGraph::complete_multipartite(&[2, 2]);
        assert_eq!(pair_density(&k, &p).unwrap(), int(1));
        assert_eq!(pair_density(&SimpleGraph::empty(4), &p).unwrap(), int(0));
        let empty = VertexSetPair { u: vec![], v: vec![1] };
        assert!(pair_density(&g, &empty).is_err());
    }

    #[test]
    fn pair_must_be_disjoint() {
        assert!(VertexSetPair::new(vec![0, 1], vec![1, 2]).is_err());
        assert!(VertexSetPair::new(vec![0, 0], vec![2]).is_err());
    }

    #[test]
    fn min_degrees() {
        assert_eq!(SimpleGraph::complete(5).min_degree(), 4);
        assert_eq!(SimpleGraph::from_edges(3, &[(0, 1)]).unwrap().min_degree(), 0);
        assert_eq!(SimpleGraph::cycle(5).min_degree(), 2);
        assert_eq!(SimpleGraph::empty(0).min_degree(), 0);
    }

    #[test]
    fn construction_rejects_loops_and_multi_edges() {
        assert!(SimpleGraph::from_edges(3, &[(1, 1)]).is_err());
        assert!(SimpleGraph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = SimpleGraph::cycle(6);
        let text = g.to_edge_list(&["cycle".to_string()]);
        assert!(text.starts_with("# cycle\nvertices 6\n"));
        assert_eq!(SimpleGraph::parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(SimpleGraph::parse_edge_list("edge 0 1\n").is_err());
        assert!(SimpleGraph::parse_edge_list("vertices 2\nedge 0 0\n").is_err());
        assert!(SimpleGraph::parse_edge_list("vertices 2\nedge 0 1\nedge 1 0\n").is_err());
        assert!(SimpleGraph::parse_edge_list("# only comments\n").is_err());
        let g = SimpleGraph::parse_edge_list("# c\nvertices 3 # trailing\n\nedge 0 2\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 2)]);
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = SimpleGraph::complete_multipartite(&[3, 2, 4]);
        let sum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.edge_count());
    }
}
