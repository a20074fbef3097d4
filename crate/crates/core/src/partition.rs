//! Sparse regular partitions by energy-increment refinement, partition
//! cleaning, reduced weighted graphs and cluster-graph trimming.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, SimpleGraph, VertexSetPair};
use crate::random::RngStream;
use crate::rational::{ceil_usize, frac, int, serde_fraction, Rational};
use crate::regularity::{self, RegularityVerdict, Status};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub edges: usize,
    #[serde(with = "serde_fraction")]
    pub density: Rational,
    pub verdict: RegularityVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition {
    pub vertex_count: usize,
    pub classes: Vec<Vec<usize>>,
    /// Pairs `i < j` in lexicographic order.
    pub pairs: Vec<PairRecord>,
    #[serde(with = "serde_fraction")]
    pub energy: Rational,
    pub converged: bool,
    pub rounds: usize,
    #[serde(with = "crate::rational::serde_fraction_vec")]
    pub energy_history: Vec<Rational>,
}

impl Partition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class index of every vertex.
    pub fn labels(&self) -> Vec<usize> {
        labels_of(&self.classes, self.vertex_count)
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairRecord> {
        let (i, j) = (i.min(j), i.max(j));
        let t = self.classes.len();
        if i == j || j >= t {
            return None;
        }
        Some(&self.pairs[pair_index(t, i, j)])
    }

    pub fn refuted_count(&self) -> usize {
        self.pairs.iter().filter(|r| r.verdict.is_refuted()).count()
    }

    pub fn is_equipartition(&self) -> bool {
        let sizes: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        match (sizes.iter().min(), sizes.iter().max()) {
            (Some(a), Some(b)) => b - a <= 1,
            _ => true,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            vertex_count: usize,
            class_count: usize,
            membership: Vec<usize>,
            #[serde(flatten)]
            partition: &'a Partition,
        }
        let doc = Doc { vertex_count: self.vertex_count, class_count: self.class_count(), membership: self.labels(), partition: self };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }
}

fn pair_index(t: usize, i: usize, j: usize) -> usize {
    i * (2 * t - i - 1) / 2 + (j - i - 1)
}

fn labels_of(classes: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut labels = vec![usize::MAX; n];
    for (c, class) in classes.iter().enumerate() {
        for &v in class {
            labels[v] = c;
        }
    }
    labels
}

/// Edge counts inside each class and between each pair of classes.
pub fn class_edge_counts(g: &SimpleGraph, classes: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let t = classes.len();
    let labels = labels_of(classes, g.vertex_count());
    let mut within = vec![0; t];
    let mut between = vec![vec![0; t]; t];
    for (u, v) in g.edges() {
        let (a, b) = (labels[u], labels[v]);
        if a == usize::MAX || b == usize::MAX {
            continue;
        }
        if a == b {
            within[a] += 1;
        } else {
            between[a][b] += 1;
            between[b][a] += 1;
        }
    }
    (within, between)
}

/// `Σ_{i<j} e_ij² / (|V_i||V_j| n² p²)`.
pub fn energy(g: &SimpleGraph, classes: &[Vec<usize>], p: &Rational) -> Rational {
    let n = g.vertex_count() as i64;
    let (_, between) = class_edge_counts(g, classes);
    let mut total = Rational::zero();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let e = between[i][j] as i64;
            if e > 0 {
                total += frac(BigInt::from(e) * e, BigInt::from(classes[i].len() as i64) * classes[j].len() as i64);
            }
        }
    }
    total / (int(n * n) * p * p)
}

/// Contiguous equipartition of `0..n` into `t` classes; the first `n mod t`
/// classes get the extra vertex.
pub fn equipartition(n: usize, t: usize) -> Vec<Vec<usize>> {
    let (q, r) = (n / t, n % t);
    let mut start = 0;
    (0..t)
        .map(|c| {
            let len = q + usize::from(c < r);
            let class = (start..start + len).collect();
            start += len;
            class
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionConfig {
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    #[serde(with = "serde_fraction")]
    pub p: Rational,
    pub t0: usize,
    pub max_t: usize,
    /// Sampled-refuter trials per pair above the exhaustive budget.
    pub refuter_trials: usize,
    /// Convergence allows at most `refuted_budget · t²` refuted pairs.
    #[serde(with = "serde_fraction")]
    pub refuted_budget: Rational,
}

impl PartitionConfig {
    pub fn new(epsilon: Rational, p: Rational, t0: usize, max_t: usize) -> Self {
        PartitionConfig { refuted_budget: epsilon.clone(), epsilon, p, t0, max_t, refuter_trials: 32 }
    }
}

fn evaluate_pairs(g: &SimpleGraph, classes: &[Vec<usize>], cfg: &PartitionConfig, stream: &RngStream) -> Result<Vec<PairRecord>> {
    let t = classes.len();
    let (_, between) = class_edge_counts(g, classes);
    let idx: Vec<(usize, usize)> = (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j))).collect();
    idx.par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let pair = VertexSetPair::new(classes[i].clone(), classes[j].clone())?;
            let verdict = regularity::check_regular(g, &pair, &cfg.epsilon, &cfg.p, cfg.refuter_trials, &stream.child(k as u64))?;
            let edges = between[i][j];
            Ok(PairRecord { i, j, edges, density: frac(edges as i64, (classes[i].len() * classes[j].len()) as i64), verdict })
        })
        .collect()
}

fn refuted_within_budget(refuted: usize, t: usize, budget: &Rational) -> bool {
    int(refuted as i64) <= budget * int((t * t) as i64)
}

/// Splits `class` by degree into `other`: a one-dimensional two-means
/// threshold on the integer degrees, iterated to a fixed point. Returns the
/// high side when `denser`, the low side otherwise; falls back to `own` when
/// that side is empty or the whole class.
fn expand_side(g: &SimpleGraph, class: &[usize], own: &[usize], other: &BitSet, denser: bool) -> Vec<usize> {
    let deg: Vec<u64> = class.iter().map(|&x| g.neighbors(x).intersection_count(other) as u64).collect();
    let (Some(&lo), Some(&hi)) = (deg.iter().min(), deg.iter().max()) else { return own.to_vec() };
    // Vertex goes high when 2·deg > num/den.
    let (mut num, mut den) = (u128::from(lo + hi), 1u128);
    for _ in 0..64 {
        let (mut sh, mut ch, mut sl, mut cl) = (0u128, 0u128, 0u128, 0u128);
        for &d in &deg {
            if 2 * u128::from(d) * den > num {
                sh += u128::from(d);
                ch += 1;
            } else {
                sl += u128::from(d);
                cl += 1;
            }
        }
        if ch == 0 || cl == 0 {
            break;
        }
        // (sh/ch + sl/cl) = (sh·cl + sl·ch) / (ch·cl)
        let (nn, nd) = (sh * cl + sl * ch, ch * cl);
        if nn * den == num * nd {
            break;
        }
        num = nn;
        den = nd;
    }
    let expanded: Vec<usize> = class
        .iter()
        .zip(&deg)
        .filter(|&(_, &d)| (2 * u128::from(d) * den > num) == denser)
        .map(|(&x, _)| x)
        .collect();
    if expanded.is_empty() || expanded.len() == class.len() {
        own.to_vec()
    } else {
        expanded
    }
}

fn refine(g: &SimpleGraph, classes: &[Vec<usize>], records: &[PairRecord], cfg: &PartitionConfig) -> Vec<Vec<usize>> {
    let t = classes.len();
    let n = g.vertex_count();
    // Split sets per class with the deviation that produced them.
    let mut splits: Vec<Vec<(Rational, usize, Vec<usize>)>> = vec![Vec::new(); t];
    for (k, rec) in records.iter().enumerate() {
        let (Status::Refuted, Some(w)) = (rec.verdict.status, &rec.verdict.witness) else { continue };
        let wd = frac(
            g.edges_between(&g.vertex_set(&w.u), &g.vertex_set(&w.v)) as i64,
            (w.u.len() * w.v.len()) as i64,
        );
        let denser = wd > rec.density;
        // Alternate once more against the expanded opposite side, which is
        // larger and so less noisy than the witness.
        let x0 = expand_side(g, &classes[rec.i], &w.u, &g.vertex_set(&w.v), denser);
        let y = expand_side(g, &classes[rec.j], &w.v, &g.vertex_set(&x0), denser);
        let x = expand_side(g, &classes[rec.i], &x0, &g.vertex_set(&y), denser);
        splits[rec.i].push((rec.verdict.deviation.clone(), k, x));
        splits[rec.j].push((rec.verdict.deviation.clone(), k, y));
    }
    let cap = (cfg.max_t / t).max(1);
    let mut atoms_all: Vec<Vec<usize>> = Vec::new();
    let mut parent: Vec<usize> = Vec::new();
    for (c, class) in classes.iter().enumerate() {
        let list = &mut splits[c];
        list.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let min_atom = (ceil_usize(&(&cfg.epsilon * int(class.len() as i64))) / 2).max(1);
        let mut atoms = vec![class.clone()];
        for (_, _, set) in list.iter() {
            let member = BitSet::from_indices(n, set.iter().copied());
            let mut next = Vec::with_capacity(atoms.len() * 2);
            for (a, atom) in atoms.iter().enumerate() {
                let (inside, outside): (Vec<usize>, Vec<usize>) = atom.iter().partition(|&&v| member.contains(v));
                let room = next.len() + (atoms.len() - a) < cap;
                if room && inside.len() >= min_atom && outside.len() >= min_atom {
                    next.push(inside);
                    next.push(outside);
                } else {
                    next.push(atom.clone());
                }
            }
            atoms = next;
        }
        parent.extend(std::iter::repeat_n(c, atoms.len()));
        atoms_all.extend(atoms);
    }
    rebalance(atoms_all, &parent, n)
}

/// Equalizes atoms to sizes `⌊n/t′⌋` or `⌈n/t′⌉`, moving the fewest
/// lowest-index vertices. Deficits are filled from the excess of atoms with
/// the same parent class first, then from a shared pool.
fn rebalance(mut atoms: Vec<Vec<usize>>, parent: &[usize], n: usize) -> Vec<Vec<usize>> {
    let t = atoms.len();
    let (q, r) = (n / t, n % t);
    for a in atoms.iter_mut() {
        a.sort_unstable();
    }
    // The r largest atoms (ties: earlier first) receive q + 1.
    let mut by_size: Vec<usize> = (0..t).collect();
    by_size.sort_by(|&x, &y| atoms[y].len().cmp(&atoms[x].len()).then(x.cmp(&y)));
    let mut target = vec![q; t];
    for &a in by_size.iter().take(r) {
        target[a] = q + 1;
    }
    let classes = parent.iter().copied().max().map_or(0, |c| c + 1);
    let mut local: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (a, atom) in atoms.iter_mut().enumerate() {
        if atom.len() > target[a] {
            let excess = atom.len() - target[a];
            local[parent[a]].extend(atom.drain(..excess));
        }
    }
    for l in local.iter_mut() {
        l.sort_unstable();
        l.reverse();
    }
    for (a, atom) in atoms.iter_mut().enumerate() {
        let l = &mut local[parent[a]];
        while atom.len() < target[a] {
            match l.pop() {
                Some(v) => atom.push(v),
                None => break,
            }
        }
    }
    let mut pool: Vec<usize> = local.into_iter().flatten().collect();
    pool.sort_unstable();
    let mut pool = pool.into_iter();
    for (a, atom) in atoms.iter_mut().enumerate() {
        while atom.len() < target[a] {
            atom.push(pool.next().expect("pool covers deficits"));
        }
        atom.sort_unstable();
    }
    atoms
}

/// Iterated refinement towards an `(ε,p)`-regular equipartition: stops when
/// at most `εt²` pairs are refuted. When a refinement would exceed `max_t` or
/// fails to raise the energy strictly, the last partition is returned with
/// `converged = false`.
pub fn sparse_regular_partition(g: &SimpleGraph, cfg: &PartitionConfig, stream: &RngStream) -> Result<Partition> {
    let n = g.vertex_count();
    if cfg.t0 == 0 {
        return Err(Error::pre("t0 must be at least 1"));
    }
    if n < cfg.t0 {
        return Err(Error::pre(format!("graph has {n} vertices, fewer than t0 = {}", cfg.t0)));
    }
    if !cfg.p.is_positive() || cfg.p > Rational::one() {
        return Err(Error::pre(format!("p must lie in (0,1], got {}", cfg.p)));
    }
    if cfg.max_t < cfg.t0 {
        return Err(Error::pre("max_t must be at least t0"));
    }
    let mut classes = equipartition(n, cfg.t0);
    let mut current_energy = energy(g, &classes, &cfg.p);
    let mut history = vec![current_energy.clone()];
    let mut round = 0usize;
    loop {
        let records = evaluate_pairs(g, &classes, cfg, &stream.child(round as u64))?;
        let t = classes.len();
        let refuted = records.iter().filter(|r| r.verdict.is_refuted()).count();
        let done = refuted_within_budget(refuted, t, &cfg.refuted_budget);
        let finish = |classes: Vec<Vec<usize>>, records, energy, converged, history| Partition {
            vertex_count: n,
            classes,
            pairs: records,
            energy,
            converged,
            rounds: round,
            energy_history: history,
        };
        if done {
            return Ok(finish(classes, records, current_energy, true, history));
        }
        if t * 2 > cfg.max_t {
            return Ok(finish(classes, records, current_energy, false, history));
        }
        let refined = refine(g, &classes, &records, cfg);
        let new_energy = energy(g, &refined, &cfg.p);
        if refined.len() == t || new_energy <= current_energy {
            return Ok(finish(classes, records, current_energy, false, history));
        }
        classes = refined;
        current_energy = new_energy;
        history.push(current_energy.clone());
        round += 1;
    }
}

/// Weighted cluster graph on the classes: `R(i,j)` plus the unweighted
/// surviving-pair edges.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterGraph {
    pub weights: Vec<Vec<Rational>>,
    pub graph: SimpleGraph,
}

impl ClusterGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[i][j]
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            t: usize,
            weights: Vec<Vec<String>>,
            edges: Vec<[usize; 2]>,
        }
        let doc = Doc {
            t: self.vertex_count(),
            weights: self.weights.iter().map(|row| row.iter().map(|w| w.to_string()).collect()).collect(),
            edges: self.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }
}

/// `R(i,j) = min(e(V_i,V_j) / (p|V_i||V_j|), 1)`; edges are pairs of positive
/// weight.
pub fn reduced_weighted_graph(g: &SimpleGraph, classes: &[Vec<usize>], p: &Rational) -> Result<ClusterGraph> {
    if !p.is_positive() {
        return Err(Error::pre("reduced weights need p > 0"));
    }
    let t = classes.len();
    let (_, between) = class_edge_counts(g, classes);
    let mut weights = vec![vec![Rational::zero(); t]; t];
    let mut b = GraphBuilder::new(t);
    for i in 0..t {
        for j in i + 1..t {
            let w = frac(between[i][j] as i64, (classes[i].len() * classes[j].len()) as i64) / p;
            let w = w.min(Rational::one());
            if w.is_positive() {
                b.add_edge_if_absent(i, j);
            }
            weights[i][j] = w.clone();
            weights[j][i] = w;
        }
    }
    Ok(ClusterGraph { weights, graph: b.build() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CleanParams {
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    #[serde(with = "serde_fraction")]
    pub p: Rational,
    #[serde(with = "serde_fraction")]
    pub d: Rational,
    #[serde(with = "serde_fraction")]
    pub big_d: Rational,
    pub t0: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CleanReport {
    pub removed_within: usize,
    pub removed_refuted: usize,
    pub removed_sparse: usize,
    pub removed_total: usize,
    /// `(D/t0 + 2Dε + d) · p n² / 2`.
    #[serde(with = "serde_fraction")]
    pub bound: Rational,
    pub bound_holds: bool,
    /// Whether every hypothesis of the bound held, so that it was asserted.
    pub hypotheses_hold: bool,
    /// Hypotheses that failed, by name.
    pub failed_hypotheses: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Cleaned {
    pub graph: SimpleGraph,
    pub cluster: ClusterGraph,
    pub report: CleanReport,
}

/// Drops within-class edges, edges of refuted pairs, and edges of pairs with
/// fewer than `d·p·|V_i||V_j|` edges. Errors with `Assertion` if the deletion
/// bound fails while all of its hypotheses hold.
pub fn clean_partition(g: &SimpleGraph, part: &Partition, params: &CleanParams) -> Result<Cleaned> {
    let n = g.vertex_count();
    if part.vertex_count != n || part.labels().contains(&usize::MAX) {
        return Err(Error::pre("partition does not cover the graph"));
    }
    let t = part.class_count();
    let classes = &part.classes;
    let (within, between) = class_edge_counts(g, classes);
    let mut keep_pair = vec![vec![false; t]; t];
    let (mut removed_refuted, mut removed_sparse) = (0, 0);
    let mut cluster = GraphBuilder::new(t);
    for rec in &part.pairs {
        let (i, j) = (rec.i, rec.j);
        let e = between[i][j];
        let sparse = int(e as i64) < &params.d * &params.p * int((classes[i].len() * classes[j].len()) as i64);
        if rec.verdict.is_refuted() {
            removed_refuted += e;
        } else if sparse {
            removed_sparse += e;
        } else {
            keep_pair[i][j] = true;
            keep_pair[j][i] = true;
            if e > 0 {
                cluster.add_edge_if_absent(i, j);
            }
        }
    }
    let labels = part.labels();
    let cleaned = g.filter_edges(|u, v| {
        let (a, b) = (labels[u], labels[v]);
        a != b && keep_pair[a][b]
    });
    let removed_within: usize = within.iter().sum();
    let removed_total = removed_within + removed_refuted + removed_sparse;
    debug_assert_eq!(removed_total, g.edge_count() - cleaned.edge_count());

    let p = &params.p;
    let nn = int((n * n) as i64);
    let bound = (&params.big_d / int(params.t0 as i64) + int(2) * &params.big_d * &params.epsilon + &params.d) * p * &nn / int(2);
    let bound_holds = int(removed_total as i64) <= bound;

    let class_sq = frac((n * n) as i64, (t * t) as i64);
    let mut failed = Vec::new();
    if t < params.t0 {
        failed.push(format!("t = {t} < t0 = {}", params.t0));
    }
    let within_cap = &params.big_d * p * &class_sq / int(2);
    if let Some(c) = (0..t).find(|&c| int(within[c] as i64) > within_cap) {
        failed.push(format!("e(V_{}) = {} > Dp(n/t)²/2", c + 1, within[c]));
    }
    let pair_cap = &params.big_d * p * &class_sq;
    if let Some(rec) = part.pairs.iter().find(|r| r.verdict.is_refuted() && int(between[r.i][r.j] as i64) > pair_cap) {
        failed.push(format!("e(V_{},V_{}) = {} > Dp(n/t)²", rec.i + 1, rec.j + 1, between[rec.i][rec.j]));
    }
    if !refuted_within_budget(part.refuted_count(), t, &params.epsilon) {
        failed.push(format!("{} refuted pairs > εt²", part.refuted_count()));
    }
    let hypotheses_hold = failed.is_empty();
    if hypotheses_hold && !bound_holds {
        return Err(Error::Assertion(format!("cleaning removed {removed_total} edges, above the bound {bound}")));
    }
    let cluster_graph = cluster.build();
    let mut weighted = reduced_weighted_graph(&cleaned, classes, p)?;
    weighted.graph = cluster_graph;
    Ok(Cleaned {
        graph: cleaned,
        cluster: weighted,
        report: CleanReport {
            removed_within,
            removed_refuted,
            removed_sparse,
            removed_total,
            bound,
            bound_holds,
            hypotheses_hold,
            failed_hypotheses: failed,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrimResult {
    /// Surviving original vertex indices, ascending.
    pub kept: Vec<usize>,
    /// Removed vertices in removal order.
    pub removed: Vec<usize>,
    pub failed: bool,
    #[serde(skip)]
    pub graph: SimpleGraph,
}

/// Greedy trimming: repeatedly removes a vertex of smallest degree (lowest
/// index on ties) while its degree is below `threshold(t_current)`, then up
/// to `divisor − 1` more so that `divisor | t′`. Fails when more than
/// `max_removed` vertices go.
pub fn trim_low_degree(r: &SimpleGraph, threshold: impl Fn(usize) -> Rational, divisor: usize, max_removed: &Rational) -> TrimResult {
    let t = r.vertex_count();
    let mut alive = BitSet::full(t);
    let mut deg: Vec<usize> = (0..t).map(|v| r.degree(v)).collect();
    let mut removed = Vec::new();
    let remove = |v: usize, alive: &mut BitSet, deg: &mut Vec<usize>, removed: &mut Vec<usize>| {
        alive.remove(v);
        for w in r.neighbors(v).iter() {
            if alive.contains(w) {
                deg[w] -= 1;
            }
        }
        removed.push(v);
    };
    loop {
        let cur = alive.count();
        let Some(v) = alive.iter().min_by_key(|&v| (deg[v], v)) else { break };
        if int(deg[v] as i64) >= threshold(cur) {
            break;
        }
        remove(v, &mut alive, &mut deg, &mut removed);
    }
    if divisor > 1 {
        while !alive.count().is_multiple_of(divisor) {
            let v = alive.iter().min_by_key(|&v| (deg[v], v)).expect("nonempty");
            remove(v, &mut alive, &mut deg, &mut removed);
        }
    }
    let kept = alive.to_vec();
    let failed = int(removed.len() as i64) > *max_removed || kept.is_empty();
    TrimResult { graph: r.induced(&kept), kept, removed, failed }
}

/// Removes vertices of degree below `(1 − 1/k)·t_current + k`, then up to
/// `k − 1` more so that `k | t′`; fails if more than `βt − k` vertices go.
pub fn trim_min_degree(r: &SimpleGraph, k: usize, beta: &Rational) -> Result<TrimResult> {
    if k < 2 {
        return Err(Error::pre("trim needs k ≥ 2"));
    }
    let ki = k as i64;
    let t = r.vertex_count();
    let max_removed = beta * int(t as i64) - int(ki);
    Ok(trim_low_degree(r, |cur| (int(1) - frac(1, ki)) * int(cur as i64) + int(ki), k, &max_removed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equipartition_sizes() {
        let c = equipartition(10, 3);
        assert_eq!(c.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 3, 3]);
        assert_eq!(labels_of(&c, 10), vec![0, 0, 0, 0, 1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn rebalance_moves_lowest_indices() {
        let atoms = vec![vec![0, 1, 2, 3, 4], vec![5], vec![6, 7]];
        let out = rebalance(atoms, &[0, 1, 2], 8);
        assert_eq!(out.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 2, 3]);
        assert_eq!(out[0], vec![2, 3, 4]);
        assert_eq!(out[1], vec![0, 5]);
    }

    #[test]
    fn empty_graph_partition_returns_immediately() {
        let g = SimpleGraph::empty(40);
        let cfg = PartitionConfig::new(frac(1, 4), frac(1, 2), 4, 16);
        let p = sparse_regular_partition(&g, &cfg, &RngStream::new(0)).unwrap();
        assert!(p.converged);
        assert_eq!(p.class_count(), 4);
        assert_eq!(p.rounds, 0);
        assert!(p.pairs.iter().all(|r| r.verdict.status == Status::CertifiedRegular));
        assert!(sparse_regular_partition(&SimpleGraph::empty(3), &cfg, &RngStream::new(0)).is_err());
    }

    #[test]
    fn reduced_weights() {
        let mut b = GraphBuilder::new(8);
        for &(u, v) in &[(0, 4), (1, 5), (2, 6)] {
            b.add_edge(u, v).unwrap();
        }
        let g = b.build();
        let classes = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]];
        let r = reduced_weighted_graph(&g, &classes, &frac(1, 2)).unwrap();
        assert_eq!(r.weights[0][1], frac(3, 8));
        let r = reduced_weighted_graph(&g, &classes, &frac(3, 16)).unwrap();
        assert_eq!(r.weights[0][1], int(1));
        assert!(reduced_weighted_graph(&g, &classes, &int(0)).is_err());
        let r = reduced_weighted_graph(&SimpleGraph::empty(8), &classes, &frac(1, 2)).unwrap();
        assert_eq!(r.weights[0][1], int(0));
        assert_eq!(r.graph.edge_count(), 0);
    }

    #[test]
    fn trim_examples() {
        let r = trim_min_degree(&SimpleGraph::complete(12), 3, &frac(1, 2)).unwrap();
        assert_eq!((r.kept.len(), r.failed), (12, false));
        let mut b = GraphBuilder::new(13);
        for u in 0..12 {
            for v in u + 1..12 {
                b.add_edge(u, v).unwrap();
            }
        }
        let r = trim_min_degree(&b.build(), 3, &frac(1, 2)).unwrap();
        assert_eq!(r.removed, vec![12]);
        assert_eq!(r.kept.len(), 12);
        assert!(!r.failed);
        let star = SimpleGraph::from_edges(10, &(1..10).map(|v| (0, v)).collect::<Vec<_>>()).unwrap();
        assert!(trim_min_degree(&star, 3, &frac(1, 2)).unwrap().failed);
    }
}
