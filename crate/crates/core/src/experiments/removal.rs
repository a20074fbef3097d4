//! Removal: a subgraph of `G(N,p)` with few copies of `H` is made `H`-free by
//! partitioning, cleaning and, if copies survive, deleting one edge per copy.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{Map, Value};

use super::{
    bool_status, edge_budget, finish, flag, int_of, parameters_of, random_sides, run_trials, ExperimentReport, Outcome, PipelineParams, TrialStatus,
    CAVEAT_NOT_REFUTED,
};
use crate::counting::{canonical_count, count_copies, find_copy};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::multipartite::induced_multipartite;
use crate::partition::{clean_partition, sparse_regular_partition};
use crate::pattern::{chromatic_number, PatternGraph};
use crate::random::{edge_subsample, gnp, RngStream};
use crate::rational::{frac, int, serde_fraction, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct RemovalConfig {
    pub pattern: PatternGraph,
    pub big_n: usize,
    #[serde(with = "serde_fraction")]
    pub p: Rational,
    /// Deletion budget is `⌊δ p N²⌋`.
    #[serde(with = "serde_fraction")]
    pub delta: Rational,
    /// The subgraph may carry at most `ε p^{e(H)} N^{v(H)}` copies.
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    /// Probability of keeping each edge inside a side of the cut.
    #[serde(with = "serde_fraction")]
    pub interior_fraction: Rational,
    pub pipeline: PipelineParams,
    /// Delete one edge per surviving copy after cleaning.
    pub residual_deletion: bool,
    pub trials: usize,
    pub required_fraction: f64,
    pub threads: usize,
}

impl RemovalConfig {
    pub fn new(pattern: PatternGraph, big_n: usize, p: Rational, delta: Rational, trials: usize) -> Self {
        RemovalConfig {
            pattern,
            big_n,
            p,
            epsilon: frac(1, 100),
            interior_fraction: frac(1, 100),
            pipeline: PipelineParams {
                eps_reg: frac(9, 20),
                refuted_budget: frac(1, 16),
                t0: 2,
                max_t: 16,
                refuter_trials: 24,
                d: &delta / int(2),
                big_d: int(2),
            },
            delta,
            residual_deletion: true,
            trials,
            required_fraction: 0.9,
            threads: 1,
        }
    }
}

pub(crate) fn judge(params: &Map<String, Value>, values: &BTreeMap<String, Value>) -> TrialStatus {
    let Some(budget) = edge_budget(params, "delta") else { return TrialStatus::Fail };
    let deleted = int_of(values, "total_deleted").unwrap_or(u64::MAX);
    bool_status(flag(values, "h_free") && deleted <= budget)
}

/// `(χ−1)`-partite cut of `g` plus a random trickle of interior edges.
pub fn few_copies_subgraph(g: &SimpleGraph, parts: usize, interior: &Rational, stream: &RngStream) -> Result<SimpleGraph> {
    let side = random_sides(g.vertex_count(), parts, &stream.named("sides"));
    let inside = g.filter_edges(|u, v| side[u] == side[v]);
    let kept_inside = edge_subsample(&inside, interior, &stream.named("interior"))?;
    Ok(g.filter_edges(|u, v| side[u] != side[v] || kept_inside.has_edge(u, v)))
}

/// Total canonical copies over injective class tuples whose `H`-edges all
/// map to cluster edges.
fn cluster_supported_copies(g: &SimpleGraph, classes: &[Vec<usize>], cluster: &SimpleGraph, h: &PatternGraph) -> Result<u128> {
    let k = h.vertex_count();
    let t = classes.len();
    let mut total = 0u128;
    let mut tuple = Vec::with_capacity(k);
    fn walk(
        g: &SimpleGraph,
        classes: &[Vec<usize>],
        cluster: &SimpleGraph,
        h: &PatternGraph,
        t: usize,
        tuple: &mut Vec<usize>,
        total: &mut u128,
    ) -> Result<()> {
        let pos = tuple.len();
        if pos == h.vertex_count() {
            let chosen: Vec<Vec<usize>> = tuple.iter().map(|&c| classes[c].clone()).collect();
            *total += tuple_copies(g, &chosen, h)?;
            return Ok(());
        }
        for c in 0..t {
            if tuple.contains(&c) {
                continue;
            }
            let ok = (0..pos).all(|q| !h.has_edge(q, pos) || cluster.has_edge(tuple[q], c));
            if ok {
                tuple.push(c);
                walk(g, classes, cluster, h, t, tuple, total)?;
                tuple.pop();
            }
        }
        Ok(())
    }
    walk(g, classes, cluster, h, t, &mut tuple, &mut total)?;
    Ok(total)
}

/// Canonical copies on the given classes, which may differ in size.
fn tuple_copies(g: &SimpleGraph, classes: &[Vec<usize>], h: &PatternGraph) -> Result<u128> {
    let n = classes.iter().map(Vec::len).max().unwrap_or(0);
    if classes.iter().all(|c| c.len() == n) {
        let mg = induced_multipartite(g, classes, h)?;
        return Ok(canonical_count(&mg).count.to_u128().unwrap_or(u128::MAX));
    }
    // Unequal classes: restrict the host to the tuple with class constraints.
    let sets: Vec<_> = classes.iter().map(|c| g.vertex_set(c)).collect();
    let mut count = 0u128;
    let mut chosen = Vec::with_capacity(h.vertex_count());
    fn rec(g: &SimpleGraph, sets: &[crate::bitset::BitSet], h: &PatternGraph, chosen: &mut Vec<usize>, count: &mut u128) {
        let pos = chosen.len();
        if pos == h.vertex_count() {
            *count += 1;
            return;
        }
        let mut cand = sets[pos].clone();
        for (q, &v) in chosen.iter().enumerate() {
            if h.has_edge(q, pos) {
                cand.intersect_with(g.neighbors(v));
            }
        }
        for v in cand.iter() {
            chosen.push(v);
            rec(g, sets, h, chosen, count);
            chosen.pop();
        }
    }
    rec(g, &sets, h, &mut chosen, &mut count);
    Ok(count)
}

/// Deletes the lowest pattern edge of each copy found until none is left or
/// `limit` deletions were made.
pub(crate) fn delete_per_copy(g: &SimpleGraph, h: &PatternGraph, limit: usize) -> (SimpleGraph, usize) {
    let mut cur = g.clone();
    let mut deleted = 0;
    while deleted <= limit {
        let Some(copy) = find_copy(&cur, h, None) else { break };
        let (a, b) = h.edges()[0];
        cur = cur.without_edges(&[(copy[a], copy[b])]);
        deleted += 1;
    }
    (cur, deleted)
}

pub fn run_removal(cfg: &RemovalConfig, master_seed: u64) -> Result<ExperimentReport> {
    let h = &cfg.pattern;
    if h.edge_count() == 0 {
        return Err(Error::pre("removal needs a pattern with at least one edge"));
    }
    let chi = chromatic_number(h)?;
    let e = h.edge_count() as i32;
    let v = h.vertex_count() as i32;
    let copy_cap = &cfg.epsilon * num_traits::pow(cfg.p.clone(), e as usize) * num_traits::pow(int(cfg.big_n as i64), v as usize);
    let params = parameters_of(cfg);
    let budget = edge_budget(&params, "delta").expect("budget parameters") as usize;
    let pcfg = cfg.pipeline.partition_config(&cfg.p);
    let clean = cfg.pipeline.clean_params(&cfg.p);
    let stream = RngStream::new(master_seed);
    let outcomes = run_trials(cfg.threads, cfg.trials, &stream, |_, s| {
        let g = gnp(cfg.big_n, &cfg.p, &s.named("host"))?;
        let sub = few_copies_subgraph(&g, (chi - 1).max(1), &cfg.interior_fraction, &s.named("strategy"))?;
        let copies = count_copies(&sub, h);
        let mut o = Outcome::new();
        o.set("edges", sub.edge_count()).set("copies_before", copies.to_string()).set("budget", budget);
        if crate::rational::from_biguint(&copies) > copy_cap {
            return Ok(o.skip("subgraph has more than ε p^e(H) N^v(H) copies"));
        }
        let part = sparse_regular_partition(&sub, &pcfg, &s.named("partition"))?;
        o.set("classes", part.class_count())
            .set("converged", part.converged)
            .set("refuted_pairs", part.refuted_count());
        let cleaned = clean_partition(&sub, &part, &clean)?;
        let rep = &cleaned.report;
        o.set("removed_within", rep.removed_within)
            .set("removed_refuted", rep.removed_refuted)
            .set("removed_sparse", rep.removed_sparse)
            .set("clean_bound_holds", rep.bound_holds)
            .set("clean_hypotheses_hold", rep.hypotheses_hold);
        let supported = cluster_supported_copies(&cleaned.graph, &part.classes, &cleaned.cluster.graph, h)?;
        let clean_free = find_copy(&cleaned.graph, h, None).is_none();
        o.set("cluster_supported_copies", supported.to_string()).set("clean_alone_h_free", clean_free);
        let room = budget.saturating_sub(rep.removed_total);
        let (out, residual) = if clean_free || !cfg.residual_deletion { (cleaned.graph.clone(), 0) } else { delete_per_copy(&cleaned.graph, h, room) };
        let h_free = find_copy(&out, h, None).is_none();
        debug_assert!(out.is_subgraph_of(&sub));
        o.set("residual_deleted", residual)
            .set("total_deleted", sub.edge_count() - out.edge_count())
            .set("h_free", h_free);
        if !part.converged {
            return Ok(o.inconclusive("partition did not converge"));
        }
        Ok(o)
    })?;
    let caveats = vec![
        CAVEAT_NOT_REFUTED.to_string(),
        "the statement quantifies over all few-copy subgraphs; only the named strategy is tested".into(),
    ];
    let mut summary = BTreeMap::new();
    summary.insert("deletion_budget".into(), Value::from(budget));
    Ok(finish("removal", master_seed, params, "cut_plus_interior_trickle", outcomes, judge, Some(cfg.required_fraction), caveats, summary))
}
