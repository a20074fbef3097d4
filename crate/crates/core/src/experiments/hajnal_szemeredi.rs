//! `K_k`-packings in subgraphs of `G(N,p)` with minimum degree above
//! `(1 − 1/k + γ)pN`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{bool_status, exact_param, finish, int_of, parameters_of, run_trials, ExperimentReport, Outcome, PipelineParams, TrialStatus, CAVEAT_NOT_REFUTED};
use crate::bitset::BitSet;
use crate::counting::find_copy;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::packing::{is_factor, kk_factor};
use crate::partition::{clean_partition, sparse_regular_partition, trim_low_degree};
use crate::pattern::PatternGraph;
use crate::random::{gnp, RngStream};
use crate::rational::{frac, int, serde_fraction, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HostStrategy {
    /// Prune low-degree vertices of `G(N,p)`, relative to the current order.
    PrunedRandom,
    /// Use the complete `k`-partite graph with parts of the given size; the
    /// random stage is skipped.
    CompleteMultipartite { part: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct HajnalSzemerediConfig {
    pub k: usize,
    pub big_n: usize,
    #[serde(with = "serde_fraction")]
    pub p: Rational,
    #[serde(with = "serde_fraction")]
    pub gamma: Rational,
    /// Trim may remove at most `βt` clusters.
    #[serde(with = "serde_fraction")]
    pub beta: Rational,
    pub host: HostStrategy,
    pub pipeline: PipelineParams,
    pub trials: usize,
    pub required_fraction: f64,
    pub threads: usize,
}

impl HajnalSzemerediConfig {
    /// `β = min(γ/2, 1/(2k))`, `γ′ = β²/14`, `D = 1 + γ′`, `d = 2γ′`.
    pub fn new(k: usize, big_n: usize, p: Rational, gamma: Rational, trials: usize) -> Self {
        let beta = (&gamma / int(2)).min(frac(1, 2 * k as i64));
        let gp = &beta * &beta / int(14);
        HajnalSzemerediConfig {
            k,
            big_n,
            p,
            gamma,
            pipeline: PipelineParams {
                eps_reg: frac(1, 2),
                refuted_budget: frac(1, 2),
                t0: 2 * k,
                max_t: 4 * k,
                refuter_trials: 16,
                d: &gp * int(2),
                big_d: int(1) + &gp,
            },
            beta,
            host: HostStrategy::PrunedRandom,
            trials,
            required_fraction: 0.8,
            threads: 1,
        }
    }
}

pub(crate) fn judge(params: &Map<String, Value>, values: &BTreeMap<String, Value>) -> TrialStatus {
    let (Some(gamma), Some(order), Some(covered)) = (exact_param(params, "gamma"), int_of(values, "order"), int_of(values, "covered")) else {
        return TrialStatus::Fail;
    };
    bool_status(int(covered as i64) >= (int(1) - gamma) * int(order as i64))
}

/// Repeatedly drops a vertex of smallest degree while it is below
/// `c · |V(current)|`; returns the surviving vertices.
fn prune_min_degree(g: &SimpleGraph, c: &Rational) -> Vec<usize> {
    let n = g.vertex_count();
    let mut alive = BitSet::full(n);
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut order = n;
    while let Some(v) = alive.iter().min_by_key(|&v| (deg[v], v)) {
        if int(deg[v] as i64) >= c * int(order as i64) {
            break;
        }
        alive.remove(v);
        order -= 1;
        for w in g.neighbors(v).iter() {
            if alive.contains(w) {
                deg[w] -= 1;
            }
        }
    }
    alive.to_vec()
}

/// Greedily extracts disjoint copies of `K_k` with the `a`-th vertex drawn
/// from `allowed[a]`, marking used vertices in `covered`.
fn extract(g: &SimpleGraph, kk: &PatternGraph, allowed: &[BitSet], covered: &mut BitSet, out: &mut Vec<Vec<usize>>) {
    loop {
        let sets: Vec<BitSet> = allowed
            .iter()
            .map(|a| {
                let mut s = a.clone();
                s.difference_with(covered);
                s
            })
            .collect();
        let Some(copy) = find_copy(g, kk, Some(&sets)) else { break };
        for &v in &copy {
            covered.insert(v);
        }
        out.push(copy);
    }
}

fn verify_packing(g: &SimpleGraph, k: usize, packing: &[Vec<usize>]) -> bool {
    let mut seen = BitSet::new(g.vertex_count());
    packing.iter().all(|c| {
        c.len() == k
            && c.iter().all(|&v| seen.insert(v))
            && (0..k).all(|a| (a + 1..k).all(|b| g.has_edge(c[a], c[b])))
    })
}

pub fn run_hajnal_szemeredi(cfg: &HajnalSzemerediConfig, master_seed: u64) -> Result<ExperimentReport> {
    let k = cfg.k;
    if k < 2 {
        return Err(Error::pre("packing needs k ≥ 2"));
    }
    let kk = PatternGraph::complete(k);
    let ki = k as i64;
    let degree_factor = (int(1) - frac(1, ki) + &cfg.gamma) * &cfg.p;
    let (p_eff, strategy) = match cfg.host {
        HostStrategy::PrunedRandom => (cfg.p.clone(), "pruned_random"),
        HostStrategy::CompleteMultipartite { .. } => (int(1), "complete_multipartite"),
    };
    let pcfg = cfg.pipeline.partition_config(&p_eff);
    let clean = cfg.pipeline.clean_params(&p_eff);
    let stream = RngStream::new(master_seed);
    let outcomes = run_trials(cfg.threads, cfg.trials, &stream, |_, s| {
        let mut o = Outcome::new();
        let (gp, order) = match cfg.host {
            HostStrategy::PrunedRandom => {
                let g = gnp(cfg.big_n, &cfg.p, &s.named("host"))?;
                let kept = prune_min_degree(&g, &degree_factor);
                let gp = g.induced(&kept);
                let target = &degree_factor * int(cfg.big_n as i64);
                o.set("pruned", cfg.big_n - kept.len())
                    .set("min_degree_ratio", gp.min_degree() as f64 / (to_f64(&cfg.p) * cfg.big_n as f64))
                    .set("min_degree_target_met", int(gp.min_degree() as i64) >= target);
                (gp, cfg.big_n)
            }
            HostStrategy::CompleteMultipartite { part } => {
                let gp = SimpleGraph::complete_multipartite(&vec![part; k]);
                (gp, k * part)
            }
        };
        o.set("order", order).set("covered", 0usize);
        if gp.vertex_count() < cfg.pipeline.t0 {
            return Ok(o.inconclusive("prune: fewer vertices than t0 survive"));
        }
        let part = sparse_regular_partition(&gp, &pcfg, &s.named("partition"))?;
        o.set("classes", part.class_count()).set("converged", part.converged);
        if !part.converged {
            return Ok(o.inconclusive("partition did not converge"));
        }
        let cleaned = clean_partition(&gp, &part, &clean)?;
        o.set("clean_removed", cleaned.report.removed_total);
        let t = part.class_count();
        let max_removed = &cfg.beta * int(t as i64);
        let trim = trim_low_degree(&cleaned.cluster.graph, |cur| (int(1) - frac(1, ki)) * int(cur as i64), k, &max_removed);
        o.set("trimmed_clusters", trim.removed.len());
        if trim.failed {
            return Ok(o.inconclusive("trim removed too many clusters"));
        }
        let Some(factor) = kk_factor(&trim.graph, k)? else {
            return Ok(o.inconclusive("factor: trimmed cluster graph has no K_k-factor"));
        };
        debug_assert!(is_factor(&trim.graph, k, &factor));
        let n = gp.vertex_count();
        let mut covered = BitSet::new(n);
        let mut packing = Vec::new();
        for clique in &factor {
            let allowed: Vec<BitSet> = clique.iter().map(|&c| gp.vertex_set(&part.classes[trim.kept[c]])).collect();
            extract(&cleaned.graph, &kk, &allowed, &mut covered, &mut packing);
        }
        let phase1 = covered.count();
        let everyone = vec![BitSet::full(n); k];
        extract(&gp, &kk, &everyone, &mut covered, &mut packing);
        if !verify_packing(&gp, k, &packing) {
            return Err(Error::Soundness("extracted packing is not a set of disjoint cliques".into()));
        }
        o.set("within_tuple_covered", phase1)
            .set("covered", covered.count())
            .set("coverage", covered.count() as f64 / order as f64)
            .set("cliques", packing.len());
        Ok(o)
    })?;
    let caveats = vec![
        CAVEAT_NOT_REFUTED.to_string(),
        "pruning is relative to the current order, so the minimum degree is measured against N and may fall short of the target".into(),
        "cluster trimming uses the threshold (1 − 1/k)·t without the additive k".into(),
    ];
    Ok(finish("hajnal_szemeredi", master_seed, parameters_of(cfg), strategy, outcomes, judge, Some(cfg.required_fraction), caveats, BTreeMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_tripartite_is_packed_perfectly() {
        let mut cfg = HajnalSzemerediConfig::new(3, 0, int(1), frac(1, 4), 1);
        cfg.host = HostStrategy::CompleteMultipartite { part: 10 };
        let r = run_hajnal_szemeredi(&cfg, 0).unwrap();
        let t = &r.trials[0];
        assert_eq!(t.status, TrialStatus::Pass, "{t:?}");
        assert_eq!(t.values["covered"], Value::from(30));
    }

    #[test]
    fn pruning_meets_relative_threshold() {
        let g = SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        assert_eq!(prune_min_degree(&g, &frac(1, 2)), vec![0, 1, 2]);
    }

    #[test]
    fn packing_verification_rejects_overlap() {
        let g = SimpleGraph::complete(5);
        assert!(verify_packing(&g, 3, &[vec![0, 1, 2]]));
        assert!(!verify_packing(&g, 3, &[vec![0, 1, 2], vec![2, 3, 4]]));
    }
}
