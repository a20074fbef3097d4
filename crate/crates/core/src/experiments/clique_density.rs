//! Clique density in relatively dense subgraphs of `G(N,p)`.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{Map, Value};

use super::{bool_status, finish, num, parameters_of, run_trials, ExperimentReport, Outcome, PipelineParams, TrialStatus, CAVEAT_NOT_REFUTED};
use crate::counting::{big_to_f64, count_cliques};
use crate::error::{Error, Result};
use crate::gk::gk_estimate;
use crate::partition::{clean_partition, sparse_regular_partition, ClusterGraph};
use crate::random::{edge_subsample, gnp, RngStream};
use crate::rational::{frac, int, serde_fraction, to_f64, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct CliqueDensityConfig {
    pub k: usize,
    pub big_n: usize,
    #[serde(with = "serde_fraction")]
    pub p: Rational,
    /// Edge-retention probability of the subsample.
    #[serde(with = "serde_fraction")]
    pub rho: Rational,
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    pub pipeline: PipelineParams,
    pub trials: usize,
    pub required_fraction: f64,
    pub threads: usize,
}

impl CliqueDensityConfig {
    pub fn new(k: usize, big_n: usize, p: Rational, rho: Rational, epsilon: Rational, trials: usize) -> Self {
        CliqueDensityConfig {
            k,
            big_n,
            p,
            rho,
            epsilon,
            pipeline: PipelineParams {
                eps_reg: frac(1, 2),
                refuted_budget: frac(1, 2),
                t0: 4,
                max_t: 16,
                refuter_trials: 16,
                d: frac(1, 20),
                big_d: int(2),
            },
            trials,
            required_fraction: 0.9,
            threads: 1,
        }
    }
}

pub(crate) fn judge(_: &Map<String, Value>, values: &BTreeMap<String, Value>) -> TrialStatus {
    bool_status(num(values, "count") >= num(values, "bound"))
}

fn binomial(n: usize, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * frac((n - i) as i64, (i + 1) as i64))
}

/// `Σ ∏ R(i_a, i_b)` over `k`-subsets of classes, and the same sum weighted
/// by class sizes.
fn reduced_sums(cluster: &ClusterGraph, sizes: &[usize], k: usize) -> (Rational, Rational) {
    let t = cluster.vertex_count();
    let mut plain = Rational::zero();
    let mut weighted = Rational::zero();
    let mut pick = Vec::with_capacity(k);
    fn rec(cluster: &ClusterGraph, sizes: &[usize], k: usize, t: usize, start: usize, pick: &mut Vec<usize>, prod: Rational, plain: &mut Rational, weighted: &mut Rational) {
        if pick.len() == k {
            let vol = pick.iter().fold(Rational::one(), |acc, &c| acc * int(sizes[c] as i64));
            *weighted += &prod * vol;
            *plain += prod;
            return;
        }
        for c in start..t {
            let next = pick.iter().fold(prod.clone(), |acc, &q| acc * cluster.weight(q, c));
            if next.is_zero() {
                continue;
            }
            pick.push(c);
            rec(cluster, sizes, k, t, c + 1, pick, next, plain, weighted);
            pick.pop();
        }
    }
    rec(cluster, sizes, k, t, 0, &mut pick, Rational::one(), &mut plain, &mut weighted);
    (plain, weighted)
}

pub fn run_clique_density(cfg: &CliqueDensityConfig, master_seed: u64) -> Result<ExperimentReport> {
    let k = cfg.k;
    if !(3..=4).contains(&k) {
        return Err(Error::pre(format!("clique density supports k ∈ {{3,4}}, got {k}")));
    }
    if cfg.rho > Rational::one() || cfg.rho <= Rational::zero() {
        return Err(Error::pre(format!("ρ must lie in (0,1], got {}", cfg.rho)));
    }
    let pairs = int((cfg.big_n * (cfg.big_n - 1) / 2) as i64);
    let pk = num_traits::pow(cfg.p.clone(), k * (k - 1) / 2);
    let scale = &pk * binomial(cfg.big_n, k);
    let pcfg = cfg.pipeline.partition_config(&cfg.p);
    let clean = cfg.pipeline.clean_params(&cfg.p);
    let stream = RngStream::new(master_seed);
    let outcomes = run_trials(cfg.threads, cfg.trials, &stream, |_, s| {
        let g = gnp(cfg.big_n, &cfg.p, &s.named("host"))?;
        let sub = if cfg.rho.is_one() { g } else { edge_subsample(&g, &cfg.rho, &s.named("subsample"))? };
        let rel = (int(sub.edge_count() as i64) / (&cfg.p * &pairs)).min(Rational::one());
        let gk = gk_estimate(k, &rel)?;
        let bound = (&gk - &cfg.epsilon) * &scale;
        let count = count_cliques(&sub, k);
        let part = sparse_regular_partition(&sub, &pcfg, &s.named("partition"))?;
        let cleaned = clean_partition(&sub, &part, &clean)?;
        let sizes: Vec<usize> = part.classes.iter().map(Vec::len).collect();
        let (plain, weighted) = reduced_sums(&cleaned.cluster, &sizes, k);
        let t = part.class_count();
        let mut o = Outcome::new();
        o.set("relative_density", to_f64(&rel))
            .set("gk", gk.to_string())
            .set("count", big_to_f64(&count))
            .set("count_exact", count.to_string())
            .set("bound", to_f64(&bound))
            .set("ratio_to_expectation", big_to_f64(&count) / to_f64(&scale))
            .set("classes", t)
            .set("converged", part.converged)
            .set("reduced_density", if t >= k { to_f64(&(plain / binomial(t, k))) } else { 0.0 })
            .set("reduced_estimate", (&weighted * &pk).to_f64().unwrap_or(f64::NAN));
        Ok(o)
    })?;
    let caveats = vec![
        CAVEAT_NOT_REFUTED.to_string(),
        "g_k is evaluated exactly at 8 vertices outside the zero region ρ ≤ 1 − 1/(k−1)".into(),
    ];
    Ok(finish("clique_density", master_seed, parameters_of(cfg), "random_edge_subsample", outcomes, judge, Some(cfg.required_fraction), caveats, BTreeMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_host_counts_exactly() {
        let cfg = CliqueDensityConfig::new(3, 30, int(1), int(1), frac(1, 10), 1);
        let r = run_clique_density(&cfg, 0).unwrap();
        assert_eq!(r.trials[0].values["count_exact"], Value::from("4060"));
        assert_eq!(r.trials[0].status, TrialStatus::Pass);
    }

    #[test]
    fn rho_above_one_is_rejected() {
        let cfg = CliqueDensityConfig::new(3, 30, frac(1, 2), frac(3, 2), frac(1, 10), 1);
        assert!(matches!(run_clique_density(&cfg, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_region_bound_is_negative() {
        let cfg = CliqueDensityConfig::new(3, 60, frac(1, 2), frac(2, 5), frac(1, 10), 1);
        let r = run_clique_density(&cfg, 2).unwrap();
        assert!(r.trials[0].values["bound"].as_f64().unwrap() < 0.0);
        assert_eq!(r.trials[0].status, TrialStatus::Pass);
    }
}
