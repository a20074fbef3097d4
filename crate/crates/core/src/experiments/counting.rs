//! Canonical-copy counts in random multipartite subgraphs of `G(N,p)`, and
//! the dense counting lemma on random blow-ups.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{Map, Value};

use super::{bool_status, finish, num, param_f64, parameters_of, random_classes, run_trials, ExperimentReport, Outcome, TrialStatus, CAVEAT_NOT_REFUTED};
use crate::counting::canonical_count;
use crate::error::{Error, Result};
use crate::multipartite::{induced_multipartite, MultipartiteGraph};
use crate::pattern::{is_strictly_balanced, two_density, PatternGraph};
use crate::random::{gnp, random_bipartite, RngStream};
use crate::rational::{ceil_usize, floor_usize, frac, int, serde_fraction, serde_fraction_vec, to_f64, Rational};
use crate::regularity::{bipartite_sampled, Status};

#[derive(Clone, Debug, Serialize)]
pub struct CountingConfig {
    pub pattern: PatternGraph,
    pub big_n: usize,
    #[serde(with = "serde_fraction")]
    pub p: Rational,
    /// Part size is `⌈ηN⌉`.
    #[serde(with = "serde_fraction")]
    pub eta: Rational,
    /// Pairs need `m_ij ≥ d·p·n²`.
    #[serde(with = "serde_fraction")]
    pub d: Rational,
    /// Ratio band `[1 − δ, 1 + δ]`.
    #[serde(with = "serde_fraction")]
    pub delta: Rational,
    /// Regularity parameter of the recorded pair checks.
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    pub refuter_trials: usize,
    pub trials: usize,
    pub required_fraction: f64,
    pub threads: usize,
}

impl CountingConfig {
    pub fn new(pattern: PatternGraph, big_n: usize, p: Rational, eta: Rational, d: Rational, delta: Rational, trials: usize) -> Self {
        CountingConfig {
            pattern,
            big_n,
            p,
            eta,
            d,
            delta,
            epsilon: frac(2, 5),
            refuter_trials: 16,
            trials,
            required_fraction: 0.9,
            threads: 1,
        }
    }
}

pub(crate) fn judge(params: &Map<String, Value>, values: &BTreeMap<String, Value>) -> TrialStatus {
    let delta = param_f64(params, "delta");
    let r = num(values, "ratio");
    bool_status((1.0 - delta..=1.0 + delta).contains(&r))
}

pub fn run_counting(cfg: &CountingConfig, master_seed: u64) -> Result<ExperimentReport> {
    let h = &cfg.pattern;
    if h.edge_count() == 0 {
        return Err(Error::pre("counting needs a pattern with at least one edge"));
    }
    let k = h.vertex_count();
    let n = ceil_usize(&(&cfg.eta * int(cfg.big_n as i64)));
    if n == 0 || k * n > cfg.big_n {
        return Err(Error::pre(format!("{k} classes of size ⌈ηN⌉ = {n} do not fit in N = {}", cfg.big_n)));
    }
    let density = two_density(h)?;
    let strict = is_strictly_balanced(h);
    let floor_m = &cfg.d * &cfg.p * int((n * n) as i64);
    let stream = RngStream::new(master_seed);
    let outcomes = run_trials(cfg.threads, cfg.trials, &stream, |_, s| {
        let g = gnp(cfg.big_n, &cfg.p, &s.named("host"))?;
        let classes = random_classes(cfg.big_n, k, n, &s.named("classes"))?;
        let mg = induced_multipartite(&g, &classes, h)?;
        let m = mg.edge_counts();
        let mut o = Outcome::new();
        o.set("m", m.clone());
        if let Some(e) = m.iter().position(|&me| int(me as i64) < floor_m) {
            let (a, b) = h.edges()[e];
            return Ok(o.skip(format!("pair {}{} has {} edges, below d·p·n²", a + 1, b + 1, m[e])));
        }
        let refuted = mg
            .pairs()
            .iter()
            .enumerate()
            .filter(|(e, b)| bipartite_sampled(b, &cfg.epsilon, &cfg.p, cfg.refuter_trials, &s.named("refute").child(*e as u64)).status == Status::Refuted)
            .count();
        let c = canonical_count(&mg);
        o.set("count", c.count.to_string())
            .set("expected", to_f64(&c.expected))
            .set("ratio", c.ratio.unwrap_or(f64::NAN))
            .set("refuted_pairs", refuted);
        Ok(o)
    })?;
    let mut caveats = vec![CAVEAT_NOT_REFUTED.to_string()];
    let scaled = to_f64(&cfg.p) * (cfg.big_n as f64).powf(1.0 / to_f64(&density.m2));
    caveats.push(format!(
        "p·N^(1/m2) = {scaled:.3}; the counting statement needs p ≥ C·N^(-1/m2) for an unspecified C"
    ));
    if !strict {
        caveats.push("pattern is not strictly balanced: the two-sided ratio band is descriptive".into());
    }
    let mut summary = BTreeMap::new();
    summary.insert("part_size".into(), Value::from(n));
    summary.insert("m2".into(), Value::from(density.m2.to_string()));
    summary.insert("strictly_balanced".into(), Value::from(strict));
    let ratios: Vec<f64> = outcomes.iter().filter_map(|o| o.values.get("ratio").and_then(Value::as_f64)).collect();
    if let Some(min) = ratios.iter().copied().reduce(f64::min) {
        summary.insert("xi_hat".into(), Value::from(min));
    }
    let required = strict.then_some(cfg.required_fraction);
    Ok(finish("counting", master_seed, parameters_of(cfg), "random_classes", outcomes, judge, required, caveats, summary))
}

/// Random blow-ups with per-pair densities drawn from `densities`; with
/// `theta`, all pairs share one base density and each count is perturbed by
/// at most `θn²`.
#[derive(Clone, Debug, Serialize)]
pub struct DenseCountingConfig {
    pub pattern: PatternGraph,
    pub n: usize,
    #[serde(with = "serde_fraction_vec")]
    pub densities: Vec<Rational>,
    #[serde(with = "crate::rational::serde_fraction_opt")]
    pub theta: Option<Rational>,
    /// Absolute tolerance on `count / n^k`.
    #[serde(with = "serde_fraction")]
    pub tolerance: Rational,
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    pub refuter_trials: usize,
    pub trials: usize,
    pub required_fraction: f64,
    pub threads: usize,
}

impl DenseCountingConfig {
    pub fn new(pattern: PatternGraph, n: usize, densities: Vec<Rational>, trials: usize) -> Self {
        DenseCountingConfig {
            pattern,
            n,
            densities,
            theta: None,
            tolerance: frac(1, 20),
            epsilon: frac(1, 4),
            refuter_trials: 8,
            trials,
            required_fraction: 0.95,
            threads: 1,
        }
    }
}

pub(crate) fn judge_dense(params: &Map<String, Value>, values: &BTreeMap<String, Value>) -> TrialStatus {
    let tol = param_f64(params, "tolerance");
    bool_status((num(values, "normalized") - num(values, "target")).abs() <= tol)
}

fn blowup(cfg: &DenseCountingConfig, s: &RngStream) -> Result<(MultipartiteGraph, Rational)> {
    let h = &cfg.pattern;
    let nn = int((cfg.n * cfg.n) as i64);
    let mut rng = s.named("densities").rng();
    let mut pick = || cfg.densities[rng.gen_range(0..cfg.densities.len())].clone();
    let (m, target) = match &cfg.theta {
        None => {
            let d: Vec<Rational> = (0..h.edge_count()).map(|_| pick()).collect();
            let m: Vec<usize> = d.iter().map(|x| floor_usize(&(x * &nn))).collect();
            let target = m.iter().fold(Rational::from_integer(1.into()), |acc, &me| acc * frac(me as i64, (cfg.n * cfg.n) as i64));
            (m, target)
        }
        Some(theta) => {
            let base = floor_usize(&(pick() * &nn));
            let spread = floor_usize(&(theta * &nn)) as i64;
            let mut jitter = s.named("perturb").rng();
            let m: Vec<usize> = (0..h.edge_count())
                .map(|_| (base as i64 + jitter.gen_range(-spread..=spread)).clamp(0, (cfg.n * cfg.n) as i64) as usize)
                .collect();
            let target = num_traits::pow(frac(base as i64, (cfg.n * cfg.n) as i64), h.edge_count());
            (m, target)
        }
    };
    let pairs = m
        .iter()
        .enumerate()
        .map(|(e, &me)| random_bipartite(cfg.n, me, &s.named("pairs").child(e as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok((MultipartiteGraph::new(h.clone(), cfg.n, pairs)?, target))
}

pub fn run_dense_counting(cfg: &DenseCountingConfig, master_seed: u64) -> Result<ExperimentReport> {
    if cfg.pattern.edge_count() == 0 {
        return Err(Error::pre("counting needs a pattern with at least one edge"));
    }
    if cfg.densities.is_empty() || cfg.densities.iter().any(|d| d.is_zero() || *d > int(1) || *d < Rational::zero()) {
        return Err(Error::pre("densities must lie in (0,1]"));
    }
    if cfg.n == 0 {
        return Err(Error::pre("part size must be positive"));
    }
    let one = int(1);
    let stream = RngStream::new(master_seed);
    let outcomes = run_trials(cfg.threads, cfg.trials, &stream, |_, s| {
        let (mg, target) = blowup(cfg, s)?;
        let c = canonical_count(&mg);
        let refuted = mg
            .pairs()
            .iter()
            .enumerate()
            .filter(|(e, b)| bipartite_sampled(b, &cfg.epsilon, &one, cfg.refuter_trials, &s.named("refute").child(*e as u64)).status == Status::Refuted)
            .count();
        let mut o = Outcome::new();
        o.set("m", mg.edge_counts())
            .set("count", c.count.to_string())
            .set("normalized", c.normalized.to_f64().unwrap_or(f64::NAN))
            .set("target", to_f64(&target))
            .set("refuted_pairs", refuted);
        Ok(o)
    })?;
    let strategy = if cfg.theta.is_some() { "perturbed_common_density" } else { "independent_densities" };
    let caveats = vec![CAVEAT_NOT_REFUTED.to_string()];
    Ok(finish("dense_counting", master_seed, parameters_of(cfg), strategy, outcomes, judge_dense, Some(cfg.required_fraction), caveats, BTreeMap::new()))
}
