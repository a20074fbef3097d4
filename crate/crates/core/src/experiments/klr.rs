//! Probe of the bad subclass: regular `H`-shaped multipartite graphs with
//! no canonical copy of `H`. Descriptive only.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{bool_status, finish, flag, parameters_of, run_trials, ExperimentReport, Outcome, TrialStatus};
use crate::counting::canonical_count;
use crate::error::{Error, Result};
use crate::pattern::PatternGraph;
use crate::random::{sample_class, wilson_interval, RngStream, SampleMode};
use crate::rational::{frac, serde_fraction, Rational};
use crate::regularity::{bipartite_exhaustive, Status, EXHAUSTIVE_BUDGET};

/// Largest part size probed by default.
pub const KLR_DEFAULT_MAX_N: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct KlrConfig {
    pub pattern: PatternGraph,
    pub n: usize,
    pub m: usize,
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    pub trials: usize,
    pub threads: usize,
}

pub(crate) fn judge(_: &Map<String, Value>, values: &BTreeMap<String, Value>) -> TrialStatus {
    bool_status(!flag(values, "bad"))
}

/// Samples uniform members of the `m`-edge product class, keeps those whose
/// pairs are all `(ε, m/n²)`-regular, and estimates the fraction without a
/// canonical copy. Reports a Wilson 95% interval and `β̂ = estimate^{1/m}`.
pub fn probe_klr_class(cfg: &KlrConfig, master_seed: u64) -> Result<ExperimentReport> {
    let h = &cfg.pattern;
    if h.edge_count() == 0 {
        return Err(Error::pre("probe needs a pattern with at least one edge"));
    }
    if cfg.n > EXHAUSTIVE_BUDGET {
        return Err(Error::budget(format!("exhaustive regularity is limited to n ≤ {EXHAUSTIVE_BUDGET}, got {}", cfg.n)));
    }
    if cfg.n == 0 || cfg.m == 0 || cfg.m > cfg.n * cfg.n {
        return Err(Error::pre(format!("need 1 ≤ m ≤ n², got n = {}, m = {}", cfg.n, cfg.m)));
    }
    let p = frac(cfg.m as i64, (cfg.n * cfg.n) as i64);
    let m = vec![cfg.m; h.edge_count()];
    let stream = RngStream::new(master_seed);
    let outcomes = run_trials(cfg.threads, cfg.trials, &stream, |_, s| {
        let sample = sample_class(h, cfg.n, &m, &p, &cfg.epsilon, SampleMode::Raw, s)?;
        let mut regular = true;
        for b in sample.graph.pairs() {
            if bipartite_exhaustive(b, &cfg.epsilon, &p)?.status == Status::Refuted {
                regular = false;
                break;
            }
        }
        let mut o = Outcome::new();
        o.set("regular", regular);
        if !regular {
            return Ok(o.skip("irregular sample"));
        }
        let c = canonical_count(&sample.graph);
        o.set("copies", c.count.to_string()).set("bad", c.count == 0u32.into());
        Ok(o)
    })?;
    let regular = outcomes.iter().filter(|o| flag(&o.values, "regular")).count();
    if regular == 0 {
        return Err(Error::budget(format!("no regular sample among {} draws (acceptance rate 0)", cfg.trials)));
    }
    let bad = outcomes.iter().filter(|o| flag(&o.values, "bad")).count();
    let est = bad as f64 / regular as f64;
    let (lo, hi) = wilson_interval(bad as u64, regular as u64, 1.959_963_984_540_054);
    let mut summary = BTreeMap::new();
    summary.insert("regular_samples".into(), Value::from(regular));
    summary.insert("acceptance_rate".into(), Value::from(regular as f64 / cfg.trials as f64));
    summary.insert("bad_samples".into(), Value::from(bad));
    summary.insert("bad_fraction".into(), Value::from(est));
    summary.insert("wilson_95".into(), Value::from(vec![lo, hi]));
    summary.insert("beta_hat".into(), Value::from(est.powf(1.0 / cfg.m as f64)));
    let caveats = vec!["a single (n, m, ε) estimate neither confirms nor refutes the conjectured bound".into()];
    Ok(finish("klr", master_seed, parameters_of(cfg), "uniform_product_class", outcomes, judge, None, caveats, summary))
}
