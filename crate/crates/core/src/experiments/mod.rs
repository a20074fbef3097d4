//! Monte Carlo harnesses for the counting, removal, clique-density, packing,
//! stability and Turán statements, plus the KŁR-class probe.
//!
//! Every experiment produces an [`ExperimentReport`] whose trials are
//! reproducible from `(master seed, trial index)`. Trial verdicts are
//! recomputed from the raw per-trial values by [`revalidate`], so a stored
//! report can be checked offline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::random::RngStream;

pub mod aes;
pub mod clique_density;
pub mod counting;
pub mod hajnal_szemeredi;
pub mod klr;
pub mod removal;
pub mod turan;

pub use aes::{run_aes, AesConfig};
pub use clique_density::{run_clique_density, CliqueDensityConfig};
pub use counting::{run_counting, run_dense_counting, CountingConfig, DenseCountingConfig};
pub use hajnal_szemeredi::{run_hajnal_szemeredi, HajnalSzemerediConfig, HostStrategy};
pub use klr::{probe_klr_class, KlrConfig};
pub use removal::{run_removal, RemovalConfig};
pub use turan::{run_turan, TuranConfig, TuranStrategy};

pub const SCHEMA_VERSION: u32 = 1;

/// Caveat attached to every report that relies on sampled regularity.
pub const CAVEAT_NOT_REFUTED: &str = "regularity above the exhaustive budget means \"not refuted by the sampled refuter\", not certified";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub status: TrialStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub values: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub passed: bool,
    pub conclusive: usize,
    pub passing: usize,
    pub pass_fraction: f64,
    /// `None` for descriptive experiments.
    pub required_fraction: Option<f64>,
    pub summary: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub experiment: String,
    pub master_seed: u64,
    pub parameters: Map<String, Value>,
    pub strategy: String,
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
    pub caveats: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One row per trial; value columns are the sorted union of keys. The
    /// parameter block is echoed as leading `#` comment lines.
    pub fn to_csv(&self) -> Result<String> {
        let mut keys: Vec<&String> = self.trials.iter().flat_map(|t| t.values.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut header = vec!["experiment".to_string(), "trial".into(), "status".into(), "reason".into()];
        header.extend(keys.iter().map(|k| k.to_string()));
        w.write_record(&header)?;
        for t in &self.trials {
            let mut row = vec![
                self.experiment.clone(),
                t.trial.to_string(),
                serde_json::to_value(t.status)?.as_str().unwrap_or_default().to_string(),
                t.reason.clone().unwrap_or_default(),
            ];
            row.extend(keys.iter().map(|k| t.values.get(*k).map_or_else(String::new, scalar_text)));
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        let mut out = format!("# schema={}\n# experiment={}\n# master_seed={}\n", self.schema, self.experiment, self.master_seed);
        for (k, v) in &self.parameters {
            out.push_str(&format!("# {k}={}\n", scalar_text(v)));
        }
        out.push_str(&String::from_utf8(bytes).expect("csv is utf-8"));
        Ok(out)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Builds the parameter block from a serializable config; `threads` is
/// dropped because it must not influence any output.
pub(crate) fn parameters_of<T: Serialize>(cfg: &T) -> Map<String, Value> {
    match serde_json::to_value(cfg).expect("serializable config") {
        Value::Object(mut m) => {
            m.remove("threads");
            m
        }
        _ => Map::new(),
    }
}

/// Raw per-trial outcome before judging.
pub(crate) struct Outcome {
    pub status: Option<TrialStatus>,
    pub reason: Option<String>,
    pub values: BTreeMap<String, Value>,
}

impl Outcome {
    pub fn new() -> Self {
        Outcome { status: None, reason: None, values: BTreeMap::new() }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Some(TrialStatus::Skipped);
        self.reason = Some(reason.into());
        self
    }

    pub fn inconclusive(mut self, reason: impl Into<String>) -> Self {
        self.status = Some(TrialStatus::Inconclusive);
        self.reason = Some(reason.into());
        self
    }
}

/// Runs `trials` trials on a pool of `threads` workers; trial `i` receives
/// substream `[i]` and results are collected in trial order.
pub(crate) fn run_trials<F>(threads: usize, trials: usize, stream: &RngStream, f: F) -> Result<Vec<Outcome>>
where
    F: Fn(usize, &RngStream) -> Result<Outcome> + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot build thread pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(|t| f(t, &stream.child(t as u64))).collect())
}

pub(crate) type Judge = fn(&Map<String, Value>, &BTreeMap<String, Value>) -> TrialStatus;

pub(crate) fn finish(
    experiment: &str,
    master_seed: u64,
    parameters: Map<String, Value>,
    strategy: &str,
    outcomes: Vec<Outcome>,
    judge: Judge,
    required_fraction: Option<f64>,
    caveats: Vec<String>,
    summary: BTreeMap<String, Value>,
) -> ExperimentReport {
    let trials: Vec<TrialRecord> = outcomes
        .into_iter()
        .enumerate()
        .map(|(trial, o)| TrialRecord {
            trial,
            status: o.status.unwrap_or_else(|| judge(&parameters, &o.values)),
            reason: o.reason,
            values: o.values,
        })
        .collect();
    let aggregate = aggregate(&trials, required_fraction, summary);
    ExperimentReport {
        schema: SCHEMA_VERSION,
        experiment: experiment.to_string(),
        master_seed,
        parameters,
        strategy: strategy.to_string(),
        trials,
        aggregate,
        caveats,
    }
}

fn aggregate(trials: &[TrialRecord], required_fraction: Option<f64>, summary: BTreeMap<String, Value>) -> Aggregate {
    let conclusive = trials.iter().filter(|t| matches!(t.status, TrialStatus::Pass | TrialStatus::Fail)).count();
    let passing = trials.iter().filter(|t| t.status == TrialStatus::Pass).count();
    // Fractions are over all trials: skipped and inconclusive trials count
    // against the requirement.
    let pass_fraction = if trials.is_empty() { 0.0 } else { passing as f64 / trials.len() as f64 };
    let passed = required_fraction.is_none_or(|r| !trials.is_empty() && pass_fraction >= r);
    Aggregate { passed, conclusive, passing, pass_fraction, required_fraction, summary }
}

fn judge_for(experiment: &str) -> Option<Judge> {
    Some(match experiment {
        "counting" => counting::judge,
        "dense_counting" => counting::judge_dense,
        "removal" => removal::judge,
        "clique_density" => clique_density::judge,
        "hajnal_szemeredi" => hajnal_szemeredi::judge,
        "aes" => aes::judge,
        "turan" => turan::judge,
        "klr" => klr::judge,
        _ => return None,
    })
}

/// Result of re-deriving every verdict of a stored report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Revalidation {
    pub consistent: bool,
    pub mismatched_trials: Vec<usize>,
    pub aggregate_consistent: bool,
}

/// Recomputes trial verdicts from raw values and compares them, and the
/// aggregate, with what the report claims. Skipped and inconclusive trials
/// carry their reason and are kept as recorded.
pub fn revalidate(report: &ExperimentReport) -> Result<Revalidation> {
    let judge = judge_for(&report.experiment).ok_or_else(|| Error::Parse(format!("unknown experiment {:?}", report.experiment)))?;
    let mut mismatched = Vec::new();
    let mut rejudged = report.trials.clone();
    for t in rejudged.iter_mut() {
        if matches!(t.status, TrialStatus::Skipped | TrialStatus::Inconclusive) {
            continue;
        }
        let s = judge(&report.parameters, &t.values);
        if s != t.status {
            mismatched.push(t.trial);
            t.status = s;
        }
    }
    let agg = aggregate(&rejudged, report.aggregate.required_fraction, report.aggregate.summary.clone());
    let aggregate_consistent = agg.passed == report.aggregate.passed && agg.passing == report.aggregate.passing;
    Ok(Revalidation { consistent: mismatched.is_empty() && aggregate_consistent, mismatched_trials: mismatched, aggregate_consistent })
}

pub(crate) fn num(values: &BTreeMap<String, Value>, key: &str) -> f64 {
    values.get(key).and_then(Value::as_f64).unwrap_or(f64::NAN)
}

pub(crate) fn int_of(values: &BTreeMap<String, Value>, key: &str) -> Option<u64> {
    values.get(key).and_then(|v| v.as_u64().or_else(|| v.as_str().and_then(|s| s.parse().ok())))
}

pub(crate) fn flag(values: &BTreeMap<String, Value>, key: &str) -> bool {
    values.get(key).and_then(Value::as_bool).unwrap_or(false)
}

pub(crate) fn param_f64(params: &Map<String, Value>, key: &str) -> f64 {
    match params.get(key) {
        Some(Value::String(s)) => crate::rational::parse_rational(s).map(|q| crate::rational::to_f64(&q)).unwrap_or(f64::NAN),
        Some(v) => v.as_f64().unwrap_or(f64::NAN),
        None => f64::NAN,
    }
}

pub(crate) fn bool_status(ok: bool) -> TrialStatus {
    if ok {
        TrialStatus::Pass
    } else {
        TrialStatus::Fail
    }
}

/// Random disjoint classes of size `n` from a uniform permutation of `0..total`.
pub(crate) fn random_classes(total: usize, k: usize, n: usize, stream: &RngStream) -> Result<Vec<Vec<usize>>> {
    if k * n > total {
        return Err(Error::pre(format!("{k} classes of size {n} do not fit in {total} vertices")));
    }
    let perm = crate::random::permutation(total, &mut stream.rng());
    Ok((0..k)
        .map(|i| {
            let mut c = perm[i * n..(i + 1) * n].to_vec();
            c.sort_unstable();
            c
        })
        .collect())
}

/// Parses an experiment name for the command line.
pub fn experiment_names() -> &'static [&'static str] {
    &["counting", "dense_counting", "removal", "clique_density", "hajnal_szemeredi", "aes", "turan", "klr"]
}

/// Partition and cleaning constants shared by the application pipelines.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineParams {
    /// Regularity parameter of the partition.
    #[serde(with = "crate::rational::serde_fraction")]
    pub eps_reg: crate::rational::Rational,
    /// Convergence allows `refuted_budget · t²` refuted pairs.
    #[serde(with = "crate::rational::serde_fraction")]
    pub refuted_budget: crate::rational::Rational,
    pub t0: usize,
    pub max_t: usize,
    pub refuter_trials: usize,
    /// Sparse-pair cutoff of the cleaning step.
    #[serde(with = "crate::rational::serde_fraction")]
    pub d: crate::rational::Rational,
    #[serde(with = "crate::rational::serde_fraction")]
    pub big_d: crate::rational::Rational,
}

impl PipelineParams {
    pub(crate) fn partition_config(&self, p: &crate::rational::Rational) -> crate::partition::PartitionConfig {
        let mut c = crate::partition::PartitionConfig::new(self.eps_reg.clone(), p.clone(), self.t0, self.max_t);
        c.refuted_budget = self.refuted_budget.clone();
        c.refuter_trials = self.refuter_trials;
        c
    }

    pub(crate) fn clean_params(&self, p: &crate::rational::Rational) -> crate::partition::CleanParams {
        crate::partition::CleanParams {
            epsilon: self.eps_reg.clone(),
            p: p.clone(),
            d: self.d.clone(),
            big_d: self.big_d.clone(),
            t0: self.t0,
        }
    }
}

/// Exact `⌊c⌋` of a rational parameter product, for deletion budgets.
pub(crate) fn exact_param(params: &Map<String, Value>, key: &str) -> Option<crate::rational::Rational> {
    match params.get(key)? {
        Value::String(s) => crate::rational::parse_rational(s).ok(),
        Value::Number(n) => n.as_u64().map(|x| crate::rational::int(x as i64)),
        _ => None,
    }
}

/// `⌊c · p · N²⌋` from the parameter block.
pub(crate) fn edge_budget(params: &Map<String, Value>, factor_key: &str) -> Option<u64> {
    let c = exact_param(params, factor_key)?;
    let p = exact_param(params, "p")?;
    let n = exact_param(params, "big_n")?;
    Some(crate::rational::floor_usize(&(c * p * &n * &n)) as u64)
}

/// Random balanced split of `0..n` into `parts` sides; returns each vertex's side.
pub fn random_sides(n: usize, parts: usize, stream: &RngStream) -> Vec<usize> {
    let perm = crate::random::permutation(n, &mut stream.rng());
    let mut side = vec![0; n];
    for (pos, &v) in perm.iter().enumerate() {
        side[v] = pos * parts / n.max(1);
    }
    side
}
