//! `reglab` command-line front end.
//!
//! Exit codes: 0 success, 2 usage/parse/precondition errors, 3 budget
//! errors, 4 assertion or soundness failures (including experiments whose
//! aggregate check fails; the report is written first).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use reglab::counting::{canonical_count, mu_star};
use reglab::experiments::{self as ex, ExperimentReport, Format};
use reglab::partition::{clean_partition, sparse_regular_partition, CleanParams, PartitionConfig};
use reglab::pattern::two_density;
use reglab::random::{exposure_schedule, gnp, sample_class, SampleMode};
use reglab::rational::{parse_probability, parse_rational, Rational};
use reglab::{Error, MultipartiteGraph, PatternGraph, RngStream, SimpleGraph};

#[derive(Parser, Debug)]
#[command(name = "reglab", version, about = "Sparse regularity, canonical counting and Monte Carlo checks on random graphs")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, env = "REGLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// Worker threads; never changes any output.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate random graphs.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Regular partition of an edge-list graph.
    Partition(PartitionArgs),
    /// Partition, then delete within-class, refuted and sparse-pair edges.
    Clean(CleanArgs),
    /// Canonical-copy count of a multipartite graph.
    Count(CountArgs),
    /// 2-density of a pattern.
    M2(M2Args),
    /// Multi-round exposure probabilities.
    Schedule(ScheduleArgs),
    /// Run or revalidate an experiment.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// `G(n,p)` as an edge list.
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
    },
    /// Uniform member of the `m`-edge product class (optionally regular).
    Class(ClassArgs),
}

#[derive(Args, Debug)]
struct PatternArgs {
    /// Pattern JSON file (`{"k":3,"edges":[[1,2],…]}`, 1-indexed).
    #[arg(long, conflicts_with = "clique")]
    pattern: Option<PathBuf>,
    /// Use the clique `K_k` as pattern.
    #[arg(long)]
    clique: Option<usize>,
}

#[derive(Args, Debug)]
struct ClassArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long)]
    n: usize,
    /// Edges per pair: one number, or one per pattern edge separated by commas.
    #[arg(long)]
    m: String,
    #[arg(long)]
    p: String,
    #[arg(long, default_value = "1/2")]
    eps: String,
    /// Re-draw pairs that the regularity checker refutes.
    #[arg(long)]
    rejection: bool,
    #[arg(long, default_value_t = 32)]
    refuter_trials: usize,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    p: String,
    #[arg(long)]
    t0: usize,
    #[arg(long)]
    max_t: usize,
    #[arg(long, default_value_t = 32)]
    refuter_trials: usize,
    /// Refuted-pair budget as a fraction of `t²`; defaults to `eps`.
    #[arg(long)]
    refuted_budget: Option<String>,
}

#[derive(Args, Debug)]
struct CleanArgs {
    #[command(flatten)]
    partition: PartitionArgs,
    #[arg(long)]
    d: String,
    #[arg(long, default_value = "2")]
    big_d: String,
    /// Also write the cleaned graph as an edge list.
    #[arg(long)]
    cleaned_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Multipartite JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Also report `μ*` normalized by `normalizer^k`.
    #[arg(long)]
    normalizer: Option<usize>,
}

#[derive(Args, Debug)]
struct M2Args {
    #[command(flatten)]
    pattern: PatternArgs,
}

#[derive(Args, Debug)]
struct ScheduleArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    rounds: usize,
    #[arg(long)]
    ratio: f64,
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    Counting(CountingArgs),
    DenseCounting(DenseCountingArgs),
    Removal(RemovalArgs),
    CliqueDensity(CliqueDensityArgs),
    HajnalSzemeredi(HsArgs),
    Aes(AesArgs),
    Turan(TuranArgs),
    Klr(KlrArgs),
    /// Recompute every verdict of a stored JSON report.
    Revalidate {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Args, Debug)]
struct CountingArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value_t = 3000)]
    big_n: usize,
    #[arg(long, default_value = "2/25")]
    p: String,
    #[arg(long, default_value = "1/3")]
    eta: String,
    #[arg(long, default_value = "1/4")]
    d: String,
    #[arg(long, default_value = "3/20")]
    delta: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Args, Debug)]
struct DenseCountingArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Comma-separated densities.
    #[arg(long, default_value = "3/10,1/2")]
    densities: String,
    /// Common-density variant with per-pair perturbation `θn²`.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long, default_value = "1/20")]
    tolerance: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
}

#[derive(Args, Debug)]
struct RemovalArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value_t = 2000)]
    big_n: usize,
    #[arg(long, default_value = "7/100")]
    p: String,
    #[arg(long, default_value = "1/10")]
    delta: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Args, Debug)]
struct CliqueDensityArgs {
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 2000)]
    big_n: usize,
    #[arg(long, default_value = "1/10")]
    p: String,
    #[arg(long, default_value = "1")]
    rho: String,
    #[arg(long, default_value = "1/10")]
    epsilon: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
}

#[derive(Args, Debug)]
struct HsArgs {
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1500)]
    big_n: usize,
    #[arg(long, default_value = "3/20")]
    p: String,
    #[arg(long, default_value = "1/4")]
    gamma: String,
    /// Use the complete k-partite graph with this part size instead of a
    /// pruned random graph.
    #[arg(long)]
    complete_part: Option<usize>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
}

#[derive(Args, Debug)]
struct AesArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value_t = 1500)]
    big_n: usize,
    #[arg(long, default_value = "3/25")]
    p: String,
    #[arg(long, default_value = "3/10")]
    gamma: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TuranStrategyArg {
    Subsample,
    PartiteBiased,
    PartiteOnly,
}

#[derive(Args, Debug)]
struct TuranArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value_t = 800)]
    big_n: usize,
    #[arg(long, default_value = "1/5")]
    p: String,
    #[arg(long, default_value = "1/20")]
    epsilon: String,
    #[arg(long, value_enum, default_value = "partite-biased")]
    strategy: TuranStrategyArg,
    #[arg(long, default_value_t = 10)]
    trials: usize,
}

#[derive(Args, Debug)]
struct KlrArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 12)]
    m: usize,
    #[arg(long, default_value = "2/3")]
    epsilon: String,
    #[arg(long, default_value_t = 10000)]
    trials: usize,
}

enum Failure {
    Lib(Error),
    /// Output written, but a checked inequality failed.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => 3,
        Error::Assertion(_) | Error::Soundness(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(4)
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))).into())
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Lib(Error::Io(e))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn probability(s: &str) -> CliResult<Rational> {
    Ok(parse_probability(s)?)
}

fn rational(s: &str) -> CliResult<Rational> {
    Ok(parse_rational(s)?)
}

fn load_pattern(a: &PatternArgs) -> CliResult<PatternGraph> {
    match (&a.pattern, a.clique) {
        (Some(p), _) => Ok(PatternGraph::from_json(&read(p)?)?),
        (None, Some(k)) => Ok(PatternGraph::complete(k)),
        (None, None) => Ok(PatternGraph::complete(3)),
    }
}

fn pattern_arg(a: &PatternArgs) -> Value {
    match (&a.pattern, a.clique) {
        (Some(p), _) => json!({ "pattern": p.display().to_string() }),
        (None, k) => json!({ "clique": k.unwrap_or(3) }),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(GenCommand::Gnp { n, p }) => {
            let q = probability(p)?;
            let g = gnp(*n, &q, &RngStream::new(cli.seed))?;
            let header = vec![format!("reglab gen gnp n={n} p={p} seed={}", cli.seed)];
            emit(cli, &g.to_edge_list(&header))
        }
        Command::Gen(GenCommand::Class(a)) => gen_class(cli, a),
        Command::Partition(a) => {
            let (g, cfg, params) = partition_inputs(cli, a)?;
            let part = sparse_regular_partition(&g, &cfg, &RngStream::new(cli.seed))?;
            let mut doc: Value = serde_json::from_str(&part.to_json()).expect("partition json");
            doc["parameters"] = params;
            emit(cli, &pretty(&doc))
        }
        Command::Clean(a) => clean(cli, a),
        Command::Count(a) => {
            let g = MultipartiteGraph::from_json(&read(&a.input)?)?;
            let c = canonical_count(&g);
            let mut doc = serde_json::to_value(&c).expect("count json");
            if let Some(n) = a.normalizer {
                doc["mu_star"] = Value::from(mu_star(&g, n)?.to_string());
            }
            doc["parameters"] = json!({ "input": a.input.display().to_string(), "normalizer": a.normalizer });
            emit(cli, &pretty(&doc))
        }
        Command::M2(a) => {
            let h = load_pattern(&a.pattern)?;
            let r = two_density(&h)?;
            match cli.format {
                Some(OutFormat::Json) => {
                    let mut doc = serde_json::to_value(&r).expect("density json");
                    doc["parameters"] = pattern_arg(&a.pattern);
                    emit(cli, &pretty(&doc))
                }
                _ => emit(cli, &format!("{}\n", r.m2)),
            }
        }
        Command::Schedule(a) => {
            let s = exposure_schedule(a.p, a.rounds, a.ratio)?;
            match cli.format {
                Some(OutFormat::Json) => emit(cli, &(s.to_json() + "\n")),
                _ => {
                    let text: String =
                        s.probabilities.iter().enumerate().map(|(i, x)| format!("p{} = {}\n", i + 1, short(*x))).collect();
                    emit(cli, &text)
                }
            }
        }
        Command::Experiment(e) => experiment(cli, e),
    }
}

/// Twelve significant decimals with trailing zeros removed.
fn short(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn gen_class(cli: &Cli, a: &ClassArgs) -> CliResult<()> {
    let h = load_pattern(&a.pattern)?;
    let parsed: Vec<usize> = a
        .m
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad edge count {x:?}"))))
        .collect::<Result<_, _>>()?;
    let m = if parsed.len() == 1 { vec![parsed[0]; h.edge_count()] } else { parsed };
    let mode = if a.rejection { SampleMode::Rejection { refuter_trials: a.refuter_trials } } else { SampleMode::Raw };
    let sample = sample_class(&h, a.n, &m, &probability(&a.p)?, &rational(&a.eps)?, mode, &RngStream::new(cli.seed))?;
    let mut doc: Value = serde_json::from_str(&sample.graph.to_json()).expect("multipartite json");
    doc["attempts"] = Value::from(sample.attempts);
    doc["parameters"] = json!({
        "pattern": pattern_arg(&a.pattern), "n": a.n, "m": a.m, "p": a.p, "eps": a.eps,
        "rejection": a.rejection, "refuter_trials": a.refuter_trials, "seed": cli.seed,
    });
    emit(cli, &(serde_json::to_string(&doc).expect("json") + "\n"))
}

fn partition_inputs(cli: &Cli, a: &PartitionArgs) -> CliResult<(SimpleGraph, PartitionConfig, Value)> {
    let g = SimpleGraph::parse_edge_list(&read(&a.graph)?)?;
    let mut cfg = PartitionConfig::new(rational(&a.eps)?, probability(&a.p)?, a.t0, a.max_t);
    cfg.refuter_trials = a.refuter_trials;
    if let Some(b) = &a.refuted_budget {
        cfg.refuted_budget = rational(b)?;
    }
    let params = json!({
        "graph": a.graph.display().to_string(), "eps": a.eps, "p": a.p, "t0": a.t0, "max_t": a.max_t,
        "refuter_trials": a.refuter_trials, "refuted_budget": a.refuted_budget, "seed": cli.seed,
    });
    Ok((g, cfg, params))
}

fn clean(cli: &Cli, a: &CleanArgs) -> CliResult<()> {
    let (g, cfg, mut params) = partition_inputs(cli, &a.partition)?;
    params["d"] = Value::from(a.d.clone());
    params["big_d"] = Value::from(a.big_d.clone());
    let part = sparse_regular_partition(&g, &cfg, &RngStream::new(cli.seed))?;
    let cp = CleanParams { epsilon: cfg.epsilon.clone(), p: cfg.p.clone(), d: rational(&a.d)?, big_d: rational(&a.big_d)?, t0: cfg.t0 };
    let cleaned = clean_partition(&g, &part, &cp)?;
    if let Some(path) = &a.cleaned_out {
        let header = vec![format!("reglab clean of {} seed={}", a.partition.graph.display(), cli.seed)];
        std::fs::write(path, cleaned.graph.to_edge_list(&header)).map_err(Error::Io)?;
    }
    let cluster: Value = serde_json::from_str(&cleaned.cluster.to_json()).expect("cluster json");
    let doc = json!({
        "parameters": params,
        "classes": part.class_count(),
        "converged": part.converged,
        "report": cleaned.report,
        "cluster": cluster,
    });
    emit(cli, &pretty(&doc))
}

fn experiment(cli: &Cli, e: &ExperimentCommand) -> CliResult<()> {
    let mut args = Map::new();
    let report = match e {
        ExperimentCommand::Revalidate { report } => {
            let r = ExperimentReport::from_json(&read(report)?)?;
            let v = ex::revalidate(&r)?;
            emit(cli, &pretty(&serde_json::to_value(&v).expect("json")))?;
            return if v.consistent { Ok(()) } else { Err(Failure::Check(format!("report {} is inconsistent", report.display()))) };
        }
        ExperimentCommand::Counting(a) => {
            record(&mut args, &[("big_n", a.big_n.into()), ("p", a.p.clone().into()), ("eta", a.eta.clone().into()), ("d", a.d.clone().into()), ("delta", a.delta.clone().into()), ("trials", a.trials.into())]);
            args.insert("pattern".into(), pattern_arg(&a.pattern));
            let mut cfg = ex::CountingConfig::new(load_pattern(&a.pattern)?, a.big_n, probability(&a.p)?, rational(&a.eta)?, rational(&a.d)?, rational(&a.delta)?, a.trials);
            cfg.threads = cli.threads;
            ex::run_counting(&cfg, cli.seed)?
        }
        ExperimentCommand::DenseCounting(a) => {
            record(&mut args, &[("n", a.n.into()), ("densities", a.densities.clone().into()), ("theta", a.theta.clone().into()), ("tolerance", a.tolerance.clone().into()), ("trials", a.trials.into())]);
            args.insert("pattern".into(), pattern_arg(&a.pattern));
            let densities = a.densities.split(',').map(|d| probability(d.trim())).collect::<CliResult<Vec<_>>>()?;
            let mut cfg = ex::DenseCountingConfig::new(load_pattern(&a.pattern)?, a.n, densities, a.trials);
            cfg.theta = a.theta.as_deref().map(rational).transpose()?;
            cfg.tolerance = rational(&a.tolerance)?;
            cfg.threads = cli.threads;
            ex::run_dense_counting(&cfg, cli.seed)?
        }
        ExperimentCommand::Removal(a) => {
            record(&mut args, &[("big_n", a.big_n.into()), ("p", a.p.clone().into()), ("delta", a.delta.clone().into()), ("trials", a.trials.into())]);
            args.insert("pattern".into(), pattern_arg(&a.pattern));
            let mut cfg = ex::RemovalConfig::new(load_pattern(&a.pattern)?, a.big_n, probability(&a.p)?, rational(&a.delta)?, a.trials);
            cfg.threads = cli.threads;
            ex::run_removal(&cfg, cli.seed)?
        }
        ExperimentCommand::CliqueDensity(a) => {
            record(&mut args, &[("k", a.k.into()), ("big_n", a.big_n.into()), ("p", a.p.clone().into()), ("rho", a.rho.clone().into()), ("epsilon", a.epsilon.clone().into()), ("trials", a.trials.into())]);
            let mut cfg = ex::CliqueDensityConfig::new(a.k, a.big_n, probability(&a.p)?, rational(&a.rho)?, rational(&a.epsilon)?, a.trials);
            cfg.threads = cli.threads;
            ex::run_clique_density(&cfg, cli.seed)?
        }
        ExperimentCommand::HajnalSzemeredi(a) => {
            record(&mut args, &[("k", a.k.into()), ("big_n", a.big_n.into()), ("p", a.p.clone().into()), ("gamma", a.gamma.clone().into()), ("complete_part", a.complete_part.into()), ("trials", a.trials.into())]);
            let mut cfg = ex::HajnalSzemerediConfig::new(a.k, a.big_n, probability(&a.p)?, rational(&a.gamma)?, a.trials);
            if let Some(part) = a.complete_part {
                cfg.host = ex::HostStrategy::CompleteMultipartite { part };
            }
            cfg.threads = cli.threads;
            ex::run_hajnal_szemeredi(&cfg, cli.seed)?
        }
        ExperimentCommand::Aes(a) => {
            record(&mut args, &[("big_n", a.big_n.into()), ("p", a.p.clone().into()), ("gamma", a.gamma.clone().into()), ("trials", a.trials.into())]);
            args.insert("pattern".into(), pattern_arg(&a.pattern));
            let mut cfg = ex::AesConfig::new(load_pattern(&a.pattern)?, a.big_n, probability(&a.p)?, rational(&a.gamma)?, a.trials);
            cfg.threads = cli.threads;
            ex::run_aes(&cfg, cli.seed)?
        }
        ExperimentCommand::Turan(a) => {
            let strategy = match a.strategy {
                TuranStrategyArg::Subsample => ex::TuranStrategy::Subsample,
                TuranStrategyArg::PartiteBiased => ex::TuranStrategy::PartiteBiased,
                TuranStrategyArg::PartiteOnly => ex::TuranStrategy::PartiteOnly,
            };
            record(&mut args, &[("big_n", a.big_n.into()), ("p", a.p.clone().into()), ("epsilon", a.epsilon.clone().into()), ("trials", a.trials.into())]);
            args.insert("strategy".into(), serde_json::to_value(strategy).expect("json"));
            args.insert("pattern".into(), pattern_arg(&a.pattern));
            let mut cfg = ex::TuranConfig::new(load_pattern(&a.pattern)?, a.big_n, probability(&a.p)?, rational(&a.epsilon)?, a.trials);
            cfg.strategy = strategy;
            cfg.threads = cli.threads;
            ex::run_turan(&cfg, cli.seed)?
        }
        ExperimentCommand::Klr(a) => {
            record(&mut args, &[("n", a.n.into()), ("m", a.m.into()), ("epsilon", a.epsilon.clone().into()), ("trials", a.trials.into())]);
            args.insert("pattern".into(), pattern_arg(&a.pattern));
            let cfg = ex::KlrConfig { pattern: load_pattern(&a.pattern)?, n: a.n, m: a.m, epsilon: rational(&a.epsilon)?, trials: a.trials, threads: cli.threads };
            ex::probe_klr_class(&cfg, cli.seed)?
        }
    };
    let mut report = report;
    report.parameters.insert("arguments".into(), Value::Object(args));
    let format = match cli.format {
        Some(OutFormat::Csv) => Format::Csv,
        _ => Format::Json,
    };
    emit(cli, &report.render(format)?)?;
    if report.aggregate.passed {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{}: {} of {} trials pass, below the required fraction",
            report.experiment,
            report.aggregate.passing,
            report.trials.len()
        )))
    }
}

fn record(args: &mut Map<String, Value>, items: &[(&str, Value)]) {
    let sorted: BTreeMap<&str, &Value> = items.iter().map(|(k, v)| (*k, v)).collect();
    for (k, v) in sorted {
        args.insert(k.to_string(), v.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_trims_trailing_zeros() {
        assert_eq!(short(0.5), "0.5");
        assert_eq!(short(1.0), "1");
        assert_eq!(short(0.047191020145123), "0.047191020145");
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::Precondition("x".into())), 2);
        assert_eq!(exit_code(&Error::Budget("x".into())), 3);
        assert_eq!(exit_code(&Error::Soundness("x".into())), 4);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
