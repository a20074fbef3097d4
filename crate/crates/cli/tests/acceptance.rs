//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL ...` line. Tolerances are pinned here.

use std::process::Command;

use num_traits::Signed;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use reglab::experiments::{self as ex, ExperimentReport, TrialStatus};
use reglab::graph::pair_density;
use reglab::packing::{is_factor, kk_factor};
use reglab::partition::{clean_partition, equipartition, sparse_regular_partition, CleanParams, PartitionConfig};
use reglab::pattern::{d2, two_density};
use reglab::random::{exposure_schedule, expose_rounds, gnp, mix64, union};
use reglab::rational::{ceil_usize, frac, int};
use reglab::regularity::{check_regular_exhaustive, confirm_refutation, Status};
use reglab::{PatternGraph, Rational, RngStream, SimpleGraph, VertexSetPair};

fn verdict(criterion: u32, ok: bool, detail: String) {
    println!("criterion {criterion}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn fraction_passing(report: &ExperimentReport) -> f64 {
    report.trials.iter().filter(|t| t.status == TrialStatus::Pass).count() as f64 / report.trials.len() as f64
}

/// Literal 2-density over every edge subset (single edge counts `1/2`).
fn literal_m2(h: &PatternGraph) -> Rational {
    let e = h.edges();
    let mut best = frac(1, 2);
    for mask in 1u32..(1 << e.len()) {
        let chosen: Vec<_> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        let verts: u32 = chosen.iter().fold(0, |m, &(a, b)| m | 1 << a | 1 << b);
        let v = verts.count_ones() as usize;
        if v >= 3 {
            best = best.max(d2(chosen.len(), v));
        }
    }
    best
}

#[test]
fn criterion_01_two_density() {
    let mut ok = two_density(&PatternGraph::complete(2)).unwrap().m2 == frac(1, 2);
    for k in 3..=6 {
        ok &= two_density(&PatternGraph::complete(k)).unwrap().m2 == frac(k as i64 + 1, 2);
    }
    for l in 4..=7 {
        let c = PatternGraph::cycle(l);
        let want = frac(l as i64 - 1, l as i64 - 2);
        ok &= two_density(&c).unwrap().m2 == want && literal_m2(&c) == want;
    }
    verdict(1, ok, "K_k gives (k+1)/2 for k=3..6, K_2 gives 1/2, C_l matches brute force for l=4..7".into());
}

#[test]
fn criterion_02_counting_oracle() {
    use reglab::counting::{canonical_count, constrained_count, extension_degree};
    use reglab::multipartite::Bipartite;
    use reglab::MultipartiteGraph;

    let mut s = 0u64;
    let mut next = move || {
        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(s)
    };
    let mut failures = 0usize;
    let instances = 1000;
    for _ in 0..instances {
        let k = 2 + (next() % 4) as usize;
        let all: Vec<_> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let mut edges: Vec<_> = all.iter().copied().filter(|_| next() % 3 != 0).collect();
        if edges.is_empty() {
            edges.push(all[0]);
        }
        let h = PatternGraph::new(k, &edges).unwrap();
        let n = 1 + (next() % 5) as usize;
        let mut host = || {
            let pairs = h
                .edges()
                .iter()
                .map(|_| {
                    let es: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| next() % 8 < 5).collect();
                    Bipartite::from_edges(n, &es).unwrap()
                })
                .collect();
            MultipartiteGraph::new(h.clone(), n, pairs).unwrap()
        };
        let g = host();
        let gp = host();
        let sub: Vec<_> = h.edges().iter().copied().filter(|_| next() % 2 == 0).collect();
        let ok_tuple = |t: &[usize], constrained: bool| {
            h.edges().iter().all(|&(a, b)| g.has_edge(a, t[a], b, t[b]) && (!constrained || !sub.contains(&(a, b)) || gp.has_edge(a, t[a], b, t[b])))
        };
        let tuples: Vec<Vec<usize>> = (0..n.pow(k as u32))
            .map(|mut c| {
                (0..k)
                    .map(|_| {
                        let x = c % n;
                        c /= n;
                        x
                    })
                    .collect()
            })
            .collect();
        let naive_plain = tuples.iter().filter(|t| ok_tuple(t, false)).count() as u64;
        let naive_con = tuples.iter().filter(|t| ok_tuple(t, true)).count() as u64;
        let con = constrained_count(&g, &sub, &gp).unwrap().count;
        failures += (canonical_count(&g).count != naive_plain.into()) as usize;
        failures += (con != naive_con.into()) as usize;
        for (e, &(i, j)) in h.edges().iter().enumerate() {
            let mut sum = 0u64;
            for (u, v) in g.pairs()[e].edges() {
                let deg = extension_degree(&g, &sub, &gp, (i, j), (u, v)).unwrap();
                let naive = tuples.iter().filter(|t| t[i] == u && t[j] == v && ok_tuple(t, true)).count() as u64;
                failures += (deg != naive.into()) as usize;
                sum += naive;
            }
            if !sub.contains(&(i, j)) {
                failures += (con != sum.into()) as usize;
            }
        }
    }
    verdict(2, failures == 0, format!("{instances} instances, {failures} disagreements with enumeration or the edge-sum identity"));
}

#[test]
fn criterion_03_dense_counting() {
    let k3 = PatternGraph::complete(3);
    let cfg = ex::DenseCountingConfig::new(k3.clone(), 200, vec![frac(3, 10), frac(1, 2)], 50);
    let plain = ex::run_dense_counting(&cfg, 3).unwrap();
    let mut perturbed = cfg.clone();
    perturbed.theta = Some(frac(1, 50));
    let theta = ex::run_dense_counting(&perturbed, 3).unwrap();
    let (a, b) = (fraction_passing(&plain), fraction_passing(&theta));
    verdict(3, a >= 0.95 && b >= 0.95, format!("within ±1/20 of the density product: {a:.2} independent, {b:.2} with θ=1/50 (need 0.95)"));
}

#[test]
fn criterion_04_sparse_counting() {
    let cfg = ex::CountingConfig::new(PatternGraph::complete(3), 3000, frac(2, 25), frac(1, 3), frac(1, 4), frac(3, 20), 20);
    let report = ex::run_counting(&cfg, 4).unwrap();
    let in_band = report
        .trials
        .iter()
        .filter(|t| t.values.get("ratio").and_then(|v| v.as_f64()).is_some_and(|r| (0.85..=1.15).contains(&r)))
        .count();
    let frac_in = in_band as f64 / 20.0;
    verdict(4, frac_in >= 0.9, format!("ratio in [0.85, 1.15] on {in_band}/20 seeds (need 18)"));
}

#[test]
fn criterion_05_exposure_schedule() {
    let mut worst = 0.0f64;
    let mut bounds_ok = true;
    for &p in &[0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        for rounds in 1..=8 {
            for &ratio in &[1.0, 1.25, 1.5, 2.0, 3.0] {
                let s = exposure_schedule(p, rounds, ratio).unwrap();
                worst = worst.max(s.reconstruction_error());
                bounds_ok &= s.probabilities.iter().sum::<f64>() >= p;
                bounds_ok &= s.probabilities.iter().all(|&q| q >= s.round_floor());
            }
        }
    }
    // Distribution of the two-round union on the triangle host.
    let host = SimpleGraph::complete(3);
    let s = exposure_schedule(0.5, 2, 2.0).unwrap();
    let samples = 100_000u64;
    let mut observed = [0u64; 8];
    let root = RngStream::new(5);
    for i in 0..samples {
        let rounds = expose_rounds(&host, &s, &root.child(i));
        let u = union(&rounds).unwrap();
        let mask = u.edges().iter().map(|&(a, b)| 1usize << (a + b - 1)).sum::<usize>();
        observed[mask] += 1;
    }
    let expected = vec![samples as f64 / 8.0; 8];
    let chi2 = reglab::random::chi_square_statistic(&observed, &expected);
    // Upper 1% point of chi-square with 7 degrees of freedom.
    let critical = 18.475;
    let ok = worst <= 1e-12 && bounds_ok && chi2 <= critical;
    verdict(5, ok, format!("max reconstruction error {worst:.1e}, bounds hold: {bounds_ok}, chi-square {chi2:.2} vs {critical}"));
}

#[test]
fn criterion_06_chernoff() {
    let (t, p) = (10_000u64, 0.3);
    let draws = 100_000u32;
    let bin = Binomial::new(t, p).unwrap();
    let mut rng = RngStream::new(6).rng();
    let exceed = (0..draws).filter(|_| bin.sample(&mut rng) > (2.0 * p * t as f64) as u64).count();
    let estimate = exceed as f64 / draws as f64;
    let bound = (-p * t as f64 / 16.0).exp();
    // Sanity: the sampler is centred where it should be.
    let mean: f64 = (0..1000).map(|_| bin.sample(&mut rng) as f64).sum::<f64>() / 1000.0;
    let ok = estimate <= bound && (mean - p * t as f64).abs() < 20.0;
    verdict(6, ok, format!("Pr(X > 2pt) ≈ {estimate:e} over {draws} draws, bound exp(-pt/16) = {bound:.3e}, sample mean {mean:.1}"));
}

/// Full-quantifier check over all subset sizes.
fn brute_regular(g: &SimpleGraph, pair: &VertexSetPair, eps: &Rational, p: &Rational) -> bool {
    let (a, b) = (pair.u.len(), pair.v.len());
    let rows: Vec<u32> =
        pair.u.iter().map(|&u| pair.v.iter().enumerate().filter(|(_, &v)| g.has_edge(u, v)).map(|(i, _)| 1u32 << i).sum()).collect();
    let whole = pair_density(g, pair).unwrap();
    let (min_a, min_b) = (ceil_usize(&(eps * int(a as i64))), ceil_usize(&(eps * int(b as i64))));
    let bound = eps * p;
    (1u32..1 << a).filter(|m| m.count_ones() as usize >= min_a).all(|um| {
        (1u32..1 << b).filter(|m| m.count_ones() as usize >= min_b).all(|vm| {
            let e: u32 = (0..a).filter(|&i| um >> i & 1 == 1).map(|i| (rows[i] & vm).count_ones()).sum();
            (frac(e as i64, (um.count_ones() * vm.count_ones()) as i64) - &whole).abs() <= bound
        })
    })
}

#[test]
fn criterion_07_regularity_soundness() {
    let mut disagreements = 0;
    let mut bad_witnesses = 0;
    let mut cases = 0;
    let mut s = 7u64;
    for a in 1..=8usize {
        for b in 1..=8usize {
            for rep in 0..4 {
                let num = 2 + (a * 3 + b * 5 + rep) as u64 % 13;
                let mut edges = Vec::new();
                for u in 0..a {
                    for v in 0..b {
                        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
                        if mix64(s) % 16 < num {
                            edges.push((u, a + v));
                        }
                    }
                }
                let g = SimpleGraph::from_edges(a + b, &edges).unwrap();
                let pair = VertexSetPair::new((0..a).collect(), (a..a + b).collect()).unwrap();
                for eps in [frac(1, 4), frac(1, 2)] {
                    for p in [frac(1, 2), frac(1, 1)] {
                        cases += 1;
                        let v = check_regular_exhaustive(&g, &pair, &eps, &p).unwrap();
                        disagreements += ((v.status == Status::CertifiedRegular) != brute_regular(&g, &pair, &eps, &p)) as usize;
                        if v.is_refuted() && !confirm_refutation(&g, &pair, &v).unwrap() {
                            bad_witnesses += 1;
                        }
                    }
                }
            }
        }
    }
    // Sampled witnesses from a full partition run on a planted graph.
    let g = planted_blocks(300, 29);
    let mut cfg = PartitionConfig::new(frac(1, 4), int(1), 2, 16);
    cfg.refuter_trials = 16;
    cfg.refuted_budget = frac(1, 16);
    let part = sparse_regular_partition(&g, &cfg, &RngStream::new(7)).unwrap();
    let mut sampled = 0;
    for rec in part.pairs.iter().filter(|r| r.verdict.is_refuted()) {
        sampled += 1;
        let pair = VertexSetPair::new(part.classes[rec.i].clone(), part.classes[rec.j].clone()).unwrap();
        if !confirm_refutation(&g, &pair, &rec.verdict).unwrap() {
            bad_witnesses += 1;
        }
    }
    verdict(
        7,
        disagreements == 0 && bad_witnesses == 0,
        format!("{cases} exhaustive cases up to 8+8: {disagreements} disagreements; {bad_witnesses} unverified witnesses ({sampled} sampled)"),
    );
}

/// Two hidden blocks by a seeded permutation; edge chance 4/5 inside, 1/5 across.
fn planted_blocks(n: usize, seed: u64) -> SimpleGraph {
    let block: Vec<usize> = (0..n).map(|v| (mix64(seed ^ (v as u64) << 1) & 1) as usize).collect();
    let mut rng = RngStream::new(seed).rng();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let q = if block[u] == block[v] { 0.8 } else { 0.2 };
            if rng.gen::<f64>() < q {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, &edges).unwrap()
}

#[test]
fn criterion_08_partition_contracts() {
    let mut equi = true;
    for n in 0..200 {
        for t in 1..=16 {
            let sizes: Vec<usize> = equipartition(n, t).iter().map(Vec::len).collect();
            equi &= sizes.iter().sum::<usize>() == n && sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1;
        }
    }
    let p = frac(1, 5);
    let (mut bound_ok, mut with_hypotheses) = (0, 0);
    for seed in 0..20u64 {
        let g = gnp(600, &p, &RngStream::new(800 + seed)).unwrap();
        let mut cfg = PartitionConfig::new(frac(1, 2), p.clone(), 4, 16);
        cfg.refuter_trials = 16;
        let part = sparse_regular_partition(&g, &cfg, &RngStream::new(seed)).unwrap();
        let params = CleanParams { epsilon: frac(1, 2), p: p.clone(), d: frac(1, 10), big_d: int(2), t0: 4 };
        let c = clean_partition(&g, &part, &params).unwrap();
        with_hypotheses += c.report.hypotheses_hold as usize;
        bound_ok += c.report.bound_holds as usize;
    }
    // Planted recovery at p = 1.
    let n = 400;
    let seed = 31;
    let g = planted_blocks(n, seed);
    let block: Vec<usize> = (0..n).map(|v| (mix64(seed ^ (v as u64) << 1) & 1) as usize).collect();
    let mut cfg = PartitionConfig::new(frac(1, 4), int(1), 2, 16);
    cfg.refuter_trials = 16;
    // With t = 2 the single pair fits inside a budget of εt², so refinement
    // would never start.
    cfg.refuted_budget = frac(1, 16);
    let part = sparse_regular_partition(&g, &cfg, &RngStream::new(8)).unwrap();
    let majority: usize = part
        .classes
        .iter()
        .map(|c| {
            let ones = c.iter().filter(|&&v| block[v] == 1).count();
            ones.max(c.len() - ones)
        })
        .sum();
    let purity = majority as f64 / n as f64;
    let ok = equi && bound_ok == 20 && with_hypotheses == 20 && purity >= 0.9;
    verdict(
        8,
        ok,
        format!(
            "equipartition exact: {equi}; deletion bound held on {bound_ok}/20 runs ({with_hypotheses} with all hypotheses); planted purity {purity:.3} over {} classes",
            part.class_count()
        ),
    );
}

#[test]
fn criterion_09_removal() {
    let cfg = ex::RemovalConfig::new(PatternGraph::complete(3), 2000, frac(7, 100), frac(1, 10), 20);
    let report = ex::run_removal(&cfg, 9).unwrap();
    let good = report
        .trials
        .iter()
        .filter(|t| {
            let free = t.values.get("h_free").and_then(|v| v.as_bool()) == Some(true);
            let deleted = t.values.get("total_deleted").and_then(|v| v.as_u64());
            let budget = t.values.get("budget").and_then(|v| v.as_u64());
            free && matches!((deleted, budget), (Some(d), Some(b)) if d <= b)
        })
        .count();
    let budget = t_budget(&report);
    verdict(9, good >= 18, format!("triangle-free within ⌊δpN²⌋ = {budget} on {good}/20 seeds (need 18)"));
}

fn t_budget(report: &ExperimentReport) -> String {
    report.trials.first().and_then(|t| t.values.get("budget")).map_or("?".into(), |v| v.to_string())
}

#[test]
fn criterion_10_packing() {
    let mut disagreements = 0;
    let mut s = 10u64;
    for k in 2..=4usize {
        for t in (k..=9).filter(|t| t % k == 0) {
            for rep in 0..80u64 {
                let mut edges = Vec::new();
                for u in 0..t {
                    for v in u + 1..t {
                        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
                        if mix64(s) % 16 < 6 + rep % 10 {
                            edges.push((u, v));
                        }
                    }
                }
                let g = SimpleGraph::from_edges(t, &edges).unwrap();
                let got = kk_factor(&g, k).unwrap();
                let oracle = factor_exists(&g, k, (1u32 << t) - 1);
                disagreements += (got.is_some() != oracle) as usize;
                if let Some(f) = got {
                    disagreements += (!is_factor(&g, k, &f)) as usize;
                }
            }
        }
    }
    let k222 = SimpleGraph::complete_multipartite(&[2, 2, 2]);
    let exact = kk_factor(&k222, 3).unwrap().is_some_and(|f| f.len() == 2 && is_factor(&k222, 3, &f));
    let cfg = ex::HajnalSzemerediConfig::new(3, 1500, frac(3, 20), frac(1, 4), 10);
    let report = ex::run_hajnal_szemeredi(&cfg, 10).unwrap();
    let covered = report
        .trials
        .iter()
        .filter(|t| {
            let c = t.values.get("covered").and_then(|v| v.as_u64()).unwrap_or(0) as f64;
            let order = t.values.get("order").and_then(|v| v.as_u64()).unwrap_or(u64::MAX) as f64;
            c >= 0.75 * order
        })
        .count();
    let ok = disagreements == 0 && exact && covered >= 8;
    verdict(10, ok, format!("{disagreements} oracle disagreements for t ≤ 9; K_(2,2,2) exact: {exact}; coverage ≥ 3/4 on {covered}/10 seeds"));
}

/// Independent oracle: try every clique over the lowest remaining vertex, by
/// enumerating all `k`-subsets of the remaining set.
fn factor_exists(g: &SimpleGraph, k: usize, remaining: u32) -> bool {
    if remaining == 0 {
        return true;
    }
    let first = remaining.trailing_zeros() as usize;
    let rest = remaining & !(1 << first);
    let mut sub = rest;
    loop {
        if sub.count_ones() as usize == k - 1 {
            let mut block: Vec<usize> = (0..32).filter(|&v| sub >> v & 1 == 1).collect();
            block.push(first);
            let clique = block.iter().enumerate().all(|(i, &u)| block[i + 1..].iter().all(|&v| g.has_edge(u, v)));
            if clique && factor_exists(g, k, rest & !sub) {
                return true;
            }
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & rest;
    }
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut same = true;
    let runs: [&[&str]; 3] = [
        &["experiment", "counting", "--big-n", "1200", "--p", "1/8", "--trials", "4"],
        &["experiment", "removal", "--big-n", "900", "--p", "1/10", "--trials", "2"],
        &["experiment", "hajnal-szemeredi", "--big-n", "600", "--p", "1/4", "--trials", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for threads in ["1", "2", "4"] {
            let out = dir.path().join(format!("r{i}-{threads}.json"));
            let mut full = vec!["--seed", "1111", "--threads", threads, "--out", out.to_str().unwrap()];
            full.extend_from_slice(args);
            let status = Command::new(env!("CARGO_BIN_EXE_reglab")).args(&full).env_remove("REGLAB_SEED").status().unwrap();
            same &= status.code().is_some_and(|c| c == 0 || c == 4);
            outputs.push(std::fs::read(&out).unwrap());
        }
        same &= outputs.windows(2).all(|w| w[0] == w[1]);
    }
    verdict(11, same, "counting, removal and packing reports byte-identical across 1, 2 and 4 threads".into());
}
