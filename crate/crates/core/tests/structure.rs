use proptest::prelude::*;
use reglab::graph::pair_density;
use reglab::multipartite::induced_multipartite;
use reglab::packing::{is_factor, kk_factor};
use reglab::partition::{clean_partition, equipartition, sparse_regular_partition, CleanParams, PartitionConfig};
use reglab::random::{exposure_schedule, gnp, mix64, sample_class, SampleMode};
use reglab::rational::{frac, int};
use reglab::{PatternGraph, RngStream, SimpleGraph, VertexSetPair};

fn random_graph(n: usize, seed: u64, num: u64) -> SimpleGraph {
    let mut s = seed;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
            if mix64(s) % 16 < num {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, &edges).unwrap()
}

/// All splits of `0..t` into blocks of size `k`, built without looking at
/// any graph. Blocks are bitmasks.
fn block_partitions(t: usize, k: usize) -> Vec<Vec<u32>> {
    fn go(rest: u32, k: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        let first = 1u32 << rest.trailing_zeros();
        let others = rest & !first;
        let mut sub = others;
        loop {
            if sub.count_ones() as usize == k - 1 {
                acc.push(first | sub);
                go(others & !sub, k, acc, out);
                acc.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
    }
    let mut out = Vec::new();
    go((1u32 << t) - 1, k, &mut Vec::new(), &mut out);
    out
}

fn is_clique(g: &SimpleGraph, block: u32) -> bool {
    let vs: Vec<usize> = (0..32).filter(|&v| block >> v & 1 == 1).collect();
    vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

#[test]
fn kk_factor_matches_block_enumeration() {
    let mut found = 0;
    let mut absent = 0;
    for k in 2..=3 {
        for t in (k..=9).filter(|t| t % k == 0) {
            let blocks = block_partitions(t, k);
            for seed in 0..60u64 {
                let g = random_graph(t, seed * 31 + t as u64, 6 + seed % 10);
                let oracle = blocks.iter().any(|p| p.iter().all(|&b| is_clique(&g, b)));
                let got = kk_factor(&g, k).unwrap();
                assert_eq!(got.is_some(), oracle, "k={k} t={t} seed={seed}");
                if let Some(f) = got {
                    assert!(is_factor(&g, k, &f));
                    found += 1;
                } else {
                    absent += 1;
                }
            }
        }
    }
    assert!(found > 20 && absent > 20, "found {found}, absent {absent}");
}

#[test]
fn k222_factor_is_exact() {
    let g = SimpleGraph::complete_multipartite(&[2, 2, 2]);
    let f = kk_factor(&g, 3).unwrap().expect("K_{2,2,2} has a triangle factor");
    assert_eq!(f.len(), 2);
    assert!(is_factor(&g, 3, &f));
    // Vertex 0 cut off from the second part lies in no triangle.
    let broken = g.without_edges(&[(0, 2), (0, 3)]);
    assert!(kk_factor(&broken, 3).unwrap().is_none());
}

#[test]
fn equipartition_sizes_are_exact() {
    for n in 0..60 {
        for t in 1..=12 {
            let parts = equipartition(n, t);
            assert_eq!(parts.len(), t);
            let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
            assert_eq!(sizes.iter().sum::<usize>(), n);
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
    }
}

#[test]
fn partition_energy_and_cluster_contracts() {
    for seed in 0..6u64 {
        let g = gnp(240, &frac(1, 5), &RngStream::new(seed)).unwrap();
        let mut cfg = PartitionConfig::new(frac(1, 2), frac(1, 5), 4, 16);
        cfg.refuter_trials = 8;
        let part = sparse_regular_partition(&g, &cfg, &RngStream::new(seed)).unwrap();
        assert!(part.is_equipartition());
        assert_eq!(part.classes.iter().map(Vec::len).sum::<usize>(), 240);
        for w in part.energy_history.windows(2) {
            assert!(w[1] > w[0], "energy must rise strictly per refinement");
        }
        let params = CleanParams { epsilon: frac(1, 2), p: frac(1, 5), d: frac(1, 10), big_d: int(2), t0: 4 };
        let cleaned = clean_partition(&g, &part, &params).unwrap();
        assert!(cleaned.graph.is_subgraph_of(&g));
        assert_eq!(g.edge_count() - cleaned.graph.edge_count(), cleaned.report.removed_total);
        let floor = &params.d * &params.p;
        for (i, j) in cleaned.cluster.graph.edges() {
            let rec = part.pair(i, j).unwrap();
            assert!(!rec.verdict.is_refuted());
            let size = int((part.classes[i].len() * part.classes[j].len()) as i64);
            assert!(int(rec.edges as i64) >= &floor * &size);
        }
        for i in 0..cleaned.cluster.vertex_count() {
            for j in 0..cleaned.cluster.vertex_count() {
                let w = cleaned.cluster.weight(i, j);
                assert!(*w >= int(0) && *w <= int(1));
            }
        }
    }
}

#[test]
fn sample_class_pairs_have_exact_counts() {
    let h = PatternGraph::complete(4);
    for seed in 0..10u64 {
        let m: Vec<usize> = (0..6).map(|e| (seed as usize * 7 + e * 5) % 100).collect();
        let s = sample_class(&h, 10, &m, &frac(1, 2), &frac(1, 2), SampleMode::Raw, &RngStream::new(seed)).unwrap();
        assert_eq!(s.graph.edge_counts(), m);
    }
}

#[test]
fn gnp_edge_count_concentrates() {
    let n = 400usize;
    let pairs = (n * (n - 1) / 2) as f64;
    for seed in 0..5u64 {
        let g = gnp(n, &frac(1, 10), &RngStream::new(seed)).unwrap();
        let mean = pairs / 10.0;
        let sd = (pairs * 0.1 * 0.9).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() < 5.0 * sd, "seed {seed}: {}", g.edge_count());
    }
}

#[test]
fn same_seed_same_graph() {
    let a = gnp(300, &frac(3, 40), &RngStream::new(17)).unwrap();
    let b = gnp(300, &frac(3, 40), &RngStream::new(17)).unwrap();
    assert_eq!(a.edges(), b.edges());
    assert_ne!(a.edges(), gnp(300, &frac(3, 40), &RngStream::new(18)).unwrap().edges());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_is_a_weighted_average(seed in any::<u64>(), n in 6usize..30, split in 1usize..5) {
        let g = random_graph(n, seed, 7);
        let half = n / 2;
        let u: Vec<usize> = (0..half).collect();
        let v: Vec<usize> = (half..n).collect();
        let cut = split.min(u.len() - 1).max(1);
        prop_assume!(cut < u.len());
        let gu = g.vertex_set(&u);
        let gv = g.vertex_set(&v);
        let whole = g.edges_between(&gu, &gv);
        let left = g.edges_between(&g.vertex_set(&u[..cut]), &gv);
        let right = g.edges_between(&g.vertex_set(&u[cut..]), &gv);
        prop_assert_eq!(whole, left + right);
        let d = pair_density(&g, &VertexSetPair::new(u.clone(), v.clone()).unwrap()).unwrap();
        let d1 = pair_density(&g, &VertexSetPair::new(u[..cut].to_vec(), v.clone()).unwrap()).unwrap();
        let d2 = pair_density(&g, &VertexSetPair::new(u[cut..].to_vec(), v.clone()).unwrap()).unwrap();
        let avg = (d1 * int(cut as i64) + d2 * int((u.len() - cut) as i64)) / int(u.len() as i64);
        prop_assert_eq!(d, avg);
    }

    #[test]
    fn induced_multipartite_flattens_to_a_subgraph(seed in any::<u64>(), n in 1usize..8) {
        let h = PatternGraph::complete(3);
        let g = random_graph(3 * n + 2, seed, 8);
        let perm: Vec<usize> = {
            let mut p: Vec<usize> = (0..3 * n + 2).collect();
            p.sort_by_key(|&v| mix64(seed ^ v as u64));
            p
        };
        let classes: Vec<Vec<usize>> = (0..3).map(|i| perm[i * n..(i + 1) * n].to_vec()).collect();
        let m = induced_multipartite(&g, &classes, &h).unwrap();
        for (e, &(i, j)) in h.edges().iter().enumerate() {
            for (u, v) in m.pairs()[e].edges() {
                prop_assert!(g.has_edge(classes[i][u], classes[j][v]));
            }
        }
    }

    #[test]
    fn exposure_schedule_invariants(p in 0.001f64..0.999, rounds in 1usize..8, ratio in 1.0f64..4.0) {
        if let Ok(s) = exposure_schedule(p, rounds, ratio) {
            prop_assert!(s.reconstruction_error() <= 1e-12);
            prop_assert!(s.probabilities.iter().sum::<f64>() >= p - 1e-12);
            prop_assert!(s.probabilities.iter().all(|&q| q >= s.round_floor() && q <= 1.0));
            for w in s.probabilities.windows(2) {
                prop_assert!((w[1] / w[0] - ratio).abs() <= 1e-9 * ratio);
            }
        }
    }
}
