use num_bigint::BigUint;
use proptest::prelude::*;
use reglab::counting::{canonical_count, constrained_count, extension_degree};
use reglab::multipartite::Bipartite;
use reglab::random::mix64;
use reglab::{MultipartiteGraph, PatternGraph};

/// Small deterministic bit source for instance generation.
struct Bits(u64);

impl Bits {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.0)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    /// `true` with probability `num / 16`.
    fn chance(&mut self, num: u64) -> bool {
        self.below(16) < num
    }
}

struct Instance {
    g: MultipartiteGraph,
    g_prime: MultipartiteGraph,
    sub_edges: Vec<(usize, usize)>,
}

fn random_pattern(bits: &mut Bits) -> PatternGraph {
    let k = 2 + bits.below(4) as usize;
    let all: Vec<_> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut edges: Vec<_> = all.iter().copied().filter(|_| bits.chance(10)).collect();
    if edges.is_empty() {
        edges.push(all[bits.below(all.len() as u64) as usize]);
    }
    PatternGraph::new(k, &edges).unwrap()
}

fn random_host(h: &PatternGraph, n: usize, bits: &mut Bits) -> MultipartiteGraph {
    let pairs = h
        .edges()
        .iter()
        .map(|_| {
            let density = 4 + bits.below(12);
            let edges: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| bits.chance(density)).collect();
            Bipartite::from_edges(n, &edges).unwrap()
        })
        .collect();
    MultipartiteGraph::new(h.clone(), n, pairs).unwrap()
}

fn instance(seed: u64) -> Instance {
    let mut bits = Bits(seed);
    let h = random_pattern(&mut bits);
    let n = 1 + bits.below(5) as usize;
    let g = random_host(&h, n, &mut bits);
    let g_prime = random_host(&h, n, &mut bits);
    let sub_edges = h.edges().iter().copied().filter(|_| bits.chance(8)).collect();
    Instance { g, g_prime, sub_edges }
}

/// Every tuple in `[n]^k`, checked edge by edge.
fn naive(inst: &Instance, fixed: Option<((usize, usize), (usize, usize))>) -> BigUint {
    let g = &inst.g;
    let (h, n) = (g.pattern(), g.part_size());
    let k = h.vertex_count();
    let mut count = 0u64;
    let mut tuple = vec![0usize; k];
    for code in 0..n.pow(k as u32) {
        let mut c = code;
        for slot in tuple.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        if let Some(((i, j), (u, v))) = fixed {
            if tuple[i] != u || tuple[j] != v {
                continue;
            }
        }
        let ok = h.edges().iter().all(|&(a, b)| {
            g.has_edge(a, tuple[a], b, tuple[b]) && (!inst.sub_edges.contains(&(a, b)) || inst.g_prime.has_edge(a, tuple[a], b, tuple[b]))
        });
        count += ok as u64;
    }
    BigUint::from(count)
}

fn check(seed: u64) {
    let inst = instance(seed);
    let plain = Instance { g: inst.g.clone(), g_prime: inst.g_prime.clone(), sub_edges: Vec::new() };
    assert_eq!(canonical_count(&inst.g).count, naive(&plain, None), "canonical, seed {seed}");
    let constrained = constrained_count(&inst.g, &inst.sub_edges, &inst.g_prime).unwrap().count;
    assert_eq!(constrained, naive(&inst, None), "constrained, seed {seed}");

    for (e, &(i, j)) in inst.g.pattern().edges().iter().enumerate() {
        let mut sum = BigUint::from(0u8);
        for (u, v) in inst.g.pairs()[e].edges() {
            let deg = extension_degree(&inst.g, &inst.sub_edges, &inst.g_prime, (i, j), (u, v)).unwrap();
            assert_eq!(deg, naive(&inst, Some(((i, j), (u, v)))), "extension degree, seed {seed}");
            sum += deg;
        }
        if !inst.sub_edges.contains(&(i, j)) {
            assert_eq!(sum, constrained, "edge-sum identity on {i}{j}, seed {seed}");
        }
    }
}

#[test]
fn thousand_random_instances() {
    for seed in 0..1200u64 {
        check(seed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_equivalence(seed in any::<u64>()) {
        check(seed);
    }

    #[test]
    fn adding_an_edge_never_decreases_the_count(seed in any::<u64>(), pick in any::<u64>()) {
        let inst = instance(seed);
        let g = &inst.g;
        let n = g.part_size();
        let e = (pick % g.pairs().len() as u64) as usize;
        let (u, v) = (((pick >> 16) % n as u64) as usize, ((pick >> 32) % n as u64) as usize);
        let mut pairs = g.pairs().to_vec();
        let mut edges = pairs[e].edges();
        if !edges.contains(&(u, v)) {
            edges.push((u, v));
        }
        pairs[e] = Bipartite::from_edges(n, &edges).unwrap();
        let bigger = MultipartiteGraph::new(g.pattern().clone(), n, pairs).unwrap();
        prop_assert!(canonical_count(&bigger).count >= canonical_count(g).count);
    }

    #[test]
    fn normalized_is_count_over_n_to_the_k(seed in any::<u64>()) {
        let inst = instance(seed);
        let c = canonical_count(&inst.g);
        let nk = BigUint::from(inst.g.part_size()).pow(inst.g.pattern().vertex_count() as u32);
        prop_assert_eq!(c.normalized, reglab::rational::from_biguint(&c.count) / reglab::rational::from_biguint(&nk));
    }
}
