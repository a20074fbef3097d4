//! Seeded generators: `G(N,p)`, uniform `m`-edge multipartite classes, the
//! multi-round exposure schedule and Chernoff tail bounds.
//!
//! All randomness flows from an [`RngStream`]: a master seed plus a path of
//! integers. Parallel work derives one child stream per unit of work, so the
//! output never depends on scheduling or thread count.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, SimpleGraph};
use crate::multipartite::{Bipartite, MultipartiteGraph};
use crate::pattern::PatternGraph;
use crate::rational::Rational;
use crate::regularity::{self, Status};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const PATH_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Address of an independent random stream: `(master_seed, path)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub path: Vec<u64>,
}

impl RngStream {
    pub fn new(master_seed: u64) -> Self {
        RngStream { master_seed, path: Vec::new() }
    }

    pub fn child(&self, index: u64) -> Self {
        let mut path = self.path.clone();
        path.push(index);
        RngStream { master_seed: self.master_seed, path }
    }

    /// Child addressed by a short ASCII tag, for named pipeline stages.
    pub fn named(&self, tag: &str) -> Self {
        let h = tag.bytes().fold(0xCBF2_9CE4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x1000_0000_01B3));
        self.child(h)
    }

    /// Pure function of `(master_seed, path)`.
    pub fn derived_seed(&self) -> u64 {
        let mut h = mix64(self.master_seed ^ GOLDEN);
        for &x in &self.path {
            h = mix64(h.wrapping_add(GOLDEN).wrapping_add(mix64(x ^ PATH_SALT)));
        }
        h
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let h = self.derived_seed();
        let mut seed = [0u8; 32];
        for (i, chunk) in seed.chunks_mut(8).enumerate() {
            chunk.copy_from_slice(&mix64(h.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1))).to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

/// `⌊p · 2^64⌋` as a threshold for comparing against uniform `u64` draws;
/// `None` means "always accept" (`p = 1`).
fn bernoulli_threshold(p: &Rational) -> Result<Option<u64>> {
    if p < &Rational::zero() || p > &Rational::one() {
        return Err(Error::pre(format!("probability {p} outside [0,1]")));
    }
    if p.is_one() {
        return Ok(None);
    }
    let scaled = (p * Rational::from_integer((BigUint::one() << 64u32).into())).floor().to_integer();
    Ok(Some(scaled.to_u64().expect("p < 1 fits in u64")))
}

/// `G(N, p)`: each pair independently with probability `p`. Row `u` draws its
/// pairs `(u, v)`, `v > u`, from substream `[u]`.
pub fn gnp(n: usize, p: &Rational, stream: &RngStream) -> Result<SimpleGraph> {
    let thr = bernoulli_threshold(p)?;
    if thr == Some(0) {
        return Ok(SimpleGraph::empty(n));
    }
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut rng = stream.child(u as u64).rng();
            (u + 1..n)
                .filter(|_| match thr {
                    None => true,
                    Some(t) => rng.next_u64() < t,
                })
                .collect()
        })
        .collect();
    let mut b = GraphBuilder::new(n);
    for (u, row) in rows.iter().enumerate() {
        for &v in row {
            b.add_edge_if_absent(u, v);
        }
    }
    Ok(b.build())
}

/// Keeps each edge of `g` independently with probability `q`.
pub fn edge_subsample(g: &SimpleGraph, q: &Rational, stream: &RngStream) -> Result<SimpleGraph> {
    let thr = bernoulli_threshold(q)?;
    let mut rng = stream.rng();
    Ok(g.filter_edges(|_, _| match thr {
        None => true,
        Some(t) => rng.next_u64() < t,
    }))
}

/// Keeps a uniformly random set of exactly `m` edges of `g`.
pub fn edge_subset_exact(g: &SimpleGraph, m: usize, stream: &RngStream) -> Result<SimpleGraph> {
    let edges = g.edges();
    if m > edges.len() {
        return Err(Error::pre(format!("cannot keep {m} of {} edges", edges.len())));
    }
    let picked = sample_indices(edges.len() as u64, m, &mut stream.rng());
    let kept: Vec<_> = picked.into_iter().map(|i| edges[i as usize]).collect();
    SimpleGraph::from_edges(g.vertex_count(), &kept)
}

/// Uniform random `m`-subset of `0..total` by partial Fisher–Yates on a
/// sparse swap table, in draw order.
pub fn sample_indices(total: u64, m: usize, rng: &mut impl Rng) -> Vec<u64> {
    assert!(m as u64 <= total, "cannot draw {m} of {total}");
    let mut swaps: HashMap<u64, u64> = HashMap::with_capacity(m * 2);
    let mut out = Vec::with_capacity(m);
    for i in 0..m as u64 {
        let j = rng.gen_range(i..total);
        let vj = *swaps.get(&j).unwrap_or(&j);
        let vi = *swaps.get(&i).unwrap_or(&i);
        swaps.insert(j, vi);
        out.push(vj);
    }
    out
}

/// Uniformly random permutation of `0..n`.
pub fn permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Uniformly random `m`-edge bipartite graph between two classes of size `n`.
pub fn random_bipartite(n: usize, m: usize, stream: &RngStream) -> Result<Bipartite> {
    let slots = (n as u64) * (n as u64);
    if m as u64 > slots {
        return Err(Error::pre(format!("m = {m} exceeds n² = {slots}")));
    }
    if m as u64 == slots {
        return Ok(Bipartite::complete(n));
    }
    let picked = sample_indices(slots, m, &mut stream.rng());
    let edges: Vec<(usize, usize)> = picked.into_iter().map(|s| ((s / n as u64) as usize, (s % n as u64) as usize)).collect();
    Bipartite::from_edges(n, &edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Uniform over the `m`-edge product space, no regularity filter.
    Raw,
    /// Re-draw any pair the regularity checker refutes.
    Rejection {
        /// Sampled-refuter trials for pairs above the exhaustive budget.
        refuter_trials: usize,
    },
}

/// Rejection sampling gives up once the acceptance rate provably sits below
/// this floor.
pub const ACCEPTANCE_FLOOR: f64 = 1e-3;
const MIN_ATTEMPTS_BEFORE_FLOOR: usize = 2000;

#[derive(Clone, Debug)]
pub struct ClassSample {
    pub graph: MultipartiteGraph,
    pub attempts: usize,
    pub accepted_pairs: usize,
}

impl ClassSample {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted_pairs as f64 / self.attempts.max(1) as f64
    }
}

/// Uniform member of `𝒢(H, n, m, p, ε)` pair by pair; `m` may vary per pair
/// (parallel to `h.edges()`).
///
/// Pairs are independent, so per-pair rejection yields the uniform
/// distribution on the product of accepted pairs.
pub fn sample_class(
    h: &PatternGraph,
    n: usize,
    m: &[usize],
    p: &Rational,
    epsilon: &Rational,
    mode: SampleMode,
    stream: &RngStream,
) -> Result<ClassSample> {
    if m.len() != h.edge_count() {
        return Err(Error::pre(format!("need {} edge counts, got {}", h.edge_count(), m.len())));
    }
    let mut pairs = Vec::with_capacity(m.len());
    let (mut attempts, mut accepted) = (0usize, 0usize);
    for (e, &me) in m.iter().enumerate() {
        let pair_stream = stream.child(e as u64);
        let mut draw = 0u64;
        loop {
            let b = random_bipartite(n, me, &pair_stream.child(draw))?;
            attempts += 1;
            draw += 1;
            let ok = match mode {
                SampleMode::Raw => true,
                SampleMode::Rejection { refuter_trials } => {
                    let verdict = if n <= regularity::EXHAUSTIVE_BUDGET {
                        regularity::bipartite_exhaustive(&b, epsilon, p)?
                    } else {
                        regularity::bipartite_sampled(&b, epsilon, p, refuter_trials, &pair_stream.child(draw).named("refute"))
                    };
                    verdict.status != Status::Refuted
                }
            };
            if ok {
                accepted += 1;
                pairs.push(b);
                break;
            }
            if attempts >= MIN_ATTEMPTS_BEFORE_FLOOR && (accepted as f64 + 1.0) / (attempts as f64) < ACCEPTANCE_FLOOR {
                return Err(Error::budget(format!(
                    "rejection sampling acceptance rate {:.2e} ({accepted}/{attempts}) below floor {ACCEPTANCE_FLOOR:e}",
                    accepted as f64 / attempts as f64
                )));
            }
        }
    }
    Ok(ClassSample { graph: MultipartiteGraph::new(h.clone(), n, pairs)?, attempts, accepted_pairs: accepted })
}

/// Round probabilities `p_1..p_R` with `1 - p = ∏(1 - p_s)` and
/// `p_{s+1} = L p_s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExposureSchedule {
    pub p: f64,
    pub rounds: usize,
    pub ratio: f64,
    pub probabilities: Vec<f64>,
}

fn union_probability(p1: f64, rounds: usize, ratio: f64) -> f64 {
    let mut prod = 1.0;
    let mut ps = p1;
    for _ in 0..rounds {
        prod *= 1.0 - ps.min(1.0);
        ps *= ratio;
    }
    1.0 - prod
}

pub fn exposure_schedule(p: f64, rounds: usize, ratio: f64) -> Result<ExposureSchedule> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::pre(format!("exposure schedule needs p in (0,1), got {p}")));
    }
    if rounds == 0 {
        return Err(Error::pre("exposure schedule needs at least one round"));
    }
    if !(ratio >= 1.0 && ratio.is_finite()) {
        return Err(Error::pre(format!("growth ratio must be ≥ 1, got {ratio}")));
    }
    if rounds == 1 {
        return Ok(ExposureSchedule { p, rounds, ratio, probabilities: vec![p] });
    }
    // Largest admissible p_1 keeps the last round at probability ≤ 1.
    let hi_bound = ratio.powi(rounds as i32 - 1).recip();
    if union_probability(hi_bound, rounds, ratio) < p {
        return Err(Error::pre("no feasible first-round probability"));
    }
    let (mut lo, mut hi) = (0.0f64, hi_bound);
    // Bisect to float resolution; keep the upper end so the union probability
    // never undershoots p.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if union_probability(mid, rounds, ratio) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut probabilities = Vec::with_capacity(rounds);
    let mut ps = hi;
    for _ in 0..rounds {
        probabilities.push(ps);
        ps *= ratio;
    }
    Ok(ExposureSchedule { p, rounds, ratio, probabilities })
}

impl ExposureSchedule {
    /// `|1 - p - ∏(1 - p_s)|`.
    pub fn reconstruction_error(&self) -> f64 {
        let prod: f64 = self.probabilities.iter().map(|ps| 1.0 - ps).product();
        (1.0 - self.p - prod).abs()
    }

    /// `p / (R L^R)`, the floor every round probability clears.
    pub fn round_floor(&self) -> f64 {
        self.p / (self.rounds as f64 * self.ratio.powi(self.rounds as i32))
    }

    pub fn to_json(&self) -> String {
        let probs: Vec<String> = self.probabilities.iter().map(|x| format!("{x:.17e}")).collect();
        format!(
            "{{\"p\": {:.17e}, \"rounds\": {}, \"ratio\": {:.17e}, \"probabilities\": [{}]}}",
            self.p,
            self.rounds,
            self.ratio,
            probs.join(", ")
        )
    }
}

/// Exposes `G_{p_1}, …, G_{p_R}` of a host graph, round `s` from substream `[s]`.
pub fn expose_rounds(g: &SimpleGraph, schedule: &ExposureSchedule, stream: &RngStream) -> Vec<SimpleGraph> {
    schedule
        .probabilities
        .iter()
        .enumerate()
        .map(|(s, &ps)| {
            let mut rng = stream.child(s as u64).rng();
            g.filter_edges(|_, _| rng.gen::<f64>() < ps)
        })
        .collect()
}

pub fn union(graphs: &[SimpleGraph]) -> Option<SimpleGraph> {
    let first = graphs.first()?;
    let n = first.vertex_count();
    let mut rows: Vec<BitSet> = (0..n).map(|v| first.neighbors(v).clone()).collect();
    for g in &graphs[1..] {
        for (v, row) in rows.iter_mut().enumerate() {
            row.union_with(g.neighbors(v));
        }
    }
    SimpleGraph::from_adjacency(rows).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChernoffBounds {
    /// Bound on `Pr(X < pt - a)`.
    pub lower_tail: f64,
    /// Bound on `Pr(X > pt + a)`.
    pub upper_tail: f64,
    /// Bound on `Pr(X > 2pt)` via the upper tail at `a = pt/2`.
    pub doubling: f64,
}

/// Tail bounds for `X ~ Bin(t, p)`.
pub fn chernoff_bounds(t: u64, p: f64, a: f64) -> Result<ChernoffBounds> {
    if t == 0 {
        return Err(Error::pre("t must be positive"));
    }
    if p <= 0.0 || p > 1.0 {
        return Err(Error::pre(format!("Chernoff bounds need p in (0,1], got {p}")));
    }
    if a <= 0.0 {
        return Err(Error::pre("deviation a must be positive"));
    }
    let mu = p * t as f64;
    Ok(ChernoffBounds {
        lower_tail: (-(a * a) / mu).exp(),
        upper_tail: (-(a * a) / (2.0 * mu) + a.powi(3) / (2.0 * mu * mu)).exp(),
        doubling: (-mu / 16.0).exp(),
    })
}

/// Pearson statistic `Σ (O - E)² / E`.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed.iter().zip(expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum()
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    if successes == 0 || successes == trials {
        // Closed forms avoid rounding residue at the boundary.
        let edge = n / (n + z * z);
        return if successes == 0 { (0.0, 1.0 - edge) } else { (edge, 1.0) };
    }
    let denom = 1.0 + z * z / n;
    let centre = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
