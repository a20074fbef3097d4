//! Deciding and refuting `(ε,p)`-regularity, `(ε,d)`-lower-regularity and
//! `(η,p,D)`-upper-uniformity.
//!
//! Witness sizes are `⌈ε|U|⌉ × ⌈ε|V|⌉`. A deviation equal to `εp` is regular.
//! Only the exhaustive checkers certify; the sampled refuter returns
//! `Undecided` when it finds nothing.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{pair_density, SimpleGraph, VertexSetPair};
use crate::multipartite::Bipartite;
use crate::random::RngStream;
use crate::rational::{ceil_usize, frac, int, serde_fraction, Rational};

/// Largest side handled by the exhaustive checkers.
pub const EXHAUSTIVE_BUDGET: usize = 16;
/// Largest host handled by the exhaustive upper-uniformity checker.
pub const UNIFORM_EXHAUSTIVE_BUDGET: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CertifiedRegular,
    Refuted,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityVerdict {
    pub status: Status,
    /// Best witness found; present whenever `status == Refuted`.
    pub witness: Option<VertexSetPair>,
    /// `|d(U′,V′) − d(U,V)|` for regularity, `d − d(U′,V′)` for lower-regularity.
    #[serde(with = "serde_fraction")]
    pub deviation: Rational,
    /// `p` for regularity, `d` for lower-regularity.
    #[serde(with = "serde_fraction")]
    pub scale: Rational,
    #[serde(with = "serde_fraction")]
    pub epsilon: Rational,
    /// Sampled trials run; 0 for exhaustive verdicts.
    pub trials: usize,
}

impl RegularityVerdict {
    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }
}

/// Local bipartite adjacency between `U` and `V` in both orientations.
#[derive(Clone, Debug)]
struct PairMatrix {
    u_ids: Vec<usize>,
    v_ids: Vec<usize>,
    /// `rows[i]`: neighbours of `u_ids[i]`, over local `V` indices.
    rows: Vec<BitSet>,
    /// `cols[j]`: neighbours of `v_ids[j]`, over local `U` indices.
    cols: Vec<BitSet>,
    edges: usize,
}

impl PairMatrix {
    fn from_graph(g: &SimpleGraph, pair: &VertexSetPair) -> Result<Self> {
        if pair.u.is_empty() || pair.v.is_empty() {
            return Err(Error::pre("regularity check needs two nonempty sets"));
        }
        let n = g.vertex_count();
        if pair.u.iter().chain(&pair.v).any(|&x| x >= n) {
            return Err(Error::pre("vertex set refers to a vertex outside the graph"));
        }
        let (a, b) = (pair.u.len(), pair.v.len());
        let mut rows = vec![BitSet::new(b); a];
        let mut cols = vec![BitSet::new(a); b];
        let mut edges = 0;
        for (i, &u) in pair.u.iter().enumerate() {
            let nu = g.neighbors(u);
            for (j, &v) in pair.v.iter().enumerate() {
                if nu.contains(v) {
                    rows[i].insert(j);
                    cols[j].insert(i);
                    edges += 1;
                }
            }
        }
        Ok(PairMatrix { u_ids: pair.u.clone(), v_ids: pair.v.clone(), rows, cols, edges })
    }

    /// `V`-side ids are offset by `n` so the witness is a valid disjoint pair.
    fn from_bipartite(b: &Bipartite) -> Result<Self> {
        let n = b.part_size();
        if n == 0 {
            return Err(Error::pre("regularity check needs two nonempty sets"));
        }
        Ok(PairMatrix {
            u_ids: (0..n).collect(),
            v_ids: (n..2 * n).collect(),
            rows: (0..n).map(|u| b.forward(u).clone()).collect(),
            cols: (0..n).map(|v| b.backward(v).clone()).collect(),
            edges: b.edge_count(),
        })
    }

    fn transposed(&self) -> Self {
        PairMatrix {
            u_ids: self.v_ids.clone(),
            v_ids: self.u_ids.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            edges: self.edges,
        }
    }

    fn nu(&self) -> usize {
        self.u_ids.len()
    }

    fn nv(&self) -> usize {
        self.v_ids.len()
    }

    fn witness(&self, us: &BitSet, vs: &BitSet) -> VertexSetPair {
        VertexSetPair {
            u: us.iter().map(|i| self.u_ids[i]).collect(),
            v: vs.iter().map(|j| self.v_ids[j]).collect(),
        }
    }

    /// Degrees of every local `V` vertex into `us`.
    fn v_degrees(&self, us: &BitSet) -> Vec<usize> {
        self.cols.iter().map(|c| c.intersection_count(us)).collect()
    }

    fn u_degrees(&self, vs: &BitSet) -> Vec<usize> {
        self.rows.iter().map(|r| r.intersection_count(vs)).collect()
    }

    fn edges_between(&self, us: &BitSet, vs: &BitSet) -> usize {
        us.iter().map(|i| self.rows[i].intersection_count(vs)).sum()
    }
}

/// The `size` indices of largest (`top`) or smallest degree; ties by index.
fn select(degrees: &[usize], size: usize, top: bool) -> BitSet {
    let mut idx: Vec<usize> = (0..degrees.len()).collect();
    if top {
        idx.sort_by(|&x, &y| degrees[y].cmp(&degrees[x]).then(x.cmp(&y)));
    } else {
        idx.sort_by(|&x, &y| degrees[x].cmp(&degrees[y]).then(x.cmp(&y)));
    }
    BitSet::from_indices(degrees.len(), idx.into_iter().take(size))
}

fn random_subset(len: usize, size: usize, rng: &mut impl Rng) -> BitSet {
    let picked = rand::seq::index::sample(rng, len, size);
    BitSet::from_indices(len, picked)
}

fn witness_sizes(m: &PairMatrix, epsilon: &Rational) -> Result<(usize, usize)> {
    if !epsilon.is_positive() || epsilon > &int(1) {
        return Err(Error::pre(format!("ε must lie in (0,1], got {epsilon}")));
    }
    let a = ceil_usize(&(epsilon * int(m.nu() as i64))).max(1);
    let b = ceil_usize(&(epsilon * int(m.nv() as i64))).max(1);
    Ok((a, b))
}

/// Integer form of the regularity test for fixed sizes `a × b`.
///
/// A witness with `e′` edges has scaled deviation `X = |e′·|U||V| − e·ab|`,
/// and deviates by more than `εp` iff `X > ⌊εp·ab·|U||V|⌋`.
#[derive(Clone, Debug)]
struct Scaled {
    a: usize,
    b: usize,
    uv: i128,
    e_ab: i128,
    limit: i128,
}

impl Scaled {
    fn new(m: &PairMatrix, a: usize, b: usize, eps_p: &Rational) -> Self {
        let uv = (m.nu() * m.nv()) as i128;
        let ab = (a * b) as i128;
        let limit = (eps_p * int(BigInt::from(ab * uv))).floor().to_integer().to_i128().unwrap_or(i128::MAX);
        Scaled { a, b, uv, e_ab: m.edges as i128 * ab, limit }
    }

    fn x(&self, e_prime: usize) -> i128 {
        (e_prime as i128 * self.uv - self.e_ab).abs()
    }

    fn deviation(&self, x: i128) -> Rational {
        frac(BigInt::from(x), BigInt::from(self.uv * (self.a * self.b) as i128))
    }
}

fn check_p(p: &Rational) -> Result<()> {
    if p.is_negative() || p > &int(1) {
        return Err(Error::pre(format!("p must lie in [0,1], got {p}")));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Next mask with the same popcount (Gosper).
#[inline]
fn next_combination(x: u32) -> u32 {
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

/// Sum of the `b` largest / smallest of small degrees via a histogram.
fn extreme_sums(degrees: &[u32], cap: usize, b: usize) -> (usize, usize) {
    let mut hist = [0usize; 33];
    for &d in degrees {
        hist[d as usize] += 1;
    }
    let (mut top, mut need) = (0, b);
    for d in (0..=cap).rev() {
        let take = hist[d].min(need);
        top += take * d;
        need -= take;
        if need == 0 {
            break;
        }
    }
    let (mut bottom, mut need) = (0, b);
    for (d, &h) in hist.iter().enumerate().take(cap + 1) {
        let take = h.min(need);
        bottom += take * d;
        need -= take;
        if need == 0 {
            break;
        }
    }
    (top, bottom)
}

fn mask_to_bitset(mask: u32, len: usize) -> BitSet {
    BitSet::from_indices(len, (0..len).filter(|i| mask >> i & 1 == 1))
}

/// Enumerates every `U′` of size `a`; for each, the extreme `V′` of size `b`
/// are the top-`b` and bottom-`b` vertices by degree into `U′`.
/// Returns `(max e′, its U′ mask, min e′, its U′ mask)`.
fn enumerate_extremes(m: &PairMatrix, a: usize, b: usize) -> (usize, u32, usize, u32) {
    let nu = m.nu();
    let col_masks: Vec<u32> = m.cols.iter().map(|c| c.iter().fold(0u32, |acc, i| acc | 1 << i)).collect();
    let mut degrees = vec![0u32; m.nv()];
    let (mut best_hi, mut hi_mask, mut best_lo, mut lo_mask) = (0usize, 0u32, usize::MAX, 0u32);
    let mut mask: u32 = if a == 32 { u32::MAX } else { (1u32 << a) - 1 };
    let limit: u64 = 1u64 << nu;
    loop {
        for (d, &c) in degrees.iter_mut().zip(&col_masks) {
            *d = (c & mask).count_ones();
        }
        let (top, bottom) = extreme_sums(&degrees, a, b);
        if top > best_hi {
            best_hi = top;
            hi_mask = mask;
        }
        if bottom < best_lo {
            best_lo = bottom;
            lo_mask = mask;
        }
        if a == nu {
            break;
        }
        let next = next_combination(mask);
        if (next as u64) >= limit || next <= mask {
            break;
        }
        mask = next;
    }
    if hi_mask == 0 {
        hi_mask = lo_mask;
    }
    (best_hi, hi_mask, best_lo, lo_mask)
}

/// Exhaustive search on the side with fewer `a`-subsets; witnesses are mapped
/// back to the caller's orientation.
fn exhaustive_extremes(m: &PairMatrix, a: usize, b: usize) -> ((usize, VertexSetPair), (usize, VertexSetPair)) {
    let swap = binomial(m.nv(), b) < binomial(m.nu(), a);
    let mm = if swap { m.transposed() } else { m.clone() };
    let (sa, sb) = if swap { (b, a) } else { (a, b) };
    let (hi, hi_mask, lo, lo_mask) = enumerate_extremes(&mm, sa, sb);
    let build = |mask: u32, top: bool| {
        let us = mask_to_bitset(mask, mm.nu());
        let vs = select(&mm.v_degrees(&us), sb, top);
        let w = mm.witness(&us, &vs);
        if swap {
            w.swapped()
        } else {
            w
        }
    };
    ((hi, build(hi_mask, true)), (lo, build(lo_mask, false)))
}

fn exhaustive_regular(m: &PairMatrix, epsilon: &Rational, p: &Rational) -> Result<RegularityVerdict> {
    check_p(p)?;
    if m.nu() > EXHAUSTIVE_BUDGET || m.nv() > EXHAUSTIVE_BUDGET {
        return Err(Error::budget(format!(
            "exhaustive regularity check limited to {EXHAUSTIVE_BUDGET} vertices per side (got {}+{}); use the sampled refuter",
            m.nu(),
            m.nv()
        )));
    }
    let (a, b) = witness_sizes(m, epsilon)?;
    let sc = Scaled::new(m, a, b, &(epsilon * p));
    let ((hi, w_hi), (lo, w_lo)) = exhaustive_extremes(m, a, b);
    let (x, witness) = if sc.x(hi) >= sc.x(lo) { (sc.x(hi), w_hi) } else { (sc.x(lo), w_lo) };
    let refuted = x > sc.limit;
    Ok(RegularityVerdict {
        status: if refuted { Status::Refuted } else { Status::CertifiedRegular },
        witness: Some(witness),
        deviation: sc.deviation(x),
        scale: p.clone(),
        epsilon: epsilon.clone(),
        trials: 0,
    })
}

/// A candidate witness produced by one sampled trial.
#[derive(Clone, Debug)]
struct Candidate {
    score: i128,
    us: BitSet,
    vs: BitSet,
}

fn consider(best: &mut Option<Candidate>, score: i128, us: BitSet, vs: BitSet) {
    if best.as_ref().is_none_or(|c| score > c.score) {
        *best = Some(Candidate { score, us, vs });
    }
}

/// Candidate pairs for one trial: uniform, degree-guided from a random seed
/// set on either side, and codegree-guided from a random pivot.
/// `score_fn(e′)` is maximised; `top_first` picks which extreme to try.
fn trial_candidates(
    m: &PairMatrix,
    a: usize,
    b: usize,
    rng: &mut impl Rng,
    directions: &[bool],
    score_fn: &dyn Fn(usize) -> i128,
) -> Option<Candidate> {
    let mut best = None;
    let us = random_subset(m.nu(), a, rng);
    let vs = random_subset(m.nv(), b, rng);
    consider(&mut best, score_fn(m.edges_between(&us, &vs)), us.clone(), vs);
    let vdeg = m.v_degrees(&us);
    for &top in directions {
        let vs = select(&vdeg, b, top);
        consider(&mut best, score_fn(m.edges_between(&us, &vs)), us.clone(), vs);
    }
    // Seed on V: select U′ by degree into the seed, then V′ by degree into U′.
    let seed_v = random_subset(m.nv(), b, rng);
    let udeg = m.u_degrees(&seed_v);
    for &top in directions {
        let us = select(&udeg, a, top);
        let vs = select(&m.v_degrees(&us), b, top);
        consider(&mut best, score_fn(m.edges_between(&us, &vs)), us, vs);
    }
    let seed_u = random_subset(m.nu(), a, rng);
    let vdeg = m.v_degrees(&seed_u);
    for &top in directions {
        let vs = select(&vdeg, b, top);
        let us = select(&m.u_degrees(&vs), a, top);
        consider(&mut best, score_fn(m.edges_between(&us, &vs)), us, vs);
    }
    // Codegree with a pivot: dense blocks share many neighbours.
    let pivot = rng.gen_range(0..m.nu());
    let prow = &m.rows[pivot];
    let codeg: Vec<usize> = m.rows.iter().map(|r| r.intersection_count(prow)).collect();
    for &top in directions {
        let us = select(&codeg, a, top);
        let vs = select(&m.v_degrees(&us), b, top);
        consider(&mut best, score_fn(m.edges_between(&us, &vs)), us, vs);
    }
    best
}

/// Runs `trials` independent trials on substreams `[t]` and keeps the best
/// score, ties broken by the lower trial index.
fn run_trials(
    m: &PairMatrix,
    a: usize,
    b: usize,
    trials: usize,
    stream: &RngStream,
    directions: &[bool],
    score_fn: &(dyn Fn(usize) -> i128 + Sync),
) -> Option<Candidate> {
    (0..trials)
        .into_par_iter()
        .filter_map(|t| {
            let mut rng = stream.child(t as u64).rng();
            trial_candidates(m, a, b, &mut rng, directions, score_fn).map(|c| (t, c))
        })
        .reduce_with(|x, y| {
            if y.1.score > x.1.score || (y.1.score == x.1.score && y.0 < x.0) {
                y
            } else {
                x
            }
        })
        .map(|(_, c)| c)
}

fn sampled_regular(m: &PairMatrix, epsilon: &Rational, p: &Rational, trials: usize, stream: &RngStream) -> Result<RegularityVerdict> {
    check_p(p)?;
    let trials = trials.max(1);
    let (a, b) = witness_sizes(m, epsilon)?;
    let sc = Scaled::new(m, a, b, &(epsilon * p));
    let score = |e: usize| sc.x(e);
    let best = run_trials(m, a, b, trials, stream, &[true, false], &score).expect("at least one trial");
    Ok(RegularityVerdict {
        status: if best.score > sc.limit { Status::Refuted } else { Status::Undecided },
        witness: Some(m.witness(&best.us, &best.vs)),
        deviation: sc.deviation(best.score),
        scale: p.clone(),
        epsilon: epsilon.clone(),
        trials,
    })
}

/// Certifies or refutes `(ε,p)`-regularity of `(U, V)` by exhaustive search
/// over witness pairs of exact size `⌈ε|U|⌉ × ⌈ε|V|⌉`.
pub fn check_regular_exhaustive(g: &SimpleGraph, pair: &VertexSetPair, epsilon: &Rational, p: &Rational) -> Result<RegularityVerdict> {
    exhaustive_regular(&PairMatrix::from_graph(g, pair)?, epsilon, p)
}

/// Searches for a regularity witness; never certifies.
pub fn refute_regular_sampled(
    g: &SimpleGraph,
    pair: &VertexSetPair,
    epsilon: &Rational,
    p: &Rational,
    trials: usize,
    stream: &RngStream,
) -> Result<RegularityVerdict> {
    sampled_regular(&PairMatrix::from_graph(g, pair)?, epsilon, p, trials, stream)
}

/// Exhaustive when both sides fit the budget, sampled otherwise.
pub fn check_regular(
    g: &SimpleGraph,
    pair: &VertexSetPair,
    epsilon: &Rational,
    p: &Rational,
    trials: usize,
    stream: &RngStream,
) -> Result<RegularityVerdict> {
    let m = PairMatrix::from_graph(g, pair)?;
    if m.nu() <= EXHAUSTIVE_BUDGET && m.nv() <= EXHAUSTIVE_BUDGET {
        exhaustive_regular(&m, epsilon, p)
    } else {
        sampled_regular(&m, epsilon, p, trials, stream)
    }
}

/// Exhaustive check of one pair of a multipartite graph. Witness `V`-side
/// indices are offset by the part size.
pub fn bipartite_exhaustive(b: &Bipartite, epsilon: &Rational, p: &Rational) -> Result<RegularityVerdict> {
    exhaustive_regular(&PairMatrix::from_bipartite(b)?, epsilon, p)
}

pub fn bipartite_sampled(b: &Bipartite, epsilon: &Rational, p: &Rational, trials: usize, stream: &RngStream) -> RegularityVerdict {
    let m = PairMatrix::from_bipartite(b).expect("nonempty part");
    sampled_regular(&m, epsilon, p, trials, stream).expect("validated parameters")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { trials: usize },
}

fn lower_verdict(a: usize, b: usize, min_e: usize, witness: VertexSetPair, epsilon: &Rational, d: &Rational, trials: usize, exhaustive: bool) -> RegularityVerdict {
    let density = frac(min_e as i64, (a * b) as i64);
    let shortfall = d - &density;
    let refuted = density < *d;
    RegularityVerdict {
        status: match (refuted, exhaustive) {
            (true, _) => Status::Refuted,
            (false, true) => Status::CertifiedRegular,
            (false, false) => Status::Undecided,
        },
        witness: Some(witness),
        deviation: shortfall,
        scale: d.clone(),
        epsilon: epsilon.clone(),
        trials,
    }
}

/// `(ε,d)`-lower-regularity: every `U′ ⊆ U`, `V′ ⊆ V` with `|U′| ≥ ε|U|`,
/// `|V′| ≥ ε|V|` has `d(U′,V′) ≥ d`.
pub fn check_lower_regular(
    g: &SimpleGraph,
    pair: &VertexSetPair,
    epsilon: &Rational,
    d: &Rational,
    mode: Mode,
    stream: &RngStream,
) -> Result<RegularityVerdict> {
    let m = PairMatrix::from_graph(g, pair)?;
    let (a, b) = witness_sizes(&m, epsilon)?;
    match mode {
        Mode::Exhaustive => {
            if m.nu() > EXHAUSTIVE_BUDGET || m.nv() > EXHAUSTIVE_BUDGET {
                return Err(Error::budget(format!(
                    "exhaustive lower-regularity check limited to {EXHAUSTIVE_BUDGET} vertices per side; use sampled mode"
                )));
            }
            let (_, (lo, w)) = exhaustive_extremes(&m, a, b);
            Ok(lower_verdict(a, b, lo, w, epsilon, d, 0, true))
        }
        Mode::Sampled { trials } => {
            let trials = trials.max(1);
            let score = |e: usize| -(e as i128);
            let best = run_trials(&m, a, b, trials, stream, &[false], &score).expect("at least one trial");
            let min_e = (-best.score) as usize;
            Ok(lower_verdict(a, b, min_e, m.witness(&best.us, &best.vs), epsilon, d, trials, false))
        }
    }
}

/// Re-measures a refutation against the graph: the witness must meet the size
/// floors and deviate by more than `εp` (strictly).
pub fn confirm_refutation(g: &SimpleGraph, pair: &VertexSetPair, verdict: &RegularityVerdict) -> Result<bool> {
    let Some(w) = &verdict.witness else { return Ok(false) };
    let eps = &verdict.epsilon;
    let min_u = ceil_usize(&(eps * int(pair.u.len() as i64)));
    let min_v = ceil_usize(&(eps * int(pair.v.len() as i64)));
    if w.u.len() < min_u || w.v.len() < min_v {
        return Ok(false);
    }
    if !w.u.iter().all(|x| pair.u.binary_search(x).is_ok()) || !w.v.iter().all(|x| pair.v.binary_search(x).is_ok()) {
        return Ok(false);
    }
    let dev = (pair_density(g, w)? - pair_density(g, pair)?).abs();
    Ok(dev == verdict.deviation && dev > eps * &verdict.scale)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum UniformityWitness {
    Pair { u: Vec<usize>, v: Vec<usize> },
    Set { vertices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityVerdict {
    pub status: Status,
    pub witness: Option<UniformityWitness>,
    /// Largest density found (`d(U₁,U₂)` or `e(U)/C(|U|,2)`).
    #[serde(with = "serde_fraction")]
    pub density: Rational,
    /// `D·p`.
    #[serde(with = "serde_fraction")]
    pub bound: Rational,
    pub set_size: usize,
    pub trials: usize,
}

struct UniformSearch {
    pair_best: Option<(usize, BitSet, BitSet)>,
    set_best: Option<(usize, BitSet)>,
}

/// Top-`s` vertices of `pool` by degree into `target`, ties by index.
fn top_into(g: &SimpleGraph, pool: &[usize], target: &BitSet, s: usize) -> BitSet {
    let mut scored: Vec<(usize, usize)> = pool.iter().map(|&v| (g.neighbors(v).intersection_count(target), v)).collect();
    scored.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    BitSet::from_indices(g.vertex_count(), scored.into_iter().take(s).map(|(_, v)| v))
}

fn complement(g: &SimpleGraph, set: &BitSet) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| !set.contains(v)).collect()
}

fn uniform_verdict(search: UniformSearch, s: usize, bound: Rational, exhaustive: bool, trials: usize) -> UniformityVerdict {
    let pair_density = search.pair_best.as_ref().map(|(e, _, _)| frac(*e as i64, (s * s) as i64));
    let set_density = search
        .set_best
        .as_ref()
        .filter(|_| s >= 2)
        .map(|(e, _)| frac(*e as i64, (s * (s - 1) / 2) as i64));
    let (density, witness) = match (pair_density, set_density) {
        (Some(pd), Some(sd)) if pd >= sd => {
            let (_, u, v) = search.pair_best.unwrap();
            (pd, Some(UniformityWitness::Pair { u: u.to_vec(), v: v.to_vec() }))
        }
        (_, Some(sd)) => {
            let (_, u) = search.set_best.unwrap();
            (sd, Some(UniformityWitness::Set { vertices: u.to_vec() }))
        }
        (Some(pd), None) => {
            let (_, u, v) = search.pair_best.unwrap();
            (pd, Some(UniformityWitness::Pair { u: u.to_vec(), v: v.to_vec() }))
        }
        (None, None) => (Rational::zero(), None),
    };
    let refuted = density > bound;
    UniformityVerdict {
        status: if refuted {
            Status::Refuted
        } else if exhaustive {
            Status::CertifiedRegular
        } else {
            Status::Undecided
        },
        witness,
        density,
        bound,
        set_size: s,
        trials,
    }
}

/// Edge count of a candidate pair `(U′, V′)` with the two sets.
type PairCandidate = (usize, BitSet, BitSet);

/// `(η,p,D)`-upper-uniformity over sets of size exactly `⌈ηN⌉`: disjoint
/// pairs satisfy `d(U₁,U₂) ≤ Dp`, single sets satisfy `e(U) ≤ Dp·C(|U|,2)`.
pub fn check_upper_uniform(g: &SimpleGraph, eta: &Rational, p: &Rational, big_d: &Rational, mode: Mode, stream: &RngStream) -> Result<UniformityVerdict> {
    if !eta.is_positive() || eta > &int(1) {
        return Err(Error::pre(format!("η must lie in (0,1], got {eta}")));
    }
    check_p(p)?;
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::pre("upper-uniformity needs a nonempty graph"));
    }
    let s = ceil_usize(&(eta * int(n as i64))).max(1);
    let bound = big_d * p;
    let all: Vec<usize> = (0..n).collect();
    let mut search = UniformSearch { pair_best: None, set_best: None };
    match mode {
        Mode::Exhaustive => {
            if n > UNIFORM_EXHAUSTIVE_BUDGET {
                return Err(Error::budget(format!(
                    "exhaustive upper-uniformity check limited to {UNIFORM_EXHAUSTIVE_BUDGET} vertices; use sampled mode"
                )));
            }
            let mut mask: u32 = (1u32 << s) - 1;
            loop {
                let set = mask_to_bitset(mask, n);
                let e_set = g.edges_within(&set);
                if search.set_best.as_ref().is_none_or(|(e, _)| e_set > *e) {
                    search.set_best = Some((e_set, set.clone()));
                }
                if 2 * s <= n {
                    let other = top_into(g, &complement(g, &set), &set, s);
                    let e = g.edges_between(&set, &other);
                    if search.pair_best.as_ref().is_none_or(|(b, _, _)| e > *b) {
                        search.pair_best = Some((e, set.clone(), other));
                    }
                }
                if s == n {
                    break;
                }
                let next = next_combination(mask);
                if (next as u64) >= 1u64 << n || next <= mask {
                    break;
                }
                mask = next;
            }
            Ok(uniform_verdict(search, s, bound, true, 0))
        }
        Mode::Sampled { trials } => {
            let trials = trials.max(1);
            let results: Vec<(Option<PairCandidate>, (usize, BitSet))> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream.child(t as u64).rng();
                    let mut order = all.clone();
                    order.shuffle(&mut rng);
                    let mut set = BitSet::from_indices(n, order[..s].iter().copied());
                    // Greedy densification of a single set.
                    for _ in 0..3 {
                        set = top_into(g, &all, &set, s);
                    }
                    let single = (g.edges_within(&set), set);
                    let pair = (2 * s <= n).then(|| {
                        let mut u1 = BitSet::from_indices(n, order[..s].iter().copied());
                        let mut u2 = top_into(g, &complement(g, &u1), &u1, s);
                        for _ in 0..3 {
                            u1 = top_into(g, &complement(g, &u2), &u2, s);
                            u2 = top_into(g, &complement(g, &u1), &u1, s);
                        }
                        (g.edges_between(&u1, &u2), u1, u2)
                    });
                    (pair, single)
                })
                .collect();
            for (pair, single) in results {
                if let Some((e, u1, u2)) = pair {
                    if search.pair_best.as_ref().is_none_or(|(b, _, _)| e > *b) {
                        search.pair_best = Some((e, u1, u2));
                    }
                }
                if search.set_best.as_ref().is_none_or(|(b, _)| single.0 > *b) {
                    search.set_best = Some(single);
                }
            }
            Ok(uniform_verdict(search, s, bound, false, trials))
        }
    }
}
