//! Isolating weightings, min-uniqueness and weight-based path counting.

use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::cmp::Reverse;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graphs::{count_simple_paths, Digraph, LayeredDag, DEFAULT_PATH_BUDGET};
use crate::matrix::next_prime_above;
use crate::reductions::unroll_to_sldag;
use crate::{Error, Result};

/// Weights for the elements `0..len` of a universe, all in `[1, r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFn {
    weights: Vec<u64>,
    r: u64,
}

impl WeightFn {
    /// Validates the range `[1, r]`.
    pub fn new(weights: Vec<u64>, r: u64) -> Result<Self> {
        if let Some(w) = weights.iter().find(|&&w| w == 0 || w > r) {
            return Err(Error::invariant(format!("weight {w} outside [1, {r}]")));
        }
        Ok(WeightFn { weights, r })
    }

    /// Weight of element `i`.
    pub fn get(&self, i: usize) -> u64 {
        self.weights[i]
    }

    /// All weights.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// The range bound.
    pub fn r(&self) -> u64 {
        self.r
    }

    /// Total weight of a set.
    pub fn set_weight(&self, set: &[usize]) -> u64 {
        set.iter().map(|&i| self.weights[i]).sum()
    }

    /// Draws weights uniformly from `[1, r]`.
    pub fn random(m: usize, r: u64, rng: &mut impl Rng) -> Self {
        WeightFn {
            weights: (0..m).map(|_| rng.gen_range(1..=r)).collect(),
            r,
        }
    }
}

/// Distinct non-empty subsets of `0..universe`, each stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl SetFamily {
    /// Validates non-emptiness, range and distinctness.
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(sets.len());
        for set in sets {
            let sorted: BTreeSet<usize> = set.iter().copied().collect();
            if sorted.len() != set.len() {
                return Err(Error::invariant("a set lists an element twice"));
            }
            if sorted.is_empty() {
                return Err(Error::invariant("sets must be non-empty"));
            }
            if let Some(&x) = sorted.iter().find(|&&x| x >= universe) {
                return Err(Error::invariant(format!("element {x} outside universe of size {universe}")));
            }
            let v: Vec<usize> = sorted.into_iter().collect();
            if !seen.insert(v.clone()) {
                return Err(Error::invariant("sets must be pairwise distinct"));
            }
            out.push(v);
        }
        Ok(SetFamily { universe, sets: out })
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// The sets.
    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Family of edge sets of all `s -> t` paths of a layered DAG; the
    /// universe is the edge index range.
    pub fn of_paths(d: &LayeredDag, s: usize, t: usize) -> Result<Self> {
        let g = d.graph();
        g.check_vertex(s)?;
        g.check_vertex(t)?;
        let mut sets = Vec::new();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(s, Vec::new())];
        while let Some((u, path)) = stack.pop() {
            if u == t {
                if !path.is_empty() {
                    sets.push(path);
                }
                continue;
            }
            for &v in g.successors(u) {
                let mut p = path.clone();
                p.push(g.edge_index(u, v).expect("successor edge exists"));
                stack.push((v, p));
            }
        }
        SetFamily::new(g.edge_count(), sets)
    }
}

/// True iff exactly one set of `f` attains the minimum weight.
pub fn is_good(w: &WeightFn, f: &SetFamily) -> bool {
    let mut best: Option<(u64, usize)> = None;
    for set in &f.sets {
        let x = w.set_weight(set);
        best = match best {
            None => Some((x, 1)),
            Some((b, _)) if x < b => Some((x, 1)),
            Some((b, c)) if x == b => Some((b, c + 1)),
            keep => keep,
        };
    }
    best.is_none_or(|(_, c)| c == 1)
}

/// Largest `r^m` enumerated exactly by [`isolation_probability`].
pub const EXACT_ENUMERATION_LIMIT: u64 = 1 << 20;

/// Fraction of good weightings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolationEstimate {
    pub good: u64,
    pub total: u64,
    /// `good / total`.
    pub fraction: BigRational,
    /// Whether every weighting was enumerated.
    pub exact: bool,
}

/// Exact fraction of weightings in `[1, r]^m` that are good for `f`, by full
/// enumeration when `r^m <= EXACT_ENUMERATION_LIMIT`; otherwise the fraction
/// over `trials` weightings sampled with the given seed.
pub fn isolation_probability(f: &SetFamily, r: u64, trials: u64, seed: u64) -> Result<IsolationEstimate> {
    if r == 0 {
        return Err(Error::arg("r must be positive"));
    }
    let m = f.universe();
    let space = u32::try_from(m)
        .ok()
        .and_then(|m| r.checked_pow(m))
        .filter(|&s| s <= EXACT_ENUMERATION_LIMIT);
    match space {
        Some(total) => {
            let mut good = 0;
            let mut w = WeightFn {
                weights: vec![1; m],
                r,
            };
            for _ in 0..total {
                good += u64::from(is_good(&w, f));
                // Odometer increment over [1, r]^m.
                for x in w.weights.iter_mut() {
                    if *x < r {
                        *x += 1;
                        break;
                    }
                    *x = 1;
                }
            }
            Ok(estimate(good, total, true))
        }
        None => sampled_isolation(f, r, trials, seed),
    }
}

/// Fraction of `trials` sampled weightings that are good.
pub fn sampled_isolation(f: &SetFamily, r: u64, trials: u64, seed: u64) -> Result<IsolationEstimate> {
    if trials == 0 {
        return Err(Error::arg("trials must be positive"));
    }
    if r == 0 {
        return Err(Error::arg("r must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let good = (0..trials)
        .filter(|_| is_good(&WeightFn::random(f.universe(), r, &mut rng), f))
        .count() as u64;
    Ok(estimate(good, trials, false))
}

fn estimate(good: u64, total: u64, exact: bool) -> IsolationEstimate {
    IsolationEstimate {
        good,
        total,
        fraction: BigRational::new(good.into(), total.into()),
        exact,
    }
}

/// The weighting `w_i(j) = i^j mod r` for elements `j = 1..=m` (element index
/// `j - 1`). A residue of 0 is represented by weight `r`, which is congruent.
pub fn power_weights(i: u64, m: usize, r: u64) -> WeightFn {
    let mut weights = Vec::with_capacity(m);
    let mut x = 1u128;
    for _ in 0..m {
        x = x * u128::from(i % r) % u128::from(r);
        weights.push(if x == 0 { r } else { x as u64 });
    }
    WeightFn { weights, r }
}

/// Result of the derandomized weight search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialWeights {
    /// Index `i` of the weighting in the family.
    pub index: u64,
    /// The prime modulus.
    pub r: u64,
    pub weights: WeightFn,
}

/// Finds the least `i` in `[1, r]` whose weighting `i^j mod r` gives the sets
/// of `f` pairwise distinct weights modulo `r`, where `r` is the least prime
/// above `(n + 1)^2 * p_bound^2`.
pub fn polynomial_weight_family(n: usize, f: &SetFamily, p_bound: u64) -> Result<PolynomialWeights> {
    if (f.sets().len() as u64) > p_bound {
        return Err(Error::arg(format!(
            "family has {} sets, more than the bound {p_bound}",
            f.sets().len()
        )));
    }
    if f.universe() > n {
        return Err(Error::arg("universe exceeds n"));
    }
    let r = prime_for(n, p_bound)?;
    for i in 1..=r {
        let w = power_weights(i, n, r);
        let mut seen = HashSet::new();
        if f.sets().iter().all(|s| seen.insert(w.set_weight(s) % r)) {
            return Ok(PolynomialWeights {
                index: i,
                r,
                weights: w,
            });
        }
    }
    Err(Error::internal("no separating weighting found in the family"))
}

fn prime_for(n: usize, p_bound: u64) -> Result<u64> {
    let n1 = n as u64 + 1;
    let x = n1
        .checked_mul(n1)
        .and_then(|a| a.checked_mul(p_bound))
        .and_then(|a| a.checked_mul(p_bound))
        .ok_or_else(|| Error::arg("weight bound overflows"))?;
    Ok(next_prime_above(x))
}

/// Distinct total weights of `s -> t` paths in a layered DAG whose edge `e`
/// has weight `w[e]`.
///
/// Equivalent to subdividing each edge into a path of `w[e]` unit edges and
/// collecting the lengths `L` at which the copy of `t` is reachable from `s`
/// in exactly `L` steps.
pub fn achievable_path_weights(d: &LayeredDag, s: usize, t: usize, w: &[u64]) -> Result<BTreeSet<u64>> {
    let g = d.graph();
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let mut sums: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); g.vertex_count()];
    sums[s].insert(0);
    for u in d.layer_order() {
        if sums[u].is_empty() {
            continue;
        }
        let here = sums[u].clone();
        for &v in g.successors(u) {
            let we = w[g.edge_index(u, v).expect("successor edge exists")];
            sums[v].extend(here.iter().map(|x| x + we));
        }
    }
    Ok(std::mem::take(&mut sums[t]))
}

/// Counts `s -> t` paths by isolation: for every weighting in the power
/// family (with `n` the edge count and `r` as in
/// [`polynomial_weight_family`]) the number of distinct achievable path
/// weights is a lower bound, and the separating weighting attains the true
/// count. Fails if some weighting exhibits more than `p_bound` distinct
/// weights.
pub fn count_paths_via_weights(d: &LayeredDag, s: usize, t: usize, p_bound: u64) -> Result<u64> {
    let m = d.graph().edge_count();
    let r = prime_for(m, p_bound)?;
    let mut best = 0u64;
    for i in 1..=r {
        let w = power_weights(i, m, r);
        let distinct = achievable_path_weights(d, s, t, w.weights())?.len() as u64;
        if distinct > p_bound {
            return Err(Error::invariant(format!(
                "more than {p_bound} distinct path weights; the path bound is violated"
            )));
        }
        best = best.max(distinct);
    }
    Ok(best)
}

/// `min(number of simple s -> t paths, p + 1)`.
///
/// For acyclic graphs the count runs layer by layer on the unrolled graph with
/// counts capped at `p + 1`. Cyclic graphs are counted by simple-path
/// backtracking, since unrolled walks may revisit vertices.
pub fn count_paths_capped(g: &Digraph, s: usize, t: usize, p: u64) -> Result<u64> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let cap = p.saturating_add(1);
    if s == t {
        return Ok(1.min(cap));
    }
    if !g.is_acyclic() {
        let c = count_simple_paths(g, s, t, DEFAULT_PATH_BUDGET)?;
        return Ok(c.min(BigUint::from(cap)).to_u64().expect("capped count fits"));
    }
    // In an acyclic graph the walks of length n - 1 that the unrolled graph
    // counts are exactly the simple paths padded with the (t, t) loop.
    let (dag, s2, t2) = unroll_to_sldag(g, s, t)?;
    let h = dag.graph();
    let mut count = vec![0u64; h.vertex_count()];
    count[s2] = 1;
    for u in dag.layer_order() {
        if count[u] == 0 {
            continue;
        }
        for &v in h.successors(u) {
            count[v] = count[v].saturating_add(count[u]).min(cap);
        }
    }
    Ok(count[t2])
}

/// Replaces each edge of weight `w` with a path of `w` unit edges through
/// `w - 1` fresh vertices. Original vertices keep their indices; fresh
/// vertices follow in edge order.
pub fn expand_weighted_edges(g: &Digraph) -> Result<Digraph> {
    let n = g.vertex_count();
    let mut edges = Vec::new();
    let mut next = n;
    for &(u, v) in g.edges() {
        let w = g.weight(u, v).expect("edge exists");
        if !w.is_positive() {
            return Err(Error::invariant(format!("edge ({u}, {v}) has nonpositive weight {w}")));
        }
        let w = w
            .to_usize()
            .ok_or_else(|| Error::arg(format!("edge weight {w} too large to expand")))?;
        let mut prev = u;
        for _ in 1..w {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, v));
    }
    Digraph::new(next, edges)
}

/// Minimum path weight from `s` to every vertex and the number of paths
/// attaining it (Dijkstra with path counting). Weights must be positive.
pub fn min_weight_path_counts(g: &Digraph, s: usize) -> Result<Vec<Option<(BigInt, BigUint)>>> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    for &(u, v) in g.edges() {
        if !g.weight(u, v).expect("edge exists").is_positive() {
            return Err(Error::invariant(format!("edge ({u}, {v}) has nonpositive weight")));
        }
    }
    let mut dist: Vec<Option<BigInt>> = vec![None; n];
    let mut count = vec![BigUint::zero(); n];
    let mut done = vec![false; n];
    dist[s] = Some(BigInt::zero());
    count[s] = BigUint::one();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((BigInt::zero(), s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &v in g.successors(u) {
            let nd = &d + g.weight(u, v).expect("edge exists");
            match &dist[v] {
                Some(old) if nd > *old => {}
                Some(old) if nd == *old => {
                    let c = count[u].clone();
                    count[v] += c;
                }
                _ => {
                    dist[v] = Some(nd.clone());
                    count[v] = count[u].clone();
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }
    Ok(dist
        .into_iter()
        .zip(count)
        .map(|(d, c)| d.map(|d| (d, c)))
        .collect())
}

/// Whether every minimum-weight path is unique: from `from` to each vertex it
/// reaches, or between every ordered reachable pair when `from` is `None`.
pub fn is_min_unique(g: &Digraph, from: Option<usize>) -> Result<bool> {
    let sources: Vec<usize> = match from {
        Some(s) => vec![s],
        None => (0..g.vertex_count()).collect(),
    };
    for s in sources {
        for entry in min_weight_path_counts(g, s)?.into_iter().flatten() {
            if entry.1 != BigUint::one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the minimum-weight `s -> t` path is unique (vacuously true when
/// `t` is unreachable).
pub fn is_pair_isolated(g: &Digraph, s: usize, t: usize) -> Result<bool> {
    g.check_vertex(t)?;
    Ok(min_weight_path_counts(g, s)?[t]
        .as_ref()
        .is_none_or(|(_, c)| c.is_one()))
}

/// Copy of `g` with weights drawn uniformly from `[1, r]`.
pub fn random_weighting(g: &Digraph, r: u64, rng: &mut impl Rng) -> Result<Digraph> {
    if r == 0 {
        return Err(Error::arg("r must be positive"));
    }
    Digraph::with_weights(
        g.vertex_count(),
        g.edges().iter().map(|&(u, v)| (u, v, rng.gen_range(1..=r))),
    )
}
