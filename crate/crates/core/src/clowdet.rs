//! Clow sequences and division-free determinants.
//!
//! A clow is a closed walk whose first vertex (the head) is its strict minimum
//! and occurs once. The determinant is the signed sum of weights of clow
//! sequences of total length `n`; the non-cycle-cover terms cancel under the
//! involution [`involution_phi`]. The layered graph `H_A` turns this sum into
//! a difference of path-weight sums, computable by dynamic programming.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graphs::{Digraph, LayeredDag};
use crate::matrix::IntMatrix;
use crate::{Error, Result};

/// Largest order accepted by [`det_via_clows`].
pub const CLOW_ENUMERATION_LIMIT: usize = 5;

/// A clow given by its vertex walk; the closing edge returns to the head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clow {
    walk: Vec<usize>,
}

impl Clow {
    /// Validates that the head is the strict minimum and occurs once.
    pub fn new(walk: Vec<usize>) -> Result<Self> {
        let (&head, rest) = walk
            .split_first()
            .ok_or_else(|| Error::invariant("a clow needs at least one vertex"))?;
        if rest.iter().any(|&v| v <= head) {
            return Err(Error::invariant(format!(
                "head {head} must be the strict minimum of the clow {walk:?}"
            )));
        }
        Ok(Clow { walk })
    }

    /// The head (first and least vertex).
    pub fn head(&self) -> usize {
        self.walk[0]
    }

    /// Vertices in walk order.
    pub fn walk(&self) -> &[usize] {
        &self.walk
    }

    /// Number of edges, counting the closing edge.
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    /// A clow always has at least one edge.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Edges in order, ending with the closing edge back to the head.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let l = self.walk.len();
        (0..l).map(move |k| (self.walk[k], self.walk[(k + 1) % l]))
    }

    /// Whether no vertex repeats.
    pub fn is_simple(&self) -> bool {
        let mut seen = self.walk.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Product of edge weights in `g`; zero if an edge is missing.
    pub fn weight(&self, g: &Digraph) -> BigInt {
        self.edges()
            .map(|(u, v)| g.weight(u, v).unwrap_or_default())
            .product()
    }
}

impl fmt::Display for Clow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.walk.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Clows with strictly increasing heads.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClowSequence {
    clows: Vec<Clow>,
}

impl ClowSequence {
    /// Validates head order.
    pub fn new(clows: Vec<Clow>) -> Result<Self> {
        if clows.windows(2).any(|w| w[0].head() >= w[1].head()) {
            return Err(Error::invariant("clow heads must be strictly increasing"));
        }
        Ok(ClowSequence { clows })
    }

    /// The clows in head order.
    pub fn clows(&self) -> &[Clow] {
        &self.clows
    }

    /// Total number of edges.
    pub fn length(&self) -> usize {
        self.clows.iter().map(Clow::len).sum()
    }

    /// Number of clows.
    pub fn components(&self) -> usize {
        self.clows.len()
    }

    /// `(-1)^(length + components)`.
    pub fn sign(&self) -> i32 {
        if (self.length() + self.components()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Product of clow weights.
    pub fn weight(&self, g: &Digraph) -> BigInt {
        self.clows.iter().map(|c| c.weight(g)).product()
    }

    /// `sign * weight`.
    pub fn signed_weight(&self, g: &Digraph) -> BigInt {
        self.weight(g) * self.sign()
    }

    /// Whether every edge of every clow is an edge of `g`.
    pub fn is_valid_for(&self, g: &Digraph) -> bool {
        self.clows.iter().all(|c| {
            c.walk.iter().all(|&v| v < g.vertex_count()) && c.edges().all(|(u, v)| g.has_edge(u, v))
        })
    }

    /// Whether the clows are pairwise disjoint simple cycles.
    pub fn is_cycle_cover(&self) -> bool {
        let mut all: Vec<usize> = self.clows.iter().flat_map(|c| c.walk.iter().copied()).collect();
        all.sort_unstable();
        all.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for ClowSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.clows.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Weighted digraph with an edge `u -> v` of weight `a_uv` for every nonzero entry.
pub fn matrix_graph(a: &IntMatrix) -> Result<Digraph> {
    let n = a.order()?;
    let edges = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !a[(u, v)].is_zero())
        .map(|(u, v)| (u, v, a[(u, v)].clone()));
    Digraph::with_weights(n, edges)
}

/// All clows of exactly `len` edges with head `h` whose edges lie in `g`.
fn clows_from(g: &Digraph, h: usize, len: usize) -> Vec<Clow> {
    let mut out = Vec::new();
    let mut walk = vec![h];
    fn extend(g: &Digraph, h: usize, len: usize, walk: &mut Vec<usize>, out: &mut Vec<Clow>) {
        let u = *walk.last().expect("walk starts at the head");
        if walk.len() == len {
            if g.has_edge(u, h) {
                out.push(Clow { walk: walk.clone() });
            }
            return;
        }
        for &v in g.successors(u) {
            if v > h {
                walk.push(v);
                extend(g, h, len, walk, out);
                walk.pop();
            }
        }
    }
    extend(g, h, len, &mut walk, &mut out);
    out
}

/// Every clow sequence of total length `len` in `g`.
pub fn enumerate_clow_sequences(g: &Digraph, len: usize) -> Vec<ClowSequence> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut prefix: Vec<Clow> = Vec::new();
    fn rec(g: &Digraph, n: usize, left: usize, min_head: usize, prefix: &mut Vec<Clow>, out: &mut Vec<ClowSequence>) {
        if left == 0 {
            out.push(ClowSequence { clows: prefix.clone() });
            return;
        }
        for h in min_head..n {
            for l in 1..=left {
                for c in clows_from(g, h, l) {
                    prefix.push(c);
                    rec(g, n, left - l, h + 1, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    rec(g, n, len, 0, &mut prefix, &mut out);
    out
}

/// Determinant as the signed sum over all clow sequences of length `n`.
pub fn det_via_clows(a: &IntMatrix) -> Result<BigInt> {
    let n = a.order()?;
    if n > CLOW_ENUMERATION_LIMIT {
        return Err(Error::budget(format!(
            "clow enumeration is limited to order {CLOW_ENUMERATION_LIMIT}, got {n}"
        )));
    }
    let g = matrix_graph(a)?;
    Ok(enumerate_clow_sequences(&g, n)
        .iter()
        .map(|w| w.signed_weight(&g))
        .sum())
}

/// The sign-reversing, weight-preserving involution on clow sequences.
///
/// Let `i` be least such that `C_{i+1}, ..., C_k` are disjoint simple cycles;
/// if `i = 0` the sequence is a cycle cover and is returned unchanged.
/// Otherwise walk `C_i` from its head and stop at the first vertex `v` that
/// either lies on some later `C_j` (merge `C_j` into `C_i` at `v`) or repeats
/// an earlier vertex of `C_i` (split off the simple cycle just closed).
pub fn involution_phi(w: &ClowSequence, g: &Digraph) -> Result<ClowSequence> {
    if !w.is_valid_for(g) {
        return Err(Error::invariant("clow sequence uses an edge missing from the graph"));
    }
    let k = w.clows.len();
    // Least i (1-based) with C_{i+1..k} disjoint simple cycles.
    let mut i = k;
    let mut used: Vec<usize> = Vec::new();
    while i > 0 {
        let c = &w.clows[i - 1];
        if !c.is_simple() || c.walk.iter().any(|v| used.contains(v)) {
            break;
        }
        used.extend(&c.walk);
        i -= 1;
    }
    if i == 0 {
        return Ok(w.clone());
    }
    let ci = &w.clows[i - 1];
    for (pos, &v) in ci.walk.iter().enumerate() {
        if let Some(j) = (i..k).find(|&j| w.clows[j].walk.contains(&v)) {
            // Merge: splice C_j, rotated to start after v and end at v.
            let cj = &w.clows[j].walk;
            let at = cj.iter().position(|&x| x == v).expect("v lies on C_j");
            let rotated = cj[at + 1..].iter().chain(&cj[..=at]).copied();
            let mut walk = ci.walk[..=pos].to_vec();
            walk.extend(rotated);
            walk.extend_from_slice(&ci.walk[pos + 1..]);
            let mut clows = w.clows.clone();
            clows[i - 1] = Clow { walk };
            clows.remove(j);
            return Ok(ClowSequence { clows });
        }
        if let Some(first) = ci.walk[..pos].iter().position(|&x| x == v) {
            // Split: v_{first+1..=pos} is a simple cycle.
            let mut cycle = ci.walk[first + 1..=pos].to_vec();
            let min_at = cycle
                .iter()
                .enumerate()
                .min_by_key(|&(_, &x)| x)
                .map(|(p, _)| p)
                .expect("cycle is non-empty");
            cycle.rotate_left(min_at);
            let mut walk = ci.walk[..=first].to_vec();
            walk.extend_from_slice(&ci.walk[pos + 1..]);
            let mut clows = w.clows.clone();
            clows[i - 1] = Clow { walk };
            let new = Clow { walk: cycle };
            let slot = clows
                .iter()
                .position(|c| c.head() > new.head())
                .unwrap_or(clows.len());
            clows.insert(slot, new);
            return Ok(ClowSequence { clows });
        }
    }
    Err(Error::internal(
        "clow is neither simple and disjoint nor has a merge or split point",
    ))
}

/// The layered graph `H_A(len)` with its distinguished vertices.
#[derive(Debug, Clone)]
pub struct HaGraph {
    pub dag: LayeredDag,
    pub s: usize,
    pub t_plus: usize,
    pub t_minus: usize,
    n: usize,
    len: usize,
}

impl HaGraph {
    /// Index of vertex `[p, h, u, i]` (0-based `h`, `u`).
    pub fn vertex(&self, p: usize, h: usize, u: usize, i: usize) -> usize {
        ha_vertex(self.n, p, h, u, i)
    }

    /// Order of the source matrix.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges per path (the clow-sequence length).
    pub fn length(&self) -> usize {
        self.len
    }
}

fn ha_vertex(n: usize, p: usize, h: usize, u: usize, i: usize) -> usize {
    3 + ((i * 2 + p) * n + h) * n + u
}

/// Builds `H_A(len)` (default `len = n`). Vertex `[p, h, u, i]` records the
/// parity `p` of `len` plus the number of clows started, the current head `h`,
/// the current vertex `u` and the number `i` of edges used. `s` is in layer 1,
/// `[., ., ., i]` in layer `i + 2`, and `t+`, `t-` in layer `len + 2`. Only
/// edges of nonzero weight are included.
pub fn build_ha(a: &IntMatrix, len: Option<usize>) -> Result<HaGraph> {
    let n = a.order()?;
    if n == 0 {
        return Err(Error::arg("H_A needs a matrix of order at least 1"));
    }
    let len = len.unwrap_or(n);
    if len == 0 || len > n {
        return Err(Error::arg(format!("length must lie in 1..={n}")));
    }
    let vertices = 3 + 2 * n * n * len;
    let (s, t_plus, t_minus) = (0, 1, 2);
    let mut layer = vec![0usize; vertices];
    layer[s] = 1;
    layer[t_plus] = len + 2;
    layer[t_minus] = len + 2;
    for i in 0..len {
        for p in 0..2 {
            for h in 0..n {
                for u in 0..n {
                    layer[ha_vertex(n, p, h, u, i)] = i + 2;
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize, BigInt)> = Vec::new();
    let b = len % 2;
    for h in 0..n {
        edges.push((s, ha_vertex(n, b, h, h, 0), BigInt::one()));
    }
    for i in 0..len {
        for p in 0..2 {
            for h in 0..n {
                for u in 0..n {
                    let from = ha_vertex(n, p, h, u, i);
                    let close = &a[(u, h)];
                    if i + 1 < len {
                        for v in h + 1..n {
                            if !a[(u, v)].is_zero() {
                                edges.push((from, ha_vertex(n, p, h, v, i + 1), a[(u, v)].clone()));
                            }
                        }
                        if !close.is_zero() {
                            for h2 in h + 1..n {
                                edges.push((from, ha_vertex(n, 1 - p, h2, h2, i + 1), close.clone()));
                            }
                        }
                    } else if !close.is_zero() {
                        let t = if p == 1 { t_plus } else { t_minus };
                        edges.push((from, t, close.clone()));
                    }
                }
            }
        }
    }
    let dag = LayeredDag::new(Digraph::with_weights(vertices, edges)?, layer, len + 2)?;
    Ok(HaGraph {
        dag,
        s,
        t_plus,
        t_minus,
        n,
        len,
    })
}

/// `(W+, W-)`: total path weight from `s` to `t+` and to `t-` in `H_A(len)`,
/// computed layer by layer without materializing the graph.
pub fn ha_weight_sums(a: &IntMatrix, len: usize) -> Result<(BigInt, BigInt)> {
    let n = a.order()?;
    if n == 0 || len == 0 || len > n {
        return Err(Error::arg(format!("length must lie in 1..={n} for a nonempty matrix")));
    }
    // val[p][h][u] at the current layer.
    let idx = |p: usize, h: usize, u: usize| (p * n + h) * n + u;
    let mut val = vec![BigInt::zero(); 2 * n * n];
    for h in 0..n {
        val[idx(len % 2, h, h)] = BigInt::one();
    }
    for _ in 1..len {
        let mut next = vec![BigInt::zero(); 2 * n * n];
        for p in 0..2 {
            // Running sum over heads h < h2 of the weight of closing the clow.
            let mut closed = BigInt::zero();
            for h in 0..n {
                for u in h..n {
                    let x = &val[idx(p, h, u)];
                    if x.is_zero() {
                        continue;
                    }
                    for v in h + 1..n {
                        if !a[(u, v)].is_zero() {
                            next[idx(p, h, v)] += x * &a[(u, v)];
                        }
                    }
                }
                if h + 1 < n {
                    closed += (h..n).map(|u| &val[idx(p, h, u)] * &a[(u, h)]).sum::<BigInt>();
                    next[idx(1 - p, h + 1, h + 1)] += &closed;
                }
            }
        }
        val = next;
    }
    let mut w = [BigInt::zero(), BigInt::zero()];
    for (p, wp) in w.iter_mut().enumerate() {
        for h in 0..n {
            for u in h..n {
                *wp += &val[idx(p, h, u)] * &a[(u, h)];
            }
        }
    }
    let [w_minus, w_plus] = w;
    Ok((w_plus, w_minus))
}

/// Determinant as `W+ - W-` over `H_A`.
pub fn det_via_ha(a: &IntMatrix) -> Result<BigInt> {
    let n = a.order()?;
    let (p, m) = ha_weight_sums(a, n)?;
    Ok(p - m)
}

/// Coefficients `[c_0, ..., c_n]` of `det(λI - A)`, with
/// `c_{n-l} = (-1)^l (W+ - W-)` over `H_A(l)` and `c_n = 1`.
pub fn charpoly_coeffs(a: &IntMatrix) -> Result<Vec<BigInt>> {
    let n = a.order()?;
    if n == 0 {
        return Err(Error::arg("characteristic polynomial needs order at least 1"));
    }
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    for l in 1..=n {
        let (p, m) = ha_weight_sums(a, l)?;
        let d = p - m;
        c[n - l] = if l % 2 == 0 { d } else { -d };
    }
    Ok(c)
}

/// Evaluates `Σ c_r x^r`.
pub fn eval_poly(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, ci| acc * x + ci)
}

/// Rank over the rationals: `k - r` where `k` is the column count and `r` the
/// least index with `c_r(AᵀA) != 0`. The Gram matrix is symmetric, so the
/// multiplicity of the eigenvalue 0 equals the nullity.
pub fn rank_of(a: &IntMatrix) -> Result<usize> {
    let k = a.cols();
    if k == 0 || a.rows() == 0 {
        return Ok(0);
    }
    let gram = a.transpose().mul(a)?;
    let c = charpoly_coeffs(&gram)?;
    let r = c.iter().position(|x| !x.is_zero()).expect("c_k = 1");
    Ok(k - r)
}
