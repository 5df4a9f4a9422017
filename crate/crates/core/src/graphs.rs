//! Directed graphs, layered DAGs and exact path counting.

use std::collections::{HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Default node budget for backtracking path enumeration on general digraphs.
pub const DEFAULT_PATH_BUDGET: u64 = 50_000_000;

/// A directed graph on vertices `0..vertex_count` with optional integer weights.
///
/// Parallel edges are rejected. Self-loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<BigInt>>,
    out: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl Digraph {
    /// Builds an unweighted digraph.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::build(n, edges.into_iter().map(|(u, v)| (u, v, None)))
    }

    /// Builds a weighted digraph; every edge carries a weight.
    pub fn with_weights<W: Into<BigInt>>(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, W)>,
    ) -> Result<Self> {
        let g = Self::build(n, edges.into_iter().map(|(u, v, w)| (u, v, Some(w.into()))))?;
        Ok(g)
    }

    fn build(n: usize, edges: impl Iterator<Item = (usize, usize, Option<BigInt>)>) -> Result<Self> {
        let mut g = Digraph {
            n,
            edges: Vec::new(),
            weights: None,
            out: vec![Vec::new(); n],
            index: HashMap::new(),
        };
        let mut weights = Vec::new();
        let mut weighted: Option<bool> = None;
        for (u, v, w) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if g.index.contains_key(&(u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
            match (weighted, &w) {
                (None, _) => weighted = Some(w.is_some()),
                (Some(a), w) if a != w.is_some() => {
                    return Err(Error::invariant("weight map must cover exactly the edge set"))
                }
                _ => {}
            }
            g.index.insert((u, v), g.edges.len());
            g.edges.push((u, v));
            g.out[u].push(v);
            if let Some(w) = w {
                weights.push(w);
            }
        }
        if weighted == Some(true) {
            g.weights = Some(weights);
        }
        for adj in &mut g.out {
            adj.sort_unstable();
        }
        Ok(g)
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Out-neighbours of `u` in increasing order.
    pub fn successors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// Whether `(u, v)` is an edge.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&(u, v))
    }

    /// Position of edge `(u, v)` in [`Digraph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u, v)).copied()
    }

    /// Whether the graph carries a weight map.
    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of edge `(u, v)`; unweighted graphs report weight 1.
    pub fn weight(&self, u: usize, v: usize) -> Option<BigInt> {
        let i = self.edge_index(u, v)?;
        Some(match &self.weights {
            Some(w) => w[i].clone(),
            None => BigInt::one(),
        })
    }

    /// Edge weights aligned with [`Digraph::edges`], if present.
    pub fn weights(&self) -> Option<&[BigInt]> {
        self.weights.as_deref()
    }

    /// Returns `Err` unless `v < vertex_count`.
    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.n,
            })
        }
    }

    /// Same edges with the weight map removed.
    pub fn unweighted(&self) -> Digraph {
        Digraph::new(self.n, self.edges.iter().copied()).expect("edges already validated")
    }

    /// Whether the graph has no directed cycle (self-loops count as cycles).
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// A topological order of the vertices, or `None` when a cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.n];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// Breadth-first distances from `s` (`None` for unreachable vertices).
    pub fn bfs_distances(&self, s: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(s)?;
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices have a distance");
            for &v in &self.out[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }
}

/// A digraph whose edges all go from layer `i` to layer `i + 1`.
///
/// Layers are numbered `1..=layer_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredDag {
    base: Digraph,
    layer: Vec<usize>,
    layer_count: usize,
}

impl LayeredDag {
    /// Validates the layer assignment against the edges of `base`.
    pub fn new(base: Digraph, layer: Vec<usize>, layer_count: usize) -> Result<Self> {
        if layer.len() != base.vertex_count() {
            return Err(Error::invariant(format!(
                "layer map has {} entries for {} vertices",
                layer.len(),
                base.vertex_count()
            )));
        }
        if let Some((v, &l)) = layer
            .iter()
            .enumerate()
            .find(|(_, &l)| l == 0 || l > layer_count)
        {
            return Err(Error::invariant(format!(
                "vertex {v} has layer {l} outside 1..={layer_count}"
            )));
        }
        for &(u, v) in base.edges() {
            if layer[v] != layer[u] + 1 {
                return Err(Error::invariant(format!(
                    "edge ({u}, {v}) goes from layer {} to layer {}",
                    layer[u], layer[v]
                )));
            }
        }
        Ok(LayeredDag {
            base,
            layer,
            layer_count,
        })
    }

    /// Builds a grid-shaped layered DAG with `widths[i]` vertices in layer `i + 1`.
    ///
    /// Vertices are numbered layer by layer. `edges` use these global indices.
    pub fn from_layers(widths: &[usize], edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n: usize = widths.iter().sum();
        let layer: Vec<usize> = widths
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| std::iter::repeat_n(i + 1, w))
            .collect();
        LayeredDag::new(Digraph::new(n, edges)?, layer, widths.len())
    }

    /// The underlying digraph.
    pub fn graph(&self) -> &Digraph {
        &self.base
    }

    /// Layer of vertex `v` (1-based).
    pub fn layer_of(&self, v: usize) -> usize {
        self.layer[v]
    }

    /// The layer map.
    pub fn layers(&self) -> &[usize] {
        &self.layer
    }

    /// Number of layers.
    pub fn layer_count(&self) -> usize {
        self.layer_count
    }

    /// Vertices of layer `l` in increasing order.
    pub fn layer_vertices(&self, l: usize) -> Vec<usize> {
        (0..self.base.vertex_count())
            .filter(|&v| self.layer[v] == l)
            .collect()
    }

    /// Vertices sorted by layer; a topological order.
    pub fn layer_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.base.vertex_count()).collect();
        order.sort_by_key(|&v| (self.layer[v], v));
        order
    }

    /// Number of `s -> t` paths by layer-ordered dynamic programming.
    pub fn path_count(&self, s: usize, t: usize) -> Result<BigUint> {
        self.base.check_vertex(s)?;
        self.base.check_vertex(t)?;
        let mut count = vec![BigUint::zero(); self.base.vertex_count()];
        count[s] = BigUint::one();
        for u in self.layer_order() {
            if count[u].is_zero() || self.layer[u] >= self.layer[t] {
                continue;
            }
            let c = count[u].clone();
            for &v in self.base.successors(u) {
                count[v] += &c;
            }
        }
        Ok(std::mem::take(&mut count[t]))
    }

    /// Sum over `s -> t` paths of the product of edge weights.
    pub fn weighted_path_sum(&self, s: usize, t: usize) -> Result<BigInt> {
        self.base.check_vertex(s)?;
        self.base.check_vertex(t)?;
        let mut acc = vec![BigInt::zero(); self.base.vertex_count()];
        acc[s] = BigInt::one();
        for u in self.layer_order() {
            if acc[u].is_zero() || self.layer[u] >= self.layer[t] {
                continue;
            }
            let a = acc[u].clone();
            for &v in self.base.successors(u) {
                let w = self.base.weight(u, v).expect("successor edge exists");
                acc[v] += &a * w;
            }
        }
        Ok(std::mem::take(&mut acc[t]))
    }
}

/// Whether a directed path (possibly empty) leads from `s` to `t`.
pub fn reachable(g: &Digraph, s: usize, t: usize) -> Result<bool> {
    g.check_vertex(t)?;
    Ok(g.bfs_distances(s)?[t].is_some())
}

/// Graph shapes that support exact `s -> t` path counting.
pub trait CountPaths {
    /// Number of directed `s -> t` paths.
    fn count_st_paths(&self, s: usize, t: usize) -> Result<BigUint>;
}

impl CountPaths for LayeredDag {
    fn count_st_paths(&self, s: usize, t: usize) -> Result<BigUint> {
        self.path_count(s, t)
    }
}

impl CountPaths for Digraph {
    fn count_st_paths(&self, s: usize, t: usize) -> Result<BigUint> {
        count_simple_paths(self, s, t, DEFAULT_PATH_BUDGET)
    }
}

/// Number of directed `s -> t` paths in a digraph or layered DAG.
///
/// On a general digraph this counts simple paths by backtracking, which is
/// exponential; see [`count_simple_paths`] for an explicit budget.
pub fn count_st_paths<G: CountPaths + ?Sized>(g: &G, s: usize, t: usize) -> Result<BigUint> {
    g.count_st_paths(s, t)
}

/// Counts simple `s -> t` paths by backtracking, visiting at most `budget` nodes.
pub fn count_simple_paths(g: &Digraph, s: usize, t: usize, budget: u64) -> Result<BigUint> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Ok(BigUint::one());
    }
    let mut on_path = vec![false; g.vertex_count()];
    let mut visited = 0u64;
    let mut total = BigUint::zero();
    // Explicit stack of (vertex, next successor position).
    let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
    on_path[s] = true;
    while let Some(top) = stack.last_mut() {
        let (u, pos) = *top;
        let succ = g.successors(u);
        if pos == succ.len() {
            on_path[u] = false;
            stack.pop();
            continue;
        }
        top.1 += 1;
        let v = succ[pos];
        if on_path[v] {
            continue;
        }
        visited += 1;
        if visited > budget {
            return Err(Error::budget(format!(
                "simple-path enumeration exceeded {budget} nodes"
            )));
        }
        if v == t {
            total += 1u32;
        } else {
            on_path[v] = true;
            stack.push((v, 0));
        }
    }
    Ok(total)
}

/// Number of directed walks with exactly `len` edges from `s` to `t`.
pub fn walk_count(g: &Digraph, s: usize, t: usize, len: usize) -> Result<BigUint> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let mut cur = vec![BigUint::zero(); g.vertex_count()];
    cur[s] = BigUint::one();
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); g.vertex_count()];
        for (u, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &v in g.successors(u) {
                next[v] += c;
            }
        }
        cur = next;
    }
    Ok(std::mem::take(&mut cur[t]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Digraph {
        Digraph::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn rejects_duplicate_and_out_of_range_edges() {
        assert_eq!(
            Digraph::new(2, [(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Digraph::new(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, count: 2 })
        ));
    }

    #[test]
    fn reachability_basics() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        assert!(reachable(&g, 0, 1).unwrap());
        assert!(!reachable(&g, 1, 0).unwrap());
        assert!(reachable(&g, 1, 1).unwrap());
        let empty = Digraph::new(2, []).unwrap();
        assert!(!reachable(&empty, 0, 1).unwrap());
        assert!(reachable(&g, 0, 5).is_err());
    }

    #[test]
    fn diamond_has_two_paths() {
        assert_eq!(count_st_paths(&diamond(), 0, 3).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn ladder_product_rule() {
        // Layers: {0}, {1,2}, {3,4}, {5}; complete between consecutive layers.
        let edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        let d = LayeredDag::from_layers(&[1, 2, 2, 1], edges).unwrap();
        assert_eq!(d.path_count(0, 5).unwrap(), BigUint::from(4u32));
        assert_eq!(count_st_paths(d.graph(), 0, 5).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn layered_dag_rejects_skipping_edges() {
        let err = LayeredDag::from_layers(&[1, 1, 1], [(0, 2)]).unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
    }

    #[test]
    fn walk_count_trivia() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(walk_count(&g, 0, 0, 0).unwrap(), BigUint::one());
        assert_eq!(walk_count(&g, 0, 1, 0).unwrap(), BigUint::zero());
        assert_eq!(walk_count(&g, 0, 1, 1).unwrap(), BigUint::one());
        let cyc = Digraph::new(2, [(0, 1), (1, 0), (1, 1)]).unwrap();
        // 0->1->1->1, 0->1->0->1
        assert_eq!(walk_count(&cyc, 0, 1, 3).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn simple_path_budget_is_enforced() {
        let n = 9;
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let g = Digraph::new(n, edges).unwrap();
        assert!(matches!(
            count_simple_paths(&g, 0, 8, 100),
            Err(Error::BudgetExceeded(_))
        ));
        // Complete digraph on 9 vertices: sum_{k=0}^{7} 7!/(7-k)! simple paths.
        let expect: u64 = (0..=7u64)
            .map(|k| ((8 - k)..=7).product::<u64>())
            .sum();
        assert_eq!(
            count_simple_paths(&g, 0, 8, DEFAULT_PATH_BUDGET).unwrap(),
            BigUint::from(expect)
        );
    }

    #[test]
    fn weighted_sum_multiplies_along_paths() {
        let g = Digraph::with_weights(4, [(0, 1, 2), (0, 2, 3), (1, 3, 5), (2, 3, -1)]).unwrap();
        let d = LayeredDag::new(g, vec![1, 2, 2, 3], 3).unwrap();
        assert_eq!(d.weighted_path_sum(0, 3).unwrap(), BigInt::from(7));
    }

    #[test]
    fn weight_map_must_be_total() {
        let g = Digraph::with_weights(2, [(0, 1, 4)]).unwrap();
        assert_eq!(g.weight(0, 1), Some(BigInt::from(4)));
        assert_eq!(g.weight(1, 0), None);
        assert!(!g.unweighted().is_weighted());
    }
}
