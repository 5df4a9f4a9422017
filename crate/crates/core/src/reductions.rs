//! Many-one reductions among reachability and 2-CNF satisfiability.

use std::collections::BTreeSet;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::graphs::{reachable, Digraph, LayeredDag};
use crate::{Error, Result};

/// A literal: a variable index with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    /// Positive literal of `var`.
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            negated: false,
        }
    }

    /// Negative literal of `var`.
    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }

    /// The complementary literal.
    pub fn negate(self) -> Self {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Parses a DIMACS literal (`k` or `-k`, 1-based).
    pub fn from_dimacs(x: i64) -> Result<Self> {
        if x == 0 {
            return Err(Error::arg("literal 0 is a clause terminator"));
        }
        let var = usize::try_from(x.unsigned_abs() - 1).map_err(|_| Error::arg("literal too large"))?;
        Ok(Lit { var, negated: x < 0 })
    }

    /// DIMACS form of the literal.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    /// Vertex of this literal in the implication graph.
    pub fn vertex(self) -> usize {
        2 * self.var + usize::from(self.negated)
    }

    /// Value of the literal under `assignment`.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A formula in conjunctive normal form with two literals per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCnf {
    variable_count: usize,
    clauses: Vec<(Lit, Lit)>,
}

impl TwoCnf {
    /// Validates variable indices.
    pub fn new(variable_count: usize, clauses: Vec<(Lit, Lit)>) -> Result<Self> {
        for &(a, b) in &clauses {
            for l in [a, b] {
                if l.var >= variable_count {
                    return Err(Error::invariant(format!(
                        "variable {} out of range for {variable_count} variables",
                        l.var
                    )));
                }
            }
        }
        Ok(TwoCnf {
            variable_count,
            clauses,
        })
    }

    /// Number of variables.
    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    /// The clauses in order.
    pub fn clauses(&self) -> &[(Lit, Lit)] {
        &self.clauses
    }

    /// Whether `assignment` satisfies every clause.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variable_count
            && self.clauses.iter().all(|&(a, b)| a.eval(assignment) || b.eval(assignment))
    }

    /// DIMACS text (`p cnf` header, one clause per line).
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for &(a, b) in &self.clauses {
            out.push_str(&format!("{} {} 0\n", a.to_dimacs(), b.to_dimacs()));
        }
        out
    }
}

impl fmt::Display for TwoCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.clauses.iter().map(|(a, b)| format!("({a} ∨ {b})")).collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

/// Unrolls `g` into `n` layers of `n` vertices after adding the loop `(t, t)`.
///
/// Vertex `(i, j)` gets index `i * n + j` and lies in layer `i + 1`. The
/// returned source is `(0, s)` and the target `(n - 1, t)`. Paths from source
/// to target correspond to walks of length `n - 1` from `s` to `t`, so
/// reachability is preserved.
pub fn unroll_to_sldag(g: &Digraph, s: usize, t: usize) -> Result<(LayeredDag, usize, usize)> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::arg("unrolling needs at least two vertices"));
    }
    let mut base: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
    base.insert((t, t));
    let edges = (0..n - 1).flat_map(|i| base.iter().map(move |&(a, b)| (i * n + a, (i + 1) * n + b)));
    let widths = vec![n; n];
    let d = LayeredDag::from_layers(&widths, edges)?;
    Ok((d, s, (n - 1) * n + t))
}

/// Implication graph of `phi`: literal `l` is vertex [`Lit::vertex`]; clause
/// `(a ∨ b)` contributes `¬a -> b` and `¬b -> a`.
pub fn implication_graph(phi: &TwoCnf) -> Digraph {
    let edges: BTreeSet<(usize, usize)> = phi
        .clauses
        .iter()
        .flat_map(|&(a, b)| [(a.negate().vertex(), b.vertex()), (b.negate().vertex(), a.vertex())])
        .collect();
    Digraph::new(2 * phi.variable_count, edges).expect("literal vertices are in range and deduplicated")
}

/// Outcome of the 2-CNF satisfiability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSatResult {
    pub satisfiable: bool,
    /// A verified satisfying assignment when satisfiable.
    pub assignment: Option<Vec<bool>>,
}

/// Decides satisfiability by the path criterion: unsatisfiable iff some
/// variable `x` has paths `x ⤳ ¬x` and `¬x ⤳ x` in the implication graph.
/// When satisfiable, an assignment is read off the strongly connected
/// components and verified.
pub fn twosat_satisfiable(phi: &TwoCnf) -> Result<TwoSatResult> {
    let g = implication_graph(phi);
    for x in 0..phi.variable_count {
        let (p, n) = (Lit::pos(x).vertex(), Lit::neg(x).vertex());
        if reachable(&g, p, n)? && reachable(&g, n, p)? {
            return Ok(TwoSatResult {
                satisfiable: false,
                assignment: None,
            });
        }
    }
    let assignment = scc_assignment(phi, &g);
    if !phi.eval(&assignment) {
        return Err(Error::internal("component assignment failed verification"));
    }
    Ok(TwoSatResult {
        satisfiable: true,
        assignment: Some(assignment),
    })
}

/// Sets `x` true iff the component of `x` comes after that of `¬x` in
/// topological order. Tarjan's algorithm emits components in reverse
/// topological order.
fn scc_assignment(phi: &TwoCnf, g: &Digraph) -> Vec<bool> {
    let mut pg = DiGraph::<(), ()>::with_capacity(g.vertex_count(), g.edge_count());
    let nodes: Vec<_> = (0..g.vertex_count()).map(|_| pg.add_node(())).collect();
    for &(u, v) in g.edges() {
        pg.add_edge(nodes[u], nodes[v], ());
    }
    let mut comp = vec![0usize; g.vertex_count()];
    for (i, scc) in tarjan_scc(&pg).into_iter().enumerate() {
        for node in scc {
            comp[node.index()] = i;
        }
    }
    (0..phi.variable_count)
        .map(|x| comp[Lit::pos(x).vertex()] < comp[Lit::neg(x).vertex()])
        .collect()
}

/// Literal assigned to each vertex by [`dstcon_to_unsat2cnf`]: `x` for `s`,
/// `¬x` for `t`, and fresh variables `1, 2, ...` for the other vertices in
/// increasing order. The auxiliary variable `y` is the last one.
pub fn dstcon_literals(n: usize, s: usize, t: usize) -> Vec<Lit> {
    let mut next = 1;
    (0..n)
        .map(|v| {
            if v == s {
                Lit::pos(0)
            } else if v == t {
                Lit::neg(0)
            } else {
                next += 1;
                Lit::pos(next - 1)
            }
        })
        .collect()
}

/// Reduces s-t reachability to 2-CNF unsatisfiability.
///
/// One clause `(¬u ∨ v)` per edge `(u, v)`, followed by `(x ∨ y) ∧ (x ∨ ¬y)`
/// forcing `x` true. `t` is reachable from `s` iff the formula is
/// unsatisfiable.
pub fn dstcon_to_unsat2cnf(g: &Digraph, s: usize, t: usize) -> Result<TwoCnf> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::arg("source and target must differ"));
    }
    if let Some(&(u, _)) = g.edges().iter().find(|&&(u, v)| u == v) {
        return Err(Error::invariant(format!("self-loop at vertex {u}")));
    }
    let n = g.vertex_count();
    let lit = dstcon_literals(n, s, t);
    let y = n - 1;
    let mut clauses: Vec<(Lit, Lit)> = g.edges().iter().map(|&(u, v)| (lit[u].negate(), lit[v])).collect();
    clauses.push((Lit::pos(0), Lit::pos(y)));
    clauses.push((Lit::pos(0), Lit::neg(y)));
    TwoCnf::new(n, clauses)
}

/// Partition of the vertices used to satisfy the formula of an unreachable
/// instance: `a` is reachable from `s`, `b` reaches `t`, `c` is the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

/// The A/B/C partition, or `None` when `t` is reachable (then A and B meet).
pub fn abc_partition(g: &Digraph, s: usize, t: usize) -> Result<Option<Partition>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let n = g.vertex_count();
    let from_s = g.bfs_distances(s)?;
    let mut rev = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        rev[v].push(u);
    }
    let mut to_t = vec![false; n];
    to_t[t] = true;
    let mut stack = vec![t];
    while let Some(v) = stack.pop() {
        for &u in &rev[v] {
            if !to_t[u] {
                to_t[u] = true;
                stack.push(u);
            }
        }
    }
    let mut p = Partition {
        a: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
    };
    for v in 0..n {
        match (from_s[v].is_some(), to_t[v]) {
            (true, true) => return Ok(None),
            (true, false) => p.a.push(v),
            (false, true) => p.b.push(v),
            (false, false) => p.c.push(v),
        }
    }
    Ok(Some(p))
}

/// Satisfying assignment of `dstcon_to_unsat2cnf(g, s, t)` built from the
/// A/B/C partition: vertices in A or C are true, `y` is true. `None` when `t`
/// is reachable. The assignment is verified before it is returned.
pub fn dstcon_witness(g: &Digraph, s: usize, t: usize) -> Result<Option<Vec<bool>>> {
    let phi = dstcon_to_unsat2cnf(g, s, t)?;
    let Some(p) = abc_partition(g, s, t)? else {
        return Ok(None);
    };
    let lit = dstcon_literals(g.vertex_count(), s, t);
    let mut assignment = vec![false; phi.variable_count()];
    assignment[phi.variable_count() - 1] = true;
    for v in p.a.iter().chain(&p.c) {
        // Make the vertex literal true.
        assignment[lit[*v].var] = !lit[*v].negated;
    }
    for v in &p.b {
        assignment[lit[*v].var] = lit[*v].negated;
    }
    if !phi.eval(&assignment) {
        return Err(Error::internal("partition assignment failed verification"));
    }
    Ok(Some(assignment))
}
