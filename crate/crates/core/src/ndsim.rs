//! Exhaustive interpreter for nondeterministic choice programs.
//!
//! A [`GuessProgram`] is a deterministic step function over explicit states.
//! Each state either branches into finitely many successor states or halts
//! with accept/reject and an optional output. [`run_all_paths`] counts every
//! root-to-leaf computation path exactly. Equal states reached along different
//! paths are evaluated once and their statistics reused, so the cost is linear
//! in the number of distinct states rather than in the number of paths.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::graphs::{Digraph, LayeredDag};
use crate::isolation::{expand_weighted_edges, is_min_unique};
use crate::{Error, Result};

/// Result of one computation step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<S, O> {
    /// Nondeterministic choice among successor states (fan-out 1 is a
    /// deterministic move).
    Branch(Vec<S>),
    /// Leaf of the computation tree.
    Halt { accept: bool, output: Option<O> },
}

impl<S, O> Step<S, O> {
    /// Accepting leaf without output.
    pub fn accept() -> Self {
        Step::Halt {
            accept: true,
            output: None,
        }
    }

    /// Rejecting leaf without output.
    pub fn reject() -> Self {
        Step::Halt {
            accept: false,
            output: None,
        }
    }
}

/// A nondeterministic procedure over explicit choice points.
pub trait GuessProgram {
    /// Complete machine configuration; two equal states have equal subtrees.
    type State: Clone + Eq + Hash;
    /// Value a leaf may emit.
    type Output: Clone + Ord + Debug;

    /// Initial configuration.
    fn start(&self) -> Self::State;

    /// Successors of `state`, or the leaf outcome.
    fn step(&self, state: &Self::State) -> Step<Self::State, Self::Output>;
}

/// Limits for exhaustive exploration. Exceeding any limit is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of distinct states evaluated.
    pub max_states: usize,
    /// Maximum length of a single computation path.
    pub max_depth: usize,
    /// Maximum fan-out at one choice point.
    pub max_fanout: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 2_000_000,
            max_depth: 1_000_000,
            max_fanout: 1 << 16,
        }
    }
}

/// A leaf outcome: accept flag plus optional output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leaf<O> {
    pub accept: bool,
    pub output: Option<O>,
}

/// Exact statistics over all computation paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStats<O: Ord> {
    /// Number of accepting paths.
    pub acc: BigUint,
    /// Number of rejecting paths.
    pub rej: BigUint,
    /// Multiset of leaf outcomes with multiplicities.
    pub outputs: BTreeMap<Leaf<O>, BigUint>,
}

impl<O: Ord + Clone> PathStats<O> {
    fn empty() -> Self {
        PathStats {
            acc: BigUint::zero(),
            rej: BigUint::zero(),
            outputs: BTreeMap::new(),
        }
    }

    fn leaf(accept: bool, output: Option<O>) -> Self {
        let mut s = Self::empty();
        if accept {
            s.acc = BigUint::one();
        } else {
            s.rej = BigUint::one();
        }
        s.outputs.insert(Leaf { accept, output }, BigUint::one());
        s
    }

    fn absorb(&mut self, other: &Self) {
        self.acc += &other.acc;
        self.rej += &other.rej;
        for (k, v) in &other.outputs {
            *self.outputs.entry(k.clone()).or_insert_with(BigUint::zero) += v;
        }
    }

    /// `acc - rej`.
    pub fn gap(&self) -> BigInt {
        BigInt::from(self.acc.clone()) - BigInt::from(self.rej.clone())
    }

    /// Total number of leaves.
    pub fn total(&self) -> BigUint {
        &self.acc + &self.rej
    }

    /// Multiplicity of accepting leaves carrying `output`.
    pub fn accepted_with(&self, output: &O) -> BigUint {
        self.outputs
            .get(&Leaf {
                accept: true,
                output: Some(output.clone()),
            })
            .cloned()
            .unwrap_or_default()
    }
}

struct Frame<S, O: Ord> {
    state: S,
    children: Vec<S>,
    next: usize,
    stats: PathStats<O>,
}

/// Enumerates every computation path of `p` and returns exact statistics.
pub fn run_all_paths<P: GuessProgram>(p: &P, budget: Budget) -> Result<PathStats<P::Output>> {
    let mut memo: HashMap<P::State, PathStats<P::Output>> = HashMap::new();
    let mut on_stack: HashSet<P::State> = HashSet::new();
    let mut stack: Vec<Frame<P::State, P::Output>> = Vec::new();

    // Expands `state`: returns its stats at once for leaves, or pushes a frame.
    let expand = |state: P::State,
                  stack: &mut Vec<Frame<P::State, P::Output>>,
                  on_stack: &mut HashSet<P::State>|
     -> Result<Option<PathStats<P::Output>>> {
        match p.step(&state) {
            Step::Halt { accept, output } => Ok(Some(PathStats::leaf(accept, output))),
            Step::Branch(children) => {
                if children.len() > budget.max_fanout {
                    return Err(Error::budget(format!(
                        "fan-out {} exceeds {}",
                        children.len(),
                        budget.max_fanout
                    )));
                }
                if stack.len() >= budget.max_depth {
                    return Err(Error::budget(format!(
                        "computation path longer than {}",
                        budget.max_depth
                    )));
                }
                on_stack.insert(state.clone());
                stack.push(Frame {
                    state,
                    children,
                    next: 0,
                    stats: PathStats::empty(),
                });
                Ok(None)
            }
        }
    };

    if let Some(stats) = expand(p.start(), &mut stack, &mut on_stack)? {
        return Ok(stats);
    }
    loop {
        let top = stack.last_mut().expect("stack is non-empty inside the loop");
        if top.next < top.children.len() {
            let child = top.children[top.next].clone();
            top.next += 1;
            if let Some(stats) = memo.get(&child) {
                top.stats.absorb(stats);
                continue;
            }
            if on_stack.contains(&child) {
                return Err(Error::invariant(
                    "program revisits a state on one path and would not terminate",
                ));
            }
            if memo.len() + stack.len() >= budget.max_states {
                return Err(Error::budget(format!(
                    "more than {} distinct states",
                    budget.max_states
                )));
            }
            if let Some(stats) = expand(child.clone(), &mut stack, &mut on_stack)? {
                let top = stack.last_mut().expect("frame still present");
                top.stats.absorb(&stats);
                memo.insert(child, stats);
            }
            continue;
        }
        let done = stack.pop().expect("frame present");
        on_stack.remove(&done.state);
        match stack.last_mut() {
            Some(parent) => {
                parent.stats.absorb(&done.stats);
                match memo.entry(done.state) {
                    Entry::Vacant(v) => {
                        v.insert(done.stats);
                    }
                    Entry::Occupied(_) => unreachable!("a state is expanded at most once"),
                }
            }
            None => return Ok(done.stats),
        }
    }
}

/// Plain tree enumeration without state sharing; visits at most `max_leaves`
/// leaves. Used as an oracle for [`run_all_paths`].
pub fn run_tree<P: GuessProgram>(p: &P, max_leaves: u64) -> Result<PathStats<P::Output>> {
    let mut stats = PathStats::empty();
    let mut leaves = 0u64;
    let mut stack = vec![p.start()];
    while let Some(s) = stack.pop() {
        match p.step(&s) {
            Step::Halt { accept, output } => {
                leaves += 1;
                if leaves > max_leaves {
                    return Err(Error::budget(format!("more than {max_leaves} leaves")));
                }
                stats.absorb(&PathStats::leaf(accept, output));
            }
            Step::Branch(children) => stack.extend(children.into_iter().rev()),
        }
    }
    Ok(stats)
}

/// Whether some computation path accepts; stops at the first accepting leaf.
pub fn exists_accepting<P: GuessProgram>(p: &P, budget: Budget) -> Result<bool> {
    // States whose whole subtree is known to reject.
    let mut dead: HashSet<P::State> = HashSet::new();
    let mut on_stack: HashSet<P::State> = HashSet::new();
    let mut stack: Vec<(P::State, Vec<P::State>, usize)> = Vec::new();
    let start = p.start();
    match p.step(&start) {
        Step::Halt { accept, .. } => return Ok(accept),
        Step::Branch(ch) => {
            on_stack.insert(start.clone());
            stack.push((start, ch, 0));
        }
    }
    while let Some(top) = stack.last_mut() {
        if top.2 == top.1.len() {
            let (s, _, _) = stack.pop().expect("frame present");
            on_stack.remove(&s);
            dead.insert(s);
            continue;
        }
        let child = top.1[top.2].clone();
        top.2 += 1;
        if dead.contains(&child) {
            continue;
        }
        if on_stack.contains(&child) {
            return Err(Error::invariant(
                "program revisits a state on one path and would not terminate",
            ));
        }
        if dead.len() >= budget.max_states {
            return Err(Error::budget(format!(
                "more than {} distinct states",
                budget.max_states
            )));
        }
        match p.step(&child) {
            Step::Halt { accept: true, .. } => return Ok(true),
            Step::Halt { accept: false, .. } => {
                dead.insert(child);
            }
            Step::Branch(ch) => {
                if ch.len() > budget.max_fanout || stack.len() >= budget.max_depth {
                    return Err(Error::budget("fan-out or depth limit exceeded"));
                }
                on_stack.insert(child.clone());
                stack.push((child, ch, 0));
            }
        }
    }
    Ok(false)
}

/// Per-layer vertex lists of a layered DAG, indexed from 0 for layer 1.
fn layer_lists(d: &LayeredDag) -> Vec<Vec<usize>> {
    (1..=d.layer_count()).map(|l| d.layer_vertices(l)).collect()
}

// ---------------------------------------------------------------------------
// Inductive counting
// ---------------------------------------------------------------------------

/// The inductive-counting procedure on a layered DAG.
///
/// With a target `t` it decides non-reachability: some path accepts iff no
/// `s -> t` path exists. Without a target it only runs the counting rounds and
/// every surviving path accepts with the list of per-layer reachable counts.
#[derive(Debug, Clone)]
pub struct InductiveCounting<'a> {
    dag: &'a LayeredDag,
    layers: Vec<Vec<usize>>,
    s: usize,
    target: Option<usize>,
    alpha: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum IcMode {
    /// Counting round computing the reachable count of layer `i + 1`.
    Induct,
    /// Certifying that every reachable vertex of the target layer differs from t.
    Final,
}

/// Configuration of [`InductiveCounting`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IcState {
    mode: IcMode,
    /// Current round (1-based layer of the inner-loop vertices `u`).
    i: usize,
    /// Position of `v` in layer `i + 1`.
    v: usize,
    /// Position of `u` in layer `i` (or in the target layer when final).
    u: usize,
    /// Reachable count of the previous layer (the final layer when final).
    alpha: usize,
    /// Reachable vertices found so far in layer `i + 1`.
    beta: usize,
    /// Vertices of the inner loop verified as reachable.
    d: usize,
    /// Whether the current `v` has been shown reachable.
    b: bool,
    /// Guessed walk: (current vertex, steps taken).
    walk: Option<(usize, usize)>,
    /// Counts of completed rounds, starting with layer 1.
    history: Vec<usize>,
}

impl<'a> InductiveCounting<'a> {
    fn new(dag: &'a LayeredDag, s: usize, target: Option<usize>, alpha: Option<usize>) -> Result<Self> {
        dag.graph().check_vertex(s)?;
        if dag.layer_of(s) != 1 {
            return Err(Error::invariant("s must lie in layer 1"));
        }
        if let Some(t) = target {
            dag.graph().check_vertex(t)?;
        }
        Ok(InductiveCounting {
            dag,
            layers: layer_lists(dag),
            s,
            target,
            alpha,
        })
    }

    /// Layer holding the final certification (or the last layer without target).
    fn last_layer(&self) -> usize {
        match self.target {
            Some(t) => self.dag.layer_of(t),
            None => self.dag.layer_count(),
        }
    }

    fn layer(&self, l: usize) -> &[usize] {
        &self.layers[l - 1]
    }

    /// Advances past finished loops; `Err((accept, history))` means the path halts.
    fn settle(&self, mut st: IcState) -> std::result::Result<IcState, (bool, Vec<usize>)> {
        loop {
            match st.mode {
                IcMode::Induct => {
                    if st.i >= self.last_layer() {
                        if self.target.is_none() {
                            return Err((true, st.history));
                        }
                        st.mode = IcMode::Final;
                        st.u = 0;
                        st.d = 0;
                        continue;
                    }
                    if st.v == self.layer(st.i + 1).len() {
                        st.alpha = st.beta;
                        st.history.push(st.beta);
                        st.beta = 0;
                        st.i += 1;
                        st.v = 0;
                        st.u = 0;
                        st.d = 0;
                        st.b = false;
                        continue;
                    }
                    if st.u == self.layer(st.i).len() {
                        if st.d != st.alpha {
                            return Err((false, st.history));
                        }
                        if st.b {
                            st.beta += 1;
                        }
                        st.v += 1;
                        st.u = 0;
                        st.d = 0;
                        st.b = false;
                        continue;
                    }
                    return Ok(st);
                }
                IcMode::Final => {
                    if st.u == self.layer(st.i).len() {
                        return Err((st.d == st.alpha, st.history));
                    }
                    return Ok(st);
                }
            }
        }
    }
}

impl GuessProgram for InductiveCounting<'_> {
    type State = IcState;
    type Output = Vec<usize>;

    fn start(&self) -> IcState {
        let (mode, i, alpha) = match self.alpha {
            Some(a) => (IcMode::Final, self.last_layer(), a),
            None => (IcMode::Induct, 1, 1),
        };
        IcState {
            mode,
            i,
            v: 0,
            u: 0,
            alpha,
            beta: 0,
            d: 0,
            b: false,
            walk: None,
            history: vec![1],
        }
    }

    fn step(&self, state: &IcState) -> Step<IcState, Vec<usize>> {
        let st = match self.settle(state.clone()) {
            Ok(st) => st,
            Err((accept, history)) => {
                let output = (accept && self.target.is_none()).then_some(history);
                return Step::Halt { accept, output };
            }
        };
        let Some((cur, steps)) = st.walk else {
            // Either skip u or guess a walk from s to u.
            let mut skip = st.clone();
            skip.u += 1;
            let mut perform = st;
            perform.walk = Some((self.s, 0));
            return Step::Branch(vec![skip, perform]);
        };
        let target_len = st.i - 1;
        if steps < target_len {
            let succ = self.dag.graph().successors(cur);
            if succ.is_empty() {
                return Step::reject();
            }
            return Step::Branch(
                succ.iter()
                    .map(|&w| {
                        let mut next = st.clone();
                        next.walk = Some((w, steps + 1));
                        next
                    })
                    .collect(),
            );
        }
        let u_vertex = self.layer(st.i)[st.u];
        if cur != u_vertex {
            return Step::reject();
        }
        let mut next = st;
        next.walk = None;
        match next.mode {
            IcMode::Induct => {
                let v_vertex = self.layer(next.i + 1)[next.v];
                next.d += 1;
                if self.dag.graph().has_edge(u_vertex, v_vertex) {
                    next.b = true;
                }
            }
            IcMode::Final => {
                if Some(u_vertex) == self.target {
                    return Step::reject();
                }
                next.d += 1;
            }
        }
        next.u += 1;
        Step::Branch(vec![next])
    }
}

/// Nondeterministic non-reachability program for a layered DAG.
///
/// `alpha`, when supplied, is the number of vertices in the layer of `t` that
/// are reachable from `s`; otherwise the program computes it by inductive
/// counting. Some path accepts iff `t` is unreachable from `s` (given a
/// correct `alpha`).
pub fn nonreach_nd<'a>(
    d: &'a LayeredDag,
    s: usize,
    t: usize,
    alpha: Option<usize>,
) -> Result<InductiveCounting<'a>> {
    InductiveCounting::new(d, s, Some(t), alpha)
}

/// Per-layer reachable counts computed by running inductive counting under the
/// interpreter: entry `i` is the number of layer-`(i+1)` vertices reachable
/// from `s`.
pub fn inductive_layer_counts(d: &LayeredDag, s: usize, budget: Budget) -> Result<Vec<usize>> {
    let prog = InductiveCounting::new(d, s, None, None)?;
    let stats = run_all_paths(&prog, budget)?;
    let mut accepted = stats
        .outputs
        .iter()
        .filter(|(leaf, _)| leaf.accept)
        .map(|(leaf, _)| leaf.output.clone().expect("accepting leaves carry counts"));
    let first = accepted
        .next()
        .ok_or_else(|| Error::internal("inductive counting produced no accepting path"))?;
    if accepted.next().is_some() {
        return Err(Error::internal("accepting paths disagree on the layer counts"));
    }
    Ok(first)
}

// ---------------------------------------------------------------------------
// Unambiguous shortest-path predicate
// ---------------------------------------------------------------------------

/// Value reported on a non-"?" path of the shortest-path predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UlAnswer {
    False,
    True,
}

/// Nondeterministic evaluation of `d(v) <= k` in an unweighted min-unique graph,
/// given `c_k` (vertices within distance k) and `sigma_k` (sum of their
/// distances).
///
/// Paths answering True/False accept with that output; "?" paths reject.
#[derive(Debug, Clone)]
pub struct UlPredicate<'a> {
    g: &'a Digraph,
    s: usize,
    v: usize,
    k: usize,
    c_k: usize,
    sigma_k: usize,
}

/// Configuration of [`UlPredicate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UlState {
    x: usize,
    count: usize,
    sum: usize,
    path_to_v: bool,
    /// Guessed walk: (target length l, steps taken, current vertex).
    walk: Option<(usize, usize, usize)>,
}

impl GuessProgram for UlPredicate<'_> {
    type State = UlState;
    type Output = UlAnswer;

    fn start(&self) -> UlState {
        UlState {
            x: 0,
            count: 0,
            sum: 0,
            path_to_v: false,
            walk: None,
        }
    }

    fn step(&self, st: &UlState) -> Step<UlState, UlAnswer> {
        let n = self.g.vertex_count();
        match st.walk {
            None if st.x == n => {
                if st.count == self.c_k && st.sum == self.sigma_k {
                    Step::Halt {
                        accept: true,
                        output: Some(if st.path_to_v {
                            UlAnswer::True
                        } else {
                            UlAnswer::False
                        }),
                    }
                } else {
                    Step::reject()
                }
            }
            None => {
                // Guess "no", or guess "yes" together with a length l <= k.
                // Branches that can no longer meet c_k and Σ_k are cut early;
                // they would only end in "?".
                let mut children = Vec::with_capacity(self.k + 2);
                if st.count + (n - st.x - 1) >= self.c_k {
                    let mut no = st.clone();
                    no.x += 1;
                    children.push(no);
                }
                if st.count < self.c_k {
                    for l in (0..=self.k).take_while(|l| st.sum + l <= self.sigma_k) {
                        let mut yes = st.clone();
                        yes.walk = Some((l, 0, self.s));
                        children.push(yes);
                    }
                }
                if children.is_empty() {
                    return Step::reject();
                }
                Step::Branch(children)
            }
            Some((l, steps, cur)) if steps == l => {
                if cur != st.x {
                    return Step::reject();
                }
                let mut next = st.clone();
                next.walk = None;
                next.count += 1;
                next.sum += l;
                next.path_to_v |= st.x == self.v;
                next.x += 1;
                Step::Branch(vec![next])
            }
            Some((l, steps, cur)) => {
                let succ = self.g.successors(cur);
                if succ.is_empty() {
                    return Step::reject();
                }
                Step::Branch(
                    succ.iter()
                        .map(|&w| {
                            let mut next = st.clone();
                            next.walk = Some((l, steps + 1, w));
                            next
                        })
                        .collect(),
                )
            }
        }
    }
}

/// Builds the shortest-path predicate program for `d(v) <= k`.
pub fn ul_predicate<'a>(
    g: &'a Digraph,
    s: usize,
    v: usize,
    k: usize,
    c_k: usize,
    sigma_k: usize,
) -> Result<UlPredicate<'a>> {
    g.check_vertex(s)?;
    g.check_vertex(v)?;
    Ok(UlPredicate {
        g,
        s,
        v,
        k,
        c_k,
        sigma_k,
    })
}

/// Outcome of one predicate evaluation under the interpreter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateRun {
    /// The answer carried by the non-"?" paths, if they agree.
    pub answer: Option<UlAnswer>,
    /// Number of non-"?" paths.
    pub decided_paths: BigUint,
}

/// Runs a predicate program exhaustively.
pub fn evaluate_predicate(p: &UlPredicate<'_>, budget: Budget) -> Result<PredicateRun> {
    let stats = run_all_paths(p, budget)?;
    let t = stats.accepted_with(&UlAnswer::True);
    let f = stats.accepted_with(&UlAnswer::False);
    let answer = match (t.is_zero(), f.is_zero()) {
        (false, true) => Some(UlAnswer::True),
        (true, false) => Some(UlAnswer::False),
        _ => None,
    };
    Ok(PredicateRun {
        answer,
        decided_paths: stats.acc,
    })
}

/// Report of the unambiguous reachability procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlReport {
    /// Whether `t` is reachable from `s`.
    pub reachable: bool,
    /// Number of predicate evaluations performed.
    pub predicate_calls: usize,
    /// Whether every evaluation had exactly one non-"?" path.
    pub unambiguous: bool,
    /// Vertex count of the edge-subdivided graph.
    pub expanded_vertices: usize,
}

/// Reachability in a graph with positive weights that is min-unique with
/// respect to `s`, decided by the unambiguous counting procedure on the
/// edge-subdivided graph.
pub fn ul_reach(g: &Digraph, s: usize, t: usize, budget: Budget) -> Result<UlReport> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if !is_min_unique(g, Some(s))? {
        return Err(Error::invariant("weighting is not min-unique with respect to s"));
    }
    let h = expand_weighted_edges(g)?;
    let n = h.vertex_count();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in h.edges() {
        preds[v].push(u);
    }
    let mut calls = 0usize;
    let mut unambiguous = true;
    let mut eval = |v: usize, k: usize, c: usize, sigma: usize| -> Result<bool> {
        let run = evaluate_predicate(&ul_predicate(&h, s, v, k, c, sigma)?, budget)?;
        calls += 1;
        if run.decided_paths != BigUint::one() {
            unambiguous = false;
        }
        run.answer
            .map(|a| a == UlAnswer::True)
            .ok_or_else(|| Error::internal("predicate produced no consistent answer"))
    };
    let (mut c, mut sigma) = (1usize, 0usize);
    for k in 1..=n {
        let (mut c_next, mut sigma_next) = (c, sigma);
        for v in 0..n {
            if eval(v, k - 1, c, sigma)? {
                continue;
            }
            for &x in &preds[v] {
                if eval(x, k - 1, c, sigma)? {
                    c_next += 1;
                    sigma_next += k;
                    break;
                }
            }
        }
        c = c_next;
        sigma = sigma_next;
    }
    let reachable = eval(t, n, c, sigma)?;
    Ok(UlReport {
        reachable,
        predicate_calls: calls,
        unambiguous,
        expanded_vertices: n,
    })
}

// ---------------------------------------------------------------------------
// Choosing k distinct paths
// ---------------------------------------------------------------------------

/// Program whose accepting paths correspond to k-element sets of `s -> t`
/// paths in a layered DAG, so that `acc = C(f, k)`.
///
/// Cursors `0..k` walk one layer at a time, in order. Cursor `j` must stay
/// lexicographically at or above cursor `j - 1` while their paths coincide and
/// must end strictly above it. Moves only go to vertices from which `t` is
/// reachable (a deterministic subcall).
#[derive(Debug, Clone)]
pub struct SharpLcfl<'a> {
    dag: &'a LayeredDag,
    s: usize,
    t: usize,
    k: usize,
    reaches_t: Vec<bool>,
}

/// Configuration of [`SharpLcfl`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LcflState {
    /// Number of moves already made by cursor 0.
    round: usize,
    /// Cursor to move next within the round.
    cursor: usize,
    pos: Vec<usize>,
    /// `tied[j]`: paths of cursors `j - 1` and `j` coincide so far.
    tied: Vec<bool>,
}

impl GuessProgram for SharpLcfl<'_> {
    type State = LcflState;
    type Output = ();

    fn start(&self) -> LcflState {
        LcflState {
            round: 0,
            cursor: 0,
            pos: vec![self.s; self.k],
            tied: vec![true; self.k],
        }
    }

    fn step(&self, st: &LcflState) -> Step<LcflState, ()> {
        let rounds = self.dag.layer_of(self.t) - 1;
        if st.round == rounds {
            let ok = st.pos.iter().all(|&p| p == self.t) && st.tied.iter().skip(1).all(|&x| !x);
            return Step::Halt {
                accept: ok,
                output: None,
            };
        }
        let j = st.cursor;
        let here = st.pos[j];
        let floor = (j > 0 && st.tied[j]).then(|| st.pos[j - 1]);
        let choices: Vec<usize> = self
            .dag
            .graph()
            .successors(here)
            .iter()
            .copied()
            .filter(|&w| self.reaches_t[w])
            .filter(|&w| floor.is_none_or(|f| w >= f))
            .collect();
        if choices.is_empty() {
            return Step::reject();
        }
        Step::Branch(
            choices
                .into_iter()
                .map(|w| {
                    let mut next = st.clone();
                    next.pos[j] = w;
                    if let Some(f) = floor {
                        next.tied[j] = w == f;
                    }
                    if j + 1 == self.k {
                        next.cursor = 0;
                        next.round += 1;
                    } else {
                        next.cursor += 1;
                    }
                    next
                })
                .collect(),
        )
    }
}

/// Builds the k-path chooser. Requires `s` in layer 1, `t` in the last layer
/// and `k >= 1`.
pub fn sharplcfl(d: &LayeredDag, s: usize, t: usize, k: usize) -> Result<SharpLcfl<'_>> {
    let g = d.graph();
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if k == 0 {
        return Err(Error::arg("k must be positive"));
    }
    if d.layer_of(s) != 1 {
        return Err(Error::invariant("s must lie in the first layer"));
    }
    if d.layer_of(t) != d.layer_count() {
        return Err(Error::invariant("t must lie in the last layer"));
    }
    let reaches_t = (0..g.vertex_count())
        .map(|v| crate::graphs::reachable(g, v, t))
        .collect::<Result<Vec<bool>>>()?;
    Ok(SharpLcfl {
        dag: d,
        s,
        t,
        k,
        reaches_t,
    })
}
