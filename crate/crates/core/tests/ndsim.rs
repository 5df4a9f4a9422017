mod common;

use common::{all_layered, brute_paths, brute_reach, choose, random_layered, random_weighted_dag, random_widths, reachable_per_layer, rng};
use logcount::graphs::{Digraph, LayeredDag};
use logcount::isolation::{expand_weighted_edges, is_min_unique};
use logcount::ndsim::{
    evaluate_predicate, exists_accepting, inductive_layer_counts, nonreach_nd, run_all_paths, run_tree, sharplcfl,
    ul_predicate, ul_reach, Budget, GuessProgram, Step, UlAnswer,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

/// A program over an explicit acyclic choice graph; children have larger ids.
#[derive(Debug, Clone)]
struct Explicit(Vec<Option<Vec<usize>>>, Vec<bool>);

impl GuessProgram for Explicit {
    type State = usize;
    type Output = ();
    fn start(&self) -> usize {
        0
    }
    fn step(&self, &s: &usize) -> Step<usize, ()> {
        match &self.0[s] {
            Some(ch) => Step::Branch(ch.clone()),
            None if self.1[s] => Step::accept(),
            None => Step::reject(),
        }
    }
}

fn random_program(r: &mut impl Rng, size: usize) -> Explicit {
    let mut nodes = Vec::with_capacity(size);
    let mut accept = Vec::with_capacity(size);
    for i in 0..size {
        let leaf = i + 1 == size || r.gen_bool(0.3);
        if leaf {
            nodes.push(None);
        } else {
            let k = r.gen_range(1..=3);
            nodes.push(Some((0..k).map(|_| r.gen_range(i + 1..size)).collect()));
        }
        accept.push(r.gen_bool(0.4));
    }
    Explicit(nodes, accept)
}

#[test]
fn random_programs_agree_with_tree_expansion() {
    let mut r = rng(20);
    for _ in 0..300 {
        let size = r.gen_range(1..12);
        let p = random_program(&mut r, size);
        let fast = run_all_paths(&p, Budget::default()).unwrap();
        let slow = run_tree(&p, 1 << 20).unwrap();
        assert_eq!((&fast.acc, &fast.rej), (&slow.acc, &slow.rej));
        assert_eq!(fast.gap(), BigInt::from(fast.acc.clone()) - BigInt::from(fast.rej.clone()));
        assert_eq!(exists_accepting(&p, Budget::default()).unwrap(), !fast.acc.is_zero());
    }
}

#[test]
fn trivial_programs() {
    let single = Explicit(vec![None], vec![true]);
    let s = run_all_paths(&single, Budget::default()).unwrap();
    assert_eq!((s.acc, s.rej), (BigUint::one(), BigUint::zero()));
    let fork = Explicit(vec![Some(vec![1, 2]), None, None], vec![false, true, false]);
    let s = run_all_paths(&fork, Budget::default()).unwrap();
    assert_eq!((s.acc.clone(), s.rej.clone(), s.gap()), (BigUint::one(), BigUint::one(), BigInt::zero()));
    // Full binary tree of depth 3 whose leaves all accept.
    let mut nodes: Vec<Option<Vec<usize>>> = (0..7).map(|i| Some(vec![2 * i + 1, 2 * i + 2])).collect();
    nodes.extend((0..8).map(|_| None));
    let tree = Explicit(nodes, vec![true; 15]);
    assert_eq!(run_all_paths(&tree, Budget::default()).unwrap().acc, BigUint::from(8u32));
    let rejecting = Explicit(vec![Some(vec![1, 2]), None, None], vec![false; 3]);
    assert!(!exists_accepting(&rejecting, Budget::default()).unwrap());
    // One accepting leaf at the end of a 20-step spine; every spine node also
    // branches to a rejecting leaf.
    let spine = 20;
    let mut nodes: Vec<Option<Vec<usize>>> = (0..spine).map(|i| Some(vec![i + 1, spine + 1 + i])).collect();
    nodes.extend((0..=spine).map(|_| None));
    let mut accept = vec![false; 2 * spine + 1];
    accept[spine] = true;
    let chain = Explicit(nodes, accept);
    assert!(exists_accepting(&chain, Budget::default()).unwrap());
    let s = run_all_paths(&chain, Budget::default()).unwrap();
    assert_eq!((s.acc, s.rej), (BigUint::one(), BigUint::from(20u32)));
}

#[test]
fn nonreach_exhaustive_on_two_layer_dags() {
    for widths in [[1, 1], [1, 2], [2, 1], [2, 2]] {
        for d in all_layered(&widths) {
            let n = d.graph().vertex_count();
            for s in 0..widths[0] {
                for t in 0..n {
                    let acc = run_all_paths(&nonreach_nd(&d, s, t, None).unwrap(), Budget::default()).unwrap().acc;
                    assert_eq!(!acc.is_zero(), !brute_reach(d.graph(), s, t), "s={s} t={t}");
                }
            }
        }
    }
}

#[test]
fn nonreach_and_layer_counts_on_random_sldags() {
    let mut r = rng(21);
    for _ in 0..60 {
        let layers = r.gen_range(1..=4);
        let widths = random_widths(&mut r, layers, 3);
        let d = random_layered(&mut r, &widths, 0.4);
        let n = d.graph().vertex_count();
        let s = r.gen_range(0..widths[0]);
        let t = r.gen_range(0..n);
        let reach = brute_reach(d.graph(), s, t);
        let acc = run_all_paths(&nonreach_nd(&d, s, t, None).unwrap(), Budget::default()).unwrap().acc;
        assert_eq!(!acc.is_zero(), !reach);
        let levels = reachable_per_layer(&d, s);
        assert_eq!(inductive_layer_counts(&d, s, Budget::default()).unwrap(), levels);
        // Supplying the true count of the target layer gives the same verdict.
        let alpha = levels[d.layer_of(t) - 1];
        let acc = run_all_paths(&nonreach_nd(&d, s, t, Some(alpha)).unwrap(), Budget::default()).unwrap().acc;
        assert_eq!(!acc.is_zero(), !reach);
    }
}

#[test]
fn layer_count_examples() {
    let d = LayeredDag::from_layers(&[1, 2, 2], []).unwrap();
    assert_eq!(inductive_layer_counts(&d, 0, Budget::default()).unwrap(), vec![1, 0, 0]);
    let one = LayeredDag::from_layers(&[1, 1], [(0, 1)]).unwrap();
    assert!(run_all_paths(&nonreach_nd(&one, 0, 1, None).unwrap(), Budget::default()).unwrap().acc.is_zero());
    let apart = LayeredDag::from_layers(&[1, 1], []).unwrap();
    assert!(!run_all_paths(&nonreach_nd(&apart, 0, 1, None).unwrap(), Budget::default()).unwrap().acc.is_zero());
}

#[test]
fn predicate_examples() {
    let g = Digraph::new(1, []).unwrap();
    let run = evaluate_predicate(&ul_predicate(&g, 0, 0, 0, 1, 0).unwrap(), Budget::default()).unwrap();
    assert_eq!((run.answer, run.decided_paths), (Some(UlAnswer::True), BigUint::one()));
    let path = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let run = evaluate_predicate(&ul_predicate(&path, 0, 2, 1, 2, 1).unwrap(), Budget::default()).unwrap();
    assert_eq!((run.answer, run.decided_paths), (Some(UlAnswer::False), BigUint::one()));
    let run = evaluate_predicate(&ul_predicate(&path, 0, 1, 1, 2, 1).unwrap(), Budget::default()).unwrap();
    assert_eq!((run.answer, run.decided_paths), (Some(UlAnswer::True), BigUint::one()));
    let over = evaluate_predicate(&ul_predicate(&path, 0, 2, 1, 3, 1).unwrap(), Budget::default()).unwrap();
    assert_eq!((over.answer, over.decided_paths), (None, BigUint::zero()));
}

/// Distance classes of an unweighted graph: `(c_k, sigma_k)`.
fn counts_within(g: &Digraph, s: usize, k: usize) -> (usize, usize) {
    let d = g.bfs_distances(s).unwrap();
    let within: Vec<usize> = d.into_iter().flatten().filter(|&x| x <= k).collect();
    (within.len(), within.iter().sum())
}

#[test]
fn predicate_is_unambiguous_with_correct_counts() {
    let mut r = rng(22);
    let mut checked = 0;
    while checked < 40 {
        let n = r.gen_range(2..=5);
        let g = random_weighted_dag(&mut r, n, 0.5, 3);
        if !is_min_unique(&g, Some(0)).unwrap() {
            continue;
        }
        let h = expand_weighted_edges(&g).unwrap();
        if h.vertex_count() > 10 {
            continue;
        }
        let dist = h.bfs_distances(0).unwrap();
        let k = r.gen_range(0..h.vertex_count());
        let (c, sigma) = counts_within(&h, 0, k);
        for v in 0..h.vertex_count() {
            let run = evaluate_predicate(&ul_predicate(&h, 0, v, k, c, sigma).unwrap(), Budget::default()).unwrap();
            let want = if dist[v].is_some_and(|x| x <= k) { UlAnswer::True } else { UlAnswer::False };
            assert_eq!(run.answer, Some(want));
            assert_eq!(run.decided_paths, BigUint::one());
        }
        checked += 1;
    }
}

#[test]
fn ul_reach_examples_and_random_dags() {
    let path = Digraph::with_weights(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
    let rep = ul_reach(&path, 0, 2, Budget::default()).unwrap();
    assert!(rep.reachable && rep.unambiguous);
    let apart = Digraph::with_weights(3, [(0, 1, 1)]).unwrap();
    let rep = ul_reach(&apart, 0, 2, Budget::default()).unwrap();
    assert!(!rep.reachable && rep.unambiguous);
    let mut r = rng(23);
    let mut done = 0;
    while done < 30 {
        let n = r.gen_range(2..=5);
        let g = random_weighted_dag(&mut r, n, 0.5, 3);
        if !is_min_unique(&g, Some(0)).unwrap() {
            continue;
        }
        let t = r.gen_range(0..n);
        let rep = ul_reach(&g, 0, t, Budget::default()).unwrap();
        let h = expand_weighted_edges(&g).unwrap();
        assert_eq!(rep.reachable, brute_reach(&h, 0, t));
        assert_eq!(rep.reachable, brute_reach(&g, 0, t));
        assert!(rep.unambiguous);
        done += 1;
    }
}

#[test]
fn sharplcfl_binomial_law_on_random_sldags() {
    let mut r = rng(24);
    for _ in 0..60 {
        let layers = r.gen_range(2..=4);
        let widths = random_widths(&mut r, layers, 3);
        let d = random_layered(&mut r, &widths, 0.6);
        let n = d.graph().vertex_count();
        let s = r.gen_range(0..widths[0]);
        let t = n - 1 - r.gen_range(0..widths[widths.len() - 1]);
        let f = brute_paths(d.graph(), s, t);
        for k in 1..=4 {
            let acc = run_all_paths(&sharplcfl(&d, s, t, k).unwrap(), Budget::default()).unwrap().acc;
            assert_eq!(acc, BigUint::from(choose(f, k as u64)), "f={f} k={k}");
        }
    }
}

#[test]
fn sharplcfl_examples() {
    let diamond = LayeredDag::from_layers(&[1, 2, 1], [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    let acc = |d: &LayeredDag, t, k| run_all_paths(&sharplcfl(d, 0, t, k).unwrap(), Budget::default()).unwrap().acc;
    assert_eq!(acc(&diamond, 3, 1), BigUint::from(2u32));
    assert_eq!(acc(&diamond, 3, 3), BigUint::zero());
    let edge = LayeredDag::from_layers(&[1, 1], [(0, 1)]).unwrap();
    assert_eq!(acc(&edge, 1, 1), BigUint::one());
    assert!(sharplcfl(&edge, 0, 1, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nonreach_accepts_iff_unreachable(bits in proptest::collection::vec(any::<bool>(), 12), t in 0usize..9) {
        let widths = [1, 2, 2, 2, 2];
        let slots = common::layer_slots(&widths);
        let edges = slots.iter().zip(&bits).filter(|(_, &b)| b).map(|(&e, _)| e);
        let d = LayeredDag::from_layers(&widths, edges).unwrap();
        let acc = run_all_paths(&nonreach_nd(&d, 0, t, None).unwrap(), Budget::default()).unwrap().acc;
        prop_assert_eq!(!acc.is_zero(), !brute_reach(d.graph(), 0, t));
    }

    #[test]
    fn gap_is_acc_minus_rej(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_program(&mut r, 10);
        let s = run_all_paths(&p, Budget::default()).unwrap();
        prop_assert_eq!(s.gap(), BigInt::from(s.acc.clone()) - BigInt::from(s.rej.clone()));
        prop_assert_eq!(s.total(), &s.acc + &s.rej);
    }
}
