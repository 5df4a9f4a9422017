mod common;

use common::{all_layered, brute_paths, brute_reach, mat_pow, random_digraph, random_layered, random_widths, rng};
use logcount::graphs::{count_simple_paths, count_st_paths, reachable, walk_count, Digraph, LayeredDag};
use logcount::matrix::IntMatrix;
use logcount::Error;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

#[test]
fn reachability_examples() {
    let g = Digraph::new(2, [(0, 1)]).unwrap();
    assert!(reachable(&g, 0, 1).unwrap());
    assert!(!reachable(&Digraph::new(2, []).unwrap(), 0, 1).unwrap());
    assert_eq!(
        reachable(&g, 0, 5),
        Err(Error::VertexOutOfRange { vertex: 5, count: 2 })
    );
}

#[test]
fn reachability_matches_dfs_on_random_graphs() {
    let mut r = rng(1);
    for _ in 0..200 {
        let g = random_digraph(&mut r, 8, 0.2, true);
        for s in 0..8 {
            for t in 0..8 {
                assert_eq!(reachable(&g, s, t).unwrap(), brute_reach(&g, s, t));
            }
        }
    }
}

#[test]
fn diamond_and_ladder_counts() {
    let diamond = Digraph::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    assert_eq!(count_st_paths(&diamond, 0, 3).unwrap(), BigUint::from(2u32));
    let widths = [1, 2, 2, 1];
    let ladder = LayeredDag::from_layers(&widths, common::layer_slots(&widths)).unwrap();
    assert_eq!(count_st_paths(&ladder, 0, 5).unwrap(), BigUint::from(4u32));
}

#[test]
fn dag_counts_match_backtracking_exhaustively() {
    for widths in [vec![1, 1], vec![2, 2], vec![1, 2, 1], vec![2, 2, 2], vec![2, 1, 2]] {
        for d in all_layered(&widths) {
            let n = d.graph().vertex_count();
            for s in 0..n {
                for t in 0..n {
                    let want = brute_paths(d.graph(), s, t);
                    assert_eq!(count_st_paths(&d, s, t).unwrap(), BigUint::from(want));
                    assert_eq!(count_st_paths(d.graph(), s, t).unwrap(), BigUint::from(want));
                }
            }
        }
    }
}

#[test]
fn dag_counts_match_backtracking_on_random_layered() {
    let mut r = rng(2);
    for _ in 0..100 {
        let widths = random_widths(&mut r, 5, 4);
        let d = random_layered(&mut r, &widths, 0.5);
        let n = d.graph().vertex_count();
        for t in 0..n {
            assert_eq!(
                count_st_paths(&d, 0, t).unwrap(),
                BigUint::from(brute_paths(d.graph(), 0, t))
            );
        }
    }
}

#[test]
fn simple_path_budget_is_enforced() {
    let n = 12;
    let edges: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
    let k = Digraph::new(n, edges).unwrap();
    assert!(matches!(count_simple_paths(&k, 0, 1, 1000), Err(Error::BudgetExceeded(_))));
}

#[test]
fn walk_count_examples() {
    let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(walk_count(&g, 1, 1, 0).unwrap(), BigUint::from(1u32));
    assert_eq!(walk_count(&g, 0, 1, 0).unwrap(), BigUint::from(0u32));
    assert_eq!(walk_count(&g, 0, 1, 1).unwrap(), BigUint::from(1u32));
}

fn adjacency(g: &Digraph) -> IntMatrix {
    IntMatrix::from_fn(g.vertex_count(), g.vertex_count(), |i, j| {
        BigInt::from(u8::from(g.has_edge(i, j)))
    })
}

#[test]
fn walk_count_matches_adjacency_powers() {
    let mut r = rng(3);
    for _ in 0..50 {
        let g = random_digraph(&mut r, 6, 0.35, true);
        let a = adjacency(&g);
        for len in 0..7 {
            let p = mat_pow(&a, len);
            for s in 0..6 {
                for t in 0..6 {
                    let w = walk_count(&g, s, t, len as usize).unwrap();
                    assert_eq!(BigInt::from(w), p[(s, t)]);
                }
            }
        }
    }
}

#[test]
fn layered_dag_rejects_skipping_edges() {
    let base = Digraph::new(3, [(0, 2)]).unwrap();
    assert!(matches!(LayeredDag::new(base, vec![1, 2, 3], 3), Err(Error::Invariant(_))));
    assert!(matches!(Digraph::new(2, [(0, 1), (0, 1)]), Err(Error::DuplicateEdge(0, 1))));
}

fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n));
            Digraph::new(n, edges).unwrap()
        })
    })
}

fn arb_dag(max_n: usize) -> impl Strategy<Value = Digraph> {
    arb_digraph(max_n).prop_map(|g| {
        let edges = g.edges().iter().copied().filter(|&(u, v)| u < v);
        Digraph::new(g.vertex_count(), edges).unwrap()
    })
}

proptest! {
    #[test]
    fn reachable_iff_positive_count_on_dags(g in arb_dag(7), s in 0usize..7, t in 0usize..7) {
        let n = g.vertex_count();
        let (s, t) = (s % n, t % n);
        let c = count_st_paths(&g, s, t).unwrap();
        prop_assert_eq!(reachable(&g, s, t).unwrap(), c > BigUint::from(0u32));
    }

    #[test]
    fn walk_count_splits_over_first_steps(g in arb_digraph(6), s in 0usize..6, t in 0usize..6, len in 1usize..6) {
        let n = g.vertex_count();
        let (s, t) = (s % n, t % n);
        let total: BigUint = g.successors(s).iter().map(|&u| walk_count(&g, u, t, len - 1).unwrap()).sum();
        prop_assert_eq!(walk_count(&g, s, t, len).unwrap(), total);
    }
}
