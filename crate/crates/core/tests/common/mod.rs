//! Random generators and brute-force oracles shared by the integration tests.
//! The oracles avoid the library's own algorithms.

#![allow(dead_code)]

use logcount::graphs::{Digraph, LayeredDag};
use logcount::matrix::IntMatrix;
use logcount::reductions::TwoCnf;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each ordered pair becomes an edge with probability `p`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64, loops: bool) -> Digraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| loops || u != v)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::new(n, edges).unwrap()
}

/// Random DAG with edges `u -> v` only for `u < v`.
pub fn random_dag(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::new(n, edges).unwrap()
}

/// Random weighted DAG with weights in `[1, r]`.
pub fn random_weighted_dag(rng: &mut impl Rng, n: usize, p: f64, r: u64) -> Digraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::with_weights(n, edges.into_iter().map(|(u, v)| (u, v, rng.gen_range(1..=r)))).unwrap()
}

/// Edges allowed between consecutive layers of a grid with these widths.
pub fn layer_slots(widths: &[usize]) -> Vec<(usize, usize)> {
    let mut start = vec![0];
    for w in widths {
        start.push(start.last().unwrap() + w);
    }
    let mut slots = Vec::new();
    for l in 0..widths.len().saturating_sub(1) {
        for u in start[l]..start[l + 1] {
            for v in start[l + 1]..start[l + 2] {
                slots.push((u, v));
            }
        }
    }
    slots
}

pub fn random_layered(rng: &mut impl Rng, widths: &[usize], p: f64) -> LayeredDag {
    let edges: Vec<_> = layer_slots(widths).into_iter().filter(|_| rng.gen_bool(p)).collect();
    LayeredDag::from_layers(widths, edges).unwrap()
}

/// Random widths: `layers` layers of 1 to `max_width` vertices.
pub fn random_widths(rng: &mut impl Rng, layers: usize, max_width: usize) -> Vec<usize> {
    (0..layers).map(|_| rng.gen_range(1..=max_width)).collect()
}

/// Every layered DAG on the given widths.
pub fn all_layered(widths: &[usize]) -> Vec<LayeredDag> {
    let slots = layer_slots(widths);
    assert!(slots.len() < 20);
    (0u32..1 << slots.len())
        .map(|mask| {
            let edges = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            LayeredDag::from_layers(widths, edges).unwrap()
        })
        .collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(lo..=hi)))
}

fn out_lists(g: &Digraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.edges() {
        out[u].push(v);
    }
    out
}

/// Simple `s -> t` paths by depth-first backtracking.
pub fn brute_paths(g: &Digraph, s: usize, t: usize) -> u64 {
    fn go(out: &[Vec<usize>], u: usize, t: usize, seen: &mut [bool]) -> u64 {
        if u == t {
            return 1;
        }
        seen[u] = true;
        let mut total = 0;
        for &v in &out[u] {
            if !seen[v] {
                total += go(out, v, t, seen);
            }
        }
        seen[u] = false;
        total
    }
    go(&out_lists(g), s, t, &mut vec![false; g.vertex_count()])
}

/// Reachability by depth-first search.
pub fn brute_reach(g: &Digraph, s: usize, t: usize) -> bool {
    let out = out_lists(g);
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        if u == t {
            return true;
        }
        for &v in &out[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

/// Number of vertices of each layer reachable from `s`.
pub fn reachable_per_layer(d: &LayeredDag, s: usize) -> Vec<usize> {
    let g = d.graph();
    let mut counts = vec![0; d.layer_count()];
    for v in 0..g.vertex_count() {
        if brute_reach(g, s, v) {
            counts[d.layer_of(v) - 1] += 1;
        }
    }
    counts
}

/// Determinant by the Leibniz permutation expansion.
pub fn leibniz_det(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let term: BigInt = (0..n).map(|i| a[(i, p[i])].clone()).product();
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn rational_rows(a: &IntMatrix) -> Vec<Vec<BigRational>> {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| BigRational::from_integer(a[(i, j)].clone())).collect())
        .collect()
}

/// Row-echelon form by Gaussian elimination over the rationals; returns the
/// determinant factor (sign and pivots) and the rank.
fn eliminate(m: &mut [Vec<BigRational>]) -> (BigRational, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut factor = BigRational::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            factor = -factor;
        }
        factor *= m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let k = m[i][c].clone() / m[r][c].clone();
            for j in c..cols {
                let d = k.clone() * m[r][j].clone();
                m[i][j] -= d;
            }
        }
        r += 1;
    }
    (factor, r)
}

/// Determinant by rational Gaussian elimination.
pub fn gauss_det(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m = rational_rows(a);
    let (factor, rank) = eliminate(&mut m);
    if rank < n {
        return BigInt::zero();
    }
    assert!(factor.is_integer());
    factor.to_integer()
}

/// Rank by rational Gaussian elimination.
pub fn gauss_rank(a: &IntMatrix) -> usize {
    let mut m = rational_rows(a);
    eliminate(&mut m).1
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.rows());
    IntMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| &a[(i, k)] * &b[(k, j)]).sum())
}

pub fn mat_pow(a: &IntMatrix, m: u32) -> IntMatrix {
    (0..m).fold(IntMatrix::identity(a.rows()), |acc, _| mat_mul(&acc, a))
}

/// Coefficients of `det(xI - A)` by evaluating at `x = 0..=n` with
/// elimination and solving the Vandermonde system.
pub fn interpolated_charpoly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut sys: Vec<Vec<BigRational>> = (0..=n)
        .map(|k| {
            let x = BigInt::from(k);
            let shifted = IntMatrix::from_fn(n, n, |i, j| {
                let d = if i == j { x.clone() } else { BigInt::zero() };
                d - &a[(i, j)]
            });
            let mut row: Vec<BigRational> = (0..=n).map(|e| BigRational::from_integer(x.pow(e as u32))).collect();
            row.push(BigRational::from_integer(gauss_det(&shifted)));
            row
        })
        .collect();
    // Gauss-Jordan on the augmented Vandermonde system.
    for c in 0..=n {
        let p = (c..=n).find(|&i| !sys[i][c].is_zero()).unwrap();
        sys.swap(p, c);
        let piv = sys[c][c].clone();
        for x in sys[c].iter_mut() {
            *x /= piv.clone();
        }
        for i in 0..=n {
            if i != c && !sys[i][c].is_zero() {
                let k = sys[i][c].clone();
                for j in 0..=n + 1 {
                    let d = k.clone() * sys[c][j].clone();
                    sys[i][j] -= d;
                }
            }
        }
    }
    sys.iter()
        .map(|row| {
            assert!(row[n + 1].is_integer());
            row[n + 1].to_integer()
        })
        .collect()
}

/// Satisfiability by trying every assignment.
pub fn brute_sat(phi: &TwoCnf) -> bool {
    let n = phi.variable_count();
    (0u64..1 << n).any(|mask| {
        let assignment: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        phi.eval(&assignment)
    })
}

/// Binomial coefficient for small arguments.
pub fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Shortest-path distances by Bellman-Ford over positive weights.
pub fn shortest_distances(g: &Digraph, s: usize) -> Vec<Option<i64>> {
    let n = g.vertex_count();
    let mut dist: Vec<Option<i64>> = vec![None; n];
    dist[s] = Some(0);
    for _ in 0..n {
        for &(u, v) in g.edges() {
            if let Some(du) = dist[u] {
                let w = g.weight(u, v).unwrap().to_i64().unwrap();
                if dist[v].is_none_or(|dv| du + w < dv) {
                    dist[v] = Some(du + w);
                }
            }
        }
    }
    dist
}

/// Whether `x` lies in `[lo, hi]`.
pub fn within(x: &BigRational, lo: &BigRational, hi: &BigRational) -> bool {
    x >= lo && x <= hi
}

/// `|x|` for a rational.
pub fn abs(x: &BigRational) -> BigRational {
    x.abs()
}
