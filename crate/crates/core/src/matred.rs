//! Matrix problems reducible to the determinant, and exact linear systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::clowdet::det_via_ha;
use crate::matrix::{column_rank_mod, column_rank_rational, is_prime, rref, IntMatrix};
use crate::{Error, Result};

fn check_index(i: usize, n: usize, what: &str) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::arg(format!("{what} index {i} outside 1..={n}")));
    }
    Ok(())
}

/// Entry `(i, j)` (1-based) of `A^m`, reduced into `0..modulus` when a
/// modulus is given.
pub fn powerelement(a: &IntMatrix, i: usize, j: usize, m: u32, modulus: Option<&BigInt>) -> Result<BigInt> {
    let n = a.order()?;
    check_index(i, n, "row")?;
    check_index(j, n, "column")?;
    if m == 0 {
        return Err(Error::arg("exponent must be at least 1"));
    }
    if let Some(q) = modulus {
        if !q.is_positive() {
            return Err(Error::arg("modulus must be positive"));
        }
    }
    let reduce = |x: IntMatrix| match modulus {
        Some(q) => x.reduce_mod(q),
        None => x,
    };
    let base = reduce(a.clone());
    let mut acc = base.clone();
    for _ in 1..m {
        acc = reduce(acc.mul(&base)?);
    }
    Ok(acc[(i - 1, j - 1)].clone())
}

/// Matrix `B` with `det(B) = (A^m)_{i,j}` (1-based).
///
/// `A` is read as a bipartite graph between two columns of `n` nodes; `m`
/// copies are chained into `m + 1` columns. Every edge `k -> l` is subdivided
/// into `k -> u` (weight 1) and `u -> l` (weight `a_kl`). An edge `t -> s` of
/// weight 1 and self-loops of weight 1 at every node except `t` complete the
/// graph, where `s` is node `i` of the first column and `t` node `j` of the
/// last. Choosing `s` and `t` this way is the relabelling that moves entry
/// `(i, j)` to `(1, n)`.
pub fn powerelement_entry_to_det(a: &IntMatrix, i: usize, j: usize, m: usize) -> Result<IntMatrix> {
    let n = a.order()?;
    if n == 0 {
        return Err(Error::arg("matrix must have order at least 1"));
    }
    check_index(i, n, "row")?;
    check_index(j, n, "column")?;
    if m == 0 {
        return Err(Error::arg("exponent must be at least 1"));
    }
    let nonzero: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| (0..n).map(move |l| (k, l)))
        .filter(|&(k, l)| !a[(k, l)].is_zero())
        .collect();
    let column_nodes = (m + 1) * n;
    let size = column_nodes + m * nonzero.len();
    let mut b = IntMatrix::zeros(size, size);
    let mut fresh = column_nodes;
    for c in 0..m {
        for &(k, l) in &nonzero {
            b[(c * n + k, fresh)] = BigInt::one();
            b[(fresh, (c + 1) * n + l)] = a[(k, l)].clone();
            fresh += 1;
        }
    }
    let s = i - 1;
    let t = m * n + (j - 1);
    b[(t, s)] = BigInt::one();
    for v in (0..size).filter(|&v| v != t) {
        b[(v, v)] = BigInt::one();
    }
    Ok(b)
}

/// [`powerelement_entry_to_det`] for the entry `(1, n)`.
pub fn powerelement_to_det(a: &IntMatrix, m: usize) -> Result<IntMatrix> {
    let n = a.order()?;
    powerelement_entry_to_det(a, 1, n.max(1), m)
}

/// Block matrix whose power holds an iterated product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItMatProd {
    /// `(k + 1) n × (k + 1) n` matrix with `A_q` at block `(q, q + 1)`.
    pub b: IntMatrix,
    /// Exponent `k` to raise `b` to.
    pub power: u32,
    /// Top-left corner of the block of `b^k` that equals `A_1 ⋯ A_k`.
    pub block_row: usize,
    pub block_col: usize,
    /// Block size `n`.
    pub block: usize,
}

/// Reduces the product `A_1 ⋯ A_k` of `n × n` matrices to the upper-right
/// block of `B^k`.
pub fn itmatprod_to_powerelement(mats: &[IntMatrix]) -> Result<ItMatProd> {
    let first = mats.first().ok_or_else(|| Error::arg("need at least one matrix"))?;
    let n = first.order()?;
    if mats.iter().any(|a| a.rows() != n || a.cols() != n) {
        return Err(Error::arg("all matrices must be square of equal size"));
    }
    let k = mats.len();
    let mut b = IntMatrix::zeros((k + 1) * n, (k + 1) * n);
    for (q, a) in mats.iter().enumerate() {
        b.set_block(q * n, (q + 1) * n, a);
    }
    Ok(ItMatProd {
        b,
        power: u32::try_from(k).map_err(|_| Error::arg("too many matrices"))?,
        block_row: 0,
        block_col: k * n,
        block: n,
    })
}

/// Nilpotent `n² × n²` matrix `N` with `A` at blocks `(k, k + 1)` for
/// `k < n`; block `(1, k)` of `(I - N)^{-1}` is `A^{k-1}`.
pub fn nilpotent_inverse_instance(a: &IntMatrix) -> Result<IntMatrix> {
    let n = a.order()?;
    let mut nm = IntMatrix::zeros(n * n, n * n);
    for k in 0..n.saturating_sub(1) {
        nm.set_block(k * n, (k + 1) * n, a);
    }
    Ok(nm)
}

/// Entry `(i, j)` (1-based) of `A^{-1}` as `((-1)^{i+j} det A(j|i), det A)`,
/// where `A(j|i)` deletes row `j` and column `i`. Fails with
/// [`Error::Singular`] when `det A = 0`.
pub fn matinv_entry(a: &IntMatrix, i: usize, j: usize) -> Result<(BigInt, BigInt)> {
    let n = a.order()?;
    check_index(i, n, "row")?;
    check_index(j, n, "column")?;
    let det = det_via_ha(a)?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let minor = if n == 1 {
        BigInt::one()
    } else {
        det_via_ha(&a.minor(j - 1, i - 1))?
    };
    let num = if (i + j).is_multiple_of(2) { minor } else { -minor };
    Ok((num, det))
}

/// Outcome of a feasibility test for `Ax = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A rational solution with `Ax = b`.
    Feasible(Vec<BigRational>),
    /// A rational `y` with `Aᵀy = 0` and `bᵀy = 1`.
    Infeasible(Vec<BigRational>),
}

/// Decides `Ax = b` over the rationals by reducing `[A | b | I]`. Exactly one
/// of a solution or a Farkas-type certificate is returned, and it is checked.
pub fn linsys_feasible(a: &IntMatrix, b: &[BigInt]) -> Result<Feasibility> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::arg(format!("right-hand side has {} entries, expected {m}", b.len())));
    }
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row: Vec<BigRational> = a.row(r).iter().map(q).collect();
            row.push(q(&b[r]));
            row.extend((0..m).map(|c| if c == r { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    rref(&mut rows);
    for row in &rows {
        if row[..n].iter().all(Zero::is_zero) && !row[n].is_zero() {
            let c = row[n].clone();
            let y: Vec<BigRational> = row[n + 1..].iter().map(|e| e / &c).collect();
            verify_certificate(a, b, &y)?;
            return Ok(Feasibility::Infeasible(y));
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for row in &rows {
        if let Some(p) = row[..n].iter().position(|e| !e.is_zero()) {
            x[p] = row[n].clone();
        }
    }
    for r in 0..m {
        let lhs: BigRational = (0..n).map(|c| q(&a[(r, c)]) * &x[c]).sum();
        if lhs != q(&b[r]) {
            return Err(Error::internal("computed solution failed verification"));
        }
    }
    Ok(Feasibility::Feasible(x))
}

fn verify_certificate(a: &IntMatrix, b: &[BigInt], y: &[BigRational]) -> Result<()> {
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let by: BigRational = b.iter().zip(y).map(|(bi, yi)| q(bi) * yi).sum();
    let aty_zero = (0..a.cols()).all(|c| {
        (0..a.rows())
            .map(|r| q(&a[(r, c)]) * &y[r])
            .sum::<BigRational>()
            .is_zero()
    });
    if !aty_zero || !by.is_one() {
        return Err(Error::internal("infeasibility certificate failed verification"));
    }
    Ok(())
}

/// Lexicographically least maximal set of linearly independent columns, over
/// the rationals or over `Z_p`. Columns are taken greedily left to right
/// whenever they raise the rank.
pub fn lex_least_columns(a: &IntMatrix, modulus: Option<u64>) -> Result<Vec<usize>> {
    if let Some(p) = modulus {
        if !is_prime(p) {
            return Err(Error::arg(format!("{p} is not prime")));
        }
    }
    let rank = |cols: &[usize]| match modulus {
        Some(p) => column_rank_mod(a, cols, p),
        None => column_rank_rational(a, cols),
    };
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..a.cols() {
        chosen.push(c);
        if rank(&chosen) < chosen.len() {
            chosen.pop();
        }
    }
    Ok(chosen)
}
