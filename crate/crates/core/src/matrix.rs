//! Dense matrices of arbitrary-precision integers and exact elimination kernels.
//!
//! The elimination routines here (fraction-free Bareiss, rational row
//! reduction, arithmetic mod p) are independent of the clow-sequence machinery
//! and serve as reference oracles for it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A dense `rows x cols` matrix of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invariant("ragged matrix rows"));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect(),
        })
    }

    /// Builds a square matrix from `i64` rows; panics on ragged input.
    pub fn square(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let m = Self::from_rows(&v).expect("rows must have equal length");
        assert!(m.is_square(), "matrix must be square");
        m
    }

    /// Builds a matrix from a generator `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether rows == cols.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix; errors otherwise.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::arg(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix product; errors on dimension mismatch.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::arg(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^m` by repeated multiplication (`m = 0` gives the identity).
    pub fn pow(&self, m: u32) -> Result<IntMatrix> {
        let n = self.order()?;
        let mut acc = Self::identity(n);
        for _ in 0..m {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::arg("dimension mismatch in subtraction"));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Sub-block with rows `r0..r0+h` and columns `c0..c0+w`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> IntMatrix {
        Self::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Copies `b` into position `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &IntMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// The matrix with row `i` and column `j` deleted.
    pub fn minor(&self, i: usize, j: usize) -> IntMatrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        Self::from_fn(rows.len(), cols.len(), |a, b| self[(rows[a], cols[b])].clone())
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Entries reduced into `0..p`.
    pub fn reduce_mod(&self, p: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mod_floor(p)).collect(),
        }
    }

    /// Rational copy.
    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|a| BigRational::from_integer(a.clone())).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(a: &IntMatrix) -> Result<BigInt> {
    let n = a.order()?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Reduced row echelon form over the rationals; returns pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals by row reduction.
pub fn rank_rational(a: &IntMatrix) -> usize {
    let mut m = a.to_rational();
    rref(&mut m).len()
}

/// Exact inverse over the rationals; `Err(Singular)` when det = 0.
pub fn inverse_rational(a: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
    let n = a.order()?;
    let mut m: Vec<Vec<BigRational>> = a
        .to_rational()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                BigRational::from_integer(if i == j { BigInt::one() } else { BigInt::zero() })
            }));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Whether `p` is prime, by trial division.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Least prime strictly greater than `x`.
pub fn next_prime_above(x: u64) -> u64 {
    let mut p = x + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::arg(format!("{p} is not prime")))
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat inverse; p is prime and a is nonzero mod p.
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

fn to_mod_rows(a: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pb = BigInt::from(p);
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| {
                    let r = x.mod_floor(&pb);
                    u64::try_from(r).expect("residue fits in u64")
                })
                .collect()
        })
        .collect()
}

/// Row-reduces a matrix over `Z_p` in place; returns pivot columns and the
/// determinant factor contributed by row swaps and pivots.
fn eliminate_mod(m: &mut [Vec<u64>], p: u64) -> (Vec<usize>, u64) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut det = 1u128;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(q) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        if q != r {
            m.swap(q, r);
            det = (p as u128 - det) % p as u128;
        }
        let piv = m[r][c];
        det = det * piv as u128 % p as u128;
        let inv = inv_mod(piv, p) as u128;
        for x in m[r].iter_mut() {
            *x = (*x as u128 * inv % p as u128) as u64;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c] as u128;
                for j in 0..cols {
                    let sub = f * m[r][j] as u128 % p as u128;
                    m[i][j] = ((m[i][j] as u128 + p as u128 - sub) % p as u128) as u64;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, det as u64)
}

/// Determinant reduced into `0..p` for a prime `p`.
pub fn det_mod(a: &IntMatrix, p: u64) -> Result<u64> {
    require_prime(p)?;
    let n = a.order()?;
    let mut m = to_mod_rows(a, p);
    let (pivots, det) = eliminate_mod(&mut m, p);
    Ok(if pivots.len() == n { det } else { 0 })
}

/// Rank over `Z_p` for a prime `p`.
pub fn rank_mod(a: &IntMatrix, p: u64) -> Result<usize> {
    require_prime(p)?;
    let mut m = to_mod_rows(a, p);
    Ok(eliminate_mod(&mut m, p).0.len())
}

/// Rank over `Z_p` of the columns selected by `cols`.
pub(crate) fn column_rank_mod(a: &IntMatrix, cols: &[usize], p: u64) -> usize {
    let sub = IntMatrix::from_fn(a.rows(), cols.len(), |i, j| a[(i, cols[j])].clone());
    let mut m = to_mod_rows(&sub, p);
    eliminate_mod(&mut m, p).0.len()
}

/// Rank over the rationals of the columns selected by `cols`.
pub(crate) fn column_rank_rational(a: &IntMatrix, cols: &[usize]) -> usize {
    let sub = IntMatrix::from_fn(a.rows(), cols.len(), |i, j| a[(i, cols[j])].clone());
    rank_rational(&sub)
}

/// Absolute value of the largest entry.
pub fn max_abs_entry(a: &IntMatrix) -> BigInt {
    a.data.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
}
