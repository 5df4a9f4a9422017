//! Counting functions as value tables, their closure combinators, modulus
//! transforms and the sign-approximating polynomials.
//!
//! A [`CountFn`] tabulates an integer function over inputs `0..len`. Class
//! membership of an input is a predicate on its value (see [`Class`]).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::is_prime;
use crate::{Error, Result};

/// A tabulated counting function with a declared magnitude bound `2^bound_bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountFn {
    values: Vec<BigInt>,
    bound_bits: u64,
    nonneg: bool,
}

fn powu(x: &BigInt, k: u32) -> BigInt {
    x.pow(k)
}

fn bits_of(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

impl CountFn {
    /// Validates `|f(x)| <= 2^bound_bits` and, when `nonneg`, `f(x) >= 0`.
    pub fn new(values: Vec<BigInt>, bound_bits: u64, nonneg: bool) -> Result<Self> {
        let bound = BigInt::one() << bound_bits;
        if let Some(v) = values.iter().find(|v| v.abs() > bound) {
            return Err(Error::invariant(format!("value {v} exceeds 2^{bound_bits}")));
        }
        if nonneg && values.iter().any(Signed::is_negative) {
            return Err(Error::invariant("nonnegative function has a negative value"));
        }
        Ok(CountFn {
            values,
            bound_bits,
            nonneg,
        })
    }

    /// A nonnegative function (a path count) with the tightest bound.
    pub fn sharp(values: Vec<BigInt>) -> Result<Self> {
        let bits = values.iter().map(bits_of).max().unwrap_or(0);
        CountFn::new(values, bits, true)
    }

    /// A signed function (a gap) with the tightest bound.
    pub fn gap(values: Vec<BigInt>) -> Self {
        let bits = values.iter().map(bits_of).max().unwrap_or(0);
        CountFn {
            values,
            bound_bits: bits,
            nonneg: false,
        }
    }

    /// Builds from machine integers; nonnegative iff every value is.
    pub fn from_i64(values: &[i64]) -> Self {
        let v: Vec<BigInt> = values.iter().map(|&x| BigInt::from(x)).collect();
        if values.iter().all(|&x| x >= 0) {
            CountFn::sharp(v).expect("values are nonnegative")
        } else {
            CountFn::gap(v)
        }
    }

    /// Values in input order.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Number of inputs.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Whether the domain is empty.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Declared bound exponent.
    pub fn bound_bits(&self) -> u64 {
        self.bound_bits
    }

    /// Whether the function is declared nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.nonneg
    }

    /// Inputs accepted under `class`.
    pub fn language(&self, class: Class) -> Vec<bool> {
        self.values.iter().map(|v| class.accepts(v)).collect()
    }
}

/// Pointwise combinators under which the counting classes are closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Combinator {
    /// `f + g`.
    Add,
    /// `f * g`.
    Mul,
    /// `-f`.
    Negate,
    /// `f + c`.
    AddConst(BigInt),
    /// `h(x) = Σ_{i=1..p} f(⟨x, i⟩)`, where `⟨x, i⟩` is input `x * p + i - 1`.
    PolySum(usize),
    /// `h(x) = Π_{i=1..p} f(⟨x, i⟩)`.
    PolyProd(usize),
    /// `C(f(x), k)`.
    Binom(u32),
    /// `h(2x) = f(x)`, `h(2x + 1) = g(x)`.
    Join,
}

impl Combinator {
    fn arity(&self) -> usize {
        match self {
            Combinator::Add | Combinator::Mul | Combinator::Join => 2,
            _ => 1,
        }
    }
}

/// Binomial coefficient `C(n, k)` for `n >= 0`.
pub fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Applies a combinator pointwise and recomputes the magnitude bound.
pub fn combine(spec: &Combinator, fs: &[&CountFn]) -> Result<CountFn> {
    if fs.len() != spec.arity() {
        return Err(Error::arg(format!(
            "{spec:?} takes {} functions, got {}",
            spec.arity(),
            fs.len()
        )));
    }
    let f = fs[0];
    let same_domain = || -> Result<()> {
        if fs[1].len() != f.len() {
            return Err(Error::arg("functions must share a domain"));
        }
        Ok(())
    };
    let grouped = |p: usize| -> Result<std::slice::Chunks<'_, BigInt>> {
        if p == 0 || !f.len().is_multiple_of(p) {
            return Err(Error::arg(format!("domain size {} is not a multiple of {p}", f.len())));
        }
        Ok(f.values.chunks(p))
    };
    let (values, bits, nonneg) = match spec {
        Combinator::Add => {
            same_domain()?;
            let g = fs[1];
            let v = f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect();
            (v, f.bound_bits.max(g.bound_bits) + 1, f.nonneg && g.nonneg)
        }
        Combinator::Mul => {
            same_domain()?;
            let g = fs[1];
            let v = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
            (v, f.bound_bits + g.bound_bits, f.nonneg && g.nonneg)
        }
        Combinator::Negate => (f.values.iter().map(|a| -a).collect(), f.bound_bits, false),
        Combinator::AddConst(c) => (
            f.values.iter().map(|a| a + c).collect(),
            f.bound_bits.max(bits_of(c)) + 1,
            f.nonneg && !c.is_negative(),
        ),
        Combinator::PolySum(p) => {
            let log = usize::BITS - (p.saturating_sub(1)).leading_zeros();
            let v = grouped(*p)?.map(|c| c.iter().sum()).collect();
            (v, f.bound_bits + u64::from(log), f.nonneg)
        }
        Combinator::PolyProd(p) => {
            let v = grouped(*p)?.map(|c| c.iter().product()).collect();
            (v, f.bound_bits * *p as u64, f.nonneg)
        }
        Combinator::Binom(k) => {
            if f.values.iter().any(Signed::is_negative) {
                return Err(Error::arg("binomial needs nonnegative values"));
            }
            let v = f.values.iter().map(|a| binomial(a, *k)).collect();
            (v, f.bound_bits * u64::from(*k), true)
        }
        Combinator::Join => {
            same_domain()?;
            let g = fs[1];
            let v = f
                .values
                .iter()
                .zip(&g.values)
                .flat_map(|(a, b)| [a.clone(), b.clone()])
                .collect();
            (v, f.bound_bits.max(g.bound_bits), f.nonneg && g.nonneg)
        }
    };
    CountFn::new(values, bits, nonneg)
}

/// Acceptance predicates of the logspace counting classes on a function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    /// Some accepting path: `f > 0`.
    Nl,
    /// Exact counting: `f = 0`.
    CeqL,
    /// Probabilistic: `f > 0` for a gap function.
    Pl,
    /// `f ≢ 0 (mod k)`.
    Mod(u64),
    /// Unambiguous: `f = 1`, under the promise `f ∈ {0, 1}`.
    Ul,
}

impl Class {
    /// Whether an input with value `v` is accepted.
    pub fn accepts(self, v: &BigInt) -> bool {
        match self {
            Class::Nl | Class::Pl => v.is_positive(),
            Class::CeqL => v.is_zero(),
            Class::Mod(k) => !v.mod_floor(&BigInt::from(k)).is_zero(),
            Class::Ul => v.is_one(),
        }
    }

    /// Whether `v` satisfies the class promise (only restrictive for UL).
    pub fn promise_holds(self, v: &BigInt) -> bool {
        match self {
            Class::Ul => v.is_zero() || v.is_one(),
            _ => true,
        }
    }
}

/// Modulus transforms for `Mod_p` functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModTransform {
    /// `g = f^(p-1)`: residue 1 where `f ≢ 0`, 0 where `f ≡ 0`.
    Fermat,
    /// `g = (i - j) f + j`: maps residue 1 to `i` and 0 to `j`.
    Affine { i: BigInt, j: BigInt },
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::arg(format!("{p} is not prime")))
    }
}

/// Applies a modulus transform for the prime `p`.
pub fn mod_transform(kind: &ModTransform, f: &CountFn, p: u64) -> Result<CountFn> {
    require_prime(p)?;
    let values: Vec<BigInt> = match kind {
        ModTransform::Fermat => f.values.iter().map(|v| powu(v, (p - 1) as u32)).collect(),
        ModTransform::Affine { i, j } => f.values.iter().map(|v| (i - j) * v + j).collect(),
    };
    Ok(CountFn::gap(values))
}

/// `f1 + (q - 1) f2`, congruent to `f1 - f2` modulo `q`, nonnegative when
/// `f1` and `f2` are.
pub fn gap_to_sharp_mod(f1: &CountFn, f2: &CountFn, q: &BigInt) -> Result<CountFn> {
    if f1.len() != f2.len() {
        return Err(Error::arg("functions must share a domain"));
    }
    let scaled = combine(&Combinator::Mul, &[f2, &CountFn::from_const(q - 1u32, f2.len())])?;
    combine(&Combinator::Add, &[f1, &scaled])
}

impl CountFn {
    /// The constant function `c` on `len` inputs.
    pub fn from_const(c: BigInt, len: usize) -> CountFn {
        let v = vec![c; len];
        if v.iter().all(|x| !x.is_negative()) {
            CountFn::sharp(v).expect("nonnegative")
        } else {
            CountFn::gap(v)
        }
    }
}

/// `k f_j + j f_k`: for coprime `j`, `k` it is nonzero modulo `jk` exactly
/// where `f_j ≢ 0 (mod j)` or `f_k ≢ 0 (mod k)`.
pub fn modulo_jk(fj: &CountFn, j: u64, fk: &CountFn, k: u64) -> Result<CountFn> {
    if j == 0 || k == 0 || j.gcd(&k) != 1 {
        return Err(Error::arg("moduli must be positive and coprime"));
    }
    let a = combine(&Combinator::Mul, &[fj, &CountFn::from_const(k.into(), fj.len())])?;
    let b = combine(&Combinator::Mul, &[fk, &CountFn::from_const(j.into(), fk.len())])?;
    combine(&Combinator::Add, &[&a, &b])
}

/// `(f^(p-1) + p - 1)^(p-1)`: nonzero modulo `p` exactly where `f ≡ 0`.
pub fn mod_complement(f: &CountFn, p: u64) -> Result<CountFn> {
    let g = mod_transform(&ModTransform::Fermat, f, p)?;
    let shifted = combine(&Combinator::AddConst(BigInt::from(p - 1)), &[&g])?;
    mod_transform(&ModTransform::Fermat, &shifted, p)
}

/// Reduces divisibility by `p^e` to a residue modulo `p`.
///
/// With `f_1 = v` and, for `i = 2..=e`, `a = f_{i-1}`, `b = C(v, p^(i-1))`,
/// `f'_i = a^(p-1) b^(p-1) + (a^(p-1) + p - 1) b^(p-1) + a^(p-1) (b^(p-1) + p - 1)`
/// and `f_i = f'_i^(p-1)`, the result `f_e^(p-1)` is `≡ 1 (mod p)` if
/// `v ≢ 0 (mod p^e)` and `≡ 0` otherwise. Exact integers throughout.
pub fn prime_power_flatten(v: &BigInt, p: u64, e: u32) -> Result<BigInt> {
    require_prime(p)?;
    if e == 0 {
        return Err(Error::arg("exponent must be at least 1"));
    }
    if v.is_negative() {
        return Err(Error::arg("value must be nonnegative"));
    }
    let pm1 = (p - 1) as u32;
    let pb = BigInt::from(p);
    let mut f = v.clone();
    for i in 2..=e {
        let pk = powu(&pb, i - 1);
        let k = pk
            .to_u32()
            .ok_or_else(|| Error::arg("p^(e-1) too large for a binomial"))?;
        let a = powu(&f, pm1);
        let b = powu(&binomial(v, k), pm1);
        let c = &pb - 1u32;
        let fp = &a * &b + (&a + &c) * &b + &a * (&b + &c);
        f = powu(&fp, pm1);
    }
    Ok(powu(&f, pm1))
}

/// Digit `e` (0-based) of `v` in base `p`.
pub fn base_digit(v: &BigInt, p: u64, e: u32) -> BigInt {
    let pb = BigInt::from(p);
    (v / powu(&pb, e)).mod_floor(&pb)
}

/// Which sign-approximation family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignFamily {
    /// `P_n`, `A_n = P_n(-x)^(n/2+1) - P_n(x)^(n/2+1)`, `B_n` with `+`,
    /// `S_n = A_n / B_n`; `n` even.
    Odd { n: u32 },
    /// `P_m`, `Q_m = -P_m(z) - P_m(-z)`, `A = Q^(2r)`, `B = Q^(2r) + (2P)^(2r)`,
    /// `S = A / B`.
    Threshold { m: u32, r: u32 },
}

/// Exact values of one family at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignValues {
    pub p: BigInt,
    /// Only defined for the threshold family.
    pub q: Option<BigInt>,
    pub a: BigInt,
    pub b: BigInt,
    pub s: BigRational,
}

/// `P_n(z) = (z - 1) Π_{i=1..n} (z - 2^i)^2`.
pub fn p_poly(n: u32, z: &BigInt) -> BigInt {
    (1..=n).fold(z - 1, |acc, i| {
        let d = z - (BigInt::one() << i);
        acc * &d * &d
    })
}

/// Evaluates the chosen family at `z`.
pub fn sign_polys(family: SignFamily, z: &BigInt) -> Result<SignValues> {
    let (p, q, a, b) = match family {
        SignFamily::Odd { n } => {
            if n == 0 || n % 2 == 1 {
                return Err(Error::arg("the odd-function family needs a positive even n"));
            }
            let k = n / 2 + 1;
            let pz = p_poly(n, z);
            let pm = p_poly(n, &-z);
            let (x, y) = (powu(&pm, k), powu(&pz, k));
            (pz, None, &x - &y, x + y)
        }
        SignFamily::Threshold { m, r } => {
            if m == 0 || r == 0 {
                return Err(Error::arg("m and r must be positive"));
            }
            let pz = p_poly(m, z);
            let q = -&pz - p_poly(m, &-z);
            let a = powu(&q, 2 * r);
            let b = &a + powu(&(&pz * 2), 2 * r);
            (pz, Some(q), a, b)
        }
    };
    if b.is_zero() {
        return Err(Error::invariant("denominator vanishes at this point"));
    }
    let s = BigRational::new(a.clone(), b.clone());
    Ok(SignValues { p, q, a, b, s })
}

/// `H'(d, e) = (A_D B_E + A_E B_D + B_D B_E)(B_D B_E)` with `A`, `B` from the
/// odd-function family of order `n` evaluated at `d` and `e`. Positive iff
/// `d > 0` or `e > 0` when `1 <= |d|, |e| <= 2^n`.
pub fn pl_union_h(d: &BigInt, e: &BigInt, n: u32) -> Result<BigInt> {
    let x = sign_polys(SignFamily::Odd { n }, d)?;
    let y = sign_polys(SignFamily::Odd { n }, e)?;
    let bb = &x.b * &y.b;
    Ok((&x.a * &y.b + &y.a * &x.b + &bb) * bb)
}
