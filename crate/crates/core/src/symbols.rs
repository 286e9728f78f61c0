//! Legendre and Jacobi symbols by four independent routes: the table of
//! squares, Euler's criterion, Gauss's lemma, and the factoring-free division
//! algorithm with its reciprocity exponent.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{self, gcd, mod_pow};
use crate::error::{Error, Result};

/// Largest prime accepted by the table and Gauss-lemma evaluators.
pub const TABLE_LIMIT: u64 = 10_000_000;

/// The quadratic residues of an odd prime together with a square root of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueTable {
    pub p: u64,
    /// Sorted residues in `[1, p-1]`.
    pub residues: Vec<u64>,
    /// Residue to its root in `[1, (p-1)/2]`; the other root is `p - root`.
    pub roots: BTreeMap<u64, u64>,
}

impl ResidueTable {
    pub fn is_residue(&self, a: u64) -> bool {
        self.roots.contains_key(&(a % self.p))
    }

    /// The Legendre symbol read off the table.
    pub fn symbol(&self, a: i64) -> i8 {
        let r = (a as i128).rem_euclid(self.p as i128) as u64;
        if r == 0 {
            0
        } else if self.is_residue(r) {
            1
        } else {
            -1
        }
    }
}

/// Division sequence and reciprocity exponent behind [`jacobi_fast`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobiTrace {
    /// `R_0 = a, R_1 = b, ..., R_n = 1`.
    pub r: Vec<u64>,
    /// `s_1, ..., s_{n-1}`; the terminal `s_n = 0` is implied.
    pub s: Vec<u32>,
    #[serde(serialize_with = "crate::arith::serialize_decimal")]
    pub sigma: BigUint,
    pub value: i8,
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Squares `1^2, ..., ((p-1)/2)^2` reduced mod `p`.
pub fn residue_table(p: u64) -> Result<ResidueTable> {
    require_odd_prime(p)?;
    if p > TABLE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "residue table prime",
            value: p,
            limit: TABLE_LIMIT,
        });
    }
    let mut roots = BTreeMap::new();
    for x in 1..=(p - 1) / 2 {
        roots.entry(x * x % p).or_insert(x);
    }
    let residues = roots.keys().copied().collect();
    Ok(ResidueTable { p, residues, roots })
}

/// Euler's criterion `a^((p-1)/2) mod p`.
pub fn legendre_euler(a: i64, p: u64) -> i8 {
    let r = mod_pow(a, (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Gauss's lemma: `(-1)^s` where `s` counts the least positive residues of
/// `a, 2a, ..., ((p-1)/2) a` that exceed `p/2`. Returns `(value, s)`.
pub fn legendre_gauss_lemma(a: i64, p: u64) -> Result<(i8, u64)> {
    require_odd_prime(p)?;
    if p > TABLE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "Gauss lemma prime",
            value: p,
            limit: TABLE_LIMIT,
        });
    }
    let a_red = (a as i128).rem_euclid(p as i128) as u64;
    if a_red == 0 {
        return Err(Error::NotCoprime {
            a: a as i128,
            m: p as u128,
        });
    }
    let mut s = 0u64;
    let mut ka = 0u64;
    for _ in 0..(p - 1) / 2 {
        ka += a_red;
        if ka >= p {
            ka -= p;
        }
        if 2 * ka > p {
            s += 1;
        }
    }
    Ok((if s.is_multiple_of(2) { 1 } else { -1 }, s))
}

pub fn chi_minus1(p: u64) -> i8 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

pub fn chi_2(p: u64) -> i8 {
    match p % 8 {
        1 | 7 => 1,
        _ => -1,
    }
}

/// Jacobi symbol from its definition as a product of Legendre symbols over
/// the factorization of `n`.
pub fn jacobi(m: i64, n: i64) -> Result<i8> {
    if n <= 0 {
        return Err(Error::NonPositiveModulus(n));
    }
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    if n == 1 {
        return Ok(1);
    }
    let f = arith::factorize(n)?;
    let mut value = 1i8;
    for (p, e) in f.factors {
        let l = legendre_euler(m, p);
        if l == 0 {
            return Ok(0);
        }
        if l == -1 && e % 2 == 1 {
            value = -value;
        }
    }
    Ok(value)
}

/// One step `R_{i-1} = R_i q_i + 2^{s_i} R_{i+1}`; returns `(s_i, R_{i+1})`.
#[inline]
fn division_step(prev: u64, cur: u64) -> (u32, u64) {
    let rem = prev % cur;
    let s = rem.trailing_zeros();
    (s, rem >> s)
}

fn check_fast_preconditions(a: u64, b: u64) -> Result<()> {
    if b == 0 {
        return Err(Error::NonPositiveModulus(0));
    }
    if b.is_multiple_of(2) {
        return Err(Error::EvenModulus(b as i64));
    }
    if a <= b && b != 1 {
        return Err(Error::NotGreater { a, b });
    }
    if gcd(a, b) != 1 {
        return Err(Error::NotCoprime {
            a: a as i128,
            m: b as u128,
        });
    }
    Ok(())
}

/// `chi_b(a) = (-1)^sigma` with
/// `sigma = sum_{i=1}^{n-1} s_i (R_i^2 - 1)/8 + (R_i - 1)(R_{i+1} - 1)/4`.
pub fn jacobi_fast(a: u64, b: u64) -> Result<JacobiTrace> {
    check_fast_preconditions(a, b)?;
    let mut r = vec![a, b];
    let mut s = Vec::new();
    while *r.last().unwrap() != 1 {
        let n = r.len();
        let (si, next) = division_step(r[n - 2], r[n - 1]);
        s.push(si);
        r.push(next);
    }
    let mut sigma = BigUint::zero();
    for (i, &si) in s.iter().enumerate() {
        let ri = BigUint::from(r[i + 1]);
        let rn = BigUint::from(r[i + 2]);
        let one = BigUint::from(1u32);
        sigma += BigUint::from(si) * (&ri * &ri - &one) / 8u32;
        sigma += (&ri - &one) * (&rn - &one) / 4u32;
    }
    let value = if sigma.bit(0) { -1 } else { 1 };
    Ok(JacobiTrace { r, s, sigma, value })
}

/// Parity of the exponent of [`jacobi_fast`] without storing the trace.
fn jacobi_fast_value(a: u64, b: u64) -> i8 {
    let (mut prev, mut cur) = (a, b);
    let mut odd = false;
    while cur != 1 {
        let (si, next) = division_step(prev, cur);
        if si % 2 == 1 && (cur % 8 == 3 || cur % 8 == 5) {
            odd = !odd;
        }
        if cur % 4 == 3 && next % 4 == 3 {
            odd = !odd;
        }
        prev = cur;
        cur = next;
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Three-step evaluation: strip `a = 2^s b`, apply the supplementary law and
/// reciprocity, then finish with the division algorithm. Arguments are reduced
/// mod `p` first; multiples of `p` give 0.
pub fn legendre_fast(a: i64, p: u64) -> i8 {
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    let s = a.trailing_zeros();
    let b = a >> s;
    let mut eps = false;
    if s % 2 == 1 && (p % 8 == 3 || p % 8 == 5) {
        eps = !eps;
    }
    if p % 4 == 3 && b % 4 == 3 {
        eps = !eps;
    }
    let chi_b_p = if b == 1 { 1 } else { jacobi_fast_value(p, b) };
    if eps {
        -chi_b_p
    } else {
        chi_b_p
    }
}

/// Jacobi symbol `(m / n)` for odd positive `n` via the same division algorithm.
pub fn jacobi_symbol_fast(m: i64, n: u64) -> Result<i8> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n as i64));
    }
    if n == 1 {
        return Ok(1);
    }
    let a = (m as i128).rem_euclid(n as i128) as u64;
    if gcd(a, n) != 1 {
        return Ok(0);
    }
    Ok(jacobi_fast_value(a, n))
}
