//! Exact integer foundations: gcd machinery, linear congruences, the Chinese
//! remainder theorem, successive substitution, modular powers, factorization
//! and prime generation.
//!
//! Sweeps run on machine words with 128-bit intermediates. The protocol code
//! in [`crate::zkp`] and the Pell search in [`crate::forms`] use the
//! arbitrary-precision helpers at the bottom of this module.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pollard-rho iteration budget when `QUADREX_FACTOR_BUDGET` is unset.
pub const DEFAULT_FACTOR_BUDGET: u64 = 4_000_000;
/// Trial division covers every candidate divisor up to this bound.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
/// Largest sieve bound accepted by [`primes_up_to`].
pub const SIEVE_LIMIT: u64 = 400_000_000;

/// A residue class `residue mod modulus` with `0 <= residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
}

impl Congruence {
    /// Normalizes `residue` into `[0, modulus)`.
    pub fn new(residue: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let r = (residue as i128).rem_euclid(modulus as i128) as u64;
        Ok(Congruence {
            residue: r,
            modulus,
        })
    }

    pub fn contains(&self, x: i64) -> bool {
        (x as i128).rem_euclid(self.modulus as i128) as u64 == self.residue
    }
}

/// Prime factorization `value = sign * prod(p^e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub value: i64,
    pub sign: i8,
    /// Strictly increasing primes, each with multiplicity at least one.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// The prime support of `value`.
    pub fn primes(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn multiplicity(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

/// Square-free decomposition `|value| = sigma * square^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeSplit {
    pub sigma: u64,
    pub square: u64,
    /// Primes of odd multiplicity; equals the support of `sigma`.
    pub pi_odd: BTreeSet<u64>,
    /// Primes of positive even multiplicity.
    pub pi_even: BTreeSet<u64>,
}

/// Particular solution and step of `a x + b y = c`; every solution is
/// `(x0 + step_x * n, y0 + step_y * n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearSolution {
    pub x0: i64,
    pub y0: i64,
    pub step_x: i64,
    pub step_y: i64,
}

impl LinearSolution {
    pub fn at(&self, n: i64) -> (i64, i64) {
        (self.x0 + self.step_x * n, self.y0 + self.step_y * n)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Returns `(g, x, y)` with `g = gcd(a, b) > 0` and `a x + b y = g`.
pub fn extended_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::BothZero);
    }
    let (g, x, y) = ext_gcd_i128(a as i128, b as i128);
    Ok((g as i64, x as i64, y as i64))
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// The unique `x` in `[1, m-1]` with `a x = 1 mod m`.
pub fn mod_inverse(a: i64, m: u64) -> Result<u64> {
    mod_inverse_i128(a as i128, m)
}

pub(crate) fn mod_inverse_i128(a: i128, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let a_red = a.rem_euclid(m as i128);
    let (g, x, _) = ext_gcd_i128(a_red, m as i128);
    if g != 1 {
        return Err(Error::NotCoprime { a, m: m as u128 });
    }
    Ok(x.rem_euclid(m as i128) as u64)
}

/// Solves `a x + b y = c` over the integers.
pub fn solve_linear_diophantine(a: i64, b: i64, c: i64) -> Result<LinearSolution> {
    let (d, x, y) = extended_gcd(a, b)?;
    if c % d != 0 {
        return Err(Error::NoSolution { d, c });
    }
    let k = c / d;
    Ok(LinearSolution {
        x0: x * k,
        y0: y * k,
        step_x: b / d,
        step_y: -(a / d),
    })
}

/// Smallest nonnegative solution of `a x = c mod m`, returned modulo `m / gcd(a, m)`.
pub(crate) fn solve_linear_congruence(a: u64, c: i128, m: u64) -> Option<Congruence> {
    let g = gcd(a % m, m);
    if c.rem_euclid(g as i128) != 0 {
        return None;
    }
    let m_red = m / g;
    if m_red == 1 {
        return Some(Congruence {
            residue: 0,
            modulus: 1,
        });
    }
    let a_red = (a / g) % m_red;
    let c_red = (c / g as i128).rem_euclid(m_red as i128) as u64;
    let inv = mod_inverse_i128(a_red as i128, m_red).ok()?;
    Some(Congruence {
        residue: mul_mod(c_red, inv, m_red),
        modulus: m_red,
    })
}

/// Chinese remainder theorem for pairwise coprime moduli.
///
/// Uses the explicit sum `sum a_i M_i (M_i^{-1} mod m_i)` with `M_i = M / m_i`.
pub fn crt(system: &[Congruence]) -> Result<Congruence> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    for (i, ci) in system.iter().enumerate() {
        if ci.modulus < 2 {
            return Err(Error::InvalidModulus(ci.modulus));
        }
        for (j, cj) in system.iter().enumerate().skip(i + 1) {
            if gcd(ci.modulus, cj.modulus) != 1 {
                return Err(Error::ModuliNotCoprime { i, j });
            }
        }
    }
    let big_m = system
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.modulus))
        .ok_or(Error::Overflow)?;
    let mut x = 0u64;
    for c in system {
        let mi = big_m / c.modulus;
        let yi = mod_inverse_i128((mi % c.modulus) as i128, c.modulus)?;
        let term = mul_mod(mul_mod(c.residue, mi, big_m), yi, big_m);
        x = ((x as u128 + term as u128) % big_m as u128) as u64;
    }
    Ok(Congruence {
        residue: x,
        modulus: big_m,
    })
}

/// Solves an arbitrary system modulo the lcm of its moduli.
///
/// Pairs are folded left: `x = a1 + x0 m1 mod lcm(m1, m2)` where `m1 x0 = a2 - a1 mod m2`.
/// A system is solvable iff every pair is, so incompatibility is reported
/// for the first offending pair in lexicographic order.
pub fn successive_substitution(system: &[Congruence]) -> Result<Congruence> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    for (i, ci) in system.iter().enumerate() {
        if ci.modulus < 2 {
            return Err(Error::InvalidModulus(ci.modulus));
        }
        for (j, cj) in system.iter().enumerate().skip(i + 1) {
            let g = gcd(ci.modulus, cj.modulus);
            if ci.residue % g != cj.residue % g {
                return Err(Error::Incompatible { i, j });
            }
        }
    }
    let mut acc = system[0];
    for c in &system[1..] {
        acc = substitute_pair(acc, *c).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

/// One step of successive substitution; `None` only on overflow, because
/// compatibility is checked by the caller.
fn substitute_pair(a: Congruence, b: Congruence) -> Option<Congruence> {
    let l = (a.modulus as u128 / gcd(a.modulus, b.modulus) as u128) * b.modulus as u128;
    if l > u64::MAX as u128 {
        return None;
    }
    let diff = b.residue as i128 - a.residue as i128;
    let x0 = solve_linear_congruence(a.modulus % b.modulus, diff, b.modulus)?;
    let x = (a.residue as u128 + x0.residue as u128 * a.modulus as u128) % l;
    Some(Congruence {
        residue: x as u64,
        modulus: l as u64,
    })
}

/// `b^e mod n` by binary expansion of the exponent.
pub fn mod_pow(b: i64, e: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut base = (b as i128).rem_euclid(n as i128) as u64;
    let mut e = e;
    let mut acc = 1u64 % n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = mod_pow(a as i64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes over the odd numbers.
pub fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    if x > SIEVE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "sieve bound",
            value: x,
            limit: SIEVE_LIMIT,
        });
    }
    if x < 2 {
        return Ok(Vec::new());
    }
    // index i stands for 2i + 1
    let half = ((x - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= x as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(half / 8 + 1);
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|&(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    Ok(primes)
}

/// Odd primes in `[lo, hi]`, ascending.
pub fn odd_primes_between(lo: u64, hi: u64) -> Result<Vec<u64>> {
    Ok(primes_up_to(hi)?
        .into_iter()
        .filter(|&p| p >= lo && p > 2)
        .collect())
}

pub fn factor_budget() -> u64 {
    std::env::var("QUADREX_FACTOR_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_FACTOR_BUDGET)
}

/// Factors `n` with the budget taken from the environment.
pub fn factorize(n: i64) -> Result<Factorization> {
    factorize_with_budget(n, factor_budget())
}

/// Trial division up to [`TRIAL_DIVISION_LIMIT`], then Pollard rho with at most
/// `budget` iterations in total.
pub fn factorize_with_budget(n: i64, budget: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut primes: Vec<u64> = Vec::new();
    while m.is_multiple_of(2) {
        primes.push(2);
        m /= 2;
    }
    while m.is_multiple_of(3) {
        primes.push(3);
        m /= 3;
    }
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= TRIAL_DIVISION_LIMIT && d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                primes.push(d);
                m /= d;
            }
            if m > 1 && is_prime(m) {
                break;
            }
        }
        d += step;
        step = 6 - step;
    }
    if m > 1 {
        let mut remaining = budget;
        split_large(m, &mut primes, &mut remaining)?;
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization {
        value: n,
        sign,
        factors,
    })
}

fn split_large(m: u64, out: &mut Vec<u64>, budget: &mut u64) -> Result<()> {
    if m == 1 {
        return Ok(());
    }
    if is_prime(m) {
        out.push(m);
        return Ok(());
    }
    if let Some(r) = perfect_square_root(m) {
        split_large(r, out, budget)?;
        return split_large(r, out, budget);
    }
    let d = pollard_brent(m, budget).ok_or(Error::FactorBudgetExceeded(m))?;
    split_large(d, out, budget)?;
    split_large(m / d, out, budget)
}

/// Brent's cycle-finding variant of Pollard rho; returns a proper divisor.
fn pollard_brent(n: u64, budget: &mut u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..u64::MAX {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = BATCH.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                if *budget < lim {
                    return None;
                }
                *budget -= lim;
                g = gcd(q, n);
                k += lim;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

/// Square-free part, square cofactor and the parity split of the prime support.
pub fn squarefree_split(n: i64) -> Result<SquarefreeSplit> {
    let f = factorize(n)?;
    Ok(split_from_factorization(&f))
}

pub fn split_from_factorization(f: &Factorization) -> SquarefreeSplit {
    let mut sigma = 1u64;
    let mut square = 1u64;
    let mut pi_odd = BTreeSet::new();
    let mut pi_even = BTreeSet::new();
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            sigma *= p;
            pi_odd.insert(p);
        } else {
            pi_even.insert(p);
        }
        square *= p.pow(e / 2);
    }
    SquarefreeSplit {
        sigma,
        square,
        pi_odd,
        pi_even,
    }
}

pub fn perfect_square_root(n: u64) -> Option<u64> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && perfect_square_root(n as u64).is_some()
}

// Arbitrary-precision helpers.

/// Serializes any displayable number as its decimal string.
pub(crate) fn serialize_decimal<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let a_red = a.mod_floor(m);
    let e = a_red.extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::NotCoprime {
            a: i128::try_from(a.clone()).unwrap_or(i128::MAX),
            m: u128::try_from(m.clone()).unwrap_or(u128::MAX),
        });
    }
    Ok(e.x.mod_floor(m))
}

/// CRT for pairwise coprime arbitrary-precision moduli.
pub fn crt_big(system: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    let mut modulus = BigInt::one();
    for (_, m) in system {
        modulus *= m;
    }
    let mut x = BigInt::zero();
    for (i, (a, m)) in system.iter().enumerate() {
        let mi = &modulus / m;
        let yi = mod_inverse_big(&mi, m).map_err(|_| Error::ModuliNotCoprime { i, j: i })?;
        x += a * &mi * yi;
    }
    Ok((x.mod_floor(&modulus), modulus))
}

/// Miller-Rabin on the first 24 prime bases: exact below 3.3e24, probabilistic above.
pub fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    const BASES: [u32; 24] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    ];
    'witness: for a in BASES {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cong(r: i64, m: u64) -> Congruence {
        Congruence::new(r, m).unwrap()
    }

    #[test]
    fn extended_gcd_identity() {
        let (g, x, y) = extended_gcd(240, 46).unwrap();
        assert_eq!(g, 2);
        assert_eq!(240 * x + 46 * y, 2);
        assert_eq!(extended_gcd(1, 0).unwrap(), (1, 1, 0));
        assert_eq!(extended_gcd(7, 7).unwrap().0, 7);
        assert_eq!(extended_gcd(0, 0), Err(Error::BothZero));
        let (g, x, y) = extended_gcd(-12, 18).unwrap();
        assert_eq!((g, -12 * x + 18 * y), (6, 6));
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(2, 7).unwrap(), 4);
        assert_eq!(mod_inverse(1, 9).unwrap(), 1);
        assert!(matches!(mod_inverse(4, 8), Err(Error::NotCoprime { .. })));
        assert_eq!(mod_inverse(-1, 7).unwrap(), 6);
    }

    #[test]
    fn diophantine() {
        assert!(matches!(
            solve_linear_diophantine(3, 6, 5),
            Err(Error::NoSolution { .. })
        ));
        let s = solve_linear_diophantine(1, 0, 9).unwrap();
        assert_eq!((s.x0, s.step_x), (9, 0));
        let s = solve_linear_diophantine(6, 10, 4).unwrap();
        for n in -3..=3 {
            let (x, y) = s.at(n);
            assert_eq!(6 * x + 10 * y, 4);
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt(&[cong(1, 4), cong(2, 7)]).unwrap(), cong(9, 28));
        assert_eq!(crt(&[cong(-1, 4), cong(6, 7)]).unwrap(), cong(27, 28));
        assert_eq!(crt(&[cong(0, 11)]).unwrap(), cong(0, 11));
        assert_eq!(
            crt(&[cong(1, 4), cong(1, 6)]),
            Err(Error::ModuliNotCoprime { i: 0, j: 1 })
        );
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(
            successive_substitution(&[cong(1, 8), cong(9, 28)]).unwrap(),
            cong(9, 56)
        );
        assert_eq!(
            successive_substitution(&[cong(3, 8), cong(11, 28)]).unwrap(),
            cong(11, 56)
        );
        assert_eq!(
            successive_substitution(&[cong(0, 4), cong(1, 6)]),
            Err(Error::Incompatible { i: 0, j: 1 })
        );
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(15, 402, 1607), 838);
        assert_eq!(mod_pow(3, 8, 17), 16);
        assert_eq!(mod_pow(5, 0, 9), 1);
        assert_eq!(mod_pow(-2, 3, 7), 6);
    }

    #[test]
    fn factor_examples() {
        let s = squarefree_split(126).unwrap();
        assert_eq!(s.pi_odd, BTreeSet::from([2, 7]));
        assert_eq!(s.pi_even, BTreeSet::from([3]));
        let s = squarefree_split(-126).unwrap();
        assert_eq!(s.pi_odd, BTreeSet::from([2, 7]));
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        let s = squarefree_split(360).unwrap();
        assert_eq!((s.sigma, s.square), (10, 6));
    }

    #[test]
    fn factor_large_semiprime() {
        let p = 4_294_967_291u64;
        let q = 2_147_483_647u64;
        let f = factorize((p * q) as i64).unwrap();
        assert_eq!(f.factors, vec![(q, 1), (p, 1)]);
        let f = factorize(1_000_003i64 * 1_000_033 * 7).unwrap();
        assert_eq!(f.factors, vec![(7, 1), (1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn factor_budget_error() {
        let n = (4_294_967_291u64 * 2_147_483_647u64) as i64;
        assert!(matches!(
            factorize_with_budget(n, 1),
            Err(Error::FactorBudgetExceeded(_))
        ));
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(10).unwrap(), vec![2, 3, 5, 7]);
        assert!(is_prime(1847));
        assert!(!is_prime(1));
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
        let sieve = primes_up_to(100_000).unwrap();
        let trial: Vec<u64> = (0..=100_000u64).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, trial);
    }

    #[test]
    fn big_helpers() {
        let (x, m) = crt_big(&[
            (BigInt::from(1), BigInt::from(4)),
            (BigInt::from(2), BigInt::from(7)),
        ])
        .unwrap();
        assert_eq!((x, m), (BigInt::from(9), BigInt::from(28)));
        let p: BigUint = "170141183460469231731687303715884105727".parse().unwrap();
        assert!(is_probable_prime_big(&p));
        assert!(!is_probable_prime_big(&(&p * BigUint::from(3u32))));
    }
}
