//! Character sums `sum chi_p(f(x))` for monic `f` with distinct roots over
//! `F_p`, their Weil bounds, and point counts on `y^2 = f(x)`.

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::symbols::legendre_fast;

/// `f(x) = prod (x - r_i) mod p` with pairwise distinct roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeilPoly {
    pub p: u64,
    pub roots: Vec<u64>,
}

impl WeilPoly {
    pub fn new(p: u64, roots: Vec<u64>) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if roots.is_empty() {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        let mut roots: Vec<u64> = roots.into_iter().map(|r| r % p).collect();
        roots.sort_unstable();
        if roots.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPolynomial("repeated root".into()));
        }
        Ok(WeilPoly { p, roots })
    }

    /// From monic coefficients `[c_0, ..., c_{d-1}]` (leading 1 implied); the
    /// polynomial must split into distinct linear factors over `F_p`.
    pub fn from_coefficients(p: u64, coeffs: &[i64]) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let deg = coeffs.len();
        let reduced: Vec<u64> = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
            .collect();
        let eval = |x: u64| -> u64 {
            let mut acc = 1u64;
            for &c in reduced.iter().rev() {
                acc = (arith::mul_mod(acc, x, p) + c) % p;
            }
            acc
        };
        let roots: Vec<u64> = (0..p).filter(|&x| eval(x) == 0).collect();
        if roots.len() != deg {
            return Err(Error::InvalidPolynomial(format!(
                "degree {deg} polynomial has {} distinct roots mod {p}; it must split with distinct roots",
                roots.len()
            )));
        }
        Self::new(p, roots)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.roots
            .iter()
            .fold(1u64, |acc, &r| arith::mul_mod(acc, (x % p + p - r) % p, p))
    }

    /// `f(x + c)`.
    pub fn shifted(&self, c: u64) -> WeilPoly {
        let p = self.p;
        let roots = self.roots.iter().map(|&r| (r + p - c % p) % p).collect();
        WeilPoly::new(p, roots).expect("translation keeps roots distinct")
    }

    /// `d sqrt(p)`.
    pub fn complete_bound(&self) -> f64 {
        self.degree() as f64 * (self.p as f64).sqrt()
    }

    /// `d (1 + ln p) sqrt(p)`.
    pub fn incomplete_bound(&self) -> f64 {
        let p = self.p as f64;
        self.degree() as f64 * (1.0 + p.ln()) * p.sqrt()
    }
}

/// `f(x) = x^d + c_{d-1} x^{d-1} + ... + c_0 mod p`, square-free over `F_p`;
/// irreducible factors are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonicPoly {
    pub p: u64,
    /// `[c_0, ..., c_{d-1}]`, reduced mod `p`.
    pub coeffs: Vec<u64>,
}

/// Coefficients low to high; trailing zeros trimmed.
fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// `a mod b` over `F_p`, `b` nonzero.
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let lead_inv = arith::mod_pow(*b.last().unwrap() as i64, p - 2, p);
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let factor = arith::mul_mod(*a.last().unwrap(), lead_inv, p);
        for (i, &bi) in b.iter().enumerate() {
            let sub = arith::mul_mod(factor, bi, p);
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        a = trim(a);
    }
    a
}

impl MonicPoly {
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        let coeffs: Vec<u64> = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
            .collect();
        let f = MonicPoly { p, coeffs };
        if !f.is_squarefree() {
            return Err(Error::InvalidPolynomial(
                "polynomial has a repeated factor".into(),
            ));
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `gcd(f, f') = 1` over `F_p`.
    pub fn is_squarefree(&self) -> bool {
        let p = self.p;
        let d = self.degree() as u64;
        let mut f = self.coeffs.clone();
        f.push(1);
        let df = trim(
            (1..=d)
                .map(|i| arith::mul_mod(i % p, f[i as usize], p))
                .collect(),
        );
        if df.is_empty() {
            return false;
        }
        let (mut a, mut b) = (f, df);
        while !b.is_empty() {
            let r = poly_rem(a, &b, p);
            a = b;
            b = r;
        }
        a.len() == 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let x = x % p;
        self.coeffs
            .iter()
            .rev()
            .fold(1u64, |acc, &c| (arith::mul_mod(acc, x, p) + c) % p)
    }

    /// `d sqrt(p)`.
    pub fn complete_bound(&self) -> f64 {
        self.degree() as f64 * (self.p as f64).sqrt()
    }

    pub fn complete_sum(&self) -> i64 {
        (0..self.p)
            .map(|x| legendre_fast(self.eval(x) as i64, self.p) as i64)
            .sum()
    }

    /// `#{(x, y) in F_p^2 : y^2 = f(x)}` by direct enumeration of `y`.
    pub fn point_count(&self) -> u64 {
        let p = self.p;
        let mut roots_of = vec![0u64; p as usize];
        for y in 0..p {
            roots_of[arith::mul_mod(y, y, p) as usize] += 1;
        }
        (0..p).map(|x| roots_of[self.eval(x) as usize]).sum()
    }
}

impl From<&WeilPoly> for MonicPoly {
    fn from(f: &WeilPoly) -> Self {
        let p = f.p;
        let mut c = vec![1u64];
        for &r in &f.roots {
            let neg = (p - r) % p;
            let mut next = vec![0u64; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] = (next[i + 1] + ci) % p;
                next[i] = (next[i] + arith::mul_mod(ci, neg, p)) % p;
            }
            c = next;
        }
        c.pop();
        MonicPoly { p, coeffs: c }
    }
}

/// `sum_{x=0}^{N} chi_p(f(x))`.
pub fn incomplete_weil_sum(f: &WeilPoly, n: u64) -> Result<i64> {
    if n >= f.p {
        return Err(Error::InvalidArgument(format!("N = {n} exceeds p - 1")));
    }
    Ok((0..=n)
        .map(|x| legendre_fast(f.eval(x) as i64, f.p) as i64)
        .sum())
}

/// `sum_{x=0}^{p-1} chi_p(f(x))`.
pub fn complete_weil_sum(f: &WeilPoly) -> i64 {
    incomplete_weil_sum(f, f.p - 1).expect("p - 1 is in range")
}

/// `#{(x, y) in F_p^2 : y^2 = f(x)}` by tabulating the square roots of
/// every value.
pub fn point_count(f: &WeilPoly) -> u64 {
    let p = f.p;
    let mut roots_of = vec![0u64; p as usize];
    for y in 0..p {
        roots_of[arith::mul_mod(y, y, p) as usize] += 1;
    }
    (0..p).map(|x| roots_of[f.eval(x) as usize]).sum()
}

/// Complete and incomplete bound checks for one polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilReport {
    pub p: u64,
    pub degree: usize,
    pub complete_sum: i64,
    pub complete_bound: f64,
    pub complete_holds: bool,
    pub point_count: u64,
    pub identity_holds: bool,
    /// Largest `|partial sum|` over all `N`, against `d (1 + ln p) sqrt(p)`.
    pub max_incomplete: i64,
    pub incomplete_bound: f64,
    pub incomplete_holds: bool,
}

pub fn weil_report(f: &WeilPoly) -> WeilReport {
    let mut partial = 0i64;
    let mut max_incomplete = 0i64;
    for x in 0..f.p {
        partial += legendre_fast(f.eval(x) as i64, f.p) as i64;
        max_incomplete = max_incomplete.max(partial.abs());
    }
    let count = point_count(f);
    WeilReport {
        p: f.p,
        degree: f.degree(),
        complete_sum: partial,
        complete_bound: f.complete_bound(),
        complete_holds: (partial.abs() as f64) < f.complete_bound(),
        point_count: count,
        identity_holds: count as i64 == f.p as i64 + partial,
        max_incomplete,
        incomplete_bound: f.incomplete_bound(),
        incomplete_holds: (max_incomplete as f64) <= f.incomplete_bound(),
    }
}
