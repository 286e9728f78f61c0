//! Real primitive characters, truncated `L(1, chi)`, Gauss sums, and the
//! quadratic excess `q(I)` together with its L-function and class-number
//! identities.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::forms;
use crate::symbols::legendre_fast;

/// Largest prime accepted by [`gauss_sum`].
pub const GAUSS_SUM_LIMIT: u64 = 10_000;

/// The character `chi(d)` of a fundamental discriminant `d`, stored as its
/// primary factorization and a table of one period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealPrimitiveCharacter {
    pub d: i64,
    pub modulus: u64,
    /// Pairwise coprime factors from `{-4, 8, -8, p*}` with product `d`.
    pub primary_factors: Vec<i64>,
    #[serde(skip)]
    table: Vec<i8>,
}

fn chi_minus4(n: i64) -> i8 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

fn chi_8(n: i64) -> i8 {
    match n.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

fn chi_minus8(n: i64) -> i8 {
    chi_minus4(n) * chi_8(n)
}

/// Value at `n` of the basic character attached to a primary discriminant.
pub fn basic_character(primary: i64, n: i64) -> i8 {
    match primary {
        -4 => chi_minus4(n),
        8 => chi_8(n),
        -8 => chi_minus8(n),
        q => legendre_fast(n, q.unsigned_abs()),
    }
}

impl RealPrimitiveCharacter {
    pub fn new(d: i64) -> Result<Self> {
        if !forms::is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        let f = arith::factorize(d)?;
        let mut odd = Vec::new();
        let mut odd_product = 1i64;
        for &(p, _) in &f.factors {
            if p == 2 {
                continue;
            }
            let star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            odd.push(star);
            odd_product *= star;
        }
        let two_part = d / odd_product;
        let mut primary_factors = Vec::new();
        match two_part {
            1 => {}
            -4 | 8 | -8 => primary_factors.push(two_part),
            _ => return Err(Error::NotFundamental(d)),
        }
        primary_factors.extend(odd);
        let modulus = d.unsigned_abs();
        let table = (0..modulus as i64)
            .map(|n| {
                primary_factors
                    .iter()
                    .map(|&q| basic_character(q, n))
                    .product()
            })
            .collect();
        Ok(RealPrimitiveCharacter {
            d,
            modulus,
            primary_factors,
            table,
        })
    }

    pub fn eval(&self, n: i64) -> i8 {
        self.table[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// One period `chi(0), ..., chi(modulus - 1)`.
    pub fn values(&self) -> &[i8] {
        &self.table
    }
}

/// Truncated series `sum_{n <= N} chi(n)/n` with its tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// `sum_{n=1}^{N} chi(n)/n` for a periodic character given by one period of
/// values; partial sums over a period vanish, so the tail is at most
/// `(modulus - 1)/N`.
pub fn l1_from_period(values: &[i8], terms: u64) -> LValue {
    let m = values.len() as u64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut idx = 1 % m;
    for n in 1..=terms {
        let v = values[idx as usize];
        if v != 0 {
            // compensated summation keeps the error far below the tail bound
            let y = v as f64 / n as f64 - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        idx += 1;
        if idx == m {
            idx = 0;
        }
    }
    LValue {
        value: sum,
        tail_bound: (m.saturating_sub(1)) as f64 / terms as f64,
        terms,
    }
}

pub fn l1_truncated(chi: &RealPrimitiveCharacter, terms: u64) -> Result<LValue> {
    if terms < chi.modulus {
        return Err(Error::InvalidArgument(format!(
            "need at least {} terms",
            chi.modulus
        )));
    }
    Ok(l1_from_period(chi.values(), terms))
}

/// `G(n, p) = sum_j chi_p(j) exp(2 pi i n j / p)` in double precision.
pub fn gauss_sum(n: i64, p: u64) -> Result<Complex64> {
    if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p > GAUSS_SUM_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "Gauss sum prime",
            value: p,
            limit: GAUSS_SUM_LIMIT,
        });
    }
    let n_red = (n as i128).rem_euclid(p as i128) as u64;
    let mut g = Complex64::new(0.0, 0.0);
    for j in 1..p {
        let chi = legendre_fast(j as i64, p) as f64;
        let angle = 2.0 * PI * ((n_red * j) % p) as f64 / p as f64;
        g += Complex64::from_polar(chi, angle);
    }
    Ok(g)
}

/// `p* = (-1)^((p-1)/2) p`.
pub fn p_star(p: u64) -> i64 {
    if p % 4 == 1 {
        p as i64
    } else {
        -(p as i64)
    }
}

/// `sum chi_p(n)` over integers `n` strictly inside `(lo, hi)`, `0 <= lo < hi <= p`.
pub fn quadratic_excess(p: u64, lo: Ratio<i64>, hi: Ratio<i64>) -> Result<i64> {
    let pr = Ratio::from_integer(p as i64);
    if lo < Ratio::from_integer(0) || hi > pr || lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "interval ({lo}, {hi}) not inside [0, {p}]"
        )));
    }
    let first = lo.floor().to_integer() + 1;
    let last = if hi.is_integer() {
        hi.to_integer() - 1
    } else {
        hi.floor().to_integer()
    };
    Ok((first..=last).map(|n| legendre_fast(n, p) as i64).sum())
}

fn frac(p: u64, num: i64, den: i64) -> Ratio<i64> {
    Ratio::new(p as i64 * num, den)
}

/// `q(j p / den, (j + 1) p / den)` for `j = 0..den`.
pub fn excess_partition(p: u64, den: i64) -> Result<Vec<i64>> {
    (0..den)
        .map(|j| quadratic_excess(p, frac(p, j, den), frac(p, j + 1, den)))
        .collect()
}

/// Signs of the excesses over the thirds and quarters of `(0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignReport {
    pub p: u64,
    pub half: i64,
    pub thirds: Vec<i64>,
    pub quarters: Vec<i64>,
    pub violations: Vec<String>,
}

/// Positivity of `q(0, p/2)` (p = 3 mod 4), `q(0, p/4)` (p = 1 mod 4),
/// `q(0, p/3)`, and the sign and zero patterns on the thirds and quarters
/// that follow from them by symmetry.
pub fn verify_excess_signs(p: u64) -> Result<SignReport> {
    if p <= 3 || !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "{p} is not a prime above 3"
        )));
    }
    let half = quadratic_excess(p, frac(p, 0, 1), frac(p, 1, 2))?;
    let thirds = excess_partition(p, 3)?;
    let quarters = excess_partition(p, 4)?;
    let mut violations = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            violations.push(what.to_string());
        }
    };
    expect(thirds[0] > 0, "q(0,p/3) > 0");
    if p % 4 == 3 {
        expect(half > 0, "q(0,p/2) > 0");
        expect(thirds[1] == 0, "q(p/3,2p/3) = 0");
        expect(thirds[2] < 0, "q(2p/3,p) < 0");
        expect(thirds[0] == -thirds[2], "q(I1) = -q(I3)");
    } else {
        expect(quarters[0] > 0, "q(0,p/4) > 0");
        expect(thirds[2] > 0, "q(2p/3,p) > 0");
        expect(thirds[1] < 0, "q(p/3,2p/3) < 0");
        expect(thirds[0] == thirds[2], "q(I1) = q(I3)");
        expect(quarters[0] == quarters[3], "q(J1) = q(J4)");
        expect(quarters[1] == quarters[2], "q(J2) = q(J3)");
        expect(quarters[0] == -quarters[2], "q(J1) = -q(J3)");
        expect(quarters[3] > 0, "q(3p/4,p) > 0");
        expect(quarters[1] < 0 && quarters[2] < 0, "q(J2), q(J3) < 0");
    }
    Ok(SignReport {
        p,
        half,
        thirds,
        quarters,
        violations,
    })
}

/// One excess identity checked against a truncated L-series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcessFormulaCheck {
    pub identity: &'static str,
    pub exact: i64,
    pub formula: f64,
    pub bound: f64,
    pub holds: bool,
}

fn product_period(p: u64, other_modulus: u64, other: impl Fn(i64) -> i8) -> Vec<i8> {
    let m = p * other_modulus;
    (0..m as i64)
        .map(|n| legendre_fast(n, p) * other(n))
        .collect()
}

/// Identities expressing `q(0, p/2)`, `q(0, p/4)` and `q(0, p/3)` through
/// `L(1, chi)`; the bound propagates the series tail through the coefficient.
pub fn excess_via_l(p: u64, terms: u64) -> Result<Vec<ExcessFormulaCheck>> {
    if p <= 3 || !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "{p} is not a prime above 3"
        )));
    }
    let sp = (p as f64).sqrt();
    let chi_p: Vec<i8> = (0..p as i64).map(|n| legendre_fast(n, p)).collect();
    let mut out = Vec::new();
    let mut push = |identity, exact: i64, coeff: f64, l: LValue| {
        let formula = coeff * l.value;
        let bound = coeff.abs() * l.tail_bound + 1e-9;
        out.push(ExcessFormulaCheck {
            identity,
            exact,
            formula,
            bound,
            holds: (exact as f64 - formula).abs() <= bound,
        });
    };
    let half = quadratic_excess(p, frac(p, 0, 1), frac(p, 1, 2))?;
    let third = quadratic_excess(p, frac(p, 0, 1), frac(p, 1, 3))?;
    if p % 4 == 3 {
        let l = l1_from_period(&chi_p, terms);
        let c2 = (2 - legendre_fast(2, p)) as f64 * sp / PI;
        push("q(0,p/2) = sqrt(p)/pi (2 - chi(2)) L(1,chi_p)", half, c2, l);
        let c3 = (3 - legendre_fast(3, p)) as f64 * sp / (2.0 * PI);
        push(
            "q(0,p/3) = sqrt(p)/(2pi) (3 - chi(3)) L(1,chi_p)",
            third,
            c3,
            l,
        );
    } else {
        let quarter = quadratic_excess(p, frac(p, 0, 1), frac(p, 1, 4))?;
        let l4 = l1_from_period(&product_period(p, 4, chi_minus4), terms);
        push("q(0,p/4) = sqrt(p)/pi L(1,chi_4p)", quarter, sp / PI, l4);
        let l3 = l1_from_period(&product_period(p, 3, |n| legendre_fast(n, 3)), terms);
        let c = (3.0 * p as f64).sqrt() / (2.0 * PI);
        push("q(0,p/3) = sqrt(3p)/(2pi) L(1,chi_3p)", third, c, l3);
    }
    Ok(out)
}

/// An exact identity between an excess and a class number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassNumberIdentity {
    pub identity: &'static str,
    pub excess: i64,
    pub class_number: u64,
    pub holds: bool,
}

/// Excess/class-number identities for `p > 3`; the `p = 1 mod 4` cases use
/// the fundamental discriminants `-4p` and `-3p`.
pub fn class_number_excess(p: u64) -> Result<Vec<ClassNumberIdentity>> {
    if p <= 3 || !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "{p} is not a prime above 3"
        )));
    }
    let h = |d: i64| -> Result<u64> { forms::class_number_negative(d) };
    let half = quadratic_excess(p, frac(p, 0, 1), frac(p, 1, 2))?;
    let third = quadratic_excess(p, frac(p, 0, 1), frac(p, 1, 3))?;
    let pi = p as i64;
    let mut out = Vec::new();
    let mut push = |identity, excess: i64, class_number: u64, holds: bool| {
        out.push(ClassNumberIdentity {
            identity,
            excess,
            class_number,
            holds,
        })
    };
    match p % 8 {
        3 => {
            let h1 = h(-pi)?;
            push("q(0,p/2) = 3h(-p)", half, h1, half == 3 * h1 as i64);
        }
        7 => {
            let h1 = h(-pi)?;
            push("q(0,p/2) = h(-p)", half, h1, half == h1 as i64);
        }
        _ => {}
    }
    if p % 4 == 1 {
        let quarter = quadratic_excess(p, frac(p, 0, 1), frac(p, 1, 4))?;
        let h4 = h(-4 * pi)?;
        push("q(0,p/4) = h(-4p)/2", quarter, h4, 2 * quarter == h4 as i64);
        let h3 = h(-3 * pi)?;
        push("q(0,p/3) = h(-3p)/2", third, h3, 2 * third == h3 as i64);
    }
    match p % 12 {
        7 => {
            let h1 = h(-pi)?;
            push("q(0,p/3) = 2h(-p)", third, h1, third == 2 * h1 as i64);
        }
        11 => {
            let h1 = h(-pi)?;
            push("q(0,p/3) = h(-p)", third, h1, third == h1 as i64);
        }
        _ => {}
    }
    Ok(out)
}

/// `Re G(1,p) > 0` for `p = 1 mod 4` and `Im G(1,p) > 0` for `p = 3 mod 4`,
/// with `|G|^2 = p`.
pub fn gauss_sum_sign_holds(p: u64) -> Result<bool> {
    let g = gauss_sum(1, p)?;
    let sp = (p as f64).sqrt();
    let tol = 1e-7 * sp;
    Ok(if p % 4 == 1 {
        (g.re - sp).abs() < tol && g.im.abs() < tol
    } else {
        (g.im - sp).abs() < tol && g.re.abs() < tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_examples() {
        let c4 = RealPrimitiveCharacter::new(-4).unwrap();
        assert_eq!(c4.eval(3), -1);
        assert_eq!(c4.eval(6), 0);
        let c8 = RealPrimitiveCharacter::new(8).unwrap();
        assert_eq!(c8.eval(7), 1);
        let c = RealPrimitiveCharacter::new(-20).unwrap();
        assert_eq!(c.primary_factors, vec![-4, 5]);
        let c = RealPrimitiveCharacter::new(-120).unwrap();
        assert_eq!(c.primary_factors, vec![8, -3, 5]);
        assert_eq!(c.primary_factors.iter().product::<i64>(), -120);
        assert!(RealPrimitiveCharacter::new(12).is_ok());
        assert_eq!(
            RealPrimitiveCharacter::new(9),
            Err(Error::NotFundamental(9))
        );
    }

    #[test]
    fn characters_have_exact_period_and_sign() {
        for d in -500i64..=500 {
            let Ok(chi) = RealPrimitiveCharacter::new(d) else {
                continue;
            };
            let m = chi.modulus as i64;
            assert_eq!(chi.eval(-1) as i64 * m, d);
            for t in (1..m).filter(|t| m % t == 0) {
                assert!((0..m).any(|n| chi.eval(n) != chi.eval(n + t)), "{d} {t}");
            }
            for a in 1..m.min(60) {
                for b in 1..m.min(60) {
                    assert_eq!(chi.eval(a * b), chi.eval(a) * chi.eval(b));
                }
            }
        }
    }

    #[test]
    fn leibniz() {
        let c4 = RealPrimitiveCharacter::new(-4).unwrap();
        let l = l1_truncated(&c4, 1_000_000).unwrap();
        assert!((l.value - PI / 4.0).abs() <= l.tail_bound);
        let c3 = RealPrimitiveCharacter::new(-3).unwrap();
        let l = l1_truncated(&c3, 1_000_000).unwrap();
        assert!((l.value - PI / (3.0 * 3f64.sqrt())).abs() <= l.tail_bound);
    }

    #[test]
    fn gauss_sums() {
        let g5 = gauss_sum(1, 5).unwrap();
        assert!((g5.re - 5f64.sqrt()).abs() < 1e-9 && g5.im.abs() < 1e-9);
        let g7 = gauss_sum(1, 7).unwrap();
        assert!((g7.im - 7f64.sqrt()).abs() < 1e-9 && g7.re.abs() < 1e-9);
        let g = gauss_sum(3, 7).unwrap();
        assert!((g - g7 * legendre_fast(3, 7) as f64).norm() < 1e-9);
    }

    #[test]
    fn excess_examples() {
        let r = |a, b| Ratio::new(a, b);
        assert_eq!(quadratic_excess(11, r(0, 1), r(11, 2)).unwrap(), 3);
        assert_eq!(quadratic_excess(7, r(0, 1), r(7, 2)).unwrap(), 1);
        assert_eq!(quadratic_excess(13, r(0, 1), r(13, 1)).unwrap(), 0);
        let rep = verify_excess_signs(13).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep.thirds[1] < 0 && rep.thirds[2] > 0);
        assert!(verify_excess_signs(7).unwrap().violations.is_empty());
    }

    #[test]
    fn l_formulas() {
        for p in [7, 11, 13, 17, 19, 23, 29] {
            for c in excess_via_l(p, 200_000).unwrap() {
                assert!(c.holds, "{p}: {c:?}");
            }
        }
    }

    #[test]
    fn class_identities() {
        let ids = class_number_excess(11).unwrap();
        assert_eq!(ids[0].excess, 3);
        assert_eq!(ids[0].class_number, 1);
        assert!(ids.iter().all(|i| i.holds));
        assert!(class_number_excess(7).unwrap().iter().all(|i| i.holds));
        assert!(class_number_excess(13).unwrap().iter().all(|i| i.holds));
    }
}
