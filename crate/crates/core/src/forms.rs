//! Binary quadratic forms: fundamental discriminants, reduced forms, the
//! automorph count, minimal solutions of `t^2 - d u^2 = 4`, representation
//! numbers, and class numbers.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{self, RealPrimitiveCharacter};
use crate::arith::{self, gcd};
use crate::error::{Error, Result};

/// Most continued-fraction steps [`pell_min`] will take.
pub const PELL_STEP_LIMIT: usize = 1_000_000;
/// Largest `|d|` accepted by [`reduced_forms`].
pub const REDUCTION_LIMIT: u64 = 100_000_000;

/// `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(
            gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        ) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// `|b| <= a <= c`, with `b >= 0` whenever `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }
}

fn is_squarefree(n: u64) -> bool {
    match arith::factorize(n as i64) {
        Ok(f) => f.factors.iter().all(|&(_, e)| e == 1),
        Err(_) => false,
    }
}

/// `d = 1 mod 4` square-free, or `d = 4n` with `n` square-free and `n = 2, 3 mod 4`.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let n = d / 4;
            matches!(n.rem_euclid(4), 2 | 3) && is_squarefree(n.unsigned_abs())
        }
        _ => false,
    }
}

/// The primitive positive-definite reduced forms of a negative fundamental
/// discriminant, one per class, ordered by `(a, b)`.
pub fn reduced_forms(d: i64) -> Result<Vec<QForm>> {
    if d >= 0 {
        return Err(Error::WrongSign(d));
    }
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    reduced_forms_any(d)
}

/// Reduced primitive forms of any negative discriminant `d = 0, 1 mod 4`.
pub fn reduced_forms_any(d: i64) -> Result<Vec<QForm>> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidArgument(format!(
            "{d} is not a negative discriminant"
        )));
    }
    let n = d.unsigned_abs();
    if n > REDUCTION_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "reduction discriminant",
            value: n,
            limit: REDUCTION_LIMIT,
        });
    }
    // a <= sqrt(|d|/3) because 4a^2 <= 4ac = b^2 - d <= a^2 + |d|
    let b_max = ((n / 3) as f64).sqrt() as i64 + 1;
    let parity = d.rem_euclid(2);
    let mut forms: Vec<QForm> = (0..=b_max)
        .into_par_iter()
        .filter(|b| b % 2 == parity)
        .flat_map_iter(|b| {
            let mut out = Vec::new();
            let num = b * b - d;
            let mut a = b.max(1);
            while 4 * a * a <= num {
                if num % (4 * a) == 0 {
                    let c = num / (4 * a);
                    for bb in [b, -b] {
                        let f = QForm::new(a, bb, c);
                        if f.is_reduced() && f.is_primitive() && (bb != 0 || b == 0) {
                            out.push(f);
                        }
                    }
                }
                a += 1;
            }
            out
        })
        .collect();
    forms.sort_by_key(|f| (f.a, f.b.abs(), f.b < 0));
    forms.dedup();
    Ok(forms)
}

/// `h(d)` for `d < 0` as the number of reduced forms.
pub fn class_number_negative(d: i64) -> Result<u64> {
    Ok(reduced_forms(d)?.len() as u64)
}

/// Number of automorphs of a form of discriminant `d < 0`.
pub fn automorph_count(d: i64) -> Result<u32> {
    if d >= 0 {
        return Err(Error::WrongSign(d));
    }
    Ok(match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    })
}

/// Minimal positive solution of `t^2 - d u^2 = 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellSolution {
    pub d: u64,
    #[serde(serialize_with = "crate::arith::serialize_decimal")]
    pub t0: BigInt,
    #[serde(serialize_with = "crate::arith::serialize_decimal")]
    pub u0: BigInt,
}

impl PellSolution {
    /// `ln((t0 + u0 sqrt d)/2)`.
    pub fn log_epsilon(&self) -> f64 {
        let sd = (self.d as f64).sqrt();
        match (self.t0.to_f64(), self.u0.to_f64()) {
            (Some(t), Some(u)) if t.is_finite() && u.is_finite() => ((t + u * sd) / 2.0).ln(),
            _ => {
                // for huge t0, (t0 + u0 sqrt d)/2 = t0 (1 + O(t0^-2))
                let bits = self.t0.bits();
                let shift = bits.saturating_sub(60);
                let top = (&self.t0 >> shift).to_f64().unwrap_or(f64::MAX);
                top.ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }
}

/// Walks the continued fraction of `(p0 + sqrt(dd))/q0` and returns the
/// first convergent `(g, b)` with `g^2 - dd b^2 = target` or `-target`.
fn pqa_unit(dd: u64, p0: i128, q0: i128, target: i64) -> Result<(BigInt, BigInt, bool)> {
    let root = dd.isqrt() as i128;
    let big_d = BigInt::from(dd);
    let (mut p, mut q) = (p0, q0);
    let (mut a_prev2, mut a_prev1) = (BigInt::zero(), BigInt::one());
    let (mut b_prev2, mut b_prev1) = (BigInt::one(), BigInt::zero());
    for _ in 0..PELL_STEP_LIMIT {
        debug_assert!(q > 0);
        let a = (p + root).div_euclid(q);
        let ai = BigInt::from(a);
        let a_cur = &ai * &a_prev1 + &a_prev2;
        let b_cur = &ai * &b_prev1 + &b_prev2;
        let g = BigInt::from(q0) * &a_cur - BigInt::from(p0) * &b_cur;
        if b_cur.is_positive() {
            let norm = &g * &g - &big_d * &b_cur * &b_cur;
            if norm == BigInt::from(target) {
                return Ok((g, b_cur, true));
            }
            if norm == BigInt::from(-target) {
                return Ok((g, b_cur, false));
            }
        }
        let p_next = a * q - p;
        let q_next = (dd as i128 - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        a_prev2 = std::mem::replace(&mut a_prev1, a_cur);
        b_prev2 = std::mem::replace(&mut b_prev1, b_cur);
    }
    Err(Error::SearchExhausted(format!(
        "no unit of discriminant {dd} within {PELL_STEP_LIMIT} steps"
    )))
}

/// Minimal `(t0, u0)` with `t0^2 - d u0^2 = 4`, `u0 > 0`, for non-square `d > 0`.
///
/// For `d = 1 mod 4` this is the unit `(t + u sqrt d)/2` read off the
/// expansion of `(1 + sqrt d)/2`; otherwise `t` and `u` are forced even (or
/// `t` even when `4 | d`) and the problem reduces to `x^2 - D y^2 = 1`.
pub fn pell_min(d: u64) -> Result<PellSolution> {
    if d == 0 || arith::perfect_square_root(d).is_some() {
        return Err(Error::PerfectSquare(d as i64));
    }
    let square_up = |t: BigInt, u: BigInt, dd: &BigInt, scale: i64| -> (BigInt, BigInt) {
        // (t + u sqrt dd)^2 / scale with norm -scale squared to +scale
        let t2 = (&t * &t + dd * &u * &u) / scale;
        let u2 = BigInt::from(2) * &t * &u / scale;
        (t2, u2)
    };
    let (t0, u0) = match d % 4 {
        1 => {
            let (t, u, plus) = pqa_unit(d, 1, 2, 4)?;
            if plus {
                (t, u)
            } else {
                square_up(t, u, &BigInt::from(d), 2)
            }
        }
        0 => {
            let dd = d / 4;
            let (x, y, plus) = pqa_unit(dd, 0, 1, 1)?;
            let (x, y) = if plus {
                (x, y)
            } else {
                square_up(x, y, &BigInt::from(dd), 1)
            };
            (BigInt::from(2) * x, y)
        }
        _ => {
            let (x, y, plus) = pqa_unit(d, 0, 1, 1)?;
            let (x, y) = if plus {
                (x, y)
            } else {
                square_up(x, y, &BigInt::from(d), 1)
            };
            (BigInt::from(2) * x, BigInt::from(2) * y)
        }
    };
    debug_assert_eq!(&t0 * &t0 - BigInt::from(d) * &u0 * &u0, BigInt::from(4));
    Ok(PellSolution { d, t0, u0 })
}

/// `R(n) = w sum_{m | n} chi(d)(m)` with `w` the automorph count for `d < 0`
/// and 1 for `d > 0`.
pub fn representation_count(n: u64, d: i64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if gcd(n, d.unsigned_abs()) != 1 {
        return Err(Error::NotCoprime {
            a: n as i128,
            m: d.unsigned_abs() as u128,
        });
    }
    let chi = RealPrimitiveCharacter::new(d)?;
    let w = if d < 0 { automorph_count(d)? as i64 } else { 1 };
    let mut s = 0i64;
    let mut m = 1u64;
    while m * m <= n {
        if n.is_multiple_of(m) {
            s += chi.eval(m as i64) as i64;
            if m * m != n {
                s += chi.eval((n / m) as i64) as i64;
            }
        }
        m += 1;
    }
    Ok((w * s) as u64)
}

/// Lattice count of `f(x, y) = n` summed over a full system of reduced forms
/// of discriminant `d < 0`.
pub fn representation_count_lattice(n: u64, d: i64) -> Result<u64> {
    let forms = reduced_forms(d)?;
    let n = n as i64;
    let mut total = 0u64;
    for f in forms {
        // 4a n = (2a x + b y)^2 + |d| y^2 bounds y
        let y_max = ((4 * f.a * n) as f64 / d.unsigned_abs() as f64).sqrt() as i64 + 1;
        for y in -y_max..=y_max {
            let disc = d * y * y + 4 * f.a * n;
            if disc < 0 {
                continue;
            }
            let Some(r) = arith::perfect_square_root(disc as u64) else {
                continue;
            };
            let r = r as i64;
            let mut roots = vec![-f.b * y + r];
            if r != 0 {
                roots.push(-f.b * y - r);
            }
            for num in roots {
                if num % (2 * f.a) == 0 && f.eval(num / (2 * f.a), y) == n {
                    total += 1;
                }
            }
        }
    }
    Ok(total)
}

/// How a class number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassNumberMethod {
    Reduction,
    Analytic,
}

/// `h(d)` with the evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassNumber {
    pub d: i64,
    pub h: u64,
    pub method: ClassNumberMethod,
    /// `L(1, chi(d))` from the truncated series.
    pub l_value: f64,
    /// Error bound on the unrounded estimate (analytic route) or on the
    /// class-number formula residual (reduction route).
    pub error_bound: f64,
    /// `|L - formula(h)|` for the returned `h`.
    pub residual: f64,
}

/// `h(d)` for a fundamental discriminant: reduced-form count for `d < 0`,
/// rounding of `L(1, chi) sqrt(d) / log(epsilon)` for `d > 0`.
pub fn class_number(d: i64, terms: u64) -> Result<ClassNumber> {
    let chi = RealPrimitiveCharacter::new(d)?;
    let l = analytic::l1_truncated(&chi, terms.max(chi.modulus))?;
    if d < 0 {
        let h = class_number_negative(d)?;
        let w = automorph_count(d)? as f64;
        let formula = 2.0 * std::f64::consts::PI * h as f64 / (w * (-d as f64).sqrt());
        return Ok(ClassNumber {
            d,
            h,
            method: ClassNumberMethod::Reduction,
            l_value: l.value,
            error_bound: l.tail_bound,
            residual: (l.value - formula).abs(),
        });
    }
    let pell = pell_min(d as u64)?;
    let log_eps = pell.log_epsilon();
    let scale = (d as f64).sqrt() / log_eps;
    let estimate = l.value * scale;
    let error_bound = l.tail_bound * scale;
    let h = estimate.round();
    if error_bound >= 0.4 || (estimate - h).abs() + error_bound >= 0.5 || h < 1.0 {
        return Err(Error::TruncationTooCoarse(error_bound));
    }
    Ok(ClassNumber {
        d,
        h: h as u64,
        method: ClassNumberMethod::Analytic,
        l_value: l.value,
        error_bound,
        residual: (l.value - h / scale).abs(),
    })
}
