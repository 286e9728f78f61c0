//! Square roots and quadratic congruences modulo primes, prime powers and
//! composites.

use crate::arith::{self, mul_mod, Congruence};
use crate::error::{Error, Result};
use crate::symbols::legendre_fast;

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

fn reduce(z: i64, m: u64) -> u64 {
    (z as i128).rem_euclid(m as i128) as u64
}

/// Sorted roots of `x^2 = z mod p` for an odd prime `p`.
pub fn sqrt_mod_p(z: i64, p: u64) -> Result<Vec<u64>> {
    require_odd_prime(p)?;
    let z = reduce(z, p);
    if z == 0 {
        return Ok(vec![0]);
    }
    if legendre_fast(z as i64, p) != 1 {
        return Ok(Vec::new());
    }
    let x = if p % 4 == 3 {
        arith::mod_pow(z as i64, (p + 1) / 4, p)
    } else {
        tonelli_shanks(z, p)
    };
    debug_assert_eq!(mul_mod(x, x, p), z);
    if mul_mod(x, x, p) != z {
        return Err(Error::InvalidArgument(format!(
            "square-root check failed for {z} mod {p}"
        )));
    }
    let mut roots = vec![x, p - x];
    roots.sort_unstable();
    Ok(roots)
}

/// Order-2^k descent for a residue `z` of `p = 1 mod 4`.
fn tonelli_shanks(z: u64, p: u64) -> u64 {
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut n = 2u64;
    while legendre_fast(n as i64, p) != -1 {
        n += 1;
    }
    let mut m = s;
    let mut c = arith::mod_pow(n as i64, q, p);
    let mut t = arith::mod_pow(z as i64, q, p);
    let mut r = arith::mod_pow(z as i64, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul_mod(b, b, p);
        }
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Roots of `x^2 = z mod p^beta` for `p` not dividing `z`.
fn unit_roots(z: u64, p: u64, beta: u32) -> Result<Vec<u64>> {
    let m = p.pow(beta);
    let z = z % m;
    if p == 2 {
        return Ok(match beta {
            1 => vec![1],
            2 if z % 4 == 1 => vec![1, 3],
            2 => vec![],
            _ if z % 8 != 1 => vec![],
            _ => {
                let mut x = 1u64;
                for k in 3..beta {
                    // x^2 = z mod 2^k; fix the next bit
                    let mk = 1u64 << (k + 1);
                    if mul_mod(x, x, mk) != z % mk {
                        x += 1 << (k - 1);
                    }
                }
                let half = 1u64 << (beta - 1);
                let mut v = vec![x % m, (m - x) % m, (x + half) % m, (m - x + half) % m];
                v.sort_unstable();
                v.dedup();
                v
            }
        });
    }
    let base = sqrt_mod_p(z as i64, p)?;
    let Some(&x0) = base.first() else {
        return Ok(Vec::new());
    };
    let mut x = x0;
    let mut pk = p;
    for _ in 1..beta {
        let next = pk * p;
        // Hensel step x <- x - (x^2 - z) / (2x)
        let fx = (mul_mod(x, x, next) as i128 - (z % next) as i128).rem_euclid(next as i128) as u64;
        let inv = arith::mod_inverse_i128(2 * x as i128, next)?;
        let delta = mul_mod(fx, inv, next);
        x = (x + next - delta) % next;
        pk = next;
    }
    let mut v = vec![x, (m - x) % m];
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Every root of `x^2 = z mod p^alpha` in `[0, p^alpha - 1]`, assembled from the
/// unit case, the even-multiplicity case and the divisible case.
pub fn sqrt_mod_prime_power(z: i64, p: u64, alpha: u32) -> Result<Vec<u64>> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if alpha == 0 {
        return Err(Error::InvalidArgument("exponent must be at least 1".into()));
    }
    let m = p.checked_pow(alpha).ok_or(Error::Overflow)?;
    let z = reduce(z, m);
    if z == 0 {
        let k = alpha.div_ceil(2);
        let step = p.pow(k);
        let count = p.pow(alpha - k);
        return Ok((0..count).map(|i| i * step).collect());
    }
    let mut nu = 0u32;
    let mut z1 = z;
    while z1.is_multiple_of(p) {
        z1 /= p;
        nu += 1;
    }
    if nu % 2 == 1 {
        return Ok(Vec::new());
    }
    let mu = nu / 2;
    if mu == 0 {
        return unit_roots(z, p, alpha);
    }
    let inner = unit_roots(z1, p, alpha - 2 * mu)?;
    let p_mu = p.pow(mu);
    let step = p.pow(alpha - mu);
    let mut out: Vec<u64> = inner
        .iter()
        .flat_map(|&s| (0..p_mu).map(move |i| s * p_mu + i * step))
        .map(|x| x % m)
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Roots modulo a composite, combined by the Chinese remainder theorem over
/// the prime-power factors of `n`.
pub fn sqrt_mod_composite(z: i64, n: u64) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let f = arith::factorize(i64::try_from(n).map_err(|_| Error::Overflow)?)?;
    let mut acc: Vec<Congruence> = Vec::new();
    let mut first = true;
    for (p, e) in f.factors {
        let pe = p.pow(e);
        let roots = sqrt_mod_prime_power(z, p, e)?;
        if roots.is_empty() {
            return Ok(Vec::new());
        }
        let local: Vec<Congruence> = roots
            .into_iter()
            .map(|r| Congruence {
                residue: r,
                modulus: pe,
            })
            .collect();
        if first {
            acc = local;
            first = false;
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for a in &acc {
            for b in &local {
                next.push(arith::crt(&[*a, *b])?);
            }
        }
        acc = next;
    }
    let mut out: Vec<u64> = acc.into_iter().map(|c| c.residue).collect();
    out.sort_unstable();
    for &x in &out {
        debug_assert_eq!(mul_mod(x, x, n), reduce(z, n));
    }
    Ok(out)
}

/// `a x^2 + b x + c = 0 mod p` via `x = (+-s - b)(2a)^{-1}` with `s^2 = b^2 - 4ac`.
pub fn solve_quadratic_mod_p(a: i64, b: i64, c: i64, p: u64) -> Result<Vec<u64>> {
    require_odd_prime(p)?;
    let (a, b, c) = (reduce(a, p), reduce(b, p), reduce(c, p));
    if a == 0 {
        return Err(Error::LeadingCoeffZero(p));
    }
    let disc = (mul_mod(b, b, p) + p - mul_mod(4 % p, mul_mod(a, c, p), p)) % p;
    let inv2a = arith::mod_inverse_i128(2 * a as i128, p)?;
    let mut out: Vec<u64> = sqrt_mod_p(disc as i64, p)?
        .into_iter()
        .map(|s| mul_mod((s + p - b) % p, inv2a, p))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `a x^2 + b x + c = 0 mod m` through `(2ax + b)^2 = b^2 - 4ac mod 4am`.
pub fn solve_quadratic_mod_m(a: i64, b: i64, c: i64, m: u64) -> Result<Vec<u64>> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let (a, b, c) = (reduce(a, m), reduce(b, m), reduce(c, m));
    if a == 0 {
        return Err(Error::LeadingCoeffZero(m));
    }
    let big = (4 * a as u128)
        .checked_mul(m as u128)
        .filter(|&v| v <= i64::MAX as u128)
        .ok_or(Error::Overflow)? as u64;
    let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
    let disc = disc.rem_euclid(big as i128) as i64;
    let two_a = 2 * a;
    let mut out: Vec<u64> = Vec::new();
    for s in sqrt_mod_composite(disc, big)? {
        let diff = (s as i128 - b as i128).rem_euclid(big as i128) as u64;
        if !diff.is_multiple_of(two_a) {
            continue;
        }
        // 2a x = s - b mod 4am  <=>  x = (s - b)/(2a) mod 2m
        let x = (diff / two_a) % (2 * m);
        out.push(x % m);
    }
    out.sort_unstable();
    out.dedup();
    out.retain(|&x| {
        let v = (a as u128 * x as u128 % m as u128 * x as u128 + b as u128 * x as u128 + c as u128)
            % m as u128;
        v == 0
    });
    Ok(out)
}
