//! Shamir's square-root identification protocol over `n = p q` with
//! `p = q = 3 mod 4`, as pure state transitions driven by an injected
//! random generator. Numbers serialize as decimal strings.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::symbols::legendre_fast;

/// Odd suffixes `c` tried before giving up.
pub const SUFFIX_SEARCH_LIMIT: u64 = 1_000_000;
/// Smallest accepted prime size.
pub const MIN_PRIME_BITS: u32 = 16;

/// Public data: the modulus and the concatenated identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PublicKey {
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub n: BigUint,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub w: BigUint,
}

/// Invariants: `p = q = 3 mod 4`, `u^2 = w mod n`, `gcd(u, n) = 1`, and the
/// decimal digits of `w` are those of `ident` followed by those of `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZkpKeys {
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub p: BigUint,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub q: BigUint,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub n: BigUint,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub ident: BigUint,
    pub c: u64,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub w: BigUint,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub u: BigUint,
}

impl ZkpKeys {
    pub fn public(&self) -> PublicKey {
        PublicKey {
            n: self.n.clone(),
            w: self.w.clone(),
        }
    }
}

/// `chi_p(a)` for an odd prime `p`.
fn chi_big(a: &BigUint, p: &BigUint) -> i8 {
    if let Ok(small) = u64::try_from(p) {
        let r = u64::try_from(a % p).expect("reduced below p");
        return legendre_fast(r as i64, small);
    }
    let e = (p - 1u32) >> 1;
    let v = a.modpow(&e, p);
    if v.is_zero() {
        0
    } else if v.is_one() {
        1
    } else {
        -1
    }
}

/// `I` followed by the decimal digits of `c`.
pub fn concatenate(ident: &BigUint, c: u64) -> BigUint {
    let digits = c.to_string().len() as u32;
    ident * BigUint::from(10u32).pow(digits) + c
}

/// Keys from given primes, choosing the smallest odd `c` that makes `w` a
/// residue of both.
pub fn keys_from_primes(p: &BigUint, q: &BigUint, ident: &BigUint) -> Result<ZkpKeys> {
    for x in [p, q] {
        if !arith::is_probable_prime_big(x) || x <= &BigUint::from(2u32) {
            return Err(Error::InvalidArgument(format!("{x} is not an odd prime")));
        }
        if x % 4u32 != BigUint::from(3u32) {
            return Err(Error::NotThreeModFour(x.to_string()));
        }
    }
    if p == q {
        return Err(Error::InvalidArgument("p and q must differ".into()));
    }
    let n = p * q;
    let c = (1..SUFFIX_SEARCH_LIMIT)
        .step_by(2)
        .find(|&c| {
            let w = concatenate(ident, c);
            chi_big(&w, p) == 1 && chi_big(&w, q) == 1
        })
        .ok_or_else(|| Error::SearchExhausted(format!("no odd c below {SUFFIX_SEARCH_LIMIT}")))?;
    let w = concatenate(ident, c);
    let up = w.modpow(&((p + 1u32) >> 2), p);
    let uq = w.modpow(&((q + 1u32) >> 2), q);
    let (u, _) = arith::crt_big(&[
        (BigInt::from(up), BigInt::from(p.clone())),
        (BigInt::from(uq), BigInt::from(q.clone())),
    ])?;
    let u = u.to_biguint().expect("crt result is reduced");
    assert_eq!(u.modpow(&BigUint::from(2u32), &n), &w % &n, "u^2 = w mod n");
    Ok(ZkpKeys {
        p: p.clone(),
        q: q.clone(),
        n,
        ident: ident.clone(),
        c,
        w,
        u,
    })
}

/// Uniform on `[0, bound)`.
fn random_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let mask = if bits.is_multiple_of(8) {
        0xff
    } else {
        (1u8 << (bits % 8)) - 1
    };
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[bytes - 1] &= mask;
        let v = BigUint::from_bytes_le(&buf);
        if &v < bound {
            return v;
        }
    }
}

/// A random prime of exactly `bits` bits congruent to 3 mod 4.
pub fn random_prime_3_mod_4<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> BigUint {
    let top = BigUint::one() << (bits - 1);
    loop {
        let mut cand = random_below(&top, rng) + &top;
        cand |= BigUint::from(3u32);
        if arith::is_probable_prime_big(&cand) {
            return cand;
        }
    }
}

pub fn keygen<R: Rng + ?Sized>(prime_bits: u32, ident: &BigUint, rng: &mut R) -> Result<ZkpKeys> {
    if prime_bits < MIN_PRIME_BITS {
        return Err(Error::InvalidArgument(format!(
            "primes need at least {MIN_PRIME_BITS} bits"
        )));
    }
    let p = random_prime_3_mod_4(prime_bits, rng);
    let mut q = random_prime_3_mod_4(prime_bits, rng);
    while q == p {
        q = random_prime_3_mod_4(prime_bits, rng);
    }
    keys_from_primes(&p, &q, ident)
}

/// The prover's opening message and its secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commitment {
    pub x: BigUint,
    pub y: BigUint,
    pub r: BigUint,
}

fn inverse(a: &BigUint, n: &BigUint) -> Option<BigUint> {
    let inv = arith::mod_inverse_big(&BigInt::from(a.clone()), &BigInt::from(n.clone())).ok()?;
    inv.to_biguint()
}

fn random_unit<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    loop {
        let r = random_below(n, rng);
        if !r.is_zero() && r.gcd(n).is_one() {
            return r;
        }
    }
}

/// `x = r^2`, `y = w / x mod n`.
pub fn commit_with(public: &PublicKey, r: &BigUint) -> Result<Commitment> {
    let n = &public.n;
    let x = (r * r) % n;
    let xbar =
        inverse(&x, n).ok_or_else(|| Error::InvalidArgument("r shares a factor with n".into()))?;
    let y = (&public.w * xbar) % n;
    Ok(Commitment { x, y, r: r.clone() })
}

pub fn prover_commit<R: Rng + ?Sized>(keys: &ZkpKeys, rng: &mut R) -> Commitment {
    let r = random_unit(&keys.n, rng);
    commit_with(&keys.public(), &r).expect("r is a unit")
}

pub fn verifier_challenge<R: Rng + ?Sized>(rng: &mut R) -> u8 {
    rng.random_range(0..2u8)
}

/// `r` for `b = 0`, `u / r mod n` for `b = 1`.
pub fn prover_respond(keys: &ZkpKeys, r: &BigUint, bit: u8) -> BigUint {
    if bit == 0 {
        r.clone()
    } else {
        (&keys.u * inverse(r, &keys.n).expect("r is a unit")) % &keys.n
    }
}

/// `x y = w`, then `response^2 = x` for `b = 0` or `response^2 = y` for `b = 1`.
/// Out-of-range responses are rejected.
pub fn verifier_check(
    public: &PublicKey,
    x: &BigUint,
    y: &BigUint,
    bit: u8,
    response: &BigUint,
) -> bool {
    let n = &public.n;
    if x >= n || y >= n || response >= n || bit > 1 {
        return false;
    }
    if (x * y) % n != &public.w % n {
        return false;
    }
    let sq = (response * response) % n;
    if bit == 0 {
        &sq == x
    } else {
        &sq == y
    }
}

/// One round as recorded by the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: u32,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub x: BigUint,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub y: BigUint,
    pub b: u8,
    #[serde(serialize_with = "arith::serialize_decimal")]
    pub response: BigUint,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    Running,
    Accepted,
    Rejected,
}

/// Verifier-side state; stops at the first failed round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZkpSession {
    pub public: PublicKey,
    pub rounds: Vec<RoundRecord>,
    pub status: SessionStatus,
}

impl ZkpSession {
    pub fn new(public: PublicKey) -> Self {
        ZkpSession {
            public,
            rounds: Vec::new(),
            status: SessionStatus::Running,
        }
    }

    /// Checks and records one round; returns its verdict.
    pub fn record(&mut self, x: BigUint, y: BigUint, b: u8, response: BigUint) -> bool {
        let ok = self.status == SessionStatus::Running
            && verifier_check(&self.public, &x, &y, b, &response);
        self.rounds.push(RoundRecord {
            round: self.rounds.len() as u32 + 1,
            x,
            y,
            b,
            response,
            ok,
        });
        if !ok {
            self.status = SessionStatus::Rejected;
        }
        ok
    }

    pub fn finish(&mut self) {
        if self.status == SessionStatus::Running {
            self.status = SessionStatus::Accepted;
        }
    }

    pub fn accepted(&self) -> bool {
        self.status == SessionStatus::Accepted
    }

    /// One JSON object per round.
    pub fn to_json_lines(&self) -> String {
        self.rounds
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect()
    }
}

pub fn honest_session<R: Rng + ?Sized>(keys: &ZkpKeys, rounds: u32, rng: &mut R) -> ZkpSession {
    let mut session = ZkpSession::new(keys.public());
    for _ in 0..rounds {
        let c = prover_commit(keys, rng);
        let b = verifier_challenge(rng);
        let resp = prover_respond(keys, &c.r, b);
        if !session.record(c.x, c.y, b, resp) {
            break;
        }
    }
    session.finish();
    session
}

/// A prover without `u` that prepares each round for a guessed challenge:
/// for guess 0 it commits `x = r^2`, for guess 1 it commits `y = s^2`,
/// `x = w / y`. With `secret` the harness can also answer the other branch.
pub fn impostor_session<R: Rng + ?Sized>(
    public: &PublicKey,
    secret: Option<&BigUint>,
    rounds: u32,
    rng: &mut R,
) -> ZkpSession {
    let n = &public.n;
    let mut session = ZkpSession::new(public.clone());
    for _ in 0..rounds {
        let guess = rng.random_range(0..2u8);
        let t = random_unit(n, rng);
        let (x, y) = if guess == 0 {
            let c = commit_with(public, &t).expect("t is a unit");
            (c.x, c.y)
        } else {
            let y = (&t * &t) % n;
            let x = (&public.w * inverse(&y, n).expect("t is a unit")) % n;
            (x, y)
        };
        let b = verifier_challenge(rng);
        let response = match (b == guess, secret) {
            (true, _) => t.clone(),
            (false, Some(u)) => (u * inverse(&t, n).expect("unit")) % n,
            (false, None) => t.clone(),
        };
        if !session.record(x, y, b, response) {
            break;
        }
    }
    session.finish();
    session
}

/// Independent deterministic stream `index` under `seed`.
pub fn session_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
