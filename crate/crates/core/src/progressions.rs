//! Residue patterns along unions of arithmetic progressions.
//!
//! A family `AP(B, S)` consists of the sets `union_i (b_i n + S_i)` for
//! `n >= 1`. Its asymptotics are governed by the rational sets `b_i^{-1} S_i`:
//! how they overlap fixes the exponent `alpha - e`, and the even subsets
//! `Lambda` of the overlap patterns fix which primes can carry the pattern at
//! all. Indices into `B` are 0-based throughout.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::density;
use crate::error::{Error, Result};
use crate::symbols::legendre_fast;

/// Largest number of distinct progressions accepted.
pub const MAX_PROGRESSIONS: usize = 20;

type Q = Ratio<i64>;

/// `(B, S)`: distinct positive `b_i` and nonempty finite `S_i` of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct APFamilySpec {
    pub b: Vec<u64>,
    pub s: Vec<Vec<u64>>,
}

impl APFamilySpec {
    pub fn new(b: Vec<u64>, s: Vec<Vec<u64>>) -> Result<Self> {
        if b.is_empty() || b.len() != s.len() {
            return Err(Error::InvalidArgument(
                "B and S must be nonempty and of equal length".into(),
            ));
        }
        if b.len() > MAX_PROGRESSIONS {
            return Err(Error::BudgetExceeded {
                what: "progression count",
                value: b.len() as u64,
                limit: MAX_PROGRESSIONS as u64,
            });
        }
        if b.contains(&0) || b.iter().collect::<BTreeSet<_>>().len() != b.len() {
            return Err(Error::InvalidArgument(
                "B must be distinct positive integers".into(),
            ));
        }
        let mut sets = Vec::with_capacity(s.len());
        for si in s {
            let set: BTreeSet<u64> = si.iter().copied().collect();
            if set.is_empty() || set.len() != si.len() {
                return Err(Error::InvalidArgument(
                    "each S_i must be nonempty with distinct elements".into(),
                ));
            }
            sets.push(set.into_iter().collect());
        }
        Ok(APFamilySpec { b, s: sets })
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    pub fn alpha(&self) -> usize {
        self.s.iter().map(Vec::len).sum()
    }

    pub fn b_max(&self) -> u64 {
        *self.b.iter().max().expect("nonempty")
    }

    /// The largest `n` with every element of the `n`-th set at most `p - 1`.
    pub fn last_n(&self, p: u64) -> u64 {
        self.b
            .iter()
            .zip(&self.s)
            .map(|(&b, s)| (p - 1).saturating_sub(*s.last().unwrap()) / b)
            .min()
            .unwrap()
    }

    /// `b_i^{-1} S_i`.
    pub fn rational_sets(&self) -> Vec<Vec<Q>> {
        self.b
            .iter()
            .zip(&self.s)
            .map(|(&b, s)| s.iter().map(|&x| Q::new(x as i64, b as i64)).collect())
            .collect()
    }
}

/// `(a, b)` with `(a_i, b_i)` pairwise distinct, `a_i >= 0`, `b_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardTuple {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl StandardTuple {
    pub fn new(a: Vec<u64>, b: Vec<u64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() || b.contains(&0) {
            return Err(Error::InvalidArgument(
                "a and b must be nonempty, equal length, b positive".into(),
            ));
        }
        let pairs: BTreeSet<(u64, u64)> = a.iter().copied().zip(b.iter().copied()).collect();
        if pairs.len() != a.len() {
            return Err(Error::InvalidArgument(
                "pairs (a_i, b_i) must be distinct".into(),
            ));
        }
        Ok(StandardTuple { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Distinct `b` coordinates and `a_i b_j != a_j b_i` for `i != j`.
    pub fn is_admissible(&self) -> bool {
        let k = self.len();
        if k < 2 || self.b.iter().collect::<BTreeSet<_>>().len() != k {
            return false;
        }
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                (self.a[i] as i128) * (self.b[j] as i128)
                    != (self.a[j] as i128) * (self.b[i] as i128)
            })
        })
    }

    /// `q_i = a_i / b_i`.
    pub fn quotients(&self) -> Vec<Q> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(&a, &b)| Q::new(a as i64, b as i64))
            .collect()
    }

    /// Groups coordinates by distinct `b` (in order of first appearance) with
    /// `S = union_{a in A(b)} {a + b j : 0 <= j < s}`.
    pub fn to_spec(&self, s: u64) -> Result<APFamilySpec> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be positive".into()));
        }
        let mut order: Vec<u64> = Vec::new();
        let mut groups: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for (&a, &b) in self.a.iter().zip(&self.b) {
            if !groups.contains_key(&b) {
                order.push(b);
            }
            let g = groups.entry(b).or_default();
            for j in 0..s {
                g.insert(a + b * j);
            }
        }
        let sets = order
            .iter()
            .map(|b| groups[b].iter().copied().collect())
            .collect();
        APFamilySpec::new(order, sets)
    }
}

/// Parameters driving the asymptotics of `q_epsilon(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct APParameters {
    pub alpha: usize,
    pub b_max: u64,
    /// The sets `K` with `T(K)` nonempty, sorted.
    pub k_max: Vec<Vec<usize>>,
    /// `T(K)` for each entry of `k_max`, as `(numerator, denominator)` pairs.
    pub t_sets: Vec<Vec<(i64, i64)>>,
    pub e: usize,
    /// `|union_i b_i^{-1} S_i|`.
    pub union_size: usize,
    /// Nonempty even-size subsets of the members of `k_max`, sorted.
    pub lambda: Vec<Vec<usize>>,
}

impl APParameters {
    /// True when the sets `b_i^{-1} S_i` are pairwise disjoint.
    pub fn disjoint(&self) -> bool {
        self.k_max.iter().all(|k| k.len() == 1)
    }

    /// `p / (b 2^{alpha - e})`.
    pub fn predicted_count(&self, p: u64) -> f64 {
        p as f64 / (self.b_max as f64 * 2f64.powi((self.alpha - self.e) as i32))
    }
}

/// Nonempty even-cardinality subsets of `k`.
pub fn even_subsets(k: &[usize]) -> Vec<Vec<usize>> {
    let n = k.len();
    (1u64..(1 << n))
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| k[i]).collect())
        .collect()
}

/// `alpha`, `K_max`, `T(K)`, `e` and `Lambda` from the membership pattern
/// `K(t) = {i : t in b_i^{-1} S_i}` of each rational point `t`.
pub fn compute_parameters(spec: &APFamilySpec) -> Result<APParameters> {
    if spec.k() > MAX_PROGRESSIONS {
        return Err(Error::BudgetExceeded {
            what: "progression count",
            value: spec.k() as u64,
            limit: MAX_PROGRESSIONS as u64,
        });
    }
    let mut membership: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (i, set) in spec.rational_sets().into_iter().enumerate() {
        for t in set {
            membership.entry(t).or_default().push(i);
        }
    }
    let mut t_of: BTreeMap<Vec<usize>, Vec<Q>> = BTreeMap::new();
    for (t, k) in &membership {
        t_of.entry(k.clone()).or_default().push(*t);
    }
    let alpha = spec.alpha();
    let e: usize = t_of.iter().map(|(k, t)| t.len() * (k.len() - 1)).sum();
    let union_size = membership.len();
    assert_eq!(alpha - e, union_size, "alpha - e must count the union");
    let lambda: BTreeSet<Vec<usize>> = t_of.keys().flat_map(|k| even_subsets(k)).collect();
    Ok(APParameters {
        alpha,
        b_max: spec.b_max(),
        k_max: t_of.keys().cloned().collect(),
        t_sets: t_of
            .values()
            .map(|ts| ts.iter().map(|q| (*q.numer(), *q.denom())).collect())
            .collect(),
        e,
        union_size,
        lambda: lambda.into_iter().collect(),
    })
}

/// How an odd prime relates to the signature of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeClass {
    Plus,
    Minus,
    NotAllowable,
}

/// `chi_p(prod_{i in I} b_i)` for each `I` in `Lambda`.
pub fn signature(p: u64, spec: &APFamilySpec, params: &APParameters) -> Vec<i8> {
    let chis: Vec<i8> = spec.b.iter().map(|&b| legendre_fast(b as i64, p)).collect();
    params
        .lambda
        .iter()
        .map(|i| i.iter().map(|&j| chis[j]).product())
        .collect()
}

pub fn classify(p: u64, spec: &APFamilySpec, params: &APParameters) -> PrimeClass {
    if spec.b.iter().any(|&b| b % p == 0) {
        return PrimeClass::NotAllowable;
    }
    if signature(p, spec, params).iter().all(|&x| x == 1) {
        PrimeClass::Plus
    } else {
        PrimeClass::Minus
    }
}

/// `#{n >= 1 : every element of union_i (b_i n + S_i) is in [1, p-1] with chi_p = eps}`.
pub fn count_q_epsilon(p: u64, spec: &APFamilySpec, eps: i8) -> u64 {
    let last = spec.last_n(p);
    let elems: Vec<(u64, u64)> = spec
        .b
        .iter()
        .zip(&spec.s)
        .flat_map(|(&b, s)| s.iter().map(move |&x| (b, x)))
        .collect();
    (1..=last)
        .into_par_iter()
        .filter(|&n| {
            elems
                .iter()
                .all(|&(b, x)| legendre_fast((b * n + x) as i64, p) == eps)
        })
        .count() as u64
}

/// `W = union_j {i b_j : 0 <= i < s}`, sorted.
pub fn ap_b_offsets(b: &[u64], s: u64) -> Vec<u64> {
    let w: BTreeSet<u64> = b
        .iter()
        .flat_map(|&bj| (0..s).map(move |i| i * bj))
        .collect();
    w.into_iter().collect()
}

/// `gamma = |W|`.
pub fn gamma(b: &[u64], s: u64) -> usize {
    ap_b_offsets(b, s).len()
}

/// `1 + max(b) (s - 1)`.
pub fn support_exponent(b: &[u64], s: u64) -> u64 {
    1 + b.iter().max().copied().unwrap_or(0) * (s.saturating_sub(1))
}

/// `(c_eps, c_sigma)` for the translates `n + W`, `n >= 1`, inside `[1, p-1]`:
/// `c_eps` counts translates whose symbols read `eps` in increasing order and
/// `c_sigma` counts translates equal to the residues of `p` in their span.
pub fn count_patterns_ap_b(b: &[u64], s: u64, p: u64, eps: &[i8]) -> Result<(u64, u64)> {
    if b.is_empty() || b.contains(&0) || s == 0 {
        return Err(Error::InvalidArgument(
            "b must be positive and s >= 1".into(),
        ));
    }
    let w = ap_b_offsets(b, s);
    if eps.len() != w.len() {
        return Err(Error::InvalidArgument(format!(
            "pattern needs {} signs, got {}",
            w.len(),
            eps.len()
        )));
    }
    let span = *w.last().unwrap();
    if span + 1 >= p {
        return Ok((0, 0));
    }
    let chi: Vec<i8> = (0..p as i64).map(|n| legendre_fast(n, p)).collect();
    let mut in_w = vec![false; span as usize + 1];
    for &x in &w {
        in_w[x as usize] = true;
    }
    let last = p - 1 - span;
    let c_eps = (1..=last)
        .filter(|&n| w.iter().zip(eps).all(|(&x, &e)| chi[(n + x) as usize] == e))
        .count() as u64;
    let c_sigma = (1..=last)
        .filter(|&n| (0..=span).all(|x| (chi[(n + x) as usize] == 1) == in_w[x as usize]))
        .count() as u64;
    Ok((c_eps, c_sigma))
}

/// The quotient diagram of an admissible tuple for progression length `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientDiagram {
    pub s: u64,
    /// Classes of indices whose quotients differ by integers, size >= 2,
    /// each sorted by quotient.
    pub classes: Vec<Vec<usize>>,
    /// Consecutive quotient distances within each class.
    pub class_gaps: Vec<Vec<i64>>,
    /// Maximal runs of a class with consecutive distances at most `s - 1`.
    pub blocks: Vec<Vec<usize>>,
    pub block_gaps: Vec<Vec<i64>>,
    /// Projections of the columns of every block.
    pub columns: Vec<Vec<usize>>,
    pub e: usize,
    pub lambda: Vec<Vec<usize>>,
}

pub fn quotient_diagram(t: &StandardTuple, s: u64) -> Result<QuotientDiagram> {
    if !t.is_admissible() {
        return Err(Error::NotAdmissible(format!("{:?} / {:?}", t.a, t.b)));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    let q = t.quotients();
    let mut by_fraction: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (i, qi) in q.iter().enumerate() {
        by_fraction.entry(qi.fract()).or_default().push(i);
    }
    let si = s as i64;
    let mut diagram = QuotientDiagram {
        s,
        classes: Vec::new(),
        class_gaps: Vec::new(),
        blocks: Vec::new(),
        block_gaps: Vec::new(),
        columns: Vec::new(),
        e: 0,
        lambda: Vec::new(),
    };
    for mut class in by_fraction.into_values().filter(|c| c.len() >= 2) {
        class.sort_by_key(|&i| q[i]);
        let gaps: Vec<i64> = class
            .windows(2)
            .map(|w| (q[w[1]] - q[w[0]]).to_integer())
            .collect();
        diagram.e += gaps
            .iter()
            .filter(|&&g| g < si)
            .map(|&g| (si - g) as usize)
            .sum::<usize>();
        let mut start = 0;
        for cut in 0..=gaps.len() {
            if cut == gaps.len() || gaps[cut] >= si {
                if cut > start {
                    diagram.blocks.push(class[start..=cut].to_vec());
                    diagram.block_gaps.push(gaps[start..cut].to_vec());
                }
                start = cut + 1;
            }
        }
        diagram.classes.push(class);
        diagram.class_gaps.push(gaps);
    }
    let mut lambda = BTreeSet::new();
    for block in &diagram.blocks {
        let origin = q[block[0]];
        let offsets: Vec<i64> = block
            .iter()
            .map(|&j| (q[j] - origin).to_integer())
            .collect();
        let width = offsets.last().unwrap() + si;
        for x in 0..width {
            let mut theta: Vec<usize> = block
                .iter()
                .zip(&offsets)
                .filter(|(_, &o)| o <= x && x < o + si)
                .map(|(&j, _)| j)
                .collect();
            theta.sort_unstable();
            lambda.extend(even_subsets(&theta));
            diagram.columns.push(theta);
        }
    }
    diagram.lambda = lambda.into_iter().collect();
    Ok(diagram)
}

/// `a_{i+1} = t_i (a_i + d_i b_i)`, `b_{i+1} = t_i b_i`, so that consecutive
/// quotients differ by `d_i`.
pub fn generate_tuple(d: &[u64], t: &[u64], seed: (u64, u64)) -> Result<StandardTuple> {
    if d.len() != t.len() {
        return Err(Error::InvalidArgument(
            "d and t must have equal length".into(),
        ));
    }
    if d.contains(&0) || t.iter().any(|&x| x < 2) || seed.1 == 0 {
        return Err(Error::InvalidArgument(
            "need d_i >= 1, t_i >= 2 and b_1 >= 1".into(),
        ));
    }
    let (mut a, mut b) = (vec![seed.0], vec![seed.1]);
    for (&di, &ti) in d.iter().zip(t) {
        let (ai, bi) = (*a.last().unwrap(), *b.last().unwrap());
        let next_a = di
            .checked_mul(bi)
            .and_then(|x| x.checked_add(ai))
            .and_then(|x| x.checked_mul(ti))
            .ok_or(Error::Overflow)?;
        let next_b = bi.checked_mul(ti).ok_or(Error::Overflow)?;
        a.push(next_a);
        b.push(next_b);
    }
    let tuple = StandardTuple::new(a, b)?;
    let q = tuple.quotients();
    for i in 1..q.len() {
        debug_assert_eq!(q[i] - q[i - 1], Q::from_integer(d[i - 1] as i64));
    }
    Ok(tuple)
}

/// Which closed form applies to a `Pi_+` density, by the shape of the set
/// `M_1` of overlap subsets containing the index whose square-free part is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityFormula {
    /// `2^{m - sigma}`: `M_1` is empty or all of its block's subsets.
    BlockPower,
    /// `2^{1 - sigma} (2^m - 1)`: `M_1` is a proper nonempty part of its block's subsets.
    UnitSplit,
}

/// Theoretical and scanned density of the primes with positive signature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiPlusDensity {
    pub blocks: usize,
    pub sigma: usize,
    pub formula: DensityFormula,
    /// Value of the closed form selected by `formula`.
    pub closed_form: f64,
    /// `2^{-rank}` of the square-free supports of `prod_{i in I} b_i`, `I in Lambda`.
    pub rank_density: f64,
    pub allowable_primes: usize,
    pub plus_primes: usize,
    pub empirical: f64,
}

/// Density of `Pi_+` for an admissible tuple whose `b` coordinates have
/// distinct square-free parts, no product of the parts other than 1 being a
/// square.
pub fn pi_plus_density(t: &StandardTuple, s: u64, x: u64) -> Result<PiPlusDensity> {
    let diagram = quotient_diagram(t, s)?;
    let sf: Vec<u64> =
        t.b.iter()
            .map(|&b| Ok(arith::squarefree_split(b as i64)?.sigma))
            .collect::<Result<_>>()?;
    if sf.iter().collect::<BTreeSet<_>>().len() != sf.len() {
        return Err(Error::DensityCondition(
            "square-free parts are not distinct".into(),
        ));
    }
    let non_unit: Vec<u64> = sf.iter().copied().filter(|&v| v != 1).collect();
    if !non_unit.is_empty() && density::obstruction_any_square(&non_unit)? {
        return Err(Error::DensityCondition(
            "a product of square-free parts is a square".into(),
        ));
    }
    let m = diagram.blocks.len();
    let sigma: usize = diagram.blocks.iter().map(Vec::len).sum();
    let unit = sf.iter().position(|&v| v == 1);
    let m1: Vec<&Vec<usize>> = diagram
        .lambda
        .iter()
        .filter(|i| unit.is_some_and(|u| i.contains(&u)))
        .collect();
    let formula = match unit.and_then(|u| diagram.blocks.iter().find(|b| b.contains(&u))) {
        Some(block) if !m1.is_empty() => {
            let lambda_i0: Vec<&Vec<usize>> = diagram
                .lambda
                .iter()
                .filter(|i| i.iter().all(|j| block.contains(j)))
                .collect();
            if m1 == lambda_i0 {
                DensityFormula::BlockPower
            } else {
                DensityFormula::UnitSplit
            }
        }
        _ => DensityFormula::BlockPower,
    };
    let closed_form = match formula {
        DensityFormula::BlockPower => 2f64.powi(m as i32 - sigma as i32),
        DensityFormula::UnitSplit => 2f64.powi(1 - sigma as i32) * (2f64.powi(m as i32) - 1.0),
    };
    let rank_density = 0.5f64.powi(lambda_rank(&sf, &diagram.lambda)? as i32);
    let spec = t.to_spec(s)?;
    let params = compute_parameters(&spec)?;
    let primes = arith::primes_up_to(x)?;
    let classes: Vec<PrimeClass> = primes
        .par_iter()
        .filter(|&&p| p > 2)
        .map(|&p| classify(p, &spec, &params))
        .collect();
    let allowable = classes
        .iter()
        .filter(|&&c| c != PrimeClass::NotAllowable)
        .count();
    let plus = classes.iter().filter(|&&c| c == PrimeClass::Plus).count();
    Ok(PiPlusDensity {
        blocks: m,
        sigma,
        formula,
        closed_form,
        rank_density,
        allowable_primes: allowable,
        plus_primes: plus,
        empirical: if allowable == 0 {
            0.0
        } else {
            plus as f64 / allowable as f64
        },
    })
}

/// GF(2) rank of the odd-prime supports of `prod_{i in I} sf_i` over `I in lambda`.
fn lambda_rank(sf: &[u64], lambda: &[Vec<usize>]) -> Result<usize> {
    if lambda.is_empty() {
        return Ok(0);
    }
    let (m, _) = density::incidence_matrix(sf)?;
    let rows: Vec<Vec<u8>> = lambda
        .iter()
        .map(|set| {
            (0..m.cols())
                .map(|j| set.iter().filter(|&&i| m.get(i, j)).count() as u8 % 2)
                .collect()
        })
        .collect();
    if m.cols() == 0 {
        return Ok(0);
    }
    Ok(density::gf2_rank(&density::GF2Matrix::from_rows(&rows)))
}
