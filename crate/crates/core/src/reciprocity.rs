//! The sets `X+(d)` and `X-(d)` of odd primes for which `d` is a residue or a
//! non-residue, emitted as explicit unions of congruence classes.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, Congruence};
use crate::error::{Error, Result};
use crate::symbols::{legendre_fast, residue_table};

/// Most odd-multiplicity primes accepted by [`basic_problem`].
pub const MAX_PRIME_SUPPORT: usize = 20;
/// Largest class modulus [`basic_problem`] will enumerate.
pub const MAX_CLASS_MODULUS: u64 = 50_000_000;

/// `{p odd prime : p mod modulus in classes} \ excluded_primes`.
///
/// A modulus of 1 is the sentinel for "every odd prime outside the exclusions"
/// when `classes == [0]`, and for the empty set when `classes` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClassSet {
    pub modulus: u64,
    pub classes: Vec<u64>,
    pub excluded_primes: Vec<u64>,
}

impl ResidueClassSet {
    pub fn contains(&self, p: u64) -> bool {
        if p == 2 || self.excluded_primes.binary_search(&p).is_ok() {
            return false;
        }
        self.classes.binary_search(&(p % self.modulus)).is_ok()
    }
}

/// The pair `(X+, X-)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSplit {
    pub plus: ResidueClassSet,
    pub minus: ResidueClassSet,
}

fn unit_classes(m: u64) -> Vec<u64> {
    (1..m).filter(|&a| gcd(a, m) == 1).collect()
}

fn split(modulus: u64, plus: Vec<u64>, excluded: Vec<u64>) -> ClassSplit {
    let plus_set: BTreeSet<u64> = plus.iter().copied().collect();
    let minus = unit_classes(modulus)
        .into_iter()
        .filter(|a| !plus_set.contains(a))
        .collect();
    ClassSplit {
        plus: ResidueClassSet {
            modulus,
            classes: plus_set.into_iter().collect(),
            excluded_primes: excluded.clone(),
        },
        minus: ResidueClassSet {
            modulus,
            classes: minus,
            excluded_primes: excluded,
        },
    }
}

/// `X+(q)` and `X-(q)` for `q` in `{-1, 2}` or an odd prime.
pub fn fundamental_problem(q: i64) -> Result<ClassSplit> {
    match q {
        -1 => Ok(split(4, vec![1], vec![])),
        2 => Ok(split(8, vec![1, 7], vec![])),
        _ if q > 2 && q % 2 == 1 && arith::is_prime(q as u64) => {
            let q = q as u64;
            let table = residue_table(q)?;
            if q % 4 == 1 {
                return Ok(split(q, table.residues.clone(), vec![]));
            }
            // chi_p(q) = chi_q(p) when p = 1 mod 4 and -chi_q(p) when p = 3 mod 4
            let mut plus = Vec::new();
            for a in 1..q {
                let four_class = if table.is_residue(a) { 1 } else { 3 };
                let c = arith::crt(&[
                    Congruence {
                        residue: four_class,
                        modulus: 4,
                    },
                    Congruence {
                        residue: a,
                        modulus: q,
                    },
                ])?;
                plus.push(c.residue);
            }
            Ok(split(4 * q, plus, vec![]))
        }
        _ => Err(Error::InvalidQ(q)),
    }
}

/// The class modulus: the product of the odd-multiplicity primes when `d > 0`
/// and none of them is 2 or 3 mod 4, and four times that product otherwise.
pub fn class_modulus(d: i64) -> Result<u64> {
    let s = arith::squarefree_split(d)?;
    let prod: u64 = s.pi_odd.iter().product();
    let plain = d > 0 && !s.pi_odd.iter().any(|&p| p == 2 || p % 4 == 3);
    Ok(if plain { prod } else { 4 * prod })
}

/// `X+(d)` and `X-(d)` for nonzero `d`.
///
/// Each even-size subset `E` of the odd-multiplicity primes (with `-1`
/// adjoined for `d < 0`) contributes the primes that are non-residues exactly
/// at `E`; the per-prime class sets are intersected by successive
/// substitution.
pub fn basic_problem(d: i64) -> Result<ClassSplit> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be nonzero".into()));
    }
    let s = arith::squarefree_split(d)?;
    let odd_primes =
        |set: &BTreeSet<u64>| -> Vec<u64> { set.iter().copied().filter(|&p| p != 2).collect() };
    if d > 0 && s.pi_odd.is_empty() {
        let excluded = odd_primes(&s.pi_even);
        return Ok(ClassSplit {
            plus: ResidueClassSet {
                modulus: 1,
                classes: vec![0],
                excluded_primes: excluded.clone(),
            },
            minus: ResidueClassSet {
                modulus: 1,
                classes: vec![],
                excluded_primes: excluded,
            },
        });
    }
    if s.pi_odd.len() > MAX_PRIME_SUPPORT {
        return Err(Error::BudgetExceeded {
            what: "odd-multiplicity prime count",
            value: s.pi_odd.len() as u64,
            limit: MAX_PRIME_SUPPORT as u64,
        });
    }
    let modulus = class_modulus(d)?;
    if modulus > MAX_CLASS_MODULUS {
        return Err(Error::BudgetExceeded {
            what: "class modulus",
            value: modulus,
            limit: MAX_CLASS_MODULUS,
        });
    }
    let mut generators: Vec<i64> = s.pi_odd.iter().map(|&p| p as i64).collect();
    if d < 0 {
        generators.insert(0, -1);
    }
    let splits: Vec<ClassSplit> = generators
        .iter()
        .map(|&q| fundamental_problem(q))
        .collect::<Result<_>>()?;
    let k = generators.len();
    let mut plus: Vec<u64> = Vec::new();
    for mask in 0u32..(1u32 << k) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let factors: Vec<&ResidueClassSet> = (0..k)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    &splits[i].minus
                } else {
                    &splits[i].plus
                }
            })
            .collect();
        intersect_classes(&factors, &mut Vec::new(), &mut plus)?;
    }
    let excluded = odd_primes(&s.pi_even);
    let out = split(modulus, plus, excluded);
    debug_assert_eq!(out.plus.classes.len(), out.minus.classes.len());
    Ok(out)
}

/// Appends every compatible combination of one class per factor.
fn intersect_classes(
    factors: &[&ResidueClassSet],
    chosen: &mut Vec<Congruence>,
    out: &mut Vec<u64>,
) -> Result<()> {
    let depth = chosen.len();
    if depth == factors.len() {
        match arith::successive_substitution(chosen) {
            Ok(c) => out.push(c.residue),
            Err(Error::Incompatible { .. }) => {}
            Err(e) => return Err(e),
        }
        return Ok(());
    }
    let f = factors[depth];
    for &c in &f.classes {
        chosen.push(Congruence {
            residue: c,
            modulus: f.modulus,
        });
        intersect_classes(factors, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// Outcome of checking a class set against direct symbol evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSetReport {
    pub primes_checked: usize,
    pub counterexamples: Vec<u64>,
}

/// For every odd prime `p <= bound`, compares membership with
/// `legendre_fast(d, p) == sign`; primes dividing `d` must be outside the set.
pub fn verify_class_set(
    set: &ResidueClassSet,
    d: i64,
    sign: i8,
    bound: u64,
) -> Result<ClassSetReport> {
    let primes = arith::primes_up_to(bound)?;
    let odd: Vec<u64> = primes.into_iter().filter(|&p| p > 2).collect();
    let counterexamples: Vec<u64> = odd
        .par_iter()
        .filter(|&&p| {
            let expected = legendre_fast(d, p) == sign;
            set.contains(p) != expected
        })
        .copied()
        .collect();
    Ok(ClassSetReport {
        primes_checked: odd.len(),
        counterexamples,
    })
}
