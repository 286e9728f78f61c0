//! Densities of prime sets cut out by residue patterns, computed from ranks of
//! square-free-part incidence matrices over GF(2), plus empirical prime scans.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::symbols::legendre_fast;

/// Bit matrix over GF(2); each row is packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        GF2Matrix {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> Vec<u8> {
        (0..self.cols).map(|j| self.get(i, j) as u8).collect()
    }

    /// Copy with one extra all-ones column appended.
    fn with_ones_column(&self) -> Self {
        let mut m = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            m.set(i, self.cols, true);
        }
        m
    }
}

/// Rank over GF(2) by Gaussian elimination on a working copy.
pub fn gf2_rank(m: &GF2Matrix) -> usize {
    let mut a = m.bits.clone();
    let w = m.words;
    let mut rank = 0;
    for col in 0..m.cols {
        let (word, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..m.rows).find(|&r| a[r * w + word] & bit != 0) else {
            continue;
        };
        if pivot != rank {
            for k in 0..w {
                a.swap(pivot * w + k, rank * w + k);
            }
        }
        for r in 0..m.rows {
            if r != rank && a[r * w + word] & bit != 0 {
                for k in 0..w {
                    a[r * w + k] ^= a[rank * w + k];
                }
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

/// Rows are the vectors of odd-multiplicity primes of each element, over the
/// ascending union of those primes.
pub fn incidence_matrix(s: &[u64]) -> Result<(GF2Matrix, Vec<u64>)> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("S must be nonempty".into()));
    }
    let supports: Vec<BTreeSet<u64>> = s
        .iter()
        .map(|&z| {
            if z == 0 || z > i64::MAX as u64 {
                return Err(Error::InvalidArgument(format!(
                    "element {z} is not a positive machine integer"
                )));
            }
            Ok(arith::squarefree_split(z as i64)?.pi_odd)
        })
        .collect::<Result<_>>()?;
    let labels: Vec<u64> = supports
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut m = GF2Matrix::zeros(s.len(), labels.len());
    for (i, sup) in supports.iter().enumerate() {
        for p in sup {
            let j = labels.binary_search(p).expect("label present");
            m.set(i, j, true);
        }
    }
    Ok((m, labels))
}

/// True iff some odd-size subset of `s` has square product: the row
/// dependency `c` has odd weight exactly when `(0, ..., 0, 1)` lies in the row
/// space of `[M | 1]`, so appending it as a row leaves the rank unchanged.
pub fn obstruction_odd_square(s: &[u64]) -> Result<bool> {
    if s.is_empty() {
        return Ok(false);
    }
    let (m, _) = incidence_matrix(s)?;
    let aug = m.with_ones_column();
    let mut with_target = GF2Matrix::zeros(aug.rows + 1, aug.cols);
    for i in 0..aug.rows {
        for j in 0..aug.cols {
            with_target.set(i, j, aug.get(i, j));
        }
    }
    with_target.set(aug.rows, aug.cols - 1, true);
    Ok(gf2_rank(&with_target) == gf2_rank(&aug))
}

/// True iff some nonempty subset of `s` has square product.
pub fn obstruction_any_square(s: &[u64]) -> Result<bool> {
    if s.is_empty() {
        return Ok(false);
    }
    let (m, _) = incidence_matrix(s)?;
    Ok(gf2_rank(&m) < s.len())
}

/// A density `2^{-exponent}`, or a pattern no prime can realise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    Dyadic { exponent: u32 },
    Obstructed,
}

impl Density {
    pub fn value(&self) -> f64 {
        match *self {
            Density::Dyadic { exponent } => 0.5f64.powi(exponent as i32),
            Density::Obstructed => 0.0,
        }
    }
}

/// Density of `{p : chi_p(z) = 1 for all z in S}`.
pub fn density_residue_set(s: &[u64]) -> Result<Density> {
    let (m, _) = incidence_matrix(s)?;
    Ok(Density::Dyadic {
        exponent: gf2_rank(&m) as u32,
    })
}

/// Density of `{p : chi_p(z) = -1 for all z in S}`.
pub fn density_nonresidue_set(s: &[u64]) -> Result<Density> {
    if obstruction_odd_square(s)? {
        return Ok(Density::Obstructed);
    }
    density_residue_set(s)
}

/// Density of `{p : chi_p(z_i) = eps_i}`; independent of the signs in `eps`.
pub fn density_pattern(s: &[u64], eps: &[i8]) -> Result<Density> {
    if s.len() != eps.len() {
        return Err(Error::InvalidArgument(
            "pattern length differs from set size".into(),
        ));
    }
    if s.is_empty() {
        return Ok(Density::Dyadic { exponent: 0 });
    }
    if obstruction_any_square(s)? {
        return Ok(Density::Obstructed);
    }
    Ok(Density::Dyadic {
        exponent: s.len() as u32,
    })
}

/// Which symbol pattern an empirical scan counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanMode {
    AllPlus,
    AllMinus,
    Pattern(Vec<i8>),
}

impl ScanMode {
    fn target(&self, i: usize) -> i8 {
        match self {
            ScanMode::AllPlus => 1,
            ScanMode::AllMinus => -1,
            ScanMode::Pattern(e) => e[i],
        }
    }
}

/// Result of a prime scan up to `bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDensity {
    pub bound: u64,
    pub primes: usize,
    pub matches: usize,
    pub ratio: f64,
}

/// Fraction of all primes `p <= x` whose symbols on `S` follow `mode`; 2 and
/// primes dividing an element of `S` never match.
pub fn empirical_density(s: &[u64], mode: &ScanMode, x: u64) -> Result<EmpiricalDensity> {
    if let ScanMode::Pattern(e) = mode {
        if e.len() != s.len() {
            return Err(Error::InvalidArgument(
                "pattern length differs from set size".into(),
            ));
        }
    }
    let primes = arith::primes_up_to(x)?;
    let elems: Vec<i64> = s
        .iter()
        .map(|&z| i64::try_from(z).map_err(|_| Error::Overflow))
        .collect::<Result<_>>()?;
    let matches = primes
        .par_iter()
        .filter(|&&p| {
            p != 2
                && elems
                    .iter()
                    .enumerate()
                    .all(|(i, &z)| legendre_fast(z, p) == mode.target(i))
        })
        .count();
    let ratio = if primes.is_empty() {
        0.0
    } else {
        matches as f64 / primes.len() as f64
    };
    Ok(EmpiricalDensity {
        bound: x,
        primes: primes.len(),
        matches,
        ratio,
    })
}

/// `#{N subset of columns : |N meet row| even for every row} = 2^{n - rank}`.
pub fn even_intersection_count(m: &GF2Matrix) -> u128 {
    1u128 << (m.cols() - gf2_rank(m))
}
