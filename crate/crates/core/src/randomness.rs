//! Short character sums `S_h(x) = sum_{n=x+1}^{x+h} chi_p(n)` as random
//! variables on `[0, p-1]`: their moments, moment envelopes and distance to
//! the standard normal law. The argument `n` is read modulo `p`.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::arith;
use crate::error::{Error, Result};
use crate::symbols::legendre_fast;

/// Largest moment order accepted.
pub const MAX_MOMENT: u32 = 8;

/// `floor(ln(p)^2)`.
pub fn canonical_h(p: u64) -> u64 {
    let l = (p as f64).ln();
    (l * l).floor() as u64
}

fn check_args(p: u64, h: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if h == 0 || h >= p {
        return Err(Error::InvalidArgument(format!(
            "need 0 < h < p, got h = {h}"
        )));
    }
    Ok(())
}

/// `S_h(x)` for `x = 0, ..., p-1`.
pub fn excess_ensemble(p: u64, h: u64) -> Result<Vec<i64>> {
    check_args(p, h)?;
    let chi: Vec<i64> = (0..p as i64).map(|n| legendre_fast(n, p) as i64).collect();
    let (p, h) = (p as usize, h as usize);
    let mut out = Vec::with_capacity(p);
    let mut window: i64 = (1..=h).map(|n| chi[n % p]).sum();
    for x in 0..p {
        out.push(window);
        window += chi[(x + h + 1) % p] - chi[(x + 1) % p];
    }
    Ok(out)
}

/// `prod_{i=1}^{r/2} (2i - 1)` for even `r`, `0` for odd `r`.
pub fn mu_r(r: u32) -> u64 {
    if r % 2 == 1 {
        return 0;
    }
    (1..=r as u64 / 2).map(|i| 2 * i - 1).product()
}

/// Moments of `S_h / sqrt(h)` against the normal moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Moments {
    pub p: u64,
    pub h: u64,
    /// `sum_x S_h(x)^r` for `r = 1, ..., r_max`; the moment is this over `p h^{r/2}`.
    pub power_sums: Vec<i128>,
    pub moments: Vec<f64>,
    pub normal: Vec<u64>,
}

fn power_sums(values: &[i64], r_max: u32) -> Vec<i128> {
    let mut sums = vec![0i128; r_max as usize];
    for &v in values {
        let mut acc = 1i128;
        for s in sums.iter_mut() {
            acc *= v as i128;
            *s += acc;
        }
    }
    sums
}

pub fn empirical_moments(p: u64, h: u64, r_max: u32) -> Result<Moments> {
    if r_max == 0 || r_max > MAX_MOMENT {
        return Err(Error::InvalidArgument(format!(
            "moment order must be in 1..={MAX_MOMENT}"
        )));
    }
    let values = excess_ensemble(p, h)?;
    let sums = power_sums(&values, r_max);
    let moments = sums
        .iter()
        .enumerate()
        .map(|(i, &s)| s as f64 / (p as f64 * (h as f64).powf((i + 1) as f64 / 2.0)))
        .collect();
    Ok(Moments {
        p,
        h,
        power_sums: sums,
        moments,
        normal: (1..=r_max).map(mu_r).collect(),
    })
}

/// Both moment envelopes for one `(p, h, r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentBoundCheck {
    pub p: u64,
    pub h: u64,
    pub r: u32,
    pub even_sum: i128,
    pub odd_sum: i128,
    /// `2 r h^{2r} sqrt(p)`.
    pub error_bound: f64,
    /// `(p - r)(h - r)^r prod (2i-1)` and `p h^r prod (2i-1)`.
    pub envelope: (f64, f64),
    pub even_holds: bool,
    pub odd_holds: bool,
}

/// `sum S^{2r}` lies within `2 r h^{2r} sqrt(p)` of some
/// `(p - theta r)(h - theta' r)^r prod (2i-1)` with `theta, theta' in [0, 1]`,
/// and `|sum S^{2r-1}| <= 2 r h^{2r} sqrt(p)`.
pub fn moment_bound_check(p: u64, h: u64, r: u32) -> Result<MomentBoundCheck> {
    if r == 0 || r as u64 >= h || 2 * r > MAX_MOMENT {
        return Err(Error::InvalidArgument(format!(
            "need 0 < r < h and 2r <= {MAX_MOMENT}"
        )));
    }
    let values = excess_ensemble(p, h)?;
    Ok(bound_check_from(&values, p, h, r))
}

fn bound_check_from(values: &[i64], p: u64, h: u64, r: u32) -> MomentBoundCheck {
    let sums = power_sums(values, 2 * r);
    let (odd_sum, even_sum) = (sums[2 * r as usize - 2], sums[2 * r as usize - 1]);
    let (pf, hf, rf) = (p as f64, h as f64, r as f64);
    let error_bound = 2.0 * rf * hf.powi(2 * r as i32) * pf.sqrt();
    let mu = mu_r(2 * r) as f64;
    let lo = (pf - rf) * (hf - rf).powi(r as i32) * mu;
    let hi = pf * hf.powi(r as i32) * mu;
    let even = even_sum as f64;
    MomentBoundCheck {
        p,
        h,
        r,
        even_sum,
        odd_sum,
        error_bound,
        envelope: (lo, hi),
        even_holds: even >= lo - error_bound && even <= hi + error_bound,
        odd_holds: (odd_sum as f64).abs() <= error_bound,
    }
}

/// Every `(r, h)` with `r <= r_max` and `r < h < p` for one prime; returns the
/// failing checks.
pub fn moment_bound_sweep(p: u64, r_max: u32) -> Result<Vec<MomentBoundCheck>> {
    let mut failures = Vec::new();
    for h in 2..p {
        let values = excess_ensemble(p, h)?;
        for r in 1..=r_max.min((h - 1) as u32) {
            let c = bound_check_from(&values, p, h, r);
            if !(c.even_holds && c.odd_holds) {
                failures.push(c);
            }
        }
    }
    Ok(failures)
}

/// `Phi(lambda)`.
pub fn normal_cdf(lambda: f64) -> f64 {
    Normal::standard().cdf(lambda)
}

/// Largest gap between the empirical law of `S_h / sqrt(h)` and `Phi` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfReport {
    pub p: u64,
    pub h: u64,
    pub max_distance: f64,
    pub at: f64,
}

pub fn cdf_report(p: u64, h: u64, grid: &[f64]) -> Result<CdfReport> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("grid must be nonempty".into()));
    }
    let mut values = excess_ensemble(p, h)?;
    values.sort_unstable();
    let scale = (h as f64).sqrt();
    let mut report = CdfReport {
        p,
        h,
        max_distance: 0.0,
        at: grid[0],
    };
    for &lambda in grid {
        let below = values.partition_point(|&v| v as f64 / scale <= lambda);
        let d = (below as f64 / p as f64 - normal_cdf(lambda)).abs();
        if d > report.max_distance {
            report.max_distance = d;
            report.at = lambda;
        }
    }
    Ok(report)
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// One histogram bin of `S_h / sqrt(h)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub value: i64,
    pub empirical_mass: f64,
    pub normal_mass: f64,
}

/// Mass of each attained value of `S_h`, against the normal mass of the
/// interval of width `2 / sqrt(h)` centred on it.
pub fn histogram(p: u64, h: u64) -> Result<Vec<HistogramBin>> {
    let values = excess_ensemble(p, h)?;
    let hi = h as i64;
    let mut counts = vec![0u64; 2 * h as usize + 1];
    for v in &values {
        counts[(v + hi) as usize] += 1;
    }
    let scale = (h as f64).sqrt();
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            let v = i as i64 - hi;
            let centre = v as f64 / scale;
            let half = 1.0 / scale;
            HistogramBin {
                value: v,
                empirical_mass: c as f64 / p as f64,
                normal_mass: normal_cdf(centre + half) - normal_cdf(centre - half),
            }
        })
        .collect())
}
