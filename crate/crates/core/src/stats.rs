//! Order statistics and the two-sample rank-sum test.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use thiserror::Error;

/// First three quartiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Sample quantile with linear interpolation between order statistics
/// (`h = (n - 1) p`). `None` for an empty sample.
pub fn quantile(values: &[f64], p: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

pub fn median(values: &[f64]) -> Option<f64> {
    quantile(values, 0.5)
}

pub fn quartiles(values: &[f64]) -> Option<Quartiles> {
    Some(Quartiles {
        q1: quantile(values, 0.25)?,
        median: quantile(values, 0.5)?,
        q3: quantile(values, 0.75)?,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankSumError {
    #[error("rank-sum test needs two non-empty samples")]
    EmptySample,
}

/// Combined sample size up to which the null distribution is enumerated exactly.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSum {
    /// Mann-Whitney U of the first sample.
    pub u: f64,
    /// Two-sided p-value.
    pub p: f64,
    pub exact: bool,
    /// Every observation in both samples is equal; `p` is 1.
    pub degenerate: bool,
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test of `a` against `b`.
///
/// Ties get midranks. With at most [`EXACT_LIMIT`] observations in total the
/// p-value comes from the exact permutation distribution of the rank sum
/// (conditional on the observed ties); otherwise from the normal
/// approximation with tie and continuity corrections.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSum, RankSumError> {
    if a.is_empty() || b.is_empty() {
        return Err(RankSumError::EmptySample);
    }
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    // Doubled midranks keep everything integral.
    let ranks2 = doubled_midranks(&pooled);
    let w2: u64 = ranks2[..na].iter().sum();
    let u = w2 as f64 / 2.0 - (na * (na + 1)) as f64 / 2.0;
    if pooled.iter().all(|x| *x == pooled[0]) {
        return Ok(RankSum {
            u,
            p: 1.0,
            exact: n <= EXACT_LIMIT,
            degenerate: true,
        });
    }
    if n <= EXACT_LIMIT {
        let counts = rank_sum_distribution(&ranks2, na);
        let total: u128 = counts.iter().sum();
        let le: u128 = counts[..=w2 as usize].iter().sum();
        let ge: u128 = counts[w2 as usize..].iter().sum();
        let p = (2.0 * (le.min(ge) as f64 / total as f64)).min(1.0);
        return Ok(RankSum {
            u,
            p,
            exact: true,
            degenerate: false,
        });
    }
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut k = i;
        while k < n && sorted[k] == sorted[i] {
            k += 1;
        }
        let t = (k - i) as f64;
        tie_term += t * t * t - t;
        i = k;
    }
    let (naf, nbf, nf) = (na as f64, nb as f64, n as f64);
    let mean = naf * nbf / 2.0;
    let var = naf * nbf / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    let diff = u - mean;
    let z = (diff - 0.5 * diff.signum()) / var.sqrt();
    let p = erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0);
    Ok(RankSum {
        u,
        p,
        exact: false,
        degenerate: false,
    })
}

fn doubled_midranks(values: &[f64]) -> Vec<u64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    let mut ranks = vec![0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut k = i;
        while k < idx.len() && values[idx[k]] == values[idx[i]] {
            k += 1;
        }
        // Positions i..k hold ranks i+1..=k; twice their mean is i + k + 1.
        for &j in &idx[i..k] {
            ranks[j] = (i + k + 1) as u64;
        }
        i = k;
    }
    ranks
}

/// `counts[s]`: number of size-`k` subsets of `ranks` summing to `s`.
fn rank_sum_distribution(ranks: &[u64], k: usize) -> Vec<u128> {
    let max: usize = ranks.iter().sum::<u64>() as usize;
    // table[j][s]: subsets of size j with sum s among the items seen so far.
    let mut table = vec![vec![0u128; max + 1]; k + 1];
    table[0][0] = 1;
    for &r in ranks {
        let r = r as usize;
        for j in (1..=k).rev() {
            for s in (r..=max).rev() {
                table[j][s] += table[j - 1][s - r];
            }
        }
    }
    table.swap_remove(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolated_quartiles() {
        assert_eq!(quantile(&[], 0.5), None);
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        let q = quartiles(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]).unwrap();
        assert_eq!((q.q1, q.median, q.q3), (3.25, 5.5, 7.75));
        let one = quartiles(&[0.7]).unwrap();
        assert_eq!((one.q1, one.median, one.q3), (0.7, 0.7, 0.7));
    }

    #[test]
    fn separated_triples() {
        let r = rank_sum_test(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(r.u, 0.0);
        assert_eq!(r.p, 0.1);
        assert!(r.exact);
    }

    #[test]
    fn identical_samples() {
        let r = rank_sum_test(&[0.5; 30], &[0.5; 30]).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p, 1.0);
        let r = rank_sum_test(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(!r.degenerate);
        assert_eq!(r.p, 1.0);
        assert_eq!(rank_sum_test(&[], &[1.0]), Err(RankSumError::EmptySample));
    }

    #[test]
    fn large_separated_samples_are_significant() {
        let a: Vec<f64> = (1..=30).map(f64::from).collect();
        let b: Vec<f64> = (31..=60).map(f64::from).collect();
        let r = rank_sum_test(&a, &b).unwrap();
        assert!(!r.exact);
        assert!(r.p < 1e-9);
        // Symmetric in the order of the samples.
        assert_eq!(rank_sum_test(&b, &a).unwrap().p, r.p);
    }

    #[test]
    fn normal_approximation_value() {
        // Hand computation: n = 11 + 11, no ties, U = 30.
        // mean 60.5, var 121 * 23 / 12, z = (30 - 60.5 + 0.5) / sqrt(231.9167).
        let a: Vec<f64> = (0..11).map(|i| [1, 2, 3, 4, 5, 6, 7, 8, 19, 20, 21][i] as f64).collect();
        let b: Vec<f64> = (0..11).map(|i| [9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 22][i] as f64).collect();
        let r = rank_sum_test(&a, &b).unwrap();
        assert_eq!(r.u, 30.0);
        let z: f64 = -30.0 / (121.0f64 * 23.0 / 12.0).sqrt();
        let expected = erfc(z.abs() / std::f64::consts::SQRT_2);
        assert!((r.p - expected).abs() < 1e-15);
        assert!((r.p - 0.0489).abs() < 1e-3);
    }
}
