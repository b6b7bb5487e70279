//! Tail index estimation from upper order statistics.
//!
//! The workhorse is the Hill estimator over the top k observations, with a
//! Hill plot across a range of k for threshold diagnostics and an
//! L-moment generalized Pareto fit (Hosking and Wallis) as an independent
//! cross-check on the same excesses.

use crate::error::{Error, Result};
use crate::sample::BivariateSample;

/// A tail index estimate together with the order-statistic context that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIndexEstimate {
    /// Estimated tail index (the Pareto exponent, reciprocal of the mean
    /// log-excess for Hill).
    pub index: f64,
    /// Number of upper order statistics used.
    pub k: usize,
    /// The threshold, the (k+1)-th largest observation.
    pub threshold: f64,
}

impl TailIndexEstimate {
    /// Asymptotic standard error of the Hill index, index / sqrt(k).
    pub fn standard_error(&self) -> f64 {
        self.index / (self.k as f64).sqrt()
    }
}

fn check_positive(data: &[f64]) -> Result<()> {
    for (index, &value) in data.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveData { index, value });
        }
    }
    Ok(())
}

fn sorted_descending(data: &[f64]) -> Vec<f64> {
    let mut v = data.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite values compare"));
    v
}

/// Hill estimator of the tail index from the top `k` of `data`.
///
/// With descending order statistics X(1) >= ... >= X(n), the mean
/// log-excess is H = (1/k) * sum_{i<=k} ln(X(i) / X(k+1)) and the index
/// estimate is 1/H. Requires 2 <= k < n and strictly positive data.
pub fn hill(data: &[f64], k: usize) -> Result<TailIndexEstimate> {
    if k < 2 || k >= data.len() {
        return Err(Error::InvalidCount {
            k,
            n: data.len(),
            constraint: "2 <= k < n".into(),
        });
    }
    check_positive(data)?;
    let sorted = sorted_descending(data);
    hill_from_sorted(&sorted, k)
}

fn hill_from_sorted(sorted: &[f64], k: usize) -> Result<TailIndexEstimate> {
    let threshold = sorted[k];
    let log_t = threshold.ln();
    let mean_log_excess: f64 =
        sorted[..k].iter().map(|x| x.ln() - log_t).sum::<f64>() / k as f64;
    if mean_log_excess <= 0.0 {
        return Err(Error::DegenerateData { k });
    }
    Ok(TailIndexEstimate {
        index: 1.0 / mean_log_excess,
        k,
        threshold,
    })
}

/// Hill estimates for every k in `[k_min, k_max]`, for threshold-stability
/// plots. Values of k whose top order statistics are all tied (so the mean
/// log-excess is zero) are skipped.
pub fn hill_plot(data: &[f64], k_min: usize, k_max: usize) -> Result<Vec<(usize, f64)>> {
    if k_min < 2 || k_min > k_max || k_max >= data.len() {
        return Err(Error::InvalidCount {
            k: k_max,
            n: data.len(),
            constraint: "2 <= k_min <= k_max < n".into(),
        });
    }
    check_positive(data)?;
    let sorted = sorted_descending(data);
    let mut log_sum: f64 = sorted[..k_min].iter().map(|x| x.ln()).sum();
    let mut out = Vec::with_capacity(k_max - k_min + 1);
    for k in k_min..=k_max {
        let h = log_sum / k as f64 - sorted[k].ln();
        if h > 0.0 {
            out.push((k, 1.0 / h));
        }
        log_sum += sorted[k].ln();
    }
    Ok(out)
}

/// Tail index via an L-moment fit of the generalized Pareto distribution
/// to the k excesses over the (k+1)-th largest observation.
///
/// The first two sample L-moments l1, l2 of the excesses give the GPD
/// shape xi = 2 - l1/l2 (Hosking's probability-weighted-moment identities)
/// and the tail index is 1/xi. Requires 4 <= k < n, positive data, and a
/// heavy-tailed fit (xi > 0).
pub fn lmoment_tail_index(data: &[f64], k: usize) -> Result<TailIndexEstimate> {
    if k < 4 || k >= data.len() {
        return Err(Error::InvalidCount {
            k,
            n: data.len(),
            constraint: "4 <= k < n".into(),
        });
    }
    check_positive(data)?;
    let sorted = sorted_descending(data);
    let threshold = sorted[k];
    // Excesses in ascending order for the order-statistic weights.
    let mut excess: Vec<f64> = sorted[..k].iter().map(|x| x - threshold).collect();
    excess.reverse();
    let kf = k as f64;
    let b0 = excess.iter().sum::<f64>() / kf;
    let b1 = excess
        .iter()
        .enumerate()
        .map(|(j, w)| j as f64 / (kf - 1.0) * w)
        .sum::<f64>()
        / kf;
    let l1 = b0;
    let l2 = 2.0 * b1 - b0;
    if l2 <= 0.0 {
        return Err(Error::DegenerateData { k });
    }
    let xi = 2.0 - l1 / l2;
    if xi <= 0.0 {
        return Err(Error::NonHeavyTail { shape: xi });
    }
    Ok(TailIndexEstimate {
        index: 1.0 / xi,
        k,
        threshold,
    })
}

/// The coordinatewise minimum min(Z1, Z2), whose tail index is the hidden
/// joint index alpha0.
pub fn min_transform(sample: &BivariateSample) -> Vec<f64> {
    sample.pairs().map(|(a, b)| a.min(b)).collect()
}
