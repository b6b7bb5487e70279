//! Empirical and extreme-value estimators of marginal mean excess (MME)
//! and marginal expected shortfall (MES).
//!
//! For a level p, write VaR for the (1-p) quantile of Z2. The targets are
//!
//! * MME(p) = E[(Z1 - VaR)+ | Z2 > VaR]
//! * MES(p) = E[Z1 | Z2 > VaR]
//!
//! The empirical versions replace VaR by the k-th largest Z2. For p below
//! the sample range, the EVT versions anchor at the empirical estimate with
//! k = n*p_anchor exceedances and extrapolate down by a power of k/(n p)
//! whose exponent comes from tail index estimates: under asymptotic tail
//! independence the joint tail decays with the hidden index alpha0, giving
//! exponent (beta - alpha0 + 1)/beta; under full tail dependence the usual
//! one-index extrapolation exponent 1/alpha1 applies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::BivariateSample;
use crate::tail::{hill, min_transform};

pub(crate) fn kth_largest(values: &[f64], k: usize) -> Result<f64> {
    if k < 1 || k > values.len() {
        return Err(Error::InvalidCount {
            k,
            n: values.len(),
            constraint: "1 <= k <= n".into(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite values compare"));
    Ok(sorted[k - 1])
}

/// Empirical MME with k conditioning exceedances: the threshold is the k-th
/// largest Z2 and the estimate is (1/k) * sum of (z1 - T)+ over pairs with
/// z2 strictly above T.
pub fn empirical_mme(sample: &BivariateSample, k: usize) -> Result<f64> {
    let t = kth_largest(sample.z2(), k)?;
    let sum: f64 = sample
        .pairs()
        .filter(|&(_, b)| b > t)
        .map(|(a, _)| (a - t).max(0.0))
        .sum();
    // An empty float sum is -0.0; adding 0.0 keeps the sign positive.
    Ok(sum / k as f64 + 0.0)
}

/// Empirical MES with k conditioning exceedances: (1/k) * sum of z1 over
/// pairs with z2 strictly above the k-th largest Z2.
pub fn empirical_mes(sample: &BivariateSample, k: usize) -> Result<f64> {
    let t = kth_largest(sample.z2(), k)?;
    let sum: f64 = sample.pairs().filter(|&(_, b)| b > t).map(|(a, _)| a).sum();
    Ok(sum / k as f64 + 0.0)
}

/// Which joint tail regime the EVT extrapolation assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailAssumption {
    /// Hidden regular variation: joint exceedances thin out with the hidden
    /// index alpha0 estimated from min(Z1, Z2).
    AsymptoticIndependence,
    /// Tail dependence: joint exceedances stay proportional to marginal
    /// ones and the extrapolation uses the Z1 index alone.
    Dependence,
}

impl TailAssumption {
    pub fn name(self) -> &'static str {
        match self {
            TailAssumption::AsymptoticIndependence => "ai",
            TailAssumption::Dependence => "dependent",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ai" => Ok(TailAssumption::AsymptoticIndependence),
            "dependent" => Ok(TailAssumption::Dependence),
            other => Err(Error::InvalidParameter {
                name: "assume".into(),
                value: other.into(),
                constraint: "one of ai, dependent".into(),
            }),
        }
    }
}

/// Order-statistic counts for the EVT estimator: `k` anchors the empirical
/// estimate, `k0` feeds the hidden-index Hill on min(Z1, Z2), `k1` the Z1
/// Hill, and `k2` the Z2 Hill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvtConfig {
    pub k: usize,
    pub k0: usize,
    pub k1: usize,
    pub k2: usize,
}

impl EvtConfig {
    /// The default counts for a sample of size n: all four set to the top
    /// 10% of observations.
    pub fn defaults(n: usize) -> Self {
        let k = ((n as f64) * 0.1).ceil() as usize;
        EvtConfig { k, k0: k, k1: k, k2: k }
    }
}

/// Diagnostic flags raised while extrapolating. A flagged estimate is still
/// returned, but simulation harnesses count it as a failed replication.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvtFlags {
    /// The extrapolation exponent left (0, 1]; the regular-variation
    /// scaling behind the extrapolation is not credible.
    pub exponent_out_of_range: bool,
    /// The target level equals the anchor k/n, so no extrapolation
    /// happened.
    pub anchor_equals_target: bool,
}

impl EvtFlags {
    pub fn any(&self) -> bool {
        self.exponent_out_of_range || self.anchor_equals_target
    }
}

/// An EVT-extrapolated estimate and the quantities that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvtEstimate {
    /// Extrapolated MME or MES at the target level.
    pub value: f64,
    /// Empirical estimate at the anchor level k/n.
    pub anchor: f64,
    /// Multiplier applied to the anchor, (k/(n p))^exponent.
    pub factor: f64,
    /// Extrapolation exponent.
    pub exponent: f64,
    /// Hill estimate of the Z2 index (asymptotic-independence mode).
    pub beta_hat: Option<f64>,
    /// Hill estimate of the hidden index from min(Z1, Z2)
    /// (asymptotic-independence mode).
    pub alpha0_hat: Option<f64>,
    /// Hill estimate of the Z1 index (dependence mode).
    pub alpha1_hat: Option<f64>,
    pub flags: EvtFlags,
}

fn check_level(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            name: "p".into(),
            value: p.to_string(),
            constraint: "0 < p < 1".into(),
        });
    }
    Ok(())
}

struct Extrapolation {
    factor: f64,
    exponent: f64,
    beta_hat: Option<f64>,
    alpha0_hat: Option<f64>,
    alpha1_hat: Option<f64>,
    flags: EvtFlags,
}

fn extrapolation(
    sample: &BivariateSample,
    p: f64,
    assumption: TailAssumption,
    config: &EvtConfig,
) -> Result<Extrapolation> {
    let n = sample.len();
    let (exponent, beta_hat, alpha0_hat, alpha1_hat) = match assumption {
        TailAssumption::AsymptoticIndependence => {
            let beta = hill(sample.z2(), config.k2)?.index;
            let alpha0 = hill(&min_transform(sample), config.k0)?.index;
            ((beta - alpha0 + 1.0) / beta, Some(beta), Some(alpha0), None)
        }
        TailAssumption::Dependence => {
            let alpha1 = hill(sample.z1(), config.k1)?.index;
            (1.0 / alpha1, None, None, Some(alpha1))
        }
    };
    let mut flags = EvtFlags::default();
    if !(exponent > 0.0 && exponent <= 1.0) {
        flags.exponent_out_of_range = true;
    }
    let anchor_level = config.k as f64 / n as f64;
    let factor = if p == anchor_level {
        flags.anchor_equals_target = true;
        1.0
    } else {
        (anchor_level / p).powf(exponent)
    };
    Ok(Extrapolation { factor, exponent, beta_hat, alpha0_hat, alpha1_hat, flags })
}

fn evt_from_anchor(
    sample: &BivariateSample,
    p: f64,
    assumption: TailAssumption,
    config: &EvtConfig,
    anchor: f64,
) -> Result<EvtEstimate> {
    check_level(p)?;
    let ex = extrapolation(sample, p, assumption, config)?;
    Ok(EvtEstimate {
        value: anchor * ex.factor,
        anchor,
        factor: ex.factor,
        exponent: ex.exponent,
        beta_hat: ex.beta_hat,
        alpha0_hat: ex.alpha0_hat,
        alpha1_hat: ex.alpha1_hat,
        flags: ex.flags,
    })
}

/// EVT-extrapolated MME at level `p`.
pub fn evt_mme(
    sample: &BivariateSample,
    p: f64,
    assumption: TailAssumption,
    config: &EvtConfig,
) -> Result<EvtEstimate> {
    let anchor = empirical_mme(sample, config.k)?;
    evt_from_anchor(sample, p, assumption, config, anchor)
}

/// EVT-extrapolated MES at level `p`.
pub fn evt_mes(
    sample: &BivariateSample,
    p: f64,
    assumption: TailAssumption,
    config: &EvtConfig,
) -> Result<EvtEstimate> {
    let anchor = empirical_mes(sample, config.k)?;
    evt_from_anchor(sample, p, assumption, config, anchor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelSpec;

    fn toy() -> BivariateSample {
        BivariateSample::from_pairs([(1.0, 1.0), (5.0, 10.0), (2.0, 3.0), (1.0, 2.0)]).unwrap()
    }

    #[test]
    fn empirical_estimates_match_hand_computation() {
        let s = toy();
        // k = 1: the threshold is the maximum, nothing exceeds it strictly.
        assert_eq!(empirical_mme(&s, 1).unwrap(), 0.0);
        assert_eq!(empirical_mes(&s, 1).unwrap(), 0.0);
        // k = 2: threshold 3, one strict exceedance (5, 10).
        assert_eq!(empirical_mme(&s, 2).unwrap(), 1.0);
        assert_eq!(empirical_mes(&s, 2).unwrap(), 2.5);
        // k = 4: threshold 1, exceedances (5,10), (2,3), (1,2).
        assert_eq!(empirical_mme(&s, 4).unwrap(), (4.0 + 1.0 + 0.0) / 4.0);
        assert_eq!(empirical_mes(&s, 4).unwrap(), 2.0);
    }

    #[test]
    fn out_of_range_k_is_rejected() {
        let s = toy();
        assert!(matches!(empirical_mme(&s, 0), Err(Error::InvalidCount { .. })));
        assert!(matches!(empirical_mes(&s, 5), Err(Error::InvalidCount { .. })));
    }

    #[test]
    fn mes_dominates_mme_pathwise() {
        for (seed, spec) in [
            (1, ModelSpec::GaussianCopula { alpha: 2.0, rho: 0.6 }),
            (2, ModelSpec::MarshallOlkin { alpha: 2.0, gamma1: 0.8, gamma2: 0.7 }),
            (3, ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.5, gamma: 4.0, q: 0.5 }),
        ] {
            let sample = spec.sample(1_000, seed, 0).unwrap();
            for k in [5, 50, 300] {
                let mme = empirical_mme(&sample, k).unwrap();
                let mes = empirical_mes(&sample, k).unwrap();
                assert!(mes >= mme, "{spec} k={k}: mes {mes} < mme {mme}");
            }
        }
    }

    #[test]
    fn empirical_estimates_are_scale_equivariant() {
        // Powers of two scale without rounding, so equivariance is exact;
        // other factors would perturb near-tie strict exceedances.
        let sample = ModelSpec::GaussianCopula { alpha: 2.0, rho: 0.5 }
            .sample(500, 17, 0)
            .unwrap();
        for c in [4.0, 0.5] {
            let scaled = sample.scaled(c);
            for k in [10, 100] {
                assert_eq!(
                    empirical_mme(&scaled, k).unwrap(),
                    c * empirical_mme(&sample, k).unwrap()
                );
                assert_eq!(
                    empirical_mes(&scaled, k).unwrap(),
                    c * empirical_mes(&sample, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn evt_at_the_anchor_level_is_the_empirical_estimate() {
        let n = 1_000;
        let sample = ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.5, gamma: 4.0, q: 0.5 }
            .sample(n, 4, 0)
            .unwrap();
        let config = EvtConfig::defaults(n);
        let p = config.k as f64 / n as f64;
        for (evt, empirical) in [
            (evt_mme(&sample, p, TailAssumption::AsymptoticIndependence, &config).unwrap(),
             empirical_mme(&sample, config.k).unwrap()),
            (evt_mes(&sample, p, TailAssumption::Dependence, &config).unwrap(),
             empirical_mes(&sample, config.k).unwrap()),
        ] {
            assert_eq!(evt.factor, 1.0);
            assert_eq!(evt.value, empirical);
            assert!(evt.flags.anchor_equals_target);
        }
    }

    #[test]
    fn extrapolation_factor_grows_as_p_shrinks() {
        let n = 2_000;
        let sample = ModelSpec::MarshallOlkin { alpha: 2.0, gamma1: 0.8, gamma2: 0.7 }
            .sample(n, 5, 0)
            .unwrap();
        let config = EvtConfig::defaults(n);
        let mut last = 0.0;
        for p in [0.05, 0.01, 0.001, 1e-4] {
            let est = evt_mme(&sample, p, TailAssumption::AsymptoticIndependence, &config).unwrap();
            assert!(est.factor > last, "factor not increasing at p={p}");
            assert!(!est.flags.any(), "unexpected flags at p={p}: {:?}", est.flags);
            assert!(est.beta_hat.is_some() && est.alpha0_hat.is_some());
            last = est.factor;
        }
    }

    #[test]
    fn independent_tails_flag_the_ai_exponent() {
        // Independent Pareto(1.5) margins: hidden index near 3, so the
        // numerator beta - alpha0 + 1 is negative.
        let n = 4_000;
        let sample = ModelSpec::GaussianCopula { alpha: 1.5, rho: 0.0 }
            .sample(n, 6, 0)
            .unwrap();
        let config = EvtConfig::defaults(n);
        let est = evt_mme(&sample, 1e-3, TailAssumption::AsymptoticIndependence, &config).unwrap();
        assert!(est.flags.exponent_out_of_range, "exponent {}", est.exponent);
        assert!(est.exponent < 0.0);
    }

    #[test]
    fn infinite_mean_tails_flag_the_dependent_exponent() {
        // Z1 index below 1 puts 1/alpha1 above 1.
        let pairs: Vec<(f64, f64)> = {
            let mut rng = crate::rng::stream_rng(8, 0);
            (0..2_000)
                .map(|_| {
                    let u = 1.0 - rand::Rng::random::<f64>(&mut rng);
                    let v = 1.0 - rand::Rng::random::<f64>(&mut rng);
                    (u.powf(-1.0 / 0.8), v.powf(-1.0 / 2.0))
                })
                .collect()
        };
        let sample = BivariateSample::from_pairs(pairs).unwrap();
        let config = EvtConfig::defaults(sample.len());
        let est = evt_mes(&sample, 1e-3, TailAssumption::Dependence, &config).unwrap();
        assert!(est.flags.exponent_out_of_range, "exponent {}", est.exponent);
        assert!(est.exponent > 1.0);
        assert!(est.alpha1_hat.unwrap() < 1.0);
    }

    #[test]
    fn bad_levels_are_rejected() {
        let sample = toy();
        let config = EvtConfig { k: 2, k0: 2, k1: 2, k2: 2 };
        for p in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(evt_mme(&sample, p, TailAssumption::Dependence, &config).is_err());
        }
    }
}
