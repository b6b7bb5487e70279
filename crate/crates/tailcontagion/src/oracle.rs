//! Analytic oracles: exact survival functions, hidden limit measures,
//! limit constants, and reference values of MME and MES per model family.
//!
//! Reference values come in three grades. Closed forms (`exact_mme`,
//! `exact_mes`) exist where the family admits them. Quadrature
//! (`numeric_mme`, `numeric_mes` with [`NumericMethod::Quadrature`])
//! integrates the exact joint survival function and is available whenever
//! that survival is computable. Monte Carlo covers the rest. The
//! `reference_*` helpers pick the best available grade in that order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{FactorVariant, ModelSpec};
use crate::normal::{bvn_upper, norm_quantile};
use crate::quad;
use crate::rng::stream_rng;

/// Seed for the internal Monte Carlo oracle. Fixed so reference values are
/// reproducible; the oracle always uses stream 0.
const ORACLE_SEED: u64 = 0x7461696c;

/// Relative tolerance of quadrature reference values.
const QUAD_REL: f64 = 1e-7;
/// Relative tolerance of the inner survival integrals.
const INNER_REL: f64 = 1e-10;

/// Where a reference value came from, in decreasing order of authority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthSource {
    Exact,
    Quadrature,
    MonteCarlo,
}

impl TruthSource {
    pub fn name(self) -> &'static str {
        match self {
            TruthSource::Exact => "exact",
            TruthSource::Quadrature => "quadrature",
            TruthSource::MonteCarlo => "montecarlo",
        }
    }
}

/// How to compute a numeric reference value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericMethod {
    /// Integrate the exact joint survival function.
    Quadrature,
    /// Simulate `budget` pairs from the internal oracle stream and average
    /// the conditional summands.
    MonteCarlo { budget: usize },
}

/// A numeric reference value and its accuracy estimate: an integration
/// error bound for quadrature, a standard error for Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericEstimate {
    pub value: f64,
    pub error: f64,
}

/// The constants the scaled risk measures converge to as p tends to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitConstants {
    /// Limit of p * b0inv(t) / t * MME(p), the integral of the hidden
    /// limit measure of (x, infinity) x (1, infinity) over x >= 1.
    /// Infinite when that integral diverges.
    pub mme_limit: f64,
    /// Limit of the same scaling of MES(p), the integral over x >= 0.
    /// `None` when the limit measure has infinite mass near the axis and
    /// the MES limit theory does not apply.
    pub mes_limit: Option<f64>,
    /// Regular-variation index of MME(p) in 1/p: (1 + beta - alpha0)/beta.
    pub rv_index_mme: f64,
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

fn check_coordinate(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter {
            name: name.into(),
            value: v.to_string(),
            constraint: "must be a finite positive number".into(),
        });
    }
    Ok(())
}

/// Left endpoint of the support of both coordinates.
pub fn support_left(spec: &ModelSpec) -> f64 {
    match spec {
        ModelSpec::AdditiveFactor { .. } => 2.0,
        _ => 1.0,
    }
}

/// The hidden limit measure of the rectangle (x, infinity) x (y, infinity),
/// normalised so the unit rectangle has measure 1. Homogeneous of degree
/// -alpha0: scaling both coordinates by c scales the measure by c^-alpha0.
pub fn nu0_rectangle(spec: &ModelSpec, x: f64, y: f64) -> Result<f64> {
    spec.validate()?;
    check_coordinate("x", x)?;
    check_coordinate("y", y)?;
    Ok(match *spec {
        ModelSpec::GaussianCopula { alpha, rho } => {
            let c = alpha / (1.0 + rho);
            (x * y).powf(-c)
        }
        ModelSpec::MarshallOlkin { alpha, gamma1, gamma2 } => {
            if gamma1 < gamma2 {
                x.powf(-alpha * (1.0 - gamma1)) * y.powf(-alpha)
            } else if gamma1 > gamma2 {
                x.powf(-alpha) * y.powf(-alpha * (1.0 - gamma2))
            } else {
                (x * y).powf(-alpha * (1.0 - gamma1)) * x.max(y).powf(-alpha * gamma1)
            }
        }
        ModelSpec::BernoulliMixture { alpha0, .. } => x.max(y).powf(-alpha0),
        ModelSpec::AdditiveFactor { alpha0, variant, .. } => match variant {
            // At the hidden scale the pair concentrates on the common
            // factor: (V, V) for plain, min and max, (V, 2V) for sum.
            FactorVariant::Sum => x.max(y / 2.0).powf(-alpha0),
            _ => x.max(y).powf(-alpha0),
        },
    })
}

/// Limit constants of the scaled risk measures; see [`LimitConstants`].
pub fn limit_constants(spec: &ModelSpec) -> Result<LimitConstants> {
    spec.validate()?;
    let idx = spec.theoretical_indices();
    let rv_index_mme = (1.0 + idx.beta - idx.alpha0) / idx.beta;
    let (mme_limit, mes_limit) = match *spec {
        ModelSpec::GaussianCopula { alpha, rho } => {
            let c = alpha / (1.0 + rho);
            let mme = if c > 1.0 { 1.0 / (c - 1.0) } else { f64::INFINITY };
            // nu0((x,inf) x (1,inf)) = x^-c has infinite integral over
            // (0, inf) for every c, so the MES limit theory fails.
            (mme, None)
        }
        ModelSpec::MarshallOlkin { alpha, gamma1, gamma2 } => {
            let mme = if gamma1 < gamma2 {
                let a = alpha * (1.0 - gamma1);
                if a > 1.0 { 1.0 / (a - 1.0) } else { f64::INFINITY }
            } else {
                1.0 / (alpha - 1.0)
            };
            (mme, None)
        }
        ModelSpec::BernoulliMixture { alpha0, .. } => {
            (1.0 / (alpha0 - 1.0), Some(alpha0 / (alpha0 - 1.0)))
        }
        ModelSpec::AdditiveFactor { alpha0, variant, .. } => {
            let base = alpha0 / (alpha0 - 1.0);
            let mes = match variant {
                FactorVariant::Sum => 2.0f64.powf(alpha0 - 1.0) * base,
                _ => base,
            };
            (1.0 / (alpha0 - 1.0), Some(mes))
        }
    };
    Ok(LimitConstants { mme_limit, mes_limit, rv_index_mme })
}

/// P(Z1 > x).
pub fn survival_first(spec: &ModelSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    check_coordinate("x", x)?;
    Ok(match *spec {
        ModelSpec::GaussianCopula { alpha, .. } | ModelSpec::MarshallOlkin { alpha, .. } => {
            x.max(1.0).powf(-alpha)
        }
        ModelSpec::BernoulliMixture { alpha, alpha0, q, .. } => {
            let x = x.max(1.0);
            q * x.powf(-alpha) + (1.0 - q) * x.powf(-alpha0)
        }
        ModelSpec::AdditiveFactor { alpha, alpha0, .. } => additive_margin(alpha, alpha0, x),
    })
}

/// P(Z2 > y). Not available in closed or integral form for the additive
/// sum variant.
pub fn survival_second(spec: &ModelSpec, y: f64) -> Result<f64> {
    spec.validate()?;
    check_coordinate("y", y)?;
    Ok(match *spec {
        ModelSpec::GaussianCopula { alpha, .. } | ModelSpec::MarshallOlkin { alpha, .. } => {
            y.max(1.0).powf(-alpha)
        }
        ModelSpec::BernoulliMixture { alpha0, gamma, q, .. } => {
            let y = y.max(1.0);
            q * y.powf(-gamma) + (1.0 - q) * y.powf(-alpha0)
        }
        ModelSpec::AdditiveFactor { alpha, alpha0, variant } => match variant {
            FactorVariant::Plain => additive_margin(alpha, alpha0, y),
            FactorVariant::Min => additive_joint_plain(alpha, alpha0, y, y),
            FactorVariant::Max => {
                2.0 * additive_margin(alpha, alpha0, y) - additive_joint_plain(alpha, alpha0, y, y)
            }
            FactorVariant::Sum => {
                return Err(Error::UnsupportedModel {
                    context: "the additive sum variant has no computable Z2 survival".into(),
                })
            }
        },
    })
}

/// P(Z1 > x, Z2 > y). For the additive family only the plain variant is
/// supported.
pub fn joint_survival(spec: &ModelSpec, x: f64, y: f64) -> Result<f64> {
    spec.validate()?;
    check_coordinate("x", x)?;
    check_coordinate("y", y)?;
    match *spec {
        ModelSpec::GaussianCopula { alpha, rho } => {
            let (x, y) = (x.max(1.0), y.max(1.0));
            if x == 1.0 {
                return survival_second(spec, y);
            }
            if y == 1.0 {
                return survival_first(spec, x);
            }
            let px = x.powf(-alpha);
            let py = y.powf(-alpha);
            if px == 0.0 || py == 0.0 {
                return Ok(0.0);
            }
            Ok(bvn_upper(-norm_quantile(px), -norm_quantile(py), rho))
        }
        ModelSpec::MarshallOlkin { alpha, gamma1, gamma2 } => {
            let (x, y) = (x.max(1.0), y.max(1.0));
            let a = x.powf(-alpha);
            let b = y.powf(-alpha);
            Ok(a.powf(1.0 - gamma1) * b.powf(1.0 - gamma2) * a.powf(gamma1).min(b.powf(gamma2)))
        }
        ModelSpec::BernoulliMixture { alpha, alpha0, gamma, q } => {
            let (x, y) = (x.max(1.0), y.max(1.0));
            Ok(q * x.powf(-alpha) * y.powf(-gamma) + (1.0 - q) * x.max(y).powf(-alpha0))
        }
        ModelSpec::AdditiveFactor { alpha, alpha0, variant } => match variant {
            FactorVariant::Plain => Ok(additive_joint_plain(alpha, alpha0, x, y)),
            _ => Err(Error::UnsupportedModel {
                context: "joint survival is only computable for the plain additive variant"
                    .into(),
            }),
        },
    }
}

/// P(min(Z1, Z2) > t), the reciprocal of the hidden scaling function b0.
pub fn survival_min(spec: &ModelSpec, t: f64) -> Result<f64> {
    joint_survival(spec, t, t)
}

/// P(Y > s) for Y ~ Pareto(alpha) on [1, infinity), for any real s.
fn pareto_survival(alpha: f64, s: f64) -> f64 {
    if s <= 1.0 {
        1.0
    } else {
        s.powf(-alpha)
    }
}

/// Integral of `pareto_survival(alpha, .)` over (s, infinity).
fn pareto_survival_integral(alpha: f64, s: f64) -> f64 {
    if s <= 1.0 {
        (1.0 - s) + 1.0 / (alpha - 1.0)
    } else {
        s.powf(1.0 - alpha) / (alpha - 1.0)
    }
}

/// Integral of the plain additive joint survival S(x, t) over x in
/// (lower, infinity). Conditioning on the common factor V turns the inner
/// integral over x into a closed form, leaving one integral over v:
/// int alpha0 v^(-alpha0-1) P(Y > t-v) [int_lower P(Y > x-v) dx] dv.
fn additive_excess_integral(alpha: f64, alpha0: f64, t: f64, lower: f64) -> quad::Quad {
    let f = |v: f64| {
        alpha0
            * v.powf(-alpha0 - 1.0)
            * pareto_survival(alpha, t - v)
            * pareto_survival_integral(alpha, lower - v)
    };
    // Once v exceeds both t-1 and lower-1 the survival factors saturate
    // and the integrand is below alpha0 (1 + 1/(alpha-1)) v^-alpha0.
    let c = 1.0 + 1.0 / (alpha - 1.0);
    let bound =
        move |vv: f64| alpha0 * c * vv.powf(1.0 - alpha0) / (alpha0 - 1.0);
    quad::integrate_tail(&f, 1.0, 5e-8, bound)
}

/// P(Y + V > z) for Y ~ Pareto(alpha), V ~ Pareto(alpha0) independent.
fn additive_margin(alpha: f64, alpha0: f64, z: f64) -> f64 {
    if z <= 2.0 {
        return 1.0;
    }
    let tail = (z - 1.0).powf(-alpha0);
    let body = quad::integrate_rel(
        &|v: f64| (z - v).powf(-alpha) * alpha0 * v.powf(-alpha0 - 1.0),
        1.0,
        z - 1.0,
        INNER_REL,
    )
    .value;
    tail + body
}

/// P(Y1 + V > x, Y2 + V > y) by conditioning on the common factor V.
fn additive_joint_plain(alpha: f64, alpha0: f64, x: f64, y: f64) -> f64 {
    if x <= 2.0 {
        return additive_margin(alpha, alpha0, y);
    }
    if y <= 2.0 {
        return additive_margin(alpha, alpha0, x);
    }
    let hi = x.max(y) - 1.0;
    let integrand = |v: f64| {
        let sx = if v >= x - 1.0 { 1.0 } else { (x - v).powf(-alpha) };
        let sy = if v >= y - 1.0 { 1.0 } else { (y - v).powf(-alpha) };
        sx * sy * alpha0 * v.powf(-alpha0 - 1.0)
    };
    // The integrand has kinks where one coordinate stops binding.
    let mut cuts = vec![1.0, x.min(y) - 1.0, hi];
    cuts.dedup();
    let mut body = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            body += quad::integrate_rel(&integrand, w[0], w[1], INNER_REL).value;
        }
    }
    hi.powf(-alpha0) + body
}

/// The (1-p) quantile of Z2, by closed form for pure Pareto margins and by
/// bisection on the exact survival function otherwise.
pub fn var_second(spec: &ModelSpec, p: f64) -> Result<f64> {
    spec.validate()?;
    check_level(p)?;
    match *spec {
        ModelSpec::GaussianCopula { alpha, .. } | ModelSpec::MarshallOlkin { alpha, .. } => {
            Ok(p.powf(-1.0 / alpha))
        }
        _ => {
            let beta = spec.theoretical_indices().beta;
            bisect_var(|t| survival_second(spec, t), support_left(spec), p, beta)
        }
    }
}

fn bisect_var(
    survival: impl Fn(f64) -> Result<f64>,
    lo0: f64,
    p: f64,
    decay_index: f64,
) -> Result<f64> {
    let mut lo = lo0;
    let mut hi = 2.0 * p.powf(-1.0 / decay_index) + lo0;
    for _ in 0..200 {
        if survival(hi)? < p {
            break;
        }
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if survival(mid)? > p {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-12 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed-form MME at level p. Available for the Marshall-Olkin and
/// Bernoulli mixture families.
pub fn exact_mme(spec: &ModelSpec, p: f64) -> Result<f64> {
    spec.validate()?;
    check_level(p)?;
    match *spec {
        ModelSpec::MarshallOlkin { alpha, gamma1, gamma2 } => {
            let t = p.powf(-1.0 / alpha);
            if gamma1 >= gamma2 {
                // min(x^(-a g1), t^(-a g2)) = x^(-a g1) on the whole range,
                // so the integrand is x^-alpha times a power of t.
                Ok(t.powf(1.0 - alpha * (1.0 - gamma2)) / (alpha - 1.0))
            } else {
                // The min switches branches at x = t^(g2/g1).
                let xs = t.powf(gamma2 / gamma1);
                let a = alpha * (1.0 - gamma1);
                let head = if a == 1.0 {
                    (xs / t).ln()
                } else {
                    (t.powf(1.0 - a) - xs.powf(1.0 - a)) / (a - 1.0)
                };
                Ok(head + t.powf(alpha * gamma2) * xs.powf(1.0 - alpha) / (alpha - 1.0))
            }
        }
        ModelSpec::BernoulliMixture { alpha, alpha0, gamma, q } => {
            let t = var_second(spec, p)?;
            let numerator = q * t.powf(1.0 - gamma - alpha) / (alpha - 1.0)
                + (1.0 - q) * t.powf(1.0 - alpha0) / (alpha0 - 1.0);
            Ok(numerator / p)
        }
        _ => Err(Error::UnsupportedModel {
            context: format!("no closed-form MME for {spec}"),
        }),
    }
}

/// Closed-form MES at level p. Available for the Bernoulli mixture family.
pub fn exact_mes(spec: &ModelSpec, p: f64) -> Result<f64> {
    spec.validate()?;
    check_level(p)?;
    match *spec {
        ModelSpec::BernoulliMixture { alpha, alpha0, gamma, q } => {
            let t = var_second(spec, p)?;
            let numerator = q * alpha / (alpha - 1.0) * t.powf(-gamma)
                + (1.0 - q) * alpha0 / (alpha0 - 1.0) * t.powf(1.0 - alpha0);
            Ok(numerator / p)
        }
        _ => Err(Error::UnsupportedModel {
            context: format!("no closed-form MES for {spec}"),
        }),
    }
}

/// Upper bound on the integral of P(Z1 > x) over (T, infinity), used to
/// truncate tail quadrature.
fn marginal_tail_integral_bound(spec: &ModelSpec, t: f64) -> f64 {
    match *spec {
        ModelSpec::GaussianCopula { alpha, .. } | ModelSpec::MarshallOlkin { alpha, .. } => {
            t.powf(1.0 - alpha) / (alpha - 1.0)
        }
        ModelSpec::BernoulliMixture { alpha, alpha0, q, .. } => {
            q * t.powf(1.0 - alpha) / (alpha - 1.0)
                + (1.0 - q) * t.powf(1.0 - alpha0) / (alpha0 - 1.0)
        }
        ModelSpec::AdditiveFactor { alpha, .. } => {
            // P(Y + V > x) <= P(Y > x/2) + P(V > x/2) <= 2 (x/2)^-alpha.
            2.0f64.powf(1.0 + alpha) * t.powf(1.0 - alpha) / (alpha - 1.0)
        }
    }
}

/// Integral of the joint survival S(x, t) over x in (lower, infinity).
fn quadrature_excess_integral(spec: &ModelSpec, t: f64, lower: f64) -> Result<quad::Quad> {
    if let ModelSpec::AdditiveFactor { alpha, alpha0, variant } = *spec {
        return if variant == FactorVariant::Plain {
            Ok(additive_excess_integral(alpha, alpha0, t, lower))
        } else {
            Err(Error::UnsupportedModel {
                context: "quadrature needs the plain additive joint survival".into(),
            })
        };
    }
    joint_survival(spec, lower, t)?;
    let f = |x: f64| joint_survival(spec, x, t).expect("domain prechecked");
    let q = quad::integrate_tail(&f, lower, QUAD_REL, |tt| {
        marginal_tail_integral_bound(spec, tt)
    });
    Ok(q)
}

fn quadrature_mme(spec: &ModelSpec, p: f64) -> Result<NumericEstimate> {
    let t = var_second(spec, p)?;
    let q = quadrature_excess_integral(spec, t, t)?;
    Ok(NumericEstimate { value: q.value / p, error: q.error / p })
}

fn quadrature_mes(spec: &ModelSpec, p: f64) -> Result<NumericEstimate> {
    let t = var_second(spec, p)?;
    let lower = support_left(spec);
    let q = quadrature_excess_integral(spec, t, lower)?;
    Ok(NumericEstimate { value: lower + q.value / p, error: q.error / p })
}

enum Summand {
    Excess,
    Level,
}

fn montecarlo_measure(
    spec: &ModelSpec,
    p: f64,
    budget: usize,
    summand: Summand,
) -> Result<NumericEstimate> {
    if budget == 0 {
        return Err(Error::InvalidParameter {
            name: "budget".into(),
            value: "0".into(),
            constraint: "Monte Carlo budget must be positive".into(),
        });
    }
    let mut rng = stream_rng(ORACLE_SEED, 0);
    let sample = spec.sample_with(&mut rng, budget)?;
    let t = match var_second(spec, p) {
        Ok(t) => t,
        // The sum variant has no computable Z2 survival; fall back to the
        // empirical quantile of the simulated conditioning coordinate.
        Err(Error::UnsupportedModel { .. }) => {
            let k = ((budget as f64) * p).round().max(1.0) as usize;
            let mut z2 = sample.z2().to_vec();
            z2.sort_by(|a, b| b.partial_cmp(a).expect("finite values compare"));
            z2[k - 1]
        }
        Err(e) => return Err(e),
    };
    let mut count = 0usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (a, b) in sample.pairs() {
        if b > t {
            let s = match summand {
                Summand::Excess => (a - t).max(0.0),
                Summand::Level => a,
            };
            count += 1;
            sum += s;
            sum_sq += s * s;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientExceedances { needed: 1, observed: 0 });
    }
    let m = count as f64;
    let value = sum / m;
    let error = if count == 1 {
        f64::INFINITY
    } else {
        ((sum_sq / m - value * value).max(0.0) / (m - 1.0)).sqrt()
    };
    Ok(NumericEstimate { value, error })
}

/// Numeric MME at level p by quadrature of the exact joint survival or by
/// Monte Carlo with the internal oracle stream.
pub fn numeric_mme(spec: &ModelSpec, p: f64, method: NumericMethod) -> Result<NumericEstimate> {
    spec.validate()?;
    check_level(p)?;
    match method {
        NumericMethod::Quadrature => quadrature_mme(spec, p),
        NumericMethod::MonteCarlo { budget } => {
            montecarlo_measure(spec, p, budget, Summand::Excess)
        }
    }
}

/// Numeric MES at level p; see [`numeric_mme`].
pub fn numeric_mes(spec: &ModelSpec, p: f64, method: NumericMethod) -> Result<NumericEstimate> {
    spec.validate()?;
    check_level(p)?;
    match method {
        NumericMethod::Quadrature => quadrature_mes(spec, p),
        NumericMethod::MonteCarlo { budget } => montecarlo_measure(spec, p, budget, Summand::Level),
    }
}

fn reference_measure(
    mc_budget: usize,
    exact: impl Fn() -> Result<f64>,
    numeric: impl Fn(NumericMethod) -> Result<NumericEstimate>,
) -> Result<(f64, TruthSource)> {
    match exact() {
        Ok(v) => return Ok((v, TruthSource::Exact)),
        Err(Error::UnsupportedModel { .. }) => {}
        Err(e) => return Err(e),
    }
    match numeric(NumericMethod::Quadrature) {
        Ok(est) => return Ok((est.value, TruthSource::Quadrature)),
        Err(Error::UnsupportedModel { .. }) => {}
        Err(e) => return Err(e),
    }
    let est = numeric(NumericMethod::MonteCarlo { budget: mc_budget })?;
    Ok((est.value, TruthSource::MonteCarlo))
}

/// The most authoritative MME reference available for this family:
/// exact, else quadrature, else Monte Carlo with `mc_budget` pairs.
pub fn reference_mme(spec: &ModelSpec, p: f64, mc_budget: usize) -> Result<(f64, TruthSource)> {
    reference_measure(mc_budget, || exact_mme(spec, p), |m| numeric_mme(spec, p, m))
}

/// The most authoritative MES reference available; see [`reference_mme`].
pub fn reference_mes(spec: &ModelSpec, p: f64, mc_budget: usize) -> Result<(f64, TruthSource)> {
    reference_measure(mc_budget, || exact_mes(spec, p), |m| numeric_mes(spec, p, m))
}
