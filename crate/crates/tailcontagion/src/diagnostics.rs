//! Diagnostics for the dependence structure of bivariate extremes: angular
//! histograms of the largest observations, a coarse verdict on asymptotic
//! tail independence, and empirical checks of the moment conditions behind
//! the MME and MES limit theory.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::kth_largest;
use crate::sample::BivariateSample;

/// Default fraction of the sample, by L1 radius, entering the angular
/// histogram.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.1;
/// Default number of angular bins.
pub const DEFAULT_BINS: usize = 20;
/// Default exceedance levels of the moment-condition grid.
pub const DEFAULT_B_LEVELS: [f64; 4] = [0.10, 0.05, 0.02, 0.01];
/// Default scale multipliers of the moment-condition grid.
pub const DEFAULT_B_MULTIPLIERS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
/// Cells with fewer joint exceedances than this are flagged as too thin
/// to interpret.
pub const DEFAULT_MIN_JOINT: usize = 10;

/// Map each value to its average rank divided by n + 1, so the output lies
/// strictly inside (0, 1). Ties receive the mean of the ranks they occupy.
pub fn rank_transform(data: &[f64]) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyInput { context: "rank transform".into() });
    }
    if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "data".into(),
            value: bad.to_string(),
            constraint: "all values must be finite".into(),
        });
    }
    let n = data.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| data[i].partial_cmp(&data[j]).expect("finite values compare"));
    let mut out = vec![0.0; n];
    let scale = 1.0 / (n as f64 + 1.0);
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && data[order[end + 1]] == data[order[start]] {
            end += 1;
        }
        // 1-based ranks start+1 ..= end+1 average to (start + end) / 2 + 1.
        let avg_rank = 0.5 * ((start + end) as f64) + 1.0;
        for &idx in &order[start..=end] {
            out[idx] = avg_rank * scale;
        }
        start = end + 1;
    }
    Ok(out)
}

/// Histogram of the angles of the largest observations after rank-based
/// standardisation to unit Pareto scale.
///
/// The angle of a point (w1, w2) is (2/pi) atan(w2/w1), so 0 means the
/// first coordinate dominates and 1 the second. Mass near the endpoints
/// signals asymptotically independent extremes, mass in the interior
/// signals extremes that grow together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularHistogram {
    /// Mass per bin over the uniform partition of [0, 1]; sums to 1.
    pub mass: Vec<f64>,
    /// Number of points that entered the histogram.
    pub points: usize,
}

impl AngularHistogram {
    pub fn bins(&self) -> usize {
        self.mass.len()
    }

    /// The angular interval covered by bin `i`.
    pub fn edges(&self, i: usize) -> (f64, f64) {
        let b = self.bins() as f64;
        (i as f64 / b, (i + 1) as f64 / b)
    }

    /// Write `bin_left,bin_right,mass` rows, preceded by `#` comment lines.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> Result<()> {
        for line in comments {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "bin_left,bin_right,mass")?;
        for (i, mass) in self.mass.iter().enumerate() {
            let (lo, hi) = self.edges(i);
            writeln!(w, "{lo},{hi},{mass:.16e}")?;
        }
        Ok(())
    }
}

/// Build the angular histogram of the `tail_fraction` largest points by L1
/// radius on rank-Pareto scale.
///
/// Bins are assigned through the folded angle of the smaller-to-larger
/// coordinate ratio, so swapping the two coordinates reverses the histogram
/// exactly; points on the diagonal go to bin `bins / 2`.
pub fn angular_histogram(
    sample: &BivariateSample,
    tail_fraction: f64,
    bins: usize,
) -> Result<AngularHistogram> {
    if sample.is_empty() {
        return Err(Error::EmptyInput { context: "angular histogram".into() });
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "tail_fraction".into(),
            value: tail_fraction.to_string(),
            constraint: "0 < tail_fraction <= 1".into(),
        });
    }
    if bins == 0 {
        return Err(Error::InvalidParameter {
            name: "bins".into(),
            value: "0".into(),
            constraint: "at least one bin".into(),
        });
    }
    let n = sample.len();
    let u1 = rank_transform(sample.z1())?;
    let u2 = rank_transform(sample.z2())?;
    let w1: Vec<f64> = u1.iter().map(|u| 1.0 / (1.0 - u)).collect();
    let w2: Vec<f64> = u2.iter().map(|u| 1.0 / (1.0 - u)).collect();

    let m = ((tail_fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        (w1[j] + w2[j]).partial_cmp(&(w1[i] + w2[i])).expect("finite values compare")
    });

    let mut mass = vec![0.0; bins];
    let weight = 1.0 / m as f64;
    for &i in &order[..m] {
        let (a, b) = (w1[i], w2[i]);
        let bin = if a == b {
            bins / 2
        } else {
            let folded = 2.0 / std::f64::consts::PI * (a.min(b) / a.max(b)).atan();
            let j = ((folded * bins as f64) as usize).min(bins - 1);
            if b < a {
                j
            } else {
                bins - 1 - j
            }
        };
        mass[bin] += weight;
    }
    Ok(AngularHistogram { mass, points: m })
}

/// Thresholds of [`ai_verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictConfig {
    /// The edge bands (the outermost tenth of the angle range on each
    /// side) must jointly exceed this mass for an asymptotic-independence
    /// call.
    pub extreme_mass: f64,
    /// No interior bin may exceed this mass for an asymptotic-independence
    /// call.
    pub interior_quiet: f64,
    /// Some interior bin above this mass forces a dependence call.
    pub interior_loud: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig { extreme_mass: 0.5, interior_quiet: 0.15, interior_loud: 0.25 }
    }
}

/// Reading of an angular histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AsymptoticallyIndependent,
    Dependent,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::AsymptoticallyIndependent => "asymptotically_independent",
            Verdict::Dependent => "dependent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Classify an angular histogram: asymptotically independent when the mass
/// sits in the edge bands near the axes and the interior is quiet,
/// dependent when some interior bin is loud, inconclusive otherwise.
pub fn ai_verdict(hist: &AngularHistogram, config: &VerdictConfig) -> Result<Verdict> {
    let bins = hist.bins();
    if bins < 3 {
        return Err(Error::InvalidParameter {
            name: "bins".into(),
            value: bins.to_string(),
            constraint: "a verdict needs at least 3 bins".into(),
        });
    }
    let edge = (bins / 10).max(1);
    let extremes: f64 =
        hist.mass[..edge].iter().sum::<f64>() + hist.mass[bins - edge..].iter().sum::<f64>();
    let interior_max =
        hist.mass[edge..bins - edge].iter().cloned().fold(0.0f64, f64::max);
    if extremes > config.extreme_mass && interior_max <= config.interior_quiet {
        Ok(Verdict::AsymptoticallyIndependent)
    } else if interior_max > config.interior_loud {
        Ok(Verdict::Dependent)
    } else {
        Ok(Verdict::Inconclusive)
    }
}

/// One cell of the moment-condition grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCell {
    /// Exceedance level defining the threshold.
    pub level: f64,
    /// Empirical threshold: the ceil(n * level)-th largest z2.
    pub threshold: f64,
    /// Scale multiplier.
    pub m: f64,
    pub value: f64,
    /// Number of observations exceeding the threshold in both coordinates.
    pub joint_count: usize,
    /// True when `joint_count` is too small to trust the cell.
    pub flagged: bool,
}

/// Empirical checks of the two moment conditions behind the limit theory,
/// evaluated on a common sample across the whole grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionBReport {
    /// Scaled mean excess beyond m, relative to joint exceedances. Must
    /// decay in m for the MME extrapolation to be trustworthy; with a
    /// common sample it is exactly nonincreasing in m at fixed level.
    pub b1: Vec<AssumptionCell>,
    /// Capped scaled mean, relative to joint exceedances. Blowing up along
    /// shrinking levels signals that the MES limit fails, as it does under
    /// exact independence.
    pub b2: Vec<AssumptionCell>,
}

/// Evaluate both moment-condition statistics on the grid of exceedance
/// levels and multipliers. Cells with fewer than `min_joint` joint
/// exceedances are flagged, not treated as errors; a cell with no joint
/// exceedances at all has value NaN.
pub fn check_assumption_b(
    sample: &BivariateSample,
    levels: &[f64],
    multipliers: &[f64],
    min_joint: usize,
) -> Result<AssumptionBReport> {
    if sample.is_empty() {
        return Err(Error::EmptyInput { context: "assumption check".into() });
    }
    if levels.is_empty() || multipliers.is_empty() {
        return Err(Error::EmptyInput { context: "assumption check grid".into() });
    }
    for &m in multipliers {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter {
                name: "multiplier".into(),
                value: m.to_string(),
                constraint: "must be a finite positive number".into(),
            });
        }
    }
    let n = sample.len();
    let mut b1 = Vec::with_capacity(levels.len() * multipliers.len());
    let mut b2 = Vec::with_capacity(levels.len() * multipliers.len());
    for &level in levels {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::InvalidParameter {
                name: "level".into(),
                value: level.to_string(),
                constraint: "0 < level < 1".into(),
            });
        }
        let k = ((level * n as f64).ceil() as usize).clamp(1, n);
        let t = kth_largest(sample.z2(), k)?;
        let joint_count =
            sample.pairs().filter(|&(a, b)| a > t && b > t).count();
        let flagged = joint_count < min_joint;
        for &m in multipliers {
            let (mut excess, mut capped) = (0.0, 0.0);
            for (a, b) in sample.pairs() {
                if b > t {
                    excess += (a / t - m).max(0.0);
                    capped += (a / t).min(1.0 / m);
                }
            }
            let denom = joint_count as f64;
            b1.push(AssumptionCell {
                level,
                threshold: t,
                m,
                value: excess / denom,
                joint_count,
                flagged,
            });
            b2.push(AssumptionCell {
                level,
                threshold: t,
                m,
                value: capped / denom,
                joint_count,
                flagged,
            });
        }
    }
    Ok(AssumptionBReport { b1, b2 })
}
