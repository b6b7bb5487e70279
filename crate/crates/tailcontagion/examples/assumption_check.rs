//! Probe the second-order assumption behind the EVT extrapolation with
//! threshold-stability tables.
//!
//! The B1 column tracks the conditional mean excess of scaled exceedances
//! and should decay toward zero in the multiplier m when the hidden
//! regular-variation framework applies; the B2 column tracks a bounded
//! variant that stays flat when the coordinates are genuinely tail
//! independent of each other.
//!
//! ```bash
//! cargo run --example assumption_check
//! ```

use tailcontagion::diagnostics::{DEFAULT_B_LEVELS, DEFAULT_B_MULTIPLIERS, DEFAULT_MIN_JOINT};
use tailcontagion::{check_assumption_b, AssumptionCell, ModelSpec, Result};

fn print_table(title: &str, cells: &[AssumptionCell]) {
    println!("{title}");
    println!("{:>7} {:>6} {:>12} {:>8} {:>8}", "level", "m", "value", "joint", "flag");
    for c in cells {
        println!(
            "{:>7} {:>6} {:>12.5} {:>8} {:>8}",
            c.level,
            c.m,
            c.value,
            c.joint_count,
            if c.flagged { "sparse" } else { "" }
        );
    }
    println!();
}

fn main() -> Result<()> {
    let n = 50_000;
    let spec = ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.5, gamma: 4.0, q: 0.5 };
    let sample = spec.sample(n, 13, 0)?;
    let report = check_assumption_b(
        &sample,
        &DEFAULT_B_LEVELS,
        &DEFAULT_B_MULTIPLIERS,
        DEFAULT_MIN_JOINT,
    )?;
    print_table("bernoulli mixture, B1 (decays in m at each level):", &report.b1);

    let independent = ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.9, gamma: 4.0, q: 0.99 };
    let sample = independent.sample(n, 13, 0)?;
    let report = check_assumption_b(
        &sample,
        &[0.2, 0.1, 0.05],
        &DEFAULT_B_MULTIPLIERS,
        DEFAULT_MIN_JOINT,
    )?;
    print_table("nearly independent pairs, B2 (no decay across levels):", &report.b2);
    Ok(())
}
