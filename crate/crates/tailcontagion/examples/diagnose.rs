//! Classify joint-tail dependence with the angular histogram of the
//! rank-transformed extremes.
//!
//! Axis-concentrated angular mass signals asymptotic independence;
//! interior mass signals genuine tail dependence. The verdict compares
//! the histogram's edge and interior masses against fixed thresholds.
//!
//! ```bash
//! cargo run --example diagnose
//! ```

use tailcontagion::{
    ai_verdict, angular_histogram, BivariateSample, ModelSpec, Result, VerdictConfig,
};

fn sparkline(mass: &[f64]) -> String {
    let ramp = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let peak = mass.iter().cloned().fold(0.0, f64::max).max(1e-12);
    mass.iter()
        .map(|&m| ramp[((m / peak) * 9.0).round() as usize])
        .collect()
}

fn main() -> Result<()> {
    let n = 20_000;
    let cases = [
        ("gauss rho=0.5", ModelSpec::GaussianCopula { alpha: 2.0, rho: 0.5 }),
        ("gauss rho=0.9", ModelSpec::GaussianCopula { alpha: 2.0, rho: 0.9 }),
        ("mo g=(0.8,0.7)", ModelSpec::MarshallOlkin { alpha: 2.0, gamma1: 0.8, gamma2: 0.7 }),
        ("bernoulli", ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.5, gamma: 4.0, q: 0.5 }),
    ];

    println!("angular mass over [0, 1] (left = first axis, right = second axis)");
    for (name, spec) in &cases {
        let sample = spec.sample(n, 3, 0)?;
        let hist = angular_histogram(&sample, 0.05, 20)?;
        let verdict = ai_verdict(&hist, &VerdictConfig::default())?;
        println!("{name:<16} |{}| {}", sparkline(&hist.mass), verdict.name());
    }

    let comonotone = BivariateSample::from_pairs((1..=n).map(|i| {
        let u = i as f64 / (n + 1) as f64;
        let z = (1.0 - u).powf(-0.5);
        (z, z)
    }))?;
    let hist = angular_histogram(&comonotone, 0.05, 20)?;
    let verdict = ai_verdict(&hist, &VerdictConfig::default())?;
    println!("{:<16} |{}| {}", "comonotone", sparkline(&hist.mass), verdict.name());
    Ok(())
}
