//! Evaluate the analytic oracles: exact risk measures, their scaled
//! small-p limits, and the hidden limit measure of each family.
//!
//! As p shrinks, p b0(t) / t times MME(p) approaches the mass of the
//! hidden limit measure above the diagonal threshold; this example prints
//! that convergence together with each family's limit constants.
//!
//! ```bash
//! cargo run --example theoretical_limits
//! ```

use tailcontagion::oracle::{exact_mme, limit_constants, survival_min, var_second};
use tailcontagion::{FactorVariant, ModelSpec, Result};

fn main() -> Result<()> {
    let families = [
        ("gauss", ModelSpec::GaussianCopula { alpha: 2.0, rho: 0.9 }),
        ("mo", ModelSpec::MarshallOlkin { alpha: 2.0, gamma1: 0.8, gamma2: 0.7 }),
        ("bernoulli", ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.5, gamma: 4.0, q: 0.5 }),
        ("additive", ModelSpec::AdditiveFactor { alpha: 1.5, alpha0: 2.0, variant: FactorVariant::Plain }),
    ];

    println!("{:<10} {:>12} {:>12} {:>14}", "family", "mme_limit", "mes_limit", "rv_index_mme");
    for (name, spec) in &families {
        let lc = limit_constants(spec)?;
        let mes = lc.mes_limit.map_or("none".to_string(), |v| format!("{v:.6}"));
        println!("{name:<10} {:>12.6} {mes:>12} {:>14.6}", lc.mme_limit, lc.rv_index_mme);
    }

    let spec = ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.5, gamma: 4.0, q: 0.5 };
    let lc = limit_constants(&spec)?;
    println!("\nscaled exact MME of the bernoulli mixture vs its limit {:.6}:", lc.mme_limit);
    println!("{:>8}  {:>12}  {:>10}", "p", "scaled mme", "rel gap");
    for p in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let t = var_second(&spec, p)?;
        let b0_inverse = 1.0 / survival_min(&spec, t)?;
        let scaled = exact_mme(&spec, p)? * p * b0_inverse / t;
        println!("{p:>8}  {scaled:>12.6}  {:>10.2e}", (scaled - lc.mme_limit).abs() / lc.mme_limit);
    }
    Ok(())
}
