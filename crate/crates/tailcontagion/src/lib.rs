//! Tail contagion toolkit: simulation, tail-index estimation, and
//! extreme-value extrapolation of marginal mean excess (MME) and marginal
//! expected shortfall (MES) for bivariate heavy-tailed data whose extremes
//! are asymptotically independent yet still jointly heavy.

pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod models;
pub mod normal;
pub mod oracle;
pub mod pipeline;
pub mod quad;
pub mod rng;
pub mod sample;
pub mod tail;

pub use diagnostics::{
    ai_verdict, angular_histogram, check_assumption_b, rank_transform, AngularHistogram,
    AssumptionBReport, AssumptionCell, Verdict, VerdictConfig,
};
pub use error::{Error, Result};
pub use estimators::{
    empirical_mme, empirical_mes, evt_mme, evt_mes, EvtConfig, EvtEstimate, EvtFlags,
    TailAssumption,
};
pub use experiment::{
    canned_plan, format_plan, parse_plan, run_experiment, ExperimentPlan, ExperimentSummary,
    Measure, Method, Quantiles, SummaryCell, CANNED_PLAN_NAMES,
};
pub use models::{aggregate_system, AggregateMode, FactorVariant, ModelSpec, TheoreticalIndices};
pub use oracle::{
    exact_mes, exact_mme, joint_survival, limit_constants, nu0_rectangle, numeric_mes,
    numeric_mme, reference_mes, reference_mme, survival_min, var_second, LimitConstants,
    NumericEstimate, NumericMethod, TruthSource,
};
pub use pipeline::{
    analyze_pair, joint_negative_pairs, synthetic_fixture, CurvePoint, PairConfig, PairReport,
    PriceSeries, ReturnKind, ReturnSeries,
};
pub use sample::BivariateSample;
pub use tail::{hill, hill_plot, lmoment_tail_index, min_transform, TailIndexEstimate};
