//! Manifest-driven experiments producing JSON reports and CSV tables.

mod config;
mod duality;
mod fourier;
mod inequalities;
mod norms;
mod report;

use rayon::prelude::*;
use serde_json::Value;

pub use config::{Config, ExperimentConfig, SCHEMA_VERSION};
pub use report::{num, Check, Constant, ExperimentReport, SuiteReport, Table};

use crate::error::{Error, Result};

type Runner = fn(&ExperimentConfig, u64) -> Result<ExperimentReport>;
type ParamCheck = fn(&ExperimentConfig) -> Result<()>;

/// Registry record for one experiment.
pub struct ExperimentInfo {
    pub id: &'static str,
    /// Topic tag, unique per experiment.
    pub topic: &'static str,
    pub description: &'static str,
    /// Acceptance criteria decided by this experiment.
    pub criteria: &'static [u8],
    run: Runner,
    check: ParamCheck,
}

macro_rules! experiment {
    ($id:literal, $topic:literal, $desc:literal, $crit:expr, $module:ident :: $run:ident, $params:ty) => {
        ExperimentInfo {
            id: $id,
            topic: $topic,
            description: $desc,
            criteria: $crit,
            run: $module::$run,
            check: |c| c.typed::<$params>().map(|_| ()),
        }
    };
}

pub static EXPERIMENTS: &[ExperimentInfo] = &[
    experiment!("duality", "young-fenchel-duality", "biconjugate recovers convex Young kernels; psi from the exponential kernel", &[1], duality::run_duality, duality::DualityParams),
    experiment!("norm-table", "norm-catalog", "L_p, Orlicz and grand Lebesgue norms over the catalog", &[], norms::run_norm_table, norms::NormTableParams),
    experiment!("moment-formula", "moment-growth", "moments of the log-singular catalog functions against Gamma(p/m + 1)^(1/p)", &[3], norms::run_moment_formula, norms::MomentParams),
    experiment!("fundamental-curve", "fundamental-function", "closed-form fundamental functions against indicator norms", &[4], norms::run_fundamental, norms::FundamentalParams),
    experiment!("thm7-equivalence", "orlicz-grand-equivalence", "Orlicz and grand Lebesgue norms agree up to constants; tail criterion; layer-cake identity", &[2], norms::run_equivalence, norms::EquivalenceParams),
    experiment!("thm8-l0", "l0-subspace", "membership in the closure of bounded functions via the vanishing moment ratio", &[], norms::run_l0, norms::L0Params),
    experiment!("thm9-dominance", "dominance-embedding", "dominance of growth functions and the induced embedding into the L0 part", &[], duality::run_dominance, duality::DominanceParams),
    experiment!("riesz-growth", "partial-sum-growth", "growth of Fourier partial sums and band-limiting in p", &[5], fourier::run_riesz, fourier::RieszParams),
    experiment!("lemma1-sharpness", "conjugate-function-sharpness", "tail exponent and moment growth of the conjugate of the log-singular function", &[6], fourier::run_sharpness, fourier::SharpnessParams),
    experiment!("hausdorff-young", "hausdorff-young", "continuous and discrete Hausdorff-Young on seeded random trigonometric polynomials", &[7], inequalities::run_hausdorff_young, inequalities::HausdorffYoungParams),
    experiment!("paley", "paley-inequality", "fitted constant of the Paley-type inequality on weighted coefficient norms", &[8], inequalities::run_paley, inequalities::PaleyParams),
    experiment!("thm4", "transform-moment-growth", "moment growth of the Fourier transform of two-sided power functions", &[], inequalities::run_transform_growth, inequalities::TransformGrowthParams),
    experiment!("thm6", "weighted-transform-bound", "fitted constant of the transform bound against the weighted norm", &[8], inequalities::run_transform_bound, inequalities::TransformBoundParams),
    experiment!("divergence-zL", "partial-sum-divergence", "partial sums of the slowly varying sine series in the matched and a dominating scale", &[9], fourier::run_divergence, fourier::DivergenceParams),
    experiment!("haar-bound", "haar-projection", "uniform bound of Haar partial sums in L_p", &[10], fourier::run_haar, fourier::HaarParams),
];

pub fn info(id: &str) -> Option<&'static ExperimentInfo> {
    EXPERIMENTS.iter().find(|e| e.id == id)
}

pub(crate) fn check_params(cfg: &ExperimentConfig) -> Result<()> {
    let info = info(&cfg.id).ok_or_else(|| Error::UnknownExperiment(cfg.id.clone()))?;
    (info.check)(cfg)
}

/// One line per experiment: id, topic, description.
pub fn list_experiments() -> String {
    EXPERIMENTS
        .iter()
        .map(|e| format!("{:<18} [{}] {}\n", e.id, e.topic, e.description))
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let info = info(&cfg.id).ok_or_else(|| Error::UnknownExperiment(cfg.id.clone()))?;
    (info.run)(cfg, seed)
}

/// Runs every experiment of the manifest; results keep manifest order.
pub fn run_suite(config: &Config) -> Result<SuiteReport> {
    config.validate()?;
    let experiments = config
        .experiments
        .par_iter()
        .map(|e| run_experiment(e, config.seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        seed: config.seed,
        passed: experiments.iter().all(ExperimentReport::passed),
        experiments,
    })
}

pub(crate) fn echo(cfg: &impl serde::Serialize) -> Value {
    serde_json::to_value(cfg).unwrap_or(Value::Null)
}

pub(crate) fn topic(id: &str) -> &'static str {
    info(id).map(|i| i.topic).unwrap_or("")
}

/// Relative deviation `|a / b - 1|`.
pub(crate) fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}
