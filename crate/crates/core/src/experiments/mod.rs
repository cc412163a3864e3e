//! Seeded Monte-Carlo experiments on random unit-circle polynomials, the
//! cubic grid scan, and report persistence.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, trial)`, so
//! serial and parallel runs produce the same numbers.

mod cubic;
mod ensemble;
mod report;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Closeness;
use crate::newton::DEFAULT_K_MAX;
use crate::poly::RootForm;

pub use cubic::{cubic_quotients, cubic_scan, CubicQuotients, CubicScanConfig, CubicScanDetail};
pub use ensemble::{
    basin_owner, basin_sweep, conjecture1_experiment, conjecture1_trials, conjecture2_experiment,
    conjecture3_experiment, total_radians_experiment, BasinSweep, Conjecture1Trial,
    QuotientExtreme,
};
pub use report::{read_report, write_quotient_csv, write_report, SCHEMA_VERSION};

/// Trials per ensemble in the desk-scale profile.
pub const DESK_TRIALS: usize = 300;
/// Trials per ensemble in the long-run profile.
pub const LONG_RUN_TRIALS: usize = 3000;

/// How basin counts are reduced to the Conjecture-2 score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasinAggregation {
    /// Per root, the best circle's count; then the minimum over roots and trials.
    #[default]
    BestCirclePerRoot,
    /// The smallest non-empty count over all (root, circle) pairs; a root with
    /// no basin points at all scores 0.
    EveryPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialEnsembleConfig {
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    /// Sample points per DR-circle are this factor times the degree.
    pub circle_points_factor: usize,
    pub basin_k_max: usize,
    #[serde(default)]
    pub closeness: Closeness,
    #[serde(default)]
    pub aggregation: BasinAggregation,
}

impl TrialEnsembleConfig {
    pub fn new(degree: usize, trials: usize, seed: u64) -> Self {
        TrialEnsembleConfig {
            degree,
            trials,
            seed,
            circle_points_factor: 10,
            basin_k_max: DEFAULT_K_MAX,
            closeness: Closeness::default(),
            aggregation: BasinAggregation::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::InvalidConfig(format!(
                "degree must be at least 2, got {}",
                self.degree
            )));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("need at least one trial".into()));
        }
        if self.circle_points_factor < 1 || self.basin_k_max < 1 {
            return Err(Error::InvalidConfig(
                "circle_points_factor and basin_k_max must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "c1")]
    Conjecture1,
    #[serde(rename = "c2")]
    Conjecture2,
    #[serde(rename = "c3")]
    Conjecture3,
    #[serde(rename = "cubic-scan")]
    CubicScan,
    #[serde(rename = "total-radians")]
    TotalRadians,
}

/// Aggregate result of one experiment run with its configuration echoed.
///
/// Basin experiments fill all three basin statistics; the kind names the
/// headline one. Timestamps are the only fields that differ between reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub ensemble: Option<TrialEnsembleConfig>,
    pub cubic: Option<CubicScanConfig>,
    pub accepted_trials: u64,
    pub rejected_trials: u64,
    /// Smallest quotient observed.
    pub iota1_estimate: Option<f64>,
    /// Largest quotient observed.
    pub iota2_estimate: Option<f64>,
    pub c2_min_basin_points: Option<u64>,
    pub c3_min_rich_circles: Option<u64>,
    pub total_radians_min: Option<f64>,
    pub cubic_detail: Option<CubicScanDetail>,
    pub started_at: Option<String>,
    pub finished_at: Option<String>,
}

impl ExperimentReport {
    fn empty(kind: ExperimentKind) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            kind,
            ensemble: None,
            cubic: None,
            accepted_trials: 0,
            rejected_trials: 0,
            iota1_estimate: None,
            iota2_estimate: None,
            c2_min_basin_points: None,
            c3_min_rich_circles: None,
            total_radians_min: None,
            cubic_detail: None,
            started_at: Some(now()),
            finished_at: None,
        }
    }

    fn finish(mut self) -> Self {
        self.finished_at = Some(now());
        self
    }

    /// The same report with both timestamps cleared.
    pub fn without_timestamps(mut self) -> Self {
        self.started_at = None;
        self.finished_at = None;
        self
    }

    /// One-line summary of the headline statistic.
    pub fn summary(&self) -> String {
        let f = |v: Option<f64>| v.map_or("nan".to_string(), |x| format!("{x:.4}"));
        match self.kind {
            ExperimentKind::Conjecture1 | ExperimentKind::CubicScan => format!(
                "iota1={} iota2={}",
                f(self.iota1_estimate),
                f(self.iota2_estimate)
            ),
            ExperimentKind::Conjecture2 => format!(
                "min_basin_points={}",
                self.c2_min_basin_points
                    .map_or("nan".into(), |v| v.to_string())
            ),
            ExperimentKind::Conjecture3 => format!(
                "min_rich_circles={}",
                self.c3_min_rich_circles
                    .map_or("nan".into(), |v| v.to_string())
            ),
            ExperimentKind::TotalRadians => {
                format!("total_radians_min={}", f(self.total_radians_min))
            }
        }
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// The deterministic stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Monic polynomial with `degree` roots drawn uniformly on the unit circle.
pub fn random_unit_circle_poly<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Result<RootForm> {
    if degree < 2 {
        return Err(Error::DegreeTooLow {
            degree,
            required: 2,
        });
    }
    let roots = (0..degree)
        .map(|_| Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU))
        .collect();
    RootForm::monic(roots)
}
