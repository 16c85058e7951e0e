//! Bound audits and numerical experiments: entropic uncertainty checks,
//! adversarial leakage search, the leakage scan, Haar concentration, and
//! honest-leakage trends for random families.

mod audits;
mod concentration;
mod entropic;
mod optimizer;
mod scan;
mod trend;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use audits::{gain_bound_audit, honest_privacy_audit, povm_audit};
pub use concentration::{concentration_bound, concentration_experiment, default_t_grid, ConcentrationPoint, ConcentrationReport};
pub use entropic::{
    entropic_gain_bound, explore_condition_2prime, theorem1_overlap, theorem1_slack,
    verify_theorem1, walsh_or_fourier,
};
pub use optimizer::{
    expected_gain, hermitian_from_params, max_leakage, params_from_unitary, unitary_from_params,
    LeakageResult, OptimizerConfig,
};
pub use scan::{leakage_scan, LeakageFit, ScanRow, ScanTable, REFERENCE_FIT};
pub use trend::{haar_item_leakage, random_family_leakage_trend, TrendRow, TrendSummary, TrendTable};

/// Outcome of one audit suite. `violations` counts failures of proven
/// bounds; exploratory suites set `exploratory` and never count any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub suite: String,
    pub trials: usize,
    /// Smallest observed `LHS - RHS`, in bits.
    pub min_slack: f64,
    pub violations: usize,
    #[serde(default)]
    pub exploratory: bool,
    pub parameters: Map<String, Value>,
}

impl BoundReport {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.into(),
            trials: 0,
            min_slack: f64::INFINITY,
            violations: 0,
            exploratory: false,
            parameters: Map::new(),
        }
    }

    /// Records one check of `slack ≥ -tol`.
    pub fn record(&mut self, slack: f64, tol: f64) {
        self.trials += 1;
        self.min_slack = self.min_slack.min(slack);
        if slack < -tol || slack.is_nan() {
            self.violations += 1;
        }
    }

    pub fn merge(&mut self, other: &BoundReport) {
        self.trials += other.trials;
        self.min_slack = self.min_slack.min(other.min_slack);
        self.violations += other.violations;
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
