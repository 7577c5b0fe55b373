//! Runtime configuration: metric thresholds, Bayesian network parameters
//! and the scenario-level switches that control a run.

use serde::Serialize;

/// Thresholds that separate a degraded reading from a nominal one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricThresholds {
    /// One-way delay ceiling per link, in milliseconds.
    pub delay_ms: f64,
    /// Jitter ceiling per link, in milliseconds.
    pub jitter_ms: f64,
    /// Minimum acceptable throughput per link, in units/s.
    pub throughput_floor: f64,
    /// Minimum acceptable controller reply rate, a fraction in (0, 1].
    pub controller_reply_rate_floor: f64,
    /// Load factor above which an application or VNF counts as overloaded.
    pub load_factor_ceiling: f64,
}

impl Default for MetricThresholds {
    fn default() -> Self {
        Self {
            delay_ms: 200.0,
            jitter_ms: 50.0,
            throughput_floor: 1.0,
            controller_reply_rate_floor: 0.8,
            load_factor_ceiling: 1.0,
        }
    }
}

/// Noisy-OR parameter defaults used when building the diagnosis model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BnParams {
    /// Prior probability of each root cause being active.
    pub prior: f64,
    /// Link strength for a cause's direct manifestation.
    pub link_direct: f64,
    /// Link strength for a symptom reached through dependency closure.
    pub link_propagated: f64,
    /// Per-symptom leak probability covering unmodeled causes.
    pub leak: f64,
}

impl Default for BnParams {
    fn default() -> Self {
        Self {
            prior: 0.01,
            link_direct: 0.95,
            link_propagated: 0.80,
            leak: 0.001,
        }
    }
}

/// Full per-run configuration, assembled from scenario CONFIG lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub thresholds: MetricThresholds,
    pub bn: BnParams,
    /// Uplink power level above which an access point is considered to
    /// interfere with its neighbourhood.
    pub interference_ceiling: f64,
    /// Act on degraded-severity symptoms, not just broken ones.
    pub proactive: bool,
    pub seed: u64,
    pub max_ticks: u64,
    /// Recovery attempts per diagnosed cause before giving up.
    pub max_iters: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            thresholds: MetricThresholds::default(),
            bn: BnParams::default(),
            interference_ceiling: 10.0,
            proactive: false,
            seed: 0,
            max_ticks: 100,
            max_iters: 3,
        }
    }
}

/// Request rate a single controller can answer per tick, used by the
/// reply-rate model in the control-plane monitor.
pub const CONTROLLER_CAPACITY: f64 = 1000.0;

/// Power step used when dialing an access point's uplink power down.
pub const UPLINK_POWER_STEP: f64 = 1.0;
