//! End-to-end protocols with a full energy audit: the measurement-free
//! Szilard engine, single-bit erasure and the feedback staircase.
//!
//! Every protocol reports what the controller put in (mechanical work
//! measured by the ledger plus the analytic switch cost `Θ ln(1/ε)` per
//! toggle of a macroscopic control) against what came out. No information
//! term appears anywhere in the balance.

mod erasure;
mod staircase;
mod szilard;

pub use erasure::{
    erasure_setup, error_barrier_fit, run_erasure, storage_error, tilted_occupancy, ErasureParams, ErasureResult,
    StoragePoint,
};
pub use staircase::{run_staircase, BlockPolicy, StaircaseOutcome, StaircaseParams, StaircaseResult};
pub use szilard::{
    insertion_free_energy, run_szilard, side_partition_function, trace_szilard, ControlPoint, LoadSchedule, LoadStage,
    Phase, SzilardOutcome, SzilardParams, SzilardPlan, SzilardResult, SzilardTrace,
};

use crate::dynamics::DynamicsError;
use crate::landscape::LandscapeError;
use crate::stats::{Estimate, Proportion};
use crate::switchmodel::{self, SwitchError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
    #[error("audit refused: error rate {epsilon_hat} exceeds 1/2, the switch cost is undefined")]
    AuditRefused { epsilon_hat: f64 },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Landscape(#[from] LandscapeError),
    #[error(transparent)]
    Switch(#[from] SwitchError),
}

impl ExperimentError {
    pub fn is_numerical(&self) -> bool {
        match self {
            ExperimentError::Dynamics(e) => e.is_numerical(),
            ExperimentError::Switch(e) => e.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Ensemble settings shared by every protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub temperature: f64,
    pub n_traj: usize,
    pub master_seed: u64,
    /// 0 uses the ambient rayon pool.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { temperature: 1.0, n_traj: 1000, master_seed: 0, threads: 0 }
    }
}

impl RunConfig {
    pub fn new(n_traj: usize, master_seed: u64) -> Self {
        Self { n_traj, master_seed, ..Self::default() }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(ExperimentError::InvalidProtocol(format!("temperature must be > 0, got {}", self.temperature)));
        }
        if self.n_traj == 0 {
            return Err(ExperimentError::InvalidProtocol("n_traj must be >= 1".into()));
        }
        Ok(())
    }
}

/// Energy audit of one protocol over an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub protocol: String,
    pub params: serde_json::Value,
    /// Work delivered to the load.
    #[serde(rename = "W_out")]
    pub w_out: Estimate,
    /// Controller work measured by the ledger.
    #[serde(rename = "W_mech")]
    pub w_mech: Estimate,
    /// Total analytic switch cost per cycle.
    pub switch_cost: f64,
    /// `W_mech + switch_cost`.
    #[serde(rename = "W_ctrl")]
    pub w_ctrl: Estimate,
    /// `W_mech − W_out`: energy the bath absorbed over the cycle.
    pub dissipated: Estimate,
    pub epsilon_hat: f64,
    pub epsilon_ci: (f64, f64),
    pub failures: u64,
    /// `W_ctrl − W_out`.
    pub net_balance: Estimate,
    pub n_traj: usize,
    pub seed: u64,
    pub max_closure_residual: f64,
    pub flags: Vec<String>,
}

impl CycleResult {
    /// Reduces per-trajectory `(W_mech, W_out)` pairs; `switch_cost` is
    /// added to every trajectory's controller work.
    #[allow(clippy::too_many_arguments)]
    pub fn from_ledgers(
        protocol: &str,
        params: serde_json::Value,
        config: &RunConfig,
        w_mech: &[f64],
        w_out: &[f64],
        failures: Proportion,
        switch_cost: f64,
        max_closure_residual: f64,
    ) -> Self {
        let net: Vec<f64> = w_mech.iter().zip(w_out).map(|(a, b)| a + switch_cost - b).collect();
        let diss: Vec<f64> = w_mech.iter().zip(w_out).map(|(a, b)| a - b).collect();
        let mech = Estimate::from_samples(w_mech);
        let mut flags = Vec::new();
        if failures.p_hat > 0.5 {
            flags.push("protocol failed: error rate above 1/2".to_string());
        }
        Self {
            protocol: protocol.to_string(),
            params,
            w_out: Estimate::from_samples(w_out),
            w_mech: mech,
            switch_cost,
            w_ctrl: Estimate { mean: mech.mean + switch_cost, se: mech.se },
            dissipated: Estimate::from_samples(&diss),
            epsilon_hat: failures.p_hat,
            epsilon_ci: failures.ci,
            failures: failures.successes,
            net_balance: Estimate::from_samples(&net),
            n_traj: w_mech.len(),
            seed: config.master_seed,
            max_closure_residual,
            flags,
        }
    }

    /// A cycle in which nothing happened.
    pub fn idle(protocol: &str, config: &RunConfig) -> Self {
        let n = config.n_traj.max(1);
        let zeros = vec![0.0; n];
        Self::from_ledgers(
            protocol,
            serde_json::Value::Null,
            config,
            &zeros,
            &zeros,
            Proportion::new(0, n as u64),
            0.0,
            0.0,
        )
    }

    /// Same cycle with a different per-cycle switch cost.
    pub fn with_switch_cost(&self, switch_cost: f64) -> Self {
        let shift = switch_cost - self.switch_cost;
        let mut out = self.clone();
        out.switch_cost = switch_cost;
        out.w_ctrl.mean += shift;
        out.net_balance.mean += shift;
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cycle result serializes")
    }
}

/// `W_ctrl − W_out` with its standard error. Refused when the measured
/// error rate exceeds ½, where `Θ ln(1/ε)` no longer describes a bit.
pub fn audit_balance(result: &CycleResult) -> Result<Estimate> {
    if result.epsilon_hat > 0.5 {
        return Err(ExperimentError::AuditRefused { epsilon_hat: result.epsilon_hat });
    }
    Ok(result.net_balance)
}

/// `toggles · Θ ln(1/ε)`.
pub fn switch_cost(toggles: u32, epsilon: f64, theta: f64) -> Result<f64> {
    if toggles == 0 {
        return Ok(0.0);
    }
    Ok(toggles as f64 * switchmodel::reset_work(epsilon, theta)?)
}

/// Error rate to charge for a measured proportion: the point estimate, or
/// the upper confidence limit when no failure was seen (`ln(1/0)` is not a
/// cost).
pub fn chargeable_epsilon(p: &Proportion) -> f64 {
    if p.successes == 0 {
        p.ci.1.min(0.5)
    } else {
        p.p_hat.min(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idle_cycle_balances_to_zero() {
        let r = CycleResult::idle("idle", &RunConfig::new(10, 1));
        let b = audit_balance(&r).unwrap();
        assert_eq!(b.mean, 0.0);
        assert_eq!(b.se, 0.0);
    }

    #[test]
    fn audit_refuses_bad_bits() {
        let cfg = RunConfig::new(4, 0);
        let r = CycleResult::from_ledgers(
            "x",
            serde_json::Value::Null,
            &cfg,
            &[1.0; 4],
            &[0.0; 4],
            Proportion::new(3, 4),
            0.0,
            0.0,
        );
        assert!(matches!(audit_balance(&r), Err(ExperimentError::AuditRefused { .. })));
        assert_eq!(r.flags.len(), 1);
    }

    #[test]
    fn switch_cost_rebases_balance() {
        let cfg = RunConfig::new(3, 0);
        let r = CycleResult::from_ledgers(
            "x",
            serde_json::Value::Null,
            &cfg,
            &[1.0, 2.0, 3.0],
            &[0.5, 0.5, 0.5],
            Proportion::new(0, 3),
            1.0,
            0.0,
        );
        assert!((r.net_balance.mean - 2.5).abs() < 1e-15);
        let s = r.with_switch_cost(3.0);
        assert!((s.net_balance.mean - 4.5).abs() < 1e-15);
        assert!((s.w_ctrl.mean - 5.0).abs() < 1e-15);
        assert_eq!(s.net_balance.se, r.net_balance.se);
    }

    #[test]
    fn chargeable_epsilon_never_zero() {
        assert!(chargeable_epsilon(&Proportion::new(0, 100)) > 0.0);
        assert_eq!(chargeable_epsilon(&Proportion::new(5, 100)), 0.05);
        assert!((switch_cost(2, 0.5, 1.0).unwrap() - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(switch_cost(0, 0.9, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn json_uses_reported_names() {
        let r = CycleResult::idle("idle", &RunConfig::new(2, 9));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "protocol",
            "params",
            "W_out",
            "W_ctrl",
            "dissipated",
            "epsilon_hat",
            "epsilon_ci",
            "net_balance",
            "n_traj",
            "seed",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
