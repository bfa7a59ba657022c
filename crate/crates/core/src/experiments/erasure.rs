//! Single-bit erasure in a double well, and storage error against barrier
//! height.
//!
//! Erasure: lower the barrier, tilt towards the right well, raise the
//! barrier under the tilt, remove the tilt. The bit ends up stored as
//! "right". A failure is a trajectory that ends left of the origin.

use super::{chargeable_epsilon, switch_cost, CycleResult, ExperimentError, Result, RunConfig};
use crate::dynamics::{run_ensemble, InitialState, Side, SimConfig, TrajectoryOutcome};
use crate::landscape::{Controls, Domain, PotentialField, ProtocolSchedule, Ramp, Segment};
use crate::stats::{simpson, weighted_line_fit, Estimate, LineFit, Proportion};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ErasureParams {
    pub a: f64,
    /// Resting value of the quadratic coefficient; barrier `b²/4a`.
    pub b: f64,
    /// Magnitude of the tilt applied towards the right well.
    pub tilt: f64,
    pub half_width: f64,
    pub dt: f64,
    pub lower_time: f64,
    pub tilt_time: f64,
    pub raise_time: f64,
    pub untilt_time: f64,
    pub hold_time: f64,
    /// Barrier toggles charged at `Θ ln(1/ε)` each.
    pub toggles: u32,
    pub theta: Option<f64>,
}

impl Default for ErasureParams {
    fn default() -> Self {
        Self {
            a: 5.0,
            b: 14.0,
            tilt: 4.0,
            half_width: 1.5,
            dt: 5e-4,
            lower_time: 35.0,
            tilt_time: 15.0,
            raise_time: 10.0,
            untilt_time: 2.0,
            hold_time: 1.0,
            toggles: 1,
            theta: None,
        }
    }
}

impl ErasureParams {
    pub fn barrier(&self) -> f64 {
        self.b * self.b / (4.0 * self.a)
    }

    /// Every stage duration multiplied by `factor`.
    pub fn slowed(&self, factor: f64) -> Self {
        Self {
            lower_time: self.lower_time * factor,
            tilt_time: self.tilt_time * factor,
            raise_time: self.raise_time * factor,
            untilt_time: self.untilt_time * factor,
            hold_time: self.hold_time * factor,
            ..*self
        }
    }

    pub fn schedule(&self) -> Result<ProtocolSchedule> {
        let rc = Ramp::RaisedCosine;
        Ok(ProtocolSchedule::new(
            Controls::double_well(self.a, self.b, 0.0),
            vec![
                Segment::ramp(self.lower_time, rc, &[("b", 0.0)]),
                Segment::ramp(self.tilt_time, rc, &[("f", -self.tilt)]),
                Segment::ramp(self.raise_time, rc, &[("b", self.b)]),
                Segment::ramp(self.untilt_time, rc, &[("f", 0.0)]),
                Segment::hold(self.hold_time),
            ],
        )?)
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.b > 0.0 && self.tilt >= 0.0 && self.half_width > 0.0 && self.dt > 0.0) {
            return Err(ExperimentError::InvalidProtocol("a, b, half_width and dt must be > 0 and tilt >= 0".into()));
        }
        if let Some(th) = self.theta {
            if !(th > 0.0) {
                return Err(ExperimentError::InvalidProtocol(format!("theta must be > 0, got {th}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErasureResult {
    pub cycle: CycleResult,
    /// Error rate the switch cost was charged at.
    pub charged_epsilon: f64,
    /// `T ln 2`, the bound on mean work for a perfect erasure.
    pub landauer_bound: f64,
    pub heat: Estimate,
    #[serde(skip)]
    pub outcomes: Vec<TrajectoryOutcome>,
}

/// Field, schedule and simulation config of the erasure protocol.
pub fn erasure_setup(params: &ErasureParams, run: &RunConfig) -> Result<(PotentialField, ProtocolSchedule, SimConfig)> {
    params.validate()?;
    run.validate()?;
    let schedule = params.schedule()?;
    let field = PotentialField::new(*schedule.start(), Domain::new(-params.half_width, params.half_width)?)?;
    let config = SimConfig::for_schedule(&schedule, params.dt, run.temperature, run.n_traj, run.master_seed)
        .with_initial(InitialState::EquilibriumSplit)
        .with_threads(run.threads);
    Ok((field, schedule, config))
}

pub fn run_erasure(params: &ErasureParams, run: &RunConfig) -> Result<ErasureResult> {
    let (field, schedule, config) = erasure_setup(params, run)?;
    let stats = run_ensemble(&config, &field, &schedule)?;

    let failures = stats.terminal.left + stats.terminal.zero;
    let proportion = Proportion::new(failures, run.n_traj as u64);
    let charged = chargeable_epsilon(&proportion);
    let theta = params.theta.unwrap_or(run.temperature);
    let cost = switch_cost(params.toggles, charged, theta)?;
    let w_mech: Vec<f64> = stats.outcomes.iter().map(|o| o.w_in).collect();
    let w_out: Vec<f64> = stats.outcomes.iter().map(|o| o.w_out).collect();
    let echo = serde_json::to_value(params).expect("params serialize");
    let cycle =
        CycleResult::from_ledgers("erasure", echo, run, &w_mech, &w_out, proportion, cost, stats.max_closure_residual);
    Ok(ErasureResult {
        cycle,
        charged_epsilon: charged,
        landauer_bound: run.temperature * std::f64::consts::LN_2,
        heat: stats.heat,
        outcomes: stats.outcomes,
    })
}

/// Equilibrium probability of `x < 0` for `V = a x⁴ − b x² + f x`.
pub fn tilted_occupancy(a: f64, b: f64, f: f64, temperature: f64) -> f64 {
    let c = Controls::double_well(a, b, f);
    let field = PotentialField::new(c, crate::landscape::default_domain(&c)).expect("valid double well");
    let d = field.domain();
    // shift by the minimum to keep the exponentials in range
    let vmin = (0..=4096).map(|i| field.energy(d.lo + d.width() * i as f64 / 4096.0, &c)).fold(f64::INFINITY, f64::min);
    let w = |x: f64| (-(field.energy(x, &c) - vmin) / temperature).exp();
    let left = simpson(w, d.lo, 0.0, 40_000);
    let right = simpson(w, 0.0, d.hi, 40_000);
    left / (left + right)
}

/// Storage error at one barrier height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoragePoint {
    pub barrier: f64,
    pub hold: f64,
    pub error: Proportion,
}

/// Fraction of trajectories started in the right well (restricted
/// equilibrium) found left of the origin after holding for `hold`. The well
/// is `V = a x⁴ − 2x²` with `a` set by the barrier height.
pub fn storage_error(run: &RunConfig, barrier: f64, hold: f64, dt: f64) -> Result<StoragePoint> {
    run.validate()?;
    if !(barrier > 0.0 && hold > 0.0 && dt > 0.0) {
        return Err(ExperimentError::InvalidProtocol("barrier, hold and dt must be > 0".into()));
    }
    let b = 2.0;
    let a = b * b / (4.0 * barrier);
    let c = Controls::double_well(a, b, 0.0);
    let field = PotentialField::new(c, crate::landscape::default_domain(&c))?;
    let schedule = ProtocolSchedule::hold(c, hold)?;
    let config = SimConfig::for_schedule(&schedule, dt, run.temperature, run.n_traj, run.master_seed)
        .with_initial(InitialState::EquilibriumSide { side: Side::Right })
        .with_threads(run.threads);
    let stats = run_ensemble(&config, &field, &schedule)?;
    let failures = stats.terminal.left + stats.terminal.zero;
    Ok(StoragePoint { barrier, hold, error: Proportion::new(failures, run.n_traj as u64) })
}

/// Weighted fit of `ln ε̂` against barrier height, with the binomial
/// `σ² = (1 − ε)/(n ε)` on each log point.
pub fn error_barrier_fit(points: &[StoragePoint]) -> Result<LineFit> {
    if points.len() < 2 {
        return Err(ExperimentError::InvalidProtocol("need at least two barrier heights".into()));
    }
    if let Some(p) = points.iter().find(|p| p.error.successes == 0) {
        return Err(ExperimentError::InvalidProtocol(format!(
            "no failures observed at barrier {}; increase n_traj",
            p.barrier
        )));
    }
    let x: Vec<f64> = points.iter().map(|p| p.barrier).collect();
    let y: Vec<f64> = points.iter().map(|p| p.error.p_hat.ln()).collect();
    let s: Vec<f64> =
        points.iter().map(|p| ((1.0 - p.error.p_hat) / (p.error.trials as f64 * p.error.p_hat)).sqrt()).collect();
    Ok(weighted_line_fit(&x, &y, &s))
}
