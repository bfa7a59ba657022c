//! Feedback staircase: a particle on a tilted periodic potential, pushed
//! downhill by `Δμ` per step, with a movable block behind it. Whenever the
//! particle has fluctuated up to a new step the block is jumped up behind
//! it. Each jump toggles a macroscopic switch and is charged `Θ ln(1/ε)`
//! with `ε = e^{−B_blk/Θ}`, the chance the block fails to hold.

use super::{CycleResult, ExperimentError, Result, RunConfig};
use crate::dynamics::{
    in_pool, max_curvature_at, step, DynamicsError, EnergyLedger, NoiseStream, MAX_STIFFNESS_PRODUCT,
};
use crate::landscape::{Controls, Domain, PotentialField};
use crate::stats::{Estimate, Proportion};
use crate::switchmodel;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const BLOCK: usize = 3;
const CHECK_EVERY: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockPolicy {
    /// The block stays behind step 0.
    Never,
    /// Jump the block behind the particle whenever it reaches a new step.
    Advance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaircaseParams {
    pub delta_mu: f64,
    pub period: f64,
    pub stiffness: f64,
    pub block_height: f64,
    pub block_width: f64,
    pub dt: f64,
    pub duration: f64,
    /// Steps between policy checks.
    pub stride: usize,
    /// Distance past a step's lower barrier before it counts as reached,
    /// in units of the block width.
    pub guard: f64,
    /// Steps of track above the start.
    pub span: usize,
    pub policy: BlockPolicy,
    pub theta: Option<f64>,
}

impl Default for StaircaseParams {
    fn default() -> Self {
        Self {
            delta_mu: 1.5,
            period: 1.0,
            stiffness: 40.0,
            block_height: 5.0,
            block_width: 0.2,
            dt: 5e-4,
            duration: 50.0,
            stride: 20,
            guard: 2.0,
            span: 120,
            policy: BlockPolicy::Advance,
            theta: None,
        }
    }
}

impl StaircaseParams {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("delta_mu", self.delta_mu),
            ("period", self.period),
            ("stiffness", self.stiffness),
            ("block_width", self.block_width),
            ("dt", self.dt),
            ("duration", self.duration),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ExperimentError::InvalidProtocol(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.block_height > 0.0) || self.stride == 0 || self.span == 0 || !(self.guard >= 0.0) {
            return Err(ExperimentError::InvalidProtocol(
                "block_height must be > 0, stride and span >= 1, guard >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn controls(&self, block: i64) -> Controls {
        Controls::staircase(
            self.delta_mu,
            self.period,
            self.stiffness,
            block as f64,
            self.block_height,
            self.block_width,
        )
    }

    pub fn domain(&self) -> Domain {
        Domain { lo: -3.0 * self.period, hi: (self.span as f64 + 0.5) * self.period }
    }

    /// Step whose lower barrier the particle is safely past.
    fn reached(&self, x: f64) -> i64 {
        ((x - self.guard * self.block_width) / self.period + 0.5).floor() as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaircaseOutcome {
    pub w_mech: f64,
    pub switch_cost: f64,
    pub advances: u64,
    pub final_step: i64,
    pub x_final: f64,
    pub heat: f64,
    pub delta_e: f64,
    /// Ended below the block.
    pub slipped: bool,
    pub max_closure_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseResult {
    pub cycle: CycleResult,
    /// Block advances per trajectory.
    pub climb: Estimate,
    /// `Δμ · climb`: free energy stored in the particle's height.
    pub gain: Estimate,
    /// Mechanical work plus switch costs.
    pub injected: Estimate,
    pub final_step: Estimate,
    /// Steps per unit time.
    pub climb_rate: Estimate,
    /// Energy the controller spends reading the particle. The policy only
    /// compares a coordinate with a threshold, so this is zero.
    pub feedback_energy: f64,
    /// Switch cost per block jump.
    pub cost_per_toggle: f64,
    #[serde(skip)]
    pub outcomes: Vec<StaircaseOutcome>,
}

/// Bottom of step 0 with the block at its start position.
fn start_position(p: &StaircaseParams, field: &PotentialField) -> f64 {
    let c = p.controls(0);
    let (mut lo, mut hi) = (-0.25 * p.period, 0.25 * p.period);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if field.slope(mid, &c) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn simulate(
    p: &StaircaseParams,
    field: &PotentialField,
    x0: f64,
    temperature: f64,
    cost_per_toggle: f64,
    seed: u64,
    traj: u64,
) -> Result<StaircaseOutcome> {
    let n_steps = (p.duration / p.dt).round() as usize;
    let mut noise = NoiseStream::new(seed, traj);
    let mut x = x0;
    let mut block = 0i64;
    let mut controls = p.controls(block);
    let mut ledger = EnergyLedger::new(field.energy(x, &controls));
    let mut advances = 0u64;
    for n in 0..n_steps {
        if p.policy == BlockPolicy::Advance && n % p.stride == 0 {
            let k = p.reached(x);
            if k > block {
                let mut next = controls;
                next.set(BLOCK, k as f64);
                let before = ledger.energy();
                ledger.control(before, field.energy(x, &next));
                controls = next;
                advances += (k - block) as u64;
                block = k;
            }
        }
        let t = n as f64 * p.dt;
        let before = ledger.energy();
        x = step(x, field, &controls, t, p.dt, temperature, &mut noise)
            .map_err(|e| DynamicsError::InTrajectory { traj, source: Box::new(e) })?;
        ledger.relax(before, field.energy(x, &controls), 0.0);
        if ((n + 1) % CHECK_EVERY == 0 || n + 1 == n_steps) && !ledger.check() {
            return Err(
                DynamicsError::LedgerViolation { traj, t: t + p.dt, residual: ledger.relative_residual() }.into()
            );
        }
    }
    let final_step = (x / p.period + 0.5).floor() as i64;
    Ok(StaircaseOutcome {
        w_mech: ledger.w_in(),
        switch_cost: advances as f64 * cost_per_toggle,
        advances,
        final_step,
        x_final: x,
        heat: ledger.heat(),
        delta_e: ledger.delta_energy(),
        slipped: final_step < block,
        max_closure_residual: ledger.max_relative_residual(),
    })
}

pub fn run_staircase(params: &StaircaseParams, run: &RunConfig) -> Result<StaircaseResult> {
    params.validate()?;
    run.validate()?;
    let p = params;
    let field = PotentialField::new(p.controls(0), p.domain())?;
    let d = field.domain();
    let curvature = max_curvature_at(&field, &p.controls(0), d.lo, d.lo + 4.0 * p.period, 4096);
    if !(curvature * p.dt < MAX_STIFFNESS_PRODUCT) {
        return Err(DynamicsError::StepTooCoarse { product: curvature * p.dt, curvature }.into());
    }
    let theta = p.theta.unwrap_or(run.temperature);
    let epsilon = (-p.block_height / theta).exp();
    let cost_per_toggle = switchmodel::reset_work(epsilon, theta).unwrap_or(p.block_height);
    let x0 = start_position(p, &field);

    let results: Vec<Result<StaircaseOutcome>> = in_pool(run.threads, || {
        (0..run.n_traj as u64)
            .into_par_iter()
            .map(|i| simulate(p, &field, x0, run.temperature, cost_per_toggle, run.master_seed, i))
            .collect()
    });
    let outcomes = results.into_iter().collect::<Result<Vec<_>>>()?;
    if let Some(o) = outcomes.iter().find(|o| o.final_step + 2 >= p.span as i64) {
        return Err(ExperimentError::InvalidProtocol(format!(
            "particle reached step {} near the end of the track; increase span",
            o.final_step
        )));
    }

    let climbs: Vec<f64> = outcomes.iter().map(|o| o.advances as f64).collect();
    let gains: Vec<f64> = climbs.iter().map(|c| c * p.delta_mu).collect();
    let mech: Vec<f64> = outcomes.iter().map(|o| o.w_mech).collect();
    let injected: Vec<f64> = outcomes.iter().map(|o| o.w_mech + o.switch_cost).collect();
    let net: Vec<f64> = injected.iter().zip(&gains).map(|(a, b)| a - b).collect();
    let slipped = outcomes.iter().filter(|o| o.slipped).count() as u64;
    let max_res = outcomes.iter().map(|o| o.max_closure_residual).fold(0.0, f64::max);
    let echo = serde_json::to_value(p).expect("params serialize");
    let injected_est = Estimate::from_samples(&injected);
    let mean_switch = injected_est.mean - Estimate::from_samples(&mech).mean;
    let mut cycle = CycleResult::from_ledgers(
        "staircase",
        echo,
        run,
        &mech,
        &gains,
        Proportion::new(slipped, outcomes.len() as u64),
        0.0,
        max_res,
    );
    // switch costs vary per trajectory
    cycle.switch_cost = mean_switch;
    cycle.w_ctrl = injected_est;
    cycle.net_balance = Estimate::from_samples(&net);
    let finals: Vec<f64> = outcomes.iter().map(|o| o.final_step as f64).collect();
    let climb = Estimate::from_samples(&climbs);
    Ok(StaircaseResult {
        cycle,
        climb,
        gain: Estimate::from_samples(&gains),
        injected: injected_est,
        final_step: Estimate::from_samples(&finals),
        climb_rate: climb.scale(1.0 / p.duration),
        feedback_energy: 0.0,
        cost_per_toggle,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> StaircaseParams {
        StaircaseParams { duration: 10.0, ..StaircaseParams::default() }
    }

    #[test]
    fn never_moving_the_block_never_climbs() {
        let p = StaircaseParams { policy: BlockPolicy::Never, ..quick() };
        let r = run_staircase(&p, &RunConfig::new(8, 2)).unwrap();
        assert_eq!(r.climb.mean, 0.0);
        assert_eq!(r.gain.mean, 0.0);
        assert_eq!(r.injected.mean, 0.0);
        assert!(r.outcomes.iter().all(|o| o.w_mech == 0.0));
    }

    #[test]
    fn advancing_block_climbs_and_costs_more_than_it_gains() {
        let r = run_staircase(&quick(), &RunConfig::new(16, 3)).unwrap();
        assert!(r.climb.mean > 0.5, "{}", r.climb.mean);
        assert!(r.injected.mean >= r.gain.mean);
        assert!((r.cost_per_toggle - 5.0).abs() < 1e-12);
        assert!(r.cycle.max_closure_residual < 1e-8);
        assert_eq!(r.feedback_energy, 0.0);
    }

    #[test]
    fn start_is_a_minimum() {
        let p = StaircaseParams::default();
        let field = PotentialField::new(p.controls(0), p.domain()).unwrap();
        let x0 = start_position(&p, &field);
        assert!(field.slope(x0, &p.controls(0)).abs() < 1e-9);
        assert!(field.curvature(x0, &p.controls(0)) > 0.0);
    }
}
