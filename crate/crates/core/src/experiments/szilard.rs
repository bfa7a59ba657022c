//! Szilard engine without measurement.
//!
//! One particle in a soft-walled box. A partition (Gaussian barrier) is
//! lowered in at the centre, then released: it becomes a second, noiseless
//! overdamped coordinate `x_p` dragging a load `g·|x_p − c|`. Whichever side
//! the particle is on, its pressure pushes the partition towards the empty
//! side and lifts the load. The load is lowered in stages so the partition
//! follows the mean force quasi-statically. Finally the partition is
//! clamped, pulled out and returned to the centre.
//!
//! The controller never looks at the particle. Everything it does is a
//! function of time, plus the clamp, which acts on the partition
//! coordinate only.

use super::{switch_cost, CycleResult, ExperimentError, Result, RunConfig};
use crate::dynamics::{
    in_pool, max_curvature_at, step, EnergyLedger, InitialSampler, InitialState, NoiseStream, SimConfig,
    MAX_STIFFNESS_PRODUCT,
};
use crate::landscape::{Controls, Domain, PotentialField};
use crate::stats::{simpson, Estimate, Proportion};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const XP: usize = 2;
const QUAD_POINTS: usize = 20_000;
const CHECK_EVERY: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoadSchedule {
    /// Geometric stages from the mean force at the centre down to the mean
    /// force at which the particle's free volume has doubled.
    Staged { stages: usize },
    /// One constant load for the whole release.
    Constant { load: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SzilardParams {
    pub length: f64,
    pub kappa_wall: f64,
    /// Full partition height.
    pub barrier: f64,
    pub width: f64,
    /// Friction coefficient of the partition coordinate.
    pub partition_friction: f64,
    pub dt: f64,
    pub insertion_time: f64,
    /// Total release time, shared between stages in proportion to the
    /// square of the expected free length (the partition's relaxation time).
    pub release_time: f64,
    pub removal_time: f64,
    pub reset_time: f64,
    pub load: LoadSchedule,
    /// Error rate of the partition switch used for the toggle cost.
    pub switch_epsilon: f64,
    /// Effective noise energy for the switch cost; defaults to `T`.
    pub theta: Option<f64>,
    pub initial: InitialState,
}

impl Default for SzilardParams {
    fn default() -> Self {
        Self {
            length: 4.0,
            kappa_wall: 1.0,
            barrier: 14.0,
            width: 0.5,
            partition_friction: 100.0,
            dt: 1e-3,
            insertion_time: 4.0,
            release_time: 2000.0,
            removal_time: 4.0,
            reset_time: 1.0,
            load: LoadSchedule::Staged { stages: 16 },
            switch_epsilon: 0.5,
            theta: None,
            initial: InitialState::Equilibrium,
        }
    }
}

impl SzilardParams {
    pub fn validate(&self, temperature: f64) -> Result<()> {
        let bad = |m: String| Err(ExperimentError::InvalidProtocol(m));
        for (name, v) in [
            ("length", self.length),
            ("kappa_wall", self.kappa_wall),
            ("width", self.width),
            ("partition_friction", self.partition_friction),
            ("dt", self.dt),
            ("insertion_time", self.insertion_time),
            ("release_time", self.release_time),
            ("removal_time", self.removal_time),
            ("reset_time", self.reset_time),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be > 0, got {v}"));
            }
        }
        if !(self.barrier >= 2.0 * temperature) {
            return bad(format!("partition height {} must be at least 2T", self.barrier));
        }
        match self.load {
            LoadSchedule::Staged { stages: 0 } => return bad("at least one load stage".into()),
            LoadSchedule::Constant { load } if !(load.is_finite() && load >= 0.0) => {
                return bad(format!("load must be >= 0, got {load}"))
            }
            _ => {}
        }
        if let Some(th) = self.theta {
            if !(th > 0.0) {
                return bad(format!("theta must be > 0, got {th}"));
            }
        }
        Ok(())
    }

    pub fn center(&self) -> f64 {
        0.5 * self.length
    }

    pub fn domain(&self) -> Domain {
        Domain { lo: -0.05 * self.length, hi: 1.05 * self.length }
    }

    pub fn controls(&self, xp: f64, barrier: f64, load: f64) -> Controls {
        Controls::partitioned_box(self.length, self.kappa_wall, xp, barrier, self.width, load)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Partition clamped at the centre while it is lowered in.
    Insert,
    /// Partition free against the load.
    Release,
    /// Partition clamped where it stands while it is pulled out.
    Remove,
    /// Barrier gone; partition carried back to the centre.
    Reset,
}

/// What the controller applies at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPoint {
    pub barrier: f64,
    pub load: f64,
    pub phase: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadStage {
    pub load: f64,
    pub start: f64,
    pub duration: f64,
    /// Where the partition should settle for this load.
    pub expected_position: f64,
}

/// The time-only part of the protocol, worked out before any trajectory
/// runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzilardPlan {
    pub params: SzilardParams,
    pub temperature: f64,
    pub stages: Vec<LoadStage>,
    /// Partition position at which the free volume has doubled.
    pub end_position: f64,
    /// `T ln(Z_side(end)/Z_side(c))`, the reversible extraction.
    pub ideal_extraction: f64,
    pub insertion_free_energy: f64,
    pub total_time: f64,
    pub n_steps: usize,
}

/// `Z` of a particle confined to the right of a partition at `xp`,
/// `∫_{xp}^{hi} e^{−V/T} dx`, together with `⟨∂V/∂x_p⟩` there.
pub fn side_partition_function(params: &SzilardParams, xp: f64, temperature: f64) -> (f64, f64) {
    let field = PotentialField::new(params.controls(xp, params.barrier, 0.0), params.domain())
        .expect("validated box parameters");
    let c = *field.controls();
    let hi = params.domain().hi;
    let z = simpson(|x| (-field.energy(x, &c) / temperature).exp(), xp, hi, QUAD_POINTS);
    let dv = simpson(
        |x| field.param_derivative(x, &c, XP) * (-field.energy(x, &c) / temperature).exp(),
        xp,
        hi,
        QUAD_POINTS,
    );
    (z, dv / z)
}

/// Free-energy rise on inserting the partition at the centre and keeping
/// the particle on one side: `T ln(Z_box/Z_side)`, `T ln 2` by symmetry.
pub fn insertion_free_energy(params: &SzilardParams, temperature: f64) -> f64 {
    let c = params.center();
    let field = PotentialField::new(params.controls(c, params.barrier, 0.0), params.domain())
        .expect("validated box parameters");
    let ctl = *field.controls();
    let d = params.domain();
    let z_box = simpson(|x| (-field.energy(x, &ctl) / temperature).exp(), d.lo, d.hi, 2 * QUAD_POINTS);
    let (z_side, _) = side_partition_function(params, c, temperature);
    temperature * (z_box / z_side).ln()
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo).signum();
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl SzilardPlan {
    pub fn new(params: &SzilardParams, temperature: f64) -> Result<Self> {
        params.validate(temperature)?;
        let t = temperature;
        let c = params.center();
        let lo = params.domain().lo;
        let (z_c, dv_c) = side_partition_function(params, c, t);
        let ln_z = |xp: f64| side_partition_function(params, xp, t).0.ln();
        if ln_z(lo) - z_c.ln() < std::f64::consts::LN_2 {
            return Err(ExperimentError::InvalidProtocol("the box is too small for the free volume to double".into()));
        }
        let end = bisect(|xp| ln_z(xp) - z_c.ln() - std::f64::consts::LN_2, lo, c);
        let (z_end, dv_end) = side_partition_function(params, end, t);
        let ideal = t * (z_end / z_c).ln();
        // for a particle on the right ⟨∂V/∂x_p⟩ > 0: the push is towards −x
        let (g0, g_end) = (dv_c, dv_end);

        let pre = params.insertion_time;
        let mut stages = Vec::new();
        match params.load {
            LoadSchedule::Constant { load } => {
                stages.push(LoadStage { load, start: pre, duration: params.release_time, expected_position: c })
            }
            LoadSchedule::Staged { stages: k } => {
                let ratio = g_end / g0;
                let mut targets = Vec::with_capacity(k);
                for i in 0..k {
                    let g = g0 * ratio.powf((i + 1) as f64 / k as f64);
                    let g = if i + 1 == k { g_end } else { g };
                    let xp = if i + 1 == k {
                        end
                    } else {
                        bisect(|xp| side_partition_function(params, xp, t).1 - g, end, c)
                    };
                    targets.push((g, xp));
                }
                let weights: Vec<f64> =
                    targets.iter().map(|&(_, xp)| side_partition_function(params, xp, t).0.powi(2)).collect();
                let total: f64 = weights.iter().sum();
                let mut start = pre;
                for (&(g, xp), w) in targets.iter().zip(&weights) {
                    let duration = params.release_time * w / total;
                    stages.push(LoadStage { load: g, start, duration, expected_position: xp });
                    start += duration;
                }
            }
        }
        let total_time = params.insertion_time + params.release_time + params.removal_time + params.reset_time;
        Ok(Self {
            params: *params,
            temperature,
            stages,
            end_position: end,
            ideal_extraction: ideal,
            insertion_free_energy: insertion_free_energy(params, t),
            total_time,
            n_steps: (total_time / params.dt).round() as usize,
        })
    }

    fn release_end(&self) -> f64 {
        self.params.insertion_time + self.params.release_time
    }

    /// The control applied at time `t`.
    pub fn control_at(&self, t: f64) -> ControlPoint {
        let p = &self.params;
        let first_load = self.stages[0].load;
        if t < p.insertion_time {
            let u = (t / p.insertion_time).clamp(0.0, 1.0);
            let s = 0.5 * (1.0 - (std::f64::consts::PI * u).cos());
            return ControlPoint { barrier: p.barrier * s, load: first_load, phase: Phase::Insert };
        }
        let rel_end = self.release_end();
        if t < rel_end {
            let k = self.stages.partition_point(|s| s.start <= t).saturating_sub(1);
            return ControlPoint { barrier: p.barrier, load: self.stages[k].load, phase: Phase::Release };
        }
        let last_load = self.stages[self.stages.len() - 1].load;
        let rem_end = rel_end + p.removal_time;
        if t < rem_end {
            let u = ((t - rel_end) / p.removal_time).clamp(0.0, 1.0);
            let s = 0.5 * (1.0 - (std::f64::consts::PI * u).cos());
            return ControlPoint { barrier: p.barrier * (1.0 - s), load: last_load, phase: Phase::Remove };
        }
        ControlPoint { barrier: 0.0, load: last_load, phase: Phase::Reset }
    }
}

/// Control and coordinate record of one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzilardTrace {
    pub t: Vec<f64>,
    pub controls: Vec<ControlPoint>,
    pub x: Vec<f64>,
    pub xp: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SzilardOutcome {
    pub w_in: f64,
    pub w_insert: f64,
    pub w_out: f64,
    pub heat: f64,
    pub leaked: bool,
    pub escaped: bool,
    pub max_closure_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzilardResult {
    pub cycle: CycleResult,
    pub plan: SzilardPlan,
    /// Ledger work during insertion alone.
    pub insertion_work: Estimate,
    pub leaks: u64,
    pub escapes: u64,
    #[serde(skip)]
    pub outcomes: Vec<SzilardOutcome>,
}

pub(crate) fn simulate_cycle(
    plan: &SzilardPlan,
    field: &PotentialField,
    init: &InitialSampler,
    seed: u64,
    traj: u64,
    record_stride: usize,
) -> Result<(SzilardOutcome, Option<SzilardTrace>)> {
    let p = &plan.params;
    let temp = plan.temperature;
    let dt = p.dt;
    let center = p.center();
    let track = p.domain();
    let gamma = p.partition_friction;
    let mut noise = NoiseStream::new(seed, traj);
    let mut x = init.draw(field, seed, traj);
    // partition offset from the centre is the state variable
    let mut u = 0.0f64;
    let mut cp = plan.control_at(0.0);
    let mut controls = p.controls(center, cp.barrier, cp.load);
    let mut ledger = EnergyLedger::new(field.energy(x, &controls));
    let mut w_insert = 0.0;
    let mut release_side: Option<bool> = None;
    let mut leaked = false;
    let mut escaped = false;
    let mut trace =
        (record_stride > 0).then(|| SzilardTrace { t: vec![0.0], controls: vec![cp], x: vec![x], xp: vec![center] });

    for n in 0..plan.n_steps {
        let t = n as f64 * dt;
        let t_next = (n + 1) as f64 * dt;
        let next = plan.control_at(t_next);
        if next.phase == Phase::Remove && cp.phase == Phase::Release {
            if let Some(right) = release_side {
                leaked = (x > center + u) != right;
            }
        }
        if next.phase != Phase::Insert && cp.phase == Phase::Insert {
            w_insert = ledger.w_in();
        }
        if next.phase == Phase::Reset {
            u = 0.0;
        }
        cp = next;
        let new_controls = p.controls(center + u, cp.barrier, cp.load);
        if new_controls != controls {
            let before = ledger.energy();
            ledger.control(before, field.energy(x, &new_controls));
            controls = new_controls;
        }

        let before = ledger.energy();
        x = step(x, field, &controls, t, dt, temp, &mut noise).map_err(|e| in_traj(e, traj))?;
        ledger.relax(before, field.energy(x, &controls), 0.0);

        if cp.phase == Phase::Release && !escaped {
            let xp = center + u;
            if release_side.is_none() {
                release_side = Some(x > xp);
            }
            let g = cp.load;
            let push = -field.param_derivative(x, &controls, XP);
            let v = if u == 0.0 {
                if push.abs() <= g {
                    0.0
                } else {
                    (push - g * push.signum()) / gamma
                }
            } else {
                (push - g * u.signum()) / gamma
            };
            if v != 0.0 {
                let mut u_new = u + v * dt;
                if u != 0.0 && u_new.signum() != u.signum() {
                    u_new = 0.0;
                }
                let w_out = g * (u_new.abs() - u.abs());
                u = u_new;
                if !track.contains(center + u) {
                    escaped = true;
                    u = u.clamp(track.lo - center, track.hi - center);
                }
                let moved = p.controls(center + u, cp.barrier, cp.load);
                let before = ledger.energy();
                ledger.relax(before, field.energy(x, &moved), w_out);
                controls = moved;
            }
        }

        let last = n + 1 == plan.n_steps;
        if ((n + 1) % CHECK_EVERY == 0 || last) && !ledger.check() {
            return Err(ExperimentError::Dynamics(crate::dynamics::DynamicsError::LedgerViolation {
                traj,
                t: t_next,
                residual: ledger.relative_residual(),
            }));
        }
        if let Some(tr) = trace.as_mut() {
            if (n + 1) % record_stride == 0 || last {
                tr.t.push(t_next);
                tr.controls.push(cp);
                tr.x.push(x);
                tr.xp.push(center + u);
            }
        }
    }
    let outcome = SzilardOutcome {
        w_in: ledger.w_in(),
        w_insert,
        w_out: ledger.w_out(),
        heat: ledger.heat(),
        leaked,
        escaped,
        max_closure_residual: ledger.max_relative_residual(),
    };
    Ok((outcome, trace))
}

fn in_traj(e: crate::dynamics::DynamicsError, traj: u64) -> ExperimentError {
    use crate::dynamics::DynamicsError;
    match e {
        e @ DynamicsError::InTrajectory { .. } => e.into(),
        e => DynamicsError::InTrajectory { traj, source: Box::new(e) }.into(),
    }
}

fn prepare(plan: &SzilardPlan, run: &RunConfig) -> Result<(PotentialField, InitialSampler)> {
    let p = &plan.params;
    let start = p.controls(p.center(), 0.0, plan.stages[0].load);
    let field = PotentialField::new(start, p.domain())?;
    let full = p.controls(p.center(), p.barrier, 0.0);
    let curvature = max_curvature_at(&field, &full, field.domain().lo, field.domain().hi, 4096)
        .max(p.barrier / (p.width * p.width));
    if !(curvature * p.dt < MAX_STIFFNESS_PRODUCT) {
        return Err(crate::dynamics::DynamicsError::StepTooCoarse { product: curvature * p.dt, curvature }.into());
    }
    let sim = SimConfig {
        dt: p.dt,
        n_steps: plan.n_steps,
        temperature: run.temperature,
        n_traj: run.n_traj,
        master_seed: run.master_seed,
        record_stride: 0,
        initial: p.initial,
        threads: run.threads,
    };
    sim.validate_basic()?;
    if let InitialState::Fixed { x } = p.initial {
        if !field.domain().contains(x) {
            return Err(ExperimentError::InvalidProtocol(format!("start {x} lies outside the box")));
        }
    }
    let init = InitialSampler::prepare(&sim, &field, &start);
    Ok((field, init))
}

/// One recorded trajectory, for inspecting the control path.
pub fn trace_szilard(params: &SzilardParams, run: &RunConfig, traj: u64, stride: usize) -> Result<SzilardTrace> {
    let plan = SzilardPlan::new(params, run.temperature)?;
    let (field, init) = prepare(&plan, run)?;
    let (_, trace) = simulate_cycle(&plan, &field, &init, run.master_seed, traj, stride.max(1))?;
    Ok(trace.expect("recording requested"))
}

pub fn run_szilard(params: &SzilardParams, run: &RunConfig) -> Result<SzilardResult> {
    run.validate()?;
    let plan = SzilardPlan::new(params, run.temperature)?;
    let (field, init) = prepare(&plan, run)?;
    let results: Vec<Result<SzilardOutcome>> = in_pool(run.threads, || {
        (0..run.n_traj as u64)
            .into_par_iter()
            .map(|i| simulate_cycle(&plan, &field, &init, run.master_seed, i, 0).map(|(o, _)| o))
            .collect()
    });
    let outcomes = results.into_iter().collect::<Result<Vec<_>>>()?;

    let leaks = outcomes.iter().filter(|o| o.leaked).count() as u64;
    let escapes = outcomes.iter().filter(|o| o.escaped).count() as u64;
    let failures = outcomes.iter().filter(|o| o.leaked || o.escaped).count() as u64;
    let theta = params.theta.unwrap_or(run.temperature);
    let cost = switch_cost(2, params.switch_epsilon, theta)?;
    let w_mech: Vec<f64> = outcomes.iter().map(|o| o.w_in).collect();
    let w_out: Vec<f64> = outcomes.iter().map(|o| o.w_out).collect();
    let proportion = Proportion::new(failures, outcomes.len() as u64);
    let max_res = outcomes.iter().map(|o| o.max_closure_residual).fold(0.0, f64::max);
    let echo = serde_json::to_value(params).expect("params serialize");
    let cycle = CycleResult::from_ledgers("szilard", echo, run, &w_mech, &w_out, proportion, cost, max_res);
    Ok(SzilardResult {
        insertion_work: Estimate::from_samples(&outcomes.iter().map(|o| o.w_insert).collect::<Vec<_>>()),
        cycle,
        plan,
        leaks,
        escapes,
        outcomes,
    })
}

impl SzilardResult {
    /// Cycle re-audited with a different switch error rate.
    pub fn with_switch_epsilon(&self, epsilon: f64, theta: f64) -> Result<CycleResult> {
        Ok(self.cycle.with_switch_cost(switch_cost(2, epsilon, theta)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn quick() -> SzilardParams {
        SzilardParams {
            release_time: 60.0,
            partition_friction: 5.0,
            load: LoadSchedule::Staged { stages: 4 },
            ..SzilardParams::default()
        }
    }

    #[test]
    fn plan_doubles_free_volume() {
        let plan = SzilardPlan::new(&SzilardParams::default(), 1.0).unwrap();
        assert!((plan.ideal_extraction - LN_2).abs() < 1e-9);
        assert!((plan.insertion_free_energy - LN_2).abs() < 1e-9);
        assert!(plan.end_position < plan.params.center());
        let loads: Vec<f64> = plan.stages.iter().map(|s| s.load).collect();
        assert!(loads.windows(2).all(|w| w[1] < w[0]));
        let total: f64 = plan.stages.iter().map(|s| s.duration).sum();
        assert!((total - plan.params.release_time).abs() < 1e-9);
    }

    #[test]
    fn control_path_phases() {
        let plan = SzilardPlan::new(&quick(), 1.0).unwrap();
        assert_eq!(plan.control_at(0.0).barrier, 0.0);
        assert_eq!(plan.control_at(0.0).phase, Phase::Insert);
        assert_eq!(plan.control_at(5.0).phase, Phase::Release);
        assert_eq!(plan.control_at(5.0).barrier, 14.0);
        assert_eq!(plan.control_at(plan.total_time).phase, Phase::Reset);
        assert_eq!(plan.control_at(plan.total_time).barrier, 0.0);
    }

    #[test]
    fn low_partition_rejected() {
        let p = SzilardParams { barrier: 1.0, ..SzilardParams::default() };
        assert!(SzilardPlan::new(&p, 1.0).is_err());
    }

    #[test]
    fn huge_load_extracts_nothing() {
        let p = SzilardParams { load: LoadSchedule::Constant { load: 1e6 }, release_time: 10.0, ..quick() };
        let r = run_szilard(&p, &RunConfig::new(6, 3)).unwrap();
        assert_eq!(r.cycle.w_out.mean, 0.0);
        assert_eq!(r.cycle.w_out.se, 0.0);
    }

    #[test]
    fn short_cycle_closes_and_extracts() {
        let r = run_szilard(&quick(), &RunConfig::new(8, 11)).unwrap();
        assert!(r.cycle.max_closure_residual < 1e-8);
        assert!(r.outcomes.iter().all(|o| o.w_out >= 0.0));
        assert!(r.cycle.w_out.mean > 0.1);
    }

    #[test]
    fn control_path_ignores_particle_side() {
        let p = SzilardParams { release_time: 20.0, ..quick() };
        let run = RunConfig::new(1, 5);
        let traces: Vec<SzilardTrace> = (0..8).map(|i| trace_szilard(&p, &run, i, 500).unwrap()).collect();
        let (mut left, mut right) = (0, 0);
        for tr in &traces {
            assert_eq!(tr.t, traces[0].t);
            assert_eq!(tr.controls, traces[0].controls);
            let mid = tr.xp[tr.xp.len() / 2];
            if mid > 2.0 {
                right += 1;
            } else if mid < 2.0 {
                left += 1;
            }
        }
        // the partition went both ways under the same control path
        assert!(left > 0 && right > 0, "{left} {right}");
    }
}
