//! Overdamped Langevin integration with stochastic-energetics bookkeeping.
//!
//! The update is fixed-step Euler–Maruyama, `x' = x + F(x, λ)·dt + √(2T·dt)·ξ`,
//! with mirror reflection at the domain walls. Work is booked with the
//! stepwise convention: at each step the controls jump to `λ(t + dt)` with
//! the particle held fixed (work), then the particle moves with the controls
//! held fixed (heat).

mod ensemble;
mod ledger;
mod passage;
mod rng;
mod sampler;
mod trajectory;

pub use ensemble::{run_ensemble, EnsembleStats, TerminalCounts, WorkHistograms};
pub use ledger::{EnergyLedger, LedgerSnapshot, CLOSURE_TOLERANCE};
pub use passage::{
    mean_first_passage, stationary_points, Absorb, PassageEstimate, PassageTarget, StationaryPoint, Well,
};
pub use rng::NoiseStream;
pub use sampler::BoltzmannSampler;
pub(crate) use trajectory::simulate;
pub use trajectory::{run_trajectory, write_trajectories_csv, Sample, Trajectory, TrajectoryOutcome};

use crate::landscape::{Controls, LandscapeError, PotentialField, ProtocolSchedule};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("integration blew up at t = {t} (x = {x}, dt = {dt})")]
    Blowup { t: f64, x: f64, dt: f64 },
    #[error("trajectory {traj}: {source}")]
    InTrajectory {
        traj: u64,
        #[source]
        source: Box<DynamicsError>,
    },
    #[error("first-law violation in trajectory {traj} at t = {t}: relative residual {residual:e}")]
    LedgerViolation { traj: u64, t: f64, residual: f64 },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("time step too coarse: dt·max|V''| = {product:.3} (limit 0.1, max |V''| = {curvature:.3})")]
    StepTooCoarse { product: f64, curvature: f64 },
    #[error(transparent)]
    Landscape(#[from] LandscapeError),
}

impl DynamicsError {
    pub fn is_numerical(&self) -> bool {
        match self {
            DynamicsError::Blowup { .. } | DynamicsError::LedgerViolation { .. } => true,
            DynamicsError::InTrajectory { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    fn in_trajectory(self, traj: u64) -> Self {
        match self {
            e @ (DynamicsError::InTrajectory { .. } | DynamicsError::LedgerViolation { .. }) => e,
            e => DynamicsError::InTrajectory { traj, source: Box::new(e) },
        }
    }
}

pub type Result<T> = std::result::Result<T, DynamicsError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// How each trajectory's starting position is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialState {
    Fixed {
        x: f64,
    },
    /// Boltzmann distribution of the initial controls.
    Equilibrium,
    /// Boltzmann distribution restricted to one side of `x = 0`.
    EquilibriumSide {
        side: Side,
    },
    /// Even trajectory indices start right of `x = 0`, odd ones left, each
    /// from the restricted Boltzmann distribution.
    EquilibriumSplit,
    Gaussian {
        mean: f64,
        sd: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub temperature: f64,
    pub n_traj: usize,
    pub master_seed: u64,
    /// Record every `record_stride` steps; 0 records only the endpoints.
    #[serde(default)]
    pub record_stride: usize,
    pub initial: InitialState,
    /// Worker threads; 0 uses the ambient rayon pool.
    #[serde(default)]
    pub threads: usize,
}

/// Largest admissible `dt·max|V''|`.
pub const MAX_STIFFNESS_PRODUCT: f64 = 0.1;

impl SimConfig {
    /// Config whose `n_steps` covers the schedule.
    pub fn for_schedule(schedule: &ProtocolSchedule, dt: f64, temperature: f64, n_traj: usize, seed: u64) -> Self {
        Self {
            dt,
            n_steps: (schedule.total_duration() / dt).round().max(1.0) as usize,
            temperature,
            n_traj,
            master_seed: seed,
            record_stride: 0,
            initial: InitialState::Equilibrium,
            threads: 0,
        }
    }

    pub fn with_initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_traj(mut self, n_traj: usize) -> Self {
        self.n_traj = n_traj;
        self
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.n_steps as f64
    }

    /// Checks the scalar fields only.
    pub fn validate_basic(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(DynamicsError::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.n_steps == 0 {
            return Err(DynamicsError::InvalidConfig("n_steps must be >= 1".into()));
        }
        if self.n_traj == 0 {
            return Err(DynamicsError::InvalidConfig("n_traj must be >= 1".into()));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(DynamicsError::InvalidConfig(format!("temperature must be >= 0, got {}", self.temperature)));
        }
        let needs_t = matches!(
            self.initial,
            InitialState::Equilibrium | InitialState::EquilibriumSide { .. } | InitialState::EquilibriumSplit
        );
        if needs_t && self.temperature == 0.0 {
            return Err(DynamicsError::InvalidConfig("equilibrium start needs T > 0".into()));
        }
        if let InitialState::Gaussian { sd, .. } = self.initial {
            if !(sd >= 0.0) {
                return Err(DynamicsError::InvalidConfig("gaussian start needs sd >= 0".into()));
            }
        }
        Ok(())
    }

    /// Scalar checks plus the stiffness condition `dt·max|V''| < 0.1`,
    /// probed over the domain at the schedule's start, segment boundaries
    /// and segment midpoints.
    pub fn validate(&self, field: &PotentialField, schedule: &ProtocolSchedule) -> Result<()> {
        self.validate_basic()?;
        if schedule.start().family() != field.family() {
            return Err(
                LandscapeError::FamilyMismatch { expected: field.family(), got: schedule.start().family() }.into()
            );
        }
        let curvature = max_curvature(field, schedule);
        let product = curvature * self.dt;
        if !(product < MAX_STIFFNESS_PRODUCT) {
            return Err(DynamicsError::StepTooCoarse { product, curvature });
        }
        if let InitialState::Fixed { x } = self.initial {
            if !field.domain().contains(x) {
                return Err(LandscapeError::OutOfDomain { x, lo: field.domain().lo, hi: field.domain().hi }.into());
            }
        }
        Ok(())
    }
}

/// Largest `|V''|` over a probe grid of positions and schedule times.
pub fn max_curvature(field: &PotentialField, schedule: &ProtocolSchedule) -> f64 {
    let bounds = schedule.boundaries();
    let mut times = bounds.clone();
    times.extend(bounds.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let d = field.domain();
    let probes = 1024;
    let mut worst: f64 = 0.0;
    for &t in &times {
        let mut cs = vec![schedule.sample(t)];
        if let Ok(left) = schedule.left_limit(t) {
            cs.push(left);
        }
        for c in &cs {
            worst = worst.max(max_curvature_at(field, c, d.lo, d.hi, probes));
        }
    }
    worst
}

pub(crate) fn max_curvature_at(field: &PotentialField, c: &Controls, lo: f64, hi: f64, probes: usize) -> f64 {
    (0..=probes)
        .map(|i| lo + (hi - lo) * i as f64 / probes as f64)
        .map(|x| field.curvature(x, c).abs())
        .fold(0.0, f64::max)
}

/// One Euler–Maruyama update at fixed controls.
#[inline]
pub fn step(
    x: f64,
    field: &PotentialField,
    controls: &Controls,
    t: f64,
    dt: f64,
    temperature: f64,
    noise: &mut NoiseStream,
) -> Result<f64> {
    let drift = field.force(x, controls) * dt;
    let kick = if temperature > 0.0 { (2.0 * temperature * dt).sqrt() * noise.normal() } else { 0.0 };
    let next = x + drift + kick;
    if !next.is_finite() {
        return Err(DynamicsError::Blowup { t, x, dt });
    }
    Ok(field.domain().reflect(next))
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = ambient pool).
pub fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Precomputed initial-condition sampler for an ensemble.
#[derive(Debug, Clone)]
pub(crate) enum InitialSampler {
    Fixed(f64),
    Boltzmann(BoltzmannSampler),
    Split { left: BoltzmannSampler, right: BoltzmannSampler },
    Gaussian { mean: f64, sd: f64 },
}

impl InitialSampler {
    pub(crate) fn prepare(config: &SimConfig, field: &PotentialField, c0: &Controls) -> Self {
        let t = config.temperature;
        let d = field.domain();
        match config.initial {
            InitialState::Fixed { x } => InitialSampler::Fixed(x),
            InitialState::Equilibrium => InitialSampler::Boltzmann(BoltzmannSampler::new(field, c0, t)),
            InitialState::EquilibriumSide { side } => {
                let s = match side {
                    Side::Left => BoltzmannSampler::restricted(field, c0, t, d.lo, 0.0f64.min(d.hi)),
                    Side::Right => BoltzmannSampler::restricted(field, c0, t, 0.0f64.max(d.lo), d.hi),
                };
                InitialSampler::Boltzmann(s)
            }
            InitialState::EquilibriumSplit => InitialSampler::Split {
                left: BoltzmannSampler::restricted(field, c0, t, d.lo, 0.0f64.min(d.hi)),
                right: BoltzmannSampler::restricted(field, c0, t, 0.0f64.max(d.lo), d.hi),
            },
            InitialState::Gaussian { mean, sd } => InitialSampler::Gaussian { mean, sd },
        }
    }

    pub(crate) fn draw(&self, field: &PotentialField, seed: u64, traj: u64) -> f64 {
        let mut aux = NoiseStream::auxiliary(seed, traj);
        let x = match self {
            InitialSampler::Fixed(x) => *x,
            InitialSampler::Boltzmann(s) => s.sample(aux.uniform()),
            InitialSampler::Split { left, right } => {
                let u = aux.uniform();
                if traj.is_multiple_of(2) {
                    right.sample(u)
                } else {
                    left.sample(u)
                }
            }
            InitialSampler::Gaussian { mean, sd } => mean + sd * aux.normal(),
        };
        field.domain().reflect(x)
    }
}
