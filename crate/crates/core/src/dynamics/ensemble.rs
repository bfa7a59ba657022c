use super::{in_pool, simulate, InitialSampler, Result, SimConfig, TrajectoryOutcome};
use crate::landscape::{PotentialField, ProtocolSchedule};
use crate::stats::{Estimate, Histogram};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const HISTOGRAM_BINS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TerminalCounts {
    pub left: u64,
    pub right: u64,
    /// Ended exactly at `x = 0`.
    pub zero: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkHistograms {
    pub w_in: Histogram,
    pub heat: Histogram,
}

/// Ensemble reduction of independent trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub n_traj: usize,
    pub seed: u64,
    pub w_in: Estimate,
    pub w_out: Estimate,
    pub heat: Estimate,
    pub delta_e: Estimate,
    pub x_final: Estimate,
    /// `⟨exp(−W_in/T)⟩`; absent at `T = 0`.
    pub jarzynski: Option<Estimate>,
    pub histograms: WorkHistograms,
    pub terminal: TerminalCounts,
    pub max_closure_residual: f64,
    pub config: SimConfig,
    #[serde(skip)]
    pub outcomes: Vec<TrajectoryOutcome>,
}

impl EnsembleStats {
    /// Reduces outcomes in trajectory-index order.
    pub fn from_outcomes(config: &SimConfig, outcomes: Vec<TrajectoryOutcome>) -> Self {
        let col = |f: fn(&TrajectoryOutcome) -> f64| -> Vec<f64> { outcomes.iter().map(f).collect() };
        let w_in = col(|o| o.w_in);
        let heat = col(|o| o.heat);
        let jarzynski = (config.temperature > 0.0).then(|| {
            let t = config.temperature;
            Estimate::from_samples(&w_in.iter().map(|w| (-w / t).exp()).collect::<Vec<_>>())
        });
        let mut terminal = TerminalCounts::default();
        for o in &outcomes {
            if o.x_final > 0.0 {
                terminal.right += 1;
            } else if o.x_final < 0.0 {
                terminal.left += 1;
            } else {
                terminal.zero += 1;
            }
        }
        Self {
            n_traj: outcomes.len(),
            seed: config.master_seed,
            w_in: Estimate::from_samples(&w_in),
            w_out: Estimate::from_samples(&col(|o| o.w_out)),
            heat: Estimate::from_samples(&heat),
            delta_e: Estimate::from_samples(&col(|o| o.delta_e)),
            x_final: Estimate::from_samples(&col(|o| o.x_final)),
            jarzynski,
            histograms: WorkHistograms {
                w_in: Histogram::from_samples(&w_in, HISTOGRAM_BINS),
                heat: Histogram::from_samples(&heat, HISTOGRAM_BINS),
            },
            terminal,
            max_closure_residual: outcomes.iter().map(|o| o.max_closure_residual).fold(0.0, f64::max),
            config: config.clone(),
            outcomes,
        }
    }

    /// Free-energy difference from the Jarzynski average, `−T ln⟨e^{−W/T}⟩`.
    pub fn jarzynski_free_energy(&self) -> Option<f64> {
        self.jarzynski.map(|j| -self.config.temperature * j.mean.ln())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

/// Runs trajectories `0..n_traj` and reduces them. Per-trajectory results
/// depend only on `(master_seed, index)` and the reduction runs in index
/// order, so the output is independent of the worker count.
pub fn run_ensemble(config: &SimConfig, field: &PotentialField, schedule: &ProtocolSchedule) -> Result<EnsembleStats> {
    config.validate(field, schedule)?;
    let init = InitialSampler::prepare(config, field, schedule.start());
    let results: Vec<Result<TrajectoryOutcome>> = in_pool(config.threads, || {
        (0..config.n_traj as u64)
            .into_par_iter()
            .map(|i| simulate(config, field, schedule, &init, i, false).map(|(o, _)| o))
            .collect()
    });
    let outcomes = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(EnsembleStats::from_outcomes(config, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run_trajectory, InitialState};
    use crate::landscape::{Controls, Domain, Ramp, Segment};

    fn trap_setup() -> (PotentialField, ProtocolSchedule) {
        let c = Controls::harmonic(2.0, 0.0);
        let field = PotentialField::new(c, Domain::new(-8.0, 8.0).unwrap()).unwrap();
        let schedule = ProtocolSchedule::new(c, vec![Segment::ramp(0.5, Ramp::Linear, &[("k", 1.0)])]).unwrap();
        (field, schedule)
    }

    #[test]
    fn single_trajectory_ensemble_matches_trajectory() {
        let (field, schedule) = trap_setup();
        let cfg = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 1, 17);
        let stats = run_ensemble(&cfg, &field, &schedule).unwrap();
        let tr = run_trajectory(&cfg, &field, &schedule, 0).unwrap();
        assert_eq!(stats.w_in, Estimate { mean: tr.outcome.w_in, se: 0.0 });
        assert_eq!(stats.x_final.mean, tr.outcome.x_final);
        assert_eq!(stats.heat.mean, tr.outcome.heat);
    }

    #[test]
    fn doubling_ensemble_keeps_first_half() {
        let (field, schedule) = trap_setup();
        let cfg = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 64, 5);
        let small = run_ensemble(&cfg, &field, &schedule).unwrap();
        let big = run_ensemble(&cfg.clone().with_traj(128), &field, &schedule).unwrap();
        assert_eq!(&big.outcomes[..64], &small.outcomes[..]);
    }

    #[test]
    fn thread_count_does_not_change_stats() {
        let (field, schedule) = trap_setup();
        let cfg = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 40, 5);
        let one = run_ensemble(&cfg.clone().with_threads(1), &field, &schedule).unwrap();
        let four = run_ensemble(&cfg.clone().with_threads(4), &field, &schedule).unwrap();
        let mut a = one.clone();
        a.config.threads = 4;
        assert_eq!(a, four);
        assert_eq!(serde_json::to_string(&one.outcomes).unwrap(), serde_json::to_string(&four.outcomes).unwrap());
    }

    #[test]
    fn terminal_classification() {
        let c = Controls::double_well(5.0, 10.0, 0.0);
        let field = PotentialField::new(c, Domain::new(-1.8, 1.8).unwrap()).unwrap();
        let schedule = ProtocolSchedule::hold(c, 0.05).unwrap();
        let cfg = SimConfig::for_schedule(&schedule, 5e-4, 1.0, 50, 1).with_initial(InitialState::EquilibriumSplit);
        let stats = run_ensemble(&cfg, &field, &schedule).unwrap();
        assert_eq!(stats.terminal.left + stats.terminal.right + stats.terminal.zero, 50);
        assert!(stats.terminal.left > 15 && stats.terminal.right > 15);
        assert_eq!(stats.histograms.w_in.total(), 50);
    }

    #[test]
    fn stats_serialize_with_config_echo() {
        let (field, schedule) = trap_setup();
        let cfg = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 8, 5);
        let stats = run_ensemble(&cfg, &field, &schedule).unwrap();
        let v: serde_json::Value = serde_json::from_str(&stats.to_json()).unwrap();
        assert_eq!(v["seed"], 5);
        assert_eq!(v["config"]["n_traj"], 8);
        assert!(v["histograms"]["w_in"]["edges"].is_array());
    }
}
