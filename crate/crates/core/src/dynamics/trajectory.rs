use super::{step, DynamicsError, EnergyLedger, InitialSampler, LedgerSnapshot, NoiseStream, Result, SimConfig};
use crate::landscape::{Controls, PotentialField, ProtocolSchedule};
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub controls: Controls,
    pub ledger: LedgerSnapshot,
}

/// Per-trajectory end-of-run summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryOutcome {
    pub traj_id: u64,
    pub x_initial: f64,
    pub x_final: f64,
    pub w_in: f64,
    pub w_out: f64,
    pub heat: f64,
    pub delta_e: f64,
    pub max_closure_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub traj_id: u64,
    pub samples: Vec<Sample>,
    pub outcome: TrajectoryOutcome,
}

/// Runs trajectory `traj_index` and records it at `config.record_stride`.
pub fn run_trajectory(
    config: &SimConfig,
    field: &PotentialField,
    schedule: &ProtocolSchedule,
    traj_index: u64,
) -> Result<Trajectory> {
    config.validate(field, schedule)?;
    let init = InitialSampler::prepare(config, field, schedule.start());
    let (outcome, samples) = simulate(config, field, schedule, &init, traj_index, true)?;
    Ok(Trajectory { traj_id: traj_index, samples, outcome })
}

/// Integration loop shared by single runs and ensembles. Inputs are assumed
/// validated.
pub(crate) fn simulate(
    config: &SimConfig,
    field: &PotentialField,
    schedule: &ProtocolSchedule,
    init: &InitialSampler,
    traj: u64,
    record: bool,
) -> Result<(TrajectoryOutcome, Vec<Sample>)> {
    let dt = config.dt;
    let temp = config.temperature;
    let mut noise = NoiseStream::new(config.master_seed, traj);
    let mut controls = schedule.sample(0.0);
    let x0 = init.draw(field, config.master_seed, traj);
    let mut x = x0;
    let mut ledger = EnergyLedger::new(field.energy(x, &controls));
    let mut samples = Vec::new();
    let stride = config.record_stride;
    if record {
        samples.push(Sample { t: 0.0, x, controls, ledger: ledger.snapshot() });
    }
    for n in 0..config.n_steps {
        let t = n as f64 * dt;
        let t_next = (n + 1) as f64 * dt;
        let next = schedule.sample(t_next);
        if next != controls {
            let before = ledger.energy();
            ledger.control(before, field.energy(x, &next));
            controls = next;
        }
        let before = ledger.energy();
        x = step(x, field, &controls, t, dt, temp, &mut noise).map_err(|e| e.in_trajectory(traj))?;
        ledger.relax(before, field.energy(x, &controls), 0.0);

        let last = n + 1 == config.n_steps;
        let at_stride = stride > 0 && (n + 1) % stride == 0;
        if at_stride || last {
            if !ledger.check() {
                return Err(DynamicsError::LedgerViolation { traj, t: t_next, residual: ledger.relative_residual() });
            }
            if record {
                samples.push(Sample { t: t_next, x, controls, ledger: ledger.snapshot() });
            }
        }
    }
    let outcome = TrajectoryOutcome {
        traj_id: traj,
        x_initial: x0,
        x_final: x,
        w_in: ledger.w_in(),
        w_out: ledger.w_out(),
        heat: ledger.heat(),
        delta_e: ledger.delta_energy(),
        max_closure_residual: ledger.max_relative_residual(),
    };
    Ok((outcome, samples))
}

/// CSV with columns `traj_id,t,x,<controls...>,E,W_in,W_out,Q`.
pub fn write_trajectories_csv<W: Write>(mut out: W, trajectories: &[Trajectory]) -> io::Result<()> {
    let Some(first) = trajectories.iter().find_map(|t| t.samples.first()) else {
        return writeln!(out, "traj_id,t,x,E,W_in,W_out,Q");
    };
    let names = first.controls.family().param_names();
    write!(out, "traj_id,t,x")?;
    for n in names {
        write!(out, ",{n}")?;
    }
    writeln!(out, ",E,W_in,W_out,Q")?;
    for tr in trajectories {
        for s in &tr.samples {
            write!(out, "{},{},{}", tr.traj_id, s.t, s.x)?;
            for v in s.controls.values() {
                write!(out, ",{v}")?;
            }
            let l = &s.ledger;
            writeln!(out, ",{},{},{},{}", l.energy, l.w_in, l.w_out, l.heat)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::InitialState;
    use crate::landscape::{Domain, Ramp, Segment};

    fn dragged_trap() -> (PotentialField, ProtocolSchedule) {
        let c = Controls::harmonic(1.0, 0.0);
        let field = PotentialField::new(c, Domain::new(-8.0, 9.0).unwrap()).unwrap();
        let schedule =
            ProtocolSchedule::new(c, vec![Segment::ramp(1.0, Ramp::Linear, &[("c", 1.0)]), Segment::hold(0.5)])
                .unwrap();
        (field, schedule)
    }

    #[test]
    fn static_field_does_no_work() {
        let c = Controls::double_well(1.0, 2.0, 0.3);
        let field = PotentialField::new(c, Domain::new(-2.0, 2.0).unwrap()).unwrap();
        let schedule = ProtocolSchedule::hold(c, 2.0).unwrap();
        let cfg = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 1, 5);
        let tr = run_trajectory(&cfg, &field, &schedule, 0).unwrap();
        assert_eq!(tr.outcome.w_in, 0.0);
        assert!(tr.outcome.max_closure_residual <= 1e-12);
    }

    #[test]
    fn same_seed_and_index_is_bit_identical() {
        let (field, schedule) = dragged_trap();
        let mut cfg = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 1, 99);
        cfg.record_stride = 50;
        let a = run_trajectory(&cfg, &field, &schedule, 3).unwrap();
        let b = run_trajectory(&cfg, &field, &schedule, 3).unwrap();
        assert_eq!(a, b);
        let c = run_trajectory(&cfg, &field, &schedule, 4).unwrap();
        assert_ne!(a.outcome.x_final, c.outcome.x_final);
    }

    #[test]
    fn recording_is_strictly_increasing_and_closes() {
        let (field, schedule) = dragged_trap();
        let mut cfg = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 1, 1);
        cfg.record_stride = 100;
        let tr = run_trajectory(&cfg, &field, &schedule, 0).unwrap();
        assert_eq!(tr.samples.len(), 1 + 1500 / 100);
        for w in tr.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        for s in &tr.samples {
            assert!(field.domain().contains(s.x));
            let l = s.ledger;
            let de = l.energy - tr.samples[0].ledger.energy;
            assert!((de - (l.w_in - l.w_out + l.heat)).abs() <= 1e-8 * (l.w_in.abs() + l.heat.abs() + 1.0));
        }
        assert_eq!(tr.samples.last().unwrap().controls.by_name("c").unwrap(), 1.0);
    }

    #[test]
    fn zero_temperature_drag_is_deterministic_lag() {
        // at T = 0 a particle starting at the trap center lags a linearly
        // moving trap; the work is the positive friction loss
        let (field, schedule) = dragged_trap();
        let cfg = SimConfig::for_schedule(&schedule, 1e-3, 0.0, 1, 0).with_initial(InitialState::Fixed { x: 0.0 });
        let tr = run_trajectory(&cfg, &field, &schedule, 0).unwrap();
        assert!(tr.outcome.w_in > 0.0);
        assert!(tr.outcome.heat < 0.0);
    }

    #[test]
    fn csv_has_expected_columns() {
        let (field, schedule) = dragged_trap();
        let mut cfg = SimConfig::for_schedule(&schedule, 1e-2, 1.0, 1, 0);
        cfg.record_stride = 50;
        let tr = run_trajectory(&cfg, &field, &schedule, 0).unwrap();
        let mut buf = Vec::new();
        write_trajectories_csv(&mut buf, &[tr]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, "traj_id,t,x,k,c,E,W_in,W_out,Q");
        assert_eq!(text.lines().count(), 1 + 4);
    }
}
