//! Fast invariant suite behind the `selftest` subcommand.
//!
//! Each check is small enough that the whole suite runs in a few seconds on
//! one core. Checks never panic; a failure is reported with a detail line.

use crate::dynamics::{run_ensemble, InitialState, SimConfig};
use crate::experiments::{audit_balance, CycleResult, RunConfig};
use crate::landscape::{Controls, Domain, PotentialField, ProtocolSchedule, Ramp, Segment};
use crate::spectral::{self, WellSpec};
use crate::switchmodel::{self, displaced_thermal_state, fidelity_oracle, DEFAULT_TRUNCATION_CAP};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    fn from_result(name: &'static str, r: Result<(bool, String), String>) -> Self {
        match r {
            Ok((ok, d)) => Self::new(name, ok, d),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

pub fn run_selftest() -> Vec<Check> {
    vec![
        Check::from_result("switch_reset_work", reset_work_example()),
        Check::from_result("switch_bijection", switch_bijection()),
        Check::from_result("theta_limits", theta_limits()),
        Check::from_result("fidelity_closure", fidelity_closure()),
        Check::from_result("landscape_gradients", landscape_gradients()),
        Check::from_result("ledger_closure", ledger_closure()),
        Check::from_result("thread_independence", thread_independence()),
        Check::from_result("idle_audit", idle_audit()),
        Check::from_result("spectral_symmetric_well", spectral_symmetric()),
        Check::from_result("spectral_harmonic_limit", spectral_harmonic()),
    ]
}

fn reset_work_example() -> Result<(bool, String), String> {
    let w = switchmodel::reset_work(0.04, 1.0).map_err(|e| e.to_string())?;
    Ok(((w - 25f64.ln()).abs() < 1e-12, format!("W(0.04, 1) = {w:.10}")))
}

fn switch_bijection() -> Result<(bool, String), String> {
    let mut worst: f64 = 0.0;
    for &theta in &[0.5, 1.0, 3.0] {
        for &eps in &[1e-9, 1e-3, 0.04, 0.3, 0.5] {
            let r = switchmodel::SwitchRelations::from_epsilon(eps, theta, 2.0, 1e6).map_err(|e| e.to_string())?;
            let back = switchmodel::error_probability(r.w, theta).map_err(|e| e.to_string())?;
            worst = worst.max(((back - eps) / eps).abs()).max(((r.tau * r.epsilon - 2.0) / 2.0).abs());
        }
    }
    Ok((worst < 1e-12, format!("max relative error {worst:.2e}")))
}

fn theta_limits() -> Result<(bool, String), String> {
    let zero = switchmodel::theta(0.0, 1.0);
    let hot = switchmodel::theta(20.0, 1.0) / 20.0;
    Ok((zero == 0.5 && (hot - 1.0).abs() < 0.01, format!("Θ(0) = {zero}, Θ(20)/20 = {hot:.6}")))
}

fn fidelity_closure() -> Result<(bool, String), String> {
    let mut worst: f64 = 0.0;
    for &(d, nbar) in &[(0.5, 0.0), (1.0, 0.5), (2.0, 1.0)] {
        let a = displaced_thermal_state(d, nbar, 32, DEFAULT_TRUNCATION_CAP).map_err(|e| e.to_string())?;
        let b = displaced_thermal_state(-d, nbar, 32, DEFAULT_TRUNCATION_CAP).map_err(|e| e.to_string())?;
        let f = fidelity_oracle(&a, &b).map_err(|e| e.to_string())?;
        let th = 0.5 * (2.0 * nbar + 1.0);
        let expected = (-switchmodel::effective_barrier(d, 1.0) / th).exp();
        worst = worst.max(((f - expected) / expected).abs());
    }
    Ok((worst < 1e-5, format!("max relative error {worst:.2e}")))
}

fn landscape_gradients() -> Result<(bool, String), String> {
    let cases = [
        Controls::double_well(1.0, 2.0, 0.3),
        Controls::partitioned_box(4.0, 1.0, 2.0, 10.0, 0.3, 0.5),
        Controls::staircase(1.5, 1.0, 40.0, 2.0, 5.0, 0.2),
        Controls::harmonic(2.0, 0.5),
    ];
    let mut worst: f64 = 0.0;
    for c in cases {
        let field = PotentialField::new(c, crate::landscape::default_domain(&c)).map_err(|e| e.to_string())?;
        let d = field.domain();
        for i in 1..40 {
            let x = d.lo + d.width() * i as f64 / 40.0;
            let h = 1e-5;
            let fd = (field.energy(x + h, &c) - field.energy(x - h, &c)) / (2.0 * h);
            let g = field.slope(x, &c);
            worst = worst.max((fd - g).abs() / (1.0 + g.abs()));
        }
    }
    Ok((worst < 1e-5, format!("max relative gradient mismatch {worst:.2e}")))
}

fn trap_protocol() -> Result<(PotentialField, ProtocolSchedule), String> {
    let c = Controls::harmonic(1.0, 0.0);
    let field =
        PotentialField::new(c, Domain::new(-10.0, 10.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let schedule = ProtocolSchedule::new(
        c,
        vec![Segment::ramp(1.0, Ramp::Linear, &[("c", 1.0)]), Segment::ramp(1.0, Ramp::Linear, &[("k", 3.0)])],
    )
    .map_err(|e| e.to_string())?;
    Ok((field, schedule))
}

fn ledger_closure() -> Result<(bool, String), String> {
    let (field, schedule) = trap_protocol()?;
    let config = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 64, 7).with_initial(InitialState::Equilibrium);
    let stats = run_ensemble(&config, &field, &schedule).map_err(|e| e.to_string())?;
    Ok((stats.max_closure_residual <= 1e-8, format!("max closure residual {:.2e}", stats.max_closure_residual)))
}

fn thread_independence() -> Result<(bool, String), String> {
    let (field, schedule) = trap_protocol()?;
    let config = SimConfig::for_schedule(&schedule, 1e-3, 1.0, 16, 3);
    let one = run_ensemble(&config.clone().with_threads(1), &field, &schedule).map_err(|e| e.to_string())?;
    let two = run_ensemble(&config.with_threads(2), &field, &schedule).map_err(|e| e.to_string())?;
    let same = one.outcomes == two.outcomes;
    Ok((same, format!("1 vs 2 threads identical: {same}")))
}

fn idle_audit() -> Result<(bool, String), String> {
    let r = CycleResult::idle("idle", &RunConfig::new(4, 0));
    let b = audit_balance(&r).map_err(|e| e.to_string())?;
    Ok((b.mean == 0.0 && b.se == 0.0, format!("balance {} ± {}", b.mean, b.se)))
}

fn spectral_symmetric() -> Result<(bool, String), String> {
    let s = spectral::solve(&WellSpec::double_well(1.0, 3.0, 0.0, 1.0, 4.5, 800)).map_err(|e| e.to_string())?;
    let eq = s.equilibrium_state().map_err(|e| e.to_string())?;
    let err = (eq.entropy - std::f64::consts::LN_2).abs();
    Ok((
        err < 1e-12 && eq.decomposition_gap < 1e-10,
        format!("|S − ln 2| = {err:.2e}, decomposition gap {:.2e}", eq.decomposition_gap),
    ))
}

fn spectral_harmonic() -> Result<(bool, String), String> {
    let s = spectral::solve(&WellSpec::harmonic(1.0, 1.0, 8.0, 1600)).map_err(|e| e.to_string())?;
    let worst = s
        .energies
        .iter()
        .enumerate()
        .map(|(n, e)| ((e - (n as f64 + 0.5)) / (n as f64 + 0.5)).abs())
        .fold(0.0, f64::max);
    Ok((worst < 1e-3, format!("max relative deviation from n + 1/2: {worst:.2e}")))
}

#[cfg(test)]
mod tests {
    #[test]
    fn suite_passes() {
        for c in super::run_selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
