//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Sized to finish in minutes on a single core.

use serde_json::Value;
use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;
use szilard_lab::dynamics::{run_ensemble, InitialState, SimConfig};
use szilard_lab::experiments::{
    audit_balance, error_barrier_fit, run_erasure, run_staircase, run_szilard, storage_error, trace_szilard,
    ErasureParams, RunConfig, StaircaseParams, SzilardParams,
};
use szilard_lab::landscape::{Controls, Domain, PotentialField, ProtocolSchedule, Ramp, Segment};
use szilard_lab::spectral::{solve, WellSpec};
use szilard_lab::switchmodel::{
    displaced_thermal_state, effective_barrier, fidelity_oracle, theta, DEFAULT_TRUNCATION_CAP,
};

type Outcome = Result<String, String>;

const BIN: &str = env!("CARGO_BIN_EXE_szilard-lab");

/// Worst closure residual seen anywhere in the suite.
struct Closure(f64);

impl Closure {
    fn see(&mut self, r: f64) {
        self.0 = self.0.max(r);
    }
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("szilard-lab-acceptance-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn cli(args: &[&str], threads: usize, out: Option<&Path>) -> Result<String, String> {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("SZILARD_LAB_THREADS").arg("--threads").arg(threads.to_string());
    if let Some(dir) = out {
        cmd.arg("--out").arg(dir);
    }
    let o = cmd.output().map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("{args:?} exited with {}: {}", o.status, String::from_utf8_lossy(&o.stderr)));
    }
    Ok(String::from_utf8_lossy(&o.stdout).into_owned())
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn switch_reset_work() -> Outcome {
    let out = cli(&["switch", "--epsilon", "0.04", "--theta", "1"], 1, None)?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let w = v["W"].as_f64().ok_or("no W in output")?;
    check((w - 3.2189).abs() < 5e-5 && (w - 25f64.ln()).abs() < 1e-12, format!("W = {w:.6}"))
}

fn erasure_floor(closure: &mut Closure) -> Outcome {
    let p = ErasureParams::default();
    let r = run_erasure(&p, &RunConfig::new(10_000, 2026)).map_err(|e| e.to_string())?;
    closure.see(r.cycle.max_closure_residual);
    // slowest in-well relaxation time of the storage wells, γ/V''(x_min)
    let well_curvature = 4.0 * p.b;
    let duration = p.schedule().map_err(|e| e.to_string())?.total_duration();
    let relaxations = duration * well_curvature;
    let d = r.cycle.dissipated;
    check(
        relaxations >= 100.0 && d.mean >= LN_2 && d.mean <= 0.87,
        format!(
            "dissipated {:.4} ± {:.4} over {} trajectories, ε̂ = {:.4}, duration = {relaxations:.0} relaxation times",
            d.mean, d.se, r.cycle.n_traj, r.cycle.epsilon_hat
        ),
    )
}

fn error_barrier_law() -> Outcome {
    let run = RunConfig::new(20_000, 17);
    let mut points = Vec::new();
    for b in [2.0, 3.0, 4.0, 5.0] {
        points.push(storage_error(&run, b, 1.0, 1e-3).map_err(|e| e.to_string())?);
    }
    let fit = error_barrier_fit(&points).map_err(|e| e.to_string())?;
    let eps: Vec<String> = points.iter().map(|p| format!("{:.4}", p.error.p_hat)).collect();
    check(
        (fit.slope + 1.0).abs() <= 0.2,
        format!("slope {:.4} ± {:.4}, ε̂ = [{}]", fit.slope, fit.slope_se, eps.join(", ")),
    )
}

fn kramers_scaling() -> Outcome {
    let dir = scratch("kramers");
    cli(&["kramers", "--traj", "2000", "--barriers", "3,5"], 0, Some(&dir))?;
    let s = read_json(&dir.join("summary.json"))?;
    let _ = std::fs::remove_dir_all(&dir);
    let ratio = s["ratio_last_first"].as_f64().ok_or("no ratio")?;
    let escapes: u64 = s["passages"]
        .as_array()
        .ok_or("no passages")?
        .iter()
        .map(|p| p["estimate"]["n_escaped"].as_u64().unwrap_or(0))
        .min()
        .unwrap_or(0);
    let target = 2f64.exp();
    check(
        ((ratio - target) / target).abs() <= 0.25 && escapes >= 2000,
        format!("τ(5)/τ(3) = {ratio:.3} vs e² = {target:.3}, ≥ {escapes} escapes per barrier"),
    )
}

fn fidelity_grid() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [0.5, 1.0, 2.0, 3.0] {
        for nbar in [0.0, 0.5, 1.0, 2.0] {
            let a = displaced_thermal_state(d, nbar, 48, DEFAULT_TRUNCATION_CAP).map_err(|e| e.to_string())?;
            let b = displaced_thermal_state(-d, nbar, 48, DEFAULT_TRUNCATION_CAP).map_err(|e| e.to_string())?;
            let f = fidelity_oracle(&a, &b).map_err(|e| e.to_string())?;
            // Θ of an oscillator with ω₀ = 1 holding n̄ quanta
            let th = nbar + 0.5;
            let expected = (-effective_barrier(d, 1.0) / th).exp();
            worst = worst.max(((f - expected) / expected).abs());
        }
    }
    check(worst < 1e-5, format!("max relative error {worst:.2e} on 16 grid points"))
}

fn theta_limits() -> Outcome {
    let omega0 = 1.0;
    let cold = theta(0.0, omega0);
    let hot = theta(20.0 * omega0, omega0) / (20.0 * omega0);
    check(cold == omega0 / 2.0 && (hot - 1.0).abs() < 0.01, format!("Θ(0) = {cold}, Θ(20)/20 = {hot:.6}"))
}

fn szilard_cycle(closure: &mut Closure) -> Outcome {
    let p = SzilardParams::default();
    let run = RunConfig::new(256, 31);
    let r = run_szilard(&p, &run).map_err(|e| e.to_string())?;
    closure.see(r.cycle.max_closure_residual);
    let w = r.cycle.w_out;
    let mut worst = f64::INFINITY;
    for eps in [0.5, 0.3, 0.1, 0.03, 0.01, 1e-4, 1e-8] {
        let b =
            audit_balance(&r.with_switch_epsilon(eps, 1.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        worst = worst.min(b.mean / b.se.max(f64::MIN_POSITIVE));
    }

    // identical control paths whichever side the particle ends up on
    let traces =
        (0..8).map(|i| trace_szilard(&p, &run, i, 2000)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let same = traces.iter().all(|t| t.t == traces[0].t && t.controls == traces[0].controls);
    let c = p.center();
    let sides: Vec<bool> = traces.iter().map(|t| t.xp[t.xp.len() / 2] > c).collect();
    let both = sides.iter().any(|&s| s) && sides.iter().any(|&s| !s);

    check(
        (0.60..=0.70).contains(&w.mean) && same && both && worst >= -3.0,
        format!(
            "W_out {:.4} ± {:.4}, control path shared by {} traces: {same}, partition moved both ways: {both}, min audit/SE {worst:.2}",
            w.mean,
            w.se,
            traces.len()
        ),
    )
}

fn staircase_audit(closure: &mut Closure) -> Outcome {
    let run = RunConfig::new(64, 41);
    let mut ok = true;
    let mut rows = Vec::new();
    for b in [3.0, 4.0, 5.0, 6.0] {
        let r = run_staircase(&StaircaseParams { block_height: b, ..StaircaseParams::default() }, &run)
            .map_err(|e| e.to_string())?;
        closure.see(r.cycle.max_closure_residual);
        ok &= r.gain.mean <= r.injected.mean + 3.0 * r.injected.se && r.climb.mean > 0.0;
        rows.push(format!("B={b}: gain {:.2} vs injected {:.2}", r.gain.mean, r.injected.mean));
    }
    check(ok, rows.join("; "))
}

fn spectral_identities() -> Outcome {
    let s = solve(&WellSpec::double_well(1.0, 3.0, 0.0, 1.0, 4.5, 1500)).map_err(|e| e.to_string())?;
    let eq = s.equilibrium_state().map_err(|e| e.to_string())?;
    let ds = (eq.entropy - LN_2).abs();
    let pair = s.localized_states().map_err(|e| e.to_string())?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut recon: f64 = 0.0;
    for i in 0..s.x.len() {
        let even = r * (pair.left[i] + pair.right[i]);
        let odd = r * (pair.right[i] - pair.left[i]);
        recon = recon.max((even - s.states[0][i]).abs()).max((odd.abs() - s.states[1][i].abs()).abs());
    }
    let h = solve(&WellSpec::harmonic(1.0, 1.0, 8.0, 1600).with_states(8)).map_err(|e| e.to_string())?;
    let harm = h
        .energies
        .iter()
        .enumerate()
        .map(|(n, e)| ((e - (n as f64 + 0.5)) / (n as f64 + 0.5)).abs())
        .fold(0.0, f64::max);
    check(
        ds < 1e-12 && eq.decomposition_gap < 1e-10 && recon < 1e-10 && harm < 1e-3,
        format!(
            "|S − ln 2| {ds:.1e}, decomposition gap {:.1e}, reconstruction {recon:.1e}, harmonic {harm:.1e} over {} levels",
            eq.decomposition_gap,
            h.energies.len()
        ),
    )
}

fn ledger_soundness(closure: &mut Closure) -> Outcome {
    let field = PotentialField::new(Controls::harmonic(1.0, 0.0), Domain::new(-12.0, 12.0).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let drag = ProtocolSchedule::new(*field.controls(), vec![Segment::ramp(1.0, Ramp::Linear, &[("c", 2.0)])])
        .map_err(|e| e.to_string())?;
    let stiffen = ProtocolSchedule::new(*field.controls(), vec![Segment::ramp(0.5, Ramp::Linear, &[("k", 4.0)])])
        .map_err(|e| e.to_string())?;
    // ⟨e^{−W}⟩ = e^{−ΔF}: ΔF = 0 for translation, ½ ln 4 for stiffening 1 → 4
    let cases = [("drag", drag, 1e-3, 1.0), ("stiffen", stiffen, 5e-4, (-0.5 * 4f64.ln()).exp())];
    let mut ok = true;
    let mut rows = Vec::new();
    for (i, (name, schedule, dt, target)) in cases.into_iter().enumerate() {
        let config =
            SimConfig::for_schedule(&schedule, dt, 1.0, 10_000, 50 + i as u64).with_initial(InitialState::Equilibrium);
        let stats = run_ensemble(&config, &field, &schedule).map_err(|e| e.to_string())?;
        closure.see(stats.max_closure_residual);
        let jar = stats.jarzynski.ok_or("no Jarzynski estimate")?;
        ok &= jar.within(target, 3.0);
        rows.push(format!("{name}: {:.4} ± {:.4} vs {target:.4}", jar.mean, jar.se));
    }
    let worst = closure.0;
    check(ok && worst <= 1e-8, format!("{}; worst closure residual {worst:.1e}", rows.join("; ")))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["erase", "--traj", "200", "--storage-barriers", "2,3"],
        &["kramers", "--traj", "400"],
        &["staircase", "--traj", "16", "--block-heights", "3,5"],
        &["szilard", "--traj", "4"],
    ];
    let mut same = 0;
    for args in runs {
        let one = scratch("t1");
        let eight = scratch("t8");
        cli(args, 1, Some(&one))?;
        cli(args, 8, Some(&eight))?;
        let a = std::fs::read(one.join("summary.json")).map_err(|e| e.to_string())?;
        let b = std::fs::read(eight.join("summary.json")).map_err(|e| e.to_string())?;
        let _ = std::fs::remove_dir_all(&one);
        let _ = std::fs::remove_dir_all(&eight);
        if a != b {
            return Err(format!("summary.json differs between 1 and 8 threads for {args:?}"));
        }
        same += 1;
    }
    Ok(format!("{same} subcommands byte-identical at 1 and 8 threads"))
}

fn main() {
    let mut closure = Closure(0.0);
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut(&mut Closure) -> Outcome| {
        let start = Instant::now();
        let r = f(&mut closure);
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(d) => println!("PASS {n:>2} {name}: {d} [{secs:.1}s]"),
            Err(d) => {
                failed += 1;
                println!("FAIL {n:>2} {name}: {d} [{secs:.1}s]");
            }
        }
    };
    report(1, "switch reset work", &mut |_| switch_reset_work());
    report(2, "erasure floor", &mut erasure_floor);
    report(3, "error-barrier law", &mut |_| error_barrier_law());
    report(4, "Kramers scaling", &mut |_| kramers_scaling());
    report(5, "fidelity closure", &mut |_| fidelity_grid());
    report(6, "Θ limits", &mut |_| theta_limits());
    report(7, "measurement-free Szilard", &mut szilard_cycle);
    report(8, "staircase audit", &mut staircase_audit);
    report(9, "spectral identities", &mut |_| spectral_identities());
    report(10, "ledger soundness", &mut ledger_soundness);
    report(11, "thread determinism", &mut |_| determinism());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
