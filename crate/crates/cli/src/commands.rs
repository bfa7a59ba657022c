use crate::output::{digest, num, Csv, RunDir, RunManifest, EIGENSTATES, SUMMARY, SWEEP, TRAJECTORIES};
use crate::{
    Cli, Command, Common, EraseArgs, KramersArgs, MoleculeArgs, PolicyArg, StaircaseArgs, SweepParam, SwitchArgs,
    SzilardArgs,
};
use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use szilard_lab::dynamics::{
    mean_first_passage, run_trajectory, write_trajectories_csv, Absorb, DynamicsError, InitialState, PassageTarget,
    SimConfig, Well,
};
use szilard_lab::experiments::{
    audit_balance, erasure_setup, error_barrier_fit, run_erasure, run_staircase, run_szilard, storage_error,
    trace_szilard, BlockPolicy, ErasureParams, ExperimentError, RunConfig, StaircaseParams, SzilardParams,
};
use szilard_lab::landscape::{Controls, Domain, LandscapeError, PotentialField};
use szilard_lab::selftest::run_selftest;
use szilard_lab::spectral::{self, classify_stability, conversion_table, SpectralError, StabilityThresholds, WellSpec};
use szilard_lab::switchmodel::{self, SwitchError, SwitchRelations};

/// A failed invariant or other breakdown on valid input.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct NumericalFailure(pub String);

pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        let numerical = if cause.downcast_ref::<NumericalFailure>().is_some() {
            Some(true)
        } else if let Some(e) = cause.downcast_ref::<ExperimentError>() {
            Some(e.is_numerical())
        } else if let Some(e) = cause.downcast_ref::<DynamicsError>() {
            Some(e.is_numerical())
        } else if let Some(e) = cause.downcast_ref::<SwitchError>() {
            Some(e.is_numerical())
        } else if let Some(e) = cause.downcast_ref::<SpectralError>() {
            Some(e.is_numerical())
        } else if cause.downcast_ref::<LandscapeError>().is_some() {
            Some(false)
        } else {
            None
        };
        if let Some(n) = numerical {
            return if n { 2 } else { 1 };
        }
    }
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "P: DeserializeOwned + Default"))]
struct Document<P> {
    #[serde(default)]
    run: RunConfig,
    #[serde(default)]
    params: P,
}

fn load<P: DeserializeOwned + Default>(common: &Common) -> Result<Document<P>> {
    let mut doc = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<Document<P>>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => Document { run: RunConfig::default(), params: P::default() },
    };
    if let Some(seed) = common.seed {
        doc.run.master_seed = seed;
    }
    if let Some(n) = common.traj {
        doc.run.n_traj = n;
    }
    if let Some(t) = common.temperature {
        doc.run.temperature = t;
    }
    if let Some(n) = common.threads {
        doc.run.threads = n;
    }
    doc.run.validate()?;
    Ok(doc)
}

/// Configuration as it enters the summary and digest: the thread count is
/// left out because results do not depend on it.
fn effective<P: Serialize>(doc: &Document<P>) -> Value {
    json!({
        "run": {
            "temperature": doc.run.temperature,
            "n_traj": doc.run.n_traj,
            "master_seed": doc.run.master_seed,
        },
        "params": serde_json::to_value(&doc.params).expect("params serialize"),
    })
}

fn manifest(name: &str, common: &Common, config: &Value, threads: usize) -> RunManifest {
    RunManifest {
        subcommand: name.to_string(),
        config_path: common.config.as_ref().map(|p| p.display().to_string()),
        seed: common.seed,
        threads,
        tool_version: env!("CARGO_PKG_VERSION"),
        config_digest: digest(config),
        config: config.clone(),
        outputs: Vec::new(),
        argv: std::env::args().collect(),
        timestamp_unix: 0,
    }
}

fn summary_with(config: &Value, body: Value) -> Value {
    let mut v = json!({ "config": config, "config_digest": digest(config) });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn finish(name: &str, common: &Common, threads: usize, config: &Value, summary: &Value, mut dir: RunDir) -> Result<()> {
    dir.write_json(SUMMARY, summary)?;
    if !dir.is_active() {
        println!("{}", serde_json::to_string_pretty(summary)?);
    }
    dir.finish(manifest(name, common, config, threads))
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    let c = &cli.common;
    match &cli.command {
        Command::Szilard(a) => szilard(c, a),
        Command::Erase(a) => erase(c, a),
        Command::Staircase(a) => staircase(c, a),
        Command::Kramers(a) => kramers(c, a),
        Command::Switch(a) => switch(c, a),
        Command::Molecule(a) => molecule(c, a),
        Command::Selftest => selftest(),
    }
}

fn szilard(common: &Common, args: &SzilardArgs) -> Result<()> {
    let mut doc = load::<SzilardParams>(common)?;
    if let Some(e) = args.switch_epsilon {
        doc.params.switch_epsilon = e;
    }
    let config = effective(&doc);
    let mut dir = RunDir::new(common.out.as_deref())?;
    let result = run_szilard(&doc.params, &doc.run)?;
    let theta = doc.params.theta.unwrap_or(doc.run.temperature);

    let mut eps_grid = args.audit_epsilon.clone();
    if eps_grid.is_empty() {
        eps_grid = vec![0.5, 0.1, 0.01];
    }
    let mut sweep = Csv::new(&["epsilon", "switch_cost", "W_ctrl", "W_out", "net_balance", "net_balance_se"]);
    let mut audits = Vec::new();
    for &eps in &eps_grid {
        let cycle = result.with_switch_epsilon(eps, theta)?;
        let balance = audit_balance(&cycle)?;
        sweep.row(&[
            num(eps),
            num(cycle.switch_cost),
            num(cycle.w_ctrl.mean),
            num(cycle.w_out.mean),
            num(balance.mean),
            num(balance.se),
        ]);
        audits.push(json!({ "epsilon": eps, "switch_cost": cycle.switch_cost, "balance": balance }));
    }
    dir.write(SWEEP, &sweep.finish())?;

    if args.record > 0 {
        let mut csv = Csv::new(&["traj_id", "t", "x", "x_p", "barrier", "load", "phase"]);
        for i in 0..args.record.min(doc.run.n_traj) as u64 {
            let tr = trace_szilard(&doc.params, &doc.run, i, args.stride)?;
            for k in 0..tr.t.len() {
                let phase = serde_json::to_value(tr.controls[k].phase)?;
                csv.row(&[
                    i.to_string(),
                    num(tr.t[k]),
                    num(tr.x[k]),
                    num(tr.xp[k]),
                    num(tr.controls[k].barrier),
                    num(tr.controls[k].load),
                    phase.as_str().unwrap_or_default().to_string(),
                ]);
            }
        }
        dir.write(TRAJECTORIES, &csv.finish())?;
    }
    let summary = summary_with(
        &config,
        json!({
            "result": result.cycle,
            "insertion_work": result.insertion_work,
            "insertion_free_energy": result.plan.insertion_free_energy,
            "ideal_extraction": result.plan.ideal_extraction,
            "end_position": result.plan.end_position,
            "load_stages": result.plan.stages,
            "leaks": result.leaks,
            "escapes": result.escapes,
            "audits": audits,
        }),
    );
    finish("szilard", common, doc.run.threads, &config, &summary, dir)
}

fn erase(common: &Common, args: &EraseArgs) -> Result<()> {
    let mut doc = load::<ErasureParams>(common)?;
    if let Some(t) = args.tilt {
        doc.params.tilt = t;
    }
    if let Some(f) = args.slow {
        if !(f > 0.0) {
            bail!("--slow must be > 0");
        }
        doc.params = doc.params.slowed(f);
    }
    let mut config = effective(&doc);
    if !args.storage_barriers.is_empty() {
        config["storage"] = json!({ "barriers": args.storage_barriers, "hold": args.hold, "dt": args.storage_dt });
    }
    let mut dir = RunDir::new(common.out.as_deref())?;
    let result = run_erasure(&doc.params, &doc.run)?;
    let mut body = json!({
        "result": result.cycle,
        "charged_epsilon": result.charged_epsilon,
        "landauer_bound": result.landauer_bound,
        "heat": result.heat,
    });
    if result.cycle.epsilon_hat > 0.5 {
        eprintln!("warning: protocol failed to reset (error rate {})", result.cycle.epsilon_hat);
    }

    if !args.storage_barriers.is_empty() {
        let mut points = Vec::new();
        let mut csv = Csv::new(&["barrier", "hold", "failures", "trials", "epsilon_hat", "ci_lo", "ci_hi"]);
        for &b in &args.storage_barriers {
            let p = storage_error(&doc.run, b, args.hold, args.storage_dt)?;
            csv.row(&[
                num(b),
                num(p.hold),
                p.error.successes.to_string(),
                p.error.trials.to_string(),
                num(p.error.p_hat),
                num(p.error.ci.0),
                num(p.error.ci.1),
            ]);
            points.push(p);
        }
        dir.write(SWEEP, &csv.finish())?;
        body["storage"] = json!({ "points": points, "fit": error_barrier_fit(&points).ok() });
    }

    if args.record > 0 {
        let (field, schedule, sim) = erasure_setup(&doc.params, &doc.run)?;
        let sim = SimConfig { record_stride: args.stride, ..sim };
        let trajs = (0..args.record.min(doc.run.n_traj) as u64)
            .map(|i| run_trajectory(&sim, &field, &schedule, i))
            .collect::<Result<Vec<_>, _>>()?;
        let mut buf = Vec::new();
        write_trajectories_csv(&mut buf, &trajs)?;
        dir.write(TRAJECTORIES, &String::from_utf8(buf)?)?;
    }
    let summary = summary_with(&config, body);
    finish("erase", common, doc.run.threads, &config, &summary, dir)
}

fn staircase(common: &Common, args: &StaircaseArgs) -> Result<()> {
    let mut doc = load::<StaircaseParams>(common)?;
    if let Some(p) = args.policy {
        doc.params.policy = match p {
            PolicyArg::Never => BlockPolicy::Never,
            PolicyArg::Advance => BlockPolicy::Advance,
        };
    }
    let mut config = effective(&doc);
    if !args.block_heights.is_empty() {
        config["block_heights"] = json!(args.block_heights);
    }
    let mut dir = RunDir::new(common.out.as_deref())?;
    let result = run_staircase(&doc.params, &doc.run)?;
    let mut body = json!({
        "result": result.cycle,
        "climb": result.climb,
        "gain": result.gain,
        "injected": result.injected,
        "final_step": result.final_step,
        "climb_rate": result.climb_rate,
        "feedback_energy": result.feedback_energy,
        "cost_per_toggle": result.cost_per_toggle,
    });
    if args.trajectories {
        let mut csv =
            Csv::new(&["traj_id", "advances", "final_step", "x_final", "W_mech", "switch_cost", "Q", "delta_E"]);
        for (i, o) in result.outcomes.iter().enumerate() {
            csv.row(&[
                i.to_string(),
                o.advances.to_string(),
                o.final_step.to_string(),
                num(o.x_final),
                num(o.w_mech),
                num(o.switch_cost),
                num(o.heat),
                num(o.delta_e),
            ]);
        }
        dir.write(TRAJECTORIES, &csv.finish())?;
    }
    if !args.block_heights.is_empty() {
        let mut csv = Csv::new(&[
            "block_height",
            "climb",
            "climb_se",
            "gain",
            "gain_se",
            "injected",
            "injected_se",
            "climb_rate",
            "gain_over_injected",
        ]);
        let mut points = Vec::new();
        for &b in &args.block_heights {
            let p = StaircaseParams { block_height: b, ..doc.params };
            let r = run_staircase(&p, &doc.run)?;
            let ratio = if r.injected.mean > 0.0 { r.gain.mean / r.injected.mean } else { 0.0 };
            csv.row(&[
                num(b),
                num(r.climb.mean),
                num(r.climb.se),
                num(r.gain.mean),
                num(r.gain.se),
                num(r.injected.mean),
                num(r.injected.se),
                num(r.climb_rate.mean),
                num(ratio),
            ]);
            points.push(json!({ "block_height": b, "climb": r.climb, "gain": r.gain, "injected": r.injected }));
        }
        dir.write(SWEEP, &csv.finish())?;
        body["sweep"] = json!(points);
    }
    let summary = summary_with(&config, body);
    finish("staircase", common, doc.run.threads, &config, &summary, dir)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KramersParams {
    /// Quadratic coefficient; `a` follows from each barrier as `b²/4ΔV`.
    pub b: f64,
    pub barriers: Vec<f64>,
    pub dt: f64,
    /// Cap on each walker's time.
    pub max_time: f64,
}

impl Default for KramersParams {
    fn default() -> Self {
        Self { b: 2.0, barriers: vec![3.0, 5.0], dt: 2e-3, max_time: 1e5 }
    }
}

fn kramers(common: &Common, args: &KramersArgs) -> Result<()> {
    let mut doc = load::<KramersParams>(common)?;
    if !args.barriers.is_empty() {
        doc.params.barriers = args.barriers.clone();
    }
    if let Some(dt) = args.dt {
        doc.params.dt = dt;
    }
    let p = &doc.params;
    if p.barriers.is_empty() || !(p.b > 0.0 && p.dt > 0.0 && p.max_time > 0.0) {
        bail!("kramers needs b, dt, max_time > 0 and at least one barrier");
    }
    let config = effective(&doc);
    let mut dir = RunDir::new(common.out.as_deref())?;
    let mut csv = Csv::new(&["barrier", "a", "b", "mfpt", "mfpt_se", "n_escaped", "n_censored"]);
    let mut rows = Vec::new();
    for &dv in &p.barriers {
        if !(dv > 0.0) {
            bail!("barrier heights must be > 0, got {dv}");
        }
        let a = p.b * p.b / (4.0 * dv);
        let c = Controls::double_well(a, p.b, 0.0);
        // walls high enough to be irrelevant but soft enough for a coarse dt
        let well = (p.b / (2.0 * a)).sqrt();
        let field = PotentialField::new(c, Domain::new(-1.6 * well, 1.6 * well)?)?;
        let target = PassageTarget::double_well(&field, Well::Left, Absorb::BarrierTop)?;
        let sim = SimConfig {
            dt: p.dt,
            n_steps: (p.max_time / p.dt).round() as usize,
            temperature: doc.run.temperature,
            n_traj: doc.run.n_traj,
            master_seed: doc.run.master_seed,
            record_stride: 0,
            initial: InitialState::Fixed { x: target.start },
            threads: doc.run.threads,
        };
        let est = mean_first_passage(&sim, &field, target)?;
        if est.low_barrier {
            eprintln!("warning: barrier {dv} is below 2T; the Arrhenius picture is unreliable");
        }
        csv.row(&[
            num(dv),
            num(a),
            num(p.b),
            num(est.mean),
            num(est.se),
            est.n_escaped.to_string(),
            est.n_censored.to_string(),
        ]);
        rows.push(json!({ "barrier": dv, "a": a, "estimate": est }));
    }
    dir.write(SWEEP, &csv.finish())?;
    let first = rows.first().and_then(|r| r["estimate"]["mean"].as_f64());
    let last = rows.last().and_then(|r| r["estimate"]["mean"].as_f64());
    let ratio = match (first, last) {
        (Some(a), Some(b)) if rows.len() > 1 => Some(b / a),
        _ => None,
    };
    let arrhenius = (p.barriers[p.barriers.len() - 1] - p.barriers[0]) / doc.run.temperature;
    let summary = summary_with(
        &config,
        json!({ "passages": rows, "ratio_last_first": ratio, "arrhenius_ratio": arrhenius.exp() }),
    );
    finish("kramers", common, doc.run.threads, &config, &summary, dir)
}

/// One point of the switch calculator. `epsilon` wins over `barrier`, which
/// wins over the pointer barrier `ω₀D²`; `theta` overrides `Θ(T, ω₀)`.
#[derive(Debug, Clone, Copy, Serialize)]
struct SwitchInputs {
    temperature: f64,
    omega0: f64,
    d: f64,
    tau0: f64,
    n: f64,
    theta: Option<f64>,
    epsilon: Option<f64>,
    barrier: Option<f64>,
}

impl SwitchInputs {
    fn with(mut self, param: SweepParam, v: f64) -> Self {
        match param {
            SweepParam::T => self.temperature = v,
            SweepParam::Omega0 => self.omega0 = v,
            SweepParam::D => self.d = v,
            SweepParam::Tau0 => self.tau0 = v,
            SweepParam::N => self.n = v,
            SweepParam::Theta => self.theta = Some(v),
            SweepParam::Epsilon => self.epsilon = Some(v),
            SweepParam::Barrier => self.barrier = Some(v),
        }
        self
    }

    fn evaluate(&self) -> Result<(f64, SwitchRelations)> {
        let params = switchmodel::SwitchParams::new(self.temperature, self.omega0, self.d, self.tau0)?;
        let theta = match self.theta {
            Some(th) if !(th > 0.0 && th.is_finite()) => bail!("theta must be > 0, got {th}"),
            Some(th) => th,
            None => params.theta(),
        };
        let r = match (self.epsilon, self.barrier) {
            (Some(e), _) => SwitchRelations::from_epsilon(e, theta, self.tau0, self.n)?,
            (None, Some(w)) => SwitchRelations::from_barrier(w, theta, self.tau0, self.n)?,
            (None, None) => params.relations(self.n)?,
        };
        // the displacement that realises W when W was not derived from D
        let d = if self.epsilon.is_some() || self.barrier.is_some() { (r.w / self.omega0).sqrt() } else { self.d };
        Ok((d, r))
    }
}

const SWITCH_COLUMNS: [&str; 10] = ["T", "omega0", "D", "tau0", "Theta", "W", "epsilon", "tau", "N", "W_gate"];

fn switch_row(i: &SwitchInputs, d: f64, r: &SwitchRelations) -> [f64; 10] {
    [i.temperature, i.omega0, d, i.tau0, r.theta, r.w, r.epsilon, r.tau, r.n, r.w_gate]
}

fn switch(common: &Common, args: &SwitchArgs) -> Result<()> {
    let inputs = SwitchInputs {
        temperature: common.temperature.unwrap_or(1.0),
        omega0: args.omega0,
        d: args.d,
        tau0: args.tau0,
        n: args.n,
        theta: args.theta,
        epsilon: args.epsilon,
        barrier: args.barrier,
    };
    let mut config = serde_json::to_value(inputs)?;
    let (d, r) = inputs.evaluate()?;
    let record: serde_json::Map<String, Value> =
        SWITCH_COLUMNS.iter().zip(switch_row(&inputs, d, &r)).map(|(k, v)| (k.to_string(), json!(v))).collect();
    let record = Value::Object(record);
    let mut dir = RunDir::new(common.out.as_deref())?;

    if let Some(param) = args.sweep {
        if args.values.is_empty() {
            bail!("--sweep needs --values");
        }
        config["sweep"] = json!({ "param": param, "values": args.values });
        let mut csv = Csv::new(&SWITCH_COLUMNS);
        for &v in &args.values {
            let point = inputs.with(param, v);
            let (d, r) = point.evaluate().with_context(|| format!("sweep point {param:?} = {v}"))?;
            csv.row(&switch_row(&point, d, &r).map(num));
        }
        let text = csv.finish();
        if !dir.is_active() {
            print!("{text}");
            return Ok(());
        }
        dir.write(SWEEP, &text)?;
    }
    if dir.is_active() {
        dir.write_json(SUMMARY, &summary_with(&config, json!({ "relations": record })))?;
    }
    println!("{}", serde_json::to_string_pretty(&record)?);
    dir.finish(manifest("switch", common, &config, common.threads.unwrap_or(0)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MoleculeParams {
    pub a: f64,
    pub b_values: Vec<f64>,
    pub mass: f64,
    pub half_width: f64,
    pub n_grid: usize,
    /// Relaxation and observation times, in the solver's time unit.
    pub tau_relax: f64,
    pub tau_obs: f64,
    pub thresholds: StabilityThresholds,
}

impl Default for MoleculeParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            b_values: vec![2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
            mass: 1.0,
            half_width: 4.5,
            n_grid: 1500,
            tau_relax: 1e4,
            tau_obs: 1e6,
            thresholds: StabilityThresholds::default(),
        }
    }
}

fn molecule(common: &Common, args: &MoleculeArgs) -> Result<()> {
    let mut doc = load::<MoleculeParams>(common)?;
    if !args.b.is_empty() {
        doc.params.b_values = args.b.clone();
    }
    if let Some(m) = args.mass {
        doc.params.mass = m;
    }
    if let Some(n) = args.n_grid {
        doc.params.n_grid = n;
    }
    if let Some(t) = args.tau_relax {
        doc.params.tau_relax = t;
    }
    if let Some(t) = args.tau_obs {
        doc.params.tau_obs = t;
    }
    let p = &doc.params;
    let config = json!({ "params": p, "dump_states": args.dump_states });
    let mut dir = RunDir::new(common.out.as_deref())?;
    let mut csv = Csv::new(&["b", "barrier_height", "E0", "E1", "splitting", "tau_inv", "classification"]);
    let mut rows = Vec::new();
    let mut states: Option<Csv> = None;
    for &b in &p.b_values {
        let spec = WellSpec::double_well(p.a, b, 0.0, p.mass, p.half_width, p.n_grid);
        let s = spectral::solve(&spec)?;
        if args.dump_states {
            let table = states.get_or_insert_with(|| {
                let mut header = vec!["b".to_string(), "x".to_string()];
                header.extend((0..s.states.len()).map(|k| format!("psi_{k}")));
                Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>())
            });
            for (i, &x) in s.x.iter().enumerate() {
                let mut row = vec![num(b), num(x)];
                row.extend(s.states.iter().map(|psi| num(psi[i])));
                table.row(&row);
            }
        }
        let tau_inv = s.inversion_time().value();
        let class = classify_stability(tau_inv, p.tau_relax, p.tau_obs, p.thresholds)?;
        let label = serde_json::to_value(class)?;
        csv.row(&[
            num(b),
            num(spec.potential.barrier_height()),
            num(s.energies[0]),
            num(s.energies[1]),
            num(s.splitting()),
            num(tau_inv),
            label.as_str().unwrap_or_default().to_string(),
        ]);
        rows.push(json!({
            "b": b,
            "barrier_height": spec.potential.barrier_height(),
            "energies": s.energies,
            "splitting": s.splitting(),
            "inversion_time": s.inversion_time(),
            "classification": class,
        }));
    }
    let presets: Vec<Value> = conversion_table()
        .iter()
        .map(|r| {
            let class = classify_stability(r.tau_inv_s, r.tau_relax_s, r.tau_obs_s, p.thresholds).ok();
            json!({ "name": r.name, "description": r.description, "tau_inv_s": r.tau_inv_s,
                    "tau_relax_s": r.tau_relax_s, "tau_obs_s": r.tau_obs_s, "classification": class })
        })
        .collect();
    let text = csv.finish();
    if dir.is_active() {
        dir.write(SWEEP, &text)?;
        if let Some(table) = states {
            dir.write(EIGENSTATES, &table.finish())?;
        }
        let summary = summary_with(&config, json!({ "wells": rows, "presets": presets }));
        dir.write_json(SUMMARY, &summary)?;
        dir.finish(manifest("molecule", common, &config, common.threads.unwrap_or(0)))
    } else {
        print!("{text}");
        Ok(())
    }
}

fn selftest() -> Result<()> {
    let checks = run_selftest();
    let mut failed = 0;
    for c in &checks {
        println!("{} {:<26} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        if !c.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(NumericalFailure(format!("{failed} of {} self-test checks failed", checks.len())).into());
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}
