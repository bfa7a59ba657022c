use super::{in_pool, step, DynamicsError, NoiseStream, Result, SimConfig};
use crate::landscape::{Controls, Family, PotentialField, ProtocolSchedule};
use crate::stats::Estimate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Barriers below this many `T` make the escape diffusion-dominated.
pub const LOW_BARRIER: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Well {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Absorb {
    BarrierTop,
    OppositeWell,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub x: f64,
    pub energy: f64,
    pub minimum: bool,
}

/// Start position and absorbing threshold. The walker is absorbed on the
/// first step that reaches or passes `threshold` from the side of `start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassageTarget {
    pub start: f64,
    pub threshold: f64,
}

impl PassageTarget {
    /// Start at the bottom of `well` of a static double well.
    pub fn double_well(field: &PotentialField, well: Well, absorb: Absorb) -> Result<Self> {
        if field.family() != Family::DoubleWell {
            return Err(DynamicsError::InvalidConfig(format!(
                "passage targets need a double well, got {}",
                field.family()
            )));
        }
        let c = field.controls();
        let points = stationary_points(field, c);
        let minima: Vec<f64> = points.iter().filter(|p| p.minimum).map(|p| p.x).collect();
        if minima.len() != 2 {
            return Err(DynamicsError::InvalidConfig(format!("expected two wells, found {} minima", minima.len())));
        }
        let (left, right) = (minima[0], minima[1]);
        let top = points
            .iter()
            .find(|p| !p.minimum && p.x > left && p.x < right)
            .map(|p| p.x)
            .ok_or_else(|| DynamicsError::InvalidConfig("no barrier between wells".into()))?;
        let (start, other) = match well {
            Well::Left => (left, right),
            Well::Right => (right, left),
        };
        let threshold = match absorb {
            Absorb::BarrierTop => top,
            Absorb::OppositeWell => other,
        };
        Ok(Self { start, threshold })
    }

    #[inline]
    fn absorbed(&self, x: f64) -> bool {
        if self.threshold >= self.start {
            x >= self.threshold
        } else {
            x <= self.threshold
        }
    }
}

/// Extrema of `V(·; c)` on the field's domain, left to right.
pub fn stationary_points(field: &PotentialField, c: &Controls) -> Vec<StationaryPoint> {
    let d = field.domain();
    let n = 8192;
    let h = d.width() / n as f64;
    let mut out = Vec::new();
    let mut x0 = d.lo;
    let mut s0 = field.slope(x0, c);
    for i in 1..=n {
        let x1 = d.lo + h * i as f64;
        let s1 = field.slope(x1, c);
        if s0 == 0.0 || s0.signum() != s1.signum() && s1 != 0.0 {
            let root = if s0 == 0.0 { x0 } else { bisect(|x| field.slope(x, c), x0, x1) };
            if out.last().is_none_or(|p: &StationaryPoint| (p.x - root).abs() > h) {
                out.push(StationaryPoint {
                    x: root,
                    energy: field.energy(root, c),
                    minimum: s0 < 0.0 || (s0 == 0.0 && s1 > 0.0),
                });
            }
        }
        x0 = x1;
        s0 = s1;
    }
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassageEstimate {
    /// Mean over escaped trajectories.
    pub mean: f64,
    pub se: f64,
    pub n_escaped: usize,
    /// Trajectories still unabsorbed after `n_steps`.
    pub n_censored: usize,
    /// Highest energy between start and threshold, relative to the start.
    pub barrier: f64,
    /// Set when `barrier < 2T`.
    pub low_barrier: bool,
}

/// Mean first-passage time in the static field over `config.n_traj`
/// walkers, each capped at `config.n_steps` steps. `config.initial` is
/// ignored in favour of `target.start`.
pub fn mean_first_passage(
    config: &SimConfig,
    field: &PotentialField,
    target: PassageTarget,
) -> Result<PassageEstimate> {
    let c = *field.controls();
    let schedule = ProtocolSchedule::hold(c, config.duration())?;
    config.validate(field, &schedule)?;
    let d = field.domain();
    if !d.contains(target.start) || !d.contains(target.threshold) {
        return Err(DynamicsError::InvalidConfig("passage start and threshold must lie in the domain".into()));
    }
    let barrier = barrier_between(field, &c, target.start, target.threshold);
    let times: Vec<Result<Option<f64>>> = in_pool(config.threads, || {
        (0..config.n_traj as u64).into_par_iter().map(|i| first_passage(config, field, &c, target, i)).collect()
    });
    let times = times.into_iter().collect::<Result<Vec<_>>>()?;
    let escaped: Vec<f64> = times.iter().flatten().copied().collect();
    let est =
        if escaped.is_empty() { Estimate { mean: f64::NAN, se: f64::NAN } } else { Estimate::from_samples(&escaped) };
    Ok(PassageEstimate {
        mean: est.mean,
        se: est.se,
        n_escaped: escaped.len(),
        n_censored: times.len() - escaped.len(),
        barrier,
        low_barrier: barrier < LOW_BARRIER * config.temperature,
    })
}

fn first_passage(
    config: &SimConfig,
    field: &PotentialField,
    c: &Controls,
    target: PassageTarget,
    traj: u64,
) -> Result<Option<f64>> {
    if target.absorbed(target.start) {
        return Ok(Some(0.0));
    }
    let mut noise = NoiseStream::new(config.master_seed, traj);
    let mut x = target.start;
    for n in 0..config.n_steps {
        let t = n as f64 * config.dt;
        x = step(x, field, c, t, config.dt, config.temperature, &mut noise).map_err(|e| e.in_trajectory(traj))?;
        if target.absorbed(x) {
            return Ok(Some((n + 1) as f64 * config.dt));
        }
    }
    Ok(None)
}

fn barrier_between(field: &PotentialField, c: &Controls, a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let n = 4096;
    let peak = (0..=n).map(|i| field.energy(lo + (hi - lo) * i as f64 / n as f64, c)).fold(f64::NEG_INFINITY, f64::max);
    peak - field.energy(a, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::Domain;

    #[test]
    fn double_well_stationary_points() {
        let c = Controls::double_well(1.0, 2.0, 0.0);
        let field = PotentialField::new(c, Domain::new(-2.0, 2.0).unwrap()).unwrap();
        let pts = stationary_points(&field, &c);
        assert_eq!(pts.len(), 3);
        assert!((pts[0].x + 1.0).abs() < 1e-12 && pts[0].minimum);
        assert!(pts[1].x.abs() < 1e-12 && !pts[1].minimum);
        assert!((pts[2].x - 1.0).abs() < 1e-12 && pts[2].minimum);
        let t = PassageTarget::double_well(&field, Well::Right, Absorb::BarrierTop).unwrap();
        assert!((t.start - 1.0).abs() < 1e-12 && t.threshold.abs() < 1e-12);
        let t = PassageTarget::double_well(&field, Well::Left, Absorb::OppositeWell).unwrap();
        assert!((t.threshold - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_well_has_no_target() {
        let c = Controls::double_well(1.0, 0.0, 0.0);
        let field = PotentialField::new(c, Domain::new(-2.0, 2.0).unwrap()).unwrap();
        assert!(PassageTarget::double_well(&field, Well::Left, Absorb::BarrierTop).is_err());
    }

    #[test]
    fn low_barrier_is_flagged_not_fatal() {
        let c = Controls::double_well(1.0, 2.0, 0.0);
        let field = PotentialField::new(c, Domain::new(-2.0, 2.0).unwrap()).unwrap();
        let target = PassageTarget::double_well(&field, Well::Right, Absorb::BarrierTop).unwrap();
        let cfg = SimConfig {
            dt: 1e-3,
            n_steps: 200_000,
            temperature: 1.0,
            n_traj: 20,
            master_seed: 3,
            record_stride: 0,
            initial: super::super::InitialState::Equilibrium,
            threads: 0,
        };
        let est = mean_first_passage(&cfg, &field, target).unwrap();
        assert!(est.low_barrier);
        assert!((est.barrier - 1.0).abs() < 1e-6);
        assert_eq!(est.n_escaped + est.n_censored, 20);
        assert!(est.mean > 0.0);
    }
}
