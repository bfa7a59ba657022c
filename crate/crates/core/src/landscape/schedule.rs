use super::{Controls, LandscapeError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Ramp {
    /// Keep every control at its current value.
    Hold,
    Linear,
    /// `s(u) = (1 − cos πu)/2`; zero slope at both ends.
    #[default]
    RaisedCosine,
    /// Controls switch to the targets at the segment start, then hold.
    Jump,
}

impl Ramp {
    #[inline]
    fn shape(self, u: f64) -> f64 {
        match self {
            Ramp::Hold => 0.0,
            Ramp::Linear => u,
            Ramp::RaisedCosine => 0.5 * (1.0 - (PI * u).cos()),
            Ramp::Jump => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub duration: f64,
    #[serde(default)]
    pub targets: BTreeMap<String, f64>,
    #[serde(default)]
    pub ramp: Ramp,
}

impl Segment {
    pub fn hold(duration: f64) -> Self {
        Self { duration, targets: BTreeMap::new(), ramp: Ramp::Hold }
    }

    pub fn ramp(duration: f64, ramp: Ramp, targets: &[(&str, f64)]) -> Self {
        Self { duration, targets: targets.iter().map(|(k, v)| (k.to_string(), *v)).collect(), ramp }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Resolved {
    start: f64,
    end: f64,
    from: Controls,
    to: Controls,
    ramp: Ramp,
}

/// Piecewise control path `λ(t)` on `[0, total_duration]`.
///
/// Lookups are right-continuous: at a segment boundary `controls_at` returns
/// the value at the start of the later segment, `left_limit` the value at the
/// end of the earlier one. The two agree except at `Jump` segments.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSchedule {
    start: Controls,
    segments: Vec<Segment>,
    resolved: Vec<Resolved>,
    total: f64,
}

impl ProtocolSchedule {
    pub fn new(start: Controls, segments: Vec<Segment>) -> Result<Self> {
        start.validate()?;
        let family = start.family();
        let mut resolved = Vec::with_capacity(segments.len());
        let mut t = 0.0;
        let mut current = start;
        for (i, seg) in segments.iter().enumerate() {
            if !(seg.duration.is_finite() && seg.duration > 0.0) {
                return Err(LandscapeError::InvalidSchedule(format!(
                    "segment {i}: duration must be > 0, got {}",
                    seg.duration
                )));
            }
            match seg.ramp {
                Ramp::Hold if !seg.targets.is_empty() => {
                    return Err(LandscapeError::InvalidSchedule(format!(
                        "segment {i}: a hold segment takes no targets"
                    )))
                }
                Ramp::Jump | Ramp::Linear | Ramp::RaisedCosine if seg.targets.is_empty() => {
                    return Err(LandscapeError::InvalidSchedule(format!(
                        "segment {i}: {:?} segment needs at least one target",
                        seg.ramp
                    )))
                }
                _ => {}
            }
            let mut to = current;
            for (name, &value) in &seg.targets {
                let idx = family.param_index(name)?;
                to.set(idx, value);
            }
            to.validate()?;
            resolved.push(Resolved { start: t, end: t + seg.duration, from: current, to, ramp: seg.ramp });
            t += seg.duration;
            current = to;
        }
        Ok(Self { start, segments, resolved, total: t })
    }

    /// Constant controls for `duration`.
    pub fn hold(start: Controls, duration: f64) -> Result<Self> {
        Self::new(start, vec![Segment::hold(duration)])
    }

    pub fn start(&self) -> &Controls {
        &self.start
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.total
    }

    /// Start times of every segment plus the final time.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.resolved.iter().map(|r| r.start).collect();
        b.push(self.total);
        b
    }

    /// Controls at the end of the schedule.
    pub fn end(&self) -> Controls {
        self.resolved.last().map(|r| r.to).unwrap_or(self.start)
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.total.max(1.0);
        if !(t >= -slack && t <= self.total + slack) {
            return Err(LandscapeError::TimeOutOfRange { t, total: self.total });
        }
        Ok(())
    }

    pub fn controls_at(&self, t: f64) -> Result<Controls> {
        self.check_time(t)?;
        Ok(self.sample(t))
    }

    /// `lim_{s→t⁻} λ(s)`.
    pub fn left_limit(&self, t: f64) -> Result<Controls> {
        self.check_time(t)?;
        if self.resolved.is_empty() || t <= 0.0 {
            return Ok(self.start);
        }
        let k = self.resolved.partition_point(|r| r.start < t).saturating_sub(1);
        Ok(eval(&self.resolved[k], t))
    }

    /// Right-continuous lookup clamped to `[0, total]`; past the end the
    /// final controls persist.
    #[inline]
    pub fn sample(&self, t: f64) -> Controls {
        if self.resolved.is_empty() || t <= 0.0 {
            return self.resolved.first().map(|r| eval(r, 0.0)).unwrap_or(self.start);
        }
        if t >= self.total {
            return self.end();
        }
        let k = self.resolved.partition_point(|r| r.start <= t).saturating_sub(1);
        eval(&self.resolved[k], t)
    }

    /// Whether the control path changes at all.
    pub fn is_static(&self) -> bool {
        self.resolved.iter().all(|r| r.from == r.to)
    }
}

#[inline]
fn eval(r: &Resolved, t: f64) -> Controls {
    match r.ramp {
        Ramp::Hold => r.from,
        Ramp::Jump => r.to,
        ramp => {
            let u = ((t - r.start) / (r.end - r.start)).clamp(0.0, 1.0);
            if u >= 1.0 {
                r.to
            } else {
                r.from.lerp(&r.to, ramp.shape(u))
            }
        }
    }
}
