//! Controllable one-dimensional potentials and the schedules that drive them.
//!
//! A [`PotentialField`] fixes the potential family and the spatial domain; the
//! family's shape parameters live in a [`Controls`] vector (the control
//! parameter λ). A [`ProtocolSchedule`] maps time to `Controls`.
//!
//! Families, with `x` the particle coordinate:
//!
//! | family          | V(x; λ)                                                             |
//! |-----------------|---------------------------------------------------------------------|
//! | `DoubleWell`    | `a x⁴ − b x² + f x`                                                  |
//! | `PartitionedBox`| `κ ((x − L/2)/(L/2))¹² + B exp(−(x − x_p)²/2w²)`                     |
//! | `Staircase`     | `Δμ x/ℓ + (κℓ²/4π²)(1 − cos 2πx/ℓ) + B_blk exp(−(x − (m − ½)ℓ)²/2w²)` |
//! | `HarmonicWell`  | `½ k (x − c)²`                                                       |
//!
//! The partition load `g` of `PartitionedBox` acts on the partition
//! coordinate only and does not enter `V(x)`.

mod document;
mod schedule;

pub use document::{default_domain, ProtocolDocument};
pub use schedule::{ProtocolSchedule, Ramp, Segment};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LandscapeError {
    #[error("position {x} outside domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("family {family} has no parameter `{name}`")]
    UnknownParameter { family: Family, name: String },
    #[error("parameter `{name}` = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    #[error("control family {got} does not match field family {expected}")]
    FamilyMismatch { expected: Family, got: Family },
    #[error("invalid domain [{lo}, {hi}]")]
    InvalidDomain { lo: f64, hi: f64 },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("time {t} outside schedule [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },
    #[error("malformed protocol document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, LandscapeError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    DoubleWell,
    PartitionedBox,
    Staircase,
    HarmonicWell,
}

impl Family {
    /// Names of the control parameters, in storage order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::DoubleWell => &["a", "b", "f"],
            Family::PartitionedBox => &["length", "kappa_wall", "x_p", "barrier", "width", "load"],
            Family::Staircase => &["delta_mu", "period", "stiffness", "block_index", "block_height", "block_width"],
            Family::HarmonicWell => &["k", "c"],
        }
    }

    pub fn param_index(self, name: &str) -> Result<usize> {
        self.param_names()
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| LandscapeError::UnknownParameter { family: self, name: name.to_string() })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::DoubleWell => "double_well",
            Family::PartitionedBox => "partitioned_box",
            Family::Staircase => "staircase",
            Family::HarmonicWell => "harmonic_well",
        };
        f.write_str(s)
    }
}

pub const MAX_CONTROLS: usize = 6;

/// Control-parameter vector λ of one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Controls {
    family: Family,
    values: [f64; MAX_CONTROLS],
}

impl Controls {
    pub fn double_well(a: f64, b: f64, f: f64) -> Self {
        Self::from_slice(Family::DoubleWell, &[a, b, f])
    }

    pub fn partitioned_box(length: f64, kappa_wall: f64, x_p: f64, barrier: f64, width: f64, load: f64) -> Self {
        Self::from_slice(Family::PartitionedBox, &[length, kappa_wall, x_p, barrier, width, load])
    }

    pub fn staircase(
        delta_mu: f64,
        period: f64,
        stiffness: f64,
        block_index: f64,
        block_height: f64,
        block_width: f64,
    ) -> Self {
        Self::from_slice(Family::Staircase, &[delta_mu, period, stiffness, block_index, block_height, block_width])
    }

    pub fn harmonic(k: f64, c: f64) -> Self {
        Self::from_slice(Family::HarmonicWell, &[k, c])
    }

    fn from_slice(family: Family, v: &[f64]) -> Self {
        debug_assert_eq!(v.len(), family.param_names().len());
        let mut values = [0.0; MAX_CONTROLS];
        values[..v.len()].copy_from_slice(v);
        Self { family, values }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn len(&self) -> usize {
        self.family.param_names().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values[..self.len()]
    }

    #[inline]
    pub fn get(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn by_name(&self, name: &str) -> Result<f64> {
        Ok(self.values[self.family.param_index(name)?])
    }

    pub fn set(&mut self, index: usize, value: f64) {
        assert!(index < self.len());
        self.values[index] = value;
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        let idx = self.family.param_index(name)?;
        self.values[idx] = value;
        Ok(self)
    }

    /// Componentwise `self + s·(other − self)`.
    pub fn lerp(&self, other: &Controls, s: f64) -> Controls {
        let mut out = *self;
        for i in 0..self.len() {
            let (a, b) = (self.values[i], other.values[i]);
            out.values[i] = if a == b { a } else { a + s * (b - a) };
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let names = self.family.param_names();
        let v = self.values();
        for (&name, &x) in names.iter().zip(v) {
            if !x.is_finite() {
                return Err(invalid(name, x, "must be finite"));
            }
        }
        match self.family {
            Family::DoubleWell => {
                positive("a", v[0])?;
                non_negative("b", v[1])?;
            }
            Family::PartitionedBox => {
                positive("length", v[0])?;
                positive("kappa_wall", v[1])?;
                non_negative("barrier", v[3])?;
                positive("width", v[4])?;
                non_negative("load", v[5])?;
            }
            Family::Staircase => {
                positive("delta_mu", v[0])?;
                positive("period", v[1])?;
                non_negative("stiffness", v[2])?;
                non_negative("block_height", v[4])?;
                positive("block_width", v[5])?;
            }
            Family::HarmonicWell => {
                non_negative("k", v[0])?;
            }
        }
        Ok(())
    }
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> LandscapeError {
    LandscapeError::InvalidParameter { name, value, reason }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(LandscapeError::InvalidParameter { name, value: v, reason: "must be > 0" })
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(LandscapeError::InvalidParameter { name, value: v, reason: "must be >= 0" })
    }
}

/// Closed interval of admissible positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(LandscapeError::InvalidDomain { lo, hi })
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Folds `x` back into the domain by mirror reflection at the walls.
    #[inline]
    pub fn reflect(&self, x: f64) -> f64 {
        let mut y = x;
        if y > self.hi {
            y = 2.0 * self.hi - y;
        }
        if y < self.lo {
            y = 2.0 * self.lo - y;
        }
        y.clamp(self.lo, self.hi)
    }
}

/// A potential family on a bounded domain, with its initial controls.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    controls: Controls,
    domain: Domain,
}

impl PotentialField {
    pub fn new(controls: Controls, domain: Domain) -> Result<Self> {
        controls.validate()?;
        Ok(Self { controls, domain })
    }

    pub fn family(&self) -> Family {
        self.controls.family
    }

    /// Initial (un-driven) control values.
    pub fn controls(&self) -> &Controls {
        &self.controls
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    fn check(&self, x: f64, c: &Controls) -> Result<()> {
        if c.family != self.controls.family {
            return Err(LandscapeError::FamilyMismatch { expected: self.controls.family, got: c.family });
        }
        if !self.domain.contains(x) {
            return Err(LandscapeError::OutOfDomain { x, lo: self.domain.lo, hi: self.domain.hi });
        }
        Ok(())
    }

    /// `V(x; λ)` with domain and family checks.
    pub fn evaluate(&self, x: f64, c: &Controls) -> Result<f64> {
        self.check(x, c)?;
        Ok(self.energy(x, c))
    }

    /// Force `−∂V/∂x` with domain and family checks.
    pub fn gradient(&self, x: f64, c: &Controls) -> Result<f64> {
        self.check(x, c)?;
        Ok(self.force(x, c))
    }

    /// `V(x; λ(t))` for a scheduled protocol.
    pub fn evaluate_at(&self, schedule: &ProtocolSchedule, x: f64, t: f64) -> Result<f64> {
        self.evaluate(x, &schedule.controls_at(t)?)
    }

    pub fn gradient_at(&self, schedule: &ProtocolSchedule, x: f64, t: f64) -> Result<f64> {
        self.gradient(x, &schedule.controls_at(t)?)
    }

    /// Work injected by the controller when the controls jump from `before`
    /// to `after` while the particle sits at `x`.
    pub fn parameter_work_increment(&self, x: f64, before: &Controls, after: &Controls) -> Result<f64> {
        before.validate()?;
        after.validate()?;
        self.check(x, before)?;
        self.check(x, after)?;
        if before == after {
            return Ok(0.0);
        }
        Ok(self.energy(x, after) - self.energy(x, before))
    }

    /// `V(x; λ)`, unchecked.
    #[inline]
    pub fn energy(&self, x: f64, c: &Controls) -> f64 {
        let v = &c.values;
        match c.family {
            Family::DoubleWell => {
                let x2 = x * x;
                v[0] * x2 * x2 - v[1] * x2 + v[2] * x
            }
            Family::PartitionedBox => {
                let half = 0.5 * v[0];
                let u = (x - half) / half;
                let u2 = u * u;
                let u4 = u2 * u2;
                let wall = v[1] * u4 * u4 * u4;
                wall + gaussian_bump(x, v[2], v[3], v[4])
            }
            Family::Staircase => {
                let (dmu, ell, kappa) = (v[0], v[1], v[2]);
                let amp = kappa * ell * ell / (4.0 * PI * PI);
                let center = (v[3] - 0.5) * ell;
                dmu * x / ell + amp * (1.0 - (2.0 * PI * x / ell).cos()) + gaussian_bump(x, center, v[4], v[5])
            }
            Family::HarmonicWell => {
                let d = x - v[1];
                0.5 * v[0] * d * d
            }
        }
    }

    /// `∂V/∂x`, unchecked.
    #[inline]
    pub fn slope(&self, x: f64, c: &Controls) -> f64 {
        let v = &c.values;
        match c.family {
            Family::DoubleWell => 4.0 * v[0] * x * x * x - 2.0 * v[1] * x + v[2],
            Family::PartitionedBox => {
                let half = 0.5 * v[0];
                let u = (x - half) / half;
                let u2 = u * u;
                let u5 = u2 * u2 * u;
                let u11 = u5 * u5 * u;
                12.0 * v[1] * u11 / half + bump_slope(x, v[2], v[3], v[4])
            }
            Family::Staircase => {
                let (dmu, ell, kappa) = (v[0], v[1], v[2]);
                let amp = kappa * ell * ell / (4.0 * PI * PI);
                let k = 2.0 * PI / ell;
                let center = (v[3] - 0.5) * ell;
                dmu / ell + amp * k * (k * x).sin() + bump_slope(x, center, v[4], v[5])
            }
            Family::HarmonicWell => v[0] * (x - v[1]),
        }
    }

    /// `−∂V/∂x`, unchecked.
    #[inline]
    pub fn force(&self, x: f64, c: &Controls) -> f64 {
        -self.slope(x, c)
    }

    /// `∂²V/∂x²`, unchecked.
    pub fn curvature(&self, x: f64, c: &Controls) -> f64 {
        let v = &c.values;
        match c.family {
            Family::DoubleWell => 12.0 * v[0] * x * x - 2.0 * v[1],
            Family::PartitionedBox => {
                let half = 0.5 * v[0];
                let u = (x - half) / half;
                let u2 = u * u;
                let u10 = u2 * u2 * u2 * u2 * u2;
                132.0 * v[1] * u10 / (half * half) + bump_curvature(x, v[2], v[3], v[4])
            }
            Family::Staircase => {
                let (_, ell, kappa) = (v[0], v[1], v[2]);
                let amp = kappa * ell * ell / (4.0 * PI * PI);
                let k = 2.0 * PI / ell;
                let center = (v[3] - 0.5) * ell;
                amp * k * k * (k * x).cos() + bump_curvature(x, center, v[4], v[5])
            }
            Family::HarmonicWell => v[0],
        }
    }

    /// `∂V/∂λ_i` at fixed `x`, unchecked.
    pub fn param_derivative(&self, x: f64, c: &Controls, index: usize) -> f64 {
        let v = &c.values;
        match (c.family, index) {
            (Family::DoubleWell, 0) => x.powi(4),
            (Family::DoubleWell, 1) => -x * x,
            (Family::DoubleWell, 2) => x,
            (Family::PartitionedBox, 0) => {
                let (len, kappa) = (v[0], v[1]);
                let u = 2.0 * x / len - 1.0;
                12.0 * kappa * u.powi(11) * (-2.0 * x / (len * len))
            }
            (Family::PartitionedBox, 1) => {
                let half = 0.5 * v[0];
                ((x - half) / half).powi(12)
            }
            (Family::PartitionedBox, 2) => -bump_slope(x, v[2], v[3], v[4]),
            (Family::PartitionedBox, 3) => gaussian_bump(x, v[2], 1.0, v[4]),
            (Family::PartitionedBox, 4) => {
                let d = x - v[2];
                gaussian_bump(x, v[2], v[3], v[4]) * d * d / v[4].powi(3)
            }
            (Family::PartitionedBox, 5) => 0.0,
            (Family::Staircase, i) => {
                let (dmu, ell, kappa, m) = (v[0], v[1], v[2], v[3]);
                let theta = 2.0 * PI * x / ell;
                let center = (m - 0.5) * ell;
                match i {
                    0 => x / ell,
                    1 => {
                        let amp = kappa * ell * ell / (4.0 * PI * PI);
                        let damp = kappa * ell / (2.0 * PI * PI);
                        -dmu * x / (ell * ell) + damp * (1.0 - theta.cos())
                            - amp * theta.sin() * 2.0 * PI * x / (ell * ell)
                            - bump_slope(x, center, v[4], v[5]) * (m - 0.5)
                    }
                    2 => ell * ell / (4.0 * PI * PI) * (1.0 - theta.cos()),
                    3 => -bump_slope(x, center, v[4], v[5]) * ell,
                    4 => gaussian_bump(x, center, 1.0, v[5]),
                    5 => {
                        let d = x - center;
                        gaussian_bump(x, center, v[4], v[5]) * d * d / v[5].powi(3)
                    }
                    _ => panic!("staircase has 6 parameters"),
                }
            }
            (Family::HarmonicWell, 0) => 0.5 * (x - v[1]).powi(2),
            (Family::HarmonicWell, 1) => -v[0] * (x - v[1]),
            (fam, i) => panic!("{fam} has no parameter index {i}"),
        }
    }
}

#[inline]
fn gaussian_bump(x: f64, center: f64, height: f64, width: f64) -> f64 {
    if height == 0.0 {
        return 0.0;
    }
    let d = (x - center) / width;
    height * (-0.5 * d * d).exp()
}

#[inline]
fn bump_slope(x: f64, center: f64, height: f64, width: f64) -> f64 {
    if height == 0.0 {
        return 0.0;
    }
    -gaussian_bump(x, center, height, width) * (x - center) / (width * width)
}

#[inline]
fn bump_curvature(x: f64, center: f64, height: f64, width: f64) -> f64 {
    if height == 0.0 {
        return 0.0;
    }
    let w2 = width * width;
    let d = x - center;
    gaussian_bump(x, center, height, width) * (d * d / (w2 * w2) - 1.0 / w2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dw(a: f64, b: f64, f: f64) -> (PotentialField, Controls) {
        let c = Controls::double_well(a, b, f);
        (PotentialField::new(c, Domain::new(-3.0, 3.0).unwrap()).unwrap(), c)
    }

    fn sample_box() -> (PotentialField, Controls) {
        let c = Controls::partitioned_box(4.0, 1.0, 2.0, 5.0, 0.2, 0.3);
        (PotentialField::new(c, Domain::new(-0.5, 4.5).unwrap()).unwrap(), c)
    }

    #[test]
    fn pure_quartic() {
        let (field, c) = dw(1.0, 0.0, 0.0);
        assert_eq!(field.evaluate(1.0, &c).unwrap(), 1.0);
    }

    #[test]
    fn double_well_minima() {
        let (field, c) = dw(1.0, 2.0, 0.0);
        assert_eq!(field.evaluate(0.0, &c).unwrap(), 0.0);
        assert_eq!(field.evaluate(1.0, &c).unwrap(), -1.0);
        assert_eq!(field.evaluate(-1.0, &c).unwrap(), -1.0);
        assert_eq!(field.gradient(1.0, &c).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_force() {
        let c = Controls::harmonic(1.0, 0.0);
        let field = PotentialField::new(c, Domain::new(-5.0, 5.0).unwrap()).unwrap();
        assert_eq!(field.gradient(0.5, &c).unwrap(), -0.5);
    }

    #[test]
    fn partition_apex_sits_barrier_above_floor() {
        let (field, c) = sample_box();
        let apex = field.evaluate(2.0, &c).unwrap();
        // the wall term vanishes at the box center
        let floor = field.evaluate(2.0, &c.with("barrier", 0.0).unwrap()).unwrap();
        assert!((apex - floor - 5.0).abs() < 1e-12);
        assert_eq!(floor, 0.0);
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let (field, c) = dw(1.0, 2.0, 0.0);
        assert!(matches!(field.evaluate(3.5, &c), Err(LandscapeError::OutOfDomain { .. })));
        assert!(field.gradient(-3.01, &c).is_err());
    }

    #[test]
    fn family_mismatch_is_rejected() {
        let (field, _) = dw(1.0, 2.0, 0.0);
        let h = Controls::harmonic(1.0, 0.0);
        assert!(matches!(field.evaluate(0.0, &h), Err(LandscapeError::FamilyMismatch { .. })));
    }

    #[test]
    fn negative_barrier_is_invalid() {
        let c = Controls::double_well(1.0, -0.5, 0.0);
        assert!(c.validate().is_err());
        let b = Controls::partitioned_box(4.0, 1.0, 2.0, -1.0, 0.2, 0.0);
        assert!(b.validate().is_err());
    }

    #[test]
    fn work_increment_examples() {
        let (field, c) = dw(1.0, 0.0, 1.0);
        assert_eq!(field.parameter_work_increment(0.3, &c, &c).unwrap(), 0.0);
        let after = c.with("f", 2.0).unwrap();
        let dw = field.parameter_work_increment(0.5, &c, &after).unwrap();
        assert!((dw - 0.5).abs() < 1e-15);
    }

    #[test]
    fn raising_distant_partition_costs_nothing() {
        let (field, c) = sample_box();
        let lowered = c.with("barrier", 0.0).unwrap();
        // 1.5 box units away is 7.5 widths from the partition
        let w = field.parameter_work_increment(0.5, &lowered, &c).unwrap();
        assert!(w.abs() < 1e-6, "{w}");
        assert!(w >= 0.0);
    }

    #[test]
    fn untilted_double_well_is_even() {
        let (field, c) = dw(1.3, 2.7, 0.0);
        for i in 0..200 {
            let x = -3.0 + 0.03 * i as f64;
            assert_eq!(field.energy(x, &c), field.energy(-x, &c));
        }
    }

    fn fd_slope(field: &PotentialField, x: f64, c: &Controls) -> f64 {
        let h = 1e-6;
        (field.energy(x + h, c) - field.energy(x - h, c)) / (2.0 * h)
    }

    fn fd_param(field: &PotentialField, x: f64, c: &Controls, i: usize) -> f64 {
        let h = 1e-6 * c.get(i).abs().max(1.0);
        let mut up = *c;
        let mut dn = *c;
        up.set(i, c.get(i) + h);
        dn.set(i, c.get(i) - h);
        (field.energy(x, &up) - field.energy(x, &dn)) / (2.0 * h)
    }

    fn arbitrary_field() -> impl Strategy<Value = (PotentialField, Controls, f64)> {
        prop_oneof![
            (0.2..3.0f64, 0.0..6.0f64, -2.0..2.0f64, -1.0..1.0f64).prop_map(|(a, b, f, u)| {
                let c = Controls::double_well(a, b, f);
                let field = PotentialField::new(c, Domain::new(-2.0, 2.0).unwrap()).unwrap();
                (field, c, 2.0 * u)
            }),
            (1.0..6.0f64, 0.2..0.8f64, 0.0..8.0f64, 0.1..0.4f64, 0.0..1.0f64).prop_map(
                |(len, xp_frac, barrier, width, u)| {
                    let c = Controls::partitioned_box(len, 1.0, xp_frac * len, barrier, width, 0.1);
                    let d = Domain::new(0.0, len).unwrap();
                    (PotentialField::new(c, d).unwrap(), c, u * len)
                }
            ),
            (0.5..3.0f64, 0.5..2.0f64, 5.0..60.0f64, -2.0..4.0f64, 0.0..6.0f64, 0.0..1.0f64).prop_map(
                |(dmu, ell, kappa, m, bh, u)| {
                    let c = Controls::staircase(dmu, ell, kappa, m.round(), bh, 0.15 * ell);
                    let d = Domain::new(-3.0 * ell, 6.0 * ell).unwrap();
                    (PotentialField::new(c, d).unwrap(), c, -3.0 * ell + 9.0 * ell * u)
                }
            ),
            (0.1..5.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(k, c0, u)| {
                let c = Controls::harmonic(k, c0);
                (PotentialField::new(c, Domain::new(-4.0, 4.0).unwrap()).unwrap(), c, 4.0 * u)
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn force_matches_finite_difference((field, c, x) in arbitrary_field()) {
            let fd = fd_slope(&field, x, &c);
            let force = field.gradient(x, &c).unwrap();
            prop_assert!((force + fd).abs() / (1.0 + fd.abs()) < 1e-6,
                "x={x} force={force} fd={fd} c={c:?}");
        }

        #[test]
        fn param_derivative_matches_finite_difference((field, c, x) in arbitrary_field()) {
            for i in 0..c.len() {
                let fd = fd_param(&field, x, &c, i);
                let an = field.param_derivative(x, &c, i);
                prop_assert!(an.is_finite());
                prop_assert!((an - fd).abs() / (1.0 + fd.abs()) < 1e-5,
                    "param {i} at x={x}: analytic {an}, fd {fd}, c={c:?}");
            }
        }

        #[test]
        fn curvature_matches_finite_difference((field, c, x) in arbitrary_field()) {
            let h = 1e-5;
            let fd = (field.slope(x + h, &c) - field.slope(x - h, &c)) / (2.0 * h);
            let an = field.curvature(x, &c);
            prop_assert!((an - fd).abs() / (1.0 + fd.abs()) < 1e-5);
        }
    }
}
