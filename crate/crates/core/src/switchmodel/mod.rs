//! Analytic cost model of a bistable switch.
//!
//! A bit is stored in one of two metastable pointer states. The probability
//! of reading the wrong state is `ε = exp(−W/Θ)`, where `W` is the barrier
//! (half the spin-flip energy) and `Θ` the effective noise energy of the
//! pointer oscillator. Inverting gives the reset cost `W = Θ ln(1/ε)`, and
//! the storage lifetime follows as `τ = τ₀/ε`.
//!
//! [`oscillator`] supplies the independent check: the overlap (Uhlmann
//! fidelity) of two displaced thermal oscillator states computed in a
//! truncated Fock basis.

pub mod oscillator;

pub use oscillator::{displaced_thermal_state, fidelity_oracle, NumberBasisState, DEFAULT_TRUNCATION_CAP};

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwitchError {
    #[error("{name} = {value} is outside its domain: {reason}")]
    Domain { name: &'static str, value: f64, reason: &'static str },
    #[error("Fock truncation needs more than {cap} levels (tail population {tail:e} at M = {dim})")]
    TruncationOverflow { dim: usize, cap: usize, tail: f64 },
    #[error("invalid density matrix: {0}")]
    Validation(String),
}

impl SwitchError {
    pub fn is_numerical(&self) -> bool {
        matches!(self, SwitchError::TruncationOverflow { .. })
    }
}

pub type Result<T> = std::result::Result<T, SwitchError>;

fn domain(name: &'static str, value: f64, reason: &'static str) -> SwitchError {
    SwitchError::Domain { name, value, reason }
}

// slack for round-trips that land a few ulps below the ε = ½ boundary
const BOUNDARY_SLACK: f64 = 1e-12;

/// Mean thermal energy of an oscillator, `(ω₀/2)·coth(ω₀/2T)`; equals the
/// zero-point energy `ω₀/2` at `T = 0` and approaches `T` when `T ≫ ω₀`.
pub fn theta(temperature: f64, omega0: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.5 * omega0;
    }
    0.5 * omega0 / (0.5 * omega0 / temperature).tanh()
}

/// Bose–Einstein occupation `1/(e^{ω₀/T} − 1)`, zero at `T = 0`.
pub fn mean_occupation(temperature: f64, omega0: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (omega0 / temperature).exp_m1()
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(domain("theta", theta, "must be finite and > 0"));
    }
    Ok(())
}

/// `ε = exp(−W/Θ)`, defined for `W ≥ Θ ln 2`.
pub fn error_probability(w: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if !(w.is_finite() && w >= theta * LN_2 * (1.0 - BOUNDARY_SLACK)) {
        return Err(domain("W", w, "barrier too low to define a bit (needs W >= Θ ln 2)"));
    }
    Ok((-w / theta).exp().min(0.5))
}

/// `W = Θ ln(1/ε)`, defined for `ε ∈ (0, ½]`.
pub fn reset_work(epsilon: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if !(epsilon > 0.0 && epsilon <= 0.5 * (1.0 + BOUNDARY_SLACK)) {
        return Err(domain("epsilon", epsilon, "must lie in (0, 1/2]"));
    }
    Ok(-theta * epsilon.min(0.5).ln())
}

/// `τ = τ₀/ε = τ₀·exp(W/Θ)`.
pub fn lifetime(w: f64, theta: f64, tau0: f64) -> Result<f64> {
    if !(tau0.is_finite() && tau0 > 0.0) {
        return Err(domain("tau0", tau0, "must be finite and > 0"));
    }
    Ok(tau0 / error_probability(w, theta)?)
}

/// Per-gate cost `Θ ln N` that keeps the accumulated error of `N` gate
/// events of order one.
pub fn gate_cost(n: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if !(n >= 2.0) || !n.is_finite() {
        return Err(domain("N", n, "computation volume must be >= 2"));
    }
    Ok(theta * n.ln())
}

/// Half the energy needed to flip the spin with the pointer sitting in one
/// metastable state: `(1/2)·(1/2)ω₀(2D)² = ω₀D²`.
pub fn effective_barrier(d: f64, omega0: f64) -> f64 {
    omega0 * d * d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchParams {
    pub temperature: f64,
    pub omega0: f64,
    pub d: f64,
    pub tau0: f64,
}

impl SwitchParams {
    pub fn new(temperature: f64, omega0: f64, d: f64, tau0: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(domain("T", temperature, "must be >= 0"));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(domain("omega0", omega0, "must be > 0"));
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(domain("D", d, "must be >= 0"));
        }
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(domain("tau0", tau0, "must be > 0"));
        }
        Ok(Self { temperature, omega0, d, tau0 })
    }

    pub fn theta(&self) -> f64 {
        theta(self.temperature, self.omega0)
    }

    pub fn mean_occupation(&self) -> f64 {
        mean_occupation(self.temperature, self.omega0)
    }

    /// Relations with the barrier taken from the pointer displacement.
    pub fn relations(&self, n: f64) -> Result<SwitchRelations> {
        SwitchRelations::from_barrier(effective_barrier(self.d, self.omega0), self.theta(), self.tau0, n)
    }
}

/// `Θ, W, ε, τ` and the gate cost for volume `N`, mutually consistent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchRelations {
    pub theta: f64,
    pub w: f64,
    pub epsilon: f64,
    pub tau: f64,
    pub n: f64,
    pub w_gate: f64,
}

impl SwitchRelations {
    pub fn from_barrier(w: f64, theta: f64, tau0: f64, n: f64) -> Result<Self> {
        let epsilon = error_probability(w, theta)?;
        Ok(Self { theta, w, epsilon, tau: lifetime(w, theta, tau0)?, n, w_gate: gate_cost(n, theta)? })
    }

    pub fn from_epsilon(epsilon: f64, theta: f64, tau0: f64, n: f64) -> Result<Self> {
        let w = reset_work(epsilon, theta)?;
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(domain("tau0", tau0, "must be finite and > 0"));
        }
        Ok(Self { theta, w, epsilon, tau: tau0 / epsilon, n, w_gate: gate_cost(n, theta)? })
    }
}
