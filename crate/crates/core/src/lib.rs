//! Stochastic-thermodynamics laboratory.
//!
//! The crate simulates overdamped Brownian particles in driven one-dimensional
//! potentials with exact work/heat bookkeeping, runs the Szilard-engine,
//! bit-erasure and feedback-staircase protocols on top of that, and carries an
//! analytic model of the energetic cost of a bistable switch
//! (`ε = exp(-W/Θ)`, `W = Θ ln(1/ε)`, `τ = τ₀/ε`) together with a Fock-basis
//! fidelity oracle and a finite-difference double-well eigensolver.
//!
//! All quantities are in reduced units: `k_B = 1`, friction `γ = 1`,
//! `ħ = 1`, and energies are expressed in multiples of the bath temperature.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod experiments;
pub mod landscape;
pub mod selftest;
pub mod spectral;
pub mod stats;
pub mod switchmodel;

use thiserror::Error;

/// Crate-wide error, split by whether the caller handed us something invalid
/// or the numerics broke down on valid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Landscape(#[from] landscape::LandscapeError),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
    #[error(transparent)]
    Experiment(#[from] experiments::ExperimentError),
    #[error(transparent)]
    Switch(#[from] switchmodel::SwitchError),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
}

impl Error {
    /// `true` when the failure is a numerical breakdown (integration blowup,
    /// truncation overflow, unresolved grid) rather than a bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Landscape(_) => false,
            Error::Dynamics(e) => e.is_numerical(),
            Error::Experiment(e) => e.is_numerical(),
            Error::Switch(e) => e.is_numerical(),
            Error::Spectral(e) => e.is_numerical(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
