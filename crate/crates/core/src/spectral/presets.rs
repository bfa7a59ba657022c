//! Illustrative reduced-unit wells standing in for a fast-tunnelling and a
//! frozen chiral molecule. The physical inversion and observation times
//! are classifier inputs only; the solver is not claimed to reproduce them.

use super::WellSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimePreset {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: WellSpec,
    /// Quoted inversion time in seconds.
    pub tau_inv_s: f64,
    /// Typical collisional relaxation time in seconds.
    pub tau_relax_s: f64,
    /// Observation time in seconds.
    pub tau_obs_s: f64,
}

const YEAR_S: f64 = 3.156e7;

pub fn conversion_table() -> Vec<RegimePreset> {
    vec![
        RegimePreset {
            name: "ammonia_like",
            description: "light particle, low barrier: splitting large, states mix quickly",
            spec: WellSpec::double_well(1.0, 3.0, 0.0, 1.0, 4.5, 1200),
            tau_inv_s: 1e-10,
            tau_relax_s: 1e-9,
            tau_obs_s: 1.0,
        },
        RegimePreset {
            name: "alanine_like",
            description: "heavy particle, high barrier: splitting unresolvable, states persist",
            spec: WellSpec::double_well(1.0, 12.0, 0.0, 40.0, 5.0, 2400),
            tau_inv_s: 1e29 * YEAR_S,
            tau_relax_s: 1e29 * YEAR_S,
            tau_obs_s: YEAR_S,
        },
    ]
}
