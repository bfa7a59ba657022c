use crate::stats::CompensatedSum;
use serde::{Deserialize, Serialize};

/// Relative first-law tolerance: `|ΔE − (W_in − W_out + Q)| ≤ tol·(|W_in| + |Q| + 1)`.
pub const CLOSURE_TOLERANCE: f64 = 1e-8;

/// Running stochastic-energetics account of one trajectory.
///
/// Sign conventions: `w_in` is work done by the controller on the system,
/// `w_out` work done by the system on an external load, `heat` energy taken
/// from the bath. Each increment is booked separately and the internal
/// energy is tracked independently, so the closure residual is a real check.
#[derive(Debug, Clone)]
pub struct EnergyLedger {
    initial_energy: f64,
    energy: f64,
    w_in: CompensatedSum,
    w_out: CompensatedSum,
    heat: CompensatedSum,
    max_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub energy: f64,
    pub w_in: f64,
    pub w_out: f64,
    pub heat: f64,
}

impl EnergyLedger {
    pub fn new(initial_energy: f64) -> Self {
        Self {
            initial_energy,
            energy: initial_energy,
            w_in: CompensatedSum::new(),
            w_out: CompensatedSum::new(),
            heat: CompensatedSum::new(),
            max_residual: 0.0,
        }
    }

    /// Controls changed at fixed configuration: `E` moves by `new − old` and
    /// the controller pays for it.
    #[inline]
    pub fn control(&mut self, e_before: f64, e_after: f64) {
        self.w_in.add(e_after - e_before);
        self.energy = e_after;
    }

    /// Configuration moved at fixed controls while exchanging `w_out` with a
    /// load; the rest of the energy change is heat.
    #[inline]
    pub fn relax(&mut self, e_before: f64, e_after: f64, w_out: f64) {
        if w_out != 0.0 {
            self.w_out.add(w_out);
        }
        self.heat.add(e_after - e_before + w_out);
        self.energy = e_after;
    }

    /// Charge work without moving `E` (e.g. a control toggle whose energy
    /// the system never sees). Booked as work in, dumped as heat.
    pub fn external_work(&mut self, w: f64) {
        self.w_in.add(w);
        self.heat.add(-w);
    }

    pub fn w_in(&self) -> f64 {
        self.w_in.value()
    }

    pub fn w_out(&self) -> f64 {
        self.w_out.value()
    }

    pub fn heat(&self) -> f64 {
        self.heat.value()
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn delta_energy(&self) -> f64 {
        self.energy - self.initial_energy
    }

    /// Absolute first-law residual.
    pub fn residual(&self) -> f64 {
        (self.delta_energy() - (self.w_in() - self.w_out() + self.heat())).abs()
    }

    /// Residual scaled by the tolerance denominator.
    pub fn relative_residual(&self) -> f64 {
        self.residual() / (self.w_in().abs() + self.heat().abs() + 1.0)
    }

    /// Records the current closure residual; returns `false` if the first
    /// law is violated beyond [`CLOSURE_TOLERANCE`].
    pub fn check(&mut self) -> bool {
        let r = self.relative_residual();
        self.max_residual = self.max_residual.max(r);
        r <= CLOSURE_TOLERANCE
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.max_residual.max(self.relative_residual())
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot { energy: self.energy, w_in: self.w_in(), w_out: self.w_out(), heat: self.heat() }
    }
}
