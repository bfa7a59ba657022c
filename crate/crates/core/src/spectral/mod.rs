//! One-dimensional Schrödinger double well on a uniform grid.
//!
//! `H = −(1/2m)∂² + V(x)` with the 3-point Laplacian and Dirichlet ends at
//! `±X`. The two lowest states of a symmetric well are even/odd
//! combinations of left- and right-localised states; their equal mixture
//! has entropy `ln 2` and is the same matrix whichever pair it is written
//! in. The tunnel splitting sets the left↔right inversion time `π/ΔE`.

mod presets;
mod tridiag;

pub use presets::{conversion_table, RegimePreset};
pub use tridiag::Tridiagonal;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;
use tridiag::dot;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid well spec: {0}")]
    InvalidSpec(String),
    #[error("grid too small: |ψ| = {edge:e} at the boundary of state {state}; try half-width X = {suggested}")]
    GridTooSmall { state: usize, edge: f64, suggested: f64 },
    #[error("eigen-solve inaccurate: residual {residual:e} for state {state}")]
    Inaccurate { state: usize, residual: f64 },
    #[error("splitting {splitting:e} is below the solver resolution {resolution:e}")]
    Unresolved { splitting: f64, resolution: f64 },
    #[error("time {name} = {value} must be > 0")]
    InvalidTime { name: &'static str, value: f64 },
}

impl SpectralError {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            SpectralError::GridTooSmall { .. } | SpectralError::Inaccurate { .. } | SpectralError::Unresolved { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, SpectralError>;

pub const MIN_GRID: usize = 256;
const EDGE_TOLERANCE: f64 = 1e-8;
const RESIDUAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WellPotential {
    /// `a x⁴ − b x² + f x`.
    DoubleWell { a: f64, b: f64, f: f64 },
    /// `(k/2) x²`.
    Harmonic { k: f64 },
}

impl WellPotential {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            WellPotential::DoubleWell { a, b, f } => {
                let x2 = x * x;
                a * x2 * x2 - b * x2 + f * x
            }
            WellPotential::Harmonic { k } => 0.5 * k * x * x,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match *self {
            WellPotential::DoubleWell { f, .. } => f == 0.0,
            WellPotential::Harmonic { .. } => true,
        }
    }

    /// Barrier `b²/4a` between the wells (zero for a single well).
    pub fn barrier_height(&self) -> f64 {
        match *self {
            WellPotential::DoubleWell { a, b, .. } if b > 0.0 => b * b / (4.0 * a),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub potential: WellPotential,
    pub mass: f64,
    pub half_width: f64,
    pub n_grid: usize,
    #[serde(default = "default_states")]
    pub n_states: usize,
}

fn default_states() -> usize {
    4
}

impl WellSpec {
    pub fn double_well(a: f64, b: f64, f: f64, mass: f64, half_width: f64, n_grid: usize) -> Self {
        Self { potential: WellPotential::DoubleWell { a, b, f }, mass, half_width, n_grid, n_states: default_states() }
    }

    pub fn harmonic(k: f64, mass: f64, half_width: f64, n_grid: usize) -> Self {
        Self { potential: WellPotential::Harmonic { k }, mass, half_width, n_grid, n_states: default_states() }
    }

    pub fn with_states(mut self, n: usize) -> Self {
        self.n_states = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SpectralError::InvalidSpec(m));
        match self.potential {
            WellPotential::DoubleWell { a, b, f } => {
                if !(a.is_finite() && a > 0.0) {
                    return bad(format!("quartic coefficient a must be > 0, got {a}"));
                }
                if !b.is_finite() || !f.is_finite() {
                    return bad("b and f must be finite".into());
                }
            }
            WellPotential::Harmonic { k } => {
                if !(k.is_finite() && k > 0.0) {
                    return bad(format!("stiffness k must be > 0, got {k}"));
                }
            }
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return bad(format!("mass must be > 0, got {}", self.mass));
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return bad(format!("half-width must be > 0, got {}", self.half_width));
        }
        if self.n_grid < MIN_GRID {
            return bad(format!("n_grid must be >= {MIN_GRID}, got {}", self.n_grid));
        }
        if self.n_states < 2 || self.n_states > self.n_grid / 2 {
            return bad(format!("n_states must be in 2..={}, got {}", self.n_grid / 2, self.n_states));
        }
        Ok(())
    }

    /// Interior grid `x_i = −X + (i+1)h`, `h = 2X/(n+1)`; mirror symmetric.
    pub fn grid(&self) -> (Vec<f64>, f64) {
        let n = self.n_grid;
        let h = 2.0 * self.half_width / (n + 1) as f64;
        let xs = (0..n)
            .map(|i| {
                let j = i as f64 - 0.5 * (n - 1) as f64;
                j * h
            })
            .collect();
        (xs, h)
    }

    fn hamiltonian(&self, xs: &[f64], h: f64) -> Tridiagonal {
        let k = 1.0 / (2.0 * self.mass * h * h);
        let diag = xs.iter().map(|&x| 2.0 * k + self.potential.value(x)).collect();
        Tridiagonal::new(diag, vec![-k; xs.len() - 1])
    }
}

/// Eigenpairs of a solved well. States are normalised so that
/// `Σ ψ_i² h = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellSpectrum {
    pub spec: WellSpec,
    pub x: Vec<f64>,
    pub h: f64,
    pub energies: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<Vec<f64>>,
    /// Largest residual `‖Hψ − Eψ‖/‖ψ‖` over the retained states.
    pub max_residual: f64,
    /// Absolute eigenvalue accuracy of the bisection.
    pub resolution: f64,
}

/// Lowest `spec.n_states` eigenpairs. For a symmetric potential on an even
/// grid the problem is split into even and odd halves, which keeps the
/// parity exact and resolves splittings far below the pair's energy.
pub fn solve(spec: &WellSpec) -> Result<WellSpectrum> {
    spec.validate()?;
    let (xs, h) = spec.grid();
    let full = spec.hamiltonian(&xs, h);
    let n = spec.n_grid;
    let k = spec.n_states;
    let (mut energies, mut states) =
        if spec.potential.is_symmetric() && n.is_multiple_of(2) { solve_by_parity(&full, k) } else { full.lowest(k) };
    sort_pairs(&mut energies, &mut states);
    // grid normalisation and sign convention: ψ₀ positive on average, each
    // later state positively correlated with x·ψ₀ or ψ₀
    let scale = 1.0 / h.sqrt();
    for s in &mut states {
        for v in s.iter_mut() {
            *v *= scale;
        }
    }
    if dot(&states[0], &vec![1.0; n]) < 0.0 {
        states[0].iter_mut().for_each(|v| *v = -*v);
    }
    let xpsi0: Vec<f64> = xs.iter().zip(&states[0]).map(|(x, p)| x * p).collect();
    for s in states.iter_mut().skip(1) {
        let c = dot(s, &xpsi0) + dot(s, &vec![1.0; n]) * 1e-3;
        if c < 0.0 {
            s.iter_mut().for_each(|v| *v = -*v);
        }
    }

    let resolution = 8.0 * f64::EPSILON * full.norm().max(1.0);
    let mut max_residual: f64 = 0.0;
    for (i, (e, s)) in energies.iter().zip(&states).enumerate() {
        let hs = full.apply(s);
        let r: f64 = hs.iter().zip(s).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
        let r = r / dot(s, s).sqrt();
        max_residual = max_residual.max(r);
        if !(r < RESIDUAL_TOLERANCE) {
            return Err(SpectralError::Inaccurate { state: i, residual: r });
        }
        let edge = s[0].abs().max(s[n - 1].abs());
        if edge >= EDGE_TOLERANCE {
            return Err(SpectralError::GridTooSmall { state: i, edge, suggested: 1.5 * spec.half_width });
        }
    }
    Ok(WellSpectrum { spec: *spec, x: xs, h, energies, states, max_residual, resolution })
}

fn sort_pairs(energies: &mut Vec<f64>, states: &mut Vec<Vec<f64>>) {
    let mut idx: Vec<usize> = (0..energies.len()).collect();
    idx.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    *energies = idx.iter().map(|&i| energies[i]).collect();
    *states = idx.iter().map(|&i| states[i].clone()).collect();
}

/// Even states satisfy `ψ_{m−1} = ψ_m` across the centre, odd ones
/// `ψ_{m−1} = −ψ_m`, so each half-grid block is the right half of `H` with
/// its first diagonal entry shifted by `∓` the hopping.
fn solve_by_parity(full: &Tridiagonal, k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = full.len();
    let m = n / 2;
    let hop = full.off[0];
    let block = |sign: f64| {
        let mut diag = full.diag[m..].to_vec();
        diag[0] += sign * hop;
        Tridiagonal::new(diag, full.off[m..].to_vec())
    };
    let even_count = k.div_ceil(2);
    let odd_count = k / 2;
    let (ev, evec) = block(1.0).lowest(even_count);
    let (ov, ovec) = block(-1.0).lowest(odd_count);
    let mirror = |half: &[f64], sign: f64| -> Vec<f64> {
        let mut v = Vec::with_capacity(n);
        v.extend(half.iter().rev().map(|x| sign * x));
        v.extend_from_slice(half);
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        v
    };
    let mut energies = Vec::with_capacity(k);
    let mut states = Vec::with_capacity(k);
    for (e, v) in ev.iter().zip(&evec) {
        energies.push(*e);
        states.push(mirror(v, 1.0));
    }
    for (e, v) in ov.iter().zip(&ovec) {
        energies.push(*e);
        states.push(mirror(v, -1.0));
    }
    (energies, states)
}

impl WellSpectrum {
    pub fn splitting(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }

    /// `⟨φ|χ⟩` with the grid measure.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        dot(a, b) * self.h
    }

    pub fn mean_position(&self, psi: &[f64]) -> f64 {
        self.x.iter().zip(psi).map(|(x, p)| x * p * p).sum::<f64>() * self.h
    }

    /// Probability on `x < 0`.
    pub fn left_mass(&self, psi: &[f64]) -> f64 {
        self.x.iter().zip(psi).filter(|(x, _)| **x < 0.0).map(|(_, p)| p * p).sum::<f64>() * self.h
    }

    /// Largest `|⟨ψ_i|ψ_j⟩ − δ_ij|` over the retained states.
    pub fn orthonormality_error(&self) -> f64 {
        let k = self.states.len();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..=i {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.inner(&self.states[i], &self.states[j]) - target).abs());
            }
        }
        worst
    }

    /// `⟨Pψ|ψ⟩` with `P` the reflection `x → −x`.
    pub fn parity_overlap(&self, state: usize) -> f64 {
        let s = &self.states[state];
        let flipped: Vec<f64> = s.iter().rev().copied().collect();
        self.inner(&flipped, s)
    }

    /// `ψ_{L,R} = (ψ₀ ∓ ψ₁)/√2`, oriented so `ψ_L` has negative mean
    /// position.
    pub fn localized_states(&self) -> Result<LocalizedPair> {
        let gap = self.splitting();
        if !(gap > self.resolution) {
            return Err(SpectralError::Unresolved { splitting: gap, resolution: self.resolution });
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (p0, p1) = (&self.states[0], &self.states[1]);
        let mut left: Vec<f64> = p0.iter().zip(p1).map(|(a, b)| r * (a - b)).collect();
        let mut right: Vec<f64> = p0.iter().zip(p1).map(|(a, b)| r * (a + b)).collect();
        if self.mean_position(&left) > self.mean_position(&right) {
            std::mem::swap(&mut left, &mut right);
        }
        Ok(LocalizedPair {
            left_mean: self.mean_position(&left),
            right_mean: self.mean_position(&right),
            left_mass: self.left_mass(&left),
            right_mass: 1.0 - self.left_mass(&right),
            left,
            right,
        })
    }

    /// Equal mixture of the two lowest eigenstates.
    pub fn equilibrium_state(&self) -> Result<EquilibriumState> {
        let pair = self.localized_states()?;
        let (p0, p1) = (&self.states[0], &self.states[1]);
        // the two-level density matrix in the {ψ₀, ψ₁} basis, computed from
        // the grid vectors rather than written down
        let basis = [p0, p1];
        let mut rho = [[0.0; 2]; 2];
        for (a, ba) in basis.iter().enumerate() {
            for (b, bb) in basis.iter().enumerate() {
                rho[a][b] = 0.5 * (self.inner(ba, p0) * self.inner(p0, bb) + self.inner(ba, p1) * self.inner(p1, bb));
            }
        }
        let entropy = entropy_2x2(rho);
        // max |½(ψ₀ψ₀ᵀ + ψ₁ψ₁ᵀ) − ½(ψ_Lψ_Lᵀ + ψ_Rψ_Rᵀ)| over the grid, in the
        // normalised (density) representation
        let n = p0.len();
        let mut diff: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let eig = p0[i] * p0[j] + p1[i] * p1[j];
                let loc = pair.left[i] * pair.left[j] + pair.right[i] * pair.right[j];
                diff = diff.max((0.5 * self.h * (eig - loc)).abs());
            }
        }
        Ok(EquilibriumState { rho, entropy, decomposition_gap: diff })
    }

    pub fn inversion_time(&self) -> InversionTime {
        let gap = self.splitting();
        if gap > self.resolution {
            InversionTime::Resolved(PI / gap)
        } else {
            InversionTime::AtLeast(PI / self.resolution)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedPair {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub left_mean: f64,
    pub right_mean: f64,
    /// Probability of `ψ_L` on `x < 0`.
    pub left_mass: f64,
    /// Probability of `ψ_R` on `x > 0`.
    pub right_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumState {
    pub rho: [[f64; 2]; 2],
    pub entropy: f64,
    /// Max entry of the difference between the eigenstate and localized
    /// decompositions of the mixture.
    pub decomposition_gap: f64,
}

/// Von Neumann entropy `−Σ p ln p` of a probability vector.
pub fn entropy_of_weights(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

fn entropy_2x2(rho: [[f64; 2]; 2]) -> f64 {
    let tr = rho[0][0] + rho[1][1];
    let det = rho[0][0] * rho[1][1] - rho[0][1] * rho[1][0];
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    entropy_of_weights(&[0.5 * tr + disc, 0.5 * tr - disc])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum InversionTime {
    Resolved(f64),
    /// Splitting below resolution: only `τ_inv > π/ΔE_resolution` is known.
    AtLeast(f64),
}

impl InversionTime {
    pub fn value(&self) -> f64 {
        match *self {
            InversionTime::Resolved(t) | InversionTime::AtLeast(t) => t,
        }
    }
}

/// `τ_inv = π/ΔE`, the half period of the left↔right oscillation.
pub fn inversion_time(splitting: f64) -> Result<f64> {
    if !(splitting > 0.0 && splitting.is_finite()) {
        return Err(SpectralError::Unresolved { splitting, resolution: 0.0 });
    }
    Ok(PI / splitting)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    /// States interconvert fast: the mixture's entropy is thermodynamic.
    ThermodynamicEntropy,
    /// States persist: the mixture's entropy is information.
    InformationEntropy,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityThresholds {
    /// `min(τ_inv, τ_relax)/τ_obs` below this is "much shorter".
    pub fast: f64,
    /// `τ_inv/τ_obs` above this is "much longer".
    pub slow: f64,
}

impl Default for StabilityThresholds {
    fn default() -> Self {
        Self { fast: 1e-3, slow: 1e3 }
    }
}

/// Classifies a two-state ensemble by how its states' lifetimes compare
/// with the observation time. Fast interconversion wins when both tests
/// pass.
pub fn classify_stability(
    tau_inv: f64,
    tau_relax: f64,
    tau_obs: f64,
    thresholds: StabilityThresholds,
) -> Result<Stability> {
    for (name, value) in [("tau_inv", tau_inv), ("tau_relax", tau_relax), ("tau_obs", tau_obs)] {
        if !(value > 0.0) {
            return Err(SpectralError::InvalidTime { name, value });
        }
    }
    if tau_inv.min(tau_relax) / tau_obs < thresholds.fast {
        Ok(Stability::ThermodynamicEntropy)
    } else if tau_inv / tau_obs > thresholds.slow {
        Ok(Stability::InformationEntropy)
    } else {
        Ok(Stability::Ambiguous)
    }
}
