//! Oscillator density matrices in a truncated number basis and the Uhlmann
//! fidelity between them.
//!
//! Displacements are real, so every state here is a real symmetric matrix.
//! Position convention: `x = (a + a†)/√2`, so a coherent state `|α⟩` sits at
//! `x = √2·Re α` and the pointer at `±D` has `α = ±D/√2`.

use super::{Result, SwitchError};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub const DEFAULT_TRUNCATION_CAP: usize = 512;
const START_DIM: usize = 32;
/// Population allowed in the top tenth of the levels.
pub const TAIL_TOLERANCE: f64 = 1e-8;
const TRACE_TOLERANCE: f64 = 1e-10;
const PSD_TOLERANCE: f64 = 1e-12;
/// Thermal weights below this are dropped from the mixture.
const WEIGHT_FLOOR: f64 = 1e-20;
/// Eigenvalues of `ρ₁` below this fraction of the largest are treated as
/// exact zeros when forming `√ρ₁`.
const RANK_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct NumberBasisState {
    rho: DMatrix<f64>,
}

impl NumberBasisState {
    /// Wraps a matrix after checking symmetry, trace and positivity.
    pub fn new(rho: DMatrix<f64>) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(SwitchError::Validation("matrix must be square and non-empty".into()));
        }
        let asym = (&rho - rho.transpose()).abs().max();
        if asym > 1e-12 {
            return Err(SwitchError::Validation(format!("matrix not symmetric (max |ρ − ρᵀ| = {asym:e})")));
        }
        let trace = rho.trace();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(SwitchError::Validation(format!("trace {trace} differs from 1")));
        }
        let min_eig = SymmetricEigen::new(rho.clone()).eigenvalues.min();
        if min_eig < -PSD_TOLERANCE {
            return Err(SwitchError::Validation(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { rho })
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace()
    }

    /// Population of the top 10% of levels.
    pub fn tail_population(&self) -> f64 {
        let m = self.dim();
        let start = m - (m / 10).max(1);
        (start..m).map(|n| self.rho[(n, n)]).sum()
    }

    /// `Tr(ρ x)` with `x = (a + a†)/√2`.
    pub fn mean_position(&self) -> f64 {
        let m = self.dim();
        let s: f64 = (0..m - 1).map(|n| ((n + 1) as f64).sqrt() * (self.rho[(n, n + 1)] + self.rho[(n + 1, n)])).sum();
        s / std::f64::consts::SQRT_2
    }

    /// Zero-pads to dimension `m >= self.dim()`.
    pub fn padded(&self, m: usize) -> Self {
        assert!(m >= self.dim());
        let mut rho = DMatrix::zeros(m, m);
        rho.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.rho);
        Self { rho }
    }
}

/// Amplitudes of the displaced number states `D(α)|k⟩`, `k = 0..count`, in
/// the first `m` levels. Built from `D(α)|k⟩ = (a† − α)D(α)|k−1⟩/√k`; since
/// `a†` only raises, every retained component is exact despite the cut.
fn displaced_number_states(alpha: f64, m: usize, count: usize) -> Vec<DVector<f64>> {
    let mut coherent = DVector::zeros(m);
    coherent[0] = (-0.5 * alpha * alpha).exp();
    for n in 1..m {
        coherent[n] = coherent[n - 1] * alpha / (n as f64).sqrt();
    }
    let mut out = Vec::with_capacity(count);
    out.push(coherent);
    for k in 1..count {
        let prev = &out[k - 1];
        let mut next = DVector::zeros(m);
        for n in 0..m {
            let raised = if n > 0 { (n as f64).sqrt() * prev[n - 1] } else { 0.0 };
            next[n] = (raised - alpha * prev[n]) / (k as f64).sqrt();
        }
        out.push(next);
    }
    out
}

fn build_state(d_signed: f64, nbar: f64, m: usize) -> DMatrix<f64> {
    let alpha = d_signed / std::f64::consts::SQRT_2;
    // p_k = n̄^k / (1 + n̄)^{k+1}
    let ratio = nbar / (1.0 + nbar);
    let mut weights = vec![1.0 / (1.0 + nbar)];
    while weights.len() < m && nbar > 0.0 {
        let next = weights[weights.len() - 1] * ratio;
        if next < WEIGHT_FLOOR {
            break;
        }
        weights.push(next);
    }
    let states = displaced_number_states(alpha, m, weights.len());
    let mut rho = DMatrix::zeros(m, m);
    for (p, psi) in weights.iter().zip(&states) {
        rho.ger(*p, psi, psi, 1.0);
    }
    rho
}

/// Thermal state with occupation `nbar` displaced to position `d_signed`.
/// The truncation starts at `max(m, 32)` and doubles until the top tenth of
/// the levels holds less than `1e-8` and the trace is within `1e-10` of one.
pub fn displaced_thermal_state(d_signed: f64, nbar: f64, m: usize, cap: usize) -> Result<NumberBasisState> {
    if !d_signed.is_finite() {
        return Err(SwitchError::Domain { name: "D", value: d_signed, reason: "must be finite" });
    }
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(SwitchError::Domain { name: "nbar", value: nbar, reason: "must be >= 0" });
    }
    let mut dim = m.max(START_DIM).min(cap.max(1));
    loop {
        let rho = build_state(d_signed, nbar, dim);
        let state = NumberBasisState { rho };
        let tail = state.tail_population();
        if tail < TAIL_TOLERANCE && (state.trace() - 1.0).abs() <= TRACE_TOLERANCE {
            return Ok(state);
        }
        if dim >= cap {
            return Err(SwitchError::TruncationOverflow { dim, cap, tail });
        }
        dim = (dim * 2).min(cap);
    }
}

/// Uhlmann fidelity `(Tr √(√ρ₁ ρ₂ √ρ₁))²`.
///
/// `ρ₁` is diagonalised and `√ρ₁` restricted to its numerically nonzero
/// eigenvectors, so the inner matrix is only as large as the rank of `ρ₁`.
/// That keeps near-pure states from feeding rounding noise of size
/// `√(1e-16)` into the result.
pub fn fidelity_oracle(rho1: &NumberBasisState, rho2: &NumberBasisState) -> Result<f64> {
    let m = rho1.dim().max(rho2.dim());
    let (r1, r2) = (rho1.padded(m), rho2.padded(m));
    let e1 = SymmetricEigen::new(r1.rho.clone());
    let e2_min = SymmetricEigen::new(r2.rho.clone()).eigenvalues.min();
    let lmax = e1.eigenvalues.max();
    if e1.eigenvalues.min() < -PSD_TOLERANCE || e2_min < -PSD_TOLERANCE {
        return Err(SwitchError::Validation("input is not positive semidefinite".into()));
    }
    let keep: Vec<usize> = (0..m).filter(|&i| e1.eigenvalues[i] > RANK_CUTOFF * lmax).collect();
    let mut s = DMatrix::zeros(m, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        s.set_column(j, &(e1.eigenvectors.column(i) * e1.eigenvalues[i].sqrt()));
    }
    let inner = s.transpose() * &r2.rho * &s;
    let inner = 0.5 * (&inner + inner.transpose());
    let root_sum: f64 = SymmetricEigen::new(inner).eigenvalues.iter().map(|&mu| mu.max(0.0).sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}
