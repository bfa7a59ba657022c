use crate::landscape::{Controls, PotentialField};
use crate::stats::CompensatedSum;

/// Inverse-CDF sampler for the Boltzmann density `∝ exp(−V(x)/T)` on the
/// field's domain, tabulated on a uniform grid.
#[derive(Debug, Clone)]
pub struct BoltzmannSampler {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl BoltzmannSampler {
    pub const DEFAULT_GRID: usize = 16_384;

    pub fn new(field: &PotentialField, controls: &Controls, temperature: f64) -> Self {
        Self::restricted(field, controls, temperature, field.domain().lo, field.domain().hi)
    }

    /// Boltzmann density restricted to `[lo, hi]`.
    pub fn restricted(field: &PotentialField, controls: &Controls, temperature: f64, lo: f64, hi: f64) -> Self {
        assert!(temperature > 0.0, "Boltzmann sampling needs T > 0");
        let n = Self::DEFAULT_GRID;
        let h = (hi - lo) / n as f64;
        let xs: Vec<f64> = (0..=n).map(|i| lo + h * i as f64).collect();
        let energies: Vec<f64> = xs.iter().map(|&x| field.energy(x, controls)).collect();
        let vmin = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let dens: Vec<f64> = energies.iter().map(|v| (-(v - vmin) / temperature).exp()).collect();
        let mut cdf = Vec::with_capacity(n + 1);
        let mut acc = CompensatedSum::new();
        cdf.push(0.0);
        for i in 0..n {
            acc.add(0.5 * h * (dens[i] + dens[i + 1]));
            cdf.push(acc.value());
        }
        let total = acc.value();
        for c in &mut cdf {
            *c /= total;
        }
        Self { xs, cdf }
    }

    /// Maps `u ∈ [0, 1)` to a position.
    pub fn sample(&self, u: f64) -> f64 {
        let k = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        if c1 > c0 {
            x0 + (u - c0) / (c1 - c0) * (x1 - x0)
        } else {
            x0
        }
    }

    /// Probability mass with `x > threshold`.
    pub fn mass_above(&self, threshold: f64) -> f64 {
        let k = self.xs.partition_point(|&x| x <= threshold);
        if k == 0 {
            return 1.0;
        }
        if k >= self.xs.len() {
            return 0.0;
        }
        let frac = (threshold - self.xs[k - 1]) / (self.xs[k] - self.xs[k - 1]);
        let c = self.cdf[k - 1] + frac * (self.cdf[k] - self.cdf[k - 1]);
        1.0 - c
    }
}
