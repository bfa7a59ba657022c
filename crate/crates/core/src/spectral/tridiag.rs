//! Lowest eigenpairs of a real symmetric tridiagonal matrix.
//!
//! Eigenvalues come from Sturm-sequence bisection, which is accurate to a
//! few ulps of the matrix norm regardless of clustering. Eigenvectors come
//! from inverse iteration with a partially pivoted tridiagonal LU.

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i] = T[i, i+1]`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal must be one shorter");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin bounds on the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - lambda - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        let pad = f64::EPSILON * self.norm().max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `T·v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Unit eigenvector for `lambda`, orthogonalised against `previous`.
    pub fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.len();
        let lu = ShiftedLu::new(self, lambda);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * (0.7 * i as f64).sin()).collect();
        normalize(&mut v);
        for _ in 0..4 {
            lu.solve(&mut v);
            for p in previous {
                let d = dot(&v, p);
                for (a, b) in v.iter_mut().zip(p) {
                    *a -= d * b;
                }
            }
            normalize(&mut v);
        }
        v
    }

    /// Lowest `k` eigenpairs, ascending.
    pub fn lowest(&self, k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let k = k.min(self.len());
        let values: Vec<f64> = (0..k).map(|i| self.eigenvalue(i)).collect();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        for &lambda in &values {
            let v = self.eigenvector(lambda, &vectors);
            vectors.push(v);
        }
        (values, vectors)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    for x in v {
        *x /= n;
    }
}

/// LU of `T − λI` with partial pivoting; the upper factor gains a second
/// superdiagonal where rows were swapped.
struct ShiftedLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    l: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &Tridiagonal, lambda: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - lambda).collect();
        let mut du = t.off.clone();
        let mut l = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= l[i].abs() {
                if d[i] != 0.0 {
                    let fact = l[i] / d[i];
                    l[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / l[i];
                d[i] = l[i];
                l[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // exact singularity only happens when λ is an eigenvalue to the last
        // bit; nudge the pivot so the solve returns the eigenvector direction
        let floor = f64::EPSILON * t.norm().max(1.0);
        for p in &mut d {
            if p.abs() < floor {
                *p = if *p < 0.0 { -floor } else { floor };
            }
        }
        Self { d, du, du2, l, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.l[i] * b[i];
            } else {
                b[i + 1] -= self.l[i] * b[i];
            }
        }
        // rescale as we go so huge growth near an eigenvalue cannot overflow
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * b[i + 2];
            }
            b[i] = s / self.d[i];
            if !b[i].is_finite() || b[i].abs() > 1e150 {
                let scale = b[i..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let scale = if scale.is_finite() { scale } else { 1e150 };
                for x in &mut b[i..] {
                    *x = if x.is_finite() { *x / scale } else { x.signum() };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};

    fn sample(n: usize) -> Tridiagonal {
        let diag = (0..n).map(|i| ((i * 7 % 11) as f64) - 3.0).collect();
        let off = (0..n - 1).map(|i| 0.5 + ((i * 3 % 5) as f64) * 0.3).collect();
        Tridiagonal::new(diag, off)
    }

    #[test]
    fn matches_dense_solver() {
        let t = sample(40);
        let mut m = DMatrix::zeros(40, 40);
        for i in 0..40 {
            m[(i, i)] = t.diag[i];
            if i + 1 < 40 {
                m[(i, i + 1)] = t.off[i];
                m[(i + 1, i)] = t.off[i];
            }
        }
        let mut dense: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (vals, vecs) = t.lowest(6);
        for k in 0..6 {
            assert!((vals[k] - dense[k]).abs() < 1e-12, "{k}");
            let tv = t.apply(&vecs[k]);
            let res: f64 = tv.iter().zip(&vecs[k]).map(|(a, b)| (a - vals[k] * b).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-10);
            for j in 0..k {
                assert!(dot(&vecs[k], &vecs[j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sturm_count() {
        let t = Tridiagonal::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0]);
        assert_eq!(t.count_below(0.5), 0);
        assert_eq!(t.count_below(2.5), 2);
        assert_eq!(t.count_below(10.0), 3);
    }
}
