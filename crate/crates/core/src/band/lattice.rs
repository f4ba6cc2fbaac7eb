use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// A cell `Q = {sum y_j a_j : y in [0, 1)^n}` with quasi-momentum `theta`.
///
/// Functions satisfy `u(x + a_j) = e^{2 pi i theta_j} u(x)`; the Fourier modes
/// are `exp(i A^T (theta - k) . x)` for `k` in `Z^n`, with `A = 2 pi S^{-1}`
/// and `S` the matrix whose columns are the `a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeCell {
    basis: DMatrix<f64>,
    dual: DMatrix<f64>,
    theta: Vec<f64>,
}

impl LatticeCell {
    /// `columns[j]` is the lattice vector `a_j`.
    pub fn new(columns: &[Vec<f64>], theta: &[f64]) -> Result<Self> {
        let n = columns.len();
        if n == 0 || columns.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidInput("lattice basis must be n vectors of length n".into()));
        }
        if theta.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: theta.len() });
        }
        if theta.iter().any(|t| !(0.0..1.0).contains(t)) {
            return Err(Error::InvalidInput("quasi-momentum must lie in [0, 1)^n".into()));
        }
        let basis = DMatrix::from_fn(n, n, |i, j| columns[j][i]);
        let det = basis.determinant();
        if det.abs() < 1e-12 {
            return Err(Error::InvalidInput("lattice basis is degenerate".into()));
        }
        let dual = basis.clone().try_inverse().ok_or_else(|| Error::Singular("lattice basis".into()))? * (2.0 * PI);
        Ok(Self { basis, dual, theta: theta.to_vec() })
    }

    /// The unit cube with the given quasi-momentum.
    pub fn unit(theta: &[f64]) -> Result<Self> {
        let n = theta.len();
        let cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::new(&cols, theta)
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn volume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    /// `|A^T (theta - k)|^2`, the Laplacian eigenvalue of mode `k` at `t = 1`.
    pub fn wave_number_sq(&self, k: &[i64]) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let v: f64 = (0..n).map(|j| self.dual[(j, i)] * (self.theta[j] - k[j] as f64)).sum();
                v * v
            })
            .sum()
    }

    fn min_dual_singular(&self) -> f64 {
        self.dual.clone().svd(false, false).singular_values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// All integer vectors with `max |k_j| <= radius`, lexicographic.
pub(crate) fn modes(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-radius..=radius).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out
}

/// The `count` lowest eigenvalues of `-Laplacian` on the cell, each repeated
/// `size` times for `C^size`-valued functions.
pub fn exact_laplacian_spectrum(cell: &LatticeCell, count: usize, size: usize) -> Vec<f64> {
    let n = cell.dim();
    let floor = cell.min_dual_singular().powi(2);
    let mut radius = 1;
    loop {
        let mut vals: Vec<f64> = modes(n, radius)
            .iter()
            .flat_map(|k| std::iter::repeat_n(cell.wave_number_sq(k), size.max(1)))
            .collect();
        vals.sort_by(f64::total_cmp);
        // modes outside the shell have |theta - k| >= radius
        let bound = floor * (radius as f64).powi(2);
        if vals.len() >= count && vals[count - 1] <= bound {
            vals.truncate(count);
            return vals;
        }
        radius += 1;
    }
}
