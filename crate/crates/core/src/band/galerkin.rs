use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::{modes, LatticeCell};
use crate::linalg;
use crate::{CMatrix, Error, Result, C64};

/// Fourier modes `k` with `max |k_j| <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTruncation {
    cutoff: usize,
    modes: Vec<Vec<i64>>,
}

impl FourierTruncation {
    pub fn new(dim: usize, cutoff: usize) -> Result<Self> {
        if cutoff == 0 || dim == 0 {
            return Err(Error::InvalidInput("cutoff and dimension must be positive".into()));
        }
        Ok(Self { cutoff, modes: modes(dim, cutoff as i64) })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> &[Vec<i64>] {
        &self.modes
    }

    /// The truncation with twice the cutoff.
    pub fn doubled(&self) -> Self {
        Self::new(self.modes[0].len(), 2 * self.cutoff).expect("positive cutoff")
    }
}

/// `V(x) = sum_q c_q exp(2 pi i q . y)`, where `x = S y` in cell coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotential {
    size: usize,
    coefficients: Vec<(Vec<i64>, CMatrix)>,
}

impl FourierPotential {
    /// Requires `c_{-q} = c_q^*` so that the values are Hermitian.
    pub fn new(coefficients: Vec<(Vec<i64>, CMatrix)>) -> Result<Self> {
        let Some((q0, c0)) = coefficients.first() else {
            return Err(Error::InvalidInput("at least one coefficient is required".into()));
        };
        let (n, m) = (q0.len(), c0.nrows());
        for (q, c) in &coefficients {
            if q.len() != n || c.shape() != (m, m) {
                return Err(Error::DimensionMismatch { expected: m, got: c.nrows() });
            }
            let neg: Vec<i64> = q.iter().map(|v| -v).collect();
            let partner = coefficients.iter().find(|(p, _)| *p == neg).map(|(_, c)| c);
            let residual = match partner {
                Some(p) => linalg::max_abs(&(p - c.adjoint())),
                None => linalg::max_abs(c),
            };
            if residual > 1e-12 * (1.0 + linalg::max_abs(c)) {
                return Err(Error::NotHermitian { residual });
            }
        }
        Ok(Self { size: m, coefficients })
    }

    /// Constant potential on an `n`-dimensional cell.
    pub fn constant(dim: usize, value: CMatrix) -> Result<Self> {
        Self::new(vec![(vec![0; dim], value)])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coefficients(&self) -> &[(Vec<i64>, CMatrix)] {
        &self.coefficients
    }

    /// `V` at the cell corner `x = 0`.
    pub fn at_origin(&self) -> CMatrix {
        self.coefficients
            .iter()
            .fold(CMatrix::zeros(self.size, self.size), |acc, (_, c)| acc + c)
    }
}

/// The family `L^t = -t^{-2} Laplacian + V(t x)` on a fixed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledFamily {
    pub cell: LatticeCell,
    pub potential: FourierPotential,
}

impl ScaledFamily {
    pub fn new(cell: LatticeCell, potential: FourierPotential) -> Result<Self> {
        if let Some((q, _)) = potential.coefficients().first() {
            if q.len() != cell.dim() {
                return Err(Error::DimensionMismatch { expected: cell.dim(), got: q.len() });
            }
        }
        Ok(Self { cell, potential })
    }
}

/// `int_0^1 exp(2 pi i p y) dy`.
fn mode_overlap(p: f64) -> C64 {
    if p.abs() < 1e-14 {
        return C64::new(1.0, 0.0);
    }
    let x = PI * p;
    C64::from_polar(x.sin() / x, x)
}

/// Galerkin matrix of `L^t` in the truncated Fourier basis: the kinetic part
/// is diagonal and the blocks of `V(t x)` are integrated in closed form.
pub fn galerkin_matrix(family: &ScaledFamily, t: f64, truncation: &FourierTruncation) -> Result<CMatrix> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("scale t = {t} must be positive")));
    }
    let m = family.potential.size();
    let ks = truncation.modes();
    if ks[0].len() != family.cell.dim() {
        return Err(Error::DimensionMismatch { expected: family.cell.dim(), got: ks[0].len() });
    }
    let dim = ks.len() * m;
    let mut out = CMatrix::zeros(dim, dim);
    let inv_t2 = 1.0 / (t * t);
    let integer_scale = (t - t.round()).abs() < 1e-15;
    for (a, ka) in ks.iter().enumerate() {
        let kinetic = inv_t2 * family.cell.wave_number_sq(ka);
        for i in 0..m {
            out[(a * m + i, a * m + i)] += kinetic;
        }
        for (b, kb) in ks.iter().enumerate() {
            let mut block = CMatrix::zeros(m, m);
            for (q, c) in family.potential.coefficients() {
                let weight = if integer_scale {
                    let hit = q.iter().zip(ka).zip(kb).all(|((qj, x), y)| (t.round() as i64) * qj + x - y == 0);
                    if hit { C64::new(1.0, 0.0) } else { continue }
                } else {
                    q.iter()
                        .zip(ka)
                        .zip(kb)
                        .map(|((qj, x), y)| mode_overlap(t * *qj as f64 + (x - y) as f64))
                        .product()
                };
                block += c * weight;
            }
            let mut target = out.view_mut((a * m, b * m), (m, m));
            target += &block;
        }
    }
    Ok((&out + out.adjoint()) * C64::new(0.5, 0.0))
}

/// Number of negative eigenvalues.
pub fn morse_index(matrix: &CMatrix) -> usize {
    linalg::hermitian_eigenvalues(matrix).iter().filter(|&&e| e < 0.0).count()
}

/// Morse index and lowest eigenvalues of `L^t` at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorseRow {
    pub t: f64,
    pub morse: usize,
    pub lowest: Vec<f64>,
}

/// Morse index along `t_grid`, checked against the truncation with twice the
/// cutoff.
pub fn morse_vs_t(family: &ScaledFamily, t_grid: &[f64], truncation: &FourierTruncation, lowest: usize) -> Result<Vec<MorseRow>> {
    let fine = truncation.doubled();
    t_grid
        .par_iter()
        .map(|&t| {
            let eig = linalg::hermitian_eigenvalues(&galerkin_matrix(family, t, truncation)?);
            let morse = eig.iter().filter(|&&e| e < 0.0).count();
            let fine_morse = morse_index(&galerkin_matrix(family, t, &fine)?);
            if fine_morse != morse {
                return Err(Error::TruncationNotConverged { t, coarse: morse, fine: fine_morse });
            }
            Ok(MorseRow { t, morse, lowest: eig.into_iter().take(lowest).collect() })
        })
        .collect()
}
