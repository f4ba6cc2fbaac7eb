use serde::{Deserialize, Serialize};

use crate::band::{FourierPotential, FourierTruncation, LatticeCell, ScaledFamily};
use crate::schrodinger::Potential1D;
use crate::{CMatrix, Error, Result, C64};

use super::square::{Family1D, SweepKind};

/// A complex matrix as separate real and imaginary row lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl ComplexMatrixSpec {
    pub fn real(rows: Vec<Vec<f64>>) -> Self {
        Self { re: rows, im: None }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        if n == 0 || self.re.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be square and non-empty".into()));
        }
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidInput("imaginary part must match the real part".into()));
            }
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTermSpec {
    /// Mode index; a single entry in one dimension.
    pub k: Vec<i64>,
    pub coefficient: ComplexMatrixSpec,
}

/// One-dimensional potential description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Constant { value: ComplexMatrixSpec },
    Diagonal { values: Vec<f64> },
    Fourier { terms: Vec<FourierTermSpec> },
    Table { x: Vec<f64>, values: Vec<ComplexMatrixSpec> },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential1D> {
        match self {
            PotentialSpec::Constant { value } => Potential1D::constant(value.to_matrix()?),
            PotentialSpec::Diagonal { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidInput("diagonal potential needs at least one entry".into()));
                }
                Ok(Potential1D::diagonal(values))
            }
            PotentialSpec::Fourier { terms } => {
                let modes = terms
                    .iter()
                    .map(|t| match t.k.as_slice() {
                        [k] => Ok((*k, t.coefficient.to_matrix()?)),
                        _ => Err(Error::InvalidInput("one-dimensional Fourier modes take a single index".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Potential1D::fourier(modes)
            }
            PotentialSpec::Table { x, values } => {
                Potential1D::table(x.clone(), values.iter().map(|v| v.to_matrix()).collect::<Result<_>>()?)
            }
        }
    }
}

/// A one-dimensional family of boundary conditions over `[alpha, beta]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub potential: PotentialSpec,
    pub alpha: f64,
    pub beta: f64,
    /// Explicit lower spectral bound; derived from the data when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_inf: Option<f64>,
}

impl FamilySpec {
    pub fn build(&self, kind: SweepKind) -> Result<Family1D> {
        let mut fam = Family1D::new(self.potential.build()?, kind, self.alpha, self.beta)?;
        if let Some(l) = self.lambda_inf {
            fam = fam.with_lambda_inf(l)?;
        }
        Ok(fam)
    }
}

/// A scaled periodic family on a lattice cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSpec {
    /// Lattice vectors `a_j`.
    pub basis: Vec<Vec<f64>>,
    pub theta: Vec<f64>,
    pub potential: Vec<FourierTermSpec>,
    pub tau: f64,
    pub cutoff: usize,
}

impl BandSpec {
    pub fn build(&self) -> Result<(ScaledFamily, FourierTruncation)> {
        let cell = LatticeCell::new(&self.basis, &self.theta)?;
        let coeffs = self
            .potential
            .iter()
            .map(|t| Ok((t.k.clone(), t.coefficient.to_matrix()?)))
            .collect::<Result<Vec<_>>>()?;
        let family = ScaledFamily::new(cell, FourierPotential::new(coeffs)?)?;
        if !(1..=64).contains(&self.cutoff) {
            return Err(Error::InvalidInput("cutoff must lie in [1, 64]".into()));
        }
        Ok((family, FourierTruncation::new(self.theta.len(), self.cutoff)?))
    }
}

/// A named scenario for [`super::run_spectral_flow_identity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum ScenarioSpec {
    #[serde(rename = "theta_sweep_1d")]
    ThetaSweep1d(FamilySpec),
    #[serde(rename = "robin_sweep_1d")]
    RobinSweep1d(FamilySpec),
    ScaledBand(BandSpec),
}
