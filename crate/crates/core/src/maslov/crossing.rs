use serde::{Deserialize, Serialize};

use super::index::{MaslovResult, Method};
use super::path::LagrangianPath;
use crate::linalg;
use crate::symplectic::{LagrangianPlane, SymplecticSpace};
use crate::{CMatrix, Error, Result, C64};

/// Crossing form at one intersection of a path with a reference plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    #[serde(rename = "s")]
    pub location: f64,
    #[serde(rename = "dim")]
    pub intersection_dim: usize,
    #[serde(rename = "eigs")]
    pub form_eigenvalues: Vec<f64>,
    pub signature: i64,
    pub regular: bool,
}

impl CrossingReport {
    /// Placeholder for a located crossing whose form could not be evaluated.
    pub fn unresolved(location: f64) -> Self {
        Self { location, intersection_dim: 0, form_eigenvalues: Vec::new(), signature: 0, regular: false }
    }

    pub fn positive(&self) -> i64 {
        self.form_eigenvalues.iter().filter(|&&e| e > 0.0).count() as i64
    }

    pub fn negative(&self) -> i64 {
        self.form_eigenvalues.iter().filter(|&&e| e < 0.0).count() as i64
    }
}

const RELATIVE_BAND: f64 = 1e-6;
const ABSOLUTE_BAND: f64 = 1e-9;

/// Crossing form of `path` relative to `reference` at `location`, using the
/// default finite-difference step `1e-4` times the domain length.
pub fn crossing_form(path: &LagrangianPath, reference: &LagrangianPlane, location: f64) -> Result<CrossingReport> {
    crossing_form_with(path, reference, location, None, 1e-6)
}

/// As [`crossing_form`] with an explicit step and intersection tolerance. The
/// tolerance bounds the sine of principal angles treated as zero.
pub fn crossing_form_with(
    path: &LagrangianPath,
    reference: &LagrangianPlane,
    location: f64,
    step: Option<f64>,
    intersection_tol: f64,
) -> Result<CrossingReport> {
    let plane = path.sample(location)?;
    let b = plane.basis().clone();
    let z = reference.basis();
    let outside = &b - z * (z.adjoint() * &b);
    let c = linalg::null_space(&outside, 0.0, intersection_tol);
    if c.ncols() == 0 {
        return Err(Error::NoCrossing { at: location });
    }

    let (start, end) = (path.start(), path.end());
    let graph_map = |s: f64, h: f64| -> Result<CMatrix> {
        let bs = path.sample(s)?.basis().clone();
        let x = b.adjoint() * &bs;
        if linalg::singular_values(&x).last().copied().unwrap_or(0.0) < 0.5 {
            return Err(Error::NotGraphRepresentable { at: location, step: h });
        }
        let x_inv = x.try_inverse().ok_or(Error::NotGraphRepresentable { at: location, step: h })?;
        Ok((&bs - &b * (b.adjoint() * &bs)) * x_inv)
    };
    let diff = |h: f64| -> Result<CMatrix> {
        let s = location;
        let inv = C64::new(1.0 / (2.0 * h), 0.0);
        if s - h >= start && s + h <= end {
            Ok((graph_map(s + h, h)? - graph_map(s - h, h)?) * inv)
        } else if s + 2.0 * h <= end {
            Ok((graph_map(s + h, h)? * C64::new(4.0, 0.0) - graph_map(s + 2.0 * h, h)?) * inv)
        } else {
            Ok((graph_map(s - 2.0 * h, h)? - graph_map(s - h, h)? * C64::new(4.0, 0.0)) * inv)
        }
    };

    let mut h = step.unwrap_or(1e-4 * (end - start));
    let mut derivative = None;
    let mut last_err = None;
    for _ in 0..4 {
        match (diff(h), diff(0.5 * h)) {
            (Ok(coarse), Ok(fine)) => {
                let extrapolated = (&fine * C64::new(4.0, 0.0) - &coarse) * C64::new(1.0 / 3.0, 0.0);
                let spread = linalg::max_abs(&(&coarse - &fine));
                let good = spread <= 1e-3 * (linalg::max_abs(&fine) + 1e-6);
                derivative = Some(extrapolated);
                if good {
                    break;
                }
            }
            (Err(e), _) | (_, Err(e)) => last_err = Some(e),
        }
        h *= 0.25;
    }
    let derivative = match derivative {
        Some(d) => d,
        None => return Err(last_err.unwrap_or(Error::NotGraphRepresentable { at: location, step: h })),
    };

    let j = path.space().structure();
    let form = c.adjoint() * derivative.adjoint() * j * &b * &c;
    let eigs = linalg::hermitian_eigenvalues(&form);
    let scale = eigs.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let band = RELATIVE_BAND * scale + ABSOLUTE_BAND;
    let regular = eigs.iter().all(|e| e.abs() >= band);
    let signature = eigs.iter().filter(|&&e| e >= band).count() as i64 - eigs.iter().filter(|&&e| e <= -band).count() as i64;
    Ok(CrossingReport { location, intersection_dim: c.ncols(), form_eigenvalues: eigs, signature, regular })
}

/// Crossing form of the pair `(first, second)` at `location`, i.e. the form of
/// `first + second` relative to the diagonal of the doubled space.
pub fn two_path_crossing_form(first: &LagrangianPath, second: &LagrangianPath, location: f64) -> Result<CrossingReport> {
    let doubled = first.space().doubled();
    let sum = first.direct_sum(second, &doubled)?;
    let diagonal = SymplecticSpace::diagonal_in(&doubled)?;
    crossing_form(&sum, &diagonal, location)
}

/// Maslov index as a sum of crossing-form signatures at the given crossings:
/// `-n_-` at the start, the signature inside, `+n_+` at the end.
pub fn maslov_via_crossings(path: &LagrangianPath, reference: &LagrangianPlane, locations: &[f64]) -> Result<MaslovResult> {
    let (start, end) = (path.start(), path.end());
    let near = 1e-9 * (end - start);
    let mut index = 0;
    let mut crossings = Vec::with_capacity(locations.len());
    for &s in locations {
        let report = crossing_form(path, reference, s)?;
        if !report.regular {
            return Err(Error::IrregularCrossing { at: s });
        }
        index += if (s - start).abs() <= near {
            -report.negative()
        } else if (s - end).abs() <= near {
            report.positive()
        } else {
            report.signature
        };
        crossings.push(report);
    }
    Ok(MaslovResult { index, method: Method::CrossingForm, partition: Vec::new(), crossings })
}
