use crate::linalg;
use crate::symplectic::{LagrangianPlane, SymplecticSpace};
use crate::{CMatrix, Error, Result, C64};

/// Self-adjoint boundary conditions in trace coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionKind {
    /// `Gamma1 u = 0`.
    Dirichlet,
    /// `Gamma2 u = 0`.
    Neumann,
    /// `Gamma2 u = -Theta Gamma1 u` for a Hermitian `2m x 2m` matrix.
    Robin(CMatrix),
    /// `u(1) = e^{i theta} u(0)` and `u'(1) = e^{i theta} u'(0)`.
    ThetaPeriodic(f64),
}

impl ExtensionKind {
    /// Robin condition with `Theta = theta * I`.
    pub fn scalar_robin(size: usize, theta: f64) -> Self {
        ExtensionKind::Robin(CMatrix::identity(2 * size, 2 * size) * C64::new(theta, 0.0))
    }
}

/// A boundary condition together with its Lagrangian plane of traces.
#[derive(Debug, Clone)]
pub struct ExtensionPlane {
    pub kind: ExtensionKind,
    pub plane: LagrangianPlane,
}

/// Builds the plane of boundary values allowed by `kind` for `C^m`-valued
/// functions. The theta-periodic plane is `2 pi`-periodic in `theta`.
pub fn extension_plane(size: usize, kind: ExtensionKind) -> Result<ExtensionPlane> {
    let m = size;
    let n = 2 * m;
    let one = C64::new(1.0, 0.0);
    let mut b = CMatrix::zeros(2 * n, n);
    match &kind {
        ExtensionKind::Dirichlet => {
            for i in 0..n {
                b[(n + i, i)] = one;
            }
        }
        ExtensionKind::Neumann => {
            for i in 0..n {
                b[(i, i)] = one;
            }
        }
        ExtensionKind::Robin(theta) => {
            if theta.shape() != (n, n) {
                return Err(Error::DimensionMismatch { expected: n, got: theta.nrows() });
            }
            let residual = linalg::hermitian_residual(theta);
            if residual > 1e-12 * (1.0 + linalg::max_abs(theta)) {
                return Err(Error::NotHermitian { residual });
            }
            b.view_mut((0, 0), (n, n)).copy_from(&CMatrix::identity(n, n));
            b.view_mut((n, 0), (n, n)).copy_from(&(-theta));
        }
        ExtensionKind::ThetaPeriodic(theta) => {
            if !theta.is_finite() {
                return Err(Error::InvalidInput("theta must be finite".into()));
            }
            let phase = C64::from_polar(1.0, *theta);
            for k in 0..m {
                // values: (e^{i theta} a, a, 0, 0); derivatives: (0, 0, e^{i theta} b, -b)
                b[(k, k)] = phase;
                b[(m + k, k)] = one;
                b[(n + k, m + k)] = phase;
                b[(n + m + k, m + k)] = -one;
            }
        }
    }
    let space = SymplecticSpace::standard(n);
    let plane = LagrangianPlane::from_basis(&space, &b)?;
    Ok(ExtensionPlane { kind, plane })
}
