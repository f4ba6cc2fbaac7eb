use super::potential::Potential1D;
use crate::symplectic::{LagrangianPlane, SymplecticSpace};
use crate::{CMatrix, CVector, Error, Result, C64};

/// RK4 steps used for the solution-space trace unless configured otherwise.
pub const DEFAULT_STEPS: usize = 4096;
const RENORMALIZE_EVERY: usize = 32;

/// The boundary triple of `-d^2/dx^2` on `[0, 1]` for `C^m`-valued functions.
#[derive(Debug, Clone)]
pub struct BoundaryTriple1D {
    size: usize,
    space: SymplecticSpace,
}

impl BoundaryTriple1D {
    pub fn new(size: usize) -> Self {
        Self { size, space: SymplecticSpace::standard(2 * size) }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The boundary space `C^{2m} x C^{2m}`.
    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    /// `(Gamma1 u, Gamma2 u) = (u(1), u(0), u'(1), -u'(0))`.
    pub fn trace(&self, u0: &CVector, u1: &CVector, du0: &CVector, du1: &CVector) -> CVector {
        let m = self.size;
        let mut out = CVector::zeros(4 * m);
        out.rows_mut(0, m).copy_from(u1);
        out.rows_mut(m, m).copy_from(u0);
        out.rows_mut(2 * m, m).copy_from(du1);
        out.rows_mut(3 * m, m).copy_from(&(-du0));
        out
    }

    /// Right-hand side of the Green identity, `<Gamma1 u, Gamma2 v> - <Gamma2 u, Gamma1 v>`.
    pub fn boundary_form(&self, tu: &CVector, tv: &CVector) -> C64 {
        self.space.omega(tu, tv)
    }
}

/// `A Y` for the first-order system `Y' = [[0, I], [V - lambda, 0]] Y`.
fn apply(vm: &CMatrix, y: &CMatrix, m: usize) -> CMatrix {
    let cols = y.ncols();
    let mut out = CMatrix::zeros(2 * m, cols);
    out.rows_mut(0, m).copy_from(&y.rows(m, m));
    out.rows_mut(m, m).copy_from(&(vm * y.rows(0, m)));
    out
}

/// Boundary traces of all solutions of `-u'' + V u = lambda u`, a Lagrangian
/// plane of dimension `2m` in `C^{2m} x C^{2m}`.
///
/// The fundamental matrix is integrated with classical RK4 on `steps` uniform
/// steps. Initial data are carried along and the stacked pair is
/// re-orthonormalized periodically so that decaying solutions are not lost
/// when `lambda` is very negative.
pub fn solution_space_trace(potential: &Potential1D, lambda: f64, steps: usize) -> Result<LagrangianPlane> {
    if steps == 0 || !lambda.is_finite() {
        return Err(Error::InvalidInput("need a finite spectral parameter and at least one step".into()));
    }
    let m = potential.size();
    let h = 1.0 / steps as f64;
    let shift = CMatrix::identity(m, m) * C64::new(lambda, 0.0);
    let shifted = |x: f64| potential.eval(x) - &shift;
    let constant = potential.is_constant().then(|| shifted(0.0));
    let at = |x: f64| constant.clone().unwrap_or_else(|| shifted(x));

    let mut phi = CMatrix::identity(2 * m, 2 * m);
    let mut init = CMatrix::identity(2 * m, 2 * m);
    let hc = C64::new(h, 0.0);
    let half = C64::new(0.5 * h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    let mut v0 = at(0.0);
    for k in 0..steps {
        let x = k as f64 * h;
        let vh = at(x + 0.5 * h);
        let v1 = at(x + h);
        let k1 = apply(&v0, &phi, m);
        let k2 = apply(&vh, &(&phi + &k1 * half), m);
        let k3 = apply(&vh, &(&phi + &k2 * half), m);
        let k4 = apply(&v1, &(&phi + &k3 * hc), m);
        phi += (k1 + (k2 + k3) * two + k4) * sixth;
        v0 = v1;
        if (k + 1) % RENORMALIZE_EVERY == 0 || k + 1 == steps {
            let mut stacked = CMatrix::zeros(4 * m, 2 * m);
            stacked.rows_mut(0, 2 * m).copy_from(&phi);
            stacked.rows_mut(2 * m, 2 * m).copy_from(&init);
            let q = stacked.qr().q();
            phi = q.rows(0, 2 * m).into_owned();
            init = q.rows(2 * m, 2 * m).into_owned();
        }
    }
    let mut traces = CMatrix::zeros(4 * m, 2 * m);
    traces.rows_mut(0, m).copy_from(&phi.rows(0, m));
    traces.rows_mut(m, m).copy_from(&init.rows(0, m));
    traces.rows_mut(2 * m, m).copy_from(&phi.rows(m, m));
    traces.rows_mut(3 * m, m).copy_from(&(-init.rows(m, m)));
    let space = SymplecticSpace::standard(2 * m);
    LagrangianPlane::from_basis_with_tol(&space, &traces, 1e-8).map_err(|e| match e {
        Error::NotIsotropic { residual } => Error::NotLagrangian { residual },
        other => other,
    })
}
