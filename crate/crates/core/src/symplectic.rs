//! Complex symplectic spaces and their Lagrangian planes.
//!
//! A space is `C^{2n}` with the standard inner product and a unitary
//! structure map `J` satisfying `J* = -J`, `J^2 = -I`. The symplectic form is
//! `omega(u, v) = <J u, v>` where `<a, b> = sum a_i conj(b_i)`. A Lagrangian
//! plane is an `n`-dimensional subspace on which `omega` vanishes; it is the
//! graph of a unitary map from `ker(J + iI)` to `ker(J - iI)`.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use crate::linalg::{self, RANK_TOL};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Default bound on `max |omega(b_i, b_j)|` for an orthonormal basis.
pub const ISOTROPY_TOL: f64 = 1e-10;
/// Default angular tolerance for deciding that an eigenphase is zero.
pub const INTERSECTION_TOL: f64 = 1e-8;

#[derive(Debug)]
struct SpaceInner {
    structure: CMatrix,
    ker_plus: CMatrix,
    ker_minus: CMatrix,
}

/// `C^{2n}` with a symplectic structure map. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct SymplecticSpace(Arc<SpaceInner>);

impl SymplecticSpace {
    /// `C^p x C^p` with `J(f, g) = (-g, f)`, so that
    /// `omega((f1, g1), (f2, g2)) = <f1, g2> - <g1, f2>`.
    pub fn standard(p: usize) -> Self {
        let one = C64::new(1.0, 0.0);
        let i = C64::i();
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut j = CMatrix::zeros(2 * p, 2 * p);
        let mut plus = CMatrix::zeros(2 * p, p);
        let mut minus = CMatrix::zeros(2 * p, p);
        for k in 0..p {
            j[(k, p + k)] = -one;
            j[(p + k, k)] = one;
            plus[(k, k)] = s;
            plus[(p + k, k)] = i * s;
            minus[(k, k)] = i * s;
            minus[(p + k, k)] = s;
        }
        Self(Arc::new(SpaceInner { structure: j, ker_plus: plus, ker_minus: minus }))
    }

    /// Space with an arbitrary structure map, validated and eigendecomposed.
    pub fn from_structure(j: CMatrix) -> Result<Self> {
        let d = j.nrows();
        if j.ncols() != d || !d.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "structure map must be square of even size, got {}x{}",
                d,
                j.ncols()
            )));
        }
        let skew = linalg::max_abs(&(&j + j.adjoint()));
        let square = linalg::max_abs(&(&j * &j + linalg::identity(d)));
        if skew > 1e-12 || square > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "structure map violates J* = -J or J^2 = -I (residuals {skew:e}, {square:e})"
            )));
        }
        let (vals, vecs) = linalg::hermitian_eigen(&(&j * -C64::i()));
        let n = d / 2;
        if vals[n - 1] > 0.0 || vals[n] < 0.0 {
            return Err(Error::InvalidInput("J has unequal eigenspace dimensions".into()));
        }
        let ker_plus = vecs.columns(0, n).into_owned();
        let ker_minus = vecs.columns(n, n).into_owned();
        Ok(Self(Arc::new(SpaceInner { structure: j, ker_plus, ker_minus })))
    }

    /// `X + X` with structure `J + (-J)`; the diagonal is Lagrangian in it.
    pub fn doubled(&self) -> Self {
        let neg = -&self.0.structure;
        let j = linalg::block_diag(&self.0.structure, &neg);
        let ker_plus = linalg::block_diag(&self.0.ker_plus, &self.0.ker_minus);
        let ker_minus = linalg::block_diag(&self.0.ker_minus, &self.0.ker_plus);
        Self(Arc::new(SpaceInner { structure: j, ker_plus, ker_minus }))
    }

    pub fn dim(&self) -> usize {
        self.0.structure.nrows()
    }

    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn structure(&self) -> &CMatrix {
        &self.0.structure
    }

    /// Orthonormal basis of `ker(J + iI)`, the domain of graph unitaries.
    pub fn ker_j_plus_i(&self) -> &CMatrix {
        &self.0.ker_plus
    }

    /// Orthonormal basis of `ker(J - iI)`, the codomain of graph unitaries.
    pub fn ker_j_minus_i(&self) -> &CMatrix {
        &self.0.ker_minus
    }

    pub fn omega(&self, u: &CVector, v: &CVector) -> C64 {
        (v.adjoint() * (&self.0.structure * u))[(0, 0)]
    }

    /// Matrix `G` with `G[(j, i)] = omega(a_i, b_j)`.
    pub fn omega_matrix(&self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        b.adjoint() * (&self.0.structure * a)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.dim() == other.dim()
                && linalg::max_abs(&(&self.0.structure - &other.0.structure)) < 1e-14)
    }

    /// The diagonal `{(p, p)}` as a Lagrangian plane of [`Self::doubled`].
    pub fn diagonal_in(doubled: &SymplecticSpace) -> Result<LagrangianPlane> {
        let d = doubled.dim() / 2;
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut b = CMatrix::zeros(2 * d, d);
        for k in 0..d {
            b[(k, k)] = s;
            b[(d + k, k)] = s;
        }
        LagrangianPlane::from_basis(doubled, &b)
    }
}

/// An `n`-dimensional isotropic subspace with an orthonormal basis.
#[derive(Debug, Clone)]
pub struct LagrangianPlane {
    space: SymplecticSpace,
    basis: CMatrix,
    unitary: OnceLock<CMatrix>,
}

impl LagrangianPlane {
    /// Validates and orthonormalizes `columns`.
    pub fn from_basis(space: &SymplecticSpace, columns: &CMatrix) -> Result<Self> {
        Self::from_basis_with_tol(space, columns, ISOTROPY_TOL)
    }

    pub fn from_basis_with_tol(space: &SymplecticSpace, columns: &CMatrix, tol: f64) -> Result<Self> {
        let n = space.half_dim();
        if columns.nrows() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: columns.nrows() });
        }
        if columns.ncols() != n {
            return Err(Error::NotHalfDimensional { expected: n, got: columns.ncols() });
        }
        let basis = linalg::orthonormalize(columns, RANK_TOL)?;
        let residual = linalg::max_abs(&space.omega_matrix(&basis, &basis));
        if residual > tol {
            return Err(Error::NotIsotropic { residual });
        }
        Ok(Self { space: space.clone(), basis, unitary: OnceLock::new() })
    }

    /// The plane `{x + U x : x in ker(J + iI)}`, with `U` in the fixed bases.
    pub fn from_graph(space: &SymplecticSpace, unitary: &CMatrix) -> Result<Self> {
        let n = space.half_dim();
        if unitary.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, got: unitary.nrows() });
        }
        let dev = linalg::max_abs(&(unitary.adjoint() * unitary - linalg::identity(n)));
        if dev > 1e-10 {
            return Err(Error::InvalidInput(format!("matrix is not unitary (deviation {dev:e})")));
        }
        let basis = (space.ker_j_plus_i() + space.ker_j_minus_i() * unitary)
            * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let cell = OnceLock::new();
        let _ = cell.set(unitary.clone());
        Ok(Self { space: space.clone(), basis, unitary: cell })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    /// Orthonormal basis, `2n x n`.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projector(&self) -> CMatrix {
        linalg::projector(&self.basis)
    }

    /// Graph unitary `U = Q P^{-1}` where `P`, `Q` are the coordinates of the
    /// basis in `ker(J + iI)` and `ker(J - iI)`.
    pub fn graph_unitary(&self) -> Result<&CMatrix> {
        if let Some(u) = self.unitary.get() {
            return Ok(u);
        }
        let p = self.space.ker_j_plus_i().adjoint() * &self.basis;
        let q = self.space.ker_j_minus_i().adjoint() * &self.basis;
        let sv = linalg::singular_values(&p);
        if sv.last().copied().unwrap_or(1.0) < 1e-3 {
            return Err(Error::Singular("plane meets ker(J - iI)".into()));
        }
        let p_inv = p.try_inverse().ok_or_else(|| Error::Singular("graph coordinates".into()))?;
        let _ = self.unitary.set(q * p_inv);
        Ok(self.unitary.get().expect("just set"))
    }

    /// Largest `|omega(b_i, b_j)|` over the stored basis.
    pub fn isotropy_residual(&self) -> f64 {
        linalg::max_abs(&self.space.omega_matrix(&self.basis, &self.basis))
    }

    /// Operator norm of the difference of projectors.
    pub fn gap(&self, other: &Self) -> f64 {
        linalg::spectral_norm(&(self.projector() - other.projector()))
    }

    /// Direct sum with `other` inside `doubled`, which must be
    /// [`SymplecticSpace::doubled`] of this plane's space.
    pub fn direct_sum(&self, other: &Self, doubled: &SymplecticSpace) -> Result<Self> {
        let basis = linalg::block_diag(&self.basis, &other.basis);
        if doubled.dim() != basis.nrows() {
            return Err(Error::DimensionMismatch { expected: doubled.dim(), got: basis.nrows() });
        }
        Ok(Self { space: doubled.clone(), basis, unitary: OnceLock::new() })
    }

    /// Plain-text dump, one row per ambient coordinate as `re,im` pairs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.basis.nrows() {
            let cells: Vec<String> = (0..self.basis.ncols())
                .map(|c| format!("{:.16e},{:.16e}", self.basis[(r, c)].re, self.basis[(r, c)].im))
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Eigenphases of `U_F V_Z^*`, ascending in `(-pi, pi]`. A phase at zero marks a
/// direction shared by both planes; half its absolute value is a principal
/// angle between them.
pub fn relative_phases(f: &LagrangianPlane, z: &LagrangianPlane) -> Result<Vec<f64>> {
    if !f.space().same_as(z.space()) {
        return Err(Error::InvalidInput("planes live in different spaces".into()));
    }
    let w = f.graph_unitary()? * z.graph_unitary()?.adjoint();
    linalg::unitary_eigenphases(&w)
}

/// `dim(F ∩ Z)` counted as the eigenphases of `U_F V_Z^*` within `tol` of zero.
pub fn intersection_dim(f: &LagrangianPlane, z: &LagrangianPlane, tol: f64) -> Result<usize> {
    let phases = relative_phases(f, z)?;
    let mut count = 0;
    for &p in &phases {
        let d = p.abs();
        if d < tol {
            count += 1;
        } else if d <= 2.0 * tol {
            return Err(Error::ToleranceAmbiguous { distance: d, tol });
        }
    }
    debug_assert_eq!(
        count,
        principal_angles(f, z).iter().filter(|&&a| a < 0.75 * tol).count(),
        "eigenphase and principal-angle intersection counts disagree"
    );
    Ok(count)
}

/// Principal angles between two planes from the sines `sigma((I - P_Z) B_F)`.
pub fn principal_angles(f: &LagrangianPlane, z: &LagrangianPlane) -> Vec<f64> {
    let resid = f.basis() - z.basis() * (z.basis().adjoint() * f.basis());
    let mut a: Vec<f64> = linalg::singular_values(&resid)
        .into_iter()
        .map(|s| s.clamp(0.0, 1.0).asin())
        .collect();
    a.resize(f.basis().ncols(), 0.0);
    a.sort_by(f64::total_cmp);
    a
}

/// Orthonormal basis of `{u : omega(u, v) = 0 for all v in span(basis)}`.
pub fn annihilator(space: &SymplecticSpace, basis: &CMatrix) -> Result<CMatrix> {
    if basis.nrows() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: basis.nrows() });
    }
    if basis.ncols() == 0 {
        return Ok(linalg::identity(space.dim()));
    }
    let m = basis.adjoint() * space.structure();
    Ok(linalg::null_space(&m, RANK_TOL, 0.0))
}

/// True when the orthonormal bases `a` and `b` span the same subspace.
pub fn same_subspace(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.ncols() == b.ncols() && linalg::max_abs(&(a - b * (b.adjoint() * a))) <= tol
}

/// Writes `V = {x + J A x : x in F}` and returns `A` as a Hermitian matrix in
/// the basis of `F`.
pub fn ja_graph_decompose(v: &LagrangianPlane, f: &LagrangianPlane) -> Result<CMatrix> {
    if !v.space().same_as(f.space()) {
        return Err(Error::InvalidInput("planes live in different spaces".into()));
    }
    let bf = f.basis();
    let jbf = v.space().structure() * bf;
    let x = bf.adjoint() * v.basis();
    let y = jbf.adjoint() * v.basis();
    if linalg::singular_values(&x).last().copied().unwrap_or(0.0) < 1e-8 {
        return Err(Error::NotTransversal);
    }
    let x_inv = x.try_inverse().ok_or(Error::NotTransversal)?;
    let a = y * x_inv;
    let residual = linalg::hermitian_residual(&a);
    if residual > 1e-8 * (1.0 + linalg::max_abs(&a)) {
        return Err(Error::NotHermitian { residual });
    }
    Ok((&a + a.adjoint()) * C64::new(0.5, 0.0))
}

/// Graph unitary of `V` transported to `F` via `x -> x + iJx` and
/// `x -> x - iJx`, expressed in the basis of `F`.
pub fn unitary_on_reference(v: &LagrangianPlane, f: &LagrangianPlane) -> Result<CMatrix> {
    let space = v.space();
    let n = space.half_dim();
    let j = space.structure();
    let i = C64::i();
    let bf = f.basis();
    let into_plus = space.ker_j_plus_i().adjoint() * (bf + j * bf * i);
    let into_minus = space.ker_j_minus_i().adjoint() * (bf - j * bf * i);
    let inv = into_minus
        .try_inverse()
        .ok_or_else(|| Error::Singular("reference transport".into()))?;
    let out = inv * v.graph_unitary()? * into_plus;
    debug_assert_eq!(out.nrows(), n);
    Ok(out)
}

/// `(I + iA)(I - iA)^{-1}`.
pub fn cayley(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let ia = a * C64::i();
    let denom = (linalg::identity(n) - &ia)
        .try_inverse()
        .ok_or_else(|| Error::Singular("Cayley denominator".into()))?;
    Ok((linalg::identity(n) + ia) * denom)
}
