//! Small dense linear algebra helpers on complex matrices.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;

use crate::{CMatrix, Error, Result, C64};

/// Default relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Singular values of `m` (unsorted order is not relied upon).
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&max) = s.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * max).count()
}

/// Orthonormal basis for the column span of a full-column-rank matrix.
pub fn orthonormalize(cols: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let k = cols.ncols();
    if k == 0 {
        return Ok(cols.clone());
    }
    let r = rank(cols, rel_tol);
    if r < k {
        return Err(Error::RankDeficient { rank: r, cols: k });
    }
    Ok(cols.clone().qr().q())
}

/// Orthonormal basis of the kernel of `m`. Singular values at or below
/// `rel_tol * sigma_max + abs_tol` count as zero.
pub fn null_space(m: &CMatrix, rel_tol: f64, abs_tol: f64) -> CMatrix {
    let (r, c) = m.shape();
    if c == 0 {
        return CMatrix::zeros(0, 0);
    }
    if r == 0 {
        return identity(c);
    }
    let padded = if r < c {
        let mut p = CMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv = &svd.singular_values;
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let thr = rel_tol * max + abs_tol;
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= thr).collect();
    let mut out = CMatrix::zeros(c, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        for row in 0..c {
            out[(row, j)] = v_t[(i, row)].conj();
        }
    }
    out
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let diff = m - m.adjoint();
    diff.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        vectors.set_column(j, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut v: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenphases in `(-pi, pi]` of a unitary matrix, ascending, with an
/// orthonormal eigenbasis.
///
/// The spectrum is read off the Hermitian matrix `i(z + W)(z - W)^{-1}` for a
/// point `z` on the unit circle chosen far from the eigenvalues, so repeated
/// eigenvalues cause no convergence trouble.
pub fn unitary_eigen(w: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = w.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let candidates = 2 * n + 2;
    let mut best: Option<(f64, C64)> = None;
    for j in 0..candidates {
        let z = C64::from_polar(1.0, PI + 2.0 * PI * j as f64 / candidates as f64);
        let shifted = identity(n) * z - w;
        let sigma = singular_values(&shifted).last().copied().unwrap_or(0.0);
        if best.is_none_or(|(b, _)| sigma > b) {
            best = Some((sigma, z));
        }
    }
    let (sigma, z) = best.expect("at least one candidate shift");
    if sigma < 1e-3 {
        return Err(Error::EigensolverFailure("matrix is not unitary".into()));
    }
    let inv = (identity(n) * z - w)
        .try_inverse()
        .ok_or_else(|| Error::EigensolverFailure("singular Cayley shift".into()))?;
    let h = (identity(n) * z + w) * inv * C64::i();
    let (mu, vectors) = hermitian_eigen(&h);
    let mut pairs: Vec<(f64, usize)> = mu
        .iter()
        .enumerate()
        .map(|(i, &m)| (wrap_angle((z * C64::new(m, -1.0) / C64::new(m, 1.0)).arg()), i))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut sorted = CMatrix::zeros(n, n);
    for (j, &(_, i)) in pairs.iter().enumerate() {
        sorted.set_column(j, &vectors.column(i));
    }
    Ok((pairs.into_iter().map(|(p, _)| p).collect(), sorted))
}

/// Arguments in `(-pi, pi]` of the eigenvalues of a unitary matrix, ascending.
pub fn unitary_eigenphases(w: &CMatrix) -> Result<Vec<f64>> {
    Ok(unitary_eigen(w)?.0)
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Signed shortest rotation taking `a` to `b`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(b - a)
}

/// Best cyclic matching of two ascending lists of angles of equal length.
/// Returns the index in `b` matched to each entry of `a` and the largest
/// angular movement.
pub fn match_on_circle(a: &[f64], b: &[f64]) -> (Vec<usize>, f64) {
    let n = a.len();
    assert_eq!(n, b.len(), "phase lists must have equal length");
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let mut best = (f64::INFINITY, 0usize);
    for shift in 0..n {
        let cost = (0..n)
            .map(|i| angle_diff(a[i], b[(i + shift) % n]).abs())
            .fold(0.0f64, f64::max);
        if cost < best.0 {
            best = (cost, shift);
        }
    }
    ((0..n).map(|i| (i + best.1) % n).collect(), best.0)
}

/// Orthogonal projector onto the span of orthonormal columns.
pub fn projector(basis: &CMatrix) -> CMatrix {
    basis * basis.adjoint()
}

/// Block diagonal matrix with blocks `a`, `b`.
pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = CMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// `f` applied to a Hermitian matrix through its eigendecomposition.
pub fn hermitian_function(h: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let (values, q) = hermitian_eigen(h);
    let d = CMatrix::from_diagonal(&crate::CVector::from_iterator(values.len(), values.iter().map(|&x| f(x))));
    &q * d * q.adjoint()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unitary_from_phases(phases: &[f64], mix: f64) -> CMatrix {
        let n = phases.len();
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = C64::new((i * 7 + j * 3) as f64 * 0.1, (i as f64 - j as f64) * 0.3);
            }
        }
        let h = (&h + h.adjoint()) * C64::new(mix, 0.0);
        let q = hermitian_function(&h, |x| C64::from_polar(1.0, x));
        let mut d = CMatrix::zeros(n, n);
        for (i, &p) in phases.iter().enumerate() {
            d[(i, i)] = C64::from_polar(1.0, p);
        }
        &q * d * q.adjoint()
    }

    #[test]
    fn eigenphases_of_conjugated_diagonal() {
        let phases = [-2.5, -0.3, 0.0, 1.1, 3.0];
        let u = unitary_from_phases(&phases, 0.4);
        let got = unitary_eigenphases(&u).unwrap();
        for (g, e) in got.iter().zip(phases.iter()) {
            assert!((g - e).abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = CMatrix::from_row_slice(1, 3, &[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
        let k = null_space(&m, RANK_TOL, 0.0);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&m * &k)) < 1e-14);
    }

    #[test]
    fn cyclic_matching_wraps_around_pi() {
        let a = [-3.1, 0.5];
        let b = [0.6, 3.1];
        let (perm, moved) = match_on_circle(&a, &b);
        assert_eq!(perm, vec![1, 0]);
        assert!(moved < 0.2);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn repeated_unit_eigenvalues() {
        let q = unitary_from_phases(&[0.3, -1.2, 2.0, 0.9], 0.7);
        let d = CMatrix::from_diagonal(&crate::CVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::from_polar(1.0, 2.5),
        ]));
        let w = &q * d * q.adjoint();
        let (phases, v) = unitary_eigen(&w).unwrap();
        assert!(phases[..3].iter().all(|p| p.abs() < 1e-13), "{phases:?}");
        assert!((phases[3] - 2.5).abs() < 1e-13);
        let back = &v * CMatrix::from_diagonal(&crate::CVector::from_iterator(4, phases.iter().map(|&p| C64::from_polar(1.0, p)))) * v.adjoint();
        assert!(max_abs(&(back - w)) < 1e-13);
    }
}
