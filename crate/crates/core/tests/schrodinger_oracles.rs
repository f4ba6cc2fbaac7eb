//! The finite-difference oracle and the solution-space traces against
//! independent reference computations.

use std::f64::consts::PI;

use maslov_core::linalg;
use maslov_core::schrodinger::{
    extension_plane, oracle_spectrum, solution_space_trace, verify_identity_rr15, verify_robin_monotone,
    ExtensionKind, Potential1D, VerifyConfig, DEFAULT_STEPS,
};
use maslov_core::symplectic::same_subspace;
use maslov_core::{CMatrix, Error, C64};
use nalgebra::SymmetricEigen;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn scalar(v: C64) -> CMatrix {
    CMatrix::from_element(1, 1, v)
}

/// Coefficients `c_p` of `V(x) = sum_p c_p e^{2 pi i p x}`.
fn mixed_harmonics() -> Vec<(i64, CMatrix)> {
    vec![
        (0, scalar(c(1.0, 0.0))),
        (1, scalar(c(1.5, 0.0))),
        (-1, scalar(c(1.5, 0.0))),
        (2, scalar(c(0.0, -1.0))),
        (-2, scalar(c(0.0, 1.0))),
    ]
}

fn coupled_harmonics() -> Vec<(i64, CMatrix)> {
    vec![
        (0, CMatrix::from_row_slice(2, 2, &[c(-3.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(2.0, 0.0)])),
        (1, CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.0), c(-1.0, 0.0)])),
        (-1, CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, -0.5), c(-1.0, 0.0)])),
    ]
}

/// Eigenvalues of the theta-periodic problem in the plane-wave basis
/// `e^{i (theta + 2 pi k) x}`, `|k| <= cutoff`.
fn hill_spectrum(modes: &[(i64, CMatrix)], theta: f64, cutoff: i64) -> Vec<f64> {
    let m = modes[0].1.nrows();
    let ks: Vec<i64> = (-cutoff..=cutoff).collect();
    let n = ks.len() * m;
    let mut h = CMatrix::zeros(n, n);
    for (a, &k) in ks.iter().enumerate() {
        for (b, &l) in ks.iter().enumerate() {
            if let Some((_, coeff)) = modes.iter().find(|(p, _)| *p == k - l) {
                h.view_mut((a * m, b * m), (m, m)).copy_from(coeff);
            }
        }
        let w = (theta + 2.0 * PI * k as f64).powi(2);
        for i in 0..m {
            h[(a * m + i, a * m + i)] += c(w, 0.0);
        }
    }
    let mut e: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn assert_close_to_reference(got: &[f64], tolerances: &[f64], reference: &[f64], label: &str) {
    for (i, ((g, t), r)) in got.iter().zip(tolerances).zip(reference).enumerate() {
        let allowed = 4.0 * t + 1e-9 * (1.0 + r.abs());
        assert!((g - r).abs() <= allowed, "{label} eigenvalue {i}: {g} vs {r} (allowed {allowed:e})");
    }
}

#[test]
fn periodic_oracle_matches_plane_waves() {
    for theta in [0.0, 0.7, PI] {
        let v = Potential1D::fourier(mixed_harmonics()).unwrap();
        let s = oracle_spectrum(&v, &ExtensionKind::ThetaPeriodic(theta), 2000, 8).unwrap();
        let reference = hill_spectrum(&mixed_harmonics(), theta, 30);
        assert_close_to_reference(&s.eigenvalues, &s.tolerances, &reference, &format!("theta {theta}"));
    }
}

#[test]
fn coupled_periodic_oracle_matches_plane_waves() {
    let v = Potential1D::fourier(coupled_harmonics()).unwrap();
    let s = oracle_spectrum(&v, &ExtensionKind::ThetaPeriodic(1.1), 2000, 10).unwrap();
    let reference = hill_spectrum(&coupled_harmonics(), 1.1, 30);
    assert_close_to_reference(&s.eigenvalues, &s.tolerances, &reference, "coupled");
}

#[test]
fn constant_potentials_have_explicit_spectra() {
    let values = [-7.0, 2.5];
    let v = Potential1D::diagonal(&values);
    type FreeSpectrum = Box<dyn Fn(i64) -> Option<f64>>;
    let cases: [(ExtensionKind, FreeSpectrum); 3] = [
        (ExtensionKind::Dirichlet, Box::new(|k| (k >= 1).then(|| (k as f64 * PI).powi(2)))),
        (ExtensionKind::Neumann, Box::new(|k| (k >= 0).then(|| (k as f64 * PI).powi(2)))),
        (ExtensionKind::ThetaPeriodic(0.4), Box::new(|k| Some((0.4 + 2.0 * PI * k as f64).powi(2)))),
    ];
    for (kind, free) in cases {
        let mut reference: Vec<f64> = (-20..=20)
            .filter_map(&free)
            .flat_map(|w| values.iter().map(move |v| w + v))
            .collect();
        reference.sort_by(f64::total_cmp);
        let s = oracle_spectrum(&v, &kind, 2000, 10).unwrap();
        assert_close_to_reference(&s.eigenvalues, &s.tolerances, &reference, &format!("{kind:?}"));
        assert_eq!(s.morse().unwrap(), reference.iter().filter(|&&e| e < 0.0).count());
    }
}

/// Robin eigenvalues of `-u''` with `u'(0) = theta u(0)` and
/// `u'(1) = -theta u(1)` from the secular equations, by bisection.
fn robin_reference(theta: f64, upto: f64) -> Vec<f64> {
    let oscillating = |mu: f64| 2.0 * theta * mu.cos() + (theta * theta / mu - mu) * mu.sin();
    let decaying = |k: f64| 2.0 * theta * k.cosh() + (k + theta * theta / k) * k.sinh();
    let roots = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
        let mut out = Vec::new();
        let steps = 20_000;
        let h = (hi - lo) / steps as f64;
        for i in 0..steps {
            let (mut a, mut b) = (lo + i as f64 * h, lo + (i + 1) as f64 * h);
            if f(a).signum() == f(b).signum() {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if f(a).signum() == f(mid).signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    };
    let mut ev: Vec<f64> = roots(&decaying, 1e-6, 20.0).into_iter().map(|k| -k * k).collect();
    ev.extend(roots(&oscillating, 1e-6, upto.sqrt()).into_iter().map(|mu| mu * mu));
    ev.sort_by(f64::total_cmp);
    ev
}

#[test]
fn robin_oracle_matches_secular_equation() {
    for theta in [-1.5, 0.8] {
        let s = oracle_spectrum(&Potential1D::scalar(0.0), &ExtensionKind::scalar_robin(1, theta), 2000, 6).unwrap();
        let reference = robin_reference(theta, 400.0);
        assert!(reference.len() >= 6);
        assert_close_to_reference(&s.eigenvalues, &s.tolerances, &reference, &format!("Robin {theta}"));
    }
}

/// Traces `(Y(1), Y(0), Y'(1), -Y'(0))` of explicit solutions of `-u'' + v u = lambda u`.
fn explicit_trace_columns(v: f64, lambda: f64) -> [[f64; 4]; 2] {
    let d = lambda - v;
    if d > 0.0 {
        let k = d.sqrt();
        [[k.cos(), 1.0, -k * k.sin(), 0.0], [k.sin(), 0.0, k * k.cos(), -k]]
    } else if d < 0.0 {
        let k = (-d).sqrt();
        // e^{-kx} and e^{k(x-1)} stay well conditioned for large k
        [[(-k).exp(), 1.0, -k * (-k).exp(), k], [1.0, (-k).exp(), k, -k * (-k).exp()]]
    } else {
        [[1.0, 1.0, 0.0, 0.0], [1.0, 0.0, 1.0, -1.0]]
    }
}

#[test]
fn solution_traces_match_explicit_solutions() {
    let values = [-4.0, 3.0];
    let v = Potential1D::diagonal(&values);
    for lambda in [-60.0, -1.0, 0.0, 11.0, 90.0] {
        let plane = solution_space_trace(&v, lambda, DEFAULT_STEPS).unwrap();
        let mut expected = CMatrix::zeros(8, 4);
        for (comp, &vc) in values.iter().enumerate() {
            for (j, col) in explicit_trace_columns(vc, lambda).iter().enumerate() {
                for (slot, &x) in col.iter().enumerate() {
                    expected[(2 * slot + comp, 2 * comp + j)] = c(x, 0.0);
                }
            }
        }
        let expected = linalg::orthonormalize(&expected, linalg::RANK_TOL).unwrap();
        assert!(same_subspace(plane.basis(), &expected, 1e-8), "lambda {lambda}");
        assert!(plane.isotropy_residual() < 1e-8);
    }
}

#[test]
fn periodic_identity_for_coupled_constant_potential() {
    let v = Potential1D::constant(CMatrix::from_row_slice(2, 2, &[c(-5.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]))
        .unwrap();
    let mu = [-3.0 - 8f64.sqrt(), -3.0 + 8f64.sqrt()];
    let morse = |theta: f64| -> i64 {
        mu.iter()
            .map(|m| (-10..=10).filter(|k| (theta + 2.0 * PI * *k as f64).powi(2) + m < 0.0).count() as i64)
            .sum()
    };
    let r = verify_identity_rr15(&v, 0.0, PI, &VerifyConfig::default()).unwrap();
    assert_eq!(r.lhs_morse_diff, morse(0.0) - morse(PI));
    assert_eq!(r.rhs_maslov, r.lhs_morse_diff);
    assert!(r.pass, "{r:?}");
}

#[test]
fn robin_monotonicity_with_negative_potential() {
    let v = -3.0;
    let morse = |theta: f64| robin_reference(theta, 400.0).iter().filter(|&&e| e + v < 0.0).count() as i64;
    let r = verify_robin_monotone(&Potential1D::scalar(v), -2.5, 1.5, &VerifyConfig::default()).unwrap();
    assert_eq!(r.lhs_morse_diff, morse(-2.5) - morse(1.5));
    assert_eq!(r.kernel_sum, r.lhs_morse_diff);
    assert!(r.kernel_points.iter().all(|k| k.negative_definite));
    assert!(r.pass, "{r:?}");
}

#[test]
fn malformed_boundary_data_is_rejected() {
    let skew = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    assert!(matches!(extension_plane(1, ExtensionKind::Robin(skew)), Err(Error::NotHermitian { .. })));
    assert!(matches!(
        extension_plane(2, ExtensionKind::Robin(CMatrix::identity(2, 2))),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(extension_plane(1, ExtensionKind::ThetaPeriodic(f64::NAN)).is_err());
    let bad = vec![(1, scalar(c(1.0, 0.0))), (-1, scalar(c(2.0, 0.0)))];
    assert!(Potential1D::fourier(bad).is_err());
    assert!(solution_space_trace(&Potential1D::scalar(0.0), f64::INFINITY, 100).is_err());
    let cfg = VerifyConfig { steps: 3, ..VerifyConfig::default() };
    assert!(matches!(cfg.validate(), Err(Error::InvalidInput(_))));
}
