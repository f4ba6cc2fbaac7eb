//! Acceptance criteria. Each test prints one PASS/FAIL line with its runtime.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use maslov_core::band::{
    exact_laplacian_spectrum, galerkin_matrix, morse_index, verify_y19, FourierPotential, FourierTruncation,
    LatticeCell, ScaledFamily, ScalingOptions, SmallScaleBranch,
};
use maslov_core::linalg;
use maslov_core::maslov::{
    doubled_pair, maslov_index, maslov_two_paths, maslov_via_crossings, LagrangianPath, MaslovOptions,
};
use maslov_core::scenarios::{run_square, Family1D, HomotopySquare, SweepKind};
use maslov_core::schrodinger::{
    kernel_bridge, scalar_robin_path, solution_space_trace, theta_periodic_path, verify_identity_rr15,
    verify_robin_monotone, ExtensionKind, Potential1D, VerifyConfig, DEFAULT_STEPS,
};
use maslov_core::symplectic::{
    annihilator, cayley, intersection_dim, ja_graph_decompose, principal_angles, same_subspace, unitary_on_reference,
    LagrangianPlane, SymplecticSpace,
};
use maslov_core::{CMatrix, C64};
use rayon::prelude::*;

// Tolerances.
const ROUND_TRIP_TOL: f64 = 1e-10;
const ISOTROPY_TOL: f64 = 1e-10;
const FORM_TOL: f64 = 1e-10;
const STRUCTURE_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;
const CAYLEY_TOL: f64 = 1e-9;
const INTERSECTION_TOL: f64 = 1e-8;
const SPECTRUM_REL_TOL: f64 = 1e-12;
const ROBIN_FORM_BOUND: f64 = -1e-8;

fn verdict(criterion: u32, what: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) -> bool {
    let in_time = elapsed <= limit;
    let pass = ok && in_time;
    println!(
        "[{}] criterion {criterion}: {what} ({:.2} s, limit {} s){}{}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { " time limit exceeded" },
        if detail.is_empty() { String::new() } else { format!(" - {detail}") },
    );
    pass
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// Criterion 1

fn periodic_case(potential: Potential1D, expected: i64, label: &str) -> bool {
    let start = Instant::now();
    let r = verify_identity_rr15(&potential, 0.0, PI, &VerifyConfig::default()).unwrap();
    let ok = r.pass
        && r.lhs_morse_diff == expected
        && r.rhs_maslov == expected
        && r.crossing_form_index == Some(expected);
    let detail = format!(
        "Mor diff {} = {} - {}, Maslov {}, crossing forms {:?}",
        r.lhs_morse_diff, r.morse_start, r.morse_end, r.rhs_maslov, r.crossing_form_index
    );
    verdict(1, &format!("periodic identity, {label}"), ok, start.elapsed(), Duration::from_secs(10), &detail)
}

#[test]
fn criterion_1_periodic_identity() {
    // Expected values from the explicit spectrum (theta + 2 pi k)^2 + V.
    let explicit = |v: f64, theta: f64| (-30i64..=30).filter(|k| (theta + 2.0 * PI * *k as f64).powi(2) + v < 0.0).count() as i64;
    let cases = [-5.0, -2.0 * PI * PI, -40.0];
    let mut all = true;
    for v in cases {
        let expected = explicit(v, 0.0) - explicit(v, PI);
        all &= periodic_case(Potential1D::scalar(v), expected, &format!("V = {v:.6}"));
    }
    let expected = 2 * (explicit(-5.0, 0.0) - explicit(-5.0, PI));
    all &= periodic_case(Potential1D::diagonal(&[-5.0, -5.0]), expected, "V = -5 I_2");
    assert!(all);
}

// Criterion 2

fn explicit_laplacian(cell_dual: &[[f64; 2]], theta: &[f64], count: usize) -> Vec<f64> {
    let n = theta.len();
    let range = 12i64;
    let mut out = Vec::new();
    if n == 1 {
        for k in -range..=range {
            let w = cell_dual[0][0] * (theta[0] - k as f64);
            out.push(w * w);
        }
    } else {
        for k0 in -range..=range {
            for k1 in -range..=range {
                let d = [theta[0] - k0 as f64, theta[1] - k1 as f64];
                let w0 = cell_dual[0][0] * d[0] + cell_dual[1][0] * d[1];
                let w1 = cell_dual[0][1] * d[0] + cell_dual[1][1] * d[1];
                out.push(w0 * w0 + w1 * w1);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.truncate(count);
    out
}

fn galerkin_lowest(cell: LatticeCell, cutoff: usize, count: usize) -> Vec<f64> {
    let dim = cell.dim();
    let pot = FourierPotential::constant(dim, CMatrix::zeros(1, 1)).unwrap();
    let family = ScaledFamily::new(cell, pot).unwrap();
    let h = galerkin_matrix(&family, 1.0, &FourierTruncation::new(dim, cutoff).unwrap()).unwrap();
    linalg::hermitian_eigenvalues(&h).into_iter().take(count).collect()
}

fn spectra_agree(a: &[f64], b: &[f64]) -> (bool, f64) {
    let worst = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max);
    (a.len() == b.len() && worst <= SPECTRUM_REL_TOL, worst)
}

#[test]
fn criterion_2_exact_laplacian_spectrum() {
    let start = Instant::now();
    let two_pi = 2.0 * PI;
    let mut ok = true;
    let mut detail = String::new();

    for theta in [0.0, 0.5, 0.3] {
        let exact = explicit_laplacian(&[[two_pi, 0.0], [0.0, 0.0]], &[theta], 20);
        let got = galerkin_lowest(LatticeCell::unit(&[theta]).unwrap(), 12, 20);
        let (agree, worst) = spectra_agree(&got, &exact);
        ok &= agree;
        ok &= spectra_agree(&exact_laplacian_spectrum(&LatticeCell::unit(&[theta]).unwrap(), 20, 1), &exact).0;
        detail += &format!("n=1 theta={theta}: {worst:.1e}; ");
    }
    // A 2 x 2 square cell: dual basis 2 pi S^{-1} = pi I.
    for theta in [[0.0, 0.0], [0.25, 0.5]] {
        let cell = LatticeCell::new(&[vec![2.0, 0.0], vec![0.0, 2.0]], &theta).unwrap();
        let exact = explicit_laplacian(&[[PI, 0.0], [0.0, PI]], &theta, 20);
        let got = galerkin_lowest(cell, 5, 20);
        let (agree, worst) = spectra_agree(&got, &exact);
        ok &= agree;
        detail += &format!("n=2 theta={theta:?}: {worst:.1e}; ");
    }
    let passed = verdict(2, "exact Laplacian spectrum", ok, start.elapsed(), Duration::from_secs(1), detail.trim_end_matches("; "));
    assert!(passed);
}

// Criterion 3

#[test]
fn criterion_3_scaling_identity() {
    let start = Instant::now();
    let opts = ScalingOptions::default();
    let k16 = FourierTruncation::new(1, 16).unwrap();
    let k32 = k16.doubled();

    let family = ScaledFamily::new(
        LatticeCell::unit(&[0.5]).unwrap(),
        FourierPotential::constant(1, CMatrix::from_element(1, 1, c(-2.0 * PI * PI, 0.0))).unwrap(),
    )
    .unwrap();
    let r = verify_y19(&family, 0.05, &k16, &opts).unwrap();
    let mut ok = r.pass
        && r.flow_identity
        && r.morse_tau == 0
        && r.morse_one == 2
        && r.spectral_flow == -2
        && r.branch == SmallScaleBranch::Quasiperiodic
        && r.morse_small == 0
        && r.morse_one_predicted == 2
        && r.small_scale_identity;
    for t in [0.05, 1.0] {
        ok &= morse_index(&galerkin_matrix(&family, t, &k16).unwrap())
            == morse_index(&galerkin_matrix(&family, t, &k32).unwrap());
    }
    let mut detail = format!(
        "Mor(tau)={} Mor(1)={} SpFlow={} small-scale Mor(1)={}",
        r.morse_tau, r.morse_one, r.spectral_flow, r.morse_one_predicted
    );

    let periodic = ScaledFamily::new(
        LatticeCell::unit(&[0.0]).unwrap(),
        FourierPotential::constant(1, CMatrix::from_diagonal(&maslov_core::CVector::from_vec(vec![c(-1.0, 0.0), c(1.0, 0.0)]))).unwrap(),
    )
    .unwrap();
    let p = verify_y19(&periodic, 0.05, &k16, &opts).unwrap();
    ok &= p.pass && p.branch == SmallScaleBranch::Periodic && p.morse_small == 1 && p.morse_small_predicted == 1;
    for t in [p.tau_stable, 1.0] {
        ok &= morse_index(&galerkin_matrix(&periodic, t, &k16).unwrap())
            == morse_index(&galerkin_matrix(&periodic, t, &k32).unwrap());
    }
    detail += &format!("; periodic small-scale Mor={} (expected Mor(V(0))={})", p.morse_small, p.morse_small_predicted);
    let passed = verdict(3, "scaled band identity", ok, start.elapsed(), Duration::from_secs(60), &detail);
    assert!(passed);
}

// Criterion 4

fn periodic_square_family() -> Family1D {
    Family1D::new(Potential1D::scalar(-5.0), SweepKind::ThetaPeriodic, 0.0, PI).unwrap()
}

#[test]
fn criterion_4_homotopy_square() {
    let start = Instant::now();
    let r = run_square(&periodic_square_family(), &VerifyConfig::default()).unwrap();
    let indices: Vec<i64> = r.sides.iter().map(|s| s.index).collect();
    let negative = r.sides[0].crossings.iter().all(|x| x.form_eigenvalues.iter().all(|&e| e < 0.0));
    let positive = r.sides[2].crossings.iter().all(|x| x.form_eigenvalues.iter().all(|&e| e > 0.0));
    let ok = r.pass
        && indices == [-1, 1, 0, 0]
        && r.total == 0
        && r.check_consistent().is_ok()
        && negative
        && positive
        && !r.sides[0].crossings.is_empty()
        && r.sides[3].crossings.is_empty();
    let detail = format!("sides {indices:?}, total {}, lambda_inf {:.3}", r.total, r.lambda_inf);
    let passed = verdict(4, "homotopy square", ok, start.elapsed(), Duration::from_secs(30), &detail);
    assert!(passed);
}

// Criterion 5

#[test]
fn criterion_5_robin_monotonicity() {
    let start = Instant::now();
    let r = verify_robin_monotone(&Potential1D::scalar(0.0), -3.0, 1.0, &VerifyConfig::default()).unwrap();
    let forms_ok = r
        .kernel_points
        .iter()
        .all(|k| k.negative_definite && !k.form_eigenvalues.is_empty() && k.form_eigenvalues.iter().all(|&e| e < ROBIN_FORM_BOUND));
    let ok = r.pass
        && r.kernel_points.len() >= 2
        && r.lhs_morse_diff == r.kernel_sum
        && r.rhs_maslov == r.kernel_sum
        && forms_ok
        && !r.endpoint_kernel;
    let detail = format!(
        "Mor diff {} = {} - {}, kernel sum {}, kernel points at {:?}",
        r.lhs_morse_diff,
        r.morse_start,
        r.morse_end,
        r.kernel_sum,
        r.kernel_points.iter().map(|k| (k.theta * 1e6).round() / 1e6).collect::<Vec<_>>()
    );
    let passed = verdict(5, "Robin monotonicity", ok, start.elapsed(), Duration::from_secs(20), &detail);
    assert!(passed);
}

// Criterion 6

#[derive(Default)]
struct Worst {
    round_trip: f64,
    unitarity: f64,
    isotropy: f64,
    form: f64,
    structure: f64,
    hermitian: f64,
    cayley: f64,
    failures: usize,
}

fn round_trips(n: usize, trials: usize, w: &mut Worst) {
    let mut rng = common::rng(600 + n as u64);
    let x = SymplecticSpace::standard(n);
    let j = x.structure();
    let id = CMatrix::identity(2 * n, 2 * n);
    w.structure = w.structure.max(linalg::max_abs(&(j * j + &id))).max(linalg::max_abs(&(j.adjoint() + j)));
    let (ep, em) = (x.ker_j_plus_i(), x.ker_j_minus_i());
    for _ in 0..trials {
        let u = common::haar_unitary(&mut rng, n);
        let plane = LagrangianPlane::from_graph(&x, &u).unwrap();
        // rebuild from a scrambled basis so the unitary is recomputed from scratch
        let scramble = common::gaussian(&mut rng, n, n) + CMatrix::identity(n, n) * c(2.0, 0.0);
        let rebuilt = LagrangianPlane::from_basis(&x, &(plane.basis() * scramble)).unwrap();
        let back = rebuilt.graph_unitary().unwrap();
        w.round_trip = w.round_trip.max(linalg::spectral_norm(&(back - &u)));
        w.unitarity = w.unitarity.max(linalg::spectral_norm(&(back.adjoint() * back - CMatrix::identity(n, n))));
        w.isotropy = w.isotropy.max(rebuilt.isotropy_residual());
        let ann = annihilator(&x, rebuilt.basis()).unwrap();
        if !same_subspace(&ann, rebuilt.basis(), 1e-10) {
            w.failures += 1;
        }
        // omega(x, y) = -omega(Ux, Uy) for x, y in ker(J + i)
        let plus = x.omega_matrix(ep, ep);
        let ue = em * &u;
        let minus = x.omega_matrix(&ue, &ue);
        w.form = w.form.max(linalg::max_abs(&(plus + minus)));
    }
}

fn prescribed_intersections(n: usize, trials: usize, w: &mut Worst) {
    let mut rng = common::rng(700 + n as u64);
    let x = SymplecticSpace::standard(n);
    for trial in 0..trials {
        let k = trial % (n + 1);
        let u = common::haar_unitary(&mut rng, n);
        let fixed = common::unitary_with_fixed_space(&mut rng, n, k);
        // U_F V^* = W has exactly k unit eigenvalues
        let v = fixed.adjoint() * &u;
        let f = LagrangianPlane::from_graph(&x, &u).unwrap();
        let z = LagrangianPlane::from_graph(&x, &v).unwrap();
        let by_phase = intersection_dim(&f, &z, INTERSECTION_TOL).unwrap();
        let by_svd = principal_angles(&f, &z).iter().filter(|&&a| a < 0.75 * INTERSECTION_TOL).count();
        if by_phase != k || by_svd != k {
            w.failures += 1;
        }
    }
}

fn cayley_checks(n: usize, trials: usize, w: &mut Worst) {
    let mut rng = common::rng(800 + n as u64);
    let x = SymplecticSpace::standard(n);
    let j = x.structure().clone();
    for _ in 0..trials {
        let f = common::random_plane(&mut rng, &x);
        let a = common::hermitian(&mut rng, n, 1.0);
        let columns = f.basis() + &j * f.basis() * &a;
        let v = LagrangianPlane::from_basis(&x, &columns).unwrap();
        let recovered = ja_graph_decompose(&v, &f).unwrap();
        w.hermitian = w.hermitian.max(linalg::max_abs(&(&recovered - recovered.adjoint())));
        let transported = unitary_on_reference(&v, &f).unwrap();
        let diff = linalg::max_abs(&(transported - cayley(&recovered).unwrap()));
        let scale = 1.0 + linalg::max_abs(&a);
        w.cayley = w.cayley.max(diff).max(linalg::max_abs(&(&recovered - &a)) / scale);
    }
}

#[test]
fn criterion_6_symplectic_properties() {
    let start = Instant::now();
    let dims = [1usize, 2, 4];
    let worst: Vec<Worst> = dims
        .par_iter()
        .map(|&n| {
            let mut w = Worst::default();
            round_trips(n, 1000, &mut w);
            prescribed_intersections(n, 1000, &mut w);
            cayley_checks(n, 200, &mut w);
            w
        })
        .collect();
    let mut ok = true;
    let mut detail = String::new();
    for (n, w) in dims.iter().zip(&worst) {
        ok &= w.round_trip <= ROUND_TRIP_TOL
            && w.unitarity <= ROUND_TRIP_TOL
            && w.isotropy <= ISOTROPY_TOL
            && w.form <= FORM_TOL
            && w.structure <= STRUCTURE_TOL
            && w.hermitian <= HERMITIAN_TOL
            && w.cayley <= CAYLEY_TOL
            && w.failures == 0;
        detail += &format!(
            "n={n}: round trip {:.1e}, isotropy {:.1e}, form {:.1e}, Cayley {:.1e}, failures {}; ",
            w.round_trip, w.isotropy, w.form, w.cayley, w.failures
        );
    }
    let passed = verdict(6, "symplectic property suite", ok, start.elapsed(), Duration::from_secs(30), detail.trim_end_matches("; "));
    assert!(passed);
}

// Criterion 7

struct Scenario {
    name: String,
    path: LagrangianPath,
    reference: LagrangianPlane,
}

fn doubled_scenario(name: String, first: &LagrangianPath, second: &LagrangianPath) -> Scenario {
    let (path, reference) = doubled_pair(first, second).unwrap();
    Scenario { name, path, reference }
}

fn scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    let periodic = [
        Potential1D::scalar(-5.0),
        Potential1D::scalar(-2.0 * PI * PI),
        Potential1D::scalar(-40.0),
        Potential1D::diagonal(&[-5.0, -5.0]),
    ];
    for pot in periodic {
        let k0 = solution_space_trace(&pot, 0.0, DEFAULT_STEPS).unwrap();
        let first = LagrangianPath::constant(k0, 0.0, PI).unwrap();
        let second = theta_periodic_path(pot.size(), 0.0, PI).unwrap();
        out.push(doubled_scenario(format!("periodic m={} V={:.3}", pot.size(), pot.eval(0.0)[(0, 0)].re), &first, &second));
    }
    let family = periodic_square_family();
    let square = HomotopySquare { family, steps: DEFAULT_STEPS };
    for (i, (k, g)) in square.sides().unwrap().into_iter().enumerate() {
        out.push(doubled_scenario(format!("square side {}", i + 1), &k, &g));
    }
    let k0 = solution_space_trace(&Potential1D::scalar(0.0), 0.0, DEFAULT_STEPS).unwrap();
    let first = LagrangianPath::constant(k0, -3.0, 1.0).unwrap();
    out.push(doubled_scenario("Robin V=0".into(), &first, &scalar_robin_path(1, -3.0, 1.0).unwrap()));
    out
}

fn split_point(path: &LagrangianPath, crossings: &[f64]) -> f64 {
    let (a, b) = (path.start(), path.end());
    let mut s = a + 0.43 * (b - a);
    while crossings.iter().any(|&x| (x - s).abs() < 0.02 * (b - a)) {
        s += 0.037 * (b - a);
    }
    s
}

fn check_scenario(sc: &Scenario) -> Result<(), String> {
    let opts = MaslovOptions::default();
    let base = maslov_index(&sc.path, &sc.reference, &opts).map_err(|e| e.to_string())?;
    let locations: Vec<f64> = base.crossings.iter().map(|x| x.location).collect();

    let fine_opts = MaslovOptions { nodes_per_segment: 9, ..opts };
    let refined = maslov_index(&sc.path.clone().with_intervals(37), &sc.reference, &fine_opts).map_err(|e| e.to_string())?;
    if refined.index != base.index {
        return Err(format!("partition dependence {} vs {}", base.index, refined.index));
    }

    let mid = split_point(&sc.path, &locations);
    let left = maslov_index(&sc.path.restricted(sc.path.start(), mid).unwrap(), &sc.reference, &opts).map_err(|e| e.to_string())?;
    let right = maslov_index(&sc.path.restricted(mid, sc.path.end()).unwrap(), &sc.reference, &opts).map_err(|e| e.to_string())?;
    if left.index + right.index != base.index {
        return Err(format!("catenation {} + {} != {}", left.index, right.index, base.index));
    }

    let (a, b) = (sc.path.start(), sc.path.end());
    let warped = sc.path.reparametrized(0.0, 1.0, move |s| a + (b - a) * 0.5 * (s + s * s)).unwrap();
    let re = maslov_index(&warped, &sc.reference, &opts).map_err(|e| e.to_string())?;
    if re.index != base.index {
        return Err(format!("reparametrization {} vs {}", re.index, base.index));
    }

    let by_forms = maslov_via_crossings(&sc.path, &sc.reference, &locations).map_err(|e| e.to_string())?;
    if by_forms.index != base.index {
        return Err(format!("crossing forms {} vs spectral flow {}", by_forms.index, base.index));
    }
    Ok(())
}

#[test]
fn criterion_7_engine_invariants() {
    let start = Instant::now();
    let outcomes: Vec<(String, Result<(), String>)> = scenarios()
        .par_iter()
        .map(|sc| (sc.name.clone(), check_scenario(sc)))
        .collect();
    let mut failures: Vec<String> = outcomes
        .iter()
        .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
        .collect();

    let x_dims = [1usize, 2, 3];
    let two_path: Vec<Option<String>> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = common::rng(900 + i);
            let space = SymplecticSpace::standard(x_dims[i as usize % 3]);
            let path = common::random_path(&mut rng, &space, 6.0);
            let fixed = common::random_plane(&mut rng, &space);
            let opts = MaslovOptions::default();
            let single = maslov_index(&path, &fixed, &opts).map_err(|e| e.to_string());
            let constant = LagrangianPath::constant(fixed, 0.0, 1.0).unwrap();
            let double = maslov_two_paths(&path, &constant, &opts).map_err(|e| e.to_string());
            match (single, double) {
                (Ok(a), Ok(b)) if a.index == b.index => None,
                (a, b) => Some(format!("random path {i}: {:?} vs {:?}", a.map(|r| r.index), b.map(|r| r.index))),
            }
        })
        .collect();
    failures.extend(two_path.into_iter().flatten());

    let detail = if failures.is_empty() {
        format!("{} scenarios, 50 random two-path reductions", outcomes.len())
    } else {
        failures.join("; ")
    };
    let passed = verdict(7, "Maslov engine invariants", failures.is_empty(), start.elapsed(), Duration::from_secs(60), &detail);
    assert!(passed);
}

// Criterion 8

#[test]
fn criterion_8_kernel_bridge() {
    let start = Instant::now();
    let coupled = Potential1D::fourier(vec![
        (0, CMatrix::from_row_slice(2, 2, &[c(-3.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(2.0, 0.0)])),
        (1, CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.0), c(-1.0, 0.0)])),
        (-1, CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, -0.5), c(-1.0, 0.0)])),
    ])
    .unwrap();
    // A second harmonic splits the periodic pairs above the oracle's resolution;
    // a single cosine leaves exponentially small gaps.
    let scalar = |v: C64| CMatrix::from_element(1, 1, v);
    let cosine = Potential1D::fourier(vec![
        (0, scalar(c(1.0, 0.0))),
        (1, scalar(c(1.5, 0.0))),
        (-1, scalar(c(1.5, 0.0))),
        (2, scalar(c(0.0, -1.0))),
        (-2, scalar(c(0.0, 1.0))),
    ])
    .unwrap();
    let potentials = [("V=0", Potential1D::scalar(0.0)), ("cosine", cosine), ("coupled m=2", coupled)];
    let mut jobs = Vec::new();
    for (label, pot) in &potentials {
        let m = pot.size();
        let robin = CMatrix::from_fn(2 * m, 2 * m, |i, j| if i == j { c(-1.5 + i as f64, 0.0) } else { c(0.3, if i < j { 0.2 } else { -0.2 }) });
        let kinds = [
            ("Dirichlet", ExtensionKind::Dirichlet),
            ("Neumann", ExtensionKind::Neumann),
            ("Robin", ExtensionKind::Robin(robin)),
            ("periodic", ExtensionKind::ThetaPeriodic(0.0)),
            ("quasi-periodic", ExtensionKind::ThetaPeriodic(1.1)),
        ];
        for (kind_label, kind) in kinds {
            jobs.push((format!("{label} {kind_label}"), pot.clone(), kind));
        }
    }
    let cfg = VerifyConfig::default();
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(label, pot, kind)| match kernel_bridge(pot, kind, 4, &cfg) {
            Ok(r) if r.pass => None,
            Ok(r) => Some(format!(
                "{label}: {:?}",
                r.entries.iter().map(|e| (e.oracle_multiplicity, e.intersection_dim)).collect::<Vec<_>>()
            )),
            Err(e) => Some(format!("{label}: {e}")),
        })
        .collect();
    let detail = if failures.is_empty() { format!("{} extension/potential pairs", jobs.len()) } else { failures.join("; ") };
    let passed = verdict(8, "kernel dimension bridge", failures.is_empty(), start.elapsed(), Duration::from_secs(30), &detail);
    assert!(passed);
}
