use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::extension::{extension_plane, ExtensionKind};
use super::oracle::{oracle_spectrum, OracleProblem, SpectrumResult};
use super::potential::Potential1D;
use super::trace::{solution_space_trace, BoundaryTriple1D, DEFAULT_STEPS};
use crate::maslov::{
    crossing_form, doubled_pair, maslov_two_paths, maslov_via_crossings, CrossingReport, LagrangianPath,
    MaslovOptions, PartitionSegment,
};
use crate::symplectic::{intersection_dim, relative_phases, LagrangianPlane};
use crate::{Error, Result};

/// Numerical settings shared by the one-dimensional checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// RK4 steps for solution-space traces.
    pub steps: usize,
    /// Coarse grid of the spectral oracle; the fine grid is twice as large.
    pub oracle_grid: usize,
    /// Grid used when scanning a parameter for kernel points.
    pub sweep_grid: usize,
    /// Parameter samples in a kernel scan.
    pub scan_points: usize,
    /// Angular tolerance for intersection dimensions at kernel points.
    pub kernel_tol: f64,
    pub maslov: MaslovOptions,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            oracle_grid: 2000,
            sweep_grid: 400,
            scan_points: 64,
            kernel_tol: 1e-6,
            maslov: MaslovOptions::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(what.to_string()));
        if !(64..=1 << 20).contains(&self.steps) {
            return bad("steps must lie in [64, 2^20]");
        }
        if !(16..=200_000).contains(&self.oracle_grid) || !(16..=200_000).contains(&self.sweep_grid) {
            return bad("oracle grids must lie in [16, 200000]");
        }
        if self.scan_points < 2 {
            return bad("scan_points must be at least 2");
        }
        if !(self.kernel_tol > 0.0 && self.kernel_tol < 0.1) {
            return bad("kernel_tol must lie in (0, 0.1)");
        }
        let m = &self.maslov;
        if !(m.zero_tol > 0.0 && m.crossing_tol > 0.0 && m.gap_threshold > 0.0 && m.max_phase_step > 0.0) {
            return bad("Maslov tolerances must be positive");
        }
        if m.nodes_per_segment < 2 || m.max_depth == 0 {
            return bad("nodes_per_segment must be at least 2 and max_depth positive");
        }
        Ok(())
    }
}

/// Comparison of a Morse index difference with a Maslov index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs_morse_diff: i64,
    pub rhs_maslov: i64,
    pub crossings: Vec<CrossingReport>,
    pub pass: bool,
    pub morse_start: usize,
    pub morse_end: usize,
    /// Index recomputed from crossing-form signatures when all crossings are regular.
    pub crossing_form_index: Option<i64>,
    pub partition: Vec<PartitionSegment>,
    /// The parameter window leaves `[0, pi]`.
    pub beyond_stated_range: bool,
}

/// One parameter value at which the operator has a kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub theta: f64,
    pub dim: usize,
    /// Drop of the discrete Morse count across the point.
    pub oracle_jump: i64,
    /// Smallest `|eigenvalue|` of the oracle at `theta`, with its error band.
    pub min_abs_eigenvalue: f64,
    pub band: f64,
    /// Crossing form of the boundary-condition path against the solution plane.
    pub form_eigenvalues: Vec<f64>,
    pub negative_definite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobinReport {
    pub lhs_morse_diff: i64,
    pub rhs_maslov: i64,
    pub kernel_sum: i64,
    pub kernel_points: Vec<KernelPoint>,
    pub crossings: Vec<CrossingReport>,
    pub pass: bool,
    pub morse_start: usize,
    pub morse_end: usize,
    /// A window end is itself a kernel point.
    pub endpoint_kernel: bool,
}

fn strict_morse(s: &SpectrumResult) -> (usize, bool) {
    match s.morse() {
        Ok(m) => (m, false),
        Err(_) => {
            let m = s.eigenvalues.iter().zip(&s.tolerances).filter(|(e, t)| **e < -**t).count();
            (m, true)
        }
    }
}

fn boundary_path(size: usize, start: f64, end: f64, kind: fn(usize, f64) -> ExtensionKind) -> Result<LagrangianPath> {
    let space = BoundaryTriple1D::new(size).space().clone();
    LagrangianPath::new(&space, start, end, move |t| Ok(extension_plane(size, kind(size, t))?.plane))
}

fn periodic_kind(_: usize, theta: f64) -> ExtensionKind {
    ExtensionKind::ThetaPeriodic(theta)
}

fn robin_kind(size: usize, theta: f64) -> ExtensionKind {
    ExtensionKind::scalar_robin(size, theta)
}

/// The theta-periodic family of boundary planes on `[start, end]`.
pub fn theta_periodic_path(size: usize, start: f64, end: f64) -> Result<LagrangianPath> {
    boundary_path(size, start, end, periodic_kind)
}

/// The scalar Robin family `Theta = theta I` on `[start, end]`.
pub fn scalar_robin_path(size: usize, start: f64, end: f64) -> Result<LagrangianPath> {
    boundary_path(size, start, end, robin_kind)
}

fn crossing_index(first: &LagrangianPath, second: &LagrangianPath, crossings: &[CrossingReport]) -> Option<i64> {
    let (sum, diagonal) = doubled_pair(first, second).ok()?;
    let locations: Vec<f64> = crossings.iter().map(|c| c.location).collect();
    maslov_via_crossings(&sum, &diagonal, &locations).ok().map(|r| r.index)
}

/// `Mor(L_{theta1}) - Mor(L_{theta2}) = Mas(K_0, G_theta)` for theta-periodic
/// boundary conditions, where `K_0` is the trace plane of the solutions at
/// spectral parameter zero.
pub fn verify_identity_rr15(potential: &Potential1D, theta1: f64, theta2: f64, cfg: &VerifyConfig) -> Result<IdentityReport> {
    cfg.validate()?;
    if theta1.partial_cmp(&theta2) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidInput(format!("need theta1 < theta2, got [{theta1}, {theta2}]")));
    }
    let m = potential.size();
    let ((s1, s2), k0) = rayon::join(
        || {
            rayon::join(
                || oracle_spectrum(potential, &ExtensionKind::ThetaPeriodic(theta1), cfg.oracle_grid, 1),
                || oracle_spectrum(potential, &ExtensionKind::ThetaPeriodic(theta2), cfg.oracle_grid, 1),
            )
        },
        || solution_space_trace(potential, 0.0, cfg.steps),
    );
    let (morse_start, morse_end) = (s1?.morse()?, s2?.morse()?);
    let kpath = LagrangianPath::constant(k0?, theta1, theta2)?;
    let gpath = theta_periodic_path(m, theta1, theta2)?;
    let res = maslov_two_paths(&kpath, &gpath, &cfg.maslov)?;
    let crossing_form_index = crossing_index(&kpath, &gpath, &res.crossings);
    let lhs = morse_start as i64 - morse_end as i64;
    let pass = lhs == res.index && crossing_form_index.is_none_or(|c| c == res.index);
    Ok(IdentityReport {
        lhs_morse_diff: lhs,
        rhs_maslov: res.index,
        crossings: res.crossings,
        pass,
        morse_start,
        morse_end,
        crossing_form_index,
        partition: res.partition,
        beyond_stated_range: theta1 < 0.0 || theta2 > PI,
    })
}

/// Parameter values in `(start, end]` where the discrete Morse count of
/// `kind(t)` drops or rises, with the size of the jump.
fn scan_kernel_points(
    potential: &Potential1D,
    kind: fn(usize, f64) -> ExtensionKind,
    start: f64,
    end: f64,
    cfg: &VerifyConfig,
) -> Result<Vec<(f64, i64)>> {
    let m = potential.size();
    let count = |t: f64| -> Result<i64> {
        Ok(OracleProblem::new(potential, &kind(m, t), cfg.sweep_grid)?.count_below(0.0) as i64)
    };
    let n = cfg.scan_points;
    let ts: Vec<f64> = (0..=n).map(|i| start + (end - start) * i as f64 / n as f64).collect();
    let counts: Vec<i64> = ts.iter().map(|&t| count(t)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 1..ts.len() {
        if counts[i] == counts[i - 1] {
            continue;
        }
        let (mut a, mut b, ca) = (ts[i - 1], ts[i], counts[i - 1]);
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if count(mid)? == ca {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push((0.5 * (a + b), counts[i - 1] - counts[i]));
    }
    Ok(out)
}

/// Monotonicity of the Morse index along `Theta = theta I` Robin conditions:
/// `Mor(theta1) - Mor(theta2)` equals the number of kernel points in
/// `(theta1, theta2]` counted with multiplicity, equals `Mas(K_0, G_theta)`,
/// and every crossing form of `G_theta` against `K_0` is negative definite.
pub fn verify_robin_monotone(potential: &Potential1D, theta1: f64, theta2: f64, cfg: &VerifyConfig) -> Result<RobinReport> {
    cfg.validate()?;
    if theta1.partial_cmp(&theta2) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidInput(format!("need theta1 < theta2, got [{theta1}, {theta2}]")));
    }
    let m = potential.size();
    let s1 = oracle_spectrum(potential, &robin_kind(m, theta1), cfg.oracle_grid, 1)?;
    let s2 = oracle_spectrum(potential, &robin_kind(m, theta2), cfg.oracle_grid, 1)?;
    let (morse_start, amb1) = strict_morse(&s1);
    let (morse_end, amb2) = strict_morse(&s2);
    let k0 = solution_space_trace(potential, 0.0, cfg.steps)?;
    let kpath = LagrangianPath::constant(k0.clone(), theta1, theta2)?;
    let gpath = scalar_robin_path(m, theta1, theta2)?;
    let res = maslov_two_paths(&kpath, &gpath, &cfg.maslov)?;

    let scanned = scan_kernel_points(potential, robin_kind, theta1, theta2, cfg)?;
    let span = theta2 - theta1;
    let mut kernel_points = Vec::new();
    let mut matched_all = scanned.len() == res.crossings.iter().filter(|c| c.location > theta1).count();
    for (t_oracle, jump) in scanned {
        // prefer the location found on the Lagrangian side, which is not
        // limited by the discretization error of the oracle grid
        let theta = res
            .crossings
            .iter()
            .map(|c| c.location)
            .min_by(|a, b| (a - t_oracle).abs().total_cmp(&(b - t_oracle).abs()))
            .filter(|t| (t - t_oracle).abs() <= 1e-3 * span.max(1.0))
            .unwrap_or_else(|| {
                matched_all = false;
                t_oracle
            });
        kernel_points.push(kernel_point(potential, &k0, &gpath, theta, jump, cfg)?);
    }
    let kernel_sum = kernel_points.iter().map(|k| k.dim as i64).sum();
    let lhs = morse_start as i64 - morse_end as i64;
    let pass = matched_all
        && lhs == res.index
        && lhs == kernel_sum
        && kernel_points.iter().all(|k| k.negative_definite && k.dim as i64 == k.oracle_jump);
    Ok(RobinReport {
        lhs_morse_diff: lhs,
        rhs_maslov: res.index,
        kernel_sum,
        kernel_points,
        crossings: res.crossings,
        pass,
        morse_start,
        morse_end,
        endpoint_kernel: amb1 || amb2,
    })
}

fn kernel_point(
    potential: &Potential1D,
    k0: &LagrangianPlane,
    gpath: &LagrangianPath,
    theta: f64,
    jump: i64,
    cfg: &VerifyConfig,
) -> Result<KernelPoint> {
    let m = potential.size();
    let g = gpath.sample(theta)?;
    let dim = intersection_dim(k0, &g, cfg.kernel_tol)?;
    let spec = oracle_spectrum(potential, &robin_kind(m, theta), cfg.oracle_grid, 1)?;
    let (min_abs_eigenvalue, band) = spec
        .eigenvalues
        .iter()
        .zip(&spec.tolerances)
        .map(|(e, t)| (e.abs(), *t))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((f64::INFINITY, 0.0));
    let form = crossing_form(gpath, k0, theta)?;
    let negative_definite = form.intersection_dim == dim && form.form_eigenvalues.iter().all(|&e| e < -1e-8);
    Ok(KernelPoint {
        theta,
        dim,
        oracle_jump: jump,
        min_abs_eigenvalue,
        band,
        form_eigenvalues: form.form_eigenvalues,
        negative_definite,
    })
}

/// Oracle eigenvalue cluster compared with the intersection dimension of the
/// solution plane and the boundary plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeEntry {
    pub lambda: f64,
    /// Nearby spectral parameter where the solution plane meets the boundary plane.
    pub refined_lambda: f64,
    pub oracle_multiplicity: usize,
    pub intersection_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub entries: Vec<BridgeEntry>,
    /// Intersection dimensions at midpoints between eigenvalues.
    pub gap_dims: Vec<usize>,
    pub pass: bool,
}

/// Secant iteration on the relative eigenphase closest to zero, started at
/// the oracle eigenvalue and kept inside `[lambda - window, lambda + window]`.
fn refine_kernel_point(potential: &Potential1D, g: &LagrangianPlane, lambda: f64, window: f64, steps: usize) -> Result<f64> {
    let nearest = |l: f64| -> Result<f64> {
        let k = solution_space_trace(potential, l, steps)?;
        let phases = relative_phases(&k, g)?;
        Ok(phases.into_iter().min_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(f64::INFINITY))
    };
    let (lo, hi) = (lambda - window, lambda + window);
    let mut x0 = lambda;
    let mut f0 = nearest(x0)?;
    let mut x1 = lambda + 0.25 * window;
    let mut f1 = nearest(x1)?;
    for _ in 0..30 {
        if f1.abs() < 1e-13 || f1 == f0 {
            break;
        }
        let next = (x1 - f1 * (x1 - x0) / (f1 - f0)).clamp(lo, hi);
        if (next - x1).abs() <= 1e-15 * (1.0 + x1.abs()) {
            break;
        }
        (x0, f0) = (x1, f1);
        x1 = next;
        f1 = nearest(x1)?;
    }
    Ok(if f1.abs() <= f0.abs() { x1 } else { x0 })
}

/// For each of the lowest oracle eigenvalue clusters `lambda*`, compares the
/// multiplicity with `dim(K_{lambda*} ∩ G)` and checks that the intersection
/// is trivial between clusters. The intersection is measured where the planes
/// actually meet, found within a few oracle error bands of `lambda*`.
pub fn kernel_bridge(potential: &Potential1D, kind: &ExtensionKind, clusters: usize, cfg: &VerifyConfig) -> Result<BridgeReport> {
    cfg.validate()?;
    let m = potential.size();
    let g = extension_plane(m, kind.clone())?.plane;
    let spec = oracle_spectrum(potential, kind, cfg.oracle_grid, 2 * m * (clusters + 1) + 2)?;
    let ev = &spec.eigenvalues;
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &e in ev {
        match groups.last_mut() {
            Some(last) if (e - last[0]).abs() <= 1e-6 * (1.0 + e.abs()) => last.push(e),
            _ => groups.push(vec![e]),
        }
    }
    groups.pop();
    groups.truncate(clusters);
    let mut bands = Vec::new();
    let mut offset = 0;
    for grp in &groups {
        bands.push(spec.tolerances[offset..offset + grp.len()].iter().cloned().fold(0.0, f64::max));
        offset += grp.len();
    }
    let centers: Vec<f64> = groups.iter().map(|g| g.iter().sum::<f64>() / g.len() as f64).collect();
    let mut entries = Vec::new();
    for ((grp, &lambda), &band) in groups.iter().zip(&centers).zip(&bands) {
        let window = 4.0 * band + 1e-8 * (1.0 + lambda.abs());
        let refined = refine_kernel_point(potential, &g, lambda, window, cfg.steps)?;
        let k = solution_space_trace(potential, refined, cfg.steps)?;
        let dim = if (refined - lambda).abs() <= window { intersection_dim(&k, &g, cfg.kernel_tol)? } else { 0 };
        entries.push(BridgeEntry { lambda, refined_lambda: refined, oracle_multiplicity: grp.len(), intersection_dim: dim });
    }
    let mut gap_dims = Vec::new();
    for w in centers.windows(2) {
        let k = solution_space_trace(potential, 0.5 * (w[0] + w[1]), cfg.steps)?;
        gap_dims.push(intersection_dim(&k, &g, cfg.kernel_tol)?);
    }
    let pass = entries.iter().all(|e| e.oracle_multiplicity == e.intersection_dim) && gap_dims.iter().all(|&d| d == 0);
    Ok(BridgeReport { entries, gap_dims, pass })
}
