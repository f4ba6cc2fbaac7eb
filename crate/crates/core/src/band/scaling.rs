//! Spectral flow of the scaled family on `[tau, 1]` and its small-scale limit.

use serde::{Deserialize, Serialize};

use super::galerkin::{galerkin_matrix, morse_index, FourierTruncation, ScaledFamily};
use crate::linalg;
use crate::maslov::{spectral_flow_detailed, EigenTracks, FlowCrossing};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingOptions {
    /// Uniform grid points on `[tau, 1]` for eigenvalue tracks.
    pub grid_points: usize,
    /// Lower limit for the small-scale search.
    pub tau_min: f64,
    /// Consecutive equal Morse indices that count as stabilized.
    pub stable_run: usize,
    /// Tracks closer than this to zero at two consecutive grid points are ambiguous.
    pub touch_tol: f64,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self { grid_points: 200, tau_min: 1e-3, stable_run: 3, touch_tol: 1e-10 }
    }
}

/// Which small-scale limit applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallScaleBranch {
    /// Non-zero quasi-momentum: the operator is positive for small `t`.
    Quasiperiodic,
    /// Periodic case: the small-scale Morse index is that of `V(0)`.
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub tau: f64,
    pub spectral_flow: i64,
    pub flow_crossings: Vec<FlowCrossing>,
    pub morse_tau: usize,
    pub morse_one: usize,
    /// `Mor(L^tau) - Mor(L^1) = SpFlow` on `[tau, 1]`.
    pub flow_identity: bool,
    pub branch: SmallScaleBranch,
    /// Scale at which the Morse index had stabilized.
    pub tau_stable: f64,
    pub morse_small: usize,
    /// Limit predicted for small scales: `0`, or `Mor(V(0))` in the periodic case.
    pub morse_small_predicted: usize,
    /// Spectral flow on `[tau_stable, 1]`.
    pub spectral_flow_small: i64,
    /// `Mor(L^1)` recovered from the small-scale limit and the flow.
    pub morse_one_predicted: i64,
    pub small_scale_identity: bool,
    pub pass: bool,
    #[serde(skip)]
    pub tracks: EigenTracks,
}

fn checked_morse(family: &ScaledFamily, t: f64, truncation: &FourierTruncation) -> Result<usize> {
    let coarse = morse_index(&galerkin_matrix(family, t, truncation)?);
    let fine = morse_index(&galerkin_matrix(family, t, &truncation.doubled())?);
    if coarse != fine {
        return Err(Error::TruncationNotConverged { t, coarse, fine });
    }
    Ok(coarse)
}

fn tracks_on(family: &ScaledFamily, start: f64, points: usize, truncation: &FourierTruncation, count: usize) -> Result<EigenTracks> {
    use rayon::prelude::*;
    let ts: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { 1.0 } else { start + (1.0 - start) * i as f64 / (points - 1) as f64 })
        .collect();
    let rows: Vec<Vec<f64>> = ts
        .par_iter()
        .map(|&t| {
            let e = linalg::hermitian_eigenvalues(&galerkin_matrix(family, t, truncation)?);
            Ok(e.into_iter().take(count).collect())
        })
        .collect::<Result<_>>()?;
    let mut tracks = EigenTracks::default();
    for (t, r) in ts.into_iter().zip(rows) {
        tracks.push(t, r);
    }
    Ok(tracks)
}

/// Checks `Mor(L^tau) - Mor(L^1) = SpFlow` on `[tau, 1]` and the small-scale
/// limit of the Morse index (zero for non-zero quasi-momentum, `Mor(V(0))`
/// for periodic conditions). Every Morse index is compared against the
/// truncation with twice the cutoff.
pub fn verify_y19(family: &ScaledFamily, tau: f64, truncation: &FourierTruncation, opts: &ScalingOptions) -> Result<ScalingReport> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidInput(format!("tau = {tau} must lie in (0, 1)")));
    }
    if opts.grid_points < 2 || opts.stable_run == 0 {
        return Err(Error::InvalidInput("need at least two grid points and a positive stable run".into()));
    }
    let morse_tau = checked_morse(family, tau, truncation)?;
    let morse_one = checked_morse(family, 1.0, truncation)?;
    let dim = truncation.modes().len() * family.potential.size();
    let count = dim.min((morse_tau.max(morse_one) + 4).max(8));
    let tracks = tracks_on(family, tau, opts.grid_points, truncation, count)?;
    let flow = spectral_flow_detailed(&tracks, 0.0, opts.touch_tol)?;
    let flow_identity = morse_tau as i64 - morse_one as i64 == flow.flow;

    let periodic = family.cell.theta().iter().all(|&t| t == 0.0);
    let (branch, morse_small_predicted) = if periodic {
        let v0 = family.potential.at_origin();
        let eig = linalg::hermitian_eigenvalues(&v0);
        if eig.iter().any(|e| e.abs() < 1e-12) {
            return Err(Error::InvalidInput("V(0) must be invertible in the periodic case".into()));
        }
        (SmallScaleBranch::Periodic, eig.iter().filter(|&&e| e < 0.0).count())
    } else {
        (SmallScaleBranch::Quasiperiodic, 0)
    };

    let mut scale = tau;
    let mut history: Vec<(f64, usize)> = Vec::new();
    loop {
        history.push((scale, checked_morse(family, scale, truncation)?));
        let run = opts.stable_run;
        if history.len() >= run && history[history.len() - run..].iter().all(|h| h.1 == history[history.len() - 1].1) {
            break;
        }
        scale *= 0.5;
        if scale < opts.tau_min {
            return Err(Error::TauNotSmallEnough { tau_min: opts.tau_min });
        }
    }
    let (tau_stable, morse_small) = history[history.len() - 1];
    let small_tracks = if tau_stable == tau {
        tracks.clone()
    } else {
        tracks_on(family, tau_stable, opts.grid_points, truncation, count)?
    };
    let spectral_flow_small = spectral_flow_detailed(&small_tracks, 0.0, opts.touch_tol)?.flow;
    let morse_one_predicted = morse_small_predicted as i64 - spectral_flow_small;
    let small_scale_identity = morse_small == morse_small_predicted && morse_one_predicted == morse_one as i64;
    Ok(ScalingReport {
        tau,
        spectral_flow: flow.flow,
        flow_crossings: flow.crossings,
        morse_tau,
        morse_one,
        flow_identity,
        branch,
        tau_stable,
        morse_small,
        morse_small_predicted,
        spectral_flow_small,
        morse_one_predicted,
        small_scale_identity,
        pass: flow_identity && small_scale_identity,
        tracks,
    })
}
