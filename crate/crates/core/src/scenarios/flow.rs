use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::ScenarioSpec;
use super::square::{Family1D, SweepKind};
use crate::band::{verify_y19, ScalingOptions};
use crate::maslov::{maslov_two_paths, spectral_flow_detailed, EigenTracks, FlowCrossing, LagrangianPath};
use crate::schrodinger::{extension_plane, solution_space_trace, BoundaryTriple1D, OracleProblem, VerifyConfig};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowIdentityReport {
    pub scenario: String,
    pub spectral_flow: i64,
    pub flow_crossings: Vec<FlowCrossing>,
    /// Maslov index of the boundary-plane path, when the scenario has one.
    pub maslov: Option<i64>,
    pub morse_diff: i64,
    pub pass: bool,
    #[serde(skip)]
    pub tracks: EigenTracks,
}

fn sweep(family: &Family1D, cfg: &VerifyConfig, name: &str) -> Result<FlowIdentityReport> {
    let m = family.size();
    let n = cfg.scan_points.max(2);
    let ts: Vec<f64> = (0..=n)
        .map(|i| if i == n { family.beta } else { family.alpha + (family.beta - family.alpha) * i as f64 / n as f64 })
        .collect();
    let rows: Vec<(usize, Vec<f64>)> = ts
        .par_iter()
        .map(|&t| {
            let p = OracleProblem::new(&family.potential, &family.boundary(t), cfg.sweep_grid)?;
            let below = p.count_below(0.0);
            Ok((below, p.lowest(below + 2 * m + 2)))
        })
        .collect::<Result<_>>()?;
    let width = rows.iter().map(|r| r.1.len()).min().unwrap_or(0);
    let mut tracks = EigenTracks::default();
    for (t, (_, r)) in ts.iter().zip(&rows) {
        tracks.push(*t, r[..width].to_vec());
    }
    let flow = spectral_flow_detailed(&tracks, 0.0, 1e-9)?;
    let k0 = solution_space_trace(&family.potential, 0.0, cfg.steps)?;
    let kpath = LagrangianPath::constant(k0, family.alpha, family.beta)?;
    let space = BoundaryTriple1D::new(m).space().clone();
    let fam = family.clone();
    let gpath = LagrangianPath::new(&space, family.alpha, family.beta, move |t| Ok(extension_plane(m, fam.boundary(t))?.plane))?;
    let mas = maslov_two_paths(&kpath, &gpath, &cfg.maslov)?.index;
    let morse_diff = rows[0].0 as i64 - rows[rows.len() - 1].0 as i64;
    Ok(FlowIdentityReport {
        scenario: name.to_string(),
        spectral_flow: flow.flow,
        flow_crossings: flow.crossings,
        maslov: Some(mas),
        morse_diff,
        pass: flow.flow == mas && flow.flow == morse_diff,
        tracks,
    })
}

/// Computes the spectral flow through zero along the scenario's family and
/// compares it with the Maslov index of the boundary-plane path (one
/// dimension) or with the Morse index difference (scaled lattice family).
pub fn run_spectral_flow_identity(scenario: &ScenarioSpec, cfg: &VerifyConfig) -> Result<FlowIdentityReport> {
    cfg.validate()?;
    match scenario {
        ScenarioSpec::ThetaSweep1d(spec) => sweep(&spec.build(SweepKind::ThetaPeriodic)?, cfg, "theta_sweep_1d"),
        ScenarioSpec::RobinSweep1d(spec) => sweep(&spec.build(SweepKind::ScalarRobin)?, cfg, "robin_sweep_1d"),
        ScenarioSpec::ScaledBand(spec) => {
            let (family, truncation) = spec.build()?;
            let r = verify_y19(&family, spec.tau, &truncation, &ScalingOptions::default())?;
            let morse_diff = r.morse_tau as i64 - r.morse_one as i64;
            Ok(FlowIdentityReport {
                scenario: "scaled_band".into(),
                spectral_flow: r.spectral_flow,
                flow_crossings: r.flow_crossings,
                maslov: None,
                morse_diff,
                pass: r.pass && r.spectral_flow == morse_diff,
                tracks: r.tracks,
            })
        }
    }
}
