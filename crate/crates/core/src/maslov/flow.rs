use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Eigenvalue tracks: `values[i][j]` is the `j`-th lowest eigenvalue at `t[i]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EigenTracks {
    pub t: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl EigenTracks {
    pub fn push(&mut self, t: f64, mut values: Vec<f64>) {
        values.sort_by(f64::total_cmp);
        self.t.push(t);
        self.values.push(values);
    }

    pub fn track_count(&self) -> usize {
        self.values.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Rows `t,j,lambda` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,j,lambda\n");
        for (t, vals) in self.t.iter().zip(&self.values) {
            for (j, v) in vals.iter().enumerate() {
                out.push_str(&format!("{t:.16e},{j},{v:.16e}\n"));
            }
        }
        out
    }

    /// Parses the format written by [`Self::to_csv`]. Rows must be grouped by `t`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next().map(str::trim) {
            Some("t,j,lambda") => {}
            other => return Err(Error::InvalidInput(format!("expected header t,j,lambda, got {other:?}"))),
        }
        let mut tracks = EigenTracks::default();
        for (n, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse = |k: usize| -> Result<f64> {
                cells
                    .get(k)
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("row {}: bad column {}", n + 2, k + 1)))
            };
            if cells.len() != 3 {
                return Err(Error::InvalidInput(format!("row {}: expected 3 columns", n + 2)));
            }
            let (t, j, v) = (parse(0)?, parse(1)? as usize, parse(2)?);
            if tracks.t.last() != Some(&t) {
                tracks.t.push(t);
                tracks.values.push(Vec::new());
            }
            let row = tracks.values.last_mut().expect("row pushed");
            if row.len() != j {
                return Err(Error::InvalidInput(format!("row {}: track index {j} out of order", n + 2)));
            }
            row.push(v);
        }
        Ok(tracks)
    }
}

/// One threshold crossing of a track between two grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowCrossing {
    pub t0: f64,
    pub t1: f64,
    pub track: usize,
    /// `+1` when the track rises through the threshold.
    pub direction: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowResult {
    pub flow: i64,
    pub crossings: Vec<FlowCrossing>,
}

/// Net number of tracks rising through `through` minus those falling.
pub fn spectral_flow(tracks: &EigenTracks, through: f64, tol: f64) -> Result<i64> {
    spectral_flow_detailed(tracks, through, tol).map(|r| r.flow)
}

pub fn spectral_flow_detailed(tracks: &EigenTracks, through: f64, tol: f64) -> Result<FlowResult> {
    let n = tracks.t.len();
    if n < 2 || tracks.values.len() != n {
        return Err(Error::InvalidInput("need at least two grid points".into()));
    }
    if !tracks.t.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("grid must increase".into()));
    }
    let count = tracks.track_count();
    if tracks.values.iter().any(|v| v.len() != count) {
        return Err(Error::InvalidInput("every grid point needs the same number of tracks".into()));
    }
    let touches = |i: usize, j: usize| (tracks.values[i][j] - through).abs() <= tol;
    for j in 0..count {
        for i in [0, n - 1] {
            if touches(i, j) {
                return Err(Error::AmbiguousCrossing { track: j, t: tracks.t[i] });
            }
        }
        for i in 1..n {
            if touches(i - 1, j) && touches(i, j) {
                return Err(Error::AmbiguousCrossing { track: j, t: tracks.t[i] });
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| tracks.values[i].iter().all(|&v| v < through)) {
        return Err(Error::InvalidInput(format!(
            "all tracks lie below the threshold at t = {}; more tracks are needed",
            tracks.t[i]
        )));
    }
    let below = |i: usize| tracks.values[i].iter().filter(|&&v| v < through).count() as i64;
    let mut flow = 0;
    let mut crossings = Vec::new();
    for i in 1..n {
        flow += below(i - 1) - below(i);
        for j in 0..count {
            let (a, b) = (tracks.values[i - 1][j] < through, tracks.values[i][j] < through);
            if a != b {
                crossings.push(FlowCrossing {
                    t0: tracks.t[i - 1],
                    t1: tracks.t[i],
                    track: j,
                    direction: if a { 1 } else { -1 },
                });
            }
        }
    }
    Ok(FlowResult { flow, crossings })
}
