use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::crossing::{crossing_form_with, CrossingReport};
use super::path::LagrangianPath;
use crate::linalg;
use crate::symplectic::{relative_phases, LagrangianPlane, SymplecticSpace};
use crate::{Error, Result};

/// Tuning for [`maslov_index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaslovOptions {
    /// Eigenphases within this angle of zero at the path ends count as `1`.
    pub zero_tol: f64,
    /// Maximum number of bisections of an initial grid interval.
    pub max_depth: usize,
    /// Chebyshev-Lobatto samples per segment, including both ends.
    pub nodes_per_segment: usize,
    /// Largest projector gap accepted between neighbouring samples.
    pub gap_threshold: f64,
    /// Largest eigenphase movement accepted between neighbouring samples.
    pub max_phase_step: f64,
    /// Locate crossings and evaluate their crossing forms.
    pub locate_crossings: bool,
    /// Recompute on the halved partition and require the same index.
    pub check_refinement: bool,
    /// Angular tolerance used when locating crossings.
    pub crossing_tol: f64,
}

impl Default for MaslovOptions {
    fn default() -> Self {
        Self {
            zero_tol: 1e-8,
            max_depth: 20,
            nodes_per_segment: 5,
            gap_threshold: 0.3,
            max_phase_step: 0.4,
            locate_crossings: true,
            check_refinement: cfg!(debug_assertions),
            crossing_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SpectralFlowDef,
    CrossingForm,
}

/// One accepted segment `[s0, s1]` with its arc half-width `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSegment {
    pub s0: f64,
    pub s1: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaslovResult {
    pub index: i64,
    pub method: Method,
    pub partition: Vec<PartitionSegment>,
    pub crossings: Vec<CrossingReport>,
}

struct Sample {
    plane: LagrangianPlane,
    phases: Vec<f64>,
}

fn key(s: f64) -> u64 {
    s.to_bits()
}

fn lobatto(l: f64, r: f64, q: usize) -> Vec<f64> {
    let q = q.max(2);
    let mut pts: Vec<f64> = (0..q)
        .map(|i| {
            let c = (std::f64::consts::PI * i as f64 / (q - 1) as f64).cos();
            0.5 * (l + r) - 0.5 * (r - l) * c
        })
        .collect();
    pts[0] = l;
    pts[q - 1] = r;
    pts
}

/// Eigenphases counted at `1` or on the arc up to `eps`.
fn arc_count(phases: &[f64], zero_tol: f64, eps: f64) -> i64 {
    phases.iter().filter(|&&p| p >= -zero_tol && p <= eps).count() as i64
}

enum Reject {
    Gap(f64, f64),
    Crowded(f64),
}

struct Engine<'a> {
    path: &'a LagrangianPath,
    reference: &'a LagrangianPlane,
    opts: MaslovOptions,
    cache: HashMap<u64, Sample>,
}

impl<'a> Engine<'a> {
    fn evaluate(&mut self, points: Vec<f64>) -> Result<()> {
        let mut todo: Vec<f64> = points.into_iter().filter(|s| !self.cache.contains_key(&key(*s))).collect();
        todo.sort_by(f64::total_cmp);
        todo.dedup();
        let path = self.path;
        let reference = self.reference;
        let fresh: Vec<Result<(f64, Sample)>> = todo
            .par_iter()
            .map(|&s| {
                let plane = path.sample(s)?;
                let phases = relative_phases(&plane, reference)?;
                Ok((s, Sample { plane, phases }))
            })
            .collect();
        for r in fresh {
            let (s, sample) = r?;
            self.cache.insert(key(s), sample);
        }
        Ok(())
    }

    /// Picks `eps` for a segment whose nodes are already cached.
    fn certify(&self, l: f64, r: f64) -> std::result::Result<f64, Reject> {
        let nodes = lobatto(l, r, self.opts.nodes_per_segment);
        let samples: Vec<&Sample> = nodes.iter().map(|s| &self.cache[&key(*s)]).collect();
        let mut moved = 0.0f64;
        let mut arcs: Vec<(f64, f64)> = Vec::new();
        for (w, pts) in samples.windows(2).zip(nodes.windows(2)) {
            let gap = w[0].plane.gap(&w[1].plane);
            if gap > self.opts.gap_threshold {
                return Err(Reject::Gap(0.5 * (pts[0] + pts[1]), gap));
            }
            let (perm, step) = linalg::match_on_circle(&w[0].phases, &w[1].phases);
            if step > self.opts.max_phase_step {
                return Err(Reject::Crowded(0.5 * (pts[0] + pts[1])));
            }
            moved = moved.max(step);
            for (i, &j) in perm.iter().enumerate() {
                let a = w[0].phases[i];
                let d = linalg::angle_diff(a, w[1].phases[j]);
                let b = a + d;
                let (lo, hi) = (a.min(b), a.max(b));
                let image = if lo <= 0.0 && hi >= 0.0 {
                    (0.0, lo.abs().max(hi.abs()))
                } else if hi >= std::f64::consts::PI || lo <= -std::f64::consts::PI {
                    (linalg::wrap_angle(lo).abs().min(linalg::wrap_angle(hi).abs()), std::f64::consts::PI)
                } else {
                    (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()))
                };
                arcs.push(image);
            }
        }
        let margin = 0.25 * moved + 1e-9;
        let mut blocked: Vec<(f64, f64)> = arcs.into_iter().map(|(a, b)| (a - margin, b + margin)).collect();
        blocked.push((f64::NEG_INFINITY, 2.0 * self.opts.zero_tol + margin));
        blocked.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut best = (0.0f64, 0.0f64);
        let mut reach = f64::NEG_INFINITY;
        for &(a, b) in &blocked {
            if a > reach && reach > 0.0 {
                let hi = a.min(std::f64::consts::PI);
                if hi - reach > best.1 - best.0 {
                    best = (reach, hi);
                }
            }
            reach = reach.max(b);
        }
        if reach < std::f64::consts::PI && std::f64::consts::PI - reach > best.1 - best.0 {
            best = (reach.max(0.0), std::f64::consts::PI);
        }
        if best.1 - best.0 > 1e-6 {
            Ok(0.5 * (best.0 + best.1))
        } else {
            Err(Reject::Crowded(0.5 * (l + r)))
        }
    }

    fn partition(&mut self, intervals: Vec<(f64, f64)>) -> Result<Vec<PartitionSegment>> {
        let mut pending: Vec<(f64, f64, usize)> = intervals.into_iter().map(|(l, r)| (l, r, 0)).collect();
        let mut accepted = Vec::new();
        while !pending.is_empty() {
            let pts = pending
                .iter()
                .flat_map(|&(l, r, _)| lobatto(l, r, self.opts.nodes_per_segment))
                .collect();
            self.evaluate(pts)?;
            let mut next = Vec::new();
            for &(l, r, depth) in &pending {
                match self.certify(l, r) {
                    Ok(eps) => accepted.push(PartitionSegment { s0: l, s1: r, eps }),
                    Err(reject) if depth >= self.opts.max_depth => {
                        return Err(match reject {
                            Reject::Gap(at, gap) => Error::DiscontinuousPath { at, gap },
                            Reject::Crowded(at) => Error::PartitionFailure { at, depth },
                        })
                    }
                    Err(_) => {
                        let mid = 0.5 * (l + r);
                        next.push((l, mid, depth + 1));
                        next.push((mid, r, depth + 1));
                    }
                }
            }
            pending = next;
        }
        accepted.sort_by(|a, b| a.s0.total_cmp(&b.s0));
        Ok(accepted)
    }

    fn phases(&self, s: f64) -> &[f64] {
        &self.cache[&key(s)].phases
    }

    fn sum(&self, segments: &[PartitionSegment]) -> i64 {
        let z = self.opts.zero_tol;
        segments
            .iter()
            .map(|g| arc_count(self.phases(g.s1), z, g.eps) - arc_count(self.phases(g.s0), z, g.eps))
            .sum()
    }

    fn check_ends(&self) -> Result<()> {
        let tol = self.opts.zero_tol;
        for s in [self.path.start(), self.path.end()] {
            for &p in self.phases(s) {
                if p.abs() > tol && p.abs() <= 2.0 * tol {
                    return Err(Error::ToleranceAmbiguous { distance: p.abs(), tol });
                }
            }
        }
        Ok(())
    }

    fn upper_count(&self, s: f64, eps: f64) -> Result<i64> {
        let phases = match self.cache.get(&key(s)) {
            Some(sample) => sample.phases.clone(),
            None => relative_phases(&self.path.sample(s)?, self.reference)?,
        };
        Ok(phases.iter().filter(|&&p| (0.0..=eps).contains(&p)).count() as i64)
    }

    fn bisect(&self, l: f64, r: f64, gl: i64, gr: i64, eps: f64, out: &mut Vec<f64>) -> Result<()> {
        let width = 1e-13 * (self.path.end() - self.path.start()).max(1.0);
        if r - l <= width {
            out.push(0.5 * (l + r));
            return Ok(());
        }
        let mid = 0.5 * (l + r);
        let gm = self.upper_count(mid, eps)?;
        if gm != gl {
            self.bisect(l, mid, gl, gm, eps, out)?;
        }
        if gm != gr {
            self.bisect(mid, r, gm, gr, eps, out)?;
        }
        Ok(())
    }

    fn locate(&self, segments: &[PartitionSegment]) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        let ztol = self.opts.zero_tol;
        if self.phases(self.path.start()).iter().any(|p| p.abs() <= ztol) {
            out.push(self.path.start());
        }
        for g in segments {
            let nodes = lobatto(g.s0, g.s1, self.opts.nodes_per_segment);
            for w in nodes.windows(2) {
                let gl = self.upper_count(w[0], g.eps)?;
                let gr = self.upper_count(w[1], g.eps)?;
                if gl != gr {
                    self.bisect(w[0], w[1], gl, gr, g.eps, &mut out)?;
                }
            }
        }
        if self.phases(self.path.end()).iter().any(|p| p.abs() <= ztol) {
            out.push(self.path.end());
        }
        // Bisection brackets sit on either side of a crossing when a phase
        // lands exactly on zero at a node; merge such near-duplicates.
        out.sort_by(f64::total_cmp);
        let merge = 1e-9 * (self.path.end() - self.path.start());
        out.dedup_by(|b, a| (*b - *a).abs() <= merge);
        Ok(out)
    }
}

/// Maslov index of `path` relative to the fixed plane `reference`, with the
/// closed-segment convention: intersections at the ends contribute according
/// to the direction in which eigenphases leave or arrive at `1`.
pub fn maslov_index(path: &LagrangianPath, reference: &LagrangianPlane, opts: &MaslovOptions) -> Result<MaslovResult> {
    if !path.space().same_as(reference.space()) {
        return Err(Error::InvalidInput("path and reference live in different spaces".into()));
    }
    let mut engine = Engine { path, reference, opts: *opts, cache: HashMap::new() };
    let intervals: Vec<(f64, f64)> = path.grid().windows(2).map(|w| (w[0], w[1])).collect();
    let partition = engine.partition(intervals)?;
    engine.check_ends()?;
    let index = engine.sum(&partition);

    if opts.check_refinement {
        let halves: Vec<(f64, f64)> = partition
            .iter()
            .flat_map(|g| {
                let m = 0.5 * (g.s0 + g.s1);
                [(g.s0, m), (m, g.s1)]
            })
            .collect();
        let mut fine_opts = *opts;
        fine_opts.max_depth = opts.max_depth.saturating_sub(1).max(1);
        engine.opts = fine_opts;
        let refined = engine.partition(halves)?;
        engine.opts = *opts;
        let refined_index = engine.sum(&refined);
        if refined_index != index {
            return Err(Error::PartitionDependent { coarse: index, refined: refined_index });
        }
    }

    let mut crossings = Vec::new();
    if opts.locate_crossings {
        for s in engine.locate(&partition)? {
            let report = match crossing_form_with(path, reference, s, None, opts.crossing_tol) {
                Ok(r) => r,
                Err(_) => CrossingReport::unresolved(s),
            };
            crossings.push(report);
        }
    }

    Ok(MaslovResult { index, method: Method::SpectralFlowDef, partition, crossings })
}

/// The path `F + G` in the doubled space together with the diagonal.
pub fn doubled_pair(first: &LagrangianPath, second: &LagrangianPath) -> Result<(LagrangianPath, LagrangianPlane)> {
    if !first.space().same_as(second.space()) {
        return Err(Error::InvalidInput("paths live in different spaces".into()));
    }
    let doubled = first.space().doubled();
    let sum = first.direct_sum(second, &doubled)?;
    let diagonal = SymplecticSpace::diagonal_in(&doubled)?;
    Ok((sum, diagonal))
}

/// `Mas(F, G)` of two paths on the same domain, computed as the index of
/// `F + G` relative to the diagonal in the doubled space.
pub fn maslov_two_paths(first: &LagrangianPath, second: &LagrangianPath, opts: &MaslovOptions) -> Result<MaslovResult> {
    let (sum, diagonal) = doubled_pair(first, second)?;
    maslov_index(&sum, &diagonal, opts)
}
