//! Finite-difference spectra of the boundary value problems, independent of the
//! symplectic machinery.
//!
//! The operator is discretized through its quadratic form on a uniform grid
//! with lumped mass, which reproduces the centred ghost-point scheme at the
//! ends. Eigenvalues come from inertia counts of a banded `LDL*` factorization
//! and bisection, and two grids are combined by Richardson extrapolation.

use serde::{Deserialize, Serialize};

use super::extension::ExtensionKind;
use super::potential::Potential1D;
use crate::{CMatrix, Error, Result, C64};

/// Hermitian band matrix stored by upper rows: `data[r * (bw + 1) + d] = A[r][r + d]`.
#[derive(Debug, Clone)]
struct Band {
    n: usize,
    bw: usize,
    data: Vec<C64>,
}

impl Band {
    fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![C64::new(0.0, 0.0); n * (bw + 1)] }
    }

    fn add(&mut self, r: usize, c: usize, v: C64) {
        if c >= r {
            let d = c - r;
            assert!(d <= self.bw, "entry outside band");
            self.data[r * (self.bw + 1) + d] += v;
        }
    }

    fn scale(&self) -> f64 {
        (0..self.n)
            .map(|r| (0..=self.bw).map(|d| self.data[r * (self.bw + 1) + d].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Gershgorin interval for the spectrum.
    fn bounds(&self) -> (f64, f64) {
        let w = self.bw + 1;
        let mut radius = vec![0.0f64; self.n];
        for r in 0..self.n {
            for d in 1..=self.bw {
                if r + d < self.n {
                    let v = self.data[r * w + d].norm();
                    radius[r] += v;
                    radius[r + d] += v;
                }
            }
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (r, rad) in radius.iter().enumerate().take(self.n) {
            let c = self.data[r * w].re;
            lo = lo.min(c - rad);
            hi = hi.max(c + rad);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia).
    fn count_below(&self, sigma: f64) -> usize {
        let w = self.bw + 1;
        let mut a = self.data.clone();
        for r in 0..self.n {
            a[r * w] -= sigma;
        }
        let tiny = f64::EPSILON * (self.scale() + sigma.abs()).max(f64::MIN_POSITIVE);
        let mut negative = 0;
        for k in 0..self.n {
            let mut d = a[k * w].re;
            if d.abs() < tiny {
                d = tiny;
            }
            if d < 0.0 {
                negative += 1;
            }
            let reach = self.bw.min(self.n - 1 - k);
            for i in 1..=reach {
                let aki = a[k * w + i];
                if aki.re == 0.0 && aki.im == 0.0 {
                    continue;
                }
                let f = aki.conj() / d;
                let row = (k + i) * w;
                for j in i..=reach {
                    let akj = a[k * w + j];
                    a[row + j - i] -= f * akj;
                }
            }
        }
        negative
    }

    /// The `count` lowest eigenvalues, ascending.
    fn lowest(&self, count: usize) -> Vec<f64> {
        let count = count.min(self.n);
        let mut out = vec![f64::NAN; count];
        if count == 0 {
            return out;
        }
        let (lo, hi) = self.bounds();
        let pad = 1e-8 * (1.0 + lo.abs().max(hi.abs()));
        let (lo, mut upper) = (lo - pad, lo + 1.0);
        let mut cu = self.count_below(upper);
        while cu < count && upper < hi + pad {
            upper = lo + 2.0 * (upper - lo);
            cu = self.count_below(upper);
        }
        if cu < count {
            upper = hi + pad;
            cu = self.n;
        }
        self.split(lo, 0, upper, cu, &mut out);
        out
    }

    fn split(&self, a: f64, ca: usize, b: f64, cb: usize, out: &mut [f64]) {
        if ca >= out.len() || cb == ca {
            return;
        }
        let mid = 0.5 * (a + b);
        if b - a <= 4.0 * f64::EPSILON * (1.0 + a.abs().max(b.abs())) || mid <= a || mid >= b {
            let stop = cb.min(out.len());
            for slot in out.iter_mut().take(stop).skip(ca) {
                *slot = mid;
            }
            return;
        }
        let cm = self.count_below(mid);
        self.split(a, ca, mid, cm, out);
        self.split(mid, cm, b, cb, out);
    }
}

/// The discretized boundary value problem on a single grid.
#[derive(Debug, Clone)]
pub struct OracleProblem {
    band: Band,
    grid: usize,
}

fn interleave(count: usize) -> Vec<usize> {
    let mut pos = vec![0; count];
    let (mut lo, mut hi, mut next) = (0usize, count.wrapping_sub(1), 0usize);
    while next < count {
        pos[lo] = next;
        next += 1;
        if hi != lo {
            pos[hi] = next;
            next += 1;
        }
        lo += 1;
        hi = hi.wrapping_sub(1);
    }
    pos
}

impl OracleProblem {
    /// Assembles the scaled stiffness matrix on `grid` uniform intervals.
    pub fn new(potential: &Potential1D, kind: &ExtensionKind, grid: usize) -> Result<Self> {
        if grid < 8 {
            return Err(Error::InvalidInput(format!("oracle grid {grid} is too coarse")));
        }
        let m = potential.size();
        let n = grid;
        let h = 1.0 / n as f64;
        // node list (grid index), lumped weights, edges with a phase on the far end
        let (nodes, weights): (Vec<usize>, Vec<f64>) = match kind {
            ExtensionKind::Dirichlet => ((1..n).collect(), vec![1.0; n - 1]),
            ExtensionKind::Neumann | ExtensionKind::Robin(_) => {
                let mut w = vec![1.0; n + 1];
                w[0] = 0.5;
                w[n] = 0.5;
                ((0..=n).collect(), w)
            }
            ExtensionKind::ThetaPeriodic(_) => ((0..n).collect(), vec![1.0; n]),
        };
        if let ExtensionKind::Robin(theta) = kind {
            if theta.shape() != (2 * m, 2 * m) {
                return Err(Error::DimensionMismatch { expected: 2 * m, got: theta.nrows() });
            }
        }
        let count = nodes.len();
        let pos = interleave(count);
        let bw = 3 * m - 1;
        let mut band = Band::zeros(count * m, bw);
        let scale: Vec<f64> = weights.iter().map(|w| 1.0 / (h * w).sqrt()).collect();
        let mut add_block = |a: usize, b: usize, block: &CMatrix| {
            let f = scale[a] * scale[b];
            for i in 0..m {
                for j in 0..m {
                    band.add(pos[a] * m + i, pos[b] * m + j, block[(i, j)] * f);
                }
            }
        };
        let ident = CMatrix::identity(m, m);
        let stiff = C64::new(1.0 / h, 0.0);
        let edge = |a: usize, b: usize, phase: C64, add: &mut dyn FnMut(usize, usize, &CMatrix)| {
            // |phase * u_b - u_a|^2 / h
            add(a, a, &(&ident * stiff));
            add(b, b, &(&ident * stiff));
            add(a, b, &(&ident * (-stiff * phase)));
            add(b, a, &(&ident * (-stiff * phase.conj())));
        };
        let one = C64::new(1.0, 0.0);
        match kind {
            ExtensionKind::Dirichlet => {
                // boundary values vanish; edges to the ends keep their diagonal part
                for k in 0..count {
                    if k + 1 < count {
                        edge(k, k + 1, one, &mut add_block);
                    }
                }
                add_block(0, 0, &(&ident * stiff));
                add_block(count - 1, count - 1, &(&ident * stiff));
            }
            ExtensionKind::Neumann | ExtensionKind::Robin(_) => {
                for k in 0..n {
                    edge(k, k + 1, one, &mut add_block);
                }
                if let ExtensionKind::Robin(theta) = kind {
                    // Gamma1 u = (u_n, u_0)
                    let t = |r: usize, c: usize| theta.view((r * m, c * m), (m, m)).into_owned();
                    add_block(n, n, &t(0, 0));
                    add_block(n, 0, &t(0, 1));
                    add_block(0, n, &t(1, 0));
                    add_block(0, 0, &t(1, 1));
                }
            }
            ExtensionKind::ThetaPeriodic(theta) => {
                for k in 0..n - 1 {
                    edge(k, k + 1, one, &mut add_block);
                }
                edge(n - 1, 0, C64::from_polar(1.0, *theta), &mut add_block);
            }
        }
        for (k, &node) in nodes.iter().enumerate() {
            let v = potential.eval(node as f64 * h) * C64::new(h * weights[k], 0.0);
            add_block(k, k, &v);
        }
        Ok(Self { band, grid })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Number of discrete eigenvalues below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        self.band.count_below(sigma)
    }

    pub fn lowest(&self, count: usize) -> Vec<f64> {
        self.band.lowest(count)
    }
}

/// Number of eigenvalues below `sigma` on a single grid.
pub fn sturm_count(potential: &Potential1D, kind: &ExtensionKind, grid: usize, sigma: f64) -> Result<usize> {
    Ok(OracleProblem::new(potential, kind, grid)?.count_below(sigma))
}

/// Lowest eigenvalues of a boundary value problem with error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Richardson-extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Error estimate for each eigenvalue.
    pub tolerances: Vec<f64>,
    /// Number of negative eigenvalues.
    pub morse_index: usize,
    /// Some eigenvalue lies within its error estimate of zero.
    pub ambiguous: bool,
    /// Intervals on the finer grid.
    pub grid: usize,
}

impl SpectrumResult {
    /// The Morse index, or an error when it cannot be decided.
    pub fn morse(&self) -> Result<usize> {
        if self.ambiguous {
            let (eigenvalue, band) = self
                .eigenvalues
                .iter()
                .zip(&self.tolerances)
                .find(|(e, t)| e.abs() <= **t)
                .map(|(e, t)| (*e, *t))
                .unwrap_or((0.0, 0.0));
            return Err(Error::MorseAmbiguous { eigenvalue, band });
        }
        Ok(self.morse_index)
    }
}

/// The `count` lowest eigenvalues (and at least all negative ones) from grids
/// `grid` and `2 grid` combined by Richardson extrapolation.
pub fn oracle_spectrum(potential: &Potential1D, kind: &ExtensionKind, grid: usize, count: usize) -> Result<SpectrumResult> {
    let (coarse, fine) = rayon::join(
        || OracleProblem::new(potential, kind, grid),
        || OracleProblem::new(potential, kind, 2 * grid),
    );
    let (coarse, fine) = (coarse?, fine?);
    let negative = fine.count_below(0.0).max(coarse.count_below(0.0));
    let want = count.max(negative + 1);
    let (a, b) = rayon::join(|| coarse.lowest(want), || fine.lowest(want));
    let k = a.len().min(b.len());
    // inertia counts carry a rounding floor proportional to the matrix scale
    let floor = 16.0 * f64::EPSILON * fine.band.scale();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut tolerances = Vec::with_capacity(k);
    for i in 0..k {
        let r = (4.0 * b[i] - a[i]) / 3.0;
        eigenvalues.push(r);
        tolerances.push((r - b[i]).abs() + floor + 1e-10 * (1.0 + r.abs()));
    }
    let morse_index = eigenvalues.iter().filter(|&&e| e < 0.0).count();
    let ambiguous = eigenvalues.iter().zip(&tolerances).any(|(e, t)| e.abs() <= *t);
    eigenvalues.truncate(count.max(morse_index + 1).min(k));
    tolerances.truncate(eigenvalues.len());
    Ok(SpectrumResult { eigenvalues, tolerances, morse_index, ambiguous, grid: 2 * grid })
}
