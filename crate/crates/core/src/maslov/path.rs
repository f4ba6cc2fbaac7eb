use std::sync::Arc;

use crate::linalg;
use crate::symplectic::{LagrangianPlane, SymplecticSpace};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Evaluates the plane at a parameter value.
pub type Sampler = Arc<dyn Fn(f64) -> Result<LagrangianPlane> + Send + Sync>;

/// A continuous path `s -> F_s` of Lagrangian planes on `[start, end]`.
#[derive(Clone)]
pub struct LagrangianPath {
    space: SymplecticSpace,
    start: f64,
    end: f64,
    grid: Vec<f64>,
    sampler: Sampler,
}

impl std::fmt::Debug for LagrangianPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LagrangianPath")
            .field("start", &self.start)
            .field("end", &self.end)
            .field("grid_len", &self.grid.len())
            .finish()
    }
}

const DEFAULT_GRID: usize = 16;

fn uniform_grid(start: f64, end: f64, intervals: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=intervals)
        .map(|i| start + (end - start) * i as f64 / intervals as f64)
        .collect();
    g[intervals] = end;
    g
}

impl LagrangianPath {
    pub fn new(
        space: &SymplecticSpace,
        start: f64,
        end: f64,
        sampler: impl Fn(f64) -> Result<LagrangianPlane> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::InvalidInput(format!("path domain [{start}, {end}] is empty")));
        }
        Ok(Self {
            space: space.clone(),
            start,
            end,
            grid: uniform_grid(start, end, DEFAULT_GRID),
            sampler: Arc::new(sampler),
        })
    }

    /// The constant path at `plane`.
    pub fn constant(plane: LagrangianPlane, start: f64, end: f64) -> Result<Self> {
        let space = plane.space().clone();
        Self::new(&space, start, end, move |_| Ok(plane.clone())).map(|p| p.with_intervals(1))
    }

    /// Replaces the initial sample grid. It must start at `start`, end at
    /// `end` and increase strictly.
    pub fn with_grid(mut self, grid: Vec<f64>) -> Result<Self> {
        let ok = grid.len() >= 2
            && grid[0] == self.start
            && grid[grid.len() - 1] == self.end
            && grid.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::InvalidInput("initial grid must increase from start to end".into()));
        }
        self.grid = grid;
        Ok(self)
    }

    /// Uniform initial grid with `intervals` pieces.
    pub fn with_intervals(mut self, intervals: usize) -> Self {
        self.grid = uniform_grid(self.start, self.end, intervals.max(1));
        self
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn sample(&self, s: f64) -> Result<LagrangianPlane> {
        let plane = (self.sampler)(s)?;
        if !plane.space().same_as(&self.space) {
            return Err(Error::InvalidInput(format!("sample at s = {s} lives in another space")));
        }
        Ok(plane)
    }

    /// `s -> F_{start + end - s}` on the same domain.
    pub fn reversed(&self) -> Self {
        let (a, b) = (self.start, self.end);
        let inner = self.sampler.clone();
        let grid = self.grid.iter().rev().map(|&s| a + b - s).collect::<Vec<_>>();
        let mut grid = grid;
        grid[0] = a;
        let last = grid.len() - 1;
        grid[last] = b;
        Self {
            space: self.space.clone(),
            start: a,
            end: b,
            grid,
            sampler: Arc::new(move |s| inner(a + b - s)),
        }
    }

    /// The same path on the sub-interval `[a, b]`.
    pub fn restricted(&self, a: f64, b: f64) -> Result<Self> {
        if !(self.start <= a && a < b && b <= self.end) {
            return Err(Error::InvalidInput(format!("[{a}, {b}] is not inside the path domain")));
        }
        let inner = self.sampler.clone();
        let intervals = self.grid.len().saturating_sub(1).max(1);
        Ok(Self {
            space: self.space.clone(),
            start: a,
            end: b,
            grid: uniform_grid(a, b, intervals),
            sampler: inner,
        })
    }

    /// `s -> F_{map(s)}` on `[start, end]`; `map` should be monotone onto the
    /// original domain.
    pub fn reparametrized(
        &self,
        start: f64,
        end: f64,
        map: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let inner = self.sampler.clone();
        let intervals = self.grid.len().saturating_sub(1).max(1);
        Ok(Self::new(&self.space, start, end, move |s| inner(map(s)))?.with_intervals(intervals))
    }

    /// `s -> F_s + G_s` in the doubled space, on a shared domain.
    pub fn direct_sum(&self, other: &Self, doubled: &SymplecticSpace) -> Result<Self> {
        if (self.start, self.end) != (other.start, other.end) {
            return Err(Error::InvalidInput("paths must share their domain".into()));
        }
        let (f, g) = (self.sampler.clone(), other.sampler.clone());
        let d = doubled.clone();
        let mut grid: Vec<f64> = self.grid.iter().chain(other.grid.iter()).copied().collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        Ok(Self {
            space: doubled.clone(),
            start: self.start,
            end: self.end,
            grid,
            sampler: Arc::new(move |s| f(s)?.direct_sum(&g(s)?, &d)),
        })
    }

    /// Piecewise path through tabulated planes, moving between neighbours
    /// along the geodesic `U_a exp(t log(U_a^* U_b))` of graph unitaries.
    pub fn tabulated(space: &SymplecticSpace, params: Vec<f64>, planes: Vec<LagrangianPlane>) -> Result<Self> {
        if params.len() != planes.len() || params.len() < 2 {
            return Err(Error::InvalidInput("need at least two samples with matching parameters".into()));
        }
        if !params.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("sample parameters must increase".into()));
        }
        let mut unitaries = Vec::with_capacity(planes.len());
        for p in &planes {
            if !p.space().same_as(space) {
                return Err(Error::InvalidInput("tabulated plane lives in another space".into()));
            }
            unitaries.push(p.graph_unitary()?.clone());
        }
        let mut logs: Vec<CMatrix> = Vec::with_capacity(planes.len() - 1);
        for w in unitaries.windows(2) {
            let rel = w[0].adjoint() * &w[1];
            let (phases, q) = linalg::unitary_eigen(&rel)?;
            let d = CMatrix::from_diagonal(&CVector::from_iterator(phases.len(), phases.iter().map(|&p| C64::new(p, 0.0))));
            logs.push(&q * d * q.adjoint());
        }
        let (start, end) = (params[0], params[params.len() - 1]);
        let sp = space.clone();
        let ps = params.clone();
        let sampler = move |s: f64| -> Result<LagrangianPlane> {
            let s = s.clamp(ps[0], ps[ps.len() - 1]);
            let k = match ps.partition_point(|&p| p <= s) {
                0 => 0,
                i if i >= ps.len() => ps.len() - 2,
                i => i - 1,
            };
            let t = (s - ps[k]) / (ps[k + 1] - ps[k]);
            let step = linalg::hermitian_function(&logs[k], |x| C64::from_polar(1.0, t * x));
            LagrangianPlane::from_graph(&sp, &(&unitaries[k] * step))
        };
        Ok(Self {
            space: space.clone(),
            start,
            end,
            grid: params,
            sampler: Arc::new(sampler),
        })
    }
}
