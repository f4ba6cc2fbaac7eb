use serde::{Deserialize, Serialize};

use crate::maslov::{maslov_two_paths, CrossingReport, LagrangianPath};
use crate::schrodinger::{
    extension_plane, oracle_spectrum, solution_space_trace, BoundaryTriple1D, ExtensionKind, Potential1D, SpectrumResult,
    VerifyConfig,
};
use crate::symplectic::intersection_dim;
use crate::{Error, Result};

/// Which boundary condition the family parameter controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// `u(1) = e^{i t} u(0)`, `u'(1) = e^{i t} u'(0)`.
    ThetaPeriodic,
    /// `Gamma2 u = -t Gamma1 u`.
    ScalarRobin,
}

/// A potential with a one-parameter family of boundary conditions on `[alpha, beta]`.
#[derive(Debug, Clone)]
pub struct Family1D {
    pub potential: Potential1D,
    pub kind: SweepKind,
    pub alpha: f64,
    pub beta: f64,
    lambda_inf: f64,
}

impl Family1D {
    /// The lower spectral bound defaults to `-|V| - 1`, lowered for Robin
    /// conditions by `4 |Theta|^2 + 2 |Theta|` to absorb the boundary term.
    pub fn new(potential: Potential1D, kind: SweepKind, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
            return Err(Error::InvalidInput(format!("need alpha < beta, got [{alpha}, {beta}]")));
        }
        let v = potential.sup_norm();
        let lambda_inf = match kind {
            SweepKind::ThetaPeriodic => -v - 1.0,
            SweepKind::ScalarRobin => {
                let t = alpha.abs().max(beta.abs());
                -v - 4.0 * t * t - 2.0 * t - 1.0
            }
        };
        Ok(Self { potential, kind, alpha, beta, lambda_inf })
    }

    pub fn with_lambda_inf(mut self, lambda_inf: f64) -> Result<Self> {
        if !(lambda_inf < 0.0 && lambda_inf.is_finite()) {
            return Err(Error::InvalidInput("lambda_inf must be negative".into()));
        }
        self.lambda_inf = lambda_inf;
        Ok(self)
    }

    pub fn lambda_inf(&self) -> f64 {
        self.lambda_inf
    }

    pub fn size(&self) -> usize {
        self.potential.size()
    }

    pub fn boundary(&self, t: f64) -> ExtensionKind {
        match self.kind {
            SweepKind::ThetaPeriodic => ExtensionKind::ThetaPeriodic(t),
            SweepKind::ScalarRobin => ExtensionKind::scalar_robin(self.size(), t),
        }
    }

    pub fn spectrum(&self, t: f64, cfg: &VerifyConfig, count: usize) -> Result<SpectrumResult> {
        oracle_spectrum(&self.potential, &self.boundary(t), cfg.oracle_grid, count)
    }

    /// Boundary planes along `t`, parametrized by `map(s)` for `s` in `[start, end]`.
    fn boundary_path(&self, start: f64, end: f64, map: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<LagrangianPath> {
        let m = self.size();
        let kind = self.kind;
        let space = BoundaryTriple1D::new(m).space().clone();
        LagrangianPath::new(&space, start, end, move |s| {
            let t = map(s);
            let bc = match kind {
                SweepKind::ThetaPeriodic => ExtensionKind::ThetaPeriodic(t),
                SweepKind::ScalarRobin => ExtensionKind::scalar_robin(m, t),
            };
            Ok(extension_plane(m, bc)?.plane)
        })
    }

    /// Solution planes along `lambda = map(s)`.
    fn solution_path(
        &self,
        start: f64,
        end: f64,
        steps: usize,
        map: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<LagrangianPath> {
        let v = self.potential.clone();
        let space = BoundaryTriple1D::new(self.size()).space().clone();
        LagrangianPath::new(&space, start, end, move |s| solution_space_trace(&v, map(s), steps))
    }
}

/// The boundary of `[lambda_inf, 0] x [alpha, beta]` as four pairs of paths
/// `(K_lambda, G_t)`, traversed as: `lambda` up at `t = alpha`, `t` up at
/// `lambda = 0`, `lambda` down at `t = beta`, `t` down at `lambda = lambda_inf`.
pub struct HomotopySquare {
    pub family: Family1D,
    pub steps: usize,
}

impl HomotopySquare {
    pub fn sides(&self) -> Result<Vec<(LagrangianPath, LagrangianPath)>> {
        let f = &self.family;
        let (a, b, low, steps) = (f.alpha, f.beta, f.lambda_inf, self.steps);
        let width = b - a;
        Ok(vec![
            (f.solution_path(low, 0.0, steps, |s| s)?, f.boundary_path(low, 0.0, move |_| a)?),
            (f.solution_path(0.0, width, steps, |_| 0.0)?, f.boundary_path(0.0, width, move |s| a + s)?),
            (f.solution_path(0.0, -low, steps, |s| -s)?, f.boundary_path(0.0, -low, move |_| b)?),
            (f.solution_path(0.0, width, steps, move |_| low)?, f.boundary_path(0.0, width, move |s| b - s)?),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideReport {
    pub name: String,
    pub index: i64,
    pub expected: i64,
    pub crossings: Vec<CrossingReport>,
    /// Crossing forms carry the sign this side should produce.
    pub forms_definite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareReport {
    pub lambda_inf: f64,
    pub morse_alpha: usize,
    pub morse_beta: usize,
    pub sides: Vec<SideReport>,
    pub total: i64,
    pub pass: bool,
}

impl SquareReport {
    /// Fails when the four indices do not sum to zero.
    pub fn check_consistent(&self) -> Result<()> {
        if self.total != 0 {
            return Err(Error::SquareInconsistent { total: self.total });
        }
        Ok(())
    }
}

/// Maslov indices of the four sides with the predictions
/// `(-Mor(alpha), Mor(alpha) - Mor(beta), Mor(beta), 0)` from the oracle.
pub fn run_square(family: &Family1D, cfg: &VerifyConfig) -> Result<SquareReport> {
    cfg.validate()?;
    let mut family = family.clone();
    // the lower corners must be free of intersections
    for attempt in 0..=3 {
        let k = solution_space_trace(&family.potential, family.lambda_inf, cfg.steps)?;
        let mut clear = true;
        for t in [family.alpha, family.beta] {
            let g = extension_plane(family.size(), family.boundary(t))?.plane;
            clear &= matches!(intersection_dim(&k, &g, cfg.kernel_tol), Ok(0));
        }
        if clear {
            break;
        }
        if attempt == 3 {
            return Err(Error::InvalidInput("lower corners of the square meet the spectrum".into()));
        }
        family.lambda_inf *= 1.1;
    }
    let morse = |t: f64| -> Result<usize> {
        let s = family.spectrum(t, cfg, 1)?;
        Ok(s.morse().unwrap_or_else(|_| {
            s.eigenvalues.iter().zip(&s.tolerances).filter(|(e, tol)| **e < -**tol).count()
        }))
    };
    let (morse_alpha, morse_beta) = (morse(family.alpha)?, morse(family.beta)?);
    let square = HomotopySquare { family: family.clone(), steps: cfg.steps };
    let expected = [
        -(morse_alpha as i64),
        morse_alpha as i64 - morse_beta as i64,
        morse_beta as i64,
        0,
    ];
    let names = ["lambda_up_at_alpha", "t_up_at_zero", "lambda_down_at_beta", "t_down_at_lambda_inf"];
    let results: Vec<Result<SideReport>> = {
        use rayon::prelude::*;
        square
            .sides()?
            .into_par_iter()
            .enumerate()
            .map(|(i, (k, g))| {
                let r = maslov_two_paths(&k, &g, &cfg.maslov)?;
                let sign_ok = |c: &CrossingReport| match i {
                    0 => c.regular && c.form_eigenvalues.iter().all(|&e| e < 0.0),
                    2 => c.regular && c.form_eigenvalues.iter().all(|&e| e > 0.0),
                    _ => true,
                };
                Ok(SideReport {
                    name: names[i].to_string(),
                    index: r.index,
                    expected: expected[i],
                    forms_definite: r.crossings.iter().all(sign_ok),
                    crossings: r.crossings,
                })
            })
            .collect()
    };
    let sides = results.into_iter().collect::<Result<Vec<_>>>()?;
    let total = sides.iter().map(|s| s.index).sum();
    let pass = total == 0 && sides.iter().all(|s| s.index == s.expected && s.forms_definite);
    Ok(SquareReport { lambda_inf: family.lambda_inf, morse_alpha, morse_beta, sides, total, pass })
}
