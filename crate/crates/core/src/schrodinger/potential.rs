use std::f64::consts::PI;
use std::sync::Arc;

use crate::linalg;
use crate::{CMatrix, Error, Result, C64};

/// Regularity declared for a potential; only used for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    Smooth,
    Lipschitz,
    Bounded,
}

#[derive(Clone)]
enum Kind {
    Constant(CMatrix),
    /// `V(x) = sum_k c_k e^{2 pi i k x}`.
    Fourier(Vec<(i64, CMatrix)>),
    /// Piecewise linear through `(x_i, V_i)`.
    Table(Vec<f64>, Vec<CMatrix>),
    Function(Arc<dyn Fn(f64) -> CMatrix + Send + Sync>),
}

/// A bounded Hermitian matrix-valued potential on `[0, 1]`.
#[derive(Clone)]
pub struct Potential1D {
    size: usize,
    kind: Kind,
    smoothness: Smoothness,
}

impl std::fmt::Debug for Potential1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.kind {
            Kind::Constant(_) => "constant",
            Kind::Fourier(_) => "fourier",
            Kind::Table(..) => "table",
            Kind::Function(_) => "function",
        };
        f.debug_struct("Potential1D").field("size", &self.size).field("kind", &kind).finish()
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::InvalidInput(format!("potential value must be square, got {:?}", m.shape())));
    }
    let residual = linalg::hermitian_residual(m);
    if residual > 1e-12 * (1.0 + linalg::max_abs(m)) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

impl Potential1D {
    pub fn constant(value: CMatrix) -> Result<Self> {
        check_hermitian(&value)?;
        Ok(Self { size: value.nrows(), kind: Kind::Constant(value), smoothness: Smoothness::Smooth })
    }

    /// Scalar constant potential (`m = 1`).
    pub fn scalar(value: f64) -> Self {
        Self::diagonal(&[value])
    }

    /// Constant diagonal potential.
    pub fn diagonal(values: &[f64]) -> Self {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| C64::new(v, 0.0)),
        ));
        Self { size: values.len(), kind: Kind::Constant(d), smoothness: Smoothness::Smooth }
    }

    /// Trigonometric polynomial; the coefficients must satisfy
    /// `c_{-k} = c_k^*` so that the values are Hermitian.
    pub fn fourier(modes: Vec<(i64, CMatrix)>) -> Result<Self> {
        let Some((_, first)) = modes.first() else {
            return Err(Error::InvalidInput("at least one Fourier mode is required".into()));
        };
        let m = first.nrows();
        for (k, c) in &modes {
            if c.shape() != (m, m) {
                return Err(Error::DimensionMismatch { expected: m, got: c.nrows() });
            }
            let partner = modes.iter().find(|(q, _)| *q == -k).map(|(_, c)| c);
            let residual = match partner {
                Some(p) => linalg::max_abs(&(p - c.adjoint())),
                None => linalg::max_abs(c),
            };
            if residual > 1e-12 * (1.0 + linalg::max_abs(c)) {
                return Err(Error::NotHermitian { residual });
            }
        }
        Ok(Self { size: m, kind: Kind::Fourier(modes), smoothness: Smoothness::Smooth })
    }

    /// Scalar `amplitude * cos(2 pi x) + offset`.
    pub fn cosine(offset: f64, amplitude: f64) -> Self {
        let c = |v: f64| CMatrix::from_element(1, 1, C64::new(v, 0.0));
        Self::fourier(vec![(0, c(offset)), (1, c(0.5 * amplitude)), (-1, c(0.5 * amplitude))])
            .expect("real cosine coefficients are Hermitian")
    }

    pub fn table(xs: Vec<f64>, values: Vec<CMatrix>) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 2 {
            return Err(Error::InvalidInput("table needs at least two matching points".into()));
        }
        if xs[0] > 0.0 || xs[xs.len() - 1] < 1.0 || !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("table abscissae must increase and cover [0, 1]".into()));
        }
        let m = values[0].nrows();
        for v in &values {
            check_hermitian(v)?;
            if v.nrows() != m {
                return Err(Error::DimensionMismatch { expected: m, got: v.nrows() });
            }
        }
        Ok(Self { size: m, kind: Kind::Table(xs, values), smoothness: Smoothness::Lipschitz })
    }

    /// Arbitrary function, checked for Hermitian values on a grid.
    pub fn from_fn(
        size: usize,
        smoothness: Smoothness,
        f: impl Fn(f64) -> CMatrix + Send + Sync + 'static,
    ) -> Result<Self> {
        for i in 0..=64 {
            let v = f(i as f64 / 64.0);
            check_hermitian(&v)?;
            if v.nrows() != size {
                return Err(Error::DimensionMismatch { expected: size, got: v.nrows() });
            }
        }
        Ok(Self { size, kind: Kind::Function(Arc::new(f)), smoothness })
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// Number of components `m`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, Kind::Constant(_))
    }

    pub fn eval(&self, x: f64) -> CMatrix {
        match &self.kind {
            Kind::Constant(v) => v.clone(),
            Kind::Fourier(modes) => {
                let mut out = CMatrix::zeros(self.size, self.size);
                for (k, c) in modes {
                    out += c * C64::from_polar(1.0, 2.0 * PI * *k as f64 * x);
                }
                (&out + out.adjoint()) * C64::new(0.5, 0.0)
            }
            Kind::Table(xs, vs) => {
                let i = xs.partition_point(|&p| p <= x).clamp(1, xs.len() - 1);
                let t = ((x - xs[i - 1]) / (xs[i] - xs[i - 1])).clamp(0.0, 1.0);
                &vs[i - 1] * C64::new(1.0 - t, 0.0) + &vs[i] * C64::new(t, 0.0)
            }
            Kind::Function(f) => f(x),
        }
    }

    /// Supremum of the operator norm, exact for constants and sampled on
    /// `10^4 + 1` points otherwise.
    pub fn sup_norm(&self) -> f64 {
        match &self.kind {
            Kind::Constant(v) => linalg::spectral_norm(v),
            _ => (0..=10_000)
                .map(|i| linalg::spectral_norm(&self.eval(i as f64 / 10_000.0)))
                .fold(0.0, f64::max),
        }
    }
}
