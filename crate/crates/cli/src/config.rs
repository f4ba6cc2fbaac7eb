//! Run configuration: a strict TOML file whose values inline flags override.

use std::fmt;
use std::path::PathBuf;

use maslov_core::band::ScalingOptions;
use maslov_core::scenarios::{ComplexMatrixSpec, FourierTermSpec, PotentialSpec, SweepKind};
use maslov_core::schrodinger::VerifyConfig;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Path,
    #[serde(rename = "verify-periodic-1d")]
    VerifyPeriodic1d,
    #[serde(rename = "verify-robin-1d")]
    VerifyRobin1d,
    Square,
    Band,
    Flow,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Path => "path",
            Command::VerifyPeriodic1d => "verify-periodic-1d",
            Command::VerifyRobin1d => "verify-robin-1d",
            Command::Square => "square",
            Command::Band => "band",
            Command::Flow => "flow",
        }
    }
}

/// Registered spectral-flow scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    #[serde(rename = "theta_sweep_1d")]
    ThetaSweep1d,
    #[serde(rename = "robin_sweep_1d")]
    RobinSweep1d,
    ScaledBand,
}

/// A potential given either as a shorthand string or as a typed table.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialInput {
    Inline(String),
    Spec(PotentialSpec),
}

impl PotentialInput {
    pub fn to_spec(&self) -> Result<PotentialSpec, RunError> {
        match self {
            PotentialInput::Inline(s) => parse_inline_potential(s),
            PotentialInput::Spec(spec) => Ok(spec.clone()),
        }
    }
}

fn parse_numbers(list: &str, what: &str) -> Result<Vec<f64>, RunError> {
    list.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| RunError::Config(format!("{what}: `{x}` is not a finite number")))
        })
        .collect()
}

/// `const:v`, `diag:v1,v2,...` or `cos:offset,amplitude` for
/// `offset + amplitude cos(2 pi x)`.
pub fn parse_inline_potential(text: &str) -> Result<PotentialSpec, RunError> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| RunError::Config(format!("potential `{text}` must look like const:v, diag:v1,v2 or cos:c,a")))?;
    let values = parse_numbers(rest, "potential")?;
    let matrix = |v: f64| ComplexMatrixSpec::real(vec![vec![v]]);
    match (kind.trim(), values.as_slice()) {
        ("const", [v]) => Ok(PotentialSpec::Constant { value: matrix(*v) }),
        ("diag", vs) if !vs.is_empty() => Ok(PotentialSpec::Diagonal { values: vs.to_vec() }),
        ("cos", [offset, amplitude]) => Ok(PotentialSpec::Fourier {
            terms: vec![
                FourierTermSpec { k: vec![0], coefficient: matrix(*offset) },
                FourierTermSpec { k: vec![1], coefficient: matrix(0.5 * amplitude) },
                FourierTermSpec { k: vec![-1], coefficient: matrix(0.5 * amplitude) },
            ],
        }),
        _ => Err(RunError::Config(format!("potential `{text}` must look like const:v, diag:v1,v2 or cos:c,a"))),
    }
}

impl Serialize for PotentialInput {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PotentialInput::Inline(text) => s.serialize_str(text),
            PotentialInput::Spec(spec) => spec.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for PotentialInput {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct PotentialVisitor;

        impl<'de> Visitor<'de> for PotentialVisitor {
            type Value = PotentialInput;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a potential shorthand string or a potential table")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_inline_potential(v).map_err(E::custom)?;
                Ok(PotentialInput::Inline(v.to_string()))
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<Self::Value, A::Error> {
                PotentialSpec::deserialize(de::value::MapAccessDeserializer::new(map)).map(PotentialInput::Spec)
            }
        }

        d.deserialize_any(PotentialVisitor)
    }
}

/// Lower spectral bound of the homotopy square.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LambdaInf {
    #[default]
    Auto,
    Value(f64),
}

impl std::str::FromStr for LambdaInf {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(LambdaInf::Auto);
        }
        s.parse::<f64>()
            .map(LambdaInf::Value)
            .map_err(|_| format!("lambda_inf must be `auto` or a number, got `{s}`"))
    }
}

impl Serialize for LambdaInf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LambdaInf::Auto => s.serialize_str("auto"),
            LambdaInf::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for LambdaInf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct LambdaVisitor;

        impl Visitor<'_> for LambdaVisitor {
            type Value = LambdaInf;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("`auto` or a number")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(LambdaInf::Value(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(LambdaInf::Value(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(LambdaInf::Value(v as f64))
            }
        }

        d.deserialize_any(LambdaVisitor)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// JSON report; printed to stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// Eigenvalue or eigenphase tracks as `t,j,lambda`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tracks: Option<PathBuf>,
    /// Crossing inventory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossings: Option<PathBuf>,
}

/// Everything a run needs. Scenario parameters live at the top level; each
/// command reads the ones it uses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Seed for randomized checks; recorded in every report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialInput>,
    /// Fourier coefficients of a lattice potential.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<FourierTermSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<SweepKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_inf: Option<LambdaInf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioKind>,
    /// Lattice vectors as columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
    /// Quasi-momentum in cell coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_y19: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lowest: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planes: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<PathBuf>,
    /// Second path for a two-path index.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second: Option<PathBuf>,
    pub numerics: VerifyConfig,
    pub scaling: ScalingOptions,
    pub output: OutputConfig,
}

pub const DEFAULT_CUTOFF: usize = 16;
pub const DEFAULT_TAU: f64 = 0.05;
pub const DEFAULT_LOWEST: usize = 6;
pub const MAX_CUTOFF: usize = 64;

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, RunError> {
        toml::to_string(self).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec, RunError> {
        self.potential
            .as_ref()
            .ok_or_else(|| RunError::Config("a potential is required".into()))?
            .to_spec()
    }

    /// Bounds that do not depend on the command.
    pub fn validate(&self) -> Result<(), RunError> {
        self.numerics.validate().map_err(|e| RunError::Config(e.to_string()))?;
        let s = &self.scaling;
        if !(2..=100_000).contains(&s.grid_points) || s.stable_run == 0 {
            return Err(RunError::Config("scaling.grid_points must lie in [2, 100000] and stable_run be positive".into()));
        }
        if !(s.tau_min > 0.0 && s.tau_min < 1.0 && s.touch_tol > 0.0) {
            return Err(RunError::Config("scaling.tau_min must lie in (0, 1) and touch_tol be positive".into()));
        }
        let finite = |name: &str, v: Option<f64>| match v {
            Some(x) if !x.is_finite() => Err(RunError::Config(format!("{name} must be finite"))),
            _ => Ok(()),
        };
        finite("theta1", self.theta1)?;
        finite("theta2", self.theta2)?;
        finite("alpha", self.alpha)?;
        finite("beta", self.beta)?;
        if let Some(LambdaInf::Value(v)) = self.lambda_inf {
            if !(v.is_finite() && v < 0.0) {
                return Err(RunError::Config("lambda_inf must be negative".into()));
            }
        }
        if let Some(tau) = self.tau {
            if !(tau > 0.0 && tau < 1.0) {
                return Err(RunError::Config("tau must lie in (0, 1)".into()));
            }
        }
        if let Some(cutoff) = self.cutoff {
            if !(1..=MAX_CUTOFF).contains(&cutoff) {
                return Err(RunError::Config(format!("cutoff must lie in [1, {MAX_CUTOFF}]")));
            }
        }
        if let Some(lowest) = self.lowest {
            if !(1..=256).contains(&lowest) {
                return Err(RunError::Config("lowest must lie in [1, 256]".into()));
            }
        }
        if let Some(grid) = &self.t_grid {
            if grid.is_empty() || grid.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
                return Err(RunError::Config("t_grid entries must lie in (0, 1]".into()));
            }
        }
        if let Some(theta) = &self.theta {
            if theta.is_empty() || theta.iter().any(|t| !(0.0..1.0).contains(t)) {
                return Err(RunError::Config("theta entries must lie in [0, 1)".into()));
            }
        }
        if let Some(p) = &self.potential {
            p.to_spec()?;
        }
        Ok(())
    }
}
