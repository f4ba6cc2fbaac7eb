//! Command dispatch and report emission.

use std::ffi::OsString;
use std::f64::consts::PI;

use clap::Parser;
use maslov_core::band::{morse_vs_t, verify_y19, FourierPotential, FourierTruncation, LatticeCell, ScaledFamily};
use maslov_core::maslov::{doubled_pair, maslov_index, maslov_two_paths, maslov_via_crossings, EigenTracks};
use maslov_core::scenarios::{
    run_spectral_flow_identity, run_square, BandSpec, ComplexMatrixSpec, FamilySpec, Family1D, FourierTermSpec,
    PotentialSpec, ScenarioSpec, SweepKind,
};
use maslov_core::schrodinger::{
    scalar_robin_path, solution_space_trace, theta_periodic_path, verify_identity_rr15, verify_robin_monotone,
    Potential1D,
};
use maslov_core::maslov::LagrangianPath;
use serde::Serialize;

use crate::args::{Cli, Sub};
use crate::config::{
    Command, LambdaInf, RunConfig, ScenarioKind, DEFAULT_CUTOFF, DEFAULT_LOWEST, DEFAULT_TAU,
};
use crate::io::{self, CrossingTable};
use crate::report::{Report, Status, SCHEMA_VERSION};
use crate::{exit, RunError};

/// Samples per eigenphase track.
const PHASE_SAMPLES: usize = 200;

/// What a command produced, before it is written out.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub result: serde_json::Value,
    pub tracks: Option<EigenTracks>,
    pub crossings: CrossingTable,
}

fn to_value<T: Serialize>(value: &T) -> Result<serde_json::Value, RunError> {
    serde_json::to_value(value).map_err(|e| RunError::Io(e.to_string()))
}

fn config_err<T>(message: impl Into<String>) -> Result<T, RunError> {
    Err(RunError::Config(message.into()))
}

/// Top-level keys each command reads.
fn allowed_keys(command: Command) -> &'static [&'static str] {
    match command {
        Command::Path => &["planes", "reference", "second"],
        Command::VerifyPeriodic1d | Command::VerifyRobin1d => &["potential", "theta1", "theta2"],
        Command::Square => &["potential", "family", "alpha", "beta", "lambda_inf"],
        Command::Band => &["potential", "terms", "basis", "theta", "tau", "cutoff", "verify_y19", "t_grid", "lowest"],
        Command::Flow => {
            &["scenario", "potential", "terms", "basis", "theta", "tau", "cutoff", "alpha", "beta", "lambda_inf"]
        }
    }
}

const SHARED_KEYS: [&str; 5] = ["command", "seed", "numerics", "scaling", "output"];

fn check_keys(command: Command, cfg: &RunConfig) -> Result<(), RunError> {
    let value = toml::Value::try_from(cfg).map_err(|e| RunError::Config(e.to_string()))?;
    let table = value.as_table().expect("config serializes to a table");
    let allowed = allowed_keys(command);
    for key in table.keys() {
        if !SHARED_KEYS.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
            return config_err(format!("key `{key}` is not used by command `{}`", command.name()));
        }
    }
    Ok(())
}

/// Loads the config file, applies flags and validates the result.
fn prepare(sub: &Sub, cfg: &mut RunConfig) -> Result<(), RunError> {
    let command = sub.command();
    if let Some(path) = &sub.common().config {
        *cfg = RunConfig::from_toml(&io::read_text(path)?)
            .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    }
    match cfg.command {
        Some(c) if c != command => {
            return config_err(format!("config is for `{}`, not `{}`", c.name(), command.name()));
        }
        _ => cfg.command = Some(command),
    }
    sub.apply(cfg)?;
    cfg.validate()?;
    check_keys(command, cfg)?;
    if command == Command::Square && cfg.output.tracks.is_some() {
        return config_err("square writes no tracks; drop the tracks output");
    }
    Ok(())
}

fn thread_pool() -> Result<rayon::ThreadPool, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var("MASLOV_THREADS") {
        match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => return config_err(format!("MASLOV_THREADS must be a positive integer, got `{text}`")),
        }
    }
    builder.build().map_err(|e| RunError::Config(e.to_string()))
}

fn potential_1d(cfg: &RunConfig) -> Result<Potential1D, RunError> {
    Ok(cfg.potential_spec()?.build()?)
}

fn require<T: Copy>(value: Option<T>, key: &str) -> Result<T, RunError> {
    value.ok_or_else(|| RunError::Config(format!("`{key}` is required")))
}

fn verify_periodic(cfg: &RunConfig, want_tracks: bool) -> Result<Outcome, RunError> {
    let v = potential_1d(cfg)?;
    let (t1, t2) = (cfg.theta1.unwrap_or(0.0), cfg.theta2.unwrap_or(PI));
    let r = verify_identity_rr15(&v, t1, t2, &cfg.numerics)?;
    let tracks = if want_tracks {
        let k = LagrangianPath::constant(solution_space_trace(&v, 0.0, cfg.numerics.steps)?, t1, t2)?;
        Some(io::two_path_phase_tracks(&k, &theta_periodic_path(v.size(), t1, t2)?, PHASE_SAMPLES)?)
    } else {
        None
    };
    Ok(Outcome {
        pass: r.pass,
        lhs: Some(r.lhs_morse_diff),
        rhs: Some(r.rhs_maslov),
        crossings: CrossingTable::Forms(r.crossings.iter().map(|c| ("maslov".to_string(), c.clone())).collect()),
        result: to_value(&r)?,
        tracks,
    })
}

fn verify_robin(cfg: &RunConfig, want_tracks: bool) -> Result<Outcome, RunError> {
    let v = potential_1d(cfg)?;
    let (t1, t2) = (require(cfg.theta1, "theta1")?, require(cfg.theta2, "theta2")?);
    let r = verify_robin_monotone(&v, t1, t2, &cfg.numerics)?;
    let tracks = if want_tracks {
        let k = LagrangianPath::constant(solution_space_trace(&v, 0.0, cfg.numerics.steps)?, t1, t2)?;
        Some(io::two_path_phase_tracks(&k, &scalar_robin_path(v.size(), t1, t2)?, PHASE_SAMPLES)?)
    } else {
        None
    };
    Ok(Outcome {
        pass: r.pass,
        lhs: Some(r.lhs_morse_diff),
        rhs: Some(r.rhs_maslov),
        crossings: CrossingTable::Forms(r.crossings.iter().map(|c| ("maslov".to_string(), c.clone())).collect()),
        result: to_value(&r)?,
        tracks,
    })
}

fn family_1d(cfg: &RunConfig, kind: SweepKind) -> Result<FamilySpec, RunError> {
    let alpha = cfg.alpha.unwrap_or(0.0);
    let beta = match (cfg.beta, kind) {
        (Some(b), _) => b,
        (None, SweepKind::ThetaPeriodic) => PI,
        (None, SweepKind::ScalarRobin) => return config_err("`beta` is required for the scalar_robin family"),
    };
    let lambda_inf = match cfg.lambda_inf.unwrap_or_default() {
        LambdaInf::Auto => None,
        LambdaInf::Value(v) => Some(v),
    };
    Ok(FamilySpec { potential: cfg.potential_spec()?, alpha, beta, lambda_inf })
}

fn square(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let kind = cfg.family.unwrap_or(SweepKind::ThetaPeriodic);
    let family: Family1D = family_1d(cfg, kind)?.build(kind)?;
    let r = run_square(&family, &cfg.numerics)?;
    let rows = r
        .sides
        .iter()
        .flat_map(|side| side.crossings.iter().map(|c| (side.name.clone(), c.clone())))
        .collect();
    Ok(Outcome {
        pass: r.pass,
        lhs: Some(r.total),
        rhs: Some(0),
        result: to_value(&r)?,
        tracks: None,
        crossings: CrossingTable::Forms(rows),
    })
}

/// Fourier terms of a lattice potential, from `terms` or a constant shorthand.
fn lattice_terms(cfg: &RunConfig, dim: usize) -> Result<Vec<FourierTermSpec>, RunError> {
    let origin = vec![0; dim];
    match (&cfg.terms, &cfg.potential) {
        (Some(_), Some(_)) => config_err("give either `terms` or `potential`, not both"),
        (Some(terms), None) => Ok(terms.clone()),
        (None, Some(_)) => match cfg.potential_spec()? {
            PotentialSpec::Constant { value } => Ok(vec![FourierTermSpec { k: origin, coefficient: value }]),
            PotentialSpec::Diagonal { values } => {
                let rows = (0..values.len())
                    .map(|i| (0..values.len()).map(|j| if i == j { values[i] } else { 0.0 }).collect())
                    .collect();
                Ok(vec![FourierTermSpec { k: origin, coefficient: ComplexMatrixSpec::real(rows) }])
            }
            PotentialSpec::Fourier { terms } if dim == 1 => Ok(terms),
            _ => config_err("lattice potentials take constant or diagonal shorthands, or `terms`"),
        },
        (None, None) => config_err("a lattice potential is required (`terms` or `potential`)"),
    }
}

fn band_spec(cfg: &RunConfig) -> Result<BandSpec, RunError> {
    let theta = cfg.theta.clone().unwrap_or_else(|| vec![0.0]);
    let dim = theta.len();
    let basis = cfg
        .basis
        .clone()
        .unwrap_or_else(|| (0..dim).map(|j| (0..dim).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect());
    Ok(BandSpec {
        potential: lattice_terms(cfg, dim)?,
        basis,
        theta,
        tau: cfg.tau.unwrap_or(DEFAULT_TAU),
        cutoff: cfg.cutoff.unwrap_or(DEFAULT_CUTOFF),
    })
}

fn band(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let spec = band_spec(cfg)?;
    let verify = cfg.verify_y19.unwrap_or(cfg.t_grid.is_none());
    if !verify && cfg.t_grid.is_none() {
        return config_err("band needs `t_grid` or `verify_y19`");
    }
    let cell = LatticeCell::new(&spec.basis, &spec.theta)?;
    let coeffs = spec
        .potential
        .iter()
        .map(|t| Ok((t.k.clone(), t.coefficient.to_matrix()?)))
        .collect::<Result<Vec<_>, maslov_core::Error>>()?;
    let family = ScaledFamily::new(cell, FourierPotential::new(coeffs)?)?;
    let truncation = FourierTruncation::new(spec.theta.len(), spec.cutoff)?;
    let mut result = serde_json::Map::new();
    let mut outcome = Outcome {
        pass: true,
        lhs: None,
        rhs: None,
        result: serde_json::Value::Null,
        tracks: None,
        crossings: CrossingTable::Flow(Vec::new()),
    };
    if let Some(grid) = &cfg.t_grid {
        let rows = morse_vs_t(&family, grid, &truncation, cfg.lowest.unwrap_or(DEFAULT_LOWEST))?;
        let mut tracks = EigenTracks::default();
        let mut sorted: Vec<_> = rows.iter().collect();
        sorted.sort_by(|a, b| a.t.total_cmp(&b.t));
        sorted.dedup_by(|a, b| a.t == b.t);
        for row in sorted {
            tracks.push(row.t, row.lowest.clone());
        }
        outcome.tracks = Some(tracks);
        result.insert("morse_vs_t".into(), to_value(&rows)?);
    }
    if verify {
        let r = verify_y19(&family, spec.tau, &truncation, &cfg.scaling)?;
        outcome.pass = r.pass;
        outcome.lhs = Some(r.morse_tau as i64 - r.morse_one as i64);
        outcome.rhs = Some(r.spectral_flow);
        outcome.crossings = CrossingTable::Flow(r.flow_crossings.clone());
        outcome.tracks = Some(r.tracks.clone());
        result.insert("scaling".into(), to_value(&r)?);
    }
    outcome.result = serde_json::Value::Object(result);
    Ok(outcome)
}

fn flow(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let scenario = match require(cfg.scenario, "scenario")? {
        ScenarioKind::ThetaSweep1d => ScenarioSpec::ThetaSweep1d(family_1d(cfg, SweepKind::ThetaPeriodic)?),
        ScenarioKind::RobinSweep1d => ScenarioSpec::RobinSweep1d(family_1d(cfg, SweepKind::ScalarRobin)?),
        ScenarioKind::ScaledBand => ScenarioSpec::ScaledBand(band_spec(cfg)?),
    };
    let r = run_spectral_flow_identity(&scenario, &cfg.numerics)?;
    Ok(Outcome {
        pass: r.pass,
        lhs: Some(r.morse_diff),
        rhs: Some(r.spectral_flow),
        result: to_value(&r)?,
        crossings: CrossingTable::Flow(r.flow_crossings.clone()),
        tracks: Some(r.tracks),
    })
}

fn path(cfg: &RunConfig, want_tracks: bool) -> Result<Outcome, RunError> {
    let planes = cfg.planes.as_ref().ok_or_else(|| RunError::Config("`planes` is required".into()))?;
    let first = io::parse_path(&io::read_text(planes)?, "planes")?;
    let opts = &cfg.numerics.maslov;
    let (result, via_forms, tracks) = match (&cfg.reference, &cfg.second) {
        (Some(reference), None) => {
            let z = io::parse_plane(&io::read_text(reference)?, "reference")?;
            let r = maslov_index(&first, &z, opts)?;
            let locations: Vec<f64> = r.crossings.iter().map(|c| c.location).collect();
            let via = maslov_via_crossings(&first, &z, &locations).ok().map(|v| v.index);
            let tracks = if want_tracks { Some(io::phase_tracks(&first, &z, PHASE_SAMPLES)?) } else { None };
            (r, via, tracks)
        }
        (None, Some(second)) => {
            let g = io::parse_path(&io::read_text(second)?, "second")?;
            let r = maslov_two_paths(&first, &g, opts)?;
            let locations: Vec<f64> = r.crossings.iter().map(|c| c.location).collect();
            let via = doubled_pair(&first, &g)
                .ok()
                .and_then(|(sum, diagonal)| maslov_via_crossings(&sum, &diagonal, &locations).ok())
                .map(|v| v.index);
            let tracks = if want_tracks { Some(io::two_path_phase_tracks(&first, &g, PHASE_SAMPLES)?) } else { None };
            (r, via, tracks)
        }
        _ => return config_err("path needs exactly one of `reference` and `second`"),
    };
    Ok(Outcome {
        pass: via_forms.is_none_or(|v| v == result.index),
        lhs: Some(result.index),
        rhs: via_forms,
        crossings: CrossingTable::Forms(result.crossings.iter().map(|c| ("maslov".to_string(), c.clone())).collect()),
        result: to_value(&result)?,
        tracks,
    })
}

/// Runs one command with a validated configuration.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome, RunError> {
    let want_tracks = cfg.output.tracks.is_some();
    match command {
        Command::Path => path(cfg, want_tracks),
        Command::VerifyPeriodic1d => verify_periodic(cfg, want_tracks),
        Command::VerifyRobin1d => verify_robin(cfg, want_tracks),
        Command::Square => square(cfg),
        Command::Band => band(cfg),
        Command::Flow => flow(cfg),
    }
}

fn write_outputs(cfg: &RunConfig, outcome: &Outcome) -> Result<(), RunError> {
    if let (Some(path), Some(tracks)) = (&cfg.output.tracks, &outcome.tracks) {
        io::write_text(path, &tracks.to_csv())?;
    }
    if let Some(path) = &cfg.output.crossings {
        io::write_text(path, &outcome.crossings.to_csv()?)?;
    }
    Ok(())
}

/// Parses `argv`, runs the command and writes its outputs. Returns the exit
/// code: 0 on pass, 1 when the identity fails, 2 on configuration errors and
/// 3 on numerical failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::CONFIG } else { exit::PASS };
        }
    };
    let command = cli.command.command();
    let mut cfg = RunConfig::default();
    let outcome = prepare(&cli.command, &mut cfg)
        .and_then(|_| thread_pool())
        .and_then(|pool| pool.install(|| execute(command, &cfg)))
        .and_then(|outcome| write_outputs(&cfg, &outcome).map(|_| outcome));
    let (report, code) = match outcome {
        Ok(o) => {
            let report = Report {
                schema_version: SCHEMA_VERSION,
                command: command.name().to_string(),
                status: if o.pass { Status::Pass } else { Status::Fail },
                pass: o.pass,
                lhs: o.lhs,
                rhs: o.rhs,
                result: Some(o.result),
                error: None,
                config: cfg.clone(),
            };
            (report, if o.pass { exit::PASS } else { exit::IDENTITY_FAILED })
        }
        Err(e) => {
            eprintln!("maslov {}: {}: {e}", command.name(), e.kind());
            (Report::failure(command.name(), cfg.clone(), &e), e.exit_code())
        }
    };
    let text = match io::to_json(&report) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("maslov: {e}");
            return exit::CONFIG;
        }
    };
    match &cfg.output.report {
        Some(path) => {
            if let Err(e) = io::write_text(path, &text) {
                eprintln!("maslov: {e}");
                return exit::CONFIG;
            }
            let side = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
            eprintln!(
                "maslov {}: {} (lhs {}, rhs {})",
                command.name(),
                serde_json::to_value(report.status).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
                side(report.lhs),
                side(report.rhs)
            );
        }
        None => print!("{text}"),
    }
    code
}
