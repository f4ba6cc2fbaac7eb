//! File formats: JSON with fixed float formatting, plane tables and CSV output.

use std::io::{self, Write};
use std::path::Path;

use maslov_core::maslov::{doubled_pair, CrossingReport, EigenTracks, FlowCrossing, LagrangianPath};
use maslov_core::symplectic::{relative_phases, LagrangianPlane, SymplecticSpace};
use maslov_core::{CMatrix, C64};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::RunError;

/// Pretty JSON where every float is written as `{:.16e}`, so output does not
/// depend on shortest-representation heuristics.
struct FixedFloats<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", value as f64)
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, RunError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| RunError::Io(e.to_string()))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| RunError::Io(e.to_string()))
}

pub fn read_text(path: &Path) -> Result<String, RunError> {
    std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))
}

fn numeric_rows(text: &str, what: &str) -> Result<Vec<Vec<f64>>, RunError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| RunError::Config(format!("{what}: {e}")))?;
        let row = record
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| RunError::Config(format!("{what}: row {}: `{c}` is not a finite number", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(RunError::Config(format!("{what}: no data rows")));
    }
    Ok(rows)
}

fn complex_pairs(values: &[f64]) -> impl Iterator<Item = C64> + '_ {
    values.chunks(2).map(|p| C64::new(p[0], p[1]))
}

/// A plane in the dump format of [`LagrangianPlane::to_csv`]: one row per
/// ambient coordinate, each basis column as an `re,im` pair.
pub fn parse_plane(text: &str, what: &str) -> Result<LagrangianPlane, RunError> {
    let rows = numeric_rows(text, what)?;
    let dim = rows.len();
    let width = rows[0].len();
    if dim % 2 != 0 || width != dim || rows.iter().any(|r| r.len() != width) {
        return Err(RunError::Config(format!("{what}: expected 2n rows of 2n numbers, got {dim} rows")));
    }
    let entries: Vec<C64> = rows.iter().flat_map(|r| complex_pairs(r)).collect();
    let basis = CMatrix::from_row_slice(dim, dim / 2, &entries);
    Ok(LagrangianPlane::from_basis(&SymplecticSpace::standard(dim / 2), &basis)?)
}

/// A path given one sample per row: `s` followed by the `2n x n` basis in
/// row-major order as `re,im` pairs.
pub fn parse_path(text: &str, what: &str) -> Result<LagrangianPath, RunError> {
    let rows = numeric_rows(text, what)?;
    let width = rows[0].len();
    let n = ((width.saturating_sub(1) / 4) as f64).sqrt().round() as usize;
    if n == 0 || width != 1 + 4 * n * n || rows.iter().any(|r| r.len() != width) {
        return Err(RunError::Config(format!("{what}: every row needs 1 + 4 n^2 numbers, got {width}")));
    }
    let space = SymplecticSpace::standard(n);
    let mut params = Vec::with_capacity(rows.len());
    let mut planes = Vec::with_capacity(rows.len());
    for row in &rows {
        let entries: Vec<C64> = complex_pairs(&row[1..]).collect();
        params.push(row[0]);
        planes.push(LagrangianPlane::from_basis(&space, &CMatrix::from_row_slice(2 * n, n, &entries))?);
    }
    Ok(LagrangianPath::tabulated(&space, params, planes)?)
}

/// Eigenphases of `U_F V_Z^*` along the path at `samples + 1` uniform points.
pub fn phase_tracks(path: &LagrangianPath, reference: &LagrangianPlane, samples: usize) -> Result<EigenTracks, RunError> {
    let (a, b) = (path.start(), path.end());
    let mut tracks = EigenTracks::default();
    for i in 0..=samples {
        let s = if i == samples { b } else { a + (b - a) * i as f64 / samples as f64 };
        tracks.push(s, relative_phases(&path.sample(s)?, reference)?);
    }
    Ok(tracks)
}

pub fn two_path_phase_tracks(first: &LagrangianPath, second: &LagrangianPath, samples: usize) -> Result<EigenTracks, RunError> {
    let (sum, diagonal) = doubled_pair(first, second)?;
    phase_tracks(&sum, &diagonal, samples)
}

/// Crossing inventory written to the crossings CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum CrossingTable {
    /// Crossings of a Maslov computation, tagged with their source.
    Forms(Vec<(String, CrossingReport)>),
    /// Threshold crossings of eigenvalue tracks.
    Flow(Vec<FlowCrossing>),
}

impl CrossingTable {
    pub fn to_csv(&self) -> Result<String, RunError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| RunError::Io(e.to_string());
        match self {
            CrossingTable::Forms(rows) => {
                w.write_record(["source", "s", "dim", "signature", "regular", "eigs"]).map_err(err)?;
                for (source, c) in rows {
                    let eigs: Vec<String> = c.form_eigenvalues.iter().map(|e| format!("{e:.16e}")).collect();
                    w.write_record([
                        source.clone(),
                        format!("{:.16e}", c.location),
                        c.intersection_dim.to_string(),
                        c.signature.to_string(),
                        c.regular.to_string(),
                        eigs.join(";"),
                    ])
                    .map_err(err)?;
                }
            }
            CrossingTable::Flow(rows) => {
                w.write_record(["t0", "t1", "track", "direction"]).map_err(err)?;
                for c in rows {
                    w.write_record([
                        format!("{:.16e}", c.t0),
                        format!("{:.16e}", c.t1),
                        c.track.to_string(),
                        c.direction.to_string(),
                    ])
                    .map_err(err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| RunError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| RunError::Io(e.to_string()))
    }
}
