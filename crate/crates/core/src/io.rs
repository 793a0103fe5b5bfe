//! CSV persistence.
//!
//! Snapshot files carry `t,x,zeta,q` with one row per unknown node, trace
//! files carry `t,zeta,q` with one row per time step. Numbers are written
//! with 17 significant digits so that reading them back is bit-exact.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::forcing::BoundaryForcing;
use crate::grid::Grid1D;
use crate::state::WaveState;

pub const SNAPSHOT_HEADER: [&str; 4] = ["t", "x", "zeta", "q"];
pub const TRACE_HEADER: [&str; 3] = ["t", "zeta", "q"];

/// Full precision scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Time series of the elevation and discharge at one location.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TraceRecord {
    pub t: Vec<f64>,
    pub zeta: Vec<f64>,
    pub q: Vec<f64>,
}

impl TraceRecord {
    pub fn push(&mut self, t: f64, zeta: f64, q: f64) {
        self.t.push(t);
        self.zeta.push(zeta);
        self.q.push(q);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Elevation column as a sampled forcing.
    pub fn to_forcing(&self) -> Result<BoundaryForcing> {
        BoundaryForcing::from_series(&self.t, self.zeta.clone())
    }
}

/// Columns of a snapshot file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub zeta: Vec<f64>,
    pub q: Vec<f64>,
}

fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    }
}

/// Writes rows of numbers under `header`.
pub fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[f64]>,
{
    let mut w = create(path)?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row.as_ref().iter().map(|v| fmt_num(*v)))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_snapshot(state: &WaveState, grid: &Grid1D, path: &Path) -> Result<()> {
    if state.len() != grid.n_x() {
        return Err(Error::Shape {
            expected: grid.n_x(),
            got: state.len(),
        });
    }
    let rows = (0..state.len()).map(|i| [state.t, grid.x(i + 1), state.zeta[i], state.q[i]]);
    write_rows(path, &SNAPSHOT_HEADER, rows)
}

/// Writes a [`Snapshot`] under the snapshot header.
pub fn write_snapshot_data(snap: &Snapshot, path: &Path) -> Result<()> {
    let n = snap.x.len();
    if snap.zeta.len() != n || snap.q.len() != n {
        return Err(Error::Shape {
            expected: n,
            got: snap.zeta.len().min(snap.q.len()),
        });
    }
    let rows = (0..n).map(|i| [snap.t, snap.x[i], snap.zeta[i], snap.q[i]]);
    write_rows(path, &SNAPSHOT_HEADER, rows)
}

pub fn write_trace(trace: &TraceRecord, path: &Path) -> Result<()> {
    let rows = (0..trace.len()).map(|k| [trace.t[k], trace.zeta[k], trace.q[k]]);
    write_rows(path, &TRACE_HEADER, rows)
}

/// Reads a numeric CSV whose header must equal `header`.
pub fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let got = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("expected header {:?}, found {:?}", header, got.iter().collect::<Vec<_>>()),
        });
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            }
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let row = rec
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("cannot parse {field:?} as a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let rows = read_rows(path, &SNAPSHOT_HEADER)?;
    let mut snap = Snapshot::default();
    for row in rows {
        snap.t = row[0];
        snap.x.push(row[1]);
        snap.zeta.push(row[2]);
        snap.q.push(row[3]);
    }
    Ok(snap)
}

pub fn read_trace_record(path: &Path) -> Result<TraceRecord> {
    let rows = read_rows(path, &TRACE_HEADER)?;
    let mut trace = TraceRecord::default();
    for row in rows {
        trace.push(row[0], row[1], row[2]);
    }
    Ok(trace)
}

/// Reads a trace file as a sampled boundary forcing.
pub fn read_trace(path: &Path) -> Result<BoundaryForcing> {
    read_trace_record(path)?.to_forcing()
}

/// Writes a string to `path`, mapping failures to [`Error::Io`].
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}
