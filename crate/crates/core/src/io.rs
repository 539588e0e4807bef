//! CSV ingestion of externally computed spectra and CSV export of
//! trajectories, sheet grids and sphere curves.
//!
//! Input layout: optional leading `# key=value` metadata lines, then a
//! header `scan,re_1,im_1,re_2,im_2[,re_3,im_3...]` and one row per scan
//! value.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{c, ComplexScalar};
use crate::crossing::{match_branches, ScanTrajectory};
use crate::sphere::SpherePoint;
use crate::surface::SheetGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDataset {
    pub scan_name: String,
    pub scan_values: Vec<f64>,
    /// One eigenvalue series per mode, each as long as `scan_values`.
    pub modes: Vec<Vec<ComplexScalar>>,
    pub metadata: BTreeMap<String, String>,
}

impl TrajectoryDataset {
    pub fn len(&self) -> usize {
        self.scan_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scan_values.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.len() < 2 {
            return Err(Error::Domain(format!("need at least 2 modes, got {}", self.modes.len())));
        }
        if let Some(m) = self.modes.iter().find(|m| m.len() != self.scan_values.len()) {
            return Err(Error::LengthMismatch(format!(
                "mode of length {} vs {} scan values",
                m.len(),
                self.scan_values.len()
            )));
        }
        let inc = self.scan_values.windows(2).all(|w| w[1] > w[0]);
        let dec = self.scan_values.windows(2).all(|w| w[1] < w[0]);
        if !(inc || dec) {
            return Err(Error::Domain("scan values must be strictly monotone".into()));
        }
        Ok(())
    }

    /// Continuity-matched trajectory of two modes, reordered to increasing
    /// scan values.
    pub fn trajectory(&self, mode_a: usize, mode_b: usize) -> Result<ScanTrajectory> {
        self.validate()?;
        let (Some(a), Some(b)) = (self.modes.get(mode_a), self.modes.get(mode_b)) else {
            return Err(Error::Domain(format!("no modes {mode_a} and {mode_b}")));
        };
        if mode_a == mode_b {
            return Err(Error::Domain("need two different modes".into()));
        }
        let mut rows: Vec<(f64, [ComplexScalar; 2])> = self
            .scan_values
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&t, (&x, &y))| (t, [x, y]))
            .collect();
        if rows.len() > 1 && rows[1].0 < rows[0].0 {
            rows.reverse();
        }
        let (ts, raw): (Vec<f64>, Vec<[ComplexScalar; 2]>) = rows.into_iter().unzip();
        match_branches(ts, &raw)
    }

    pub fn from_trajectory(name: &str, traj: &ScanTrajectory) -> Self {
        Self {
            scan_name: name.to_string(),
            scan_values: traj.ts.clone(),
            modes: vec![traj.branch_a.clone(), traj.branch_b.clone()],
            metadata: BTreeMap::new(),
        }
    }
}

pub fn ingest_csv(path: impl AsRef<Path>) -> Result<TrajectoryDataset> {
    ingest_reader(std::fs::File::open(path)?)
}

pub fn ingest_reader(reader: impl Read) -> Result<TrajectoryDataset> {
    let mut buf = std::io::BufReader::new(reader);
    let mut metadata = BTreeMap::new();
    let mut line_no = 0u64;
    let mut header_line = String::new();
    loop {
        header_line.clear();
        if buf.read_line(&mut header_line)? == 0 {
            return Err(Error::Parse {
                line: line_no + 1,
                message: "missing header".into(),
            });
        }
        line_no += 1;
        let trimmed = header_line.trim();
        if let Some(meta) = trimmed.strip_prefix('#') {
            if let Some((k, v)) = meta.split_once('=') {
                metadata.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if !trimmed.is_empty() {
            break;
        }
    }
    let header_at = line_no;

    let columns: Vec<String> = header_line.trim().split(',').map(|s| s.trim().to_string()).collect();
    let n_modes = (columns.len().saturating_sub(1)) / 2;
    let expected: Vec<String> = std::iter::once("scan".to_string())
        .chain((1..=n_modes).flat_map(|k| [format!("re_{k}"), format!("im_{k}")]))
        .collect();
    if columns.len() < 5 || columns.len() % 2 == 0 || columns[1..] != expected[1..] {
        return Err(Error::Parse {
            line: header_at,
            message: format!("expected header scan,re_1,im_1,re_2,im_2[,...], got {}", header_line.trim()),
        });
    }

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(buf);
    let mut scan_values = Vec::new();
    let mut modes = vec![Vec::new(); n_modes];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: header_at + e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = header_at + rec.position().map_or(0, |p| p.line());
        if rec.len() != columns.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", columns.len(), rec.len()),
            });
        }
        let mut vals = Vec::with_capacity(rec.len());
        for (field, name) in rec.iter().zip(&columns) {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("column {name}: not a number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("column {name}: non-finite value"),
                });
            }
            vals.push(v);
        }
        if let [.., prev, last] = scan_values.as_slice() {
            let dir: f64 = last - prev;
            let step: f64 = vals[0] - last;
            if step == 0.0 || step.signum() != dir.signum() {
                return Err(Error::Parse {
                    line,
                    message: format!("scan value {} breaks strict monotonicity", vals[0]),
                });
            }
        } else if scan_values.last() == Some(&vals[0]) {
            return Err(Error::Parse {
                line,
                message: format!("duplicated scan value {}", vals[0]),
            });
        }
        scan_values.push(vals[0]);
        for (k, mode) in modes.iter_mut().enumerate() {
            mode.push(c(vals[1 + 2 * k], vals[2 + 2 * k]));
        }
    }
    let ds = TrajectoryDataset {
        scan_name: metadata.get("scan").cloned().unwrap_or_else(|| "scan".into()),
        scan_values,
        modes,
        metadata,
    };
    if ds.scan_values.is_empty() {
        return Err(Error::Parse {
            line: header_at + 1,
            message: "no data rows".into(),
        });
    }
    ds.validate()?;
    Ok(ds)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes a dataset in the ingestion layout (metadata lines first).
pub fn write_dataset(ds: &TrajectoryDataset, mut w: impl Write) -> Result<()> {
    for (k, v) in &ds.metadata {
        writeln!(w, "# {k}={v}")?;
    }
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["scan".to_string()];
    for k in 1..=ds.modes.len() {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    out.write_record(&header).map_err(csv_err)?;
    for (row, t) in ds.scan_values.iter().enumerate() {
        let mut rec = vec![t.to_string()];
        for m in &ds.modes {
            rec.push(m[row].re.to_string());
            rec.push(m[row].im.to_string());
        }
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trajectory(traj: &ScanTrajectory, w: impl Write) -> Result<()> {
    write_dataset(&TrajectoryDataset::from_trajectory("scan", traj), w)
}

/// Long format, one row per grid vertex:
/// `p1,p2,re1,im1,re2,im2,is_cut_edge`.
pub fn write_sheet_grid(grid: &SheetGrid, w: impl Write) -> Result<()> {
    let mut on_cut = vec![false; grid.sheet1.len()];
    for e in &grid.cut_cells {
        for (i, j) in e.ends() {
            on_cut[j * grid.n1() + i] = true;
        }
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["p1", "p2", "re1", "im1", "re2", "im2", "is_cut_edge"])
        .map_err(csv_err)?;
    for (j, p2) in grid.axis2.iter().enumerate() {
        for (i, p1) in grid.axis1.iter().enumerate() {
            let k = j * grid.n1() + i;
            let (a, b) = (grid.sheet1[k], grid.sheet2[k]);
            out.write_record([
                p1.to_string(),
                p2.to_string(),
                a.re.to_string(),
                a.im.to_string(),
                b.re.to_string(),
                b.im.to_string(),
                u8::from(on_cut[k]).to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_sphere_curve(points: &[SpherePoint], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["tn", "tchi", "txi"]).map_err(csv_err)?;
    for p in points {
        out.write_record([p.tn.to_string(), p.tchi.to_string(), p.txi.to_string()])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}
