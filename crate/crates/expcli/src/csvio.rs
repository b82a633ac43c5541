//! CSV serialization of run artifacts. All floating-point values carry 17
//! significant digits and rows follow a fixed order, so identical runs
//! produce byte-identical files.

use crate::runner::{CheckRow, MonitorRow, RunArtifacts};
use noflow::metrics::ErrorTable;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

/// 17 significant digits, round-trippable for f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> std::io::Result<BufWriter<fs::File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(fs::File::create(path)?))
}

/// `solution.csv`: component, x, value, time — every snapshot in order.
pub fn write_solution(dir: &Path, art: &RunArtifacts) -> std::io::Result<()> {
    let mut w = create(&dir.join("solution.csv"))?;
    writeln!(w, "component,x,value,time")?;
    for snap in &art.snapshots {
        for (name, values) in art.component_names.iter().zip(&snap.fields) {
            for (j, v) in values.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    name,
                    fmt_float(art.grid.cell_center(j)),
                    fmt_float(*v),
                    fmt_float(snap.t)
                )?;
            }
        }
    }
    w.flush()
}

/// `errors.csv`: cells, h, l1, w1 (w1 empty when not measured).
pub fn write_errors(dir: &Path, table: &ErrorTable) -> std::io::Result<()> {
    let mut w = create(&dir.join("errors.csv"))?;
    writeln!(w, "cells,h,l1,w1")?;
    for row in &table.rows {
        let w1 = row.w1.map(fmt_float).unwrap_or_default();
        writeln!(w, "{},{},{},{}", row.n_cells, fmt_float(row.h), fmt_float(row.l1), w1)?;
    }
    w.flush()
}

/// `monitors.csv`: step, t, dt, mass, tv, umin, umax, entropy_residual.
pub fn write_monitors(dir: &Path, rows: &[MonitorRow]) -> std::io::Result<()> {
    let mut w = create(&dir.join("monitors.csv"))?;
    writeln!(w, "step,t,dt,mass,tv,umin,umax,entropy_residual")?;
    for r in rows {
        let entropy = r.entropy_residual.map(fmt_float).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.step,
            fmt_float(r.t),
            fmt_float(r.dt),
            fmt_float(r.mass),
            fmt_float(r.tv),
            fmt_float(r.u_min),
            fmt_float(r.u_max),
            entropy
        )?;
    }
    w.flush()
}

/// `checks.csv`: the monitor suite's pass/fail rows.
pub fn write_checks(dir: &Path, rows: &[CheckRow]) -> std::io::Result<()> {
    let mut w = create(&dir.join("checks.csv"))?;
    writeln!(w, "check,observed,limit,pass")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.name, r.observed, r.limit, r.pass)?;
    }
    w.flush()
}

/// `metadata.txt`: key = value echo of the configuration plus run facts.
/// Not covered by the byte-determinism guarantee (it records wall time).
pub fn write_metadata(dir: &Path, metadata: &[(String, String)]) -> std::io::Result<()> {
    let mut w = create(&dir.join("metadata.txt"))?;
    for (key, value) in metadata {
        writeln!(w, "{key} = {value}")?;
    }
    w.flush()
}

/// `errors.csv` footer companion: the fitted rates, written separately so
/// the table stays plot-ready.
pub fn write_fits(dir: &Path, table: &ErrorTable) -> std::io::Result<()> {
    let mut w = create(&dir.join("fits.csv"))?;
    writeln!(w, "norm,c,p")?;
    writeln!(w, "l1,{},{}", fmt_float(table.fit_l1.0), fmt_float(table.fit_l1.1))?;
    if let Some((c, p)) = table.fit_w1 {
        writeln!(w, "w1,{},{}", fmt_float(c), fmt_float(p))?;
    }
    w.flush()
}
