//! Reproducible numerical experiments: Cauchy ratios of the Picard scheme,
//! the weak-nonlinearity sweep and uniqueness probes. Each result is a
//! table plus a summary that serialise to CSV and JSON.

mod asymptotic;
mod cauchy;
mod uniqueness;

use std::io::Write;

use serde::Serialize;

pub use asymptotic::{asymptotic_sweep, deviation_norms, sobolev_constant, validate_varrho, AsymptoticRow, AsymptoticSweep};
pub use cauchy::{cauchy_ratio_experiment, CauchyRow, CauchyTable};
pub use uniqueness::{uniqueness_probe, Producer, UniquenessReport, UNIQUENESS_TOLERANCE};

use crate::error::Result;
use crate::report::csv_io;
use crate::solver::io::fmt_float;

fn opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub fn write_cauchy_csv<W: Write>(table: &CauchyTable, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "weighted_diff", "measured_ratio", "bound_ratio", "bound", "pass"])
        .map_err(csv_io)?;
    for r in &table.rows {
        out.write_record([
            r.k.to_string(),
            fmt_float(r.weighted_diff),
            opt(r.measured_ratio),
            fmt_float(r.bound_ratio),
            fmt_float(r.bound),
            r.pass.to_string(),
        ])
        .map_err(csv_io)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_asymptotic_csv<W: Write>(sweep: &AsymptoticSweep, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "epsilon",
        "t",
        "steps",
        "sup_proxy",
        "sobolev",
        "sobolev_bound",
        "sobolev_ok",
        "eta",
        "varrho",
        "reliable",
        "decay_certified",
        "unsupported_regime",
        "drift_M",
        "drift_H",
        "drift_E",
    ])
    .map_err(csv_io)?;
    for r in &sweep.rows {
        out.write_record([
            fmt_float(r.epsilon),
            fmt_float(r.t),
            r.steps.to_string(),
            fmt_float(r.sup_proxy),
            fmt_float(r.sobolev),
            fmt_float(r.sobolev_bound),
            r.sobolev_ok.to_string(),
            fmt_float(r.eta),
            fmt_float(r.varrho),
            r.reliable.to_string(),
            r.decay_certified.to_string(),
            r.unsupported_regime.to_string(),
            fmt_float(r.drift.m),
            fmt_float(r.drift.h),
            fmt_float(r.drift.e),
        ])
        .map_err(csv_io)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_uniqueness_csv<W: Write>(report: &UniquenessReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["producer_a", "producer_b", "rate", "t4", "horizon", "max_weighted_diff", "worst_time", "worst_mode", "pass"])
        .map_err(csv_io)?;
    out.write_record([
        report.producers.0.to_string(),
        report.producers.1.to_string(),
        fmt_float(report.rate),
        fmt_float(report.t4),
        fmt_float(report.horizon),
        fmt_float(report.max_weighted_diff),
        fmt_float(report.worst_time),
        report.worst_mode.as_ref().map(|n| n.to_string()).unwrap_or_default(),
        report.pass.to_string(),
    ])
    .map_err(csv_io)?;
    out.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
