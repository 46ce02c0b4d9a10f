use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qpdnls::report::Report;
use qpdnls::solver::io::{write_monitors_csv, write_trajectory_csv};
use qpdnls::solver::{Monitors, Trajectory};
use qpdnls::Result;
use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

pub struct Artifacts {
    dir: PathBuf,
    pub format: Format,
}

impl Artifacts {
    pub fn new(dir: &Path, format: Format) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            format,
        })
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    pub fn with_file(&self, name: &str, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let mut w = self.create(name)?;
        f(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let text = qpdnls::experiments::to_json(value)?;
        self.with_file(&format!("{name}.json"), |w| Ok(w.write_all(text.as_bytes())?))
    }

    /// `name.csv`, or `name.json` when JSON tables were requested.
    pub fn table<T: Serialize>(&self, name: &str, value: &T, csv: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match self.format {
            Format::Csv => self.with_file(&format!("{name}.csv"), csv),
            Format::Json => self.json(name, value),
        }
    }

    pub fn report(&self, name: &str, report: &Report) -> Result<()> {
        self.table(name, report, |w| report.write_csv(w))
    }

    pub fn trajectory(&self, name: &str, traj: &Trajectory, nu: usize) -> Result<()> {
        match self.format {
            Format::Csv => self.with_file(&format!("{name}.csv"), |w| write_trajectory_csv(traj, nu, w)),
            Format::Json => self.json(name, &trajectory_json(traj)),
        }
    }

    pub fn monitors(&self, name: &str, times: &[f64], monitors: &[Monitors]) -> Result<()> {
        match self.format {
            Format::Csv => self.with_file(&format!("{name}.csv"), |w| write_monitors_csv(times, monitors, w)),
            Format::Json => {
                let rows: Vec<Value> = times
                    .iter()
                    .zip(monitors)
                    .map(|(t, m)| json!({"t": t, "M": m.m, "H": nan_null(m.h), "E": nan_null(m.e)}))
                    .collect();
                self.json(name, &rows)
            }
        }
    }
}

fn nan_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn trajectory_json(traj: &Trajectory) -> Value {
    Value::Array(
        traj.states
            .iter()
            .map(|s| {
                let modes: Vec<Value> = s
                    .iter()
                    .map(|(n, c)| json!({"n": n.coords(), "re": c.re, "im": c.im}))
                    .collect();
                json!({"t": s.time, "modes": modes})
            })
            .collect(),
    )
}

/// One `PASS`/`FAIL` line per row.
pub fn print_report(report: &Report) {
    let mut out = std::io::stdout().lock();
    for row in &report.rows {
        let _ = writeln!(out, "{}", row.summary_line());
    }
}

pub fn print_check(pass: bool, lemma: &str, instance: &str) {
    println!("{} lemma={lemma} instance={instance}", if pass { "PASS" } else { "FAIL" });
}
