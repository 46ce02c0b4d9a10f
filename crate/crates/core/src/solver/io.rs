use std::io::{Read, Write};

use num_complex::Complex64;

use super::conserved::Monitors;
use super::state::{FourierState, Trajectory};
use crate::error::{Error, Position, Result};
use crate::lattice::{LatticePoint, TruncationBox};
use crate::report::csv_io;

/// Floats are written with `{:e}`, the shortest form that parses back to
/// the same bits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

/// `t,n_1,…,n_ν,re,im`, one row per mode per snapshot.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, nu: usize, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string()];
    header.extend((1..=nu).map(|j| format!("n_{j}")));
    header.extend(["re".to_string(), "im".to_string()]);
    out.write_record(&header).map_err(csv_io)?;
    for s in &traj.states {
        let t = fmt_float(s.time);
        for (n, c) in s.iter() {
            let mut row = Vec::with_capacity(nu + 3);
            row.push(t.clone());
            row.extend(n.coords().iter().map(i64::to_string));
            row.push(fmt_float(c.re));
            row.push(fmt_float(c.im));
            out.write_record(&row).map_err(csv_io)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// `t,M,H,E`.
pub fn write_monitors_csv<W: Write>(times: &[f64], monitors: &[Monitors], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "M", "H", "E"]).map_err(csv_io)?;
    for (t, m) in times.iter().zip(monitors) {
        out.write_record([fmt_float(*t), fmt_float(m.m), fmt_float(m.h), fmt_float(m.e)])
            .map_err(csv_io)?;
    }
    out.flush()?;
    Ok(())
}

fn parse_err(line: u64, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position: Position::LineColumn {
            line: line as usize,
            column,
        },
        message: message.into(),
    }
}

/// Reads a trajectory written by [`write_trajectory_csv`]. Consecutive rows
/// with equal `t` form one snapshot. Without an explicit box, the smallest
/// box holding every mode is used.
pub fn read_trajectory_csv<R: Read>(r: R, truncation: Option<TruncationBox>) -> Result<Trajectory> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers().map_err(|e| parse_err(1, 1, e.to_string()))?.clone();
    let cols: Vec<&str> = header.iter().collect();
    let nu = cols.len().checked_sub(3).filter(|&n| n >= 1).ok_or_else(|| parse_err(1, 1, "header needs t, n_1.., re, im"))?;
    let mut want = vec!["t".to_string()];
    want.extend((1..=nu).map(|j| format!("n_{j}")));
    want.extend(["re".to_string(), "im".to_string()]);
    if cols != want.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(parse_err(1, 1, format!("unexpected header {cols:?}")));
    }
    let mut rows: Vec<(f64, LatticePoint, Complex64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, 1, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != nu + 3 {
            return Err(parse_err(line, 1, format!("expected {} fields, found {}", nu + 3, rec.len())));
        }
        let float = |i: usize| -> Result<f64> {
            let v: f64 = rec[i].trim().parse().map_err(|_| parse_err(line, i + 1, format!("bad number {:?}", &rec[i])))?;
            if !v.is_finite() {
                return Err(parse_err(line, i + 1, "non-finite value"));
            }
            Ok(v)
        };
        let t = float(0)?;
        let coords = (1..=nu)
            .map(|i| rec[i].trim().parse::<i64>().map_err(|_| parse_err(line, i + 1, format!("bad integer {:?}", &rec[i]))))
            .collect::<Result<Vec<_>>>()?;
        let n = LatticePoint::new(coords)?;
        rows.push((t, n, Complex64::new(float(nu + 1)?, float(nu + 2)?)));
    }
    let bx = match truncation {
        Some(b) => b,
        None => {
            let radius = rows.iter().map(|(_, n, _)| n.l1_norm()).max().unwrap_or(0);
            let radius = u32::try_from(radius).map_err(|_| parse_err(0, 1, "mode too large"))?;
            TruncationBox::new(nu, radius)?
        }
    };
    let mut states: Vec<FourierState> = Vec::new();
    for (t, n, c) in rows {
        match states.last_mut() {
            Some(s) if s.time == t => {
                if s.contains(&n) {
                    return Err(Error::Config(format!("mode {n} repeated at t = {t}")));
                }
                s.insert(n, c)?;
            }
            Some(s) if s.time > t => {
                return Err(Error::Config(format!("times must increase, found {t} after {}", s.time)));
            }
            _ => {
                let mut s = FourierState::new(t, bx);
                s.insert(n, c)?;
                states.push(s);
            }
        }
    }
    Ok(Trajectory { states })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let bx = TruncationBox::new(2, 3).unwrap();
        let mut states = Vec::new();
        for (i, t) in [0.0, 0.1, 1.0 / 3.0].into_iter().enumerate() {
            let mut s = FourierState::new(t, bx);
            s.insert(LatticePoint::new(vec![1, -2]).unwrap(), Complex64::new(0.1 * i as f64, -1e-300)).unwrap();
            s.insert(LatticePoint::new(vec![0, 0]).unwrap(), Complex64::new(std::f64::consts::PI, 0.0)).unwrap();
            states.push(s);
        }
        let traj = Trajectory { states };
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, 2, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,n_1,n_2,re,im\n0e0,0,0,3.141592653589793e0,0e0\n"));
        let back = read_trajectory_csv(&buf[..], Some(bx)).unwrap();
        assert_eq!(back, traj);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "t,n_1,re,im\n0e0,1,1e0,0e0\n0e0,x,1e0,0e0\n";
        match read_trajectory_csv(bad.as_bytes(), None) {
            Err(Error::Parse { position: Position::LineColumn { line, column }, .. }) => {
                assert_eq!((line, column), (3, 2));
            }
            other => panic!("{other:?}"),
        }
        assert!(read_trajectory_csv("t,re,im\n".as_bytes(), None).is_err());
        assert!(read_trajectory_csv("t,n_1,re,im\n1e0,0,1,0\n0e0,0,1,0\n".as_bytes(), None).is_err());
        assert!(read_trajectory_csv("t,n_1,re,im\n0e0,0,inf,0\n".as_bytes(), None).is_err());
        assert!(read_trajectory_csv("t,n_1,re,im\n0e0,0,1\n".as_bytes(), None).is_err());
    }
}
