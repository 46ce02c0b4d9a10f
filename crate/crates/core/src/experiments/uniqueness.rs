use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::compute_constants;
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::solver::{integrate, picard_limit, trajectory_weighted_diff, ProblemConfig, Scheme, Trajectory};

/// Agreement threshold for the weighted difference.
pub const UNIQUENESS_TOLERANCE: f64 = 1e-9;

/// A way of producing a trajectory from a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Producer {
    Picard,
    Rk4,
    /// The Picard limit with the box radius doubled.
    PicardDoubleBox,
}

impl fmt::Display for Producer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Producer::Picard => "picard",
            Producer::Rk4 => "rk4",
            Producer::PicardDoubleBox => "picard_double_box",
        })
    }
}

impl FromStr for Producer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "picard" => Ok(Producer::Picard),
            "rk4" => Ok(Producer::Rk4),
            "picard_double_box" => Ok(Producer::PicardDoubleBox),
            _ => Err(Error::Usage(format!(
                "unknown producer {s:?}; expected picard, rk4 or picard_double_box"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub max_weighted_diff: f64,
    pub rate: f64,
    pub t4: f64,
    pub horizon: f64,
    pub producers: (Producer, Producer),
    pub worst_time: f64,
    pub worst_mode: Option<LatticePoint>,
    pub tolerance: f64,
    pub pass: bool,
}

fn produce(config: &ProblemConfig, which: Producer, rate: f64) -> Result<Trajectory> {
    match which {
        Producer::Rk4 => {
            let mut cfg = config.clone();
            cfg.scheme = Scheme::Rk4Interaction;
            integrate(&cfg.initial_state()?, &cfg)
        }
        Producer::Picard | Producer::PicardDoubleBox => {
            let mut cfg = config.clone();
            if which == Producer::PicardDoubleBox {
                cfg.box_radius = 2 * cfg.box_radius;
            }
            let lim = picard_limit(&cfg.initial_state()?, &cfg, rate)?;
            if !lim.converged {
                log::warn!(
                    "{which}: Picard iteration stopped at increment {:e} above tolerance {:e}",
                    lim.last_increment,
                    cfg.picard.tolerance
                );
            }
            Ok(lim.run.last().to_trajectory(&lim.run.mesh, lim.run.truncation))
        }
    }
}

/// Weighted difference `sup_n e^{κ|n|₁/4} |c − d|` of two producers over
/// `[0, min(t₄, t_end)]`, on a mesh of `steps` intervals of that window.
pub fn uniqueness_probe(config: &ProblemConfig, a: Producer, b: Producer) -> Result<UniquenessReport> {
    let profile = config.decay_profile()?;
    let eps = config.epsilon.abs();
    let t4 = if eps == 0.0 {
        f64::INFINITY
    } else {
        compute_constants(profile, config.nu, config.omega.sup_norm() * eps)?.t4
    };
    let horizon = t4.min(config.t_end);
    let rate = profile.kappa / 4.0;
    let mut cfg = config.clone();
    cfg.t_end = horizon;
    let x = produce(&cfg, a, rate)?;
    let y = if a == b { x.clone() } else { produce(&cfg, b, rate)? };
    let (d, t, n) = trajectory_weighted_diff(&x, &y, rate, horizon)?;
    Ok(UniquenessReport {
        max_weighted_diff: d,
        rate,
        t4,
        horizon,
        producers: (a, b),
        worst_time: t,
        worst_mode: n,
        tolerance: UNIQUENESS_TOLERANCE,
        pass: d <= UNIQUENESS_TOLERANCE,
    })
}
