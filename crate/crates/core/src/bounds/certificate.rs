use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::solver::Trajectory;

/// `|c(t, n)| ≤ fitted_constant · e^{−rate|n|₁}` over the sampled window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayCertificate {
    pub rate: f64,
    pub fitted_constant: f64,
    pub threshold_constant: f64,
    pub pass: bool,
    /// Mode attaining the fitted constant, with the time it was seen at.
    pub worst_mode: LatticePoint,
    pub worst_time: f64,
    pub time_window: (f64, f64),
}

/// Fits `max_{t,n} |c(t,n)| e^{rate|n|₁}` over the recorded states.
pub fn check_decay(traj: &Trajectory, rate: f64, threshold: f64) -> Result<DecayCertificate> {
    let first = traj
        .states
        .first()
        .ok_or_else(|| Error::Usage("decay check needs a nonempty trajectory".into()))?;
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::Usage(format!("decay rate must be positive, got {rate}")));
    }
    let mut fitted = 0.0;
    let mut worst = (LatticePoint::zero(first.truncation.nu), first.time);
    let mut seen = false;
    for s in &traj.states {
        for (n, c) in s.iter() {
            let v = c.norm() * (rate * n.l1_norm() as f64).exp();
            if !seen || v > fitted {
                fitted = v;
                worst = (n.clone(), s.time);
                seen = true;
            }
        }
    }
    let last = traj.states.last().expect("nonempty");
    Ok(DecayCertificate {
        rate,
        fitted_constant: fitted,
        threshold_constant: threshold,
        pass: fitted <= threshold,
        worst_mode: worst.0,
        worst_time: worst.1,
        time_window: (first.time, last.time),
    })
}
