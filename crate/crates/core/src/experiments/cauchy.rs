use serde::Serialize;

use crate::bounds::compute_constants;
use crate::error::{Error, Result};
use crate::solver::{picard_iterate, ProblemConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyRow {
    pub k: usize,
    /// `max_{t ≤ t_end} sup_n e^{κ|n|₁/4} |c_k − c_{k−1}|(t, n)`.
    pub weighted_diff: f64,
    /// `weighted_diff_k / weighted_diff_{k−1}`; empty for `k = 1` or a zero
    /// denominator.
    pub measured_ratio: Option<f64>,
    pub bound_ratio: f64,
    /// `C′ q^k` with `q = bound_ratio`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyTable {
    pub t: f64,
    pub rate: f64,
    pub t3: f64,
    pub c_prime: f64,
    /// The bound is asserted only for `t < t₃`.
    pub assertion_enabled: bool,
    /// Two or more consecutive measured ratios above 1.
    pub non_convergent: bool,
    pub pass: bool,
    pub rows: Vec<CauchyRow>,
}

/// Weighted sup differences of consecutive Picard iterates up to `K`,
/// at rate `κ/4`, against `C′ (12eC²(24/κ)^{2ν+1}|ω||ε| t)^k`.
pub fn cauchy_ratio_experiment(config: &ProblemConfig, k_max: usize) -> Result<CauchyTable> {
    if k_max == 0 {
        return Err(Error::Usage("need at least one Picard step".into()));
    }
    let profile = config.decay_profile()?;
    let base = compute_constants(profile, config.nu, config.omega.sup_norm())?;
    let eps = config.epsilon.abs();
    let t = config.t_end;
    let q = base.cauchy_factor(t) * eps;
    let t3 = if eps == 0.0 { f64::INFINITY } else { base.t3 / eps };
    let rate = profile.kappa / 4.0;
    let initial = config.initial_state()?;
    let run = picard_iterate(&initial, config, k_max)?;
    let assertion_enabled = t < t3;
    let mut rows = Vec::with_capacity(k_max);
    let mut prev: Option<f64> = None;
    let mut above = 0;
    let mut non_convergent = false;
    for (i, inc) in run.increments.iter().enumerate() {
        let k = i + 1;
        let d = inc.weighted_sup(rate);
        let measured_ratio = prev.filter(|&p| p > 0.0).map(|p| d / p);
        let bound = base.c_prime * q.powi(k as i32);
        let ratio_ok = measured_ratio.map_or(true, |r| r <= q);
        let pass = !assertion_enabled || (d <= bound && ratio_ok);
        if measured_ratio.is_some_and(|r| r > 1.0) {
            above += 1;
            non_convergent |= above >= 2;
        } else {
            above = 0;
        }
        rows.push(CauchyRow {
            k,
            weighted_diff: d,
            measured_ratio,
            bound_ratio: q,
            bound,
            pass,
        });
        prev = Some(d);
    }
    Ok(CauchyTable {
        t,
        rate,
        t3,
        c_prime: base.c_prime,
        assertion_enabled,
        non_convergent,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}
