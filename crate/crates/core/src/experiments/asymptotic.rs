use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{check_decay, compute_constants};
use crate::error::{Error, Result};
use crate::solver::{integrate_recording, linear_solution, monitors, FourierState, Monitors, ProblemConfig, Scheme};

/// Snapshots kept per row for monitors and decay certification.
const SNAPSHOTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub epsilon: f64,
    /// `|ε|^{−1+η}`.
    pub t: f64,
    pub steps: usize,
    /// `Σ_n |c(t,n) − c_lin(t,n)|`, a majorant of the sup norm of `u − u_lin`.
    pub sup_proxy: f64,
    /// `(Σ_n e^{2ϱ|n|₁} |c − c_lin|²)^{1/2}`.
    pub sobolev: f64,
    pub sobolev_bound: f64,
    pub sobolev_ok: bool,
    pub eta: f64,
    pub varrho: f64,
    /// `dt · 2 max⟨n⟩² ≤ π` on the box.
    pub reliable: bool,
    /// `check_decay(κ/2, C)` along the recorded trajectory.
    pub decay_certified: bool,
    pub unsupported_regime: bool,
    pub drift: Monitors,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticSweep {
    pub eta: f64,
    pub varrho: f64,
    pub kappa: f64,
    /// Least-squares slope of `log sup_proxy` against `log |ε|`.
    pub slope: f64,
    pub sobolev_slope: f64,
    pub slope_window: (f64, f64),
    pub slope_in_window: bool,
    /// Both norms nonincreasing as `|ε|` decreases, with 5% slack.
    pub monotone: bool,
    pub sobolev_constant: f64,
    pub pass: bool,
    pub rows: Vec<AsymptoticRow>,
}

/// `3 (κ/4 − 4ϱ)^{−1} (12/κ)^6`.
pub fn sobolev_constant(kappa: f64, varrho: f64) -> f64 {
    3.0 / (kappa / 4.0 - 4.0 * varrho) * (12.0 / kappa).powi(6)
}

pub fn validate_varrho(kappa: f64, varrho: f64) -> Result<()> {
    let gap = kappa / 4.0 - 4.0 * varrho;
    if !(varrho >= 0.0 && gap > 0.0 && gap <= 1.0) {
        return Err(Error::Config(format!(
            "need 0 < kappa/4 - 4 varrho <= 1, got kappa = {kappa}, varrho = {varrho}"
        )));
    }
    Ok(())
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Runs the interaction-picture integrator to `t = |ε|^{−1+η}` for each `ε`,
/// with the step of `config` (`t_end / steps`) kept fixed so the mesh
/// scales with `t`, and compares with the linear flow.
pub fn asymptotic_sweep(config: &ProblemConfig, eta: f64, varrho: f64, eps_list: &[f64]) -> Result<AsymptoticSweep> {
    let kappa = config.kappa();
    validate_varrho(kappa, varrho)?;
    if !(eta.is_finite() && eta < 1.0) {
        return Err(Error::Config(format!("eta must be below 1, got {eta}")));
    }
    if eps_list.len() < 2 {
        return Err(Error::Usage("a sweep needs at least two values of epsilon".into()));
    }
    if let Some(e) = eps_list.iter().find(|e| !(e.is_finite() && **e != 0.0)) {
        return Err(Error::Config(format!("epsilon values must be nonzero, got {e}")));
    }
    let initial = config.initial_state()?;
    let profile = config.decay_profile()?;
    let konst = sobolev_constant(kappa, varrho);
    let dt = config.dt();
    let max_freq = config
        .truncation_box()
        .points()
        .iter()
        .map(|n| n.pairing_unchecked(&config.omega).abs())
        .fold(0.0, f64::max);
    let rows = eps_list
        .par_iter()
        .map(|&eps| -> Result<AsymptoticRow> {
            let t = eps.abs().powf(-1.0 + eta);
            let steps = (t / dt).ceil().max(1.0) as usize;
            let mut cfg = config.clone();
            cfg.epsilon = eps;
            cfg.t_end = t;
            cfg.steps = steps;
            cfg.scheme = Scheme::Rk4Interaction;
            let traj = integrate_recording(&initial, &cfg, (steps / SNAPSHOTS).max(1))?;
            let last = traj.last();
            let lin = linear_solution(&initial, &cfg.omega, t)?;
            let (sup_proxy, sobolev) = deviation_norms(last, &lin, varrho);
            let sobolev_bound = (konst * (eps.abs() * t).powi(2)).sqrt();
            let omega_norm = cfg.omega.sup_norm() * eps.abs();
            let c = compute_constants(profile, cfg.nu, omega_norm)?.c;
            let lambda = cfg.coupling();
            let mons: Vec<Monitors> = traj.states.iter().map(|s| monitors(s, &cfg.omega, lambda, cfg.p)).collect();
            Ok(AsymptoticRow {
                epsilon: eps,
                t,
                steps,
                sup_proxy,
                sobolev,
                sobolev_bound,
                sobolev_ok: sobolev <= sobolev_bound,
                eta,
                varrho,
                reliable: cfg.dt() * 2.0 * max_freq * max_freq <= std::f64::consts::PI,
                decay_certified: check_decay(&traj, kappa / 2.0, c)?.pass,
                unsupported_regime: eta <= 0.0,
                drift: Monitors::relative_drift(&mons),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<&AsymptoticRow> = rows.iter().collect();
    order.sort_by(|a, b| b.epsilon.abs().total_cmp(&a.epsilon.abs()));
    let monotone = order
        .windows(2)
        .all(|w| w[1].sup_proxy <= 1.05 * w[0].sup_proxy && w[1].sobolev <= 1.05 * w[0].sobolev);
    let x: Vec<f64> = rows.iter().map(|r| r.epsilon.abs().ln()).collect();
    let s = slope(&x, &rows.iter().map(|r| r.sup_proxy.ln()).collect::<Vec<_>>());
    let ss = slope(&x, &rows.iter().map(|r| r.sobolev.ln()).collect::<Vec<_>>());
    let window = (0.5 * eta, 2.0 * eta);
    let unsupported = eta <= 0.0;
    let pass = !unsupported
        && monotone
        && s >= window.0
        && rows.iter().all(|r| r.sobolev_ok && r.reliable);
    Ok(AsymptoticSweep {
        eta,
        varrho,
        kappa,
        slope: s,
        sobolev_slope: ss,
        slope_window: window,
        slope_in_window: s >= window.0 && s <= window.1,
        monotone,
        sobolev_constant: konst,
        pass,
        rows,
    })
}

/// `(Σ_n |c − lin|, (Σ_n e^{2ϱ|n|₁} |c − lin|²)^{1/2})`.
pub fn deviation_norms(c: &FourierState, lin: &FourierState, varrho: f64) -> (f64, f64) {
    let mut l1 = 0.0;
    let mut h = 0.0;
    let mut visit = |d: f64, r: u64| {
        l1 += d;
        h += (2.0 * varrho * r as f64).exp() * d * d;
    };
    for (n, v) in c.iter() {
        visit((v - lin.get(n)).norm(), n.l1_norm());
    }
    for (n, v) in lin.iter().filter(|(n, _)| !c.contains(n)) {
        visit(v.norm(), n.l1_norm());
    }
    (l1, h.sqrt())
}
