use qpdnls::bounds::{check_decay, compute_constants, verification_suite, DecayProfile, ExistenceTimes};
use qpdnls::combinatorics::{
    enumerate_branches, factorial_sum_bound_check, m_terms, p_recursion, r_summary, tree_factorial_instances,
    DEFAULT_BUDGET,
};
use qpdnls::experiments::{
    asymptotic_sweep, cauchy_ratio_experiment, uniqueness_probe, write_asymptotic_csv, write_cauchy_csv,
    write_uniqueness_csv, Producer,
};
use qpdnls::report::{CheckRow, Report};
use qpdnls::solver::{integrate, monitors, picard_iterate, picard_limit, Monitors, ProblemConfig, Scheme, Trajectory};
use qpdnls::{Error, Result};
use serde::Serialize;
use serde_json::json;

use crate::output::{print_check, print_report, Artifacts};
use crate::Common;

/// Work cap for streaming the index families of one branch.
const INDEX_WORK: u64 = 200_000_000;

/// Mass drift allowed along integrator runs.
const MASS_DRIFT: f64 = 1e-6;

fn load(common: &Common) -> Result<ProblemConfig> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::Usage("this subcommand needs --config PATH".into()))?;
    let mut cfg = ProblemConfig::from_path(path)?;
    if let Some(seed) = common.seed {
        cfg.set_seed(seed);
    }
    Ok(cfg)
}

fn artifacts(common: &Common) -> Result<Artifacts> {
    Artifacts::new(&common.out, common.format)
}

/// Constants for the configured data, with `|ω|` scaled by `|ε|`; `None`
/// in the linear case.
fn constants(cfg: &ProblemConfig) -> Result<Option<ExistenceTimes>> {
    let w = cfg.omega.sup_norm() * cfg.epsilon.abs();
    if w == 0.0 {
        return Ok(None);
    }
    compute_constants(cfg.decay_profile()?, cfg.nu, w).map(Some)
}

fn monitor_series(traj: &Trajectory, cfg: &ProblemConfig) -> (Vec<f64>, Vec<Monitors>) {
    let lambda = cfg.coupling();
    let times = traj.times().collect();
    let mons = traj.states.iter().map(|s| monitors(s, &cfg.omega, lambda, cfg.p)).collect();
    (times, mons)
}

pub fn solve(common: &Common) -> Result<bool> {
    let cfg = load(common)?;
    let out = artifacts(common)?;
    let initial = cfg.initial_state()?;
    let kappa = cfg.kappa();
    let mut pass = true;
    let (traj, picard) = match cfg.scheme {
        Scheme::Rk4Interaction => (integrate(&initial, &cfg)?, None),
        Scheme::Picard => {
            let lim = picard_limit(&initial, &cfg, kappa / 4.0)?;
            print_check(lim.converged, "picard_convergence", &format!("tolerance={:e}", cfg.picard.tolerance));
            pass &= lim.converged;
            let traj = lim.run.last().to_trajectory(&lim.run.mesh, lim.run.truncation);
            let k = lim.run.increments.len();
            (traj, Some(json!({"iterates": k, "converged": lim.converged, "last_increment": lim.last_increment})))
        }
    };
    let (times, mons) = monitor_series(&traj, &cfg);
    let drift = Monitors::relative_drift(&mons);
    let ex = constants(&cfg)?;
    let cert = match &ex {
        Some(ex) => {
            let cert = check_decay(&traj, kappa / 2.0, ex.c)?;
            // Persistence of the decay is only guaranteed up to t₂.
            if cfg.t_end <= ex.t2 {
                print_check(cert.pass, "decay_certificate", &format!("rate={},threshold={:e}", kappa / 2.0, ex.c));
                pass &= cert.pass;
            }
            Some(cert)
        }
        None => None,
    };
    out.trajectory("trajectory", &traj, cfg.nu)?;
    out.monitors("monitors", &times, &mons)?;
    out.json(
        "solve",
        &json!({
            "scheme": cfg.scheme,
            "t_end": cfg.t_end,
            "steps": cfg.steps,
            "picard": picard,
            "drift": drift,
            "tail_mass": traj.last().tail_mass(1),
            "constants": ex,
            "decay_certificate": cert,
            "pass": pass,
        }),
    )?;
    Ok(pass)
}

pub fn picard(common: &Common, iterates: Option<usize>) -> Result<bool> {
    let cfg = load(common)?;
    let out = artifacts(common)?;
    let k_max = iterates.unwrap_or(cfg.picard.iterates);
    let initial = cfg.initial_state()?;
    let run = picard_iterate(&initial, &cfg, k_max)?;
    for k in 0..=k_max {
        out.trajectory(&format!("iterate_{k}"), &run.trajectory(k), cfg.nu)?;
    }
    #[derive(Serialize)]
    struct Row {
        k: usize,
        support: usize,
        weighted_increment: f64,
    }
    let rate = cfg.kappa() / 4.0;
    let rows: Vec<Row> = run
        .increments
        .iter()
        .enumerate()
        .map(|(i, inc)| Row {
            k: i + 1,
            support: inc.support.len(),
            weighted_increment: inc.weighted_sup(rate),
        })
        .collect();
    out.table("increments", &rows, |w| {
        writeln!(w, "k,support,weighted_increment")?;
        for r in &rows {
            writeln!(w, "{},{},{}", r.k, r.support, qpdnls::solver::io::fmt_float(r.weighted_increment))?;
        }
        Ok(())
    })?;
    out.json("picard", &json!({"iterates": k_max, "rate": rate, "mesh_points": run.mesh.len()}))?;
    Ok(true)
}

pub fn verify_combinatorics(common: &Common, max_depth: usize) -> Result<bool> {
    if max_depth == 0 {
        return Err(Error::Usage("--max-depth must be at least 1".into()));
    }
    let out = artifacts(common)?;
    let mut report = Report::default();
    for k in 1..=max_depth {
        for g in enumerate_branches(k, DEFAULT_BUDGET)? {
            let s = r_summary(&g, INDEX_WORK)?;
            let inst = format!("k={k},gamma={g}");
            // σ = ℓ + 1/2 ⇔ 2σ = 2ℓ + 1.
            let sigma = g.sigma();
            let ok = *sigma.denom() == 2 && *sigma.numer() == 2 * g.ell() + 1;
            report.push(CheckRow::new("sigma_identity", inst.clone(), format!("{}/2", 2 * g.ell() + 1), sigma, ok));
            let len_ok = s.min_len == g.twice_sigma() && s.max_len == g.twice_sigma();
            report.push(CheckRow::new(
                "index_length",
                inst.clone(),
                g.twice_sigma(),
                format!("{}..{}", s.min_len, s.max_len),
                len_ok,
            ));
            let weight_ok = s.min_weight == g.ell() && s.max_weight == g.ell();
            report.push(CheckRow::new(
                "index_weight",
                inst.clone(),
                g.ell(),
                format!("{}..{}", s.min_weight, s.max_weight),
                weight_ok,
            ));
            let p = p_recursion(&g);
            report.push(CheckRow::new("p_recursion", inst, p, s.factorial_sum, p == s.factorial_sum));
        }
    }
    let t_max = 4.0 / 81.0;
    for k in 1..=max_depth.min(2) {
        let terms = m_terms(k, DEFAULT_BUDGET)?;
        for i in 0..50 {
            let t = t_max * i as f64 / 49.0;
            let m = terms.evaluate(t);
            report.push(CheckRow::new(
                "m_bound",
                format!("k={k},T={t:e}"),
                "<=1.5",
                format!("{:e}", m.full_sum),
                m.full_sum <= 1.5 + 1e-12,
            ));
        }
    }
    for (n, l) in tree_factorial_instances() {
        if l as usize <= max_depth {
            let c = factorial_sum_bound_check(n, l)?;
            report.push(CheckRow::new("factorial_sum", format!("N={n},L={l}"), format!("<{}", c.bound), c.sum, c.pass));
        }
    }
    print_report(&report);
    out.report("combinatorics", &report)?;
    Ok(report.all_pass())
}

pub fn verify_bounds(common: &Common) -> Result<bool> {
    let out = artifacts(common)?;
    let report = verification_suite()?;
    print_report(&report);
    out.report("bounds_checks", &report)?;
    Ok(report.all_pass())
}

pub fn bounds(common: &Common, b: f64, kappa: f64, nu: usize, omega_norm: f64) -> Result<bool> {
    let ex = compute_constants(DecayProfile::new(b, kappa)?, nu, omega_norm)?;
    let text = qpdnls::experiments::to_json(&ex)?;
    print!("{text}");
    artifacts(common)?.json("constants", &ex)?;
    Ok(true)
}

pub fn asymptotics(common: &Common, eta: f64, varrho: Option<f64>, eps: &[f64]) -> Result<bool> {
    let cfg = load(common)?;
    let out = artifacts(common)?;
    let varrho = varrho.unwrap_or(cfg.kappa() / 32.0);
    let sweep = asymptotic_sweep(&cfg, eta, varrho, eps)?;
    let mut pass = sweep.pass;
    print_check(sweep.monotone, "deviation_monotone", &format!("eta={eta}"));
    print_check(
        sweep.slope >= sweep.slope_window.0,
        "deviation_slope",
        &format!("eta={eta},slope={:e}", sweep.slope),
    );
    for r in &sweep.rows {
        let inst = format!("epsilon={:e}", r.epsilon);
        print_check(r.sobolev_ok, "analytic_norm_bound", &inst);
        print_check(r.reliable, "mesh_resolution", &inst);
        let mass = r.drift.m <= MASS_DRIFT;
        print_check(mass, "mass_conservation", &inst);
        pass &= mass;
    }
    out.table("asymptotics", &sweep, |w| write_asymptotic_csv(&sweep, w))?;
    out.json(
        "asymptotics_summary",
        &json!({
            "slope": sweep.slope,
            "sobolev_slope": sweep.sobolev_slope,
            "slope_window": sweep.slope_window,
            "slope_in_window": sweep.slope_in_window,
            "monotone": sweep.monotone,
            "sobolev_constant": sweep.sobolev_constant,
            "eta": eta,
            "varrho": varrho,
            "mass_drift_threshold": MASS_DRIFT,
            "pass": pass,
        }),
    )?;
    Ok(pass)
}

pub fn uniqueness(common: &Common, first: &str, second: &str) -> Result<bool> {
    let cfg = load(common)?;
    let out = artifacts(common)?;
    let a: Producer = first.parse()?;
    let b: Producer = second.parse()?;
    let rep = uniqueness_probe(&cfg, a, b)?;
    print_check(rep.pass, "uniqueness", &format!("{a}_vs_{b},horizon={:e}", rep.horizon));
    out.table("uniqueness", &rep, |w| write_uniqueness_csv(&rep, w))?;
    out.json("uniqueness_summary", &rep)?;
    Ok(rep.pass)
}

pub fn cauchy(common: &Common, iterates: usize) -> Result<bool> {
    let cfg = load(common)?;
    let out = artifacts(common)?;
    let table = cauchy_ratio_experiment(&cfg, iterates)?;
    if table.assertion_enabled {
        for r in &table.rows {
            print_check(r.pass, "cauchy_ratio", &format!("k={},t={:e}", r.k, table.t));
        }
    }
    print_check(!table.non_convergent, "cauchy_convergence", &format!("t={:e}", table.t));
    out.table("cauchy", &table, |w| write_cauchy_csv(&table, w))?;
    out.json(
        "cauchy_summary",
        &json!({
            "t": table.t,
            "rate": table.rate,
            "t3": table.t3,
            "C_prime": table.c_prime,
            "assertion_enabled": table.assertion_enabled,
            "non_convergent": table.non_convergent,
            "pass": table.pass,
        }),
    )?;
    Ok(table.pass && !table.non_convergent)
}
