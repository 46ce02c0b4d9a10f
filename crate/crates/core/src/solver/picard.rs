use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{ProblemConfig, Truncation};
use super::convolution::{projection, Convolver, ModeSet};
use super::quadrature::cumulative;
use super::state::{FourierState, Trajectory};
use crate::error::{Error, Result};
use crate::lattice::{FrequencyVector, TruncationBox};

/// Values of one function of `(t, n)` on the shared mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshField {
    pub support: ModeSet,
    /// `values[i][j]` at mesh time `i` and support point `j`.
    pub values: Vec<Vec<Complex64>>,
}

impl MeshField {
    /// Values re-indexed onto a superset of the support.
    fn padded(&self, to: &ModeSet) -> Vec<Vec<Complex64>> {
        let map = projection(&self.support, to);
        self.values
            .iter()
            .map(|row| {
                let mut out = vec![Complex64::default(); to.len()];
                for (v, m) in row.iter().zip(&map) {
                    out[m.expect("support grows monotonically")] = *v;
                }
                out
            })
            .collect()
    }

    pub fn to_trajectory(&self, mesh: &[f64], truncation: TruncationBox) -> Trajectory {
        let states = mesh
            .iter()
            .zip(&self.values)
            .map(|(&t, row)| {
                let modes = self.support.points().iter().cloned().zip(row.iter().copied());
                FourierState::from_modes(t, truncation, modes).expect("support lies in the box")
            })
            .collect();
        Trajectory { states }
    }

    /// `max_i sup_n e^{rate·|n|₁} |values|`.
    pub fn weighted_sup(&self, rate: f64) -> f64 {
        let w: Vec<f64> = self
            .support
            .points()
            .iter()
            .map(|n| (rate * n.l1_norm() as f64).exp())
            .collect();
        self.values
            .iter()
            .flat_map(|row| row.iter().zip(&w).map(|(v, w)| v.norm() * w))
            .fold(0.0, f64::max)
    }

    /// Per mesh time, `sup_n e^{rate·|n|₁} |values|`.
    pub fn weighted_sup_by_time(&self, rate: f64) -> Vec<f64> {
        let w: Vec<f64> = self
            .support
            .points()
            .iter()
            .map(|n| (rate * n.l1_norm() as f64).exp())
            .collect();
        self.values
            .iter()
            .map(|row| row.iter().zip(&w).map(|(v, w)| v.norm() * w).fold(0.0, f64::max))
            .collect()
    }
}

/// Iterates `c_0, …, c_K` and increments `δ_k = c_k − c_{k−1}` on one mesh.
#[derive(Debug, Clone)]
pub struct PicardRun {
    pub mesh: Vec<f64>,
    pub truncation: TruncationBox,
    pub iterates: Vec<MeshField>,
    /// `increments[k − 1] = δ_k`, computed from the difference of the
    /// nonlinearities slot by slot, so it stays accurate when tiny.
    pub increments: Vec<MeshField>,
}

impl PicardRun {
    pub fn trajectory(&self, k: usize) -> Trajectory {
        self.iterates[k].to_trajectory(&self.mesh, self.truncation)
    }

    pub fn trajectories(&self) -> Vec<Trajectory> {
        (0..self.iterates.len()).map(|k| self.trajectory(k)).collect()
    }

    pub fn last(&self) -> &MeshField {
        self.iterates.last().expect("iterate 0 always exists")
    }
}

struct Context<'a> {
    config: &'a ProblemConfig,
    mesh: Vec<f64>,
    initial: &'a FourierState,
}

impl Context<'_> {
    fn freqs(&self, s: &ModeSet) -> Vec<f64> {
        s.points().iter().map(|n| n.pairing_unchecked(&self.config.omega)).collect()
    }

    fn linear(&self, support: &ModeSet) -> MeshField {
        let f = self.freqs(support);
        let c0: Vec<Complex64> = support.points().iter().map(|n| self.initial.get(n)).collect();
        let values = self
            .mesh
            .iter()
            .map(|&t| {
                f.iter()
                    .zip(&c0)
                    .map(|(w, c)| Complex64::from_polar(1.0, -w * w * t) * c)
                    .collect()
            })
            .collect();
        MeshField {
            support: support.clone(),
            values,
        }
    }

    /// Output support for a convolution, after the truncation policy.
    fn output_support(&self, cv: &Convolver, iterate: usize) -> Result<ModeSet> {
        let bx = self.config.truncation_box();
        match self.config.truncation() {
            Truncation::Strict => {
                if let Some(n) = cv.output().points().iter().find(|n| !bx.contains(n)) {
                    return Err(Error::SupportOverflow {
                        iterate,
                        mode: n.to_string(),
                        radius: bx.radius,
                    });
                }
                Ok(cv.output().clone())
            }
            Truncation::Clip => Ok(ModeSet::new(
                cv.output().points().iter().filter(|n| bx.contains(n)).cloned().collect(),
            )),
        }
    }

    /// `e^{−i⟨n⟩²t} (lin(n) + sε i⟨n⟩ ∫₀ᵗ e^{i⟨n⟩²s} N(s, n) ds)` with `lin`
    /// the initial amplitude or zero.
    fn duhamel(&self, cv: &Convolver, out: &ModeSet, nonlin: Vec<Vec<Complex64>>, with_linear: bool) -> MeshField {
        let map = projection(cv.output(), out);
        let f = self.freqs(out);
        let h = self.config.dt();
        let lambda = self.config.coupling();
        let nt = self.mesh.len();
        // Integrands per output mode, over time.
        let mut g = vec![vec![Complex64::default(); nt]; out.len()];
        for (i, row) in nonlin.iter().enumerate() {
            let t = self.mesh[i];
            for (v, m) in row.iter().zip(&map) {
                if let Some(j) = m {
                    g[*j][i] = Complex64::from_polar(1.0, f[*j] * f[*j] * t) * v;
                }
            }
        }
        let integrals: Vec<Vec<Complex64>> = g.iter().map(|gj| cumulative(gj, h, self.config.quadrature)).collect();
        let mut values = vec![vec![Complex64::default(); out.len()]; nt];
        for (j, n) in out.points().iter().enumerate() {
            let lin = if with_linear { self.initial.get(n) } else { Complex64::default() };
            let coef = Complex64::new(0.0, lambda * f[j]);
            for i in 0..nt {
                let t = self.mesh[i];
                values[i][j] = Complex64::from_polar(1.0, -f[j] * f[j] * t) * (lin + coef * integrals[j][i]);
            }
        }
        MeshField {
            support: out.clone(),
            values,
        }
    }
}

fn check_initial(initial: &FourierState, config: &ProblemConfig) -> Result<()> {
    if initial.truncation != config.truncation_box() {
        return Err(Error::Config("initial state box differs from the configured box".into()));
    }
    if initial.time != 0.0 {
        return Err(Error::Usage("Picard iteration starts from time 0".into()));
    }
    if initial.is_empty() {
        return Err(Error::Config("initial state has empty support".into()));
    }
    Ok(())
}

/// `c_0(t,n) = e^{−i⟨n⟩²t} c(n)` and, for `k ≥ 1`,
/// `c_k = c_0 + sε i⟨n⟩ e^{−i⟨n⟩²t} ∫₀ᵗ e^{i⟨n⟩²s} N(c_{k−1})(s, n) ds`
/// with `N` the alternating convolution of `2p + 1` factors.
pub fn picard_iterate(initial: &FourierState, config: &ProblemConfig, k_max: usize) -> Result<PicardRun> {
    let mut run = start(initial, config)?;
    for k in 1..=k_max {
        step(&mut run, initial, config, k)?;
    }
    Ok(run)
}

fn start(initial: &FourierState, config: &ProblemConfig) -> Result<PicardRun> {
    check_initial(initial, config)?;
    let ctx = Context {
        config,
        mesh: config.mesh(),
        initial,
    };
    let s0 = ModeSet::new(initial.support().cloned().collect());
    Ok(PicardRun {
        iterates: vec![ctx.linear(&s0)],
        increments: Vec::new(),
        mesh: ctx.mesh,
        truncation: config.truncation_box(),
    })
}

fn step(run: &mut PicardRun, initial: &FourierState, config: &ProblemConfig, k: usize) -> Result<()> {
    let ctx = Context {
        config,
        mesh: run.mesh.clone(),
        initial,
    };
    let factors = 2 * config.p as usize + 1;
    let prev = &run.iterates[k - 1];
    let cv = Convolver::new(prev.support.clone(), factors);
    let out = ctx.output_support(&cv, k)?;
    let nonlin: Vec<Vec<Complex64>> = prev.values.par_iter().map(|row| cv.apply(row)).collect();
    let next = ctx.duhamel(&cv, &out, nonlin.clone(), true);
    let incr = if k == 1 {
        ctx.duhamel(&cv, &out, nonlin, false)
    } else {
        let older = run.iterates[k - 2].padded(&prev.support);
        let delta = run.increments[k - 2].padded(&prev.support);
        let diff: Vec<Vec<Complex64>> = (0..ctx.mesh.len())
            .into_par_iter()
            .map(|i| cv.apply_difference(&older[i], &delta[i], &prev.values[i]))
            .collect();
        ctx.duhamel(&cv, &out, diff, false)
    };
    run.iterates.push(next);
    run.increments.push(incr);
    Ok(())
}

/// Outcome of iterating to a fixed point.
#[derive(Debug, Clone)]
pub struct PicardLimit {
    pub run: PicardRun,
    pub converged: bool,
    /// `max_t sup_n e^{rate|n|₁} |δ_K|` for the last increment.
    pub last_increment: f64,
}

/// Iterates until the weighted sup of the increment is below the configured
/// tolerance or the configured iterate cap is reached. Only the final two
/// iterates are kept.
pub fn picard_limit(initial: &FourierState, config: &ProblemConfig, rate: f64) -> Result<PicardLimit> {
    let mut run = start(initial, config)?;
    let mut last = f64::INFINITY;
    for k in 1..=config.picard.iterates.max(1) {
        step(&mut run, initial, config, k)?;
        last = run.increments[k - 1].weighted_sup(rate);
        if k >= 2 {
            // Older fields are no longer needed for the telescoped increments.
            run.iterates[k - 2].values.clear();
            run.increments[k - 2].values.clear();
        }
        if last < config.picard.tolerance {
            return Ok(PicardLimit {
                run,
                converged: true,
                last_increment: last,
            });
        }
    }
    Ok(PicardLimit {
        run,
        converged: false,
        last_increment: last,
    })
}

/// `e^{−i⟨n⟩²t} c(n)` for every mode of `initial`.
pub fn linear_solution(initial: &FourierState, omega: &FrequencyVector, t: f64) -> Result<FourierState> {
    let mut out = FourierState::new(initial.time + t, initial.truncation);
    for (n, c) in initial.iter() {
        let w = n.pairing(omega)?;
        out.insert(n.clone(), Complex64::from_polar(1.0, -w * w * t) * c)?;
    }
    Ok(out)
}
