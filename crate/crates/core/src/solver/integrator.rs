use num_complex::Complex64;

use super::config::ProblemConfig;
use super::convolution::{projection, Convolver, ModeSet};
use super::state::{FourierState, Trajectory};
use crate::error::{Error, Result};

/// Classic fourth-order stepping of `a(t, n) = e^{i⟨n⟩²t} c(t, n)` on the
/// whole box, recording every step.
pub fn integrate(initial: &FourierState, config: &ProblemConfig) -> Result<Trajectory> {
    integrate_recording(initial, config, 1)
}

/// As [`integrate`], keeping every `record_every`-th mesh state plus the
/// final one.
///
/// In the interaction variable the linear part is integrated exactly, so
/// `ε = 0` reproduces the linear flow to rounding. Modes leaving the box
/// are dropped after every stage.
pub fn integrate_recording(initial: &FourierState, config: &ProblemConfig, record_every: usize) -> Result<Trajectory> {
    if initial.truncation != config.truncation_box() {
        return Err(Error::Config("initial state box differs from the configured box".into()));
    }
    if record_every == 0 {
        return Err(Error::Usage("record stride must be at least 1".into()));
    }
    let bx = config.truncation_box();
    let support = ModeSet::new(bx.points());
    let rhs = InteractionRhs::new(&support, config);
    let mut a: Vec<Complex64> = support.points().iter().map(|n| initial.get(n)).collect();
    let dt = config.dt();
    let lambda = config.coupling();
    let mass = initial.l1_mass();
    let check = lambda.abs() * initial.max_frequency(&config.omega) * mass.powi(2 * config.p as i32) * dt;
    if check >= 0.5 {
        log::warn!("step-size check |eps| max<n> mass^2p dt = {check:.3e} >= 0.5; the integrator may be inaccurate");
    }
    let time = |i: usize| config.mesh_time(i);
    let snapshot = |t: f64, a: &[Complex64]| {
        let modes = support
            .points()
            .iter()
            .zip(a)
            .zip(&rhs.freq)
            .map(|((n, v), w)| (n.clone(), Complex64::from_polar(1.0, -w * w * t) * v));
        FourierState::from_modes(t, bx, modes).expect("box points")
    };
    let mut states = vec![snapshot(0.0, &a)];
    for i in 0..config.steps {
        let t = time(i);
        let th = t + dt / 2.0;
        let t1 = time(i + 1);
        let k1 = rhs.eval(t, &a);
        let k2 = rhs.eval(th, &axpy(&a, dt / 2.0, &k1));
        let k3 = rhs.eval(th, &axpy(&a, dt / 2.0, &k2));
        let k4 = rhs.eval(t1, &axpy(&a, dt, &k3));
        for j in 0..a.len() {
            a[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (dt / 6.0);
        }
        if (i + 1) % record_every == 0 || i + 1 == config.steps {
            states.push(snapshot(t1, &a));
        }
    }
    Ok(Trajectory { states })
}

fn axpy(a: &[Complex64], h: f64, k: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(k).map(|(x, y)| x + y * h).collect()
}

struct InteractionRhs {
    conv: Convolver,
    back: Vec<Option<usize>>,
    freq: Vec<f64>,
    lambda: f64,
}

impl InteractionRhs {
    fn new(support: &ModeSet, config: &ProblemConfig) -> Self {
        let conv = Convolver::new(support.clone(), 2 * config.p as usize + 1);
        let back = projection(conv.output(), support);
        let freq: Vec<f64> = support.points().iter().map(|n| n.pairing_unchecked(&config.omega)).collect();
        InteractionRhs {
            conv,
            back,
            freq,
            lambda: config.coupling(),
        }
    }

    // a' = e^{i⟨n⟩²t} · sε i⟨n⟩ · N(e^{−i⟨·⟩²t} a)
    fn eval(&self, t: f64, a: &[Complex64]) -> Vec<Complex64> {
        let c: Vec<Complex64> = a
            .iter()
            .zip(&self.freq)
            .map(|(v, w)| Complex64::from_polar(1.0, -w * w * t) * v)
            .collect();
        let full = self.conv.apply(&c);
        let mut out = vec![Complex64::default(); a.len()];
        for (v, m) in full.iter().zip(&self.back) {
            if let Some(j) = m {
                let w = self.freq[*j];
                out[*j] = Complex64::from_polar(1.0, w * w * t) * Complex64::new(0.0, self.lambda * w) * v;
            }
        }
        out
    }
}
