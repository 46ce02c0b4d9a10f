//! Fourier-side solvers: Picard iteration, a reference integrator, tree
//! terms and monitors.

mod config;
mod conserved;
mod convolution;
mod integrator;
pub mod io;
mod picard;
mod quadrature;
mod state;
mod tree_term;

use num_complex::Complex64;

pub use config::{
    fit_profile, random_state, InitialData, ModeSpec, PicardSettings, ProblemConfig, Quadrature, RandomSpec, Scheme,
    Sign, Truncation,
};
pub use conserved::{conserved_momentum, conserved_quantities, monitors, Monitors};
pub use convolution::{projection, Convolver, ModeSet};
pub use integrator::{integrate, integrate_recording};
pub use picard::{linear_solution, picard_iterate, picard_limit, MeshField, PicardLimit, PicardRun};
pub use quadrature::cumulative;
pub use state::{trajectory_weighted_diff, weighted_sup_diff, FourierState, Trajectory};
pub use tree_term::{tree_term, tree_term_with, TreeTermOptions, TreeTermValue};

use crate::error::Result;

/// The alternating convolution `Σ_{m₁−m₂+…+m_{2p+1} = n} c(m₁) c̄(m₂) ⋯`
/// over its full support, which may leave the box.
pub fn alternating_convolution_full(state: &FourierState, p: u32) -> Vec<(crate::lattice::LatticePoint, Complex64)> {
    let support = ModeSet::new(state.support().cloned().collect());
    if support.is_empty() {
        return Vec::new();
    }
    let c: Vec<Complex64> = support.points().iter().map(|n| state.get(n)).collect();
    let cv = Convolver::new(support, 2 * p as usize + 1);
    let v = cv.apply(&c);
    cv.output().points().iter().cloned().zip(v).collect()
}

/// [`alternating_convolution_full`] restricted to the state's box.
pub fn alternating_convolution(state: &FourierState, p: u32) -> FourierState {
    let modes = alternating_convolution_full(state, p)
        .into_iter()
        .filter(|(n, _)| state.truncation.contains(n));
    FourierState::from_modes(state.time, state.truncation, modes).expect("filtered to the box")
}

/// `c'(n) = −i⟨n⟩² c(n) + sε i⟨n⟩ N(c)(n)` on the box.
pub fn rhs(state: &FourierState, config: &ProblemConfig) -> Result<FourierState> {
    let lambda = config.coupling();
    let nl = alternating_convolution(state, config.p);
    let mut out = FourierState::new(state.time, state.truncation);
    let mut points: Vec<_> = state.support().chain(nl.support()).cloned().collect();
    points.sort();
    points.dedup();
    for n in points {
        let w = n.pairing(&config.omega)?;
        let v = Complex64::new(0.0, -w * w) * state.get(&n) + Complex64::new(0.0, lambda * w) * nl.get(&n);
        out.insert(n, v)?;
    }
    Ok(out)
}
