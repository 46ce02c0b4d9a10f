use num_complex::Complex64;
use serde::Serialize;

use super::convolution::{Convolver, ModeSet};
use super::state::FourierState;
use crate::lattice::FrequencyVector;

/// Spatial means of the mass, momentum and energy densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monitors {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "E")]
    pub e: f64,
}

/// Mean mass, momentum and energy of `u = Σ c(n) e^{i⟨n⟩x}` for
/// `iu_t + u_xx − iλ∂_x(|u|²u) = 0`:
///
/// * `M = Σ |c(n)|²`
/// * `H = Σ ⟨n⟩|c(n)|² + (λ/2) Σ_m N(m) c̄(m)`
/// * `E = Σ ⟨n⟩²|c(n)|² + (3λ/2) Im Σ_m N(m) (−i⟨m⟩) c̄(m) + (λ²/2) Σ_m |N(m)|²`
///
/// where `N` is the cubic alternating convolution, taken over its full
/// support. `λ = 1` gives the unscaled equation; the `λ` powers come from
/// rescaling `u ↦ λ^{1/2} u`.
///
/// `H` is the displayed momentum. Along the flow of
/// `c' = −i⟨n⟩²c + λi⟨n⟩N(c)` it is not constant; [`conserved_momentum`]
/// is. `M` and `E` are.
pub fn conserved_quantities(state: &FourierState, omega: &FrequencyVector, lambda: f64) -> Monitors {
    let support = ModeSet::new(state.support().cloned().collect());
    let c: Vec<Complex64> = support.points().iter().map(|n| state.get(n)).collect();
    let freq: Vec<f64> = support.points().iter().map(|n| n.pairing_unchecked(omega)).collect();
    let m = c.iter().map(|v| v.norm_sqr()).sum();
    let h_lin: f64 = c.iter().zip(&freq).map(|(v, w)| w * v.norm_sqr()).sum();
    let e_lin: f64 = c.iter().zip(&freq).map(|(v, w)| w * w * v.norm_sqr()).sum();
    if c.is_empty() {
        return Monitors { m, h: 0.0, e: 0.0 };
    }
    let cv = Convolver::new(support.clone(), 3);
    let nl = cv.apply(&c);
    let mut quartic = Complex64::default();
    let mut mixed = Complex64::default();
    let mut sextic = 0.0;
    for (n, v) in cv.output().points().iter().zip(&nl) {
        sextic += v.norm_sqr();
        if let Some(j) = support.index_of(n) {
            quartic += v * c[j].conj();
            mixed += v * Complex64::new(0.0, -freq[j]) * c[j].conj();
        }
    }
    Monitors {
        m,
        h: h_lin + 0.5 * lambda * quartic.re,
        e: e_lin + 1.5 * lambda * mixed.im + 0.5 * lambda * lambda * sextic,
    }
}

/// `Σ ⟨n⟩|c(n)|² − (λ/2) Σ_m N(m) c̄(m)`, the momentum that the Fourier
/// system conserves.
pub fn conserved_momentum(state: &FourierState, omega: &FrequencyVector, lambda: f64) -> f64 {
    let lin = conserved_quantities(state, omega, 0.0).h;
    let full = conserved_quantities(state, omega, lambda).h;
    lin - (full - lin)
}

/// As [`conserved_quantities`] for the cubic case; for `p > 1` only the mass
/// is defined and `H`, `E` are NaN.
pub fn monitors(state: &FourierState, omega: &FrequencyVector, lambda: f64, p: u32) -> Monitors {
    if p == 1 {
        conserved_quantities(state, omega, lambda)
    } else {
        Monitors {
            m: state.iter().map(|(_, c)| c.norm_sqr()).sum(),
            h: f64::NAN,
            e: f64::NAN,
        }
    }
}

impl Monitors {
    /// Largest relative change of each quantity against the first entry.
    pub fn relative_drift(series: &[Monitors]) -> Monitors {
        let first = match series.first() {
            Some(f) => *f,
            None => return Monitors { m: 0.0, h: 0.0, e: 0.0 },
        };
        let rel = |a: f64, b: f64| if b == 0.0 { (a - b).abs() } else { ((a - b) / b).abs() };
        series.iter().fold(Monitors { m: 0.0, h: 0.0, e: 0.0 }, |acc, s| Monitors {
            m: acc.m.max(rel(s.m, first.m)),
            h: acc.h.max(rel(s.h, first.h)),
            e: acc.e.max(rel(s.e, first.e)),
        })
    }
}
