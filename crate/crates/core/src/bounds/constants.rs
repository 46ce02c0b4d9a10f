use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponential decay data `|c(n)| ≤ B^{1/2} e^{−κ|n|}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    #[serde(rename = "B")]
    pub b: f64,
    pub kappa: f64,
}

impl DecayProfile {
    pub fn new(b: f64, kappa: f64) -> Result<Self> {
        let p = DecayProfile { b, kappa };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Config(format!("B must be positive and finite, got {}", self.b)));
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return Err(Error::Config(format!("kappa must lie in (0, 1], got {}", self.kappa)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantInputs {
    #[serde(rename = "B")]
    pub b: f64,
    pub kappa: f64,
    pub nu: usize,
    pub omega_norm: f64,
}

/// Decay constant, coefficient constants and the four time thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistenceTimes {
    #[serde(rename = "C")]
    pub c: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    #[serde(rename = "C_prime")]
    pub c_prime: f64,
    /// `C″` evaluated at `C_dprime_t`.
    #[serde(rename = "C_dprime")]
    pub c_dprime: f64,
    #[serde(rename = "C_dprime_t")]
    pub c_dprime_t: f64,
    pub input: ConstantInputs,
    pub readings: Readings,
}

/// How ambiguous formulas were read.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Readings {
    #[serde(rename = "C_prime")]
    pub c_prime: &'static str,
    #[serde(rename = "C_dprime")]
    pub c_dprime: &'static str,
    pub t4: &'static str,
}

const READINGS: Readings = Readings {
    c_prime: "C^2 (24/kappa)^nu e^(1/2) / 3",
    c_dprime: "C_prime / (1 - t/t3) at t = t1/2",
    t4: "C1 = C, rho = kappa/2",
};

/// `|ω|` is the sup norm of the frequency vector, scaled by `|ε|` when the
/// nonlinearity carries a small parameter.
pub fn compute_constants(profile: DecayProfile, nu: usize, omega_norm: f64) -> Result<ExistenceTimes> {
    profile.validate()?;
    if nu == 0 {
        return Err(Error::Config("nu must be at least 1".into()));
    }
    if !(omega_norm > 0.0 && omega_norm.is_finite()) {
        return Err(Error::Config(format!("omega norm must be positive, got {omega_norm}")));
    }
    let DecayProfile { b, kappa } = profile;
    let nu_i = nu as i32;
    let c = 1.5 * b.sqrt() * (12.0 / kappa).powi(nu_i);
    let t2 = 4.0 * kappa.powi(2 * nu_i + 1) / (81.0 * 12f64.powi(2 * nu_i + 1) * b * omega_norm);
    let g = (24.0 / kappa).powi(2 * nu_i + 1);
    let t3 = 1.0 / (12.0 * E * c * c * g * omega_norm);
    let t1 = t2.min(t3);
    // 12/ρ with ρ = κ/2.
    let rho = kappa / 2.0;
    let t4 = t1.min(1.0 / (36.0 * c * c * E * (12.0 / rho).powi(2 * nu_i + 1) * omega_norm));
    let c_prime = c * c * (24.0 / kappa).powi(nu_i) * E.sqrt() / 3.0;
    let c_dprime_t = t1 / 2.0;
    let c_dprime = c_prime / (1.0 - c_dprime_t / t3);
    Ok(ExistenceTimes {
        c,
        t1,
        t2,
        t3,
        t4,
        c_prime,
        c_dprime,
        c_dprime_t,
        input: ConstantInputs { b, kappa, nu, omega_norm },
        readings: READINGS,
    })
}

impl ExistenceTimes {
    /// The contraction factor `12eC²(24κ^{−1})^{2ν+1}|ω|t`.
    pub fn cauchy_factor(&self, t: f64) -> f64 {
        let ConstantInputs { kappa, nu, omega_norm, .. } = self.input;
        12.0 * E * self.c * self.c * (24.0 / kappa).powi(2 * nu as i32 + 1) * omega_norm * t
    }

    /// Bound on `sup_n e^{κ|n|/4} |c_k − c_{k−1}|(t, n)`.
    pub fn cauchy_bound(&self, k: usize, t: f64) -> f64 {
        self.c_prime * self.cauchy_factor(t).powi(k as i32)
    }

    /// `C″` at time `t`; `None` when `t ≥ t3`.
    pub fn c_dprime_at(&self, t: f64) -> Option<f64> {
        let q = self.cauchy_factor(t);
        (q < 1.0).then(|| self.c_prime / (1.0 - q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ExistenceTimes {
        compute_constants(DecayProfile::new(1.0, 1.0).unwrap(), 1, 1.0).unwrap()
    }

    #[test]
    fn unit_parameters() {
        let c = unit();
        assert_eq!(c.c, 18.0);
        assert!((c.t2 - 4.0 / 139968.0).abs() <= 1e-15 * c.t2);
        assert!((c.t2 - 2.8578e-5).abs() < 1e-9);
        let t3 = 1.0 / (12.0 * E * 324.0 * 13824.0);
        assert!((c.t3 - t3).abs() <= 1e-14 * t3);
        assert!((c.t3 - 6.84e-9).abs() < 1e-11);
        assert_eq!(c.t1, c.t3);
        assert!(c.t4 <= c.t1);
        assert!((c.cauchy_factor(c.t3) - 1.0).abs() < 1e-14);
        assert!(c.c_dprime_at(c.t3 * 1.01).is_none());
        assert!((c.c_dprime - 2.0 * c.c_prime).abs() < 1e-12 * c.c_prime);
    }

    #[test]
    fn json_keys() {
        let v = serde_json::to_value(unit()).unwrap();
        for k in ["C", "t1", "t2", "t3", "t4", "C_prime", "C_dprime", "input"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["input"]["B"], 1.0);
    }

    #[test]
    fn monotone_on_a_grid() {
        let vals = [0.25, 0.5, 0.75, 1.0];
        for &b in &[0.5, 1.0, 2.0] {
            for nu in 1..=3 {
                for &w in &[0.5, 1.0, 2.0] {
                    let t2: Vec<f64> = vals
                        .iter()
                        .map(|&k| compute_constants(DecayProfile::new(b, k).unwrap(), nu, w).unwrap().t2)
                        .collect();
                    assert!(t2.windows(2).all(|p| p[0] < p[1]));
                    let at = |b: f64, w: f64| {
                        compute_constants(DecayProfile::new(b, 0.5).unwrap(), nu, w).unwrap().t2
                    };
                    assert!(at(b, w) > at(2.0 * b, w));
                    assert!(at(b, w) > at(b, 2.0 * w));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(DecayProfile::new(0.0, 1.0).is_err());
        assert!(DecayProfile::new(1.0, 1.5).is_err());
        assert!(DecayProfile::new(1.0, 0.0).is_err());
        assert!(compute_constants(DecayProfile { b: 1.0, kappa: 1.0 }, 0, 1.0).is_err());
        assert!(compute_constants(DecayProfile { b: 1.0, kappa: 1.0 }, 1, 0.0).is_err());
    }
}
