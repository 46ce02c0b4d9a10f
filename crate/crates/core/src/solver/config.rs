use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::state::FourierState;
use crate::bounds::DecayProfile;
use crate::error::{Error, Result};
use crate::lattice::{FrequencyVector, LatticePoint, TruncationBox};

/// Sign of the nonlinear term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    /// `iu_t + u_xx − iε∂_x(|u|²u) = 0`.
    #[default]
    DnlsMinus,
    /// `iu_t + u_xx + iε∂_x(|u|^{2p}u) = 0`.
    GdnlsPlus,
}

impl Sign {
    /// `s` in `c' = −i⟨n⟩²c + s·ε·i⟨n⟩·N(c)`.
    pub fn factor(self) -> f64 {
        match self {
            Sign::DnlsMinus => 1.0,
            Sign::GdnlsPlus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    #[default]
    Trapezoid,
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Picard,
    Rk4Interaction,
}

/// What to do with modes that leave the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// Outputs live on the exactly reachable set; leaving the box is an error.
    Strict,
    /// Outputs are projected onto the box.
    Clip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub n: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    #[serde(rename = "B")]
    pub b: f64,
    pub kappa: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Modes(Vec<ModeSpec>),
    Random(RandomSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardSettings {
    /// Iterates computed by `picard`; the limit search stops here at the latest.
    #[serde(default = "default_iterates")]
    pub iterates: usize,
    /// Stop once `sup_t sup_n e^{κ|n|/4}|c_k − c_{k−1}|` is below this.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_iterates() -> usize {
    6
}

fn default_tolerance() -> f64 {
    1e-10
}

impl Default for PicardSettings {
    fn default() -> Self {
        PicardSettings {
            iterates: default_iterates(),
            tolerance: default_tolerance(),
        }
    }
}

fn default_p() -> u32 {
    1
}

fn default_epsilon() -> f64 {
    1.0
}

/// A complete problem description, as read from a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub nu: usize,
    pub omega: FrequencyVector,
    #[serde(default = "default_p")]
    pub p: u32,
    #[serde(default)]
    pub sign: Sign,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    pub box_radius: u32,
    pub t_end: f64,
    pub steps: usize,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default)]
    pub scheme: Scheme,
    pub initial: InitialData,
    /// Defaults to strict for explicit modes and clip for random data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
    #[serde(default)]
    pub picard: PicardSettings,
    /// Decay rate assumed for explicit modes; default 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ProblemConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        ProblemConfig::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu == 0 {
            return Err(Error::Config("nu must be at least 1".into()));
        }
        if self.omega.dim() != self.nu {
            return Err(Error::Config(format!(
                "omega has {} entries but nu = {}",
                self.omega.dim(),
                self.nu
            )));
        }
        if self.p == 0 {
            return Err(Error::Config("p must be at least 1".into()));
        }
        if !self.epsilon.is_finite() {
            return Err(Error::Config("epsilon must be finite".into()));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if !(self.picard.tolerance > 0.0) {
            return Err(Error::Config("picard tolerance must be positive".into()));
        }
        if let Some(k) = self.kappa {
            if !(k > 0.0 && k <= 1.0) {
                return Err(Error::Config(format!("kappa must lie in (0, 1], got {k}")));
            }
        }
        match &self.initial {
            InitialData::Modes(ms) => {
                if ms.is_empty() {
                    return Err(Error::Config("initial modes list is empty".into()));
                }
                for m in ms {
                    if m.n.len() != self.nu {
                        return Err(Error::Config(format!(
                            "initial mode {:?} has {} coordinates, expected {}",
                            m.n,
                            m.n.len(),
                            self.nu
                        )));
                    }
                    if !(m.re.is_finite() && m.im.is_finite()) {
                        return Err(Error::Config(format!("initial mode {:?} has a non-finite amplitude", m.n)));
                    }
                }
            }
            InitialData::Random(r) => {
                DecayProfile::new(r.b, r.kappa)?;
            }
        }
        Ok(())
    }

    pub fn truncation_box(&self) -> TruncationBox {
        TruncationBox {
            nu: self.nu,
            radius: self.box_radius,
        }
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation.unwrap_or(match self.initial {
            InitialData::Modes(_) => Truncation::Strict,
            InitialData::Random(_) => Truncation::Clip,
        })
    }

    /// `s·ε`.
    pub fn coupling(&self) -> f64 {
        self.sign.factor() * self.epsilon
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.steps as f64
    }

    /// The uniform mesh `t_i = i·t_end/steps`, `i = 0..=steps`, ending
    /// exactly at `t_end`.
    pub fn mesh(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| self.mesh_time(i)).collect()
    }

    pub fn mesh_time(&self, i: usize) -> f64 {
        if i == self.steps {
            self.t_end
        } else {
            self.t_end * i as f64 / self.steps as f64
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        if let InitialData::Random(r) = &mut self.initial {
            r.seed = seed;
        }
    }

    /// The decay rate of the initial data.
    pub fn kappa(&self) -> f64 {
        match &self.initial {
            InitialData::Random(r) => r.kappa,
            InitialData::Modes(_) => self.kappa.unwrap_or(1.0),
        }
    }

    /// Decay profile honoured by the initial data: the generator's for random
    /// data, the smallest `B` at rate `κ` for explicit modes.
    pub fn decay_profile(&self) -> Result<DecayProfile> {
        match &self.initial {
            InitialData::Random(r) => DecayProfile::new(r.b, r.kappa),
            InitialData::Modes(_) => fit_profile(&self.initial_state()?, self.kappa()),
        }
    }

    pub fn initial_state(&self) -> Result<FourierState> {
        self.omega.warn_resonances();
        let bx = self.truncation_box();
        match &self.initial {
            InitialData::Modes(ms) => {
                let mut s = FourierState::new(0.0, bx);
                for m in ms {
                    let n = LatticePoint::new(m.n.clone())?;
                    if s.contains(&n) {
                        return Err(Error::Config(format!("initial mode {n} listed twice")));
                    }
                    s.insert(n, Complex64::new(m.re, m.im))?;
                }
                Ok(s)
            }
            InitialData::Random(r) => Ok(random_state(bx, r.b, r.kappa, r.seed)),
        }
    }
}

/// `c(n) = B^{1/2} e^{−κ|n|₁} e^{iθ(n)} r(n)` on every box point, drawing
/// `θ` then `r` per point in lexicographic order from a seeded ChaCha stream.
pub fn random_state(bx: TruncationBox, b: f64, kappa: f64, seed: u64) -> FourierState {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut s = FourierState::new(0.0, bx);
    for n in bx.points() {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let r: f64 = rng.gen_range(0.0..1.0);
        let amp = b.sqrt() * (-kappa * n.l1_norm() as f64).exp() * r;
        s.insert(n, Complex64::from_polar(amp, theta)).expect("box point");
    }
    s
}

/// Smallest `B` with `|c(n)| ≤ B^{1/2} e^{−κ|n|₁}` on the support.
pub fn fit_profile(state: &FourierState, kappa: f64) -> Result<DecayProfile> {
    let amp = state
        .iter()
        .map(|(n, c)| c.norm() * (kappa * n.l1_norm() as f64).exp())
        .fold(0.0, f64::max);
    if amp == 0.0 {
        return Err(Error::Config("initial data is identically zero; no decay profile".into()));
    }
    DecayProfile::new(amp * amp, kappa)
}
