use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{FrequencyVector, LatticePoint, TruncationBox};

/// Fourier coefficients `c(t, ·)` at one time, finitely supported in a box.
///
/// A key that is present carries its amplitude even when that is zero;
/// an absent key is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    pub time: f64,
    pub truncation: TruncationBox,
    modes: BTreeMap<LatticePoint, Complex64>,
}

impl FourierState {
    pub fn new(time: f64, truncation: TruncationBox) -> Self {
        FourierState {
            time,
            truncation,
            modes: BTreeMap::new(),
        }
    }

    pub fn from_modes(
        time: f64,
        truncation: TruncationBox,
        modes: impl IntoIterator<Item = (LatticePoint, Complex64)>,
    ) -> Result<Self> {
        let mut s = FourierState::new(time, truncation);
        for (n, c) in modes {
            s.insert(n, c)?;
        }
        Ok(s)
    }

    /// Adds or replaces a mode; the point must lie in the box.
    pub fn insert(&mut self, n: LatticePoint, c: Complex64) -> Result<()> {
        if n.dim() != self.truncation.nu {
            return Err(Error::Config(format!(
                "mode {n} has dimension {}, expected {}",
                n.dim(),
                self.truncation.nu
            )));
        }
        if !self.truncation.contains(&n) {
            return Err(Error::Config(format!(
                "mode {n} lies outside the box of radius {}",
                self.truncation.radius
            )));
        }
        self.modes.insert(n, c);
        Ok(())
    }

    pub fn get(&self, n: &LatticePoint) -> Complex64 {
        self.modes.get(n).copied().unwrap_or_default()
    }

    pub fn contains(&self, n: &LatticePoint) -> bool {
        self.modes.contains_key(n)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Modes in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Complex64)> {
        self.modes.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.modes.keys()
    }

    pub fn modes(&self) -> &BTreeMap<LatticePoint, Complex64> {
        &self.modes
    }

    /// `Σ |c(n)|`.
    pub fn l1_mass(&self) -> f64 {
        self.modes.values().map(|c| c.norm()).sum()
    }

    /// `max_n |⟨n⟩|` over the support.
    pub fn max_frequency(&self, omega: &FrequencyVector) -> f64 {
        self.modes
            .keys()
            .map(|n| n.pairing_unchecked(omega).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ_{|n|₁ > R − margin} |c(n)|`: mass near the edge of the box.
    pub fn tail_mass(&self, margin: u32) -> f64 {
        let edge = self.truncation.radius.saturating_sub(margin) as u64;
        self.modes
            .iter()
            .filter(|(n, _)| n.l1_norm() > edge)
            .map(|(_, c)| c.norm())
            .sum()
    }
}

/// `sup_n e^{rate·|n|₁} |a(n) − b(n)|` over the union of supports, with the
/// maximising mode.
pub fn weighted_sup_diff(a: &FourierState, b: &FourierState, rate: f64) -> (f64, Option<LatticePoint>) {
    let mut worst = (0.0, None);
    let mut visit = |n: &LatticePoint| {
        let d = (a.get(n) - b.get(n)).norm() * (rate * n.l1_norm() as f64).exp();
        if d > worst.0 || worst.1.is_none() {
            worst = (d, Some(n.clone()));
        }
    };
    for n in a.support() {
        visit(n);
    }
    for n in b.support().filter(|n| !a.contains(n)) {
        visit(n);
    }
    worst
}

/// Snapshots on a time mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<FourierState>,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s.time)
    }

    pub fn last(&self) -> &FourierState {
        self.states.last().expect("trajectory has at least one state")
    }

    /// The snapshot taken at mesh time `t`, if any.
    pub fn at(&self, t: f64) -> Option<&FourierState> {
        self.states.iter().find(|s| s.time == t)
    }
}

/// Largest pointwise weighted difference between two trajectories sampled
/// on the same mesh, restricted to times `≤ horizon`.
pub fn trajectory_weighted_diff(
    a: &Trajectory,
    b: &Trajectory,
    rate: f64,
    horizon: f64,
) -> Result<(f64, f64, Option<LatticePoint>)> {
    if a.states.len() != b.states.len() {
        return Err(Error::Usage(format!(
            "trajectories have {} and {} snapshots",
            a.states.len(),
            b.states.len()
        )));
    }
    let mut worst = (0.0, 0.0, None);
    for (x, y) in a.states.iter().zip(&b.states) {
        if (x.time - y.time).abs() > 1e-12 * x.time.abs().max(1.0) {
            return Err(Error::Usage(format!("mesh mismatch at t = {} vs {}", x.time, y.time)));
        }
        if x.time > horizon {
            break;
        }
        let (d, n) = weighted_sup_diff(x, y, rate);
        if d > worst.0 || worst.2.is_none() {
            worst = (d, x.time, n);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> LatticePoint {
        LatticePoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn insertion_rules() {
        let bx = TruncationBox::new(1, 2).unwrap();
        let mut s = FourierState::new(0.0, bx);
        s.insert(p(&[2]), Complex64::new(1.0, 0.0)).unwrap();
        assert!(s.insert(p(&[3]), Complex64::new(1.0, 0.0)).is_err());
        assert!(s.insert(p(&[0, 0]), Complex64::new(1.0, 0.0)).is_err());
        s.insert(p(&[0]), Complex64::default()).unwrap();
        assert!(s.contains(&p(&[0])));
        assert_eq!(s.get(&p(&[1])), Complex64::default());
        assert_eq!(s.tail_mass(0), 0.0);
        assert_eq!(s.tail_mass(1), 1.0);
    }

    #[test]
    fn weighted_difference() {
        let bx = TruncationBox::new(1, 3).unwrap();
        let a = FourierState::from_modes(0.0, bx, [(p(&[1]), Complex64::new(1.0, 0.0))]).unwrap();
        let b = FourierState::from_modes(0.0, bx, [(p(&[-2]), Complex64::new(0.0, 1.0))]).unwrap();
        let (d, n) = weighted_sup_diff(&a, &b, 0.5);
        assert!((d - 1f64.exp()).abs() < 1e-15);
        assert_eq!(n, Some(p(&[-2])));
    }
}
