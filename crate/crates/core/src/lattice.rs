//! Integer lattice `Z^ν` that indexes quasi-periodic Fourier modes.
//!
//! Norm conventions used throughout the crate: `|n|` is the ℓ¹ norm of a
//! lattice point (and of a concatenated tuple of points), `|ω|` is the ℓ^∞
//! norm of the frequency vector. With these choices the frequency of an
//! alternating sum obeys `|⟨cas(m)⟩| ≤ |ω| Σ |m_j|`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `n ∈ Z^ν`.
///
/// Ordering is lexicographic on the coordinates, which is the summation
/// order used by every lattice sum in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Config("lattice point needs at least one coordinate".into()));
        }
        Ok(LatticePoint(coords))
    }

    pub fn zero(nu: usize) -> Self {
        LatticePoint(vec![0; nu.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `⟨n⟩ = n·ω`.
    pub fn pairing(&self, omega: &FrequencyVector) -> Result<f64> {
        if self.dim() != omega.dim() {
            return Err(Error::Config(format!(
                "dimension mismatch: point has {} coordinates, frequency vector has {}",
                self.dim(),
                omega.dim()
            )));
        }
        Ok(self.pairing_unchecked(omega))
    }

    pub(crate) fn pairing_unchecked(&self, omega: &FrequencyVector) -> f64 {
        self.0
            .iter()
            .zip(omega.as_slice())
            .map(|(&n, &w)| n as f64 * w)
            .sum()
    }
}

/// ℓ¹ norm of a concatenated tuple `(m_1, …, m_r)`.
pub fn l1_norm_concat(points: &[LatticePoint]) -> u64 {
    points.iter().map(LatticePoint::l1_norm).sum()
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        assert_eq!(self.dim(), rhs.dim(), "lattice dimension mismatch");
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        assert_eq!(self.dim(), rhs.dim(), "lattice dimension mismatch");
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for LatticePoint {
    type Err = Error;

    /// Parses the bracketed text form, e.g. `[1,-2]`. Whitespace around
    /// entries is tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let start = s.len() - s.trim_start().len();
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .ok_or_else(|| Error::parse_at(start, "expected '['"))?
            .strip_suffix(']')
            .ok_or_else(|| Error::parse_at(start + t.len(), "expected ']'"))?;
        let mut coords = Vec::new();
        let mut offset = start + 1;
        for piece in inner.split(',') {
            let v = piece.trim();
            let c: i64 = v
                .parse()
                .map_err(|_| Error::parse_at(offset, format!("invalid integer {v:?}")))?;
            coords.push(c);
            offset += piece.len() + 1;
        }
        LatticePoint::new(coords)
    }
}

/// The combinatorial alternating sum `m_1 − m_2 + m_3 − …`.
pub fn cas(points: &[LatticePoint]) -> Result<LatticePoint> {
    let first = points
        .first()
        .ok_or_else(|| Error::Usage("alternating sum of an empty tuple".into()))?;
    let nu = first.dim();
    let mut acc = vec![0i64; nu];
    for (j, p) in points.iter().enumerate() {
        if p.dim() != nu {
            return Err(Error::Config("alternating sum over points of mixed dimension".into()));
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        for (a, c) in acc.iter_mut().zip(p.coords()) {
            *a += sign * c;
        }
    }
    Ok(LatticePoint(acc))
}

/// Base frequencies `ω ∈ R^ν`.
///
/// Rational independence is a declared assumption; see
/// [`FrequencyVector::resonances`] for the accidental-resonance heuristic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FrequencyVector(Vec<f64>);

impl FrequencyVector {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::Config("frequency vector must have at least one entry".into()));
        }
        if let Some(w) = omega.iter().find(|w| !w.is_finite() || **w == 0.0) {
            return Err(Error::Config(format!("frequency entries must be finite and nonzero, got {w}")));
        }
        Ok(FrequencyVector(omega))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `|ω| = max_j |ω_j|`.
    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    /// Pairs `(i, j, p, q)` with `ω_i/ω_j` within `1e-12` of `p/q`,
    /// `|p|, |q| ≤ 64`.
    pub fn resonances(&self) -> Vec<(usize, usize, i64, i64)> {
        let mut found = Vec::new();
        for i in 0..self.0.len() {
            for j in (i + 1)..self.0.len() {
                let ratio = self.0[i] / self.0[j];
                'search: for q in 1..=64i64 {
                    let p = (ratio * q as f64).round();
                    if p.abs() <= 64.0 && (ratio - p / q as f64).abs() <= 1e-12 {
                        found.push((i, j, p as i64, q));
                        break 'search;
                    }
                }
            }
        }
        found
    }

    pub(crate) fn warn_resonances(&self) {
        for (i, j, p, q) in self.resonances() {
            log::warn!("omega[{i}]/omega[{j}] is within 1e-12 of {p}/{q}; the frequency vector is likely resonant");
        }
    }
}

impl TryFrom<Vec<f64>> for FrequencyVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        FrequencyVector::new(v)
    }
}

impl From<FrequencyVector> for Vec<f64> {
    fn from(w: FrequencyVector) -> Vec<f64> {
        w.0
    }
}

/// The ℓ¹ ball `{ n ∈ Z^ν : |n|₁ ≤ R }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationBox {
    pub nu: usize,
    pub radius: u32,
}

impl TruncationBox {
    pub fn new(nu: usize, radius: u32) -> Result<Self> {
        if nu == 0 {
            return Err(Error::Config("lattice dimension must be at least 1".into()));
        }
        Ok(TruncationBox { nu, radius })
    }

    pub fn contains(&self, n: &LatticePoint) -> bool {
        n.dim() == self.nu && n.l1_norm() <= self.radius as u64
    }

    /// Exact cardinality `Σ_k 2^k C(ν,k) C(R,k)`.
    pub fn cardinality(&self) -> u64 {
        let (nu, r) = (self.nu as u64, self.radius as u64);
        (0..=nu.min(r))
            .map(|k| (1u64 << k) * binomial(nu, k) * binomial(r, k))
            .sum()
    }

    /// All members in lexicographic order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.cardinality() as usize);
        let mut buf = vec![0i64; self.nu];
        fill_ball(&mut buf, 0, self.radius as i64, &mut out);
        out
    }
}

fn fill_ball(buf: &mut [i64], pos: usize, budget: i64, out: &mut Vec<LatticePoint>) {
    if pos == buf.len() {
        out.push(LatticePoint(buf.to_vec()));
        return;
    }
    for c in -budget..=budget {
        buf[pos] = c;
        fill_ball(buf, pos + 1, budget - c.abs(), out);
    }
    buf[pos] = 0;
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let w2 = FrequencyVector::new(vec![1.0, 2f64.sqrt()]).unwrap();
        assert_eq!(LatticePoint::zero(2).pairing(&w2).unwrap(), 0.0);
        assert!((pt(&[1, 1]).pairing(&w2).unwrap() - 2.414_213_562_4).abs() < 1e-10);
        let w1 = FrequencyVector::new(vec![1.0]).unwrap();
        assert_eq!(pt(&[-3]).pairing(&w1).unwrap(), -3.0);
        assert!(matches!(pt(&[1, 2]).pairing(&w1), Err(Error::Config(_))));
    }

    #[test]
    fn l1_examples() {
        assert_eq!(pt(&[0, 0]).l1_norm(), 0);
        assert_eq!(pt(&[2, -3]).l1_norm(), 5);
        assert_eq!(l1_norm_concat(&[pt(&[1]), pt(&[-2]), pt(&[3])]), 6);
    }

    #[test]
    fn cas_examples() {
        assert_eq!(cas(&[pt(&[5])]).unwrap(), pt(&[5]));
        assert_eq!(cas(&[pt(&[1]), pt(&[2]), pt(&[3])]).unwrap(), pt(&[2]));
        assert_eq!(cas(&[pt(&[1, 0]), pt(&[1, 0]), pt(&[0, 2])]).unwrap(), pt(&[0, 2]));
        assert!(matches!(cas(&[]), Err(Error::Usage(_))));
    }

    #[test]
    fn text_form() {
        let p: LatticePoint = "[1,-2]".parse().unwrap();
        assert_eq!(p, pt(&[1, -2]));
        assert_eq!(p.to_string(), "[1,-2]");
        assert_eq!(" [ 3 , 4 ] ".parse::<LatticePoint>().unwrap(), pt(&[3, 4]));
        for bad in ["", "[]", "[1,", "1,2]", "[a]", "[1,,2]"] {
            assert!(bad.parse::<LatticePoint>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn frequency_validation_and_resonance() {
        assert!(FrequencyVector::new(vec![]).is_err());
        assert!(FrequencyVector::new(vec![1.0, 0.0]).is_err());
        assert!(FrequencyVector::new(vec![f64::NAN]).is_err());
        let w = FrequencyVector::new(vec![1.0, 1.5]).unwrap();
        assert_eq!(w.resonances(), vec![(0, 1, 2, 3)]);
        let golden = FrequencyVector::new(vec![1.0, (1.0 + 5f64.sqrt()) / 2.0]).unwrap();
        assert!(golden.resonances().is_empty());
        assert_eq!(golden.sup_norm(), (1.0 + 5f64.sqrt()) / 2.0);
    }

    #[test]
    fn ball_enumeration_matches_grid_scan() {
        for nu in 1..=3usize {
            for r in 0..=10u32 {
                let b = TruncationBox::new(nu, r).unwrap();
                let pts = b.points();
                let mut scan = Vec::new();
                let side = 2 * r as i64 + 1;
                for code in 0..side.pow(nu as u32) {
                    let mut c = code;
                    let coords: Vec<i64> = (0..nu)
                        .map(|_| {
                            let v = c % side - r as i64;
                            c /= side;
                            v
                        })
                        .collect();
                    let p = LatticePoint(coords);
                    if p.l1_norm() <= r as u64 {
                        scan.push(p);
                    }
                }
                scan.sort();
                assert_eq!(pts, scan, "nu={nu} r={r}");
                assert_eq!(pts.len() as u64, b.cardinality());
                assert!(pts.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    fn tuple_strategy() -> impl Strategy<Value = Vec<LatticePoint>> {
        (1usize..=3).prop_flat_map(|nu| {
            prop::collection::vec(prop::collection::vec(-20i64..=20, nu).prop_map(LatticePoint), 1..8)
        })
    }

    proptest! {
        #[test]
        fn cas_triangle_inequality(m in tuple_strategy()) {
            prop_assert!(cas(&m).unwrap().l1_norm() <= l1_norm_concat(&m));
        }

        #[test]
        fn cas_frequency_bound(m in tuple_strategy(), seed in prop::collection::vec(0.1f64..3.0, 3)) {
            let nu = m[0].dim();
            let w = FrequencyVector::new(seed[..nu].to_vec()).unwrap();
            let f = cas(&m).unwrap().pairing(&w).unwrap();
            prop_assert!(f.abs() <= w.sup_norm() * l1_norm_concat(&m) as f64 * (1.0 + 1e-12));
        }

        #[test]
        fn text_form_round_trips(c in prop::collection::vec(any::<i64>(), 1..5)) {
            let p = LatticePoint(c);
            prop_assert_eq!(p.to_string().parse::<LatticePoint>().unwrap(), p);
        }
    }
}
