use num_bigint::BigUint;
use serde::Serialize;

use crate::combinatorics::MultiIndex;
use crate::error::{Cardinality, Error, Result};
use crate::lattice::{LatticePoint, TruncationBox};

/// A truncated weighted lattice sum and the bound it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSumCheck {
    pub nu: usize,
    pub alpha: Vec<u32>,
    pub kappa: f64,
    /// Target of the alternating-sum constraint; `None` for the free sum.
    pub n: Option<LatticePoint>,
    pub radius: u32,
    /// Entry `ρ` is the sum over tuples with every `|m_j|₁ ≤ ρ`.
    pub sums_by_radius: Vec<f64>,
    pub sum: f64,
    pub bound: f64,
    pub monotone: bool,
    pub pass: bool,
}

fn weights(points: &[LatticePoint], a: u32, kappa: f64) -> Vec<f64> {
    points
        .iter()
        .map(|m| {
            let r = m.l1_norm() as f64;
            r.powi(a as i32) * (-kappa * r).exp()
        })
        .collect()
}

fn validate(nu: usize, alpha: &MultiIndex, kappa: f64) -> Result<()> {
    if nu == 0 || alpha.is_empty() {
        return Err(Error::Usage("need nu >= 1 and at least one factor".into()));
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::Config(format!("kappa must lie in (0, 1], got {kappa}")));
    }
    Ok(())
}

fn finish(
    nu: usize,
    alpha: &MultiIndex,
    kappa: f64,
    n: Option<LatticePoint>,
    radius: u32,
    buckets: Vec<f64>,
    bound: f64,
) -> LatticeSumCheck {
    let mut sums_by_radius = Vec::with_capacity(buckets.len());
    let mut acc = 0.0;
    for b in buckets {
        acc += b;
        sums_by_radius.push(acc);
    }
    let monotone = sums_by_radius.windows(2).all(|w| w[0] <= w[1]);
    let pass = monotone && sums_by_radius.iter().all(|&s| s <= bound);
    LatticeSumCheck {
        nu,
        alpha: alpha.0.clone(),
        kappa,
        n,
        radius,
        sum: acc,
        sums_by_radius,
        bound,
        monotone,
        pass,
    }
}

/// `Σ_{cas(m) = n} ∏ |m_j|^{α_j} e^{−κ|m_j|}` over `|m_j|₁ ≤ radius`,
/// against `e^{−κ|n|/2} (12/κ)^{|α| + νr} ∏ α_j!`.
///
/// The last factor is fixed by the constraint, so the work is
/// `|ball|^{r−1}` tuples; `budget` caps it.
pub fn lattice_sum_check(
    alpha: &MultiIndex,
    kappa: f64,
    n: &LatticePoint,
    radius: u32,
    budget: u64,
) -> Result<LatticeSumCheck> {
    let nu = n.dim();
    validate(nu, alpha, kappa)?;
    let r = alpha.len();
    let bx = TruncationBox::new(nu, radius)?;
    let work = BigUint::from(bx.cardinality()).pow(r as u32 - 1);
    if work > BigUint::from(budget) {
        return Err(Error::Budget {
            what: format!("constrained lattice sum over {r} factors at radius {radius}"),
            cardinality: Cardinality::Exact(work),
            budget,
        });
    }
    let points = bx.points();
    let w: Vec<Vec<f64>> = alpha.0.iter().map(|&a| weights(&points, a, kappa)).collect();
    let mut buckets = vec![0.0; radius as usize + 1];
    let mut walk = Walk {
        points: &points,
        w: &w,
        n,
        radius,
        buckets: &mut buckets,
    };
    walk.step(0, &LatticePoint::zero(nu), 1.0, 0);
    let bound = (-kappa * n.l1_norm() as f64 / 2.0).exp()
        * (12.0 / kappa).powi((alpha.weight() + (nu * r) as u64) as i32)
        * alpha.factorial_product() as f64;
    Ok(finish(nu, alpha, kappa, Some(n.clone()), radius, buckets, bound))
}

struct Walk<'a> {
    points: &'a [LatticePoint],
    w: &'a [Vec<f64>],
    n: &'a LatticePoint,
    radius: u32,
    buckets: &'a mut [f64],
}

impl Walk<'_> {
    // `partial` is the alternating sum of the factors chosen so far.
    fn step(&mut self, j: usize, partial: &LatticePoint, prod: f64, maxr: u64) {
        let r = self.w.len();
        if j + 1 == r {
            // (−1)^{r−1} m_r = n − partial
            let rest = self.n - partial;
            let m = if r % 2 == 1 { rest } else { -&rest };
            let norm = m.l1_norm();
            if norm > self.radius as u64 {
                return;
            }
            let idx = self.points.binary_search(&m).expect("ball contains every point of norm <= radius");
            self.buckets[maxr.max(norm) as usize] += prod * self.w[j][idx];
            return;
        }
        for (idx, m) in self.points.iter().enumerate() {
            let next = if j % 2 == 0 { partial + m } else { partial - m };
            self.step(j + 1, &next, prod * self.w[j][idx], maxr.max(m.l1_norm()));
        }
    }
}

/// The free sum `Σ_m ∏ |m_j|^{α_j} e^{−κ|m_j|}` over `|m_j|₁ ≤ radius`,
/// against `(6/κ)^{|α| + νr} ∏ α_j!`. Entry `ρ` of the radius profile
/// factors as a product of single-point sums.
pub fn free_lattice_sum_check(nu: usize, alpha: &MultiIndex, kappa: f64, radius: u32) -> Result<LatticeSumCheck> {
    validate(nu, alpha, kappa)?;
    let bx = TruncationBox::new(nu, radius)?;
    let points = bx.points();
    let r = alpha.len();
    // cumulative[j][ρ]: single-factor sum of factor j over |m|₁ ≤ ρ.
    let cumulative: Vec<Vec<f64>> = alpha
        .0
        .iter()
        .map(|&a| {
            let w = weights(&points, a, kappa);
            let mut by = vec![0.0; radius as usize + 1];
            for (m, wi) in points.iter().zip(w) {
                by[m.l1_norm() as usize] += wi;
            }
            let mut acc = 0.0;
            by.iter()
                .map(|b| {
                    acc += b;
                    acc
                })
                .collect()
        })
        .collect();
    let mut buckets = Vec::with_capacity(radius as usize + 1);
    let mut prev = 0.0;
    for rho in 0..=radius as usize {
        let total: f64 = cumulative.iter().map(|c| c[rho]).product();
        buckets.push(total - prev);
        prev = total;
    }
    let bound = (6.0 / kappa).powi((alpha.weight() + (nu * r) as u64) as i32) * alpha.factorial_product() as f64;
    Ok(finish(nu, alpha, kappa, None, radius, buckets, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> LatticePoint {
        LatticePoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_factor() {
        let c = lattice_sum_check(&MultiIndex(vec![0]), 1.0, &p(&[0]), 12, 1000).unwrap();
        assert_eq!(c.sum, 1.0);
        assert_eq!(c.bound, 12.0);
        assert!(c.pass);
        let c = lattice_sum_check(&MultiIndex(vec![1]), 1.0, &p(&[3]), 12, 1000).unwrap();
        assert!((c.sum - 3.0 * (-3f64).exp()).abs() < 1e-15);
        assert_eq!(c.sums_by_radius[2], 0.0);
    }

    #[test]
    fn triple_sum_against_brute_force() {
        let alpha = MultiIndex(vec![1, 0, 1]);
        let n = p(&[1]);
        let c = lattice_sum_check(&alpha, 0.7, &n, 6, 10_000).unwrap();
        let mut want = 0.0;
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for d in -6i64..=6 {
                    if a - b + d == 1 {
                        let f = |x: i64, e: i32| (x.abs() as f64).powi(e) * (-0.7 * x.abs() as f64).exp();
                        want += f(a, 1) * f(b, 0) * f(d, 1);
                    }
                }
            }
        }
        assert!((c.sum - want).abs() < 1e-13 * want);
        assert!(c.monotone && c.pass);
        assert_eq!(c.bound, (-0.35f64).exp() * (12.0 / 0.7f64).powi(5));
    }

    #[test]
    fn two_dimensional_constraint() {
        let alpha = MultiIndex(vec![0, 1]);
        let n = p(&[1, -1]);
        let c = lattice_sum_check(&alpha, 1.0, &n, 5, 10_000).unwrap();
        let mut want = 0.0;
        let f = |x: i64, y: i64, e: i32| {
            let r = (x.abs() + y.abs()) as f64;
            r.powi(e) * (-r).exp()
        };
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                if x.abs() + y.abs() > 5 {
                    continue;
                }
                // m1 − m2 = n
                let (u, v) = (x - 1, y + 1);
                if u.abs() + v.abs() <= 5 {
                    want += f(x, y, 0) * f(u, v, 1);
                }
            }
        }
        assert!((c.sum - want).abs() < 1e-13 * want);
    }

    #[test]
    fn free_sum() {
        let c = free_lattice_sum_check(1, &MultiIndex(vec![0]), 1.0, 40).unwrap();
        let e = (-1f64).exp();
        assert!((c.sum - (1.0 + e) / (1.0 - e)).abs() < 1e-12);
        assert!((c.sum - 2.1640).abs() < 1e-4);
        assert_eq!(c.bound, 6.0);
        assert!(c.pass);
    }

    #[test]
    fn budget() {
        let alpha = MultiIndex(vec![0, 0, 0]);
        assert!(matches!(
            lattice_sum_check(&alpha, 1.0, &p(&[0, 0]), 30, 1000),
            Err(Error::Budget { .. })
        ));
    }
}
