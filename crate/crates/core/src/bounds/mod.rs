//! Explicit constants, lattice-sum estimates and decay certificates.

mod certificate;
mod constants;
mod lattice_sums;
mod scalar;

pub use certificate::{check_decay, DecayCertificate};
pub use constants::{compute_constants, ConstantInputs, DecayProfile, ExistenceTimes, Readings};
pub use lattice_sums::{free_lattice_sum_check, lattice_sum_check, LatticeSumCheck};
pub use scalar::{geometric_checks, power_exponential_checks, scalar_bound_checks, stirling_checks};

use crate::combinatorics::{factorial_sum_bound_check, MultiIndex};
use crate::error::Result;
use crate::lattice::LatticePoint;
use crate::report::{CheckRow, Report};

/// Work cap for one constrained lattice sum in the suite.
pub const LATTICE_SUM_BUDGET: u64 = 1_000_000;

/// Every multi-index of length `r` with weight at most `max_weight`, in
/// lexicographic order.
pub fn small_multi_indices(r: usize, max_weight: u32) -> Vec<MultiIndex> {
    fn go(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() == r {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for a in 0..=left {
            cur.push(a);
            go(r, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, max_weight, &mut Vec::new(), &mut out);
    out
}

fn targets(nu: usize) -> Vec<LatticePoint> {
    let raw: &[&[i64]] = match nu {
        1 => &[&[0], &[1], &[3]],
        _ => &[&[0, 0], &[1, -1], &[2, 1]],
    };
    raw.iter().map(|c| LatticePoint::new(c.to_vec()).expect("nonempty")).collect()
}

fn sum_row(lemma: &str, c: &LatticeSumCheck) -> CheckRow {
    let n = c.n.as_ref().map_or("free".to_string(), |n| n.to_string());
    CheckRow::new(
        lemma,
        format!("nu={},alpha={},kappa={},n={},radius={}", c.nu, MultiIndex(c.alpha.clone()), c.kappa, n, c.radius),
        format!("<={:e}", c.bound),
        format!("{:e}", c.sum),
        c.pass,
    )
}

/// Constrained and free lattice sums over `ν ∈ {1, 2}`, `r ≤ 3`,
/// `|α| ≤ 2`, `κ ∈ {1/2, 1}` at radius 12.
pub fn lattice_sum_suite() -> Result<Report> {
    let mut r = Report::default();
    for nu in 1..=2 {
        for len in 1..=3 {
            for alpha in small_multi_indices(len, 2) {
                for kappa in [0.5, 1.0] {
                    for n in targets(nu) {
                        r.push(sum_row("constrained_lattice_sum", &lattice_sum_check(&alpha, kappa, &n, 12, LATTICE_SUM_BUDGET)?));
                    }
                    r.push(sum_row("free_lattice_sum", &free_lattice_sum_check(nu, &alpha, kappa, 12)?));
                }
            }
        }
    }
    Ok(r)
}

/// `Σ_{α∈A(N,L)} α! < (2N)^L` over `1 ≤ N, L ≤ 8`.
pub fn factorial_sum_suite() -> Result<Report> {
    let mut r = Report::default();
    for n in 1..=8 {
        for l in 1..=8 {
            let c = factorial_sum_bound_check(n, l)?;
            r.push(CheckRow::new(
                "factorial_sum",
                format!("N={n},L={l}"),
                format!("<{}", c.bound),
                c.sum,
                c.pass,
            ));
        }
    }
    Ok(r)
}

/// Scalar inequalities, lattice sums and the factorial-sum grid.
pub fn verification_suite() -> Result<Report> {
    let mut r = scalar_bound_checks();
    r.extend(lattice_sum_suite()?);
    r.extend(factorial_sum_suite()?);
    Ok(r)
}
