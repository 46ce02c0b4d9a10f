use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::index::{enumerate_a, factorial, MultiIndex};
use super::tree::{enumerate_branches, BranchTree};
use crate::error::{Cardinality, Error, Result};

/// Aggregate facts about `ℜ(γ)` gathered by visiting every member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RSummary {
    /// Members counted with multiplicity.
    pub cardinality: u128,
    pub min_len: u64,
    pub max_len: u64,
    pub min_weight: u64,
    pub max_weight: u64,
    /// `Σ_{α ∈ ℜ(γ)} ∏ α_j!`.
    pub factorial_sum: u128,
}

impl RSummary {
    fn empty() -> Self {
        RSummary {
            cardinality: 0,
            min_len: u64::MAX,
            max_len: 0,
            min_weight: u64::MAX,
            max_weight: 0,
            factorial_sum: 0,
        }
    }

    fn add(&mut self, len: u64, weight: u64, mult: u128, fact: u128) {
        self.cardinality += mult;
        self.min_len = self.min_len.min(len);
        self.max_len = self.max_len.max(len);
        self.min_weight = self.min_weight.min(weight);
        self.max_weight = self.max_weight.max(weight);
        self.factorial_sum += mult * fact;
    }

    fn merge(mut self, o: RSummary) -> RSummary {
        self.cardinality += o.cardinality;
        self.min_len = self.min_len.min(o.min_len);
        self.max_len = self.max_len.max(o.max_len);
        self.min_weight = self.min_weight.min(o.min_weight);
        self.max_weight = self.max_weight.max(o.max_weight);
        self.factorial_sum += o.factorial_sum;
        self
    }
}

/// Distinct members of `ℜ(γ)` with multiplicities.
pub fn r_histogram(gamma: &BranchTree, budget: u64) -> Result<BTreeMap<MultiIndex, u64>> {
    match gamma {
        BranchTree::Leaf0 => Ok(BTreeMap::from([(MultiIndex::zeros(1), 1)])),
        BranchTree::Leaf1 => Ok((0..3).map(|j| (MultiIndex::unit(3, j), 1)).collect()),
        BranchTree::Node(c) => {
            let parts = child_histograms(c, budget)?;
            let len = gamma.twice_sigma() as usize;
            check_work(gamma, &parts, budget)?;
            let mut h = BTreeMap::new();
            for (a, ma) in &parts[0] {
                for (b, mb) in &parts[1] {
                    for (d, md) in &parts[2] {
                        let base = MultiIndex::concat(&[a, b, d]);
                        let m = ma * mb * md;
                        for j in 0..len {
                            let mut v = base.clone();
                            v.0[j] += 1;
                            *h.entry(v).or_insert(0) += m;
                        }
                    }
                }
            }
            Ok(h)
        }
    }
}

type Entries = Vec<(MultiIndex, u64)>;

fn child_histograms(c: &[BranchTree; 3], budget: u64) -> Result<[Entries; 3]> {
    let h = |t: &BranchTree| r_histogram(t, budget).map(|m| m.into_iter().collect::<Vec<_>>());
    Ok([h(&c[0])?, h(&c[1])?, h(&c[2])?])
}

// Member visits for a node: distinct child triples times the added-unit positions.
fn check_work(gamma: &BranchTree, parts: &[Entries; 3], budget: u64) -> Result<()> {
    let work = BigUint::from(parts[0].len())
        * BigUint::from(parts[1].len())
        * BigUint::from(parts[2].len())
        * BigUint::from(gamma.twice_sigma());
    if work > BigUint::from(budget) {
        return Err(Error::Budget {
            what: format!("member visits for index family of branch {gamma}"),
            cardinality: Cardinality::Exact(work),
            budget,
        });
    }
    Ok(())
}

/// Visits every member of `ℜ(γ)` without materialising the family.
///
/// For a node the children are held as histograms and each concatenation
/// `α¹α²α³ + e_j` is formed on the fly, so the cost is the number of
/// distinct child triples times `2σ(γ)`; `budget` caps that count.
pub fn r_summary(gamma: &BranchTree, budget: u64) -> Result<RSummary> {
    let c = match gamma {
        BranchTree::Node(c) => c,
        leaf => {
            let mut s = RSummary::empty();
            for (m, mult) in r_histogram(leaf, budget)? {
                s.add(m.len() as u64, m.weight(), mult as u128, m.factorial_product());
            }
            return Ok(s);
        }
    };
    let parts = child_histograms(c, budget)?;
    check_work(gamma, &parts, budget)?;
    let prep = |e: &Entries| -> Vec<(Vec<u32>, u128, u128, u64)> {
        e.iter()
            .map(|(m, mult)| (m.0.clone(), *mult as u128, m.factorial_product(), m.weight()))
            .collect()
    };
    let (p0, p1, p2) = (prep(&parts[0]), prep(&parts[1]), prep(&parts[2]));
    let summary = p0
        .par_iter()
        .map(|(a, ma, fa, wa)| {
            let mut s = RSummary::empty();
            let mut v = Vec::with_capacity(gamma.twice_sigma() as usize);
            for (b, mb, fb, wb) in &p1 {
                for (d, md, fd, wd) in &p2 {
                    v.clear();
                    v.extend_from_slice(a);
                    v.extend_from_slice(b);
                    v.extend_from_slice(d);
                    let mult = ma * mb * md;
                    let fact = fa * fb * fd;
                    let weight = wa + wb + wd + 1;
                    for &vj in &v {
                        // ∏(v + e_j)! = ∏v! · (v_j + 1)
                        s.add(v.len() as u64, weight, mult, fact * (vj as u128 + 1));
                    }
                }
            }
            s
        })
        .reduce(RSummary::empty, RSummary::merge);
    Ok(summary)
}

/// `P(γ)` by the product recursion `P = 3ℓ(γ) ∏ P(γ_j)`.
pub fn p_recursion(gamma: &BranchTree) -> u128 {
    match gamma {
        BranchTree::Leaf0 => 1,
        BranchTree::Leaf1 => 3,
        BranchTree::Node(c) => {
            3 * gamma.ell() as u128 * c.iter().map(p_recursion).product::<u128>()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PValue {
    pub enumeration: u128,
    pub recursion: u128,
}

impl PValue {
    pub fn agree(&self) -> bool {
        self.enumeration == self.recursion
    }
}

/// `P(γ) = Σ_{α ∈ ℜ(γ)} ∏ α_j!`, by enumeration and by recursion.
pub fn p_value(gamma: &BranchTree, budget: u64) -> Result<PValue> {
    Ok(PValue {
        enumeration: r_summary(gamma, budget)?.factorial_sum,
        recursion: p_recursion(gamma),
    })
}

/// Per-branch data needed to evaluate `M_k(T)` at any `T`.
#[derive(Debug, Clone)]
pub struct MTerms {
    pub k: usize,
    pub terms: Vec<MTerm>,
}

#[derive(Debug, Clone)]
pub struct MTerm {
    pub gamma: BranchTree,
    pub ell: u64,
    pub dd: u64,
    /// `P(γ)` by enumeration.
    pub p: u128,
}

/// Both readings of `M_k(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MValue {
    /// `Σ_{γ ∈ Γ^(k)} T^ℓ / D · P`.
    pub full_sum: f64,
    /// `M_k(0) + max_γ M_k(γ)` over composite branches: the two-term split.
    pub split_max: f64,
}

impl MTerm {
    pub fn value(&self, t: f64) -> f64 {
        t.powi(self.ell as i32) / self.dd as f64 * self.p as f64
    }
}

/// Enumerates `Γ^(k)` and computes `P` for every branch.
pub fn m_terms(k: usize, budget: u64) -> Result<MTerms> {
    let terms = enumerate_branches(k, budget)?
        .into_par_iter()
        .map(|gamma| {
            let p = r_summary(&gamma, budget)?.factorial_sum;
            Ok(MTerm {
                ell: gamma.ell(),
                dd: gamma.dd(),
                p,
                gamma,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MTerms { k, terms })
}

impl MTerms {
    pub fn evaluate(&self, t: f64) -> MValue {
        // Fixed summation order keeps results independent of thread count.
        let full_sum = self.terms.iter().map(|m| m.value(t)).sum();
        let zero = self
            .terms
            .iter()
            .find(|m| m.gamma == BranchTree::Leaf0)
            .map_or(0.0, |m| m.value(t));
        let composite = self
            .terms
            .iter()
            .filter(|m| matches!(m.gamma, BranchTree::Node(_)))
            .map(|m| m.value(t))
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
        // At k = 1 the only other branch is the leaf `1`.
        let other = composite.unwrap_or_else(|| {
            self.terms
                .iter()
                .filter(|m| m.gamma != BranchTree::Leaf0)
                .map(|m| m.value(t))
                .fold(0.0, f64::max)
        });
        MValue {
            full_sum,
            split_max: zero + other,
        }
    }
}

pub fn m_value(k: usize, t: f64, budget: u64) -> Result<MValue> {
    if !(t >= 0.0) {
        return Err(Error::Usage(format!("T must be non-negative, got {t}")));
    }
    Ok(m_terms(k, budget)?.evaluate(t))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorialSumCheck {
    pub n: usize,
    pub l: u32,
    /// `Σ_{α ∈ 𝔄_N(L)} ∏ α_j!`.
    pub sum: u128,
    /// `(2N)^L`.
    pub bound: u128,
    /// Strict inequality `sum < bound`.
    pub pass: bool,
}

/// Exhaustive check of `Σ_{α ∈ 𝔄_N(L)} ∏ α_j! < (2N)^L`.
pub fn factorial_sum_bound_check(n: usize, l: u32) -> Result<FactorialSumCheck> {
    if n == 0 || n > 8 || l > 8 {
        return Err(Error::Usage(format!(
            "factorial-sum check is exhaustive only for 1 <= N <= 8 and L <= 8, got N={n}, L={l}"
        )));
    }
    let fam = enumerate_a(n, l, u64::MAX)?;
    let sum = fam.members.iter().map(|m| m.0.iter().map(|&a| factorial(a)).product::<u128>()).sum();
    let bound = (2 * n as u128).pow(l);
    Ok(FactorialSumCheck {
        n,
        l,
        sum,
        bound,
        pass: sum < bound,
    })
}

/// The `(N, L) = (2k+1, k)` instances met by the `G^(k)` families, within
/// the exhaustive range.
pub fn tree_factorial_instances() -> Vec<(usize, u32)> {
    (1..=3).map(|k| (2 * k + 1, k as u32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::index::enumerate_r;

    fn t(s: &str) -> BranchTree {
        s.parse().unwrap()
    }

    #[test]
    fn p_examples() {
        for (s, want) in [("0", 1), ("1", 3), ("(1,1,1)", 324)] {
            let p = p_value(&t(s), 1_000_000).unwrap();
            assert_eq!(p.enumeration, want, "{s}");
            assert_eq!(p.recursion, want, "{s}");
        }
    }

    #[test]
    fn summary_matches_materialised_family() {
        for s in ["(1,0,0)", "(1,1,1)", "((1,1,1),0,(0,1,0))", "((0,1,0),(1,0,0),1)"] {
            let g = t(s);
            let fam = enumerate_r(&g, 10_000_000).unwrap();
            let sum = r_summary(&g, 10_000_000).unwrap();
            assert_eq!(sum.cardinality, fam.len() as u128);
            assert_eq!(sum.factorial_sum, fam.factorial_sum());
            let h = r_histogram(&g, 10_000_000).unwrap();
            assert_eq!(h, fam.histogram());
        }
    }

    #[test]
    fn m_level_one() {
        let t0 = 4.0 / 81.0;
        let m = m_value(1, t0, 1000).unwrap();
        assert!((m.full_sum - (1.0 + 3.0 * t0)).abs() < 1e-15);
        assert_eq!(m_value(1, 0.0, 1000).unwrap().full_sum, 1.0);
        let m2 = m_value(2, t0, 1_000_000).unwrap();
        let want = 1.0 + 3.0 * t0 * (1.0 + 3.0 * t0).powi(3);
        assert!((m2.full_sum - want).abs() < 1e-12, "{}", m2.full_sum);
        assert!(m2.full_sum <= 1.5);
        assert!(m_value(1, -1.0, 10).is_err());
    }

    #[test]
    fn factorial_examples() {
        let c = factorial_sum_bound_check(3, 1).unwrap();
        assert_eq!((c.sum, c.bound, c.pass), (3, 6, true));
        let c = factorial_sum_bound_check(2, 2).unwrap();
        assert_eq!((c.sum, c.bound, c.pass), (5, 16, true));
        let c = factorial_sum_bound_check(1, 3).unwrap();
        assert_eq!((c.sum, c.bound, c.pass), (6, 8, true));
        let c = factorial_sum_bound_check(1, 4).unwrap();
        assert_eq!((c.sum, c.bound, c.pass), (24, 16, false));
        for (n, l) in tree_factorial_instances() {
            assert!(factorial_sum_bound_check(n, l).unwrap().pass);
        }
        assert!(factorial_sum_bound_check(9, 1).is_err());
    }
}
