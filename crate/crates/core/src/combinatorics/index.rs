use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use super::tree::BranchTree;
use crate::error::{Cardinality, Error, Result};

/// A tuple of naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zeros(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = vec![0; len];
        v[pos] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α| = Σ α_j`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    /// `∏ α_j!`. Panics on overflow of `u128`, which needs `|α| > 34`.
    pub fn factorial_product(&self) -> u128 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn concat(parts: &[&MultiIndex]) -> Self {
        MultiIndex(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Which construction produced a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// `ℜ(γ)` for a branch tree.
    R(BranchTree),
    /// Weight-one indices of length `2σ(γ)`.
    E(BranchTree),
    /// `G^(k)`.
    G(usize),
    /// Weight-one indices of length `2k + 1`.
    Ek(usize),
    /// All weight-`L` indices of length `N`.
    A { n: usize, l: u32 },
}

/// A multiset of multi-indices; repeated members are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFamily {
    pub kind: FamilyKind,
    pub members: Vec<MultiIndex>,
}

impl IndexFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Distinct members with their multiplicities.
    pub fn histogram(&self) -> BTreeMap<MultiIndex, u64> {
        let mut h = BTreeMap::new();
        for m in &self.members {
            *h.entry(m.clone()).or_insert(0) += 1;
        }
        h
    }

    pub fn factorial_sum(&self) -> u128 {
        self.members.iter().map(MultiIndex::factorial_product).sum()
    }
}

fn unit_family(len: usize) -> Vec<MultiIndex> {
    (0..len).map(|j| MultiIndex::unit(len, j)).collect()
}

fn check_budget(what: impl FnOnce() -> String, count: BigUint, budget: u64) -> Result<()> {
    if count > BigUint::from(budget) {
        Err(Error::Budget {
            what: what(),
            cardinality: Cardinality::Exact(count),
            budget,
        })
    } else {
        Ok(())
    }
}

/// `|ℜ(γ)|` counted with multiplicity.
pub fn r_cardinality(gamma: &BranchTree) -> BigUint {
    match gamma {
        BranchTree::Leaf0 => BigUint::from(1u32),
        BranchTree::Leaf1 => BigUint::from(3u32),
        BranchTree::Node(c) => {
            c.iter().map(r_cardinality).product::<BigUint>() * BigUint::from(gamma.twice_sigma())
        }
    }
}

/// Weight-one indices of length `2σ(γ)`.
pub fn enumerate_e(gamma: &BranchTree) -> IndexFamily {
    IndexFamily {
        kind: FamilyKind::E(gamma.clone()),
        members: unit_family(gamma.twice_sigma() as usize),
    }
}

/// The multiset `ℜ(γ)`: `{(0)}` for `0`, the three unit 3-vectors for `1`,
/// and `ℜ(γ₁) × ℜ(γ₂) × ℜ(γ₃) + e` for a node, where `e` runs over the
/// weight-one indices of the concatenated length.
///
/// Members are ordered by child tuple (lexicographic in the children's
/// orders) and then by the position of the added unit.
pub fn enumerate_r(gamma: &BranchTree, budget: u64) -> Result<IndexFamily> {
    check_budget(
        || format!("index family of branch {gamma}"),
        r_cardinality(gamma),
        budget,
    )?;
    Ok(IndexFamily {
        kind: FamilyKind::R(gamma.clone()),
        members: build_r(gamma),
    })
}

fn build_r(gamma: &BranchTree) -> Vec<MultiIndex> {
    match gamma {
        BranchTree::Leaf0 => vec![MultiIndex::zeros(1)],
        BranchTree::Leaf1 => unit_family(3),
        BranchTree::Node(c) => {
            let parts: Vec<Vec<MultiIndex>> = c.iter().map(build_r).collect();
            let len = gamma.twice_sigma() as usize;
            let mut out = Vec::with_capacity(parts.iter().map(Vec::len).product::<usize>() * len);
            for a in &parts[0] {
                for b in &parts[1] {
                    for d in &parts[2] {
                        let base = MultiIndex::concat(&[a, b, d]);
                        for j in 0..len {
                            let mut m = base.clone();
                            m.0[j] += 1;
                            out.push(m);
                        }
                    }
                }
            }
            out
        }
    }
}

/// Weight-one indices of length `2k + 1`.
pub fn enumerate_ek(k: usize) -> IndexFamily {
    IndexFamily {
        kind: FamilyKind::Ek(k),
        members: unit_family(2 * k + 1),
    }
}

/// `|G^(k)| = 3·5·…·(2k+1)`.
pub fn g_cardinality(k: usize) -> BigUint {
    (1..=k).map(|j| BigUint::from(2 * j as u64 + 1)).product()
}

/// The multiset `G^(k)`: `G^(1)` is the three unit 3-vectors and
/// `G^(k) = e^(k) + G^(k−1) × {0} × {0}`.
pub fn enumerate_g(k: usize, budget: u64) -> Result<IndexFamily> {
    if k == 0 {
        return Err(Error::Usage("G families start at k = 1".into()));
    }
    check_budget(|| format!("G family of level {k}"), g_cardinality(k), budget)?;
    let mut members = unit_family(3);
    for level in 2..=k {
        let len = 2 * level + 1;
        let mut next = Vec::with_capacity(members.len() * len);
        for prev in &members {
            let mut base = prev.0.clone();
            base.extend([0, 0]);
            for j in 0..len {
                let mut m = base.clone();
                m[j] += 1;
                next.push(MultiIndex(m));
            }
        }
        members = next;
    }
    Ok(IndexFamily {
        kind: FamilyKind::G(k),
        members,
    })
}

/// `|𝔄_N(L)| = C(L + N − 1, N − 1)`.
pub fn a_cardinality(n: usize, l: u32) -> BigUint {
    if n == 0 {
        return BigUint::from(u32::from(l == 0));
    }
    let top = l as u64 + n as u64 - 1;
    let k = (n - 1) as u64;
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c = c * BigUint::from(top - i) / BigUint::from(i + 1);
    }
    c
}

/// Every index of length `N` and weight `L`, in lexicographic order.
pub fn enumerate_a(n: usize, l: u32, budget: u64) -> Result<IndexFamily> {
    if n == 0 {
        return Err(Error::Usage("index length N must be at least 1".into()));
    }
    check_budget(|| format!("index set of length {n} and weight {l}"), a_cardinality(n, l), budget)?;
    let mut members = Vec::new();
    let mut cur = vec![0u32; n];
    compositions(&mut cur, 0, l, &mut members);
    members.reverse();
    Ok(IndexFamily {
        kind: FamilyKind::A { n, l },
        members,
    })
}

// Emits in reverse lexicographic order (largest first entry first).
fn compositions(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for v in (0..=left).rev() {
        cur[pos] = v;
        compositions(cur, pos + 1, left - v, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::tree::enumerate_branches;

    fn t(s: &str) -> BranchTree {
        s.parse().unwrap()
    }

    #[test]
    fn r_family_examples() {
        assert_eq!(enumerate_r(&BranchTree::Leaf0, 10).unwrap().members, vec![MultiIndex(vec![0])]);
        assert_eq!(
            enumerate_r(&BranchTree::Leaf1, 10).unwrap().members,
            vec![MultiIndex(vec![1, 0, 0]), MultiIndex(vec![0, 1, 0]), MultiIndex(vec![0, 0, 1])]
        );
        let f = enumerate_r(&t("(1,0,0)"), 100).unwrap();
        assert_eq!(f.len(), 15);
        assert!(f.members.iter().all(|m| m.len() == 5 && m.weight() == 2));
        // (1,0,0,0,0) + e_1 and + e_1 from (1,0,0)+(0)+(0) is the only route to (2,0,0,0,0).
        let h = f.histogram();
        assert_eq!(h[&MultiIndex(vec![2, 0, 0, 0, 0])], 1);
        assert_eq!(h[&MultiIndex(vec![1, 1, 0, 0, 0])], 2);
    }

    #[test]
    fn r_family_budget() {
        let g = t("((1,1,1),(1,1,1),(1,1,1))");
        assert!(matches!(enumerate_r(&g, 1_000_000), Err(Error::Budget { .. })));
    }

    #[test]
    fn r_families_up_to_level_two_match_shape() {
        for g in enumerate_branches(2, 100).unwrap() {
            let f = enumerate_r(&g, 1_000_000).unwrap();
            assert_eq!(BigUint::from(f.len()), r_cardinality(&g));
            for m in &f.members {
                assert_eq!(m.len() as u64, g.twice_sigma());
                assert_eq!(m.weight(), g.ell());
            }
        }
    }

    #[test]
    fn g_family_examples() {
        assert_eq!(enumerate_g(1, 10).unwrap().members, unit_family(3));
        assert_eq!(enumerate_g(2, 100).unwrap().len(), 15);
        for k in 1..=6 {
            let f = enumerate_g(k, 1_000_000).unwrap();
            assert_eq!(BigUint::from(f.len()), g_cardinality(k));
            assert!(f.members.iter().all(|m| m.len() == 2 * k + 1 && m.weight() == k as u64));
        }
        assert!(matches!(enumerate_g(3, 100), Err(Error::Budget { .. })));
    }

    #[test]
    fn unit_families() {
        let e = enumerate_ek(2);
        assert_eq!(e.len(), 5);
        assert!(e.members.iter().all(|m| m.len() == 5 && m.weight() == 1));
        let e = enumerate_e(&t("(1,0,1)"));
        assert_eq!(e.len(), 7);
    }

    #[test]
    fn a_family() {
        let f = enumerate_a(2, 2, 100).unwrap();
        assert_eq!(
            f.members,
            vec![MultiIndex(vec![0, 2]), MultiIndex(vec![1, 1]), MultiIndex(vec![2, 0])]
        );
        for n in 1..=5 {
            for l in 0..=5 {
                let f = enumerate_a(n, l, 100_000).unwrap();
                assert_eq!(BigUint::from(f.len()), a_cardinality(n, l));
                assert!(f.members.iter().all(|m| m.len() == n && m.weight() == l as u64));
                assert!(f.members.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
