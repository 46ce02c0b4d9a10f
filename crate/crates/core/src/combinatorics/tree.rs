use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::error::{Cardinality, Error, Result};

/// Nesting limit for the text parser.
const MAX_PARSE_NESTING: usize = 64;

/// An element of a branch set `Γ^(k)`.
///
/// `Γ^(1) = {0, 1}` and `Γ^(k) = {0} ∪ (Γ^(k−1))³`. A tree does not carry
/// its level `k`: `Leaf0` belongs to every level, `Leaf1` only to level 1,
/// and a node to level `k` when all three children belong to `k − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchTree {
    Leaf0,
    Leaf1,
    Node(Box<[BranchTree; 3]>),
}

impl BranchTree {
    pub fn node(a: BranchTree, b: BranchTree, c: BranchTree) -> Self {
        BranchTree::Node(Box::new([a, b, c]))
    }

    pub fn children(&self) -> Option<&[BranchTree; 3]> {
        match self {
            BranchTree::Node(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_member(&self, k: usize) -> bool {
        match self {
            BranchTree::Leaf0 => k >= 1,
            BranchTree::Leaf1 => k == 1,
            BranchTree::Node(c) => k >= 2 && c.iter().all(|t| t.is_member(k - 1)),
        }
    }

    /// Levels `k` with `self ∈ Γ^(k)`, as `(min, max)`; `max = None` means
    /// unbounded. `None` for trees that belong to no level.
    pub fn levels(&self) -> Option<(usize, Option<usize>)> {
        match self {
            BranchTree::Leaf0 => Some((1, None)),
            BranchTree::Leaf1 => Some((1, Some(1))),
            BranchTree::Node(c) => {
                let mut lo = 1;
                let mut hi: Option<usize> = None;
                for child in c.iter() {
                    let (clo, chi) = child.levels()?;
                    lo = lo.max(clo);
                    hi = match (hi, chi) {
                        (Some(a), Some(b)) => Some(a.min(b)),
                        (a, b) => a.or(b),
                    };
                }
                if hi.is_some_and(|h| h < lo) {
                    return None;
                }
                Some((lo + 1, hi.map(|h| h + 1)))
            }
        }
    }

    /// `2σ(γ)`: the number of initial-data factors on the branch.
    pub fn twice_sigma(&self) -> u64 {
        match self {
            BranchTree::Leaf0 => 1,
            BranchTree::Leaf1 => 3,
            BranchTree::Node(c) => c.iter().map(BranchTree::twice_sigma).sum(),
        }
    }

    /// `σ(γ)` as an exact rational.
    pub fn sigma(&self) -> Ratio<u64> {
        match self {
            BranchTree::Leaf0 => Ratio::new(1, 2),
            BranchTree::Leaf1 => Ratio::new(3, 2),
            BranchTree::Node(c) => c.iter().map(BranchTree::sigma).sum(),
        }
    }

    /// `ℓ(γ)`: the number of nested time integrations.
    pub fn ell(&self) -> u64 {
        match self {
            BranchTree::Leaf0 => 0,
            BranchTree::Leaf1 => 1,
            BranchTree::Node(c) => 1 + c.iter().map(BranchTree::ell).sum::<u64>(),
        }
    }

    /// The integration denominator `D(γ)`.
    pub fn dd(&self) -> u64 {
        match self {
            BranchTree::Leaf0 | BranchTree::Leaf1 => 1,
            BranchTree::Node(c) => self.ell() * c.iter().map(BranchTree::dd).product::<u64>(),
        }
    }
}

impl fmt::Display for BranchTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchTree::Leaf0 => f.write_str("0"),
            BranchTree::Leaf1 => f.write_str("1"),
            BranchTree::Node(c) => write!(f, "({},{},{})", c[0], c[1], c[2]),
        }
    }
}

impl FromStr for BranchTree {
    type Err = Error;

    /// Parses `0`, `1` or `(t1,t2,t3)`; whitespace between tokens is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let t = p.tree(0)?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse_at(p.pos, "trailing input after tree"));
        }
        Ok(t)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse_at(self.pos, format!("expected '{}'", b as char)))
        }
    }

    fn tree(&mut self, nesting: usize) -> Result<BranchTree> {
        if nesting > MAX_PARSE_NESTING {
            return Err(Error::parse_at(self.pos, "tree nested too deeply"));
        }
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(BranchTree::Leaf0)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(BranchTree::Leaf1)
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.tree(nesting + 1)?;
                self.expect(b',')?;
                let b = self.tree(nesting + 1)?;
                self.expect(b',')?;
                let c = self.tree(nesting + 1)?;
                self.expect(b')')?;
                Ok(BranchTree::node(a, b, c))
            }
            _ => Err(Error::parse_at(self.pos, "expected '0', '1' or '('")),
        }
    }
}

/// `|Γ^(k)|`: `g(1) = 2`, `g(k) = 1 + g(k−1)³`.
pub fn branch_count(k: usize) -> BigUint {
    let mut g = BigUint::from(2u32);
    for _ in 1..k {
        g = BigUint::from(1u32) + &g * &g * &g;
    }
    g
}

/// Every element of `Γ^(k)`, in the order `0`, (`1`), then the product
/// `Γ^(k−1)³` lexicographically.
pub fn enumerate_branches(k: usize, budget: u64) -> Result<Vec<BranchTree>> {
    if k == 0 {
        return Err(Error::Usage("branch sets start at level 1".into()));
    }
    let count = branch_count(k);
    if count > BigUint::from(budget) {
        return Err(Error::Budget {
            what: format!("branch set of level {k}"),
            cardinality: Cardinality::Exact(count),
            budget,
        });
    }
    let mut level = vec![BranchTree::Leaf0, BranchTree::Leaf1];
    for _ in 1..k {
        let mut next = Vec::with_capacity(1 + level.len().pow(3));
        next.push(BranchTree::Leaf0);
        for a in &level {
            for b in &level {
                for c in &level {
                    next.push(BranchTree::node(a.clone(), b.clone(), c.clone()));
                }
            }
        }
        level = next;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use BranchTree::{Leaf0, Leaf1};

    fn t(s: &str) -> BranchTree {
        s.parse().unwrap()
    }

    #[test]
    fn branch_set_sizes() {
        assert_eq!(enumerate_branches(1, 10).unwrap(), vec![Leaf0, Leaf1]);
        assert_eq!(enumerate_branches(2, 100).unwrap().len(), 9);
        assert_eq!(enumerate_branches(3, 1000).unwrap().len(), 730);
        assert_eq!(branch_count(4), BigUint::from(389_017_001u64));
        match enumerate_branches(4, 1_000_000) {
            Err(Error::Budget { cardinality: Cardinality::Exact(n), .. }) => {
                assert_eq!(n, BigUint::from(389_017_001u64))
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn enumerated_trees_are_distinct_members() {
        for k in 1..=3 {
            let all = enumerate_branches(k, 1000).unwrap();
            assert!(all.iter().all(|g| g.is_member(k)));
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
        }
    }

    #[test]
    fn counting_function_examples() {
        assert_eq!(Leaf0.sigma(), Ratio::new(1, 2));
        assert_eq!(Leaf1.sigma(), Ratio::new(3, 2));
        assert_eq!(t("(1,1,1)").sigma(), Ratio::new(9, 2));
        assert_eq!(Leaf0.ell(), 0);
        assert_eq!(Leaf1.ell(), 1);
        assert_eq!(t("(1,0,1)").ell(), 3);
        assert_eq!(Leaf0.dd(), 1);
        assert_eq!(Leaf1.dd(), 1);
        assert_eq!(t("(1,1,1)").dd(), 4);
    }

    #[test]
    fn parity_and_sigma_ell_relation() {
        for k in 1..=3 {
            for g in enumerate_branches(k, 1000).unwrap() {
                let s = g.sigma();
                assert_eq!(*s.denom(), 2, "{g}");
                assert_eq!(s.numer() % 2, 1, "{g}");
                assert_eq!(2 * g.ell() % 2, 0);
                assert_eq!(s, Ratio::from_integer(g.ell()) + Ratio::new(1, 2), "{g}");
                assert_eq!(g.twice_sigma(), *s.numer());
            }
        }
    }

    #[test]
    fn membership_levels() {
        assert!(Leaf1.is_member(1) && !Leaf1.is_member(2));
        assert!(Leaf0.is_member(5));
        assert!(t("(1,0,1)").is_member(2) && !t("(1,0,1)").is_member(3));
        assert!(t("(0,0,0)").is_member(2) && t("(0,0,0)").is_member(4));
        assert_eq!(t("((1,1,1),0,0)").levels(), Some((3, Some(3))));
        assert_eq!(t("((1,1,1),1,0)").levels(), None);
        assert_eq!(t("(0,0,0)").levels(), Some((2, None)));
    }

    #[test]
    fn text_form() {
        let g = t(" ( 1 , (0,1,0) ,0 )");
        assert_eq!(g.to_string(), "(1,(0,1,0),0)");
        for bad in ["", "2", "(1,0)", "(1,0,1", "(1,0,1))", "(1;0;1)"] {
            assert!(bad.parse::<BranchTree>().is_err(), "{bad:?}");
        }
        let deep = "(".repeat(100) + "0" + &",0,0)".repeat(100);
        assert!(deep.parse::<BranchTree>().is_err());
        for k in 1..=3 {
            for g in enumerate_branches(k, 1000).unwrap() {
                assert_eq!(g.to_string().parse::<BranchTree>().unwrap(), g);
            }
        }
    }
}
