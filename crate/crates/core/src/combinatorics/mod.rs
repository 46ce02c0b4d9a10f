//! Branch trees, index families and the counting identities built on them.

mod counting;
mod index;
mod tree;

pub use counting::{
    factorial_sum_bound_check, m_terms, m_value, p_recursion, p_value, r_histogram, r_summary,
    tree_factorial_instances, FactorialSumCheck, MTerm, MTerms, MValue, PValue, RSummary,
};
pub use index::{
    a_cardinality, enumerate_a, enumerate_e, enumerate_ek, enumerate_g, enumerate_r, factorial,
    g_cardinality, r_cardinality, FamilyKind, IndexFamily, MultiIndex,
};
pub use tree::{branch_count, enumerate_branches, BranchTree};

/// Default cap on enumerated elements.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
