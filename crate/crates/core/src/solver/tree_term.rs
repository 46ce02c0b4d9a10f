use num_bigint::BigUint;
use num_complex::Complex64;

use super::config::{ProblemConfig, Quadrature};
use super::quadrature::cumulative;
use super::state::FourierState;
use crate::combinatorics::BranchTree;
use crate::error::{Cardinality, Error, Result};
use crate::lattice::{FrequencyVector, LatticePoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeTermOptions {
    /// Accept when two successive panel doublings agree to this, absolutely.
    pub tolerance: f64,
    pub min_panels: usize,
    pub max_panels: usize,
    /// Cap on leaf tuples visited.
    pub budget: u64,
}

impl Default for TreeTermOptions {
    fn default() -> Self {
        TreeTermOptions {
            tolerance: 1e-11,
            min_panels: 64,
            max_panels: 1 << 16,
            budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeTermValue {
    pub value: Complex64,
    pub panels: usize,
    pub error_estimate: f64,
}

/// The `(γ, n)` slice of the tree expansion of the `k`-th Picard iterate at
/// time `t`: the sum over leaf tuples `m` drawn from the initial support with
/// `cas(m) = n` of `C(m) · I(t, m) · F(m)`.
///
/// `C` is the product of leaf amplitudes with conjugates at even positions,
/// `F` collects `sε i⟨·⟩` for each internal node (conjugated inside even
/// children), and `I` is the nested oscillatory time integral, evaluated by
/// cumulative Simpson quadrature with panel doubling.
pub fn tree_term(
    k: usize,
    gamma: &BranchTree,
    n: &LatticePoint,
    t: f64,
    initial: &FourierState,
    config: &ProblemConfig,
) -> Result<Complex64> {
    Ok(tree_term_with(k, gamma, n, t, initial, config, TreeTermOptions::default())?.value)
}

pub fn tree_term_with(
    k: usize,
    gamma: &BranchTree,
    n: &LatticePoint,
    t: f64,
    initial: &FourierState,
    config: &ProblemConfig,
    opts: TreeTermOptions,
) -> Result<TreeTermValue> {
    if config.p != 1 {
        return Err(Error::Usage("tree expansion is defined for the cubic nonlinearity only".into()));
    }
    if !gamma.is_member(k) {
        return Err(Error::Usage(format!("branch {gamma} is not in the level-{k} branch set")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Usage(format!("time must be non-negative, got {t}")));
    }
    let support: Vec<LatticePoint> = initial.support().cloned().collect();
    let leaves = gamma.twice_sigma() as usize;
    let work = BigUint::from(support.len()).pow(leaves as u32 - 1);
    if work > BigUint::from(opts.budget) {
        return Err(Error::Budget {
            what: format!("leaf tuples of branch {gamma}"),
            cardinality: Cardinality::Exact(work),
            budget: opts.budget,
        });
    }
    let mut tuples = Vec::new();
    collect_tuples(&support, n, leaves, &mut Vec::new(), &LatticePoint::zero(n.dim()), &mut tuples);
    let ev = Evaluator {
        omega: &config.omega,
        lambda: config.coupling(),
        initial,
    };
    let sum = |panels: usize| -> Complex64 {
        let grid: Vec<f64> = (0..=panels).map(|i| t * i as f64 / panels as f64).collect();
        let h = t / panels as f64;
        tuples
            .iter()
            .map(|m| {
                let r = ev.eval(gamma, m, &grid, h);
                r.c * r.f * r.i[panels]
            })
            .sum()
    };
    let mut panels = opts.min_panels.max(2) & !1;
    let mut coarse = sum(panels);
    loop {
        let fine = sum(2 * panels);
        let err = (fine - coarse).norm();
        if err <= opts.tolerance {
            return Ok(TreeTermValue {
                value: fine,
                panels: 2 * panels,
                error_estimate: err,
            });
        }
        panels *= 2;
        if 2 * panels > opts.max_panels {
            return Err(Error::Quadrature {
                estimate: err,
                tolerance: opts.tolerance,
                panels,
            });
        }
        coarse = fine;
    }
}

// Tuples in lexicographic order; the last entry is fixed by the constraint.
fn collect_tuples(
    support: &[LatticePoint],
    n: &LatticePoint,
    len: usize,
    cur: &mut Vec<LatticePoint>,
    partial: &LatticePoint,
    out: &mut Vec<Vec<LatticePoint>>,
) {
    let j = cur.len();
    if j + 1 == len {
        // len is odd, so the last sign is +.
        let last = n - partial;
        if support.binary_search(&last).is_ok() {
            let mut t = cur.clone();
            t.push(last);
            out.push(t);
        }
        return;
    }
    for m in support {
        let next = if j % 2 == 0 { partial + m } else { partial - m };
        cur.push(m.clone());
        collect_tuples(support, n, len, cur, &next, out);
        cur.pop();
    }
}

struct Evaluator<'a> {
    omega: &'a FrequencyVector,
    lambda: f64,
    initial: &'a FourierState,
}

struct Part {
    n: LatticePoint,
    c: Complex64,
    f: Complex64,
    /// `I` on the grid.
    i: Vec<Complex64>,
}

impl Evaluator<'_> {
    fn leaf(&self, m: &LatticePoint, grid: &[f64]) -> Part {
        let w = m.pairing_unchecked(self.omega);
        Part {
            n: m.clone(),
            c: self.initial.get(m),
            f: Complex64::new(1.0, 0.0),
            i: grid.iter().map(|&s| Complex64::from_polar(1.0, -w * w * s)).collect(),
        }
    }

    fn node(&self, parts: [Part; 3], grid: &[f64], h: f64) -> Part {
        let [a, b, c] = parts;
        let n = &(&a.n - &b.n) + &c.n;
        let w = n.pairing_unchecked(self.omega);
        let g: Vec<Complex64> = grid
            .iter()
            .enumerate()
            .map(|(i, &s)| Complex64::from_polar(1.0, w * w * s) * a.i[i] * b.i[i].conj() * c.i[i])
            .collect();
        let integral = cumulative(&g, h, Quadrature::Simpson);
        let i = grid
            .iter()
            .zip(&integral)
            .map(|(&s, v)| Complex64::from_polar(1.0, -w * w * s) * v)
            .collect();
        Part {
            c: a.c * b.c.conj() * c.c,
            f: Complex64::new(0.0, self.lambda * w) * a.f * b.f.conj() * c.f,
            n,
            i,
        }
    }

    fn eval(&self, gamma: &BranchTree, leaves: &[LatticePoint], grid: &[f64], h: f64) -> Part {
        match gamma {
            BranchTree::Leaf0 => self.leaf(&leaves[0], grid),
            BranchTree::Leaf1 => {
                let parts = [0, 1, 2].map(|j| self.leaf(&leaves[j], grid));
                self.node(parts, grid, h)
            }
            BranchTree::Node(ch) => {
                let l0 = ch[0].twice_sigma() as usize;
                let l1 = ch[1].twice_sigma() as usize;
                let parts = [
                    self.eval(&ch[0], &leaves[..l0], grid, h),
                    self.eval(&ch[1], &leaves[l0..l0 + l1], grid, h),
                    self.eval(&ch[2], &leaves[l0 + l1..], grid, h),
                ];
                self.node(parts, grid, h)
            }
        }
    }
}
