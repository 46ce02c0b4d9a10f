use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::lattice::LatticePoint;

/// Pair count above which a stage is evaluated in parallel.
const PARALLEL_PAIRS: usize = 1 << 15;

/// A sorted set of lattice points with positional lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSet {
    points: Vec<LatticePoint>,
}

impl ModeSet {
    pub fn new(mut points: Vec<LatticePoint>) -> Self {
        points.sort();
        points.dedup();
        ModeSet { points }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, n: &LatticePoint) -> Option<usize> {
        self.points.binary_search(n).ok()
    }

    pub fn is_subset(&self, other: &ModeSet) -> bool {
        self.points.iter().all(|p| other.index_of(p).is_some())
    }

    pub fn union(&self, other: &ModeSet) -> ModeSet {
        let mut v = self.points.clone();
        v.extend(other.points.iter().cloned());
        ModeSet::new(v)
    }
}

/// Stage `j` combines the running partial sums on `S_{j−1}` with factor `j`
/// on the input support: `v_j(o) = Σ v_{j−1}(a) f_j(b)` over `o = a ± b`.
#[derive(Debug, Clone)]
struct Stage {
    points: Vec<LatticePoint>,
    /// CSR row offsets into `pairs`, one row per point of this stage.
    offsets: Vec<usize>,
    /// `(a, b)` with `a` indexing the previous stage and `b` the input.
    pairs: Vec<(u32, u32)>,
}

/// Precomputed plan for the multilinear alternating convolution
/// `Σ_{m₁ − m₂ + m₃ − … = n} f₁(m₁) f̄₂(m₂) f₃(m₃) …` on a fixed support.
///
/// Each output is accumulated over tuples in lexicographic order of the
/// factor indices, so results do not depend on thread count.
#[derive(Debug, Clone)]
pub struct Convolver {
    input: ModeSet,
    factors: usize,
    stages: Vec<Stage>,
    output: ModeSet,
}

impl Convolver {
    /// `factors` must be odd; `2p + 1` for the power-`p` nonlinearity.
    pub fn new(input: ModeSet, factors: usize) -> Self {
        assert!(factors % 2 == 1, "alternating convolution needs an odd number of factors");
        let mut stages = Vec::with_capacity(factors.saturating_sub(1));
        let mut prev: Vec<LatticePoint> = input.points.clone();
        for j in 2..=factors {
            let minus = j % 2 == 0;
            let mut rows: HashMap<LatticePoint, Vec<(u32, u32)>> = HashMap::new();
            for (ai, a) in prev.iter().enumerate() {
                for (bi, b) in input.points.iter().enumerate() {
                    let o = if minus { a - b } else { a + b };
                    rows.entry(o).or_default().push((ai as u32, bi as u32));
                }
            }
            let sorted: BTreeMap<LatticePoint, Vec<(u32, u32)>> = rows.into_iter().collect();
            let mut points = Vec::with_capacity(sorted.len());
            let mut offsets = Vec::with_capacity(sorted.len() + 1);
            let mut pairs = Vec::new();
            offsets.push(0);
            for (p, row) in sorted {
                points.push(p);
                pairs.extend(row);
                offsets.push(pairs.len());
            }
            prev = points.clone();
            stages.push(Stage { points, offsets, pairs });
        }
        let output = ModeSet { points: prev };
        Convolver {
            input,
            factors,
            stages,
            output,
        }
    }

    pub fn input(&self) -> &ModeSet {
        &self.input
    }

    /// Every point reachable as an alternating sum of `factors` input points.
    pub fn output(&self) -> &ModeSet {
        &self.output
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    /// Evaluates with factor `j` taken from `slots[j]`, each indexed like
    /// the input support. Result is indexed like [`Convolver::output`].
    pub fn apply_slots(&self, slots: &[&[Complex64]]) -> Vec<Complex64> {
        assert_eq!(slots.len(), self.factors);
        for s in slots {
            assert_eq!(s.len(), self.input.len());
        }
        let mut cur: Vec<Complex64> = slots[0].to_vec();
        for (si, stage) in self.stages.iter().enumerate() {
            let j = si + 2;
            let f = slots[j - 1];
            let conj = j % 2 == 0;
            let row = |o: usize| {
                let mut acc = Complex64::default();
                for &(a, b) in &stage.pairs[stage.offsets[o]..stage.offsets[o + 1]] {
                    let fb = if conj { f[b as usize].conj() } else { f[b as usize] };
                    acc += cur[a as usize] * fb;
                }
                acc
            };
            cur = if stage.pairs.len() >= PARALLEL_PAIRS {
                (0..stage.points.len()).into_par_iter().map(row).collect()
            } else {
                (0..stage.points.len()).map(row).collect()
            };
        }
        cur
    }

    /// All factors equal to `c`.
    pub fn apply(&self, c: &[Complex64]) -> Vec<Complex64> {
        let slots = vec![c; self.factors];
        self.apply_slots(&slots)
    }

    /// `N(a) − N(b)` as `Σ_J N(b, …, b, a − b, a, …, a)` with the
    /// difference in slot `J`; `diff` must equal `a − b` to full accuracy.
    pub fn apply_difference(&self, b: &[Complex64], diff: &[Complex64], a: &[Complex64]) -> Vec<Complex64> {
        let mut total = vec![Complex64::default(); self.output.len()];
        for jj in 0..self.factors {
            let slots: Vec<&[Complex64]> = (0..self.factors)
                .map(|j| match j.cmp(&jj) {
                    std::cmp::Ordering::Less => b,
                    std::cmp::Ordering::Equal => diff,
                    std::cmp::Ordering::Greater => a,
                })
                .collect();
            for (t, v) in total.iter_mut().zip(self.apply_slots(&slots)) {
                *t += v;
            }
        }
        total
    }
}

/// Index map from a source set into a target set (`None` when absent).
pub fn projection(from: &ModeSet, to: &ModeSet) -> Vec<Option<usize>> {
    from.points.iter().map(|p| to.index_of(p)).collect()
}
