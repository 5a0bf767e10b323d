//! Constructive solvers for the discrete Hall generalizations: disjoint
//! subsets with cardinality demands, plain, uniformly weighted, or over
//! equal-measure blocks.
//!
//! The deficiency form is decided by an integral max flow:
//! `source → demand k` (capacity `d_k`), `demand k → element e` (capacity 1
//! when `e ∈ A_k`), `element → sink` (capacity 1). Pinned element and demand
//! order makes the returned solution deterministic.

use std::collections::BTreeSet;

use num_traits::One;

use crate::atoms::SubsetMask;
use crate::error::{Error, Result};
use crate::flow::FlowGraph;
use crate::interval::IntervalSet;
use crate::rational::{integer, Rational};

/// A finite ground set with subsets `A_1..A_n` and demands `d_1..d_n ≥ 1`.
/// Elements are indices into `ground`; the names only matter for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteInstance {
    ground: Vec<String>,
    subsets: Vec<BTreeSet<usize>>,
    demands: Vec<usize>,
}

impl DiscreteInstance {
    pub fn new(
        ground: Vec<String>,
        subsets: Vec<BTreeSet<usize>>,
        demands: Vec<usize>,
    ) -> Result<Self> {
        let n = subsets.len();
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        if demands.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                actual: demands.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for name in &ground {
            if !seen.insert(name) {
                return Err(Error::DuplicateElement { name: name.clone() });
            }
        }
        for (subset, s) in subsets.iter().enumerate() {
            for &element in s {
                if element >= ground.len() {
                    return Err(Error::ElementOutOfRange { subset, element });
                }
            }
        }
        for (index, &d) in demands.iter().enumerate() {
            if d == 0 {
                return Err(Error::ZeroDemand { index });
            }
        }
        Ok(DiscreteInstance {
            ground,
            subsets,
            demands,
        })
    }

    /// Instance over anonymous elements `0..ground_size`.
    pub fn from_indices(
        ground_size: usize,
        subsets: Vec<BTreeSet<usize>>,
        demands: Vec<usize>,
    ) -> Result<Self> {
        let ground = (0..ground_size).map(|i| format!("e{i}")).collect();
        Self::new(ground, subsets, demands)
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn subsets(&self) -> &[BTreeSet<usize>] {
        &self.subsets
    }

    pub fn demands(&self) -> &[usize] {
        &self.demands
    }

    pub fn total_demand(&self) -> usize {
        self.demands.iter().sum()
    }
}

/// Either disjoint `D_k ⊆ A_k` with `|D_k| = d_k`, or an index set violating
/// `|∪_{i∈I} A_i| ≥ Σ_{i∈I} d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscreteSolution {
    Parts(Vec<BTreeSet<usize>>),
    Violating(SubsetMask),
}

impl DiscreteSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, DiscreteSolution::Parts(_))
    }

    pub fn parts(&self) -> Option<&[BTreeSet<usize>]> {
        match self {
            DiscreteSolution::Parts(p) => Some(p),
            DiscreteSolution::Violating(_) => None,
        }
    }

    pub fn violating(&self) -> Option<SubsetMask> {
        match self {
            DiscreteSolution::Parts(_) => None,
            DiscreteSolution::Violating(m) => Some(*m),
        }
    }
}

/// Solves the deficiency matching by integral max flow. The capacities are
/// integers, every augmenting bottleneck is an integer, so the final flow is
/// 0/1 on assignment edges and the parts can be read off directly.
pub fn solve_discrete(inst: &DiscreteInstance) -> DiscreteSolution {
    let n = inst.n();
    let g = inst.ground.len();
    // nodes: source, demands 1..=n, elements n+1..=n+g, sink
    let source = 0;
    let sink = 1 + n + g;
    let mut graph = FlowGraph::new(sink + 1);
    for (k, &d) in inst.demands.iter().enumerate() {
        graph.add_edge(source, 1 + k, integer(d as i64));
    }
    let mut assign: Vec<(usize, usize, usize)> = Vec::new();
    for (k, subset) in inst.subsets.iter().enumerate() {
        for &e in subset {
            let handle = graph.add_edge(1 + k, 1 + n + e, integer(1));
            assign.push((k, e, handle));
        }
    }
    for e in 0..g {
        graph.add_edge(1 + n + e, sink, integer(1));
    }

    let value = graph.max_flow(source, sink);
    if value == integer(inst.total_demand() as i64) {
        let mut parts = vec![BTreeSet::new(); n];
        for (k, e, handle) in assign {
            if graph.flow(handle).is_one() {
                parts[k].insert(e);
            }
        }
        DiscreteSolution::Parts(parts)
    } else {
        // Demand nodes reachable in the residual graph violate the
        // deficiency condition (some source edge is unsaturated, so the
        // set is nonempty).
        let side = graph.source_side(source);
        let mut bits = 0u32;
        for k in 0..n {
            if side[1 + k] {
                bits |= 1 << k;
            }
        }
        DiscreteSolution::Violating(SubsetMask::new(bits, n).expect("nonempty cut mask"))
    }
}

/// [`solve_discrete`] under the uniform weight `η(X) = ξ|X|`. Scaling every
/// side of the condition by the same positive `ξ` changes no comparison, so
/// the combinatorial answer is identical; the report carries the η-measures
/// `ξ·d_k` alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSolution {
    pub xi: Rational,
    pub solution: DiscreteSolution,
    /// `η(D_k) = ξ·|D_k|` per demand, present when solved.
    pub eta: Option<Vec<Rational>>,
}

pub fn solve_scaled(inst: &DiscreteInstance, xi: &Rational) -> Result<ScaledSolution> {
    use num_traits::Signed;
    if !xi.is_positive() {
        return Err(Error::NonpositiveScale { value: xi.clone() });
    }
    let solution = solve_discrete(inst);
    let eta = solution.parts().map(|parts| {
        parts
            .iter()
            .map(|d| xi * integer(d.len() as i64))
            .collect()
    });
    Ok(ScaledSolution {
        xi: xi.clone(),
        solution,
        eta,
    })
}

/// Matching over equal-measure blocks: `blocks` are pairwise disjoint
/// interval sets of one common measure `ξ`, `collections[k]` lists the block
/// indices demand `k` may use, and a solution picks `d_k` blocks per demand,
/// all distinct, so `ν(∪ chosen) = ξ·d_k` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSolution {
    Chosen {
        /// Common block measure ξ.
        xi: Rational,
        /// Chosen block indices per demand, ascending.
        parts: Vec<Vec<usize>>,
    },
    Violating(SubsetMask),
}

impl BlockSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BlockSolution::Chosen { .. })
    }

    pub fn chosen(&self) -> Option<&[Vec<usize>]> {
        match self {
            BlockSolution::Chosen { parts, .. } => Some(parts),
            BlockSolution::Violating(_) => None,
        }
    }

    pub fn violating(&self) -> Option<SubsetMask> {
        match self {
            BlockSolution::Chosen { .. } => None,
            BlockSolution::Violating(m) => Some(*m),
        }
    }
}

pub fn solve_blocks(
    blocks: &[IntervalSet],
    collections: &[Vec<usize>],
    demands: &[usize],
) -> Result<BlockSolution> {
    // All blocks must share one measure.
    let xi = match blocks.first() {
        Some(b) => b.measure(),
        None => Rational::from_integer(0.into()),
    };
    for (index, b) in blocks.iter().enumerate() {
        let actual = b.measure();
        if actual != xi {
            return Err(Error::BlockMeasureMismatch {
                index,
                expected: xi,
                actual,
            });
        }
    }
    // Pairwise disjoint, checked by one sweep over all parts.
    let mut boundaries: Vec<(&Rational, &Rational, usize)> = Vec::new();
    for (idx, b) in blocks.iter().enumerate() {
        for part in b.parts() {
            boundaries.push((part.lo(), part.hi(), idx));
        }
    }
    boundaries.sort_by(|a, b| a.0.cmp(b.0));
    for w in boundaries.windows(2) {
        let (_, hi, first) = w[0];
        let (lo, _, second) = w[1];
        if first != second && lo < hi {
            return Err(Error::BlockOverlap { first, second });
        }
    }

    let subsets: Vec<BTreeSet<usize>> = collections
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let inst = DiscreteInstance::from_indices(blocks.len(), subsets, demands.to_vec())?;
    Ok(match solve_discrete(&inst) {
        DiscreteSolution::Parts(parts) => BlockSolution::Chosen {
            xi,
            parts: parts
                .into_iter()
                .map(|set| set.into_iter().collect())
                .collect(),
        },
        DiscreteSolution::Violating(mask) => BlockSolution::Violating(mask),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::testutil::iset;
    use crate::rational::rational;
    use proptest::prelude::*;

    fn set(elements: &[usize]) -> BTreeSet<usize> {
        elements.iter().copied().collect()
    }

    fn named(n_ground: usize, subsets: Vec<BTreeSet<usize>>, demands: Vec<usize>) -> DiscreteInstance {
        DiscreteInstance::from_indices(n_ground, subsets, demands).unwrap()
    }

    #[test]
    fn forced_unique_solution() {
        // A1={0,1}, A2={1,2}, d=(1,2): D2 must take {1,2}, D1 must take {0}
        let inst = named(3, vec![set(&[0, 1]), set(&[1, 2])], vec![1, 2]);
        match solve_discrete(&inst) {
            DiscreteSolution::Parts(parts) => {
                assert_eq!(parts[0], set(&[0]));
                assert_eq!(parts[1], set(&[1, 2]));
            }
            DiscreteSolution::Violating(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn one_element_two_demands() {
        let inst = named(1, vec![set(&[0]), set(&[0])], vec![1, 1]);
        assert_eq!(
            solve_discrete(&inst).violating(),
            Some(SubsetMask::full(2).unwrap())
        );
    }

    #[test]
    fn forced_singleton() {
        let inst = named(1, vec![set(&[0])], vec![1]);
        assert_eq!(solve_discrete(&inst).parts().unwrap()[0], set(&[0]));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            DiscreteInstance::from_indices(2, vec![set(&[3])], vec![1]),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            DiscreteInstance::from_indices(2, vec![set(&[0])], vec![0]),
            Err(Error::ZeroDemand { .. })
        ));
        assert!(matches!(
            DiscreteInstance::new(vec!["a".into(), "a".into()], vec![set(&[0])], vec![1]),
            Err(Error::DuplicateElement { .. })
        ));
    }

    #[test]
    fn scaled_matches_plain_at_any_xi() {
        let inst = named(3, vec![set(&[0, 1]), set(&[1, 2])], vec![1, 2]);
        let plain = solve_discrete(&inst);
        let one = solve_scaled(&inst, &rational(1, 1)).unwrap();
        assert_eq!(one.solution, plain);
        assert_eq!(one.eta.unwrap(), vec![rational(1, 1), rational(2, 1)]);

        let infeasible = named(1, vec![set(&[0]), set(&[0])], vec![1, 1]);
        let quarter = solve_scaled(&infeasible, &rational(1, 4)).unwrap();
        assert_eq!(quarter.solution.violating(), Some(SubsetMask::full(2).unwrap()));
        assert!(quarter.eta.is_none());
    }

    #[test]
    fn scaled_rejects_nonpositive_xi() {
        let inst = named(1, vec![set(&[0])], vec![1]);
        assert!(matches!(
            solve_scaled(&inst, &rational(0, 1)),
            Err(Error::NonpositiveScale { .. })
        ));
        assert!(matches!(
            solve_scaled(&inst, &rational(-1, 2)),
            Err(Error::NonpositiveScale { .. })
        ));
    }

    #[test]
    fn blocks_example() {
        // blocks [0,1/4), [1/4,1/2), [1/2,3/4); α1={0,1}, α2={1,2}; d=(1,2)
        let blocks = vec![iset(&[(0, 1)], 4), iset(&[(1, 2)], 4), iset(&[(2, 3)], 4)];
        let sol = solve_blocks(&blocks, &[vec![0, 1], vec![1, 2]], &[1, 2]).unwrap();
        match sol {
            BlockSolution::Chosen { xi, parts } => {
                assert_eq!(xi, rational(1, 4));
                assert_eq!(parts[0], vec![0]);
                assert_eq!(parts[1], vec![1, 2]);
                // ν-values ξ·d: 1/4 and 1/2
                assert_eq!(&xi * crate::rational::integer(parts[1].len() as i64), rational(1, 2));
            }
            BlockSolution::Violating(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn blocks_one_block_two_demands() {
        let blocks = vec![iset(&[(0, 1)], 4)];
        let sol = solve_blocks(&blocks, &[vec![0], vec![0]], &[1, 1]).unwrap();
        assert_eq!(sol.violating(), Some(SubsetMask::full(2).unwrap()));
    }

    #[test]
    fn blocks_saturation_returns_whole_collections() {
        let blocks = vec![iset(&[(0, 1)], 4), iset(&[(1, 2)], 4), iset(&[(2, 3)], 4)];
        let sol = solve_blocks(&blocks, &[vec![0, 1], vec![2]], &[2, 1]).unwrap();
        let parts = sol.chosen().unwrap();
        assert_eq!(parts[0], vec![0, 1]);
        assert_eq!(parts[1], vec![2]);
    }

    #[test]
    fn blocks_validation() {
        let uneven = vec![iset(&[(0, 1)], 4), iset(&[(1, 3)], 4)];
        assert!(matches!(
            solve_blocks(&uneven, &[vec![0, 1]], &[1]),
            Err(Error::BlockMeasureMismatch { .. })
        ));
        let overlapping = vec![iset(&[(0, 2)], 4), iset(&[(1, 3)], 4)];
        assert!(matches!(
            solve_blocks(&overlapping, &[vec![0, 1]], &[1]),
            Err(Error::BlockOverlap { .. })
        ));
    }

    /// Brute force: try every way of giving each demand a d_k-subset of its
    /// collection, disjointly. Independent of the flow path.
    pub(crate) fn brute_force_feasible(inst: &DiscreteInstance) -> bool {
        fn choose(
            inst: &DiscreteInstance,
            k: usize,
            used: &mut BTreeSet<usize>,
        ) -> bool {
            if k == inst.n() {
                return true;
            }
            let avail: Vec<usize> = inst.subsets()[k]
                .iter()
                .copied()
                .filter(|e| !used.contains(e))
                .collect();
            let d = inst.demands()[k];
            if avail.len() < d {
                return false;
            }
            let mut picked = vec![0usize; d];
            fn rec(
                inst: &DiscreteInstance,
                k: usize,
                used: &mut BTreeSet<usize>,
                avail: &[usize],
                picked: &mut [usize],
                depth: usize,
                start: usize,
            ) -> bool {
                if depth == picked.len() {
                    for &e in picked.iter() {
                        used.insert(e);
                    }
                    let ok = choose(inst, k + 1, used);
                    for &e in picked.iter() {
                        used.remove(&e);
                    }
                    return ok;
                }
                for i in start..avail.len() {
                    picked[depth] = avail[i];
                    if rec(inst, k, used, avail, picked, depth + 1, i + 1) {
                        return true;
                    }
                }
                false
            }
            rec(inst, k, used, &avail, &mut picked, 0, 0)
        }
        choose(inst, 0, &mut BTreeSet::new())
    }

    fn check_parts(inst: &DiscreteInstance, parts: &[BTreeSet<usize>]) {
        for (k, part) in parts.iter().enumerate() {
            assert_eq!(part.len(), inst.demands()[k]);
            assert!(part.is_subset(&inst.subsets()[k]));
            for other in parts.iter().skip(k + 1) {
                assert!(part.is_disjoint(other));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        // Verdict and validity against full brute-force enumeration.
        #[test]
        fn matches_brute_force(
            g in 1usize..8,
            picks in proptest::collection::vec(proptest::collection::vec(proptest::bool::ANY, 8), 1..4),
            ds in proptest::collection::vec(1usize..3, 1..4),
        ) {
            let n = picks.len().min(ds.len());
            let subsets: Vec<BTreeSet<usize>> = picks[..n]
                .iter()
                .map(|row| (0..g).filter(|&e| row[e]).collect())
                .collect();
            let inst = named(g, subsets, ds[..n].to_vec());
            let sol = solve_discrete(&inst);
            prop_assert_eq!(sol.is_feasible(), brute_force_feasible(&inst));
            match sol {
                DiscreteSolution::Parts(parts) => check_parts(&inst, &parts),
                DiscreteSolution::Violating(mask) => {
                    // the mask violates the counting inequality when re-checked
                    let mut union = BTreeSet::new();
                    let mut demanded = 0usize;
                    for i in mask.members() {
                        union.extend(inst.subsets()[i].iter().copied());
                        demanded += inst.demands()[i];
                    }
                    prop_assert!(union.len() < demanded);
                }
            }
        }

        // The scaled verdict never depends on ξ.
        #[test]
        fn scale_invariance(
            g in 1usize..8,
            picks in proptest::collection::vec(proptest::collection::vec(proptest::bool::ANY, 8), 1..4),
            ds in proptest::collection::vec(1usize..3, 1..4),
        ) {
            let n = picks.len().min(ds.len());
            let subsets: Vec<BTreeSet<usize>> = picks[..n]
                .iter()
                .map(|row| (0..g).filter(|&e| row[e]).collect())
                .collect();
            let inst = named(g, subsets, ds[..n].to_vec());
            let base = solve_discrete(&inst).is_feasible();
            for xi in [rational(1, 3), rational(2, 1), rational(7, 5)] {
                let scaled = solve_scaled(&inst, &xi).unwrap();
                prop_assert_eq!(scaled.solution.is_feasible(), base);
            }
        }
    }
}
