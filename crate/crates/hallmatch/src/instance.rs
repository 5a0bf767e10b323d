//! Matching instances and feasibility certificates.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::atoms::{SubsetMask, MAX_SUBSETS};
use crate::error::{Error, Result};
use crate::interval::{IntervalSet, MeasureSpace};
use crate::rational::Rational;

/// An instance of the matching problem: a universe, subsets `A_1..A_n`, and
/// positive demands `m_1..m_n`. A valid instance asks: do there exist
/// pairwise disjoint `B_k ⊆ A_k` with `ν(B_k) = m_k`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    space: MeasureSpace,
    subsets: Vec<IntervalSet>,
    demands: Vec<Rational>,
}

impl Instance {
    pub fn new(
        space: MeasureSpace,
        subsets: Vec<IntervalSet>,
        demands: Vec<Rational>,
    ) -> Result<Self> {
        let n = subsets.len();
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        if n > MAX_SUBSETS {
            return Err(Error::TooManySubsets {
                n,
                cap: MAX_SUBSETS,
            });
        }
        if demands.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                actual: demands.len(),
            });
        }
        for (index, a) in subsets.iter().enumerate() {
            if !a.is_subset_of(space.universe()) {
                return Err(Error::SubsetOutsideUniverse { index });
            }
        }
        for (index, m) in demands.iter().enumerate() {
            if !m.is_positive() {
                return Err(Error::NonpositiveDemand {
                    index,
                    value: m.clone(),
                });
            }
        }
        Ok(Instance {
            space,
            subsets,
            demands,
        })
    }

    /// Preprocessing helper: builds an instance after dropping entries whose
    /// demand is exactly zero (a zero demand is trivially satisfiable by
    /// `B_k = ∅` but rejected by the strict validation above). Negative
    /// demands still error. Returns the kept original indices alongside.
    pub fn dropping_zero_demands(
        space: MeasureSpace,
        subsets: Vec<IntervalSet>,
        demands: Vec<Rational>,
    ) -> Result<(Self, Vec<usize>)> {
        if subsets.len() != demands.len() {
            return Err(Error::ShapeMismatch {
                expected: subsets.len(),
                actual: demands.len(),
            });
        }
        let mut kept = Vec::new();
        let mut s = Vec::new();
        let mut d = Vec::new();
        for (index, (a, m)) in subsets.into_iter().zip(demands).enumerate() {
            if m.is_zero() {
                continue;
            }
            kept.push(index);
            s.push(a);
            d.push(m);
        }
        Ok((Instance::new(space, s, d)?, kept))
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn universe(&self) -> &IntervalSet {
        self.space.universe()
    }

    pub fn subsets(&self) -> &[IntervalSet] {
        &self.subsets
    }

    pub fn demands(&self) -> &[Rational] {
        &self.demands
    }

    pub fn total_demand(&self) -> Rational {
        let mut total = Rational::zero();
        for m in &self.demands {
            total += m;
        }
        total
    }

    /// Sum of demands over the members of `i_set`.
    pub fn demand_sum(&self, i_set: SubsetMask) -> Rational {
        let mut total = Rational::zero();
        for i in i_set.members() {
            total += &self.demands[i];
        }
        total
    }

    /// `∪_{i ∈ I} A_i` by direct set algebra (no atom table).
    pub fn union_of(&self, i_set: SubsetMask) -> IntervalSet {
        IntervalSet::union_all(i_set.members().map(|i| &self.subsets[i]))
    }
}

/// A witnessed violation of the Hall condition: the index set `I` with
/// `ν(∪_{i∈I} A_i) < Σ_{i∈I} m_i`, exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub i_set: SubsetMask,
    pub union_measure: Rational,
    pub demand_sum: Rational,
}

impl Violation {
    pub fn deficit(&self) -> Rational {
        &self.demand_sum - &self.union_measure
    }

    /// Re-evaluates the inequality against the instance using only direct
    /// set algebra. Used to cross-check any certificate that a solver emits.
    pub fn holds_for(&self, inst: &Instance) -> bool {
        let lhs = inst.union_of(self.i_set).measure();
        let rhs = inst.demand_sum(self.i_set);
        lhs == self.union_measure && rhs == self.demand_sum && lhs < rhs
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "set {} has union measure {} < demand sum {}",
            self.i_set, self.union_measure, self.demand_sum
        )
    }
}

/// Outcome of a feasibility check: either the Hall condition holds for every
/// index set, or a concrete violating set is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Feasible,
    Violating(Violation),
}

impl Certificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Certificate::Feasible)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Certificate::Feasible => None,
            Certificate::Violating(v) => Some(v),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Feasible => write!(f, "feasible"),
            Certificate::Violating(v) => write!(f, "infeasible: {v}"),
        }
    }
}
