//! Independent ground truth: an exhaustive checker and an allocation
//! validator built from nothing but the interval-set algebra. These share no
//! code with the atom table or the flow network; that redundancy is the
//! point, since every solver verdict can be replayed through this module.

use num_traits::Zero;

use crate::allocate::Allocation;
use crate::atoms::SubsetMask;
use crate::error::{Error, Result};
use crate::hall::EXHAUSTIVE_CAP;
use crate::instance::{Certificate, Instance, Violation};
use crate::interval::IntervalSet;
use crate::rational::Rational;

/// Checks the Hall condition over every nonempty index set using direct
/// set-algebra unions only. Reports the violating set with the largest
/// deficit, ties to the smallest mask, matching [`crate::hall::check_exhaustive`].
pub fn oracle(inst: &Instance) -> Result<Certificate> {
    let n = inst.n();
    if n > EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveScale {
            n,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let mut worst: Option<Violation> = None;
    for i_set in SubsetMask::all_nonempty(n) {
        let union_measure = inst.union_of(i_set).measure();
        let demand_sum = inst.demand_sum(i_set);
        if union_measure < demand_sum {
            let deficit = &demand_sum - &union_measure;
            let replace = match &worst {
                None => true,
                Some(w) => deficit > w.deficit(),
            };
            if replace {
                worst = Some(Violation {
                    i_set,
                    union_measure,
                    demand_sum,
                });
            }
        }
    }
    Ok(match worst {
        None => Certificate::Feasible,
        Some(v) => Certificate::Violating(v),
    })
}

/// Result of replaying an allocation against its instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `B_k ⊆ A_k`, pairwise disjointness, and `ν(B_k) = m_k` with exact
/// equality. Failures are report content, not errors.
pub fn validate(inst: &Instance, alloc: &Allocation) -> ValidationReport {
    let mut failures = Vec::new();
    if alloc.len() != inst.n() {
        failures.push(format!(
            "allocation has {} parts, instance has {}",
            alloc.len(),
            inst.n()
        ));
        return ValidationReport { failures };
    }
    for k in 0..inst.n() {
        let b = alloc.part(k);
        if !b.is_subset_of(&inst.subsets()[k]) {
            failures.push(format!("part {} is not contained in its subset", k + 1));
        }
        let measure = b.measure();
        if measure != inst.demands()[k] {
            failures.push(format!(
                "part {} has measure {measure}, demand is {}",
                k + 1,
                inst.demands()[k]
            ));
        }
        for j in k + 1..inst.n() {
            let overlap = b.intersect(alloc.part(j)).measure();
            if !overlap.is_zero() {
                failures.push(format!(
                    "parts {} and {} overlap with measure {overlap}",
                    k + 1,
                    j + 1
                ));
            }
        }
    }
    ValidationReport { failures }
}

/// Convenience used by tests and the CLI: the measure of `∪_{i∈I} A_i`
/// recomputed from scratch.
pub fn direct_union_measure(inst: &Instance, i_set: SubsetMask) -> Rational {
    IntervalSet::union_all(i_set.members().map(|i| &inst.subsets()[i])).measure()
}
