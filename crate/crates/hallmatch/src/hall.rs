//! Feasibility checks with executable certificates.
//!
//! Two independent routes decide the Hall condition
//! `ν(∪_{i∈I} A_i) ≥ Σ_{i∈I} m_i for all I`:
//!
//! * [`check_exhaustive`] walks every nonempty `I` over the atom table;
//! * [`check_flow`] solves the atom–demand max flow and reads a violating
//!   set off the min cut when the flow comes up short.
//!
//! Both return the same verdict; the exhaustive route additionally pins
//! *which* violating set is reported (maximal deficit, then smallest mask).

use crate::allocate::{cut_violation, solve_atom_network};
use crate::atoms::{atomize, SubsetMask};
use crate::error::{Error, Result};
use crate::instance::{Certificate, Instance, Violation};
use crate::rational::Rational;

/// Cap for the `2^n` enumeration paths (exhaustive checker and the harness
/// oracle). The flow route has no such cap below [`crate::atoms::MAX_SUBSETS`].
pub const EXHAUSTIVE_CAP: usize = 8;

/// Checks the Hall condition for every nonempty `I ⊆ [n]` over the atom
/// table. Infeasible verdicts report the violating set with the largest
/// deficit `Σ m_i − ν(∪ A_i)`, ties broken by the numerically smallest mask.
pub fn check_exhaustive(inst: &Instance) -> Result<Certificate> {
    let n = inst.n();
    if n > EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveScale {
            n,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let table = atomize(inst.subsets())?;
    let atom_measures: Vec<(u32, Rational)> = table
        .iter()
        .map(|(mask, atom)| (mask.bits(), atom.measure()))
        .collect();

    let mut worst: Option<Violation> = None;
    for i_set in SubsetMask::all_nonempty(n) {
        let mut union_measure = Rational::from_integer(0.into());
        for (bits, measure) in &atom_measures {
            if bits & i_set.bits() != 0 {
                union_measure += measure;
            }
        }
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

/// Decides feasibility through the atom–demand max flow: the instance is
/// feasible iff the flow value reaches `Σ m_k`. On a short flow the demand
/// nodes on the source side of the min cut form a violating set (the cut
/// value identity gives `Σ_{k∉I} m_k + ν(∪_{i∈I} A_i) < Σ m_k`).
pub fn check_flow(inst: &Instance) -> Result<Certificate> {
    let outcome = solve_atom_network(inst)?;
    if *outcome.value() == inst.total_demand() {
        Ok(Certificate::Feasible)
    } else {
        Ok(Certificate::Violating(cut_violation(inst, &outcome)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::testutil::iset;
    use crate::interval::{IntervalSet, MeasureSpace};
    use crate::rational::{integer, rational, Rational};
    use proptest::prelude::*;

    fn inst(sets: Vec<IntervalSet>, demands: Vec<Rational>) -> Instance {
        let hull = IntervalSet::union_all(sets.iter());
        Instance::new(MeasureSpace::new(hull).unwrap(), sets, demands).unwrap()
    }

    #[test]
    fn feasible_pair() {
        let i = inst(
            vec![iset(&[(0, 2)], 1), iset(&[(1, 3)], 1)],
            vec![rational(3, 2), rational(3, 2)],
        );
        assert!(check_exhaustive(&i).unwrap().is_feasible());
        assert!(check_flow(&i).unwrap().is_feasible());
    }

    #[test]
    fn infeasible_pair_reports_joint_set() {
        let i = inst(
            vec![iset(&[(0, 1)], 1), iset(&[(0, 1)], 1)],
            vec![rational(3, 5), rational(3, 5)],
        );
        for cert in [check_exhaustive(&i).unwrap(), check_flow(&i).unwrap()] {
            let v = cert.violation().expect("violating");
            assert_eq!(v.i_set, SubsetMask::full(2).unwrap());
            assert_eq!(v.union_measure, integer(1));
            assert_eq!(v.demand_sum, rational(6, 5));
            assert!(v.holds_for(&i));
        }
    }

    #[test]
    fn equality_counts_as_feasible() {
        // n=1, A1=[0,1), m=1: the boundary case of ≥
        let i = inst(vec![iset(&[(0, 1)], 1)], vec![integer(1)]);
        assert!(check_exhaustive(&i).unwrap().is_feasible());
        assert!(check_flow(&i).unwrap().is_feasible());
    }

    #[test]
    fn exhaustive_cap_enforced() {
        let sets: Vec<IntervalSet> = (0..9).map(|k| iset(&[(k, k + 1)], 1)).collect();
        let demands = vec![rational(1, 2); 9];
        let i = inst(sets, demands);
        assert!(matches!(
            check_exhaustive(&i),
            Err(Error::ExhaustiveScale { .. })
        ));
        // the flow route still works above the exhaustive cap
        assert!(check_flow(&i).unwrap().is_feasible());
    }

    prop_compose! {
        fn arb_instance(max_n: usize)
            (n in 1..=max_n)
            (sets in proptest::collection::vec(
                proptest::collection::vec((0i64..12, 1i64..5), 1..4), n..=n),
             demands in proptest::collection::vec((1i64..10, 1i64..7), n..=n))
            -> Instance
        {
            let subsets: Vec<IntervalSet> = sets
                .into_iter()
                .map(|pairs| {
                    IntervalSet::from_pairs(
                        pairs
                            .into_iter()
                            .map(|(lo, len)| (rational(lo, 4), rational(lo + len, 4)))
                            .collect(),
                    )
                    .unwrap()
                })
                .collect();
            let demands = demands.into_iter().map(|(a, b)| rational(a, b)).collect();
            inst(subsets, demands)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        // The two routes agree on every instance.
        #[test]
        fn flow_agrees_with_exhaustive(i in arb_instance(5)) {
            let a = check_exhaustive(&i).unwrap();
            let b = check_flow(&i).unwrap();
            prop_assert_eq!(a.is_feasible(), b.is_feasible());
            if let Some(v) = b.violation() {
                prop_assert!(v.holds_for(&i));
            }
            if let Some(v) = a.violation() {
                prop_assert!(v.holds_for(&i));
            }
        }

        // Decreasing any demand of a feasible instance keeps it feasible.
        #[test]
        fn monotone_in_demands(i in arb_instance(4), k in 0usize..4, num in 1i64..8) {
            prop_assume!(check_exhaustive(&i).unwrap().is_feasible());
            let k = k % i.n();
            let mut demands = i.demands().to_vec();
            demands[k] = &demands[k] * rational(num, 8);
            let smaller = inst(i.subsets().to_vec(), demands);
            prop_assert!(check_exhaustive(&smaller).unwrap().is_feasible());
        }

        // Scaling endpoints and demands together preserves verdict and mask.
        #[test]
        fn scaling_covariance(i in arb_instance(4), num in 1i64..6, den in 1i64..6) {
            let factor = rational(num, den);
            let scaled_sets: Vec<IntervalSet> =
                i.subsets().iter().map(|s| s.scale(&factor).unwrap()).collect();
            let scaled_demands: Vec<Rational> =
                i.demands().iter().map(|m| m * &factor).collect();
            let scaled = inst(scaled_sets, scaled_demands);
            let before = check_exhaustive(&i).unwrap();
            let after = check_exhaustive(&scaled).unwrap();
            prop_assert_eq!(before.is_feasible(), after.is_feasible());
            if let (Some(v0), Some(v1)) = (before.violation(), after.violation()) {
                prop_assert_eq!(v0.i_set, v1.i_set);
                prop_assert_eq!(&v0.union_measure * &factor, v1.union_measure.clone());
            }
        }
    }
}
