//! Acceptance suite: seeded, oracle-backed end-to-end checks, one test per
//! criterion, each printing a PASS line with its measured numbers. All
//! comparisons are exact rational equality unless a line says otherwise.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::Signed;

use hallmatch::atoms::SubsetMask;
use hallmatch::emulate::{self, stage_feasibility, stage_gap_bound, xi_threshold};
use hallmatch::generate::{generate, generate_discrete, GenMode};
use hallmatch::instance::Instance;
use hallmatch::rational::{pow2, rational, Rational};
use hallmatch::{
    allocate_exact, discretize, oracle, refine, solve_discrete, solve_scaled, validate,
    AllocationOutcome, DiscreteInstance, DiscreteSolution, IntervalSet, MeasureSpace,
};

fn mode_for(seed: u64) -> GenMode {
    match seed % 3 {
        0 => GenMode::Feasible,
        1 => GenMode::Infeasible,
        _ => GenMode::Boundary,
    }
}

/// Criteria 1–3 share one run over the same 1,000 instances, as the
/// certificate criterion is defined "across criteria 1–2".
#[test]
fn criterion_1_2_3_iff_equivalence_validity_soundness() {
    let start = Instant::now();
    let mut feasible_count = 0usize;
    let mut infeasible_count = 0usize;
    let mut certificates = 0usize;

    for seed in 0..1000u64 {
        let n = 1 + (seed as usize % 8);
        let g = generate(seed, n, mode_for(seed), 64).expect("generate");
        let inst = &g.instance;

        let truth = oracle(inst).expect("oracle within cap");
        let outcome = allocate_exact(inst).expect("allocate runs");

        match (&outcome, truth.is_feasible()) {
            (AllocationOutcome::Allocated(alloc), true) => {
                feasible_count += 1;
                // criterion 2: exact validity, tolerance 0
                let report = validate(inst, alloc);
                assert!(
                    report.pass(),
                    "seed {seed}: allocation failed validation: {:?}",
                    report.failures
                );
            }
            (AllocationOutcome::Infeasible(v), false) => {
                infeasible_count += 1;
                // criterion 3: certificate re-evaluates through set algebra
                let lhs = inst.union_of(v.i_set).measure();
                let rhs = inst.demand_sum(v.i_set);
                assert!(lhs < rhs, "seed {seed}: certificate does not violate");
                assert_eq!(lhs, v.union_measure, "seed {seed}: lhs mismatch");
                assert_eq!(rhs, v.demand_sum, "seed {seed}: rhs mismatch");
                certificates += 1;
            }
            (AllocationOutcome::Allocated(_), false) => {
                panic!("seed {seed}: allocator found a solution the oracle refutes")
            }
            (AllocationOutcome::Infeasible(_), true) => {
                panic!("seed {seed}: allocator refused an instance the oracle accepts")
            }
        }
        // the oracle's own certificate must also re-evaluate
        if let Some(v) = truth.violation() {
            assert!(v.holds_for(inst), "seed {seed}: oracle certificate bad");
            certificates += 1;
        }
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "criterion 1 exceeded 60 s: {elapsed:?}"
    );
    println!(
        "criterion 1 (iff-equivalence, 1000 instances): PASS: {feasible_count} feasible / \
         {infeasible_count} infeasible, zero disagreements, {} ms",
        elapsed.as_millis()
    );
    println!(
        "criterion 2 (construction validity): PASS: {feasible_count} allocations exact \
         (subset, disjoint, measure; tolerance 0)"
    );
    println!(
        "criterion 3 (certificate soundness): PASS: {certificates} certificates re-evaluated \
         through independent set algebra"
    );
}

/// Brute force for the discrete deficiency problem, independent of the flow
/// implementation: try every disjoint choice of d_k-subsets.
fn brute_force_feasible(inst: &DiscreteInstance) -> bool {
    fn choose(inst: &DiscreteInstance, k: usize, used: &mut BTreeSet<usize>) -> bool {
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
        fn rec(
            inst: &DiscreteInstance,
            k: usize,
            used: &mut BTreeSet<usize>,
            avail: &[usize],
            picked: &mut Vec<usize>,
            start: usize,
            want: usize,
        ) -> bool {
            if picked.len() == want {
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
                picked.push(avail[i]);
                if rec(inst, k, used, avail, picked, i + 1, want) {
                    picked.pop();
                    return true;
                }
                picked.pop();
            }
            false
        }
        rec(inst, k, used, &avail, &mut Vec::new(), 0, d)
    }
    choose(inst, 0, &mut BTreeSet::new())
}

#[test]
fn criterion_4_discrete_matchers() {
    let start = Instant::now();
    let mut feasible = 0usize;
    let scales = [rational(1, 3), rational(1, 1), rational(7, 5)];

    for seed in 0..500u64 {
        let inst = generate_discrete(seed, 10, 4);
        let sol = solve_discrete(&inst);
        let truth = brute_force_feasible(&inst);
        assert_eq!(
            sol.is_feasible(),
            truth,
            "seed {seed}: solver disagrees with brute force"
        );
        match &sol {
            DiscreteSolution::Parts(parts) => {
                feasible += 1;
                for (k, part) in parts.iter().enumerate() {
                    assert_eq!(part.len(), inst.demands()[k], "seed {seed}: size");
                    assert!(part.is_subset(&inst.subsets()[k]), "seed {seed}: subset");
                    for other in parts.iter().skip(k + 1) {
                        assert!(part.is_disjoint(other), "seed {seed}: overlap");
                    }
                }
            }
            DiscreteSolution::Violating(mask) => {
                let mut union = BTreeSet::new();
                let mut demanded = 0usize;
                for i in mask.members() {
                    union.extend(inst.subsets()[i].iter().copied());
                    demanded += inst.demands()[i];
                }
                assert!(union.len() < demanded, "seed {seed}: mask not violating");
            }
        }
        for xi in &scales {
            let scaled = solve_scaled(&inst, xi).expect("positive xi");
            assert_eq!(
                scaled.solution.is_feasible(),
                sol.is_feasible(),
                "seed {seed}: verdict changed under xi = {xi}"
            );
        }
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "criterion 4 exceeded 30 s: {elapsed:?}"
    );
    println!(
        "criterion 4 (discrete matchers, 500 instances): PASS: {feasible} feasible, \
         brute-force agreement, xi-invariance over {{1/3, 1, 7/5}}, {} ms",
        elapsed.as_millis()
    );
}

/// Feasible instances only, by construction plus an oracle double-check.
fn feasible_instances(count: usize, max_n: usize, denom_cap: u64) -> Vec<Instance> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let n = 1 + (seed as usize % max_n);
        let g = generate(seed, n, GenMode::Feasible, denom_cap).expect("generate");
        seed += 1;
        out.push(g.instance);
    }
    out
}

#[test]
fn criterion_5_discretization_inequalities() {
    let start = Instant::now();
    let mut masks_checked = 0usize;
    for inst in feasible_instances(200, 5, 16) {
        let xi = xi_threshold(&inst);
        let stage = discretize(&inst, &xi).expect("discretize at threshold");
        assert!(stage.demands_positive(), "d_(k,xi) > 0 at the threshold");
        // per-atom floor remainder: E_(Q,ξ) ⊆ S_Q with ν(S_Q) − ν(E) < ξ
        let table = hallmatch::atomize(inst.subsets()).expect("atomize");
        for (mask, atom) in table.iter() {
            let e_measure = stage
                .e_set(mask)
                .map(|e| {
                    assert!(e.is_subset_of(atom));
                    e.measure()
                })
                .unwrap_or_else(|| rational(0, 1));
            let remainder = atom.measure() - e_measure;
            assert!(!remainder.is_negative() && remainder < xi);
        }
        for mask in SubsetMask::all_nonempty(inst.n()) {
            let (actual, bound) = stage_gap_bound(&inst, &stage, mask).expect("gap bound");
            assert!(
                !actual.is_negative(),
                "loss must be nonnegative at {mask}: {actual}"
            );
            assert!(
                actual < bound,
                "loss {actual} not strictly below bound {bound} at {mask}"
            );
            let (lhs, rhs, _strict) = stage_feasibility(&stage, mask).expect("feasibility");
            assert!(
                lhs >= rhs,
                "stage feasibility fails at {mask}: {lhs} < {rhs}"
            );
            masks_checked += 1;
        }
    }
    println!(
        "criterion 5 (discretization inequalities, 200 feasible instances): PASS: \
         {masks_checked} masks, zero violations, {} ms",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_6_refinement_convergence() {
    let start = Instant::now();
    const STEPS: usize = 10;
    let mut accepted = 0usize;
    let mut seed = 0u64;
    let mut stages_checked = 0usize;

    while accepted < 50 {
        let n = 1 + (seed as usize % 3);
        let g = generate(seed, n, GenMode::Feasible, 8).expect("generate");
        seed += 1;
        let inst = g.instance;
        // keep the final-stage block count at desk scale
        let hull = IntervalSet::union_all(inst.subsets().iter()).measure();
        let min_demand = inst.demands().iter().min().expect("nonempty").clone();
        if hull > &min_demand * rational(8, 1) {
            continue;
        }
        accepted += 1;

        let xi0 = xi_threshold(&inst);
        let run = match refine(&inst, &xi0, STEPS) {
            Ok(run) => run,
            Err(e) => panic!("seed {}: refinement failed: {e}", seed - 1),
        };
        assert_eq!(run.stages().len(), STEPS + 1);

        let factor = Rational::from_integer(pow2(inst.n() + 1) + 1);
        let mut prev: Option<&hallmatch::XiStage> = None;
        for stage in run.stages() {
            let b = stage.solution().expect("solved stage");
            for (k, part) in b.iter().enumerate() {
                // ν(B_(k,ξ_i)) = ξ_i d_(k,ξ_i) exactly
                assert_eq!(part.measure(), stage.target_measure(k));
                // gap bound at every stage
                let gap = &inst.demands()[k] - part.measure();
                assert!(!gap.is_negative());
                assert!(gap <= stage.xi() * &factor);
                // nesting and monotone measures
                if let Some(p) = prev {
                    let prev_part = &p.solution().expect("solved")[k];
                    assert!(prev_part.is_subset_of(part));
                    assert!(prev_part.measure() <= part.measure());
                }
                // validity against the original instance
                assert!(part.is_subset_of(&inst.subsets()[k]));
                for other in b.iter().skip(k + 1) {
                    assert!(part.is_disjoint_from(other));
                }
            }
            prev = Some(stage);
            stages_checked += 1;
        }
        // final gap ≤ ξ_0 · 2^{-10} · (2^{n+1}+1)
        let final_bound = &xi0 * rational(1, 1 << STEPS) * &factor;
        for (k, part) in run.limit_b().iter().enumerate() {
            let gap = &inst.demands()[k] - part.measure();
            assert!(
                gap <= final_bound,
                "final gap {gap} exceeds {final_bound} for demand {k}"
            );
        }
    }

    println!(
        "criterion 6 (refinement convergence, 50 instances x {} stages): PASS: \
         {stages_checked} solved stages, zero nesting-infeasible, {} ms",
        STEPS + 1,
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_7_closed_form_spot_checks() {
    // n=1, A=[0,1), m=1/2, ξ=1/20: d = ⌊m/ξ⌋ − 2^{n+1} = 10 − 4 = 6,
    // ν(B) = 6/20 = 3/10
    let unit = IntervalSet::interval(rational(0, 1), rational(1, 1)).unwrap();
    let inst = Instance::new(
        MeasureSpace::new(unit.clone()).unwrap(),
        vec![unit],
        vec![rational(1, 2)],
    )
    .unwrap();
    let stage = discretize(&inst, &rational(1, 20)).unwrap();
    assert_eq!(stage.demands(), &[6.into()]);
    let solved = emulate::solve_stage(&inst, &stage).unwrap();
    assert_eq!(solved.solution().unwrap()[0].measure(), rational(3, 10));

    // threshold for n=2, m_k=1: m/(2^{n+1}+1) = 1/9
    let two = IntervalSet::interval(rational(0, 1), rational(4, 1)).unwrap();
    let inst2 = Instance::new(
        MeasureSpace::new(two).unwrap(),
        vec![
            IntervalSet::interval(rational(0, 1), rational(2, 1)).unwrap(),
            IntervalSet::interval(rational(2, 1), rational(4, 1)).unwrap(),
        ],
        vec![rational(1, 1), rational(1, 1)],
    )
    .unwrap();
    assert_eq!(xi_threshold(&inst2), rational(1, 9));

    println!(
        "criterion 7 (closed-form spot checks): PASS: d = 6, ν(B) = 3/10 at ξ = 1/20; \
         threshold(n=2, m=1) = 1/9"
    );
}
