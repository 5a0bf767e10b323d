//! Constructing the disjoint subsets: an exact allocation B_k ⊆ A_k with
//! ν(B_k) = m_k, validated by the independent checker.
//!
//! ```bash
//! cargo run --example exact_allocation
//! ```

use hallmatch::rational::rational;
use hallmatch::{
    allocate_exact, validate, AllocationOutcome, Instance, IntervalSet, MeasureSpace,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let universe = IntervalSet::interval(rational(0, 1), rational(4, 1))?;
    let inst = Instance::new(
        MeasureSpace::new(universe)?,
        vec![
            IntervalSet::interval(rational(0, 1), rational(2, 1))?,
            IntervalSet::interval(rational(1, 1), rational(3, 1))?,
            IntervalSet::from_pairs(vec![
                (rational(0, 1), rational(1, 1)),
                (rational(2, 1), rational(4, 1)),
            ])?,
        ],
        vec![rational(1, 2), rational(1, 1), rational(5, 4)],
    )?;

    match allocate_exact(&inst)? {
        AllocationOutcome::Allocated(alloc) => {
            println!("feasible; exact allocation:");
            for (k, part) in alloc.parts().iter().enumerate() {
                println!(
                    "  B{} = {part}  (measure {} = demand {})",
                    k + 1,
                    part.measure(),
                    inst.demands()[k]
                );
            }
            let report = validate(&inst, &alloc);
            println!("independent validation: {}", if report.pass() { "pass" } else { "fail" });
            assert!(report.pass());
        }
        AllocationOutcome::Infeasible(v) => println!("infeasible: {v}"),
    }

    // Squeeze the same sets until the Hall condition snaps.
    let squeezed = Instance::new(
        inst.space().clone(),
        inst.subsets().to_vec(),
        vec![rational(3, 2), rational(3, 2), rational(5, 2)],
    )?;
    match allocate_exact(&squeezed)? {
        AllocationOutcome::Allocated(_) => println!("unexpectedly feasible"),
        AllocationOutcome::Infeasible(v) => {
            println!("\nsqueezed demands: infeasible, witness {}", v.i_set);
            println!("  ν(union) = {}  <  Σ demands = {}", v.union_measure, v.demand_sum);
        }
    }
    Ok(())
}
