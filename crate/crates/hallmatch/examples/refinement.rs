//! The nested refinement ξ, ξ/2, ξ/4, …: stage measures climb to the
//! demands geometrically while the chosen regions only ever grow, and the
//! finite limit is compared against the exact allocation.
//!
//! ```bash
//! cargo run --example refinement
//! ```

use hallmatch::rational::rational;
use hallmatch::{
    allocate_exact, compare_limit, refine, xi_threshold, Instance, IntervalSet, MeasureSpace,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let universe = IntervalSet::interval(rational(0, 1), rational(3, 1))?;
    let inst = Instance::new(
        MeasureSpace::new(universe)?,
        vec![
            IntervalSet::interval(rational(0, 1), rational(2, 1))?,
            IntervalSet::interval(rational(1, 1), rational(3, 1))?,
        ],
        vec![rational(3, 4), rational(9, 8)],
    )?;

    let xi0 = xi_threshold(&inst);
    let steps = 8;
    let run = refine(&inst, &xi0, steps)?;

    println!("refinement from ξ0 = {xi0}, {} stages:", steps + 1);
    for (i, stage) in run.stages().iter().enumerate() {
        let measures: Vec<String> = stage
            .solution()
            .unwrap()
            .iter()
            .map(|b| b.measure().to_string())
            .collect();
        println!("  stage {i:2}  ξ = {:>12}  ν(B) = [{}]", stage.xi().to_string(), measures.join(", "));
    }

    // Nesting: each stage's regions contain the previous stage's.
    for pair in run.stages().windows(2) {
        let (prev, next) = (pair[0].solution().unwrap(), pair[1].solution().unwrap());
        for (p, n) in prev.iter().zip(next) {
            assert!(p.is_subset_of(n));
        }
    }
    println!("nesting verified: B_(k,ξ_i) ⊆ B_(k,ξ_(i+1)) at every step");

    let exact = allocate_exact(&inst)?;
    let report = compare_limit(&inst, &run, exact.allocation().expect("feasible"))?;
    println!("\nfinite-stage limit vs exact allocation (gap bound {}):", report.gap_bound);
    for (k, entry) in report.per_demand.iter().enumerate() {
        println!(
            "  k={}: emulator gap {} (exact gap {}), within bound: {}",
            k + 1,
            entry.emulator_gap,
            entry.exact_gap,
            entry.within_bound
        );
    }
    assert!(report.all_ok());
    Ok(())
}
