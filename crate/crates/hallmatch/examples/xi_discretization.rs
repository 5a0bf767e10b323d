//! One ξ-discretization stage, end to end: the threshold, the E_{Q,ξ}
//! carve, the measure-ξ blocks, the deflated demands, the discretization
//! loss bounds, and a solved stage.
//!
//! ```bash
//! cargo run --example xi_discretization
//! ```

use hallmatch::atoms::SubsetMask;
use hallmatch::emulate::{stage_feasibility, stage_gap_bound};
use hallmatch::rational::rational;
use hallmatch::{
    discretize, solve_stage, xi_threshold, Instance, IntervalSet, MeasureSpace,
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

    let threshold = xi_threshold(&inst);
    println!("positivity threshold: ξ ≤ {threshold}");

    let stage = discretize(&inst, &threshold)?;
    println!("stage at ξ = {}:", stage.xi());
    for (mask, e) in stage.e_table() {
        println!(
            "  E_{mask} = measure {} in {} blocks",
            e.measure(),
            stage.blocks(mask).len()
        );
    }
    for (k, d) in stage.demands().iter().enumerate() {
        println!("  d_{},ξ = ⌊m/ξ⌋ − 2^(n+1) = {d}", k + 1);
    }

    // The two inequality families the stage construction guarantees.
    for mask in SubsetMask::all_nonempty(inst.n()) {
        let (loss, bound) = stage_gap_bound(&inst, &stage, mask)?;
        let (lhs, rhs, strict) = stage_feasibility(&stage, mask)?;
        println!(
            "  Q={mask}: loss {loss} < {bound};  ν(∪A_ξ) = {lhs} ≥ ξΣd = {rhs}{}",
            if strict { " (strict)" } else { "" }
        );
        assert!(loss < bound);
        assert!(lhs >= rhs);
    }

    let solved = solve_stage(&inst, &stage)?;
    println!("solved stage:");
    for (k, b) in solved.solution().unwrap().iter().enumerate() {
        println!(
            "  B_{},ξ measure {} (gap to m: {})",
            k + 1,
            b.measure(),
            &inst.demands()[k] - b.measure()
        );
    }
    Ok(())
}
