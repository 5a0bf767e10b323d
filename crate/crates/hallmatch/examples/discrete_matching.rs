//! Discrete matching: disjoint subsets with cardinality demands, solved
//! plain, under a uniform weight, and over equal-measure blocks.
//!
//! ```bash
//! cargo run --example discrete_matching
//! ```

use hallmatch::rational::rational;
use hallmatch::{
    solve_blocks, solve_discrete, solve_scaled, DiscreteInstance, DiscreteSolution, IntervalSet,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Ground {x, y, z}; A1 = {x, y}, A2 = {y, z}; demands (1, 2).
    let inst = DiscreteInstance::new(
        vec!["x".into(), "y".into(), "z".into()],
        vec![[0, 1].into(), [1, 2].into()],
        vec![1, 2],
    )?;
    match solve_discrete(&inst) {
        DiscreteSolution::Parts(parts) => {
            for (k, part) in parts.iter().enumerate() {
                let names: Vec<&str> = part.iter().map(|&e| inst.ground()[e].as_str()).collect();
                println!("D{} = {{{}}}", k + 1, names.join(", "));
            }
        }
        DiscreteSolution::Violating(mask) => println!("violating set {mask}"),
    }

    // The same instance under a uniform weight ξ: identical combinatorics,
    // the report just carries η(D_k) = ξ·d_k.
    let scaled = solve_scaled(&inst, &rational(1, 4))?;
    if let Some(eta) = &scaled.eta {
        for (k, value) in eta.iter().enumerate() {
            println!("η(D{}) = {value}", k + 1);
        }
    }

    // Equal-measure blocks: three quarters of [0, 3/4), collections over
    // block indices, the chosen unions have measure ξ·d_k exactly.
    let blocks = vec![
        IntervalSet::interval(rational(0, 1), rational(1, 4))?,
        IntervalSet::interval(rational(1, 4), rational(1, 2))?,
        IntervalSet::interval(rational(1, 2), rational(3, 4))?,
    ];
    let solution = solve_blocks(&blocks, &[vec![0, 1], vec![1, 2]], &[1, 2])?;
    if let hallmatch::discrete::BlockSolution::Chosen { xi, parts } = &solution {
        println!("\nblock matching at ξ = {xi}:");
        for (k, chosen) in parts.iter().enumerate() {
            let region = IntervalSet::union_all(chosen.iter().map(|&i| &blocks[i]));
            println!(
                "  D{} = blocks {chosen:?} = {region}  (measure {})",
                k + 1,
                region.measure()
            );
        }
    }

    // An overfull instance returns the violating index set instead.
    let tight = DiscreteInstance::new(
        vec!["only".into()],
        vec![[0].into(), [0].into()],
        vec![1, 1],
    )?;
    if let DiscreteSolution::Violating(mask) = solve_discrete(&tight) {
        println!("\none element, two demands: violating set {mask}");
    }
    Ok(())
}
