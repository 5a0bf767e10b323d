//! Seeded instance generation cross-checked against the independent oracle,
//! plus the text round trip the CLI uses.
//!
//! ```bash
//! cargo run --example generate_and_check
//! ```

use hallmatch::generate::{generate, GenMode};
use hallmatch::textio::{parse_instance, print_instance, InstanceFile};
use hallmatch::{allocate_exact, oracle, AllocationOutcome};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (seed, mode) in [
        (11, GenMode::Feasible),
        (12, GenMode::Infeasible),
        (13, GenMode::Boundary),
    ] {
        let g = generate(seed, 3, mode, 16)?;
        let verdict = oracle(&g.instance)?;
        println!("seed {seed} {mode:?}: oracle says {verdict}");
        if let Some(mask) = g.planted {
            let lhs = g.instance.union_of(mask).measure();
            let rhs = g.instance.demand_sum(mask);
            println!("  planted set {mask}: ν(union) = {lhs}, Σ demands = {rhs}");
        }
        // Generator promise: the solver and the oracle agree.
        let solved = allocate_exact(&g.instance)?;
        assert_eq!(
            matches!(solved, AllocationOutcome::Allocated(_)),
            verdict.is_feasible()
        );
    }

    // The text format round-trips losslessly after normalization.
    let g = generate(11, 3, GenMode::Feasible, 16)?;
    let file = InstanceFile::with_default_names(g.instance.clone());
    let text = print_instance(&file);
    println!("\ninstance file for seed 11:\n{text}");
    let back = parse_instance(&text)?;
    assert_eq!(back.instance, g.instance);
    assert_eq!(print_instance(&back), text);
    println!("parse(print(instance)) round trip: exact");
    Ok(())
}
