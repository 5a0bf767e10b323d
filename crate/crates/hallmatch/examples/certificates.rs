//! Feasibility certificates: the Hall condition decided by two independent
//! routes (exhaustive enumeration and max-flow/min-cut), with an executable
//! witness either way.
//!
//! ```bash
//! cargo run --example certificates
//! ```

use hallmatch::rational::rational;
use hallmatch::{check_exhaustive, check_flow, Instance, IntervalSet, MeasureSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let universe = IntervalSet::interval(rational(0, 1), rational(3, 1))?;
    let space = MeasureSpace::new(universe)?;

    // Feasible: A1=[0,2), A2=[1,3), demands 3/2 each. The joint constraint
    // sits at exact equality ν(A1∪A2) = 3 = m1 + m2.
    let feasible = Instance::new(
        space.clone(),
        vec![
            IntervalSet::interval(rational(0, 1), rational(2, 1))?,
            IntervalSet::interval(rational(1, 1), rational(3, 1))?,
        ],
        vec![rational(3, 2), rational(3, 2)],
    )?;
    println!("instance 1: {}", check_exhaustive(&feasible)?);
    println!("  via flow: {}", check_flow(&feasible)?);

    // Infeasible: two demands of 3/5 over the same unit interval.
    let unit = IntervalSet::interval(rational(0, 1), rational(1, 1))?;
    let infeasible = Instance::new(
        MeasureSpace::new(unit.clone())?,
        vec![unit.clone(), unit],
        vec![rational(3, 5), rational(3, 5)],
    )?;
    let cert = check_exhaustive(&infeasible)?;
    println!("instance 2: {cert}");
    let violation = cert.violation().expect("infeasible");
    // The certificate replays against the instance through plain set algebra.
    assert!(violation.holds_for(&infeasible));
    println!(
        "  witness replayed: ν(∪ A_i : i ∈ {}) = {} < {} = Σ m_i",
        violation.i_set, violation.union_measure, violation.demand_sum
    );

    // Both routes agree on every instance.
    assert_eq!(
        check_flow(&infeasible)?.is_feasible(),
        cert.is_feasible()
    );
    Ok(())
}
