//! The measure algebra: normalized interval sets, exact measures, and the
//! constructive carve/partition primitives.
//!
//! ```bash
//! cargo run --example carve_and_partition
//! ```

use hallmatch::rational::rational;
use hallmatch::IntervalSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = IntervalSet::from_pairs(vec![
        (rational(0, 1), rational(1, 3)),
        (rational(1, 2), rational(1, 1)),
    ])?;
    let b = IntervalSet::interval(rational(1, 4), rational(3, 4))?;

    println!("A           = {a}  (measure {})", a.measure());
    println!("B           = {b}  (measure {})", b.measure());
    println!("A ∪ B       = {}", a.union(&b));
    println!("A ∩ B       = {}", a.intersect(&b));
    println!("A \\ B       = {}", a.difference(&b));

    // Inclusion-exclusion holds exactly, never approximately.
    let lhs = a.union(&b).measure() + a.intersect(&b).measure();
    let rhs = a.measure() + b.measure();
    println!("ν(A∪B) + ν(A∩B) = {lhs} = ν(A) + ν(B) = {rhs}");
    assert_eq!(lhs, rhs);

    // Carve the leftmost subset of exactly half of A's measure.
    let half = a.measure() * rational(1, 2);
    let carved = a.carve(&half)?;
    println!("\nleftmost carve of measure {half}: {carved}");
    assert_eq!(carved.measure(), half);
    assert!(carved.is_subset_of(&a));

    // Split A into thirds, exactly.
    let third = a.measure() * rational(1, 3);
    let pieces = a.partition(&[third.clone(), third.clone(), third])?;
    println!("partition of A into thirds:");
    for (i, piece) in pieces.iter().enumerate() {
        println!("  piece {i}: {piece}  (measure {})", piece.measure());
    }
    assert_eq!(IntervalSet::union_all(pieces.iter()), a);
    Ok(())
}
