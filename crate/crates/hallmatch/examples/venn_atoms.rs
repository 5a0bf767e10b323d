//! Venn atom decomposition: split ∪A_i into the regions S_Q covered by
//! exactly the sets indexed by Q, and recompute union measures over atoms.
//!
//! ```bash
//! cargo run --example venn_atoms
//! ```

use hallmatch::atoms::SubsetMask;
use hallmatch::rational::rational;
use hallmatch::{atomize, IntervalSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sets = vec![
        IntervalSet::interval(rational(0, 1), rational(2, 1))?,
        IntervalSet::interval(rational(1, 1), rational(3, 1))?,
        IntervalSet::from_pairs(vec![
            (rational(1, 2), rational(3, 2)),
            (rational(5, 2), rational(7, 2)),
        ])?,
    ];
    for (k, s) in sets.iter().enumerate() {
        println!("A{} = {s}", k + 1);
    }

    let table = atomize(&sets)?;
    println!("\n{} nonempty atoms:", table.len());
    for (mask, atom) in table.iter() {
        println!("  S_{mask} = {atom}  (measure {})", atom.measure());
    }

    // The atoms containing k reassemble A_k exactly.
    for (k, s) in sets.iter().enumerate() {
        let rebuilt = IntervalSet::union_all(table.atoms_containing(k).map(|(_, a)| a));
        assert_eq!(&rebuilt, s);
    }
    println!("\nrecomposition: ∪(S_Q : Q ∋ k) = A_k for every k");

    // Union measures over the table match direct set algebra for every I.
    for mask in SubsetMask::all_nonempty(sets.len()) {
        let via_atoms = table.union_measure(mask);
        let direct = IntervalSet::union_all(mask.members().map(|i| &sets[i])).measure();
        assert_eq!(via_atoms, direct);
        println!("ν(∪ A_i : i ∈ {mask}) = {via_atoms}");
    }
    Ok(())
}
