//! Venn atom decomposition of a family of interval sets.
//!
//! For a nonempty index set `Q ⊆ [n]` the atom `S_Q` is the region covered by
//! exactly the subsets indexed by `Q`:
//!
//! ```text
//! S_Q = (∩_{i ∈ Q} A_i) \ (∪_{i ∉ Q} A_i)
//! ```
//!
//! Atoms with distinct masks are disjoint, the atoms containing index `k`
//! reassemble `A_k` exactly, and all atoms together cover `∪ A_i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::rational::Rational;

/// Hard cap on the number of subsets; the atom table is exponential in `n`
/// by design and meant for desk-scale instances.
pub const MAX_SUBSETS: usize = 16;

/// Nonempty subset of `[n]`, stored as a bitmask (bit `i` = index `i`,
/// 0-based). Displays 1-based as `{1,3}` to match the usual convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask {
    bits: u32,
}

impl SubsetMask {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if bits == 0 {
            return Err(Error::EmptyMask);
        }
        if n > MAX_SUBSETS || bits >= (1u32 << n) {
            return Err(Error::MaskOutOfRange { bits, n });
        }
        Ok(SubsetMask { bits })
    }

    pub fn singleton(index: usize, n: usize) -> Result<Self> {
        Self::new(1u32 << index, n)
    }

    pub fn full(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMask);
        }
        if n > MAX_SUBSETS {
            return Err(Error::MaskOutOfRange { bits: 0, n });
        }
        Ok(SubsetMask {
            bits: ((1u64 << n) - 1) as u32,
        })
    }

    /// Builds a mask from 0-based member indices.
    pub fn from_members(members: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &i in members {
            if i >= n {
                return Err(Error::MaskOutOfRange {
                    bits: 1u32 << (i.min(31)),
                    n,
                });
            }
            bits |= 1 << i;
        }
        Self::new(bits, n)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 32 && self.bits & (1 << index) != 0
    }

    pub fn intersects(&self, other: SubsetMask) -> bool {
        self.bits & other.bits != 0
    }

    /// 0-based member indices, ascending.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(|&i| self.bits & (1 << i) != 0)
    }

    /// All nonempty masks over `[n]`, ascending numerically.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = SubsetMask> {
        debug_assert!((1..=MAX_SUBSETS).contains(&n));
        (1u32..(1u64 << n) as u32).map(|bits| SubsetMask { bits })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.members().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// The atom decomposition of `A_1..A_n`. Masks whose atom is empty are
/// dropped: an empty atom carries no capacity and would only bloat the flow
/// networks built on top of the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTable {
    n: usize,
    atoms: BTreeMap<SubsetMask, IntervalSet>,
}

/// Computes the atom table by successive subdivision: starting from
/// `∪ A_i`, each subset splits every region into the covered and uncovered
/// halves. Equivalent to evaluating the `S_Q` formula for every mask, but
/// prunes empty regions as they appear.
pub fn atomize(subsets: &[IntervalSet]) -> Result<AtomTable> {
    let n = subsets.len();
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    if n > MAX_SUBSETS {
        return Err(Error::TooManySubsets {
            n,
            cap: MAX_SUBSETS,
        });
    }
    let mut regions: Vec<(u32, IntervalSet)> = vec![(0, IntervalSet::union_all(subsets.iter()))];
    for (i, a) in subsets.iter().enumerate() {
        let mut next = Vec::with_capacity(regions.len() * 2);
        for (mask, region) in regions {
            let inside = region.intersect(a);
            let outside = region.difference(a);
            if !inside.is_empty() {
                next.push((mask | (1 << i), inside));
            }
            if !outside.is_empty() {
                next.push((mask, outside));
            }
        }
        regions = next;
    }
    let mut atoms = BTreeMap::new();
    for (bits, region) in regions {
        debug_assert!(bits != 0, "uncovered region survived subdivision");
        atoms.insert(SubsetMask::new(bits, n)?, region);
    }
    Ok(AtomTable { n, atoms })
}

impl AtomTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nonempty atoms (at most `2^n − 1`).
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The atom for `mask`, if nonempty.
    pub fn get(&self, mask: SubsetMask) -> Option<&IntervalSet> {
        self.atoms.get(&mask)
    }

    /// Nonempty atoms in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, &IntervalSet)> {
        self.atoms.iter().map(|(m, s)| (*m, s))
    }

    /// Atoms whose mask contains the 0-based index `k`; their union is `A_k`.
    pub fn atoms_containing(&self, k: usize) -> impl Iterator<Item = (SubsetMask, &IntervalSet)> {
        self.iter().filter(move |(m, _)| m.contains(k))
    }

    /// Measure of `∪_{i ∈ I} A_i`, computed over the atom table: the atoms
    /// meeting `I` tile that union exactly.
    pub fn union_measure(&self, i_set: SubsetMask) -> Rational {
        let mut total = Rational::from_integer(0.into());
        for (mask, atom) in &self.atoms {
            if mask.intersects(i_set) {
                total += atom.measure();
            }
        }
        total
    }
}
