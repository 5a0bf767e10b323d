//! Seeded random instance generation.
//!
//! Instances are planted on a cell grid `[c/D, (c+1)/D)`: every demand first
//! receives a private disjoint region, which guarantees feasibility by
//! construction; the infeasible and boundary modes then push a chosen index
//! set's demands past (respectively exactly onto) the measure available to
//! it. The same seed always produces the same instance, byte for byte.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atoms::{SubsetMask, MAX_SUBSETS};
use crate::discrete::DiscreteInstance;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::interval::{IntervalSet, MeasureSpace};
use crate::rational::Rational;

/// Hard cap on generated denominators.
pub const DENOM_CAP: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    /// Hall condition holds (often with slack): demands never exceed the
    /// planted private regions.
    Feasible,
    /// A random index set's demands are inflated strictly past the measure
    /// of its union; that set is recorded as `planted`.
    Infeasible,
    /// A random index set sits at exact equality `ν(∪ A_i) = Σ m_i`; the
    /// instance stays feasible and the set is recorded as `planted`.
    Boundary,
}

/// A generated instance plus the planted witness set for the non-trivial
/// modes.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub mode: GenMode,
    pub planted: Option<SubsetMask>,
}

pub fn generate(seed: u64, n: usize, mode: GenMode, denom_cap: u64) -> Result<GeneratedInstance> {
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    if n > MAX_SUBSETS {
        return Err(Error::TooManySubsets {
            n,
            cap: MAX_SUBSETS,
        });
    }
    if denom_cap == 0 || denom_cap > DENOM_CAP {
        return Err(Error::InvariantViolation(format!(
            "denominator cap must lie in 1..={DENOM_CAP}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = rng.random_range(1..=denom_cap) as i64;
    let cells = rng.random_range((3 * n).max(6)..=(8 * n).max(12));

    // Plant one private run of cells per demand.
    let mut order: Vec<usize> = (0..cells).collect();
    order.shuffle(&mut rng);
    let max_size = (cells / (2 * n)).max(1);
    let mut cursor = 0usize;
    let mut planted_cells: Vec<Vec<usize>> = Vec::with_capacity(n);
    for _ in 0..n {
        let size = rng.random_range(1..=max_size);
        planted_cells.push(order[cursor..cursor + size].to_vec());
        cursor += size;
    }

    let planted_mask = match mode {
        GenMode::Feasible => None,
        GenMode::Infeasible | GenMode::Boundary => Some(SubsetMask::new(
            rng.random_range(1..(1u64 << n) as u32),
            n,
        )?),
    };
    let in_planted = |k: usize| planted_mask.map(|m| m.contains(k)).unwrap_or(false);

    // Grow the subsets with extra cells. Boundary mode keeps the planted
    // set's subsets exactly equal to their private regions so the equality
    // is controlled.
    let mut subsets: Vec<IntervalSet> = Vec::with_capacity(n);
    for (k, planted) in planted_cells.iter().enumerate() {
        let mut chosen = planted.clone();
        if !(mode == GenMode::Boundary && in_planted(k)) {
            for c in 0..cells {
                if rng.random_range(0..4u8) == 0 {
                    chosen.push(c);
                }
            }
        }
        subsets.push(cells_to_set(&chosen, den));
    }

    // Demands: start from the planted measures, possibly shrunk (staying
    // positive keeps feasibility); boundary members keep the full measure.
    let mut numerators: Vec<i64> = Vec::with_capacity(n);
    for (k, planted) in planted_cells.iter().enumerate() {
        let size = planted.len() as i64;
        let keep_full = mode == GenMode::Boundary && in_planted(k);
        numerators.push(if keep_full {
            size
        } else {
            rng.random_range(1..=size)
        });
    }

    if mode == GenMode::Infeasible {
        let mask = planted_mask.expect("infeasible mode plants a mask");
        // Push Σ_{k∈I} m_k strictly past ν(∪_{i∈I} A_i), on the same grid.
        let union = IntervalSet::union_all(mask.members().map(|i| &subsets[i]));
        let union_cells = union.measure() * Rational::from_integer(BigInt::from(den));
        let union_cells: i64 = union_cells
            .to_integer()
            .try_into()
            .expect("grid measure fits i64");
        let current: i64 = mask.members().map(|i| numerators[i]).sum();
        let excess = union_cells - current + rng.random_range(1..=cells as i64);
        let members: Vec<usize> = mask.members().collect();
        let share = excess / members.len() as i64;
        let mut remainder = excess % members.len() as i64;
        for &k in &members {
            numerators[k] += share;
            if remainder > 0 {
                numerators[k] += 1;
                remainder -= 1;
            }
        }
    }

    let demands: Vec<Rational> = numerators
        .iter()
        .map(|&p| Rational::new(BigInt::from(p), BigInt::from(den)))
        .collect();
    let universe = IntervalSet::interval(
        Rational::from_integer(0.into()),
        Rational::new(BigInt::from(cells as i64), BigInt::from(den)),
    )?;
    let instance = Instance::new(MeasureSpace::new(universe)?, subsets, demands)?;
    Ok(GeneratedInstance {
        instance,
        mode,
        planted: planted_mask,
    })
}

fn cells_to_set(cells: &[usize], den: i64) -> IntervalSet {
    IntervalSet::from_pairs(
        cells
            .iter()
            .map(|&c| {
                (
                    Rational::new(BigInt::from(c as i64), BigInt::from(den)),
                    Rational::new(BigInt::from(c as i64 + 1), BigInt::from(den)),
                )
            })
            .collect(),
    )
    .expect("grid cells are nonempty intervals")
}

/// Seeded random discrete instances for exercising the deficiency solver:
/// subsets drawn uniformly, demands in `1..=3`, a mix of feasible and
/// infeasible cases.
pub fn generate_discrete(seed: u64, ground_cap: usize, n_cap: usize) -> DiscreteInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ground = rng.random_range(2..=ground_cap.max(2));
    let n = rng.random_range(1..=n_cap.max(1));
    let subsets = (0..n)
        .map(|_| {
            (0..ground)
                .filter(|_| rng.random_range(0..2u8) == 0)
                .collect()
        })
        .collect();
    let demands = (0..n).map(|_| rng.random_range(1..=3usize)).collect();
    DiscreteInstance::from_indices(ground, subsets, demands)
        .expect("generated discrete instance is valid")
}
