//! Exact-arithmetic Hall matching on interval measure spaces.
//!
//! Given subsets `A_1..A_n` of a universe made of half-open rational
//! intervals and positive demands `m_1..m_n`, pairwise disjoint subsets
//! `B_k ⊆ A_k` with `ν(B_k) = m_k` exist if and only if
//! `ν(∪_{i∈I} A_i) ≥ Σ_{i∈I} m_i` for every index set `I`. This crate makes
//! both directions of that equivalence executable, with every quantity an
//! exact rational; no floating point anywhere:
//!
//! * [`interval`]: the normalized interval-set algebra, measure, and the
//!   constructive `carve` / `partition` primitives;
//! * [`atoms`]: the Venn atom decomposition `S_Q` of a family of sets;
//! * [`hall`]: feasibility certificates via exhaustive enumeration and via
//!   exact max-flow/min-cut, two independent routes;
//! * [`allocate`]: constructs the disjoint `B_k` exactly from the flow
//!   solution over the atoms;
//! * [`discrete`]: the deficiency-version discrete matchers (cardinality
//!   demands, uniform weights, equal-measure blocks);
//! * [`emulate`]: the ξ-discretization procedure: blocks of measure ξ,
//!   deflated demands `⌊m_k/ξ⌋ − 2^{n+1}`, stage solving, and the nested
//!   `ξ/2^i` refinement whose measures converge to the demands;
//! * [`generate`], [`oracle`], [`textio`]: seeded instance generation, an
//!   independent set-algebra-only checker/validator, and the text formats.
//!
//! Start with the runnable examples (`cargo run --example exact_allocation`)
//! or the `hallmatch` binary (`hallmatch solve instance.txt`).

// Error variants carry the exact rationals they complain about.
#![allow(clippy::result_large_err)]

pub mod allocate;
pub mod atoms;
pub mod discrete;
pub mod emulate;
pub mod error;
pub mod flow;
pub mod generate;
pub mod hall;
pub mod instance;
pub mod interval;
pub mod oracle;
pub mod rational;
pub mod textio;

pub use allocate::{allocate_exact, Allocation, AllocationOutcome};
pub use atoms::{atomize, AtomTable, SubsetMask};
pub use discrete::{solve_blocks, solve_discrete, solve_scaled, DiscreteInstance, DiscreteSolution};
pub use emulate::{
    compare_limit, discretize, refine, solve_stage, stage_feasibility, stage_gap_bound,
    xi_threshold, RefinementRun, XiStage,
};
pub use error::{Error, Result};
pub use generate::{generate, GenMode, GeneratedInstance};
pub use hall::{check_exhaustive, check_flow};
pub use instance::{Certificate, Instance, Violation};
pub use interval::{Interval, IntervalSet, MeasureSpace};
pub use oracle::{oracle, validate, ValidationReport};
pub use rational::Rational;
