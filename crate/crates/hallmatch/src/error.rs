use num_bigint::BigInt;
use thiserror::Error;

use crate::atoms::SubsetMask;
use crate::rational::Rational;

/// Everything that can go wrong across the crate. Infeasibility of a
/// matching instance is *not* an error at the solver layer (it is a
/// certificate); it only appears here where an operation requires a
/// feasible instance as a precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("interval bounds must satisfy lo < hi, got [{lo}, {hi})")]
    EmptyInterval { lo: Rational, hi: Rational },

    #[error("universe must have positive measure")]
    EmptyUniverse,

    #[error("instance must contain at least one subset")]
    EmptyInstance,

    #[error("instance has {n} subsets, the cap is {cap}")]
    TooManySubsets { n: usize, cap: usize },

    #[error("exhaustive paths are capped at {cap} subsets, instance has {n}")]
    ExhaustiveScale { n: usize, cap: usize },

    #[error("subset {index} is not contained in the universe")]
    SubsetOutsideUniverse { index: usize },

    #[error("demand {index} must be positive, got {value}")]
    NonpositiveDemand { index: usize, value: Rational },

    #[error("requested measure {requested} outside [0, {available}]")]
    DemandExceedsMeasure {
        requested: Rational,
        available: Rational,
    },

    #[error("partition sizes sum to {sum}, set has measure {measure}")]
    PartitionSumMismatch { sum: Rational, measure: Rational },

    #[error("partition size {index} must be positive, got {value}")]
    NonpositivePart { index: usize, value: Rational },

    #[error("subset mask must be nonempty")]
    EmptyMask,

    #[error("mask {bits:#x} out of range for {n} subsets")]
    MaskOutOfRange { bits: u32, n: usize },

    #[error("scale must be positive, got {value}")]
    NonpositiveScale { value: Rational },

    #[error("xi must be positive, got {value}")]
    NonpositiveXi { value: Rational },

    #[error("xi {xi} exceeds the positivity threshold {threshold}")]
    XiAboveThreshold { xi: Rational, threshold: Rational },

    #[error("stage matching failed for set {i_set} (instance infeasible or xi above threshold)")]
    StageMatchingFailed { i_set: SubsetMask },

    #[error("xi {xi} needs {needed} blocks, budget is {budget}")]
    BlockBudget {
        xi: Rational,
        needed: BigInt,
        budget: usize,
    },

    #[error("block {index} has measure {actual}, expected {expected}")]
    BlockMeasureMismatch {
        index: usize,
        expected: Rational,
        actual: Rational,
    },

    #[error("blocks {first} and {second} overlap")]
    BlockOverlap { first: usize, second: usize },

    #[error("subset {subset} references element {element} outside the ground set")]
    ElementOutOfRange { subset: usize, element: usize },

    #[error("duplicate ground element {name:?}")]
    DuplicateElement { name: String },

    #[error("discrete demand {index} must be at least 1")]
    ZeroDemand { index: usize },

    #[error("expected {expected} entries, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("instance is infeasible: set {i_set} has union measure {union_measure} < demand sum {demand_sum}")]
    Infeasible {
        i_set: SubsetMask,
        union_measure: Rational,
        demand_sum: Rational,
    },

    #[error("stage demands are not all positive; xi exceeds the positivity threshold")]
    StageDemandsNotPositive,

    #[error("refinement stage {stage}: nesting step infeasible ({detail})")]
    NestingInfeasible { stage: usize, detail: String },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
