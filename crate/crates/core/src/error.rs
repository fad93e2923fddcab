use thiserror::Error;

/// Errors raised by the library. Each message names the invariant that failed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("poset: label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("poset: duplicate relation ({0},{1})")]
    DuplicatePair(usize, usize),
    #[error("poset: relations contain a cycle through label {0} (order must be antisymmetric)")]
    Cycle(usize),
    #[error("poset: at most {max} elements are supported, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("poset: not naturally labeled, {lower} precedes {upper} but {lower} > {upper} (identity must be a linear extension)")]
    NotNaturallyLabeled { lower: usize, upper: usize },
    #[error("poset: not a rooted forest, element {0} has more than one upper cover")]
    NotRootedForest(usize),
    #[error("poset: not a union of chains labeled consecutively within chains")]
    NotConsecutiveChains,
    #[error("poset: bad relabeling input: {0}")]
    Relabel(String),

    #[error("extensions: operator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("extensions: word {0:?} is not a linear extension of the poset")]
    NotAnExtension(Vec<usize>),

    #[error("linform: dimension mismatch, expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linform: kernel has dimension {0}, expected exactly 1 (chain not irreducible?)")]
    KernelDimension(usize),
    #[error("linform: assignment values must be strictly positive")]
    NonPositiveAssignment,
    #[error("linform: cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("sampler: probabilities must be positive and sum to exactly 1, sum is {0}")]
    BadProbabilities(String),
    #[error("sampler: common denominator of the probabilities does not fit in 64 bits")]
    DenominatorTooLarge,

    #[error("monoid: element budget of {0} exceeded during closure")]
    BudgetExceeded(usize),
    #[error("monoid: not R-trivial")]
    NotRTrivial,
    #[error("monoid: element is not aperiodic, x^{index} = x^({index}+{period}) with period {period} > 1")]
    NotAperiodic { index: usize, period: usize },
    #[error("monoid: semilattice has no unique join for {0} and {1}")]
    NoJoin(String, String),
}

pub type Result<T> = std::result::Result<T, Error>;
