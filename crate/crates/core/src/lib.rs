//! Exact Markov chains on the linear extensions of a finite poset.
//!
//! The crate builds the transposition and promotion chains on `L(P)`, checks
//! their stationary distributions by exact evaluation, predicts the spectrum
//! of the promotion chain for rooted forests from the lattice of upper sets,
//! and certifies R-triviality of the promotion monoid. Every prediction is
//! paired with a brute-force route in the test suite.

pub mod chains;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod extensions;
pub mod linform;
pub mod monoid;
pub mod poset;
pub mod sampler;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use extensions::{ExtensionIndex, Operator, Word};
pub use linform::{FormMatrix, LinearForm, RatMatrix, Rational, RationalAssignment, Spectrum};
pub use poset::{LabelSet, Poset};
