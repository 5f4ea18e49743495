//! Exact computations of homological filling functions.

pub mod cayley;
pub mod complex;
pub mod cube;
pub mod error;
pub mod filling;
pub mod flag;
pub mod leary;
pub mod library;
pub mod oracle;
pub mod presentation;
pub mod small_cancellation;
pub mod snf;
pub mod subdivision;
pub mod word;

pub use complex::{ChainVec, HomologySummary, TwoComplex, TwoComplexBuilder};
pub use error::{Error, Result};
pub use presentation::Presentation;
pub use word::{Letter, Word};
