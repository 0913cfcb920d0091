//! Exact linear-extension analytics on finite posets.
//!
//! Counting and enumerating linear extensions, balanced pairs and the balance
//! constant `delta`, gold-partition witnesses and optimal sorting cost,
//! lexicographic sums with their locality and witness-lifting identities, and
//! detection of lexicographic decompositions.

pub mod canon;
pub mod conjectures;
pub mod decompose;
pub mod error;
pub mod format;
pub mod generate;
pub mod lexsum;
pub mod linext;
pub mod poset;
pub mod ratio;

pub use canon::{canonical_key, CanonicalKey};
pub use error::{PosetError, Result};
pub use linext::{Count, LinearExtension, PairCountMatrix};
pub use poset::Poset;
pub use ratio::Ratio;
