//! Finite simplicial sets with decidable degeneracies.
//!
//! The kernel ([`sset`]) presents finite objects by non-degenerate cells in
//! Eilenberg-Zilber normal form. Objects with cells in every dimension
//! (exponentials, dependent products, cofibrant replacements) are handled
//! as explicit presheaves up to a dimension bound ([`truncated`]). On top of
//! these sit lifting certificates, the cofibrant replacement, slice
//! constructions, equivalence witnesses and univalence checks.

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod degeneracy;
pub mod delta;
pub mod equivalence;
pub mod error;
pub mod lifting;
pub mod replacement;
pub mod search;
pub mod slice;
pub mod sset;
pub mod truncated;

pub use delta::OrdinalMap;
pub use error::{Error, Result};
pub use sset::{CellRef, FiniteSSet, SimplicialMap};
pub use truncated::{KMap, TruncMap, TruncatedSSet, Truncation};
