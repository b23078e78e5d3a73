//! Enumeration of the down-set extreme rays of a pointed polyhedral cone
//! whose defining inequalities carry a partial order.
//!
//! The engine walks a queue of (down-set, excluded up-set, stabilizer)
//! triplets, shrinking faces with closure operators and pruning by
//! symmetry orbits, in exact rational arithmetic throughout. The `sac`
//! module instantiates the machinery for the subadditivity cone of an
//! N-party entropy space; `oracle` holds independent brute-force
//! references used to cross-check the engine.

pub mod closure;
pub mod cone;
pub mod engine;
pub mod error;
pub mod files;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod perm;
pub mod poset;
pub mod rat;
pub mod sac;
pub mod sets;

pub use error::{Error, Result};
