//! Symmetric normalisers of permutation groups.
//!
//! The normaliser of `G` in `Sym(n)` is located by a descending chain of
//! overgroups (orbit and wreath structure, automorphisms of the block
//! system graph, linear-code automorphisms, homomorphism pullbacks) and
//! finished by a backtrack search inside the last overgroup.
//!
//! Points are 0-based in the Rust API; every textual format is 1-based.

pub mod actions;
pub mod bench;
pub mod blocks;
pub mod chain;
pub mod codes;
pub mod driver;
pub mod error;
pub mod families;
pub mod graphaut;
pub mod group;
pub mod intransitive;
pub mod par;
pub mod perm;
pub mod search;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use group::Group;
pub use perm::Perm;
