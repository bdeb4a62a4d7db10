//! Algebras with a compatible uniformity, computed at desk scale.
//!
//! On a finite carrier every filter of relations is principal, so a
//! semiuniformity is determined by a reflexive symmetric generator and a
//! uniformity by an equivalence relation. The [`filter`] module works with
//! generators directly; [`algebra`] adds operation tables, terms,
//! congruences and Mal'cev-style certificates; [`prochain`] handles
//! congruential uniformities with a countable base on possibly infinite
//! algebras through lazily evaluated inverse limits; [`factorize`] builds
//! the dense/embedding factorization of homomorphisms between such limits.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod factorize;
pub mod filter;
pub mod lattice;
pub mod prochain;
pub mod relation;
pub mod sexpr;
pub mod table;

pub use error::{Error, Result};
pub use filter::{FilterKind, PrincipalFilter};
pub use lattice::UniformityLattice;
pub use relation::{Carrier, CarrierMap, Relation};
pub use table::OpTable;
