//! Finite left-regular bands (LRBs) and the random walks they drive.
//!
//! An LRB is a finite semigroup with identity satisfying `x·x = x` and
//! `x·y·x = x·y`. Every such semigroup carries a support lattice and a set of
//! chambers; left multiplication by a random element gives a Markov chain on
//! the chambers whose spectrum is computable from the lattice alone.
//!
//! The crate is `no_std` (it needs `alloc`). All spectral statements are
//! checked in exact rational arithmetic.
//!
//! Layout:
//! - [`semigroup`] and [`support`]: the abstract semigroup, axiom checks, the
//!   support lattice, chambers and the Möbius function.
//! - [`constructions`]: free LRBs, ordered partitions, the `q`-analogues,
//!   matroid semigroups and chain semigroups of distributive lattices.
//! - [`spectral`]: transition matrices, eigenvalues, multiplicities and
//!   diagonalizability certificates.
//! - [`algebra`]: the semigroup algebra, powers of the weight element and the
//!   primitive idempotents of the walk algebra.
//! - [`walks`]: simulation, stationary distributions, convergence bounds.
//! - [`derangement`]: generalized derangement numbers of graded posets.
//! - [`descent`]: the descent algebra of the symmetric group.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod constructions;
pub mod derangement;
pub mod descent;
mod error;
pub mod exact;
pub mod linalg;
pub mod poset;
pub mod semigroup;
pub mod spectral;
pub mod support;
pub mod walks;

pub use error::LrbError;
pub use exact::Rational;
pub use semigroup::{ElementId, Semigroup};
pub use support::{FlatId, SupportStructure};
