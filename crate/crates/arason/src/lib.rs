//! Exact-arithmetic invariants of quadratic forms over Q and of unitary
//! involutions on split algebras over quadratic extensions Q(sqrt(delta)).
//!
//! The crate computes the classical Witt-theoretic invariants (signed
//! discriminant, Hasse-Witt ramification, signature, the Arason invariant
//! e3) together with their relative, hyperbolic and totally-decomposable
//! analogues for unitary involutions presented by hermitian forms, and ships
//! a seeded property harness ([`lab`]) that replays the identities these
//! invariants satisfy on randomized instances.
//!
//! Modules:
//! - [`arith`]: factorization, deterministic primality, square classes.
//! - [`brauer`]: places, Hilbert symbols, quaternion classes, norm tests,
//!   the 2-torsion of H^3(Q) and its coset spaces.
//! - [`qform`]: Witt theory of diagonal quadratic forms over Q.
//! - [`hermitian`]: hermitian forms over (Q(sqrt(delta)), conjugation) via
//!   their trace forms.
//! - [`unitary`]: relative/hyperbolic/totally-decomposable Arason
//!   invariants, descent comparisons, low-degree classification.
//! - [`lab`]: seeded generators, executable checks, counterexample
//!   minimization and replay.

pub mod arith;
pub mod brauer;
pub mod error;
pub mod hermitian;
pub mod lab;
pub mod qform;
pub mod unitary;

pub use error::{Error, Result};
