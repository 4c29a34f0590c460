//! Executable machinery for computable structures and their isomorphisms.
//!
//! The crate presents infinite relational structures lazily — a decidable
//! universe of natural-number codes plus total relation evaluators — and
//! builds on that:
//!
//! - composition of a base structure with a uniformly computable family of
//!   component copies, its inverse decomposition, and the glue/split
//!   characterization of isomorphisms between composites;
//! - the infinite-dimensional hypercube with face labels, its automorphism
//!   calculus, and the isomorphism-recovery algorithm that makes it
//!   computably stable;
//! - the orders `(omega, <_X)` that encode a set `X` so that the unique
//!   isomorphism from `(omega, <)` carries exactly the information in `X`;
//! - pairs of hypercube composites whose isomorphisms lift from and project
//!   to component isomorphisms, with oracle sessions auditing what every
//!   procedure consulted;
//! - the uniformization round trip between composite isomorphisms and
//!   families of component isomorphisms.
//!
//! Everything is verifiable at desk scale: finite truncations feed a
//! brute-force backtracking search that independently confirms each
//! isomorphism claim.

pub mod brute;
pub mod categoricity;
pub mod composite;
pub mod error;
pub mod finite;
pub mod fuel;
pub mod hypercube;
pub mod iso;
pub mod oracle;
pub mod orders;
pub mod pairing;
pub mod presentation;
pub mod seeded;
pub mod signature;
pub mod spectra;
pub mod zoo;

pub use error::StructureError;
pub use fuel::{Fuel, DEFAULT_FUEL};
pub use pairing::{decode_pair, encode_pair, Code};
