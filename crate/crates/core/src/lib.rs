//! Balanced group presentations, Andrews–Curtis certificates and dual
//! presentations.
//!
//! Matrix code is generic over [`IntScalar`]; the aliases below fix the
//! scalar for everyday use. [`Matrix`] never overflows.

pub mod abelian;
pub mod corpus;
pub mod coset;
pub mod dual;
pub mod error;
pub mod lemma2;
pub mod moves;
pub mod presentation;
pub mod quotient;
pub mod scalar;
pub mod search;
pub mod word;

pub use abelian::{IntMatrix, SmithForm};
pub use dual::{KnotCertificate, Occurrence, OrderingWitness};
pub use error::{Error, Result};
pub use moves::{AcCertificate, AcMove};
pub use presentation::{Presentation, RawPresentation};
pub use scalar::IntScalar;
pub use word::{Letter, Word};

pub type Matrix = IntMatrix<num_bigint::BigInt>;
pub type Matrix64 = IntMatrix<i64>;
pub type Matrix128 = IntMatrix<i128>;
pub type Smith = SmithForm<num_bigint::BigInt>;
pub type Invariants = abelian::AbelianInvariants<num_bigint::BigInt>;
