//! Level-one modular forms mod p.
//!
//! Truncated q-expansions over small finite fields, Miller bases of `M_k`
//! and `S_k`, Serre filtrations via the Hasse invariant, Hecke eigensystem
//! decomposition, and a constructive check that every eigensystem coming
//! from `M_k` mod p also comes from a cusp form of weight `w` or
//! `w + p^2 - 1`, where `w` is the filtration.
//!
//! The crate is `no_std` and only needs `alloc`. IO, JSON and the CLI live
//! in the `mmfp` crate.
#![no_std]

extern crate alloc;

mod error;
pub mod field;
pub mod hecke;
pub mod linalg;
pub mod qseries;
pub mod spaces;
pub mod verifier;

pub use error::Error;
pub use field::{ExactRational, Field, FieldElement, Prime};
pub use qseries::{HasseInvariant, QSeries};
pub use spaces::{BasisSource, DirectBasis, FiltrationReport, FormSpace};
pub use hecke::{EigenformRecord, Eigensystem, HeckeMatrix};
pub use verifier::{CorollaryReport, RegressionReport, Source, Verdict};

pub type Result<T, E = Error> = core::result::Result<T, E>;
