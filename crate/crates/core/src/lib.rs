//! Exact-arithmetic computational representation theory.
//!
//! The crate is organized bottom-up:
//!
//! * [`exactlin`] -- dense exact linear algebra over prime fields and the
//!   rationals; every other module reduces its questions to ranks, kernels
//!   and solves here.
//! * [`algcore`] -- finite-dimensional associative algebras given by
//!   structure constants, Jacobson radicals, quotients.
//! * [`modth`] -- left modules: submodules, quotients, Hom spaces, socle and
//!   radical series, composition factors, isomorphism and simplicity tests.
//! * [`loewy`] -- layered diagrams of a chosen Loewy series with arrows for
//!   non-split length-two subquotients, plus a brute-force reference
//!   detector usable as an oracle.
//! * [`braided`] -- quasitriangular Hopf algebras as concrete braided
//!   categories, commutative simple-current algebra objects, induction to
//!   smash-product modules, and the verification suite for filtration and
//!   diagram preservation.
//! * [`corpus`] -- named, parameterized generators for the shipped test
//!   families.
//! * [`jsonio`] -- JSON schemas for all domain objects.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything can be used from multiple threads. Randomized
//! searches take an explicit seed and are reproducible.

pub mod algcore;
pub mod braided;
pub mod corpus;
mod error;
pub mod exactlin;
pub mod jsonio;
pub mod loewy;
pub mod modth;

pub use error::{Error, Result};
