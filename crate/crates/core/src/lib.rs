//! A small laboratory for total Boolean functions in the query model.
//!
//! The crate represents a function f: {0,1}^n -> {0,1} by its full truth
//! table and computes query-complexity measures exactly: deterministic
//! decision-tree depth, sensitivity, block sensitivity, certificate
//! complexity, polynomial degree, nondeterministic degree (with an explicit
//! witness polynomial), and approximate degree via an exact-rational linear
//! program. On top of the measures sit two constructive algorithms:
//!
//! * [`derand`] evaluates f deterministically by repeatedly querying the
//!   maxonomial (highest-degree monomial) of a nondeterministic witness
//!   polynomial, and can unroll that strategy into a full decision tree.
//! * [`amplify`] turns a two-sided-error randomized algorithm into a
//!   zero-error one by repetition: answers are only ever read off a
//!   certificate, so a wrong bit is structurally impossible and the
//!   algorithm says `?` when the queried positions prove nothing.
//!
//! All arithmetic that decides feasibility or signs is exact rational
//! ([`Rat`]); floating point appears only in statistics reporting.

pub mod amplify;
pub mod cube;
pub mod derand;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod measures;
pub mod poly;
pub mod ratio;
pub mod spec;
pub mod table;

pub use cube::{Assignment, Block, PartialAssignment};
pub use error::{Error, Result};
pub use poly::MultilinearPoly;
pub use spec::{parse_spec, FuncSpec};
pub use table::TruthTable;

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;
