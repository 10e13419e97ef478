//! Extensibility of Diophantine triples `{2, b, c}`.
//!
//! The crate mechanizes the argument that the triples `{2, b, c_nu^±}` with
//! `b = 2k(k+1)` admit only regular extensions to quadruples:
//!
//! * [`arithmetic`]: exact integer helpers, certified interval reals and
//!   continued fractions.
//! * [`pell`]: generalized Pell equations `t^2 - D s^2 = N`, their solution
//!   classes and bounded enumeration.
//! * [`tuples`]: Diophantine tuple predicates, the `c_nu^±` family and a
//!   brute-force extension search.
//! * [`recurrences`]: the binary recurrences whose intersections encode
//!   extensions, with the index-offset (`Δ`) inequality checks.
//! * [`bounds`]: the linear form in logarithms, the analytic bounds on the
//!   index `m` and the Baker–Davenport reduction.
//! * [`pipeline`]: orchestration of the whole verification with auditable
//!   reports.

pub mod arithmetic;
mod bigint_string;
pub mod bounds;
mod error;
pub mod pell;
pub mod pipeline;
pub mod recurrences;
pub mod tuples;

pub use error::{Error, Result};
