//! Exact and modular machinery for probing Fermat-number primality through the
//! recurrence `A_1 = 6`, `A_{q+1} = A_q^2 - 2`.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`arith`]: residues modulo `F_n = 2^(2^n) + 1` reduced by folding, with
//!   squaring/multiplication counters.
//! * [`zsqrt2`]: exact arithmetic in `Z[sqrt 2]` around the unit `u = 3 + 2 sqrt 2`.
//! * [`sequences`]: the `A_q` and `S_q = A_q / 2` sequences, exact and modular.
//! * [`primality`]: the divisor scan, the Pépin oracle and the consistency report.

pub mod arith;
pub mod error;
pub mod primality;
pub mod sequences;
pub mod zsqrt2;

pub use arith::{Budget, FermatModulus, FermatResidue, Natural, OpCounter};
pub use error::{Error, Result};
