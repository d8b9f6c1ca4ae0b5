//! Graded twisting of finitely presented algebras, Hopf algebras, comodule
//! algebras and fusion rings, with exact cyclotomic arithmetic.

pub mod algebra;
pub mod builtin;
pub mod comodule;
pub mod format;
pub mod fusion;
pub mod hopf;
pub mod linalg;
pub mod matgroup;
pub mod scalars;

pub use scalars::{cyc_arith, cyc_make, ArithOp, CycScalar, RationalPoly, ScalarError};
