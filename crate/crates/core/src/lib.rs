//! Model checking and derivation replay for exogenous quantum operator logic.
//!
//! Formulae are evaluated against quantum operator structures built from
//! density operators and Kraus-form super-operators. The crate is `no_std`
//! (with `alloc`); file formats, timing and the command line live in the
//! `eqol` companion crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod checker;
pub mod density;
pub mod eigen;
pub mod eqmc;
pub mod gen;
pub mod gqloop;
pub mod lang;
pub mod matrix;
pub mod register;
pub mod scenarios;
pub mod superop;
pub mod valuation;

pub use num_complex::Complex64 as C64;

/// Tolerance used for Hermitian, positivity, trace and comparison checks
/// unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;


pub use checker::{Partition, StateSpec, Structure};
pub use density::{DensityOperator, Subspace};

pub use matrix::{ComplexMatrix, Operator};
pub use lang::{Classical, Formula, Term};
pub use register::{QubitSet, Register};
pub use superop::SuperOperator;
pub use valuation::ValuationSet;
