//! Numerical toolkit for exponential Orlicz spaces and the moment-growth
//! (Grand Lebesgue) spaces built from them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod duality;
pub mod experiments;
mod error;
pub mod fourier;
pub mod fundamental;
pub mod norms;
pub mod numeric;
pub mod space;

pub use duality::{FunctionSpec, NFunction, PsiFunction, YoungFunction};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use space::{GridFunction, SequenceData, SpaceKind, SpaceSpec};
