//! Numerical modular theory at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`formcalc`]: extended-real quadratic forms, the integral kernel of the
//!   logarithm and operator monotonicity of `log`.
//! * [`stdsubspace`]: standard subspaces of `C^n`, Tomita data `(S, J, Δ)`,
//!   symplectic complements and the inclusion inequalities.
//! * [`entropy`]: relative entropy on a full matrix algebra in standard form,
//!   computed four independent ways.
//! * [`chiral`]: a translation covariant net of standard subspaces for the
//!   chiral U(1) current, with the energy/entropy inequalities evaluated on it.
//!
//! Everything builds without `std` (an allocator is required); disable the
//! default `std` feature to get a `no_std` build.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod chiral;
pub mod entropy;
pub mod error;
pub mod formcalc;
pub mod interchange;
pub mod linalg;
pub mod quad;
pub mod report;
pub mod sample;
pub mod stdsubspace;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, RMat, RVec, C64};
pub use report::Inequality;

pub(crate) mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::linalg::{CMat, CVec, RMat, RVec, C64};
    #[allow(unused_imports)]
    pub use alloc::{format, string::String, vec, vec::Vec};
    #[allow(unused_imports)]
    pub use num_traits::Float;
}
