//! Chiral U(1) current on the light ray.
//!
//! The one-particle space of the current is `L²(R₊, p dp)`. Real test
//! functions `f` on the line give vectors `f̂|_{p>0}`; the inner product of
//! two of them has the closed position-space form used by [`kernel`]. Region
//! subspaces are real spans of cubic B-splines on graded knots
//! ([`spline`]), their modular data come from the Gram-matrix route of
//! [`crate::stdsubspace::GramStandard`], and [`verify`] evaluates the
//! half-line, interval and entropy/energy inequalities against the measured
//! discretisation tolerance `tol(N)`.

pub mod kernel;
pub mod model;
pub mod spline;
pub mod verify;

pub use model::{build_model, LatticeChiralModel, NetRegion, NetSubspace};
pub use verify::{ChiralNet, CoherentReport, DpReport, HalflineMargins, SweepReport};
