//! Spectral contour dynamics for the interface between two Stokes fluids of
//! equal viscosity and different densities in the horizontally periodic strip.

// NaN-aware comparisons are written as negations on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod contour;
pub mod error;
pub mod fit;
pub mod graph;
pub mod harness;
pub mod kernels;
pub mod semigroup;
pub mod spectral;
pub mod timestep;

pub use contour::{ArcChordLimits, ArcChordReport, CurveState};
pub use error::{Error, Result};
pub use graph::{GraphState, PhysParams};
pub use kernels::{Displacement, KernelValue};
pub use semigroup::{DecayMode, SemigroupQuery};
pub use spectral::{NormKind, NormSpec, SpectralCoeffs};
pub use timestep::{IntegratorConfig, InterfaceState, NormReport, Trajectory};
