//! Series linearization of nonlinear advection-diffusion equations.
//!
//! A nonlinear PDE is embedded in a one-parameter family that is linear at
//! `δ = 0`. The Taylor coefficients `u_n` of the solution in `δ` satisfy a
//! lower-triangular hierarchy of linear forced equations, which this crate
//! solves order by order and sums.
//!
//! - [`hierarchy`]: homotopy data, hierarchy state, Burgers forcing, stepping driver.
//! - [`spectral`]: periodic Burgers hierarchy and a finite-difference baseline.
//! - [`exact`]: closed-form and quadrature references.
//! - [`plap`]: p-Laplacian forcing from integer partitions.
//! - [`elliptic`]: finite-difference Dirichlet hierarchies in 1D and 2D.
//! - [`fem`]: hat-function Galerkin solver for the p-Laplacian evolution hierarchy.
//! - [`analysis`]: error metrics, convergence rates and energy spectra.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod elliptic;
pub mod error;
pub mod exact;
pub mod fem;
pub mod grid;
pub mod hierarchy;
pub mod linalg;
pub mod plap;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{Grid, GridField};
pub use hierarchy::{HierarchyState, HomotopyKind, HomotopySpec, PartialSum};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
