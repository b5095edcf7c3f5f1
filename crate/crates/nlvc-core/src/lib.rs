//! Solver kit for one-dimensional nonlocal diffusion with volume constraints.
//!
//! The crate converts classical surface Neumann data into the volumetric
//! constraints a nonlocal model needs, along two routes:
//!
//! * **Neumann strategy**: solve a local surrogate Poisson problem, apply the
//!   nonlocal interaction operator to its solution to manufacture a body force
//!   on the constraint layer, then solve the nonlocal problem with that force.
//! * **Dirichlet strategy**: solve the same surrogate and impose its values
//!   directly as a Dirichlet volume constraint on the layer.
//!
//! Both routes discretize the nonlocal equation with piecewise-linear finite
//! elements on a uniform grid whose spacing divides the interaction horizon,
//! so every kernel integral is evaluated exactly by piecewise Gauss rules.
//! The [`harness`] module packages the pre-registered consistency and
//! local-limit convergence experiments; [`metrics`] measures errors in the
//! nonlocal energy seminorm and the L2 norm.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion CLI
//! crate carries file formats and I/O.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod band;
pub mod domain;
pub mod error;
pub mod fem;
pub mod function;
pub mod harness;
pub mod kernel;
pub mod local;
mod math;
pub mod metrics;
pub mod ops;
pub mod poly;
pub mod quad;
pub mod strategies;

pub use domain::{build_domain, build_mesh, classify, Domain1D, Mesh1D, Region};
pub use error::{Error, Result};
pub use fem::NodalField;
pub use function::{Field, GridFunction, ScalarFunction};
pub use kernel::Kernel;
pub use metrics::{ConvergenceRecord, ErrorPair};
pub use poly::Polynomial;
pub use quad::QuadratureSpec;
pub use strategies::{ConversionProblem, Strategy, StrategyResult};
