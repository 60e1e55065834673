//! Partial Ricci flow in its two explicitly solvable regimes.
//!
//! * Warped products `dx^2 + phi(x)^2 gbar` on `[0, l] x M^n`: the
//!   normalized flow reduces to the forced heat equation
//!   `phi_t = phi_xx + Phi phi` with Dirichlet data ([`flow`]). Stationary
//!   profiles live in [`stationary`], curvature extraction and the reduced
//!   evolution identities in [`geometry`], and the convergence estimates in
//!   [`bounds`].
//! * Geodesic Riemannian foliations: the Jacobi operator's eigenvalues obey
//!   `mu' = 4 mu (mu - Phi)` ([`eigenflow`]).
//!
//! [`topology`] holds the Adams and Ferus numbers that constrain totally
//! geodesic foliations of constant positive mixed curvature, and [`cli`]
//! the command-line driver behind the `prflow` binary.

pub mod bounds;
pub mod cli;
pub mod eigenflow;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod numerics;
pub mod stationary;
pub mod topology;

pub use error::{Error, Result};
pub use flow::{evolve, evolve_fd, evolve_spectral, Backend, BoundaryData, EndpointData, FlowConfig, Trajectory};
pub use geometry::{curvature_snapshot, CurvatureSnapshot, WarpedProductMetric};
pub use stationary::{stationary_solution, Regime, StationaryResult};
