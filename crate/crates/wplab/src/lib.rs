//! Numerical laboratory for geodesic-length functions on the Teichmüller
//! space of the once-punctured torus.
//!
//! The crate is organized in layers:
//!
//! - [`hyperbolic`]: exact upper half-plane primitives and the space of
//!   complete geodesics (cross-ratio, distance, Gaussian, area measure).
//! - [`fuchsian`]: marked punctured-torus groups from Fenchel-Nielsen
//!   coordinates, word enumeration, simple-closed-curve classes.
//! - [`poincare`]: coset-sum series over the group (the mean-squared
//!   inverse exponential-distance function, relative theta series for
//!   length differentials, unfolding integrals, surface quadrature).
//! - [`dirichlet`]: Dirichlet fundamental domains and quadrature over them.
//! - [`strip`]: the cylinder-cover Fourier machinery (mode Beltrami
//!   differentials, term-by-term potential solution, the Eichler-type
//!   operator, Hermitian forms, Hessian formulas).
//! - [`teich`]: the Weil-Petersson metric, gradients, geodesic shooting,
//!   convexity probes, and distance to the boundary stratum.

pub mod dirichlet;
pub mod error;
pub mod fuchsian;
pub mod hyperbolic;
pub mod numeric;
pub mod poincare;
pub mod strip;
pub mod teich;

pub use error::{Result, WplabError};
