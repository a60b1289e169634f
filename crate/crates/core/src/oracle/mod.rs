//! Independent verification machinery: adaptive ODE integration, quadrature
//! and finite differences.
//!
//! Nothing in here calls into the elliptic-function code paths it is used to
//! check; callers pass closures.

mod diff;
mod ode;
mod quad;

pub use diff::finite_diff;
pub use ode::{integrate, integrate_system, OdeProblem, Trajectory};
pub use quad::{integrate_adaptive, periodic_quadrature, periodic_quadrature_with, FourierCoefficient};
