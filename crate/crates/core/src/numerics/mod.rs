//! Floating-point checks of the model edge metric: volume, Lelong numbers
//! and the radial curvature −1 cone solve. Everything else in the crate is
//! exact; this module is binary64 throughout.

pub mod cone;
pub mod model;

pub use cone::{gauss_bonnet_defect, solve_radial_cone, ConeError, ConeSolveResult, GaussBonnet};
pub use model::{lelong_estimate, lelong_estimate_at, model_volume, LelongEstimate, LelongPoint, ModelMetricSpec, NumericsError};
