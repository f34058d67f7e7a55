//! Lattice-level positivity and classification for logarithmic surface pairs
//! (M̄, D), with the Chern and edge-cone invariants of the twisted
//! log-canonical family 𝓛_α = K + αD and desk-scale numerics for the model
//! edge metric.
//!
//! All lattice-level computations are exact over ℚ; only [`numerics`] uses
//! floating point.

pub mod chern;
pub mod classifier;
pub mod lattice;
pub mod numerics;
pub mod positivity;
pub mod rational;

pub use lattice::{BoundaryComponent, CurveRecord, DivisorClass, Lattice, SurfacePair};
pub use rational::Rational;

/// Tri-state verdict used wherever lattice data cannot decide a question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}
