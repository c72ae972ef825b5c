//! Linear stability of the shear equilibria `Ω* = 2Γcos(p₁x₁ + κp₂x₂)` of
//! the 2D Euler equations on the rectangular torus `[0, 2π) × [0, 2π/κ)`,
//! and a Casimir-conserving Lie-Poisson integrator for the sine-bracket
//! truncation of the nonlinear dynamics.
//!
//! The numerics are generic over the scalar type (see [`Real`]); the
//! aliases at the crate root fix it to `f64` or `f32`.

pub mod eigen;
pub mod error;
pub mod lattice;
mod scalar;
pub mod stability;
pub mod verify;
pub mod zeitlin;

pub use error::{Error, Result};
pub use lattice::{
    class_representative, enumerate_unstable_candidate_classes, is_trivial_class, lattice_points_in_ellipse, rho,
    weighted_norm_sq, ClassSystem, DomainSpec, ModeIndex,
};
pub use scalar::Real;

pub type DomainSpecF64 = lattice::DomainSpec<f64>;
pub type ClassSystemF64 = lattice::ClassSystem<f64>;
pub type SpectrumReportF64 = stability::SpectrumReport<f64>;
pub type TruncatedClassMatrixF64 = stability::TruncatedClassMatrix<f64>;
pub type TruncationSpecF64 = zeitlin::TruncationSpec<f64>;
pub type TruncatedStateF64 = zeitlin::TruncatedState<f64>;

pub type DomainSpecF32 = lattice::DomainSpec<f32>;
pub type ClassSystemF32 = lattice::ClassSystem<f32>;
pub type SpectrumReportF32 = stability::SpectrumReport<f32>;
pub type TruncationSpecF32 = zeitlin::TruncationSpec<f32>;
pub type TruncatedStateF32 = zeitlin::TruncatedState<f32>;
