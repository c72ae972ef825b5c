//! Sine-bracket truncation of the nonlinear Euler dynamics on `D_N`, its
//! Casimirs, and a structure-preserving splitting integrator.

mod casimir;
mod integrator;
mod truncation;

pub use casimir::{casimir, ClockShift, COMMUTATOR_CHECK_PAIRS};
pub use integrator::{
    fit_growth_rate, lie_poisson_step, simulate, ConservationLog, ConservationRecord, GrowthFit,
    LiePoissonIntegrator, SimulationOptions, Trajectory,
};
pub use truncation::{
    hamiltonian, pair_vector_field, perturbed_equilibrium, structure_constant, truncated_class_coupling,
    vector_field, vorticity_grid, wrapped_casimir_stability_probe, TruncatedState, TruncationSpec,
};
