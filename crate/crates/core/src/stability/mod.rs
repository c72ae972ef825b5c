//! Linearised dynamics about the shear equilibria: truncated class
//! matrices, their spectra, analytic bounds and the stability verdict.

pub mod bounds;
pub mod charpoly;
pub mod classify;
pub mod matrix;
pub mod spectrum;

pub use bounds::{
    essential_spectrum_interval, instability_bound_check, instability_bound_threshold, lambda_star,
    EssentialInterval, LambdaStar, Orientation,
};
pub use charpoly::{bisect_real_roots, char_poly, char_poly_complex_residual, char_poly_residual, CharPolyValue};
pub use classify::{
    boxed_growth_rate, class_spectra, class_spectrum, classify_equilibrium, default_window,
    discrete_count_conjecture, energy_casimir_diagnosis, spectrum_symmetry_check, spectrum_symmetry_distances,
    ClassSpectrum, ConjectureRecord, DiscreteCounts, QuadraticFormDiagnosis, SpectrumReport, SymmetryDistances,
    Verdict,
};
pub use matrix::{build_truncated_matrix, TruncatedClassMatrix, Window};
pub use spectrum::{
    cluster, hamiltonian_symmetry_defect, hausdorff_distance, imaginary, max_abs_real_part, max_gap, max_real_part,
    non_imaginary, non_imaginary_threshold, spectral_radius, Cluster, CLUSTER_REL, NON_IMAGINARY_REL,
};
