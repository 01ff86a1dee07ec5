//! Generators of the model semigroups and their finite-dimensional calculus.

mod drift;
mod generator;
mod hermite;

pub use drift::{
    analyticity_angle, angle_details, angle_from_spectral_angle, inverse_sqrt_spd,
    lyapunov_gramian, AngleDetails, DriftSpec, Gramian,
};
pub use generator::{
    build_heat_generator, build_ou_generator, build_ou_generator_with, contractive_sector_angle,
    fractional_norm, semigroup_apply, smoothing_constant, Basis, ConditioningPolicy,
    DiscreteGenerator, SectorFit, SectorFitOptions, DEFAULT_MAX_BASIS,
};
pub use hermite::{basis_dimension, graded_indices, hermite_normalized, HermiteBasis};
