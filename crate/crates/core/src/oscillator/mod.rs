//! Exactly solvable coupled-oscillator models for `N = 3` and `N = 4`.

mod action;
mod model;
mod poly;

pub use action::{level_representation, mode_action, permutation_action, permutation_action_matrix, LevelAction};
pub use model::{
    accidental_degeneracies, bound_window, degeneracy, eigenfunction, enumerate_levels, exact_energy, make_model,
    oscillator_function, HermiteGaussian, LevelDescriptor, OscillatorModel, QuantaPattern,
};
pub use poly::{hermite_norm, hermite_poly, monomial_in_hermite, Polynomial};
