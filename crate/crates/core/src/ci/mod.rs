//! Full configuration interaction over Slater determinants of oscillator
//! spin-orbitals.

mod compare;
mod det;
mod hamiltonian;
mod oracle;
mod solve;

pub use compare::{
    compare, convergence_horizon, missing_levels_experiment, ComparisonReport, IncompleteLevel, MatchedState,
    MissingLevel, SpuriousState,
};
pub use det::{annihilate, build_basis, create, SlaterDeterminant, SpinOrbital};
pub use hamiltonian::{
    antisymmetrized_integral, core_energy, hamiltonian_element, hamiltonian_matrix, s_squared_determinant_matrix,
    thread_count, x_matrix_element,
};
pub use oracle::{
    first_quantized_ci_matrix, product_basis_oracle, product_basis_spectrum, OracleLevel, PRODUCT_BASIS_CAP,
};
pub use solve::{ci_solve, run_ci, CiResult, CiState, DEGENERACY_TOL, MAX_EIGEN_ITERATIONS};
