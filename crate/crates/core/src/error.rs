use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unbound model: xi = {xi} lies outside the bound-state window {lower} < xi < {upper} for N = {n}")]
    UnboundModel { n: usize, xi: f64, lower: f64, upper: f64 },

    #[error(
        "infeasible basis: {orbitals} orbitals give {spin_orbitals} spin-orbitals, fewer than {particles} particles"
    )]
    InfeasibleBasis { particles: usize, orbitals: usize, spin_orbitals: usize },

    #[error("dimension cap exceeded: product basis of dimension {dim} exceeds the limit {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("numerical integrity: {0}")]
    NumericalIntegrity(String),

    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    #[error("consistency: {0}")]
    Consistency(String),
}

impl Error {
    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::SizeMismatch { .. }
                | Error::Domain(_)
                | Error::UnboundModel { .. }
                | Error::InfeasibleBasis { .. }
                | Error::DimensionCap { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
