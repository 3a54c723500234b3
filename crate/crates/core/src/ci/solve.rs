//! Dense CI diagonalization.
//!
//! `H` conserves `M_s` and inversion parity, so the basis is split into
//! `(M_s, parity)` blocks that are diagonalized separately. Within a block,
//! eigenvalues closer than [`DEGENERACY_TOL`] are treated as one degenerate
//! cluster and re-diagonalized against `S²`, which fixes the basis of the
//! cluster and makes every state a spin eigenstate. Each eigenvector's sign is
//! chosen so its first component of magnitude above 1e-8 is positive.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::det::SlaterDeterminant;
use super::hamiltonian::{hamiltonian_matrix, s_squared_determinant_matrix};
use crate::error::{Error, Result};
use crate::levelsym::ROUNDING_GUARD;
use crate::oscillator::OscillatorModel;
use crate::spin::HalfInt;

pub const DEGENERACY_TOL: f64 = 1e-7;
/// Iteration cap handed to the QR eigensolver per block.
pub const MAX_EIGEN_ITERATIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CiState {
    pub energy: f64,
    pub s_squared: f64,
    pub s: HalfInt,
    pub ms: HalfInt,
    pub parity: i32,
}

#[derive(Clone, Debug)]
pub struct CiResult {
    pub basis: Vec<SlaterDeterminant>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]` over `basis`.
    pub eigenvectors: DMatrix<f64>,
    pub states: Vec<CiState>,
}

impl CiResult {
    pub fn lowest(&self) -> Option<&CiState> {
        self.states.first()
    }
}

pub(crate) fn symmetric_eigen(h: DMatrix<f64>, what: &str) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let dim = h.nrows();
    SymmetricEigen::try_new(h, f64::EPSILON, MAX_EIGEN_ITERATIONS).ok_or_else(|| {
        Error::Convergence(format!(
            "{what}: no convergence for dimension {dim} within {MAX_EIGEN_ITERATIONS} iterations"
        ))
    })
}

/// Eigenpairs sorted ascending, eigenvectors as columns.
pub(crate) fn sorted_eigen(h: DMatrix<f64>, what: &str) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let eig = symmetric_eigen(h, what)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
    Ok((values, vectors))
}

fn fix_sign(v: &mut DMatrix<f64>, col: usize) {
    if let Some(first) = v.column(col).iter().copied().find(|x| x.abs() > 1e-8) {
        if first < 0.0 {
            v.column_mut(col).neg_mut();
        }
    }
}

struct BlockSolution {
    ms: HalfInt,
    parity: i32,
    members: Vec<usize>,
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    s_squared: Vec<f64>,
}

fn solve_block(
    m: &OscillatorModel,
    basis: &[SlaterDeterminant],
    members: Vec<usize>,
    ms: HalfInt,
    parity: i32,
) -> Result<BlockSolution> {
    let dets: Vec<SlaterDeterminant> = members.iter().map(|&i| basis[i].clone()).collect();
    let h = hamiltonian_matrix(m, &dets)?;
    let s2 = s_squared_determinant_matrix(&dets);
    let (mut values, mut vectors) = sorted_eigen(h.clone(), "CI block")?;
    // split degenerate clusters by S²
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            let v = vectors.columns(start, end - start).into_owned();
            let small = v.transpose() * &s2 * &v;
            let (_, rot) = sorted_eigen(small, "S² in degenerate cluster")?;
            let rotated = &v * rot;
            for k in 0..end - start {
                let col = rotated.column(k);
                values[start + k] = (col.transpose() * &h * col)[(0, 0)];
                vectors.set_column(start + k, &col);
            }
        }
        start = end;
    }
    let s_squared = (0..values.len())
        .map(|k| {
            fix_sign(&mut vectors, k);
            let col = vectors.column(k);
            (col.transpose() * &s2 * col)[(0, 0)]
        })
        .collect();
    Ok(BlockSolution { ms, parity, members, values, vectors, s_squared })
}

/// Rayleigh–Ritz solution of `H` in the span of `basis`.
pub fn ci_solve(m: &OscillatorModel, basis: &[SlaterDeterminant]) -> Result<CiResult> {
    if basis.is_empty() {
        return Err(Error::Domain("CI basis is empty".into()));
    }
    let mut blocks: BTreeMap<(HalfInt, i32), Vec<usize>> = BTreeMap::new();
    for (i, d) in basis.iter().enumerate() {
        if d.len() != m.n {
            return Err(Error::SizeMismatch { expected: m.n, found: d.len() });
        }
        blocks.entry((d.ms(), d.parity())).or_default().push(i);
    }
    let solved: Vec<BlockSolution> = blocks
        .into_iter()
        .map(|((ms, parity), members)| solve_block(m, basis, members, ms, parity))
        .collect::<Result<_>>()?;

    // (block, local index) in ascending energy; ties keep block order
    let mut all: Vec<(usize, usize)> =
        solved.iter().enumerate().flat_map(|(b, s)| (0..s.values.len()).map(move |k| (b, k))).collect();
    all.sort_by(|&(b1, k1), &(b2, k2)| solved[b1].values[k1].total_cmp(&solved[b2].values[k2]));

    let dim = basis.len();
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut states = Vec::with_capacity(dim);
    for (col, &(b, k)) in all.iter().enumerate() {
        let block = &solved[b];
        for (local, &global) in block.members.iter().enumerate() {
            eigenvectors[(global, col)] = block.vectors[(local, k)];
        }
        let s2 = block.s_squared[k];
        let s = HalfInt::from_casimir(s2).filter(|s| (s.casimir() - s2).abs() < ROUNDING_GUARD).ok_or_else(|| {
            Error::NumericalIntegrity(format!("⟨S²⟩ = {s2} at E = {} is not S(S+1)", block.values[k]))
        })?;
        eigenvalues.push(block.values[k]);
        states.push(CiState { energy: block.values[k], s_squared: s2, s, ms: block.ms, parity: block.parity });
    }
    Ok(CiResult { basis: basis.to_vec(), eigenvalues, eigenvectors, states })
}

/// Builds the basis and solves in one step.
pub fn run_ci(m: &OscillatorModel, orbitals: usize, ms: Option<HalfInt>) -> Result<CiResult> {
    let basis = super::det::build_basis(m.n, orbitals, ms)?;
    ci_solve(m, &basis)
}
