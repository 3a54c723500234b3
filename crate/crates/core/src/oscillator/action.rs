//! Permutations acting on the eigenfunctions of one degenerate level.

use nalgebra::DMatrix;

use super::model::{LevelDescriptor, OscillatorModel};
use super::poly::{hermite_norm, hermite_poly, Polynomial};
use crate::error::{Error, Result};
use crate::symgroup::Permutation;

/// Matrix `A` with `(P̂g)(y) = g(A·y)` on the degenerate modes.
///
/// `P̂f(x) = f(P⁻¹x)` and `y = U·x` give `A = U·Pᵀ·Uᵀ`; the uniform mode is
/// left fixed, so only the leading `(N−1)×(N−1)` block is returned.
pub fn mode_action(m: &OscillatorModel, p: &Permutation) -> Result<DMatrix<f64>> {
    if p.n() != m.n {
        return Err(Error::SizeMismatch { expected: m.n, found: p.n() });
    }
    let n = m.n;
    let u = DMatrix::from_fn(n, n, |i, j| m.u[i][j]);
    let pm = p.matrix();
    let perm = DMatrix::from_fn(n, n, |i, j| pm[i][j]);
    let full = &u * perm.transpose() * u.transpose();
    for i in 0..n - 1 {
        debug_assert!(full[(i, n - 1)].abs() < 1e-12 && full[(n - 1, i)].abs() < 1e-12);
    }
    Ok(full.view((0, 0), (n - 1, n - 1)).into_owned())
}

/// Representation matrix of a permutation on a level, plus the size of any
/// component that fell outside the level (zero up to rounding).
#[derive(Clone, Debug)]
pub struct LevelAction {
    pub matrix: DMatrix<f64>,
    pub leakage: f64,
}

fn check_level(m: &OscillatorModel, level: &LevelDescriptor) -> Result<Vec<Vec<usize>>> {
    let patterns = m.level_patterns(level.n_sym);
    if patterns.len() != level.degeneracy {
        return Err(Error::Domain(format!(
            "level ({}, {}) with degeneracy {} does not belong to the N = {} model",
            level.n_sym, level.n_last, level.degeneracy, m.n
        )));
    }
    Ok(patterns)
}

fn hermite_product(modes: usize, pattern: &[usize]) -> Polynomial {
    pattern.iter().enumerate().fold(Polynomial::constant(modes, 1.0), |acc, (i, &n)| {
        let coeffs: Vec<f64> = hermite_poly(n).iter().map(|&c| c as f64).collect();
        acc.mul(&Polynomial::univariate(modes, i, &coeffs))
    })
}

fn pattern_norm(pattern: &[usize]) -> f64 {
    pattern.iter().map(|&n| hermite_norm(n)).product()
}

/// `D(p)` on the orthonormal level basis (patterns from
/// [`OscillatorModel::level_patterns`]), with `D(p)·D(q) = D(p∘q)`.
pub fn permutation_action(m: &OscillatorModel, level: &LevelDescriptor, p: &Permutation) -> Result<LevelAction> {
    let patterns = check_level(m, level)?;
    let a = mode_action(m, p)?;
    let modes = m.degenerate_modes();
    // q = k^{1/4}·y scales every degenerate mode alike, so A acts on q unchanged
    let forms: Vec<Vec<f64>> = (0..modes).map(|i| (0..modes).map(|l| a[(i, l)]).collect()).collect();
    let dim = patterns.len();
    let mut matrix = DMatrix::zeros(dim, dim);
    let mut leakage = 0.0f64;
    for (j, pat) in patterns.iter().enumerate() {
        let moved = hermite_product(modes, pat).substitute_linear(&forms);
        let norm_j = pattern_norm(pat);
        for (key, c) in moved.to_hermite_products() {
            let target: Vec<usize> = key.iter().map(|&v| v as usize).collect();
            let scaled = c * pattern_norm(&target) / norm_j;
            match patterns.iter().position(|q| *q == target) {
                Some(i) => matrix[(i, j)] += scaled,
                None => leakage = leakage.max(scaled.abs()),
            }
        }
    }
    Ok(LevelAction { matrix, leakage })
}

pub fn permutation_action_matrix(
    m: &OscillatorModel,
    level: &LevelDescriptor,
    p: &Permutation,
) -> Result<DMatrix<f64>> {
    Ok(permutation_action(m, level, p)?.matrix)
}

/// `D(g)` for every group element, in [`Permutation::all`] order.
pub fn level_representation(m: &OscillatorModel, level: &LevelDescriptor) -> Result<Vec<(Permutation, DMatrix<f64>)>> {
    Permutation::all(m.n).into_iter().map(|p| permutation_action_matrix(m, level, &p).map(|d| (p, d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::make_model;

    #[test]
    fn identity_acts_trivially() {
        let m = make_model(3, 0.1).unwrap();
        let level = m.level(3, 1);
        let d = permutation_action_matrix(&m, &level, &Permutation::identity(3)).unwrap();
        assert!((d - DMatrix::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn n3_first_excited_level_is_traceless_under_transpositions() {
        let m = make_model(3, 0.1).unwrap();
        let level = m.level(1, 0);
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let d = permutation_action_matrix(&m, &level, &Permutation::transposition(3, i, j).unwrap()).unwrap();
            assert_eq!(d.shape(), (2, 2));
            assert!(d.trace().abs() < 1e-12);
        }
    }

    #[test]
    fn n3_ground_level_is_scalar_one() {
        let m = make_model(3, 0.1).unwrap();
        let level = m.level(0, 2);
        for p in Permutation::all(3) {
            let d = permutation_action_matrix(&m, &level, &p).unwrap();
            assert_eq!(d.shape(), (1, 1));
            assert!((d[(0, 0)] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matrices_are_orthogonal_and_stay_in_level() {
        let m = make_model(4, -0.2).unwrap();
        for n_sym in 0..=4 {
            let level = m.level(n_sym, 0);
            for p in Permutation::all(4) {
                let act = permutation_action(&m, &level, &p).unwrap();
                let dim = level.degeneracy;
                assert!((act.matrix.transpose() * &act.matrix - DMatrix::identity(dim, dim)).amax() < 1e-9);
                assert!(act.leakage < 1e-9);
            }
        }
    }

    #[test]
    fn foreign_level_rejected() {
        let m3 = make_model(3, 0.1).unwrap();
        let m4 = make_model(4, 0.1).unwrap();
        let level = m4.level(2, 0);
        assert!(permutation_action_matrix(&m3, &level, &Permutation::identity(3)).is_err());
        assert!(permutation_action_matrix(&m4, &level, &Permutation::identity(3)).is_err());
    }
}
