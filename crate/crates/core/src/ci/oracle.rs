//! Brute-force references that bypass determinants and Slater–Condon rules.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::det::SlaterDeterminant;
use super::hamiltonian::{core_energy, x_matrix_element};
use super::solve::sorted_eigen;
use crate::error::{Error, Result};
use crate::oscillator::OscillatorModel;
use crate::symgroup::Permutation;

/// Largest product basis the oracle will diagonalize.
pub const PRODUCT_BASIS_CAP: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub energy: f64,
    pub degeneracy: usize,
}

fn digits(mut index: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

fn undigits(d: &[usize], base: usize) -> usize {
    d.iter().fold(0, |acc, &v| acc * base + v)
}

/// All eigenvalues of `H` on the unsymmetrized product basis
/// `φ_{n_1}(x_1)…φ_{n_N}(x_N)`, `n_i < orbitals`, ascending.
pub fn product_basis_spectrum(m: &OscillatorModel, orbitals: usize) -> Result<Vec<f64>> {
    let n = m.n;
    let dim = orbitals.checked_pow(n as u32).unwrap_or(usize::MAX);
    if dim > PRODUCT_BASIS_CAP {
        return Err(Error::DimensionCap { dim, cap: PRODUCT_BASIS_CAP });
    }
    if orbitals == 0 {
        return Err(Error::Domain("product basis needs at least one orbital".into()));
    }
    let mut values = Vec::with_capacity(dim);
    // parity blocks
    for parity in [0, 1] {
        let members: Vec<usize> =
            (0..dim).filter(|&i| digits(i, orbitals, n).iter().sum::<usize>() % 2 == parity).collect();
        if members.is_empty() {
            continue;
        }
        let pos: std::collections::HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut h = DMatrix::zeros(members.len(), members.len());
        for (col, &idx) in members.iter().enumerate() {
            let d = digits(idx, orbitals, n);
            h[(col, col)] = d.iter().map(|&v| core_energy(v)).sum();
            for i in 0..n {
                for j in i + 1..n {
                    for di in [d[i].wrapping_sub(1), d[i] + 1] {
                        for dj in [d[j].wrapping_sub(1), d[j] + 1] {
                            if di >= orbitals || dj >= orbitals {
                                continue;
                            }
                            let mut e = d.clone();
                            e[i] = di;
                            e[j] = dj;
                            let row = pos[&undigits(&e, orbitals)];
                            h[(row, col)] += m.xi * x_matrix_element(d[i], di) * x_matrix_element(d[j], dj);
                        }
                    }
                }
            }
        }
        values.extend(sorted_eigen(h, "product basis")?.0);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues of the product-basis Hamiltonian grouped into levels; values
/// closer than `1e-6` are one level.
pub fn product_basis_oracle(m: &OscillatorModel, orbitals: usize) -> Result<Vec<OracleLevel>> {
    let values = product_basis_spectrum(m, orbitals)?;
    let mut levels: Vec<OracleLevel> = Vec::new();
    let mut anchor = f64::NEG_INFINITY;
    for e in values {
        match levels.last_mut() {
            Some(last) if e - anchor < 1e-6 => last.degeneracy += 1,
            _ => {
                anchor = e;
                levels.push(OracleLevel { energy: e, degeneracy: 1 });
            }
        }
    }
    Ok(levels)
}

/// CI matrix built in first quantization: every determinant is expanded as an
/// explicitly antisymmetrized vector in the `(2M)^N` spin-orbital product
/// space and `H` is applied there term by term.
pub fn first_quantized_ci_matrix(
    m: &OscillatorModel,
    orbitals: usize,
    basis: &[SlaterDeterminant],
) -> Result<DMatrix<f64>> {
    let n = m.n;
    let l = 2 * orbitals;
    let dim = l.checked_pow(n as u32).unwrap_or(usize::MAX);
    if dim > 1 << 16 {
        return Err(Error::DimensionCap { dim, cap: 1 << 16 });
    }
    let perms = Permutation::all(n);
    let norm = 1.0 / (perms.len() as f64).sqrt();
    let vectors: Vec<DVector<f64>> = basis
        .iter()
        .map(|det| {
            if det.occupied().iter().any(|&i| i >= l) || det.len() != n {
                return Err(Error::Domain(format!("{det} is outside {orbitals} orbitals")));
            }
            let mut v = DVector::zeros(dim);
            for p in &perms {
                // slot p(k) holds χ_{occ[k]}
                let mut slots = vec![0; n];
                for (k, &so) in det.occupied().iter().enumerate() {
                    slots[p.apply(k)] = so;
                }
                v[undigits(&slots, l)] += p.parity() as f64 * norm;
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let apply_h = |v: &DVector<f64>| {
        let mut out = DVector::zeros(dim);
        for (idx, &c) in v.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let d = digits(idx, l, n);
            out[idx] += c * d.iter().map(|&so| core_energy(so / 2)).sum::<f64>();
            for i in 0..n {
                for j in i + 1..n {
                    // x acts on the spatial part and keeps the spin
                    for si in [d[i].wrapping_sub(2), d[i] + 2] {
                        for sj in [d[j].wrapping_sub(2), d[j] + 2] {
                            if si >= l || sj >= l {
                                continue;
                            }
                            let mut e = d.clone();
                            e[i] = si;
                            e[j] = sj;
                            out[undigits(&e, l)] +=
                                c * m.xi * x_matrix_element(d[i] / 2, si / 2) * x_matrix_element(d[j] / 2, sj / 2);
                        }
                    }
                }
            }
        }
        out
    };
    let hv: Vec<DVector<f64>> = vectors.iter().map(apply_h).collect();
    let k = basis.len();
    Ok(DMatrix::from_fn(k, k, |a, b| vectors[a].dot(&hv[b])))
}
