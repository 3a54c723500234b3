//! Slater–Condon matrix elements of `Σ_i (−½∂_i² + ½x_i²) + ξ Σ_{i<j} x_i x_j`
//! over unit-frequency oscillator orbitals.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::det::{annihilate, create, SlaterDeterminant, SpinOrbital};
use crate::error::{Error, Result};
use crate::oscillator::OscillatorModel;

/// `⟨φ_a|x|φ_b⟩` for the unit-frequency oscillator.
pub fn x_matrix_element(a: usize, b: usize) -> f64 {
    if a.abs_diff(b) == 1 {
        (a.max(b) as f64 / 2.0).sqrt()
    } else {
        0.0
    }
}

/// `⟨φ_a|−½d²/dx² + ½x²|φ_a⟩`; the operator is diagonal in this basis.
pub fn core_energy(a: usize) -> f64 {
    a as f64 + 0.5
}

fn one_body(p: usize, q: usize) -> f64 {
    if p == q {
        core_energy(p / 2)
    } else {
        0.0
    }
}

/// Spin-orbital integral `⟨pq|v|rs⟩ = ξ·⟨p|x|r⟩⟨q|x|s⟩` with spin orthogonality.
fn two_body(xi: f64, p: usize, q: usize, r: usize, s: usize) -> f64 {
    if p % 2 != r % 2 || q % 2 != s % 2 {
        return 0.0;
    }
    xi * x_matrix_element(p / 2, r / 2) * x_matrix_element(q / 2, s / 2)
}

/// `⟨pq||rs⟩ = ⟨pq|v|rs⟩ − ⟨pq|v|sr⟩`.
pub fn antisymmetrized_integral(xi: f64, p: usize, q: usize, r: usize, s: usize) -> f64 {
    two_body(xi, p, q, r, s) - two_body(xi, p, q, s, r)
}

/// `⟨bra|H|ket⟩` by the Slater–Condon rules.
pub fn hamiltonian_element(bra: &SlaterDeterminant, ket: &SlaterDeterminant, m: &OscillatorModel) -> Result<f64> {
    if bra.len() != m.n {
        return Err(Error::SizeMismatch { expected: m.n, found: bra.len() });
    }
    if ket.len() != m.n {
        return Err(Error::SizeMismatch { expected: m.n, found: ket.len() });
    }
    Ok(element(bra, ket, m.xi))
}

pub(crate) fn element(bra: &SlaterDeterminant, ket: &SlaterDeterminant, xi: f64) -> f64 {
    // one arithmetic path for both orders keeps H exactly symmetric
    let (bm, km) = (bra.mask().min(ket.mask()), bra.mask().max(ket.mask()));
    let ket = &SlaterDeterminant::from_mask(km);
    let diff = (bm ^ km).count_ones() / 2;
    match diff {
        0 => {
            let occ = ket.occupied();
            let mut e: f64 = occ.iter().map(|&i| one_body(i, i)).sum();
            for (a, &i) in occ.iter().enumerate() {
                for &j in &occ[a + 1..] {
                    e += antisymmetrized_integral(xi, i, j, i, j);
                }
            }
            e
        }
        1 => {
            let hole = (km & !bm).trailing_zeros() as usize;
            let particle = (bm & !km).trailing_zeros() as usize;
            let (s1, mid) = annihilate(km, hole).unwrap();
            let (s2, _) = create(mid, particle).unwrap();
            let common = km & bm;
            let mut e = one_body(particle, hole);
            for n in (0..128).filter(|&n| common >> n & 1 == 1) {
                e += antisymmetrized_integral(xi, particle, n, hole, n);
            }
            s1 * s2 * e
        }
        2 => {
            let holes = km & !bm;
            let particles = bm & !km;
            let m = holes.trailing_zeros() as usize;
            let n = 127 - holes.leading_zeros() as usize;
            let p = particles.trailing_zeros() as usize;
            let q = 127 - particles.leading_zeros() as usize;
            // a†_p a†_q a_n a_m |ket⟩ = sign |bra⟩
            let (s1, k1) = annihilate(km, m).unwrap();
            let (s2, k2) = annihilate(k1, n).unwrap();
            let (s3, k3) = create(k2, q).unwrap();
            let (s4, _) = create(k3, p).unwrap();
            s1 * s2 * s3 * s4 * antisymmetrized_integral(xi, p, q, m, n)
        }
        _ => 0.0,
    }
}

/// Number of worker threads, from `PERMSYM_THREADS` when set.
pub fn thread_count() -> usize {
    std::env::var("PERMSYM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

pub(crate) fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Dense Hamiltonian over `basis`. Each upper-triangle entry is computed once
/// and mirrored, so the matrix is exactly symmetric and independent of the
/// thread schedule.
pub fn hamiltonian_matrix(m: &OscillatorModel, basis: &[SlaterDeterminant]) -> Result<DMatrix<f64>> {
    if let Some(bad) = basis.iter().find(|d| d.len() != m.n) {
        return Err(Error::SizeMismatch { expected: m.n, found: bad.len() });
    }
    let dim = basis.len();
    let rows: Vec<Vec<f64>> = with_pool(|| {
        (0..dim).into_par_iter().map(|i| (i..dim).map(|j| element(&basis[i], &basis[j], m.xi)).collect()).collect()
    });
    let mut h = DMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            h[(i, i + off)] = v;
            h[(i + off, i)] = v;
        }
    }
    Ok(h)
}

/// `S² = S_−S_+ + S_z(S_z+1)` over a basis closed under `S_−S_+` (a full
/// fixed-`M_s` determinant space).
pub fn s_squared_determinant_matrix(basis: &[SlaterDeterminant]) -> DMatrix<f64> {
    let index: HashMap<u128, usize> = basis.iter().enumerate().map(|(i, d)| (d.mask(), i)).collect();
    let dim = basis.len();
    let mut s2 = DMatrix::zeros(dim, dim);
    for (j, det) in basis.iter().enumerate() {
        let sz = det.ms().value();
        s2[(j, j)] += sz * (sz + 1.0);
        let mask = det.mask();
        let orbs: Vec<usize> = det.spin_orbitals().map(|s: SpinOrbital| s.orbital).collect();
        // S_+ = Σ_p a†_{pα} a_{pβ}, S_− = Σ_q a†_{qβ} a_{qα}
        for &p in &orbs {
            let Some((s1, m1)) = annihilate(mask, 2 * p + 1) else { continue };
            let Some((s2a, m2)) = create(m1, 2 * p) else { continue };
            let raised: Vec<usize> = (0..64).filter(|&q| m2 >> (2 * q) & 1 == 1).collect();
            for q in raised {
                let Some((s3, m3)) = annihilate(m2, 2 * q) else { continue };
                let Some((s4, m4)) = create(m3, 2 * q + 1) else { continue };
                if let Some(&i) = index.get(&m4) {
                    s2[(i, j)] += s1 * s2a * s3 * s4;
                }
            }
        }
    }
    s2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::det::build_basis;
    use crate::oscillator::make_model;

    #[test]
    fn x_elements() {
        assert!((x_matrix_element(0, 1) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(x_matrix_element(2, 2), 0.0);
        assert!((x_matrix_element(3, 4) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(x_matrix_element(4, 3), x_matrix_element(3, 4));
        assert_eq!(x_matrix_element(0, 2), 0.0);
    }

    #[test]
    fn core_energies() {
        assert_eq!(core_energy(0), 0.5);
        assert_eq!(core_energy(3), 3.5);
        assert_eq!(core_energy(10), 10.5);
    }

    #[test]
    fn uncoupled_diagonal() {
        let m = make_model(3, 0.0).unwrap();
        let d = SlaterDeterminant::new(&[0, 1, 2]).unwrap();
        assert_eq!(hamiltonian_element(&d, &d, &m).unwrap(), 2.5);
    }

    #[test]
    fn triple_excitation_vanishes() {
        let m = make_model(3, 0.3).unwrap();
        let a = SlaterDeterminant::new(&[0, 1, 2]).unwrap();
        let b = SlaterDeterminant::new(&[3, 4, 5]).unwrap();
        assert_eq!(hamiltonian_element(&a, &b, &m).unwrap(), 0.0);
    }

    #[test]
    fn size_mismatch() {
        let m = make_model(4, 0.1).unwrap();
        let d = SlaterDeterminant::new(&[0, 1, 2]).unwrap();
        assert!(matches!(hamiltonian_element(&d, &d, &m), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn elements_are_exactly_symmetric() {
        let m = make_model(3, 0.17).unwrap();
        let basis = build_basis(3, 5, None).unwrap();
        for a in &basis {
            for b in &basis {
                assert_eq!(hamiltonian_element(a, b, &m).unwrap(), hamiltonian_element(b, a, &m).unwrap());
            }
        }
    }

    #[test]
    fn s_squared_of_simple_states() {
        // |0α 0β 1α⟩ is a pure doublet
        let basis = build_basis(3, 2, Some(crate::spin::HalfInt(1))).unwrap();
        let s2 = s_squared_determinant_matrix(&basis);
        let i = basis.iter().position(|d| d.occupied() == [0, 1, 2]).unwrap();
        assert!((s2[(i, i)] - 0.75).abs() < 1e-14);
        assert!((&s2 - s2.transpose()).amax() < 1e-14);
    }
}
