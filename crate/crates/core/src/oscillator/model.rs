use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::poly::{hermite_norm, hermite_poly, Polynomial};
use crate::error::{Error, Result};

/// `N` identical particles on a line, each bound harmonically to the origin
/// and coupled pairwise by `ξ·x_i·x_j`.
///
/// In normal coordinates `y = U·x` the `N−1` modes `y_1…y_{N−1}` share the
/// force constant `k = 1−ξ` and the uniform mode `y_N` has `k′ = 1+(N−1)ξ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillatorModel {
    pub n: usize,
    pub xi: f64,
    pub k: f64,
    pub k_prime: f64,
    /// Rows are the normal coordinates in terms of `x`.
    pub u: Vec<Vec<f64>>,
}

/// Open interval of couplings with a purely discrete spectrum.
pub fn bound_window(n: usize) -> (f64, f64) {
    (-1.0 / (n as f64 - 1.0), 1.0)
}

pub fn make_model(n: usize, xi: f64) -> Result<OscillatorModel> {
    let u = match n {
        3 => {
            let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
            vec![
                vec![0.0, 1.0 / s2, -1.0 / s2],
                vec![2.0 / s6, -1.0 / s6, -1.0 / s6],
                vec![1.0 / s3, 1.0 / s3, 1.0 / s3],
            ]
        }
        4 => {
            let s2 = 2f64.sqrt();
            vec![
                vec![1.0 / s2, 0.0, 0.0, -1.0 / s2],
                vec![0.0, 1.0 / s2, -1.0 / s2, 0.0],
                vec![0.5, -0.5, -0.5, 0.5],
                vec![0.5, 0.5, 0.5, 0.5],
            ]
        }
        _ => return Err(Error::Domain(format!("oscillator models exist for N = 3 and N = 4, got {n}"))),
    };
    let (lower, upper) = bound_window(n);
    if !(xi > lower && xi < upper) {
        return Err(Error::UnboundModel { n, xi, lower, upper });
    }
    Ok(OscillatorModel { n, xi, k: 1.0 - xi, k_prime: 1.0 + (n as f64 - 1.0) * xi, u })
}

/// Quanta `n_1 … n_{N−1}` in the degenerate modes followed by `n_N` in the
/// uniform mode.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuantaPattern(pub Vec<usize>);

impl QuantaPattern {
    pub fn n_sym(&self) -> usize {
        self.0[..self.0.len() - 1].iter().sum()
    }

    pub fn n_last(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn degenerate(&self) -> &[usize] {
        &self.0[..self.0.len() - 1]
    }
}

/// One degenerate level, keyed by `(n_sym, n_last)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDescriptor {
    pub n_sym: usize,
    pub n_last: usize,
    pub energy: f64,
    pub degeneracy: usize,
    pub parity: i32,
    /// Irrep label → multiplicity; empty until the level is decomposed.
    #[serde(default)]
    pub irrep_mults: BTreeMap<String, usize>,
}

impl LevelDescriptor {
    pub fn key(&self) -> (usize, usize) {
        (self.n_sym, self.n_last)
    }
}

/// Number of ways to distribute `n_sym` quanta over `modes` modes.
pub fn degeneracy(modes: usize, n_sym: usize) -> usize {
    // C(n_sym + modes − 1, modes − 1)
    let mut c = 1usize;
    for i in 1..modes {
        c = c * (n_sym + i) / i;
    }
    c
}

impl OscillatorModel {
    pub fn degenerate_modes(&self) -> usize {
        self.n - 1
    }

    pub fn level_energy(&self, n_sym: usize, n_last: usize) -> f64 {
        let half_modes = self.degenerate_modes() as f64 / 2.0;
        self.k.sqrt() * (n_sym as f64 + half_modes) + self.k_prime.sqrt() * (n_last as f64 + 0.5)
    }

    pub fn level(&self, n_sym: usize, n_last: usize) -> LevelDescriptor {
        LevelDescriptor {
            n_sym,
            n_last,
            energy: self.level_energy(n_sym, n_last),
            degeneracy: degeneracy(self.degenerate_modes(), n_sym),
            parity: if (n_sym + n_last).is_multiple_of(2) { 1 } else { -1 },
            irrep_mults: BTreeMap::new(),
        }
    }

    /// Degenerate-mode quanta of the level basis, in decreasing lexicographic
    /// order: `(2,0), (1,1), (0,2)` for `N = 3, n_sym = 2`.
    pub fn level_patterns(&self, n_sym: usize) -> Vec<Vec<usize>> {
        fn rec(modes: usize, remaining: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if modes == 1 {
                cur.push(remaining);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for first in (0..=remaining).rev() {
                cur.push(first);
                rec(modes - 1, remaining - first, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.degenerate_modes(), n_sym, &mut Vec::new(), &mut out);
        out
    }

    /// Normalized eigenfunction `ψ(x)` evaluated at a point, including the
    /// Gaussian and the uniform-mode factor.
    pub fn evaluate(&self, q: &QuantaPattern, x: &[f64]) -> f64 {
        let y: Vec<f64> = self.u.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
        q.0.iter()
            .zip(&y)
            .enumerate()
            .map(|(i, (&n, &yi))| {
                let k = if i + 1 == self.n { self.k_prime } else { self.k };
                oscillator_function(n, k, yi)
            })
            .product()
    }
}

/// `φ_n(k, y)`, normalized eigenfunction of `−½d²/dy² + ½k·y²`.
pub fn oscillator_function(n: usize, k: f64, y: f64) -> f64 {
    let alpha = k.sqrt().sqrt();
    let q = alpha * y;
    let h: f64 = hermite_poly(n).iter().enumerate().map(|(p, &c)| c as f64 * q.powi(p as i32)).sum();
    (alpha / PI.sqrt()).sqrt() / hermite_norm(n) * h * (-q * q / 2.0).exp()
}

/// Closed-form energy of a quanta pattern.
pub fn exact_energy(m: &OscillatorModel, q: &QuantaPattern) -> Result<f64> {
    if q.0.len() != m.n {
        return Err(Error::SizeMismatch { expected: m.n, found: q.0.len() });
    }
    Ok(m.level_energy(q.n_sym(), q.n_last()))
}

/// Every level with `n_sym + n_last ≤ max_total_quanta`, ascending in energy
/// with `(n_sym, n_last)` breaking ties.
pub fn enumerate_levels(m: &OscillatorModel, max_total_quanta: usize) -> Vec<LevelDescriptor> {
    let mut levels: Vec<LevelDescriptor> = (0..=max_total_quanta)
        .flat_map(|n_sym| (0..=max_total_quanta - n_sym).map(move |n_last| (n_sym, n_last)))
        .map(|(n_sym, n_last)| m.level(n_sym, n_last))
        .collect();
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.key().cmp(&b.key())));
    levels
}

/// Pairs of distinct levels whose energies coincide within `tol`. These are
/// never merged; callers report them.
pub fn accidental_degeneracies(levels: &[LevelDescriptor], tol: f64) -> Vec<((usize, usize), (usize, usize))> {
    let mut out = Vec::new();
    for (i, a) in levels.iter().enumerate() {
        for b in &levels[i + 1..] {
            if (a.energy - b.energy).abs() <= tol {
                out.push((a.key(), b.key()));
            }
        }
    }
    out
}

/// Polynomial part of an eigenfunction in the degenerate modes, with the
/// Gaussian and the `y_N` factor left implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteGaussian {
    /// Polynomial in `y_1 … y_{N−1}`.
    pub poly: Polynomial,
    /// Constant that makes `normalization · poly · exp(−√k|y|²/2)` unit-normed
    /// over the degenerate modes.
    pub normalization: f64,
}

/// `∏ H_{n_i}(k^{1/4} y_i)` with its normalization constant.
pub fn eigenfunction(m: &OscillatorModel, q: &QuantaPattern) -> Result<HermiteGaussian> {
    if q.0.len() != m.n {
        return Err(Error::SizeMismatch { expected: m.n, found: q.0.len() });
    }
    let modes = m.degenerate_modes();
    let alpha = m.k.sqrt().sqrt();
    let mut poly = Polynomial::constant(modes, 1.0);
    let mut normalization = 1.0;
    for (i, &n) in q.degenerate().iter().enumerate() {
        let coeffs: Vec<f64> =
            hermite_poly(n).iter().enumerate().map(|(p, &c)| c as f64 * alpha.powi(p as i32)).collect();
        poly = poly.mul(&Polynomial::univariate(modes, i, &coeffs));
        normalization *= (alpha / PI.sqrt()).sqrt() / hermite_norm(n);
    }
    Ok(HermiteGaussian { poly, normalization })
}
