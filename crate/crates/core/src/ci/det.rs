//! Spin-orbitals and Slater determinants over oscillator orbitals.
//!
//! Spin-orbital `2n` is `φ_n α` and `2n+1` is `φ_n β`, so the canonical order
//! is by orbital, then spin. A determinant stores its occupied spin-orbitals
//! in increasing order; that order fixes its sign.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{HalfInt, Spin};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinOrbital {
    pub orbital: usize,
    pub spin: Spin,
}

impl SpinOrbital {
    pub fn index(self) -> usize {
        2 * self.orbital + usize::from(self.spin == Spin::Beta)
    }

    pub fn from_index(i: usize) -> Self {
        Self { orbital: i / 2, spin: if i.is_multiple_of(2) { Spin::Alpha } else { Spin::Beta } }
    }
}

impl fmt::Display for SpinOrbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.orbital, if self.spin == Spin::Alpha { "α" } else { "β" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlaterDeterminant {
    occupied: Vec<usize>,
}

impl SlaterDeterminant {
    /// Sorts `indices` into canonical order and returns the permutation sign:
    /// `|χ_{i1} … χ_{iN}| = sign · |canonical|`.
    pub fn canonicalize(indices: &[usize]) -> Result<(i32, Self)> {
        let mut occ = indices.to_vec();
        let mut sign = 1;
        for i in 0..occ.len() {
            for j in 0..occ.len() - 1 - i {
                if occ[j] > occ[j + 1] {
                    occ.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if occ.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("spin-orbital repeated in {indices:?}")));
        }
        if occ.last().is_some_and(|&v| v >= 128) {
            return Err(Error::Domain("spin-orbital index beyond 127".into()));
        }
        Ok((sign, Self { occupied: occ }))
    }

    /// Determinant from spin-orbitals already in canonical order.
    pub fn new(indices: &[usize]) -> Result<Self> {
        let (sign, det) = Self::canonicalize(indices)?;
        if sign != 1 || det.occupied != indices {
            return Err(Error::Domain(format!("{indices:?} is not in canonical order")));
        }
        Ok(det)
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn spin_orbitals(&self) -> impl Iterator<Item = SpinOrbital> + '_ {
        self.occupied.iter().map(|&i| SpinOrbital::from_index(i))
    }

    pub fn mask(&self) -> u128 {
        self.occupied.iter().fold(0u128, |m, &i| m | 1 << i)
    }

    pub fn from_mask(mask: u128) -> Self {
        Self { occupied: (0..128).filter(|&i| mask >> i & 1 == 1).collect() }
    }

    pub fn ms(&self) -> HalfInt {
        HalfInt(self.spin_orbitals().map(|s| s.spin.twice_ms()).sum())
    }

    /// Parity of the total oscillator quanta, `(−1)^{Σ n}`.
    pub fn parity(&self) -> i32 {
        if self.spin_orbitals().map(|s| s.orbital).sum::<usize>() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for SlaterDeterminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, so) in self.spin_orbitals().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{so}")?;
        }
        write!(f, "|")
    }
}

/// Sign from moving an operator on spin-orbital `i` past the occupied
/// spin-orbitals below it.
fn jordan_wigner_sign(mask: u128, i: usize) -> f64 {
    let below = mask & ((1u128 << i) - 1);
    if below.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `a_i |mask⟩` as `(sign, mask′)`, or `None` when `i` is empty.
pub fn annihilate(mask: u128, i: usize) -> Option<(f64, u128)> {
    (mask >> i & 1 == 1).then(|| (jordan_wigner_sign(mask, i), mask & !(1 << i)))
}

/// `a†_i |mask⟩` as `(sign, mask′)`, or `None` when `i` is occupied.
pub fn create(mask: u128, i: usize) -> Option<(f64, u128)> {
    (mask >> i & 1 == 0).then(|| (jordan_wigner_sign(mask, i), mask | 1 << i))
}

/// All `C(2M, N)` determinants, optionally restricted to one `M_s`, in
/// lexicographic order of their occupied spin-orbitals.
pub fn build_basis(n: usize, orbitals: usize, ms: Option<HalfInt>) -> Result<Vec<SlaterDeterminant>> {
    let spin_orbitals = 2 * orbitals;
    if spin_orbitals < n {
        return Err(Error::InfeasibleBasis { particles: n, orbitals, spin_orbitals });
    }
    if spin_orbitals > 128 {
        return Err(Error::Domain(format!("{orbitals} orbitals exceed the 64-orbital limit")));
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let det = SlaterDeterminant { occupied: idx.clone() };
        if ms.is_none_or(|m| det.ms() == m) {
            out.push(det);
        }
        // next combination
        let Some(pos) = (0..n).rev().find(|&k| idx[k] < spin_orbitals - n + k) else {
            break;
        };
        idx[pos] += 1;
        for k in pos + 1..n {
            idx[k] = idx[k - 1] + 1;
        }
    }
    Ok(out)
}
