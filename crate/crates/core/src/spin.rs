//! Spin space of `N` spin-½ particles and the antisymmetry selection rule.
//!
//! Product states are indexed by bit strings with particle 1 as the most
//! significant bit and `α = 0`, `β = 1`, so for `N = 2` the order is
//! `αα, αβ, βα, ββ`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levelsym::{character_projector, ROUNDING_GUARD};
use crate::oscillator::{
    hermite_norm, hermite_poly, level_representation, LevelDescriptor, OscillatorModel, Polynomial,
};
use crate::symgroup::{character_table, CharacterTable, IrrepId, Permutation};

/// A non-negative or negative multiple of ½, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i32);

impl HalfInt {
    pub fn from_f64(v: f64) -> Option<Self> {
        let twice = 2.0 * v;
        ((twice - twice.round()).abs() < ROUNDING_GUARD).then(|| HalfInt(twice.round() as i32))
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `S(S+1)`.
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }

    /// Spin whose `S(S+1)` is `s2`, if any within the rounding guard.
    pub fn from_casimir(s2: f64) -> Option<Self> {
        Self::from_f64((-1.0 + (1.0 + 4.0 * s2.max(0.0)).sqrt()) / 2.0)
    }

    pub fn multiplicity(self) -> usize {
        (self.0 + 1) as usize
    }

    pub fn multiplet_name(self) -> &'static str {
        match self.0 {
            0 => "singlet",
            1 => "doublet",
            2 => "triplet",
            3 => "quadruplet",
            4 => "quintuplet",
            5 => "sextet",
            6 => "septet",
            _ => "multiplet",
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("not a half-integer: {s}"));
        let s = s.trim();
        if let Some(num) = s.strip_suffix("/2") {
            let v: i32 = num.trim().parse().map_err(|_| bad())?;
            if v % 2 == 0 {
                return Err(bad());
            }
            Ok(HalfInt(v))
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            HalfInt::from_f64(v).ok_or_else(bad)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Spin {
    #[serde(rename = "a")]
    Alpha,
    #[serde(rename = "b")]
    Beta,
}

impl Spin {
    pub fn twice_ms(self) -> i32 {
        match self {
            Spin::Alpha => 1,
            Spin::Beta => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinProduct {
    pub pattern: Vec<Spin>,
}

impl SpinProduct {
    pub fn from_index(n: usize, index: usize) -> Self {
        let pattern = (0..n).map(|i| if index >> (n - 1 - i) & 1 == 0 { Spin::Alpha } else { Spin::Beta }).collect();
        Self { pattern }
    }

    pub fn index(&self) -> usize {
        self.pattern.iter().fold(0, |acc, s| acc << 1 | usize::from(*s == Spin::Beta))
    }

    pub fn all(n: usize) -> Vec<Self> {
        (0..1 << n).map(|i| Self::from_index(n, i)).collect()
    }

    pub fn ms(&self) -> HalfInt {
        HalfInt(self.pattern.iter().map(|s| s.twice_ms()).sum())
    }
}

impl fmt::Display for SpinProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.pattern {
            f.write_str(if *s == Spin::Alpha { "α" } else { "β" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SpinProduct {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pattern = s
            .chars()
            .map(|c| match c {
                'a' | 'α' | 'u' | '+' => Ok(Spin::Alpha),
                'b' | 'β' | 'd' | '-' => Ok(Spin::Beta),
                _ => Err(Error::Domain(format!("bad spin label {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pattern })
    }
}

/// `2^N × 2^N` matrix of `(P̂g)(σ) = g(σ_{p(1)}, …, σ_{p(N)})`, the same
/// substitution convention as the spatial action.
pub fn spin_permutation_matrix(n: usize, p: &Permutation) -> Result<DMatrix<f64>> {
    if p.n() != n {
        return Err(Error::SizeMismatch { expected: n, found: p.n() });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for (src, s) in SpinProduct::all(n).iter().enumerate() {
        // image has spin s_i at slot p(i)
        let mut moved = s.pattern.clone();
        for i in 0..n {
            moved[p.apply(i)] = s.pattern[i];
        }
        m[(SpinProduct { pattern: moved }.index(), src)] = 1.0;
    }
    Ok(m)
}

/// Trace of a permutation on the spin space, optionally restricted to one
/// `M_s`: the number of products it leaves fixed.
pub fn spin_character(n: usize, p: &Permutation, ms: Option<HalfInt>) -> i64 {
    debug_assert_eq!(n, p.n());
    p.cycles()
        .iter()
        .fold(BTreeMap::from([(0i32, 1i64)]), |acc, cycle| {
            // a cycle fixes a product only if all its spins agree
            let mut next = BTreeMap::new();
            for (twice, count) in acc {
                for delta in [cycle.len() as i32, -(cycle.len() as i32)] {
                    *next.entry(twice + delta).or_insert(0) += count;
                }
            }
            next
        })
        .into_iter()
        .filter(|(twice, _)| ms.is_none_or(|m| m.0 == *twice))
        .map(|(_, c)| c)
        .sum()
}

fn decompose_characters(t: &CharacterTable, chi: &[i64]) -> Result<BTreeMap<IrrepId, usize>> {
    let order = t.order() as i64;
    let mut out = BTreeMap::new();
    for (g, row) in t.irreps.iter().zip(&t.chars) {
        let sum: i64 = t.classes.iter().zip(row).zip(chi).map(|((c, &a), &b)| c.size as i64 * a * b).sum();
        if sum % order != 0 || sum < 0 {
            return Err(Error::NumericalIntegrity(format!("multiplicity of {g} is {sum}/{order}")));
        }
        out.insert(g.clone(), (sum / order) as usize);
    }
    Ok(out)
}

pub(crate) fn class_spin_characters(t: &CharacterTable, ms: Option<HalfInt>) -> Vec<i64> {
    t.classes
        .iter()
        .map(|c| {
            let rep = representative(t.n, c.cycle_type.parts());
            spin_character(t.n, &rep, ms)
        })
        .collect()
}

/// A permutation with the given cycle lengths.
pub(crate) fn representative(n: usize, parts: &[usize]) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    let mut start = 0;
    for &len in parts {
        for i in 0..len {
            images[start + i] = start + (i + 1) % len;
        }
        start += len;
    }
    Permutation::from_images(images).expect("cycle layout is a bijection")
}

/// Irrep content of the full `2^N` spin space.
pub fn spin_irrep_multiplicities(n: usize, t: &CharacterTable) -> Result<BTreeMap<IrrepId, usize>> {
    if t.n != n {
        return Err(Error::SizeMismatch { expected: n, found: t.n });
    }
    decompose_characters(t, &class_spin_characters(t, None))
}

/// Irrep carried by the multiplicity space of the spin-`S` multiplets:
/// characters of the `M_s = S` subspace minus those of `M_s = S+1`.
pub fn spin_multiplet_irreps(t: &CharacterTable, s: HalfInt) -> Result<BTreeMap<IrrepId, usize>> {
    let top = class_spin_characters(t, Some(s));
    let above = class_spin_characters(t, Some(HalfInt(s.0 + 2)));
    let chi: Vec<i64> = top.iter().zip(&above).map(|(a, b)| a - b).collect();
    decompose_characters(t, &chi)
}

fn site_operator(n: usize, site: usize, op: &DMatrix<f64>) -> DMatrix<f64> {
    (0..n).fold(DMatrix::identity(1, 1), |acc, i| {
        if i == site {
            acc.kronecker(op)
        } else {
            acc.kronecker(&DMatrix::identity(2, 2))
        }
    })
}

/// `S² = Σ_ij s_i·s_j` on the product space.
pub fn s_squared_matrix(n: usize) -> DMatrix<f64> {
    let sz = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]);
    let sp = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let sm = sp.transpose();
    let z: Vec<_> = (0..n).map(|i| site_operator(n, i, &sz)).collect();
    let p: Vec<_> = (0..n).map(|i| site_operator(n, i, &sp)).collect();
    let m: Vec<_> = (0..n).map(|i| site_operator(n, i, &sm)).collect();
    let dim = 1usize << n;
    let mut s2 = DMatrix::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            s2 += &z[i] * &z[j] + (&p[i] * &m[j] + &m[i] * &p[j]) * 0.5;
        }
    }
    s2
}

/// Total spin `S` → number of multiplets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultipletTable(pub BTreeMap<HalfInt, usize>);

impl MultipletTable {
    pub fn count(&self, s: HalfInt) -> usize {
        self.0.get(&s).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> usize {
        self.0.iter().map(|(s, c)| s.multiplicity() * c).sum()
    }
}

/// Multiplets from the eigenspaces of `S²`.
pub fn multiplet_table(n: usize) -> Result<MultipletTable> {
    if n == 0 {
        return Err(Error::Domain("multiplet table needs N >= 1".into()));
    }
    let eig = SymmetricEigen::new(s_squared_matrix(n));
    let mut dims: BTreeMap<HalfInt, usize> = BTreeMap::new();
    for &lambda in eig.eigenvalues.iter() {
        let s = HalfInt::from_casimir(lambda)
            .filter(|s| (s.casimir() - lambda).abs() < ROUNDING_GUARD)
            .ok_or_else(|| Error::NumericalIntegrity(format!("S² eigenvalue {lambda} is not S(S+1)")))?;
        *dims.entry(s).or_insert(0) += 1;
    }
    let mut table = BTreeMap::new();
    for (s, d) in dims {
        if d % s.multiplicity() != 0 {
            return Err(Error::NumericalIntegrity(format!(
                "S = {s} eigenspace has dimension {d}, not a multiple of {}",
                s.multiplicity()
            )));
        }
        table.insert(s, d / s.multiplicity());
    }
    Ok(MultipletTable(table))
}

/// Spatial irrep and the total spins it can be paired with; empty `spins`
/// means forbidden.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllowedEntry {
    pub irrep: IrrepId,
    pub spins: Vec<HalfInt>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllowedIrrepMap {
    pub n: usize,
    pub entries: Vec<AllowedEntry>,
}

impl AllowedIrrepMap {
    pub fn get(&self, label: &str) -> Option<&AllowedEntry> {
        self.entries.iter().find(|e| e.irrep.label == label)
    }

    pub fn is_allowed(&self, label: &str) -> bool {
        self.get(label).is_some_and(|e| !e.spins.is_empty())
    }

    pub fn forbidden(&self) -> Vec<&IrrepId> {
        self.entries.iter().filter(|e| e.spins.is_empty()).map(|e| &e.irrep).collect()
    }
}

/// Character route: `Γ` pairs with spin `S` iff the sign irrep occurs in
/// `Γ ⊗ Σ_S`, where `Σ_S` is the `S_N` irrep of the spin-`S` multiplets.
pub fn allowed_by_characters(t: &CharacterTable) -> Result<AllowedIrrepMap> {
    let sign_idx = t.irrep_index(t.sign_irrep().ok_or_else(|| Error::Domain("table has no sign irrep".into()))?)?;
    let spins: Vec<HalfInt> = multiplet_table(t.n)?.0.keys().copied().collect();
    let mut spin_chars = Vec::new();
    for &s in &spins {
        let top = class_spin_characters(t, Some(s));
        let above = class_spin_characters(t, Some(HalfInt(s.0 + 2)));
        spin_chars.push((s, top.iter().zip(&above).map(|(a, b)| a - b).collect::<Vec<i64>>()));
    }
    let order = t.order() as i64;
    let mut entries = Vec::new();
    for (g, row) in t.irreps.iter().zip(&t.chars) {
        let mut allowed = Vec::new();
        for (s, chi_s) in &spin_chars {
            let sum: i64 =
                (0..t.classes.len()).map(|c| t.classes[c].size as i64 * row[c] * chi_s[c] * t.chars[sign_idx][c]).sum();
            if sum % order != 0 {
                return Err(Error::NumericalIntegrity(format!("sign multiplicity in {g}⊗S={s} is {sum}/{order}")));
            }
            if sum != 0 {
                allowed.push(*s);
            }
        }
        allowed.sort_by(|a, b| b.cmp(a));
        entries.push(AllowedEntry { irrep: g.clone(), spins: allowed });
    }
    Ok(AllowedIrrepMap { n: t.n, entries })
}

/// One-particle factor `x^power·ω` of a determinant in the monomial expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonomialOrbital {
    pub power: u32,
    pub spin: Spin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminantTerm {
    pub orbitals: Vec<MonomialOrbital>,
    pub coefficient: f64,
}

/// Result of `A·[ω(1)…ω(N)·P_Γ f]` for one seed and one spin product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntisymmetrizedState {
    pub nonzero: bool,
    /// Norm of the antisymmetrized function for unit-normed input.
    pub norm: f64,
    /// `⟨S²⟩` of the result, when nonzero.
    pub s_squared: Option<f64>,
    /// Expansion over determinants `|x^{a_1}ω_1 … x^{a_N}ω_N|`, each
    /// multiplied by the symmetric Gaussian and uniform-mode factors of the
    /// level. Empty when the result vanishes.
    pub determinants: Vec<DeterminantTerm>,
}

pub const ZERO_THRESHOLD: f64 = 1e-8;

type Representation = Vec<(Permutation, DMatrix<f64>)>;

fn level_data(m: &OscillatorModel, level: &LevelDescriptor) -> Result<(Representation, Vec<DMatrix<f64>>)> {
    let rep = level_representation(m, level)?;
    let spin: Vec<DMatrix<f64>> = rep.iter().map(|(p, _)| spin_permutation_matrix(m.n, p)).collect::<Result<_>>()?;
    Ok((rep, spin))
}

/// Antisymmetrizes `ω_pattern ⊗ P_Γ e_seed`, where `e_seed` is the `seed`-th
/// orthonormal basis function of the level.
pub fn antisymmetrize_space_spin(
    m: &OscillatorModel,
    level: &LevelDescriptor,
    irrep: &IrrepId,
    spin_pattern: &SpinProduct,
    seed: usize,
) -> Result<AntisymmetrizedState> {
    let t = character_table(m.n)?;
    let (rep, spin) = level_data(m, level)?;
    antisymmetrize_with(m, &t, &rep, &spin, level, irrep, spin_pattern, seed, true)
}

#[allow(clippy::too_many_arguments)]
fn antisymmetrize_with(
    m: &OscillatorModel,
    t: &CharacterTable,
    rep: &[(Permutation, DMatrix<f64>)],
    spin: &[DMatrix<f64>],
    level: &LevelDescriptor,
    irrep: &IrrepId,
    spin_pattern: &SpinProduct,
    seed: usize,
    expand: bool,
) -> Result<AntisymmetrizedState> {
    if spin_pattern.pattern.len() != m.n {
        return Err(Error::SizeMismatch { expected: m.n, found: spin_pattern.pattern.len() });
    }
    if seed >= level.degeneracy {
        return Err(Error::Domain(format!("seed {seed} outside level of degeneracy {}", level.degeneracy)));
    }
    let zero = AntisymmetrizedState { nonzero: false, norm: 0.0, s_squared: None, determinants: Vec::new() };
    let proj = character_projector(t, irrep, rep)?;
    let f = proj.column(seed).into_owned();
    let fnorm = f.norm();
    if fnorm < ZERO_THRESHOLD {
        return Ok(zero);
    }
    let f = f / fnorm;
    let dspin = 1usize << m.n;
    // X[i][σ] holds the coefficient of e_i ⊗ |σ⟩; (D⊗S)·vec(X) = D·X·Sᵀ
    let mut x0 = DMatrix::zeros(level.degeneracy, dspin);
    x0.set_column(spin_pattern.index(), &f);
    let mut acc = DMatrix::zeros(level.degeneracy, dspin);
    for ((p, d), s) in rep.iter().zip(spin) {
        acc += (d * &x0 * s.transpose()) * p.parity() as f64;
    }
    acc /= rep.len() as f64;
    let norm = acc.norm();
    if norm < ZERO_THRESHOLD {
        return Ok(AntisymmetrizedState { norm, ..zero });
    }
    let s2 = s_squared_matrix(m.n);
    let s_squared = (acc.component_mul(&(&acc * s2.transpose()))).sum() / (norm * norm);
    let determinants = if expand { determinant_expansion(m, level, &acc)? } else { Vec::new() };
    Ok(AntisymmetrizedState { nonzero: true, norm, s_squared: Some(s_squared), determinants })
}

/// Expands a space-spin function (level basis ⊗ spin products) over
/// determinants of monomial spin-orbitals in the particle coordinates.
fn determinant_expansion(
    m: &OscillatorModel,
    level: &LevelDescriptor,
    x: &DMatrix<f64>,
) -> Result<Vec<DeterminantTerm>> {
    let n = m.n;
    let modes = m.degenerate_modes();
    let alpha = m.k.sqrt().sqrt();
    // q_i = α·Σ_l U_il x_l
    let forms: Vec<Vec<f64>> = (0..modes).map(|i| m.u[i].iter().map(|v| alpha * v).collect()).collect();
    let mut spatial = Vec::new();
    for pat in m.level_patterns(level.n_sym) {
        let mut h = Polynomial::constant(modes, 1.0);
        for (i, &k) in pat.iter().enumerate() {
            let coeffs: Vec<f64> = hermite_poly(k).iter().map(|&c| c as f64).collect();
            h = h.mul(&Polynomial::univariate(modes, i, &coeffs));
        }
        let norm: f64 = pat.iter().map(|&k| hermite_norm(k)).product();
        spatial.push(h.scale(1.0 / norm).substitute_linear(&forms));
    }
    let nfact: f64 = (1..=n).map(|v| v as f64).product();
    let mut dets: BTreeMap<Vec<MonomialOrbital>, f64> = BTreeMap::new();
    for (sigma, sp) in SpinProduct::all(n).iter().enumerate() {
        for (i, poly) in spatial.iter().enumerate() {
            let c = x[(i, sigma)];
            if c == 0.0 {
                continue;
            }
            for (exps, coef) in poly.terms() {
                let mut orbs: Vec<MonomialOrbital> =
                    exps.iter().zip(&sp.pattern).map(|(&power, &spin)| MonomialOrbital { power, spin }).collect();
                // A·∏χ_i(i) = |χ_1…χ_N| / √N!; sort into canonical order
                let mut sign = 1.0;
                for a in 0..n {
                    for b in 0..n - 1 - a {
                        if orbs[b] > orbs[b + 1] {
                            orbs.swap(b, b + 1);
                            sign = -sign;
                        }
                    }
                }
                if orbs.windows(2).any(|w| w[0] == w[1]) {
                    continue;
                }
                *dets.entry(orbs).or_insert(0.0) += sign * c * coef / nfact.sqrt();
            }
        }
    }
    let scale = dets.values().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(dets
        .into_iter()
        .filter(|(_, c)| c.abs() > 1e-10 * scale)
        .map(|(orbitals, coefficient)| DeterminantTerm { orbitals, coefficient })
        .collect())
}

/// Spins reached by antisymmetrizing every seed of every spin product for
/// one irrep on one level. Empty means nothing survives.
pub fn constructive_spins(m: &OscillatorModel, level: &LevelDescriptor, irrep: &IrrepId) -> Result<Vec<HalfInt>> {
    let t = character_table(m.n)?;
    let (rep, spin) = level_data(m, level)?;
    let mut found = Vec::new();
    for sp in SpinProduct::all(m.n) {
        for seed in 0..level.degeneracy {
            let st = antisymmetrize_with(m, &t, &rep, &spin, level, irrep, &sp, seed, false)?;
            if let Some(s2) = st.s_squared {
                let s = HalfInt::from_casimir(s2)
                    .filter(|s| (s.casimir() - s2).abs() < ROUNDING_GUARD)
                    .ok_or_else(|| Error::NumericalIntegrity(format!("⟨S²⟩ = {s2} is not S(S+1)")))?;
                if !found.contains(&s) {
                    found.push(s);
                }
            }
        }
    }
    found.sort_by(|a, b| b.cmp(a));
    Ok(found)
}

/// Constructive route over the lowest level (uniform-mode quanta 0) that
/// contains each irrep, searching up to `max_n_sym`.
pub fn allowed_by_construction(m: &OscillatorModel, max_n_sym: usize) -> Result<AllowedIrrepMap> {
    let t = character_table(m.n)?;
    let mut entries = Vec::new();
    for g in &t.irreps {
        let mut spins = None;
        for n_sym in 0..=max_n_sym {
            let level = crate::levelsym::decompose_level(m, &m.level(n_sym, 0), &t)?;
            if level.irrep_mults.get(&g.label).copied().unwrap_or(0) > 0 {
                spins = Some(constructive_spins(m, &level, g)?);
                break;
            }
        }
        let spins = spins
            .ok_or_else(|| Error::Domain(format!("irrep {g} does not occur in any level up to n_sym = {max_n_sym}")))?;
        entries.push(AllowedEntry { irrep: g.clone(), spins });
    }
    Ok(AllowedIrrepMap { n: m.n, entries })
}

/// Allowed spatial irreps by characters; with `verify_constructive`, also by
/// explicit antisymmetrization on the `ξ` model, failing if the routes differ.
pub fn allowed_spatial_irreps(n: usize, verify_constructive: Option<f64>) -> Result<AllowedIrrepMap> {
    let t = character_table(n)?;
    let by_chars = allowed_by_characters(&t)?;
    if let Some(xi) = verify_constructive {
        let m = crate::oscillator::make_model(n, xi)?;
        let built = allowed_by_construction(&m, 8)?;
        if built != by_chars {
            return Err(Error::Consistency(format!(
                "character route {by_chars:?} disagrees with constructive route {built:?}"
            )));
        }
    }
    Ok(by_chars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::make_model;

    fn hi(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    #[test]
    fn half_int_parsing_and_display() {
        assert_eq!(hi("3/2"), HalfInt(3));
        assert_eq!(hi("1"), HalfInt(2));
        assert_eq!(hi("-1/2"), HalfInt(-1));
        assert_eq!(hi("0.5"), HalfInt(1));
        assert!("2/2".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt(3).to_string(), "3/2");
        assert_eq!(HalfInt(4).to_string(), "2");
    }

    #[test]
    fn spin_matrix_examples() {
        assert_eq!(spin_permutation_matrix(3, &Permutation::identity(3)).unwrap(), DMatrix::identity(8, 8));
        let swap = spin_permutation_matrix(2, &Permutation::transposition(2, 1, 2).unwrap()).unwrap();
        let want = DMatrix::from_row_slice(4, 4, &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.]);
        assert_eq!(swap, want);
        let cyc = spin_permutation_matrix(3, &Permutation::new(&[2, 3, 1]).unwrap()).unwrap();
        assert_eq!(cyc.trace(), 2.0);
    }

    #[test]
    fn spin_matrices_are_homomorphic() {
        for a in Permutation::all(3) {
            for b in Permutation::all(3) {
                let lhs = spin_permutation_matrix(3, &a).unwrap() * spin_permutation_matrix(3, &b).unwrap();
                assert_eq!(lhs, spin_permutation_matrix(3, &a.compose(&b).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn spin_character_counts_fixed_products() {
        for n in 2..=5 {
            for p in Permutation::all(n) {
                let mat = spin_permutation_matrix(n, &p).unwrap();
                assert_eq!(mat.trace() as i64, spin_character(n, &p, None));
                for twice in (-(n as i32)..=n as i32).step_by(2) {
                    let fixed = SpinProduct::all(n)
                        .iter()
                        .filter(|s| s.ms().0 == twice && mat[(s.index(), s.index())] == 1.0)
                        .count() as i64;
                    assert_eq!(fixed, spin_character(n, &p, Some(HalfInt(twice))));
                }
            }
        }
    }

    #[test]
    fn spin_space_content() {
        let t3 = character_table(3).unwrap();
        let m3 = spin_irrep_multiplicities(3, &t3).unwrap();
        assert_eq!(m3[t3.irrep("A2").unwrap()], 0);
        assert_eq!(m3.iter().map(|(g, k)| g.dim * k).sum::<usize>(), 8);
        assert_eq!((m3[t3.irrep("A1").unwrap()], m3[t3.irrep("E").unwrap()]), (4, 2));
        let t4 = character_table(4).unwrap();
        let m4 = spin_irrep_multiplicities(4, &t4).unwrap();
        assert_eq!(m4[t4.irrep("A2").unwrap()], 0);
        assert_eq!(m4.iter().map(|(g, k)| g.dim * k).sum::<usize>(), 16);
    }

    #[test]
    fn four_spins_are_annihilated_by_antisymmetrizer() {
        let perms = Permutation::all(4);
        let mut a = DMatrix::zeros(16, 16);
        for p in &perms {
            a += spin_permutation_matrix(4, p).unwrap() * p.parity() as f64;
        }
        assert!(a.amax() < 1e-15);
    }

    #[test]
    fn multiplets() {
        let t3 = multiplet_table(3).unwrap();
        assert_eq!((t3.count(hi("3/2")), t3.count(hi("1/2"))), (1, 2));
        let t4 = multiplet_table(4).unwrap();
        assert_eq!((t4.count(hi("2")), t4.count(hi("1")), t4.count(hi("0"))), (1, 3, 2));
        let t2 = multiplet_table(2).unwrap();
        assert_eq!((t2.count(hi("1")), t2.count(hi("0"))), (1, 1));
        for n in 1..=6 {
            assert_eq!(multiplet_table(n).unwrap().dimension(), 1 << n);
        }
    }

    #[test]
    fn s_squared_commutes_with_permutations() {
        for n in [3, 4] {
            let s2 = s_squared_matrix(n);
            for p in Permutation::all(n) {
                let sp = spin_permutation_matrix(n, &p).unwrap();
                assert!((&s2 * &sp - &sp * &s2).amax() < 1e-12);
            }
        }
    }

    fn summary(map: &AllowedIrrepMap) -> Vec<(String, Vec<String>)> {
        map.entries.iter().map(|e| (e.irrep.label.clone(), e.spins.iter().map(ToString::to_string).collect())).collect()
    }

    #[test]
    fn allowed_by_characters_n3_n4() {
        let a3 = allowed_by_characters(&character_table(3).unwrap()).unwrap();
        assert_eq!(
            summary(&a3),
            vec![("A1".into(), vec![]), ("A2".into(), vec!["3/2".into()]), ("E".into(), vec!["1/2".into()])]
        );
        let a4 = allowed_by_characters(&character_table(4).unwrap()).unwrap();
        assert_eq!(
            summary(&a4),
            vec![
                ("A1".into(), vec![]),
                ("A2".into(), vec!["2".into()]),
                ("E".into(), vec!["0".into()]),
                ("T1".into(), vec!["1".into()]),
                ("T2".into(), vec![]),
            ]
        );
    }

    #[test]
    fn constructive_examples_n3() {
        let m = make_model(3, 0.1).unwrap();
        let t = character_table(3).unwrap();
        let a1 = t.irrep("A1").unwrap();
        let level0 = m.level(0, 0);
        for sp in SpinProduct::all(3) {
            assert!(!antisymmetrize_space_spin(&m, &level0, a1, &sp, 0).unwrap().nonzero);
        }
        let a2 =
            antisymmetrize_space_spin(&m, &m.level(3, 0), t.irrep("A2").unwrap(), &"aaa".parse().unwrap(), 0).unwrap();
        assert!(a2.nonzero);
        assert!((a2.s_squared.unwrap() - 3.75).abs() < 1e-9);
        assert!(!a2.determinants.is_empty());
        let level1 = m.level(1, 0);
        for seed in 0..2 {
            let e =
                antisymmetrize_space_spin(&m, &level1, t.irrep("E").unwrap(), &"aaa".parse().unwrap(), seed).unwrap();
            assert!(!e.nonzero);
            assert!(e.determinants.is_empty());
        }
        let e = antisymmetrize_space_spin(&m, &level1, t.irrep("E").unwrap(), &"aab".parse().unwrap(), 0).unwrap();
        assert!(e.nonzero);
        assert!((e.s_squared.unwrap() - 0.75).abs() < 1e-9);
    }

    #[test]
    fn determinant_expansion_of_e_doublet() {
        // n_sym = 1 spatial functions are linear in x; the surviving doublet
        // is a combination of determinants |x^a ω, x^b ω', x^c ω''| with
        // powers summing to one.
        let m = make_model(3, 0.1).unwrap();
        let t = character_table(3).unwrap();
        let st =
            antisymmetrize_space_spin(&m, &m.level(1, 0), t.irrep("E").unwrap(), &"aab".parse().unwrap(), 1).unwrap();
        assert!(st.nonzero);
        for d in &st.determinants {
            assert_eq!(d.orbitals.iter().map(|o| o.power).sum::<u32>(), 1);
            assert_eq!(d.orbitals.iter().map(|o| o.spin.twice_ms()).sum::<i32>(), 1);
        }
    }

    #[test]
    fn routes_agree() {
        for n in [3, 4] {
            assert!(allowed_spatial_irreps(n, Some(0.1)).is_ok());
        }
    }
}
