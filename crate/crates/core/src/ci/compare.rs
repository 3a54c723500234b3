//! Matching CI eigenvalues against the exact spectrum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::det::build_basis;
use super::solve::{ci_solve, run_ci, CiResult};
use crate::error::{Error, Result};
use crate::levelsym::decompose_level;
use crate::oscillator::{enumerate_levels, make_model, LevelDescriptor, OscillatorModel};
use crate::spin::{allowed_spatial_irreps, class_spin_characters, AllowedIrrepMap, HalfInt};
use crate::symgroup::{character_table, CharacterTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedState {
    pub ci_energy: f64,
    pub exact_energy: f64,
    pub quanta_key: (usize, usize),
    #[serde(rename = "S")]
    pub s: HalfInt,
    pub ms: HalfInt,
    pub parity: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MissingLevel {
    pub quanta_key: (usize, usize),
    pub energy: f64,
    pub irrep_mults: BTreeMap<String, usize>,
    /// True when every irrep in the level is forbidden.
    pub forbidden_only: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpuriousState {
    pub ci_energy: f64,
    #[serde(rename = "S")]
    pub s: HalfInt,
    pub ms: HalfInt,
    pub parity: i32,
    /// Closest exact level of either symmetry, if any.
    pub nearest: Option<((usize, usize), f64)>,
}

/// An allowed level that was matched by fewer CI states than the antisymmetric
/// part of `level ⊗ spin` predicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncompleteLevel {
    pub quanta_key: (usize, usize),
    pub energy: f64,
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub xi: f64,
    pub orbitals: usize,
    #[serde(with = "crate::serde_float")]
    pub tol: f64,
    /// CI states at or above this energy are not classified.
    #[serde(with = "crate::serde_float")]
    pub horizon: f64,
    /// Lowest energy of a level outside the supplied exact list.
    #[serde(with = "crate::serde_float")]
    pub completeness_energy: f64,
    pub vacuous: bool,
    pub matched: Vec<MatchedState>,
    pub missing: Vec<MissingLevel>,
    pub spurious: Vec<SpuriousState>,
    pub incomplete: Vec<IncompleteLevel>,
    pub unclassified: usize,
}

impl ComparisonReport {
    /// The experiment succeeded: nothing spurious, nothing allowed was lost,
    /// and the tolerance actually discriminated between levels.
    pub fn verified(&self) -> bool {
        !self.vacuous
            && self.spurious.is_empty()
            && self.incomplete.is_empty()
            && self.missing.iter().all(|l| l.forbidden_only)
    }
}

fn orbital_count(ci: &CiResult) -> usize {
    ci.basis.iter().flat_map(|d| d.spin_orbitals()).map(|s| s.orbital + 1).max().unwrap_or(0)
}

/// Energy below which every `(M_s, parity)` block of `ci` agrees with the
/// same calculation in `M − 2` orbitals to within `tol`.
///
/// Within a block the `k`-th eigenvalues are compared pairwise; the first `k`
/// whose shift exceeds `tol`, or which has no counterpart in the smaller
/// basis, sets that block's limit at `λ_k(M)`.
pub fn convergence_horizon(m: &OscillatorModel, ci: &CiResult, tol: f64) -> Result<f64> {
    let orbitals = orbital_count(ci);
    let mut ms_values: Vec<HalfInt> = ci.states.iter().map(|s| s.ms).collect();
    ms_values.sort();
    ms_values.dedup();
    let reference = if orbitals >= 2 {
        let mut basis = Vec::new();
        for &ms in &ms_values {
            match build_basis(m.n, orbitals - 2, Some(ms)) {
                Ok(b) => basis.extend(b),
                Err(Error::InfeasibleBasis { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if basis.is_empty() {
            None
        } else {
            Some(ci_solve(m, &basis)?)
        }
    } else {
        None
    };

    let blocks = |r: &CiResult| {
        let mut out: BTreeMap<(HalfInt, i32), Vec<f64>> = BTreeMap::new();
        for s in &r.states {
            out.entry((s.ms, s.parity)).or_default().push(s.energy);
        }
        out
    };
    let big = blocks(ci);
    let small = reference.as_ref().map(blocks).unwrap_or_default();
    let mut horizon = f64::INFINITY;
    for (key, values) in &big {
        let coarse = small.get(key).map(Vec::as_slice).unwrap_or(&[]);
        if let Some(k) = (0..values.len()).find(|&k| k >= coarse.len() || coarse[k] - values[k] > tol) {
            horizon = horizon.min(values[k]);
        }
    }
    Ok(horizon)
}

/// Number of antisymmetric states per `M_s` that a level can contribute:
/// `(1/N!) Σ_g sign(g) χ_level(g) χ_spin,Ms(g)`.
fn expected_states(level: &LevelDescriptor, t: &CharacterTable, ms: HalfInt) -> Result<usize> {
    let spin = class_spin_characters(t, Some(ms));
    let mut total = 0i64;
    for (c, class) in t.classes.iter().enumerate() {
        let mut chi = 0i64;
        for (label, &mult) in &level.irrep_mults {
            let idx = t.irrep_index(t.irrep(label)?)?;
            chi += mult as i64 * t.chars[idx][c];
        }
        total += class.size as i64 * class.cycle_type.parity() as i64 * chi * spin[c];
    }
    let order = t.order() as i64;
    if total % order != 0 || total < 0 {
        return Err(Error::NumericalIntegrity(format!(
            "antisymmetric count {total}/{order} for level {:?}",
            level.key()
        )));
    }
    Ok((total / order) as usize)
}

fn level_allows(level: &LevelDescriptor, allowed: &AllowedIrrepMap, s: HalfInt) -> bool {
    level.irrep_mults.iter().any(|(label, &mult)| mult > 0 && allowed.get(label).is_some_and(|e| e.spins.contains(&s)))
}

/// Classifies every CI state below the convergence horizon against `exact`.
///
/// `exact` must carry irrep multiplicities and list every level up to some
/// total quanta `Q`; the horizon never exceeds the lowest level with `Q + 1`
/// quanta. Each state goes to the nearest allowed level of the same parity
/// that admits its spin and still has room for another state of its `M_s`.
pub fn compare(
    m: &OscillatorModel,
    ci: &CiResult,
    exact: &[LevelDescriptor],
    allowed: &AllowedIrrepMap,
    tol: f64,
) -> Result<ComparisonReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if exact.is_empty() {
        return Err(Error::Domain("no exact levels to compare against".into()));
    }
    if exact.iter().any(|l| l.irrep_mults.is_empty()) {
        return Err(Error::Domain("exact levels must be decomposed into irreps first".into()));
    }
    let t = character_table(m.n)?;
    let max_quanta = exact.iter().map(|l| l.n_sym + l.n_last).max().unwrap_or(0);
    let completeness_energy =
        (0..=max_quanta + 1).map(|n_sym| m.level_energy(n_sym, max_quanta + 1 - n_sym)).fold(f64::INFINITY, f64::min);
    let horizon = convergence_horizon(m, ci, tol)?.min(completeness_energy);

    let mut energies: Vec<f64> = exact.iter().map(|l| l.energy).collect();
    energies.sort_by(f64::total_cmp);
    let min_spacing = energies.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let vacuous = !tol.is_finite() || tol >= min_spacing;

    let mut capacity: BTreeMap<(usize, HalfInt), usize> = BTreeMap::new();
    let mut found = vec![0usize; exact.len()];
    let mut matched = Vec::new();
    let mut spurious = Vec::new();
    let mut unclassified = 0;
    for state in &ci.states {
        if state.energy >= horizon {
            unclassified += 1;
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, level) in exact.iter().enumerate() {
            let gap = (state.energy - level.energy).abs();
            if gap > tol || level.parity != state.parity || !level_allows(level, allowed, state.s) {
                continue;
            }
            let room = match capacity.get(&(i, state.ms)) {
                Some(&r) => r,
                None => {
                    let r = expected_states(level, &t, state.ms)?;
                    capacity.insert((i, state.ms), r);
                    r
                }
            };
            if room > 0 && best.is_none_or(|(_, g)| gap < g) {
                best = Some((i, gap));
            }
        }
        match best {
            Some((i, _)) => {
                *capacity.get_mut(&(i, state.ms)).unwrap() -= 1;
                found[i] += 1;
                let level = &exact[i];
                matched.push(MatchedState {
                    ci_energy: state.energy,
                    exact_energy: level.energy,
                    quanta_key: level.key(),
                    s: state.s,
                    ms: state.ms,
                    parity: state.parity,
                });
            }
            None => {
                let nearest = exact
                    .iter()
                    .min_by(|a, b| (a.energy - state.energy).abs().total_cmp(&(b.energy - state.energy).abs()))
                    .map(|l| (l.key(), l.energy));
                spurious.push(SpuriousState {
                    ci_energy: state.energy,
                    s: state.s,
                    ms: state.ms,
                    parity: state.parity,
                    nearest,
                });
            }
        }
    }

    let mut ms_values: Vec<HalfInt> = ci.states.iter().map(|s| s.ms).collect();
    ms_values.sort();
    ms_values.dedup();
    let mut missing = Vec::new();
    let mut incomplete = Vec::new();
    for (i, level) in exact.iter().enumerate() {
        if level.energy >= horizon {
            continue;
        }
        let forbidden_only = level.irrep_mults.iter().all(|(label, &mult)| mult == 0 || !allowed.is_allowed(label));
        if found[i] == 0 {
            missing.push(MissingLevel {
                quanta_key: level.key(),
                energy: level.energy,
                irrep_mults: level.irrep_mults.clone(),
                forbidden_only,
            });
            continue;
        }
        let expected = ms_values.iter().map(|&ms| expected_states(level, &t, ms)).sum::<Result<usize>>()?;
        if found[i] < expected {
            incomplete.push(IncompleteLevel {
                quanta_key: level.key(),
                energy: level.energy,
                expected,
                found: found[i],
            });
        }
    }

    Ok(ComparisonReport {
        n: m.n,
        xi: m.xi,
        orbitals: orbital_count(ci),
        tol,
        horizon,
        completeness_energy,
        vacuous,
        matched,
        missing,
        spurious,
        incomplete,
        unclassified,
    })
}

/// Runs CI and the exact spectrum for one `(N, ξ, M)` and compares them.
pub fn missing_levels_experiment(
    n: usize,
    xi: f64,
    orbitals: usize,
    max_quanta: usize,
    tol: f64,
    ms: Option<HalfInt>,
) -> Result<ComparisonReport> {
    let m = make_model(n, xi)?;
    let t = character_table(n)?;
    let exact =
        enumerate_levels(&m, max_quanta).iter().map(|l| decompose_level(&m, l, &t)).collect::<Result<Vec<_>>>()?;
    let allowed = allowed_spatial_irreps(n, None)?;
    let ci = run_ci(&m, orbitals, ms)?;
    compare(&m, &ci, &exact, &allowed, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_tolerance_is_vacuous() {
        let r = missing_levels_experiment(3, 0.1, 4, 3, f64::INFINITY, None).unwrap();
        assert!(r.vacuous);
        assert!(!r.verified());
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(missing_levels_experiment(3, 0.1, 4, 3, 0.0, None).is_err());
        assert!(missing_levels_experiment(3, 0.1, 4, 3, f64::NAN, None).is_err());
    }

    #[test]
    fn small_n3_run_finds_ground_level_missing() {
        let r = missing_levels_experiment(3, 0.1, 8, 3, 1e-4, None).unwrap();
        assert!(r.verified(), "{r:#?}");
        assert_eq!(r.missing[0].quanta_key, (0, 0));
    }
}
