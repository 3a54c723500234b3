//! Irrep content of degenerate levels and symmetry-adapted combinations.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{hermite_norm, level_representation, LevelDescriptor, OscillatorModel};
use crate::symgroup::{CharacterTable, CycleType, IrrepId, Permutation};

/// Largest distance from an integer tolerated for characters and multiplicities.
pub const ROUNDING_GUARD: f64 = 1e-6;

/// Traces of the level representation, one per class in table order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCharacters {
    pub traces: Vec<(CycleType, f64)>,
    /// Largest distance of any trace from its nearest integer.
    pub max_rounding: f64,
}

impl LevelCharacters {
    pub fn trace(&self, cycle_type: &CycleType) -> Option<f64> {
        self.traces.iter().find(|(c, _)| c == cycle_type).map(|(_, v)| *v)
    }

    pub fn rounded(&self) -> Vec<i64> {
        self.traces.iter().map(|(_, v)| v.round() as i64).collect()
    }
}

fn integer_or_error(value: f64, what: &str) -> Result<i64> {
    let r = value.round();
    if (value - r).abs() >= ROUNDING_GUARD {
        return Err(Error::NumericalIntegrity(format!("{what} = {value} is not an integer")));
    }
    Ok(r as i64)
}

/// Characters of a level, from the traces of every group element.
pub fn level_characters(m: &OscillatorModel, level: &LevelDescriptor) -> Result<LevelCharacters> {
    let rep = level_representation(m, level)?;
    characters_from_representation(m.n, &rep)
}

pub(crate) fn characters_from_representation(n: usize, rep: &[(Permutation, DMatrix<f64>)]) -> Result<LevelCharacters> {
    let mut by_class: BTreeMap<CycleType, Vec<f64>> = BTreeMap::new();
    for (p, d) in rep {
        by_class.entry(p.cycle_type()).or_default().push(d.trace());
    }
    let mut traces = Vec::new();
    let mut max_rounding = 0.0f64;
    for class in crate::symgroup::conjugacy_classes(n)? {
        let values = &by_class[&class.cycle_type];
        let first = values[0];
        if let Some(bad) = values.iter().find(|v| (*v - first).abs() > 1e-9) {
            return Err(Error::NumericalIntegrity(format!(
                "traces within class {} disagree: {first} vs {bad}",
                class.cycle_type
            )));
        }
        let r = integer_or_error(first, &format!("trace on class {}", class.cycle_type))?;
        max_rounding = max_rounding.max((first - r as f64).abs());
        traces.push((class.cycle_type, first));
    }
    Ok(LevelCharacters { traces, max_rounding })
}

/// `m_Γ = (1/N!) Σ_c |c|·χ_Γ(c)·trace(c)`.
pub fn irrep_multiplicities(c: &LevelCharacters, t: &CharacterTable) -> Result<BTreeMap<IrrepId, usize>> {
    if c.traces.len() != t.classes.len()
        || c.traces.iter().zip(&t.classes).any(|((ct, _), info)| *ct != info.cycle_type)
    {
        return Err(Error::Domain(format!("characters do not match the classes of {}", t.group_name)));
    }
    let order = t.order() as f64;
    let mut out = BTreeMap::new();
    for (g, row) in t.irreps.iter().zip(&t.chars) {
        let value: f64 = t
            .classes
            .iter()
            .zip(row)
            .zip(&c.traces)
            .map(|((info, &chi), (_, tr))| info.size as f64 * chi as f64 * tr)
            .sum::<f64>()
            / order;
        let mult = integer_or_error(value, &format!("multiplicity of {g}"))?;
        if mult < 0 {
            return Err(Error::NumericalIntegrity(format!("negative multiplicity {mult} for {g}")));
        }
        out.insert(g.clone(), mult as usize);
    }
    Ok(out)
}

/// Fills `level.irrep_mults` and checks `Σ m_Γ·dim_Γ = degeneracy`.
pub fn decompose_level(m: &OscillatorModel, level: &LevelDescriptor, t: &CharacterTable) -> Result<LevelDescriptor> {
    let mults = irrep_multiplicities(&level_characters(m, level)?, t)?;
    let total: usize = mults.iter().map(|(g, k)| g.dim * k).sum();
    if total != level.degeneracy {
        return Err(Error::NumericalIntegrity(format!(
            "level ({}, {}): irreps account for {total} of {} states",
            level.n_sym, level.n_last, level.degeneracy
        )));
    }
    let mut out = level.clone();
    out.irrep_mults = mults.into_iter().map(|(g, k)| (g.label, k)).collect();
    Ok(out)
}

/// Orthonormal basis of the `irrep` component of a level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalcSet {
    pub irrep: IrrepId,
    /// Coefficients over the orthonormal level basis.
    pub vectors: Vec<Vec<f64>>,
    pub copies: usize,
}

/// `P_Γ = (dim/N!) Σ_g χ_Γ(g) D(g)` on the level.
pub fn character_projector(
    t: &CharacterTable,
    irrep: &IrrepId,
    rep: &[(Permutation, DMatrix<f64>)],
) -> Result<DMatrix<f64>> {
    let idx = t.irrep_index(irrep)?;
    let dim = rep.first().map_or(0, |(_, d)| d.nrows());
    let mut p = DMatrix::zeros(dim, dim);
    for (g, d) in rep {
        let chi = t.character(idx, g);
        if chi != 0 {
            p += d * (chi as f64);
        }
    }
    Ok(p * (irrep.dim as f64 / t.order() as f64))
}

/// Gram–Schmidt over the columns of `a` in order, twice per column, dropping
/// columns whose remainder is below `drop_tol`.
pub fn orthonormal_columns(a: &DMatrix<f64>, drop_tol: f64) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for j in 0..a.ncols() {
        let mut v = a.column(j).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > drop_tol {
            basis.push(v / norm);
        }
    }
    basis
}

/// SALCs of `irrep` on a level. Empty when the irrep does not occur.
pub fn salc(m: &OscillatorModel, level: &LevelDescriptor, irrep: &IrrepId, t: &CharacterTable) -> Result<SalcSet> {
    let rep = level_representation(m, level)?;
    let mults = irrep_multiplicities(&characters_from_representation(m.n, &rep)?, t)?;
    let copies = *mults.get(irrep).ok_or_else(|| Error::Domain(format!("irrep {irrep} is not in {}", t.group_name)))?;
    if copies == 0 {
        return Ok(SalcSet { irrep: irrep.clone(), vectors: Vec::new(), copies });
    }
    let proj = character_projector(t, irrep, &rep)?;
    let vectors = orthonormal_columns(&proj, 1e-8);
    if vectors.len() != copies * irrep.dim {
        return Err(Error::NumericalIntegrity(format!(
            "projected space for {irrep} has rank {} but multiplicity × dimension is {}",
            vectors.len(),
            copies * irrep.dim
        )));
    }
    Ok(SalcSet { irrep: irrep.clone(), vectors: vectors.iter().map(|v| v.iter().copied().collect()).collect(), copies })
}

/// Irreps whose basis functions are eigenfunctions of every permutation:
/// exactly the one-dimensional ones.
pub fn all_perm_eigenfunction_irreps(t: &CharacterTable) -> Vec<IrrepId> {
    t.irreps.iter().filter(|g| g.dim == 1).cloned().collect()
}

/// Level-basis coefficients of `Σ c·∏ H_{n_i}(q_i)`, a combination of
/// unnormalized Hermite products with the given degenerate-mode quanta.
pub fn level_vector_from_hermite_products(
    m: &OscillatorModel,
    n_sym: usize,
    combination: &[(Vec<usize>, f64)],
) -> Result<Vec<f64>> {
    let patterns = m.level_patterns(n_sym);
    let mut v = vec![0.0; patterns.len()];
    for (pat, c) in combination {
        let i = patterns
            .iter()
            .position(|p| p == pat)
            .ok_or_else(|| Error::Domain(format!("pattern {pat:?} is not in level n_sym = {n_sym}")))?;
        v[i] += c * pat.iter().map(|&n| hermite_norm(n)).product::<f64>();
    }
    Ok(v)
}

/// `|t − Π t| / |t|` for the projector `Π` onto the span of orthonormal `vectors`.
pub fn span_residual(vectors: &[Vec<f64>], target: &[f64]) -> f64 {
    let t = DVector::from_column_slice(target);
    let mut r = t.clone();
    for v in vectors {
        let v = DVector::from_column_slice(v);
        r -= &v * v.dot(&t);
    }
    r.norm() / t.norm()
}
