//! Character tables of `S_3 ≅ C3v` and `S_4 ≅ O`, stored as literal data and
//! checked against the orthogonality relations on load.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::classes::{conjugacy_classes, factorial, CycleType};
use super::perm::Permutation;
use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// An irreducible representation, named in point-group style.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IrrepId {
    pub label: String,
    pub dim: usize,
}

impl IrrepId {
    pub fn new(label: &str, dim: usize) -> Self {
        Self { label: label.to_string(), dim }
    }
}

impl fmt::Display for IrrepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub cycle_type: CycleType,
    pub size: usize,
    pub element_order: usize,
    /// Point-group name of the class, e.g. `3σv` or `8C3`.
    pub alias: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub group_name: String,
    pub n: usize,
    pub classes: Vec<ClassInfo>,
    pub irreps: Vec<IrrepId>,
    /// `chars[irrep][class]`.
    pub chars: Vec<Vec<i64>>,
}

/// First relation a character table fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableViolation {
    Shape(String),
    ClassSizes { sum: usize, expected: usize },
    OrderSum { sum: usize, expected: usize },
    RowOrthogonality { row_a: usize, row_b: usize, value: i64, expected: i64 },
    ColumnOrthogonality { col_a: usize, col_b: usize, value: i64, expected: i64 },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::Shape(msg) => write!(f, "malformed table: {msg}"),
            TableViolation::ClassSizes { sum, expected } => {
                write!(f, "class sizes sum to {sum}, expected {expected}")
            }
            TableViolation::OrderSum { sum, expected } => {
                write!(f, "sum of squared dimensions is {sum}, expected {expected}")
            }
            TableViolation::RowOrthogonality { row_a, row_b, value, expected } => {
                write!(f, "row orthogonality fails for irreps ({row_a}, {row_b}): {value} != {expected}")
            }
            TableViolation::ColumnOrthogonality { col_a, col_b, value, expected } => {
                write!(f, "column orthogonality fails for classes ({col_a}, {col_b}): {value} != {expected}")
            }
        }
    }
}

impl std::error::Error for TableViolation {}

/// The shipped table for `N ∈ {3, 4}`.
pub fn character_table(n: usize) -> Result<CharacterTable> {
    let table = match n {
        3 => CharacterTable::from_parts(
            "S3/C3v",
            3,
            // classes: [1,1,1] [2,1] [3]
            &["E", "3σv", "2C3"],
            &[("A1", &[1, 1, 1]), ("A2", &[1, -1, 1]), ("E", &[2, 0, -1])],
        )?,
        4 => CharacterTable::from_parts(
            "S4/O",
            4,
            // classes: [1,1,1,1] [2,1,1] [2,2] [3,1] [4]
            &["E", "6C2'", "3C2", "8C3", "6C4"],
            &[
                ("A1", &[1, 1, 1, 1, 1]),
                ("A2", &[1, -1, 1, 1, -1]),
                ("E", &[2, 0, 2, -1, 0]),
                ("T1", &[3, -1, -1, 0, 1]),
                ("T2", &[3, 1, -1, 0, -1]),
            ],
        )?,
        _ => return Err(Error::Domain(format!("character tables are shipped for N = 3 and N = 4 only, got {n}"))),
    };
    table.validate().map_err(|v| Error::NumericalIntegrity(format!("shipped table for S{n}: {v}")))?;
    Ok(table)
}

impl CharacterTable {
    /// Assembles a table over the classes of `S_N` in canonical order. The
    /// irrep dimension is read off the identity column. No validation.
    pub fn from_parts(group_name: &str, n: usize, aliases: &[&str], rows: &[(&str, &[i64])]) -> Result<Self> {
        let classes = conjugacy_classes(n)?;
        if aliases.len() != classes.len() {
            return Err(Error::SizeMismatch { expected: classes.len(), found: aliases.len() });
        }
        let classes: Vec<ClassInfo> = classes
            .into_iter()
            .zip(aliases)
            .map(|(c, alias)| ClassInfo {
                cycle_type: c.cycle_type,
                size: c.size,
                element_order: c.element_order,
                alias: alias.to_string(),
            })
            .collect();
        let mut irreps = Vec::new();
        let mut chars = Vec::new();
        for (label, row) in rows {
            if row.len() != classes.len() {
                return Err(Error::SizeMismatch { expected: classes.len(), found: row.len() });
            }
            if row[0] <= 0 {
                return Err(Error::Domain(format!("irrep {label} has non-positive dimension")));
            }
            irreps.push(IrrepId::new(label, row[0] as usize));
            chars.push(row.to_vec());
        }
        Ok(Self { group_name: group_name.to_string(), n, classes, irreps, chars })
    }

    pub fn order(&self) -> usize {
        factorial(self.n)
    }

    /// Checks class sizes, the order sum rule and both orthogonality relations
    /// in exact integer arithmetic, returning the first violation.
    pub fn validate(&self) -> std::result::Result<(), TableViolation> {
        let order = self.order();
        let nc = self.classes.len();
        if self.chars.len() != self.irreps.len() || self.chars.iter().any(|r| r.len() != nc) {
            return Err(TableViolation::Shape("character matrix does not match irreps × classes".into()));
        }
        if self.irreps.len() != nc {
            return Err(TableViolation::Shape(format!("{} irreps but {nc} classes", self.irreps.len())));
        }
        let size_sum: usize = self.classes.iter().map(|c| c.size).sum();
        if size_sum != order {
            return Err(TableViolation::ClassSizes { sum: size_sum, expected: order });
        }
        let dim_sum: usize = self.irreps.iter().map(|g| g.dim * g.dim).sum();
        if dim_sum != order {
            return Err(TableViolation::OrderSum { sum: dim_sum, expected: order });
        }
        for a in 0..self.irreps.len() {
            for b in a..self.irreps.len() {
                let value: i64 =
                    (0..nc).map(|c| self.classes[c].size as i64 * self.chars[a][c] * self.chars[b][c]).sum();
                let expected = if a == b { order as i64 } else { 0 };
                if value != expected {
                    return Err(TableViolation::RowOrthogonality { row_a: a, row_b: b, value, expected });
                }
            }
        }
        for c in 0..nc {
            for d in c..nc {
                let value: i64 = self.chars.iter().map(|row| row[c] * row[d]).sum();
                // Σ_Γ χ_Γ(c)χ_Γ(d) = |G|/|c| δ_cd
                let expected = if c == d { (order / self.classes[c].size) as i64 } else { 0 };
                if value != expected {
                    return Err(TableViolation::ColumnOrthogonality { col_a: c, col_b: d, value, expected });
                }
            }
        }
        Ok(())
    }

    pub fn irrep(&self, label: &str) -> Result<&IrrepId> {
        self.irreps
            .iter()
            .find(|g| g.label == label)
            .ok_or_else(|| Error::Domain(format!("unknown irrep {label} for {}", self.group_name)))
    }

    pub fn irrep_index(&self, irrep: &IrrepId) -> Result<usize> {
        self.irreps
            .iter()
            .position(|g| g == irrep)
            .ok_or_else(|| Error::Domain(format!("irrep {irrep} is not in {}", self.group_name)))
    }

    pub fn class_index(&self, cycle_type: &CycleType) -> Option<usize> {
        self.classes.iter().position(|c| &c.cycle_type == cycle_type)
    }

    /// Character of `irrep` on the class of `p`.
    pub fn character(&self, irrep_index: usize, p: &Permutation) -> i64 {
        let c = self.class_index(&p.cycle_type()).expect("permutation degree matches table");
        self.chars[irrep_index][c]
    }

    /// The one-dimensional irrep whose character is the parity on every class.
    pub fn sign_irrep(&self) -> Option<&IrrepId> {
        self.irreps.iter().zip(&self.chars).find_map(|(g, row)| {
            let is_sign =
                g.dim == 1 && row.iter().zip(&self.classes).all(|(&chi, c)| chi == c.cycle_type.parity() as i64);
            is_sign.then_some(g)
        })
    }

    /// Coefficients `(dim/N!)·χ(g)` of the character projector onto `irrep`,
    /// one per group element.
    pub fn projector_coefficients(&self, irrep: &IrrepId) -> Result<BTreeMap<Permutation, Rational>> {
        let idx = self.irrep_index(irrep)?;
        let order = self.order() as i64;
        let dim = irrep.dim as i64;
        Ok(Permutation::all(self.n)
            .into_iter()
            .map(|p| {
                let coef = Rational::new(dim * self.character(idx, &p), order);
                (p, coef)
            })
            .collect())
    }

    /// The projector onto `irrep` acting by left multiplication on the group
    /// algebra, as an exact `N!×N!` matrix over the elements in
    /// [`Permutation::all`] order.
    pub fn regular_projector(&self, irrep: &IrrepId) -> Result<Vec<Vec<Rational>>> {
        let coefs = self.projector_coefficients(irrep)?;
        let elems = Permutation::all(self.n);
        let index: BTreeMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let size = elems.len();
        let mut m = vec![vec![Rational::zero(); size]; size];
        for (g, c) in &coefs {
            if c.is_zero() {
                continue;
            }
            for (j, h) in elems.iter().enumerate() {
                let gh = g.compose(h)?;
                m[index[&gh]][j] += *c;
            }
        }
        Ok(m)
    }
}

/// Exact product of two square rational matrices.
pub fn rational_matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn rational_identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}
