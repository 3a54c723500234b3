//! Cycle types and conjugacy classes of `S_N`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of `N` into cycle lengths, weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn from_parts(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of permutations with this cycle type: `N! / ∏ (m_i! · i^m_i)`.
    pub fn class_size(&self) -> usize {
        let mut denom: usize = 1;
        let mut i = 0;
        while i < self.0.len() {
            let len = self.0[i];
            let mut mult = 0;
            while i < self.0.len() && self.0[i] == len {
                mult += 1;
                i += 1;
            }
            denom *= factorial(mult) * len.pow(mult as u32);
        }
        factorial(self.n()) / denom
    }

    /// Least common multiple of the cycle lengths.
    pub fn element_order(&self) -> usize {
        self.0.iter().fold(1, |acc, &p| lcm(acc, p))
    }

    /// Sign of any permutation of this type.
    pub fn parity(&self) -> i32 {
        if (self.n() - self.0.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_transposition(&self) -> bool {
        self.0.first() == Some(&2) && self.0[1..].iter().all(|&p| p == 1)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub cycle_type: CycleType,
    pub size: usize,
    pub element_order: usize,
}

/// Conjugacy classes of `S_N`, one per partition of `N`.
///
/// Classes come in increasing lexicographic order of their partitions, which
/// puts the identity class `[1,…,1]` first and the `N`-cycles last.
pub fn conjugacy_classes(n: usize) -> Result<Vec<ConjugacyClass>> {
    if n < 2 {
        return Err(Error::Domain(format!("conjugacy classes need N >= 2, got {n}")));
    }
    Ok(partitions(n)
        .into_iter()
        .map(|cycle_type| ConjugacyClass {
            size: cycle_type.class_size(),
            element_order: cycle_type.element_order(),
            cycle_type,
        })
        .collect())
}

/// All partitions of `n` in increasing lexicographic order.
pub fn partitions(n: usize) -> Vec<CycleType> {
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if remaining == 0 {
            out.push(CycleType(cur.clone()));
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
