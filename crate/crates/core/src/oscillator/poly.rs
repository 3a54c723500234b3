//! Sparse multivariate polynomials with floating coefficients and the integer
//! Hermite polynomials they are built from.

use std::collections::BTreeMap;

/// Physicists' Hermite polynomial `H_n`, coefficients in ascending powers.
///
/// Built from `H_{n+1} = 2q·H_n − 2n·H_{n−1}`.
pub fn hermite_poly(n: usize) -> Vec<i64> {
    let mut prev = vec![1i64];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0, 2];
    for m in 1..n {
        let mut next = vec![0i64; m + 2];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += 2 * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= 2 * m as i64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Expansion of `q^a` over `H_0 … H_a`:
/// `q^a = a!/2^a · Σ_k H_{a−2k} / (k!(a−2k)!)`.
pub fn monomial_in_hermite(a: usize) -> Vec<f64> {
    let mut out = vec![0.0; a + 1];
    let fact = |n: usize| (1..=n).fold(1.0f64, |acc, v| acc * v as f64);
    let scale = fact(a) / 2f64.powi(a as i32);
    for k in 0..=a / 2 {
        out[a - 2 * k] = scale / (fact(k) * fact(a - 2 * k));
    }
    out
}

/// `√(2^n n!)`, the norm of `H_n` relative to the Gaussian weight.
pub fn hermite_norm(n: usize) -> f64 {
    (0..n).fold(1.0f64, |acc, m| acc * (2.0 * (m + 1) as f64)).sqrt()
}

/// Polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `Σ_k coeffs[k]·v^k` in variable `var`.
    pub fn univariate(nvars: usize, var: usize, coeffs: &[f64]) -> Self {
        let mut p = Self::zero(nvars);
        for (k, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            p.add_term(e, c);
        }
        p
    }

    /// `Σ_l coeffs[l]·v_l`.
    pub fn linear(coeffs: &[f64]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(nvars);
        for (l, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[l] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> f64 {
        self.terms.get(exps).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c != 0.0 {
            *self.terms.entry(exps).or_insert(0.0) += c;
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|(_, &c)| c != 0.0).map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, &c)| (e.clone(), c * s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, 1.0), |acc, _| acc.mul(self))
    }

    /// Replaces variable `i` by the linear form `Σ_l forms[i][l]·w_l` in new
    /// variables `w_0 … w_{m−1}`.
    pub fn substitute_linear(&self, forms: &[Vec<f64>]) -> Self {
        assert_eq!(forms.len(), self.nvars);
        let m = forms.first().map_or(0, Vec::len);
        let linear: Vec<Polynomial> = forms.iter().map(|f| Polynomial::linear(f)).collect();
        let mut powers: Vec<Vec<Polynomial>> =
            linear.iter().map(|l| vec![Polynomial::constant(m, 1.0), l.clone()]).collect();
        let mut out = Self::zero(m);
        for (e, &c) in &self.terms {
            let mut term = Polynomial::constant(m, c);
            for (i, &a) in e.iter().enumerate() {
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap().mul(&linear[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][a as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn evaluate(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|(e, &c)| c * e.iter().zip(point).map(|(&a, &v)| v.powi(a as i32)).product::<f64>()).sum()
    }

    /// Re-expresses the polynomial over products `∏ H_{m_i}(v_i)`.
    pub fn to_hermite_products(&self) -> BTreeMap<Vec<u32>, f64> {
        let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (e, &c) in &self.terms {
            // cartesian product of the per-variable expansions
            let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), c)];
            for &a in e {
                let expansion = monomial_in_hermite(a as usize);
                let mut next = Vec::with_capacity(partial.len() * expansion.len());
                for (idx, w) in &partial {
                    for (m, &h) in expansion.iter().enumerate() {
                        if h != 0.0 {
                            let mut k = idx.clone();
                            k.push(m as u32);
                            next.push((k, w * h));
                        }
                    }
                }
                partial = next;
            }
            for (k, w) in partial {
                *out.entry(k).or_insert(0.0) += w;
            }
        }
        out
    }
}
