//! Multivariate polynomials over the ground ring K.
//!
//! Sparse canonical form: a map from exponent multi-indices to nonzero
//! `KSeries` coefficients. Structural equality is mathematical equality.

use crate::series::{KSeries, Rat};

use std::collections::BTreeMap;
use std::fmt;

/// Exponent multi-index, one entry per variable.
pub type MultiIndex = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n_vars: usize,
    trunc: usize,
    terms: BTreeMap<MultiIndex, KSeries>,
}

impl Poly {
    pub fn zero(n_vars: usize, trunc: usize) -> Self {
        Poly {
            n_vars,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n_vars: usize, trunc: usize) -> Self {
        Self::constant(KSeries::one(trunc), n_vars)
    }

    pub fn constant(c: KSeries, n_vars: usize) -> Self {
        let trunc = c.trunc_order();
        let mut p = Self::zero(n_vars, trunc);
        if !c.is_zero() {
            p.terms.insert(vec![0; n_vars], c);
        }
        p
    }

    /// The coordinate x_i.
    pub fn var(i: usize, n_vars: usize, trunc: usize) -> Self {
        Self::monomial_int(&exp_one(i, n_vars), 1, n_vars, trunc)
    }

    /// c·x^exps with an integer coefficient.
    pub fn monomial_int(exps: &[u32], c: i64, n_vars: usize, trunc: usize) -> Self {
        Self::monomial(exps, KSeries::constant(crate::series::rat(c), trunc), n_vars)
    }

    pub fn monomial(exps: &[u32], c: KSeries, n_vars: usize) -> Self {
        assert_eq!(exps.len(), n_vars);
        let trunc = c.trunc_order();
        let mut p = Self::zero(n_vars, trunc);
        if !c.is_zero() {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &KSeries)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> KSeries {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| KSeries::zero(self.trunc))
    }

    /// Total degree of the highest monomial, or None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn insert(&mut self, exps: MultiIndex, c: KSeries) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        self.check_compatible(rhs);
        let mut out = Poly::zero(self.n_vars, self.trunc);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: MultiIndex = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &KSeries) -> Poly {
        let mut out = Poly::zero(self.n_vars, self.trunc);
        for (e, a) in &self.terms {
            out.insert(e.clone(), a * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> Poly {
        let mut out = Poly::zero(self.n_vars, self.trunc);
        for (e, a) in &self.terms {
            out.insert(e.clone(), a.scale(c));
        }
        out
    }

    /// Partial derivative with respect to x_i.
    pub fn diff(&self, i: usize) -> Poly {
        assert!(i < self.n_vars, "coordinate index {} out of range", i);
        let mut out = Poly::zero(self.n_vars, self.trunc);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            out.insert(exps, c.scale(&crate::series::rat(e[i] as i64)));
        }
        out
    }

    /// Re-index variables: old variable k becomes new variable `map[k]`.
    /// Exponents landing on the same new variable add up.
    pub fn map_vars(&self, map: &[usize], new_n_vars: usize) -> Poly {
        assert_eq!(map.len(), self.n_vars);
        let mut out = Poly::zero(new_n_vars, self.trunc);
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; new_n_vars];
            for (k, &cnt) in e.iter().enumerate() {
                exps[map[k]] += cnt;
            }
            out.insert(exps, c.clone());
        }
        out
    }

    /// Embed an n-variable polynomial into a wider variable space, placing
    /// its variables at offset `group * n`.
    pub fn embed(&self, group: usize, n_groups: usize) -> Poly {
        let n = self.n_vars;
        let map: Vec<usize> = (0..n).map(|i| group * n + i).collect();
        self.map_vars(&map, n * n_groups)
    }

    /// Keep only the h^0 part of every coefficient.
    pub fn classical_part(&self) -> Poly {
        let mut out = Poly::zero(self.n_vars, self.trunc);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.classical_part());
        }
        out
    }

    fn check_compatible(&self, rhs: &Poly) {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count mismatch");
        assert_eq!(self.trunc, rhs.trunc, "truncation order mismatch");
    }
}

pub fn exp_one(i: usize, n_vars: usize) -> MultiIndex {
    let mut e = vec![0u32; n_vars];
    e[i] = 1;
    e
}

fn var_name(k: usize, n_vars_per_group: usize) -> String {
    if n_vars_per_group == 0 {
        return format!("x{}", k + 1);
    }
    let group = k / n_vars_per_group;
    let i = k % n_vars_per_group;
    if group == 0 {
        format!("x{}", i + 1)
    } else {
        format!("x{}'{}", i + 1, group)
    }
}

impl Poly {
    /// Display with variables grouped in blocks of `n` (used by tensor carriers).
    pub fn display_grouped(&self, n: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut s = format!("({})", c);
            for (k, &cnt) in e.iter().enumerate() {
                if cnt == 0 {
                    continue;
                }
                s.push('*');
                s.push_str(&var_name(k, n));
                if cnt > 1 {
                    s.push_str(&format!("^{}", cnt));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_grouped(self.n_vars))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
