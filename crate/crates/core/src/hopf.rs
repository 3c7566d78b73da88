//! Elements of the (truncated) universal enveloping algebra U(g)[[h]] in PBW
//! normal order, and finite sums of pure tensors in its tensor powers.
//!
//! A PBW monomial is stored as an exponent vector (k_1, ..., k_dim), meaning
//! X_1^{k_1} ··· X_dim^{k_dim} in the generator order fixed by the Lie
//! algebra. Products of arbitrary words are rewritten into this basis with
//! the straightening recursion X_j X_i = X_i X_j + [X_j, X_i] for j > i,
//! which terminates by the length filtration.

use crate::lie::LieAlgebra;
use crate::series::{ratq, KSeries};
use std::collections::BTreeMap;
use std::fmt;

/// PBW exponent vector, one entry per generator.
pub type PbwExp = Vec<u32>;

/// A finite K-linear combination of PBW monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct HElt {
    dim: usize,
    trunc: usize,
    terms: BTreeMap<PbwExp, KSeries>,
}

impl HElt {
    pub fn zero(dim: usize, trunc: usize) -> Self {
        HElt {
            dim,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize, trunc: usize) -> Self {
        Self::monomial(vec![0; dim], KSeries::one(trunc))
    }

    pub fn generator(i: usize, dim: usize, trunc: usize) -> Self {
        let mut e = vec![0u32; dim];
        e[i] = 1;
        Self::monomial(e, KSeries::one(trunc))
    }

    pub fn monomial(exp: PbwExp, c: KSeries) -> Self {
        let dim = exp.len();
        let trunc = c.trunc_order();
        let mut x = Self::zero(dim, trunc);
        x.insert(exp, c);
        x
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwExp, &KSeries)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, exp: PbwExp, c: KSeries) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
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

    pub fn add(&self, rhs: &HElt) -> HElt {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &HElt) -> HElt {
        self.add(&rhs.scale(&-&KSeries::one(self.trunc)))
    }

    pub fn scale(&self, c: &KSeries) -> HElt {
        let mut out = HElt::zero(self.dim, self.trunc);
        for (e, a) in &self.terms {
            out.insert(e.clone(), a * c);
        }
        out
    }

    /// Coefficient of the empty monomial: the counit of the undeformed
    /// (and of every twisted) Hopf structure.
    pub fn counit(&self) -> KSeries {
        self.terms
            .get(&vec![0; self.dim])
            .cloned()
            .unwrap_or_else(|| KSeries::zero(self.trunc))
    }

    pub fn classical_part(&self) -> HElt {
        let mut out = HElt::zero(self.dim, self.trunc);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.classical_part());
        }
        out
    }

    /// Total PBW degree of the highest term.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

/// Expand an exponent vector into the word (i, i, ..., j, j, ...) it denotes.
pub fn exp_to_word(exp: &PbwExp) -> Vec<usize> {
    let mut w = Vec::new();
    for (i, &k) in exp.iter().enumerate() {
        for _ in 0..k {
            w.push(i);
        }
    }
    w
}

fn word_to_exp(word: &[usize], dim: usize) -> PbwExp {
    let mut e = vec![0u32; dim];
    for &i in word {
        e[i] += 1;
    }
    e
}

/// Normal-order the word c·X_{w_1}···X_{w_m} into the PBW basis.
pub fn straighten(lie: &LieAlgebra, word: &[usize], c: &KSeries) -> HElt {
    let dim = lie.dim();
    assert!(word.iter().all(|&i| i < dim), "generator index out of range");
    let mut out = HElt::zero(dim, c.trunc_order());
    straighten_into(lie, word.to_vec(), c.clone(), &mut out);
    out
}

fn straighten_into(lie: &LieAlgebra, mut word: Vec<usize>, c: KSeries, out: &mut HElt) {
    if c.is_zero() {
        return;
    }
    // Find the first adjacent inversion.
    let pos = word.windows(2).position(|w| w[0] > w[1]);
    let Some(p) = pos else {
        out.insert(word_to_exp(&word, lie.dim()), c);
        return;
    };
    let (j, i) = (word[p], word[p + 1]);
    // X_j X_i = X_i X_j + [X_j, X_i]
    for k in 0..lie.dim() {
        let coeff = lie.bracket_coeff(j, i, k);
        if coeff.is_integer() && num::Zero::is_zero(coeff) {
            continue;
        }
        if num::Zero::is_zero(coeff) {
            continue;
        }
        let mut shorter = Vec::with_capacity(word.len() - 1);
        shorter.extend_from_slice(&word[..p]);
        shorter.push(k);
        shorter.extend_from_slice(&word[p + 2..]);
        straighten_into(lie, shorter, c.scale(coeff), out);
    }
    word.swap(p, p + 1);
    straighten_into(lie, word, c, out);
}

/// Product in U(g), rewriting into the PBW basis.
pub fn h_mul(lie: &LieAlgebra, x: &HElt, y: &HElt) -> HElt {
    assert_eq!(x.dim, y.dim, "Lie algebra dimension mismatch");
    assert_eq!(x.trunc, y.trunc, "truncation order mismatch");
    let mut out = HElt::zero(x.dim, x.trunc);
    for (ea, ca) in &x.terms {
        let mut word = exp_to_word(ea);
        let base_len = word.len();
        for (eb, cb) in &y.terms {
            word.truncate(base_len);
            word.extend(exp_to_word(eb));
            straighten_into(lie, word.clone(), ca * cb, &mut out);
        }
    }
    out
}

/// Power x^m in U(g).
pub fn h_pow(lie: &LieAlgebra, x: &HElt, m: u32) -> HElt {
    let mut acc = HElt::one(x.dim, x.trunc);
    for _ in 0..m {
        acc = h_mul(lie, &acc, x);
    }
    acc
}

/// Antipode of the undeformed structure: reverse the word, sign by length.
pub fn antipode_base(lie: &LieAlgebra, x: &HElt) -> HElt {
    let mut out = HElt::zero(x.dim, x.trunc);
    for (e, c) in &x.terms {
        let mut word = exp_to_word(e);
        word.reverse();
        let sign = if word.len() % 2 == 0 { 1 } else { -1 };
        straighten_into(lie, word, c.scale(&crate::series::rat(sign)), &mut out);
    }
    out
}

/// log(1 + h·x) as a series in U(g)[[h]]; every term carries at least one
/// power of h, so the sum is finite at the truncation order.
pub fn log_one_plus_h(lie: &LieAlgebra, x: &HElt) -> HElt {
    let trunc = x.trunc;
    let hx = x.scale(&KSeries::h(trunc));
    let mut out = HElt::zero(x.dim, trunc);
    let mut pow = HElt::one(x.dim, trunc);
    for m in 1..=trunc {
        pow = h_mul(lie, &pow, &hx);
        let sign = if m % 2 == 1 { 1 } else { -1 };
        out = out.add(&pow.scale(&KSeries::constant(ratq(sign, m as i64), trunc)));
    }
    out
}

/// A finite sum of pure tensors in H^{⊗legs}.
#[derive(Clone, PartialEq, Eq)]
pub struct HTensor {
    dim: usize,
    trunc: usize,
    legs: usize,
    terms: BTreeMap<Vec<PbwExp>, KSeries>,
}

impl HTensor {
    pub fn zero(dim: usize, trunc: usize, legs: usize) -> Self {
        HTensor {
            dim,
            trunc,
            legs,
            terms: BTreeMap::new(),
        }
    }

    /// 1⊗1⊗...⊗1.
    pub fn unit(dim: usize, trunc: usize, legs: usize) -> Self {
        let mut t = Self::zero(dim, trunc, legs);
        t.insert(vec![vec![0; dim]; legs], KSeries::one(trunc));
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<PbwExp>, &KSeries)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, monos: Vec<PbwExp>, c: KSeries) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(monos) {
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

    pub fn add(&self, rhs: &HTensor) -> HTensor {
        assert_eq!(self.legs, rhs.legs, "tensor leg count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &HTensor) -> HTensor {
        self.add(&rhs.scale(&-&KSeries::one(self.trunc)))
    }

    pub fn scale(&self, c: &KSeries) -> HTensor {
        let mut out = HTensor::zero(self.dim, self.trunc, self.legs);
        for (m, a) in &self.terms {
            out.insert(m.clone(), a * c);
        }
        out
    }

    /// Pure tensor x_1 ⊗ x_2 ⊗ ... ⊗ x_k of algebra elements.
    pub fn of(factors: &[&HElt]) -> HTensor {
        assert!(!factors.is_empty());
        let dim = factors[0].dim;
        let trunc = factors[0].trunc;
        let mut out = HTensor::zero(dim, trunc, factors.len());
        let mut stack: Vec<(Vec<PbwExp>, KSeries)> = vec![(Vec::new(), KSeries::one(trunc))];
        for f in factors {
            let mut next = Vec::new();
            for (prefix, c) in &stack {
                for (e, a) in &f.terms {
                    let mut monos = prefix.clone();
                    monos.push(e.clone());
                    next.push((monos, c * a));
                }
            }
            stack = next;
        }
        for (monos, c) in stack {
            out.insert(monos, c);
        }
        out
    }

    /// Reorder legs: output leg i is input leg perm[i].
    pub fn permute_legs(&self, perm: &[usize]) -> HTensor {
        assert_eq!(perm.len(), self.legs);
        let mut out = HTensor::zero(self.dim, self.trunc, self.legs);
        for (m, c) in &self.terms {
            let monos: Vec<PbwExp> = perm.iter().map(|&i| m[i].clone()).collect();
            out.insert(monos, c.clone());
        }
        out
    }

    /// Flip of a two-leg tensor (the "21" notation).
    pub fn flip(&self) -> HTensor {
        assert_eq!(self.legs, 2);
        self.permute_legs(&[1, 0])
    }

    /// Place the legs of `self` at `positions` inside a tensor with
    /// `total` legs, filling the rest with units.
    pub fn place(&self, total: usize, positions: &[usize]) -> HTensor {
        assert_eq!(positions.len(), self.legs);
        let mut out = HTensor::zero(self.dim, self.trunc, total);
        for (m, c) in &self.terms {
            let mut monos = vec![vec![0u32; self.dim]; total];
            for (src, &dst) in positions.iter().enumerate() {
                monos[dst] = m[src].clone();
            }
            out.insert(monos, c.clone());
        }
        out
    }

    /// Apply an algebra-valued map to one leg, splicing the result in place.
    pub fn map_leg(&self, leg: usize, f: impl Fn(&PbwExp) -> HElt) -> HTensor {
        let mut out = HTensor::zero(self.dim, self.trunc, self.legs);
        for (m, c) in &self.terms {
            let img = f(&m[leg]);
            for (e, a) in &img.terms {
                let mut monos = m.clone();
                monos[leg] = e.clone();
                out.insert(monos, c * a);
            }
        }
        out
    }

    /// Apply a tensor-valued map to one leg (e.g. a coproduct), splicing the
    /// produced legs in place of the original one.
    pub fn expand_leg(&self, leg: usize, f: impl Fn(&PbwExp) -> HTensor) -> HTensor {
        let mut out: Option<HTensor> = None;
        for (m, c) in &self.terms {
            let img = f(&m[leg]);
            let new_legs = self.legs - 1 + img.legs;
            let acc = out.get_or_insert_with(|| HTensor::zero(self.dim, self.trunc, new_legs));
            for (e, a) in &img.terms {
                let mut monos = Vec::with_capacity(new_legs);
                monos.extend_from_slice(&m[..leg]);
                monos.extend(e.iter().cloned());
                monos.extend_from_slice(&m[leg + 1..]);
                acc.insert(monos, c * a);
            }
        }
        out.unwrap_or_else(|| HTensor::zero(self.dim, self.trunc, self.legs))
    }

    /// Counit applied to one leg: keeps only terms whose leg is the unit and
    /// removes that leg.
    pub fn counit_leg(&self, leg: usize) -> HTensor {
        let mut out = HTensor::zero(self.dim, self.trunc, self.legs - 1);
        let empty = vec![0u32; self.dim];
        for (m, c) in &self.terms {
            if m[leg] != empty {
                continue;
            }
            let mut monos = m.clone();
            monos.remove(leg);
            out.insert(monos, c.clone());
        }
        out
    }

    /// Multiply legs `leg` and `leg+1` together inside U(g).
    pub fn contract_pair(&self, lie: &LieAlgebra, leg: usize) -> HTensor {
        let mut out = HTensor::zero(self.dim, self.trunc, self.legs - 1);
        for (m, c) in &self.terms {
            let mut word = exp_to_word(&m[leg]);
            word.extend(exp_to_word(&m[leg + 1]));
            let prod = straighten(lie, &word, c);
            for (e, a) in &prod.terms {
                let mut monos = Vec::with_capacity(self.legs - 1);
                monos.extend_from_slice(&m[..leg]);
                monos.push(e.clone());
                monos.extend_from_slice(&m[leg + 2..]);
                out.insert(monos, a.clone());
            }
        }
        out
    }

    /// Contract all legs down to an algebra element.
    pub fn contract_all(&self, lie: &LieAlgebra) -> HElt {
        let mut t = self.clone();
        while t.legs > 1 {
            t = t.contract_pair(lie, 0);
        }
        t.as_helt()
    }

    /// Interpret a one-leg tensor as an algebra element.
    pub fn as_helt(&self) -> HElt {
        assert_eq!(self.legs, 1);
        let mut out = HElt::zero(self.dim, self.trunc);
        for (m, c) in &self.terms {
            out.insert(m[0].clone(), c.clone());
        }
        out
    }

    pub fn classical_part(&self) -> HTensor {
        let mut out = HTensor::zero(self.dim, self.trunc, self.legs);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.classical_part());
        }
        out
    }

    /// True when the h^0 part is exactly 1⊗...⊗1.
    pub fn is_hadic_unital(&self) -> bool {
        self.classical_part() == HTensor::unit(self.dim, self.trunc, self.legs)
    }

    /// h-adic inverse of a tensor of the form 1⊗...⊗1 + O(h), by the
    /// geometric series (the correction is nilpotent at the truncation order).
    pub fn invert(&self, lie: &LieAlgebra) -> Result<HTensor, crate::Error> {
        if !self.is_hadic_unital() {
            return Err(crate::Error::NonInvertible(
                "tensor is not of the form unit + O(h)".into(),
            ));
        }
        let unit = HTensor::unit(self.dim, self.trunc, self.legs);
        let delta = unit.sub(self); // O(h)
        let mut out = unit.clone();
        let mut pow = unit.clone();
        for _ in 1..=self.trunc {
            pow = tensor_mul(lie, &pow, &delta);
            out = out.add(&pow);
        }
        Ok(out)
    }
}

/// Componentwise product of equal-leg tensors:
/// (x⊗y)(x'⊗y') = (xx')⊗(yy').
pub fn tensor_mul(lie: &LieAlgebra, s: &HTensor, t: &HTensor) -> HTensor {
    assert_eq!(s.legs, t.legs, "tensor leg count mismatch");
    assert_eq!(s.trunc, t.trunc, "truncation order mismatch");
    let mut out = HTensor::zero(s.dim, s.trunc, s.legs);
    for (ma, ca) in &s.terms {
        for (mb, cb) in &t.terms {
            // Each leg product may expand into several monomials.
            let mut partial: Vec<(Vec<PbwExp>, KSeries)> = vec![(Vec::new(), ca * cb)];
            for leg in 0..s.legs {
                let mut word = exp_to_word(&ma[leg]);
                word.extend(exp_to_word(&mb[leg]));
                let prod = straighten(lie, &word, &KSeries::one(s.trunc));
                let mut next = Vec::new();
                for (prefix, c) in &partial {
                    for (e, a) in &prod.terms {
                        let mut monos = prefix.clone();
                        monos.push(e.clone());
                        next.push((monos, c * a));
                    }
                }
                partial = next;
            }
            for (monos, c) in partial {
                out.insert(monos, c);
            }
        }
    }
    out
}

/// exp(t) for a tensor t = O(h); finite at the truncation order.
pub fn tensor_exp(lie: &LieAlgebra, t: &HTensor) -> Result<HTensor, crate::Error> {
    if !t.classical_part().is_zero() {
        return Err(crate::Error::NonInvertible(
            "tensor exponential requires an O(h) argument".into(),
        ));
    }
    let mut out = HTensor::unit(t.dim, t.trunc, t.legs);
    let mut pow = HTensor::unit(t.dim, t.trunc, t.legs);
    let mut factorial = 1i64;
    for m in 1..=t.trunc {
        pow = tensor_mul(lie, &pow, t);
        factorial *= m as i64;
        out = out.add(&pow.scale(&KSeries::constant(ratq(1, factorial), t.trunc)));
    }
    Ok(out)
}

/// The primitive coproduct of the undeformed structure, extended as an
/// algebra homomorphism to PBW monomials, with `legs` output legs.
pub fn coproduct_base(lie: &LieAlgebra, x: &HElt, legs: usize) -> HTensor {
    assert!(legs >= 2);
    let dim = x.dim;
    let trunc = x.trunc;
    let mut out = HTensor::zero(dim, trunc, legs);
    for (e, c) in &x.terms {
        let mut acc = HTensor::unit(dim, trunc, legs);
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                acc = tensor_mul(lie, &acc, &primitive_delta(lie, i, legs, trunc));
            }
        }
        out = out.add(&acc.scale(c));
    }
    out
}

/// Δ^{(legs)}(X_i) = Σ_p 1⊗...⊗X_i⊗...⊗1 with X_i at position p.
fn primitive_delta(lie: &LieAlgebra, i: usize, legs: usize, trunc: usize) -> HTensor {
    let dim = lie.dim();
    let mut t = HTensor::zero(dim, trunc, legs);
    for p in 0..legs {
        let mut monos = vec![vec![0u32; dim]; legs];
        monos[p][i] = 1;
        t.insert(monos, KSeries::one(trunc));
    }
    t
}

fn fmt_mono(f: &mut fmt::Formatter<'_>, e: &PbwExp) -> fmt::Result {
    if e.iter().all(|&k| k == 0) {
        return write!(f, "1");
    }
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "·")?;
        }
        first = false;
        write!(f, "X{}", i + 1)?;
        if k > 1 {
            write!(f, "^{}", k)?;
        }
    }
    Ok(())
}

impl fmt::Display for HElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) ", c)?;
            fmt_mono(f, e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for HElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for HTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) ", c)?;
            for (leg, e) in m.iter().enumerate() {
                if leg > 0 {
                    write!(f, "⊗")?;
                }
                fmt_mono(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, Rat};
    use num::Zero;

    fn abelian2(trunc: usize) -> LieAlgebra {
        let zero3 = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        let one = |c: usize| {
            let mut r = vec![crate::poly::Poly::zero(2, trunc); 2];
            r[c] = crate::poly::Poly::one(2, trunc);
            r
        };
        LieAlgebra::new(
            vec!["D1".into(), "D2".into()],
            zero3,
            vec![one(0), one(1)],
            2,
            trunc,
        )
        .unwrap()
    }

    pub(crate) fn jordanian(trunc: usize) -> LieAlgebra {
        // H = x d/dx, E = d/dx; [H, E] = -E. PBW order H < E.
        let mut s = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        s[0][1][1] = rat(-1);
        s[1][0][1] = rat(1);
        LieAlgebra::new(
            vec!["H".into(), "E".into()],
            s,
            vec![
                vec![crate::poly::Poly::var(0, 1, trunc)],
                vec![crate::poly::Poly::one(1, trunc)],
            ],
            1,
            trunc,
        )
        .unwrap()
    }

    #[test]
    fn abelian_word_sorts() {
        let lie = abelian2(1);
        let out = straighten(&lie, &[1, 0], &KSeries::one(1));
        assert_eq!(out, HElt::monomial(vec![1, 1], KSeries::one(1)));
    }

    #[test]
    fn jordanian_single_commutator() {
        // word (E, H) → H·E + E, forced by c_{EH}^E = +1.
        let lie = jordanian(1);
        let out = straighten(&lie, &[1, 0], &KSeries::one(1));
        let mut expect = HElt::monomial(vec![1, 1], KSeries::one(1));
        expect = expect.add(&HElt::generator(1, 2, 1));
        assert_eq!(out, expect);
    }

    #[test]
    fn straighten_matches_both_association_orders() {
        // E·(H·H) vs (E·H)·H via h_mul must agree with straighten of (E,H,H).
        let lie = jordanian(1);
        let e = HElt::generator(1, 2, 1);
        let h = HElt::generator(0, 2, 1);
        let hh = h_mul(&lie, &h, &h);
        let left = h_mul(&lie, &e, &hh);
        let eh = h_mul(&lie, &e, &h);
        let right = h_mul(&lie, &eh, &h);
        let direct = straighten(&lie, &[1, 0, 0], &KSeries::one(1));
        assert_eq!(left, direct);
        assert_eq!(right, direct);
    }

    #[test]
    fn unit_is_neutral() {
        let lie = jordanian(2);
        let x = straighten(&lie, &[1, 0, 1], &KSeries::one(2));
        assert_eq!(h_mul(&lie, &HElt::one(2, 2), &x), x);
        assert_eq!(h_mul(&lie, &x, &HElt::one(2, 2)), x);
    }

    #[test]
    fn tensor_product_is_componentwise() {
        let lie = abelian2(1);
        let x1 = HElt::generator(0, 2, 1);
        let x2 = HElt::generator(1, 2, 1);
        let s = HTensor::of(&[&x1, &x2]);
        let t = HTensor::of(&[&x2, &x1]);
        let prod = tensor_mul(&lie, &s, &t);
        let x1x2 = HElt::monomial(vec![1, 1], KSeries::one(1));
        assert_eq!(prod, HTensor::of(&[&x1x2, &x1x2]));
    }

    #[test]
    fn commutator_through_tensors() {
        // (H⊗1)(E⊗1) - (E⊗1)(H⊗1) = [H,E]⊗1 = -E⊗1.
        let lie = jordanian(1);
        let one = HElt::one(2, 1);
        let h = HTensor::of(&[&HElt::generator(0, 2, 1), &one]);
        let e = HTensor::of(&[&HElt::generator(1, 2, 1), &one]);
        let comm = tensor_mul(&lie, &h, &e).sub(&tensor_mul(&lie, &e, &h));
        let neg_e = HElt::generator(1, 2, 1).scale(&-&KSeries::one(1));
        assert_eq!(comm, HTensor::of(&[&neg_e, &one]));
    }

    #[test]
    fn primitive_coproduct_of_generator() {
        let lie = abelian2(1);
        let x1 = HElt::generator(0, 2, 1);
        let d = coproduct_base(&lie, &x1, 2);
        let one = HElt::one(2, 1);
        let expect = HTensor::of(&[&x1, &one]).add(&HTensor::of(&[&one, &x1]));
        assert_eq!(d, expect);
    }

    #[test]
    fn coproduct_of_square_is_binomial() {
        // Δ(X1^2) = X1^2⊗1 + 2 X1⊗X1 + 1⊗X1^2 in an abelian algebra.
        let lie = abelian2(1);
        let x1sq = HElt::monomial(vec![2, 0], KSeries::one(1));
        let d = coproduct_base(&lie, &x1sq, 2);
        let one = HElt::one(2, 1);
        let x1 = HElt::generator(0, 2, 1);
        let expect = HTensor::of(&[&x1sq, &one])
            .add(&HTensor::of(&[&x1, &x1]).scale(&KSeries::constant(rat(2), 1)))
            .add(&HTensor::of(&[&one, &x1sq]));
        assert_eq!(d, expect);
    }

    #[test]
    fn counit_values() {
        let x1 = HElt::generator(0, 2, 1);
        assert!(x1.counit().is_zero());
        assert!(HElt::one(2, 1).counit().is_one());
    }

    #[test]
    fn antipode_values() {
        let lie = jordanian(1);
        assert_eq!(antipode_base(&lie, &HElt::one(2, 1)), HElt::one(2, 1));
        // S(HE) = S(E)S(H) = EH = HE + E.
        let he = HElt::monomial(vec![1, 1], KSeries::one(1));
        let expect = he.add(&HElt::generator(1, 2, 1));
        assert_eq!(antipode_base(&lie, &he), expect);
    }

    #[test]
    fn hadic_inverse_roundtrip() {
        let lie = jordanian(3);
        // 1⊗1 + h·H⊗E is h-adically invertible.
        let mut t = HTensor::unit(2, 3, 2);
        t.insert(vec![vec![1, 0], vec![0, 1]], KSeries::h(3));
        let inv = t.invert(&lie).unwrap();
        assert_eq!(tensor_mul(&lie, &t, &inv), HTensor::unit(2, 3, 2));
        assert_eq!(tensor_mul(&lie, &inv, &t), HTensor::unit(2, 3, 2));
    }
}
