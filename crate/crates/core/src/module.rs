//! The concrete geometric carriers: the coordinate algebra A, free modules
//! of vector fields and exterior forms, their duals, and tensor products —
//! over K, over A, and over the deformed algebra A_⋆.
//!
//! Representation. A module id is a list of factors with a join marker
//! between consecutive factors. `Join::K` separates polynomial variable
//! groups; `Join::A` and `Join::AStar` share one group, with the coefficient
//! polynomial carried on the rightmost factor of the group. An element is a
//! map from basis-index tuples (one index per factor) to a polynomial in
//! n·(number of groups) variables. Zero coefficients are pruned, so
//! structural equality is mathematical equality.
//!
//! Elements of deformed tensor products (`AStar` joins) use the same data;
//! the tuple (a, b) with polynomial p stands for e_a ⊗_{A⋆} (f_b·p), the
//! canonical section of the quotient. Constructors that produce non-normal
//! representatives re-normalize through the h-adic solve in `geometry`.
//!
//! PBW monomials act as ordered compositions of generator actions; a
//! generator acts as a derivation across every tensor boundary, by the Lie
//! derivative on each factor.

use crate::lie::LieAlgebra;
use crate::poly::Poly;
use crate::series::KSeries;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Factor {
    /// Exterior forms of a fixed degree; degree 0 is the coordinate algebra A.
    Form(u8),
    /// Exterior forms of mixed degree (the full exterior algebra).
    FormAny,
    /// Vector fields, basis {∂_i}.
    Vector,
    /// The dual of the vector-field module, basis {∂'^i} with ∂'^i(∂_j) = δ^i_j.
    VectorDual,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum CarrierKind {
    Forms,
    Vector,
    VectorDual,
}

impl Factor {
    pub fn carrier_kind(&self) -> CarrierKind {
        match self {
            Factor::Form(_) | Factor::FormAny => CarrierKind::Forms,
            Factor::Vector => CarrierKind::Vector,
            Factor::VectorDual => CarrierKind::VectorDual,
        }
    }

    /// Basis indices of this factor for n coordinates. Forms use bitmasks.
    pub fn basis_indices(&self, n: usize) -> Vec<u32> {
        match self {
            Factor::Form(k) => (0u32..(1 << n))
                .filter(|m| m.count_ones() == *k as u32)
                .collect(),
            Factor::FormAny => (0u32..(1 << n)).collect(),
            Factor::Vector | Factor::VectorDual => (0..n as u32).collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Join {
    /// Tensor product over K of classical-world modules: separate variable groups.
    K,
    /// Tensor product over K of deformed-world modules (⊗_⋆): same carrier as
    /// K, but the Hopf action distributes through the twisted coproduct.
    KStar,
    /// Tensor product over A (classical quotient).
    A,
    /// Tensor product over the deformed algebra A_⋆ (deformed quotient).
    AStar,
}

impl Join {
    /// Whether this join separates polynomial variable groups.
    pub fn splits_group(&self) -> bool {
        matches!(self, Join::K | Join::KStar)
    }

    /// Whether the Hopf action distributes with the twisted coproduct here.
    pub fn is_star(&self) -> bool {
        matches!(self, Join::KStar | Join::AStar)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub struct ModuleId {
    factors: Vec<Factor>,
    joins: Vec<Join>,
}

impl ModuleId {
    pub fn single(f: Factor) -> Self {
        ModuleId {
            factors: vec![f],
            joins: Vec::new(),
        }
    }

    /// The coordinate algebra A, i.e. zero-forms.
    pub fn coeff() -> Self {
        Self::single(Factor::Form(0))
    }

    pub fn forms(k: u8) -> Self {
        Self::single(Factor::Form(k))
    }

    pub fn forms_any() -> Self {
        Self::single(Factor::FormAny)
    }

    pub fn vector() -> Self {
        Self::single(Factor::Vector)
    }

    pub fn vector_dual() -> Self {
        Self::single(Factor::VectorDual)
    }

    pub fn tensor(&self, join: Join, other: &ModuleId) -> ModuleId {
        let mut factors = self.factors.clone();
        let mut joins = self.joins.clone();
        joins.push(join);
        factors.extend(other.factors.iter().cloned());
        joins.extend(other.joins.iter().cloned());
        ModuleId { factors, joins }
    }

    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> Factor {
        self.factors[i]
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn join(&self, i: usize) -> Join {
        self.joins[i]
    }

    pub fn joins(&self) -> &[Join] {
        &self.joins
    }

    /// Variable group of a factor: groups are delimited by K-type joins.
    pub fn group_of(&self, factor: usize) -> usize {
        self.joins[..factor]
            .iter()
            .filter(|j| j.splits_group())
            .count()
    }

    pub fn n_groups(&self) -> usize {
        self.joins.iter().filter(|j| j.splits_group()).count() + 1
    }

    /// Last factor index of a group (the one carrying the group coefficient).
    pub fn group_last_factor(&self, group: usize) -> usize {
        (0..self.factors.len())
            .rev()
            .find(|&i| self.group_of(i) == group)
            .expect("group out of range")
    }

    /// Sub-module spanned by a contiguous factor range.
    pub fn range_id(&self, range: Range<usize>) -> ModuleId {
        ModuleId {
            factors: self.factors[range.clone()].to_vec(),
            joins: if range.len() <= 1 {
                Vec::new()
            } else {
                self.joins[range.start..range.end - 1].to_vec()
            },
        }
    }

    /// Replace the join at position i (projections and φ maps re-tag joins).
    pub fn with_join(&self, i: usize, join: Join) -> ModuleId {
        let mut out = self.clone();
        out.joins[i] = join;
        out
    }

    /// Replace the factor at position i (e.g. Form(k) → Form(k+1) under d).
    pub fn with_factor(&self, i: usize, f: Factor) -> ModuleId {
        let mut out = self.clone();
        out.factors[i] = f;
        out
    }

    /// Same carriers up to form grading (Form(k) matches FormAny), same joins.
    pub fn carrier_compatible(&self, other: &ModuleId) -> bool {
        self.factors.len() == other.factors.len()
            && self.joins == other.joins
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.carrier_kind() == b.carrier_kind())
    }
}

impl fmt::Display for ModuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                match self.joins[i - 1] {
                    Join::K => write!(f, "⊗")?,
                    Join::KStar => write!(f, "⊗⋆")?,
                    Join::A => write!(f, "⊗A")?,
                    Join::AStar => write!(f, "⊗A⋆")?,
                }
            }
            match fac {
                Factor::Form(0) => write!(f, "A")?,
                Factor::Form(k) => write!(f, "Ω{}", k)?,
                Factor::FormAny => write!(f, "Ω•")?,
                Factor::Vector => write!(f, "Ξ")?,
                Factor::VectorDual => write!(f, "Ξ'")?,
            }
        }
        Ok(())
    }
}

/// An element of a (possibly composite) module in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Elt {
    module: ModuleId,
    n: usize,
    trunc: usize,
    terms: BTreeMap<Vec<u32>, Poly>,
}

impl Elt {
    pub fn zero(module: ModuleId, n: usize, trunc: usize) -> Self {
        Elt {
            module,
            n,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    /// An element of A from a polynomial in the n coordinates.
    pub fn from_poly(p: &Poly) -> Self {
        let mut e = Elt::zero(ModuleId::coeff(), p.n_vars(), p.trunc_order());
        e.insert(vec![0], p.clone());
        e
    }

    /// The unit of A.
    pub fn one_a(n: usize, trunc: usize) -> Self {
        Elt::from_poly(&Poly::one(n, trunc))
    }

    /// A pure basis element of a single-factor module.
    pub fn basis(module: ModuleId, idx: u32, n: usize, trunc: usize) -> Self {
        assert_eq!(module.n_factors(), 1);
        let mut e = Elt::zero(module, n, trunc);
        e.insert(vec![idx], Poly::one(n, trunc));
        e
    }

    /// Basis vector field ∂_i.
    pub fn vector_basis(i: usize, n: usize, trunc: usize) -> Self {
        Self::basis(ModuleId::vector(), i as u32, n, trunc)
    }

    /// Dual basis covector ∂'^i.
    pub fn vector_dual_basis(i: usize, n: usize, trunc: usize) -> Self {
        Self::basis(ModuleId::vector_dual(), i as u32, n, trunc)
    }

    /// The one-form dx_i.
    pub fn one_form(i: usize, n: usize, trunc: usize) -> Self {
        Self::basis(ModuleId::forms(1), 1 << i, n, trunc)
    }

    pub fn module(&self) -> &ModuleId {
        &self.module
    }

    /// Retag the module id (carrier-compatible ids only): used when a
    /// graded result is known to live in a specific degree, or when a
    /// FormAny output should be read as Form(k).
    pub fn with_module(&self, module: ModuleId) -> Elt {
        assert!(
            self.module.carrier_compatible(&module),
            "retag must preserve carriers: {} vs {}",
            self.module,
            module
        );
        let mut out = self.clone();
        out.module = module;
        out
    }

    pub fn n_coords(&self) -> usize {
        self.n
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Poly)> {
        self.terms.iter()
    }

    pub fn total_vars(&self) -> usize {
        self.n * self.module.n_groups()
    }

    pub fn insert(&mut self, tuple: Vec<u32>, p: Poly) {
        assert_eq!(tuple.len(), self.module.n_factors());
        assert_eq!(p.n_vars(), self.total_vars(), "coefficient variable count");
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tuple) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&p);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Elt) -> Elt {
        assert!(
            self.module.carrier_compatible(&rhs.module),
            "module mismatch: {} vs {}",
            self.module,
            rhs.module
        );
        let mut out = self.clone();
        for (t, p) in &rhs.terms {
            out.insert(t.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Elt) -> Elt {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Elt {
        let mut out = Elt::zero(self.module.clone(), self.n, self.trunc);
        for (t, p) in &self.terms {
            out.insert(t.clone(), p.neg());
        }
        out
    }

    pub fn scale(&self, c: &KSeries) -> Elt {
        let mut out = Elt::zero(self.module.clone(), self.n, self.trunc);
        for (t, p) in &self.terms {
            out.insert(t.clone(), p.scale(c));
        }
        out
    }

    /// Classical multiplication by a ∈ A into the given variable group.
    pub fn mul_coeff_at_group(&self, group: usize, a: &Poly) -> Elt {
        let embedded = a.embed(group, self.module.n_groups());
        let mut out = Elt::zero(self.module.clone(), self.n, self.trunc);
        for (t, p) in &self.terms {
            out.insert(t.clone(), p.mul(&embedded));
        }
        out
    }

    /// Classical right action of a ∈ A (rightmost group).
    pub fn mul_coeff_right(&self, a: &Poly) -> Elt {
        self.mul_coeff_at_group(self.module.n_groups() - 1, a)
    }

    /// Classical left action of a ∈ A (leftmost group).
    pub fn mul_coeff_left(&self, a: &Poly) -> Elt {
        self.mul_coeff_at_group(0, a)
    }

    /// For a single-factor degree-zero form element, the underlying polynomial.
    pub fn as_poly(&self) -> Poly {
        assert_eq!(self.module.n_factors(), 1);
        assert_eq!(self.module.factor(0).carrier_kind(), CarrierKind::Forms);
        let mut p = Poly::zero(self.n, self.trunc);
        for (t, q) in &self.terms {
            assert_eq!(t[0], 0, "element has positive form degree");
            p = p.add(q);
        }
        p
    }

    pub fn classical_part(&self) -> Elt {
        let mut out = Elt::zero(self.module.clone(), self.n, self.trunc);
        for (t, p) in &self.terms {
            out.insert(t.clone(), p.classical_part());
        }
        out
    }

    /// Equality of the underlying data, with module ids compared only up to
    /// carrier compatibility (a Form(k) result matches a FormAny result).
    pub fn eq_data(&self, other: &Elt) -> bool {
        self.module.carrier_compatible(&other.module) && self.terms == other.terms
    }

    /// Tensor product over K (blocks stay separate).
    pub fn tensor_k(&self, rhs: &Elt) -> Elt {
        self.tensor_raw(Join::K, rhs)
    }

    /// Tensor product over A in classical normal form (groups merge).
    pub fn tensor_a(&self, rhs: &Elt) -> Elt {
        self.tensor_raw(Join::A, rhs)
    }

    /// Tensor with an arbitrary join marker. AStar assemblies must come
    /// through `geometry` (they need the star normalizer), except for
    /// re-assembly of already ⋆-normalized pieces.
    pub(crate) fn tensor_raw(&self, join: Join, rhs: &Elt) -> Elt {
        assert_eq!(self.n, rhs.n);
        assert_eq!(self.trunc, rhs.trunc);
        assert!(
            join != Join::AStar,
            "deformed tensor products are built through the star normalizer"
        );
        let module = self.module.tensor(join, &rhs.module);
        let ga = self.module.n_groups();
        let total = module.n_groups();
        let left_map: Vec<usize> = (0..self.total_vars()).collect();
        let offset = if join.splits_group() { ga } else { ga - 1 };
        let right_map: Vec<usize> = (0..rhs.total_vars())
            .map(|v| v + offset * self.n)
            .collect();
        let mut out = Elt::zero(module, self.n, self.trunc);
        for (ta, pa) in &self.terms {
            let pa = pa.map_vars(&left_map, total * self.n);
            for (tb, pb) in &rhs.terms {
                let pb = pb.map_vars(&right_map, total * self.n);
                let mut tuple = ta.clone();
                tuple.extend_from_slice(tb);
                out.insert(tuple, pa.mul(&pb));
            }
        }
        out
    }

    /// Canonical projection turning the K-join at position `join_idx` into a
    /// classical A-join: the two variable groups merge.
    pub fn project_join_classical(&self, join_idx: usize) -> Elt {
        assert!(self.module.join(join_idx).splits_group());
        let g = self.module.group_of(join_idx); // group left of the join
        let new_groups = self.module.n_groups() - 1;
        let map: Vec<usize> = (0..self.total_vars())
            .map(|v| {
                let grp = v / self.n;
                let i = v % self.n;
                let new_grp = if grp <= g { grp } else { grp - 1 };
                new_grp * self.n + i
            })
            .collect();
        let module = self.module.with_join(join_idx, Join::A);
        let mut out = Elt::zero(module, self.n, self.trunc);
        for (t, p) in &self.terms {
            out.insert(t.clone(), p.map_vars(&map, new_groups * self.n));
        }
        out
    }

    /// Reorder two adjacent factor ranges [a..m][m..b] into [m..b][a..m].
    /// Variable groups fully inside either range move along; a group shared
    /// across the boundary stays put (the swap is then only a tuple reorder).
    pub fn swap_ranges(&self, a: usize, m: usize, b: usize) -> Elt {
        assert!(a < m && m < b && b <= self.module.n_factors());
        let factors = self.module.factors().to_vec();
        let joins = self.module.joins().to_vec();
        let mut new_factors = factors.clone();
        let left: Vec<Factor> = factors[a..m].to_vec();
        let right: Vec<Factor> = factors[m..b].to_vec();
        new_factors.splice(a..b, right.iter().cloned().chain(left.iter().cloned()));
        let mut new_joins = joins.clone();
        let inner_left: Vec<Join> = joins[a..m - 1].to_vec();
        let inner_right: Vec<Join> = joins[m..b - 1].to_vec();
        let boundary = joins[m - 1];
        let mut spliced = Vec::new();
        spliced.extend(inner_right);
        spliced.push(boundary);
        spliced.extend(inner_left);
        new_joins.splice(a..b - 1, spliced);
        let module = ModuleId {
            factors: new_factors,
            joins: new_joins,
        };

        let old_groups = self.module.n_groups();
        assert_eq!(module.n_groups(), old_groups);
        let nf = self.module.n_factors();
        let mut pos_map = vec![0usize; nf];
        for i in 0..a {
            pos_map[i] = i;
        }
        for i in b..nf {
            pos_map[i] = i;
        }
        for (off, i) in (a..m).enumerate() {
            pos_map[i] = a + (b - m) + off;
        }
        for (off, i) in (m..b).enumerate() {
            pos_map[i] = a + off;
        }
        // An old group maps to the group of the new position of its last
        // factor; a group straddling the swap boundary must stay in place.
        let mut group_map = vec![usize::MAX; old_groups];
        for i in 0..nf {
            let og = self.module.group_of(i);
            let ng = module.group_of(pos_map[i]);
            if group_map[og] == usize::MAX {
                group_map[og] = ng;
            } else {
                assert_eq!(
                    group_map[og], ng,
                    "variable group split by swap; ranges must respect K-joins"
                );
            }
        }
        let var_map: Vec<usize> = (0..self.total_vars())
            .map(|v| group_map[v / self.n] * self.n + (v % self.n))
            .collect();

        let mut out = Elt::zero(module, self.n, self.trunc);
        for (t, p) in &self.terms {
            let mut tuple = vec![0u32; nf];
            for (i, &idx) in t.iter().enumerate() {
                tuple[pos_map[i]] = idx;
            }
            out.insert(tuple, p.map_vars(&var_map, self.total_vars()));
        }
        out
    }

    /// Action of a single generator as a derivation over the factors in
    /// `range`. A variable group is differentiated iff its last factor lies
    /// in the range (the group coefficient belongs to that factor).
    pub fn act_generator(&self, lie: &LieAlgebra, g: usize, range: Range<usize>) -> Elt {
        let n_groups = self.module.n_groups();
        let mut out = Elt::zero(self.module.clone(), self.n, self.trunc);
        for (t, p) in &self.terms {
            for f in range.clone() {
                let group = self.module.group_of(f);
                for (idx, coeff) in
                    factor_action(lie, self.module.factor(f), g, t[f], self.n)
                {
                    let mut tuple = t.clone();
                    tuple[f] = idx;
                    out.insert(tuple, p.mul(&coeff.embed(group, n_groups)));
                }
            }
            for group in 0..n_groups {
                if !range.contains(&self.module.group_last_factor(group)) {
                    continue;
                }
                for c in 0..self.n {
                    let field = lie.field(g, c);
                    if field.is_zero() {
                        continue;
                    }
                    let dp = p.diff(group * self.n + c);
                    if dp.is_zero() {
                        continue;
                    }
                    out.insert(t.clone(), dp.mul(&field.embed(group, n_groups)));
                }
            }
        }
        out
    }

    /// Action of a PBW monomial on the factors in `range` (X_dim acts first).
    pub fn act_monomial(&self, lie: &LieAlgebra, exp: &[u32], range: Range<usize>) -> Elt {
        let mut cur = self.clone();
        for i in (0..lie.dim()).rev() {
            for _ in 0..exp[i] {
                cur = cur.act_generator(lie, i, range.clone());
            }
        }
        cur
    }

    /// Action of an algebra element on the factors in `range`.
    pub fn act_helt(&self, lie: &LieAlgebra, x: &crate::hopf::HElt, range: Range<usize>) -> Elt {
        let mut out = Elt::zero(self.module.clone(), self.n, self.trunc);
        for (e, c) in x.terms() {
            out = out.add(&self.act_monomial(lie, e, range.clone()).scale(c));
        }
        out
    }

    /// Legwise action of a tensor: leg i of every term acts on `legs[i]`.
    pub fn act_htensor(
        &self,
        lie: &LieAlgebra,
        t: &crate::hopf::HTensor,
        legs: &[Range<usize>],
    ) -> Elt {
        assert_eq!(t.legs(), legs.len());
        let mut out = Elt::zero(self.module.clone(), self.n, self.trunc);
        for (monos, c) in t.terms() {
            let mut cur = self.clone();
            for (leg, range) in legs.iter().enumerate() {
                cur = cur.act_monomial(lie, &monos[leg], range.clone());
                if cur.is_zero() {
                    break;
                }
            }
            out = out.add(&cur.scale(c));
        }
        out
    }

    /// Exterior derivative applied to the last factor (which must be a form
    /// factor); differentiates the last variable group.
    pub fn exterior_d(&self) -> Elt {
        let nf = self.module.n_factors();
        let last = nf - 1;
        let module = match self.module.factor(last) {
            Factor::Form(k) => self.module.with_factor(last, Factor::Form(k + 1)),
            Factor::FormAny => self.module.clone(),
            _ => panic!(
                "exterior derivative needs a form factor, got {}",
                self.module
            ),
        };
        let group = self.module.group_of(last);
        let mut out = Elt::zero(module, self.n, self.trunc);
        for (t, p) in &self.terms {
            let mask = t[last];
            for j in 0..self.n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let dp = p.diff(group * self.n + j);
                if dp.is_zero() {
                    continue;
                }
                let (sign, new_mask) = wedge_masks(1 << j, mask, self.n);
                let mut tuple = t.clone();
                tuple[last] = new_mask;
                out.insert(tuple, if sign > 0 { dp } else { dp.neg() });
            }
        }
        out
    }

    /// Wedge a single-factor form onto the last factor from the right:
    /// (… ⊗ ω)∧η. The coefficient of η lands in the last group.
    pub fn wedge_last(&self, eta: &Elt) -> Elt {
        assert_eq!(eta.module.n_factors(), 1);
        assert_eq!(eta.module.factor(0).carrier_kind(), CarrierKind::Forms);
        let nf = self.module.n_factors();
        let last = nf - 1;
        assert_eq!(
            self.module.factor(last).carrier_kind(),
            CarrierKind::Forms,
            "wedge needs a form factor"
        );
        let module = self.module.with_factor(last, Factor::FormAny);
        let group = self.module.group_of(last);
        let n_groups = self.module.n_groups();
        let mut out = Elt::zero(module, self.n, self.trunc);
        for (t, p) in &self.terms {
            for (te, pe) in &eta.terms {
                let (sign, mask) = wedge_masks(t[last], te[0], self.n);
                if sign == 0 {
                    continue;
                }
                let q = p.mul(&pe.embed(group, n_groups));
                let mut tuple = t.clone();
                tuple[last] = mask;
                out.insert(tuple, if sign > 0 { q } else { q.neg() });
            }
        }
        out
    }

    /// Pairing of a dual vector against the first factor (which must be a
    /// Vector factor): (v'⊗id)(v⊗…) = v'(v)·(…).
    pub fn contract_dual_first(&self, vdual: &Elt) -> Elt {
        assert_eq!(vdual.module.n_factors(), 1);
        assert_eq!(vdual.module.factor(0), Factor::VectorDual);
        assert_eq!(self.module.factor(0), Factor::Vector);
        let nf = self.module.n_factors();
        assert!(nf >= 2, "contraction leaves at least one factor");
        assert_ne!(self.module.join(0), Join::K, "cannot contract across ⊗K");
        let module = ModuleId {
            factors: self.module.factors()[1..].to_vec(),
            joins: self.module.joins()[1..].to_vec(),
        };
        let n_groups = self.module.n_groups();
        let mut out = Elt::zero(module, self.n, self.trunc);
        for (t, p) in &self.terms {
            for (td, pd) in &vdual.terms {
                if t[0] != td[0] {
                    continue;
                }
                out.insert(t[1..].to_vec(), p.mul(&pd.embed(0, n_groups)));
            }
        }
        out
    }

    /// Pairing of a vector against the last factor (which must be a
    /// VectorDual factor): (id⊗v)(…⊗v') = (…)·v'(v).
    pub fn contract_dual_last(&self, v: &Elt) -> Elt {
        assert_eq!(v.module.n_factors(), 1);
        assert_eq!(v.module.factor(0), Factor::Vector);
        let nf = self.module.n_factors();
        let last = nf - 1;
        assert_eq!(self.module.factor(last), Factor::VectorDual);
        assert!(nf >= 2, "contraction leaves at least one factor");
        assert_ne!(
            self.module.join(last - 1),
            Join::K,
            "cannot contract across ⊗K"
        );
        let module = ModuleId {
            factors: self.module.factors()[..last].to_vec(),
            joins: self.module.joins()[..last - 1].to_vec(),
        };
        let n_groups = self.module.n_groups();
        let mut out = Elt::zero(module, self.n, self.trunc);
        for (t, p) in &self.terms {
            for (tv, pv) in &v.terms {
                if t[last] != tv[0] {
                    continue;
                }
                out.insert(
                    t[..last].to_vec(),
                    p.mul(&pv.embed(n_groups - 1, n_groups)),
                );
            }
        }
        out
    }

    /// Pairing of single-factor elements: VectorDual against Vector (either
    /// order), valued in A.
    pub fn pair_dual(&self, other: &Elt) -> Elt {
        assert_eq!(self.module.n_factors(), 1);
        assert_eq!(other.module.n_factors(), 1);
        let kinds = (self.module.factor(0), other.module.factor(0));
        assert!(
            matches!(
                kinds,
                (Factor::VectorDual, Factor::Vector) | (Factor::Vector, Factor::VectorDual)
            ),
            "dual pairing needs a vector and a covector"
        );
        let mut p = Poly::zero(self.n, self.trunc);
        for (ta, pa) in &self.terms {
            for (tb, pb) in &other.terms {
                if ta[0] == tb[0] {
                    p = p.add(&pa.mul(pb));
                }
            }
        }
        Elt::from_poly(&p)
    }

    /// Interior product of a vector field into the last form factor:
    /// i_X(dx^I) = Σ_{j∈I} ±X^j dx^{I∖j}. Test oracle for the Cartan formula.
    pub fn interior_product(&self, field: &Elt) -> Elt {
        assert_eq!(field.module.n_factors(), 1);
        assert_eq!(field.module.factor(0), Factor::Vector);
        let last = self.module.n_factors() - 1;
        assert_eq!(self.module.factor(last).carrier_kind(), CarrierKind::Forms);
        let module = self.module.with_factor(last, Factor::FormAny);
        let group = self.module.group_of(last);
        let n_groups = self.module.n_groups();
        let mut out = Elt::zero(module, self.n, self.trunc);
        for (t, p) in &self.terms {
            let mask = t[last];
            for (tf, pf) in &field.terms {
                let j = tf[0] as usize;
                if mask & (1 << j) == 0 {
                    continue;
                }
                let pos = (mask & ((1u32 << j) - 1)).count_ones();
                let q = p.mul(&pf.embed(group, n_groups));
                let mut tuple = t.clone();
                tuple[last] = mask & !(1 << j);
                out.insert(tuple, if pos % 2 == 0 { q } else { q.neg() });
            }
        }
        out
    }

    /// The monomial test basis of a module up to total polynomial degree
    /// `max_deg` across all variable groups.
    pub fn test_basis(module: &ModuleId, n: usize, trunc: usize, max_deg: u32) -> Vec<Elt> {
        let tuples = enumerate_tuples(module, n);
        let monos = enumerate_monomials(module.n_groups() * n, max_deg);
        let mut out = Vec::with_capacity(tuples.len() * monos.len());
        for t in &tuples {
            for m in &monos {
                let mut e = Elt::zero(module.clone(), n, trunc);
                e.insert(
                    t.clone(),
                    Poly::monomial_int(m, 1, module.n_groups() * n, trunc),
                );
                out.push(e);
            }
        }
        out
    }
}

fn enumerate_tuples(module: &ModuleId, n: usize) -> Vec<Vec<u32>> {
    let mut tuples: Vec<Vec<u32>> = vec![Vec::new()];
    for f in module.factors() {
        let idxs = f.basis_indices(n);
        let mut next = Vec::with_capacity(tuples.len() * idxs.len());
        for t in &tuples {
            for &i in &idxs {
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        tuples = next;
    }
    tuples
}

fn enumerate_monomials(n_vars: usize, max_deg: u32) -> Vec<Vec<u32>> {
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for d in 0..=left {
            cur[pos] = d;
            rec(out, cur, pos + 1, left - d);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_vars];
    rec(&mut out, &mut cur, 0, max_deg);
    out
}

/// Sign and union mask of dx^I ∧ dx^J; sign 0 when the masks intersect.
pub fn wedge_masks(left: u32, right: u32, n: usize) -> (i32, u32) {
    if left & right != 0 {
        return (0, 0);
    }
    let mut inversions = 0u32;
    for i in 0..n {
        if left & (1 << i) == 0 {
            continue;
        }
        inversions += (right & ((1u32 << i) - 1)).count_ones();
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    (sign, left | right)
}

/// Lie-derivative action of generator g on a single basis index of a factor,
/// returned as (new index, coefficient in the n coordinate variables).
fn factor_action(
    lie: &LieAlgebra,
    factor: Factor,
    g: usize,
    idx: u32,
    n: usize,
) -> Vec<(u32, Poly)> {
    match factor.carrier_kind() {
        CarrierKind::Forms => {
            // L_X(dx^I) = Σ_{i∈I} Σ_b (∂_b X^i)·(sign)·dx^{(I∖i)∪b}
            let mut out = Vec::new();
            for i in 0..n {
                if idx & (1 << i) == 0 {
                    continue;
                }
                let without = idx & !(1 << i);
                let pos_i = (idx & ((1u32 << i) - 1)).count_ones();
                let coeff_i = lie.field(g, i);
                for b in 0..n {
                    let d = coeff_i.diff(b);
                    if d.is_zero() {
                        continue;
                    }
                    if without & (1 << b) != 0 {
                        continue;
                    }
                    let pos_b = (without & ((1u32 << b) - 1)).count_ones();
                    let signed = if (pos_i + pos_b) % 2 == 0 { d } else { d.neg() };
                    out.push((without | (1 << b), signed));
                }
            }
            out
        }
        CarrierKind::Vector => {
            // [X, ∂_a] = -Σ_c (∂_a X^c) ∂_c
            let a = idx as usize;
            let mut out = Vec::new();
            for c in 0..n {
                let d = lie.field(g, c).diff(a);
                if !d.is_zero() {
                    out.push((c as u32, d.neg()));
                }
            }
            out
        }
        CarrierKind::VectorDual => {
            // X▷∂'^a = Σ_b (∂_b X^a) ∂'^b
            let a = idx as usize;
            let mut out = Vec::new();
            let coeff = lie.field(g, a);
            for b in 0..n {
                let d = coeff.diff(b);
                if !d.is_zero() {
                    out.push((b as u32, d));
                }
            }
            out
        }
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 [{}]", self.module);
        }
        let mut first = true;
        for (t, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "[{}]·({})",
                fmt_tuple(&self.module, t, self.n),
                p.display_grouped(self.n)
            )?;
        }
        Ok(())
    }
}

fn fmt_tuple(module: &ModuleId, tuple: &[u32], n: usize) -> String {
    let mut parts = Vec::new();
    for (i, &idx) in tuple.iter().enumerate() {
        let s = match module.factor(i).carrier_kind() {
            CarrierKind::Forms => {
                if idx == 0 {
                    "1".to_string()
                } else {
                    (0..n)
                        .filter(|j| idx & (1 << j) != 0)
                        .map(|j| format!("dx{}", j + 1))
                        .collect::<Vec<_>>()
                        .join("∧")
                }
            }
            CarrierKind::Vector => format!("∂{}", idx + 1),
            CarrierKind::VectorDual => format!("∂'{}", idx + 1),
        };
        parts.push(s);
    }
    parts.join("⊗")
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
