//! A complete Hopf-geometric world: the Lie algebra, the Hopf structure in
//! force (coproduct, antipode, counit), the R-matrix and the antipode
//! conjugator χ, together with the provenance chain of twists applied.
//!
//! A context is either the undeformed cocommutative base or the result of
//! twisting another context. All deformed structure is stored relative to
//! the base through the cumulative twist: the coproduct in force is
//! Δ(ξ) = F·Δ_base(ξ)·F⁻¹ and the antipode is S(ξ) = χ·S_base(ξ)·χ⁻¹.
//! Contexts are immutable; deformation produces a new context.

use crate::hopf::{
    antipode_base, coproduct_base, h_mul, tensor_mul, HElt, HTensor, PbwExp,
};
use crate::lie::LieAlgebra;
use crate::series::KSeries;
use crate::twist::Twist;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// The deepest Sweedler expansion used anywhere in the identity suites.
pub const MAX_COPRODUCT_LEGS: usize = 4;

pub struct Context {
    lie: Arc<LieAlgebra>,
    trunc: usize,
    /// Cumulative twist relative to the cocommutative base (unit when undeformed).
    twist: HTensor,
    twist_inv: HTensor,
    /// R-matrix of this context: F_21·F⁻¹ over the triangular base R = 1⊗1.
    r_matrix: HTensor,
    r_matrix_inv: HTensor,
    /// Antipode conjugator and its inverse.
    chi: HElt,
    chi_inv: HElt,
    parent: Option<Arc<Context>>,
    /// The twist that produced this context from its parent.
    last_twist: Option<Twist>,
    provenance: Vec<String>,
    coproduct_cache: Mutex<HashMap<PbwExp, HTensor>>,
}

impl Context {
    pub fn undeformed(lie: Arc<LieAlgebra>) -> Arc<Context> {
        let dim = lie.dim();
        let trunc = lie.trunc_order();
        Arc::new(Context {
            twist: HTensor::unit(dim, trunc, 2),
            twist_inv: HTensor::unit(dim, trunc, 2),
            r_matrix: HTensor::unit(dim, trunc, 2),
            r_matrix_inv: HTensor::unit(dim, trunc, 2),
            chi: HElt::one(dim, trunc),
            chi_inv: HElt::one(dim, trunc),
            parent: None,
            last_twist: None,
            provenance: Vec::new(),
            coproduct_cache: Mutex::new(HashMap::new()),
            trunc,
            lie,
        })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn lie_arc(&self) -> Arc<LieAlgebra> {
        Arc::clone(&self.lie)
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn n_coords(&self) -> usize {
        self.lie.n_coords()
    }

    pub fn is_deformed(&self) -> bool {
        self.parent.is_some()
    }

    pub fn parent(&self) -> Option<&Arc<Context>> {
        self.parent.as_ref()
    }

    /// The twist that produced this context from its parent.
    pub fn last_twist(&self) -> Option<&Twist> {
        self.last_twist.as_ref()
    }

    /// Cumulative twist relative to the cocommutative base.
    pub fn twist(&self) -> &HTensor {
        &self.twist
    }

    pub fn twist_inv(&self) -> &HTensor {
        &self.twist_inv
    }

    pub fn r_matrix(&self) -> &HTensor {
        &self.r_matrix
    }

    pub fn r_matrix_inv(&self) -> &HTensor {
        &self.r_matrix_inv
    }

    pub fn chi(&self) -> &HElt {
        &self.chi
    }

    pub fn chi_inv(&self) -> &HElt {
        &self.chi_inv
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Structural equality of the Hopf data, ignoring provenance. This is
    /// what "twisting back reproduces the context" means.
    pub fn structurally_eq(&self, other: &Context) -> bool {
        self.trunc == other.trunc
            && self.twist == other.twist
            && self.twist_inv == other.twist_inv
            && self.r_matrix == other.r_matrix
            && self.r_matrix_inv == other.r_matrix_inv
            && self.chi == other.chi
            && self.chi_inv == other.chi_inv
    }

    /// Two-leg coproduct of a single PBW monomial, cached.
    pub fn coproduct_monomial(&self, mono: &PbwExp) -> HTensor {
        if let Some(hit) = self.coproduct_cache.lock().unwrap().get(mono) {
            return hit.clone();
        }
        let x = HElt::monomial(mono.clone(), KSeries::one(self.trunc));
        let base = coproduct_base(&self.lie, &x, 2);
        let out = if self.is_deformed() {
            let fd = tensor_mul(&self.lie, &self.twist, &base);
            tensor_mul(&self.lie, &fd, &self.twist_inv)
        } else {
            base
        };
        self.coproduct_cache
            .lock()
            .unwrap()
            .insert(mono.clone(), out.clone());
        out
    }

    /// Coproduct in force, iterated to `legs` output legs by repeatedly
    /// expanding the first leg (coassociativity makes the choice immaterial,
    /// and is itself one of the checked identities).
    pub fn coproduct(&self, x: &HElt, legs: usize) -> HTensor {
        assert!(
            (2..=MAX_COPRODUCT_LEGS).contains(&legs),
            "coproduct legs must be between 2 and {}",
            MAX_COPRODUCT_LEGS
        );
        let mut t = {
            let mut acc = HTensor::zero(self.lie.dim(), self.trunc, 2);
            for (e, c) in x.terms() {
                acc = acc.add(&self.coproduct_monomial(e).scale(c));
            }
            acc
        };
        while t.legs() < legs {
            t = t.expand_leg(0, |m| self.coproduct_monomial(m));
        }
        t
    }

    /// Counit (shared by all twisted structures).
    pub fn counit(&self, x: &HElt) -> KSeries {
        x.counit()
    }

    /// Antipode in force: χ·S_base(ξ)·χ⁻¹.
    pub fn antipode(&self, x: &HElt) -> HElt {
        let s = antipode_base(&self.lie, x);
        if !self.is_deformed() {
            return s;
        }
        h_mul(&self.lie, &h_mul(&self.lie, &self.chi, &s), &self.chi_inv)
    }

    /// Inverse antipode. The base is cocommutative, where S⁻¹ = S; for a
    /// twisted structure S⁻¹(ξ) = S_base(χ⁻¹·ξ·χ).
    pub fn antipode_inv(&self, x: &HElt) -> HElt {
        let conj = h_mul(&self.lie, &h_mul(&self.lie, &self.chi_inv, x), &self.chi);
        antipode_base(&self.lie, &conj)
    }

    /// Deform by a twist of this context. Refused unless the twist passes
    /// verification against this context's Hopf structure.
    pub fn deform(self: &Arc<Context>, twist: &Twist) -> Result<Arc<Context>, crate::Error> {
        let report = twist.verify(self);
        if !report.all_ok() {
            return Err(crate::Error::UnsupportedTwist(format!(
                "refusing to deform by unverified twist {}: {:?}",
                twist.desc(),
                report
            )));
        }
        let lie = &self.lie;
        let cumulative = tensor_mul(lie, twist.tensor(), &self.twist);
        let cumulative_inv = tensor_mul(lie, &self.twist_inv, twist.inverse_tensor());
        let r_matrix = tensor_mul(lie, &cumulative.flip(), &cumulative_inv);
        let r_matrix_inv = r_matrix.invert(lie)?;
        // χ of the new twist is computed with the *current* antipode, then
        // composed with the accumulated conjugator.
        let chi_new = twist
            .tensor()
            .map_leg(1, |m| self.antipode(&HElt::monomial(m.clone(), KSeries::one(self.trunc))))
            .contract_all(lie);
        let chi_new_inv = twist
            .inverse_tensor()
            .map_leg(0, |m| self.antipode(&HElt::monomial(m.clone(), KSeries::one(self.trunc))))
            .contract_all(lie);
        let chi = h_mul(lie, &chi_new, &self.chi);
        let chi_inv = h_mul(lie, &self.chi_inv, &chi_new_inv);
        debug_assert_eq!(
            h_mul(lie, &chi, &chi_inv),
            HElt::one(lie.dim(), self.trunc),
            "antipode conjugator must invert exactly"
        );
        let mut provenance = self.provenance.clone();
        provenance.push(twist.desc().to_string());
        Ok(Arc::new(Context {
            lie: Arc::clone(&self.lie),
            trunc: self.trunc,
            twist: cumulative,
            twist_inv: cumulative_inv,
            r_matrix,
            r_matrix_inv,
            chi,
            chi_inv,
            parent: Some(Arc::clone(self)),
            last_twist: Some(twist.clone()),
            provenance,
            coproduct_cache: Mutex::new(HashMap::new()),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::series::{rat, Rat};
    use crate::twist::{build_abelian_twist, build_jordanian_twist};
    use num::Zero;

    pub(crate) fn moyal_base(trunc: usize) -> Arc<Context> {
        let zero3 = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        let one = |c: usize| {
            let mut r = vec![Poly::zero(2, trunc); 2];
            r[c] = Poly::one(2, trunc);
            r
        };
        let lie = LieAlgebra::new(
            vec!["D1".into(), "D2".into()],
            zero3,
            vec![one(0), one(1)],
            2,
            trunc,
        )
        .unwrap();
        Context::undeformed(Arc::new(lie))
    }

    pub(crate) fn moyal_r() -> Vec<Vec<Rat>> {
        vec![
            vec![Rat::zero(), rat(1)],
            vec![rat(-1), Rat::zero()],
        ]
    }

    fn jordanian_base(trunc: usize) -> Arc<Context> {
        let mut s = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        s[0][1][1] = rat(-1);
        s[1][0][1] = rat(1);
        let lie = LieAlgebra::new(
            vec!["H".into(), "E".into()],
            s,
            vec![vec![Poly::var(0, 1, trunc)], vec![Poly::one(1, trunc)]],
            1,
            trunc,
        )
        .unwrap();
        Context::undeformed(Arc::new(lie))
    }

    #[test]
    fn moyal_twist_first_order() {
        let ctx = moyal_base(1);
        let tw = build_abelian_twist(&ctx, &moyal_r(), &crate::series::ratq(-1, 2)).unwrap();
        // F = 1⊗1 - (h/2)(D1⊗D2 - D2⊗D1) at N=1.
        let mut expect = HTensor::unit(2, 1, 2);
        expect.insert(
            vec![vec![1, 0], vec![0, 1]],
            KSeries::monomial(crate::series::ratq(-1, 2), 1, 1),
        );
        expect.insert(
            vec![vec![0, 1], vec![1, 0]],
            KSeries::monomial(crate::series::ratq(1, 2), 1, 1),
        );
        assert_eq!(tw.tensor(), &expect);
    }

    #[test]
    fn lambda_zero_is_identity() {
        let ctx = moyal_base(2);
        let tw = build_abelian_twist(&ctx, &moyal_r(), &Rat::zero()).unwrap();
        assert_eq!(tw.tensor(), &HTensor::unit(2, 2, 2));
    }

    #[test]
    fn moyal_twist_verifies_at_n3() {
        let ctx = moyal_base(3);
        let tw = build_abelian_twist(&ctx, &moyal_r(), &crate::series::ratq(-1, 2)).unwrap();
        assert!(tw.verify(&ctx).all_ok());
    }

    #[test]
    fn symmetric_abelian_exponential_is_cocycle() {
        // F = exp(h X1⊗X1): abelian exponentials always satisfy the cocycle.
        let ctx = moyal_base(3);
        let mut r = vec![vec![Rat::zero(); 2]; 2];
        r[0][0] = rat(1);
        let tw = build_abelian_twist(&ctx, &r, &rat(1)).unwrap();
        assert!(tw.verify(&ctx).all_ok());
    }

    #[test]
    fn jordanian_twist_verifies_at_n3() {
        let ctx = jordanian_base(3);
        let tw = build_jordanian_twist(&ctx, 0, 1).unwrap();
        let report = tw.verify(&ctx);
        assert!(report.all_ok(), "report: {:?}", report);
    }

    #[test]
    fn jordanian_first_order_carries_minus_sign() {
        // With [H,E] = -E the cocycle forces F = 1⊗1 - h·H⊗E + O(h²).
        let ctx = jordanian_base(1);
        let tw = build_jordanian_twist(&ctx, 0, 1).unwrap();
        let mut expect = HTensor::unit(2, 1, 2);
        expect.insert(
            vec![vec![1, 0], vec![0, 1]],
            KSeries::monomial(rat(-1), 1, 1),
        );
        assert_eq!(tw.tensor(), &expect);
    }

    #[test]
    fn jordanian_wrong_pair_is_rejected() {
        let ctx = jordanian_base(2);
        assert!(build_jordanian_twist(&ctx, 1, 0).is_err());
    }

    #[test]
    fn deform_and_twist_back_restores_context() {
        for (ctx, tw) in [
            {
                let c = moyal_base(3);
                let t = build_abelian_twist(&c, &moyal_r(), &crate::series::ratq(-1, 2)).unwrap();
                (c, t)
            },
            {
                let c = jordanian_base(3);
                let t = build_jordanian_twist(&c, 0, 1).unwrap();
                (c, t)
            },
        ] {
            let deformed = ctx.deform(&tw).unwrap();
            assert!(deformed.is_deformed());
            let back = deformed.deform(&tw.inverse()).unwrap();
            assert!(
                back.structurally_eq(&ctx),
                "twist-back must restore all structural fields"
            );
        }
    }

    #[test]
    fn moyal_chi_is_trivial() {
        let ctx = moyal_base(3);
        let tw = build_abelian_twist(&ctx, &moyal_r(), &crate::series::ratq(-1, 2)).unwrap();
        let deformed = ctx.deform(&tw).unwrap();
        assert_eq!(deformed.chi(), &HElt::one(2, 3));
        // Hence (S^F)⁻¹ = S on the Moyal world.
        let x = HElt::generator(0, 2, 3);
        assert_eq!(deformed.antipode_inv(&x), deformed.antipode(&x));
    }

    #[test]
    fn antipode_inverse_inverts() {
        let ctx = jordanian_base(3);
        let tw = build_jordanian_twist(&ctx, 0, 1).unwrap();
        let deformed = ctx.deform(&tw).unwrap();
        for exp in [vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]] {
            let x = HElt::monomial(exp, KSeries::one(3));
            assert_eq!(deformed.antipode_inv(&deformed.antipode(&x)), x);
            assert_eq!(deformed.antipode(&deformed.antipode_inv(&x)), x);
        }
    }

    #[test]
    fn moyal_r_matrix_is_exponential() {
        // R^F = F_21 F⁻¹ = exp(h(D1⊗D2 - D2⊗D1)) for the Moyal twist.
        let ctx = moyal_base(3);
        let tw = build_abelian_twist(&ctx, &moyal_r(), &crate::series::ratq(-1, 2)).unwrap();
        let deformed = ctx.deform(&tw).unwrap();
        let mut arg = HTensor::zero(2, 3, 2);
        arg.insert(vec![vec![1, 0], vec![0, 1]], KSeries::h(3));
        arg.insert(vec![vec![0, 1], vec![1, 0]], -&KSeries::h(3));
        let expect = crate::hopf::tensor_exp(ctx.lie(), &arg).unwrap();
        assert_eq!(deformed.r_matrix(), &expect);
    }
}
