//! K-linear maps between module carriers as first-class values: operational
//! composition trees over primitive maps, the adjoint actions lifting the
//! Hopf action to maps, the deformation isomorphisms D_F (right), D_F^cop
//! (left) and D_R (right↔left), the ⋆-composition, R-tensor products of
//! maps, and exact map equality on a degree-bounded test basis.
//!
//! Maps are operational, not matrices: a general K-linear map on these
//! modules has no finite matrix, so equality is decided by evaluating both
//! sides on every monomial basis element up to the test degree. Sweedler
//! sums appearing in adjoint actions are materialized eagerly as finite
//! tensor expansions.

use crate::context::Context;
use crate::geometry;
use crate::hopf::HElt;
use crate::module::{Elt, Join, ModuleId};
use crate::poly::Poly;
use crate::series::KSeries;
use std::fmt;

use std::sync::Arc;

type EvalFn = dyn Fn(&Elt) -> Elt + Send + Sync;

/// Linearity claims a constructor may assert; spot-verified before use in
/// flag-dependent operations rather than proven symbolically.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct Flags {
    pub right_a: bool,
    pub left_a: bool,
    pub h_equivariant: bool,
}

#[derive(Clone)]
pub struct LinMap {
    source: ModuleId,
    target: ModuleId,
    n: usize,
    trunc: usize,
    flags: Flags,
    desc: String,
    f: Arc<EvalFn>,
}

impl LinMap {
    pub fn new(
        source: ModuleId,
        target: ModuleId,
        n: usize,
        trunc: usize,
        desc: impl Into<String>,
        f: impl Fn(&Elt) -> Elt + Send + Sync + 'static,
    ) -> Self {
        LinMap {
            source,
            target,
            n,
            trunc,
            flags: Flags::default(),
            desc: desc.into(),
            f: Arc::new(f),
        }
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }

    pub fn source(&self) -> &ModuleId {
        &self.source
    }

    pub fn target(&self) -> &ModuleId {
        &self.target
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn desc(&self) -> &str {
        &self.desc
    }

    pub fn n_coords(&self) -> usize {
        self.n
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn apply(&self, v: &Elt) -> Elt {
        assert!(
            v.module().carrier_compatible(&self.source),
            "map {} applied to {} (wants {})",
            self.desc,
            v.module(),
            self.source
        );
        (self.f)(v)
    }

    pub fn identity(module: ModuleId, n: usize, trunc: usize) -> Self {
        LinMap::new(module.clone(), module, n, trunc, "id", |v| v.clone()).with_flags(Flags {
            right_a: true,
            left_a: true,
            h_equivariant: true,
        })
    }

    pub fn zero(source: ModuleId, target: ModuleId, n: usize, trunc: usize) -> Self {
        let t = target.clone();
        LinMap::new(source, t.clone(), n, trunc, "0", move |v| {
            Elt::zero(t.clone(), v.n_coords(), v.trunc_order())
        })
        .with_flags(Flags {
            right_a: true,
            left_a: true,
            h_equivariant: true,
        })
    }

    /// Composition self ∘ rhs.
    pub fn compose(&self, rhs: &LinMap) -> LinMap {
        assert!(
            rhs.target.carrier_compatible(&self.source),
            "cannot compose {} ∘ {}: {} vs {}",
            self.desc,
            rhs.desc,
            rhs.target,
            self.source
        );
        let f = Arc::clone(&self.f);
        let g = Arc::clone(&rhs.f);
        LinMap::new(
            rhs.source.clone(),
            self.target.clone(),
            self.n,
            self.trunc,
            format!("({}∘{})", self.desc, rhs.desc),
            move |v| f(&g(v)),
        )
    }

    pub fn add(&self, rhs: &LinMap) -> LinMap {
        assert!(self.source.carrier_compatible(&rhs.source));
        assert!(self.target.carrier_compatible(&rhs.target));
        let f = Arc::clone(&self.f);
        let g = Arc::clone(&rhs.f);
        LinMap::new(
            self.source.clone(),
            self.target.clone(),
            self.n,
            self.trunc,
            format!("({}+{})", self.desc, rhs.desc),
            move |v| f(v).add(&g(v)),
        )
    }

    pub fn sub(&self, rhs: &LinMap) -> LinMap {
        self.add(&rhs.scale(&-&KSeries::one(self.trunc)))
    }

    pub fn scale(&self, c: &KSeries) -> LinMap {
        let f = Arc::clone(&self.f);
        let c = c.clone();
        LinMap::new(
            self.source.clone(),
            self.target.clone(),
            self.n,
            self.trunc,
            format!("({})·{}", c, self.desc),
            move |v| f(v).scale(&c),
        )
    }

    /// Star-aware Hopf action of ξ on a module, as a map.
    pub fn act(ctx: &Arc<Context>, xi: &HElt, module: ModuleId) -> LinMap {
        let ctx = Arc::clone(ctx);
        let xi = xi.clone();
        LinMap::new(
            module.clone(),
            module,
            ctx.n_coords(),
            ctx.trunc_order(),
            format!("act({})", xi),
            move |v| geometry::act(&ctx, &xi, v),
        )
    }

    /// Left ⋆-multiplication by a (classical multiplication when the context
    /// is undeformed).
    pub fn left_mul(ctx: &Arc<Context>, a: &Poly, module: ModuleId) -> LinMap {
        let ctx = Arc::clone(ctx);
        let a = a.clone();
        LinMap::new(
            module.clone(),
            module,
            ctx.n_coords(),
            ctx.trunc_order(),
            format!("l[{}]", a),
            move |v| geometry::star_mul_left(&ctx, &a, v),
        )
        .with_flags(Flags {
            right_a: true,
            ..Flags::default()
        })
    }

    /// Right ⋆-multiplication by a.
    pub fn right_mul(ctx: &Arc<Context>, a: &Poly, module: ModuleId) -> LinMap {
        let ctx = Arc::clone(ctx);
        let a = a.clone();
        LinMap::new(
            module.clone(),
            module,
            ctx.n_coords(),
            ctx.trunc_order(),
            format!("r[{}]", a),
            move |v| geometry::star_mul_right(&ctx, v, &a),
        )
        .with_flags(Flags {
            left_a: true,
            ..Flags::default()
        })
    }

    /// Classical left multiplication regardless of the context.
    pub fn left_mul_classical(a: &Poly, module: ModuleId, trunc: usize) -> LinMap {
        let a = a.clone();
        let n = a.n_vars();
        LinMap::new(
            module.clone(),
            module,
            n,
            trunc,
            format!("l0[{}]", a),
            move |v| v.mul_coeff_left(&a),
        )
        .with_flags(Flags {
            right_a: true,
            left_a: true,
            ..Flags::default()
        })
    }

    /// Exterior derivative on the last (form) factor.
    pub fn exterior_d(source: ModuleId, n: usize, trunc: usize) -> LinMap {
        let last = source.n_factors() - 1;
        let target = match source.factor(last) {
            crate::module::Factor::Form(k) => {
                source.with_factor(last, crate::module::Factor::Form(k + 1))
            }
            crate::module::Factor::FormAny => source.clone(),
            _ => panic!("exterior_d needs a form factor"),
        };
        LinMap::new(source, target, n, trunc, "d", |v| v.exterior_d()).with_flags(Flags {
            h_equivariant: true,
            ..Flags::default()
        })
    }

    /// Wedge from the right against a fixed form (⋆-wedge in deformed contexts).
    pub fn wedge_with(ctx: &Arc<Context>, omega: &Elt, source: ModuleId) -> LinMap {
        let last = source.n_factors() - 1;
        let target = source.with_factor(last, crate::module::Factor::FormAny);
        let ctx = Arc::clone(ctx);
        let omega = omega.clone();
        LinMap::new(
            source,
            target,
            ctx.n_coords(),
            ctx.trunc_order(),
            format!("(∧{})", omega),
            move |v| geometry::wedge_star_last(&ctx, v, &omega),
        )
    }

    /// Right-A-linear map on a free module given by a matrix of coefficients:
    /// P(e_b · p) = Σ_a f_a · (M[a][b] · p). In a deformed context the
    /// extension is right-A_⋆-linear through the ⋆-coordinates.
    pub fn basis_matrix(
        ctx: &Arc<Context>,
        source: ModuleId,
        target: ModuleId,
        entries: Vec<Vec<Poly>>,
        star: bool,
    ) -> LinMap {
        assert_eq!(source.n_factors(), 1);
        assert_eq!(target.n_factors(), 1);
        let n = ctx.n_coords();
        let trunc = ctx.trunc_order();
        let src_basis = source.factor(0).basis_indices(n);
        let tgt_basis = target.factor(0).basis_indices(n);
        assert_eq!(entries.len(), tgt_basis.len());
        assert!(entries.iter().all(|row| row.len() == src_basis.len()));
        let ctx2 = Arc::clone(ctx);
        let target2 = target.clone();
        let src_basis2 = src_basis.clone();
        LinMap::new(
            source.clone(),
            target,
            n,
            trunc,
            "matrix",
            move |v| {
                let mut out = Elt::zero(target2.clone(), n, trunc);
                let decomp: Vec<(usize, Poly)> = if star && ctx2.is_deformed() {
                    geometry::star_coordinates(&ctx2, v)
                        .into_iter()
                        .map(|(bare, t)| {
                            let idx = bare.terms().next().unwrap().0[0];
                            let b = src_basis2.iter().position(|&x| x == idx).unwrap();
                            (b, t)
                        })
                        .collect()
                } else {
                    v.terms()
                        .map(|(tuple, p)| {
                            let b = src_basis2.iter().position(|&x| x == tuple[0]).unwrap();
                            (b, p.clone())
                        })
                        .collect()
                };
                for (b, p) in decomp {
                    for (a, row) in entries.iter().enumerate() {
                        if row[b].is_zero() {
                            continue;
                        }
                        let base = Elt::basis(target2.clone(), tgt_basis[a], n, trunc);
                        let val = base.mul_coeff_right(&row[b]);
                        if star && ctx2.is_deformed() {
                            out = out.add(&geometry::star_mul_right(&ctx2, &val, &p));
                        } else {
                            out = out.add(&val.mul_coeff_right(&p));
                        }
                    }
                }
                out
            },
        )
        .with_flags(Flags {
            right_a: true,
            ..Flags::default()
        })
    }

    /// φ at a deformed quotient join, as a map.
    pub fn phi(ctx: &Arc<Context>, source: ModuleId, join_idx: usize) -> LinMap {
        assert_eq!(source.join(join_idx), Join::AStar);
        let target = source.with_join(join_idx, Join::A);
        let ctx = Arc::clone(ctx);
        LinMap::new(
            source,
            target,
            ctx.n_coords(),
            ctx.trunc_order(),
            "φ",
            move |v| geometry::phi_at(&ctx, v, join_idx),
        )
    }

    pub fn phi_inv(ctx: &Arc<Context>, source: ModuleId, join_idx: usize) -> LinMap {
        assert_eq!(source.join(join_idx), Join::A);
        let target = source.with_join(join_idx, Join::AStar);
        let ctx = Arc::clone(ctx);
        LinMap::new(
            source,
            target,
            ctx.n_coords(),
            ctx.trunc_order(),
            "φ⁻¹",
            move |v| geometry::phi_inv_at(&ctx, v, join_idx),
        )
    }

    /// Braiding τ_R across [a..m)|[m..b), as a map.
    pub fn tau(ctx: &Arc<Context>, source: ModuleId, a: usize, m: usize, b: usize) -> LinMap {
        let target = braided_module(&source, a, m, b);
        let ctx = Arc::clone(ctx);
        LinMap::new(
            source,
            target,
            ctx.n_coords(),
            ctx.trunc_order(),
            "τ",
            move |v| geometry::tau_r(&ctx, v, a, m, b),
        )
        .with_flags(Flags {
            h_equivariant: true,
            ..Flags::default()
        })
    }

    pub fn tau_inv(ctx: &Arc<Context>, source: ModuleId, a: usize, m: usize, b: usize) -> LinMap {
        let target = braided_module(&source, a, m, b);
        let ctx = Arc::clone(ctx);
        LinMap::new(
            source,
            target,
            ctx.n_coords(),
            ctx.trunc_order(),
            "τ⁻¹",
            move |v| geometry::tau_r_inv(&ctx, v, a, m, b),
        )
        .with_flags(Flags {
            h_equivariant: true,
            ..Flags::default()
        })
    }

    /// Projection of a split join onto a quotient join, as a map.
    pub fn projection(
        ctx: &Arc<Context>,
        source: ModuleId,
        join_idx: usize,
        target_join: Join,
    ) -> LinMap {
        let target = source.with_join(join_idx, target_join);
        let ctx = Arc::clone(ctx);
        LinMap::new(
            source,
            target,
            ctx.n_coords(),
            ctx.trunc_order(),
            "π",
            move |v| geometry::project_join(&ctx, v, join_idx, target_join),
        )
    }
}

fn braided_module(source: &ModuleId, a: usize, m: usize, b: usize) -> ModuleId {
    // Factor order after the swap; join types travel with their ranges.
    let probe = Elt::zero(source.clone(), 1, 0);
    probe.swap_ranges(a, m, b).module().clone()
}

/// Adjoint action of ξ on a map: ξ▶P = ξ₁▷ ∘ P ∘ S(ξ₂)▷, or the cop-variant
/// ξ▶ᶜᵒᵖP = ξ₂▷ ∘ P ∘ S⁻¹(ξ₁)▷. Sweedler legs are materialized eagerly from
/// the context's coproduct and antipode.
pub fn adjoint(ctx: &Arc<Context>, xi: &HElt, p: &LinMap, cop: bool) -> LinMap {
    let legs = ctx.coproduct(xi, 2);
    let mut terms: Vec<(HElt, HElt, KSeries)> = Vec::new();
    for (monos, c) in legs.terms() {
        let m1 = HElt::monomial(monos[0].clone(), KSeries::one(ctx.trunc_order()));
        let m2 = HElt::monomial(monos[1].clone(), KSeries::one(ctx.trunc_order()));
        if cop {
            terms.push((m2, ctx.antipode_inv(&m1), c.clone()));
        } else {
            terms.push((m1, ctx.antipode(&m2), c.clone()));
        }
    }
    let ctx2 = Arc::clone(ctx);
    let p2 = p.clone();
    let target = p.target().clone();
    LinMap::new(
        p.source().clone(),
        p.target().clone(),
        p.n_coords(),
        p.trunc_order(),
        format!("({}▶{}{})", xi, if cop { "ᶜ" } else { "" }, p.desc()),
        move |v| {
            let mut out = Elt::zero(target.clone(), v.n_coords(), v.trunc_order());
            for (pre, post, c) in &terms {
                let inner = geometry::act(&ctx2, post, v);
                if inner.is_zero() {
                    continue;
                }
                let mid = p2.apply(&inner);
                if mid.is_zero() {
                    continue;
                }
                out = out.add(&geometry::act(&ctx2, pre, &mid).scale(c));
            }
            out
        },
    )
}

/// Expand a two-leg tensor against a map: Σ_α (leg1_α ▶ P) ∘ (leg2_α ▷),
/// the common slab in D_F, D_F^cop, D_R. `swap_legs` selects which leg is
/// the adjoint leg.
fn deformation_slab(
    ctx_adj: &Arc<Context>,
    tensor: &crate::hopf::HTensor,
    p: &LinMap,
    cop: bool,
    swap_legs: bool,
    desc: String,
) -> LinMap {
    let mut parts: Vec<(LinMap, LinMap)> = Vec::new();
    for (monos, c) in tensor.terms() {
        let (adj_mono, act_mono) = if swap_legs {
            (monos[1].clone(), monos[0].clone())
        } else {
            (monos[0].clone(), monos[1].clone())
        };
        let adj = adjoint(
            ctx_adj,
            &HElt::monomial(adj_mono, c.clone()),
            p,
            cop,
        );
        let act = LinMap::act(
            ctx_adj,
            &HElt::monomial(act_mono, KSeries::one(ctx_adj.trunc_order())),
            p.source().clone(),
        );
        parts.push((adj, act));
    }
    let target = p.target().clone();
    LinMap::new(
        p.source().clone(),
        p.target().clone(),
        p.n_coords(),
        p.trunc_order(),
        desc,
        move |v| {
            let mut out = Elt::zero(target.clone(), v.n_coords(), v.trunc_order());
            for (adj, act) in &parts {
                let inner = act.apply(v);
                if inner.is_zero() {
                    continue;
                }
                out = out.add(&adj.apply(&inner));
            }
            out
        },
    )
}

/// The deformation isomorphism. `Right` sends right-A-linear maps of the
/// parent world to right-A_⋆-linear maps of this world,
/// D_F(P) = (f̄^α▶P)∘f̄_α▷; `Left` is the mirror through the co-opposite
/// adjoint, D_F^cop(P) = (f̄_α▶ᶜᵒᵖP)∘f̄^α▷.
pub fn deform_map(ctx: &Arc<Context>, p: &LinMap, left: bool) -> LinMap {
    let parent = ctx
        .parent()
        .expect("deform_map needs a deformed context")
        .clone();
    let twist = ctx.last_twist().expect("deformed context carries a twist");
    deformation_slab(
        &parent,
        twist.inverse_tensor(),
        p,
        left,
        left,
        format!(
            "D{}[{}]",
            if left { "ᶜᵒᵖ" } else { "" },
            p.desc()
        ),
    )
}

/// Inverse of the deformation isomorphism: the deformation by the inverse
/// twist, computed with this world's own Hopf structure.
pub fn deform_map_inv(ctx: &Arc<Context>, p: &LinMap, left: bool) -> LinMap {
    let twist = ctx.last_twist().expect("deformed context carries a twist");
    deformation_slab(
        ctx,
        twist.tensor(),
        p,
        left,
        left,
        format!("D⁻¹[{}]", p.desc()),
    )
}

/// Right-to-left transport D_R(P) = (R̄^α▶P)∘R̄_α▷ with this world's
/// R-matrix and adjoint action.
pub fn right_to_left(ctx: &Arc<Context>, p: &LinMap) -> LinMap {
    deformation_slab(
        ctx,
        ctx.r_matrix_inv(),
        p,
        false,
        false,
        format!("DR[{}]", p.desc()),
    )
}

/// Inverse of D_R: the deformation by the inverse R-matrix through the
/// co-opposite adjoint, D_R⁻¹(P) = (R^α▶ᶜᵒᵖP)∘R_α▷.
pub fn right_to_left_inv(ctx: &Arc<Context>, p: &LinMap) -> LinMap {
    deformation_slab(
        ctx,
        ctx.r_matrix(),
        p,
        true,
        false,
        format!("DR⁻¹[{}]", p.desc()),
    )
}

/// ⋆-composition P∘_⋆Q = (f̄^α▶P)∘(f̄_α▶Q) with respect to the twist that
/// produced this context, using the parent world's adjoint action.
pub fn star_compose(ctx: &Arc<Context>, p: &LinMap, q: &LinMap) -> LinMap {
    assert!(q.target().carrier_compatible(p.source()));
    let parent = match ctx.parent() {
        Some(par) => Arc::clone(par),
        None => return p.compose(q),
    };
    let twist = ctx.last_twist().unwrap();
    let mut parts: Vec<(LinMap, LinMap)> = Vec::new();
    for (monos, c) in twist.inverse_tensor().terms() {
        let ap = adjoint(&parent, &HElt::monomial(monos[0].clone(), c.clone()), p, false);
        let aq = adjoint(
            &parent,
            &HElt::monomial(monos[1].clone(), KSeries::one(ctx.trunc_order())),
            q,
            false,
        );
        parts.push((ap, aq));
    }
    let target = p.target().clone();
    LinMap::new(
        q.source().clone(),
        p.target().clone(),
        p.n_coords(),
        p.trunc_order(),
        format!("({}∘⋆{})", p.desc(), q.desc()),
        move |v| {
            let mut out = Elt::zero(target.clone(), v.n_coords(), v.trunc_order());
            for (ap, aq) in &parts {
                let inner = aq.apply(v);
                if inner.is_zero() {
                    continue;
                }
                out = out.add(&ap.apply(&inner));
            }
            out
        },
    )
}

/// R-tensor product of maps: P⊗_R Q = (P∘R̄^α▷)⊗(R̄_α▶Q), lifted to the
/// tensor product with the given join (K/KStar: free; A/AStar: quotient,
/// requires right-linearity of both maps over the respective algebra).
pub fn tensor_r(ctx: &Arc<Context>, p: &LinMap, q: &LinMap, join: Join) -> LinMap {
    if matches!(join, Join::A | Join::AStar) {
        spot_check_right_linear(ctx, p);
        spot_check_right_linear(ctx, q);
    }
    let source = p.source().tensor(join, q.source());
    let target = p.target().tensor(join, q.target());
    let split = p.source().n_factors();
    let boundary = split - 1;
    let mut parts: Vec<(LinMap, LinMap, HElt)> = Vec::new();
    for (monos, c) in ctx.r_matrix_inv().terms() {
        let aq = adjoint(ctx, &HElt::monomial(monos[1].clone(), c.clone()), q, false);
        parts.push((
            p.clone(),
            aq,
            HElt::monomial(monos[0].clone(), KSeries::one(ctx.trunc_order())),
        ));
    }
    let ctx2 = Arc::clone(ctx);
    let target2 = target.clone();
    LinMap::new(
        source,
        target,
        p.n_coords(),
        p.trunc_order(),
        format!("({}⊗R{})", p.desc(), q.desc()),
        move |v| {
            let mut out = Elt::zero(target2.clone(), v.n_coords(), v.trunc_order());
            for (lpart, rpart) in geometry::split_at_join(v, boundary) {
                for (pm, aq, r_act) in &parts {
                    let lv = geometry::act(&ctx2, r_act, &lpart);
                    if lv.is_zero() {
                        continue;
                    }
                    let pl = pm.apply(&lv);
                    if pl.is_zero() {
                        continue;
                    }
                    let qr = aq.apply(&rpart);
                    if qr.is_zero() {
                        continue;
                    }
                    let joined = match join {
                        Join::K | Join::KStar => pl.tensor_raw(join, &qr),
                        Join::A => pl.tensor_a(&qr),
                        Join::AStar => geometry::tensor_star(&ctx2, &pl, &qr, Join::AStar),
                    };
                    out = out.add(&joined);
                }
            }
            out
        },
    )
}

/// Exact map equality on the full monomial test basis of the source module
/// up to polynomial degree `max_deg`. Parallelized with a deterministic
/// lowest-index witness.
pub fn map_eq(p: &LinMap, q: &LinMap, max_deg: u32) -> Result<(), String> {
    assert!(
        p.source().carrier_compatible(q.source()),
        "map_eq sources differ: {} vs {}",
        p.source(),
        q.source()
    );
    let basis = Elt::test_basis(p.source(), p.n_coords(), p.trunc_order(), max_deg);
    match crate::par::first_failure(&basis, |v| {
        let lhs = p.apply(v);
        let rhs = q.apply(v);
        if lhs.eq_data(&rhs) {
            None
        } else {
            Some(format!(
                "input {}\n  lhs [{}] = {}\n  rhs [{}] = {}",
                v,
                p.desc(),
                lhs,
                q.desc(),
                rhs
            ))
        }
    }) {
        None => Ok(()),
        Some(witness) => Err(witness),
    }
}

/// Cheap deterministic spot check of claimed right-A(_⋆)-linearity on a few
/// fixed inputs; panics on a violated claim (fail fast, as the flags are
/// trusted downstream).
fn spot_check_right_linear(ctx: &Arc<Context>, p: &LinMap) {
    assert!(
        p.flags().right_a,
        "map {} is not flagged right-A-linear",
        p.desc()
    );
    let n = p.n_coords();
    let trunc = p.trunc_order();
    let mut a = Poly::one(n, trunc);
    for i in 0..n {
        a = a.add(&Poly::var(i, n, trunc));
    }
    a = a.add(&Poly::var(0, n, trunc).mul(&Poly::var(0, n, trunc)));
    for v in Elt::test_basis(p.source(), n, trunc, 1).into_iter().take(6) {
        let lhs = p.apply(&geometry::star_mul_right(ctx, &v, &a));
        let rhs = geometry::star_mul_right(ctx, &p.apply(&v), &a);
        if !lhs.eq_data(&rhs) {
            panic!(
                "right-linearity claim violated for {} at input {}",
                p.desc(),
                v
            );
        }
    }
}

/// Randomized linearity check used by the suites: P(v·a) = P(v)·a (right)
/// or P(a·v) = a·P(v) (left), with the context's module structure.
pub fn linearity_holds(
    ctx: &Arc<Context>,
    p: &LinMap,
    left: bool,
    samples: &[(Elt, Poly)],
) -> Result<(), String> {
    for (v, a) in samples {
        let (lhs, rhs) = if left {
            (
                p.apply(&geometry::star_mul_left(ctx, a, v)),
                geometry::star_mul_left(ctx, a, &p.apply(v)),
            )
        } else {
            (
                p.apply(&geometry::star_mul_right(ctx, v, a)),
                geometry::star_mul_right(ctx, &p.apply(v), a),
            )
        };
        if !lhs.eq_data(&rhs) {
            return Err(format!(
                "{}-linearity fails for {} at v = {}, a = {}:\n  lhs = {}\n  rhs = {}",
                if left { "left" } else { "right" },
                p.desc(),
                v,
                a,
                lhs,
                rhs
            ));
        }
    }
    Ok(())
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMap[{}: {} → {}]", self.desc, self.source, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::series::{rat, ratq, Rat};
    use num::Zero;

    fn moyal_pair(trunc: usize) -> (Arc<Context>, Arc<Context>) {
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
        let base = Context::undeformed(Arc::new(lie));
        let r = vec![vec![Rat::zero(), rat(1)], vec![rat(-1), Rat::zero()]];
        let tw = crate::twist::build_abelian_twist(&base, &r, &ratq(-1, 2)).unwrap();
        let def = base.deform(&tw).unwrap();
        (base, def)
    }

    #[test]
    fn adjoint_of_identity_is_counit() {
        // ξ▶id = ε(ξ)·id.
        let (base, _) = moyal_pair(2);
        let idm = LinMap::identity(ModuleId::coeff(), 2, 2);
        let xi = HElt::generator(0, 2, 2);
        let adj = adjoint(&base, &xi, &idm, false);
        let zero = LinMap::zero(ModuleId::coeff(), ModuleId::coeff(), 2, 2);
        assert!(map_eq(&adj, &zero, 2).is_ok());
    }

    #[test]
    fn adjoint_of_left_mul_is_left_mul_of_action() {
        // ξ▶l_a = l_{ξ▷a}.
        let (base, _) = moyal_pair(2);
        let a = Poly::var(0, 2, 2).mul(&Poly::var(1, 2, 2));
        let la = LinMap::left_mul(&base, &a, ModuleId::vector());
        let xi = HElt::generator(0, 2, 2);
        let adj = adjoint(&base, &xi, &la, false);
        let xa = Poly::var(1, 2, 2); // D1 ▷ (xy) = y
        let expect = LinMap::left_mul(&base, &xa, ModuleId::vector());
        assert!(map_eq(&adj, &expect, 2).is_ok());
    }

    #[test]
    fn adjoint_is_action_homomorphism() {
        // (ξζ)▶P = ξ▶(ζ▶P) on the deformed world.
        let (_, ctx) = moyal_pair(2);
        let p = LinMap::left_mul(&ctx, &Poly::var(0, 2, 2), ModuleId::coeff());
        let xi = HElt::generator(0, 2, 2);
        let zeta = HElt::monomial(vec![1, 1], KSeries::one(2));
        let prod = crate::hopf::h_mul(ctx.lie(), &xi, &zeta);
        let lhs = adjoint(&ctx, &prod, &p, false);
        let rhs = adjoint(&ctx, &xi, &adjoint(&ctx, &zeta, &p, false), false);
        assert!(map_eq(&lhs, &rhs, 2).is_ok());
    }

    #[test]
    fn deform_identity_is_identity() {
        let (_, ctx) = moyal_pair(3);
        let idm = LinMap::identity(ModuleId::vector(), 2, 3);
        let d = deform_map(&ctx, &idm, false);
        assert!(map_eq(&d, &idm, 3).is_ok());
    }

    #[test]
    fn deform_left_mul_is_star_left_mul() {
        // D_F(l_a) = l⋆_a.
        let (base, ctx) = moyal_pair(3);
        let a = Poly::var(0, 2, 3).mul(&Poly::var(1, 2, 3));
        let la = LinMap::left_mul(&base, &a, ModuleId::coeff());
        let d = deform_map(&ctx, &la, false);
        let lstar = LinMap::left_mul(&ctx, &a, ModuleId::coeff());
        assert!(map_eq(&d, &lstar, 3).is_ok());
    }

    #[test]
    fn deform_map_inverts() {
        // D_{F⁻¹} = D_F⁻¹.
        let (base, ctx) = moyal_pair(2);
        let p = LinMap::left_mul(&base, &Poly::var(0, 2, 2), ModuleId::vector())
            .compose(&LinMap::act(&base, &HElt::generator(1, 2, 2), ModuleId::vector()));
        let d = deform_map(&ctx, &p, false);
        let back = deform_map_inv(&ctx, &d, false);
        assert!(map_eq(&back, &p, 2).is_ok());
    }

    #[test]
    fn star_compose_is_unital() {
        let (_, ctx) = moyal_pair(2);
        let idm = LinMap::identity(ModuleId::coeff(), 2, 2);
        let q = LinMap::left_mul(&ctx, &Poly::var(0, 2, 2), ModuleId::coeff());
        assert!(map_eq(&star_compose(&ctx, &idm, &q), &q, 2).is_ok());
        assert!(map_eq(&star_compose(&ctx, &q, &idm), &q, 2).is_ok());
    }

    #[test]
    fn deformation_is_star_algebra_morphism() {
        // D_F(P∘_⋆Q) = D_F(P)∘D_F(Q).
        let (base, ctx) = moyal_pair(2);
        let p = LinMap::left_mul(&base, &Poly::var(0, 2, 2), ModuleId::coeff());
        let q = LinMap::left_mul(&base, &Poly::var(1, 2, 2), ModuleId::coeff());
        let lhs = deform_map(&ctx, &star_compose(&ctx, &p, &q), false);
        let rhs = deform_map(&ctx, &p, false).compose(&deform_map(&ctx, &q, false));
        assert!(map_eq(&lhs, &rhs, 2).is_ok());
    }

    #[test]
    fn moyal_star_commutator_of_left_muls() {
        // l_x∘_⋆l_y − l_y∘_⋆l_x acts as multiplication by x⋆y−y⋆x = h.
        let (base, ctx) = moyal_pair(2);
        let lx = LinMap::left_mul(&base, &Poly::var(0, 2, 2), ModuleId::coeff());
        let ly = LinMap::left_mul(&base, &Poly::var(1, 2, 2), ModuleId::coeff());
        let comm = star_compose(&ctx, &lx, &ly).sub(&star_compose(&ctx, &ly, &lx));
        let h_mul = LinMap::left_mul_classical(
            &Poly::constant(KSeries::h(2), 2),
            ModuleId::coeff(),
            2,
        );
        assert!(map_eq(&comm, &h_mul, 2).is_ok());
    }

    #[test]
    fn tensor_r_of_identities() {
        let (_, ctx) = moyal_pair(2);
        let idv = LinMap::identity(ModuleId::vector(), 2, 2);
        let idw = LinMap::identity(ModuleId::forms(1), 2, 2);
        let t = tensor_r(&ctx, &idv, &idw, Join::A);
        let idt = LinMap::identity(
            ModuleId::vector().tensor(Join::A, &ModuleId::forms(1)),
            2,
            2,
        );
        assert!(map_eq(&t, &idt, 2).is_ok());
    }

    #[test]
    fn right_to_left_is_identity_for_trivial_r() {
        let (base, _) = moyal_pair(2);
        let p = LinMap::left_mul(&base, &Poly::var(0, 2, 2), ModuleId::vector());
        let d = right_to_left(&base, &p);
        assert!(map_eq(&d, &p, 2).is_ok());
    }

    #[test]
    fn d_r_sends_right_linear_to_left_linear() {
        // On the Moyal world, D_{R^F} of the right-A_⋆-linear map l⋆_a is
        // left-A_⋆-linear.
        let (_, ctx) = moyal_pair(2);
        let a = Poly::var(0, 2, 2);
        let la = LinMap::left_mul(&ctx, &a, ModuleId::vector());
        let d = right_to_left(&ctx, &la);
        let samples: Vec<(Elt, Poly)> = vec![
            (
                Elt::vector_basis(0, 2, 2).mul_coeff_right(&Poly::var(1, 2, 2)),
                Poly::var(0, 2, 2),
            ),
            (
                Elt::vector_basis(1, 2, 2).mul_coeff_right(&a.mul(&a)),
                Poly::var(1, 2, 2).mul(&Poly::var(0, 2, 2)),
            ),
        ];
        assert!(linearity_holds(&ctx, &d, true, &samples).is_ok());
    }
}
