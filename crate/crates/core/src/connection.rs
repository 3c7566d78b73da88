//! Connections on free modules and everything the identity suites do with
//! them: twist deformation, braided sums on tensor products, dual
//! connections through the dual-basis pair, right↔left conversion, the
//! extension to the exterior algebra, and curvature.
//!
//! The constructed normal form on a free module is ∇ = d + Γ (+ a right
//! A-linear extra): the matrix curvature dΓ + Γ∧Γ is then an independent
//! oracle for R_∇ = ∇•∘∇. Deformed, summed and dualized connections are
//! operational (their maps are composition trees); every one of them is
//! checked against its Leibniz rule by the suites rather than trusted.

use crate::context::Context;
use crate::geometry;
use crate::hopf::HElt;
use crate::linmap::{self, LinMap};
use crate::module::{Elt, Join, ModuleId};
use crate::poly::Poly;
use crate::series::KSeries;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Chirality {
    /// ∇: V → V⊗Ω with the right Leibniz rule.
    Right,
    /// ∇: V → Ω⊗V with the left Leibniz rule.
    Left,
}

#[derive(Clone)]
pub struct Connection {
    module: ModuleId,
    chirality: Chirality,
    /// Whether this connection lives in a deformed world (targets use ⊗_{A⋆}).
    star: bool,
    map: LinMap,
    /// Γ entries for d+Γ constructed connections: gamma[b][a] is the
    /// one-form coefficient sending basis a to basis b.
    gamma: Option<Vec<Vec<Elt>>>,
}

impl Connection {
    pub fn module(&self) -> &ModuleId {
        &self.module
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn is_star(&self) -> bool {
        self.star
    }

    pub fn map(&self) -> &LinMap {
        &self.map
    }

    pub fn gamma(&self) -> Option<&Vec<Vec<Elt>>> {
        self.gamma.as_ref()
    }

    pub fn join(&self) -> Join {
        if self.star {
            Join::AStar
        } else {
            Join::A
        }
    }

    pub fn apply(&self, v: &Elt) -> Elt {
        self.map.apply(v)
    }

    /// d + Γ on the free module of vector fields, in the classical world.
    /// `gamma[b][a]` is a one-form; the connection acts as
    /// ∇(Σ_a ∂_a·p^a) = Σ_a ∂_a ⊗_A dp^a + Σ_{a,b} ∂_b ⊗_A Γ[b][a]·p^a.
    pub fn from_gamma(ctx: &Arc<Context>, gamma: Vec<Vec<Elt>>) -> Connection {
        assert!(!ctx.is_deformed(), "constructed connections are classical");
        let n = ctx.n_coords();
        let trunc = ctx.trunc_order();
        assert_eq!(gamma.len(), n);
        assert!(gamma.iter().all(|row| row.len() == n));
        let module = ModuleId::vector();
        let target = module.tensor(Join::A, &ModuleId::forms(1));
        let gamma2 = gamma.clone();
        let target2 = target.clone();
        let map = LinMap::new(
            module.clone(),
            target,
            n,
            trunc,
            "∇[d+Γ]",
            move |v| {
                let mut out = Elt::zero(target2.clone(), n, trunc);
                for (tuple, p) in v.terms() {
                    let a = tuple[0] as usize;
                    let basis_a = Elt::vector_basis(a, n, trunc);
                    out = out.add(&basis_a.tensor_a(&Elt::from_poly(p).exterior_d()));
                    for (b, row) in gamma2.iter().enumerate() {
                        if row[a].is_zero() {
                            continue;
                        }
                        let basis_b = Elt::vector_basis(b, n, trunc);
                        out = out.add(&basis_b.tensor_a(&row[a].mul_coeff_right(p)));
                    }
                }
                out
            },
        );
        Connection {
            module,
            chirality: Chirality::Right,
            star: false,
            map,
            gamma: Some(gamma),
        }
    }

    /// Pure exterior derivative (Γ = 0) on the vector-field module.
    pub fn trivial(ctx: &Arc<Context>) -> Connection {
        let n = ctx.n_coords();
        let zero_form = Elt::zero(ModuleId::forms(1), n, ctx.trunc_order());
        Connection::from_gamma(ctx, vec![vec![zero_form; n]; n])
    }

    /// Affine shift by a (right-linear) correction map.
    pub fn plus(&self, p: &LinMap) -> Connection {
        Connection {
            module: self.module.clone(),
            chirality: self.chirality,
            star: self.star,
            map: self.map.add(p),
            gamma: None,
        }
    }
}

/// Twist deformation of a connection: φ⁻¹ ∘ D_F(∇) for right connections,
/// φ⁻¹ ∘ D_F^cop(∇) for left ones. The result is a connection of the
/// deformed world with the ⋆-Leibniz rule.
pub fn deform_connection(ctx: &Arc<Context>, conn: &Connection) -> Connection {
    assert!(ctx.is_deformed());
    let left = conn.chirality == Chirality::Left;
    let deformed = linmap::deform_map(ctx, &conn.map, left);
    // The classical target carries an A-join where the ⋆-world wants ⊗_{A⋆}.
    let join_idx = match conn.chirality {
        Chirality::Right => conn.map.target().n_factors() - 2,
        Chirality::Left => 0,
    };
    let phi_inv = LinMap::phi_inv(ctx, deformed.target().clone(), join_idx);
    Connection {
        module: conn.module.clone(),
        chirality: conn.chirality,
        star: true,
        map: phi_inv.compose(&deformed),
        gamma: None,
    }
}

/// Braided sum of connections on the tensor product:
/// (∇_V ⊕_R ∇_W)(v⊗w) = τ⁻¹_{R,23}(∇_V v ⊗ w) + (R̄^β▷v)⊗(R̄_β▶∇_W)(w).
pub fn sum_connections(
    ctx: &Arc<Context>,
    left: &Connection,
    right: &Connection,
) -> Connection {
    assert_eq!(left.chirality, Chirality::Right);
    assert_eq!(right.chirality, Chirality::Right);
    assert_eq!(left.star, right.star);
    assert_eq!(left.star, ctx.is_deformed());
    let join = left.join();
    let n = ctx.n_coords();
    let trunc = ctx.trunc_order();
    let module = left.module.tensor(join, &right.module);
    let nf_left = left.module.n_factors();
    let nf_right = right.module.n_factors();
    let boundary = nf_left - 1;
    let target = module.tensor(join, &ModuleId::forms(1));
    // Adjoint legs of the braiding are materialized per R-matrix term.
    let mut parts: Vec<(HElt, LinMap)> = Vec::new();
    for (monos, c) in ctx.r_matrix_inv().terms() {
        let act = HElt::monomial(monos[0].clone(), KSeries::one(trunc));
        let adj = linmap::adjoint(
            ctx,
            &HElt::monomial(monos[1].clone(), c.clone()),
            &right.map,
            false,
        );
        parts.push((act, adj));
    }
    let ctx2 = Arc::clone(ctx);
    let left_map = left.map.clone();
    let target2 = target.clone();
    let map = LinMap::new(
        module.clone(),
        target,
        n,
        trunc,
        format!("({}⊕{})", left.map.desc(), right.map.desc()),
        move |t| {
            let mut out = Elt::zero(target2.clone(), n, trunc);
            for (v, w) in geometry::split_at_join(t, boundary) {
                // τ⁻¹_{R,23}(∇_V(v) ⊗ w): the form leg braids past w.
                let nv = left_map.apply(&v);
                if !nv.is_zero() {
                    let joined = match join {
                        Join::A => nv.tensor_a(&w),
                        Join::AStar => geometry::tensor_star(&ctx2, &nv, &w, Join::AStar),
                        _ => unreachable!(),
                    };
                    let braided = geometry::tau_r_inv(
                        &ctx2,
                        &joined,
                        nf_left,
                        nf_left + 1,
                        nf_left + 1 + nf_right,
                    );
                    out = out.add(&braided);
                }
                // (R̄^β▷v) ⊗ (R̄_β▶∇_W)(w).
                for (act, adj) in &parts {
                    let rv = geometry::act(&ctx2, act, &v);
                    if rv.is_zero() {
                        continue;
                    }
                    let nw = adj.apply(&w);
                    if nw.is_zero() {
                        continue;
                    }
                    let joined = match join {
                        Join::A => rv.tensor_a(&nw),
                        Join::AStar => geometry::tensor_star(&ctx2, &rv, &nw, Join::AStar),
                        _ => unreachable!(),
                    };
                    out = out.add(&joined);
                }
            }
            out
        },
    );
    Connection {
        module,
        chirality: Chirality::Right,
        star: left.star,
        map,
        gamma: None,
    }
}

/// Lift of a right connection to the exterior-algebra tensor product:
/// ∇•(v⊗ω) = ∇v ∧ ω + v ⊗ dω, with the world's wedge.
pub fn lift_bullet(ctx: &Arc<Context>, conn: &Connection) -> LinMap {
    assert_eq!(conn.chirality, Chirality::Right);
    assert_eq!(conn.star, ctx.is_deformed());
    let join = conn.join();
    let n = ctx.n_coords();
    let trunc = ctx.trunc_order();
    let source = conn.module.tensor(join, &ModuleId::forms_any());
    let boundary = conn.module.n_factors() - 1;
    let ctx2 = Arc::clone(ctx);
    let conn_map = conn.map.clone();
    let source2 = source.clone();
    let star = conn.star;
    LinMap::new(
        source.clone(),
        source2,
        n,
        trunc,
        format!("{}•", conn.map.desc()),
        move |t| {
            let mut out = Elt::zero(
                conn_map.source().tensor(join, &ModuleId::forms_any()),
                n,
                trunc,
            );
            for (v, omega) in geometry::split_at_join(t, boundary) {
                // ∇v ∧ ω
                let nv = conn_map.apply(&v);
                if !nv.is_zero() {
                    let wedged = if star {
                        geometry::wedge_star_last(&ctx2, &nv, &omega)
                    } else {
                        nv.wedge_last(&omega)
                    };
                    out = out.add(&wedged.with_module(out.module().clone()));
                }
                // v ⊗ dω
                let dw = omega.exterior_d();
                if !dw.is_zero() {
                    let joined = match join {
                        Join::A => v.tensor_a(&dw),
                        Join::AStar => geometry::tensor_star(&ctx2, &v, &dw, Join::AStar),
                        _ => unreachable!(),
                    };
                    out = out.add(&joined.with_module(out.module().clone()));
                }
            }
            out
        },
    )
}

/// Curvature R_∇ = ∇• ∘ ∇ as a map V → V⊗Ω².
pub fn curvature(ctx: &Arc<Context>, conn: &Connection) -> LinMap {
    lift_bullet(ctx, conn).compose(&conn.map)
}

/// Independent matrix oracle for pure-Γ connections: (dΓ + Γ∧Γ)[b][a].
pub fn matrix_curvature(gamma: &[Vec<Elt>]) -> Vec<Vec<Elt>> {
    let n = gamma.len();
    (0..n)
        .map(|b| {
            (0..n)
                .map(|a| {
                    let mut entry = gamma[b][a].exterior_d();
                    for c in 0..n {
                        entry = entry.add(&gamma[b][c].wedge_last(&gamma[c][a]));
                    }
                    entry
                })
                .collect()
        })
        .collect()
}

/// Dual connection on V' (a left connection), via the dual-basis pair of
/// the free module: ∇'(v') = Σ_i (d(v'(v_i)) − (v'⊗id)∇(v_i)) ⊗_A v_i'.
pub fn dual_connection(ctx: &Arc<Context>, conn: &Connection) -> Connection {
    assert!(!conn.star, "dualization runs in the classical world");
    assert_eq!(conn.chirality, Chirality::Right);
    assert_eq!(conn.module, ModuleId::vector());
    let n = ctx.n_coords();
    let trunc = ctx.trunc_order();
    let module = ModuleId::vector_dual();
    let target = ModuleId::forms(1).tensor(Join::A, &module);
    let conn_map = conn.map.clone();
    let target2 = target.clone();
    let map = LinMap::new(
        module.clone(),
        target,
        n,
        trunc,
        format!("({})'", conn.map.desc()),
        move |vd| {
            let mut out = Elt::zero(target2.clone(), n, trunc);
            for i in 0..n {
                let vi = Elt::vector_basis(i, n, trunc);
                let paired = vd.pair_dual(&vi); // v'(v_i) ∈ A
                let mut form = paired.exterior_d();
                let contracted = conn_map.apply(&vi).contract_dual_first(vd);
                form = form.sub(&contracted.with_module(form.module().clone()));
                out = out.add(&form.tensor_a(&Elt::vector_dual_basis(i, n, trunc)));
            }
            out
        },
    );
    Connection {
        module,
        chirality: Chirality::Left,
        star: false,
        map,
        gamma: None,
    }
}

/// Dual of a left connection on V', landing back on V ≅ V'':
/// ∇''(v) = Σ_i ∂_i ⊗_A (d(v(∂'^i)) − (id⊗v)(∇'(∂'^i))).
pub fn dual_left_connection(ctx: &Arc<Context>, conn: &Connection) -> Connection {
    assert!(!conn.star);
    assert_eq!(conn.chirality, Chirality::Left);
    assert_eq!(conn.module, ModuleId::vector_dual());
    let n = ctx.n_coords();
    let trunc = ctx.trunc_order();
    let module = ModuleId::vector();
    let target = module.tensor(Join::A, &ModuleId::forms(1));
    let conn_map = conn.map.clone();
    let target2 = target.clone();
    let map = LinMap::new(
        module.clone(),
        target,
        n,
        trunc,
        format!("({})''", conn.map.desc()),
        move |v| {
            let mut out = Elt::zero(target2.clone(), n, trunc);
            for i in 0..n {
                let di = Elt::vector_dual_basis(i, n, trunc);
                let paired = v.pair_dual(&di); // v''(∂'^i) = ∂'^i(v) ∈ A
                let mut form = paired.exterior_d();
                let contracted = conn_map.apply(&di).contract_dual_last(v);
                form = form.sub(&contracted.with_module(form.module().clone()));
                out = out.add(&Elt::vector_basis(i, n, trunc).tensor_a(&form));
            }
            out
        },
    );
    Connection {
        module,
        chirality: Chirality::Right,
        star: false,
        map,
        gamma: None,
    }
}

/// Right↔left conversion of connections: ~D_R(∇) = τ_R⁻¹ ∘ D_R(∇) turns a
/// right connection into a left one; its inverse ~D_R⁻¹(∇) = τ_R-after-
/// transport turns a left connection into a right one.
pub fn right_to_left_connection(ctx: &Arc<Context>, conn: &Connection) -> Connection {
    assert_eq!(conn.chirality, Chirality::Right);
    assert_eq!(conn.star, ctx.is_deformed());
    let transported = linmap::right_to_left(ctx, &conn.map);
    let nf = conn.map.target().n_factors();
    let tau_inv = LinMap::tau_inv(ctx, conn.map.target().clone(), 0, nf - 1, nf);
    Connection {
        module: conn.module.clone(),
        chirality: Chirality::Left,
        star: conn.star,
        map: tau_inv.compose(&transported),
        gamma: None,
    }
}

pub fn left_to_right_connection(ctx: &Arc<Context>, conn: &Connection) -> Connection {
    assert_eq!(conn.chirality, Chirality::Left);
    assert_eq!(conn.star, ctx.is_deformed());
    let transported = linmap::right_to_left_inv(ctx, &conn.map);
    let tau = LinMap::tau(ctx, conn.map.target().clone(), 0, 1, conn.map.target().n_factors());
    Connection {
        module: conn.module.clone(),
        chirality: Chirality::Right,
        star: conn.star,
        map: tau.compose(&transported),
        gamma: None,
    }
}

/// Right connection on the dual module: ~D_R⁻¹(∇').
pub fn dual_right_connection(ctx: &Arc<Context>, conn: &Connection) -> Connection {
    let dual = dual_connection(ctx, conn);
    left_to_right_connection(ctx, &dual)
}

/// Extend a connection on V to the tensor algebra word (V and V' factors)
/// by iterated braided sums with the dual right connection.
pub fn extend_to_tensor_algebra(
    ctx: &Arc<Context>,
    conn: &Connection,
    word: &[bool], // true = V, false = V'
) -> Connection {
    assert!(!word.is_empty());
    let dual = if word.iter().any(|w| !w) {
        Some(dual_right_connection(ctx, conn))
    } else {
        None
    };
    let pick = |v: bool| -> Connection {
        if v {
            conn.clone()
        } else {
            dual.clone().unwrap()
        }
    };
    let mut acc = pick(word[0]);
    for &w in &word[1..] {
        acc = sum_connections(ctx, &acc, &pick(w));
    }
    acc
}

/// Leibniz-rule checks (right/left/⋆-variants by the context's world):
/// ∇(v⋆a) − ∇(v)⋆a − v⊗da for right connections, and the mirror for left.
pub fn leibniz_defect(
    ctx: &Arc<Context>,
    conn: &Connection,
    v: &Elt,
    a: &Poly,
) -> Elt {
    match conn.chirality {
        Chirality::Right => {
            let lhs = conn.apply(&geometry::star_mul_right(ctx, v, a));
            let da = Elt::from_poly(a).exterior_d();
            let join = conn.join();
            let tail = match join {
                Join::A => v.tensor_a(&da),
                Join::AStar => geometry::tensor_star(ctx, v, &da, Join::AStar),
                _ => unreachable!(),
            };
            lhs.sub(&geometry::star_mul_right(ctx, &conn.apply(v), a))
                .sub(&tail.with_module(conn.map.target().clone()))
        }
        Chirality::Left => {
            let lhs = conn.apply(&geometry::star_mul_left(ctx, a, v));
            let da = Elt::from_poly(a).exterior_d();
            let join = conn.join();
            let tail = match join {
                Join::A => da.tensor_a(v),
                Join::AStar => geometry::tensor_star(ctx, &da, v, Join::AStar),
                _ => unreachable!(),
            };
            lhs.sub(&geometry::star_mul_left(ctx, a, &conn.apply(v)))
                .sub(&tail.with_module(conn.map.target().clone()))
        }
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

    /// Γ with the single entry Γ^2_1 = x dy.
    fn gamma_x_dy(ctx: &Arc<Context>) -> Vec<Vec<Elt>> {
        let n = ctx.n_coords();
        let trunc = ctx.trunc_order();
        let zero = Elt::zero(ModuleId::forms(1), n, trunc);
        let mut g = vec![vec![zero; n]; n];
        g[1][0] = Elt::one_form(1, n, trunc).mul_coeff_right(&Poly::var(0, n, trunc));
        g
    }

    #[test]
    fn gamma_connection_on_basis() {
        // ∇∂_1 = ∂_2 ⊗ x dy for Γ^2_1 = x dy; ∇∂_2 = 0.
        let (base, _) = moyal_pair(1);
        let conn = Connection::from_gamma(&base, gamma_x_dy(&base));
        let v1 = Elt::vector_basis(0, 2, 1);
        let expect = Elt::vector_basis(1, 2, 1)
            .tensor_a(&Elt::one_form(1, 2, 1).mul_coeff_right(&Poly::var(0, 2, 1)));
        assert_eq!(conn.apply(&v1), expect);
        assert!(conn.apply(&Elt::vector_basis(1, 2, 1)).is_zero());
    }

    #[test]
    fn classical_right_leibniz_by_construction() {
        let (base, _) = moyal_pair(2);
        let conn = Connection::from_gamma(&base, gamma_x_dy(&base));
        let v = Elt::vector_basis(0, 2, 2).mul_coeff_right(&Poly::var(1, 2, 2));
        let a = Poly::var(0, 2, 2).mul(&Poly::var(0, 2, 2));
        assert!(leibniz_defect(&base, &conn, &v, &a).is_zero());
    }

    #[test]
    fn curvature_of_trivial_connection_vanishes() {
        let (base, _) = moyal_pair(1);
        let conn = Connection::trivial(&base);
        let r = curvature(&base, &conn);
        for v in Elt::test_basis(&ModuleId::vector(), 2, 1, 2) {
            assert!(r.apply(&v).is_zero());
        }
    }

    #[test]
    fn curvature_matches_matrix_oracle() {
        // Γ^2_1 = x dy: R(∂_1) = ∂_2 ⊗ dx∧dy.
        let (base, _) = moyal_pair(1);
        let gamma = gamma_x_dy(&base);
        let conn = Connection::from_gamma(&base, gamma.clone());
        let r = curvature(&base, &conn);
        let oracle = matrix_curvature(&gamma);
        for a in 0..2 {
            let va = Elt::vector_basis(a, 2, 1);
            let mut expect = Elt::zero(
                ModuleId::vector().tensor(Join::A, &ModuleId::forms_any()),
                2,
                1,
            );
            for b in 0..2 {
                if oracle[b][a].is_zero() {
                    continue;
                }
                expect = expect
                    .add(&Elt::vector_basis(b, 2, 1).tensor_a(&oracle[b][a]));
            }
            assert!(r.apply(&va).eq_data(&expect), "basis {}", a);
        }
    }

    #[test]
    fn deformed_connection_satisfies_star_leibniz() {
        let (base, ctx) = moyal_pair(2);
        let conn = Connection::from_gamma(&base, gamma_x_dy(&base));
        let dconn = deform_connection(&ctx, &conn);
        let v = Elt::vector_basis(0, 2, 2).mul_coeff_right(&Poly::var(0, 2, 2));
        let a = Poly::var(1, 2, 2).mul(&Poly::var(0, 2, 2));
        let defect = leibniz_defect(&ctx, &dconn, &v, &a);
        assert!(defect.is_zero(), "defect = {}", defect);
    }

    #[test]
    fn classical_sum_is_tensor_product_connection() {
        // R = 1⊗1 and both ∇ = d: the sum is the classical tensor connection.
        let (base, _) = moyal_pair(1);
        let d = Connection::trivial(&base);
        let sum = sum_connections(&base, &d, &d);
        let x = Poly::var(0, 2, 1);
        let v = Elt::vector_basis(0, 2, 1);
        let w = Elt::vector_basis(1, 2, 1).mul_coeff_right(&x);
        let t = v.tensor_a(&w);
        // ∇(v⊗w·x) = v⊗∂2⊗dx (only the coefficient differentiates).
        let expect = v
            .tensor_a(&Elt::vector_basis(1, 2, 1))
            .tensor_a(&Elt::one_form(0, 2, 1));
        assert!(sum.apply(&t).eq_data(&expect));
    }

    #[test]
    fn dual_connection_left_leibniz() {
        let (base, _) = moyal_pair(2);
        let conn = Connection::from_gamma(&base, gamma_x_dy(&base));
        let dual = dual_connection(&base, &conn);
        let vd = Elt::vector_dual_basis(1, 2, 2).mul_coeff_right(&Poly::var(0, 2, 2));
        let a = Poly::var(1, 2, 2);
        let defect = leibniz_defect(&base, &dual, &vd, &a);
        assert!(defect.is_zero(), "defect = {}", defect);
    }

    #[test]
    fn dual_of_trivial_is_trivial() {
        // Γ = 0: ∇' = d on the dual basis.
        let (base, _) = moyal_pair(1);
        let d = Connection::trivial(&base);
        let dual = dual_connection(&base, &d);
        let x = Poly::var(0, 2, 1);
        let vd = Elt::vector_dual_basis(0, 2, 1).mul_coeff_right(&x);
        let expect = Elt::one_form(0, 2, 1).tensor_a(&Elt::vector_dual_basis(0, 2, 1));
        assert!(dual.apply(&vd).eq_data(&expect));
    }

    #[test]
    fn double_dual_restores_constant_gamma_connection() {
        let (base, _) = moyal_pair(2);
        // Constant Γ^2_1 = dy.
        let n = 2;
        let zero = Elt::zero(ModuleId::forms(1), n, 2);
        let mut g = vec![vec![zero; n]; n];
        g[1][0] = Elt::one_form(1, n, 2);
        let conn = Connection::from_gamma(&base, g);
        let double = dual_left_connection(&base, &dual_connection(&base, &conn));
        assert!(linmap::map_eq(double.map(), conn.map(), 3).is_ok());
    }

    #[test]
    fn classical_dual_right_connection_is_flip_of_dual() {
        // R = 1⊗1: ~D_R⁻¹ is the plain flip after the identity transport.
        let (base, _) = moyal_pair(2);
        let conn = Connection::from_gamma(&base, gamma_x_dy(&base));
        let right_dual = dual_right_connection(&base, &conn);
        let vd = Elt::vector_dual_basis(1, 2, 2).mul_coeff_right(&Poly::var(0, 2, 2));
        let a = Poly::var(0, 2, 2);
        let defect = leibniz_defect(&base, &right_dual, &vd, &a);
        assert!(defect.is_zero(), "defect = {}", defect);
    }
}
