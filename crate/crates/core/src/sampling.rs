//! Seeded random inputs for the identity suites: polynomials of bounded
//! degree with small rational coefficients, module elements, enveloping
//! algebra elements and composable map instances.
//!
//! Distributions (documented as part of the scenario contract): polynomial
//! terms draw exponents uniformly with total degree ≤ D, integer
//! coefficients from -3..=3 (zero re-rolled once), and an h-power from
//! 0..=min(2, N); elements draw 1–2 terms per basis tuple drawn. Every
//! generator consumes a ChaCha stream seeded from the scenario seed and the
//! check id, so results are independent of scheduling.

use crate::context::Context;
use crate::hopf::HElt;
use crate::linmap::{Flags, LinMap};
use crate::module::{Elt, ModuleId};
use crate::poly::Poly;
use crate::series::{rat, KSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Deterministic per-check stream: hash of the scenario seed and check id.
pub fn rng_for(seed: u64, check_id: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in check_id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn small_coeff(rng: &mut ChaCha8Rng, trunc: usize) -> KSeries {
    let mut c: i64 = rng.gen_range(-3..=3);
    if c == 0 {
        c = rng.gen_range(1..=3);
    }
    let k = rng.gen_range(0..=trunc.min(2));
    KSeries::monomial(rat(c), k, trunc)
}

pub fn poly(rng: &mut ChaCha8Rng, n: usize, trunc: usize, max_deg: u32) -> Poly {
    let n_terms = rng.gen_range(1..=2);
    let mut p = Poly::zero(n, trunc);
    for _ in 0..n_terms {
        let mut exps = vec![0u32; n];
        let mut left = rng.gen_range(0..=max_deg);
        for e in exps.iter_mut() {
            let d = rng.gen_range(0..=left);
            *e = d;
            left -= d;
        }
        p = p.add(&Poly::monomial(&exps, small_coeff(rng, trunc), n));
    }
    if p.is_zero() {
        Poly::one(n, trunc)
    } else {
        p
    }
}

pub fn elt(rng: &mut ChaCha8Rng, module: &ModuleId, n: usize, trunc: usize, max_deg: u32) -> Elt {
    let mut out = Elt::zero(module.clone(), n, trunc);
    let n_terms = rng.gen_range(1..=2);
    for _ in 0..n_terms {
        let tuple: Vec<u32> = module
            .factors()
            .iter()
            .map(|f| {
                let idxs = f.basis_indices(n);
                idxs[rng.gen_range(0..idxs.len())]
            })
            .collect();
        out.insert(tuple, poly(rng, n * module.n_groups(), trunc, max_deg));
    }
    if out.is_zero() {
        Elt::test_basis(module, n, trunc, 0)
            .into_iter()
            .next()
            .expect("module has a basis")
    } else {
        out
    }
}

/// Random enveloping-algebra element of small PBW degree.
pub fn helt(rng: &mut ChaCha8Rng, dim: usize, trunc: usize, max_deg: u32) -> HElt {
    let mut out = HElt::zero(dim, trunc);
    for _ in 0..rng.gen_range(1..=2) {
        let mut exp = vec![0u32; dim];
        let mut left = rng.gen_range(0..=max_deg);
        for e in exp.iter_mut() {
            let d = rng.gen_range(0..=left);
            *e = d;
            left -= d;
        }
        out.insert(exp, small_coeff(rng, trunc));
    }
    if out.is_zero() {
        HElt::one(dim, trunc)
    } else {
        out
    }
}

/// A random K-linear endomorphism built from 1–3 primitive maps.
pub fn linmap(
    rng: &mut ChaCha8Rng,
    ctx: &Arc<Context>,
    module: &ModuleId,
    max_deg: u32,
) -> LinMap {
    let n = ctx.n_coords();
    let trunc = ctx.trunc_order();
    let prim = |rng: &mut ChaCha8Rng| -> LinMap {
        match rng.gen_range(0..3) {
            0 => LinMap::left_mul(ctx, &poly(rng, n, trunc, max_deg.min(2)), module.clone()),
            1 => LinMap::right_mul(ctx, &poly(rng, n, trunc, max_deg.min(2)), module.clone()),
            _ => LinMap::act(
                ctx,
                &helt(rng, ctx.lie().dim(), trunc, 2),
                module.clone(),
            ),
        }
    };
    let mut p = prim(rng);
    for _ in 0..rng.gen_range(0..=2) {
        p = p.compose(&prim(rng));
    }
    p
}

/// A random right-A(_⋆)-linear endomorphism of a free single-factor module,
/// presented by a coefficient matrix over A.
pub fn right_linear_map(
    rng: &mut ChaCha8Rng,
    ctx: &Arc<Context>,
    module: &ModuleId,
    max_deg: u32,
) -> LinMap {
    let n = ctx.n_coords();
    let trunc = ctx.trunc_order();
    let basis = module.factor(0).basis_indices(n);
    let k = basis.len();
    let entries: Vec<Vec<Poly>> = (0..k)
        .map(|_| {
            (0..k)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        poly(rng, n, trunc, max_deg.min(2))
                    } else {
                        Poly::zero(n, trunc)
                    }
                })
                .collect()
        })
        .collect();
    LinMap::basis_matrix(ctx, module.clone(), module.clone(), entries, ctx.is_deformed())
        .with_flags(Flags {
            right_a: true,
            ..Flags::default()
        })
}

/// Random (element, coefficient) pairs for linearity checks.
pub fn linearity_samples(
    rng: &mut ChaCha8Rng,
    module: &ModuleId,
    n: usize,
    trunc: usize,
    max_deg: u32,
    count: usize,
) -> Vec<(Elt, Poly)> {
    (0..count)
        .map(|_| {
            (
                elt(rng, module, n, trunc, max_deg),
                poly(rng, n, trunc, max_deg),
            )
        })
        .collect()
}
