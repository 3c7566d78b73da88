//! Twist elements: construction of the abelian (Moyal-type) and Jordanian
//! families, exact h-adic inversion, and verification of the 2-cocycle and
//! normalization identities against a context's coproduct.
//!
//! Only h-adic twists (unit + O(h)) are admitted: those are invertible by a
//! finite geometric series at the truncation order, so every verification is
//! an exact, finite computation.

use crate::context::Context;
use crate::hopf::{h_pow, log_one_plus_h, tensor_exp, tensor_mul, HElt, HTensor};
use crate::series::{KSeries, Rat};
use num::Zero;

#[derive(Clone, PartialEq, Eq)]
pub struct Twist {
    f: HTensor,
    f_inv: HTensor,
    desc: String,
}

/// Outcome of checking the defining identities of a twist. Failures are
/// reported, not thrown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistReport {
    pub cocycle: bool,
    pub normalization: bool,
    pub invertible: bool,
}

impl TwistReport {
    pub fn all_ok(&self) -> bool {
        self.cocycle && self.normalization && self.invertible
    }
}

impl Twist {
    /// Wrap a raw tensor as a twist, computing its h-adic inverse.
    /// Fails when the tensor is not of the form 1⊗1 + O(h).
    pub fn from_tensor(ctx: &Context, f: HTensor, desc: String) -> Result<Self, crate::Error> {
        if f.legs() != 2 {
            return Err(crate::Error::UnsupportedTwist(
                "twist must live in H⊗H".into(),
            ));
        }
        let f_inv = f
            .invert(ctx.lie())
            .map_err(|_| crate::Error::UnsupportedTwist("twist is not unit + O(h)".into()))?;
        Ok(Twist { f, f_inv, desc })
    }

    /// The identity twist 1⊗1.
    pub fn identity(ctx: &Context) -> Self {
        let unit = HTensor::unit(ctx.lie().dim(), ctx.trunc_order(), 2);
        Twist {
            f: unit.clone(),
            f_inv: unit,
            desc: "identity".into(),
        }
    }

    pub fn tensor(&self) -> &HTensor {
        &self.f
    }

    pub fn inverse_tensor(&self) -> &HTensor {
        &self.f_inv
    }

    pub fn desc(&self) -> &str {
        &self.desc
    }

    /// The inverse twist, as a twist of the deformed context.
    pub fn inverse(&self) -> Twist {
        Twist {
            f: self.f_inv.clone(),
            f_inv: self.f.clone(),
            desc: format!("inverse({})", self.desc),
        }
    }

    /// Check the defining identities against the context's Hopf structure:
    /// F_12 (Δ⊗id)F = F_23 (id⊗Δ)F, (ε⊗id)F = 1 = (id⊗ε)F, plus exact
    /// two-sided invertibility.
    pub fn verify(&self, ctx: &Context) -> TwistReport {
        let lie = ctx.lie();
        let dim = lie.dim();
        let trunc = ctx.trunc_order();

        let f12 = self.f.place(3, &[0, 1]);
        let f23 = self.f.place(3, &[1, 2]);
        let delta_left = self.f.expand_leg(0, |m| ctx.coproduct_monomial(m));
        let delta_right = self.f.expand_leg(1, |m| ctx.coproduct_monomial(m));
        let lhs = tensor_mul(lie, &f12, &delta_left);
        let rhs = tensor_mul(lie, &f23, &delta_right);
        let cocycle = lhs == rhs;

        let unit1 = HTensor::unit(dim, trunc, 1);
        let normalization =
            self.f.counit_leg(0) == unit1 && self.f.counit_leg(1) == unit1;

        let unit2 = HTensor::unit(dim, trunc, 2);
        let invertible = tensor_mul(lie, &self.f, &self.f_inv) == unit2
            && tensor_mul(lie, &self.f_inv, &self.f) == unit2;

        TwistReport {
            cocycle,
            normalization,
            invertible,
        }
    }
}

/// F = exp(λ h Σ r^{ij} X_i⊗X_j) for a matrix r supported on pairwise
/// commuting generators.
pub fn build_abelian_twist(
    ctx: &Context,
    r: &[Vec<Rat>],
    lambda: &Rat,
) -> Result<Twist, crate::Error> {
    let lie = ctx.lie();
    let dim = lie.dim();
    let trunc = ctx.trunc_order();
    if r.len() != dim || r.iter().any(|row| row.len() != dim) {
        return Err(crate::Error::Validation(
            "abelian twist matrix must be dim × dim".into(),
        ));
    }
    let support: Vec<usize> = (0..dim)
        .filter(|&i| (0..dim).any(|j| !r[i][j].is_zero() || !r[j][i].is_zero()))
        .collect();
    if !lie.is_abelian_support(&support) {
        return Err(crate::Error::UnsupportedTwist(
            "abelian twist requires pairwise commuting support generators".into(),
        ));
    }
    let build = |coef: Rat| -> Result<HTensor, crate::Error> {
        let mut arg = HTensor::zero(dim, trunc, 2);
        for i in 0..dim {
            for j in 0..dim {
                if r[i][j].is_zero() {
                    continue;
                }
                let pure = HTensor::of(&[
                    &HElt::generator(i, dim, trunc),
                    &HElt::generator(j, dim, trunc),
                ]);
                arg = arg.add(&pure.scale(&KSeries::monomial(&coef * &r[i][j], 1, trunc)));
            }
        }
        tensor_exp(lie, &arg)
    };
    let f = build(lambda.clone())?;
    let f_inv = build(-lambda)?;
    // The closed-form inverse must agree with the h-adic one.
    debug_assert_eq!(
        tensor_mul(lie, &f, &f_inv),
        HTensor::unit(dim, trunc, 2)
    );
    let twist = Twist {
        f,
        f_inv,
        desc: format!("abelian(λ={})", lambda),
    };
    let report = twist.verify(ctx);
    if !report.all_ok() {
        return Err(crate::Error::UnsupportedTwist(format!(
            "abelian twist failed verification: {:?}",
            report
        )));
    }
    Ok(twist)
}

/// The Jordanian twist for a pair with [X_H, X_E] = -X_E:
/// F = exp(-X_H ⊗ σ) with σ = log(1 + h X_E).
///
/// With this bracket convention the exponent needs the minus sign for the
/// 2-cocycle identity to hold (equivalently, replace X_H by -X_H to land in
/// the convention [H', E] = +E).
pub fn build_jordanian_twist(
    ctx: &Context,
    h_idx: usize,
    e_idx: usize,
) -> Result<Twist, crate::Error> {
    let lie = ctx.lie();
    let dim = lie.dim();
    let trunc = ctx.trunc_order();
    for k in 0..dim {
        let expect = if k == e_idx {
            crate::series::rat(-1)
        } else {
            Rat::zero()
        };
        if lie.bracket_coeff(h_idx, e_idx, k) != &expect {
            return Err(crate::Error::UnsupportedTwist(format!(
                "Jordanian twist requires [{}, {}] = -{}",
                lie.name(h_idx),
                lie.name(e_idx),
                lie.name(e_idx)
            )));
        }
    }
    let sigma = log_one_plus_h(lie, &HElt::generator(e_idx, dim, trunc));
    let xh = HElt::generator(h_idx, dim, trunc);
    let build = |sign: i64| -> HTensor {
        let mut out = HTensor::unit(dim, trunc, 2);
        let mut factorial = 1i64;
        for m in 1..=trunc {
            factorial *= m as i64;
            let left = h_pow(lie, &xh, m as u32)
                .scale(&KSeries::constant(crate::series::ratq(sign.pow(m as u32), factorial), trunc));
            let right = {
                let mut p = HElt::one(dim, trunc);
                for _ in 0..m {
                    p = crate::hopf::h_mul(lie, &p, &sigma);
                }
                p
            };
            out = out.add(&HTensor::of(&[&left, &right]));
        }
        out
    };
    let f = build(-1);
    let f_inv = f.invert(lie)?;
    let twist = Twist {
        f,
        f_inv,
        desc: format!("jordanian({}, {})", lie.name(h_idx), lie.name(e_idx)),
    };
    let report = twist.verify(ctx);
    if !report.all_ok() {
        return Err(crate::Error::UnsupportedTwist(format!(
            "Jordanian twist failed verification: {:?}",
            report
        )));
    }
    Ok(twist)
}

/// Composite of a twist F of this context with a twist F' of the context
/// deformed by F; the product F'·F is a twist of this context.
pub fn compose_twists(
    base_ctx: &Context,
    f_prime: &Twist,
    f: &Twist,
) -> Result<Twist, crate::Error> {
    let lie = base_ctx.lie();
    let prod = tensor_mul(lie, f_prime.tensor(), f.tensor());
    let twist = Twist::from_tensor(
        base_ctx,
        prod,
        format!("{}∘{}", f_prime.desc, f.desc),
    )?;
    let report = twist.verify(base_ctx);
    if !report.all_ok() {
        return Err(crate::Error::UnsupportedTwist(format!(
            "composite twist failed verification: {:?}",
            report
        )));
    }
    Ok(twist)
}
