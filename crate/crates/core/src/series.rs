//! The ground ring K = Q[[h]]/(h^{N+1}): truncated formal power series in the
//! deformation parameter h with exact rational coefficients.
//!
//! Invariants:
//! - `coeffs.len() == trunc_order + 1`; index k holds the coefficient of h^k
//! - arithmetic never consults (or produces) coefficients beyond index N
//! - two series are equal iff all N+1 coefficients are equal
//!
//! Binary operations assert that both operands share the same truncation
//! order; mixing orders is a bug in the caller, not a recoverable condition.

use num::{BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational scalar.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Rational n/d.
pub fn ratq(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// A truncated formal power series over Q.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSeries {
    coeffs: Vec<Rat>,
}

impl KSeries {
    /// The zero series truncated at h^{trunc+1}.
    pub fn zero(trunc: usize) -> Self {
        KSeries {
            coeffs: vec![Rat::zero(); trunc + 1],
        }
    }

    /// The constant series 1.
    pub fn one(trunc: usize) -> Self {
        Self::constant(Rat::one(), trunc)
    }

    /// A constant series.
    pub fn constant(c: Rat, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    /// The monomial c·h^k (zero if k exceeds the truncation order).
    pub fn monomial(c: Rat, k: usize, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    /// The generator h itself.
    pub fn h(trunc: usize) -> Self {
        Self::monomial(Rat::one(), 1, trunc)
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of h^k.
    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Lowest power of h with a nonzero coefficient, if any.
    pub fn h_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, c: &Rat) -> Self {
        KSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by h^k, shifting coefficients and truncating.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.trunc_order();
        let mut out = Self::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k <= n {
                out.coeffs[i + k] = c.clone();
            }
        }
        out
    }

    /// Multiplicative inverse. Requires a nonzero constant coefficient.
    ///
    /// Uses the recurrence b_0 = 1/a_0, b_k = -(1/a_0)·sum_{j=1..=k} a_j b_{k-j}.
    pub fn invert(&self) -> Result<Self, crate::Error> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(crate::Error::NonInvertible(
                "series has zero constant term".into(),
            ));
        }
        let n = self.trunc_order();
        let inv_a0 = a0.recip();
        let mut b = Self::zero(n);
        b.coeffs[0] = inv_a0.clone();
        for k in 1..=n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &b.coeffs[k - j];
            }
            b.coeffs[k] = -&inv_a0 * acc;
        }
        Ok(b)
    }

    /// Keep only the h^0 coefficient (the classical limit).
    pub fn classical_part(&self) -> Self {
        Self::constant(self.coeffs[0].clone(), self.trunc_order())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.trunc_order(),
            other.trunc_order(),
            "truncation order mismatch: {} vs {}",
            self.trunc_order(),
            other.trunc_order()
        );
    }
}

impl Add for &KSeries {
    type Output = KSeries;
    fn add(self, rhs: &KSeries) -> KSeries {
        self.check_compatible(rhs);
        KSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &KSeries {
    type Output = KSeries;
    fn sub(self, rhs: &KSeries) -> KSeries {
        self.check_compatible(rhs);
        KSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &KSeries {
    type Output = KSeries;
    fn mul(self, rhs: &KSeries) -> KSeries {
        self.check_compatible(rhs);
        let n = self.trunc_order();
        let mut out = KSeries::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > n {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

impl Neg for &KSeries {
    type Output = KSeries;
    fn neg(self) -> KSeries {
        KSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for KSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "h")?;
                    } else {
                        write!(f, "h^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ks(parts: &[i64], trunc: usize) -> KSeries {
        let mut s = KSeries::zero(trunc);
        for (k, &c) in parts.iter().enumerate() {
            s.coeffs[k] = rat(c);
        }
        s
    }

    #[test]
    fn cancellation_at_stored_order() {
        // (1 + h)(1 - h) at N=1 is exactly 1: the h^2 term falls off the end.
        let a = ks(&[1, 1], 1);
        let b = ks(&[1, -1], 1);
        assert_eq!(&a * &b, KSeries::one(1));
    }

    #[test]
    fn product_keeps_h2_at_n2() {
        // Same product at N=2 retains the -h^2 term.
        let a = ks(&[1, 1], 2);
        let b = ks(&[1, -1], 2);
        assert_eq!(&a * &b, ks(&[1, 0, -1], 2));
    }

    #[test]
    fn zero_is_absorbing() {
        let a = ks(&[3, -2, 5], 2);
        assert!((&a * &KSeries::zero(2)).is_zero());
    }

    #[test]
    fn invert_one_is_one() {
        assert_eq!(KSeries::one(3).invert().unwrap(), KSeries::one(3));
    }

    #[test]
    fn invert_geometric_series() {
        // 1/(1+h) = 1 - h + h^2 at N=2, the geometric series oracle.
        let a = ks(&[1, 1], 2);
        assert_eq!(a.invert().unwrap(), ks(&[1, -1, 1], 2));
    }

    #[test]
    fn invert_h_fails() {
        assert!(KSeries::h(2).invert().is_err());
    }

    #[test]
    #[should_panic(expected = "truncation order mismatch")]
    fn mixed_trunc_orders_panic() {
        let _ = &KSeries::one(1) + &KSeries::one(2);
    }

    fn arb_kseries(trunc: usize) -> impl Strategy<Value = KSeries> {
        proptest::collection::vec((-6i64..7, 1i64..5), trunc + 1).prop_map(move |parts| {
            KSeries {
                coeffs: parts.into_iter().map(|(n, d)| ratq(n, d)).collect(),
            }
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_kseries(3), b in arb_kseries(3), c in arb_kseries(3)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &KSeries::one(3), a.clone());
        }

        #[test]
        fn invert_is_right_inverse(a in arb_kseries(3)) {
            prop_assume!(!a.coeff(0).is_zero());
            let inv = a.invert().unwrap();
            prop_assert_eq!(&a * &inv, KSeries::one(3));
        }
    }
}
