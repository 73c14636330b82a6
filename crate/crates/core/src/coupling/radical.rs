//! Exact values of the form `sign * sqrt(radicand)` with rational radicand.
//!
//! Every 3j/6j symbol and every harmonic normalization factor lives in this
//! set, which is closed under multiplication. Addition is deliberately not
//! offered on the public type: sums of incommensurable radicals leave the set.
//! The crate-internal [`RadicalSum`] accumulates such sums keyed by squarefree
//! kernel and is used where a sum is known to collapse back to a single term.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `sign * sqrt(radicand)` with `radicand >= 0` rational. The zero value is
/// canonically `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalRational {
    sign: i8,
    radicand: BigRational,
}

impl RadicalRational {
    pub fn zero() -> Self {
        RadicalRational {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        RadicalRational {
            sign: 1,
            radicand: BigRational::from_integer(1.into()),
        }
    }

    /// `sign * sqrt(radicand)`; `radicand` must be nonnegative.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "radicand must be nonnegative");
        if radicand.is_zero() || sign == 0 {
            return Self::zero();
        }
        RadicalRational {
            sign: sign.signum(),
            radicand,
        }
    }

    /// Embeds a rational exactly: `r` maps to `sign(r) * sqrt(r^2)`.
    pub fn from_rational(r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let sign = if r.is_negative() { -1 } else { 1 };
        RadicalRational {
            sign,
            radicand: r * r,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    /// `sqrt(r)` for nonnegative rational `r`.
    pub fn sqrt_of(r: BigRational) -> Self {
        Self::new(1, r)
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// The radicand; the square of the value.
    pub fn squared(&self) -> &BigRational {
        &self.radicand
    }

    /// Multiply by an exact rational factor.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let sign = if c.is_negative() { -self.sign } else { self.sign };
        RadicalRational {
            sign,
            radicand: &self.radicand * c * c,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let r = self.radicand.to_f64().unwrap_or(f64::NAN);
        f64::from(self.sign) * r.sqrt()
    }
}

impl std::ops::Mul for &RadicalRational {
    type Output = RadicalRational;

    fn mul(self, rhs: &RadicalRational) -> RadicalRational {
        if self.is_zero() || rhs.is_zero() {
            return RadicalRational::zero();
        }
        RadicalRational {
            sign: self.sign * rhs.sign,
            radicand: &self.radicand * &rhs.radicand,
        }
    }
}

impl std::ops::Mul for RadicalRational {
    type Output = RadicalRational;

    fn mul(self, rhs: RadicalRational) -> RadicalRational {
        (&self) * (&rhs)
    }
}

impl std::ops::Neg for RadicalRational {
    type Output = RadicalRational;

    fn neg(self) -> RadicalRational {
        RadicalRational {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for RadicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let s = if self.sign < 0 { "-" } else { "" };
        if self.radicand.is_integer() {
            // Print perfect squares as plain integers where cheap to spot.
            let n = self.radicand.to_integer();
            if let Some(u) = n.to_u64() {
                let root = (u as f64).sqrt().round() as u64;
                if root * root == u {
                    return write!(f, "{s}{root}");
                }
            }
        }
        write!(f, "{s}sqrt({})", self.radicand)
    }
}

/// Exact finite sum `sum_k c_k * sqrt(k)` over squarefree kernels `k`.
///
/// Terms with equal kernel add rationally. Used by the coupling oracles,
/// where the theory guarantees the final sum has a single surviving kernel.
#[derive(Debug, Clone, Default)]
pub(crate) struct RadicalSum {
    terms: BTreeMap<BigUint, BigRational>,
}

impl RadicalSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff * sqrt(kernel)`; the kernel must be squarefree (callers
    /// obtain it from `PrimePowers::split_square`).
    pub fn add_term(&mut self, kernel: BigUint, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(kernel).or_insert_with(BigRational::zero);
        *slot += coeff;
    }

    /// Collapses to a single radical. Returns `None` if two or more
    /// incommensurable kernels survive with nonzero coefficients.
    pub fn into_radical(self) -> Option<RadicalRational> {
        let mut nonzero: Vec<(BigUint, BigRational)> = self
            .terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        match nonzero.len() {
            0 => Some(RadicalRational::zero()),
            1 => {
                let (kernel, coeff) = nonzero.pop().expect("one term");
                let sign = if coeff.is_negative() { -1 } else { 1 };
                let kernel_rat = BigRational::from_integer(kernel.into());
                Some(RadicalRational::new(sign, &coeff * &coeff * kernel_rat))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_embedding_round_trips() {
        let x = RadicalRational::from_rational(&rat(-3, 4));
        assert_eq!(x.sign(), -1);
        assert_eq!(x.squared(), &rat(9, 16));
        assert!((x.to_f64() + 0.75).abs() < 1e-15);
    }

    #[test]
    fn multiplication_is_closed_and_exact() {
        // sqrt(1/3) * sqrt(3) = 1 exactly
        let a = RadicalRational::sqrt_of(rat(1, 3));
        let b = RadicalRational::sqrt_of(rat(3, 1));
        let p = &a * &b;
        assert_eq!(p, RadicalRational::one());

        // (-sqrt(2/15)) * (-sqrt(5/6)) = sqrt(1/9) = 1/3
        let a = -RadicalRational::sqrt_of(rat(2, 15));
        let b = -RadicalRational::sqrt_of(rat(5, 6));
        let p = a * b;
        assert_eq!(p, RadicalRational::from_rational(&rat(1, 3)));
    }

    #[test]
    fn zero_is_canonical() {
        let z = RadicalRational::from_integer(0);
        assert!(z.is_zero());
        assert_eq!(z, RadicalRational::zero());
        let p = &z * &RadicalRational::sqrt_of(rat(7, 2));
        assert!(p.is_zero());
    }

    #[test]
    fn scaling_by_rational() {
        // -2 * sqrt(3/4) = -sqrt(3)
        let x = RadicalRational::sqrt_of(rat(3, 4));
        let y = x.scale(&rat(-2, 1));
        assert_eq!(y, -RadicalRational::sqrt_of(rat(3, 1)));
    }

    #[test]
    fn sum_collapses_when_kernels_match() {
        let mut s = RadicalSum::new();
        // sqrt(2)/2 + sqrt(2)/3 - sqrt(2)*5/6 = 0
        s.add_term(BigUint::from(2u32), rat(1, 2));
        s.add_term(BigUint::from(2u32), rat(1, 3));
        s.add_term(BigUint::from(2u32), rat(-5, 6));
        assert_eq!(s.into_radical(), Some(RadicalRational::zero()));

        let mut s = RadicalSum::new();
        s.add_term(BigUint::from(3u32), rat(1, 2));
        s.add_term(BigUint::from(3u32), rat(1, 6));
        // 2/3 * sqrt(3) = sqrt(4/3)
        assert_eq!(
            s.into_radical(),
            Some(RadicalRational::sqrt_of(rat(4, 3)))
        );
    }

    #[test]
    fn sum_with_mixed_kernels_does_not_collapse() {
        let mut s = RadicalSum::new();
        s.add_term(BigUint::from(2u32), rat(1, 1));
        s.add_term(BigUint::from(3u32), rat(1, 1));
        assert_eq!(s.into_radical(), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(RadicalRational::zero().to_string(), "0");
        assert_eq!(RadicalRational::from_integer(-2).to_string(), "-2");
        assert_eq!(
            RadicalRational::sqrt_of(rat(1, 3)).to_string(),
            "sqrt(1/3)"
        );
    }
}
