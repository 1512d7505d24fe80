//! The coefficient scalar abstraction.
//!
//! Polynomial and fraction arithmetic in [`crate::exact_arith`] is written
//! against this trait rather than a concrete number type. The crate-level
//! alias [`crate::Rat`] instantiates it with arbitrary-precision rationals,
//! which is what every exactness guarantee in this library relies on.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

/// An exact field scalar usable as a polynomial coefficient.
///
/// `content_scale` returns the positive scale `c` such that dividing a
/// coefficient slice by `c` yields the canonical representatives (for
/// rationals: integers with gcd 1). Scalars without a meaningful content
/// notion keep the default of `1`.
pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + PartialEq + Debug + Display + 'static
{
    fn content_scale<'a, I>(coeffs: I) -> Self
    where
        I: Iterator<Item = &'a Self>,
        Self: 'a,
    {
        let _ = coeffs;
        Self::one()
    }

    /// Write the scalar as a reduced ratio `(p, q)` of canonical
    /// representatives with `q` positive. Scalars that are not built from a
    /// smaller integral domain return `(self, 1)`.
    fn split_ratio(&self) -> (Self, Self) {
        (self.clone(), Self::one())
    }
}

impl Scalar for BigRational {
    fn content_scale<'a, I>(coeffs: I) -> Self
    where
        I: Iterator<Item = &'a Self>,
    {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        let mut seen = false;
        for c in coeffs {
            if c.is_zero() {
                continue;
            }
            seen = true;
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if !seen {
            return Self::one();
        }
        BigRational::new(num_gcd, den_lcm)
    }

    fn split_ratio(&self) -> (Self, Self) {
        (
            BigRational::from_integer(self.numer().clone()),
            BigRational::from_integer(self.denom().clone()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn content_scale_makes_integers_coprime() {
        let coeffs = [q(4, 3), q(-2, 9)];
        let c = BigRational::content_scale(coeffs.iter());
        assert_eq!(c, q(2, 9));
        let scaled: Vec<_> = coeffs.iter().map(|x| x / &c).collect();
        assert_eq!(scaled, vec![q(6, 1), q(-1, 1)]);
    }

    #[test]
    fn content_scale_of_nothing_is_one() {
        assert!(BigRational::content_scale([].iter()).is_one());
    }
}
