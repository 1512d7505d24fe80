//! Fractions of multivariate polynomials in canonical form.
//!
//! A fraction is stored fully reduced: the polynomial gcd of numerator and
//! denominator is 1, both have canonical (integer, content-coprime)
//! coefficients, and the leading coefficient of the denominator is positive.
//! Structural equality therefore coincides with equality in the fraction
//! field. Addition reuses the gcd of the denominators and multiplication the
//! two cross gcds, so full reductions only happen where they are needed.

use crate::error::{Error, Result};
use crate::exact_arith::poly::MPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frac<S: Scalar> {
    num: MPoly<S>,
    den: MPoly<S>,
}

impl<S: Scalar> Frac<S> {
    /// Build `num / den`, reducing to canonical form.
    pub fn new(num: MPoly<S>, den: MPoly<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.nvars()));
        }
        let g = MPoly::gcd(&num, &den);
        let n = num.exact_div(&g).expect("gcd divides numerator");
        let d = den.exact_div(&g).expect("gcd divides denominator");
        Ok(Self::scalar_canonical(n, d))
    }

    /// Canonicalize the scalar part of an already gcd-reduced pair.
    fn scalar_canonical(n: MPoly<S>, d: MPoly<S>) -> Self {
        let cn = n.scalar_content();
        let cd = d.scalar_content();
        let (mut p, mut q) = (cn.clone() / cd.clone()).split_ratio();
        if d.leading_sign() < 0 {
            p = -p;
            q = -q;
        }
        Frac {
            num: n.div_scalar(&cn).scale(&p),
            den: d.div_scalar(&cd).scale(&q),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Frac {
            num: MPoly::zero(nvars),
            den: MPoly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MPoly::one(nvars))
    }

    pub fn from_poly(p: MPoly<S>) -> Self {
        let nvars = p.nvars();
        Self::scalar_canonical(p, MPoly::one(nvars))
    }

    pub fn from_int(nvars: usize, n: i64) -> Self {
        Self::from_poly(MPoly::from_int(nvars, n))
    }

    pub fn from_scalar(nvars: usize, c: S) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, j))
    }

    pub fn num(&self) -> &MPoly<S> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<S> {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The scalar value if both numerator and denominator are constants.
    pub fn as_scalar(&self) -> Option<S> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn neg(&self) -> Self {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = MPoly::gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            if num.is_zero() {
                return Self::zero(self.nvars());
            }
            return Self::scalar_canonical(num, den);
        }
        let da = self.den.exact_div(&g).expect("gcd divides");
        let db = other.den.exact_div(&g).expect("gcd divides");
        let t = self.num.mul(&db).add(&other.num.mul(&da));
        if t.is_zero() {
            return Self::zero(self.nvars());
        }
        let h = MPoly::gcd(&t, &g);
        let num = t.exact_div(&h).expect("gcd divides");
        let den = da.mul(&other.den.exact_div(&h).expect("gcd divides"));
        Self::scalar_canonical(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        let g1 = MPoly::gcd(&self.num, &other.den);
        let g2 = MPoly::gcd(&other.num, &self.den);
        let num = self
            .num
            .exact_div(&g1)
            .expect("gcd divides")
            .mul(&other.num.exact_div(&g2).expect("gcd divides"));
        let den = self
            .den
            .exact_div(&g2)
            .expect("gcd divides")
            .mul(&other.den.exact_div(&g1).expect("gcd divides"));
        Self::scalar_canonical(num, den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::scalar_canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        Self::scalar_canonical(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one(self.nvars());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Formal partial derivative by the quotient rule.
    pub fn partial(&self, var: usize) -> Self {
        let num = self
            .num
            .partial(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial(var)));
        let den = self.den.mul(&self.den);
        Self::new(num, den).expect("denominator is nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type F = Frac<BigRational>;
    type P = MPoly<BigRational>;

    fn t() -> P {
        P::var(2, 0)
    }

    fn s() -> P {
        P::var(2, 1)
    }

    fn int(n: i64) -> P {
        P::from_int(2, n)
    }

    #[test]
    fn construction_reduces() {
        // (t^2 - 1) / (t + 1) = t - 1
        let f = F::new(t().pow(2).sub(&int(1)), t().add(&int(1))).unwrap();
        assert_eq!(f, F::from_poly(t().sub(&int(1))));
        assert!(f.is_polynomial());
    }

    #[test]
    fn construction_normalizes_sign_and_content() {
        // t / (-2t + 2) = -t / (2t - 2)
        let f = F::new(t(), int(-2).mul(&t()).add(&int(2))).unwrap();
        assert_eq!(*f.num(), t().neg());
        assert_eq!(*f.den(), int(2).mul(&t()).sub(&int(2)));
        // (2/3) as a fraction of integer polynomials
        let c = F::from_scalar(2, BigRational::new(2.into(), 3.into()));
        assert_eq!(*c.num(), int(2));
        assert_eq!(*c.den(), int(3));
    }

    #[test]
    fn addition_over_common_denominator() {
        // 1/(t-1) + 1/(t+1) = 2t / (t^2 - 1)
        let a = F::new(int(1), t().sub(&int(1))).unwrap();
        let b = F::new(int(1), t().add(&int(1))).unwrap();
        let sum = a.add(&b);
        assert_eq!(*sum.num(), int(2).mul(&t()));
        assert_eq!(*sum.den(), t().pow(2).sub(&int(1)));
        // 1/t + 1/t = 2/t
        let c = F::new(int(1), t()).unwrap();
        let twice = c.add(&c);
        assert_eq!(*twice.num(), int(2));
        assert_eq!(*twice.den(), t());
    }

    #[test]
    fn multiplication_cancels_crosswise() {
        let a = F::new(t(), s()).unwrap();
        let b = F::new(s(), t()).unwrap();
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn subtraction_to_zero() {
        let a = F::new(t().add(&int(1)), s()).unwrap();
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inverse_and_division() {
        let a = F::new(t(), int(2)).unwrap();
        let inv = a.inv().unwrap();
        assert_eq!(*inv.num(), int(2));
        assert_eq!(*inv.den(), t());
        assert!(a.div(&a).unwrap().is_one());
        assert!(matches!(F::zero(2).inv(), Err(Error::DivisionByZero)));
        assert!(matches!(
            F::new(int(1), P::zero(2)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn negative_powers() {
        let a = F::from_poly(t());
        let p = a.pow(-2).unwrap();
        assert_eq!(*p.num(), int(1));
        assert_eq!(*p.den(), t().pow(2));
    }

    #[test]
    fn quotient_rule_derivative() {
        // d/dt (1/t) = -1/t^2
        let f = F::new(int(1), t()).unwrap();
        let df = f.partial(0);
        assert_eq!(*df.num(), int(-1));
        assert_eq!(*df.den(), t().pow(2));
        // d/dt (t^2 s) = 2 t s
        let g = F::from_poly(t().pow(2).mul(&s()));
        assert_eq!(g.partial(0), F::from_poly(int(2).mul(&t()).mul(&s())));
    }
}
