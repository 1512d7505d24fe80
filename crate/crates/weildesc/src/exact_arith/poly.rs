//! Sparse multivariate polynomials over an exact scalar field.
//!
//! Monomials are exponent vectors of a fixed length compared in graded
//! lexicographic order (total degree first, then leftmost larger exponent
//! wins). All arithmetic is exact; gcd uses the primitive pseudo-remainder
//! sequence, recursing through the variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Exponent vector with graded-lexicographic ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn unit(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Quotient exponent vector; caller must ensure `self` divides `other`.
    pub fn div_into(&self, other: &Mono) -> Mono {
        Mono(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            ord => ord,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> MPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::unit(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn from_int(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, S::from_i64(n).expect("integer embeds into scalar"))
    }

    /// The variable `t_j` as a polynomial.
    pub fn var(nvars: usize, j: usize) -> Self {
        assert!(j < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[j] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Mono(exps), S::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
            p.add_term(Mono(exps), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The constant value if the polynomial has no variable part.
    pub fn constant_value(&self) -> Option<S> {
        if self.terms.is_empty() {
            return Some(S::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }

    /// Terms in descending monomial order (leading term first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Mono, &S)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::total_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    fn add_term(&mut self, mono: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out
    }

    pub fn div_scalar(&self, c: &S) -> Self {
        assert!(!c.is_zero(), "scalar division by zero");
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() / c.clone();
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            let factor = S::from_u32(e).expect("exponent embeds into scalar");
            out.add_term(Mono(exps), c.clone() * factor);
        }
        out
    }

    /// Exact multivariate division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        debug_assert_eq!(self.nvars, d.nvars);
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (dm, dc) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.div_into(rm);
            let qc = rc.clone() / dc.clone();
            let mut qt = Self::zero(self.nvars);
            qt.terms.insert(qm, qc);
            rem = rem.sub(&qt.mul(d));
            quot = quot.add(&qt);
        }
        Some(quot)
    }

    /// Positive scalar content of the coefficients (1 for the zero polynomial).
    pub fn scalar_content(&self) -> S {
        if self.is_zero() {
            return S::one();
        }
        S::content_scale(self.terms.values())
    }

    /// Sign of the leading coefficient: -1, 0 or 1.
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some((_, c)) => {
                if c.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Divide out the scalar content and make the leading coefficient
    /// positive. For rationals the result has coprime integer coefficients.
    pub fn canonical_primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.scalar_content();
        if self.leading_sign() < 0 {
            c = -c;
        }
        self.div_scalar(&c)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`.
    /// Returned polynomials have exponent 0 in `var`.
    fn coeffs_in_var(&self, var: usize) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] = 0;
            out.entry(e)
                .or_insert_with(|| Self::zero(self.nvars))
                .add_term(Mono(exps), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn leading_coeff_in_var(&self, var: usize) -> Self {
        let d = self.degree_in(var);
        self.coeffs_in_var(var)
            .remove(&d)
            .unwrap_or_else(|| Self::zero(self.nvars))
    }

    /// Content with respect to `var`: the gcd of the `var`-coefficients.
    fn content_in_var(&self, var: usize) -> Self {
        let mut g = Self::zero(self.nvars);
        for p in self.coeffs_in_var(var).values() {
            g = Self::gcd(&g, p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder of `a` by `b` with respect to `var`.
    fn pseudo_rem(a: &Self, b: &Self, var: usize) -> Self {
        let db = b.degree_in(var);
        let lb = b.leading_coeff_in_var(var);
        let mut r = a.clone();
        while !r.is_zero() {
            let dr = r.degree_in(var);
            if dr < db {
                break;
            }
            let lr = r.leading_coeff_in_var(var);
            let shift = Self::var(a.nvars, var).pow(dr - db);
            r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
        }
        r
    }

    /// Greatest common divisor, normalized to have coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn gcd(p: &Self, q: &Self) -> Self {
        if p.is_zero() {
            return q.canonical_primitive();
        }
        if q.is_zero() {
            return p.canonical_primitive();
        }
        let nvars = p.nvars;
        let var = (0..nvars).find(|&v| p.degree_in(v) > 0 || q.degree_in(v) > 0);
        let var = match var {
            // both are nonzero constants: units of the field
            None => return Self::one(nvars),
            Some(v) => v,
        };

        let cp = p.content_in_var(var);
        let cq = q.content_in_var(var);
        let mut a = p.exact_div(&cp).expect("content divides");
        let mut b = q.exact_div(&cq).expect("content divides");
        if a.degree_in(var) < b.degree_in(var) {
            std::mem::swap(&mut a, &mut b);
        }
        let g = loop {
            let r = Self::pseudo_rem(&a, &b, var);
            if r.is_zero() {
                break b;
            }
            if r.degree_in(var) == 0 {
                break Self::one(nvars);
            }
            let rc = r.content_in_var(var);
            a = b;
            b = r
                .exact_div(&rc)
                .expect("content divides")
                .canonical_primitive();
        };
        let cont = Self::gcd(&cp, &cq);
        g.mul(&cont).canonical_primitive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

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
    fn graded_lex_order() {
        // t^2 > t*s > s^2 > t > s > 1
        let m = |a: u32, b: u32| Mono(vec![a, b]);
        assert!(m(2, 0) > m(1, 1));
        assert!(m(1, 1) > m(0, 2));
        assert!(m(0, 2) > m(1, 0));
        assert!(m(1, 0) > m(0, 1));
        assert!(m(0, 1) > m(0, 0));
    }

    #[test]
    fn arithmetic_basics() {
        let p = t().add(&int(1)); // t + 1
        let q = t().sub(&int(1)); // t - 1
        let prod = p.mul(&q);
        let expect = t().mul(&t()).sub(&int(1));
        assert_eq!(prod, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn partial_derivative() {
        // d/dt (t^2 s + 3t) = 2 t s + 3
        let p = t().pow(2).mul(&s()).add(&int(3).mul(&t()));
        let expect = int(2).mul(&t()).mul(&s()).add(&int(3));
        assert_eq!(p.partial(0), expect);
        assert!(int(7).partial(0).is_zero());
    }

    #[test]
    fn exact_division() {
        let p = t().pow(2).sub(&s().pow(2));
        let d = t().sub(&s());
        let q = p.exact_div(&d).unwrap();
        assert_eq!(q, t().add(&s()));
        assert!(p.exact_div(&t().add(&int(1))).is_none());
    }

    #[test]
    fn gcd_univariate() {
        // gcd(t^2 - 1, t^2 + 2t + 1) = t + 1
        let a = t().pow(2).sub(&int(1));
        let b = t().pow(2).add(&int(2).mul(&t())).add(&int(1));
        assert_eq!(P::gcd(&a, &b), t().add(&int(1)));
    }

    #[test]
    fn gcd_multivariate() {
        // gcd((t+s)(t-s), (t+s)^2) = t + s
        let f = t().add(&s());
        let a = f.mul(&t().sub(&s()));
        let b = f.mul(&f);
        assert_eq!(P::gcd(&a, &b), f);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = t().add(&int(1));
        let b = s().add(&int(2));
        assert!(P::gcd(&a, &b).is_one());
    }

    #[test]
    fn canonical_primitive_scales_and_signs() {
        // -4/3 t - 2/3  ->  2t + 1
        let p = t()
            .scale(&BigRational::new((-4).into(), 3.into()))
            .add(&P::constant(2, BigRational::new((-2).into(), 3.into())));
        let expect = int(2).mul(&t()).add(&int(1));
        assert_eq!(p.canonical_primitive(), expect);
    }
}
