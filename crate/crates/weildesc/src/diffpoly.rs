//! Differential polynomials over `B` and over the base field.
//!
//! Variables carry a derivative multi-index with one slot per base
//! derivation; the zero index is the underived variable. Polynomials over
//! `B` use variables `t_theta`, the descended polynomials over the base
//! field use component variables `t_theta(i)`. Both are instances of one
//! generic sparse polynomial whose coefficient arithmetic is delegated to a
//! context ring, so the same code drives `ExtElem` and `BaseElem`
//! coefficients.
//!
//! Canonical term order: variables compare by (name, |theta|, theta
//! lexicographic, component) and monomials graded-lexicographically with the
//! larger variable more significant, so higher derivatives print first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug, Display};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::extension::{ExtElem, Extension};
use crate::{BaseElem, BaseField};

/// Derivative multi-index: one exponent per named base derivation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivIndex(pub Vec<u32>);

impl DerivIndex {
    pub fn zero(m: usize) -> Self {
        DerivIndex(vec![0; m])
    }

    /// The index `e_k` of a single application of derivation `k`.
    pub fn single(m: usize, k: usize) -> Self {
        let mut v = vec![0; m];
        v[k] = 1;
        DerivIndex(v)
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn bump(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v[k] += 1;
        DerivIndex(v)
    }
}

impl Ord for DerivIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.order().cmp(&other.order()) {
            Ordering::Equal => self.0.cmp(&other.0),
            ord => ord,
        }
    }
}

impl PartialOrd for DerivIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Display for DerivIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "]")
    }
}

/// A variable `t_theta` of the differential polynomial ring over `B`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarB {
    pub name: String,
    pub theta: DerivIndex,
}

impl VarB {
    pub fn new(name: &str, theta: DerivIndex) -> Self {
        VarB {
            name: name.to_string(),
            theta,
        }
    }

    pub fn order0(name: &str, m: usize) -> Self {
        Self::new(name, DerivIndex::zero(m))
    }
}

impl Display for VarB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.theta)
    }
}

/// A descended variable `t_theta(i)`; `component` is the 1-based basis
/// coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarA {
    pub name: String,
    pub theta: DerivIndex,
    pub component: usize,
}

impl VarA {
    pub fn new(name: &str, theta: DerivIndex, component: usize) -> Self {
        VarA {
            name: name.to_string(),
            theta,
            component,
        }
    }
}

impl Display for VarA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}@{}", self.name, self.component, self.theta)
    }
}

/// Monomial in abstract variables: a sparse exponent map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VMono<V: Ord>(BTreeMap<V, u32>);

impl<V: Ord + Clone> VMono<V> {
    pub fn one() -> Self {
        VMono(BTreeMap::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn var(v: V) -> Self {
        let mut m = BTreeMap::new();
        m.insert(v, 1);
        VMono(m)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        VMono(out)
    }

    /// Exponent pairs with the largest variable first.
    pub fn factors_desc(&self) -> impl Iterator<Item = (&V, u32)> {
        self.0.iter().rev().map(|(v, &e)| (v, e))
    }

    pub fn factors(&self) -> impl Iterator<Item = (&V, u32)> {
        self.0.iter().map(|(v, &e)| (v, e))
    }

    /// The monomial with one power of `v` removed; `v` must occur.
    fn decrement(&self, v: &V) -> Self {
        let mut out = self.0.clone();
        match out.get_mut(v) {
            Some(e) if *e > 1 => *e -= 1,
            Some(_) => {
                out.remove(v);
            }
            None => unreachable!("variable occurs in the monomial"),
        }
        VMono(out)
    }
}

impl<V: Ord> Ord for VMono<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        let da: u32 = self.0.values().sum();
        let db: u32 = other.0.values().sum();
        match da.cmp(&db) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    },
                    ord => return ord,
                },
            }
        }
    }
}

impl<V: Ord> PartialOrd for VMono<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient arithmetic supplied by a context object, so polynomial code
/// is shared between `BaseElem` coefficients (context: the base field) and
/// `ExtElem` coefficients (context: the extension).
pub trait CoeffRing {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn embed_u32(&self, n: u32) -> Self::Elem;
}

impl CoeffRing for BaseField {
    type Elem = BaseElem;

    fn zero(&self) -> BaseElem {
        BaseElem::zero(self.nvars())
    }

    fn one(&self) -> BaseElem {
        BaseElem::one(self.nvars())
    }

    fn is_zero(&self, a: &BaseElem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        a.add(b)
    }

    fn neg(&self, a: &BaseElem) -> BaseElem {
        a.neg()
    }

    fn mul(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        a.mul(b)
    }

    fn embed_u32(&self, n: u32) -> BaseElem {
        BaseElem::from_int(self.nvars(), n as i64)
    }
}

impl CoeffRing for Extension {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        self.zero_elem()
    }

    fn one(&self) -> ExtElem {
        self.one_elem()
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.ext_add(a, b)
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        self.ext_neg(a)
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.ext_mul(a, b)
    }

    fn embed_u32(&self, n: u32) -> ExtElem {
        self.scalar_embed(&BaseElem::from_int(self.base().nvars(), n as i64))
    }
}

/// Sparse polynomial in abstract variables with context-ring coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPoly<V: Ord + Clone, C> {
    terms: BTreeMap<VMono<V>, C>,
}

/// Differential polynomial over `B` in variables `t_theta`.
pub type DPolyB = VPoly<VarB, ExtElem>;
/// Polynomial over the base field in descended variables `t_theta(i)`.
pub type DPolyA = VPoly<VarA, BaseElem>;
/// Polynomial over the base field in plain variables `t_theta` (the image
/// of the counit).
pub type DPolyBase = VPoly<VarB, BaseElem>;

impl<V: Ord + Clone, C: Clone + PartialEq + Debug> VPoly<V, C> {
    pub fn zero() -> Self {
        VPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<R: CoeffRing<Elem = C>>(ctx: &R, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(ctx, VMono::one(), c);
        p
    }

    pub fn var<R: CoeffRing<Elem = C>>(ctx: &R, v: V) -> Self {
        let mut p = Self::zero();
        p.add_term(ctx, VMono::var(v), ctx.one());
        p
    }

    pub fn monomial<R: CoeffRing<Elem = C>>(ctx: &R, c: C, mono: VMono<V>) -> Self {
        let mut p = Self::zero();
        p.add_term(ctx, mono, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VMono<V>, &C)> {
        self.terms.iter()
    }

    /// Terms with the leading monomial first.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&VMono<V>, &C)> {
        self.terms.iter().rev()
    }

    /// The coefficient of the empty monomial, if the polynomial is constant.
    pub fn constant_value<R: CoeffRing<Elem = C>>(&self, ctx: &R) -> Option<C> {
        if self.terms.is_empty() {
            return Some(ctx.zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&VMono::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    /// All variables occurring with nonzero exponent.
    pub fn variables(&self) -> BTreeSet<V> {
        let mut out = BTreeSet::new();
        for mono in self.terms.keys() {
            for (v, _) in mono.factors() {
                out.insert(v.clone());
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(VMono::total_degree)
            .max()
            .unwrap_or(0)
    }

    fn add_term<R: CoeffRing<Elem = C>>(&mut self, ctx: &R, mono: VMono<V>, c: C) {
        if ctx.is_zero(&c) {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = ctx.add(e.get(), &c);
                if ctx.is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add<R: CoeffRing<Elem = C>>(&self, ctx: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ctx, m.clone(), c.clone());
        }
        out
    }

    pub fn neg<R: CoeffRing<Elem = C>>(&self, ctx: &R) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = ctx.neg(c);
        }
        out
    }

    pub fn sub<R: CoeffRing<Elem = C>>(&self, ctx: &R, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul<R: CoeffRing<Elem = C>>(&self, ctx: &R, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ctx, ma.mul(mb), ctx.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale<R: CoeffRing<Elem = C>>(&self, ctx: &R, c: &C) -> Self {
        if ctx.is_zero(c) {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(ctx, m.clone(), ctx.mul(a, c));
        }
        out
    }

    pub fn pow<R: CoeffRing<Elem = C>>(&self, ctx: &R, e: u32) -> Self {
        let mut out = Self::constant(ctx, ctx.one());
        for _ in 0..e {
            out = out.mul(ctx, self);
        }
        out
    }

    /// Rebuild with mapped coefficients, dropping any that map to zero.
    pub fn map_coeffs<C2, R2>(&self, ctx2: &R2, f: impl Fn(&C) -> C2) -> VPoly<V, C2>
    where
        C2: Clone + PartialEq + Debug,
        R2: CoeffRing<Elem = C2>,
    {
        let mut out = VPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(ctx2, m.clone(), f(c));
        }
        out
    }

    /// Ring-homomorphic substitution of every variable by a polynomial in a
    /// possibly different variable alphabet.
    pub fn substitute<V2, R>(&self, ctx: &R, f: impl Fn(&V) -> VPoly<V2, C>) -> VPoly<V2, C>
    where
        V2: Ord + Clone,
        R: CoeffRing<Elem = C>,
    {
        let mut out = VPoly::zero();
        for (m, c) in &self.terms {
            let mut term = VPoly::constant(ctx, c.clone());
            for (v, e) in m.factors() {
                term = term.mul(ctx, &f(v).pow(ctx, e));
            }
            out = out.add(ctx, &term);
        }
        out
    }

    /// Leibniz extension of a derivation: `dcoeff` acts on coefficients and
    /// every variable `v` maps to the variable `dvar(v)`.
    pub fn derive<R: CoeffRing<Elem = C>>(
        &self,
        ctx: &R,
        dcoeff: impl Fn(&C) -> C,
        dvar: impl Fn(&V) -> V,
    ) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(ctx, m.clone(), dcoeff(c));
            for (v, e) in m.factors() {
                let coeff = ctx.mul(c, &ctx.embed_u32(e));
                let mono = m.decrement(v).mul(&VMono::var(dvar(v)));
                out.add_term(ctx, mono, coeff);
            }
        }
        out
    }

    /// Leibniz extension of a derivation whose variable images are
    /// polynomials rather than single variables.
    pub fn derive_with<R: CoeffRing<Elem = C>>(
        &self,
        ctx: &R,
        dcoeff: impl Fn(&C) -> C,
        dvar: impl Fn(&V) -> VPoly<V, C>,
    ) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(ctx, m.clone(), dcoeff(c));
            for (v, e) in m.factors() {
                let coeff = ctx.mul(c, &ctx.embed_u32(e));
                let rest = Self::monomial(ctx, coeff, m.decrement(v));
                out = out.add(ctx, &rest.mul(ctx, &dvar(v)));
            }
        }
        out
    }

    /// Evaluate by substituting ring values for variables; the closure
    /// decides how (and whether) a variable gets a value.
    pub fn evaluate<R: CoeffRing<Elem = C>>(
        &self,
        ctx: &R,
        value: impl Fn(&V) -> Result<C>,
    ) -> Result<C> {
        let mut out = ctx.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.factors() {
                let val = value(v)?;
                for _ in 0..e {
                    term = ctx.mul(&term, &val);
                }
            }
            out = ctx.add(&out, &term);
        }
        Ok(out)
    }
}

fn check_derivation_index(base: &BaseField, k: usize) -> Result<()> {
    if k >= base.num_derivations() {
        return Err(Error::UnknownDerivation(format!("index {}", k)));
    }
    Ok(())
}

/// The natural derivation on `B{T}`: `t_theta -> t_{theta+e_k}` on
/// variables, `delta_k` on coefficients.
pub fn natural_derive_b(f: &DPolyB, ext: &Extension, k: usize) -> Result<DPolyB> {
    check_derivation_index(ext.base(), k)?;
    Ok(f.derive(
        ext,
        |c| ext.ext_delta_raw(c, k),
        |v| VarB::new(&v.name, v.theta.bump(k)),
    ))
}

/// The natural derivation on polynomials over the base field in descended
/// variables: `d_k` on coefficients, `theta -> theta+e_k` on variables.
/// This is the derivation of the geometric form, not the descent derivation.
pub fn natural_derive_a(g: &DPolyA, base: &BaseField, k: usize) -> Result<DPolyA> {
    check_derivation_index(base, k)?;
    Ok(g.derive(
        base,
        |c| base.derive(c, k),
        |v| VarA::new(&v.name, v.theta.bump(k), v.component),
    ))
}

/// Strict evaluation over `B`: the point assigns order-0 variables only,
/// and any variable of positive order is an error.
pub fn eval_b(f: &DPolyB, point: &IndexMap<String, ExtElem>, ext: &Extension) -> Result<ExtElem> {
    f.evaluate(ext, |v| {
        if !v.theta.is_zero() {
            return Err(Error::UnassignedVariable(v.to_string()));
        }
        point
            .get(&v.name)
            .cloned()
            .ok_or_else(|| Error::UnassignedVariable(v.to_string()))
    })
}

/// Differential evaluation over `B`: derivative variables take the
/// derivatives of the assigned order-0 values, `t_theta -> delta^theta(p)`.
pub fn eval_b_differential(
    f: &DPolyB,
    point: &IndexMap<String, ExtElem>,
    ext: &Extension,
) -> Result<ExtElem> {
    f.evaluate(ext, |v| {
        let mut val = point
            .get(&v.name)
            .cloned()
            .ok_or_else(|| Error::UnassignedVariable(v.to_string()))?;
        for (k, &e) in v.theta.0.iter().enumerate() {
            for _ in 0..e {
                val = ext.ext_delta_raw(&val, k);
            }
        }
        Ok(val)
    })
}

/// Strict evaluation over the base field at a point assigning each (name,
/// component) pair.
pub fn eval_a(
    g: &DPolyA,
    point: &IndexMap<(String, usize), BaseElem>,
    base: &BaseField,
) -> Result<BaseElem> {
    g.evaluate(base, |v| {
        if !v.theta.is_zero() {
            return Err(Error::UnassignedVariable(v.to_string()));
        }
        point
            .get(&(v.name.clone(), v.component))
            .cloned()
            .ok_or_else(|| Error::UnassignedVariable(v.to_string()))
    })
}

/// Differential evaluation over the base field: derivative variables take
/// iterated `d_k` of the assigned values.
pub fn eval_a_differential(
    g: &DPolyA,
    point: &IndexMap<(String, usize), BaseElem>,
    base: &BaseField,
) -> Result<BaseElem> {
    g.evaluate(base, |v| {
        let val = point
            .get(&(v.name.clone(), v.component))
            .cloned()
            .ok_or_else(|| Error::UnassignedVariable(v.to_string()))?;
        Ok(base.derive_multi(&val, &v.theta.0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::Frac;
    use crate::extension::tests::sqrt_t_ext;
    use crate::Rat;

    fn x0(ext: &Extension) -> DPolyB {
        DPolyB::var(ext, VarB::order0("x", ext.base().num_derivations()))
    }

    fn x_at(ext: &Extension, order: u32) -> DPolyB {
        DPolyB::var(ext, VarB::new("x", DerivIndex(vec![order])))
    }

    fn b_elem(ext: &Extension) -> ExtElem {
        ext.basis_elem(1).unwrap()
    }

    #[test]
    fn natural_derivation_on_variables() {
        let ext = sqrt_t_ext();
        let d = natural_derive_b(&x0(&ext), &ext, 0).unwrap();
        assert_eq!(d, x_at(&ext, 1));
    }

    #[test]
    fn natural_derivation_leibniz_with_coefficient() {
        let ext = sqrt_t_ext();
        // d(b*x) = delta(b)*x + b*x'
        let bx = x0(&ext).scale(&ext, &b_elem(&ext));
        let d = natural_derive_b(&bx, &ext, 0).unwrap();
        let delta_b = ext.ext_delta(&b_elem(&ext), 0).unwrap();
        let expect = x0(&ext)
            .scale(&ext, &delta_b)
            .add(&ext, &x_at(&ext, 1).scale(&ext, &b_elem(&ext)));
        assert_eq!(d, expect);
    }

    #[test]
    fn natural_derivation_on_square() {
        let ext = sqrt_t_ext();
        let x = x0(&ext);
        let d = natural_derive_b(&x.mul(&ext, &x), &ext, 0).unwrap();
        let expect = x.mul(&ext, &x_at(&ext, 1)).scale(&ext, &ext.embed_u32(2));
        assert_eq!(d, expect);
    }

    #[test]
    fn coefficient_products_reduce_through_the_table() {
        let ext = sqrt_t_ext();
        // (b*x) * (b*x) = t * x^2
        let bx = x0(&ext).scale(&ext, &b_elem(&ext));
        let sq = bx.mul(&ext, &bx);
        let t = ext.scalar_embed(&Frac::var(1, 0));
        let expect = x0(&ext).mul(&ext, &x0(&ext)).scale(&ext, &t);
        assert_eq!(sq, expect);
        // f + 0 = f
        assert_eq!(bx.add(&ext, &DPolyB::zero()), bx);
    }

    #[test]
    fn term_order_puts_higher_derivatives_first() {
        let ext = sqrt_t_ext();
        let half_t_inv = Frac::var(1, 0)
            .scale(&Rat::from_integer(2.into()))
            .inv()
            .unwrap();
        let f = x_at(&ext, 1).add(&ext, &x0(&ext).scale(&ext, &ext.scalar_embed(&half_t_inv)));
        let lead = f.terms_desc().next().unwrap();
        let (v, e) = lead.0.factors_desc().next().unwrap();
        assert_eq!((v.theta.order(), e), (1, 1));
    }

    #[test]
    fn strict_evaluation() {
        let ext = sqrt_t_ext();
        let t = ext.scalar_embed(&Frac::var(1, 0));
        // x^2 - t at x = b is zero
        let f = x0(&ext)
            .mul(&ext, &x0(&ext))
            .sub(&ext, &DPolyB::constant(&ext, t));
        let mut point = IndexMap::new();
        point.insert("x".to_string(), b_elem(&ext));
        assert!(eval_b(&f, &point, &ext).unwrap().is_zero());

        // b*x at x = 1 + b evaluates to b + b^2 = (t, 1)
        let bx = x0(&ext).scale(&ext, &b_elem(&ext));
        let mut point = IndexMap::new();
        point.insert("x".to_string(), ext.ext_add(&ext.one_elem(), &b_elem(&ext)));
        let val = eval_b(&bx, &point, &ext).unwrap();
        assert_eq!(val.coords, vec![Frac::var(1, 0), Frac::one(1)]);

        // missing names and positive-order variables are errors
        assert!(matches!(
            eval_b(&bx, &IndexMap::new(), &ext),
            Err(Error::UnassignedVariable(_))
        ));
        assert!(matches!(
            eval_b(&x_at(&ext, 1), &point, &ext),
            Err(Error::UnassignedVariable(_))
        ));
    }

    #[test]
    fn differential_evaluation_derives_the_point() {
        let ext = sqrt_t_ext();
        let mut point = IndexMap::new();
        point.insert("x".to_string(), b_elem(&ext));
        // x' at x = b gives delta(b) = (0, 1/(2t))
        let val = eval_b_differential(&x_at(&ext, 1), &point, &ext).unwrap();
        assert_eq!(val, ext.ext_delta(&b_elem(&ext), 0).unwrap());
    }

    #[test]
    fn derivation_rejects_bad_index() {
        let ext = sqrt_t_ext();
        assert!(matches!(
            natural_derive_b(&x0(&ext), &ext, 3),
            Err(Error::UnknownDerivation(_))
        ));
    }

    #[test]
    fn random_leibniz_and_additivity() {
        let ext = sqrt_t_ext();
        let mut rng = crate::sample::rng(0);
        for _ in 0..100 {
            let f = crate::sample::random_dpoly_b(&mut rng, &ext, &["x"], 2, 3, 3);
            let g = crate::sample::random_dpoly_b(&mut rng, &ext, &["x"], 2, 3, 3);
            let dfg = natural_derive_b(&f.mul(&ext, &g), &ext, 0).unwrap();
            let expect = natural_derive_b(&f, &ext, 0)
                .unwrap()
                .mul(&ext, &g)
                .add(&ext, &f.mul(&ext, &natural_derive_b(&g, &ext, 0).unwrap()));
            assert_eq!(dfg, expect);
            let dsum = natural_derive_b(&f.add(&ext, &g), &ext, 0).unwrap();
            let parts = natural_derive_b(&f, &ext, 0)
                .unwrap()
                .add(&ext, &natural_derive_b(&g, &ext, 0).unwrap());
            assert_eq!(dsum, parts);
        }
    }

    #[test]
    fn natural_derivations_commute_when_the_extension_does() {
        // Q(t, s) with partial derivations, b^2 = t (so delta_2(b) = 0).
        let mut base = BaseField::new(vec!["t".to_string(), "s".to_string()]);
        base.add_derivation("d1", vec![Frac::one(2), Frac::zero(2)])
            .unwrap();
        base.add_derivation("d2", vec![Frac::zero(2), Frac::one(2)])
            .unwrap();
        let minpoly = vec![Frac::var(2, 0).neg(), Frac::zero(2), Frac::one(2)];
        let ext = Extension::from_minpoly(base, "b", minpoly).unwrap();
        let mut rng = crate::sample::rng(1);
        for _ in 0..50 {
            let f = crate::sample::random_dpoly_b(&mut rng, &ext, &["x"], 2, 2, 3);
            let d12 = natural_derive_b(&natural_derive_b(&f, &ext, 0).unwrap(), &ext, 1).unwrap();
            let d21 = natural_derive_b(&natural_derive_b(&f, &ext, 1).unwrap(), &ext, 0).unwrap();
            assert_eq!(d12, d21);
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism() {
        let ext = sqrt_t_ext();
        let mut rng = crate::sample::rng(2);
        for _ in 0..50 {
            let f = crate::sample::random_dpoly_b_order0(&mut rng, &ext, &["x", "y"], 2, 3);
            let g = crate::sample::random_dpoly_b_order0(&mut rng, &ext, &["x", "y"], 2, 3);
            let point = crate::sample::random_bpoint(&mut rng, &ext, &["x", "y"]);
            let lhs = eval_b(&f.mul(&ext, &g), &point, &ext).unwrap();
            let rhs = ext.ext_mul(
                &eval_b(&f, &point, &ext).unwrap(),
                &eval_b(&g, &point, &ext).unwrap(),
            );
            assert_eq!(lhs, rhs);
        }
    }
}
