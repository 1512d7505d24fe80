//! Lowering of expression ASTs into the algebra layers.
//!
//! Three contexts share the grammar: plain base-field elements, the
//! minimal polynomial of an extension (univariate over the base field in
//! the generator), and system equations (differential polynomials over
//! `B`). Division and negative powers are only defined by values that are
//! invertible in the respective ring, so the divisor must be free of
//! system variables and of the generator.

use crate::cli::parser::ExprAst;
use crate::diffpoly::{natural_derive_b, DPolyB, DerivIndex, VarB};
use crate::error::{Error, Result};
use crate::exact_arith::Frac;
use crate::extension::{ExtElem, Extension};
use crate::{BaseElem, BaseField};

/// Lower into a base-field element. Identifiers must be base variables;
/// derivation applications act by `base.derive`.
pub fn lower_base(ast: &ExprAst, base: &BaseField) -> Result<BaseElem> {
    let nvars = base.nvars();
    match ast {
        ExprAst::Number(r) => Ok(Frac::from_scalar(nvars, r.clone())),
        ExprAst::Var(name) => {
            let j = base.var_index(name).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "identifier '{}' is not a base variable in this context",
                    name
                ))
            })?;
            Ok(Frac::var(nvars, j))
        }
        ExprAst::Neg(a) => Ok(lower_base(a, base)?.neg()),
        ExprAst::Add(a, b) => Ok(lower_base(a, base)?.add(&lower_base(b, base)?)),
        ExprAst::Sub(a, b) => Ok(lower_base(a, base)?.sub(&lower_base(b, base)?)),
        ExprAst::Mul(a, b) => Ok(lower_base(a, base)?.mul(&lower_base(b, base)?)),
        ExprAst::Div(a, b) => lower_base(a, base)?.div(&lower_base(b, base)?),
        ExprAst::Pow(a, e) => lower_base(a, base)?.pow(*e),
        ExprAst::DApp(name, a) => {
            let k = base
                .derivation_index(name)
                .ok_or_else(|| Error::UnknownDerivation(name.clone()))?;
            Ok(base.derive(&lower_base(a, base)?, k))
        }
    }
}

/// Dense univariate polynomial over the base field, used only while
/// lowering a minimal polynomial.
#[derive(Debug, Clone, PartialEq)]
struct UPoly(Vec<BaseElem>);

impl UPoly {
    fn constant(c: BaseElem) -> Self {
        UPoly(vec![c])
    }

    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(BaseElem::is_zero) {
            self.0.pop();
        }
        self
    }

    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let nvars = self.0[0].nvars();
        let mut out = vec![BaseElem::zero(nvars); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] = out[i].add(c);
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] = out[i].add(c);
        }
        UPoly(out).trim()
    }

    fn neg(&self) -> Self {
        UPoly(self.0.iter().map(BaseElem::neg).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let nvars = self.0[0].nvars();
        let mut out = vec![BaseElem::zero(nvars); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly(out).trim()
    }

    fn scale(&self, c: &BaseElem) -> Self {
        UPoly(self.0.iter().map(|a| a.mul(c)).collect()).trim()
    }
}

fn lower_upoly(ast: &ExprAst, base: &BaseField, gen: &str) -> Result<UPoly> {
    let nvars = base.nvars();
    match ast {
        ExprAst::Var(name) if name == gen => Ok(UPoly(vec![Frac::zero(nvars), Frac::one(nvars)])),
        ExprAst::Neg(a) => Ok(lower_upoly(a, base, gen)?.neg()),
        ExprAst::Add(a, b) => Ok(lower_upoly(a, base, gen)?.add(&lower_upoly(b, base, gen)?)),
        ExprAst::Sub(a, b) => Ok(lower_upoly(a, base, gen)?.add(&lower_upoly(b, base, gen)?.neg())),
        ExprAst::Mul(a, b) => Ok(lower_upoly(a, base, gen)?.mul(&lower_upoly(b, base, gen)?)),
        ExprAst::Div(a, b) => {
            let divisor = lower_upoly(b, base, gen)?;
            if divisor.degree() > 0 {
                return Err(Error::DivisionByVariable);
            }
            let inv = Frac::one(nvars).div(&divisor.0[0])?;
            Ok(lower_upoly(a, base, gen)?.scale(&inv))
        }
        ExprAst::Pow(a, e) => {
            let p = lower_upoly(a, base, gen)?;
            if *e < 0 {
                if p.degree() > 0 {
                    return Err(Error::DivisionByVariable);
                }
                return Ok(UPoly::constant(p.0[0].pow(*e)?));
            }
            let mut out = UPoly::constant(Frac::one(nvars));
            for _ in 0..*e {
                out = out.mul(&p);
            }
            Ok(out)
        }
        ExprAst::DApp(name, a) => {
            let p = lower_upoly(a, base, gen)?;
            if p.degree() > 0 {
                return Err(Error::InvalidInput(format!(
                    "a derivation cannot be applied to the generator '{}' in a minimal polynomial",
                    gen
                )));
            }
            let k = base
                .derivation_index(name)
                .ok_or_else(|| Error::UnknownDerivation(name.clone()))?;
            Ok(UPoly::constant(base.derive(&p.0[0], k)))
        }
        other => Ok(UPoly::constant(lower_base(other, base)?)),
    }
}

/// Lower a minimal-polynomial expression to its coefficient vector, from
/// the constant term up.
pub fn lower_minpoly(ast: &ExprAst, base: &BaseField, gen: &str) -> Result<Vec<BaseElem>> {
    Ok(lower_upoly(ast, base, gen)?.0)
}

/// Lower into a differential polynomial over `B`. System variables become
/// order-0 differential variables; base variables, the generator, and
/// basis names become coefficients; derivation applications use the
/// natural derivation of `B{x}`.
pub fn lower_eq(ast: &ExprAst, ext: &Extension, system_vars: &[String]) -> Result<DPolyB> {
    let base = ext.base();
    let m = base.num_derivations();
    match ast {
        ExprAst::Number(r) => Ok(DPolyB::constant(
            ext,
            ext.scalar_embed(&Frac::from_scalar(base.nvars(), r.clone())),
        )),
        ExprAst::Var(name) => {
            if system_vars.iter().any(|v| v == name) {
                return Ok(DPolyB::var(ext, VarB::new(name, DerivIndex::zero(m))));
            }
            if let Some(j) = base.var_index(name) {
                return Ok(DPolyB::constant(
                    ext,
                    ext.scalar_embed(&Frac::var(base.nvars(), j)),
                ));
            }
            if let Some((gen, coords)) = ext.generator() {
                if gen == name {
                    return Ok(DPolyB::constant(ext, ExtElem::new(coords.to_vec())));
                }
            }
            if let Some(i) = ext.basis_names().iter().position(|b| b == name) {
                return Ok(DPolyB::constant(ext, ext.basis_elem(i)?));
            }
            Err(Error::InvalidInput(format!(
                "identifier '{}' cannot be used in an equation",
                name
            )))
        }
        ExprAst::Neg(a) => Ok(lower_eq(a, ext, system_vars)?.neg(ext)),
        ExprAst::Add(a, b) => {
            Ok(lower_eq(a, ext, system_vars)?.add(ext, &lower_eq(b, ext, system_vars)?))
        }
        ExprAst::Sub(a, b) => {
            Ok(lower_eq(a, ext, system_vars)?.sub(ext, &lower_eq(b, ext, system_vars)?))
        }
        ExprAst::Mul(a, b) => {
            Ok(lower_eq(a, ext, system_vars)?.mul(ext, &lower_eq(b, ext, system_vars)?))
        }
        ExprAst::Div(a, b) => {
            let divisor = constant_of(lower_eq(b, ext, system_vars)?, ext)?;
            if divisor.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let inv = ext.ext_inv(&divisor)?;
            Ok(lower_eq(a, ext, system_vars)?.scale(ext, &inv))
        }
        ExprAst::Pow(a, e) => {
            let p = lower_eq(a, ext, system_vars)?;
            if *e < 0 {
                let c = constant_of(p, ext)?;
                if c.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let inv = ext.ext_inv(&c)?;
                return Ok(DPolyB::constant(ext, ext.ext_pow(&inv, (-e) as u32)));
            }
            Ok(p.pow(ext, *e as u32))
        }
        ExprAst::DApp(name, a) => {
            let k = base
                .derivation_index(name)
                .ok_or_else(|| Error::UnknownDerivation(name.clone()))?;
            natural_derive_b(&lower_eq(a, ext, system_vars)?, ext, k)
        }
    }
}

fn constant_of(p: DPolyB, ext: &Extension) -> Result<ExtElem> {
    if !p.variables().is_empty() {
        return Err(Error::DivisionByVariable);
    }
    Ok(p.constant_value(ext).unwrap_or_else(|| ext.zero_elem()))
}

/// Lower an expression to a single element of `B`, for point coordinates.
pub fn lower_ext_value(ast: &ExprAst, ext: &Extension) -> Result<ExtElem> {
    constant_of(lower_eq(ast, ext, &[])?, ext)
}
