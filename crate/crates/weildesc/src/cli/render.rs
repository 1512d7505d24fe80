//! Deterministic text rendering of base elements and differential
//! polynomials, using the parser's grammar so that every emitted string
//! reparses to the value it came from.
//!
//! Terms print in descending monomial order, coefficients print in front
//! of their monomial, and parentheses are inserted exactly where the
//! left-associative grammar would otherwise regroup: around fractional or
//! signed coefficients and around multi-term denominators.

use num_traits::Signed;

use crate::diffpoly::{VPoly, VarA};
use crate::exact_arith::MPoly;
use crate::{BaseElem, BaseField, Rat};

fn render_scalar(r: &Rat) -> String {
    r.to_string()
}

fn render_mono(exps: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (j, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[j].clone()),
            _ => parts.push(format!("{}^{}", names[j], e)),
        }
    }
    parts.join("*")
}

fn render_mpoly(p: &MPoly<Rat>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, coeff)) in p.terms_desc().enumerate() {
        let negative = coeff.is_negative();
        let mag = if negative {
            -coeff.clone()
        } else {
            coeff.clone()
        };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let ms = render_mono(&mono.0, names);
        if ms.is_empty() {
            out.push_str(&render_scalar(&mag));
        } else if mag == Rat::from_integer(1.into()) {
            out.push_str(&ms);
        } else {
            out.push_str(&render_scalar(&mag));
            out.push('*');
            out.push_str(&ms);
        }
    }
    out
}

/// Render a base-field element. A non-trivial denominator is printed as a
/// quotient, parenthesized whenever the grammar would otherwise split it.
pub fn render_base(e: &BaseElem, base: &BaseField) -> String {
    let names = base.var_names();
    let ns = render_mpoly(e.num(), names);
    if e.den().is_one() {
        return ns;
    }
    let ds = render_mpoly(e.den(), names);
    let ns = if e.num().num_terms() > 1 {
        format!("({})", ns)
    } else {
        ns
    };
    let ds = if ds.contains(['+', '-', '*', '/']) {
        format!("({})", ds)
    } else {
        ds
    };
    format!("{}/{}", ns, ds)
}

fn sign_split(e: &BaseElem) -> (bool, BaseElem) {
    if e.num().leading_sign() < 0 {
        (true, e.neg())
    } else {
        (false, e.clone())
    }
}

/// Render a differential polynomial with base-field coefficients; `var`
/// supplies the variable spelling.
pub fn render_poly<V, F>(p: &VPoly<V, BaseElem>, base: &BaseField, var: F) -> String
where
    V: Ord + Clone + std::fmt::Debug,
    F: Fn(&V) -> String,
{
    let terms: Vec<_> = p.terms_desc().collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, coeff)) in terms.into_iter().enumerate() {
        let (negative, mag) = sign_split(coeff);
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let ms = mono
            .factors_desc()
            .map(|(v, e)| {
                if e == 1 {
                    var(v)
                } else {
                    format!("{}^{}", var(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        let cs = render_base(&mag, base);
        if ms.is_empty() {
            if negative && mag.den().is_one() && mag.num().num_terms() > 1 {
                out.push_str(&format!("({})", cs));
            } else {
                out.push_str(&cs);
            }
        } else if mag.is_one() {
            out.push_str(&ms);
        } else {
            if cs.contains(['+', '-', '/']) {
                out.push_str(&format!("({})", cs));
            } else {
                out.push_str(&cs);
            }
            out.push('*');
            out.push_str(&ms);
        }
    }
    out
}

/// The raw spelling of a descended variable: `name.component@theta`.
pub fn raw_var(v: &VarA) -> String {
    v.to_string()
}

/// The geometric spelling: `name_i` wrapped in derivation applications,
/// first declared derivation outermost.
pub fn geometric_var(v: &VarA, base: &BaseField) -> String {
    let mut s = format!("{}_{}", v.name, v.component);
    for k in (0..base.num_derivations()).rev() {
        for _ in 0..v.theta.0[k] {
            s = format!("{}({})", base.derivation_name(k), s);
        }
    }
    s
}

/// A polynomial as the left side of a vanishing equation.
pub fn render_equation<V, F>(p: &VPoly<V, BaseElem>, base: &BaseField, var: F) -> String
where
    V: Ord + Clone + std::fmt::Debug,
    F: Fn(&V) -> String,
{
    format!("{} = 0", render_poly(p, base, var))
}

/// Diagnostic form of a polynomial over `B`: coefficients print as
/// coordinate vectors. Used in check witnesses, not in machine output.
pub fn render_poly_b(p: &crate::diffpoly::DPolyB, ext: &crate::extension::Extension) -> String {
    let base = ext.base();
    let terms: Vec<_> = p.terms_desc().collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .into_iter()
        .map(|(mono, coeff)| {
            let cs = format!(
                "[{}]",
                coeff
                    .coords
                    .iter()
                    .map(|c| render_base(c, base))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let ms = mono
                .factors_desc()
                .map(|(v, e)| {
                    if e == 1 {
                        v.to_string()
                    } else {
                        format!("{}^{}", v, e)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            if ms.is_empty() {
                cs
            } else {
                format!("{}*{}", cs, ms)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
