//! The descent engine.
//!
//! `unit_expand` rewrites a differential polynomial over `B` into its
//! basis components over the base field by substituting every variable
//! `t_theta` with the linear form `sum_i t_theta(i) * b_i` and splitting
//! coordinates. The descent derivation acts on the component variables by
//!
//! ```text
//! dW_k(t_theta(i)) = t_{theta+e_k}(i) - sum_j Delta_k[i][j] * t_theta(j)
//! ```
//!
//! which is exactly the rule that makes the unit map differential: deriving
//! first and expanding equals expanding first and applying `dW_k`. That
//! identity, the Lie bracket and linearity laws, the counit, morphism
//! descent and the geometric rewriting of the output all live here.

use std::collections::BTreeMap;

use indexmap::IndexMap;

use crate::diffpoly::{
    natural_derive_a, natural_derive_b, DPolyA, DPolyB, DPolyBase, DerivIndex, VPoly, VarA, VarB,
};
use crate::error::{Error, Result};
use crate::extension::{ExtElem, Extension};
use crate::BaseElem;

/// Polynomial in descended variables with coefficients still in `B`; the
/// intermediate form between substitution and coordinate splitting.
type WPoly = VPoly<VarA, ExtElem>;

fn check_derivation(ext: &Extension, k: usize) -> Result<()> {
    if k >= ext.base().num_derivations() {
        return Err(Error::UnknownDerivation(format!("index {}", k)));
    }
    Ok(())
}

fn check_component(ext: &Extension, i: usize) -> Result<()> {
    if i == 0 || i > ext.ell() {
        return Err(Error::IndexOutOfRange(i));
    }
    Ok(())
}

/// The linear form `sum_i t_theta(i) * b_i` replacing a variable over `B`.
fn unit_variable(ext: &Extension, v: &VarB) -> WPoly {
    let mut out = WPoly::zero();
    for i in 1..=ext.ell() {
        let basis = ext.basis_elem(i - 1).expect("basis index in range");
        let var = WPoly::var(ext, VarA::new(&v.name, v.theta.clone(), i));
        out = out.add(ext, &var.scale(ext, &basis));
    }
    out
}

/// Split a `B`-coefficient polynomial in descended variables into its `l`
/// coordinate components.
fn split_components(w: &WPoly, ext: &Extension) -> Vec<DPolyA> {
    let base = ext.base();
    (0..ext.ell())
        .map(|i| w.map_coeffs(base, |c: &ExtElem| c.coords[i].clone()))
        .collect()
}

/// Expand `f` through the unit map: substitute `t_theta -> sum_i
/// t_theta(i) * b_i`, reduce coefficients through the multiplication table
/// and return the `l` coordinate components.
pub fn unit_expand(f: &DPolyB, ext: &Extension) -> Vec<DPolyA> {
    let mut images: BTreeMap<VarB, WPoly> = BTreeMap::new();
    for v in f.variables() {
        let img = unit_variable(ext, &v);
        images.insert(v, img);
    }
    let w = f.substitute(ext, |v| images[v].clone());
    split_components(&w, ext)
}

/// The closed form of the descent derivation on one variable:
/// `t_{theta+e_k}(i) - sum_j Delta_k[i][j] * t_theta(j)`.
pub fn descent_derivation_var(
    ext: &Extension,
    name: &str,
    theta: &DerivIndex,
    i: usize,
    k: usize,
) -> Result<DPolyA> {
    check_derivation(ext, k)?;
    check_component(ext, i)?;
    let base = ext.base();
    let mut out = DPolyA::var(base, VarA::new(name, theta.bump(k), i));
    let delta = ext.delta_matrix(k);
    for j in 1..=ext.ell() {
        let coeff = &delta[i - 1][j - 1];
        if coeff.is_zero() {
            continue;
        }
        let term = DPolyA::var(base, VarA::new(name, theta.clone(), j)).scale(base, coeff);
        out = out.sub(base, &term);
    }
    Ok(out)
}

/// Apply the descent derivation `dW_k` to a polynomial: `d_k` on
/// coefficients, the closed form above on variables, extended by Leibniz.
pub fn apply_descent_derivation(g: &DPolyA, ext: &Extension, k: usize) -> Result<DPolyA> {
    check_derivation(ext, k)?;
    let base = ext.base();
    Ok(g.derive_with(
        base,
        |c| base.derive(c, k),
        |v| {
            descent_derivation_var(ext, &v.name, &v.theta, v.component, k)
                .expect("variable indices are valid")
        },
    ))
}

/// One descended generator: component `component` of input equation
/// `equation` (both 1-based).
#[derive(Debug, Clone)]
pub struct GeneratorEntry {
    pub equation: usize,
    pub component: usize,
    pub poly: DPolyA,
}

/// One row of the descent derivation table: `dW(var) = value` for the
/// derivation with the given index.
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub derivation: usize,
    pub var: VarA,
    pub value: DPolyA,
}

/// A descended system: the component generators of the input equations
/// plus the closed-form derivation table that generates the rest of the
/// differential ideal.
#[derive(Debug, Clone)]
pub struct DescendedSystem {
    pub extension: Extension,
    pub input_vars: Vec<String>,
    pub inputs: Vec<DPolyB>,
    pub generators: Vec<GeneratorEntry>,
    pub derivation_table: Vec<TableEntry>,
}

/// All multi-indices over `m` slots with total order at most `max_order`,
/// in ascending canonical order.
pub fn enumerate_indices(m: usize, max_order: u32) -> Vec<DerivIndex> {
    fn rec(m: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<DerivIndex>) {
        if prefix.len() == m {
            out.push(DerivIndex(prefix.clone()));
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(m, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, max_order, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Descend a system of equations over `B`. `var_names` lists the declared
/// system variables; every variable occurring in the equations must be
/// declared. The derivation table covers all indices up to one order above
/// the highest derivative present.
pub fn descend_system(
    fs: &[DPolyB],
    ext: &Extension,
    var_names: &[String],
) -> Result<DescendedSystem> {
    let m = ext.base().num_derivations();
    let mut max_order = 0;
    for f in fs {
        for v in f.variables() {
            if !var_names.contains(&v.name) {
                return Err(Error::InvalidInput(format!(
                    "equation uses undeclared variable {}",
                    v.name
                )));
            }
            max_order = max_order.max(v.theta.order());
        }
    }

    let mut generators = Vec::new();
    for (e, f) in fs.iter().enumerate() {
        for (c, poly) in unit_expand(f, ext).into_iter().enumerate() {
            generators.push(GeneratorEntry {
                equation: e + 1,
                component: c + 1,
                poly,
            });
        }
    }

    let mut derivation_table = Vec::new();
    for k in 0..m {
        for name in var_names {
            for theta in enumerate_indices(m, max_order + 1) {
                for i in 1..=ext.ell() {
                    let var = VarA::new(name, theta.clone(), i);
                    let value = descent_derivation_var(ext, name, &theta, i, k)?;
                    derivation_table.push(TableEntry {
                        derivation: k,
                        var,
                        value,
                    });
                }
            }
        }
    }

    Ok(DescendedSystem {
        extension: ext.clone(),
        input_vars: var_names.to_vec(),
        inputs: fs.to_vec(),
        generators,
        derivation_table,
    })
}

/// One bump step of the geometric rewrite: given the images of all
/// components at `theta`, produce the images at `theta + e_k`.
fn geometric_step(ext: &Extension, prev: &[DPolyA], k: usize) -> Vec<DPolyA> {
    let base = ext.base();
    let delta = ext.delta_matrix(k);
    (0..ext.ell())
        .map(|i| {
            let mut out = natural_derive_a(&prev[i], base, k).expect("derivation index is valid");
            for (j, p) in prev.iter().enumerate() {
                if delta[i][j].is_zero() {
                    continue;
                }
                out = out.add(base, &p.scale(base, &delta[i][j]));
            }
            out
        })
        .collect()
}

fn geometric_components(
    ext: &Extension,
    name: &str,
    theta: &DerivIndex,
    memo: &mut BTreeMap<(String, DerivIndex), Vec<DPolyA>>,
) -> Vec<DPolyA> {
    let key = (name.to_string(), theta.clone());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let result = match theta.0.iter().position(|&e| e > 0) {
        None => (1..=ext.ell())
            .map(|i| DPolyA::var(ext.base(), VarA::new(name, theta.clone(), i)))
            .collect(),
        Some(k) => {
            let mut prev_theta = theta.clone();
            prev_theta.0[k] -= 1;
            let prev = geometric_components(ext, name, &prev_theta, memo);
            geometric_step(ext, &prev, k)
        }
    };
    memo.insert(key, result.clone());
    result
}

/// The geometric images of all components of `name` after applying the
/// bumps in `path` order; used to confirm the rewrite is path-independent.
pub fn geometric_components_along(ext: &Extension, name: &str, path: &[usize]) -> Vec<DPolyA> {
    let m = ext.base().num_derivations();
    let mut cur: Vec<DPolyA> = (1..=ext.ell())
        .map(|i| DPolyA::var(ext.base(), VarA::new(name, DerivIndex::zero(m), i)))
        .collect();
    for &k in path {
        cur = geometric_step(ext, &cur, k);
    }
    cur
}

/// The coordinate matrix of `[delta_{k1}, delta_{k2}]` on the basis.
fn bracket_delta_matrix(ext: &Extension, k1: usize, k2: usize) -> Vec<Vec<BaseElem>> {
    let base = ext.base();
    let ell = ext.ell();
    let d1 = ext.delta_matrix(k1);
    let d2 = ext.delta_matrix(k2);
    let mut out = vec![vec![base.zero(); ell]; ell];
    for i in 0..ell {
        for j in 0..ell {
            let mut e = base.derive(&d2[i][j], k1).sub(&base.derive(&d1[i][j], k2));
            for l in 0..ell {
                e = e.add(&d1[i][l].mul(&d2[l][j]));
                e = e.sub(&d2[i][l].mul(&d1[l][j]));
            }
            out[i][j] = e;
        }
    }
    out
}

/// Require every pair of derivations to commute both on the base field and
/// on the extension's basis.
pub fn check_commuting_family(ext: &Extension) -> Result<()> {
    ext.base().check_commutation()?;
    let m = ext.base().num_derivations();
    for k1 in 0..m {
        for k2 in (k1 + 1)..m {
            let bracket = bracket_delta_matrix(ext, k1, k2);
            if bracket.iter().flatten().any(|e| !e.is_zero()) {
                return Err(Error::NonCommutingDerivations(format!(
                    "[{}, {}] does not vanish on the basis of the extension",
                    ext.base().derivation_name(k1),
                    ext.base().derivation_name(k2)
                )));
            }
        }
    }
    Ok(())
}

/// Rewrite the descended system into differential equations over the base
/// field in the component variables: each derivative-component variable
/// `t_{theta+e_k}(i)` is eliminated through
/// `d_k(G(t_theta(i))) + sum_j Delta_k[i][j] * G(t_theta(j))`.
pub fn to_geometric_form(sys: &DescendedSystem) -> Result<Vec<DPolyA>> {
    let polys: Vec<DPolyA> = sys.generators.iter().map(|g| g.poly.clone()).collect();
    to_geometric_polys(&sys.extension, &polys)
}

/// The same rewrite on a bare list of descended polynomials.
pub fn to_geometric_polys(ext: &Extension, polys: &[DPolyA]) -> Result<Vec<DPolyA>> {
    check_commuting_family(ext)?;
    let base = ext.base();
    let mut memo = BTreeMap::new();
    let mut out = Vec::with_capacity(polys.len());
    for poly in polys {
        let mut images: BTreeMap<VarA, DPolyA> = BTreeMap::new();
        for v in poly.variables() {
            let comps = geometric_components(ext, &v.name, &v.theta, &mut memo);
            images.insert(v.clone(), comps[v.component - 1].clone());
        }
        out.push(poly.substitute(base, |v| images[v].clone()));
    }
    Ok(out)
}

/// Verify the prolongation identity for `f` and derivation `k` with an
/// explicit coefficient matrix in place of `Delta_k`; `None` means the
/// identity holds, otherwise a witness describes the first mismatch.
/// Passing anything other than the delta matrix is expected to fail and
/// serves as a negative control.
pub fn check_prolongation_identity_with_coeffs(
    f: &DPolyB,
    ext: &Extension,
    k: usize,
    coeffs: &[Vec<BaseElem>],
) -> Result<Option<String>> {
    check_derivation(ext, k)?;
    let base = ext.base();
    let g = unit_expand(f, ext);
    let lhs = unit_expand(&natural_derive_b(f, ext, k)?, ext);
    for i in 0..ext.ell() {
        let mut rhs = apply_descent_derivation(&g[i], ext, k)?;
        for (j, gj) in g.iter().enumerate() {
            if coeffs[i][j].is_zero() {
                continue;
            }
            rhs = rhs.add(base, &gj.scale(base, &coeffs[i][j]));
        }
        if lhs[i] != rhs {
            return Ok(Some(format!(
                "component {}: expanding the derivative differs from deriving the expansion",
                i + 1
            )));
        }
    }
    Ok(None)
}

/// The commuting-square law of the unit map: expanding `delta_k(f)` equals
/// applying `dW_k` to the expansion, component by component:
/// `unit_expand(delta_k f)_i = dW_k(g_i) + sum_j Delta_k[i][j] * g_j`.
pub fn check_prolongation_identity(
    f: &DPolyB,
    ext: &Extension,
    k: usize,
) -> Result<Option<String>> {
    check_derivation(ext, k)?;
    check_prolongation_identity_with_coeffs(f, ext, k, ext.delta_matrix(k))
}

/// Check `[dW_{k1}, dW_{k2}](sample) = sum_k a_k * dW_k(sample)`, where the
/// `a_k` are supplied Lie structure coefficients (`None` for the commuting
/// case `a = 0`). The coefficients must first reproduce the bracket on the
/// base variables and on the basis of `B`, otherwise the bracket is not
/// expressible in the declared family.
pub fn check_bracket(
    ext: &Extension,
    k1: usize,
    k2: usize,
    sample: &DPolyA,
    structure_coeffs: Option<&[BaseElem]>,
) -> Result<bool> {
    check_derivation(ext, k1)?;
    check_derivation(ext, k2)?;
    let base = ext.base();
    let m = base.num_derivations();
    if let Some(a) = structure_coeffs {
        if a.len() != m {
            return Err(Error::BracketNotInFamily(format!(
                "expected {} structure coefficients, got {}",
                m,
                a.len()
            )));
        }
    }

    // The bracket on the base field, tested on the variables.
    for j in 0..base.nvars() {
        let v = base.var(j);
        let mut lhs = base.derive(&base.derive(&v, k2), k1);
        lhs = lhs.sub(&base.derive(&base.derive(&v, k1), k2));
        let mut rhs = base.zero();
        if let Some(a) = structure_coeffs {
            for (k, ak) in a.iter().enumerate() {
                rhs = rhs.add(&ak.mul(&base.derive(&v, k)));
            }
        }
        if lhs != rhs {
            return Err(Error::BracketNotInFamily(format!(
                "bracket on base variable {} is not the supplied combination",
                base.var_names()[j]
            )));
        }
    }

    // The bracket on B, tested entrywise on the derivation matrices.
    let bracket = bracket_delta_matrix(ext, k1, k2);
    for i in 0..ext.ell() {
        for j in 0..ext.ell() {
            let mut rhs = base.zero();
            if let Some(a) = structure_coeffs {
                for (k, ak) in a.iter().enumerate() {
                    rhs = rhs.add(&ak.mul(&ext.delta_matrix(k)[i][j]));
                }
            }
            if bracket[i][j] != rhs {
                return Err(Error::BracketNotInFamily(format!(
                    "bracket on basis element {} is not the supplied combination",
                    ext.basis_names()[j]
                )));
            }
        }
    }

    let lhs = apply_descent_derivation(&apply_descent_derivation(sample, ext, k2)?, ext, k1)?.sub(
        base,
        &apply_descent_derivation(&apply_descent_derivation(sample, ext, k1)?, ext, k2)?,
    );
    let mut rhs = DPolyA::zero();
    if let Some(a) = structure_coeffs {
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            rhs = rhs.add(
                base,
                &apply_descent_derivation(sample, ext, k)?.scale(base, ak),
            );
        }
    }
    Ok(lhs == rhs)
}

/// Check the A-linearity law `(a1 d_{k1} + a2 d_{k2})^W = a1 dW_{k1} + a2
/// dW_{k2}` on one sample polynomial.
pub fn check_linearity(
    ext: &Extension,
    a1: &BaseElem,
    a2: &BaseElem,
    k1: usize,
    k2: usize,
    sample: &DPolyA,
) -> Result<bool> {
    check_derivation(ext, k1)?;
    check_derivation(ext, k2)?;
    let base = ext.base();
    let lhs = sample.derive_with(
        base,
        |c| {
            a1.mul(&base.derive(c, k1))
                .add(&a2.mul(&base.derive(c, k2)))
        },
        |v| {
            let d1 = descent_derivation_var(ext, &v.name, &v.theta, v.component, k1)
                .expect("variable indices are valid");
            let d2 = descent_derivation_var(ext, &v.name, &v.theta, v.component, k2)
                .expect("variable indices are valid");
            d1.scale(base, a1).add(base, &d2.scale(base, a2))
        },
    );
    let rhs = apply_descent_derivation(sample, ext, k1)?
        .scale(base, a1)
        .add(
            base,
            &apply_descent_derivation(sample, ext, k2)?.scale(base, a2),
        );
    Ok(lhs == rhs)
}

/// The counit: substitute `t_theta(i) -> u_i * t_theta`, collapsing the
/// descended variables back to plain ones over the base field.
pub fn counit_poly(g: &DPolyA, ext: &Extension) -> DPolyBase {
    let base = ext.base();
    g.substitute(base, |v| {
        let u = &ext.unit_coords()[v.component - 1];
        DPolyBase::var(base, VarB::new(&v.name, v.theta.clone())).scale(base, u)
    })
}

/// The image of one descended variable under the descent of a morphism
/// given by `images` on the order-0 variables over `B`: derive the image
/// `theta` times, expand, take component `i`.
pub fn morphism_image(
    images: &IndexMap<String, DPolyB>,
    ext: &Extension,
    v: &VarA,
) -> Result<DPolyA> {
    check_component(ext, v.component)?;
    let mut f = images
        .get(&v.name)
        .cloned()
        .ok_or_else(|| Error::UnassignedVariable(v.name.clone()))?;
    for (k, &e) in v.theta.0.iter().enumerate() {
        for _ in 0..e {
            f = natural_derive_b(&f, ext, k)?;
        }
    }
    Ok(unit_expand(&f, ext).swap_remove(v.component - 1))
}

/// Descend a morphism: the substitution map on all requested descended
/// variables.
pub fn descend_morphism(
    images: &IndexMap<String, DPolyB>,
    ext: &Extension,
    targets: &[VarA],
) -> Result<IndexMap<VarA, DPolyA>> {
    let mut out = IndexMap::new();
    for v in targets {
        out.insert(v.clone(), morphism_image(images, ext, v)?);
    }
    Ok(out)
}

/// Independent oracle for the geometric form: substitute each variable
/// `t_theta` by `delta^theta(sum_i y_i * b_i)` computed inside the
/// differential polynomial ring over `B` (coefficients derive through
/// `delta`, component variables through the natural derivation), then take
/// basis coordinates.
pub fn oracle_geometric(f: &DPolyB, ext: &Extension) -> Vec<DPolyA> {
    let m = ext.base().num_derivations();
    let mut memo: BTreeMap<(String, DerivIndex), WPoly> = BTreeMap::new();
    let mut images: BTreeMap<VarB, WPoly> = BTreeMap::new();
    for v in f.variables() {
        let img = oracle_form(ext, m, &v.name, &v.theta, &mut memo);
        images.insert(v, img);
    }
    let h = f.substitute(ext, |v| images[v].clone());
    split_components(&h, ext)
}

fn oracle_form(
    ext: &Extension,
    m: usize,
    name: &str,
    theta: &DerivIndex,
    memo: &mut BTreeMap<(String, DerivIndex), WPoly>,
) -> WPoly {
    let key = (name.to_string(), theta.clone());
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let result = match theta.0.iter().position(|&e| e > 0) {
        None => unit_variable(ext, &VarB::new(name, DerivIndex::zero(m))),
        Some(k) => {
            let mut prev_theta = theta.clone();
            prev_theta.0[k] -= 1;
            let prev = oracle_form(ext, m, name, &prev_theta, memo);
            prev.derive(
                ext,
                |c| ext.ext_delta_raw(c, k),
                |v| VarA::new(&v.name, v.theta.bump(k), v.component),
            )
        }
    };
    memo.insert(key, result.clone());
    result
}

/// Components of the prolongation `delta^alpha(f)`, for the `--prolong`
/// convenience output.
pub fn prolong_components(f: &DPolyB, ext: &Extension, alpha: &DerivIndex) -> Result<Vec<DPolyA>> {
    let mut g = f.clone();
    for (k, &e) in alpha.0.iter().enumerate() {
        for _ in 0..e {
            g = natural_derive_b(&g, ext, k)?;
        }
    }
    Ok(unit_expand(&g, ext))
}
