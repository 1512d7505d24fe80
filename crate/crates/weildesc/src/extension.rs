//! The finite free differential ring extension `B / A`.
//!
//! `B` is presented by its multiplication table over the base field: a
//! basis `b_1, ..., b_l`, structure constants with `b_i * b_j = sum_k
//! c[i][j][k] * b_k`, the coordinates of the unit, and one derivation
//! matrix per base derivation with `Delta[k][i][j] = lambda_i(delta_k(b_j))`
//! where `lambda_1, ..., lambda_l` is the dual basis. Elements are their
//! coordinate vectors; all operations take the extension as context.
//!
//! A table can also be produced from a monic separable minimal polynomial
//! `p`, presenting `B = A[X]/(p)` with the power basis. The derivative of
//! the generator is then forced by `0 = delta(p(X)) = p^delta(X) +
//! p'(X) * delta(X)`, so `delta(X) = -p^delta(X) / p'(X) mod p`, where
//! `p^delta` applies the base derivation to the coefficients.

use crate::error::{Error, Result};
use crate::{BaseElem, BaseField};

/// An element of `B`, stored as its coordinates in the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElem {
    pub coords: Vec<BaseElem>,
}

impl ExtElem {
    pub fn new(coords: Vec<BaseElem>) -> Self {
        ExtElem { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(BaseElem::is_zero)
    }
}

/// Outcome of checking the algebra invariants: one entry per invariant,
/// with a witness describing the first violation found.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub entries: Vec<(String, Option<String>)>,
}

impl ValidationReport {
    fn push(&mut self, invariant: &str, witness: Option<String>) {
        self.entries.push((invariant.to_string(), witness));
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|(_, w)| w.is_none())
    }

    pub fn first_failure(&self) -> Option<(&str, &str)> {
        self.entries
            .iter()
            .find_map(|(inv, w)| w.as_ref().map(|w| (inv.as_str(), w.as_str())))
    }
}

/// The extension `B / A` as a differential algebra presentation.
#[derive(Debug, Clone)]
pub struct Extension {
    base: BaseField,
    basis_names: Vec<String>,
    /// `struct_consts[i][j]` holds the coordinates of `b_i * b_j`.
    struct_consts: Vec<Vec<Vec<BaseElem>>>,
    unit_coords: Vec<BaseElem>,
    /// One matrix per base derivation; entry `[i][j]` is
    /// `lambda_i(delta_k(b_j))`.
    deriv_matrices: Vec<Vec<Vec<BaseElem>>>,
    /// Generator name and coordinates when built from a minimal polynomial.
    generator: Option<(String, Vec<BaseElem>)>,
}

impl Extension {
    /// Build an extension from an explicit multiplication table, validating
    /// the algebra and derivation axioms.
    pub fn from_table(
        base: BaseField,
        basis_names: Vec<String>,
        struct_consts: Vec<Vec<Vec<BaseElem>>>,
        unit_coords: Vec<BaseElem>,
        deriv_matrices: Vec<Vec<Vec<BaseElem>>>,
    ) -> Result<Self> {
        let ext = Self::from_table_raw(
            base,
            basis_names,
            struct_consts,
            unit_coords,
            deriv_matrices,
        )?;
        ext.validate()?;
        Ok(ext)
    }

    /// Build from a table checking dimensions only, leaving the algebra and
    /// derivation axioms to a later `validate_extension` report. This lets
    /// a checker present axiom violations as findings instead of refusing
    /// the input outright.
    pub fn from_table_raw(
        base: BaseField,
        basis_names: Vec<String>,
        struct_consts: Vec<Vec<Vec<BaseElem>>>,
        unit_coords: Vec<BaseElem>,
        deriv_matrices: Vec<Vec<Vec<BaseElem>>>,
    ) -> Result<Self> {
        let ext = Extension {
            base,
            basis_names,
            struct_consts,
            unit_coords,
            deriv_matrices,
            generator: None,
        };
        ext.check_dimensions()?;
        Ok(ext)
    }

    /// Build `B = A[X]/(p)` for a monic separable `p`, with the power basis
    /// `1, X, ..., X^{l-1}`. `minpoly` lists the coefficients of `p` from
    /// the constant term up, including the leading 1.
    pub fn from_minpoly(base: BaseField, gen_name: &str, minpoly: Vec<BaseElem>) -> Result<Self> {
        let minpoly = upoly_trim(minpoly);
        let ell = minpoly.len().saturating_sub(1);
        if ell == 0 {
            return Err(Error::InvalidInput(
                "minimal polynomial must have positive degree".to_string(),
            ));
        }
        if !minpoly[ell].is_one() {
            return Err(Error::NotMonic);
        }
        let nvars = base.nvars();
        let zero = BaseElem::zero(nvars);

        // p' and its inverse mod p; a common factor means p is inseparable.
        let deriv: Vec<BaseElem> = (1..=ell)
            .map(|i| minpoly[i].scale(&crate::Rat::from_integer(i.into())))
            .collect();
        let inv_deriv = upoly_inverse_mod(&deriv, &minpoly).ok_or(Error::NotSeparable)?;

        let basis_names: Vec<String> = (0..ell)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => gen_name.to_string(),
                _ => format!("{}^{}", gen_name, i),
            })
            .collect();

        // Structure constants: X^{i+j} mod p in the power basis.
        let mut powers: Vec<Vec<BaseElem>> = Vec::with_capacity(2 * ell - 1);
        let mut cur = vec![BaseElem::one(nvars)];
        powers.push(cur.clone());
        for _ in 1..(2 * ell - 1) {
            cur = upoly_rem(&upoly_shift(&cur, nvars), &minpoly);
            powers.push(cur.clone());
        }
        let pad = |p: &[BaseElem]| -> Vec<BaseElem> {
            let mut v = p.to_vec();
            v.resize(ell, zero.clone());
            v
        };
        let struct_consts: Vec<Vec<Vec<BaseElem>>> = (0..ell)
            .map(|i| (0..ell).map(|j| pad(&powers[i + j])).collect())
            .collect();

        let mut unit_coords = vec![zero.clone(); ell];
        unit_coords[0] = BaseElem::one(nvars);

        // delta_k(X) = -p^{d_k}(X) * p'(X)^{-1} mod p, and delta_k(X^j) =
        // j X^{j-1} delta_k(X) mod p fills column j of the matrix.
        let mut deriv_matrices = Vec::with_capacity(base.num_derivations());
        for k in 0..base.num_derivations() {
            let p_derived: Vec<BaseElem> = minpoly.iter().map(|c| base.derive(c, k)).collect();
            let delta_x = upoly_rem(
                &upoly_mul(&upoly_neg(&p_derived), &inv_deriv, nvars),
                &minpoly,
            );
            let mut matrix = vec![vec![zero.clone(); ell]; ell];
            for j in 1..ell {
                // j * X^{j-1} * delta(X) mod p
                let mut col = upoly_scale(
                    &upoly_mul(&powers[j - 1], &delta_x, nvars),
                    &BaseElem::from_int(nvars, j as i64),
                );
                col = upoly_rem(&col, &minpoly);
                let col = pad(&col);
                for (i, c) in col.into_iter().enumerate() {
                    matrix[i][j] = c;
                }
            }
            deriv_matrices.push(matrix);
        }

        let mut gen_coords = vec![zero.clone(); ell];
        if ell > 1 {
            gen_coords[1] = BaseElem::one(nvars);
        } else {
            // degree-1 extension: X = -p[0]
            gen_coords[0] = minpoly[0].neg();
        }

        let ext = Extension {
            base,
            basis_names,
            struct_consts,
            unit_coords,
            deriv_matrices,
            generator: Some((gen_name.to_string(), gen_coords)),
        };
        ext.validate()?;
        Ok(ext)
    }

    fn validate(&self) -> Result<()> {
        self.check_dimensions()?;
        let report = self.validate_extension();
        match report.first_failure() {
            None => Ok(()),
            Some((invariant, witness)) => Err(Error::InvalidAlgebra {
                invariant: invariant.to_string(),
                witness: witness.to_string(),
            }),
        }
    }

    fn check_dimensions(&self) -> Result<()> {
        let ell = self.ell();
        let ok = ell > 0
            && self.unit_coords.len() == ell
            && self.struct_consts.len() == ell
            && self
                .struct_consts
                .iter()
                .all(|row| row.len() == ell && row.iter().all(|c| c.len() == ell))
            && self.deriv_matrices.len() == self.base.num_derivations()
            && self
                .deriv_matrices
                .iter()
                .all(|m| m.len() == ell && m.iter().all(|r| r.len() == ell));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra {
                invariant: "dimensions".to_string(),
                witness: "table shapes disagree with the rank".to_string(),
            })
        }
    }

    /// Check the five algebra invariants, reporting each with a witness on
    /// failure. Assumes consistent dimensions.
    pub fn validate_extension(&self) -> ValidationReport {
        let ell = self.ell();
        let mut report = ValidationReport::default();

        let mut witness = None;
        'comm: for i in 0..ell {
            for j in 0..i {
                if self.struct_consts[i][j] != self.struct_consts[j][i] {
                    witness = Some(format!("{} * {}", self.basis_names[i], self.basis_names[j]));
                    break 'comm;
                }
            }
        }
        report.push("commutativity", witness);

        let mut witness = None;
        'assoc: for i in 0..ell {
            for j in 0..ell {
                for k in 0..ell {
                    let left = self.mul_coords(&self.basis_mul(i, j), &self.basis_coords(k));
                    let right = self.mul_coords(&self.basis_coords(i), &self.basis_mul(j, k));
                    if left != right {
                        witness = Some(format!(
                            "({0} * {1}) * {2} != {0} * ({1} * {2})",
                            self.basis_names[i], self.basis_names[j], self.basis_names[k]
                        ));
                        break 'assoc;
                    }
                }
            }
        }
        report.push("associativity", witness);

        let mut witness = None;
        for j in 0..ell {
            let prod = self.mul_coords(&self.unit_coords, &self.basis_coords(j));
            if prod != self.basis_coords(j) {
                witness = Some(format!("1 * {}", self.basis_names[j]));
                break;
            }
        }
        report.push("unit", witness);

        let mut witness = None;
        'leib: for k in 0..self.base.num_derivations() {
            for i in 0..ell {
                for j in 0..ell {
                    let prod = ExtElem::new(self.basis_mul(i, j));
                    let lhs = self.ext_delta_raw(&prod, k);
                    let rhs = self.add_coords(
                        &self.mul_coords(&self.delta_basis(k, i).coords, &self.basis_coords(j)),
                        &self.mul_coords(&self.basis_coords(i), &self.delta_basis(k, j).coords),
                    );
                    if lhs.coords != rhs {
                        witness = Some(format!(
                            "delta_{}({} * {})",
                            self.base.derivation_name(k),
                            self.basis_names[i],
                            self.basis_names[j]
                        ));
                        break 'leib;
                    }
                }
            }
        }
        report.push("leibniz", witness);

        let mut witness = None;
        for k in 0..self.base.num_derivations() {
            let d_one = self.ext_delta_raw(&self.one_elem(), k);
            if !d_one.is_zero() {
                witness = Some(format!("delta_{}(1)", self.base.derivation_name(k)));
                break;
            }
        }
        report.push("unit_derivation", witness);

        report
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn ell(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit_coords(&self) -> &[BaseElem] {
        &self.unit_coords
    }

    pub fn generator(&self) -> Option<(&str, &[BaseElem])> {
        self.generator
            .as_ref()
            .map(|(n, c)| (n.as_str(), c.as_slice()))
    }

    /// The matrix `Delta` of the `k`-th derivation: entry `[i][j]` is
    /// `lambda_i(delta_k(b_j))`.
    pub fn delta_matrix(&self, k: usize) -> &Vec<Vec<BaseElem>> {
        &self.deriv_matrices[k]
    }

    /// Coordinates of the basis product `b_i * b_j`.
    pub fn basis_mul(&self, i: usize, j: usize) -> Vec<BaseElem> {
        self.struct_consts[i][j].clone()
    }

    fn basis_coords(&self, i: usize) -> Vec<BaseElem> {
        let mut v = vec![self.base.zero(); self.ell()];
        v[i] = self.base.one();
        v
    }

    pub fn zero_elem(&self) -> ExtElem {
        ExtElem::new(vec![self.base.zero(); self.ell()])
    }

    pub fn one_elem(&self) -> ExtElem {
        ExtElem::new(self.unit_coords.clone())
    }

    pub fn basis_elem(&self, i: usize) -> Result<ExtElem> {
        if i >= self.ell() {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(ExtElem::new(self.basis_coords(i)))
    }

    /// Embed a base element as `a * 1_B`.
    pub fn scalar_embed(&self, a: &BaseElem) -> ExtElem {
        ExtElem::new(self.unit_coords.iter().map(|u| u.mul(a)).collect())
    }

    /// `delta_k(b_j)` as an element, read off a column of the matrix.
    pub fn delta_basis(&self, k: usize, j: usize) -> ExtElem {
        ExtElem::new(
            (0..self.ell())
                .map(|i| self.deriv_matrices[k][i][j].clone())
                .collect(),
        )
    }

    /// The dual basis functional `lambda_i`, reading off a coordinate.
    pub fn lambda(&self, i: usize, x: &ExtElem) -> Result<BaseElem> {
        x.coords.get(i).cloned().ok_or(Error::IndexOutOfRange(i))
    }

    fn add_coords(&self, x: &[BaseElem], y: &[BaseElem]) -> Vec<BaseElem> {
        x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
    }

    fn mul_coords(&self, x: &[BaseElem], y: &[BaseElem]) -> Vec<BaseElem> {
        let ell = self.ell();
        let mut out = vec![self.base.zero(); ell];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let prod = xi.mul(yj);
                for (k, c) in self.struct_consts[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&prod.mul(c));
                    }
                }
            }
        }
        out
    }

    pub fn ext_add(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        ExtElem::new(self.add_coords(&x.coords, &y.coords))
    }

    pub fn ext_neg(&self, x: &ExtElem) -> ExtElem {
        ExtElem::new(x.coords.iter().map(BaseElem::neg).collect())
    }

    pub fn ext_sub(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        self.ext_add(x, &self.ext_neg(y))
    }

    pub fn ext_mul(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        ExtElem::new(self.mul_coords(&x.coords, &y.coords))
    }

    pub fn ext_scale(&self, x: &ExtElem, a: &BaseElem) -> ExtElem {
        ExtElem::new(x.coords.iter().map(|c| c.mul(a)).collect())
    }

    pub fn ext_pow(&self, x: &ExtElem, e: u32) -> ExtElem {
        let mut out = self.one_elem();
        for _ in 0..e {
            out = self.ext_mul(&out, x);
        }
        out
    }

    /// Invert `x` by solving the multiplication-by-`x` linear system.
    /// Zero divisors and zero are reported as not invertible.
    pub fn ext_inv(&self, x: &ExtElem) -> Result<ExtElem> {
        let ell = self.ell();
        // Column j holds the coordinates of x * b_j.
        let mut m = vec![vec![self.base.zero(); ell]; ell];
        for j in 0..ell {
            let col = self.mul_coords(&x.coords, &self.basis_coords(j));
            for (i, c) in col.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        solve_linear(m, self.unit_coords.clone()).ok_or(Error::NotInvertible)
    }

    pub(crate) fn ext_delta_raw(&self, x: &ExtElem, k: usize) -> ExtElem {
        let ell = self.ell();
        let mut out = Vec::with_capacity(ell);
        for i in 0..ell {
            let mut c = self.base.derive(&x.coords[i], k);
            for (j, xj) in x.coords.iter().enumerate() {
                let entry = &self.deriv_matrices[k][i][j];
                if !entry.is_zero() && !xj.is_zero() {
                    c = c.add(&entry.mul(xj));
                }
            }
            out.push(c);
        }
        ExtElem::new(out)
    }

    /// Apply the `k`-th derivation of `B`:
    /// `lambda_i(delta_k(x)) = d_k(x_i) + sum_j Delta[i][j] * x_j`.
    pub fn ext_delta(&self, x: &ExtElem, k: usize) -> Result<ExtElem> {
        if k >= self.base.num_derivations() {
            return Err(Error::UnknownDerivation(format!("index {}", k)));
        }
        Ok(self.ext_delta_raw(x, k))
    }
}

/// Solve `m * v = rhs` over the base field by Gaussian elimination.
fn solve_linear(mut m: Vec<Vec<BaseElem>>, mut rhs: Vec<BaseElem>) -> Option<ExtElem> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].inv().expect("pivot is nonzero");
        for c in col..n {
            m[col][c] = m[col][c].mul(&inv);
        }
        rhs[col] = rhs[col].mul(&inv);
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..n {
                let sub = m[col][c].mul(&factor);
                m[r][c] = m[r][c].sub(&sub);
            }
            let sub = rhs[col].mul(&factor);
            rhs[r] = rhs[r].sub(&sub);
        }
    }
    Some(ExtElem::new(rhs))
}

// Univariate polynomials over the base field, stored low degree first.
// Only what the minimal polynomial constructor needs.

fn upoly_trim(mut p: Vec<BaseElem>) -> Vec<BaseElem> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn upoly_neg(p: &[BaseElem]) -> Vec<BaseElem> {
    p.iter().map(BaseElem::neg).collect()
}

fn upoly_scale(p: &[BaseElem], c: &BaseElem) -> Vec<BaseElem> {
    p.iter().map(|a| a.mul(c)).collect()
}

/// Multiply by X.
fn upoly_shift(p: &[BaseElem], nvars: usize) -> Vec<BaseElem> {
    let mut out = vec![BaseElem::zero(nvars)];
    out.extend_from_slice(p);
    out
}

fn upoly_mul(a: &[BaseElem], b: &[BaseElem], nvars: usize) -> Vec<BaseElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BaseElem::zero(nvars); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    upoly_trim(out)
}

/// Remainder of `a` modulo monic `p`.
fn upoly_rem(a: &[BaseElem], p: &[BaseElem]) -> Vec<BaseElem> {
    let mut r = upoly_trim(a.to_vec());
    let dp = p.len() - 1;
    while r.len() > dp {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - dp;
        for i in 0..=dp {
            let sub = p[i].mul(&lead);
            r[shift + i] = r[shift + i].sub(&sub);
        }
        r = upoly_trim(r);
    }
    r
}

/// Inverse of `a` modulo monic `p` via the extended Euclidean algorithm;
/// `None` when `gcd(a, p)` is not constant.
fn upoly_inverse_mod(a: &[BaseElem], p: &[BaseElem]) -> Option<Vec<BaseElem>> {
    let nvars = p.first().map(|c| c.nvars()).expect("modulus is nonempty");
    let mut r0 = p.to_vec();
    let mut r1 = upoly_rem(a, p);
    let mut s0: Vec<BaseElem> = Vec::new();
    let mut s1 = vec![BaseElem::one(nvars)];
    while !r1.is_empty() {
        let (q, r) = upoly_divmod(&r0, &r1, nvars);
        let qs = upoly_mul(&q, &s1, nvars);
        let s = upoly_sub(&s0, &qs, nvars);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let ginv = r0[0].inv().expect("gcd is nonzero");
    Some(upoly_rem(&upoly_scale(&s0, &ginv), p))
}

fn upoly_sub(a: &[BaseElem], b: &[BaseElem], nvars: usize) -> Vec<BaseElem> {
    let n = a.len().max(b.len());
    let zero = BaseElem::zero(nvars);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x.sub(y));
    }
    upoly_trim(out)
}

/// Division with remainder over the base field.
fn upoly_divmod(a: &[BaseElem], b: &[BaseElem], nvars: usize) -> (Vec<BaseElem>, Vec<BaseElem>) {
    let b = upoly_trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = b.last().unwrap().inv().expect("divisor is nonzero");
    let mut r = upoly_trim(a.to_vec());
    let mut q = vec![BaseElem::zero(nvars); r.len().saturating_sub(db) + 1];
    while r.len() > db {
        let c = r.last().unwrap().mul(&lead_inv);
        let shift = r.len() - 1 - db;
        q[shift] = q[shift].add(&c);
        for i in 0..=db {
            let sub = b[i].mul(&c);
            r[shift + i] = r[shift + i].sub(&sub);
        }
        r = upoly_trim(r);
    }
    (upoly_trim(q), r)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact_arith::Frac;
    use crate::Rat;

    fn q(n: i64, d: i64) -> BaseElem {
        Frac::from_scalar(1, Rat::new(n.into(), d.into()))
    }

    fn t() -> BaseElem {
        Frac::var(1, 0)
    }

    /// Q(t) with d(t) = 1.
    fn qt() -> BaseField {
        let mut base = BaseField::new(vec!["t".to_string()]);
        base.add_derivation("d", vec![Frac::one(1)]).unwrap();
        base
    }

    /// B = A[b]/(b^2 - t) over Q(t), the running example.
    pub(crate) fn sqrt_t_ext() -> Extension {
        Extension::from_minpoly(qt(), "b", vec![t().neg(), q(0, 1), q(1, 1)]).unwrap()
    }

    #[test]
    fn minpoly_table_matches_hand_computation() {
        let ext = sqrt_t_ext();
        assert_eq!(ext.ell(), 2);
        // b * b = t * 1
        assert_eq!(ext.basis_mul(1, 1), vec![t(), q(0, 1)]);
        // delta(b) = b / (2t): only the [1][1] entry is nonzero
        let m = ext.delta_matrix(0);
        assert!(m[0][0].is_zero() && m[0][1].is_zero() && m[1][0].is_zero());
        assert_eq!(
            m[1][1],
            t().scale(&Rat::from_integer(2.into())).inv().unwrap()
        );
    }

    #[test]
    fn extension_multiplication() {
        let ext = sqrt_t_ext();
        let b = ext.basis_elem(1).unwrap();
        // (1 + b)^2 = (1 + t) + 2b
        let one_plus_b = ext.ext_add(&ext.one_elem(), &b);
        let sq = ext.ext_mul(&one_plus_b, &one_plus_b);
        assert_eq!(sq.coords, vec![q(1, 1).add(&t()), q(2, 1)]);
    }

    #[test]
    fn extension_inverse() {
        let ext = sqrt_t_ext();
        let b = ext.basis_elem(1).unwrap();
        // 1/b = b/t
        let inv = ext.ext_inv(&b).unwrap();
        assert_eq!(inv.coords, vec![q(0, 1), t().inv().unwrap()]);
        assert_eq!(ext.ext_mul(&b, &inv), ext.one_elem());
        assert!(matches!(
            ext.ext_inv(&ext.zero_elem()),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn derivation_on_elements() {
        let ext = sqrt_t_ext();
        // delta(t * b) = b + t * b/(2t) = (3/2) b
        let tb = ExtElem::new(vec![q(0, 1), t()]);
        let d = ext.ext_delta(&tb, 0).unwrap();
        assert_eq!(d.coords, vec![q(0, 1), q(3, 2)]);
        // lambda_2(delta(b)) = 1/(2t)
        let db = ext.ext_delta(&ext.basis_elem(1).unwrap(), 0).unwrap();
        assert_eq!(
            ext.lambda(1, &db).unwrap(),
            t().scale(&Rat::from_integer(2.into())).inv().unwrap()
        );
        assert!(matches!(ext.lambda(5, &db), Err(Error::IndexOutOfRange(5))));
    }

    #[test]
    fn degree_three_minpoly() {
        // B = A[b]/(b^3 - t): delta(b) = 1/(3t) * b
        let ext =
            Extension::from_minpoly(qt(), "b", vec![t().neg(), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(ext.ell(), 3);
        let m = ext.delta_matrix(0);
        let third = t().scale(&Rat::from_integer(3.into())).inv().unwrap();
        assert_eq!(m[1][1], third);
        // delta(b^2) = 2b * delta(b) = 2/(3t) * b^2
        assert_eq!(m[2][2], third.scale(&Rat::from_integer(2.into())));
    }

    #[test]
    fn degree_one_minpoly_gives_rank_one() {
        // B = A[X]/(X - t) is A itself; delta acts through d.
        let ext = Extension::from_minpoly(qt(), "c", vec![t().neg(), q(1, 1)]).unwrap();
        assert_eq!(ext.ell(), 1);
        let (name, coords) = ext.generator().unwrap();
        assert_eq!(name, "c");
        assert_eq!(coords, &[t()]);
        // delta(1) = 0 on the basis, elements derive through coefficients
        let x = ExtElem::new(vec![t()]);
        assert_eq!(ext.ext_delta(&x, 0).unwrap().coords, vec![q(1, 1)]);
    }

    #[test]
    fn nonmonic_and_inseparable_are_rejected() {
        assert!(matches!(
            Extension::from_minpoly(qt(), "b", vec![t().neg(), q(0, 1), q(2, 1)]),
            Err(Error::NotMonic)
        ));
        // X^2 shares the factor X with its derivative 2X
        assert!(matches!(
            Extension::from_minpoly(qt(), "b", vec![q(0, 1), q(0, 1), q(1, 1)]),
            Err(Error::NotSeparable)
        ));
    }

    #[test]
    fn zero_divisor_in_split_algebra_is_not_invertible() {
        // b^2 = t^2 splits: (t + b)(t - b) = 0
        let t2 = t().mul(&t());
        let ext = Extension::from_minpoly(qt(), "b", vec![t2.neg(), q(0, 1), q(1, 1)]).unwrap();
        let x = ExtElem::new(vec![t(), q(1, 1)]);
        assert!(matches!(ext.ext_inv(&x), Err(Error::NotInvertible)));
        // but b itself is invertible: b * b/t^2 = 1
        let b = ext.basis_elem(1).unwrap();
        let binv = ext.ext_inv(&b).unwrap();
        assert_eq!(ext.ext_mul(&b, &binv), ext.one_elem());
    }

    #[test]
    fn validation_report_lists_five_invariants() {
        let report = sqrt_t_ext().validate_extension();
        assert!(report.all_pass());
        let names: Vec<&str> = report.entries.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "commutativity",
                "associativity",
                "unit",
                "leibniz",
                "unit_derivation"
            ]
        );
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let base = qt();
        let one = || Frac::one(1);
        let zero = || Frac::zero(1);
        // sound table for A x A with the standard idempotent basis
        let consts = vec![
            vec![vec![one(), zero()], vec![zero(), zero()]],
            vec![vec![zero(), zero()], vec![zero(), one()]],
        ];
        let unit = vec![one(), one()];
        let deltas = vec![vec![vec![zero(), zero()], vec![zero(), zero()]]];
        assert!(Extension::from_table(
            base.clone(),
            vec!["e1".to_string(), "e2".to_string()],
            consts.clone(),
            unit.clone(),
            deltas.clone(),
        )
        .is_ok());

        // breaking the unit coordinates trips the unit axiom
        let bad_unit = vec![one(), zero()];
        let err = Extension::from_table(
            base.clone(),
            vec!["e1".to_string(), "e2".to_string()],
            consts.clone(),
            bad_unit,
            deltas.clone(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidAlgebra { ref invariant, .. } if invariant == "unit"));

        // a derivation with delta(e2) = e2 violates Leibniz on e2 * e2
        let bad_deltas = vec![vec![vec![zero(), zero()], vec![zero(), one()]]];
        let err = Extension::from_table(
            base,
            vec!["e1".to_string(), "e2".to_string()],
            consts,
            unit,
            bad_deltas,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::InvalidAlgebra { ref invariant, .. } if invariant == "leibniz")
        );
    }
}
