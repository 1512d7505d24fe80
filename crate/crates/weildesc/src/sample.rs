//! Seeded random generators for property checks.
//!
//! The `check` subcommand and the test suite share these, so a reported
//! seed reproduces the exact inputs of a failing property run. Degrees and
//! coefficient sizes are kept small: the properties are identities, so small
//! inputs already exercise every code path while keeping exact arithmetic
//! fast.

use indexmap::IndexMap;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffpoly::{DPolyA, DPolyB, DerivIndex, VMono, VPoly, VarA, VarB};
use crate::exact_arith::{Frac, MPoly};
use crate::extension::{ExtElem, Extension};
use crate::BaseElem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(rng: &mut ChaCha8Rng) -> BigRational {
    let mut n: i64 = rng.random_range(-9..=9);
    if n == 0 {
        n = 1;
    }
    BigRational::from_integer(n.into())
}

/// A sparse polynomial with up to `max_terms` terms of degree at most
/// `max_deg` per variable and integer coefficients in `[-9, 9]`.
pub fn random_base_poly(
    rng: &mut ChaCha8Rng,
    nvars: usize,
    max_deg: u32,
    max_terms: usize,
) -> MPoly<BigRational> {
    let nterms = rng.random_range(1..=max_terms);
    let mut p = MPoly::zero(nvars);
    for _ in 0..nterms {
        let exps: Vec<u32> = (0..nvars).map(|_| rng.random_range(0..=max_deg)).collect();
        p = p.add(&MPoly::from_terms(nvars, [(exps, coeff(rng))]));
    }
    p
}

/// A base field element with a small numerator and a nonzero denominator of
/// degree at most 1.
pub fn random_base_elem(rng: &mut ChaCha8Rng, nvars: usize) -> Frac<BigRational> {
    let num = random_base_poly(rng, nvars, 2, 3);
    let den = loop {
        let d = random_base_poly(rng, nvars, 1, 2);
        if !d.is_zero() {
            break d;
        }
    };
    Frac::new(num, den).expect("denominator is nonzero")
}

/// A deliberately small base element (linear numerator, denominator 1 or a
/// variable), for use as a coefficient inside larger random structures.
pub fn random_base_elem_light(rng: &mut ChaCha8Rng, nvars: usize) -> BaseElem {
    let num = random_base_poly(rng, nvars, 1, 2);
    let den = if nvars > 0 && rng.random_bool(0.3) {
        MPoly::var(nvars, rng.random_range(0..nvars))
    } else {
        MPoly::one(nvars)
    };
    Frac::new(num, den).expect("denominator is nonzero")
}

/// An extension element with light random coordinates.
pub fn random_ext_elem(rng: &mut ChaCha8Rng, ext: &Extension) -> ExtElem {
    let nvars = ext.base().nvars();
    ExtElem::new(
        (0..ext.ell())
            .map(|_| random_base_elem_light(rng, nvars))
            .collect(),
    )
}

/// A multi-index of total order at most `max_order`.
pub fn random_deriv_index(rng: &mut ChaCha8Rng, m: usize, max_order: u32) -> DerivIndex {
    let mut theta = DerivIndex::zero(m);
    if m == 0 {
        return theta;
    }
    let order = rng.random_range(0..=max_order);
    for _ in 0..order {
        theta.0[rng.random_range(0..m)] += 1;
    }
    theta
}

fn random_mono_b(
    rng: &mut ChaCha8Rng,
    m: usize,
    names: &[&str],
    max_order: u32,
    max_deg: u32,
) -> VMono<VarB> {
    let mut mono = VMono::one();
    for _ in 0..rng.random_range(0..=max_deg) {
        let name = names[rng.random_range(0..names.len())];
        let v = VarB::new(name, random_deriv_index(rng, m, max_order));
        mono = mono.mul(&VMono::var(v));
    }
    mono
}

/// A random differential polynomial over `B` with bounded order, degree and
/// term count.
pub fn random_dpoly_b(
    rng: &mut ChaCha8Rng,
    ext: &Extension,
    names: &[&str],
    max_order: u32,
    max_deg: u32,
    max_terms: usize,
) -> DPolyB {
    let m = ext.base().num_derivations();
    let mut p = DPolyB::zero();
    for _ in 0..rng.random_range(1..=max_terms) {
        let mono = random_mono_b(rng, m, names, max_order, max_deg);
        let coeff = random_ext_elem(rng, ext);
        p = p.add(ext, &VPoly::monomial(ext, coeff, mono));
    }
    p
}

/// A random order-0 polynomial over `B` (no derivative variables).
pub fn random_dpoly_b_order0(
    rng: &mut ChaCha8Rng,
    ext: &Extension,
    names: &[&str],
    max_deg: u32,
    max_terms: usize,
) -> DPolyB {
    random_dpoly_b(rng, ext, names, 0, max_deg, max_terms)
}

/// A random polynomial in descended variables with light coefficients.
pub fn random_dpoly_a(
    rng: &mut ChaCha8Rng,
    ext: &Extension,
    names: &[&str],
    max_order: u32,
    max_deg: u32,
    max_terms: usize,
) -> DPolyA {
    let m = ext.base().num_derivations();
    let base = ext.base();
    let mut p = DPolyA::zero();
    for _ in 0..rng.random_range(1..=max_terms) {
        let mut mono = VMono::one();
        for _ in 0..rng.random_range(0..=max_deg) {
            let name = names[rng.random_range(0..names.len())];
            let v = VarA::new(
                name,
                random_deriv_index(rng, m, max_order),
                rng.random_range(1..=ext.ell()),
            );
            mono = mono.mul(&VMono::var(v));
        }
        let coeff = random_base_elem_light(rng, base.nvars());
        p = p.add(base, &VPoly::monomial(base, coeff, mono));
    }
    p
}

/// A random point in `B` for the listed variable names.
pub fn random_bpoint(
    rng: &mut ChaCha8Rng,
    ext: &Extension,
    names: &[&str],
) -> IndexMap<String, ExtElem> {
    names
        .iter()
        .map(|n| (n.to_string(), random_ext_elem(rng, ext)))
        .collect()
}
