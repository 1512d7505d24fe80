//! Exact arithmetic in the base differential field.
//!
//! The base field consists of fractions of multivariate polynomials with
//! exact scalar coefficients, together with a family of derivations. Each
//! derivation is determined by the images of the polynomial variables and
//! extends to fractions through the quotient rule.

pub mod frac;
pub mod poly;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use frac::Frac;
pub use poly::{MPoly, Mono};

/// The base differential field: named variables plus an ordered family of
/// derivations, each given by its images on the variables.
#[derive(Debug, Clone)]
pub struct BaseField<S: Scalar> {
    var_names: Vec<String>,
    derivations: IndexMap<String, Vec<Frac<S>>>,
}

impl<S: Scalar> BaseField<S> {
    pub fn new(var_names: Vec<String>) -> Self {
        BaseField {
            var_names,
            derivations: IndexMap::new(),
        }
    }

    /// Register a derivation by the images of the base variables, in
    /// declaration order.
    pub fn add_derivation(&mut self, name: &str, images: Vec<Frac<S>>) -> Result<()> {
        if images.len() != self.var_names.len() {
            return Err(Error::InvalidInput(format!(
                "derivation {} must map all {} base variables",
                name,
                self.var_names.len()
            )));
        }
        if self.derivations.contains_key(name) {
            return Err(Error::InvalidInput(format!(
                "derivation {} is declared twice",
                name
            )));
        }
        self.derivations.insert(name.to_string(), images);
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    pub fn var(&self, j: usize) -> Frac<S> {
        Frac::var(self.nvars(), j)
    }

    pub fn zero(&self) -> Frac<S> {
        Frac::zero(self.nvars())
    }

    pub fn one(&self) -> Frac<S> {
        Frac::one(self.nvars())
    }

    pub fn num_derivations(&self) -> usize {
        self.derivations.len()
    }

    pub fn derivation_names(&self) -> impl Iterator<Item = &str> {
        self.derivations.keys().map(String::as_str)
    }

    pub fn derivation_name(&self, k: usize) -> &str {
        self.derivations
            .get_index(k)
            .expect("derivation index in range")
            .0
    }

    pub fn derivation_index(&self, name: &str) -> Option<usize> {
        self.derivations.get_index_of(name)
    }

    pub fn derivation_images(&self, k: usize) -> &[Frac<S>] {
        self.derivations
            .get_index(k)
            .expect("derivation index in range")
            .1
    }

    /// Apply the `k`-th derivation: `d_k(f) = sum_j d_k(t_j) * df/dt_j`.
    pub fn derive(&self, f: &Frac<S>, k: usize) -> Frac<S> {
        let images = self.derivation_images(k);
        let mut out = self.zero();
        for (j, img) in images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            out = out.add(&img.mul(&f.partial(j)));
        }
        out
    }

    /// Apply `d_1^{theta_1} ... d_m^{theta_m}`. Only meaningful when the
    /// derivations commute, which ingestion checks.
    pub fn derive_multi(&self, f: &Frac<S>, theta: &[u32]) -> Frac<S> {
        debug_assert_eq!(theta.len(), self.num_derivations());
        let mut out = f.clone();
        for (k, &e) in theta.iter().enumerate() {
            for _ in 0..e {
                out = self.derive(&out, k);
            }
        }
        out
    }

    /// Verify that all pairs of derivations commute on the base variables.
    pub fn check_commutation(&self) -> Result<()> {
        for k in 0..self.num_derivations() {
            for l in (k + 1)..self.num_derivations() {
                for j in 0..self.nvars() {
                    let v = self.var(j);
                    let kl = self.derive(&self.derive(&v, l), k);
                    let lk = self.derive(&self.derive(&v, k), l);
                    if kl != lk {
                        return Err(Error::NonCommutingDerivations(format!(
                            "[{}, {}] does not vanish on {}",
                            self.derivation_name(k),
                            self.derivation_name(l),
                            self.var_names[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
