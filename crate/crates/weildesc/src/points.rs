//! Rational-point correspondence.
//!
//! A point of a system over `B` assigns an element of `B` to each
//! variable; its split assigns the basis coordinates to the component
//! variables. Evaluation commutes with descent coordinate by coordinate,
//! so a point solves the original system exactly when its split solves
//! the descended one. For differential systems the derivatives of a point
//! are not free data: they are induced by the derivations themselves, on
//! `B` for the original equations and on the base field for the geometric
//! form.

use indexmap::IndexMap;

use crate::descent::{to_geometric_form, unit_expand, DescendedSystem};
use crate::diffpoly::{eval_a, eval_a_differential, eval_b, eval_b_differential, DPolyB};
use crate::error::{Error, Result};
use crate::extension::{ExtElem, Extension};
use crate::BaseElem;

/// A point valued in the extension: one element of `B` per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct BPoint {
    pub assignment: IndexMap<String, ExtElem>,
}

impl BPoint {
    pub fn new(assignment: IndexMap<String, ExtElem>) -> Self {
        BPoint { assignment }
    }
}

/// A point valued in the base field: one element per component variable.
#[derive(Debug, Clone, PartialEq)]
pub struct APoint {
    pub assignment: IndexMap<(String, usize), BaseElem>,
}

impl APoint {
    pub fn new(assignment: IndexMap<(String, usize), BaseElem>) -> Self {
        APoint { assignment }
    }
}

/// Split a point coordinatewise: `(name, i)` gets the `i`-th basis
/// coordinate of the value at `name`.
pub fn split_point(p: &BPoint, ext: &Extension) -> APoint {
    let mut assignment = IndexMap::new();
    for (name, value) in &p.assignment {
        for i in 1..=ext.ell() {
            assignment.insert((name.clone(), i), value.coords[i - 1].clone());
        }
    }
    APoint::new(assignment)
}

/// Reassemble a point from its components: the value at `name` is
/// `sum_i a_{name,i} * b_i`. Every mentioned variable must carry all of
/// its components.
pub fn join_point(p: &APoint, ext: &Extension) -> Result<BPoint> {
    let mut assignment = IndexMap::new();
    for (name, _) in p.assignment.keys() {
        if assignment.contains_key(name) {
            continue;
        }
        let mut coords = Vec::with_capacity(ext.ell());
        for i in 1..=ext.ell() {
            let c = p
                .assignment
                .get(&(name.clone(), i))
                .cloned()
                .ok_or_else(|| Error::UnassignedVariable(format!("{}.{}", name, i)))?;
            coords.push(c);
        }
        assignment.insert(name.clone(), ExtElem::new(coords));
    }
    Ok(BPoint::new(assignment))
}

/// Evaluation of one equation on both sides of the correspondence.
#[derive(Debug, Clone)]
pub struct CorrespondenceEntry {
    pub equation: usize,
    /// The value of the original equation at the point, in `B`.
    pub value: ExtElem,
    /// The values of the descended components at the split point.
    pub component_values: Vec<BaseElem>,
    /// Whether the basis coordinates of `value` equal `component_values`.
    pub identity_holds: bool,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub entries: Vec<CorrespondenceEntry>,
}

impl CorrespondenceReport {
    /// The coordinatewise evaluation identity holds for every equation.
    pub fn identity_holds(&self) -> bool {
        self.entries.iter().all(|e| e.identity_holds)
    }

    /// The point solves the original system.
    pub fn original_vanishes(&self) -> bool {
        self.entries.iter().all(|e| e.value.is_zero())
    }

    /// The split point solves the descended system.
    pub fn descended_vanishes(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.component_values.iter().all(BaseElem::is_zero))
    }

    /// The two solution verdicts coincide.
    pub fn verdicts_agree(&self) -> bool {
        self.original_vanishes() == self.descended_vanishes()
    }
}

/// Evaluate an order-0 system at a point over `B` and its descent at the
/// split point, checking the coordinatewise identity
/// `eval_B(f, p) = sum_i eval_A(g_i, split(p)) * b_i`.
pub fn check_correspondence(
    fs: &[DPolyB],
    p: &BPoint,
    ext: &Extension,
) -> Result<CorrespondenceReport> {
    let split = split_point(p, ext);
    let mut entries = Vec::with_capacity(fs.len());
    for (e, f) in fs.iter().enumerate() {
        let value = eval_b(f, &p.assignment, ext)?;
        let mut component_values = Vec::with_capacity(ext.ell());
        for g in unit_expand(f, ext) {
            component_values.push(eval_a(&g, &split.assignment, ext.base())?);
        }
        let identity_holds = value.coords == component_values;
        entries.push(CorrespondenceEntry {
            equation: e + 1,
            value,
            component_values,
            identity_holds,
        });
    }
    Ok(CorrespondenceReport { entries })
}

/// Evaluation of one geometric-form component at a differential point.
#[derive(Debug, Clone)]
pub struct DifferentialEntry {
    pub equation: usize,
    pub component: usize,
    /// The geometric equation evaluated at the split point, derivatives
    /// taken by the base derivations.
    pub residual: BaseElem,
    /// Whether the residual equals the matching basis coordinate of the
    /// original equation's value.
    pub identity_holds: bool,
}

#[derive(Debug, Clone)]
pub struct DifferentialPointReport {
    pub entries: Vec<DifferentialEntry>,
    /// The original equations evaluated at the point, derivatives taken
    /// by the extension's derivations.
    pub original_values: Vec<ExtElem>,
}

impl DifferentialPointReport {
    pub fn identity_holds(&self) -> bool {
        self.entries.iter().all(|e| e.identity_holds)
    }

    pub fn original_vanishes(&self) -> bool {
        self.original_values.iter().all(ExtElem::is_zero)
    }

    pub fn descended_vanishes(&self) -> bool {
        self.entries.iter().all(|e| e.residual.is_zero())
    }

    pub fn verdicts_agree(&self) -> bool {
        self.original_vanishes() == self.descended_vanishes()
    }
}

/// Evaluate a differential system at a point on both sides: the original
/// equations over `B` with derivatives induced by the extension's
/// derivations, and the geometric form over the base field with
/// derivatives induced by the base derivations on the split coordinates.
pub fn check_differential_point(
    sys: &DescendedSystem,
    p: &BPoint,
) -> Result<DifferentialPointReport> {
    let ext = &sys.extension;
    let split = split_point(p, ext);
    let geometric = to_geometric_form(sys)?;

    let mut original_values = Vec::with_capacity(sys.inputs.len());
    for f in &sys.inputs {
        original_values.push(eval_b_differential(f, &p.assignment, ext)?);
    }

    let mut entries = Vec::with_capacity(geometric.len());
    for (gen, g) in sys.generators.iter().zip(&geometric) {
        let residual = eval_a_differential(g, &split.assignment, ext.base())?;
        let identity_holds =
            original_values[gen.equation - 1].coords[gen.component - 1] == residual;
        entries.push(DifferentialEntry {
            equation: gen.equation,
            component: gen.component,
            residual,
            identity_holds,
        });
    }
    Ok(DifferentialPointReport {
        entries,
        original_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::descend_system;
    use crate::diffpoly::{DerivIndex, VarB};
    use crate::exact_arith::Frac;
    use crate::extension::tests::sqrt_t_ext;

    fn t_elem() -> BaseElem {
        Frac::var(1, 0)
    }

    fn x_b(ext: &Extension, order: u32) -> DPolyB {
        DPolyB::var(ext, VarB::new("x", DerivIndex(vec![order])))
    }

    fn point(value: ExtElem) -> BPoint {
        let mut m = IndexMap::new();
        m.insert("x".to_string(), value);
        BPoint::new(m)
    }

    #[test]
    fn split_reads_off_basis_coordinates() {
        let ext = sqrt_t_ext();
        let b = ext.basis_elem(1).unwrap();
        let split = split_point(&point(b), &ext);
        assert_eq!(split.assignment[&("x".to_string(), 1)], BaseElem::zero(1));
        assert_eq!(split.assignment[&("x".to_string(), 2)], BaseElem::one(1));

        let three = ext.scalar_embed(&BaseElem::from_int(1, 3));
        let split = split_point(&point(three), &ext);
        assert_eq!(
            split.assignment[&("x".to_string(), 1)],
            BaseElem::from_int(1, 3)
        );
        assert_eq!(split.assignment[&("x".to_string(), 2)], BaseElem::zero(1));

        // t * (1 + b) has coordinates (t, t)
        let v = ext.ext_scale(
            &ext.ext_add(&ext.one_elem(), &ext.basis_elem(1).unwrap()),
            &t_elem(),
        );
        let split = split_point(&point(v), &ext);
        assert_eq!(split.assignment[&("x".to_string(), 1)], t_elem());
        assert_eq!(split.assignment[&("x".to_string(), 2)], t_elem());
    }

    #[test]
    fn join_inverts_split() {
        let ext = sqrt_t_ext();
        let mut rng = crate::sample::rng(7);
        for _ in 0..10 {
            let p = point(crate::sample::random_ext_elem(&mut rng, &ext));
            let back = join_point(&split_point(&p, &ext), &ext).unwrap();
            assert_eq!(back, p);
        }
        // a missing component is an error
        let mut partial = IndexMap::new();
        partial.insert(("x".to_string(), 1), BaseElem::one(1));
        assert!(matches!(
            join_point(&APoint::new(partial), &ext),
            Err(Error::UnassignedVariable(_))
        ));
    }

    #[test]
    fn correspondence_on_the_square_root_equation() {
        let ext = sqrt_t_ext();
        // x^2 - t vanishes at x = b on both sides
        let f = x_b(&ext, 0)
            .mul(&ext, &x_b(&ext, 0))
            .sub(&ext, &DPolyB::constant(&ext, ext.scalar_embed(&t_elem())));
        let p = point(ext.basis_elem(1).unwrap());
        let report = check_correspondence(&[f], &p, &ext).unwrap();
        assert!(report.identity_holds());
        assert!(report.original_vanishes());
        assert!(report.descended_vanishes());
        assert!(report.verdicts_agree());
    }

    #[test]
    fn correspondence_on_nonvanishing_points() {
        let ext = sqrt_t_ext();
        // f = x at x = 1: value 1_B, components (1, 0)
        let p = point(ext.one_elem());
        let report = check_correspondence(&[x_b(&ext, 0)], &p, &ext).unwrap();
        assert!(report.identity_holds());
        assert!(!report.original_vanishes());
        assert!(!report.descended_vanishes());
        assert!(report.verdicts_agree());
        assert_eq!(report.entries[0].value, ext.one_elem());
        assert_eq!(
            report.entries[0].component_values,
            vec![BaseElem::one(1), BaseElem::zero(1)]
        );

        // f = b*x at x = b: value t, components (t, 0)
        let f = x_b(&ext, 0).scale(&ext, &ext.basis_elem(1).unwrap());
        let p = point(ext.basis_elem(1).unwrap());
        let report = check_correspondence(&[f], &p, &ext).unwrap();
        assert!(report.identity_holds());
        assert_eq!(report.entries[0].value, ext.scalar_embed(&t_elem()));
        assert_eq!(
            report.entries[0].component_values,
            vec![t_elem(), BaseElem::zero(1)]
        );
    }

    #[test]
    fn correspondence_identity_on_random_systems() {
        let ext = sqrt_t_ext();
        let mut rng = crate::sample::rng(8);
        for _ in 0..20 {
            let fs: Vec<DPolyB> = (0..2)
                .map(|_| crate::sample::random_dpoly_b_order0(&mut rng, &ext, &["x", "y"], 2, 3))
                .collect();
            let p = BPoint::new(crate::sample::random_bpoint(&mut rng, &ext, &["x", "y"]));
            let report = check_correspondence(&fs, &p, &ext).unwrap();
            assert!(report.identity_holds());
            assert!(report.verdicts_agree());
        }
    }

    #[test]
    fn positive_order_variables_are_rejected_in_the_algebraic_check() {
        let ext = sqrt_t_ext();
        let p = point(ext.one_elem());
        assert!(matches!(
            check_correspondence(&[x_b(&ext, 1)], &p, &ext),
            Err(Error::UnassignedVariable(_))
        ));
        let missing = BPoint::new(IndexMap::new());
        assert!(matches!(
            check_correspondence(&[x_b(&ext, 0)], &missing, &ext),
            Err(Error::UnassignedVariable(_))
        ));
    }

    #[test]
    fn differential_point_on_the_example_system() {
        let ext = sqrt_t_ext();
        let sys = descend_system(&[x_b(&ext, 1)], &ext, &["x".to_string()]).unwrap();

        // constants solve dx = 0 on both sides
        let p = point(ext.scalar_embed(&BaseElem::from_int(1, 5)));
        let report = check_differential_point(&sys, &p).unwrap();
        assert!(report.identity_holds());
        assert!(report.original_vanishes());
        assert!(report.descended_vanishes());

        // x = b does not: delta(b) = b/(2t), residuals (0, 1/(2t))
        let p = point(ext.basis_elem(1).unwrap());
        let report = check_differential_point(&sys, &p).unwrap();
        assert!(report.identity_holds());
        assert!(!report.original_vanishes());
        assert!(!report.descended_vanishes());
        assert!(report.verdicts_agree());
        let half_t_inv = t_elem()
            .scale(&crate::Rat::from_integer(2.into()))
            .inv()
            .unwrap();
        assert_eq!(report.entries[0].residual, BaseElem::zero(1));
        assert_eq!(report.entries[1].residual, half_t_inv);

        // x = 0 vanishes everywhere
        let p = point(ext.zero_elem());
        let report = check_differential_point(&sys, &p).unwrap();
        assert!(report.original_vanishes());
        assert!(report.descended_vanishes());
    }

    #[test]
    fn differential_verdicts_agree_on_random_points() {
        let ext = sqrt_t_ext();
        let sys = descend_system(&[x_b(&ext, 1)], &ext, &["x".to_string()]).unwrap();
        let mut rng = crate::sample::rng(9);
        for _ in 0..20 {
            let p = point(crate::sample::random_ext_elem(&mut rng, &ext));
            let report = check_differential_point(&sys, &p).unwrap();
            assert!(report.identity_holds());
            assert!(report.verdicts_agree());
        }
    }
}
