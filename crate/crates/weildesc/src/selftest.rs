//! Built-in verification battery for the `weildesc` binary.
//!
//! Every item asserts a hand-checkable identity: fixed facts of base field
//! arithmetic, the worked square-root extension of `Q(t)`, the descent of
//! the first-order example system in raw and geometric form, point
//! correspondence, and the text front end down to exact golden strings.
//! Two negative controls confirm that the battery would notice a wrong
//! derivation table. The battery is deterministic, needs no input files,
//! and runs in well under a second, so a packaged binary can prove its own
//! arithmetic on any machine with `weildesc selftest`.

use indexmap::IndexMap;

use crate::cli::{self, parser, OutputFormat};
use crate::descent::{
    apply_descent_derivation, check_bracket, check_prolongation_identity,
    check_prolongation_identity_with_coeffs, counit_poly, descend_morphism, descend_system,
    descent_derivation_var, to_geometric_form, unit_expand,
};
use crate::diffpoly::{
    eval_b, natural_derive_b, DPolyA, DPolyB, DPolyBase, DerivIndex, VarA, VarB,
};
use crate::error::Error;
use crate::extension::{ExtElem, Extension};
use crate::points::{check_correspondence, check_differential_point, split_point, BPoint};
use crate::{BaseElem, BaseField};

/// Result of the battery: the transcript and the overall verdict.
pub struct SelftestOutcome {
    pub output: String,
    pub all_passed: bool,
}

type Item = (&'static str, fn() -> Result<(), String>);

/// Run every battery item and collect one transcript line per item plus a
/// summary line.
pub fn run_selftest() -> SelftestOutcome {
    let items: &[Item] = &[
        ("base_square_of_t", base_square_of_t),
        ("base_reciprocal_of_t", base_reciprocal_of_t),
        ("base_derivative_of_t", base_derivative_of_t),
        (
            "base_derivative_of_a_rational",
            base_derivative_of_a_rational,
        ),
        ("minpoly_square_root_table", minpoly_square_root_table),
        ("minpoly_rank_one", minpoly_rank_one),
        ("table_commutativity_rejected", table_commutativity_rejected),
        ("table_split_algebra_accepted", table_split_algebra_accepted),
        ("rank_one_validates", rank_one_validates),
        ("generator_squared", generator_squared),
        ("unit_is_neutral", unit_is_neutral),
        ("inverse_of_the_unit", inverse_of_the_unit),
        ("idempotent_not_invertible", idempotent_not_invertible),
        ("derivative_of_the_generator", derivative_of_the_generator),
        ("derivative_of_the_unit", derivative_of_the_unit),
        (
            "generator_derivative_coordinate",
            generator_derivative_coordinate,
        ),
        ("dual_basis_relations", dual_basis_relations),
        ("derivative_of_a_variable", derivative_of_a_variable),
        (
            "derivative_of_generator_times_variable",
            derivative_of_generator_times_variable,
        ),
        ("derivative_of_a_square", derivative_of_a_square),
        ("adding_zero", adding_zero),
        ("product_of_variables", product_of_variables),
        ("evaluation_at_the_unit", evaluation_at_the_unit),
        (
            "evaluation_kills_the_minimal_polynomial",
            evaluation_kills_the_minimal_polynomial,
        ),
        ("components_of_a_variable", components_of_a_variable),
        (
            "constant_basis_derivation_is_a_bump",
            constant_basis_derivation_is_a_bump,
        ),
        (
            "descent_derivation_on_scalars",
            descent_derivation_on_scalars,
        ),
        (
            "descent_of_the_first_order_system",
            descent_of_the_first_order_system,
        ),
        ("descent_of_the_empty_system", descent_of_the_empty_system),
        (
            "geometric_form_of_the_example",
            geometric_form_of_the_example,
        ),
        (
            "geometric_form_with_constant_basis",
            geometric_form_with_constant_basis,
        ),
        ("geometric_form_rank_one", geometric_form_rank_one),
        (
            "prolongation_identity_on_the_unit",
            prolongation_identity_on_the_unit,
        ),
        ("bracket_on_a_constants_basis", bracket_on_a_constants_basis),
        ("counit_on_rank_one", counit_on_rank_one),
        (
            "identity_morphism_descends_to_identity",
            identity_morphism_descends_to_identity,
        ),
        (
            "coordinates_of_the_generator_point",
            coordinates_of_the_generator_point,
        ),
        (
            "coordinates_of_a_rational_point",
            coordinates_of_a_rational_point,
        ),
        (
            "correspondence_on_a_vanishing_point",
            correspondence_on_a_vanishing_point,
        ),
        (
            "correspondence_on_a_nonvanishing_point",
            correspondence_on_a_nonvanishing_point,
        ),
        ("differential_point_at_zero", differential_point_at_zero),
        (
            "prime_parses_as_the_first_derivation",
            prime_parses_as_the_first_derivation,
        ),
        (
            "minimal_polynomial_expression_parses",
            minimal_polynomial_expression_parses,
        ),
        (
            "geometric_equation_expression_parses",
            geometric_equation_expression_parses,
        ),
        (
            "lowering_a_derivative_variable",
            lowering_a_derivative_variable,
        ),
        ("lowering_a_base_fraction", lowering_a_base_fraction),
        ("golden_descend_output", golden_descend_output),
        ("rank_one_descend_output", rank_one_descend_output),
        (
            "wrong_table_coefficients_are_caught",
            wrong_table_coefficients_are_caught,
        ),
        (
            "vanishing_generator_derivative_output",
            vanishing_generator_derivative_output,
        ),
    ];
    let mut output = String::new();
    let mut passed = 0usize;
    let mut failed = 0usize;
    for (name, item) in items {
        match item() {
            Ok(()) => {
                passed += 1;
                output.push_str(&format!("{}: ok\n", name));
            }
            Err(witness) => {
                failed += 1;
                output.push_str(&format!("{}: FAIL ({})\n", name, witness));
            }
        }
    }
    output.push_str(&format!("selftest: {} passed, {} failed\n", passed, failed));
    SelftestOutcome {
        output,
        all_passed: failed == 0,
    }
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn ensure_eq<T: PartialEq + std::fmt::Debug>(got: &T, want: &T, what: &str) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{}: got {:?}, want {:?}", what, got, want))
    }
}

fn q(n: i64) -> BaseElem {
    BaseElem::from_int(1, n)
}

fn t_elem() -> BaseElem {
    BaseElem::var(1, 0)
}

fn base_qt() -> BaseField {
    let mut base = BaseField::new(vec!["t".to_string()]);
    base.add_derivation("d", vec![BaseElem::one(1)]).unwrap();
    base
}

fn sqrt_ext() -> Extension {
    Extension::from_minpoly(base_qt(), "b", vec![t_elem().neg(), q(0), q(1)]).unwrap()
}

/// Same minimal polynomial over the base where `d` kills `t`, so the
/// derivative of the generator vanishes and the basis consists of
/// constants.
fn constant_sqrt_ext() -> Extension {
    let mut base = BaseField::new(vec!["t".to_string()]);
    base.add_derivation("d", vec![BaseElem::zero(1)]).unwrap();
    Extension::from_minpoly(base, "b", vec![t_elem().neg(), q(0), q(1)]).unwrap()
}

fn rank_one_ext() -> Extension {
    Extension::from_minpoly(base_qt(), "b", vec![t_elem().neg(), q(1)]).unwrap()
}

/// The split algebra `A x A` with idempotent basis and constant basis
/// elements, over the given base.
fn split_ext(base: BaseField) -> Extension {
    let n = base.nvars();
    let m = base.num_derivations();
    let zero = BaseElem::zero(n);
    let one = BaseElem::one(n);
    let consts = vec![
        vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), zero.clone()],
        ],
        vec![
            vec![zero.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ],
    ];
    let unit = vec![one.clone(), one.clone()];
    let delta = vec![vec![vec![zero.clone(), zero.clone()]; 2]; m];
    Extension::from_table(
        base,
        vec!["e1".to_string(), "e2".to_string()],
        consts,
        unit,
        delta,
    )
    .unwrap()
}

fn theta(orders: &[u32]) -> DerivIndex {
    DerivIndex(orders.to_vec())
}

fn var_b(name: &str, order: u32) -> VarB {
    VarB::new(name, theta(&[order]))
}

fn var_a(name: &str, order: u32, i: usize) -> VarA {
    VarA::new(name, theta(&[order]), i)
}

fn base_square_of_t() -> Result<(), String> {
    let t = t_elem();
    ensure_eq(&t.mul(&t), &t.pow(2).unwrap(), "t*t against t^2")?;
    ensure_eq(
        &cli::render::render_base(&t.mul(&t), &base_qt()),
        &"t^2".to_string(),
        "rendered square",
    )
}

fn base_reciprocal_of_t() -> Result<(), String> {
    let r = q(1).div(&t_elem()).map_err(|e| e.to_string())?;
    ensure_eq(&r.mul(&t_elem()), &q(1), "t * (1/t)")?;
    ensure_eq(
        &cli::render::render_base(&r, &base_qt()),
        &"1/t".to_string(),
        "rendered reciprocal",
    )
}

fn base_derivative_of_t() -> Result<(), String> {
    let base = base_qt();
    ensure_eq(&base.derive(&t_elem(), 0), &q(1), "d(t)")
}

fn base_derivative_of_a_rational() -> Result<(), String> {
    let base = base_qt();
    let c = q(7).div(&q(3)).unwrap();
    ensure(base.derive(&c, 0).is_zero(), "d(7/3) is nonzero")
}

fn minpoly_square_root_table() -> Result<(), String> {
    let ext = sqrt_ext();
    ensure_eq(&ext.ell(), &2usize, "rank")?;
    ensure_eq(&ext.basis_mul(1, 1), &vec![t_elem(), q(0)], "b*b")?;
    let half_inv_t = q(1)
        .div(&t_elem().scale(&num_rational::BigRational::from_integer(2.into())))
        .unwrap();
    let m = ext.delta_matrix(0);
    ensure(
        m[0][0].is_zero() && m[0][1].is_zero() && m[1][0].is_zero(),
        "delta matrix off entries",
    )?;
    ensure_eq(&m[1][1], &half_inv_t, "delta matrix [2][2]")
}

fn minpoly_rank_one() -> Result<(), String> {
    let ext = rank_one_ext();
    ensure_eq(&ext.ell(), &1usize, "rank")?;
    let (name, coords) = ext.generator().ok_or("no generator recorded")?;
    ensure_eq(&name, &"b", "generator name")?;
    ensure_eq(&coords.to_vec(), &vec![t_elem()], "generator coordinates")?;
    let gen = ExtElem::new(coords.to_vec());
    let dgen = ext.ext_delta(&gen, 0).map_err(|e| e.to_string())?;
    ensure_eq(&dgen, &ext.one_elem(), "derivative of the generator")
}

fn table_commutativity_rejected() -> Result<(), String> {
    let base = base_qt();
    let zero = BaseElem::zero(1);
    let one = BaseElem::one(1);
    let mut consts = vec![
        vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), zero.clone()],
        ],
        vec![
            vec![zero.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ],
    ];
    consts[0][1] = vec![one.clone(), zero.clone()];
    let delta = vec![vec![vec![zero.clone(), zero.clone()]; 2]];
    let err = Extension::from_table(
        base,
        vec!["e1".to_string(), "e2".to_string()],
        consts,
        vec![one.clone(), one],
        delta,
    )
    .err()
    .ok_or("asymmetric table was accepted")?;
    match err {
        Error::InvalidAlgebra { invariant, .. } => {
            ensure_eq(&invariant.as_str(), &"commutativity", "violated invariant")
        }
        other => Err(format!("unexpected error {}", other)),
    }
}

fn table_split_algebra_accepted() -> Result<(), String> {
    let ext = split_ext(base_qt());
    ensure(
        ext.validate_extension().all_pass(),
        "split algebra fails validation",
    )
}

fn rank_one_validates() -> Result<(), String> {
    ensure(
        rank_one_ext().validate_extension().all_pass(),
        "rank one fails validation",
    )
}

fn generator_squared() -> Result<(), String> {
    let ext = sqrt_ext();
    let b = ext.basis_elem(1).unwrap();
    ensure_eq(
        &ext.ext_mul(&b, &b).coords,
        &vec![t_elem(), q(0)],
        "b*b coordinates",
    )
}

fn unit_is_neutral() -> Result<(), String> {
    let ext = sqrt_ext();
    let u = ExtElem::new(vec![t_elem(), q(3)]);
    ensure_eq(&ext.ext_mul(&ext.one_elem(), &u), &u, "1*u")
}

fn inverse_of_the_unit() -> Result<(), String> {
    let ext = sqrt_ext();
    let inv = ext.ext_inv(&ext.one_elem()).map_err(|e| e.to_string())?;
    ensure_eq(&inv, &ext.one_elem(), "inv(1)")
}

fn idempotent_not_invertible() -> Result<(), String> {
    let ext = split_ext(base_qt());
    let e1 = ext.basis_elem(0).unwrap();
    match ext.ext_inv(&e1) {
        Err(Error::NotInvertible) => Ok(()),
        Err(other) => Err(format!("unexpected error {}", other)),
        Ok(_) => Err("zero divisor was inverted".to_string()),
    }
}

fn derivative_of_the_generator() -> Result<(), String> {
    let ext = sqrt_ext();
    let b = ext.basis_elem(1).unwrap();
    let want = ExtElem::new(vec![
        q(0),
        q(1).div(&t_elem().scale(&num_rational::BigRational::from_integer(2.into())))
            .unwrap(),
    ]);
    ensure_eq(
        &ext.ext_delta(&b, 0).map_err(|e| e.to_string())?,
        &want,
        "delta(b)",
    )
}

fn derivative_of_the_unit() -> Result<(), String> {
    let ext = sqrt_ext();
    let d = ext
        .ext_delta(&ext.one_elem(), 0)
        .map_err(|e| e.to_string())?;
    ensure(d.is_zero(), "delta(1) is nonzero")
}

fn generator_derivative_coordinate() -> Result<(), String> {
    let ext = sqrt_ext();
    let b = ext.basis_elem(1).unwrap();
    let db = ext.ext_delta(&b, 0).unwrap();
    let want = q(1)
        .div(&t_elem().scale(&num_rational::BigRational::from_integer(2.into())))
        .unwrap();
    ensure_eq(
        &ext.lambda(1, &db).map_err(|e| e.to_string())?,
        &want,
        "second coordinate of delta(b)",
    )
}

fn dual_basis_relations() -> Result<(), String> {
    let ext = sqrt_ext();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { q(1) } else { q(0) };
            let got = ext.lambda(i, &ext.basis_elem(j).unwrap()).unwrap();
            ensure_eq(&got, &want, &format!("lambda_{}(b_{})", i + 1, j + 1))?;
        }
    }
    Ok(())
}

fn derivative_of_a_variable() -> Result<(), String> {
    let ext = sqrt_ext();
    let x = DPolyB::var(&ext, var_b("x", 0));
    let want = DPolyB::var(&ext, var_b("x", 1));
    ensure_eq(
        &natural_derive_b(&x, &ext, 0).map_err(|e| e.to_string())?,
        &want,
        "d(x)",
    )
}

fn derivative_of_generator_times_variable() -> Result<(), String> {
    let ext = sqrt_ext();
    let b = ext.basis_elem(1).unwrap();
    let db = ext.ext_delta(&b, 0).unwrap();
    let f = DPolyB::var(&ext, var_b("x", 0)).scale(&ext, &b);
    let want = DPolyB::var(&ext, var_b("x", 0))
        .scale(&ext, &db)
        .add(&ext, &DPolyB::var(&ext, var_b("x", 1)).scale(&ext, &b));
    ensure_eq(
        &natural_derive_b(&f, &ext, 0).map_err(|e| e.to_string())?,
        &want,
        "d(b*x)",
    )
}

fn derivative_of_a_square() -> Result<(), String> {
    let ext = sqrt_ext();
    let x = DPolyB::var(&ext, var_b("x", 0));
    let f = x.mul(&ext, &x);
    let want = x
        .mul(&ext, &DPolyB::var(&ext, var_b("x", 1)))
        .scale(&ext, &ext.scalar_embed(&q(2)));
    ensure_eq(
        &natural_derive_b(&f, &ext, 0).map_err(|e| e.to_string())?,
        &want,
        "d(x^2)",
    )
}

fn adding_zero() -> Result<(), String> {
    let ext = sqrt_ext();
    let b = ext.basis_elem(1).unwrap();
    let x = DPolyB::var(&ext, var_b("x", 0));
    let f = x.mul(&ext, &x).add(&ext, &x.scale(&ext, &b));
    ensure_eq(&f.add(&ext, &DPolyB::zero()), &f, "f + 0")
}

fn product_of_variables() -> Result<(), String> {
    let ext = sqrt_ext();
    let x = DPolyB::var(&ext, var_b("x", 0));
    let sq = x.mul(&ext, &x);
    let terms: Vec<_> = sq.terms_desc().collect();
    ensure_eq(&terms.len(), &1usize, "term count")?;
    let (mono, coeff) = &terms[0];
    ensure_eq(coeff, &&ext.one_elem(), "coefficient")?;
    let factors: Vec<_> = mono.factors_desc().collect();
    ensure_eq(&factors, &vec![(&var_b("x", 0), 2u32)], "exponents")
}

fn evaluation_at_the_unit() -> Result<(), String> {
    let ext = sqrt_ext();
    let x = DPolyB::var(&ext, var_b("x", 0));
    let mut point = IndexMap::new();
    point.insert("x".to_string(), ext.one_elem());
    ensure_eq(
        &eval_b(&x, &point, &ext).map_err(|e| e.to_string())?,
        &ext.one_elem(),
        "x at 1",
    )
}

fn evaluation_kills_the_minimal_polynomial() -> Result<(), String> {
    let ext = sqrt_ext();
    let x = DPolyB::var(&ext, var_b("x", 0));
    let f = x
        .mul(&ext, &x)
        .sub(&ext, &DPolyB::constant(&ext, ext.scalar_embed(&t_elem())));
    let mut point = IndexMap::new();
    point.insert("x".to_string(), ext.basis_elem(1).unwrap());
    ensure(
        eval_b(&f, &point, &ext)
            .map_err(|e| e.to_string())?
            .is_zero(),
        "x^2 - t at b is nonzero",
    )
}

fn components_of_a_variable() -> Result<(), String> {
    let ext = sqrt_ext();
    let base = ext.base();
    let g = unit_expand(&DPolyB::var(&ext, var_b("x", 0)), &ext);
    let want = vec![
        DPolyA::var(base, var_a("x", 0, 1)),
        DPolyA::var(base, var_a("x", 0, 2)),
    ];
    ensure_eq(&g, &want, "components of x")
}

fn constant_basis_derivation_is_a_bump() -> Result<(), String> {
    let ext = constant_sqrt_ext();
    let base = ext.base();
    for order in 0..2u32 {
        for i in 1..=2usize {
            let got = descent_derivation_var(&ext, "x", &theta(&[order]), i, 0)
                .map_err(|e| e.to_string())?;
            let want = DPolyA::var(base, var_a("x", order + 1, i));
            ensure_eq(&got, &want, &format!("component {} at order {}", i, order))?;
        }
    }
    Ok(())
}

fn descent_derivation_on_scalars() -> Result<(), String> {
    let ext = sqrt_ext();
    let base = ext.base();
    let a = t_elem().mul(&t_elem());
    let g = DPolyA::constant(base, a.clone());
    let got = apply_descent_derivation(&g, &ext, 0).map_err(|e| e.to_string())?;
    ensure_eq(
        &got,
        &DPolyA::constant(base, base.derive(&a, 0)),
        "dW on a scalar",
    )
}

fn descent_of_the_first_order_system() -> Result<(), String> {
    let ext = sqrt_ext();
    let base = ext.base();
    let fs = vec![DPolyB::var(&ext, var_b("x", 1))];
    let sys = descend_system(&fs, &ext, &["x".to_string()]).map_err(|e| e.to_string())?;
    ensure_eq(&sys.generators.len(), &2usize, "generator count")?;
    ensure_eq(
        &sys.generators[0].poly,
        &DPolyA::var(base, var_a("x", 1, 1)),
        "component 1",
    )?;
    ensure_eq(
        &sys.generators[1].poly,
        &DPolyA::var(base, var_a("x", 1, 2)),
        "component 2",
    )?;
    let half_inv_t = q(1)
        .div(&t_elem().scale(&num_rational::BigRational::from_integer(2.into())))
        .unwrap();
    let row = sys
        .derivation_table
        .iter()
        .find(|e| e.derivation == 0 && e.var == var_a("x", 0, 2))
        .ok_or("missing table row for the second component")?;
    let want = DPolyA::var(base, var_a("x", 1, 2)).sub(
        base,
        &DPolyA::var(base, var_a("x", 0, 2)).scale(base, &half_inv_t),
    );
    ensure_eq(&row.value, &want, "table row")
}

fn descent_of_the_empty_system() -> Result<(), String> {
    let ext = sqrt_ext();
    let sys = descend_system(&[], &ext, &["x".to_string()]).map_err(|e| e.to_string())?;
    ensure(sys.generators.is_empty(), "generators not empty")?;
    ensure_eq(&sys.derivation_table.len(), &4usize, "table rows")
}

fn geometric_form_of_the_example() -> Result<(), String> {
    let ext = sqrt_ext();
    let base = ext.base();
    let fs = vec![DPolyB::var(&ext, var_b("x", 1))];
    let sys = descend_system(&fs, &ext, &["x".to_string()]).map_err(|e| e.to_string())?;
    let geo = to_geometric_form(&sys).map_err(|e| e.to_string())?;
    let half_inv_t = q(1)
        .div(&t_elem().scale(&num_rational::BigRational::from_integer(2.into())))
        .unwrap();
    let want = vec![
        DPolyA::var(base, var_a("x", 1, 1)),
        DPolyA::var(base, var_a("x", 1, 2)).add(
            base,
            &DPolyA::var(base, var_a("x", 0, 2)).scale(base, &half_inv_t),
        ),
    ];
    ensure_eq(&geo, &want, "geometric polynomials")?;
    let lines: Vec<String> = geo
        .iter()
        .map(|p| cli::render::render_equation(p, base, |v| cli::render::geometric_var(v, base)))
        .collect();
    ensure_eq(
        &lines,
        &vec![
            "d(x_1) = 0".to_string(),
            "d(x_2) + (1/(2*t))*x_2 = 0".to_string(),
        ],
        "rendered equations",
    )
}

fn geometric_form_with_constant_basis() -> Result<(), String> {
    let ext = constant_sqrt_ext();
    let base = ext.base();
    let fs = vec![DPolyB::var(&ext, var_b("x", 1))];
    let sys = descend_system(&fs, &ext, &["x".to_string()]).map_err(|e| e.to_string())?;
    let geo = to_geometric_form(&sys).map_err(|e| e.to_string())?;
    let want = vec![
        DPolyA::var(base, var_a("x", 1, 1)),
        DPolyA::var(base, var_a("x", 1, 2)),
    ];
    ensure_eq(&geo, &want, "geometric polynomials")
}

fn geometric_form_rank_one() -> Result<(), String> {
    let ext = rank_one_ext();
    let base = ext.base();
    let fs = vec![DPolyB::var(&ext, var_b("x", 1))];
    let sys = descend_system(&fs, &ext, &["x".to_string()]).map_err(|e| e.to_string())?;
    let geo = to_geometric_form(&sys).map_err(|e| e.to_string())?;
    ensure_eq(
        &geo,
        &vec![DPolyA::var(base, var_a("x", 1, 1))],
        "geometric polynomials",
    )
}

fn prolongation_identity_on_the_unit() -> Result<(), String> {
    let ext = sqrt_ext();
    let f = DPolyB::constant(&ext, ext.one_elem());
    match check_prolongation_identity(&f, &ext, 0).map_err(|e| e.to_string())? {
        None => Ok(()),
        Some(witness) => Err(witness),
    }
}

fn bracket_on_a_constants_basis() -> Result<(), String> {
    let mut base = BaseField::new(vec!["t".to_string(), "s".to_string()]);
    base.add_derivation("d1", vec![BaseElem::one(2), BaseElem::zero(2)])
        .unwrap();
    base.add_derivation("d2", vec![BaseElem::zero(2), BaseElem::one(2)])
        .unwrap();
    let ext = split_ext(base);
    let mut rng = crate::sample::rng(7);
    for _ in 0..5 {
        let sample = crate::sample::random_dpoly_a(&mut rng, &ext, &["x"], 2, 2, 3);
        let ok = check_bracket(&ext, 0, 1, &sample, None).map_err(|e| e.to_string())?;
        ensure(ok, "bracket is nonzero on a random sample")?;
    }
    Ok(())
}

fn counit_on_rank_one() -> Result<(), String> {
    let ext = rank_one_ext();
    let base = ext.base();
    let g = DPolyA::var(base, var_a("x", 1, 1)).add(
        base,
        &DPolyA::var(base, var_a("x", 0, 1)).scale(base, &t_elem()),
    );
    let want = DPolyBase::var(base, var_b("x", 1)).add(
        base,
        &DPolyBase::var(base, var_b("x", 0)).scale(base, &t_elem()),
    );
    ensure_eq(&counit_poly(&g, &ext), &want, "counit substitution")
}

fn identity_morphism_descends_to_identity() -> Result<(), String> {
    let ext = sqrt_ext();
    let base = ext.base();
    let mut images = IndexMap::new();
    images.insert("x".to_string(), DPolyB::var(&ext, var_b("x", 0)));
    let targets = vec![var_a("x", 0, 1), var_a("x", 0, 2), var_a("x", 1, 2)];
    let map = descend_morphism(&images, &ext, &targets).map_err(|e| e.to_string())?;
    for v in &targets {
        ensure_eq(
            &map[v],
            &DPolyA::var(base, v.clone()),
            &format!("image of {}", v),
        )?;
    }
    Ok(())
}

fn coordinates_of_the_generator_point() -> Result<(), String> {
    let ext = sqrt_ext();
    let mut p = IndexMap::new();
    p.insert("x".to_string(), ext.basis_elem(1).unwrap());
    let split = split_point(&BPoint::new(p), &ext);
    ensure_eq(
        &split.assignment[&("x".to_string(), 1)],
        &q(0),
        "first coordinate",
    )?;
    ensure_eq(
        &split.assignment[&("x".to_string(), 2)],
        &q(1),
        "second coordinate",
    )
}

fn coordinates_of_a_rational_point() -> Result<(), String> {
    let ext = sqrt_ext();
    let mut p = IndexMap::new();
    p.insert("x".to_string(), ext.scalar_embed(&q(3)));
    let split = split_point(&BPoint::new(p), &ext);
    ensure_eq(
        &split.assignment[&("x".to_string(), 1)],
        &q(3),
        "first coordinate",
    )?;
    ensure_eq(
        &split.assignment[&("x".to_string(), 2)],
        &q(0),
        "second coordinate",
    )
}

fn correspondence_on_a_vanishing_point() -> Result<(), String> {
    let ext = sqrt_ext();
    let x = DPolyB::var(&ext, var_b("x", 0));
    let f = x
        .mul(&ext, &x)
        .sub(&ext, &DPolyB::constant(&ext, ext.scalar_embed(&t_elem())));
    let mut p = IndexMap::new();
    p.insert("x".to_string(), ext.basis_elem(1).unwrap());
    let report = check_correspondence(&[f], &BPoint::new(p), &ext).map_err(|e| e.to_string())?;
    ensure(report.identity_holds(), "evaluation identity fails")?;
    ensure(report.original_vanishes(), "original value is nonzero")?;
    ensure(report.descended_vanishes(), "descended values are nonzero")?;
    ensure(report.verdicts_agree(), "verdicts disagree")
}

fn correspondence_on_a_nonvanishing_point() -> Result<(), String> {
    let ext = sqrt_ext();
    let f = DPolyB::var(&ext, var_b("x", 0));
    let mut p = IndexMap::new();
    p.insert("x".to_string(), ext.one_elem());
    let report = check_correspondence(&[f], &BPoint::new(p), &ext).map_err(|e| e.to_string())?;
    ensure(report.identity_holds(), "evaluation identity fails")?;
    ensure_eq(&report.entries[0].value, &ext.one_elem(), "original value")?;
    ensure_eq(
        &report.entries[0].component_values,
        &vec![q(1), q(0)],
        "component values",
    )?;
    ensure(
        !report.original_vanishes() && !report.descended_vanishes(),
        "unexpected vanishing",
    )?;
    ensure(report.verdicts_agree(), "verdicts disagree")
}

fn differential_point_at_zero() -> Result<(), String> {
    let ext = sqrt_ext();
    let fs = vec![DPolyB::var(&ext, var_b("x", 1))];
    let sys = descend_system(&fs, &ext, &["x".to_string()]).map_err(|e| e.to_string())?;
    let mut p = IndexMap::new();
    p.insert("x".to_string(), ext.zero_elem());
    let report = check_differential_point(&sys, &BPoint::new(p)).map_err(|e| e.to_string())?;
    ensure(report.identity_holds(), "evaluation identity fails")?;
    ensure(report.original_vanishes(), "original residual is nonzero")?;
    ensure(report.descended_vanishes(), "descended residual is nonzero")?;
    ensure(report.verdicts_agree(), "verdicts disagree")
}

fn battery_alphabet() -> parser::Alphabet {
    parser::Alphabet::new(vec!["t", "b", "x", "x_2"], vec!["d"])
}

fn prime_parses_as_the_first_derivation() -> Result<(), String> {
    let ast = parser::parse_expr("x'", &battery_alphabet()).map_err(|e| e.to_string())?;
    let want = parser::ExprAst::DApp(
        "d".to_string(),
        Box::new(parser::ExprAst::Var("x".to_string())),
    );
    ensure_eq(&ast, &want, "ast")
}

fn minimal_polynomial_expression_parses() -> Result<(), String> {
    let ast = parser::parse_expr("b^2 - t", &battery_alphabet()).map_err(|e| e.to_string())?;
    let want = parser::ExprAst::Sub(
        Box::new(parser::ExprAst::Pow(
            Box::new(parser::ExprAst::Var("b".to_string())),
            2,
        )),
        Box::new(parser::ExprAst::Var("t".to_string())),
    );
    ensure_eq(&ast, &want, "ast")
}

fn geometric_equation_expression_parses() -> Result<(), String> {
    let ast =
        parser::parse_expr("d(x_2) + x_2/(2*t)", &battery_alphabet()).map_err(|e| e.to_string())?;
    let two = parser::ExprAst::Number(num_rational::BigRational::from_integer(2.into()));
    let want = parser::ExprAst::Add(
        Box::new(parser::ExprAst::DApp(
            "d".to_string(),
            Box::new(parser::ExprAst::Var("x_2".to_string())),
        )),
        Box::new(parser::ExprAst::Div(
            Box::new(parser::ExprAst::Var("x_2".to_string())),
            Box::new(parser::ExprAst::Mul(
                Box::new(two),
                Box::new(parser::ExprAst::Var("t".to_string())),
            )),
        )),
    );
    ensure_eq(&ast, &want, "ast")
}

fn lowering_a_derivative_variable() -> Result<(), String> {
    let ext = sqrt_ext();
    let alphabet = parser::Alphabet::new(vec!["t", "b", "x"], vec!["d"]);
    let ast = parser::parse_expr("x'", &alphabet).map_err(|e| e.to_string())?;
    let got = cli::lower::lower_eq(&ast, &ext, &["x".to_string()]).map_err(|e| e.to_string())?;
    ensure_eq(
        &got,
        &DPolyB::var(&ext, var_b("x", 1)),
        "lowered polynomial",
    )
}

fn lowering_a_base_fraction() -> Result<(), String> {
    let base = base_qt();
    let alphabet = parser::Alphabet::new(vec!["t"], vec!["d"]);
    let ast = parser::parse_expr("1/(2*t)", &alphabet).map_err(|e| e.to_string())?;
    let got = cli::lower::lower_base(&ast, &base).map_err(|e| e.to_string())?;
    let want = q(1)
        .div(&t_elem().scale(&num_rational::BigRational::from_integer(2.into())))
        .unwrap();
    ensure_eq(&got, &want, "lowered value")
}

const EXAMPLE_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "1"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b^2 - t"},
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

const RANK_ONE_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "1"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b - t"},
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

const CONSTANT_DELTA_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "0"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b^2 - t"},
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

fn golden_descend_output() -> Result<(), String> {
    let loaded = cli::load_input_str(EXAMPLE_JSON, true).map_err(|e| e.to_string())?;
    let out = cli::run_descend(&loaded, true, 0, OutputFormat::Text).map_err(|e| e.to_string())?;
    ensure_eq(
        &out,
        &"d(x_1) = 0\nd(x_2) + (1/(2*t))*x_2 = 0\n".to_string(),
        "geometric text output",
    )
}

fn rank_one_descend_output() -> Result<(), String> {
    let loaded = cli::load_input_str(RANK_ONE_JSON, true).map_err(|e| e.to_string())?;
    let out = cli::run_descend(&loaded, true, 0, OutputFormat::Text).map_err(|e| e.to_string())?;
    ensure_eq(&out, &"d(x_1) = 0\n".to_string(), "geometric text output")
}

/// Negative control: replacing the table coefficients with the identity
/// matrix must break the derivative-compatibility identity, otherwise the
/// battery could not distinguish the correct table from a plausible wrong
/// one.
fn wrong_table_coefficients_are_caught() -> Result<(), String> {
    let ext = sqrt_ext();
    let f = DPolyB::var(&ext, var_b("x", 0));
    let identity = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
    match check_prolongation_identity_with_coeffs(&f, &ext, 0, &identity)
        .map_err(|e| e.to_string())?
    {
        Some(_) => Ok(()),
        None => Err("identity coefficients passed the compatibility check".to_string()),
    }
}

fn vanishing_generator_derivative_output() -> Result<(), String> {
    let loaded = cli::load_input_str(CONSTANT_DELTA_JSON, true).map_err(|e| e.to_string())?;
    let out = cli::run_descend(&loaded, true, 0, OutputFormat::Text).map_err(|e| e.to_string())?;
    ensure_eq(
        &out,
        &"d(x_1) = 0\nd(x_2) = 0\n".to_string(),
        "geometric text output",
    )
}
