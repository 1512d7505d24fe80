//! Acceptance gate: one test per release criterion, each asserting exact
//! symbolic identities and printing a `pass:` line on success. Budgeted
//! criteria also assert their wall-clock limits.

#![allow(clippy::needless_range_loop)]

use std::time::{Duration, Instant};

use indexmap::IndexMap;

use weildesc::cli::{self, OutputFormat};
use weildesc::descent::{
    check_bracket, check_linearity, check_prolongation_identity,
    check_prolongation_identity_with_coeffs, descend_system, enumerate_indices, oracle_geometric,
    to_geometric_form, unit_expand,
};
use weildesc::diffpoly::{DPolyA, DPolyB, VarA, VarB};
use weildesc::extension::Extension;
use weildesc::points::{check_correspondence, check_differential_point, BPoint};
use weildesc::{BaseElem, BaseField, Error};

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

fn cbrt_ext() -> Extension {
    Extension::from_minpoly(base_qt(), "b", vec![t_elem().neg(), q(0), q(0), q(1)]).unwrap()
}

/// The split algebra `A[v]/(v^2 - t^2)` presented as a raw table with basis
/// `(1, v)`, whose derivation matrix is nonzero: `delta(v) = v/t`.
fn split_table_ext() -> Extension {
    let zero = q(0);
    let one = q(1);
    let t2 = t_elem().mul(&t_elem());
    let consts = vec![
        vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ],
        vec![vec![zero.clone(), one.clone()], vec![t2, zero.clone()]],
    ];
    let inv_t = one.clone().div(&t_elem()).unwrap();
    let delta = vec![vec![
        vec![zero.clone(), zero.clone()],
        vec![zero.clone(), inv_t],
    ]];
    Extension::from_table(
        base_qt(),
        vec!["u".to_string(), "v".to_string()],
        consts,
        vec![one, zero],
        delta,
    )
    .unwrap()
}

fn two_derivation_sqrt_ext() -> Extension {
    let mut base = BaseField::new(vec!["t".to_string(), "s".to_string()]);
    base.add_derivation("d1", vec![BaseElem::one(2), BaseElem::zero(2)])
        .unwrap();
    base.add_derivation("d2", vec![BaseElem::zero(2), BaseElem::one(2)])
        .unwrap();
    let t = BaseElem::var(2, 0);
    let zero = BaseElem::zero(2);
    let one = BaseElem::one(2);
    Extension::from_minpoly(base, "b", vec![t.neg(), zero, one]).unwrap()
}

const EXAMPLE_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "1"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b^2 - t"},
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

const CONSTANT_DELTA_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "0"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b^2 - t"},
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

#[test]
fn golden_output_of_the_first_order_example() {
    let start = Instant::now();
    let loaded = cli::load_input_str(EXAMPLE_JSON, true).unwrap();
    let out = cli::run_descend(&loaded, true, 0, OutputFormat::Text).unwrap();
    assert_eq!(out, "d(x_1) = 0\nd(x_2) + (1/(2*t))*x_2 = 0\n");
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "took {:?}, budget is 1 s",
        elapsed
    );
    println!(
        "pass: golden geometric output of the first-order example ({:?})",
        elapsed
    );
}

#[test]
fn constant_basis_specialization() {
    let mut base = BaseField::new(vec!["t".to_string()]);
    base.add_derivation("d", vec![BaseElem::zero(1)]).unwrap();
    let ext = Extension::from_minpoly(base, "b", vec![t_elem().neg(), q(0), q(1)]).unwrap();
    let fs = vec![DPolyB::var(
        &ext,
        VarB::new("x", weildesc::diffpoly::DerivIndex(vec![1])),
    )];
    let sys = descend_system(&fs, &ext, &["x".to_string()]).unwrap();
    for entry in &sys.derivation_table {
        let bumped = VarA::new(
            &entry.var.name,
            entry.var.theta.bump(entry.derivation),
            entry.var.component,
        );
        assert_eq!(entry.value, DPolyA::var(ext.base(), bumped));
    }
    let loaded = cli::load_input_str(CONSTANT_DELTA_JSON, true).unwrap();
    let out = cli::run_descend(&loaded, true, 0, OutputFormat::Text).unwrap();
    assert_eq!(out, "d(x_1) = 0\nd(x_2) = 0\n");
    println!("pass: constant-basis tables reduce to plain derivative bumps");
}

#[test]
fn derivative_compatibility_across_extensions() {
    let start = Instant::now();
    let extensions = [sqrt_ext(), cbrt_ext(), split_table_ext()];
    for (which, ext) in extensions.iter().enumerate() {
        let mut rng = weildesc::sample::rng(100 + which as u64);
        for trial in 0..100 {
            let f = weildesc::sample::random_dpoly_b(&mut rng, ext, &["x"], 2, 3, 3);
            match check_prolongation_identity(&f, ext, 0) {
                Ok(None) => {}
                Ok(Some(witness)) => {
                    panic!("extension {}, trial {}: {}", which, trial, witness)
                }
                Err(e) => panic!("extension {}, trial {}: {}", which, trial, e),
            }
        }
    }

    // Negative control: perturb one table scalar and require a failure.
    let ext = sqrt_ext();
    let mut coeffs = ext.delta_matrix(0).clone();
    coeffs[1][1] = coeffs[1][1].add(&q(1));
    let f = DPolyB::var(
        &ext,
        VarB::new("x", weildesc::diffpoly::DerivIndex(vec![0])),
    );
    let verdict = check_prolongation_identity_with_coeffs(&f, &ext, 0, &coeffs).unwrap();
    assert!(verdict.is_some(), "perturbed coefficients were not caught");

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "took {:?}, budget is 30 s",
        elapsed
    );
    println!(
        "pass: derivative compatibility on 3 extensions x 100 samples, perturbation caught ({:?})",
        elapsed
    );
}

#[test]
fn unit_expansion_is_multiplicative() {
    let ext = sqrt_ext();
    let base = ext.base();
    let mut rng = weildesc::sample::rng(4);
    for trial in 0..100 {
        let f = weildesc::sample::random_dpoly_b(&mut rng, &ext, &["x"], 1, 2, 2);
        let g = weildesc::sample::random_dpoly_b(&mut rng, &ext, &["x"], 1, 2, 2);
        let prod = unit_expand(&f.mul(&ext, &g), &ext);
        let fc = unit_expand(&f, &ext);
        let gc = unit_expand(&g, &ext);
        for k in 0..ext.ell() {
            let mut rhs = DPolyA::zero();
            for i in 0..ext.ell() {
                for j in 0..ext.ell() {
                    let c = &ext.basis_mul(i, j)[k];
                    if c.is_zero() {
                        continue;
                    }
                    rhs = rhs.add(base, &fc[i].mul(base, &gc[j]).scale(base, c));
                }
            }
            assert_eq!(prod[k], rhs, "trial {}, component {}", trial, k + 1);
        }
    }
    println!("pass: componentwise product law on 100 random pairs");
}

#[test]
fn bracket_vanishes_and_descent_is_linear() {
    let ext = two_derivation_sqrt_ext();
    let base = ext.base();

    for theta in enumerate_indices(2, 2) {
        for i in 1..=ext.ell() {
            let v = DPolyA::var(base, VarA::new("x", theta.clone(), i));
            assert!(
                check_bracket(&ext, 0, 1, &v, None).unwrap(),
                "bracket nonzero on component {} at {}",
                i,
                theta
            );
        }
    }

    let mut rng = weildesc::sample::rng(5);
    for trial in 0..50 {
        let sample = weildesc::sample::random_dpoly_a(&mut rng, &ext, &["x"], 2, 2, 3);
        assert!(
            check_bracket(&ext, 0, 1, &sample, None).unwrap(),
            "bracket nonzero on random sample {}",
            trial
        );
        let a1 = weildesc::sample::random_base_elem_light(&mut rng, base.nvars());
        let a2 = weildesc::sample::random_base_elem_light(&mut rng, base.nvars());
        assert!(
            check_linearity(&ext, &a1, &a2, 0, 1, &sample).unwrap(),
            "linear combination law fails on sample {}",
            trial
        );
    }
    println!("pass: bracket vanishes through order 2 and on 50 random samples, linearity holds");
}

#[test]
fn geometric_form_matches_the_expansion_oracle() {
    let ext = sqrt_ext();
    let mut rng = weildesc::sample::rng(6);
    for trial in 0..100 {
        let f = weildesc::sample::random_dpoly_b(&mut rng, &ext, &["x"], 2, 3, 3);
        let sys = descend_system(std::slice::from_ref(&f), &ext, &["x".to_string()]).unwrap();
        let geo = to_geometric_form(&sys).unwrap();
        assert_eq!(geo, oracle_geometric(&f, &ext), "trial {}", trial);
    }
    println!("pass: geometric rewrite equals the expand-and-collect oracle on 100 systems");
}

#[test]
fn point_correspondence_algebraic_and_differential() {
    let ext = sqrt_ext();
    let mut rng = weildesc::sample::rng(7);
    for trial in 0..100 {
        let fs: Vec<DPolyB> = (0..2)
            .map(|_| weildesc::sample::random_dpoly_b_order0(&mut rng, &ext, &["x", "y"], 2, 3))
            .collect();
        let p = BPoint::new(weildesc::sample::random_bpoint(&mut rng, &ext, &["x", "y"]));
        let report = check_correspondence(&fs, &p, &ext).unwrap();
        assert!(report.identity_holds(), "trial {}", trial);
        assert!(report.verdicts_agree(), "trial {}", trial);
    }

    let fs = vec![DPolyB::var(
        &ext,
        VarB::new("x", weildesc::diffpoly::DerivIndex(vec![1])),
    )];
    let sys = descend_system(&fs, &ext, &["x".to_string()]).unwrap();
    for trial in 0..50 {
        let mut assignment = IndexMap::new();
        assignment.insert(
            "x".to_string(),
            weildesc::sample::random_ext_elem(&mut rng, &ext),
        );
        let report = check_differential_point(&sys, &BPoint::new(assignment)).unwrap();
        assert!(report.identity_holds(), "differential trial {}", trial);
        assert!(report.verdicts_agree(), "differential trial {}", trial);
    }
    println!("pass: 100 algebraic and 50 differential point checks agree on both sides");
}

#[test]
fn minimal_polynomial_construction_validity() {
    let candidates: Vec<(&str, Vec<BaseElem>)> = vec![
        ("b^2 - t", vec![t_elem().neg(), q(0), q(1)]),
        ("b^3 - t", vec![t_elem().neg(), q(0), q(0), q(1)]),
        ("b^2 + 1", vec![q(1), q(0), q(1)]),
    ];
    for (label, coeffs) in candidates {
        let ext = Extension::from_minpoly(base_qt(), "b", coeffs).unwrap();
        let report = ext.validate_extension();
        assert!(report.all_pass(), "{}: {:?}", label, report.first_failure());
    }
    let err = Extension::from_minpoly(base_qt(), "b", vec![q(0), q(0), q(1)]).unwrap_err();
    assert!(
        matches!(err, Error::NotSeparable),
        "b^2 should be rejected as inseparable, got {}",
        err
    );
    println!("pass: three separable minimal polynomials validate, the inseparable one is rejected");
}
