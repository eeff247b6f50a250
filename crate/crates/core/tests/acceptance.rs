//! One PASS/FAIL line per acceptance criterion; the test fails if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{fixture, gaussian, props};
use galois_descent::cli::{cmd_check_model, cmd_descend, parse_problem, CommandOptions};
use galois_descent::descent::{check_datum, descend, maps_equal_mod_ideal, DescentOptions};
use galois_descent::groebner::{eliminate, groebner, ideals_equal, saturate, Budget, Ideal};
use galois_descent::invariants::{generate_invariants, BlockPermutationAction};
use galois_descent::multipoly::{compose_map, parse_poly, MonomialOrder, MultiPoly, PolyRing};
use galois_descent::Error;
use toml::Table;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn budget() -> Budget {
    Budget::default()
}

fn strings(doc: &Table, section: &str, key: &str) -> Vec<String> {
    doc[section][key]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect()
}

/// The Y ideal of a result document, in a ring over the problem's field.
fn document_ideal(doc: &Table, field_ring: &Arc<PolyRing>) -> Ideal {
    let vars = strings(doc, "Y", "variables");
    let ring = PolyRing::new(field_ring.field().clone(), vars, MonomialOrder::GrevLex);
    let gens = strings(doc, "Y", "equations").iter().map(|e| parse_poly(e, &ring).unwrap()).collect();
    Ideal::new(&ring, gens)
}

fn certificates_true(doc: &Table) -> Outcome {
    let certs = doc["certificates"].as_table().ok_or("no certificates")?;
    for (k, v) in certs {
        ensure(v.as_bool() != Some(false), format!("certificate {k} is false"))?;
    }
    ensure(certs.len() == 8, "expected eight certificates")
}

fn humbert_golden() -> Outcome {
    let text = fixture("humbert.toml");
    let problem = parse_problem(&text, &budget()).map_err(|e| e.to_string())?;
    let x_ring = problem.datum.variety().ring().clone();

    let start = Instant::now();
    let out = cmd_descend(&text, &CommandOptions::default());
    let elapsed = start.elapsed();
    ensure(out.code == 0, format!("descend exited {}: {}", out.code, out.stderr))?;
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    let doc: Table = out.stdout.parse().map_err(|e| format!("{e}"))?;
    certificates_true(&doc)?;
    let y = document_ideal(&doc, &x_ring);
    ensure(y.ring().nvars() == 14, "expected 14 coordinates before pruning")?;
    ensure(
        y.generators().iter().all(MultiPoly::has_rational_coefficients),
        "Y has a non-fixed coefficient",
    )?;

    let pruned = cmd_descend(
        &text,
        &CommandOptions {
            prune: true,
            ..CommandOptions::default()
        },
    );
    ensure(pruned.code == 0, pruned.stderr.clone())?;
    let doc: Table = pruned.stdout.parse().map_err(|e| format!("{e}"))?;
    certificates_true(&doc)?;
    let y = document_ideal(&doc, &x_ring);
    ensure(y.ring().nvars() == 4, "pruning should keep four coordinates")?;
    let w: Vec<String> = y.ring().vars().to_vec();
    let expected = ["4 + w2^2 - w3^2", "w1^2 + w2*w3", "w1^2 + w4^2 - 2"]
        .iter()
        .map(|e| {
            let e = (1..=4).rev().fold(e.to_string(), |acc, k| acc.replace(&format!("w{k}"), &w[k - 1]));
            parse_poly(&e, y.ring()).unwrap()
        })
        .collect();
    let expected = Ideal::new(y.ring(), expected);
    ensure(
        ideals_equal(&y, &expected, &budget()).map_err(|e| e.to_string())?,
        "pruned ideal differs from the expected quartic model",
    )
}

fn paper_model_accepted() -> Outcome {
    let out = cmd_check_model(
        &fixture("humbert.toml"),
        &fixture("humbert_model.toml"),
        false,
        &CommandOptions::default(),
    );
    ensure(out.code == 0, format!("exit {}: {}{}", out.code, out.stdout, out.stderr))?;
    ensure(
        out.stdout == "PASS y_over_k\nPASS image\nPASS relation\nPASS inverse\n",
        out.stdout.clone(),
    )
}

fn invariant_counts() -> Outcome {
    let group = gaussian();
    let four = generate_invariants(&BlockPermutationAction::new(&group, 4), &budget()).map_err(|e| e.to_string())?;
    ensure(four.generators.len() == 14, format!("n = 4 gave {}", four.generators.len()))?;
    let action = BlockPermutationAction::new(&group, 1);
    let one = generate_invariants(&action, &budget()).map_err(|e| e.to_string())?;
    let mut got: Vec<String> = one.generators.iter().map(|g| g.to_string()).collect();
    got.sort();
    let mut want: Vec<String> = ["y_e_1 + y_s_1", "y_e_1*y_s_1"]
        .iter()
        .map(|e| parse_poly(e, action.ring()).unwrap().to_string())
        .collect();
    want.sort();
    ensure(got == want, format!("n = 1 gave {got:?}"))
}

/// Single-token edits of the datum, each of which must be rejected.
const MUTATIONS: [(&str, &str, &str); 6] = [
    ("component swap in x2", "x2 = \"i*x3\"", "x2 = \"i*x2\""),
    ("component swap in x1", "x1 = \"i*x1\"", "x1 = \"i*x4\""),
    ("sign flip in x2", "x2 = \"i*x3\"", "x2 = \"-i*x3\""),
    ("sign flip in x3", "x3 = \"i*x2\"", "x3 = \"-i*x2\""),
    ("coefficient 2i in x1", "x1 = \"i*x1\"", "x1 = \"2*i*x1\""),
    ("coefficient 1 in x1", "x1 = \"i*x1\"", "x1 = \"x1\""),
];

fn witness_of(e: &Error) -> Option<&str> {
    match e {
        Error::CocycleViolation { witness, .. } | Error::NotIntoConjugate { witness, .. } => Some(witness),
        _ => None,
    }
}

fn mutation_suite() -> Outcome {
    let text = fixture("humbert.toml");
    let ok = parse_problem(&text, &budget()).map_err(|e| e.to_string())?;
    let report = check_datum(&ok.datum, &budget()).map_err(|e| e.to_string())?;
    ensure(report.passed(), "the unmutated datum fails")?;
    for (name, from, to) in MUTATIONS {
        ensure(text.contains(from), format!("{name}: pattern not found"))?;
        let mutated = text.replace(from, to);
        let problem = parse_problem(&mutated, &budget()).map_err(|e| format!("{name}: {e}"))?;
        let report = check_datum(&problem.datum, &budget()).map_err(|e| format!("{name}: {e}"))?;
        let err = report.failure.ok_or(format!("{name}: accepted"))?;
        let witness = witness_of(&err).ok_or(format!("{name}: unexpected error {err}"))?;
        ensure(!witness.is_empty() && witness != "0", format!("{name}: empty witness"))?;
        println!("      {name}: {err}");
    }
    Ok(())
}

fn property_suites() -> Outcome {
    props::trace_reconstruction(props::CASES)?;
    props::trace_fixedness(props::CASES)?;
    props::sigma_laws(props::CASES)?;
    props::psi_invariance(props::CASES)?;
    props::separation(props::CASES)
}

fn groebner_oracles() -> Outcome {
    let q = galois_descent::numberfield::NumberField::rationals();
    let vars = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let r = PolyRing::new(q.clone(), vars(&["x", "y", "z"]), MonomialOrder::GrevLex);
    let twisted = Ideal::new(&r, vec![parse_poly("y - x^2", &r).unwrap(), parse_poly("z - x^3", &r).unwrap()]);
    let image = eliminate(&twisted, &[0], &budget()).map_err(|e| e.to_string())?;
    let yz = image.ring().clone();
    let cusp = Ideal::new(&yz, vec![parse_poly("z^2 - y^3", &yz).unwrap()]);
    ensure(
        ideals_equal(&image, &cusp, &budget()).map_err(|e| e.to_string())?,
        "elimination did not give z^2 - y^3",
    )?;

    let problem = parse_problem(&fixture("humbert.toml"), &budget()).map_err(|e| e.to_string())?;
    let x = problem.datum.variety().ideal();
    let sum = x.sum(&x.sigma(problem.datum.group(), 1));
    let gb = groebner(&sum, &MonomialOrder::GrevLex, &budget()).map_err(|e| e.to_string())?;
    ensure(gb.is_unit(), "X and its conjugate meet")?;

    let xy = PolyRing::new(q, vars(&["x", "y"]), MonomialOrder::GrevLex);
    let i = Ideal::new(&xy, vec![parse_poly("x*y", &xy).unwrap()]);
    let sat = saturate(&i, &parse_poly("x", &xy).unwrap(), &budget()).map_err(|e| e.to_string())?;
    let want = Ideal::new(&xy, vec![parse_poly("y", &xy).unwrap()]);
    ensure(
        ideals_equal(&sat, &want, &budget()).map_err(|e| e.to_string())?,
        "saturation of <xy> by x is not <y>",
    )
}

const PIPELINE_FIXTURES: [&str; 6] = [
    "humbert.toml",
    "trivial.toml",
    "stable.toml",
    "conic.toml",
    "augment.toml",
    "cubic.toml",
];

fn y_rationality() -> Outcome {
    for name in PIPELINE_FIXTURES {
        let problem = parse_problem(&fixture(name), &budget()).map_err(|e| format!("{name}: {e}"))?;
        let d = &problem.datum;
        let result = descend(d, &DescentOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let group = d.group();
        for s in 0..group.len() {
            let conj = result.y.sigma(group, s);
            ensure(
                ideals_equal(&result.y, &conj, &budget()).map_err(|e| e.to_string())?,
                format!("{name}: I(Y) is not stable under {}", group.label(s)),
            )?;
            let rhs = compose_map(&result.map.sigma(group, s), &d.maps()[s]).map_err(|e| e.to_string())?;
            ensure(
                maps_equal_mod_ideal(&result.map, &rhs, d.variety().basis()).map_err(|e| e.to_string())?,
                format!("{name}: R differs from R^σ∘f_σ for {}", group.label(s)),
            )?;
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    for name in PIPELINE_FIXTURES {
        let text = fixture(name);
        for prune in [false, true] {
            let opts = CommandOptions {
                prune,
                ..CommandOptions::default()
            };
            let a = cmd_descend(&text, &opts);
            let b = cmd_descend(&text, &opts);
            ensure(a.code == 0, format!("{name}: exit {}", a.code))?;
            ensure(a == b, format!("{name} (prune = {prune}): outputs differ"))?;
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("Humbert descent: certificates, rational Y, pruned quartic model", humbert_golden),
        ("explicit model with inverse is accepted", paper_model_accepted),
        ("invariant counts: 14 for n = 4, {y_e + y_s, y_e*y_s} for n = 1", invariant_counts),
        ("datum mutations are rejected with witnesses", mutation_suite),
        ("randomized property suites", property_suites),
        ("Groebner oracles: elimination, unit ideal, saturation", groebner_oracles),
        ("Y stable under the group and R = R^s o f_s on every fixture", y_rationality),
        ("byte-identical documents across runs", determinism),
    ];
    println!();
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(()) => println!("PASS {}. {name}", k + 1),
            Err(e) => {
                println!("FAIL {}. {name}: {e}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
