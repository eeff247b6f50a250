//! Randomized property suites shared by the property tests and the
//! acceptance runner. Each suite uses a fixed seed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use galois_descent::groebner::Budget;
use galois_descent::invariants::{generate_invariants, BlockPermutationAction};
use galois_descent::multipoly::{Monomial, MonomialOrder, MultiPoly, PolyRing};
use galois_descent::numberfield::{FieldElement, GaloisGroup, Rational};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

use super::{cubic, gaussian, small_groups, sqrt2};

pub const CASES: u32 = 128;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn report<T: std::fmt::Debug>(name: &str, r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| format!("{name}: {e}"))
}

/// Raw terms: exponents, power-basis numerators, common denominator.
type RawPoly = Vec<(Vec<u32>, Vec<i64>, i64)>;

fn raw_poly(nvars: usize, degree: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..3, nvars),
            prop::collection::vec(-5i64..=5, degree),
            1i64..=4,
        ),
        0..5,
    )
}

fn build(ring: &Arc<PolyRing>, raw: &RawPoly) -> MultiPoly {
    let field = ring.field();
    let terms = raw
        .iter()
        .map(|(exps, num, den)| {
            let coeffs: Vec<Rational> = num.iter().map(|n| Rational::new((*n).into(), (*den).into())).collect();
            (Monomial::from_exps(exps.clone()), field.from_coeffs(&coeffs))
        })
        .collect();
    MultiPoly::from_terms(ring, terms)
}

fn ring_of(group: &GaloisGroup, nvars: usize) -> Arc<PolyRing> {
    let vars = (1..=nvars).map(|k| format!("x{k}")).collect();
    PolyRing::new(group.field().clone(), vars, MonomialOrder::GrevLex)
}

fn quadratic_groups() -> [Arc<GaloisGroup>; 2] {
    [gaussian(), sqrt2()]
}

/// P = Σ_j λ_j Tr(e_j P) over the power basis.
pub fn trace_reconstruction(cases: u32) -> Result<(), String> {
    for group in quadratic_groups().iter().chain([&cubic()]) {
        let ring = ring_of(group, 2);
        let basis = group.power_basis();
        let lambda = group.basis_matrix(&basis).unwrap().solve_trace_coefficients().unwrap();
        let m = group.field().degree();
        let r = runner(cases).run(&raw_poly(2, m), |raw| {
            let p = build(&ring, &raw);
            let rebuilt = basis
                .iter()
                .zip(&lambda)
                .fold(MultiPoly::zero(&ring), |acc, (e, l)| acc.add(&p.scale(e).trace(group).scale(l)));
            prop_assert_eq!(rebuilt, p);
            Ok(())
        });
        report("trace reconstruction", r)?;
    }
    Ok(())
}

/// Every Tr(e_j P) is fixed by every σ and has rational coefficients.
pub fn trace_fixedness(cases: u32) -> Result<(), String> {
    for group in quadratic_groups().iter().chain([&cubic()]) {
        let ring = ring_of(group, 3);
        let basis = group.power_basis();
        let m = group.field().degree();
        let r = runner(cases).run(&raw_poly(3, m), |raw| {
            let p = build(&ring, &raw);
            for e in &basis {
                let t = p.scale(e).trace(group);
                prop_assert!(t.has_rational_coefficients());
                for s in 0..group.len() {
                    prop_assert_eq!(&t.sigma(group, s), &t);
                }
            }
            Ok(())
        });
        report("trace fixedness", r)?;
    }
    Ok(())
}

/// σ is a ring homomorphism, and σ_i(σ_j(P)) = (σ_i∘σ_j)(P).
pub fn sigma_laws(cases: u32) -> Result<(), String> {
    for group in quadratic_groups().iter().chain([&cubic()]) {
        let ring = ring_of(group, 2);
        let m = group.field().degree();
        let r = runner(cases).run(&(raw_poly(2, m), raw_poly(2, m)), |(a, b)| {
            let p = build(&ring, &a);
            let q = build(&ring, &b);
            for s in 0..group.len() {
                prop_assert_eq!(p.add(&q).sigma(group, s), p.sigma(group, s).add(&q.sigma(group, s)));
                prop_assert_eq!(p.mul(&q).sigma(group, s), p.sigma(group, s).mul(&q.sigma(group, s)));
                prop_assert_eq!(MultiPoly::one(&ring).sigma(group, s), MultiPoly::one(&ring));
                for t in 0..group.len() {
                    prop_assert_eq!(p.sigma(group, t).sigma(group, s), p.sigma(group, group.compose(s, t)));
                }
            }
            Ok(())
        });
        report("sigma laws", r)?;
    }
    Ok(())
}

type InvariantCache = Mutex<HashMap<(usize, usize), Arc<(BlockPermutationAction, Vec<MultiPoly>)>>>;

/// Invariants for group `g` of [`small_groups`] and block size `n`.
pub fn invariants_for(g: usize, n: usize) -> Arc<(BlockPermutationAction, Vec<MultiPoly>)> {
    static CACHE: OnceLock<InvariantCache> = OnceLock::new();
    static GROUPS: OnceLock<Vec<Arc<GaloisGroup>>> = OnceLock::new();
    let groups = GROUPS.get_or_init(small_groups);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(g, n)) {
        return hit.clone();
    }
    let action = BlockPermutationAction::new(&groups[g], n);
    let gens = generate_invariants(&action, &Budget::default()).unwrap().generators;
    let entry = Arc::new((action, gens));
    cache.lock().unwrap().insert((g, n), entry.clone());
    entry
}

fn point(field: &Arc<galois_descent::numberfield::NumberField>, coords: &[i64]) -> Vec<FieldElement> {
    coords.iter().map(|&c| field.from_int(c)).collect()
}

/// Ψ∘Θ(τ) = Ψ exactly, and every E_j has rational coefficients.
pub fn psi_invariance(cases: u32) -> Result<(), String> {
    let strategy = (0usize..4, 1usize..=3, 0usize..3, prop::collection::vec(-3i64..=3, 9));
    let r = runner(cases).run(&strategy, |(g, n, tau, coords)| {
        let entry = invariants_for(g, n);
        let (action, gens) = (&entry.0, &entry.1);
        let tau = tau % action.group().len();
        let y = point(action.ring().field(), &coords[..action.ring().nvars()]);
        let moved = action.act_on_point(&y, tau);
        for e in gens {
            prop_assert!(e.has_rational_coefficients());
            prop_assert_eq!(&action.apply(e, tau), e);
            prop_assert_eq!(e.eval(&moved), e.eval(&y));
        }
        Ok(())
    });
    report("psi invariance", r)
}

/// On the grid {-1, 0, 1, 2}, Ψ(y) = Ψ(y') exactly when y' ∈ Γ·y.
pub fn separation(cases: u32) -> Result<(), String> {
    let coord = || prop::collection::vec(-1i64..=2, 6);
    let strategy = (0usize..4, 1usize..=2, coord(), coord(), 0usize..3, any::<bool>());
    let r = runner(cases).run(&strategy, |(g, n, a, b, tau, same_orbit)| {
        let entry = invariants_for(g, n);
        let (action, gens) = (&entry.0, &entry.1);
        let field = action.ring().field();
        let k = action.ring().nvars();
        let y = point(field, &a[..k]);
        // Half the cases compare a point with one of its own translates.
        let z = if same_orbit {
            action.act_on_point(&y, tau % action.group().len())
        } else {
            point(field, &b[..k])
        };
        let in_orbit = (0..action.group().len()).any(|t| action.act_on_point(&y, t) == z);
        let same_values = gens.iter().all(|e| e.eval(&y) == e.eval(&z));
        prop_assert_eq!(in_orbit, same_values);
        Ok(())
    });
    report("orbit separation", r)
}

/// Printing then parsing gives the same polynomial.
pub fn print_parse_round_trip(cases: u32) -> Result<(), String> {
    for group in quadratic_groups() {
        let ring = ring_of(&group, 3);
        let r = runner(cases).run(&raw_poly(3, 2), |raw| {
            let p = build(&ring, &raw);
            let back = galois_descent::multipoly::parse_poly(&p.to_string(), &ring).unwrap();
            prop_assert_eq!(back, p);
            Ok(())
        });
        report("print/parse round trip", r)?;
    }
    Ok(())
}

/// Reduced bases contain the generators, pass Buchberger's criterion and
/// give idempotent normal forms.
pub fn groebner_laws(cases: u32) -> Result<(), String> {
    use galois_descent::groebner::{satisfies_buchberger_criterion, Ideal};
    let group = gaussian();
    let ring = ring_of(&group, 3);
    let small = prop::collection::vec(
        (prop::collection::vec(0u32..3, 3), prop::collection::vec(-3i64..=3, 2), Just(1i64)),
        1..4,
    );
    let strategy = (prop::collection::vec(small, 1..4), raw_poly(3, 2));
    let budget = Budget::with_reductions(2_000);
    let r = runner(cases).run(&strategy, |(gens, probe)| {
        let gens: Vec<MultiPoly> = gens.iter().map(|g| build(&ring, g)).collect();
        let ideal = Ideal::new(&ring, gens.clone());
        let gb = match ideal.groebner(&budget) {
            Ok(gb) => gb,
            Err(e) if e.is_resource_limit() => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(satisfies_buchberger_criterion(&gb));
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
        let nf = gb.normal_form(&build(&ring, &probe));
        prop_assert_eq!(gb.normal_form(&nf), nf);
        Ok(())
    });
    report("groebner laws", r)
}
