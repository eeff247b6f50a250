#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;
use std::sync::Arc;

use galois_descent::numberfield::{GaloisGroup, NumberField, Rational};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture exists")
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn quadratic(d: i64, name: &str) -> Arc<GaloisGroup> {
    let f = NumberField::new(vec![q(-d), q(0), q(1)], name).unwrap();
    GaloisGroup::new(f.clone(), vec!["e".into(), "s".into()], vec![f.alpha(), f.alpha().neg()]).unwrap()
}

/// Q(i) with complex conjugation.
pub fn gaussian() -> Arc<GaloisGroup> {
    quadratic(-1, "i")
}

/// Q(√2), generator `r`.
pub fn sqrt2() -> Arc<GaloisGroup> {
    quadratic(2, "r")
}

/// The cyclic cubic field c^3 + c^2 - 2c - 1 = 0.
pub fn cubic() -> Arc<GaloisGroup> {
    let f = NumberField::new(vec![q(-1), q(-2), q(1), q(1)], "c").unwrap();
    let a = f.alpha();
    let a2 = f.mul(&a, &a);
    let s = a2.sub(&f.from_int(2));
    let t = f.from_int(1).sub(&a).sub(&a2);
    GaloisGroup::new(f, vec!["e".into(), "s".into(), "t".into()], vec![a, s, t]).unwrap()
}

pub fn trivial() -> Arc<GaloisGroup> {
    GaloisGroup::trivial(NumberField::rationals()).unwrap()
}

/// Every group used by the invariant properties, |Γ| ≤ 3.
pub fn small_groups() -> Vec<Arc<GaloisGroup>> {
    vec![trivial(), gaussian(), sqrt2(), cubic()]
}
