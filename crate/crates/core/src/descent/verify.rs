use crate::error::{Error, Result};
use crate::groebner::{saturate, Budget, GroebnerBasis, Ideal};
use crate::multipoly::{compose_map, Fraction, MultiPoly, RationalMap};

use super::DescentDatum;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Nonzero normal form (or other detail) on failure.
    pub witness: Option<String>,
}

/// Every check that was run, in order, plus the error for the first
/// failure.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub failure: Option<Error>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub(crate) fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: true,
            witness: None,
        });
    }

    pub(crate) fn fail(&mut self, name: impl Into<String>, witness: String, error: Error) {
        self.checks.push(Check {
            name: name.into(),
            passed: false,
            witness: Some(witness),
        });
        if self.failure.is_none() {
            self.failure = Some(error);
        }
    }

    /// The first failure as an error, or the report itself.
    pub fn into_result(self) -> Result<Report> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// Gröbner basis of I : (Π dens)^∞ in the ideal's own ring (grevlex).
pub(crate) fn saturated_basis(ideal: &Ideal, dens: &[&MultiPoly], budget: &Budget) -> Result<GroebnerBasis> {
    let ring = ideal.ring();
    let h = dens
        .iter()
        .filter(|d| !d.is_constant())
        .fold(MultiPoly::one(ring), |acc, d| acc.mul(&d.with_ring(ring)));
    if h.is_constant() {
        return ideal.groebner(budget);
    }
    saturate(ideal, &h, budget)?.groebner(budget)
}

/// First component where `f` and `g` differ modulo the ideal, with the
/// nonzero normal form of the cross-multiplied difference. Denominators
/// must not lie in the ideal.
pub fn map_difference(f: &RationalMap, g: &RationalMap, gb: &GroebnerBasis) -> Result<Option<(usize, MultiPoly)>> {
    if f.components().len() != g.components().len() {
        return Err(Error::RingMismatch("maps have different numbers of components".into()));
    }
    for (k, (a, b)) in f.components().iter().zip(g.components()).enumerate() {
        for den in [&a.den, &b.den] {
            if !den.is_constant() && gb.contains(den) {
                return Err(Error::ZeroDenominator(format!(
                    "denominator {den} of component {} vanishes on the variety",
                    k + 1
                )));
            }
        }
        let diff = a.num.mul(&b.den).sub(&b.num.mul(&a.den));
        let nf = gb.normal_form(&diff);
        if !nf.is_zero() {
            return Ok(Some((k, nf)));
        }
    }
    Ok(None)
}

/// f = g as maps on the variety whose (saturated) ideal has basis `gb`.
pub fn maps_equal_mod_ideal(f: &RationalMap, g: &RationalMap, gb: &GroebnerBasis) -> Result<bool> {
    Ok(map_difference(f, g, gb)?.is_none())
}

/// Numerators and denominators replaced by their normal forms modulo the
/// ideal of the source variety.
pub(crate) fn reduce_map(f: &RationalMap, gb: &GroebnerBasis) -> Result<RationalMap> {
    let ring = f.source();
    let comps = f
        .components()
        .iter()
        .map(|c| {
            let num = gb.normal_form(&c.num).with_ring(ring);
            let den = gb.normal_form(&c.den).with_ring(ring);
            if den.is_zero() {
                return Err(Error::ZeroDenominator(format!("{} vanishes on the variety", c.den)));
            }
            Fraction::new(num, den)
        })
        .collect::<Result<_>>()?;
    RationalMap::new(ring.clone(), f.target().clone(), comps)
}

/// Basis of I(X) saturated by every denominator of the datum.
pub(crate) fn datum_basis(d: &DescentDatum, budget: &Budget) -> Result<GroebnerBasis> {
    let dens: Vec<&MultiPoly> = d.maps().iter().flat_map(|m| m.components().iter().map(|c| &c.den)).collect();
    if dens.iter().all(|c| c.is_constant()) {
        return Ok(d.variety().basis().clone());
    }
    saturated_basis(d.variety().ideal(), &dens, budget)
}

/// Runs every datum check (into-conjugate per σ, cocycle per pair) and
/// records each outcome. Only resource exhaustion aborts early.
pub fn check_datum(d: &DescentDatum, budget: &Budget) -> Result<Report> {
    let group = d.group();
    let x = d.variety();
    let gb = datum_basis(d, budget)?;
    let mut report = Report::default();

    for s in group.identity_first().into_iter().skip(1) {
        let name = format!("into-conjugate({})", group.label(s));
        let f = &d.maps()[s];
        let mut bad = None;
        for (k, p) in x.generators().iter().enumerate() {
            let pulled = f.pull_back(&p.sigma(group, s));
            let nf = gb.normal_form(&pulled.num);
            if !nf.is_zero() {
                bad = Some((k, nf));
                break;
            }
        }
        match bad {
            None => report.pass(name),
            Some((k, nf)) => {
                let witness = nf.to_string();
                let err = Error::NotIntoConjugate {
                    sigma: group.label(s).to_string(),
                    generator: k + 1,
                    witness: witness.clone(),
                };
                report.fail(name, witness, err);
            }
        }
    }

    for s1 in group.identity_first() {
        for s2 in group.identity_first() {
            let name = format!("cocycle({}, {})", group.label(s1), group.label(s2));
            let lhs = &d.maps()[group.compose(s1, s2)];
            let rhs = match compose_map(&d.maps()[s2].sigma(group, s1), &d.maps()[s1]) {
                Ok(m) => m,
                Err(e @ Error::ZeroDenominator(_)) => {
                    report.fail(name, e.to_string(), e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            match map_difference(lhs, &rhs, &gb) {
                Ok(None) => report.pass(name),
                Ok(Some((k, nf))) => {
                    let witness = nf.to_string();
                    let err = Error::CocycleViolation {
                        sigma1: group.label(s1).to_string(),
                        sigma2: group.label(s2).to_string(),
                        component: k + 1,
                        witness: witness.clone(),
                    };
                    report.fail(name, witness, err);
                }
                Err(e @ Error::ZeroDenominator(_)) => report.fail(name, e.to_string(), e),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

/// [`check_datum`], turning the first failed check into its error.
pub fn verify_datum(d: &DescentDatum, budget: &Budget) -> Result<Report> {
    check_datum(d, budget)?.into_result()
}

/// R = R^σ ∘ f_σ modulo I(X) for every σ; returns the first failing σ
/// with its witness.
pub(crate) fn relation_failure(
    d: &DescentDatum,
    r: &RationalMap,
    gb: &GroebnerBasis,
) -> Result<Option<(usize, usize, MultiPoly)>> {
    let group = d.group();
    for s in group.identity_first() {
        let rhs = compose_map(&r.sigma(group, s), &d.maps()[s])?;
        if let Some((k, nf)) = map_difference(r, &rhs, gb)? {
            return Ok(Some((s, k, nf)));
        }
    }
    Ok(None)
}

/// Every generator of `target`, pulled back through `f`, lies in the ideal
/// with basis `gb`; returns the first offender.
pub(crate) fn pullback_failure(
    f: &RationalMap,
    target: &[MultiPoly],
    gb: &GroebnerBasis,
) -> Option<(usize, MultiPoly)> {
    target.iter().enumerate().find_map(|(k, p)| {
        let nf = gb.normal_form(&f.pull_back(&p.with_ring(f.target())).num);
        (!nf.is_zero()).then_some((k, nf))
    })
}
