use crate::error::{Error, Result};
use crate::groebner::{ideals_equal, Budget, GroebnerBasis, Ideal};
use crate::multipoly::{compose_map, Fraction, MultiPoly, RationalMap};
use crate::numberfield::GaloisGroup;

use super::construct::inverse_verified;
use super::verify::{datum_basis, map_difference, reduce_map, pullback_failure, relation_failure, Report};
use super::{descend, AffineVariety, DescentDatum, DescentOptions, DescentResult};

/// A model (R, Y) of X, optionally with R⁻¹.
#[derive(Clone, Debug)]
pub struct Model {
    pub map: RationalMap,
    pub y: Ideal,
    pub inverse: Option<RationalMap>,
}

/// A representative of `f` on Y with Γ-fixed coefficients, when one exists:
/// the denominator is replaced by its norm and both parts are reduced
/// modulo I(Y).
fn fixed_representative(f: &Fraction, group: &GaloisGroup, y_gb: &GroebnerBasis) -> Result<Option<Fraction>> {
    let ring = f.ring().clone();
    let (mut num, mut den) = (f.num.clone(), f.den.clone());
    if !den.is_fixed(group) {
        let conj = (0..group.len())
            .filter(|&s| s != group.identity())
            .fold(MultiPoly::one(&ring), |acc, s| acc.mul(&f.den.sigma(group, s)));
        num = num.mul(&conj);
        den = den.mul(&conj);
    }
    let num = y_gb.normal_form(&num).with_ring(&ring);
    let den = y_gb.normal_form(&den).with_ring(&ring);
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!("{} vanishes on Y", f.den)));
    }
    if !num.is_fixed(group) || !den.is_fixed(group) {
        return Ok(None);
    }
    Ok(Some(Fraction::new(num, den)?))
}

fn fixed_map(f: &RationalMap, group: &GaloisGroup, y_gb: &GroebnerBasis) -> Result<Option<RationalMap>> {
    let mut comps = Vec::with_capacity(f.components().len());
    for c in f.components() {
        match fixed_representative(c, group, y_gb)? {
            Some(c) => comps.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(RationalMap::new(f.source().clone(), f.target().clone(), comps)?))
}

/// φ = φ^σ∘f_σ modulo I(X) for every σ.
fn check_compatible(d: &DescentDatum, phi: &RationalMap, x_gb: &GroebnerBasis) -> Result<()> {
    match relation_failure(d, phi, x_gb)? {
        None => Ok(()),
        Some((s, k, nf)) => Err(Error::MorphismIncompatible {
            sigma: d.group().label(s).to_string(),
            witness: format!("component {}: {nf}", k + 1),
        }),
    }
}

/// Descends a Γ-compatible morphism φ: X → Z, with Z defined over K, to
/// L: Y → Z over K with L∘R = φ on X.
pub fn descend_morphism(
    d: &DescentDatum,
    phi: &RationalMap,
    z: &AffineVariety,
    options: &DescentOptions,
) -> Result<(DescentResult, RationalMap)> {
    let budget = &options.budget;
    let group = d.group();
    if !z.generators().iter().all(|p| p.is_fixed(group)) {
        return Err(Error::Input("target variety must be defined over the fixed field".into()));
    }
    if !phi.source().same_vars(d.variety().ring()) || !phi.target().same_vars(z.ring()) {
        return Err(Error::RingMismatch("morphism must map the variety's ring to the target's".into()));
    }
    let phi = phi.with_rings(d.variety().ring(), z.ring());
    let x_gb = datum_basis(d, budget)?;
    check_compatible(d, &phi, &x_gb)?;
    if let Some((k, nf)) = pullback_failure(&phi, z.generators(), &x_gb) {
        return Err(Error::NotIntoTarget {
            generator: k + 1,
            witness: nf.to_string(),
        });
    }
    let result = descend(d, options)?;
    let inverse = result.inverse.as_ref().ok_or(Error::MissingInverse)?;
    let raw = compose_map(&phi, inverse)?;
    let y_gb = result.y.groebner(budget)?;
    let l = fixed_map(&raw, group, &y_gb)?
        .ok_or_else(|| Error::NotKRational("descended morphism has non-fixed coefficients".into()))?;
    let back = compose_map(&l, &result.map)?;
    if let Some((k, nf)) = map_difference(&back, &phi, &x_gb)? {
        return Err(Error::CertificateFailed {
            certificate: "morphism".into(),
            detail: format!("L∘R differs from φ in component {}: {nf}", k + 1),
        });
    }
    Ok((result, l))
}

/// Index of a map in `set` equal to `f` modulo the ideal with basis `gb`.
fn position_mod(set: &[RationalMap], f: &RationalMap, gb: &GroebnerBasis) -> Result<Option<usize>> {
    for (k, g) in set.iter().enumerate() {
        match map_difference(g, f, gb) {
            Ok(None) => return Ok(Some(k)),
            Ok(Some(_)) | Err(Error::ZeroDenominator(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Moves a set G of automorphisms of X to H = {R∘g∘R⁻¹} on Y. G must be
/// carried to G^σ by conjugation with every f_σ; H is then Γ-stable as a
/// set, though its elements need not be.
pub fn transport_automorphisms(result: &DescentResult, g: &[RationalMap], budget: &Budget) -> Result<Vec<RationalMap>> {
    let inverse = result.inverse.as_ref().ok_or(Error::MissingInverse)?;
    let d = &result.datum;
    let group = d.group();
    let ring = d.variety().ring();
    let x_gb = datum_basis(d, budget)?;
    let g: Vec<RationalMap> = g.iter().map(|h| h.with_rings(ring, ring)).collect();

    for (k, h) in g.iter().enumerate() {
        if let Some((j, nf)) = pullback_failure(h, d.variety().generators(), &x_gb) {
            return Err(Error::CertificateFailed {
                certificate: "automorphism".into(),
                detail: format!("map {} sends generator {} to {nf}", k + 1, j + 1),
            });
        }
    }
    for s in group.identity_first().into_iter().skip(1) {
        let f = &d.maps()[s];
        let conj: Vec<RationalMap> = g
            .iter()
            .map(|h| compose_map(&h.sigma(group, s), f))
            .collect::<Result<_>>()?;
        for h in &g {
            let lhs = compose_map(f, h)?;
            if position_mod(&conj, &lhs, &x_gb)?.is_none() {
                return Err(Error::ConjugationNotClosed {
                    sigma: group.label(s).to_string(),
                });
            }
        }
    }

    let y_gb = result.y.groebner(budget)?;
    let mut out: Vec<RationalMap> = Vec::new();
    for h in &g {
        let moved = compose_map(&compose_map(&result.map, h)?, inverse)?;
        let moved = reduce_map(&moved, &y_gb)?;
        if position_mod(&out, &moved, &y_gb)?.is_none() {
            out.push(moved);
        }
    }
    for s in 0..group.len() {
        for h in &out {
            if position_mod(&out, &h.sigma(group, s), &y_gb)?.is_none() {
                return Err(Error::ConjugationNotClosed {
                    sigma: group.label(s).to_string(),
                });
            }
        }
    }
    Ok(out)
}

/// J = R2∘R1⁻¹: Y1 → Y2, certified to have Γ-fixed coefficients modulo
/// I(Y1).
pub fn compare_models(m1: &Model, m2: &Model, d: &DescentDatum, budget: &Budget) -> Result<RationalMap> {
    let x_gb = datum_basis(d, budget)?;
    for (name, m) in [("first", m1), ("second", m2)] {
        if let Some((s, k, nf)) = relation_failure(d, &m.map, &x_gb)? {
            return Err(Error::CertificateFailed {
                certificate: "relation".into(),
                detail: format!("{name} model, component {} under {}: {nf}", k + 1, d.group().label(s)),
            });
        }
    }
    let inverse = m1.inverse.as_ref().ok_or(Error::MissingInverse)?;
    let raw = compose_map(&m2.map, inverse)?;
    let y_gb = m1.y.groebner(budget)?;
    let j = fixed_map(&raw, d.group(), &y_gb)?
        .ok_or_else(|| Error::NotKRational("comparison map has non-fixed coefficients".into()))?;
    if let Some((k, nf)) = map_difference(&compose_map(&j, &m1.map)?, &m2.map, &x_gb)? {
        return Err(Error::CertificateFailed {
            certificate: "comparison".into(),
            detail: format!("J∘R1 differs from R2 in component {}: {nf}", k + 1),
        });
    }
    Ok(j)
}

/// Checks a claimed model independently: Y stable under Γ, R(X) ⊆ Y, the
/// datum relation for R, and both compositions with the inverse.
pub fn verify_model(d: &DescentDatum, model: &Model, budget: &Budget) -> Result<Report> {
    let group = d.group();
    let x_gb = datum_basis(d, budget)?;
    let y = &model.y;
    let mut report = Report::default();

    let mut unstable = None;
    for s in group.identity_first() {
        if !ideals_equal(y, &y.sigma(group, s), budget)? {
            unstable = Some(s);
            break;
        }
    }
    match unstable {
        None => report.pass("y_over_k"),
        Some(s) => {
            let detail = format!("I(Y) differs from its conjugate under {}", group.label(s));
            report.fail("y_over_k", detail.clone(), Error::NotKRational(detail));
        }
    }

    match pullback_failure(&model.map, y.generators(), &x_gb) {
        None => report.pass("image"),
        Some((k, nf)) => {
            let witness = nf.to_string();
            let err = Error::NotIntoTarget {
                generator: k + 1,
                witness: witness.clone(),
            };
            report.fail("image", witness, err);
        }
    }

    match relation_failure(d, &model.map, &x_gb) {
        Ok(None) => report.pass("relation"),
        Ok(Some((s, k, nf))) => {
            let witness = nf.to_string();
            let err = Error::CertificateFailed {
                certificate: "relation".into(),
                detail: format!("component {} under {}: {witness}", k + 1, group.label(s)),
            };
            report.fail("relation", witness, err);
        }
        Err(e @ Error::ZeroDenominator(_)) => report.fail("relation", e.to_string(), e),
        Err(e) => return Err(e),
    }

    if let Some(inv) = &model.inverse {
        let y_gb = y.groebner(budget)?;
        if inverse_verified(&model.map, inv, &x_gb, &y_gb)? {
            report.pass("inverse");
        } else {
            let err = Error::CertificateFailed {
                certificate: "inverse".into(),
                detail: "compositions with the claimed inverse are not the identity".into(),
            };
            report.fail("inverse", "composition differs from the identity".into(), err);
        }
    }
    Ok(report)
}
