//! Constructive descent: from a variety over L with a descent datum to a
//! model over the fixed field, with an explicit map R and its certificates.

mod construct;
mod variants;
mod verify;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{graph_basis, ideals_equal, Budget, GroebnerBasis, Ideal};
use crate::invariants::{generate_invariants, BlockPermutationAction};
use crate::multipoly::{compose_map, Fraction, MonomialOrder, MultiPoly, PolyRing, RationalMap};
use crate::numberfield::GaloisGroup;

pub use construct::{
    build_phi, conjugates_disjoint, disjointify, phi_map, recover_inverse, redundant_coordinates,
    trace_descend, Disjointified,
};
pub use variants::{compare_models, descend_morphism, transport_automorphisms, verify_model, Model};
pub use verify::{check_datum, map_difference, maps_equal_mod_ideal, verify_datum, Check, Report};

use construct::{descend_generators, drop_coordinates, inverse_verified, recover_inverse_with, y_ring};
use verify::{datum_basis, reduce_map, pullback_failure, relation_failure};

/// V(I) ⊂ A^n over L, with a nonempty zero set.
#[derive(Clone, Debug)]
pub struct AffineVariety {
    ring: Arc<PolyRing>,
    ideal: Ideal,
    basis: GroebnerBasis,
}

impl AffineVariety {
    /// Rejects the unit ideal with `EmptyVariety`. The stored basis is
    /// grevlex regardless of the ring's order.
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<MultiPoly>, budget: &Budget) -> Result<Self> {
        let ring = ring.with_order(MonomialOrder::GrevLex);
        let ideal = Ideal::new(&ring, generators);
        let basis = ideal.groebner(budget)?;
        if basis.is_unit() {
            return Err(Error::EmptyVariety);
        }
        Ok(AffineVariety { ring, ideal, basis })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        self.ideal.generators()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }
}

/// Maps f_σ: X → X^σ, one per group element; f_e is the identity.
#[derive(Clone, Debug)]
pub struct DescentDatum {
    variety: AffineVariety,
    group: Arc<GaloisGroup>,
    maps: Vec<RationalMap>,
}

impl DescentDatum {
    /// `maps` lists (σ, f_σ) for every non-identity σ exactly once; an
    /// explicit identity entry is accepted if it is the identity map.
    pub fn new(variety: AffineVariety, group: Arc<GaloisGroup>, maps: Vec<(usize, RationalMap)>) -> Result<Self> {
        if variety.ring().field() != group.field() {
            return Err(Error::Input("variety and group use different fields".into()));
        }
        let ring = variety.ring().clone();
        let mut slots: Vec<Option<RationalMap>> = vec![None; group.len()];
        for (s, f) in maps {
            if s >= group.len() {
                return Err(Error::Input(format!("no group element with index {s}")));
            }
            if slots[s].is_some() {
                return Err(Error::Input(format!("map for {} given twice", group.label(s))));
            }
            if f.components().len() != ring.nvars()
                || !f.source().same_vars(&ring)
                || !f.target().same_vars(&ring)
            {
                return Err(Error::Input(format!(
                    "map for {} must send the variety's coordinates to themselves",
                    group.label(s)
                )));
            }
            let f = f.with_rings(&ring, &ring);
            if s == group.identity() && !is_identity(&f) {
                return Err(Error::Input("map for the identity must be the identity".into()));
            }
            slots[s] = Some(f);
        }
        slots[group.identity()].get_or_insert_with(|| RationalMap::identity(&ring));
        let maps = slots
            .into_iter()
            .enumerate()
            .map(|(s, f)| f.ok_or_else(|| Error::Input(format!("missing map for {}", group.label(s)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(DescentDatum { variety, group, maps })
    }

    pub fn variety(&self) -> &AffineVariety {
        &self.variety
    }

    pub fn group(&self) -> &Arc<GaloisGroup> {
        &self.group
    }

    /// f_σ indexed by group element.
    pub fn maps(&self) -> &[RationalMap] {
        &self.maps
    }

    /// True when every f_σ is literally the identity.
    pub fn is_trivial(&self) -> bool {
        self.maps.iter().all(is_identity)
    }
}

#[derive(Clone, Debug)]
pub struct DescentOptions {
    pub budget: Budget,
    pub prune: bool,
    pub inverse: bool,
    /// Order of the Y ring and of its printed basis.
    pub order: MonomialOrder,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            budget: Budget::default(),
            prune: false,
            inverse: true,
            order: MonomialOrder::GrevLex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Birationality {
    ExplicitInverse,
    /// No closed-form inverse; birational by construction through Φ.
    ViaProjection,
}

impl Birationality {
    pub fn as_str(self) -> &'static str {
        match self {
            Birationality::ExplicitInverse => "explicit-inverse",
            Birationality::ViaProjection => "via-projection",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    pub datum: bool,
    pub disjoint: bool,
    pub psi_invariant: bool,
    pub y_stable: bool,
    pub y_over_k: bool,
    pub image: bool,
    pub relation: bool,
    pub birational: Birationality,
}

impl Certificates {
    pub fn all_true(&self) -> bool {
        self.datum && self.disjoint && self.psi_invariant && self.y_stable && self.y_over_k && self.image && self.relation
    }

    /// Name and value of every boolean certificate, in document order.
    pub fn entries(&self) -> [(&'static str, bool); 7] {
        [
            ("datum", self.datum),
            ("disjoint", self.disjoint),
            ("psi_invariant", self.psi_invariant),
            ("y_stable", self.y_stable),
            ("y_over_k", self.y_over_k),
            ("image", self.image),
            ("relation", self.relation),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    pub datum: DescentDatum,
    /// True when coordinates were added to separate the conjugates.
    pub augmented: bool,
    /// Invariant generators E_1..E_N in the block ring (empty on the
    /// short-circuit path).
    pub invariants: Vec<MultiPoly>,
    /// I(Y) with Γ-fixed generators.
    pub y: Ideal,
    /// R: X → Y.
    pub map: RationalMap,
    pub inverse: Option<RationalMap>,
    pub certificates: Certificates,
    /// Number of Y coordinates before pruning, when pruning removed some.
    pub pruned_from: Option<usize>,
}

impl DescentResult {
    pub fn model(&self) -> Model {
        Model {
            map: self.map.clone(),
            y: self.y.clone(),
            inverse: self.inverse.clone(),
        }
    }
}

fn is_identity(f: &RationalMap) -> bool {
    let id = RationalMap::identity(f.source());
    f.components() == id.components()
}

fn fail(certificate: &str, detail: impl Into<String>) -> Error {
    Error::CertificateFailed {
        certificate: certificate.to_string(),
        detail: detail.into(),
    }
}

/// Runs the full construction and certifies every step; a failed
/// certificate is returned as an error.
pub fn descend(d: &DescentDatum, options: &DescentOptions) -> Result<DescentResult> {
    let budget = &options.budget;
    verify_datum(d, budget)?;
    let group = d.group();
    let x_gb = datum_basis(d, budget)?;

    if group.len() == 1 || (d.is_trivial() && x_stable(d, budget)?) {
        return short_circuit(d, options);
    }

    let Disjointified { datum: dd, embedding } = disjointify(d, budget)?;
    if !conjugates_disjoint(&dd, budget)? {
        return Err(fail("disjoint", "conjugate varieties still meet after augmentation"));
    }
    let n = dd.variety().ring().nvars();
    let action = BlockPermutationAction::new(group, n);
    let invariants = generate_invariants(&action, budget)?.generators;
    if !invariants.iter().all(|e| action.is_invariant(e) && e.has_rational_coefficients()) {
        return Err(fail("psi_invariant", "an invariant generator is not fixed"));
    }

    let phi = phi_map(&dd, &action)?;
    let t_ring = y_ring(group.field(), invariants.len(), &MonomialOrder::GrevLex);
    let psi = RationalMap::polynomial(action.ring().clone(), t_ring.clone(), invariants.clone())?;
    let r_hat = compose_map(&psi, &phi)?;
    let graph = graph_basis(&r_hat, dd.variety().ideal(), budget)?;
    let y_raw = graph.image(&t_ring);

    let (y, same) = descend_generators(&y_raw, group, budget)?;
    if !same {
        return Err(fail("y_over_k", "trace-descended generators define a different ideal"));
    }
    if !y.generators().iter().all(MultiPoly::has_rational_coefficients) {
        return Err(fail("y_over_k", "a generator of I(Y) has non-fixed coefficients"));
    }
    for s in 0..group.len() {
        if !ideals_equal(&y, &y.sigma(group, s), budget)? {
            return Err(fail("y_stable", format!("I(Y) differs from its conjugate under {}", group.label(s))));
        }
    }

    let r = match &embedding {
        Some(q) => compose_map(&r_hat, q)?,
        None => r_hat.clone(),
    };
    let r = reduce_map(&r, &x_gb)?;
    let y_gb = y.groebner(budget)?;
    certify_map(d, &r, &y, &x_gb)?;

    let inverse = if options.inverse && embedding.is_none() {
        recover_inverse_with(&graph, &r, &x_gb, &y_gb)?
    } else if options.inverse {
        recover_inverse(&r, d.variety().ideal(), &y, budget)?
    } else {
        None
    };

    let mut result = DescentResult {
        datum: d.clone(),
        augmented: embedding.is_some(),
        invariants,
        y: reorder(&y, &options.order),
        map: r,
        inverse,
        certificates: Certificates {
            datum: true,
            disjoint: true,
            psi_invariant: true,
            y_stable: true,
            y_over_k: true,
            image: true,
            relation: true,
            birational: Birationality::ViaProjection,
        },
        pruned_from: None,
    };
    result.map = result.map.with_rings(result.map.source(), result.y.ring());
    if let Some(inv) = &result.inverse {
        result.inverse = Some(inv.with_rings(result.y.ring(), inv.target()));
        result.certificates.birational = Birationality::ExplicitInverse;
    }
    if options.prune {
        prune(&mut result, &x_gb, options)?;
    }
    Ok(result)
}

/// X^σ = X for every σ.
fn x_stable(d: &DescentDatum, budget: &Budget) -> Result<bool> {
    let group = d.group();
    for s in 0..group.len() {
        if !ideals_equal(d.variety().ideal(), &d.variety().ideal().sigma(group, s), budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// X is already defined over K: Y = X with trace-descended generators.
fn short_circuit(d: &DescentDatum, options: &DescentOptions) -> Result<DescentResult> {
    let budget = &options.budget;
    let group = d.group();
    let x = d.variety();
    let (y, same) = descend_generators(x.ideal(), group, budget)?;
    if !same || !y.generators().iter().all(MultiPoly::has_rational_coefficients) {
        return Err(fail("y_over_k", "trace descent of I(X) changed the ideal"));
    }
    let y = reorder(&y, &options.order);
    let ring = y.ring().clone();
    let map = RationalMap::identity(x.ring()).with_rings(x.ring(), &ring);
    let inverse = options
        .inverse
        .then(|| RationalMap::identity(x.ring()).with_rings(&ring, x.ring()));
    let result = DescentResult {
        datum: d.clone(),
        augmented: false,
        invariants: Vec::new(),
        y,
        map,
        inverse,
        certificates: Certificates {
            datum: true,
            disjoint: true,
            psi_invariant: true,
            y_stable: true,
            y_over_k: true,
            image: true,
            relation: true,
            birational: if options.inverse {
                Birationality::ExplicitInverse
            } else {
                Birationality::ViaProjection
            },
        },
        pruned_from: None,
    };
    let x_gb = datum_basis(d, budget)?;
    certify_map(d, &result.map, &result.y, &x_gb)?;
    Ok(result)
}

/// R = R^σ∘f_σ modulo I(X) and R(X) ⊆ Y.
fn certify_map(d: &DescentDatum, r: &RationalMap, y: &Ideal, x_gb: &GroebnerBasis) -> Result<()> {
    if let Some((s, k, nf)) = relation_failure(d, r, x_gb)? {
        return Err(fail(
            "relation",
            format!("component {} under {}: {nf}", k + 1, d.group().label(s)),
        ));
    }
    if let Some((k, nf)) = pullback_failure(r, y.generators(), x_gb) {
        return Err(fail("image", format!("generator {} of I(Y) pulls back to {nf}", k + 1)));
    }
    Ok(())
}

fn reorder(ideal: &Ideal, order: &MonomialOrder) -> Ideal {
    let ring = ideal.ring().with_order(order.clone());
    Ideal::new(&ring, ideal.generators().to_vec())
}

/// Drops redundant Y coordinates, then recertifies the smaller model.
fn prune(result: &mut DescentResult, x_gb: &GroebnerBasis, options: &DescentOptions) -> Result<()> {
    let budget = &options.budget;
    let dropped = redundant_coordinates(&result.y, budget)?;
    if dropped.is_empty() {
        return Ok(());
    }
    let before = result.y.ring().nvars();
    let (y, map) = drop_coordinates(&result.y, &result.map, &dropped, &options.order, budget)?;
    let group = result.datum.group().clone();
    let (y, same) = descend_generators(&y, &group, budget)?;
    if !same || !y.generators().iter().all(MultiPoly::has_rational_coefficients) {
        return Err(fail("y_over_k", "pruned ideal is not defined over the fixed field"));
    }
    for s in 0..group.len() {
        if !ideals_equal(&y, &y.sigma(&group, s), budget)? {
            return Err(fail("y_stable", format!("pruned I(Y) differs under {}", group.label(s))));
        }
    }
    certify_map(&result.datum, &map, &y, x_gb)?;
    let inverse = match &result.inverse {
        Some(old) if options.inverse => {
            let ring = y.ring();
            let kept: Vec<usize> = (0..before).filter(|j| !dropped.contains(j)).collect();
            let mut position = vec![usize::MAX; before];
            for (new, &old_idx) in kept.iter().enumerate() {
                position[old_idx] = new;
            }
            let restricted = restrict_inverse(old, &kept, &position, ring)?;
            let y_gb = y.groebner(budget)?;
            match restricted {
                Some(inv) if inverse_verified(&map, &inv, x_gb, &y_gb)? => Some(inv),
                _ => recover_inverse(&map, result.datum.variety().ideal(), &y, budget)?,
            }
        }
        _ => None,
    };
    result.certificates.birational = if inverse.is_some() {
        Birationality::ExplicitInverse
    } else {
        Birationality::ViaProjection
    };
    result.y = y;
    result.map = map;
    result.inverse = inverse;
    result.pruned_from = Some(before);
    Ok(())
}

/// Rewrites the old inverse in the kept coordinates when it only uses them;
/// otherwise `None`.
fn restrict_inverse(
    old: &RationalMap,
    kept: &[usize],
    position: &[usize],
    ring: &Arc<PolyRing>,
) -> Result<Option<RationalMap>> {
    let mut comps = Vec::with_capacity(old.components().len());
    for c in old.components() {
        let used = c.num.variables().into_iter().chain(c.den.variables());
        if used.into_iter().any(|v| !kept.contains(&v)) {
            return Ok(None);
        }
        comps.push(Fraction {
            num: c.num.remap(ring, position),
            den: c.den.remap(ring, position),
        });
    }
    Ok(Some(RationalMap::new(ring.clone(), old.target().clone(), comps)?))
}
