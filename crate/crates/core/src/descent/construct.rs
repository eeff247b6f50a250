use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{
    eliminate, groebner, ideals_equal, saturate, Budget, GraphBasis, GroebnerBasis, Ideal,
};
use crate::invariants::BlockPermutationAction;
use crate::multipoly::{compose_map, Fraction, MonomialOrder, MultiPoly, PolyRing, RationalMap};
use crate::numberfield::GaloisGroup;

use super::verify::map_difference;
use super::{AffineVariety, DescentDatum};

/// A datum whose conjugate varieties are pairwise disjoint, with the
/// embedding Q: X → X̂ when coordinates had to be added.
#[derive(Clone, Debug)]
pub struct Disjointified {
    pub datum: DescentDatum,
    pub embedding: Option<RationalMap>,
}

/// True when X^{σ_i} ∩ X^{σ_j} = ∅ for all i ≠ j (unit sum ideals).
pub fn conjugates_disjoint(d: &DescentDatum, budget: &Budget) -> Result<bool> {
    let group = d.group();
    let ideal = d.variety().ideal();
    let conj: Vec<Ideal> = (0..group.len()).map(|s| ideal.sigma(group, s)).collect();
    for i in 0..conj.len() {
        for j in i + 1..conj.len() {
            if !conj[i].sum(&conj[j]).groebner(budget)?.is_unit() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn fresh_names(taken: &[String], count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut k = 1;
    while out.len() < count {
        let name = format!("a{k}");
        if !taken.contains(&name) {
            out.push(name);
        }
        k += 1;
    }
    out
}

/// Makes the conjugates of X pairwise disjoint by adjoining coordinates
/// x_{n+j} = α (j = 1, …, m−1), moved by every σ ≠ e. The transported maps
/// are g_σ(x, a) = (f_σ(x), p_σ(a), …, p_σ(a)) with σ(α) = p_σ(α).
pub fn disjointify(d: &DescentDatum, budget: &Budget) -> Result<Disjointified> {
    let group = d.group();
    if group.len() == 1 || conjugates_disjoint(d, budget)? {
        return Ok(Disjointified {
            datum: d.clone(),
            embedding: None,
        });
    }
    let x = d.variety();
    let ring = x.ring();
    let n = ring.nvars();
    let extra = group.len() - 1;
    let mut names = ring.vars().to_vec();
    names.extend(fresh_names(ring.vars(), extra));
    let big = PolyRing::new(ring.field().clone(), names, ring.order().clone());
    let embed: Vec<usize> = (0..n).collect();
    let field = ring.field();
    let alpha = field.alpha();

    let mut gens: Vec<MultiPoly> = x.generators().iter().map(|g| g.remap(&big, &embed)).collect();
    for j in 0..extra {
        gens.push(MultiPoly::var(&big, n + j).sub(&MultiPoly::constant(&big, alpha.clone())));
    }
    let variety = AffineVariety::new(&big, gens, budget)?;

    let mut maps = Vec::with_capacity(group.len());
    for s in 0..group.len() {
        let f = &d.maps()[s];
        let mut comps: Vec<Fraction> = f
            .components()
            .iter()
            .map(|c| Fraction {
                num: c.num.remap(&big, &embed),
                den: c.den.remap(&big, &embed),
            })
            .collect();
        for j in 0..extra {
            comps.push(Fraction::poly(alpha_image(&big, n + j, group.image(s))));
        }
        maps.push((s, RationalMap::new(big.clone(), big.clone(), comps)?));
    }
    let datum = DescentDatum::new(variety, group.clone(), maps)?;

    let mut q = (0..n).map(|i| Fraction::poly(MultiPoly::var(ring, i))).collect::<Vec<_>>();
    for _ in 0..extra {
        q.push(Fraction::poly(MultiPoly::constant(ring, alpha.clone())));
    }
    let embedding = RationalMap::new(ring.clone(), big, q)?;
    Ok(Disjointified {
        datum,
        embedding: Some(embedding),
    })
}

/// σ(α) written as a polynomial with rational coefficients in the
/// coordinate `var`, which equals α on X̂.
fn alpha_image(ring: &Arc<PolyRing>, var: usize, image: &crate::numberfield::FieldElement) -> MultiPoly {
    let field = ring.field();
    let a = MultiPoly::var(ring, var);
    image
        .coeffs()
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(ring), |acc, (k, c)| {
            acc.add(&a.pow(k as u32).scale(&field.from_rational(c.clone())))
        })
}

/// Φ: x ↦ (f_σ(x))_σ into the block layout of `action`.
pub fn phi_map(d: &DescentDatum, action: &BlockPermutationAction) -> Result<RationalMap> {
    let n = d.variety().ring().nvars();
    let mut comps = Vec::with_capacity(n * action.blocks().len());
    for &s in action.blocks() {
        comps.extend(d.maps()[s].components().iter().cloned());
    }
    RationalMap::new(d.variety().ring().clone(), action.ring().clone(), comps)
}

/// Φ together with the ideal of Φ(X): P^σ(y_σ) for every block plus the
/// graph relations y_{j,σ}·s_{j,σ}(y_e) − r_{j,σ}(y_e), saturated by the
/// denominators when some f_σ is not polynomial.
pub fn build_phi(d: &DescentDatum, action: &BlockPermutationAction, budget: &Budget) -> Result<(RationalMap, Ideal)> {
    let phi = phi_map(d, action)?;
    let group = d.group();
    let yr = action.ring();
    let n = d.variety().ring().nvars();
    let block_e: Vec<usize> = (0..n).map(|i| action.var(group.identity(), i)).collect();
    let mut gens = Vec::new();
    for &s in action.blocks() {
        let block: Vec<usize> = (0..n).map(|i| action.var(s, i)).collect();
        for p in d.variety().generators() {
            gens.push(p.sigma(group, s).remap(yr, &block));
        }
    }
    let mut dens = MultiPoly::one(yr);
    for &s in action.blocks().iter().skip(1) {
        for (i, c) in d.maps()[s].components().iter().enumerate() {
            let y = MultiPoly::var(yr, action.var(s, i));
            let den = c.den.remap(yr, &block_e);
            gens.push(y.mul(&den).sub(&c.num.remap(yr, &block_e)));
            if !den.is_constant() {
                dens = dens.mul(&den);
            }
        }
    }
    let ideal = Ideal::new(yr, gens);
    if dens.is_constant() {
        return Ok((phi, ideal));
    }
    Ok((phi, saturate(&ideal, &dens, budget)?))
}

/// Replaces every generator F with a non-fixed coefficient by
/// Tr(e_j·F) over the power basis e_j.
pub fn trace_descend(gens: &[MultiPoly], group: &GaloisGroup) -> Vec<MultiPoly> {
    let basis = group.power_basis();
    let mut out = Vec::new();
    for g in gens {
        if g.is_fixed(group) {
            out.push(g.clone());
            continue;
        }
        for e in &basis {
            let t = g.scale(e).trace(group);
            if !t.is_zero() && !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// Trace-descends the generators and confirms the ideal is unchanged.
pub(crate) fn descend_generators(ideal: &Ideal, group: &GaloisGroup, budget: &Budget) -> Result<(Ideal, bool)> {
    let gens = trace_descend(ideal.generators(), group);
    let out = Ideal::new(ideal.ring(), gens);
    let same = ideals_equal(ideal, &out, budget)?;
    Ok((out, same))
}

/// Reads x_i = −e(t)/c(t) off graph basis elements c(t)·x_i + e(t), one per
/// source variable, with c ∉ I(Y).
fn inverse_from_graph(
    graph: &GraphBasis,
    r: &RationalMap,
    y_gb: &GroebnerBasis,
) -> Result<Option<RationalMap>> {
    let n = graph.sources;
    let tgt = r.target();
    let total = graph.basis.ring().nvars();
    let var_map: Vec<usize> = (0..total)
        .map(|v| v.saturating_sub(graph.lead + n))
        .collect();
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let xi = graph.source_var(i);
        let found = graph.basis.elements().iter().find_map(|g| {
            let mut c = Vec::new();
            let mut e = Vec::new();
            for (m, coef) in g.terms() {
                let ex = m.exps();
                if (0..graph.lead).any(|v| ex[v] > 0) {
                    return None;
                }
                let src: Vec<usize> = (0..n).filter(|&k| ex[graph.source_var(k)] > 0).collect();
                match src.as_slice() {
                    [] => e.push((m.clone(), coef.clone())),
                    [k] if *k == i && ex[xi] == 1 => {
                        let mut exps = ex.to_vec();
                        exps[xi] = 0;
                        c.push((crate::multipoly::Monomial::from_exps(exps), coef.clone()));
                    }
                    _ => return None,
                }
            }
            if c.is_empty() {
                return None;
            }
            let c = MultiPoly::from_terms(g.ring(), c).remap(tgt, &var_map);
            let e = MultiPoly::from_terms(g.ring(), e).remap(tgt, &var_map);
            if y_gb.contains(&c) {
                return None;
            }
            Some((c, e))
        });
        let Some((c, e)) = found else { return Ok(None) };
        comps.push(Fraction::new(e.neg(), c)?);
    }
    Ok(Some(RationalMap::new(tgt.clone(), r.source().clone(), comps)?))
}

/// Both compositions are the identity modulo the respective ideals.
pub(crate) fn inverse_verified(
    r: &RationalMap,
    inv: &RationalMap,
    x_gb: &GroebnerBasis,
    y_gb: &GroebnerBasis,
) -> Result<bool> {
    let there = match compose_map(inv, r) {
        Ok(m) => m,
        Err(Error::ZeroDenominator(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let back = match compose_map(r, inv) {
        Ok(m) => m,
        Err(Error::ZeroDenominator(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let ok = |f: &RationalMap, gb: &GroebnerBasis| -> Result<bool> {
        match map_difference(f, &RationalMap::identity(f.source()), gb) {
            Ok(d) => Ok(d.is_none()),
            Err(Error::ZeroDenominator(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };
    Ok(ok(&there, x_gb)? && ok(&back, y_gb)?)
}

/// Searches the graph basis of R for an inverse and verifies it; `None`
/// when no element of the required shape exists or verification fails.
pub fn recover_inverse(r: &RationalMap, x: &Ideal, y: &Ideal, budget: &Budget) -> Result<Option<RationalMap>> {
    let graph = crate::groebner::graph_basis(r, x, budget)?;
    let x_gb = x.groebner(budget)?;
    let y_gb = y.groebner(budget)?;
    recover_inverse_with(&graph, r, &x_gb, &y_gb)
}

pub(crate) fn recover_inverse_with(
    graph: &GraphBasis,
    r: &RationalMap,
    x_gb: &GroebnerBasis,
    y_gb: &GroebnerBasis,
) -> Result<Option<RationalMap>> {
    let Some(inv) = inverse_from_graph(graph, r, y_gb)? else {
        return Ok(None);
    };
    Ok(inverse_verified(r, &inv, x_gb, y_gb)?.then_some(inv))
}

/// Coordinates of Y that are polynomial functions of the others on Y,
/// found from the last coordinate down.
pub fn redundant_coordinates(y: &Ideal, budget: &Budget) -> Result<Vec<usize>> {
    let ring = y.ring();
    let n = ring.nvars();
    let mut dropped: Vec<usize> = Vec::new();
    for j in (0..n).rev() {
        let mut front: Vec<usize> = dropped.clone();
        front.push(j);
        front.sort_unstable();
        let kept: Vec<usize> = (0..n).filter(|v| !front.contains(v)).collect();
        if kept.is_empty() {
            continue;
        }
        let mut position = vec![0; n];
        let mut names = Vec::with_capacity(n);
        for (new, &old) in front.iter().chain(&kept).enumerate() {
            position[old] = new;
            names.push(ring.vars()[old].clone());
        }
        let k = front.len();
        let elim = PolyRing::new(ring.field().clone(), names, MonomialOrder::elimination(k));
        let gens = y.generators().iter().map(|g| g.remap(&elim, &position)).collect();
        let gb = groebner(&Ideal::new(&elim, gens), elim.order(), budget)?;
        let nf = gb.normal_form(&MultiPoly::var(&elim, position[j]));
        if nf.terms().iter().all(|(m, _)| m.exps()[..k].iter().all(|&e| e == 0)) {
            dropped.push(j);
        }
    }
    dropped.sort_unstable();
    Ok(dropped)
}

/// I(Y) ∩ L[kept] and R restricted to the kept coordinates.
pub(crate) fn drop_coordinates(
    y: &Ideal,
    r: &RationalMap,
    dropped: &[usize],
    order: &MonomialOrder,
    budget: &Budget,
) -> Result<(Ideal, RationalMap)> {
    let small = eliminate(y, dropped, budget)?;
    let ring = small.ring().with_order(order.clone());
    let small = Ideal::new(&ring, small.into_generators());
    let comps = (0..r.components().len())
        .filter(|j| !dropped.contains(j))
        .map(|j| r.components()[j].clone())
        .collect();
    let map = RationalMap::new(r.source().clone(), ring, comps)?;
    Ok((small, map))
}

pub(crate) fn y_ring(field: &Arc<crate::numberfield::NumberField>, count: usize, order: &MonomialOrder) -> Arc<PolyRing> {
    let names = (1..=count).map(|k| format!("t{k}")).collect();
    PolyRing::new(field.clone(), names, order.clone())
}
