use std::sync::Arc;

use super::{groebner, Budget, GroebnerBasis, Ideal};
use crate::error::{Error, Result};
use crate::multipoly::{MonomialOrder, MultiPoly, PolyRing, RationalMap};

/// Budget for the small lcm computation behind [`poly_gcd`].
const GCD_BUDGET: u64 = 50_000;

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

fn result_order(ring: &PolyRing) -> MonomialOrder {
    match ring.order() {
        MonomialOrder::Lex => MonomialOrder::Lex,
        _ => MonomialOrder::GrevLex,
    }
}

/// Keeps basis elements free of the first `k` variables and moves them to
/// `target`, whose variables are the remaining ones in order.
fn project(elements: &[MultiPoly], k: usize, target: &Arc<PolyRing>) -> Vec<MultiPoly> {
    let n = elements.first().map(|e| e.ring().nvars()).unwrap_or(k);
    let var_map: Vec<usize> = (0..n).map(|i| i.saturating_sub(k)).collect();
    elements
        .iter()
        .filter(|e| e.terms().iter().all(|(m, _)| m.exps()[..k].iter().all(|&x| x == 0)))
        .map(|e| e.remap(target, &var_map))
        .collect()
}

/// I ∩ L[kept variables], through a block order with the dropped variables
/// first.
pub fn eliminate(ideal: &Ideal, drop: &[usize], budget: &Budget) -> Result<Ideal> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if let Some(&bad) = drop.iter().find(|&&d| d >= n) {
        return Err(Error::RingMismatch(format!("no variable with index {bad}")));
    }
    let kept: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
    let dropped: Vec<usize> = (0..n).filter(|i| drop.contains(i)).collect();
    let mut position = vec![0; n];
    let mut names = Vec::with_capacity(n);
    for (new, &old) in dropped.iter().chain(&kept).enumerate() {
        position[old] = new;
        names.push(ring.vars()[old].clone());
    }
    let k = dropped.len();
    let elim_ring = PolyRing::new(ring.field().clone(), names, MonomialOrder::elimination(k));
    let gens = ideal.generators().iter().map(|g| g.remap(&elim_ring, &position)).collect();
    let gb = groebner(&Ideal::new(&elim_ring, gens), elim_ring.order(), budget)?;
    let kept_names = kept.iter().map(|&i| ring.vars()[i].clone()).collect();
    let target = PolyRing::new(ring.field().clone(), kept_names, result_order(ring));
    Ok(Ideal::new(&target, project(gb.elements(), k, &target)))
}

/// I : h^∞ = ⟨I, 1 − s·h⟩ ∩ L[x].
pub fn saturate(ideal: &Ideal, h: &MultiPoly, budget: &Budget) -> Result<Ideal> {
    if h.is_zero() {
        return Err(Error::Input("cannot saturate by the zero polynomial".into()));
    }
    if h.is_constant() {
        return Ok(ideal.clone());
    }
    let ring = ideal.ring();
    let n = ring.nvars();
    let mut names = vec![fresh_name("s", ring.vars())];
    names.extend(ring.vars().iter().cloned());
    let aux = PolyRing::new(ring.field().clone(), names, MonomialOrder::elimination(1));
    let shift: Vec<usize> = (1..=n).collect();
    let mut gens: Vec<MultiPoly> = ideal.generators().iter().map(|g| g.remap(&aux, &shift)).collect();
    let s = MultiPoly::var(&aux, 0);
    gens.push(MultiPoly::one(&aux).sub(&s.mul(&h.remap(&aux, &shift))));
    let gb = groebner(&Ideal::new(&aux, gens), aux.order(), budget)?;
    let out = project(gb.elements(), 1, ring);
    Ok(Ideal::new(ring, out))
}

/// Gröbner basis of the graph ideal of a rational map, under a block order
/// with `[s,] source variables` before the target variables.
#[derive(Clone, Debug)]
pub struct GraphBasis {
    pub basis: GroebnerBasis,
    /// 1 when a saturation variable leads the ring, else 0.
    pub lead: usize,
    /// Number of source variables.
    pub sources: usize,
}

impl GraphBasis {
    /// Index of source variable `i` in the graph ring.
    pub fn source_var(&self, i: usize) -> usize {
        self.lead + i
    }

    /// Index of target variable `j` in the graph ring.
    pub fn target_var(&self, j: usize) -> usize {
        self.lead + self.sources + j
    }

    /// The image ideal: basis elements free of the source block.
    pub fn image(&self, target: &Arc<PolyRing>) -> Ideal {
        Ideal::new(target, project(self.basis.elements(), self.lead + self.sources, target))
    }
}

/// Graph ideal ⟨I, t_j·den_j − num_j⟩, saturated by the product of the
/// non-constant denominators.
pub fn graph_basis(map: &RationalMap, source: &Ideal, budget: &Budget) -> Result<GraphBasis> {
    let src = map.source();
    let tgt = map.target();
    if !source.ring().same_vars(src) {
        return Err(Error::RingMismatch("map and ideal live in different rings".into()));
    }
    let denominator = map.denominator_product();
    let aux = !denominator.is_constant();
    if aux {
        let gb = source.groebner(budget)?;
        for (j, c) in map.components().iter().enumerate() {
            if !c.den.is_constant() && gb.contains(&c.den) {
                return Err(Error::ZeroDenominator(format!(
                    "denominator {} of component {} vanishes on the whole variety",
                    c.den,
                    tgt.vars()[j]
                )));
            }
        }
    }
    let n = src.nvars();
    let lead = usize::from(aux);
    let mut names: Vec<String> = Vec::new();
    if aux {
        names.push(fresh_name("s", src.vars()));
    }
    names.extend(src.vars().iter().cloned());
    for t in tgt.vars() {
        let name = fresh_name(t, &names);
        names.push(name);
    }
    let graph = PolyRing::new(src.field().clone(), names, MonomialOrder::elimination(lead + n));
    let shift: Vec<usize> = (lead..lead + n).collect();
    let mut gens: Vec<MultiPoly> = source.generators().iter().map(|g| g.remap(&graph, &shift)).collect();
    for (j, c) in map.components().iter().enumerate() {
        let t = MultiPoly::var(&graph, lead + n + j);
        gens.push(t.mul(&c.den.remap(&graph, &shift)).sub(&c.num.remap(&graph, &shift)));
    }
    if aux {
        let s = MultiPoly::var(&graph, 0);
        gens.push(MultiPoly::one(&graph).sub(&s.mul(&denominator.remap(&graph, &shift))));
    }
    let basis = groebner(&Ideal::new(&graph, gens), graph.order(), budget)?;
    Ok(GraphBasis {
        basis,
        lead,
        sources: n,
    })
}

/// Ideal of the Zariski closure of F(V(I)) in the target ring of F.
pub fn image_ideal(map: &RationalMap, source: &Ideal, budget: &Budget) -> Result<Ideal> {
    Ok(graph_basis(map, source, budget)?.image(map.target()))
}

/// Monic gcd of two polynomials, as a·b / lcm(a, b) with the lcm read off
/// ⟨t·a, (1 − t)·b⟩ ∩ L[x].
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    let ring = a.ring();
    if a.is_zero() {
        return Ok(b.monic());
    }
    if b.is_zero() {
        return Ok(a.monic());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(MultiPoly::one(ring));
    }
    let n = ring.nvars();
    let mut names = vec![fresh_name("t", ring.vars())];
    names.extend(ring.vars().iter().cloned());
    let aux = PolyRing::new(ring.field().clone(), names, MonomialOrder::elimination(1));
    let shift: Vec<usize> = (1..=n).collect();
    let t = MultiPoly::var(&aux, 0);
    let a2 = a.remap(&aux, &shift);
    let b2 = b.remap(&aux, &shift);
    let gens = vec![t.mul(&a2), MultiPoly::one(&aux).sub(&t).mul(&b2)];
    let gb = groebner(&Ideal::new(&aux, gens), aux.order(), &Budget::with_reductions(GCD_BUDGET))?;
    let lcm = project(gb.elements(), 1, ring);
    let [lcm] = lcm.as_slice() else {
        return Err(Error::ResourceLimit("lcm ideal is not principal".into()));
    };
    let g = a
        .mul(b)
        .div_exact(lcm)
        .ok_or_else(|| Error::ResourceLimit("lcm does not divide the product".into()))?;
    Ok(g.monic())
}
