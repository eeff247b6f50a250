//! Buchberger's algorithm over a number field, with the Gebauer–Möller
//! pair criteria and sugar-degree pair selection.
//!
//! Every computation runs under a [`Budget`]; exceeding it yields
//! [`Error::ResourceLimit`] rather than a hang. Pair selection is fully
//! deterministic, so identical input gives bit-identical bases.

mod elim;

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multipoly::{Monomial, MonomialOrder, MultiPoly, PolyRing};
use crate::numberfield::GaloisGroup;

pub use elim::{eliminate, graph_basis, image_ideal, poly_gcd, saturate, GraphBasis};

/// Caps on one Gröbner computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Total reduction steps.
    pub reductions: u64,
    /// S-pairs processed.
    pub pairs: u64,
    /// Largest total degree of a pair's lcm.
    pub degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            reductions: 1_000_000,
            pairs: 200_000,
            degree: 200,
        }
    }
}

impl Budget {
    pub fn with_reductions(reductions: u64) -> Self {
        Budget {
            reductions,
            ..Budget::default()
        }
    }
}

struct Counter<'a> {
    budget: &'a Budget,
    reductions: u64,
    pairs: u64,
}

impl<'a> Counter<'a> {
    fn new(budget: &'a Budget) -> Self {
        Counter {
            budget,
            reductions: 0,
            pairs: 0,
        }
    }

    fn reduction(&mut self) -> Result<()> {
        self.reductions += 1;
        if self.reductions > self.budget.reductions {
            return Err(Error::ResourceLimit(format!(
                "more than {} reduction steps",
                self.budget.reductions
            )));
        }
        Ok(())
    }

    fn pair(&mut self, lcm_degree: u32) -> Result<()> {
        self.pairs += 1;
        if self.pairs > self.budget.pairs {
            return Err(Error::ResourceLimit(format!(
                "more than {} S-pairs",
                self.budget.pairs
            )));
        }
        if lcm_degree > self.budget.degree {
            return Err(Error::ResourceLimit(format!(
                "S-pair of degree {lcm_degree} exceeds the degree cap {}",
                self.budget.degree
            )));
        }
        Ok(())
    }
}

/// An ideal given by generators.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<MultiPoly>,
}

impl Ideal {
    /// Zero generators are dropped; the rest are moved into `ring`.
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<MultiPoly>) -> Self {
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.with_ring(ring))
            .collect();
        Ideal {
            ring: ring.clone(),
            gens,
        }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: vec![MultiPoly::one(ring)],
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn into_generators(self) -> Vec<MultiPoly> {
        self.gens
    }

    /// I^σ, generated by the conjugated generators.
    pub fn sigma(&self, group: &GaloisGroup, s: usize) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.iter().map(|g| g.sigma(group, s)).collect(),
        }
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| g.with_ring(&self.ring)));
        Ideal {
            ring: self.ring.clone(),
            gens,
        }
    }

    /// Reduced basis for the ring's own order.
    pub fn groebner(&self, budget: &Budget) -> Result<GroebnerBasis> {
        groebner(self, self.ring.order(), budget)
    }
}

/// A reduced Gröbner basis: monic, tail-reduced, sorted by increasing
/// leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    elements: Vec<MultiPoly>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.elements == other.elements
    }
}

impl Eq for GroebnerBasis {}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        self.ring.order()
    }

    pub fn elements(&self) -> &[MultiPoly] {
        &self.elements
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal {
            ring: self.ring.clone(),
            gens: self.elements.clone(),
        }
    }

    /// Remainder of `p` on division by the basis, in the basis ring.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        let reducers: Vec<Reducer> = self.elements.iter().map(Reducer::new).collect();
        let active: Vec<usize> = (0..reducers.len()).collect();
        let unlimited = Budget {
            reductions: u64::MAX,
            ..Budget::default()
        };
        let mut counter = Counter::new(&unlimited);
        reduce_full(p.with_ring(&self.ring), &reducers, &active, None, &mut counter)
            .expect("normal form is unbudgeted")
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }
}

struct Reducer {
    poly: MultiPoly,
    lm: Monomial,
    mask: u64,
}

impl Reducer {
    fn new(p: &MultiPoly) -> Self {
        let lm = p.leading_monomial().expect("nonzero basis element").clone();
        Reducer {
            poly: p.clone(),
            mask: lm.mask(),
            lm,
        }
    }
}

fn find_reducer(m: &Monomial, reducers: &[Reducer], active: &[usize], skip: Option<usize>) -> Option<usize> {
    let mask = m.mask();
    active.iter().copied().find(|&k| {
        Some(k) != skip && reducers[k].mask & !mask == 0 && reducers[k].lm.divides(m)
    })
}

/// Full reduction (head and tail) by monic reducers.
fn reduce_full(
    p: MultiPoly,
    reducers: &[Reducer],
    active: &[usize],
    skip: Option<usize>,
    counter: &mut Counter,
) -> Result<MultiPoly> {
    let ring = p.ring().clone();
    let mut done = Vec::new();
    let mut rest = p;
    loop {
        let Some((m, c)) = rest.terms().first() else { break };
        match find_reducer(m, reducers, active, skip) {
            Some(k) => {
                counter.reduction()?;
                let r = &reducers[k];
                let q = m.div(&r.lm).unwrap();
                let c = c.clone();
                rest = rest.sub_scaled(&c, &q, &r.poly);
            }
            None => {
                let mut terms = rest.into_terms();
                done.push(terms.remove(0));
                rest = MultiPoly::from_sorted_terms(&ring, terms);
            }
        }
    }
    Ok(MultiPoly::from_sorted_terms(&ring, done))
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn spoly(a: &Reducer, b: &Reducer, lcm: &Monomial) -> MultiPoly {
    let ma = lcm.div(&a.lm).unwrap();
    let mb = lcm.div(&b.lm).unwrap();
    let field = a.poly.field();
    a.poly.mul_monomial(&ma).sub_scaled(&field.one(), &mb, &b.poly)
}

/// Reduced Gröbner basis of `ideal` for `order`.
pub fn groebner(ideal: &Ideal, order: &MonomialOrder, budget: &Budget) -> Result<GroebnerBasis> {
    let ring = if ideal.ring.order() == order {
        ideal.ring.clone()
    } else {
        ideal.ring.with_order(order.clone())
    };
    let mut input: Vec<MultiPoly> = ideal.gens.iter().map(|g| g.with_ring(&ring).monic()).collect();
    input.sort_by(|a, b| {
        order
            .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
            .then_with(|| a.len().cmp(&b.len()))
    });

    let unit = |ring: &Arc<PolyRing>| GroebnerBasis {
        ring: ring.clone(),
        elements: vec![MultiPoly::one(ring)],
    };

    let mut counter = Counter::new(budget);
    let mut reducers: Vec<Reducer> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for g in input {
        let h = reduce_full(g, &reducers, &active, None, &mut counter)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit(&ring));
        }
        let s = h.total_degree();
        insert(h.monic(), s, &mut reducers, &mut sugar, &mut active, &mut pairs);
    }

    while let Some(idx) = select_pair(&pairs, order) {
        let pair = pairs.swap_remove(idx);
        counter.pair(pair.lcm.degree())?;
        let s = spoly(&reducers[pair.i], &reducers[pair.j], &pair.lcm);
        let h = reduce_full(s, &reducers, &active, None, &mut counter)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit(&ring));
        }
        insert(h.monic(), pair.sugar, &mut reducers, &mut sugar, &mut active, &mut pairs);
    }

    // tail-reduce the minimal basis
    let mut elements = Vec::with_capacity(active.len());
    for &k in &active {
        let r = reduce_full(reducers[k].poly.clone(), &reducers, &active, Some(k), &mut counter)?;
        elements.push(r.monic());
    }
    elements.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    Ok(GroebnerBasis { ring, elements })
}

fn select_pair(pairs: &[Pair], order: &MonomialOrder) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, p) in pairs.iter().enumerate() {
        best = match best {
            None => Some(k),
            Some(b) => {
                let q = &pairs[b];
                let ord = p
                    .sugar
                    .cmp(&q.sugar)
                    .then_with(|| order.cmp(&p.lcm, &q.lcm))
                    .then_with(|| (p.i, p.j).cmp(&(q.i, q.j)));
                if ord == Ordering::Less {
                    Some(k)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

/// Adds `h` to the basis and updates the pair set (Gebauer–Möller).
fn insert(
    h: MultiPoly,
    h_sugar: u32,
    reducers: &mut Vec<Reducer>,
    sugar: &mut Vec<u32>,
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
) {
    let hi = reducers.len();
    let hr = Reducer::new(&h);
    let hlm = hr.lm.clone();

    let make_pair = |g: usize, reducers: &[Reducer], sugar: &[u32]| {
        let glm = &reducers[g].lm;
        let lcm = glm.lcm(&hlm);
        let s = (sugar[g] + lcm.degree() - glm.degree()).max(h_sugar + lcm.degree() - hlm.degree());
        Pair { i: g, j: hi, lcm, sugar: s }
    };

    let mut candidates: Vec<Pair> = active.iter().map(|&g| make_pair(g, reducers, sugar)).collect();
    let mut kept: Vec<Pair> = Vec::new();
    while !candidates.is_empty() {
        let p = candidates.remove(0);
        let coprime = reducers[p.i].lm.coprime(&hlm);
        let dominated = candidates.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            kept.push(p);
        }
    }
    kept.retain(|p| !reducers[p.i].lm.coprime(&hlm));

    pairs.retain(|p| {
        !(hlm.divides(&p.lcm)
            && reducers[p.i].lm.lcm(&hlm) != p.lcm
            && reducers[p.j].lm.lcm(&hlm) != p.lcm)
    });
    pairs.extend(kept);

    active.retain(|&g| !hlm.divides(&reducers[g].lm));
    active.push(hi);
    reducers.push(hr);
    sugar.push(h_sugar);
}

/// Equality of ideals via reduced grevlex bases.
pub fn ideals_equal(a: &Ideal, b: &Ideal, budget: &Budget) -> Result<bool> {
    if !a.ring.same_vars(&b.ring) {
        return Err(Error::RingMismatch("ideals live in different rings".into()));
    }
    let ga = groebner(a, &MonomialOrder::GrevLex, budget)?;
    let b = Ideal::new(&ga.ring, b.gens.clone());
    let gb = groebner(&b, &MonomialOrder::GrevLex, budget)?;
    Ok(ga.elements == gb.elements)
}

/// `b ⊆ a`, by reducing the generators of `b` modulo a basis of `a`.
pub fn ideal_contains(a: &GroebnerBasis, b: &Ideal) -> bool {
    b.gens.iter().all(|g| a.contains(g))
}

/// Every S-polynomial of the basis reduces to zero.
pub fn satisfies_buchberger_criterion(gb: &GroebnerBasis) -> bool {
    let reducers: Vec<Reducer> = gb.elements.iter().map(Reducer::new).collect();
    for i in 0..reducers.len() {
        for j in i + 1..reducers.len() {
            let lcm = reducers[i].lm.lcm(&reducers[j].lm);
            if !gb.contains(&spoly(&reducers[i], &reducers[j], &lcm)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;
    use crate::numberfield::{NumberField, Rational};

    pub(crate) fn ring(vars: &[&str], order: MonomialOrder) -> Arc<PolyRing> {
        let q = |n: i64| Rational::from_integer(n.into());
        let f = NumberField::new(vec![q(1), q(0), q(1)], "i").unwrap();
        PolyRing::new(f, vars.iter().map(|s| s.to_string()).collect(), order)
    }

    pub(crate) fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(g, r).unwrap()).collect())
    }

    #[test]
    fn principal() {
        let r = ring(&["x"], MonomialOrder::Lex);
        let gb = ideal(&r, &["x"]).groebner(&Budget::default()).unwrap();
        assert_eq!(gb.elements(), &[MultiPoly::var(&r, 0)]);
    }

    #[test]
    fn unit_ideal_from_difference() {
        let r = ring(&["x1", "x4"], MonomialOrder::GrevLex);
        let gb = ideal(&r, &["1 + x1^2 + x4^2", "-1 + x1^2 + x4^2"])
            .groebner(&Budget::default())
            .unwrap();
        assert!(gb.is_unit());
        assert!(gb.normal_form(&MultiPoly::one(&r)).is_zero());
    }

    #[test]
    fn twisted_cubic_lex() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Lex);
        let gb = ideal(&r, &["y - x^2", "z - x^3"]).groebner(&Budget::default()).unwrap();
        let target = parse_poly("z^2 - y^3", &r).unwrap();
        assert!(gb.elements().iter().any(|g| *g == target || *g == target.neg()));
        assert!(satisfies_buchberger_criterion(&gb));
    }

    #[test]
    fn normal_form_substitution() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let gb = ideal(&r, &["x + y"]).groebner(&Budget::default()).unwrap();
        let nf = gb.normal_form(&parse_poly("x^2 + y^2", &r).unwrap());
        assert_eq!(nf, parse_poly("2*y^2", &r).unwrap());
    }

    #[test]
    fn equality_examples() {
        let r = ring(&["x", "y"], MonomialOrder::GrevLex);
        let b = Budget::default();
        assert!(ideals_equal(&ideal(&r, &["x", "y"]), &ideal(&r, &["y", "x"]), &b).unwrap());
        assert!(!ideals_equal(&ideal(&r, &["x"]), &ideal(&r, &["x^2"]), &b).unwrap());
        assert!(ideals_equal(&ideal(&r, &["2*x + 2*y"]), &ideal(&r, &["x + y"]), &b).unwrap());
    }

    #[test]
    fn budget_breach_is_reported() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Lex);
        let tiny = Budget {
            reductions: 2,
            ..Budget::default()
        };
        let err = ideal(&r, &["y - x^2", "z - x^3", "x*y*z - 1"]).groebner(&tiny).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn cyclic3_is_deterministic() {
        let r = ring(&["a", "b", "c"], MonomialOrder::GrevLex);
        let i = ideal(&r, &["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]);
        let g1 = i.groebner(&Budget::default()).unwrap();
        let g2 = i.groebner(&Budget::default()).unwrap();
        assert_eq!(g1, g2);
        assert!(satisfies_buchberger_criterion(&g1));
        for g in i.generators() {
            assert!(g1.contains(g));
        }
    }
}
