//! Generators for the invariants of the block permutation action of Γ on
//! ∏_{σ∈Γ} L^n.
//!
//! Orbit sums of monomials up to degree |Γ| generate the invariant algebra
//! in characteristic zero. The raw list is then thinned to a minimal
//! generating set.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{Budget, Ideal};
use crate::multipoly::{Monomial, MonomialOrder, MultiPoly, PolyRing};
use crate::numberfield::{FieldElement, GaloisGroup};

/// Refuse to enumerate more monomials than this.
pub const MONOMIAL_LIMIT: u128 = 100_000;

/// Θ: τ sends the block of σ to the block of τσ.
///
/// Blocks are laid out with the identity first and then the remaining
/// elements in index order; variable `(σ, i)` is `y_<label>_<i+1>`.
#[derive(Clone, Debug)]
pub struct BlockPermutationAction {
    group: Arc<GaloisGroup>,
    n: usize,
    ring: Arc<PolyRing>,
    blocks: Vec<usize>,
    position: Vec<usize>,
    perms: Vec<Vec<usize>>,
}

impl BlockPermutationAction {
    pub fn new(group: &Arc<GaloisGroup>, n: usize) -> Self {
        let blocks = group.identity_first();
        let mut position = vec![0; group.len()];
        for (b, &s) in blocks.iter().enumerate() {
            position[s] = b;
        }
        let mut names = Vec::with_capacity(n * blocks.len());
        for &s in &blocks {
            for i in 0..n {
                names.push(format!("y_{}_{}", group.label(s), i + 1));
            }
        }
        let ring = PolyRing::new(group.field().clone(), names, MonomialOrder::GrevLex);
        let perms = (0..group.len())
            .map(|tau| {
                let mut p = vec![0; n * blocks.len()];
                for &s in &blocks {
                    let to = position[group.compose(tau, s)];
                    for i in 0..n {
                        p[position[s] * n + i] = to * n + i;
                    }
                }
                p
            })
            .collect();
        BlockPermutationAction {
            group: group.clone(),
            n,
            ring,
            blocks,
            position,
            perms,
        }
    }

    pub fn group(&self) -> &Arc<GaloisGroup> {
        &self.group
    }

    pub fn block_size(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// Group elements in block order.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Ambient index of y_{σ,i}.
    pub fn var(&self, sigma: usize, i: usize) -> usize {
        self.position[sigma] * self.n + i
    }

    /// Variable permutation of Θ(τ).
    pub fn permutation(&self, tau: usize) -> &[usize] {
        &self.perms[tau]
    }

    /// P ∘ Θ(τ).
    pub fn apply(&self, p: &MultiPoly, tau: usize) -> MultiPoly {
        p.remap(&self.ring, &self.perms[tau])
    }

    fn apply_exps(&self, exps: &[u32], tau: usize) -> Vec<u32> {
        let mut out = vec![0; exps.len()];
        for (v, &e) in exps.iter().enumerate() {
            out[self.perms[tau][v]] = e;
        }
        out
    }

    /// Θ(τ) on a point: the block of σ moves to the block of τσ.
    pub fn act_on_point(&self, point: &[FieldElement], tau: usize) -> Vec<FieldElement> {
        let mut out = point.to_vec();
        for (v, x) in point.iter().enumerate() {
            out[self.perms[tau][v]] = x.clone();
        }
        out
    }

    pub fn is_invariant(&self, p: &MultiPoly) -> bool {
        (0..self.group.len()).all(|tau| self.apply(p, tau) == *p)
    }
}

/// (1/|Γ|) Σ_τ P ∘ Θ(τ).
pub fn reynolds(p: &MultiPoly, action: &BlockPermutationAction) -> MultiPoly {
    let p = p.with_ring(action.ring());
    let sum = (0..action.group.len()).fold(MultiPoly::zero(action.ring()), |acc, tau| {
        acc.add(&action.apply(&p, tau))
    });
    let m = action.group.len() as i64;
    sum.scale_rational(&crate::numberfield::Rational::new(1.into(), m.into()))
}

/// A generating set of the invariant algebra.
#[derive(Clone, Debug)]
pub struct InvariantGeneratorSet {
    pub generators: Vec<MultiPoly>,
    pub degree_bound: u32,
    /// Number of distinct orbit sums before minimization.
    pub raw_count: usize,
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Exponent vectors of degree `d` in `nvars` variables, lex-descending.
fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(nvars, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Distinct orbit sums of the monomials of degree 1..=|Γ|, ordered by
/// degree and then by lex-largest orbit representative (descending).
pub fn orbit_sums(action: &BlockPermutationAction) -> Result<Vec<MultiPoly>> {
    let nvars = action.ring.nvars();
    let bound = action.group.len() as u32;
    let total: u128 = (1..=bound as u128)
        .map(|d| binomial(nvars as u128 + d - 1, d))
        .fold(0u128, |a, b| a.saturating_add(b));
    if total > MONOMIAL_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "{total} monomials up to degree {bound} in {nvars} variables (limit {MONOMIAL_LIMIT})"
        )));
    }
    let one = action.ring.field().one();
    let mut out = Vec::new();
    for d in 1..=bound {
        for exps in monomials_of_degree(nvars, d) {
            let orbit: Vec<Vec<u32>> = (0..action.group.len()).map(|t| action.apply_exps(&exps, t)).collect();
            // keep only the lex-largest representative of each orbit
            if orbit.iter().any(|o| *o > exps) {
                continue;
            }
            let mut terms: Vec<(Monomial, FieldElement)> = Vec::new();
            for o in orbit {
                let m = Monomial::from_exps(o);
                if !terms.iter().any(|(t, _)| *t == m) {
                    terms.push((m, one.clone()));
                }
            }
            out.push(MultiPoly::from_terms(&action.ring, terms));
        }
    }
    Ok(out)
}

/// Orbit sums up to the Noether bound, minimized.
pub fn generate_invariants(action: &BlockPermutationAction, budget: &Budget) -> Result<InvariantGeneratorSet> {
    let raw = orbit_sums(action)?;
    let raw_count = raw.len();
    let generators = minimize_generators(&raw, action, budget)?;
    Ok(InvariantGeneratorSet {
        generators,
        degree_bound: action.group.len() as u32,
        raw_count,
    })
}

/// Greedily drops, in list order, every generator that lies in the
/// subalgebra generated by the ones still kept.
pub fn minimize_generators(
    gens: &[MultiPoly],
    action: &BlockPermutationAction,
    budget: &Budget,
) -> Result<Vec<MultiPoly>> {
    let gens: Vec<MultiPoly> = gens.iter().map(|g| g.with_ring(action.ring())).collect();
    let homogeneous = gens.iter().all(|g| g.is_homogeneous() && !g.is_constant());
    let mut keep = vec![true; gens.len()];
    for k in 0..gens.len() {
        if gens.len() == 1 {
            break;
        }
        let others: Vec<&MultiPoly> = (0..gens.len()).filter(|&j| j != k && keep[j]).map(|j| &gens[j]).collect();
        let member = if homogeneous {
            in_graded_subalgebra(&gens[k], &others)
        } else {
            in_subalgebra(&gens[k], &others, budget)?
        };
        if member {
            keep[k] = false;
        }
    }
    Ok(gens.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect())
}

/// Row-echelon span keyed by leading monomial.
struct Echelon {
    rows: Vec<MultiPoly>,
    lead: HashMap<Monomial, usize>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            lead: HashMap::new(),
        }
    }

    fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let ring = p.ring().clone();
        let mut p = p.clone();
        let mut done: Vec<(Monomial, FieldElement)> = Vec::new();
        while let Some((m, c)) = p.terms().first() {
            match self.lead.get(m) {
                Some(&r) => {
                    let c = c.clone();
                    let one = Monomial::one(m.nvars());
                    p = p.sub_scaled(&c, &one, &self.rows[r]);
                }
                None => {
                    let mut terms = p.into_terms();
                    done.push(terms.remove(0));
                    p = MultiPoly::from_sorted_terms(&ring, terms);
                }
            }
        }
        MultiPoly::from_sorted_terms(&ring, done)
    }

    fn insert(&mut self, p: &MultiPoly) {
        let r = self.reduce(p);
        if !r.is_zero() {
            self.push(r.monic());
        }
    }

    fn push(&mut self, p: MultiPoly) {
        self.lead.insert(p.leading_monomial().unwrap().clone(), self.rows.len());
        self.rows.push(p);
    }

    fn contains(&self, p: &MultiPoly) -> bool {
        self.reduce(p).is_zero()
    }
}

/// Membership of a homogeneous `candidate` in the algebra generated by
/// homogeneous `others`: is it a linear combination of products of the
/// others with matching degree?
pub fn in_graded_subalgebra(candidate: &MultiPoly, others: &[&MultiPoly]) -> bool {
    let d = candidate.total_degree();
    let mut span = Echelon::new();
    let mut stack: Vec<(usize, MultiPoly, u32)> = vec![(0, MultiPoly::one(candidate.ring()), 0)];
    // products of non-decreasing index sequences with degree sum d
    while let Some((start, prod, deg)) = stack.pop() {
        if deg == d {
            span.insert(&prod);
            continue;
        }
        for (j, g) in others.iter().enumerate().skip(start) {
            let gd = g.total_degree();
            if gd > 0 && deg + gd <= d {
                stack.push((j, prod.mul(g), deg + gd));
            }
        }
    }
    span.contains(candidate)
}

/// Subalgebra membership through tag variables: with T_k − E_k adjoined
/// and the y-variables eliminated first, the candidate lies in
/// L[E_1, …] iff its normal form involves only the tags.
pub fn in_subalgebra(candidate: &MultiPoly, others: &[&MultiPoly], budget: &Budget) -> Result<bool> {
    let ring = candidate.ring();
    let n = ring.nvars();
    let mut names: Vec<String> = ring.vars().to_vec();
    for k in 0..others.len() {
        names.push(format!("_T{}", k + 1));
    }
    let tagged = PolyRing::new(ring.field().clone(), names, MonomialOrder::elimination(n));
    let embed: Vec<usize> = (0..n).collect();
    let gens = others
        .iter()
        .enumerate()
        .map(|(k, e)| MultiPoly::var(&tagged, n + k).sub(&e.remap(&tagged, &embed)))
        .collect();
    let gb = Ideal::new(&tagged, gens).groebner(budget)?;
    let nf = gb.normal_form(&candidate.remap(&tagged, &embed));
    Ok(nf.terms().iter().all(|(m, _)| m.exps()[..n].iter().all(|&e| e == 0)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::multipoly::parse_poly;
    use crate::numberfield::{NumberField, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    pub(crate) fn gaussian_group() -> Arc<GaloisGroup> {
        let f = NumberField::new(vec![q(1), q(0), q(1)], "i").unwrap();
        GaloisGroup::new(f.clone(), vec!["e".into(), "s".into()], vec![f.alpha(), f.alpha().neg()]).unwrap()
    }

    pub(crate) fn cubic_group() -> Arc<GaloisGroup> {
        let f = NumberField::new(vec![q(-1), q(-2), q(1), q(1)], "c").unwrap();
        let a = f.alpha();
        let a2 = f.mul(&a, &a);
        let s = a2.sub(&f.from_int(2));
        let t = f.from_int(1).sub(&a).sub(&a2);
        GaloisGroup::new(f.clone(), vec!["e".into(), "s".into(), "t".into()], vec![a, s, t]).unwrap()
    }

    pub(crate) fn trivial_group() -> Arc<GaloisGroup> {
        GaloisGroup::trivial(NumberField::rationals()).unwrap()
    }

    #[test]
    fn reynolds_examples() {
        let act = BlockPermutationAction::new(&gaussian_group(), 1);
        let r = act.ring();
        let ye = MultiPoly::var(r, 0);
        assert_eq!(reynolds(&ye, &act), parse_poly("1/2*y_e_1 + 1/2*y_s_1", r).unwrap());
        let sym = parse_poly("y_e_1*y_s_1", r).unwrap();
        assert_eq!(reynolds(&sym, &act), sym);
    }

    #[test]
    fn two_blocks_of_one() {
        let act = BlockPermutationAction::new(&gaussian_group(), 1);
        let set = generate_invariants(&act, &Budget::default()).unwrap();
        let r = act.ring();
        assert_eq!(
            set.generators,
            vec![parse_poly("y_e_1 + y_s_1", r).unwrap(), parse_poly("y_e_1*y_s_1", r).unwrap()]
        );
    }

    #[test]
    fn block_swap_on_four_coordinates() {
        let act = BlockPermutationAction::new(&gaussian_group(), 4);
        let raw = orbit_sums(&act).unwrap();
        assert_eq!(raw.len(), 24);
        let set = generate_invariants(&act, &Budget::default()).unwrap();
        assert_eq!(set.generators.len(), 14);
        for g in &set.generators {
            assert!(act.is_invariant(g));
            assert!(g.has_rational_coefficients());
        }
    }

    #[test]
    fn trivial_group_gives_coordinates() {
        let act = BlockPermutationAction::new(&trivial_group(), 3);
        let set = generate_invariants(&act, &Budget::default()).unwrap();
        let coords: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(act.ring(), i)).collect();
        assert_eq!(set.generators, coords);
    }

    #[test]
    fn power_sum_is_redundant() {
        let act = BlockPermutationAction::new(&gaussian_group(), 1);
        let r = act.ring();
        let gens: Vec<MultiPoly> = ["y_e_1 + y_s_1", "y_e_1^2 + y_s_1^2", "y_e_1*y_s_1"]
            .iter()
            .map(|s| parse_poly(s, r).unwrap())
            .collect();
        let min = minimize_generators(&gens, &act, &Budget::default()).unwrap();
        assert_eq!(min, vec![gens[0].clone(), gens[2].clone()]);
        let single = minimize_generators(&gens[..1], &act, &Budget::default()).unwrap();
        assert_eq!(single, gens[..1].to_vec());
    }

    #[test]
    fn graded_and_groebner_membership_agree() {
        let act = BlockPermutationAction::new(&gaussian_group(), 2);
        let raw = orbit_sums(&act).unwrap();
        let b = Budget::default();
        for k in 0..raw.len() {
            let others: Vec<&MultiPoly> = raw.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g).collect();
            assert_eq!(in_graded_subalgebra(&raw[k], &others), in_subalgebra(&raw[k], &others, &b).unwrap());
        }
        // a degree-2 generator against the linear ones only
        let linear: Vec<&MultiPoly> = raw.iter().filter(|g| g.total_degree() == 1).collect();
        let quad = raw.iter().find(|g| g.total_degree() == 2).unwrap();
        assert_eq!(in_graded_subalgebra(quad, &linear), in_subalgebra(quad, &linear, &b).unwrap());
    }

    #[test]
    fn cubic_group_invariants() {
        let act = BlockPermutationAction::new(&cubic_group(), 1);
        let set = generate_invariants(&act, &Budget::default()).unwrap();
        // cyclic (not full symmetric) action on three variables: e1, one
        // quadratic and two cubic orbit sums
        assert_eq!(set.raw_count, 1 + 2 + 4);
        assert_eq!(set.generators.len(), 4);
        for g in &set.generators {
            assert!(act.is_invariant(g));
        }
    }

    #[test]
    fn explosion_guard() {
        let act = BlockPermutationAction::new(&cubic_group(), 40);
        assert!(orbit_sums(&act).unwrap_err().is_resource_limit());
    }
}
