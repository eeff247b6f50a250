//! Sparse multivariate polynomials over a number field.
//!
//! A polynomial is a list of `(monomial, coefficient)` pairs sorted in
//! decreasing order for its ring's monomial order, with no zero
//! coefficients. Every polynomial carries its ring (field, variable names,
//! order) behind an `Arc`.

mod map;
mod monomial;
mod parse;
mod print;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, GaloisGroup, NumberField, Rational};

pub use map::{compose_map, Fraction, RationalMap};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_element, parse_poly, parse_univariate};

/// Variables, coefficient field and monomial order.
#[derive(Debug)]
pub struct PolyRing {
    field: Arc<NumberField>,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: Arc<NumberField>, vars: Vec<String>, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing { field, vars, order })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        PolyRing::new(self.field.clone(), self.vars.clone(), order)
    }

    /// Same field and order, different variables.
    pub fn with_vars(&self, vars: Vec<String>) -> Arc<Self> {
        PolyRing::new(self.field.clone(), vars, self.order.clone())
    }

    pub fn same_vars(&self, other: &PolyRing) -> bool {
        self.vars == other.vars
            && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }

    pub fn same(&self, other: &PolyRing) -> bool {
        self.same_vars(other) && self.order == other.order
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, FieldElement)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_vars(&other.ring) && {
            if self.ring.order == other.ring.order {
                self.terms == other.terms
            } else {
                self.terms.len() == other.terms.len()
                    && self.with_ring(&other.ring).terms == other.terms
            }
        }
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl MultiPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: FieldElement) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.nvars()), c)]
        };
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn from_int(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.field.from_int(n))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i, 1), ring.field.one())],
        }
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: FieldElement) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Sorts and combines arbitrary terms.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Monomial, FieldElement)>) -> Self {
        let order = &ring.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, FieldElement)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => lc.add_assign(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MultiPoly {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Wraps terms that are already sorted, distinct and nonzero.
    pub fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, FieldElement)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, FieldElement)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self.terms.as_slice() {
            [] => Some(self.ring.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElement> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exps()[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .first()
            .map(|(m, _)| self.terms.iter().all(|(n, _)| n.degree() == m.degree()))
            .unwrap_or(true)
    }

    /// Indices of variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exps()[i] > 0))
            .collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .iter()
            .find(|(n, _)| n == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    fn check_ring(&self, other: &Self) {
        debug_assert!(
            self.ring.same(&other.ring),
            "polynomials from different rings: {:?} vs {:?}",
            self.ring.vars,
            other.ring.vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        let order = &self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca.add(cb);
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        MultiPoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `self - c * m * g`, the basic reduction step.
    pub fn sub_scaled(&self, c: &FieldElement, m: &Monomial, g: &Self) -> Self {
        self.check_ring(g);
        let field = &self.ring.field;
        let order = &self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut gi = g.terms.iter().map(|(gm, gc)| (gm.mul(m), field.mul(gc, c))).peekable();
        while i < self.terms.len() {
            let Some((gm, _)) = gi.peek() else { break };
            let (ma, ca) = &self.terms[i];
            match order.cmp(ma, gm) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    let (gm, gc) = gi.next().unwrap();
                    out.push((gm, gc.neg()));
                }
                Ordering::Equal => {
                    let (_, gc) = gi.next().unwrap();
                    let c = ca.sub(&gc);
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(gi.map(|(gm, gc)| (gm, gc.neg())));
        MultiPoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let field = &self.ring.field;
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&self.ring.field.from_rational(q.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let field = &self.ring.field;
        let mut raw = Vec::with_capacity(small.len() * large.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                raw.push((ma.mul(mb), field.mul(ca, cb)));
            }
        }
        Self::from_terms(&self.ring, raw)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = self.ring.field.inv(lc).unwrap();
                self.scale(&inv)
            }
        }
    }

    /// Greatest common divisor of all monomials in the support.
    pub fn monomial_content(&self) -> Monomial {
        let n = self.ring.nvars();
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(n),
            Some((first, _)) => it.fold(first.clone(), |acc, (m, _)| acc.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(n, c)| n.div(m).map(|q| (q, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(MultiPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check_ring(d);
        let (lm, lc) = d.terms.first()?;
        let inv = self.ring.field.inv(lc).unwrap();
        let mut rest = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rest.terms.first() {
            let q = m.div(lm)?;
            let qc = self.ring.field.mul(c, &inv);
            rest = rest.sub_scaled(&qc, &q, d);
            quotient.push((q, qc));
        }
        Some(MultiPoly {
            ring: self.ring.clone(),
            terms: quotient,
        })
    }

    /// Re-sorts the terms for a ring with the same variables.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Self {
        debug_assert_eq!(self.ring.vars, ring.vars);
        if self.ring.order == ring.order {
            return MultiPoly {
                ring: ring.clone(),
                terms: self.terms.clone(),
            };
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.order.cmp(&b.0, &a.0));
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// variable `var_map[i]`.
    pub fn remap(&self, target: &Arc<PolyRing>, var_map: &[usize]) -> Self {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; n];
                for (i, e) in m.exps().iter().enumerate() {
                    if *e > 0 {
                        exps[var_map[i]] += e;
                    }
                }
                (Monomial::from_exps(exps), c.clone())
            })
            .collect();
        Self::from_terms(target, terms)
    }

    /// Moves into a ring whose variables include all occurring variables,
    /// matching them by name.
    pub fn rename_into(&self, target: &Arc<PolyRing>) -> Result<Self> {
        let map = self
            .ring
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| match target.var_index(v) {
                Some(j) => Ok(j),
                None if self.terms.iter().all(|(m, _)| m.exps()[i] == 0) => Ok(usize::MAX),
                None => Err(Error::RingMismatch(format!("variable `{v}` missing in target ring"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; n];
                for (i, e) in m.exps().iter().enumerate() {
                    if *e > 0 {
                        exps[map[i]] += e;
                    }
                }
                (Monomial::from_exps(exps), c.clone())
            })
            .collect();
        Ok(Self::from_terms(target, terms))
    }

    /// Substitutes `images[i]` for variable `i`; all images share one ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .expect("substitution needs a target ring");
        self.substitute_into(&target, images)
    }

    /// Like [`MultiPoly::substitute`] with the target ring given explicitly,
    /// so that polynomials in zero variables can be moved too.
    pub fn substitute_into(&self, target: &Arc<PolyRing>, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        let target = target.clone();
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(&target), p.clone()]).collect();
        let mut acc = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Evaluates at a point of L^n.
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        let field = &self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = field.mul(&t, &field.pow(&point[i], e));
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// P^σ: σ applied to every coefficient.
    pub fn sigma(&self, group: &GaloisGroup, sigma: usize) -> Self {
        if sigma == group.identity() {
            return self.clone();
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), group.apply(sigma, c)))
                .collect(),
        }
    }

    /// Σ_σ P^σ.
    pub fn trace(&self, group: &GaloisGroup) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), group.trace(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MultiPoly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// All coefficients lie in the fixed field.
    pub fn is_fixed(&self, group: &GaloisGroup) -> bool {
        self.terms.iter().all(|(_, c)| group.is_fixed(c))
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_rational())
    }
}

/// P^σ as a free function, mirroring the coefficient action.
pub fn poly_sigma(p: &MultiPoly, group: &GaloisGroup, sigma: usize) -> MultiPoly {
    p.sigma(group, sigma)
}

/// The polynomial trace Σ_σ P^σ.
pub fn poly_trace(p: &MultiPoly, group: &GaloisGroup) -> MultiPoly {
    p.trace(group)
}
