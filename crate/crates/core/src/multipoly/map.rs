use std::fmt;
use std::sync::Arc;

use super::{MultiPoly, PolyRing};
use crate::error::{Error, Result};
use crate::groebner;
use crate::numberfield::{FieldElement, GaloisGroup};

/// Rings with at most this many variables get full gcd cancellation.
const GCD_VARIABLE_LIMIT: usize = 2;

/// A quotient `num / den` of polynomials in one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Fraction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Fraction {
    pub fn poly(num: MultiPoly) -> Self {
        let den = MultiPoly::one(num.ring());
        Fraction { num, den }
    }

    /// Builds and normalizes `num / den`.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator(format!("({num}) / 0")));
        }
        Ok(Fraction { num, den }.normalized())
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.num.ring()
    }

    /// True when the denominator is a nonzero constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The fraction as a polynomial, when the denominator is constant.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        let c = self.den.as_constant()?;
        let inv = self.num.field().inv(&c)?;
        Some(self.num.scale(&inv))
    }

    /// Monic denominator with scalar, monomial and (in small rings) full
    /// polynomial content removed.
    pub fn normalized(self) -> Self {
        let Fraction { mut num, mut den } = self;
        if num.is_zero() {
            return Fraction::poly(num);
        }
        let field = num.field().clone();
        let lc = den.leading_coefficient().unwrap().clone();
        if !lc.is_one() {
            let inv = field.inv(&lc).unwrap();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.is_constant() {
            return Fraction { num, den };
        }
        let common = num.monomial_content().gcd(&den.monomial_content());
        if !common.is_one() {
            num = num.div_monomial(&common).unwrap();
            den = den.div_monomial(&common).unwrap();
        }
        if let Some(q) = num.div_exact(&den) {
            return Fraction::poly(q);
        }
        if den.ring().nvars() <= GCD_VARIABLE_LIMIT {
            if let Ok(g) = groebner::poly_gcd(&num, &den) {
                if !g.is_constant() {
                    num = num.div_exact(&g).expect("gcd divides numerator");
                    den = den.div_exact(&g).expect("gcd divides denominator");
                    let lc = den.leading_coefficient().unwrap().clone();
                    let inv = field.inv(&lc).unwrap();
                    num = num.scale(&inv);
                    den = den.scale(&inv);
                }
            }
        }
        Fraction { num, den }
    }

    pub fn sigma(&self, group: &GaloisGroup, s: usize) -> Self {
        Fraction {
            num: self.num.sigma(group, s),
            den: self.den.sigma(group, s),
        }
    }

    /// Value at a point, or `None` where the denominator vanishes.
    pub fn eval(&self, point: &[FieldElement]) -> Option<FieldElement> {
        let d = self.den.eval(point);
        let field = self.num.field();
        field.div(&self.num.eval(point), &d)
    }

    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Self {
        Fraction {
            num: self.num.with_ring(ring),
            den: self.den.with_ring(ring),
        }
    }
}

/// A rational map `source → target`: one fraction in the source ring per
/// target variable.
#[derive(Clone, Debug)]
pub struct RationalMap {
    source: Arc<PolyRing>,
    target: Arc<PolyRing>,
    components: Vec<Fraction>,
}

impl RationalMap {
    pub fn new(source: Arc<PolyRing>, target: Arc<PolyRing>, components: Vec<Fraction>) -> Result<Self> {
        if components.len() != target.nvars() {
            return Err(Error::RingMismatch(format!(
                "map has {} components but the target has {} variables",
                components.len(),
                target.nvars()
            )));
        }
        for c in &components {
            if !c.ring().same_vars(&source) {
                return Err(Error::RingMismatch("map component outside the source ring".into()));
            }
            if c.den.is_zero() {
                return Err(Error::ZeroDenominator(format!("{c:?}")));
            }
        }
        let components = components.into_iter().map(|c| c.with_ring(&source)).collect();
        Ok(RationalMap {
            source,
            target,
            components,
        })
    }

    /// A polynomial map.
    pub fn polynomial(source: Arc<PolyRing>, target: Arc<PolyRing>, polys: Vec<MultiPoly>) -> Result<Self> {
        Self::new(source, target, polys.into_iter().map(Fraction::poly).collect())
    }

    pub fn identity(ring: &Arc<PolyRing>) -> Self {
        let components = (0..ring.nvars()).map(|i| Fraction::poly(MultiPoly::var(ring, i))).collect();
        RationalMap {
            source: ring.clone(),
            target: ring.clone(),
            components,
        }
    }

    pub fn source(&self) -> &Arc<PolyRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PolyRing> {
        &self.target
    }

    pub fn components(&self) -> &[Fraction] {
        &self.components
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(Fraction::is_polynomial)
    }

    /// Polynomial components, when every denominator is constant.
    pub fn as_polys(&self) -> Option<Vec<MultiPoly>> {
        self.components.iter().map(Fraction::as_poly).collect()
    }

    /// Product of the non-constant denominators.
    pub fn denominator_product(&self) -> MultiPoly {
        self.components
            .iter()
            .filter(|c| !c.den.is_constant())
            .fold(MultiPoly::one(&self.source), |acc, c| acc.mul(&c.den))
    }

    /// f^σ: σ applied to every coefficient of every component.
    pub fn sigma(&self, group: &GaloisGroup, s: usize) -> Self {
        RationalMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|c| c.sigma(group, s)).collect(),
        }
    }

    /// Same components over a source ring with identical variables and a
    /// renamed target.
    pub fn with_rings(&self, source: &Arc<PolyRing>, target: &Arc<PolyRing>) -> Self {
        debug_assert_eq!(target.nvars(), self.target.nvars());
        RationalMap {
            source: source.clone(),
            target: target.clone(),
            components: self.components.iter().map(|c| c.with_ring(source)).collect(),
        }
    }

    /// P ∘ self for a polynomial P on the target, as an unnormalized
    /// fraction in the source ring.
    pub fn pull_back(&self, p: &MultiPoly) -> Fraction {
        debug_assert!(p.ring().same_vars(&self.target));
        if let Some(polys) = self.as_polys() {
            return Fraction::poly(p.substitute_into(&self.source, &polys));
        }
        // homogenize each variable separately: r_j^a s_j^(D_j - a)
        let n = self.target.nvars();
        let degrees: Vec<u32> = (0..n).map(|j| p.degree_in(j)).collect();
        let mut num_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
        let mut den_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
        for (j, c) in self.components.iter().enumerate() {
            let mut np = vec![MultiPoly::one(&self.source)];
            let mut dp = vec![MultiPoly::one(&self.source)];
            for _ in 0..degrees[j] {
                np.push(np.last().unwrap().mul(&c.num));
                dp.push(dp.last().unwrap().mul(&c.den));
            }
            num_pows.push(np);
            den_pows.push(dp);
        }
        let mut num = MultiPoly::zero(&self.source);
        for (m, c) in p.terms() {
            let mut t = MultiPoly::constant(&self.source, c.clone());
            for (j, &a) in m.exps().iter().enumerate() {
                let d = degrees[j];
                if d == 0 {
                    continue;
                }
                if a > 0 {
                    t = t.mul(&num_pows[j][a as usize]);
                }
                if d > a {
                    t = t.mul(&den_pows[j][(d - a) as usize]);
                }
            }
            num = num.add(&t);
        }
        let den = (0..n)
            .filter(|&j| degrees[j] > 0)
            .fold(MultiPoly::one(&self.source), |acc, j| acc.mul(&den_pows[j][degrees[j] as usize]));
        Fraction { num, den }
    }

    /// Evaluates at a point of the source; `None` where a denominator
    /// vanishes.
    pub fn eval(&self, point: &[FieldElement]) -> Option<Vec<FieldElement>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }
}

/// g ∘ f.
pub fn compose_map(g: &RationalMap, f: &RationalMap) -> Result<RationalMap> {
    if !g.source.same_vars(&f.target) && g.source.nvars() != f.target.nvars() {
        return Err(Error::RingMismatch(format!(
            "cannot compose: inner map lands in {} variables, outer map reads {}",
            f.target.nvars(),
            g.source.nvars()
        )));
    }
    let inner = if g.source.same_vars(&f.target) {
        f.clone()
    } else {
        RationalMap {
            source: f.source.clone(),
            target: g.source.clone(),
            components: f.components.clone(),
        }
    };
    let mut components = Vec::with_capacity(g.components.len());
    for c in &g.components {
        let n = inner.pull_back(&c.num);
        let d = inner.pull_back(&c.den);
        if d.num.is_zero() {
            return Err(Error::ZeroDenominator(format!(
                "denominator {} vanishes identically after substitution",
                c.den
            )));
        }
        let num = n.num.mul(&d.den);
        let den = n.den.mul(&d.num);
        components.push(Fraction { num, den }.normalized());
    }
    Ok(RationalMap {
        source: f.source.clone(),
        target: g.target.clone(),
        components,
    })
}
