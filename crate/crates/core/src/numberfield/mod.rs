//! Exact arithmetic in Q and in a number field L = Q(α).
//!
//! Elements are coordinate vectors in the power basis 1, α, …, α^{m-1}.
//! Multiplication reduces modulo the (monic) minimal polynomial through a
//! precomputed table of α^m, …, α^{2m-2}.

mod galois;
pub mod irreducible;
pub mod upoly;

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use galois::{BasisMatrix, GaloisGroup};

pub type Rational = BigRational;

/// An element of L, stored in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<Rational>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when the element lies in Q (all α-power coordinates vanish).
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        FieldElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FieldElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FieldElement {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    /// Number of nonzero power-basis coordinates.
    pub fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// L = Q[t]/(minimal polynomial).
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    minpoly: Vec<Rational>,
    generator: String,
    /// `reductions[k]` holds α^{m+k} in the power basis.
    reductions: Vec<Vec<Rational>>,
}

impl NumberField {
    /// Builds the field from a minimal polynomial (coefficients low degree
    /// first). The polynomial is made monic and must be irreducible over Q.
    pub fn new(minpoly: Vec<Rational>, generator: impl Into<String>) -> Result<Arc<Self>> {
        let mut poly = minpoly;
        upoly::trim(&mut poly);
        let degree = upoly::degree(&poly)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidField("minimal polynomial must have degree >= 1".into()))?;
        let poly = upoly::monic(&poly);
        if !irreducible::is_irreducible(&poly)? {
            return Err(Error::InvalidField(
                "minimal polynomial is reducible over Q".into(),
            ));
        }
        Ok(Arc::new(Self::from_monic(poly, generator.into(), degree)))
    }

    /// The field Q, presented as Q[t]/(t).
    pub fn rationals() -> Arc<Self> {
        Arc::new(Self::from_monic(
            vec![Rational::zero(), Rational::one()],
            String::new(),
            1,
        ))
    }

    fn from_monic(poly: Vec<Rational>, generator: String, m: usize) -> Self {
        let mut reductions = Vec::with_capacity(m.saturating_sub(1));
        // α^m = -(c_0 + c_1 α + … + c_{m-1} α^{m-1})
        let mut current: Vec<Rational> = poly[..m].iter().map(|c| -c).collect();
        for _ in 0..m.saturating_sub(1) {
            reductions.push(current.clone());
            // multiply by α
            let top = current[m - 1].clone();
            let mut next = vec![Rational::zero(); m];
            for k in (1..m).rev() {
                next[k] = current[k - 1].clone();
            }
            for k in 0..m {
                next[k] += &top * &reductions[0][k];
            }
            current = next;
        }
        NumberField {
            minpoly: poly,
            generator,
            reductions,
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn generator_name(&self) -> &str {
        &self.generator
    }

    /// Monic minimal polynomial, low degree first.
    pub fn minimal_polynomial(&self) -> &[Rational] {
        &self.minpoly
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Builds an element from power-basis coordinates (padded or reduced
    /// as needed).
    pub fn from_coeffs(&self, coeffs: &[Rational]) -> FieldElement {
        self.reduce(coeffs)
    }

    /// The generator α itself.
    pub fn alpha(&self) -> FieldElement {
        self.from_coeffs(&[Rational::zero(), Rational::one()])
    }

    /// α^k in the power basis.
    pub fn alpha_pow(&self, k: usize) -> FieldElement {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = Rational::one();
        self.reduce(&v)
    }

    fn reduce(&self, raw: &[Rational]) -> FieldElement {
        let m = self.degree();
        let mut out: Vec<Rational> = raw.iter().take(m).cloned().collect();
        out.resize(m, Rational::zero());
        if raw.len() > m {
            for (k, c) in raw.iter().enumerate().skip(m) {
                if c.is_zero() {
                    continue;
                }
                if k - m < self.reductions.len() {
                    for (o, r) in out.iter_mut().zip(&self.reductions[k - m]) {
                        *o += c * r;
                    }
                } else {
                    // beyond the table: fold by polynomial remainder
                    let mut tail = vec![Rational::zero(); k + 1];
                    tail[k] = c.clone();
                    let (_, r) = upoly::divrem(&tail, &self.minpoly);
                    for (o, r) in out.iter_mut().zip(r.iter()) {
                        *o += r;
                    }
                }
            }
        }
        FieldElement { coeffs: out }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.degree();
        if m == 1 {
            return FieldElement {
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0]],
            };
        }
        let mut raw = vec![Rational::zero(); 2 * m - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        self.reduce(&raw)
    }

    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        if a.is_rational() {
            return Some(self.from_rational(a.coeffs[0].recip()));
        }
        let (g, s, _) = upoly::xgcd(&a.coeffs, &self.minpoly);
        debug_assert_eq!(g.len(), 1, "minimal polynomial is irreducible");
        Some(self.reduce(&s))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates a rational polynomial (low degree first) at an element.
    pub fn eval_upoly(&self, poly: &[Rational], at: &FieldElement) -> FieldElement {
        poly.iter().rev().fold(self.zero(), |acc, c| {
            self.mul(&acc, at).add(&self.from_rational(c.clone()))
        })
    }

    /// Human-readable form, parseable back by the expression grammar.
    pub fn format_element(&self, a: &FieldElement) -> String {
        let mut out = String::new();
        for (k, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            match k {
                0 => write!(out, "{}", format_rational(&abs)).unwrap(),
                _ => {
                    if !abs.is_one() {
                        write!(out, "{}*", format_rational(&abs)).unwrap();
                    }
                    out.push_str(&self.generator);
                    if k > 1 {
                        write!(out, "^{k}").unwrap();
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn gaussian() -> Arc<NumberField> {
        NumberField::new(vec![q(1, 1), q(0, 1), q(1, 1)], "i").unwrap()
    }

    #[test]
    fn i_squared_is_minus_one() {
        let f = gaussian();
        let i = f.alpha();
        assert_eq!(f.mul(&i, &i), f.from_int(-1));
    }

    #[test]
    fn inverse_of_one_plus_i() {
        let f = gaussian();
        let a = f.from_coeffs(&[q(1, 1), q(1, 1)]);
        let inv = f.inv(&a).unwrap();
        assert_eq!(inv, f.from_coeffs(&[q(1, 2), q(-1, 2)]));
        assert!(f.mul(&a, &inv).is_one());
    }

    #[test]
    fn reducible_minpoly_rejected() {
        let err = NumberField::new(vec![q(-4, 1), q(0, 1), q(1, 1)], "a").unwrap_err();
        assert!(matches!(err, Error::InvalidField(_)));
    }

    #[test]
    fn cubic_reduction_table() {
        // t^3 + t^2 - 2t - 1
        let f = NumberField::new(vec![q(-1, 1), q(-2, 1), q(1, 1), q(1, 1)], "c").unwrap();
        let a = f.alpha();
        let a4 = f.pow(&a, 4);
        // α^3 = 1 + 2α - α^2, α^4 = α + 2α^2 - α^3 = -1 - α + 3α^2
        assert_eq!(a4, f.from_coeffs(&[q(-1, 1), q(-1, 1), q(3, 1)]));
        assert!(f.eval_upoly(f.minimal_polynomial(), &a).is_zero());
    }

    #[test]
    fn formatting() {
        let f = gaussian();
        assert_eq!(f.format_element(&f.from_coeffs(&[q(1, 2), q(-1, 2)])), "1/2 - 1/2*i");
        assert_eq!(f.format_element(&f.alpha().neg()), "-i");
        assert_eq!(f.format_element(&f.zero()), "0");
    }
}
