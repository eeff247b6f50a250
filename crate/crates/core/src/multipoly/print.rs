use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};

use super::{Monomial, MultiPoly, PolyRing};
use crate::numberfield::{format_rational, FieldElement, NumberField};

fn write_monomial(out: &mut String, ring: &PolyRing, m: &Monomial) {
    let mut first = true;
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(&ring.vars()[i]);
        if e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

/// Splits a coefficient into a sign and a body to print after it. The body
/// is empty for ±1 on a non-constant monomial.
fn coefficient_body(field: &NumberField, c: &FieldElement, bare: bool, alone: bool) -> (bool, String) {
    let support: Vec<usize> = (0..c.coeffs().len()).filter(|&k| !c.coeffs()[k].is_zero()).collect();
    if let [k] = support.as_slice() {
        let q = &c.coeffs()[*k];
        let negative = q.is_negative();
        let abs = q.abs();
        let mut body = String::new();
        if *k == 0 {
            if !(abs.is_one() && !bare) {
                body.push_str(&format_rational(&abs));
            }
        } else {
            if !abs.is_one() {
                write!(body, "{}*", format_rational(&abs)).unwrap();
            }
            body.push_str(field.generator_name());
            if *k > 1 {
                write!(body, "^{k}").unwrap();
            }
        }
        return (negative, body);
    }
    let text = field.format_element(c);
    if bare && alone {
        (false, text)
    } else {
        (false, format!("({text})"))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = self.field();
        let mut out = String::new();
        let alone = self.len() == 1;
        for (idx, (m, c)) in self.terms().iter().enumerate() {
            let bare = m.is_one();
            let (negative, body) = coefficient_body(field, c, bare, alone);
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
            if !bare {
                if !body.is_empty() {
                    out.push('*');
                }
                write_monomial(&mut out, self.ring(), m);
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use crate::multipoly::parse_poly;
    use crate::multipoly::tests::gaussian_ring;

    fn roundtrip(text: &str, vars: &[&str]) -> String {
        let (_, r) = gaussian_ring(vars);
        let p = parse_poly(text, &r).unwrap();
        let printed = p.to_string();
        assert_eq!(parse_poly(&printed, &r).unwrap(), p, "{printed}");
        printed
    }

    #[test]
    fn formats() {
        assert_eq!(roundtrip("0", &["x"]), "0");
        assert_eq!(roundtrip("-i*x1", &["x1"]), "-i*x1");
        assert_eq!(roundtrip("(1/2 - 1/2*i)*t1", &["t1"]), "(1/2 - 1/2*i)*t1");
        assert_eq!(roundtrip("x1^2 + 3/2*x1*x2 - 1", &["x1", "x2"]), "x1^2 + 3/2*x1*x2 - 1");
        assert_eq!(roundtrip("1 + i", &["x"]), "1 + i");
        assert_eq!(roundtrip("x + 1 + i", &["x"]), "x + (1 + i)");
        assert_eq!(roundtrip("x - i", &["x"]), "x - i");
        assert_eq!(roundtrip("-x^3", &["x"]), "-x^3");
    }
}
