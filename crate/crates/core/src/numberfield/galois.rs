use std::sync::Arc;

use num_traits::Zero;

use super::{FieldElement, NumberField};
use crate::error::{Error, Result};

/// The Galois group of L/Q, given by the images of α.
///
/// `table[i][j]` is the index of σ_i ∘ σ_j (apply σ_j first), so that
/// `apply(i, apply(j, a)) == apply(table[i][j], a)`.
#[derive(Debug)]
pub struct GaloisGroup {
    field: Arc<NumberField>,
    labels: Vec<String>,
    images: Vec<FieldElement>,
    /// Per automorphism, the images σ(α^k) for k < m.
    power_images: Vec<Vec<FieldElement>>,
    identity: usize,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl GaloisGroup {
    /// Validates user-supplied automorphisms: each image must be a root of
    /// the minimal polynomial, images must be pairwise distinct and there
    /// must be exactly [L:Q] of them.
    pub fn new(
        field: Arc<NumberField>,
        labels: Vec<String>,
        images: Vec<FieldElement>,
    ) -> Result<Arc<Self>> {
        let m = field.degree();
        if labels.len() != images.len() {
            return Err(Error::InvalidGroup("one label per automorphism required".into()));
        }
        if images.len() != m {
            return Err(Error::InvalidGroup(format!(
                "expected {m} automorphisms (the field degree), got {}",
                images.len()
            )));
        }
        for (label, img) in labels.iter().zip(&images) {
            if !field.eval_upoly(field.minimal_polynomial(), img).is_zero() {
                return Err(Error::InvalidGroup(format!(
                    "image of the generator under `{label}` is not a root of the minimal polynomial"
                )));
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if images[i] == images[j] {
                    return Err(Error::InvalidGroup(format!(
                        "`{}` and `{}` coincide",
                        labels[i], labels[j]
                    )));
                }
                if labels[i] == labels[j] {
                    return Err(Error::InvalidGroup(format!("duplicate label `{}`", labels[i])));
                }
            }
        }
        let alpha = field.alpha();
        let identity = images
            .iter()
            .position(|img| *img == alpha)
            .ok_or_else(|| Error::InvalidGroup("identity automorphism missing".into()))?;

        let power_images: Vec<Vec<FieldElement>> = images
            .iter()
            .map(|img| {
                let mut pows = Vec::with_capacity(m);
                let mut cur = field.one();
                for _ in 0..m {
                    pows.push(cur.clone());
                    cur = field.mul(&cur, img);
                }
                pows
            })
            .collect();

        let mut group = GaloisGroup {
            field,
            labels,
            images,
            power_images,
            identity,
            table: Vec::new(),
            inverses: Vec::new(),
        };
        let mut table = vec![vec![0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let img = group.apply(i, &group.images[j]);
                table[i][j] = group.images.iter().position(|x| *x == img).ok_or_else(|| {
                    Error::InvalidGroup("automorphisms are not closed under composition".into())
                })?;
            }
        }
        let inverses = (0..m)
            .map(|i| (0..m).find(|&j| table[i][j] == identity).unwrap())
            .collect();
        group.table = table;
        group.inverses = inverses;
        Ok(Arc::new(group))
    }

    /// The trivial group of Q.
    pub fn trivial(field: Arc<NumberField>) -> Result<Arc<Self>> {
        let alpha = field.alpha();
        Self::new(field, vec!["e".into()], vec![alpha])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, sigma: usize) -> &str {
        &self.labels[sigma]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// σ(α).
    pub fn image(&self, sigma: usize) -> &FieldElement {
        &self.images[sigma]
    }

    /// Index of σ_i ∘ σ_j.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    /// Elements with the identity first, then the rest in index order.
    pub fn identity_first(&self) -> Vec<usize> {
        std::iter::once(self.identity)
            .chain((0..self.len()).filter(|&s| s != self.identity))
            .collect()
    }

    pub fn apply(&self, sigma: usize, a: &FieldElement) -> FieldElement {
        if sigma == self.identity {
            return a.clone();
        }
        let mut out = self.field.zero();
        for (c, pw) in a.coeffs.iter().zip(&self.power_images[sigma]) {
            if !c.is_zero() {
                out.add_assign(&pw.scale(c));
            }
        }
        out
    }

    /// Σ_σ σ(a).
    pub fn trace(&self, a: &FieldElement) -> FieldElement {
        (0..self.len()).fold(self.field.zero(), |acc, s| acc.add(&self.apply(s, a)))
    }

    /// Fixed by every automorphism, i.e. an element of the fixed field.
    pub fn is_fixed(&self, a: &FieldElement) -> bool {
        (0..self.len()).all(|s| self.apply(s, a) == *a)
    }

    /// 1, α, …, α^{m-1}.
    pub fn power_basis(&self) -> Vec<FieldElement> {
        (0..self.field.degree()).map(|k| self.field.alpha_pow(k)).collect()
    }

    /// The matrix (σ_i(e_j)); fails when the elements are not a basis.
    pub fn basis_matrix(&self, basis: &[FieldElement]) -> Result<BasisMatrix> {
        if basis.len() != self.len() {
            return Err(Error::SingularBasis);
        }
        let entries: Vec<Vec<FieldElement>> = (0..self.len())
            .map(|i| basis.iter().map(|e| self.apply(i, e)).collect())
            .collect();
        let det = determinant(&self.field, entries.clone());
        if det.is_zero() {
            return Err(Error::SingularBasis);
        }
        Ok(BasisMatrix {
            field: self.field.clone(),
            basis: basis.to_vec(),
            entries,
            determinant: det,
            identity: self.identity,
        })
    }
}

/// The matrix A = (σ_i(e_j)) of a K-basis of L; always nonsingular.
#[derive(Debug, Clone)]
pub struct BasisMatrix {
    field: Arc<NumberField>,
    basis: Vec<FieldElement>,
    entries: Vec<Vec<FieldElement>>,
    determinant: FieldElement,
    identity: usize,
}

impl BasisMatrix {
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn entries(&self) -> &[Vec<FieldElement>] {
        &self.entries
    }

    pub fn determinant(&self) -> &FieldElement {
        &self.determinant
    }

    /// λ with Aλ = E, E the indicator of the identity row. Then every
    /// polynomial P equals Σ_j λ_j Tr(e_j P).
    pub fn solve_trace_coefficients(&self) -> Result<Vec<FieldElement>> {
        let n = self.entries.len();
        let mut rhs = vec![self.field.zero(); n];
        rhs[self.identity] = self.field.one();
        solve(&self.field, self.entries.clone(), rhs).ok_or(Error::SingularBasis)
    }
}

fn determinant(field: &NumberField, mut a: Vec<Vec<FieldElement>>) -> FieldElement {
    let n = a.len();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return field.zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = det.neg();
        }
        det = field.mul(&det, &a[col][col]);
        let inv = field.inv(&a[col][col]).unwrap();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = field.mul(&a[r][col], &inv);
            for c in col..n {
                let t = field.mul(&factor, &a[col][c]);
                a[r][c].sub_assign(&t);
            }
        }
    }
    det
}

fn solve(
    field: &NumberField,
    mut a: Vec<Vec<FieldElement>>,
    mut b: Vec<FieldElement>,
) -> Option<Vec<FieldElement>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        b.swap(pivot, col);
        let inv = field.inv(&a[col][col]).unwrap();
        for c in col..n {
            a[col][c] = field.mul(&a[col][c], &inv);
        }
        b[col] = field.mul(&b[col], &inv);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                let t = field.mul(&factor, &a[col][c]);
                a[r][c].sub_assign(&t);
            }
            let t = field.mul(&factor, &b[col]);
            b[r].sub_assign(&t);
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn gaussian() -> Arc<GaloisGroup> {
        let f = NumberField::new(vec![q(1, 1), q(0, 1), q(1, 1)], "i").unwrap();
        let imgs = vec![f.alpha(), f.alpha().neg()];
        GaloisGroup::new(f, vec!["e".into(), "s".into()], imgs).unwrap()
    }

    fn sqrt2() -> Arc<GaloisGroup> {
        let f = NumberField::new(vec![q(-2, 1), q(0, 1), q(1, 1)], "r").unwrap();
        let imgs = vec![f.alpha(), f.alpha().neg()];
        GaloisGroup::new(f, vec!["e".into(), "s".into()], imgs).unwrap()
    }

    #[test]
    fn conjugation_examples() {
        let g = gaussian();
        let f = g.field().clone();
        let a = f.from_coeffs(&[q(3, 1), q(2, 1)]);
        assert_eq!(g.apply(1, &a), f.from_coeffs(&[q(3, 1), q(-2, 1)]));
        assert_eq!(g.apply(0, &a), a);
        // i(1+i) = -1 + i -> -1 - i, computed independently by hand
        let prod = f.mul(&f.alpha(), &f.from_coeffs(&[q(1, 1), q(1, 1)]));
        assert_eq!(prod, f.from_coeffs(&[q(-1, 1), q(1, 1)]));
        assert_eq!(g.apply(1, &prod), f.from_coeffs(&[q(-1, 1), q(-1, 1)]));
    }

    #[test]
    fn trace_examples() {
        let g = gaussian();
        let f = g.field().clone();
        assert_eq!(g.trace(&f.from_coeffs(&[q(3, 1), q(2, 1)])), f.from_int(6));
        assert!(g.trace(&f.zero()).is_zero());
        assert!(g.trace(&f.alpha()).is_zero());
    }

    #[test]
    fn basis_matrix_examples() {
        let g = gaussian();
        let f = g.field().clone();
        let a = g.basis_matrix(&[f.one(), f.alpha()]).unwrap();
        assert_eq!(a.entries()[1][1], f.alpha().neg());
        assert_eq!(*a.determinant(), f.from_coeffs(&[q(0, 1), q(-2, 1)]));
        assert_eq!(
            g.basis_matrix(&[f.one(), f.one()]).unwrap_err(),
            Error::SingularBasis
        );

        let g2 = sqrt2();
        let f2 = g2.field().clone();
        let a2 = g2.basis_matrix(&g2.power_basis()).unwrap();
        // det [[1, r], [1, -r]] = -2r
        assert_eq!(*a2.determinant(), f2.from_coeffs(&[q(0, 1), q(-2, 1)]));
    }

    #[test]
    fn trace_coefficients() {
        let g = gaussian();
        let f = g.field().clone();
        let lam = g.basis_matrix(&g.power_basis()).unwrap().solve_trace_coefficients().unwrap();
        assert_eq!(lam, vec![f.from_rational(q(1, 2)), f.from_coeffs(&[q(0, 1), q(-1, 2)])]);

        let g2 = sqrt2();
        let f2 = g2.field().clone();
        let lam2 = g2.basis_matrix(&g2.power_basis()).unwrap().solve_trace_coefficients().unwrap();
        // λ1 + r λ2 = 1, λ1 - r λ2 = 0  =>  λ = (1/2, 1/(2r)) = (1/2, r/4)
        assert_eq!(lam2, vec![f2.from_rational(q(1, 2)), f2.from_coeffs(&[q(0, 1), q(1, 4)])]);

        let gq = GaloisGroup::trivial(NumberField::rationals()).unwrap();
        let lam_q = gq.basis_matrix(&gq.power_basis()).unwrap().solve_trace_coefficients().unwrap();
        assert_eq!(lam_q, vec![gq.field().one()]);
    }

    #[test]
    fn rejects_bad_groups() {
        let f = NumberField::new(vec![q(1, 1), q(0, 1), q(1, 1)], "i").unwrap();
        let bad_root = GaloisGroup::new(
            f.clone(),
            vec!["e".into(), "s".into()],
            vec![f.alpha(), f.from_int(2)],
        );
        assert!(matches!(bad_root, Err(Error::InvalidGroup(_))));
        let dup = GaloisGroup::new(f.clone(), vec!["e".into(), "s".into()], vec![f.alpha(), f.alpha()]);
        assert!(matches!(dup, Err(Error::InvalidGroup(_))));
        let short = GaloisGroup::new(f.clone(), vec!["e".into()], vec![f.alpha()]);
        assert!(matches!(short, Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn cyclic_cubic_table() {
        // α = 2cos(2π/7); σ: α -> α^2 - 2, τ: α -> 1 - α - α^2
        let f = NumberField::new(vec![q(-1, 1), q(-2, 1), q(1, 1), q(1, 1)], "c").unwrap();
        let s = f.from_coeffs(&[q(-2, 1), q(0, 1), q(1, 1)]);
        let t = f.from_coeffs(&[q(1, 1), q(-1, 1), q(-1, 1)]);
        let g = GaloisGroup::new(f.clone(), vec!["e".into(), "s".into(), "t".into()], vec![f.alpha(), s, t])
            .unwrap();
        assert_eq!(g.compose(1, 1), 2);
        assert_eq!(g.compose(1, 2), 0);
        assert_eq!(g.inverse(1), 2);
    }
}
