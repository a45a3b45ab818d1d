use std::fmt;

use super::{Alphabet, Monomial, MultiPoly, PolyError, S, T};
use crate::fields::{Embedding, Field, FieldElem};
use crate::upoly::UPoly;

/// A homogeneous polynomial of fixed degree in `s, t`, stored densely:
/// `coeffs[i]` is the coefficient of `s^(d-i) t^i`.
///
/// Arithmetic between forms over different fields is a programming error and panics.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm[{}; deg {}]({})", self.field, self.degree(), self)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

impl BinaryForm {
    /// `coeffs` has length `degree + 1`.
    pub fn new(field: &Field, coeffs: Vec<FieldElem>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "a binary form needs degree + 1 coefficients");
        BinaryForm { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field, degree: usize) -> BinaryForm {
        BinaryForm::new(field, vec![FieldElem::ZERO; degree + 1])
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> BinaryForm {
        BinaryForm::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// `s^(d-k) t^k` scaled by `c`.
    pub fn monomial(field: &Field, degree: usize, k: usize, c: FieldElem) -> BinaryForm {
        let mut g = BinaryForm::zero(field, degree);
        g.coeffs[k] = c;
        g
    }

    /// Reads a polynomial in the dp1 alphabet that involves only `s, t` and is
    /// homogeneous of `degree` (the zero polynomial is accepted).
    pub fn from_poly(f: &MultiPoly, degree: usize) -> Result<BinaryForm, PolyError> {
        let mut coeffs = vec![FieldElem::ZERO; degree + 1];
        for (m, c) in f.terms() {
            let e = m.exps();
            if e[2..].iter().any(|&x| x != 0) {
                return Err(PolyError::NotBinaryForm { degree, reason: "involves variables other than s, t".into() });
            }
            if e[S] as usize + e[T] as usize != degree {
                return Err(PolyError::NotBinaryForm { degree, reason: format!("has a term of degree {}", e[S] + e[T]) });
            }
            coeffs[e[T] as usize] = *c;
        }
        Ok(BinaryForm { field: f.field().clone(), coeffs })
    }

    pub fn to_poly(&self) -> MultiPoly {
        let d = self.degree() as u16;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (Monomial::stxy(d - i as u16, i as u16, 0, 0), c));
        MultiPoly::from_terms(&self.field, &Alphabet::dp1(), terms.collect::<Vec<_>>())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `s^(d-k) t^k`.
    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        self.zip(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        self.zip(other, |f, a, b| f.sub(a, b))
    }

    fn zip(&self, other: &BinaryForm, op: impl Fn(&Field, FieldElem, FieldElem) -> FieldElem) -> BinaryForm {
        assert_eq!(self.field, other.field, "binary forms over different fields");
        assert_eq!(self.degree(), other.degree(), "binary forms of different degree");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| op(&self.field, a, b)).collect();
        BinaryForm { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> BinaryForm {
        self.scale(self.field.neg(self.field.one()))
    }

    pub fn scale(&self, c: FieldElem) -> BinaryForm {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        BinaryForm { field: self.field.clone(), coeffs }
    }

    pub fn scale_int(&self, k: i64) -> BinaryForm {
        self.scale(self.field.from_i64(k))
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.field, other.field, "binary forms over different fields");
        let f = &self.field;
        let mut coeffs = vec![FieldElem::ZERO; self.degree() + other.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        BinaryForm { field: f.clone(), coeffs }
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        let mut acc = BinaryForm::new(&self.field, vec![self.field.one()]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `g(a, b)`.
    pub fn eval(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        eval_with(&self.field, self.coeffs.iter().copied(), a, b)
    }

    /// `g(a, b)` for `a, b` in the target of `emb`.
    pub fn eval_embedded(&self, emb: &Embedding, a: FieldElem, b: FieldElem) -> FieldElem {
        eval_with(emb.target(), self.coeffs.iter().map(|&c| emb.apply(c)), a, b)
    }

    pub fn embed(&self, emb: &Embedding) -> BinaryForm {
        BinaryForm { field: emb.target().clone(), coeffs: self.coeffs.iter().map(|&c| emb.apply(c)).collect() }
    }

    /// `g(s, 1)` as a polynomial in `s`.
    pub fn dehomogenize(&self) -> UPoly {
        let d = self.degree();
        UPoly::new(&self.field, (0..=d).map(|k| self.coeffs[d - k]).collect())
    }

    /// Homogenizes `u(s)` to degree `degree` (which must be at least `deg u`).
    pub fn homogenize(u: &UPoly, degree: usize) -> BinaryForm {
        let mut g = BinaryForm::zero(u.field(), degree);
        for (k, &c) in u.coeffs().iter().enumerate() {
            g.coeffs[degree - k] = c;
        }
        g
    }

    /// Multiplicity of the root `[1:0]`, i.e. the power of `t` dividing `g`.
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.degree())
    }
}

/// Horner evaluation of `sum c_k a^(d-k) b^k`.
fn eval_with(field: &Field, coeffs: impl Iterator<Item = FieldElem>, a: FieldElem, b: FieldElem) -> FieldElem {
    let coeffs: Vec<FieldElem> = coeffs.collect();
    let d = coeffs.len() - 1;
    let mut acc = FieldElem::ZERO;
    let mut bpow = field.one();
    let mut apows = Vec::with_capacity(d + 1);
    let mut ap = field.one();
    for _ in 0..=d {
        apows.push(ap);
        ap = field.mul(ap, a);
    }
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = field.add(acc, field.mul(*c, field.mul(apows[d - k], bpow)));
        }
        bpow = field.mul(bpow, b);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;
    use crate::mpoly::parse_dp1;

    #[test]
    fn poly_round_trip() {
        let f = make_field(5, 1).unwrap();
        let g = BinaryForm::from_poly(&parse_dp1("s^5*t - s*t^5", &f).unwrap(), 6).unwrap();
        assert_eq!(g.coeffs(), BinaryForm::from_ints(&f, &[0, 1, 0, 0, 0, -1, 0]).coeffs());
        assert_eq!(g.to_string(), "s^5*t + 4*s*t^5");
        assert!(BinaryForm::from_poly(&parse_dp1("s^2 + x", &f).unwrap(), 2).is_err());
        assert!(BinaryForm::from_poly(&parse_dp1("s^2 + t", &f).unwrap(), 2).is_err());
    }

    #[test]
    fn dehomogenize_and_infinity() {
        let f = make_field(3, 1).unwrap();
        // s^2 t + s t^2 -> s^2 + s, one root at infinity
        let g = BinaryForm::from_ints(&f, &[0, 1, 1, 0]);
        assert_eq!(g.infinity_multiplicity(), 1);
        let u = g.dehomogenize();
        assert_eq!(u.degree(), Some(2));
        assert_eq!(BinaryForm::homogenize(&u, 3), g);
    }

    #[test]
    fn evaluation_matches_poly() {
        let f = make_field(5, 2).unwrap();
        let g = BinaryForm::from_ints(&f, &[1, 2, 0, 3, 4]);
        let a = f.generator().unwrap();
        let b = f.from_u64(3);
        assert_eq!(g.eval(a, b), g.to_poly().eval(&[a, b, f.zero(), f.zero()]));
    }
}
