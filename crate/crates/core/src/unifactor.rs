//! Root divisors of binary forms on `P^1`.
//!
//! A form is dehomogenized at `t = 1`; the root `[1:0]` is read off the drop
//! in `s`-degree. The finite part is factored over the base field, and every
//! irreducible factor is split in the smallest extension containing all the
//! roots. Points are normalized to `[a:1]` or `[1:0]`.

use std::cmp::Ordering;
use std::fmt;

use crate::fields::{make_field, Embedding, Field, FieldElem, MAX_DEGREE};
use crate::mpoly::BinaryForm;
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("the zero form has no root divisor")]
    ZeroForm,
    #[error("splitting field of degree {0} exceeds the supported maximum of 12")]
    SplittingFieldTooLarge(usize),
    #[error("divisors over incompatible fields: {0}")]
    IncompatibleFields(String),
}

/// A point of `P^1`, normalized to `[a:1]` or `[1:0]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PointP1 {
    Finite(FieldElem),
    Infinity,
}

impl PointP1 {
    /// Normalizes `[a:b]`; `None` for `[0:0]`.
    pub fn from_coords(field: &Field, a: FieldElem, b: FieldElem) -> Option<PointP1> {
        if b.is_zero() {
            if a.is_zero() {
                None
            } else {
                Some(PointP1::Infinity)
            }
        } else {
            Some(PointP1::Finite(field.div(a, b).unwrap()))
        }
    }

    /// Homogeneous coordinates `(a, b)`.
    pub fn coords(&self, field: &Field) -> (FieldElem, FieldElem) {
        match *self {
            PointP1::Finite(a) => (a, field.one()),
            PointP1::Infinity => (field.one(), field.zero()),
        }
    }

    pub fn map(&self, f: impl Fn(FieldElem) -> FieldElem) -> PointP1 {
        match *self {
            PointP1::Finite(a) => PointP1::Finite(f(a)),
            PointP1::Infinity => PointP1::Infinity,
        }
    }

    /// The linear form `b s - a t` vanishing at this point.
    pub fn linear_form(&self, field: &Field) -> BinaryForm {
        let (a, b) = self.coords(field);
        BinaryForm::new(field, vec![b, field.neg(a)])
    }
}

/// Finite points by coordinate, then `[1:0]`.
impl Ord for PointP1 {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PointP1::Finite(a), PointP1::Finite(b)) => a.cmp(b),
            (PointP1::Finite(_), PointP1::Infinity) => Ordering::Less,
            (PointP1::Infinity, PointP1::Finite(_)) => Ordering::Greater,
            (PointP1::Infinity, PointP1::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for PointP1 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PointP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointP1::Finite(a) => write!(f, "[{a}:1]"),
            PointP1::Infinity => f.write_str("[1:0]"),
        }
    }
}

/// Effective divisor on `P^1` with points in `field`. `base` is the field the
/// divisor was defined over and `base_embedding` the map `base -> field` used
/// to place it there.
#[derive(Clone, Debug)]
pub struct DivisorP1 {
    base_embedding: Embedding,
    points: Vec<(PointP1, u32)>,
}

impl PartialEq for DivisorP1 {
    fn eq(&self, other: &Self) -> bool {
        self.field() == other.field() && self.points == other.points
    }
}

impl DivisorP1 {
    /// Collects points (merging repeats) over `base_embedding.target()`.
    pub fn new(base_embedding: Embedding, points: impl IntoIterator<Item = (PointP1, u32)>) -> DivisorP1 {
        let mut pts: Vec<(PointP1, u32)> = points.into_iter().filter(|(_, m)| *m > 0).collect();
        pts.sort();
        let mut merged: Vec<(PointP1, u32)> = Vec::with_capacity(pts.len());
        for (p, m) in pts {
            match merged.last_mut() {
                Some((q, k)) if *q == p => *k += m,
                _ => merged.push((p, m)),
            }
        }
        DivisorP1 { base_embedding, points: merged }
    }

    /// Every `F_p`-rational point of `P^1` with multiplicity `mult`, over `F_p`.
    pub fn rational_points(p: u32, mult: u32) -> DivisorP1 {
        let fp = make_field(p as u64, 1).expect("prime");
        let emb = Embedding::new(&fp, &fp).unwrap();
        let pts = fp.elements().map(PointP1::Finite).chain([PointP1::Infinity]);
        DivisorP1::new(emb, pts.map(|pt| (pt, mult)))
    }

    /// `mult * [0:1] + ...` style constructor over `F_p`.
    pub fn over_prime_field(p: u32, points: impl IntoIterator<Item = (PointP1, u32)>) -> DivisorP1 {
        let fp = make_field(p as u64, 1).expect("prime");
        DivisorP1::new(Embedding::new(&fp, &fp).unwrap(), points)
    }

    pub fn field(&self) -> &Field {
        self.base_embedding.target()
    }

    pub fn base(&self) -> &Field {
        self.base_embedding.source()
    }

    pub fn base_embedding(&self) -> &Embedding {
        &self.base_embedding
    }

    pub fn points(&self) -> &[(PointP1, u32)] {
        &self.points
    }

    pub fn degree(&self) -> u32 {
        self.points.iter().map(|(_, m)| m).sum()
    }

    pub fn support_len(&self) -> usize {
        self.points.len()
    }

    /// Multiplicities in decreasing order.
    pub fn multiplicity_profile(&self) -> Vec<u32> {
        let mut ms: Vec<u32> = self.points.iter().map(|(_, m)| *m).collect();
        ms.sort_unstable_by(|a, b| b.cmp(a));
        ms
    }

    pub fn scaled(&self, k: u32) -> DivisorP1 {
        DivisorP1 { base_embedding: self.base_embedding.clone(), points: self.points.iter().map(|&(p, m)| (p, m * k)).collect() }
    }

    /// Same points, each with multiplicity one.
    pub fn support(&self) -> Vec<PointP1> {
        self.points.iter().map(|(p, _)| *p).collect()
    }

    /// Maps every point through a field map (which must send the old field
    /// into `embedding.target()` compatibly with the bases).
    pub fn map_points(&self, base_embedding: Embedding, f: impl Fn(FieldElem) -> FieldElem) -> DivisorP1 {
        DivisorP1::new(base_embedding, self.points.iter().map(|&(p, m)| (p.map(&f), m)))
    }

    /// Re-expresses the divisor over an extension of its field.
    pub fn embed_into(&self, target: &Field) -> Result<DivisorP1, RootError> {
        if target == self.field() {
            return Ok(self.clone());
        }
        let emb = Embedding::new(self.field(), target).map_err(|e| RootError::IncompatibleFields(e.to_string()))?;
        let base_emb =
            Embedding::new(self.base(), target).map_err(|e| RootError::IncompatibleFields(e.to_string()))?;
        // Keep track of where the base generator actually lands.
        let img = emb.apply(self.base_embedding.generator_image());
        let aligned = align_base(&base_emb, img);
        Ok(self.map_points(aligned, |a| emb.apply(a)))
    }

    /// The form `prod (b s - a t)^m` over the divisor's field.
    pub fn to_form(&self) -> BinaryForm {
        let f = self.field();
        self.points.iter().fold(BinaryForm::new(f, vec![f.one()]), |acc, (p, m)| acc.mul(&p.linear_form(f).pow(*m)))
    }
}

/// An embedding `base -> target` whose generator image is `img`; `img` must be
/// a conjugate of the canonical image.
pub(crate) fn align_base(canonical: &Embedding, img: FieldElem) -> Embedding {
    if canonical.generator_image() == img || canonical.source().degree() == 1 {
        return canonical.clone();
    }
    // Conjugates differ by a power of Frobenius on the target.
    let t = canonical.target();
    let k = (0..t.degree())
        .find(|&k| t.frobenius_pow(canonical.generator_image(), k) == img)
        .expect("base generator images are conjugate");
    canonical.twisted(k)
}

impl fmt::Display for DivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.points.iter().map(|(p, m)| format!("{m}*{p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `g = unit * prod factors[i].0 ^ factors[i].1`, factors squarefree and
/// pairwise coprime, each monic in `s` (or equal to a power of `t`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: FieldElem,
    pub factors: Vec<(BinaryForm, u32)>,
}

pub fn squarefree_decomposition(g: &BinaryForm) -> Result<SquarefreeDecomposition, RootError> {
    if g.is_zero() {
        return Err(RootError::ZeroForm);
    }
    let field = g.field();
    let inf = g.infinity_multiplicity() as u32;
    let u = g.dehomogenize();
    let unit = u.lead();
    let mut parts: Vec<(UPoly, u32)> =
        if u.degree().unwrap_or(0) > 0 { u.squarefree_decomposition() } else { Vec::new() };
    let mut factors: Vec<(BinaryForm, u32)> =
        parts.drain(..).map(|(h, m)| (BinaryForm::homogenize(&h, h.degree().unwrap()), m)).collect();
    if inf > 0 {
        let t = BinaryForm::new(field, vec![field.zero(), field.one()]);
        match factors.iter_mut().find(|(_, m)| *m == inf) {
            Some((h, _)) => *h = h.mul(&t),
            None => factors.push((t, inf)),
        }
    }
    factors.sort_by_key(|(_, m)| *m);
    Ok(SquarefreeDecomposition { unit, factors })
}

/// True when `g` has no repeated root on `P^1` (over the algebraic closure).
pub fn is_squarefree(g: &BinaryForm) -> bool {
    squarefree_decomposition(g).is_ok_and(|d| d.factors.iter().all(|(_, m)| *m == 1))
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Degree over `F_p` of the smallest field containing every root of `g`.
pub fn splitting_degree(g: &BinaryForm) -> Result<usize, RootError> {
    if g.is_zero() {
        return Err(RootError::ZeroForm);
    }
    let (_, factors) = g.dehomogenize().factor();
    let l = factors.iter().fold(1, |acc, (h, _)| lcm(acc, h.degree().unwrap()));
    Ok(g.field().degree() * l)
}

/// The full root divisor of `g` over its splitting field.
pub fn roots(g: &BinaryForm) -> Result<DivisorP1, RootError> {
    if g.is_zero() {
        return Err(RootError::ZeroForm);
    }
    let base = g.field();
    let inf = g.infinity_multiplicity() as u32;
    let u = g.dehomogenize();
    let (_, factors) = if u.degree().unwrap_or(0) > 0 { u.factor() } else { (u.lead(), Vec::new()) };
    let l = factors.iter().fold(1, |acc, (h, _)| lcm(acc, h.degree().unwrap()));
    let n = base.degree() * l;
    if n > MAX_DEGREE {
        return Err(RootError::SplittingFieldTooLarge(n));
    }
    let field = make_field(base.characteristic() as u64, n).expect("valid splitting field");
    let emb = Embedding::new(base, &field).expect("degree divides");
    let mut points = Vec::with_capacity(g.degree());
    for (h, mult) in &factors {
        let roots = h.embed(&emb).roots();
        debug_assert_eq!(roots.len(), h.degree().unwrap());
        points.extend(roots.into_iter().map(|r| (PointP1::Finite(r), *mult)));
    }
    if inf > 0 {
        points.push((PointP1::Infinity, inf));
    }
    Ok(DivisorP1::new(emb, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_dp1;

    fn form(text: &str, p: u64, n: usize, degree: usize) -> BinaryForm {
        let f = make_field(p, n).unwrap();
        BinaryForm::from_poly(&parse_dp1(text, &f).unwrap(), degree).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let g = form("s^3", 3, 1, 3);
        let d = squarefree_decomposition(&g).unwrap();
        assert_eq!(d.factors, vec![(form("s", 3, 1, 1), 3)]);

        let h = form("s^5*t - s*t^5", 5, 1, 6);
        let d = squarefree_decomposition(&h.mul(&h)).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].1, 2);
        assert_eq!(d.factors[0].0, h);

        let g = form("s^2*t + s*t^2", 2, 1, 3);
        let d = squarefree_decomposition(&g).unwrap();
        assert_eq!(d.factors, vec![(g.clone(), 1)]);
        assert!(is_squarefree(&g));
        assert_eq!(squarefree_decomposition(&BinaryForm::zero(g.field(), 3)).unwrap_err(), RootError::ZeroForm);
    }

    #[test]
    fn decomposition_reconstructs() {
        let g = form("3*s^7*t^2 + s^3*t^6", 5, 1, 9).mul(&form("s + t", 5, 1, 1).pow(5));
        let d = squarefree_decomposition(&g).unwrap();
        let rebuilt = d.factors.iter().fold(BinaryForm::new(g.field(), vec![d.unit]), |acc, (h, m)| acc.mul(&h.pow(*m)));
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn roots_of_s5t_minus_st5_are_p1_f5() {
        let d = roots(&form("s^5*t - s*t^5", 5, 1, 6)).unwrap();
        assert_eq!(d.field().degree(), 1);
        assert_eq!(d, DivisorP1::rational_points(5, 1));
        assert_eq!(d.to_string(), "1*[0:1] + 1*[1:1] + 1*[2:1] + 1*[3:1] + 1*[4:1] + 1*[1:0]");
    }

    #[test]
    fn roots_of_s4() {
        let d = roots(&form("s^4", 3, 1, 4)).unwrap();
        assert_eq!(d.points(), &[(PointP1::Finite(FieldElem::ZERO), 4)]);
        assert_eq!(d.scaled(3).to_string(), "12*[0:1]");
    }

    #[test]
    fn conjugate_roots_over_f9() {
        let g = form("s^2 + t^2", 3, 1, 2);
        let d = roots(&g).unwrap();
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(d.field(), &f9);
        // scan every point of P^1(F_9)
        let emb = Embedding::new(g.field(), &f9).unwrap();
        let mut brute: Vec<(PointP1, u32)> = f9
            .elements()
            .filter(|&a| g.eval_embedded(&emb, a, f9.one()).is_zero())
            .map(|a| (PointP1::Finite(a), 1))
            .collect();
        if g.eval_embedded(&emb, f9.one(), f9.zero()).is_zero() {
            brute.push((PointP1::Infinity, 1));
        }
        assert_eq!(d.points(), &brute[..]);
        assert_eq!(d.points().len(), 2);
    }

    #[test]
    fn too_large_splitting_field() {
        // irreducible quintic times irreducible septic over F_2: lcm 35
        let f2 = make_field(2, 1).unwrap();
        let quintic = BinaryForm::from_ints(&f2, &[1, 0, 1, 0, 0, 1]);
        let septic = BinaryForm::from_ints(&f2, &[1, 1, 0, 0, 0, 0, 0, 1]);
        assert!(quintic.dehomogenize().is_irreducible() && septic.dehomogenize().is_irreducible());
        assert_eq!(roots(&quintic.mul(&septic)).unwrap_err(), RootError::SplittingFieldTooLarge(35));
        assert_eq!(splitting_degree(&quintic.mul(&septic)).unwrap(), 35);
    }
}
