//! Coordinate changes on `P^1` and on the sextic, and projective equivalence
//! of root divisors.
//!
//! A matrix `M = [[a, b], [c, d]]` acts on forms by substitution,
//! `g -> g(a s + b t, c s + d t)`, and on points by `P -> M P` (column
//! vectors). The two are contragredient: `roots(g . M) = M^-1 roots(g)`.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::dp1::{DP1Equation, Dp1Error};
use crate::fields::{make_field, Embedding, Field, FieldElem, MAX_DEGREE};
use crate::mpoly::{Alphabet, BinaryForm, MultiPoly, X, Y};
use crate::unifactor::{roots, DivisorP1, PointP1, RootError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Pgl2Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("form is not in the span of s^(p+1), s^p t, s t^p, t^(p+1)")]
    WrongShape,
    #[error("form has {0} distinct roots, at least 3 are needed")]
    InsufficientRoots(usize),
    #[error("expected degree {expected}, got {got}")]
    Degree { expected: usize, got: usize },
    #[error("characteristic {given} does not match the field characteristic {actual}")]
    CharacteristicMismatch { given: u32, actual: u32 },
    #[error("scalars must be nonzero")]
    ZeroScalar,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Dp1(#[from] Dp1Error),
}

/// An invertible 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GL2Matrix {
    field: Field,
    m: [FieldElem; 4],
}

impl fmt::Display for GL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.m.iter().map(|&v| self.field.format_elem(v)).collect();
        write!(f, "[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
    }
}

impl Serialize for GL2Matrix {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("GL2Matrix", 2)?;
        st.serialize_field("field", self.field.desc())?;
        let e: Vec<String> = self.m.iter().map(|&v| self.field.format_elem(v)).collect();
        st.serialize_field("entries", &e)?;
        st.end()
    }
}

impl GL2Matrix {
    pub fn new(field: &Field, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<GL2Matrix, Pgl2Error> {
        let m = GL2Matrix { field: field.clone(), m: [a, b, c, d] };
        if m.det().is_zero() {
            return Err(Pgl2Error::SingularMatrix);
        }
        Ok(m)
    }

    pub fn from_ints(field: &Field, e: [i64; 4]) -> Result<GL2Matrix, Pgl2Error> {
        let [a, b, c, d] = e.map(|v| field.from_i64(v));
        GL2Matrix::new(field, a, b, c, d)
    }

    pub fn identity(field: &Field) -> GL2Matrix {
        GL2Matrix { field: field.clone(), m: [field.one(), field.zero(), field.zero(), field.one()] }
    }

    /// Uniformly random invertible matrix.
    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> GL2Matrix {
        loop {
            let e = [0; 4].map(|_| field.random(rng));
            if let Ok(m) = GL2Matrix::new(field, e[0], e[1], e[2], e[3]) {
                return m;
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> [FieldElem; 4] {
        self.m
    }

    pub fn det(&self) -> FieldElem {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &GL2Matrix) -> GL2Matrix {
        assert_eq!(self.field, other.field, "matrices over different fields");
        let f = &self.field;
        let [a, b, c, d] = self.m;
        let [e, g, h, k] = other.m;
        let dot = |x: FieldElem, y: FieldElem, z: FieldElem, w: FieldElem| f.add(f.mul(x, y), f.mul(z, w));
        GL2Matrix { field: f.clone(), m: [dot(a, e, b, h), dot(a, g, b, k), dot(c, e, d, h), dot(c, g, d, k)] }
    }

    pub fn inverse(&self) -> GL2Matrix {
        let f = &self.field;
        let inv = f.inv(self.det()).expect("invertible by construction");
        let [a, b, c, d] = self.m;
        GL2Matrix { field: f.clone(), m: [f.mul(d, inv), f.neg(f.mul(b, inv)), f.neg(f.mul(c, inv)), f.mul(a, inv)] }
    }

    pub fn scale(&self, k: FieldElem) -> GL2Matrix {
        let f = &self.field;
        GL2Matrix::new(f, f.mul(self.m[0], k), f.mul(self.m[1], k), f.mul(self.m[2], k), f.mul(self.m[3], k))
            .expect("nonzero scale")
    }

    pub fn embed(&self, emb: &Embedding) -> GL2Matrix {
        GL2Matrix { field: emb.target().clone(), m: self.m.map(|v| emb.apply(v)) }
    }

    /// Equal as elements of `PGL_2`.
    pub fn projectively_equal(&self, other: &GL2Matrix) -> bool {
        let f = &self.field;
        // all 2x2 minors of the stacked entry vectors vanish
        (0..4).all(|i| (0..4).all(|j| f.mul(self.m[i], other.m[j]) == f.mul(self.m[j], other.m[i])))
    }

    /// `M P` for a point with coordinates in the matrix field.
    pub fn act_point(&self, p: PointP1) -> PointP1 {
        let f = &self.field;
        let (u, v) = p.coords(f);
        let [a, b, c, d] = self.m;
        PointP1::from_coords(f, f.add(f.mul(a, u), f.mul(b, v)), f.add(f.mul(c, u), f.mul(d, v)))
            .expect("invertible matrices move no point to [0:0]")
    }

    /// `(s, t) -> (a s + b t, c s + d t)` applied to `g`.
    pub fn act_form(&self, g: &BinaryForm) -> BinaryForm {
        assert_eq!(&self.field, g.field(), "form and matrix over different fields");
        let f = &self.field;
        let n = g.degree();
        let [a, b, c, d] = self.m;
        let ls = BinaryForm::new(f, vec![a, b]);
        let lt = BinaryForm::new(f, vec![c, d]);
        let mut spow = vec![BinaryForm::new(f, vec![f.one()])];
        let mut tpow = vec![BinaryForm::new(f, vec![f.one()])];
        for i in 0..n {
            spow.push(spow[i].mul(&ls));
            tpow.push(tpow[i].mul(&lt));
        }
        let mut out = BinaryForm::zero(f, n);
        for (k, &coef) in g.coeffs().iter().enumerate() {
            if !coef.is_zero() {
                out = out.add(&spow[n - k].mul(&tpow[k]).scale(coef));
            }
        }
        out
    }

    /// The same substitution on every coefficient form of the sextic.
    pub fn act_equation(&self, eq: &DP1Equation) -> Result<DP1Equation, Pgl2Error> {
        if eq.field() != &self.field {
            return Err(Dp1Error::FieldMismatch.into());
        }
        let forms = eq.forms().clone().map(|g| self.act_form(&g));
        Ok(DP1Equation::new(eq.field(), forms)?)
    }

    /// `M D`, point by point.
    pub fn act_divisor(&self, d: &DivisorP1) -> DivisorP1 {
        assert_eq!(&self.field, d.field(), "divisor and matrix over different fields");
        d.map_points_with(|p| self.act_point(p))
    }

    /// The matrix sending `[1:0], [0:1], [1:1]` to three distinct points.
    pub fn from_three_points(field: &Field, p: [PointP1; 3]) -> GL2Matrix {
        let (u1, v1) = p[0].coords(field);
        let (u2, v2) = p[1].coords(field);
        let (u3, v3) = p[2].coords(field);
        // solve alpha (u1, v1) + beta (u2, v2) = (u3, v3)
        let f = field;
        let det = f.sub(f.mul(u1, v2), f.mul(u2, v1));
        let di = f.inv(det).expect("distinct points");
        let alpha = f.mul(f.sub(f.mul(u3, v2), f.mul(u2, v3)), di);
        let beta = f.mul(f.sub(f.mul(u1, v3), f.mul(u3, v1)), di);
        GL2Matrix::new(f, f.mul(alpha, u1), f.mul(beta, u2), f.mul(alpha, v1), f.mul(beta, v2))
            .expect("three distinct points give an invertible matrix")
    }

    /// The unique element of `PGL_2` sending the triple `from` to `to`.
    pub fn mapping_triple(field: &Field, from: [PointP1; 3], to: [PointP1; 3]) -> GL2Matrix {
        GL2Matrix::from_three_points(field, to).mul(&GL2Matrix::from_three_points(field, from).inverse())
    }
}

impl DivisorP1 {
    /// The divisor with every point moved by `f`, over the same field.
    pub fn map_points_with(&self, f: impl Fn(PointP1) -> PointP1) -> DivisorP1 {
        DivisorP1::new(self.base_embedding().clone(), self.points().iter().map(|&(p, m)| (f(p), m)))
    }
}

/// `act_gl2` for forms.
pub fn act_gl2_form(g: &BinaryForm, m: &GL2Matrix) -> BinaryForm {
    m.act_form(g)
}

/// `act_gl2` for equations.
pub fn act_gl2_equation(eq: &DP1Equation, m: &GL2Matrix) -> Result<DP1Equation, Pgl2Error> {
    m.act_equation(eq)
}

/// `s^p t - s t^p`, whose roots are `P^1(F_p)`.
pub fn la5_target(field: &Field) -> BinaryForm {
    let p = field.characteristic() as usize;
    let mut c = vec![field.zero(); p + 2];
    c[1] = field.one();
    c[p] = field.neg(field.one());
    BinaryForm::new(field, c)
}

/// Whether `g` has degree `p + 1` and lies in the span of
/// `s^(p+1), s^p t, s t^p, t^(p+1)`.
pub fn in_la5_span(g: &BinaryForm) -> bool {
    let p = g.field().characteristic() as usize;
    g.degree() == p + 1 && g.coeffs().iter().enumerate().all(|(k, c)| c.is_zero() || [0, 1, p, p + 1].contains(&k))
}

/// Result of normalizing a span form: `act_gl2(g, matrix) = lambda (s^p t - s t^p)`
/// over `matrix.field()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct La5Normalization {
    pub matrix: GL2Matrix,
    #[serde(serialize_with = "serialize_scalar")]
    pub lambda: (Field, FieldElem),
}

fn serialize_scalar<Ser: serde::Serializer>(v: &(Field, FieldElem), ser: Ser) -> Result<Ser::Ok, Ser::Error> {
    ser.serialize_str(&v.0.format_elem(v.1))
}

/// Three distinct roots of `g` are sent to `[1:0], [0:1], [1:1]`; a span form
/// vanishing there is a multiple of `s^p t - s t^p`.
pub fn la5_normalize(g: &BinaryForm, p: u32) -> Result<La5Normalization, Pgl2Error> {
    let actual = g.field().characteristic();
    if p != actual {
        return Err(Pgl2Error::CharacteristicMismatch { given: p, actual });
    }
    if g.degree() != p as usize + 1 {
        return Err(Pgl2Error::Degree { expected: p as usize + 1, got: g.degree() });
    }
    if !in_la5_span(g) {
        return Err(Pgl2Error::WrongShape);
    }
    if g.is_zero() {
        return Err(Pgl2Error::InsufficientRoots(0));
    }
    let d = roots(g)?;
    if d.support_len() < 3 {
        return Err(Pgl2Error::InsufficientRoots(d.support_len()));
    }
    let k = d.field().clone();
    // prefer [1:0], [0:1], [1:1] so that an already normal form gets the identity
    let mut pts = d.support();
    let rank = |q: &PointP1| match *q {
        PointP1::Infinity => 0,
        PointP1::Finite(a) if a.is_zero() => 1,
        PointP1::Finite(a) if a == k.one() => 2,
        _ => 3,
    };
    pts.sort_by_key(|q| (rank(q), *q));
    let m = GL2Matrix::from_three_points(&k, [pts[0], pts[1], pts[2]]);
    let h = m.act_form(&g.embed(d.base_embedding()));
    let lambda = h.coeff(1);
    debug_assert_eq!(h, la5_target(&k).scale(lambda));
    Ok(La5Normalization { matrix: m, lambda: (k, lambda) })
}

/// A weighted-graded automorphism of `P(1,1,2,3)`:
/// `(s, t) -> M (s, t)`, `x -> lambda x + b2`, `y -> mu y + b1 x + b3`.
#[derive(Clone, Debug)]
pub struct AdmissibleChange {
    pub matrix: GL2Matrix,
    pub b1: BinaryForm,
    pub b2: BinaryForm,
    pub b3: BinaryForm,
    pub lambda: FieldElem,
    pub mu: FieldElem,
}

impl AdmissibleChange {
    pub fn new(
        matrix: GL2Matrix,
        b1: BinaryForm,
        b2: BinaryForm,
        b3: BinaryForm,
        lambda: FieldElem,
        mu: FieldElem,
    ) -> Result<AdmissibleChange, Pgl2Error> {
        if lambda.is_zero() || mu.is_zero() {
            return Err(Pgl2Error::ZeroScalar);
        }
        for (g, d) in [(&b1, 1), (&b2, 2), (&b3, 3)] {
            if g.degree() != d {
                return Err(Pgl2Error::Degree { expected: d, got: g.degree() });
            }
        }
        Ok(AdmissibleChange { matrix, b1, b2, b3, lambda, mu })
    }

    pub fn identity(field: &Field) -> AdmissibleChange {
        AdmissibleChange {
            matrix: GL2Matrix::identity(field),
            b1: BinaryForm::zero(field, 1),
            b2: BinaryForm::zero(field, 2),
            b3: BinaryForm::zero(field, 3),
            lambda: field.one(),
            mu: field.one(),
        }
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> AdmissibleChange {
        let form = |d: usize, rng: &mut R| BinaryForm::new(field, (0..=d).map(|_| field.random(rng)).collect());
        let matrix = GL2Matrix::random(field, rng);
        let b1 = form(1, rng);
        let b2 = form(2, rng);
        let b3 = form(3, rng);
        AdmissibleChange { matrix, b1, b2, b3, lambda: field.random_nonzero(rng), mu: field.random_nonzero(rng) }
    }

    /// Substitutes and rescales back to unit `y^2` and `-x^3`: after dividing
    /// by `mu^2` the cube has coefficient `-e` with `e = lambda^3 / mu^2`, and
    /// `x -> e x`, `y -> e^2 y` followed by division by `e^4` restores it.
    pub fn apply(&self, eq: &DP1Equation) -> Result<DP1Equation, Pgl2Error> {
        let f = eq.field();
        if f != self.matrix.field() || self.b1.field() != f {
            return Err(Dp1Error::FieldMismatch.into());
        }
        let a = Alphabet::dp1();
        let var = |i| MultiPoly::var(f, &a, i);
        let [m11, m12, m21, m22] = self.matrix.entries();
        let lin = |u: FieldElem, v: FieldElem| BinaryForm::new(f, vec![u, v]).to_poly();
        let e = f.div(f.pow(self.lambda, 3), f.mul(self.mu, self.mu)).expect("nonzero");
        let xs = var(X).scale(f.mul(self.lambda, e)).add(&self.b2.to_poly()).expect("same ring");
        let ys = var(Y)
            .scale(f.mul(self.mu, f.mul(e, e)))
            .add(&self.b1.to_poly().mul(&var(X)).expect("same ring").scale(e))
            .and_then(|v| v.add(&self.b3.to_poly()))
            .expect("same ring");
        let g = eq
            .to_poly()
            .substitute(&[Some(lin(m11, m12)), Some(lin(m21, m22)), Some(xs), Some(ys)], false)
            .expect("graded images");
        let scale = f.inv(f.mul(f.mul(self.mu, self.mu), f.pow(e, 4))).expect("nonzero");
        Ok(DP1Equation::from_poly(&g.scale(scale))?)
    }
}

/// Whether some `M` maps `d1` onto `d2` with multiplicities; returns the
/// first such `M` (as a point map `M d1 = d2`) in the lexicographic order of
/// the triples of `d1` sent to the first three support points of `d2`.
pub fn divisor_pgl2_equivalent(d1: &DivisorP1, d2: &DivisorP1) -> Result<Option<GL2Matrix>, Pgl2Error> {
    if d1.degree() != d2.degree() || d1.support_len() != d2.support_len() {
        return Ok(None);
    }
    if d1.multiplicity_profile() != d2.multiplicity_profile() {
        return Ok(None);
    }
    let (d1, d2) = common_field(d1, d2)?;
    let k = d1.field().clone();
    let p1 = d1.points();
    let p2 = d2.points();
    let n = p1.len();
    if n == 0 {
        return Ok(Some(GL2Matrix::identity(&k)));
    }
    let target: Vec<PointP1> = p2.iter().take(3).map(|(p, _)| *p).collect();
    let target_mult: Vec<u32> = p2.iter().take(3).map(|(_, m)| *m).collect();
    // pad short supports with auxiliary points of P^1(k) off both supports
    let aux = |used: &[PointP1], count: usize| -> Vec<PointP1> {
        k.elements().map(PointP1::Finite).chain([PointP1::Infinity]).filter(|q| !used.contains(q)).take(count).collect()
    };
    let pad = 3usize.saturating_sub(n);
    let to: [PointP1; 3] = {
        let supp: Vec<PointP1> = p2.iter().map(|(p, _)| *p).collect();
        let mut v = target.clone();
        v.extend(aux(&supp, pad));
        [v[0], v[1], v[2]]
    };

    let supp1: Vec<PointP1> = p1.iter().map(|(p, _)| *p).collect();
    let extra = aux(&supp1, pad);
    let picks = n.min(3);
    let mut idx = vec![0usize; picks];
    loop {
        let distinct = (0..picks).all(|i| (0..i).all(|j| idx[i] != idx[j]));
        if distinct && (0..picks).all(|i| p1[idx[i]].1 == target_mult[i]) {
            let mut from: Vec<PointP1> = idx.iter().map(|&i| p1[i].0).collect();
            from.extend(extra.iter().copied());
            let m = GL2Matrix::mapping_triple(&k, [from[0], from[1], from[2]], to);
            if m.act_divisor(&d1) == d2 {
                return Ok(Some(m));
            }
        }
        // next tuple in lexicographic order
        let mut pos = picks;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Both divisors over the smallest field containing their fields.
fn common_field(d1: &DivisorP1, d2: &DivisorP1) -> Result<(DivisorP1, DivisorP1), Pgl2Error> {
    let (a, b) = (d1.field().degree(), d2.field().degree());
    if d1.field().characteristic() != d2.field().characteristic() {
        return Err(RootError::IncompatibleFields("different characteristics".into()).into());
    }
    let n = lcm(a, b);
    if n > MAX_DEGREE {
        return Err(RootError::SplittingFieldTooLarge(n).into());
    }
    let k = make_field(d1.field().characteristic() as u64, n).expect("valid degree");
    Ok((d1.embed_into(&k)?, d2.embed_into(&k)?))
}

fn lcm(a: usize, b: usize) -> usize {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Reference configurations of the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[allow(non_camel_case_types)]
pub enum DeltaLabel {
    /// `2 P^1(F_5)`.
    TWO_P1_F5,
    /// `12 [0:1]`.
    TWELVE_O,
    /// `9 [0:1] + 3 [1:0]`.
    NINE_THREE,
    /// `3 P^1(F_3)`.
    THREE_P1_F3,
    /// Branch cubic `s^3`.
    BRANCH_TRIPLE,
    /// Branch cubic `s^2 t`.
    BRANCH_DOUBLE_SINGLE,
    /// Branch cubic `s^2 t + s t^2`.
    BRANCH_DISTINCT,
    OTHER,
}

impl fmt::Display for DeltaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaContext {
    /// Discriminant divisors of degree 12.
    Anticanonical,
    /// Branch cubics of the characteristic-2 double cover.
    Branch,
}

/// A label and, unless `OTHER`, the witness `M` with `M D = reference`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaClass {
    pub label: DeltaLabel,
    pub witness: Option<GL2Matrix>,
}

/// The reference divisors for a context and characteristic, over `F_p`.
pub fn reference_divisors(p: u32, context: DeltaContext) -> Vec<(DeltaLabel, DivisorP1)> {
    let fp = make_field(p as u64, 1).expect("prime");
    let o = PointP1::Finite(fp.zero());
    let inf = PointP1::Infinity;
    let over = |pts: Vec<(PointP1, u32)>| DivisorP1::over_prime_field(p, pts);
    match (context, p) {
        (DeltaContext::Anticanonical, 5) => vec![(DeltaLabel::TWO_P1_F5, DivisorP1::rational_points(5, 2))],
        (DeltaContext::Anticanonical, 3) => vec![
            (DeltaLabel::TWELVE_O, over(vec![(o, 12)])),
            (DeltaLabel::NINE_THREE, over(vec![(o, 9), (inf, 3)])),
            (DeltaLabel::THREE_P1_F3, DivisorP1::rational_points(3, 3)),
        ],
        (DeltaContext::Anticanonical, _) => Vec::new(),
        (DeltaContext::Branch, _) => vec![
            (DeltaLabel::BRANCH_TRIPLE, over(vec![(o, 3)])),
            (DeltaLabel::BRANCH_DOUBLE_SINGLE, over(vec![(o, 2), (inf, 1)])),
            // roots of s^2 t + s t^2 = s t (s + t)
            (DeltaLabel::BRANCH_DISTINCT, over(vec![(o, 1), (inf, 1), (PointP1::Finite(fp.neg(fp.one())), 1)])),
        ],
    }
}

pub fn delta_class(d: &DivisorP1, p: u32, context: DeltaContext) -> Result<DeltaClass, Pgl2Error> {
    let actual = d.field().characteristic();
    if actual != p {
        return Err(Pgl2Error::CharacteristicMismatch { given: p, actual });
    }
    let expected = match context {
        DeltaContext::Anticanonical => 12,
        DeltaContext::Branch => 3,
    };
    if d.degree() as usize != expected {
        return Err(Pgl2Error::Degree { expected, got: d.degree() as usize });
    }
    for (label, reference) in reference_divisors(p, context) {
        if let Some(m) = divisor_pgl2_equivalent(d, &reference)? {
            return Ok(DeltaClass { label, witness: Some(m) });
        }
    }
    Ok(DeltaClass { label: DeltaLabel::OTHER, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_dp1;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn form(text: &str, f: &Field, d: usize) -> BinaryForm {
        BinaryForm::from_poly(&parse_dp1(text, f).unwrap(), d).unwrap()
    }

    #[test]
    fn action_examples() {
        let f5 = make_field(5, 1).unwrap();
        let g = form("s^5*t - s*t^5", &f5, 6);
        assert_eq!(GL2Matrix::identity(&f5).act_form(&g), g);
        let swap = GL2Matrix::from_ints(&f5, [0, 1, 1, 0]).unwrap();
        assert_eq!(swap.act_form(&g), g.neg());
        assert_eq!(roots(&swap.act_form(&g)).unwrap(), roots(&g).unwrap());
        assert!(GL2Matrix::from_ints(&f5, [1, 2, 2, 4]).is_err());
    }

    #[test]
    fn contragredience() {
        let f = make_field(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = form("s^4 + t^4 + s*t^3", &f, 4);
        for _ in 0..20 {
            let m = GL2Matrix::random(&f, &mut rng);
            let d = roots(&g).unwrap();
            let k = d.field().clone();
            let emb = d.base_embedding().clone();
            let moved = roots(&m.act_form(&g)).unwrap().embed_into(&k).unwrap();
            assert_eq!(moved, m.embed(&emb).inverse().act_divisor(&d));
            assert!(m.mul(&m.inverse()).projectively_equal(&GL2Matrix::identity(&f)));
        }
    }

    #[test]
    fn la5_examples() {
        let f5 = make_field(5, 1).unwrap();
        let n = la5_normalize(&la5_target(&f5), 5).unwrap();
        assert!(n.matrix.projectively_equal(&GL2Matrix::identity(&f5)));
        assert_eq!(n.lambda.1, f5.one());

        let f3 = make_field(3, 1).unwrap();
        let g = form("s^4 + t^4", &f3, 4);
        let n = la5_normalize(&g, 3).unwrap();
        let k = n.matrix.field().clone();
        assert_eq!(k.degree(), 2);
        let emb = Embedding::new(&f3, &k).unwrap();
        assert_eq!(n.matrix.act_form(&g.embed(&emb)), la5_target(&k).scale(n.lambda.1));

        assert_eq!(la5_normalize(&form("s^4", &f3, 4), 3), Err(Pgl2Error::InsufficientRoots(1)));
        assert_eq!(la5_normalize(&form("s^2*t^2", &f3, 4), 3), Err(Pgl2Error::WrongShape));
        assert!(matches!(la5_normalize(&form("s^3", &f3, 3), 3), Err(Pgl2Error::Degree { .. })));
    }

    #[test]
    fn equivalence_examples() {
        let f5 = make_field(5, 1).unwrap();
        let g = form("s^5*t - s*t^5", &f5, 6);
        let d = roots(&g.mul(&g)).unwrap();
        assert!(divisor_pgl2_equivalent(&d, &DivisorP1::rational_points(5, 2)).unwrap().is_some());

        let f3 = make_field(3, 1).unwrap();
        let a = DivisorP1::over_prime_field(3, [(PointP1::Finite(f3.zero()), 12)]);
        let b = DivisorP1::over_prime_field(3, [(PointP1::Finite(f3.zero()), 9), (PointP1::Infinity, 3)]);
        assert_eq!(divisor_pgl2_equivalent(&a, &b).unwrap(), None);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = form("s^3*t + 2*s*t^3 + t^4", &f5, 4);
        let dh = roots(&h).unwrap();
        for _ in 0..10 {
            let m = GL2Matrix::random(dh.field(), &mut rng);
            let moved = m.act_divisor(&dh);
            let w = divisor_pgl2_equivalent(&dh, &moved).unwrap().unwrap();
            assert_eq!(w.act_divisor(&dh), moved);
        }
    }

    #[test]
    fn delta_class_examples() {
        let f5 = make_field(5, 1).unwrap();
        let g = form("s^5*t - s*t^5", &f5, 6);
        let d = roots(&g.mul(&g).scale_int(3)).unwrap();
        let c = delta_class(&d, 5, DeltaContext::Anticanonical).unwrap();
        assert_eq!(c.label, DeltaLabel::TWO_P1_F5);
        assert_eq!(c.witness.unwrap().act_divisor(&d), DivisorP1::rational_points(5, 2));

        let f3 = make_field(3, 1).unwrap();
        let g = form("s^3*t - s*t^3", &f3, 4);
        let d = roots(&g.pow(3).neg()).unwrap();
        assert_eq!(delta_class(&d, 3, DeltaContext::Anticanonical).unwrap().label, DeltaLabel::THREE_P1_F3);
        let d = roots(&form("s^9*t^3", &f3, 12)).unwrap();
        assert_eq!(delta_class(&d, 3, DeltaContext::Anticanonical).unwrap().label, DeltaLabel::NINE_THREE);

        let f2 = make_field(2, 1).unwrap();
        for (text, label) in [
            ("s^2*t + s*t^2", DeltaLabel::BRANCH_DISTINCT),
            ("s^3", DeltaLabel::BRANCH_TRIPLE),
            ("s^2*t", DeltaLabel::BRANCH_DOUBLE_SINGLE),
            ("s^3 + s*t^2 + t^3", DeltaLabel::BRANCH_DISTINCT),
        ] {
            let d = roots(&form(text, &f2, 3)).unwrap();
            assert_eq!(delta_class(&d, 2, DeltaContext::Branch).unwrap().label, label, "{text}");
        }
        let d = roots(&form("s^3", &f2, 3)).unwrap();
        assert!(delta_class(&d, 2, DeltaContext::Anticanonical).is_err());
    }

    #[test]
    fn admissible_change_keeps_shape() {
        let f5 = make_field(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^5*t - s*t^5)", &f5).unwrap();
        assert_eq!(AdmissibleChange::identity(&f5).apply(&eq).unwrap(), eq);
        for _ in 0..5 {
            let ch = AdmissibleChange::random(&f5, &mut rng);
            let out = ch.apply(&eq).unwrap();
            assert!(out.to_poly().is_homogeneous(6));
        }
    }
}
