//! Degree-1 del Pezzo surfaces as sextics
//! `y^2 + a1 x y + a3 y - (x^3 + a2 x^2 + a4 x + a6)` in `P(1,1,2,3)`,
//! where each `ai` is a binary form of degree `i` in `s, t`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fields::{field_from_desc, make_field, Embedding, Field, FieldDesc, FieldElem, FieldError, MAX_DEGREE};
use crate::mpoly::{Alphabet, BinaryForm, Monomial, MultiPoly, PolyError, S, T, X, Y};
use crate::unifactor::{is_squarefree, PointP1};
use crate::upoly::UPoly;

/// Degrees of `a1, a2, a3, a4, a6`.
pub const DEGREES: [usize; 5] = [1, 2, 3, 4, 6];
/// Names of the coefficient forms, in storage order.
pub const NAMES: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];
/// Default extension degree for the singular-point search.
pub const DEFAULT_SEARCH_BOUND: usize = 6;
/// Largest field order for which fibers are point-counted.
pub const POINT_COUNT_LIMIT: u128 = 1 << 22;
/// Largest number of base points visited when every fiber is singular.
pub const POINT_SEARCH_BUDGET: u128 = 1 << 17;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Dp1Error {
    #[error("{name} must have degree {expected}, got {got}")]
    Degree { name: &'static str, expected: usize, got: usize },
    #[error("coefficient forms over different fields")]
    FieldMismatch,
    #[error("not a degree-1 del Pezzo sextic: {0}")]
    Shape(String),
    #[error("equation is not normalized for characteristic {p}: {reason}")]
    NotNormalized { p: u32, reason: &'static str },
    #[error("characteristic {0} has no closed-form formula here (only 2, 3 and 5)")]
    UnsupportedCharacteristic(u32),
    #[error("fiber is singular")]
    SingularFiber,
    #[error("field of order {0} is too large to point-count")]
    FieldTooLarge(u128),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The five coefficient forms of a degree-1 del Pezzo sextic.
#[derive(Clone, PartialEq, Eq)]
pub struct DP1Equation {
    field: Field,
    forms: [BinaryForm; 5],
}

impl fmt::Debug for DP1Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DP1Equation[{}]({})", self.field, self.to_poly())
    }
}

impl fmt::Display for DP1Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

impl DP1Equation {
    pub fn new(field: &Field, forms: [BinaryForm; 5]) -> Result<DP1Equation, Dp1Error> {
        for (i, g) in forms.iter().enumerate() {
            if g.field() != field {
                return Err(Dp1Error::FieldMismatch);
            }
            if g.degree() != DEGREES[i] {
                return Err(Dp1Error::Degree { name: NAMES[i], expected: DEGREES[i], got: g.degree() });
            }
        }
        Ok(DP1Equation { field: field.clone(), forms })
    }

    /// All coefficient forms zero, i.e. `y^2 - x^3`.
    pub fn zero(field: &Field) -> DP1Equation {
        DP1Equation { field: field.clone(), forms: DEGREES.map(|d| BinaryForm::zero(field, d)) }
    }

    /// Integer coefficient vectors, `coeffs[i][k]` multiplying `s^(d-k) t^k`.
    /// Missing trailing entries are zero.
    pub fn from_ints(field: &Field, coeffs: [&[i64]; 5]) -> Result<DP1Equation, Dp1Error> {
        let mut eq = DP1Equation::zero(field);
        for (i, c) in coeffs.iter().enumerate() {
            if c.len() > DEGREES[i] + 1 {
                return Err(Dp1Error::Degree { name: NAMES[i], expected: DEGREES[i], got: c.len() - 1 });
            }
            let mut v: Vec<i64> = c.to_vec();
            v.resize(DEGREES[i] + 1, 0);
            eq.forms[i] = BinaryForm::from_ints(field, &v);
        }
        Ok(eq)
    }

    /// Coefficient vectors in storage order, each of length `degree + 1`.
    pub fn from_elems(field: &Field, coeffs: [Vec<FieldElem>; 5]) -> Result<DP1Equation, Dp1Error> {
        let forms = coeffs.map(|c| BinaryForm::new(field, c));
        DP1Equation::new(field, forms)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn forms(&self) -> &[BinaryForm; 5] {
        &self.forms
    }

    pub fn a1(&self) -> &BinaryForm {
        &self.forms[0]
    }
    pub fn a2(&self) -> &BinaryForm {
        &self.forms[1]
    }
    pub fn a3(&self) -> &BinaryForm {
        &self.forms[2]
    }
    pub fn a4(&self) -> &BinaryForm {
        &self.forms[3]
    }
    pub fn a6(&self) -> &BinaryForm {
        &self.forms[4]
    }

    /// The same equation with the form at storage index `i` replaced.
    pub fn with_form(&self, i: usize, g: BinaryForm) -> Result<DP1Equation, Dp1Error> {
        let mut forms = self.forms.clone();
        forms[i] = g;
        DP1Equation::new(&self.field, forms)
    }

    /// The sextic in the `s, t, x, y` alphabet.
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(&self.field, &Alphabet::dp1(), self.terms().collect::<Vec<_>>())
    }

    /// Terms of the sextic without building a polynomial (unsorted, no repeats).
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, FieldElem)> + '_ {
        let f = &self.field;
        let neg_one = f.neg(f.one());
        // (x, y) exponents and sign for a1..a6
        const SHAPE: [(u16, u16, bool); 5] = [(1, 1, false), (2, 0, true), (0, 1, false), (1, 0, true), (0, 0, true)];
        let lead = [(Monomial::stxy(0, 0, 0, 2), f.one()), (Monomial::stxy(0, 0, 3, 0), neg_one)];
        lead.into_iter().chain(self.forms.iter().zip(SHAPE).flat_map(move |(g, (ex, ey, negate))| {
            let d = g.degree() as u16;
            g.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, &c)| {
                let k = k as u16;
                (Monomial::stxy(d - k, k, ex, ey), if negate { f.neg(c) } else { c })
            })
        }))
    }

    /// Reads `(a1, a2, a3, a4, a6)` off a sextic with unit `y^2` and `-1` as
    /// the coefficient of `x^3`.
    pub fn from_poly(f: &MultiPoly) -> Result<DP1Equation, Dp1Error> {
        if !f.alphabet().is_dp1() {
            return Err(Dp1Error::Shape("expected the alphabet s, t, x, y".into()));
        }
        let field = f.field();
        let mut eq = DP1Equation::zero(field);
        let mut seen_y2 = false;
        let mut seen_x3 = false;
        for (m, c) in f.terms() {
            let e = m.exps();
            let (i, negate) = match (e[X], e[Y]) {
                (0, 2) | (3, 0) if e[S] + e[T] == 0 => {
                    let want = if e[Y] == 2 { field.one() } else { field.neg(field.one()) };
                    if *c != want {
                        return Err(Dp1Error::Shape(format!("coefficient of {} must be {}", if e[Y] == 2 { "y^2" } else { "x^3" }, field.format_elem(want))));
                    }
                    if e[Y] == 2 {
                        seen_y2 = true;
                    } else {
                        seen_x3 = true;
                    }
                    continue;
                }
                (1, 1) => (0, false),
                (2, 0) => (1, true),
                (0, 1) => (2, false),
                (1, 0) => (3, true),
                (0, 0) => (4, true),
                _ => return Err(Dp1Error::Shape(format!("unexpected term {}", MultiPoly::monomial(field, f.alphabet(), *m, *c)))),
            };
            let d = (e[S] + e[T]) as usize;
            if d != DEGREES[i] {
                return Err(Dp1Error::Shape(format!("{} has a term of degree {d}, expected {}", NAMES[i], DEGREES[i])));
            }
            let mut coeffs = eq.forms[i].coeffs().to_vec();
            coeffs[e[T] as usize] = if negate { field.neg(*c) } else { *c };
            eq.forms[i] = BinaryForm::new(field, coeffs);
        }
        if !seen_y2 || !seen_x3 {
            return Err(Dp1Error::Shape("needs the terms y^2 and -x^3".into()));
        }
        Ok(eq)
    }

    /// Parses a sextic in the expression grammar and checks its shape.
    pub fn parse(text: &str, field: &Field) -> Result<DP1Equation, Dp1Error> {
        DP1Equation::from_poly(&crate::mpoly::parse_dp1(text, field)?)
    }

    /// Parses the line format `a1: c0 c1` (one line per form, any order,
    /// omitted forms are zero, `#` starts a comment). Coefficients are field
    /// elements without internal spaces, `c_k` multiplying `s^(d-k) t^k`.
    pub fn parse_coefficients(text: &str, field: &Field) -> Result<DP1Equation, Dp1Error> {
        let mut eq = DP1Equation::zero(field);
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let body = line.split('#').next().unwrap_or("");
            let at = offset;
            offset += line.len();
            if body.trim().is_empty() {
                continue;
            }
            let (name, rest) = body.split_once(':').ok_or_else(|| Dp1Error::Shape(format!("line at byte {at}: expected `name: coefficients`")))?;
            let i = NAMES
                .iter()
                .position(|n| *n == name.trim())
                .ok_or_else(|| Dp1Error::Shape(format!("unknown coefficient form `{}`", name.trim())))?;
            let coeffs = rest
                .split_whitespace()
                .map(|tok| {
                    let base = tok.as_ptr() as usize - text.as_ptr() as usize;
                    field.parse_elem(tok).map_err(|e| match e {
                        FieldError::Parse { offset, message } => FieldError::Parse { offset: base + offset, message },
                        e => e,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.len() != DEGREES[i] + 1 {
                return Err(Dp1Error::Degree { name: NAMES[i], expected: DEGREES[i], got: coeffs.len().saturating_sub(1) });
            }
            eq.forms[i] = BinaryForm::new(field, coeffs);
        }
        Ok(eq)
    }

    /// Whether the closed-form discriminant and j-invariant apply: `a1 = a3 = 0`
    /// when `p != 2`, and also `a2 = 0` when `p = 5`.
    pub fn normalization_issue(&self) -> Option<&'static str> {
        match self.field.characteristic() {
            2 => None,
            3 if !(self.a1().is_zero() && self.a3().is_zero()) => Some("a1 and a3 must vanish"),
            3 => None,
            5 if !(self.a1().is_zero() && self.a3().is_zero()) => Some("a1 and a3 must vanish"),
            5 if !self.a2().is_zero() => Some("a2 must vanish"),
            _ => None,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_issue().is_none()
    }

    fn require_normalized(&self) -> Result<u32, Dp1Error> {
        let p = self.field.characteristic();
        if ![2, 3, 5].contains(&p) {
            return Err(Dp1Error::UnsupportedCharacteristic(p));
        }
        match self.normalization_issue() {
            Some(reason) => Err(Dp1Error::NotNormalized { p, reason }),
            None => Ok(p),
        }
    }

    /// Serializable record of the coefficient vectors.
    pub fn to_record(&self) -> DP1Record {
        let f = &self.field;
        let v = |g: &BinaryForm| g.coeffs().iter().map(|&c| f.format_elem(c)).collect();
        DP1Record {
            field: f.desc().clone(),
            a1: v(self.a1()),
            a2: v(self.a2()),
            a3: v(self.a3()),
            a4: v(self.a4()),
            a6: v(self.a6()),
        }
    }

    pub fn from_record(r: &DP1Record) -> Result<DP1Equation, Dp1Error> {
        let field = field_from_desc(&r.field)?;
        let parse = |v: &Vec<String>| v.iter().map(|s| field.parse_elem(s)).collect::<Result<Vec<_>, _>>();
        let coeffs = [parse(&r.a1)?, parse(&r.a2)?, parse(&r.a3)?, parse(&r.a4)?, parse(&r.a6)?];
        for (i, c) in coeffs.iter().enumerate() {
            if c.len() != DEGREES[i] + 1 {
                return Err(Dp1Error::Degree { name: NAMES[i], expected: DEGREES[i], got: c.len().saturating_sub(1) });
            }
        }
        DP1Equation::from_elems(&field, coeffs)
    }
}

/// Flat serialized form: field descriptor plus the five coefficient vectors,
/// each entry a field element in the expression syntax (`3`, `2*u + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DP1Record {
    pub field: FieldDesc,
    pub a1: Vec<String>,
    pub a2: Vec<String>,
    pub a3: Vec<String>,
    pub a4: Vec<String>,
    pub a6: Vec<String>,
}

/// The standard quantities `b2, b4, b6, b8` with form coefficients.
pub fn b_invariants(eq: &DP1Equation) -> [BinaryForm; 4] {
    let [a1, a2, a3, a4, a6] = eq.forms();
    let b2 = a1.mul(a1).add(&a2.scale_int(4));
    let b4 = a4.scale_int(2).add(&a1.mul(a3));
    let b6 = a3.mul(a3).add(&a6.scale_int(4));
    let b8 = a1
        .mul(a1)
        .mul(a6)
        .add(&a2.mul(a6).scale_int(4))
        .sub(&a1.mul(a3).mul(a4))
        .add(&a2.mul(a3).mul(a3))
        .sub(&a4.mul(a4));
    [b2, b4, b6, b8]
}

/// `c4 = b2^2 - 24 b4`.
pub fn c4(eq: &DP1Equation) -> BinaryForm {
    let [b2, b4, _, _] = b_invariants(eq);
    b2.mul(&b2).sub(&b4.scale_int(24))
}

/// Which discriminant formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscriminantPath {
    /// The closed forms for normalized equations in characteristic 2, 3, 5.
    Paper,
    /// `-b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`, valid for any equation.
    Formulaire,
}

pub fn discriminant(eq: &DP1Equation, path: DiscriminantPath) -> Result<BinaryForm, Dp1Error> {
    match path {
        DiscriminantPath::Formulaire => Ok(formulaire_discriminant(eq)),
        DiscriminantPath::Paper => {
            let p = eq.require_normalized()?;
            let [a1, a2, a3, a4, a6] = eq.forms();
            Ok(match p {
                5 => a4.pow(3).sub(&a6.mul(a6).scale_int(2)),
                3 => a2.mul(a2).mul(&a2.mul(a6).sub(&a4.mul(a4))).neg().sub(&a4.pow(3)),
                _ => {
                    let inner = a1.pow(2).mul(a6).add(&a1.mul(a3).mul(a4)).add(&a2.mul(&a3.pow(2))).add(&a4.pow(2));
                    a1.pow(4).mul(&inner).add(&a1.pow(3).mul(&a3.pow(3))).add(&a3.pow(4))
                }
            })
        }
    }
}

fn formulaire_discriminant(eq: &DP1Equation) -> BinaryForm {
    let [b2, b4, b6, b8] = b_invariants(eq);
    b2.mul(&b2)
        .mul(&b8)
        .neg()
        .sub(&b4.pow(3).scale_int(8))
        .sub(&b6.mul(&b6).scale_int(27))
        .add(&b2.mul(&b4).mul(&b6).scale_int(9))
}

/// `j` as the unreduced pair (numerator, discriminant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JInvariant {
    pub numerator: BinaryForm,
    pub discriminant: BinaryForm,
}

impl JInvariant {
    pub fn j_is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// Numerators `3 a4^3`, `a2^6`, `a1^12` in characteristic 5, 3, 2.
pub fn j_invariant(eq: &DP1Equation) -> Result<JInvariant, Dp1Error> {
    let p = eq.require_normalized()?;
    let numerator = match p {
        5 => eq.a4().pow(3).scale_int(3),
        3 => eq.a2().pow(6),
        _ => eq.a1().pow(12),
    };
    Ok(JInvariant { numerator, discriminant: discriminant(eq, DiscriminantPath::Paper)? })
}

/// Removes `a1, a3` by `y -> y - (a1 x + a3)/2` when `p != 2`, then `a2` by
/// `x -> x - a2/3` when also `p != 3`.
pub fn complete_square_cube(eq: &DP1Equation) -> DP1Equation {
    let f = &eq.field;
    let p = f.characteristic();
    if p == 2 {
        return eq.clone();
    }
    let [b2, b4, b6, _] = b_invariants(eq);
    let inv = |k: i64| f.inv(f.from_i64(k)).expect("invertible in this characteristic");
    let mut a2 = b2.scale(inv(4));
    let mut a4 = b4.scale(inv(2));
    let mut a6 = b6.scale(inv(4));
    if p != 3 && !a2.is_zero() {
        let third = inv(3);
        let new_a4 = a4.sub(&a2.mul(&a2).scale(third));
        let new_a6 = a6.sub(&a2.mul(&a4).scale(third)).add(&a2.pow(3).scale(f.mul(f.from_i64(2), inv(27))));
        a4 = new_a4;
        a6 = new_a6;
        a2 = BinaryForm::zero(f, 2);
    }
    DP1Equation {
        field: f.clone(),
        forms: [BinaryForm::zero(f, 1), a2, BinaryForm::zero(f, 3), a4, a6],
    }
}

/// A member of the anticanonical pencil: the Weierstrass cubic with the
/// coefficient forms evaluated at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassFiber {
    pub field: Field,
    pub a: [FieldElem; 5],
}

impl WeierstrassFiber {
    pub fn new(field: &Field, a: [FieldElem; 5]) -> WeierstrassFiber {
        WeierstrassFiber { field: field.clone(), a }
    }

    /// `[b2, b4, b6, b8]`.
    pub fn b_invariants(&self) -> [FieldElem; 4] {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let k = |v: i64| f.from_i64(v);
        let b2 = f.add(f.mul(a1, a1), f.mul(k(4), a2));
        let b4 = f.add(f.mul(k(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(k(4), a6));
        let b8 = [
            f.mul(f.mul(a1, a1), a6),
            f.mul(k(4), f.mul(a2, a6)),
            f.neg(f.mul(f.mul(a1, a3), a4)),
            f.mul(a2, f.mul(a3, a3)),
            f.neg(f.mul(a4, a4)),
        ]
        .into_iter()
        .fold(f.zero(), |acc, v| f.add(acc, v));
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> FieldElem {
        let f = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let terms = [
            f.neg(f.mul(f.mul(b2, b2), b8)),
            f.mul_int(f.pow(b4, 3), -8),
            f.mul_int(f.mul(b6, b6), -27),
            f.mul_int(f.mul(f.mul(b2, b4), b6), 9),
        ];
        terms.into_iter().fold(f.zero(), |acc, v| f.add(acc, v))
    }

    pub fn c4(&self) -> FieldElem {
        let f = &self.field;
        let [b2, b4, _, _] = self.b_invariants();
        f.sub(f.mul(b2, b2), f.mul_int(b4, 24))
    }

    /// `j = 0` in the sense that the numerator `c4^3` vanishes.
    pub fn j_is_zero(&self) -> bool {
        self.c4().is_zero()
    }

    pub fn is_smooth(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// `f(x, y)` for the affine cubic.
    pub fn eval(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let lhs = f.add(f.mul(y, y), f.mul(y, f.add(f.mul(a1, x), a3)));
        let rhs = f.add(f.mul(x, f.add(f.mul(x, f.add(x, a2)), a4)), a6);
        f.sub(lhs, rhs)
    }

    /// The singular point of the affine cubic, if there is one. A Weierstrass
    /// cubic has at most one.
    pub fn singular_point(&self) -> Option<(FieldElem, FieldElem)> {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let pt = if f.characteristic() == 2 {
            if !a1.is_zero() {
                let x = f.div(a3, a1).unwrap();
                let y = f.div(f.add(f.mul(x, x), a4), a1).unwrap();
                (x, y)
            } else if a3.is_zero() {
                let x = f.pth_root(a4);
                let r = f.add(f.mul(x, f.add(f.mul(x, f.add(x, a2)), a4)), a6);
                (x, f.pth_root(r))
            } else {
                return None;
            }
        } else {
            // on fy = 0 the cubic becomes -C(x)/4 with C = 4x^3 + b2 x^2 + 2 b4 x + b6
            let [b2, b4, b6, _] = self.b_invariants();
            let c = UPoly::new(f, vec![b6, f.mul_int(b4, 2), b2, f.from_i64(4)]);
            let g = c.gcd(&c.derivative());
            if g.degree() == Some(0) {
                return None;
            }
            let x = *g.roots().first()?;
            let half = f.inv(f.from_i64(2)).unwrap();
            let y = f.neg(f.mul(f.add(f.mul(a1, x), a3), half));
            (x, y)
        };
        self.is_singular_at(pt.0, pt.1).then_some(pt)
    }

    fn is_singular_at(&self, x: FieldElem, y: FieldElem) -> bool {
        let f = &self.field;
        let [a1, a2, a3, a4, _] = self.a;
        let fy = f.add(f.mul_int(y, 2), f.add(f.mul(a1, x), a3));
        let fx = f.sub(f.mul(a1, y), f.add(f.add(f.mul_int(f.mul(x, x), 3), f.mul_int(f.mul(a2, x), 2)), a4));
        self.eval(x, y).is_zero() && fx.is_zero() && fy.is_zero()
    }
}

/// The fiber over `point`, whose coordinates live in `emb.target()`.
pub fn fiber_at(eq: &DP1Equation, emb: &Embedding, point: PointP1) -> WeierstrassFiber {
    let k = emb.target();
    let (s, t) = point.coords(k);
    fiber_at_coords(eq, emb, s, t)
}

/// The fiber over the cone point `(s, t)`; the representative matters for the
/// Weierstrass coordinates, not for the isomorphism class.
pub fn fiber_at_coords(eq: &DP1Equation, emb: &Embedding, s: FieldElem, t: FieldElem) -> WeierstrassFiber {
    let a = [0, 1, 2, 3, 4].map(|i| eq.forms[i].eval_embedded(emb, s, t));
    WeierstrassFiber::new(emb.target(), a)
}

/// Counts `N = 1 + #{(x, y) : fiber(x, y) = 0}` over the fiber's field.
pub fn count_points(fb: &WeierstrassFiber) -> Result<u128, Dp1Error> {
    let f = &fb.field;
    let q = f.order();
    if q > POINT_COUNT_LIMIT {
        return Err(Dp1Error::FieldTooLarge(q));
    }
    let [a1, a2, a3, a4, a6] = fb.a;
    let mut n: u128 = 1;
    for x in f.elements() {
        // y^2 + b y = r
        let b = f.add(f.mul(a1, x), a3);
        let r = f.add(f.mul(x, f.add(f.mul(x, f.add(x, a2)), a4)), a6);
        n += if f.characteristic() == 2 {
            if b.is_zero() {
                1
            } else {
                // y = b z turns it into z^2 + z = r / b^2, solvable iff the trace vanishes
                let c = f.div(r, f.mul(b, b)).unwrap();
                if trace_to_prime(f, c).is_zero() {
                    2
                } else {
                    0
                }
            }
        } else {
            let d = f.add(f.mul(b, b), f.mul_int(r, 4));
            if d.is_zero() {
                1
            } else if f.pow(d, (q - 1) / 2) == f.one() {
                2
            } else {
                0
            }
        };
    }
    Ok(n)
}

fn trace_to_prime(f: &Field, a: FieldElem) -> FieldElem {
    let mut acc = f.zero();
    let mut c = a;
    for _ in 0..f.degree() {
        acc = f.add(acc, c);
        c = f.frobenius(c);
    }
    acc
}

/// Supersingular iff the trace `q + 1 - N` is divisible by `p`.
pub fn is_supersingular(fb: &WeierstrassFiber) -> Result<bool, Dp1Error> {
    if !fb.is_smooth() {
        return Err(Dp1Error::SingularFiber);
    }
    let q = fb.field.order() as i128;
    let n = count_points(fb)? as i128;
    Ok((q + 1 - n).rem_euclid(fb.field.characteristic() as i128) == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothVerdict {
    Smooth,
    Singular,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothMethod {
    Exact,
    PointSearch,
}

/// A singular point `(s, t, x, y)` on the affine cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub field: Field,
    pub coords: [FieldElem; 4],
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|&v| self.field.format_elem(v)).collect();
        write!(f, "({}) over {}", c.join(", "), self.field)
    }
}

impl Serialize for SingularPoint {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("SingularPoint", 2)?;
        st.serialize_field("field", self.field.desc())?;
        let c: Vec<String> = self.coords.iter().map(|&v| self.field.format_elem(v)).collect();
        st.serialize_field("stxy", &c)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub verdict: SmoothVerdict,
    pub method: SmoothMethod,
    pub witnesses: Vec<SingularPoint>,
    pub search_bound: usize,
    /// True when every base point that could carry a singularity was examined,
    /// so an empty witness list is a proof of smoothness.
    pub covered: bool,
}

impl SmoothnessReport {
    /// Smooth, or no singular point anywhere a singularity could lie.
    pub fn smooth_evidence(&self) -> bool {
        self.verdict == SmoothVerdict::Smooth || (self.verdict == SmoothVerdict::Undetermined && self.covered)
    }
}

const MAX_WITNESSES: usize = 16;

/// Exact criterion in characteristic 5 after normalization with `a4 = 0`;
/// otherwise a search over the base points where fibers are singular.
pub fn smoothness(eq: &DP1Equation, search_bound: usize) -> SmoothnessReport {
    let p = eq.field.characteristic();
    if p == 5 {
        let norm = complete_square_cube(eq);
        if norm.a4().is_zero() {
            let smooth = !norm.a6().is_zero() && is_squarefree(norm.a6());
            return SmoothnessReport {
                verdict: if smooth { SmoothVerdict::Smooth } else { SmoothVerdict::Singular },
                method: SmoothMethod::Exact,
                witnesses: if smooth { Vec::new() } else { singular_point_search(eq, search_bound).0 },
                search_bound,
                covered: true,
            };
        }
    }
    let (witnesses, covered) = singular_point_search(eq, search_bound);
    SmoothnessReport {
        verdict: if witnesses.is_empty() { SmoothVerdict::Undetermined } else { SmoothVerdict::Singular },
        method: SmoothMethod::PointSearch,
        witnesses,
        search_bound,
        covered,
    }
}

/// Singular points of `X` lie on singular fibers: over the roots of the
/// discriminant, or anywhere when it vanishes identically. The pencil's base
/// point is always smooth. Galois-conjugate base points behave alike, so one
/// root per irreducible factor suffices.
fn singular_point_search(eq: &DP1Equation, bound: usize) -> (Vec<SingularPoint>, bool) {
    let base = &eq.field;
    let m = base.degree();
    let p = base.characteristic() as u64;
    let f = eq.to_poly();
    let partials = [f.partial(S), f.partial(T)];
    let mut witnesses = Vec::new();
    let examine = |emb: &Embedding, pt: PointP1, out: &mut Vec<SingularPoint>| {
        let k = emb.target();
        let (s, t) = pt.coords(k);
        let fb = fiber_at_coords(eq, emb, s, t);
        if let Some((x, y)) = fb.singular_point() {
            let coords = [s, t, x, y];
            if partials.iter().all(|g| g.eval_embedded(emb, &coords).is_zero()) {
                out.push(SingularPoint { field: k.clone(), coords });
            }
        }
    };

    let delta = formulaire_discriminant(eq);
    if !delta.is_zero() {
        let mut covered = true;
        let self_emb = Embedding::new(base, base).unwrap();
        if delta.infinity_multiplicity() > 0 {
            examine(&self_emb, PointP1::Infinity, &mut witnesses);
        }
        let u = delta.dehomogenize();
        if u.degree().unwrap_or(0) > 0 {
            for (h, _) in u.factor().1 {
                let d = h.degree().unwrap();
                if d > bound || m * d > MAX_DEGREE {
                    covered = false;
                    continue;
                }
                let k = make_field(p, m * d).unwrap();
                let emb = Embedding::new(base, &k).unwrap();
                let r = h.embed(&emb).roots()[0];
                examine(&emb, PointP1::Finite(r), &mut witnesses);
            }
        }
        return (witnesses, covered);
    }

    // every fiber is singular: walk base points of increasing degree
    let mut visited: u128 = 0;
    let self_emb = Embedding::new(base, base).unwrap();
    examine(&self_emb, PointP1::Infinity, &mut witnesses);
    for n in 1..=bound {
        if m * n > MAX_DEGREE || witnesses.len() >= MAX_WITNESSES {
            break;
        }
        let k = make_field(p, m * n).unwrap();
        if visited + k.order() > POINT_SEARCH_BUDGET {
            break;
        }
        visited += k.order();
        let emb = Embedding::new(base, &k).unwrap();
        for a in k.elements() {
            // skip points already seen over a smaller field
            let q_pow = |j: usize| k.frobenius_pow(a, m * j);
            if (1..n).any(|j| n % j == 0 && q_pow(j) == a) {
                continue;
            }
            examine(&emb, PointP1::Finite(a), &mut witnesses);
            if witnesses.len() >= MAX_WITNESSES {
                break;
            }
        }
    }
    (witnesses, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_dp1;

    fn fp(p: u64) -> Field {
        make_field(p, 1).unwrap()
    }

    #[test]
    fn to_poly_examples() {
        let f3 = fp(3);
        assert_eq!(DP1Equation::zero(&f3).to_poly(), parse_dp1("y^2 - x^3", &f3).unwrap());
        let eq = DP1Equation::from_ints(&f3, [&[], &[], &[], &[1], &[]]).unwrap();
        assert_eq!(eq.to_poly(), parse_dp1("y^2 - (x^3 + s^4*x)", &f3).unwrap());
        let f2 = fp(2);
        let eq = DP1Equation::from_ints(&f2, [&[1, 0], &[], &[0, 0, 0, 1], &[], &[]]).unwrap();
        assert_eq!(eq.to_poly(), parse_dp1("y^2 + s*x*y + t^3*y - x^3", &f2).unwrap());
        assert!(eq.to_poly().is_homogeneous(6));
    }

    #[test]
    fn shape_checker_round_trip() {
        let f5 = fp(5);
        let eq = DP1Equation::from_ints(&f5, [&[1, 2], &[0, 3, 1], &[4, 0, 0, 1], &[1, 1, 1, 1, 1], &[0, 1, 0, 0, 0, 4, 0]]).unwrap();
        assert_eq!(DP1Equation::from_poly(&eq.to_poly()).unwrap(), eq);
        assert!(DP1Equation::parse("y^2 - x^3 + x*y", &f5).is_err());
        assert!(DP1Equation::parse("2*y^2 - x^3", &f5).is_err());
        assert!(DP1Equation::parse("y^2 - x^3 + s*y", &f5).is_err());
        assert!(DP1Equation::parse("y^2 + x^3", &f5).is_err());
        let rec = eq.to_record();
        assert_eq!(DP1Equation::from_record(&rec).unwrap(), eq);
    }

    #[test]
    fn coefficient_file() {
        let f5 = fp(5);
        let eq = DP1Equation::parse_coefficients("# normal form\na6: 0 1 0 0 0 -1 0\n\na4: 0 0 0 0 0\n", &f5).unwrap();
        assert_eq!(eq, DP1Equation::parse("y^2 - (x^3 + s^5*t - s*t^5)", &f5).unwrap());
        assert!(DP1Equation::parse_coefficients("a5: 1", &f5).is_err());
        assert!(DP1Equation::parse_coefficients("a1: 1 2 3", &f5).is_err());
        let err = DP1Equation::parse_coefficients("a2: 0 0 0\na1: 1 $\n", &f5).unwrap_err();
        assert!(matches!(err, Dp1Error::Field(FieldError::Parse { offset: 16, .. })), "{err:?}");
    }

    #[test]
    fn completion_matches_substitution() {
        let f5 = fp(5);
        let eq = DP1Equation::from_ints(&f5, [&[1, 0], &[2, 0, 1], &[0, 3, 0, 1], &[0, 1, 0, 0, 2], &[1, 0, 0, 0, 0, 0, 1]]).unwrap();
        let n = complete_square_cube(&eq);
        assert!(n.a1().is_zero() && n.a2().is_zero() && n.a3().is_zero());
        // y -> y - (a1 x + a3)/2, then x -> x - a2'/3 with a2' from the first step
        let f = eq.to_poly();
        let a = Alphabet::dp1();
        let var = |i| MultiPoly::var(&f5, &a, i);
        let half = f5.inv(f5.from_i64(2)).unwrap();
        let h = eq.a1().to_poly().mul(&var(X)).unwrap().add(&eq.a3().to_poly()).unwrap().scale(half);
        let g = f.substitute(&[None, None, None, Some(var(Y).sub(&h).unwrap())], false).unwrap();
        let step = DP1Equation::from_poly(&g).unwrap();
        let third = f5.inv(f5.from_i64(3)).unwrap();
        let shift = var(X).sub(&step.a2().to_poly().scale(third)).unwrap();
        let g2 = g.substitute(&[None, None, Some(shift), None], false).unwrap();
        assert_eq!(DP1Equation::from_poly(&g2).unwrap(), n);

        let f3 = fp(3);
        let eq = DP1Equation::from_ints(&f3, [&[1, 1], &[0, 1, 0], &[1, 0, 0, 1], &[], &[0, 0, 1, 0, 0, 0, 0]]).unwrap();
        let n = complete_square_cube(&eq);
        assert!(n.a1().is_zero() && n.a3().is_zero() && !n.a2().is_zero());

        let f2 = fp(2);
        let eq = DP1Equation::from_ints(&f2, [&[1, 1], &[0, 1, 0], &[1, 0, 0, 1], &[], &[]]).unwrap();
        assert_eq!(complete_square_cube(&eq), eq);
    }

    #[test]
    fn discriminant_examples() {
        let f5 = fp(5);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^5*t - s*t^5)", &f5).unwrap();
        let d = discriminant(&eq, DiscriminantPath::Paper).unwrap();
        assert_eq!(d, eq.a6().mul(eq.a6()).scale_int(3));
        assert_eq!(discriminant(&eq, DiscriminantPath::Formulaire).unwrap(), d);

        let f2 = fp(2);
        let eq = DP1Equation::parse("y^2 + s^2*t*y - x^3", &f2).unwrap();
        let d = discriminant(&eq, DiscriminantPath::Paper).unwrap();
        assert_eq!(d.to_string(), "s^8*t^4");

        let f3 = fp(3);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^4*x + s^5*t + t^6)", &f3).unwrap();
        let d = discriminant(&eq, DiscriminantPath::Paper).unwrap();
        assert_eq!(d, BinaryForm::monomial(&f3, 12, 0, f3.from_i64(-1)));

        let bad = DP1Equation::parse("y^2 + s*x*y - x^3", &f5).unwrap();
        assert!(matches!(discriminant(&bad, DiscriminantPath::Paper), Err(Dp1Error::NotNormalized { .. })));
        let f7 = fp(7);
        assert!(matches!(
            discriminant(&DP1Equation::zero(&f7), DiscriminantPath::Paper),
            Err(Dp1Error::UnsupportedCharacteristic(7))
        ));
    }

    #[test]
    fn j_examples() {
        let f3 = fp(3);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^4*x + s^6)", &f3).unwrap();
        assert!(j_invariant(&eq).unwrap().j_is_zero());

        let f2 = fp(2);
        let eq = DP1Equation::parse("y^2 + t^3*y - x^3", &f2).unwrap();
        let j = j_invariant(&eq).unwrap();
        assert!(j.j_is_zero());
        assert_eq!(j.discriminant, eq.a3().pow(4));

        let f5 = fp(5);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^4*x)", &f5).unwrap();
        let j = j_invariant(&eq).unwrap();
        assert_eq!(j.numerator, BinaryForm::monomial(&f5, 12, 0, f5.from_i64(3)));
        assert_eq!(j.discriminant, BinaryForm::monomial(&f5, 12, 0, f5.one()));
        assert!(!j.j_is_zero());
        assert_eq!(j.numerator, c4(&eq).pow(3));
    }

    #[test]
    fn fibers() {
        let f5 = fp(5);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^6 + t^6)", &f5).unwrap();
        let id = Embedding::new(&f5, &f5).unwrap();
        let fb = fiber_at(&eq, &id, PointP1::Finite(f5.zero()));
        assert_eq!(fb.a, [f5.zero(), f5.zero(), f5.zero(), f5.zero(), f5.one()]);

        let f2 = fp(2);
        let eq = DP1Equation::parse("y^2 + s*x*y - x^3", &f2).unwrap();
        let id = Embedding::new(&f2, &f2).unwrap();
        assert_eq!(fiber_at(&eq, &id, PointP1::Finite(f2.one())).a[0], f2.one());
        // a root of the discriminant gives a singular fiber
        let fb = fiber_at(&eq, &id, PointP1::Finite(f2.zero()));
        assert!(!fb.is_smooth());
        assert!(fb.singular_point().is_some());
    }

    #[test]
    fn point_counts() {
        let f5 = fp(5);
        let z = f5.zero();
        let fb = WeierstrassFiber::new(&f5, [z, z, z, z, f5.one()]);
        assert_eq!(count_points(&fb).unwrap(), 6);
        assert!(is_supersingular(&fb).unwrap());
        let fb = WeierstrassFiber::new(&f5, [z, z, z, f5.one(), z]);
        assert_eq!(count_points(&fb).unwrap(), 4);
        assert!(!is_supersingular(&fb).unwrap());

        for n in [1, 2] {
            let k = make_field(2, n).unwrap();
            let z = k.zero();
            let fb = WeierstrassFiber::new(&k, [z, z, k.one(), z, z]);
            assert!(is_supersingular(&fb).unwrap());
        }
        let cusp = WeierstrassFiber::new(&f5, [z; 5]);
        assert_eq!(is_supersingular(&cusp), Err(Dp1Error::SingularFiber));
    }

    #[test]
    fn smoothness_examples() {
        let f5 = fp(5);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^5*t - s*t^5)", &f5).unwrap();
        let r = smoothness(&eq, DEFAULT_SEARCH_BOUND);
        assert_eq!((r.verdict, r.method), (SmoothVerdict::Smooth, SmoothMethod::Exact));

        let eq = DP1Equation::parse("y^2 - (x^3 + s^6)", &f5).unwrap();
        let r = smoothness(&eq, DEFAULT_SEARCH_BOUND);
        assert_eq!((r.verdict, r.method), (SmoothVerdict::Singular, SmoothMethod::Exact));
        assert_eq!(r.witnesses.len(), 1);
        assert!(r.witnesses[0].field.is_prime_field());
        let w = &r.witnesses[0];
        assert!(eq.to_poly().eval(&w.coords).is_zero());

        let f2 = fp(2);
        let eq = DP1Equation::parse("y^2 - (x^3 + s^6 + s*t^5)", &f2).unwrap();
        let r = smoothness(&eq, DEFAULT_SEARCH_BOUND);
        assert_eq!((r.verdict, r.method), (SmoothVerdict::Singular, SmoothMethod::PointSearch));
        assert!(!r.covered);

        // a1 = 0, a3 = t^3: discriminant t^12, only [1:0] to check
        let eq = DP1Equation::parse("y^2 + t^3*y - x^3 - s^5*t", &f2).unwrap();
        let r = smoothness(&eq, DEFAULT_SEARCH_BOUND);
        assert_eq!(r.verdict, SmoothVerdict::Undetermined);
        assert!(r.covered && r.smooth_evidence());
    }

    #[test]
    fn all_zero_forms_are_singular_in_each_characteristic() {
        for p in [2, 3, 5] {
            let r = smoothness(&DP1Equation::zero(&fp(p)), DEFAULT_SEARCH_BOUND);
            assert_eq!(r.verdict, SmoothVerdict::Singular, "p = {p}");
        }
    }
}
