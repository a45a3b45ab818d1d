//! Sparse multivariate polynomials over a finite field with a weighted grading.
//!
//! The default alphabet is `s, t, x, y` with weights `1, 1, 2, 3`, the
//! coordinates of `P(1,1,2,3)`. A flat alphabet of up to eight names (all of
//! weight 1) is available for generic inputs.
//!
//! Terms are kept sorted in graded lexicographic order: first by weighted
//! degree, then lexicographically with the last variable most significant
//! (`s < t < x < y`). Printing lists terms in ascending order.

mod binary;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::expr::{self, Expr, ExprKind};
use crate::fields::{Embedding, Field, FieldElem};

pub use binary::BinaryForm;

pub const MAX_VARS: usize = 8;

pub const S: usize = 0;
pub const T: usize = 1;
pub const X: usize = 2;
pub const Y: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomials over different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("polynomials over different variable alphabets")]
    AlphabetMismatch,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("bad coefficient at byte {offset}: {message}")]
    Coefficient { offset: usize, message: String },
    #[error("image of `{var}` is not homogeneous of weight {weight}")]
    Grading { var: String, weight: u32 },
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("not a binary form of degree {degree}: {reason}")]
    NotBinaryForm { degree: usize, reason: String },
}

/// Variable names and their weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl Alphabet {
    /// `s, t, x, y` with weights `1, 1, 2, 3`.
    pub fn dp1() -> Arc<Alphabet> {
        static DP1: OnceLock<Arc<Alphabet>> = OnceLock::new();
        DP1.get_or_init(|| {
            Arc::new(Alphabet {
                names: ["s", "t", "x", "y"].iter().map(|s| s.to_string()).collect(),
                weights: vec![1, 1, 2, 3],
            })
        })
        .clone()
    }

    /// Up to eight variables of weight 1, in increasing order.
    pub fn flat<S: AsRef<str>>(names: &[S]) -> Result<Arc<Alphabet>, PolyError> {
        Self::weighted(names, &vec![1; names.len()])
    }

    pub fn weighted<S: AsRef<str>>(names: &[S], weights: &[u32]) -> Result<Arc<Alphabet>, PolyError> {
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(PolyError::Alphabet(format!("need 1..={MAX_VARS} variables, got {}", names.len())));
        }
        if names.len() != weights.len() {
            return Err(PolyError::Alphabet("one weight per variable".into()));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(PolyError::Alphabet(format!("`{n}` is not an identifier")));
            }
            if n == "u" {
                return Err(PolyError::Alphabet("`u` is reserved for the field generator".into()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::Alphabet(format!("duplicate variable `{n}`")));
            }
        }
        if weights.contains(&0) {
            return Err(PolyError::Alphabet("weights must be positive".into()));
        }
        Ok(Arc::new(Alphabet { names, weights: weights.to_vec() }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, var: usize) -> u32 {
        self.weights[var]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_dp1(&self) -> bool {
        *self == *Alphabet::dp1()
    }
}

/// Exponent vector; entries past the alphabet length are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug, PartialOrd, Ord)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn new(exps: &[u16]) -> Monomial {
        let mut m = Monomial::ONE;
        m.0[..exps.len()].copy_from_slice(exps);
        m
    }

    /// `s^a t^b x^c y^d`.
    pub fn stxy(a: u16, b: u16, c: u16, d: u16) -> Monomial {
        Monomial::new(&[a, b, c, d])
    }

    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.0
    }

    pub fn weighted_degree(&self, alphabet: &Alphabet) -> u32 {
        (0..alphabet.len()).map(|i| self.0[i] as u32 * alphabet.weight(i)).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = Monomial::ONE;
        for i in 0..MAX_VARS {
            m.0[i] = self.0[i].checked_add(other.0[i])?;
        }
        Some(m)
    }

    /// Lexicographic key with the last variable most significant.
    #[inline]
    fn lex_key(&self) -> u128 {
        let mut k = 0u128;
        for i in (0..MAX_VARS).rev() {
            k = (k << 16) | self.0[i] as u128;
        }
        k
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    alphabet: Arc<Alphabet>,
    /// Sorted ascending in graded lex order; no zero coefficients.
    terms: Vec<(Monomial, FieldElem)>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.field, self)
    }
}

fn order_key(alphabet: &Alphabet, m: &Monomial) -> (u32, u128) {
    (m.weighted_degree(alphabet), m.lex_key())
}

impl MultiPoly {
    pub fn zero(field: &Field, alphabet: &Arc<Alphabet>) -> MultiPoly {
        MultiPoly { field: field.clone(), alphabet: alphabet.clone(), terms: Vec::new() }
    }

    pub fn constant(field: &Field, alphabet: &Arc<Alphabet>, c: FieldElem) -> MultiPoly {
        Self::monomial(field, alphabet, Monomial::ONE, c)
    }

    pub fn one(field: &Field, alphabet: &Arc<Alphabet>) -> MultiPoly {
        Self::constant(field, alphabet, field.one())
    }

    pub fn monomial(field: &Field, alphabet: &Arc<Alphabet>, m: Monomial, c: FieldElem) -> MultiPoly {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MultiPoly { field: field.clone(), alphabet: alphabet.clone(), terms }
    }

    pub fn var(field: &Field, alphabet: &Arc<Alphabet>, var: usize) -> MultiPoly {
        let mut m = Monomial::ONE;
        m.0[var] = 1;
        Self::monomial(field, alphabet, m, field.one())
    }

    /// Collects terms in any order, summing duplicates.
    pub fn from_terms(
        field: &Field,
        alphabet: &Arc<Alphabet>,
        terms: impl IntoIterator<Item = (Monomial, FieldElem)>,
    ) -> MultiPoly {
        let mut scratch: Vec<((u32, u128), Monomial, FieldElem)> =
            terms.into_iter().map(|(m, c)| (order_key(alphabet, &m), m, c)).collect();
        MultiPoly { field: field.clone(), alphabet: alphabet.clone(), terms: merge_scratch(field, &mut scratch) }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> &[(Monomial, FieldElem)] {
        &self.terms
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

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        let key = order_key(&self.alphabet, m);
        match self.terms.binary_search_by(|(t, _)| order_key(&self.alphabet, t).cmp(&key)) {
            Ok(i) => self.terms[i].1,
            Err(_) => FieldElem::ZERO,
        }
    }

    fn compatible(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.alphabet != other.alphabet {
            return Err(PolyError::AlphabetMismatch);
        }
        Ok(())
    }

    fn with_terms(&self, terms: Vec<(Monomial, FieldElem)>) -> MultiPoly {
        MultiPoly { field: self.field.clone(), alphabet: self.alphabet.clone(), terms }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(other)?;
        Ok(self.combine(other, false))
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let f = &self.field;
        let a = &self.alphabet;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: FieldElem| if negate { f.neg(c) } else { c };
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some((m1, _)), Some((m2, _))) => order_key(a, m1).cmp(&order_key(a, m2)),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (m, c) = other.terms[j];
                    out.push((m, rhs(c)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(self.terms[i].1, rhs(other.terms[j].1));
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        self.with_terms(out)
    }

    pub fn neg(&self) -> MultiPoly {
        self.with_terms(self.terms.iter().map(|&(m, c)| (m, self.field.neg(c))).collect())
    }

    pub fn scale(&self, c: FieldElem) -> MultiPoly {
        if c.is_zero() {
            return self.with_terms(Vec::new());
        }
        self.with_terms(self.terms.iter().map(|&(m, a)| (m, self.field.mul(a, c))).collect())
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(other)?;
        self.mul_unchecked(other)
    }

    /// All pairwise products go into one scratch buffer, which is then sorted
    /// and merged; no per-monomial map is maintained.
    fn mul_unchecked(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let f = &self.field;
        let a = &self.alphabet;
        let mut scratch = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.checked_mul(m2).ok_or(PolyError::ExponentOverflow)?;
                scratch.push((order_key(a, &m), m, f.mul(*c1, *c2)));
            }
        }
        Ok(self.with_terms(merge_scratch(f, &mut scratch)))
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Result<MultiPoly, PolyError> {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(&self.field, &self.alphabet);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base)?;
            }
        }
        Ok(acc)
    }

    /// Raises each coefficient to the `p`-th power and multiplies each exponent by `p`.
    pub fn termwise_frobenius(&self) -> Result<MultiPoly, PolyError> {
        let p = self.field.characteristic();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = *m;
            for x in e.0.iter_mut() {
                *x = u16::try_from(*x as u32 * p).map_err(|_| PolyError::ExponentOverflow)?;
            }
            terms.push((e, self.field.frobenius(*c)));
        }
        Ok(MultiPoly::from_terms(&self.field, &self.alphabet, terms))
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.iter().all(|(m, _)| m.weighted_degree(&self.alphabet) == degree)
    }

    /// Splits into weighted-homogeneous parts keyed by degree.
    pub fn weighted_components(&self) -> BTreeMap<u32, MultiPoly> {
        let mut parts: BTreeMap<u32, Vec<(Monomial, FieldElem)>> = BTreeMap::new();
        for &(m, c) in &self.terms {
            parts.entry(m.weighted_degree(&self.alphabet)).or_default().push((m, c));
        }
        // terms are already sorted within each degree
        parts.into_iter().map(|(d, terms)| (d, self.with_terms(terms))).collect()
    }

    /// Formal partial derivative with respect to variable index `var`.
    pub fn partial(&self, var: usize) -> MultiPoly {
        let f = &self.field;
        let terms = self.terms.iter().filter(|(m, _)| m.0[var] > 0).filter_map(|&(m, c)| {
            let c = f.mul_int(c, m.0[var] as i64);
            let mut m = m;
            m.0[var] -= 1;
            (!c.is_zero()).then_some((m, c))
        });
        MultiPoly::from_terms(f, &self.alphabet, terms.collect::<Vec<_>>())
    }

    /// Simultaneous substitution `var_i -> images[i]` (`None` keeps the variable).
    /// Unless `waive_grading`, every image must be homogeneous of its variable's weight.
    pub fn substitute(&self, images: &[Option<MultiPoly>], waive_grading: bool) -> Result<MultiPoly, PolyError> {
        let n = self.alphabet.len();
        let mut imgs = Vec::with_capacity(n);
        for i in 0..n {
            let img = match images.get(i).and_then(|o| o.as_ref()) {
                Some(img) => {
                    self.compatible(img)?;
                    let w = self.alphabet.weight(i);
                    if !waive_grading && !img.is_homogeneous(w) {
                        return Err(PolyError::Grading { var: self.alphabet.names[i].clone(), weight: w });
                    }
                    img.clone()
                }
                None => MultiPoly::var(&self.field, &self.alphabet, i),
            };
            imgs.push(img);
        }
        let mut power_cache: Vec<Vec<MultiPoly>> =
            imgs.iter().map(|img| vec![MultiPoly::one(&self.field, &self.alphabet), img.clone()]).collect();
        let mut acc = MultiPoly::zero(&self.field, &self.alphabet);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(&self.field, &self.alphabet, *c);
            for (v, cache) in power_cache.iter_mut().enumerate() {
                let e = m.0[v] as usize;
                while cache.len() <= e {
                    let next = cache.last().unwrap().mul_unchecked(&imgs[v])?;
                    cache.push(next);
                }
                if e > 0 {
                    term = term.mul_unchecked(&cache[e])?;
                }
            }
            acc = acc.combine(&term, false);
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        let f = &self.field;
        let mut acc = FieldElem::ZERO;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &x) in point.iter().enumerate().take(self.alphabet.len()) {
                if m.0[i] > 0 {
                    v = f.mul(v, f.pow(x, m.0[i] as u128));
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// Evaluates at a point over an extension, mapping coefficients through `emb`.
    pub fn eval_embedded(&self, emb: &Embedding, point: &[FieldElem]) -> FieldElem {
        let f = emb.target();
        let mut acc = FieldElem::ZERO;
        for (m, c) in &self.terms {
            let mut v = emb.apply(*c);
            for (i, &x) in point.iter().enumerate().take(self.alphabet.len()) {
                if m.0[i] > 0 {
                    v = f.mul(v, f.pow(x, m.0[i] as u128));
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    pub fn format(&self) -> String {
        self.to_string()
    }
}

fn merge_scratch(field: &Field, scratch: &mut [((u32, u128), Monomial, FieldElem)]) -> Vec<(Monomial, FieldElem)> {
    scratch.sort_unstable_by_key(|a| a.0);
    let mut out: Vec<(Monomial, FieldElem)> = Vec::with_capacity(scratch.len());
    let mut i = 0;
    while i < scratch.len() {
        let (key, m, mut c) = scratch[i];
        i += 1;
        while i < scratch.len() && scratch[i].0 == key {
            c = field.add(c, scratch[i].2);
            i += 1;
        }
        if !c.is_zero() {
            out.push((m, c));
        }
    }
    out
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let vars: Vec<String> = (0..self.alphabet.len())
                .filter(|&i| m.0[i] > 0)
                .map(|i| {
                    let name = &self.alphabet.names[i];
                    if m.0[i] == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{}", m.0[i])
                    }
                })
                .collect();
            let coeff = c.to_string();
            let compound = coeff.contains(' ');
            if vars.is_empty() {
                if compound {
                    write!(f, "({coeff})")?;
                } else {
                    f.write_str(&coeff)?;
                }
            } else if *c == self.field.one() {
                f.write_str(&vars.join("*"))?;
            } else if compound {
                write!(f, "({coeff})*{}", vars.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses an expression over `field` in the given alphabet.
pub fn parse_poly(text: &str, field: &Field, alphabet: &Arc<Alphabet>) -> Result<MultiPoly, PolyError> {
    let ast = expr::parse(text).map_err(|e| PolyError::Syntax { offset: e.offset, message: e.message })?;
    eval_expr(&ast, field, alphabet)
}

/// Parses in the default `s, t, x, y` alphabet.
pub fn parse_dp1(text: &str, field: &Field) -> Result<MultiPoly, PolyError> {
    parse_poly(text, field, &Alphabet::dp1())
}

pub fn format_poly(f: &MultiPoly) -> String {
    f.to_string()
}

fn eval_expr(e: &Expr, field: &Field, alphabet: &Arc<Alphabet>) -> Result<MultiPoly, PolyError> {
    let rec = |x: &Expr| eval_expr(x, field, alphabet);
    Ok(match &e.kind {
        ExprKind::Int(v) => {
            MultiPoly::constant(field, alphabet, field.from_u64((*v % field.characteristic() as u128) as u64))
        }
        ExprKind::Var(name) => match alphabet.index_of(name) {
            Some(i) => MultiPoly::var(field, alphabet, i),
            None if name == "u" => {
                let g = field.generator().map_err(|_| PolyError::Coefficient {
                    offset: e.offset,
                    message: format!("`u` does not exist in the prime field {field}"),
                })?;
                MultiPoly::constant(field, alphabet, g)
            }
            None => return Err(PolyError::UnknownVariable { name: name.clone(), offset: e.offset }),
        },
        ExprKind::Neg(a) => rec(a)?.neg(),
        ExprKind::Add(a, b) => rec(a)?.combine(&rec(b)?, false),
        ExprKind::Sub(a, b) => rec(a)?.combine(&rec(b)?, true),
        ExprKind::Mul(a, b) => rec(a)?.mul_unchecked(&rec(b)?)?,
        ExprKind::Pow(a, k) => rec(a)?.pow(*k)?,
    })
}
