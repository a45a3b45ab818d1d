//! Prime fields `F_p` and extension fields `F_{p^n}`.
//!
//! An extension field is `F_p[u]/(m(u))` where `m` is the lexicographically
//! smallest monic irreducible of degree `n`, ordering coefficient tuples
//! `(c_{n-1}, ..., c_0)` with representatives `0..p-1`. Fields are cached, so
//! repeated calls to [`make_field`] hand back the same descriptor.
//!
//! Elements are plain [`FieldElem`] values; all arithmetic goes through the
//! [`Field`] they belong to.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::expr::{self, Expr, ExprKind};
use crate::upoly::UPoly;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 12;
/// Characteristics must be primes below this bound.
pub const PRIME_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 65536")]
    NotPrime(u64),
    #[error("extension degree {0} outside 1..=12")]
    DegreeOutOfRange(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("cannot embed a degree-{from} field into a degree-{to} field")]
    NotEmbeddable { from: usize, to: usize },
    #[error("byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// Serializable description of a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub n: usize,
    /// Coefficients `c_0, ..., c_{n-1}, 1` of the monic modulus; absent for prime fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldDesc {
    pub fn order(&self) -> u128 {
        (self.p as u128).saturating_pow(self.n as u32)
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.n)
        }
    }
}

/// An element of `F_{p^n}`, stored as the coefficient vector of its reduced
/// representative in `u`. Coefficients past the field degree are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElem([u16; MAX_DEGREE]);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem([0; MAX_DEGREE]);

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Coefficient of `u^i`.
    pub fn coeff(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    /// True when the element lies in the prime subfield.
    pub fn is_prime_field_elem(&self) -> bool {
        self.0[1..].iter().all(|&c| c == 0)
    }
}

/// Lexicographic on `(c_{n-1}, ..., c_0)`, i.e. by the base-`p` index.
impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..MAX_DEGREE).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

/// Renders as a polynomial in `u`, highest power first: `2*u + 1`.
impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..MAX_DEGREE).rev() {
            let c = self.0[i];
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("u")?,
                (1, c) => write!(f, "{c}*u")?,
                (i, 1) => write!(f, "u^{i}")?,
                (i, c) => write!(f, "{c}*u^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

struct FieldInner {
    desc: FieldDesc,
    p: u32,
    n: usize,
    /// Low coefficients of the monic modulus.
    modulus: [u32; MAX_DEGREE],
    /// `frob[i] = (u^i)^p` reduced.
    frob: Vec<FieldElem>,
}

/// Handle to a finite field. Cheap to clone; compared by `(p, n, modulus)`.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.desc.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.desc)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.desc.fmt(f)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn field_cache() -> &'static Mutex<HashMap<(u32, usize), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the cache) the field `F_{p^n}`.
pub fn make_field(p: u64, n: usize) -> Result<Field, FieldError> {
    if p >= PRIME_BOUND || !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if n == 0 || n > MAX_DEGREE {
        return Err(FieldError::DegreeOutOfRange(n));
    }
    let p = p as u32;
    if let Some(f) = field_cache().lock().unwrap().get(&(p, n)) {
        return Ok(f.clone());
    }
    let field = if n == 1 {
        Field::build(p, 1, vec![])
    } else {
        let modulus = smallest_irreducible(p, n);
        Field::build(p, n, modulus)
    };
    let mut cache = field_cache().lock().unwrap();
    Ok(cache.entry((p, n)).or_insert(field).clone())
}

/// Builds a field from a serialized descriptor, checking it against the
/// canonical construction.
pub fn field_from_desc(desc: &FieldDesc) -> Result<Field, FieldError> {
    let f = make_field(desc.p as u64, desc.n)?;
    if f.desc() != desc {
        return Err(FieldError::FieldMismatch(format!(
            "descriptor modulus {:?} is not the canonical one {:?}",
            desc.modulus,
            f.desc().modulus
        )));
    }
    Ok(f)
}

/// First monic irreducible of degree `n` over `F_p` in lexicographic order;
/// returns the low coefficients `c_0..c_{n-1}`.
fn smallest_irreducible(p: u32, n: usize) -> Vec<u32> {
    let base = make_field(p as u64, 1).expect("prime field");
    let total = (p as u128).saturating_pow(n as u32);
    for idx in 0..total {
        let mut low = Vec::with_capacity(n);
        let mut rest = idx;
        for _ in 0..n {
            low.push((rest % p as u128) as u32);
            rest /= p as u128;
        }
        if low[0] == 0 {
            continue;
        }
        let mut coeffs: Vec<FieldElem> = low.iter().map(|&c| base.from_u64(c as u64)).collect();
        coeffs.push(base.one());
        let poly = UPoly::new(&base, coeffs);
        if poly.is_irreducible() {
            return low;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn build(p: u32, n: usize, low: Vec<u32>) -> Field {
        let mut modulus = [0u32; MAX_DEGREE];
        modulus[..low.len()].copy_from_slice(&low);
        let desc = FieldDesc {
            p,
            n,
            modulus: if n == 1 {
                None
            } else {
                let mut m = low.clone();
                m.push(1);
                Some(m)
            },
        };
        let tmp = Field(Arc::new(FieldInner { desc, p, n, modulus, frob: Vec::new() }));
        if n == 1 {
            return tmp;
        }
        let frob = (0..n)
            .map(|i| {
                let mut e = FieldElem::ZERO;
                e.0[i] = 1;
                tmp.pow(e, p as u128)
            })
            .collect();
        let mut inner = Arc::try_unwrap(tmp.0).ok().expect("fresh field handle");
        inner.frob = frob;
        Field(Arc::new(inner))
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.0.desc
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    /// Number of elements `p^n`.
    pub fn order(&self) -> u128 {
        self.0.desc.order()
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.n == 1
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> FieldElem {
        let mut e = FieldElem::ZERO;
        e.0[0] = (v % self.0.p as u64) as u16;
        e
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        let p = self.0.p as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    /// The class of `u`; for a prime field this is an error.
    pub fn generator(&self) -> Result<FieldElem, FieldError> {
        if self.0.n == 1 {
            return Err(FieldError::FieldMismatch(format!("{self} has no generator u")));
        }
        let mut e = FieldElem::ZERO;
        e.0[1] = 1;
        Ok(e)
    }

    /// Builds an element from coefficients `c_0, c_1, ...` of `u^i`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, FieldError> {
        if coeffs.len() > self.0.n && coeffs[self.0.n..].iter().any(|&c| c != 0) {
            return Err(FieldError::FieldMismatch(format!(
                "{} coefficients given for {}",
                coeffs.len(),
                self
            )));
        }
        let mut e = FieldElem::ZERO;
        for (i, &c) in coeffs.iter().take(self.0.n).enumerate() {
            if c >= self.0.p {
                return Err(FieldError::FieldMismatch(format!("coefficient {c} not reduced mod {}", self.0.p)));
            }
            e.0[i] = c as u16;
        }
        Ok(e)
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        (0..self.0.n).map(|i| a.coeff(i)).collect()
    }

    /// Checks that `a` is a reduced representative of this field.
    pub fn check(&self, a: FieldElem) -> Result<(), FieldError> {
        let ok = a.0.iter().enumerate().all(|(i, &c)| {
            if i < self.0.n {
                (c as u32) < self.0.p
            } else {
                c == 0
            }
        });
        if ok {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(format!("{a} is not an element of {self}")))
        }
    }

    /// The element whose base-`p` digits are `idx` (least significant is `c_0`).
    pub fn elem_from_index(&self, mut idx: u64) -> FieldElem {
        let p = self.0.p as u64;
        let mut e = FieldElem::ZERO;
        for i in 0..self.0.n {
            e.0[i] = (idx % p) as u16;
            idx /= p;
        }
        e
    }

    pub fn index_of(&self, a: FieldElem) -> u128 {
        let mut idx = 0u128;
        for i in (0..self.0.n).rev() {
            idx = idx * self.0.p as u128 + a.0[i] as u128;
        }
        idx
    }

    /// All elements in index order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let q = u64::try_from(self.order()).expect("field too large to enumerate");
        (0..q).map(move |i| self.elem_from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let mut e = FieldElem::ZERO;
        for i in 0..self.0.n {
            e.0[i] = rng.random_range(0..self.0.p) as u16;
        }
        e
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.p;
        if self.0.n == 1 {
            let s = a.0[0] as u32 + b.0[0] as u32;
            let mut e = FieldElem::ZERO;
            e.0[0] = if s >= p { s - p } else { s } as u16;
            return e;
        }
        let mut e = FieldElem::ZERO;
        for i in 0..self.0.n {
            let s = a.0[i] as u32 + b.0[i] as u32;
            e.0[i] = if s >= p { s - p } else { s } as u16;
        }
        e
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.0.p;
        let mut e = FieldElem::ZERO;
        for i in 0..self.0.n {
            let c = a.0[i] as u32;
            e.0[i] = if c == 0 { 0 } else { (p - c) as u16 };
        }
        e
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.p as u64;
        let n = self.0.n;
        if n == 1 {
            let mut e = FieldElem::ZERO;
            e.0[0] = ((a.0[0] as u64 * b.0[0] as u64) % p) as u16;
            return e;
        }
        let mut acc = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..n {
            let ai = a.0[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                acc[i + j] += ai * b.0[j] as u64;
            }
        }
        // u^n = -(c_0 + ... + c_{n-1} u^{n-1})
        for k in (n..2 * n - 1).rev() {
            let c = acc[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let m = self.0.modulus[i] as u64;
                if m != 0 {
                    acc[k - n + i] += (p - m) * c;
                }
            }
        }
        let mut e = FieldElem::ZERO;
        for i in 0..n {
            e.0[i] = (acc[i] % p) as u16;
        }
        e
    }

    /// Multiplication by an integer.
    pub fn mul_int(&self, a: FieldElem, k: i64) -> FieldElem {
        self.mul(a, self.from_i64(k))
    }

    pub fn pow(&self, a: FieldElem, mut e: u128) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        if self.0.n == 1 {
            return a;
        }
        let p = self.0.p as u64;
        let mut acc = [0u64; MAX_DEGREE];
        for i in 0..self.0.n {
            let c = a.0[i] as u64;
            if c == 0 {
                continue;
            }
            let img = &self.0.frob[i];
            for j in 0..self.0.n {
                acc[j] += c * img.0[j] as u64;
            }
        }
        let mut e = FieldElem::ZERO;
        for j in 0..self.0.n {
            e.0[j] = (acc[j] % p) as u16;
        }
        e
    }

    /// `a^(p^k)`.
    pub fn frobenius_pow(&self, mut a: FieldElem, k: usize) -> FieldElem {
        for _ in 0..k % self.0.n {
            a = self.frobenius(a);
        }
        a
    }

    /// The unique `p`-th root, `a^(p^(n-1))`.
    pub fn pth_root(&self, a: FieldElem) -> FieldElem {
        self.frobenius_pow(a, self.0.n - 1)
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        if self.0.n == 1 {
            return Some(self.from_u64(inv_mod(a.0[0] as u64, self.0.p as u64)));
        }
        // a^(r-1) with r = 1 + p + ... + p^(n-1); a^r is the norm, which lies in F_p.
        let mut conj = a;
        let mut partial = self.one();
        for _ in 1..self.0.n {
            conj = self.frobenius(conj);
            partial = self.mul(partial, conj);
        }
        let norm = self.mul(partial, a);
        debug_assert!(norm.is_prime_field_elem());
        let norm_inv = self.from_u64(inv_mod(norm.0[0] as u64, self.0.p as u64));
        Some(self.mul(partial, norm_inv))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        let binv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, binv))
    }

    /// Checked arithmetic on externally supplied elements.
    pub fn arith(&self, a: FieldElem, b: FieldElem, op: ArithOp) -> Result<FieldElem, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }

    pub fn format_elem(&self, a: FieldElem) -> String {
        a.to_string()
    }

    /// Parses the `u`-polynomial rendering (any expression in integers and `u`).
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem, FieldError> {
        let ast = expr::parse(text).map_err(|e| FieldError::Parse { offset: e.offset, message: e.message })?;
        self.eval_expr(&ast)
    }

    pub(crate) fn eval_expr(&self, e: &Expr) -> Result<FieldElem, FieldError> {
        Ok(match &e.kind {
            ExprKind::Int(v) => self.from_u64((*v % self.0.p as u128) as u64),
            ExprKind::Var(name) if name == "u" => self.generator().map_err(|_| FieldError::Parse {
                offset: e.offset,
                message: format!("`u` is not available in the prime field {self}"),
            })?,
            ExprKind::Var(name) => {
                return Err(FieldError::Parse { offset: e.offset, message: format!("unknown symbol `{name}`") })
            }
            ExprKind::Neg(a) => self.neg(self.eval_expr(a)?),
            ExprKind::Add(a, b) => self.add(self.eval_expr(a)?, self.eval_expr(b)?),
            ExprKind::Sub(a, b) => self.sub(self.eval_expr(a)?, self.eval_expr(b)?),
            ExprKind::Mul(a, b) => self.mul(self.eval_expr(a)?, self.eval_expr(b)?),
            ExprKind::Pow(a, k) => self.pow(self.eval_expr(a)?, *k as u128),
        })
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u64
}

struct EmbeddingInner {
    source: Field,
    target: Field,
    /// Images of `u^i` for `i < source degree`.
    powers: Vec<FieldElem>,
}

/// Field homomorphism `F_{p^m} -> F_{p^n}` sending `u` to the smallest root of
/// the source modulus in the target.
#[derive(Clone)]
pub struct Embedding(Arc<EmbeddingInner>);

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({} -> {})", self.0.source, self.0.target)
    }
}

/// Keyed by `(p, source degree, target degree)`.
type EmbeddingCache = Mutex<HashMap<(u32, usize, usize), Embedding>>;

fn embedding_cache() -> &'static EmbeddingCache {
    static CACHE: OnceLock<EmbeddingCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Embedding, FieldError> {
        if source.characteristic() != target.characteristic() {
            return Err(FieldError::FieldMismatch(format!("{source} and {target} have different characteristic")));
        }
        let (m, n) = (source.degree(), target.degree());
        if n % m != 0 {
            return Err(FieldError::NotEmbeddable { from: m, to: n });
        }
        let key = (source.characteristic(), m, n);
        if let Some(e) = embedding_cache().lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let gen_image = if m == 1 {
            target.one()
        } else {
            let modulus = source.desc().modulus.as_ref().expect("extension modulus");
            let coeffs = modulus.iter().map(|&c| target.from_u64(c as u64)).collect();
            let roots = UPoly::new(target, coeffs).roots();
            *roots.iter().min().expect("modulus splits in the target")
        };
        let mut powers = Vec::with_capacity(m);
        let mut acc = target.one();
        for _ in 0..m {
            powers.push(acc);
            acc = target.mul(acc, gen_image);
        }
        let emb = Embedding(Arc::new(EmbeddingInner { source: source.clone(), target: target.clone(), powers }));
        embedding_cache().lock().unwrap().insert(key, emb.clone());
        Ok(emb)
    }

    pub fn source(&self) -> &Field {
        &self.0.source
    }

    pub fn target(&self) -> &Field {
        &self.0.target
    }

    /// Image of the source generator `u`.
    pub fn generator_image(&self) -> FieldElem {
        if self.0.source.degree() == 1 {
            self.0.target.one()
        } else {
            self.0.powers[1]
        }
    }

    /// The embedding followed by `k` applications of Frobenius on the target.
    pub fn twisted(&self, k: usize) -> Embedding {
        let t = &self.0.target;
        let powers = self.0.powers.iter().map(|&a| t.frobenius_pow(a, k)).collect();
        Embedding(Arc::new(EmbeddingInner { source: self.0.source.clone(), target: t.clone(), powers }))
    }

    pub fn apply(&self, a: FieldElem) -> FieldElem {
        let t = &self.0.target;
        if self.0.source.degree() == 1 {
            return t.from_u64(a.coeff(0) as u64);
        }
        let mut acc = t.zero();
        for (i, &pw) in self.0.powers.iter().enumerate() {
            let c = a.coeff(i);
            if c != 0 {
                acc = t.add(acc, t.mul(t.from_u64(c as u64), pw));
            }
        }
        acc
    }
}

/// Embeds `a` from `source` into `target`.
pub fn embed(a: FieldElem, source: &Field, target: &Field) -> Result<FieldElem, FieldError> {
    source.check(a)?;
    Ok(Embedding::new(source, target)?.apply(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force irreducibility: a monic polynomial of degree 2 or 3 is
    /// irreducible iff it has no root in F_p.
    fn has_root(p: u64, coeffs: &[u64]) -> bool {
        (0..p).any(|x| {
            let mut v = 0;
            for &c in coeffs.iter().rev() {
                v = (v * x + c) % p;
            }
            v == 0
        })
    }

    #[test]
    fn prime_field_has_no_modulus() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.desc(), &FieldDesc { p: 5, n: 1, modulus: None });
    }

    #[test]
    fn quadratic_moduli_are_lexicographic_minima() {
        for p in [2u64, 3, 5, 7] {
            // scan (c1, c0) in lexicographic order, keep the first root-free one
            let mut expected = None;
            'scan: for c1 in 0..p {
                for c0 in 0..p {
                    if !has_root(p, &[c0, c1, 1]) {
                        expected = Some(vec![c0 as u32, c1 as u32, 1]);
                        break 'scan;
                    }
                }
            }
            assert_eq!(make_field(p, 2).unwrap().desc().modulus, expected, "p = {p}");
        }
        assert_eq!(make_field(3, 2).unwrap().desc().modulus, Some(vec![1, 0, 1]));
        assert_eq!(make_field(2, 2).unwrap().desc().modulus, Some(vec![1, 1, 1]));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), FieldError::NotPrime(1));
        assert_eq!(make_field(65537, 1).unwrap_err(), FieldError::NotPrime(65537));
        assert_eq!(make_field(5, 0).unwrap_err(), FieldError::DegreeOutOfRange(0));
        assert_eq!(make_field(5, 13).unwrap_err(), FieldError::DegreeOutOfRange(13));
    }

    #[test]
    fn small_arithmetic() {
        let f5 = make_field(5, 1).unwrap();
        let e = |v| f5.from_u64(v);
        assert_eq!(f5.arith(e(2), e(4), ArithOp::Mul).unwrap(), e(3));
        assert_eq!(f5.arith(e(1), e(2), ArithOp::Div).unwrap(), e(3));
        assert_eq!(f5.arith(e(1), e(0), ArithOp::Div).unwrap_err(), FieldError::DivisionByZero);
        let f9 = make_field(3, 2).unwrap();
        let u = f9.generator().unwrap();
        assert_eq!(f9.mul(u, u), f9.from_u64(2));
        let bogus = FieldElem([7; MAX_DEGREE]);
        assert!(matches!(f9.arith(bogus, u, ArithOp::Add), Err(FieldError::FieldMismatch(_))));
    }

    #[test]
    fn frobenius_examples() {
        let f9 = make_field(3, 2).unwrap();
        let u = f9.generator().unwrap();
        assert_eq!(f9.frobenius(u), f9.mul_int(u, 2));
        for a in f9.elements() {
            assert_eq!(f9.frobenius(f9.frobenius(a)), a);
        }
        let f7 = make_field(7, 1).unwrap();
        for a in f7.elements() {
            assert_eq!(f7.frobenius(a), a);
            assert_eq!(f7.pow(a, 7), a);
        }
    }

    #[test]
    fn group_and_freshman_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, n) in [(2, 5), (3, 4), (5, 2), (5, 6), (2, 12), (7, 3), (65521, 2)] {
            let f = make_field(p, n).unwrap();
            // q - 2 can overflow u128 only for p^n beyond our test set
            let q = f.order();
            for _ in 0..50 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                assert_eq!(f.frobenius(a), f.pow(a, p as u128));
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.pow(a, q - 2)), f.one());
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.frobenius_pow(a, n), a);
            }
        }
    }

    #[test]
    fn make_field_is_pure() {
        let a = make_field(5, 3).unwrap();
        let b = make_field(5, 3).unwrap();
        assert_eq!(
            serde_json::to_string(a.desc()).unwrap(),
            serde_json::to_string(b.desc()).unwrap()
        );
        assert_eq!(field_from_desc(a.desc()).unwrap(), a);
    }

    #[test]
    fn embedding_examples() {
        let f3 = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        let f27 = make_field(3, 3).unwrap();
        assert_eq!(embed(f3.from_u64(2), &f3, &f9).unwrap(), f9.from_u64(2));
        let u = f9.generator().unwrap();
        assert_eq!(
            embed(u, &f9, &f27).unwrap_err(),
            FieldError::NotEmbeddable { from: 2, to: 3 }
        );
    }

    #[test]
    fn embeddings_are_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, m, n) in [(2, 2, 4), (3, 2, 6), (5, 2, 4), (5, 3, 6), (2, 4, 12), (5, 1, 3)] {
            let src = make_field(p, m).unwrap();
            let dst = make_field(p, n).unwrap();
            let emb = Embedding::new(&src, &dst).unwrap();
            for _ in 0..30 {
                let a = src.random(&mut rng);
                let b = src.random(&mut rng);
                assert_eq!(emb.apply(src.add(a, b)), dst.add(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(src.mul(a, b)), dst.mul(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(src.frobenius(a)), dst.frobenius(emb.apply(a)));
                if !a.is_zero() {
                    assert!(!emb.apply(a).is_zero());
                }
            }
            for c in 0..p {
                assert_eq!(emb.apply(src.from_u64(c)), dst.from_u64(c));
            }
        }
    }

    #[test]
    fn rendering_round_trips() {
        let f = make_field(5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = f.generator().unwrap();
        assert_eq!(f.format_elem(f.add(f.mul_int(u, 2), f.one())), "2*u + 1");
        for _ in 0..100 {
            let a = f.random(&mut rng);
            assert_eq!(f.parse_elem(&f.format_elem(a)).unwrap(), a);
        }
        assert_eq!(f.parse_elem("u^3").unwrap(), f.pow(u, 3));
        let f5 = make_field(5, 1).unwrap();
        assert!(matches!(f5.parse_elem("u + 1"), Err(FieldError::Parse { offset: 0, .. })));
    }

    #[test]
    fn element_order_matches_index() {
        let f = make_field(3, 2).unwrap();
        let elems: Vec<_> = f.elements().collect();
        let mut sorted = elems.clone();
        sorted.sort();
        assert_eq!(elems, sorted);
    }
}
