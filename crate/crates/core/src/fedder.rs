//! Fedder's criterion for hypersurfaces: `k[x_1..x_n]/(f)` is F-split iff
//! `f^(p-1)` has a monomial with every exponent at most `p - 1`, i.e. iff
//! `f^(p-1)` is not in the Frobenius power `(x_1^p, ..., x_n^p)`.
//!
//! [`is_fsplit_hypersurface`] computes the full power. [`TruncatedFedder`]
//! computes the same power in the quotient by `(x_1^p, ..., x_n^p)`, which is
//! a ring map, so the surviving monomials are identical; the census engine
//! uses it because it never materializes a term that is already in the ideal.

use serde::Serialize;

use crate::fields::{Field, FieldElem};
use crate::mpoly::{Alphabet, Monomial, MultiPoly, PolyError, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FedderError {
    #[error("Fedder's criterion needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Outcome of the criterion. When F-split, `witness` is the smallest (in term
/// order) monomial of `f^(p-1)` outside the Frobenius power, with its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FedderVerdict {
    pub f_split: bool,
    pub witness: Option<(Monomial, FieldElem)>,
}

impl FedderVerdict {
    /// The witness rendered in the given alphabet, e.g. `s*x*y`.
    pub fn witness_string(&self, field: &Field, alphabet: &std::sync::Arc<Alphabet>) -> Option<String> {
        self.witness.map(|(m, c)| MultiPoly::monomial(field, alphabet, m, c).to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub monomial: String,
    pub exponents: Vec<u16>,
}

/// Whether the monomial with exponents `exps` lies in `(x_1^p, ..., x_n^p)`.
pub fn monomial_in_frobenius_power(exps: &[u16], p: u32) -> bool {
    exps.iter().any(|&e| e as u32 >= p)
}

/// Runs the criterion by computing `f^(p-1)` in full.
pub fn is_fsplit_hypersurface(f: &MultiPoly) -> Result<FedderVerdict, FedderError> {
    if f.is_zero() {
        return Err(FedderError::ZeroPolynomial);
    }
    let p = f.field().characteristic();
    let power = f.pow(p - 1)?;
    // terms are in ascending order, so the first survivor is the smallest
    let witness = power.terms().iter().find(|(m, _)| !monomial_in_frobenius_power(m.exps(), p)).copied();
    Ok(FedderVerdict { f_split: witness.is_some(), witness })
}

/// Runs the criterion in the truncated ring.
pub fn is_fsplit_truncated(f: &MultiPoly) -> Result<FedderVerdict, FedderError> {
    if f.is_zero() {
        return Err(FedderError::ZeroPolynomial);
    }
    let mut engine = TruncatedFedder::new(f.field(), f.alphabet());
    Ok(engine.verdict(f.terms().iter().copied()))
}

/// Reusable workspace for `f^(p-1) mod (x_1^p, ..., x_n^p)`.
///
/// Monomials of the quotient are indexed by their base-`p` digits, so the
/// accumulator is a flat array of `p^n` slots. Only feasible for small
/// `p^n`; above [`TruncatedFedder::DENSE_LIMIT`] slots a sorted sparse
/// accumulator is used instead.
pub struct TruncatedFedder {
    field: Field,
    alphabet: std::sync::Arc<Alphabet>,
    p: u32,
    nvars: usize,
    dense: Option<Vec<FieldElem>>,
    touched: Vec<u32>,
    base: Vec<(Monomial, FieldElem)>,
    cur: Vec<(Monomial, FieldElem)>,
    sparse: Vec<(u128, Monomial, FieldElem)>,
}

impl TruncatedFedder {
    pub const DENSE_LIMIT: u64 = 1 << 20;

    pub fn new(field: &Field, alphabet: &std::sync::Arc<Alphabet>) -> TruncatedFedder {
        let p = field.characteristic();
        let nvars = alphabet.len();
        let slots = (p as u64).checked_pow(nvars as u32).filter(|&s| s <= Self::DENSE_LIMIT);
        TruncatedFedder {
            field: field.clone(),
            alphabet: alphabet.clone(),
            p,
            nvars,
            dense: slots.map(|s| vec![FieldElem::ZERO; s as usize]),
            touched: Vec::new(),
            base: Vec::new(),
            cur: Vec::new(),
            sparse: Vec::new(),
        }
    }

    /// Same engine with the sparse accumulator regardless of size.
    pub fn new_sparse(field: &Field, alphabet: &std::sync::Arc<Alphabet>) -> TruncatedFedder {
        let mut e = TruncatedFedder::new(field, alphabet);
        e.dense = None;
        e
    }

    fn index(&self, m: &Monomial) -> u32 {
        let mut idx = 0u32;
        for i in (0..self.nvars).rev() {
            idx = idx * self.p + m.0[i] as u32;
        }
        idx
    }

    /// Product of two monomials, unless it falls into the ideal.
    #[inline]
    fn mul_mono(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let mut m = Monomial::ONE;
        for i in 0..self.nvars {
            let e = a.0[i] as u32 + b.0[i] as u32;
            if e >= self.p {
                return None;
            }
            m.0[i] = e as u16;
        }
        Some(m)
    }

    /// Verdict for the polynomial with the given terms (duplicates allowed).
    pub fn verdict(&mut self, terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> FedderVerdict {
        let p = self.p;
        self.base.clear();
        for (m, c) in terms {
            if !c.is_zero() && !monomial_in_frobenius_power(&m.0[..self.nvars], p) && m.0[self.nvars..].iter().all(|&e| e == 0) {
                self.base.push((m, c));
            }
        }
        // merge duplicates in the reduced polynomial itself
        self.base.sort_unstable_by_key(|(m, _)| *m);
        self.base.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 = self.field.add(a.1, b.1);
                true
            } else {
                false
            }
        });
        self.base.retain(|(_, c)| !c.is_zero());

        self.cur.clear();
        self.cur.extend_from_slice(&self.base);
        for _ in 1..p - 1 {
            if self.cur.is_empty() {
                break;
            }
            self.multiply_step();
        }
        let alphabet = &self.alphabet;
        let witness = self
            .cur
            .iter()
            .min_by_key(|(m, _)| (m.weighted_degree(alphabet), lex_key(m)))
            .copied();
        FedderVerdict { f_split: witness.is_some(), witness }
    }

    /// `cur <- cur * base` in the truncated ring.
    fn multiply_step(&mut self) {
        let field = self.field.clone();
        if let Some(mut dense) = self.dense.take() {
            self.touched.clear();
            for (ma, ca) in &self.cur {
                for (mb, cb) in &self.base {
                    if let Some(m) = self.mul_mono(ma, mb) {
                        let idx = self.index(&m) as usize;
                        let slot = &mut dense[idx];
                        if slot.is_zero() {
                            self.touched.push(idx as u32);
                        }
                        *slot = field.add(*slot, field.mul(*ca, *cb));
                    }
                }
            }
            self.cur.clear();
            for &idx in &self.touched {
                let c = std::mem::take(&mut dense[idx as usize]);
                if !c.is_zero() {
                    self.cur.push((self.decode(idx), c));
                }
            }
            // a slot that cancelled to zero and was hit again is listed twice
            self.cur.sort_unstable_by_key(|(m, _)| *m);
            self.cur.dedup_by(|b, a| a.0 == b.0);
            self.dense = Some(dense);
        } else {
            self.sparse.clear();
            for (ma, ca) in &self.cur {
                for (mb, cb) in &self.base {
                    if let Some(m) = self.mul_mono(ma, mb) {
                        self.sparse.push((lex_key(&m), m, field.mul(*ca, *cb)));
                    }
                }
            }
            self.sparse.sort_unstable_by_key(|(k, _, _)| *k);
            self.cur.clear();
            let mut i = 0;
            while i < self.sparse.len() {
                let (k, m, mut c) = self.sparse[i];
                i += 1;
                while i < self.sparse.len() && self.sparse[i].0 == k {
                    c = field.add(c, self.sparse[i].2);
                    i += 1;
                }
                if !c.is_zero() {
                    self.cur.push((m, c));
                }
            }
        }
    }

    fn decode(&self, mut idx: u32) -> Monomial {
        let mut m = Monomial::ONE;
        for i in 0..self.nvars {
            m.0[i] = (idx % self.p) as u16;
            idx /= self.p;
        }
        m
    }
}

fn lex_key(m: &Monomial) -> u128 {
    let mut k = 0u128;
    for i in (0..MAX_VARS).rev() {
        k = (k << 16) | m.0[i] as u128;
    }
    k
}
