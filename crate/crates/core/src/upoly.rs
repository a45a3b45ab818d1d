//! Dense univariate polynomials over a finite field.
//!
//! Factorization is the usual pipeline: squarefree decomposition (with exact
//! `p`-th root extraction when the derivative vanishes), distinct-degree
//! splitting, then equal-degree splitting. Equal-degree splitting is
//! randomized; odd characteristic uses `gcd(f, a^((Q-1)/2) - 1)` and
//! characteristic 2 uses the trace map `a + a^2 + ... + a^(2^(k-1))`. The RNG
//! is a per-call ChaCha stream with a fixed seed, so results are reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fields::{Embedding, Field, FieldElem};

/// Seed used by equal-degree splitting unless the caller supplies one.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    field: Field,
    /// Low to high; no trailing zeros.
    coeffs: Vec<FieldElem>,
}

impl UPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElem>) -> UPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> UPoly {
        UPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: FieldElem) -> UPoly {
        UPoly::new(field, vec![c])
    }

    pub fn one(field: &Field) -> UPoly {
        UPoly::constant(field, field.one())
    }

    /// The polynomial `x`.
    pub fn x(field: &Field) -> UPoly {
        UPoly::new(field, vec![field.zero(), field.one()])
    }

    /// `x - r`.
    pub fn linear(field: &Field, r: FieldElem) -> UPoly {
        UPoly::new(field, vec![field.neg(r), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        UPoly::new(f, coeffs)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        UPoly::new(f, coeffs)
    }

    pub fn scale(&self, c: FieldElem) -> UPoly {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        UPoly::new(&self.field, coeffs)
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UPoly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.lead()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(f), self.clone());
        }
        let mut quot = vec![FieldElem::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let q = f.mul(c, lead_inv);
            quot[k - dd] = q;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] = f.sub(rem[k - dd + j], f.mul(q, dj));
            }
        }
        rem.truncate(dd);
        (UPoly::new(f, quot), UPoly::new(f, rem))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Exact division; debug-asserts a zero remainder.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()).unwrap())
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        let f = &self.field;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul_int(c, i as i64)).collect();
        UPoly::new(f, coeffs)
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn embed(&self, emb: &Embedding) -> UPoly {
        UPoly::new(emb.target(), self.coeffs.iter().map(|&c| emb.apply(c)).collect())
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &UPoly) -> UPoly {
        let mut base = self.rem(m);
        let mut acc = UPoly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `self^(p^k) mod m` by repeated `p`-th powers, avoiding large exponents.
    pub fn frobenius_pow_mod(&self, k: usize, m: &UPoly) -> UPoly {
        let p = self.field.characteristic() as u128;
        let mut h = self.rem(m);
        for _ in 0..k {
            h = h.pow_mod(p, m);
        }
        h
    }

    /// Exact `p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> UPoly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let coeffs = self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
        UPoly::new(f, coeffs)
    }

    /// Rabin's test, for polynomials over any finite field.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let m = self.field.degree();
        let x = UPoly::x(&self.field);
        // h_i = x^(q^i) mod f
        let mut hs = Vec::with_capacity(n);
        let mut h = x.clone();
        for _ in 0..n {
            h = h.frobenius_pow_mod(m, &f);
            hs.push(h.clone());
        }
        if hs[n - 1] != x.rem(&f) {
            return false;
        }
        prime_divisors(n).into_iter().all(|r| hs[n / r - 1].sub(&x).gcd(&f).is_one())
    }

    /// Squarefree decomposition of a nonzero polynomial: monic, pairwise
    /// coprime squarefree factors with their multiplicities, sorted by
    /// multiplicity. The leading coefficient is not included.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let mut out = Vec::new();
        sfd_rec(&self.monic(), 1, &mut out);
        out.sort_by_key(|(_, m)| *m);
        out
    }

    /// Distinct-degree splitting of a monic squarefree polynomial: pairs
    /// `(g, d)` with `g` the product of all irreducible factors of degree `d`.
    pub fn distinct_degree(&self) -> Vec<(UPoly, usize)> {
        let m = self.field.degree();
        let mut rest = self.monic();
        let x = UPoly::x(&self.field);
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            h = h.frobenius_pow_mod(m, &rest);
            let g = rest.gcd(&h.sub(&x));
            if !g.is_one() {
                rest = rest.div_exact(&g);
                h = h.rem(&rest);
                out.push((g, d));
            }
            d += 1;
        }
        if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
            out.push((rest, deg));
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of degree `d`.
    pub fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
        let mut out = Vec::new();
        edf_rec(&self.monic(), d, rng, &mut out);
        out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        out
    }

    /// Full factorization into monic irreducibles with multiplicities, sorted by
    /// (degree, coefficients). Returns the leading coefficient too.
    pub fn factor(&self) -> (FieldElem, Vec<(UPoly, u32)>) {
        self.factor_seeded(DEFAULT_SEED)
    }

    pub fn factor_seeded(&self, seed: u64) -> (FieldElem, Vec<(UPoly, u32)>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) > 0 {
            for (part, mult) in self.squarefree_decomposition() {
                for (g, d) in part.distinct_degree() {
                    for h in g.equal_degree(d, &mut rng) {
                        out.push((h, mult));
                    }
                }
            }
        }
        out.sort_by(|(a, _), (b, _)| a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| a.coeffs.cmp(&b.coeffs)));
        (self.lead(), out)
    }

    /// Distinct roots in the polynomial's own field, sorted.
    pub fn roots(&self) -> Vec<FieldElem> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let x = UPoly::x(&self.field);
        let xq = x.frobenius_pow_mod(self.field.degree(), &f);
        let g = f.gcd(&xq.sub(&x));
        if g.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let mut roots: Vec<FieldElem> =
            g.equal_degree(1, &mut rng).iter().map(|l| self.field.neg(l.coeff(0))).collect();
        roots.sort();
        roots
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn sfd_rec(f: &UPoly, scale: u32, out: &mut Vec<(UPoly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let p = f.field.characteristic();
    let df = f.derivative();
    if df.is_zero() {
        sfd_rec(&f.pth_root(), scale * p, out);
        return;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        sfd_rec(&c.pth_root(), scale * p, out);
    }
}

fn random_below(field: &Field, deg: usize, rng: &mut ChaCha8Rng) -> UPoly {
    UPoly::new(field, (0..deg).map(|_| field.random(rng)).collect())
}

fn edf_rec(f: &UPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UPoly>) {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = &f.field;
    let p = field.characteristic();
    // the residue fields have p^k elements
    let k = field.degree() * d;
    loop {
        let a = random_below(field, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut acc = a.clone();
            let mut t = a.clone();
            for _ in 1..k {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((p^k - 1)/2) = N(a)^((p-1)/2), N(a) = a^(1 + p + ... + p^(k-1))
            let mut conj = a.clone();
            let mut norm = a.clone();
            for _ in 1..k {
                conj = conj.pow_mod(p as u128, f);
                norm = norm.mul(&conj).rem(f);
            }
            norm.pow_mod(((p - 1) / 2) as u128, f).sub(&UPoly::one(field))
        };
        let g = f.gcd(&b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            edf_rec(&g, d, rng, out);
            edf_rec(&f.div_exact(&g), d, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;
    use rand::Rng;

    fn poly(field: &Field, cs: &[i64]) -> UPoly {
        UPoly::new(field, cs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn product(field: &Field, parts: &[(UPoly, u32)]) -> UPoly {
        parts.iter().fold(UPoly::one(field), |acc, (g, m)| acc.mul(&g.pow(*m as u64)))
    }

    #[test]
    fn divrem_reconstructs() {
        let f = make_field(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = random_below(&f, 9, &mut rng);
            let b = random_below(&f, 4, &mut rng);
            if b.is_zero() {
                continue;
            }
            let (q, r) = a.divrem(&b);
            assert_eq!(q.mul(&b).add(&r), a);
            assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }

    #[test]
    fn squarefree_pth_power_branch() {
        let f3 = make_field(3, 1).unwrap();
        // x^3 over F_3 has zero derivative
        let sfd = poly(&f3, &[0, 0, 0, 1]).squarefree_decomposition();
        assert_eq!(sfd, vec![(poly(&f3, &[0, 1]), 3)]);
        // (x+1)^4 (x+2)^3 x
        let g = poly(&f3, &[1, 1]).pow(4).mul(&poly(&f3, &[2, 1]).pow(3)).mul(&poly(&f3, &[0, 1]));
        let sfd = g.squarefree_decomposition();
        assert_eq!(product(&f3, &sfd), g);
        let mults: Vec<u32> = sfd.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 3, 4]);
    }

    #[test]
    fn factorization_reconstructs_and_is_irreducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, n) in [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let f = make_field(p, n).unwrap();
            for _ in 0..20 {
                let deg = rng.random_range(1..13);
                let mut g = random_below(&f, deg + 1, &mut rng);
                if g.is_zero() {
                    continue;
                }
                // force some repeated factors
                if rng.random_bool(0.5) {
                    let h = random_below(&f, 3, &mut rng);
                    if !h.is_zero() {
                        g = g.mul(&h.pow(p));
                    }
                }
                let (lead, parts) = g.factor();
                assert_eq!(product(&f, &parts).scale(lead), g, "p={p} n={n}");
                for (h, _) in &parts {
                    assert!(h.is_irreducible());
                    assert_eq!(h.lead(), f.one());
                }
            }
        }
    }

    #[test]
    fn roots_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (p, n) in [(2, 2), (3, 2), (5, 2), (2, 4)] {
            let f = make_field(p, n).unwrap();
            for _ in 0..20 {
                let g = random_below(&f, 7, &mut rng);
                if g.degree().unwrap_or(0) == 0 {
                    continue;
                }
                let brute: Vec<FieldElem> = f.elements().filter(|&a| g.eval(a).is_zero()).collect();
                assert_eq!(g.roots(), brute);
            }
        }
    }

    #[test]
    fn irreducibility_matches_root_count_for_cubics() {
        let f = make_field(5, 1).unwrap();
        for c in 0..125 {
            let g = poly(&f, &[c % 5, (c / 5) % 5, c / 25, 1]);
            assert_eq!(g.is_irreducible(), g.roots().is_empty());
        }
    }
}
