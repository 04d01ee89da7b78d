//! Exact arithmetic in small finite fields GF(p^e).
//!
//! Fields are table driven: addition, multiplication, negation and
//! inversion are precomputed lookup tables over element indices, so every
//! operation is exact and every downstream canonical form is bit
//! reproducible across runs and machines.
//!
//! Elements are stored as indices in `[0, q)`. The index encodes the
//! polynomial representation over the prime subfield: an element with
//! coefficients `c_0, ..., c_{e-1}` (constant term first) has index
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. Extension fields of order
//! 4, 8, 9 and 16 use fixed irreducible moduli so the encoding never
//! varies; other extension fields require an explicit modulus.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Fixed moduli, coefficients over GF(p) with the constant term first.
const FIXED_MODULI: &[(u64, u32, &[u8])] = &[
    (2, 2, &[1, 1, 1]),       // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),    // x^3 + x + 1
    (3, 2, &[1, 0, 1]),       // x^2 + 1
    (2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
];

/// Largest supported field order.
pub const MAX_ORDER: u64 = 256;

/// An element of a finite field, stored as its table index in `[0, q)`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u8);

impl FieldElement {
    /// True for the zero element of any field.
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shared handle to a fully built field; cheap to clone and safe to share
/// across worker threads.
pub type Field = Arc<FieldSpec>;

/// A finite field GF(p^e), q = p^e <= 256, with frozen arithmetic tables.
///
/// Immutable after construction; all operations are pure lookups.
pub struct FieldSpec {
    q: u64,
    p: u64,
    e: u32,
    modulus: Vec<u8>,
    qs: usize,
    add_t: Vec<u8>,
    mul_t: Vec<u8>,
    neg_t: Vec<u8>,
    inv_t: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl FieldSpec {
    /// Build GF(p^e) with the fixed modulus for that order.
    ///
    /// Fails with [`Error::NoFixedModulus`] for extension fields other
    /// than GF(4), GF(8), GF(9) and GF(16); use [`FieldSpec::with_modulus`]
    /// for those.
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if e == 0 {
            return Err(Error::BadDimension("extension degree must be >= 1".into()));
        }
        if e == 1 {
            // GF(p) = GF(p)[x]/(x); degree-one modulus keeps the encoding uniform.
            return Self::with_modulus(p, 1, &[0, 1]);
        }
        for &(fp, fe, m) in FIXED_MODULI {
            if fp == p && fe == e {
                return Self::with_modulus(p, e, m);
            }
        }
        // Report order problems ahead of the missing modulus.
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if checked_order(p, e).is_none() {
            return Err(Error::Unsupported(format!("field order {p}^{e} exceeds {MAX_ORDER}")));
        }
        Err(Error::NoFixedModulus { p, e })
    }

    /// Build GF(p^e) with a caller-supplied monic irreducible modulus of
    /// degree e (coefficients over GF(p), constant term first).
    pub fn with_modulus(p: u64, e: u32, modulus: &[u8]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = checked_order(p, e)
            .ok_or_else(|| Error::Unsupported(format!("field order {p}^{e} exceeds {MAX_ORDER}")))?;
        if modulus.len() != e as usize + 1 {
            return Err(Error::BadModulus(format!(
                "modulus must have degree {e} ({} coefficients)",
                e + 1
            )));
        }
        if modulus.iter().any(|&c| u64::from(c) >= p) {
            return Err(Error::BadModulus("coefficients must lie in [0, p)".into()));
        }
        if modulus[e as usize] != 1 {
            return Err(Error::BadModulus("modulus must be monic".into()));
        }
        if !poly_is_irreducible(p, modulus) {
            return Err(Error::BadModulus(format!(
                "polynomial {modulus:?} is reducible over GF({p})"
            )));
        }

        let qs = q as usize;
        let mut spec = FieldSpec {
            q,
            p,
            e,
            modulus: modulus.to_vec(),
            qs,
            add_t: vec![0; qs * qs],
            mul_t: vec![0; qs * qs],
            neg_t: vec![0; qs],
            inv_t: vec![0; qs],
        };
        spec.build_tables();
        Ok(Arc::new(spec))
    }

    /// Build the field of a given order, factoring q = p^e.
    pub fn for_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::Unsupported(format!("order {q} is not a prime power")));
        }
        let p = (2..=q).find(|d| q % d == 0).expect("q >= 2 has a divisor");
        let mut e = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::Unsupported(format!("order {q} is not a prime power")));
        }
        FieldSpec::new(p, e)
    }

    fn build_tables(&mut self) {
        let p = self.p;
        let e = self.e as usize;
        let qs = self.qs;
        if self.e == 1 {
            for i in 0..qs {
                for j in 0..qs {
                    self.add_t[i * qs + j] = ((i + j) as u64 % p) as u8;
                    self.mul_t[i * qs + j] = ((i as u64 * j as u64) % p) as u8;
                }
                self.neg_t[i] = ((p - i as u64) % p) as u8;
            }
        } else {
            for i in 0..qs {
                let a = idx_to_poly(p, e, i);
                for j in 0..qs {
                    let b = idx_to_poly(p, e, j);
                    let sum: Vec<u8> = a
                        .iter()
                        .zip(&b)
                        .map(|(&x, &y)| ((u64::from(x) + u64::from(y)) % p) as u8)
                        .collect();
                    self.add_t[i * qs + j] = poly_to_idx(p, &sum) as u8;
                    let prod = poly_rem(p, &poly_mul(p, &a, &b), &self.modulus);
                    self.mul_t[i * qs + j] = poly_to_idx(p, &prod) as u8;
                }
                let negated: Vec<u8> = a.iter().map(|&x| ((p - u64::from(x)) % p) as u8).collect();
                self.neg_t[i] = poly_to_idx(p, &negated) as u8;
            }
        }
        for i in 1..qs {
            let j = (1..qs)
                .find(|&j| self.mul_t[i * qs + j] == 1)
                .expect("every nonzero element has an inverse");
            self.inv_t[i] = j as u8;
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Field characteristic.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree over the prime subfield.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// The modulus polynomial, constant term first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn has_char_two(&self) -> bool {
        self.p == 2
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The element with the given table index. Panics if `i >= q`.
    pub fn element(&self, i: u64) -> FieldElement {
        assert!(i < self.q, "index {i} out of range for GF({})", self.q);
        FieldElement(i as u8)
    }

    /// Image of an integer in the prime subfield (n mod p).
    pub fn from_int(&self, n: u64) -> FieldElement {
        FieldElement((n % self.p) as u8)
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement::from_index)
    }

    /// All nonzero field elements in index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement::from_index)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_t[a.index() * self.qs + b.index()])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_t[a.index() * self.qs + b.index()])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_t[a.index()])
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_zero(), "inverse of zero");
        FieldElement(self.inv_t[a.index()])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Exact multiset of roots of a x^2 + b x + c, found by scanning the
    /// whole field. The coefficient triple must not be identically zero.
    pub fn roots_of_quadratic(
        &self,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
    ) -> Vec<FieldElement> {
        assert!(
            !(a.is_zero() && b.is_zero() && c.is_zero()),
            "zero polynomial has every element as a root"
        );
        self.elements()
            .filter(|&x| {
                let v = self.add(self.mul(self.mul(a, x), x), self.add(self.mul(b, x), c));
                v.is_zero()
            })
            .collect()
    }

    // Raw-index arithmetic for hot enumeration loops.
    #[inline(always)]
    pub(crate) fn add_idx(&self, a: u8, b: u8) -> u8 {
        self.add_t[a as usize * self.qs + b as usize]
    }

    #[inline(always)]
    pub(crate) fn mul_idx(&self, a: u8, b: u8) -> u8 {
        self.mul_t[a as usize * self.qs + b as usize]
    }

    #[inline(always)]
    pub(crate) fn neg_idx(&self, a: u8) -> u8 {
        self.neg_t[a as usize]
    }

    #[inline(always)]
    pub(crate) fn inv_idx(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv_t[a as usize]
    }

    #[inline(always)]
    pub(crate) fn sub_idx(&self, a: u8, b: u8) -> u8 {
        self.add_idx(a, self.neg_t[b as usize])
    }

    #[cfg(test)]
    fn table_bytes(&self) -> Vec<u8> {
        let mut out = self.add_t.clone();
        out.extend_from_slice(&self.mul_t);
        out.extend_from_slice(&self.neg_t);
        out.extend_from_slice(&self.inv_t);
        out
    }
}

impl FieldElement {
    fn from_index(i: u64) -> FieldElement {
        FieldElement(i as u8)
    }
}

fn checked_order(p: u64, e: u32) -> Option<u64> {
    let q = p.checked_pow(e)?;
    (q <= MAX_ORDER).then_some(q)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn idx_to_poly(p: u64, e: usize, mut idx: usize) -> Vec<u8> {
    let mut coeffs = vec![0u8; e];
    for c in coeffs.iter_mut() {
        *c = (idx as u64 % p) as u8;
        idx /= p as usize;
    }
    coeffs
}

fn poly_to_idx(p: u64, coeffs: &[u8]) -> usize {
    coeffs
        .iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn poly_mul(p: u64, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let v = (u64::from(out[i + j]) + u64::from(x) * u64::from(y)) % p;
            out[i + j] = v as u8;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(p: u64, a: &[u8], m: &[u8]) -> Vec<u8> {
    let deg_m = m.len() - 1;
    let mut rem = a.to_vec();
    while rem.len() > deg_m {
        let lead = u64::from(*rem.last().unwrap());
        let shift = rem.len() - 1 - deg_m;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let v = (u64::from(rem[shift + i]) + (p - (lead * u64::from(mc)) % p) % p) % p;
                rem[shift + i] = v as u8;
            }
        }
        rem.pop();
    }
    rem.resize(deg_m.max(1), 0);
    rem
}

fn poly_is_zero(a: &[u8]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial-division irreducibility test over GF(p); adequate for the
/// degrees that arise with q <= 256.
fn poly_is_irreducible(p: u64, m: &[u8]) -> bool {
    let deg = m.len() - 1;
    if deg == 1 {
        return true;
    }
    for t in 1..=deg / 2 {
        // All monic polynomials of degree t.
        let count = (p as usize).pow(t as u32);
        for idx in 0..count {
            let mut f = idx_to_poly(p, t, idx);
            f.push(1);
            if poly_is_zero(&poly_rem(p, m, &f)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(i: u64) -> FieldElement {
        FieldElement(i as u8)
    }

    #[test]
    fn gf4_fixed_modulus() {
        let k = FieldSpec::new(2, 2).unwrap();
        assert_eq!(k.q(), 4);
        assert_eq!(k.modulus(), &[1, 1, 1]);
        // x * x = x + 1 under x^2 + x + 1.
        assert_eq!(k.mul(f(2), f(2)), f(3));
    }

    #[test]
    fn gf5_small_products() {
        let k = FieldSpec::new(5, 1).unwrap();
        assert_eq!(k.mul(f(2), f(3)), f(1));
        assert_eq!(k.add(f(4), f(3)), f(2));
        assert_eq!(k.inv(f(2)), f(3));
    }

    #[test]
    fn gf8_polynomial_reduction() {
        let k = FieldSpec::new(2, 3).unwrap();
        // x * x^2 = x^3 = x + 1 under x^3 + x + 1.
        assert_eq!(k.mul(f(2), f(4)), f(3));
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let k = FieldSpec::for_order(q).unwrap();
            for a in k.elements() {
                for b in k.elements() {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for c in k.elements() {
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                        assert_eq!(k.add(a, k.add(b, c)), k.add(k.add(a, b), c));
                        assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
                    }
                }
                assert_eq!(k.add(a, k.neg(a)), k.zero());
                if !a.is_zero() {
                    assert_eq!(k.mul(a, k.inv(a)), k.one());
                }
                // x -> x^q is the identity.
                assert_eq!(k.pow(a, q), a);
                // Frobenius x -> x^p is additive.
                for b in k.elements() {
                    assert_eq!(k.pow(k.add(a, b), k.p()), k.add(k.pow(a, k.p()), k.pow(b, k.p())));
                }
            }
        }
    }

    #[test]
    fn tables_are_deterministic() {
        for q in [4u64, 8, 9, 16, 7] {
            let a = FieldSpec::for_order(q).unwrap();
            let b = FieldSpec::for_order(q).unwrap();
            assert_eq!(a.table_bytes(), b.table_bytes());
        }
    }

    #[test]
    fn quadratic_root_scans() {
        let k5 = FieldSpec::new(5, 1).unwrap();
        assert!(k5.roots_of_quadratic(f(1), f(1), f(1)).is_empty());

        let k7 = FieldSpec::new(7, 1).unwrap();
        let roots = k7.roots_of_quadratic(f(1), f(1), f(1));
        assert_eq!(roots, vec![f(2), f(4)]);

        // Characteristic 3: x^2 + x + 1 = (x - 1)^2, a single root.
        let k9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(k9.roots_of_quadratic(f(1), f(1), f(1)), vec![f(1)]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldSpec::new(2, 9), Err(Error::Unsupported(_))));
        assert_eq!(
            FieldSpec::new(5, 2).unwrap_err(),
            Error::NoFixedModulus { p: 5, e: 2 }
        );
        // x^2 + 2 is irreducible over GF(5).
        let k25 = FieldSpec::with_modulus(5, 2, &[2, 0, 1]).unwrap();
        assert_eq!(k25.q(), 25);
        assert_eq!(k25.pow(f(7), 25), f(7));
        // x^2 + 1 = (x + 2)(x + 3) over GF(5).
        assert!(matches!(
            FieldSpec::with_modulus(5, 2, &[1, 0, 1]),
            Err(Error::BadModulus(_))
        ));
    }

    #[test]
    fn larger_supported_order() {
        let k = FieldSpec::with_modulus(2, 8, &[1, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(k.q(), 256);
        let a = f(0x57);
        assert_eq!(k.mul(a, k.inv(a)), k.one());
    }
}
