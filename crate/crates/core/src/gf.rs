//! Arithmetic in small finite fields GF(p^h).
//!
//! Elements are encoded as integer codes in `0..q`: the base-`p` digits of a
//! code are the coefficients of a polynomial of degree `< h`, lowest degree
//! first. Code 0 is zero and code 1 is one. All operations are table lookups.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element code. Valid values are `0..q`.
pub type Elem = u8;

/// Largest field order the tables are built for.
pub const MAX_ORDER: usize = 81;

struct Tables {
    p: u32,
    h: u32,
    q: usize,
    /// Monic modulus, coefficients low degree first; `None` for prime fields.
    modulus: Option<Vec<u8>>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
}

/// A finite field GF(p^h) with an explicit modulus.
///
/// Cloning is cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.h == other.0.h && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "GF({})", self.0.q),
            Some(m) => write!(f, "GF({}; modulus {:?})", self.0.q, m),
        }
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, h)` with `q = p^h`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut h = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        h += 1;
    }
    (r == 1).then_some((p as u32, h))
}

// Dense polynomials over GF(p), low degree first, no trailing zeros.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * mi % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("unit modulo prime")
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut f = digits(code as u32, p, d);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Lexicographically smallest monic irreducible polynomial of degree `h`,
/// comparing coefficients from the constant term upwards.
fn default_modulus(p: u32, h: u32) -> Vec<u32> {
    let count = (p as usize).pow(h);
    for code in 0..count {
        // Low-degree-first lexicographic order is the base-p order of `code`
        // read with the constant term as the most significant digit.
        let mut low_first = digits(code as u32, p, h as usize);
        low_first.reverse();
        let mut m = low_first;
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl Field {
    /// Builds GF(p^h). When `modulus` is absent and `h > 1` the default
    /// modulus is the lexicographically smallest monic irreducible polynomial.
    pub fn new(p: u32, h: u32, modulus: Option<&[u8]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 {
            return Err(Error::BadModulus("degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(h).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::UnsupportedOrder(q));
        }
        let q = q as usize;
        let modulus: Option<Vec<u32>> = match modulus {
            Some(m) => {
                if m.len() != h as usize + 1 {
                    return Err(Error::BadModulus(format!(
                        "expected {} coefficients for degree {h}, got {}",
                        h + 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c as u32 >= p) {
                    return Err(Error::BadModulus("coefficient outside GF(p)".into()));
                }
                if m[h as usize] != 1 {
                    return Err(Error::BadModulus("modulus is not monic".into()));
                }
                let m: Vec<u32> = m.iter().map(|&c| c as u32).collect();
                if !is_irreducible(&m, p) {
                    return Err(Error::BadModulus("modulus is reducible".into()));
                }
                if h == 1 {
                    None
                } else {
                    Some(m)
                }
            }
            None if h > 1 => Some(default_modulus(p, h)),
            None => None,
        };
        Ok(Field(Arc::new(build_tables(p, h, q, modulus))))
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// GF(q) with the default modulus.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, h) = prime_power(q).ok_or(Error::UnsupportedOrder(q))?;
        Field::new(p, h, None)
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.0.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.0.h
    }

    /// Modulus coefficients, low degree first (`None` for prime fields).
    pub fn modulus(&self) -> Option<&[u8]> {
        self.0.modulus.as_deref()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q as u8
    }

    pub fn check(&self, a: u32) -> Result<Elem> {
        if (a as usize) < self.0.q {
            Ok(a as u8)
        } else {
            Err(Error::BadElement { code: a, q: self.0.q })
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q + b as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv_unchecked(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.0.inv[a as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius map `a -> a^p`.
    #[inline]
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.0.frob[a as usize]
    }

    /// All field automorphisms `a -> a^(p^j)` for `j = 0..h`, as lookup tables.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        let mut out = Vec::with_capacity(self.0.h as usize);
        let mut cur: Vec<Elem> = self.elements().collect();
        for _ in 0..self.0.h {
            out.push(cur.clone());
            cur = cur.iter().map(|&a| self.frobenius(a)).collect();
        }
        out
    }

    /// Nonzero elements.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.0.q as u8
    }

    /// Dot product of two vectors.
    #[inline]
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

fn build_tables(p: u32, h: u32, q: usize, modulus: Option<Vec<u32>>) -> Tables {
    let mut add = vec![0u8; q * q];
    let mut mul = vec![0u8; q * q];
    for a in 0..q {
        let da = digits(a as u32, p, h as usize);
        for b in 0..q {
            let db = digits(b as u32, p, h as usize);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * q + b] = undigits(&sum, p) as u8;
            let prod = match &modulus {
                None => vec![(a as u32 * b as u32) % p],
                Some(m) => {
                    let mut raw = vec![0u32; 2 * h as usize];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            raw[i + j] = (raw[i + j] + x * y) % p;
                        }
                    }
                    poly_rem(&raw, m, p)
                }
            };
            let mut prod = prod;
            prod.resize(h as usize, 0);
            mul[a * q + b] = undigits(&prod, p) as u8;
        }
    }
    let mut neg = vec![0u8; q];
    let mut inv = vec![0u8; q];
    for a in 0..q {
        neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
        if a != 0 {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8;
        }
    }
    let mut frob = vec![0u8; q];
    for (a, slot) in frob.iter_mut().enumerate() {
        let mut acc = 1u8;
        for _ in 0..p {
            acc = mul[acc as usize * q + a];
        }
        *slot = acc;
    }
    Tables {
        p,
        h,
        q,
        modulus: modulus.map(|m| m.into_iter().map(|c| c as u8).collect()),
        add,
        mul,
        neg,
        inv,
        frob,
    }
}

/// The operations accepted by [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Pow,
}

/// Uniform entry point for single field operations. For `Pow` the second
/// operand is the exponent; for `Inv` it is ignored.
pub fn arith(field: &Field, op: ArithOp, a: u32, b: u64) -> Result<Elem> {
    let a = field.check(a)?;
    let elem_b = || field.check(b as u32);
    match op {
        ArithOp::Add => Ok(field.add(a, elem_b()?)),
        ArithOp::Sub => Ok(field.sub(a, elem_b()?)),
        ArithOp::Mul => Ok(field.mul(a, elem_b()?)),
        ArithOp::Div => field.div(a, elem_b()?),
        ArithOp::Inv => field.inv(a),
        ArithOp::Pow => Ok(field.pow(a, b)),
    }
}

/// An injective field homomorphism from a subfield into an extension field.
#[derive(Debug, Clone)]
pub struct EmbeddingMap {
    pub source: Field,
    pub target: Field,
    /// `image[a]` is the target code of source element `a`.
    pub image: Vec<Elem>,
}

impl EmbeddingMap {
    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a as usize]
    }
}

/// Embeds `base` into `ext`, sending the generator of `base` to the root of
/// the base modulus in `ext` with the smallest code.
pub fn subfield_embedding(base: &Field, ext: &Field) -> Result<EmbeddingMap> {
    let incompatible = || Error::IncompatibleFields {
        base: base.q(),
        ext: ext.q(),
    };
    if base.p() != ext.p() || !ext.h().is_multiple_of(base.h()) {
        return Err(incompatible());
    }
    let p = base.p();
    let image: Vec<Elem> = match base.modulus() {
        None => (0..base.q() as u8).collect(),
        Some(m) => {
            // Evaluate the base modulus at each candidate root of ext.
            let root = ext
                .elements()
                .find(|&x| {
                    let mut acc = 0;
                    for &c in m.iter().rev() {
                        acc = ext.add(ext.mul(acc, x), c);
                    }
                    acc == 0
                })
                .ok_or_else(incompatible)?;
            (0..base.q() as u32)
                .map(|code| {
                    let coeffs = digits(code, p, base.h() as usize);
                    coeffs.iter().rev().fold(0u8, |acc, &c| {
                        ext.add(ext.mul(acc, root), c as u8)
                    })
                })
                .collect()
        }
    };
    Ok(EmbeddingMap {
        source: base.clone(),
        target: ext.clone(),
        image,
    })
}
