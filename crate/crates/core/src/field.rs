//! Arithmetic in GF(q) for prime powers q = p^k ≤ 16.
//!
//! Elements are encoded as integers in [0, q): the element with value
//! `v` is the polynomial `sum_i d_i x^i` where `d_0 d_1 ...` are the base-p
//! digits of `v` (least significant digit = constant term). For prime fields
//! this is plain arithmetic mod p.
//!
//! Extension fields are built over the *lexicographically least* monic
//! irreducible modulus of degree k: moduli are enumerated by the integer
//! encoding of their non-leading coefficients (constant term least
//! significant) and the first irreducible one wins. This pins the element
//! encoding — and thus every linear-algebra answer downstream — bit-exactly.
//! For GF(4) the modulus is x^2 + x + 1, the only irreducible monic quadratic
//! over GF(2).
//!
//! All four operation tables are precomputed at construction; a field value
//! is immutable afterwards.

use crate::error::{Error, Result};
use std::fmt;

/// Largest supported field order.
pub const MAX_Q: u64 = 16;

/// An element of GF(q), valid only for the field that produced it.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement(pub u8);

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete finite field GF(p^k) with precomputed operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u8,
    k: u8,
    q: u16,
    /// Modulus coefficients c_0..c_k (c_k = 1); length 2 for prime fields
    /// (the formal modulus x - 0 is never consulted there).
    modulus: Vec<u8>,
    add_t: Vec<u8>,
    mul_t: Vec<u8>,
    neg_t: Vec<u8>,
    inv_t: Vec<u8>, // inv_t[0] is unused
}

impl FieldSpec {
    /// Build GF(p^k). Errors if p is not prime, k = 0, or p^k > 16.
    pub fn new(p: u32, k: u32) -> Result<FieldSpec> {
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_Q {
            return Err(Error::FieldTooLarge { q, max: MAX_Q });
        }
        let (p, k, q) = (p as u8, k as u8, q as u16);

        let modulus = if k == 1 {
            vec![0, 1] // x; unused for prime fields
        } else {
            least_irreducible(p, k)
        };

        let qs = q as usize;
        let mut add_t = vec![0u8; qs * qs];
        let mut mul_t = vec![0u8; qs * qs];
        let mut neg_t = vec![0u8; qs];
        for a in 0..q {
            for b in 0..q {
                add_t[a as usize * qs + b as usize] = add_raw(p, k, a as u8, b as u8);
                mul_t[a as usize * qs + b as usize] = mul_raw(p, k, &modulus, a as u8, b as u8);
            }
        }
        for a in 0..q {
            neg_t[a as usize] = neg_raw(p, k, a as u8);
        }
        let mut inv_t = vec![0u8; qs];
        for a in 1..q {
            let mut found = false;
            for b in 1..q {
                if mul_t[a as usize * qs + b as usize] == 1 {
                    inv_t[a as usize] = b as u8;
                    found = true;
                    break;
                }
            }
            debug_assert!(found, "no inverse for {a} in GF({q})");
        }

        Ok(FieldSpec { p, k, q, modulus, add_t, mul_t, neg_t, inv_t })
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    /// Modulus coefficients c_0..c_k with c_k = 1 (extension fields only).
    pub fn modulus_coeffs(&self) -> &[u8] {
        &self.modulus
    }

    pub fn el(&self, value: u32) -> Result<FieldElement> {
        if value < self.q as u32 {
            Ok(FieldElement(value as u8))
        } else {
            Err(Error::ElementOutOfRange { value, q: self.q })
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_t[a.0 as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            Err(Error::DivisionByZero { q: self.q })
        } else {
            Ok(FieldElement(self.inv_t[a.0 as usize]))
        }
    }

    /// All elements in value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|v| FieldElement(v as u8))
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Digits of `v` in base p, little-endian, padded to `k` digits.
fn digits(p: u8, k: u8, v: u8) -> Vec<u8> {
    let mut v = v;
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn from_digits(p: u8, ds: &[u8]) -> u8 {
    ds.iter().rev().fold(0u8, |acc, &d| acc * p + d)
}

fn add_raw(p: u8, k: u8, a: u8, b: u8) -> u8 {
    let da = digits(p, k, a);
    let db = digits(p, k, b);
    let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    from_digits(p, &sum)
}

fn neg_raw(p: u8, k: u8, a: u8) -> u8 {
    let da = digits(p, k, a);
    let n: Vec<u8> = da.iter().map(|&x| (p - x) % p).collect();
    from_digits(p, &n)
}

/// Polynomial product of the digit vectors reduced mod the modulus.
fn mul_raw(p: u8, k: u8, modulus: &[u8], a: u8, b: u8) -> u8 {
    let da = digits(p, k, a);
    let db = digits(p, k, b);
    let mut prod = vec![0u16; 2 * k as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p as u16;
        }
    }
    // Reduce: x^k = -(c_{k-1} x^{k-1} + ... + c_0) mod the monic modulus.
    for deg in (k as usize..prod.len()).rev() {
        let coef = prod[deg];
        if coef == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &c) in modulus.iter().take(k as usize).enumerate() {
            let sub = coef * c as u16 % p as u16;
            prod[deg - k as usize + i] = (prod[deg - k as usize + i] + p as u16 - sub) % p as u16;
        }
    }
    let ds: Vec<u8> = prod[..k as usize].iter().map(|&x| x as u8).collect();
    from_digits(p, &ds)
}

/// Lexicographically least monic irreducible polynomial of degree k over
/// GF(p), as coefficients c_0..c_k. Candidates are ordered by the integer
/// whose base-p digits are (c_0, ..., c_{k-1}).
fn least_irreducible(p: u8, k: u8) -> Vec<u8> {
    let total = (p as u32).pow(k as u32);
    for v in 0..total {
        let mut coeffs: Vec<u8> = Vec::with_capacity(k as usize + 1);
        let mut t = v;
        for _ in 0..k {
            coeffs.push((t % p as u32) as u8);
            t /= p as u32;
        }
        coeffs.push(1);
        if poly_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of degree {k} exist over GF({p})")
}

/// Exhaustive irreducibility: no monic divisor of degree 1..=deg/2.
fn poly_irreducible(p: u8, poly: &[u8]) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let total = (p as u32).pow(d as u32);
        for v in 0..total {
            let mut div: Vec<u8> = Vec::with_capacity(d + 1);
            let mut t = v;
            for _ in 0..d {
                div.push((t % p as u32) as u8);
                t /= p as u32;
            }
            div.push(1);
            if poly_rem_is_zero(p, poly, &div) {
                return false;
            }
        }
    }
    true
}

/// Does `div` (monic) divide `poly` over GF(p)?
fn poly_rem_is_zero(p: u8, poly: &[u8], div: &[u8]) -> bool {
    let mut rem: Vec<i32> = poly.iter().map(|&c| c as i32).collect();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap() % p as i32;
        let top = rem.len() - 1;
        if lead != 0 {
            for (i, &c) in div.iter().enumerate() {
                let pos = top - dd + i;
                rem[pos] = ((rem[pos] - lead * c as i32) % p as i32 + p as i32) % p as i32;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c % p as i32 == 0)
}
