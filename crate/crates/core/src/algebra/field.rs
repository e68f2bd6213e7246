use alloc::vec;
use alloc::vec::Vec;

use super::poly::enumerate_monic;
use super::is_prime;
use crate::{Error, Result};

/// Largest supported `q`; operation tables are `q^2` entries each.
pub const MAX_FIELD_ORDER: u32 = 1024;

/// An element of `GF(p^e)`, packed as `sum c_i * p^i` over its polynomial-basis
/// coefficients. The derived `Ord` is the canonical element order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field `GF(p^e) = F_p[x]/(m(x))`, with `m` the first monic irreducible
/// of degree `e` in canonical order.
#[derive(Clone, Debug)]
pub struct FieldParams {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for FieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldParams {}

impl FieldParams {
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::input(alloc::format!("p = {p} must be an odd prime")));
        }
        if e == 0 {
            return Err(Error::input("extension degree e must be at least 1"));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_FIELD_ORDER as u64).ok_or_else(|| {
            Error::input(alloc::format!("q = {p}^{e} exceeds the supported maximum {MAX_FIELD_ORDER}"))
        })?;
        let prime = Self::prime(p);
        if e == 1 {
            return Ok(prime);
        }
        let modulus = enumerate_monic(&prime, e as usize)
            .find(|m| m.is_irreducible(&prime).unwrap_or(false))
            .expect("irreducible polynomials exist in every degree");
        let modulus: Vec<u32> = modulus.coeffs().iter().map(|c| c.0).collect();
        Ok(Self::with_modulus(p, e, q as u32, modulus))
    }

    /// The field with `q` elements; `q` must be an odd prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = super::prime_power_parts(q)
            .ok_or_else(|| Error::input(alloc::format!("q = {q} is not a prime power")))?;
        Self::new(p, e)
    }

    fn prime(p: u32) -> Self {
        let n = p as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u32;
                mul[a * n + b] = ((a * b) % n) as u32;
            }
        }
        let neg = (0..n).map(|a| ((n - a) % n) as u32).collect();
        let mut inv = vec![0u32; n];
        for a in 1..n {
            inv[a] = (1..n).find(|&b| (a * b) % n == 1).unwrap() as u32;
        }
        FieldParams { p, e: 1, q: p, modulus: vec![0, 1], add, mul, neg, inv }
    }

    fn with_modulus(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let n = q as usize;
        let ed = e as usize;
        let digits = |mut x: usize| {
            let mut d = vec![0u32; ed];
            for c in d.iter_mut() {
                *c = (x % p as usize) as u32;
                x /= p as usize;
            }
            d
        };
        let pack = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = pack(&sum);
                // schoolbook product, then reduce by the monic modulus from the top
                let mut prod = vec![0u32; 2 * ed - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (ed..prod.len()).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(ed) {
                            let idx = k - ed + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                        prod[k] = 0;
                    }
                }
                mul[a * n + b] = pack(&prod[..ed]);
            }
        }
        let neg = (0..n).map(|a| pack(&digits(a).iter().map(|c| (p - c) % p).collect::<Vec<_>>())).collect();
        let mut inv = vec![0u32; n];
        for a in 1..n {
            inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u32;
        }
        FieldParams { p, e, q, modulus, add, mul, neg, inv }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial over `F_p`, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::input(alloc::format!("{index} is not an element of F_{}", self.q)))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::input("coefficient vector out of range"));
        }
        Ok(FieldElement(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)))
    }

    /// Polynomial-basis coordinates over `F_p`, length `e`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let mut v = x.0;
        (0..self.e)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[(a.0 * self.q + b.0) as usize])
    }

    /// `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (!a.is_zero()).then(|| FieldElement(self.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `+1` on nonzero squares, `-1` on non-squares, `0` at zero.
    pub fn quadratic_character(&self, a: FieldElement) -> i8 {
        if a.is_zero() {
            0
        } else if self.pow(a, (self.q as u64 - 1) / 2) == FieldElement::ONE {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldParams::new(2, 1).is_err());
        assert!(FieldParams::new(9, 1).is_err());
        assert!(FieldParams::new(3, 0).is_err());
        assert!(FieldParams::new(3, 9).is_err());
        assert!(FieldParams::with_order(12).is_err());
    }

    #[test]
    fn gf9_modulus_is_first_irreducible() {
        let f = FieldParams::new(3, 2).unwrap();
        // x^2 + 1 is the first monic irreducible quadratic over F_3 in packed order
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.q(), 9);
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(x, x), f.from_int(-1));
    }

    #[test]
    fn quadratic_character_in_f3() {
        let f = FieldParams::new(3, 1).unwrap();
        assert_eq!(f.quadratic_character(f.from_int(1)), 1);
        assert_eq!(f.quadratic_character(f.from_int(0)), 0);
        assert_eq!(f.quadratic_character(f.from_int(2)), -1);
    }

    fn check_axioms(f: &FieldParams, a: u32, b: u32, c: u32) {
        let (a, b, c) = (FieldElement(a % f.q), FieldElement(b % f.q), FieldElement(c % f.q));
        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        if let Some(ai) = f.inv(a) {
            assert_eq!(f.mul(a, ai), FieldElement::ONE);
        }
        if !a.is_zero() && !b.is_zero() {
            assert_eq!(
                f.quadratic_character(f.mul(a, b)),
                f.quadratic_character(a) * f.quadratic_character(b)
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn field_axioms(a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
            for (p, e) in [(3, 1), (5, 1), (3, 2), (7, 1), (5, 2), (3, 3)] {
                let f = FieldParams::new(p, e).unwrap();
                check_axioms(&f, a, b, c);
            }
        }
    }
}
