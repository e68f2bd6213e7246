use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::field::{FieldElement, FieldParams};
use super::poly::{enumerate_monic, Poly};
use super::prime_factors;
use crate::{Error, Result};

/// Fields up to this many elements get eager discrete-log tables; larger
/// ones multiply by schoolbook reduction instead.
pub const LOG_TABLE_LIMIT: u64 = 10_000_000;

/// An element of `F_{q^D}`, packed as `sum a_i * q^i` over its coordinates
/// `a_i` in `F_q`. Because each `a_i` is itself packed in base `p`, the
/// packed value is also the element's coordinate vector in `(Z/p)^(eD)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtElement(pub(crate) u32);

impl ExtElement {
    pub const ZERO: ExtElement = ExtElement(0);
    pub const ONE: ExtElement = ExtElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug)]
struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// `F_q[u]/(M(u))` for a monic irreducible `M` of degree `D` over `F_q`.
///
/// The same type serves as `F_{q^D}` (with `M` the first irreducible of
/// degree `D`) and as the residue field `F_q[t]/pi` (with `M = pi`).
#[derive(Clone, Debug)]
pub struct ExtensionField {
    base: FieldParams,
    modulus: Poly,
    degree: usize,
    size: u64,
    generator: ExtElement,
    tables: Option<LogTables>,
}

/// Residue field `F_q[t]/pi` of a monic irreducible `pi`.
pub type ResidueField = ExtensionField;

impl ExtensionField {
    /// `F_{q^D}` built directly over `F_q`.
    pub fn new(base: &FieldParams, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::input("extension degree must be at least 1"));
        }
        let modulus = enumerate_monic(base, degree)
            .find(|m| m.is_irreducible(base).unwrap_or(false))
            .expect("irreducible polynomials exist in every degree");
        Self::build(base, modulus)
    }

    /// `F_q[t]/modulus`; the modulus must be monic irreducible.
    pub fn with_modulus(base: &FieldParams, modulus: Poly) -> Result<Self> {
        if !modulus.is_irreducible(base)? {
            return Err(Error::input(format!("{modulus} is not irreducible")));
        }
        Self::build(base, modulus)
    }

    fn build(base: &FieldParams, modulus: Poly) -> Result<Self> {
        let degree = modulus.degree().unwrap();
        let size = (base.q() as u64)
            .checked_pow(degree as u32)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or_else(|| Error::resource(format!("F_{{{}^{degree}}} is too large to index", base.q())))?;
        let mut field = ExtensionField {
            base: base.clone(),
            modulus,
            degree,
            size,
            generator: ExtElement::ONE,
            tables: None,
        };
        field.generator = field.find_generator();
        if size <= LOG_TABLE_LIMIT {
            let order = (size - 1) as usize;
            let mut exp = vec![0u32; order];
            let mut log = vec![u32::MAX; size as usize];
            let mut cur = ExtElement::ONE;
            for (k, slot) in exp.iter_mut().enumerate() {
                *slot = cur.0;
                log[cur.0 as usize] = k as u32;
                cur = field.mul_schoolbook(cur, field.generator);
            }
            debug_assert_eq!(cur, ExtElement::ONE);
            field.tables = Some(LogTables { log, exp });
        }
        Ok(field)
    }

    fn find_generator(&self) -> ExtElement {
        let order = self.size - 1;
        let factors = prime_factors(order);
        (1..self.size as u32)
            .map(ExtElement)
            .find(|&x| {
                factors.iter().all(|r| self.pow_schoolbook(x, order / r) != ExtElement::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn base(&self) -> &FieldParams {
        &self.base
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `q^D`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// The smallest primitive element in canonical order.
    pub fn generator(&self) -> ExtElement {
        self.generator
    }

    pub fn has_log_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElement> {
        (0..self.size as u32).map(ExtElement)
    }

    pub fn element(&self, index: u64) -> Result<ExtElement> {
        if index < self.size {
            Ok(ExtElement(index as u32))
        } else {
            Err(Error::input(format!("{index} is out of range for a field of size {}", self.size)))
        }
    }

    pub fn from_base(&self, c: FieldElement) -> ExtElement {
        ExtElement(c.0)
    }

    /// Coordinates over `F_q`, length `D`.
    pub fn digits(&self, x: ExtElement) -> Vec<FieldElement> {
        let q = self.base.q();
        let mut v = x.0;
        (0..self.degree)
            .map(|_| {
                let c = FieldElement(v % q);
                v /= q;
                c
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[FieldElement]) -> ExtElement {
        let q = self.base.q();
        ExtElement(digits.iter().rev().fold(0u32, |acc, c| acc * q + c.0))
    }

    /// Reduction of a polynomial over `F_q` into this field.
    pub fn reduce(&self, f: &Poly) -> ExtElement {
        let r = f.rem(&self.modulus, &self.base);
        self.from_digits(r.coeffs())
    }

    /// The representative polynomial of degree `< D`.
    pub fn lift(&self, x: ExtElement) -> Poly {
        Poly::from_coeffs(self.digits(x))
    }

    pub fn add(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        let q = self.base.q();
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.degree {
            let s = self.base.add(FieldElement(x % q), FieldElement(y % q));
            out += s.0 * scale;
            scale = scale.wrapping_mul(q);
            x /= q;
            y /= q;
        }
        ExtElement(out)
    }

    pub fn neg(&self, a: ExtElement) -> ExtElement {
        let q = self.base.q();
        let mut x = a.0;
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.degree {
            out += self.base.neg(FieldElement(x % q)).0 * scale;
            scale = scale.wrapping_mul(q);
            x /= q;
        }
        ExtElement(out)
    }

    pub fn sub(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        match &self.tables {
            Some(t) => {
                if a.is_zero() || b.is_zero() {
                    return ExtElement::ZERO;
                }
                let order = self.size - 1;
                let k = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % order;
                ExtElement(t.exp[k as usize])
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    fn mul_schoolbook(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        let f = &self.base;
        let (da, db) = (self.digits(a), self.digits(b));
        let d = self.degree;
        let mut prod = vec![FieldElement::ZERO; 2 * d - 1];
        for (i, &x) in da.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        let m = self.modulus.coeffs();
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] = f.sub(prod[k - d + i], f.mul(c, m[i]));
            }
        }
        self.from_digits(&prod[..d])
    }

    fn pow_schoolbook(&self, a: ExtElement, mut exp: u64) -> ExtElement {
        let mut base = a;
        let mut acc = ExtElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: ExtElement, exp: u64) -> ExtElement {
        match &self.tables {
            Some(t) => {
                if a.is_zero() {
                    return if exp == 0 { ExtElement::ONE } else { ExtElement::ZERO };
                }
                let order = self.size - 1;
                let k = (t.log[a.0 as usize] as u128 * exp as u128 % order as u128) as usize;
                ExtElement(t.exp[k])
            }
            None => self.pow_schoolbook(a, exp),
        }
    }

    pub fn inv(&self, a: ExtElement) -> Option<ExtElement> {
        (!a.is_zero()).then(|| self.pow(a, self.size - 2))
    }

    /// `x -> x^q`.
    pub fn frobenius(&self, a: ExtElement) -> ExtElement {
        self.pow(a, self.base.q() as u64)
    }

    /// Discrete logarithm to the base [`ExtensionField::generator`].
    pub fn log(&self, a: ExtElement) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::input("logarithm of zero"));
        }
        match &self.tables {
            Some(t) => Ok(t.log[a.0 as usize]),
            None => Err(Error::resource(format!(
                "no discrete-log table for a field of size {} (limit {LOG_TABLE_LIMIT})",
                self.size
            ))),
        }
    }

    /// `generator^k`.
    pub fn exp(&self, k: u64) -> ExtElement {
        match &self.tables {
            Some(t) => ExtElement(t.exp[(k % (self.size - 1)) as usize]),
            None => self.pow_schoolbook(self.generator, k),
        }
    }

    /// `+1` on nonzero squares, `-1` on non-squares, `0` at zero. The
    /// generator is a non-square, so squares are the even logarithms.
    pub fn quadratic_character(&self, a: ExtElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let even = match &self.tables {
            Some(t) => t.log[a.0 as usize] % 2 == 0,
            None => self.pow_schoolbook(a, (self.size - 1) / 2) == ExtElement::ONE,
        };
        if even {
            1
        } else {
            -1
        }
    }

    /// Evaluates a polynomial over `F_q` at a point of this field.
    pub fn eval(&self, f: &Poly, x: ExtElement) -> ExtElement {
        f.coeffs()
            .iter()
            .rev()
            .fold(ExtElement::ZERO, |acc, &c| self.add(self.mul(acc, x), self.from_base(c)))
    }

    /// Galois orbit `x, x^q, x^(q^2), ...` up to the first repeat.
    pub fn conjugates(&self, x: ExtElement) -> Vec<ExtElement> {
        let mut out = vec![x];
        let mut y = self.frobenius(x);
        while y != x {
            out.push(y);
            y = self.frobenius(y);
        }
        out
    }

    /// The minimal polynomial of `x` over `F_q`.
    pub fn minimal_polynomial(&self, x: ExtElement) -> Poly {
        let conj = self.conjugates(x);
        // product of (T - c) with coefficients in this field, low to high
        let mut coeffs = vec![ExtElement::ONE];
        for &c in &conj {
            let neg_c = self.neg(c);
            let mut next = vec![ExtElement::ZERO; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], a);
                next[i] = self.add(next[i], self.mul(a, neg_c));
            }
            coeffs = next;
        }
        let q = self.base.q();
        Poly::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| {
                    debug_assert!(c.0 < q, "minimal polynomial coefficient outside the base field");
                    FieldElement(c.0)
                })
                .collect(),
        )
    }

    /// The smallest root (in canonical order) of an irreducible `pi` whose
    /// degree divides `D`.
    pub fn embed_root(&self, pi: &Poly) -> Result<ExtElement> {
        let d = pi.degree().filter(|&d| d >= 1).ok_or_else(|| Error::input("cannot embed a root of a constant"))?;
        if self.degree % d != 0 {
            return Err(Error::input(format!(
                "degree {d} of {pi} does not divide the extension degree {}",
                self.degree
            )));
        }
        self.elements()
            .find(|&x| self.eval(pi, x).is_zero())
            .ok_or_else(|| Error::input(format!("{pi} has no root in F_{{q^{}}}; it is not irreducible", self.degree)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_over_f3() {
        let f3 = FieldParams::new(3, 1).unwrap();
        let f9 = ExtensionField::new(&f3, 2).unwrap();
        assert_eq!(f9.size(), 9);
        assert!(f9.has_log_tables());
        let g = f9.generator();
        let mut seen = alloc::collections::BTreeSet::new();
        for k in 0..8 {
            seen.insert(f9.exp(k));
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(f9.pow(g, 8), ExtElement::ONE);
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(f9.mul(a, b), f9.mul_schoolbook(a, b));
            }
        }
    }

    #[test]
    fn embed_root_examples() {
        let f3 = FieldParams::new(3, 1).unwrap();
        for d in 1..=3 {
            let ext = ExtensionField::new(&f3, d).unwrap();
            let root = ext.embed_root(&Poly::from_ints(&f3, &[-2, 1])).unwrap();
            assert_eq!(root, ext.from_base(f3.from_int(2)));
        }
        let pi = Poly::from_ints(&f3, &[1, 0, 1]);
        let f9 = ExtensionField::new(&f3, 2).unwrap();
        let r = f9.embed_root(&pi).unwrap();
        assert_eq!(f9.mul(r, r), f9.from_base(f3.from_int(-1)));
        // exhaustive: it is the smallest square root of -1
        let first = f9.elements().find(|&x| f9.mul(x, x) == f9.from_base(f3.from_int(-1))).unwrap();
        assert_eq!(r, first);
        let f27 = ExtensionField::new(&f3, 3).unwrap();
        assert!(f27.embed_root(&pi).is_err());
    }

    #[test]
    fn embedded_roots_are_roots() {
        let f5 = FieldParams::new(5, 1).unwrap();
        let ext = ExtensionField::new(&f5, 4).unwrap();
        for d in [1, 2, 4] {
            for pi in enumerate_monic(&f5, d).filter(|p| p.is_irreducible(&f5).unwrap()).take(5) {
                let r = ext.embed_root(&pi).unwrap();
                assert!(ext.eval(&pi, r).is_zero());
                assert_eq!(ext.minimal_polynomial(r), pi);
            }
        }
    }

    #[test]
    fn quadratic_character_is_multiplicative() {
        let f9 = FieldParams::new(3, 2).unwrap();
        let ext = ExtensionField::new(&f9, 2).unwrap();
        for a in ext.elements().skip(1) {
            for b in ext.elements().skip(1).step_by(7) {
                assert_eq!(
                    ext.quadratic_character(ext.mul(a, b)),
                    ext.quadratic_character(a) * ext.quadratic_character(b)
                );
            }
        }
        let squares = ext.elements().skip(1).filter(|&a| ext.quadratic_character(a) == 1).count();
        assert_eq!(squares as u64, (ext.size() - 1) / 2);
    }

    #[test]
    fn residue_field_of_prime() {
        let f5 = FieldParams::new(5, 1).unwrap();
        let pi = Poly::from_ints(&f5, &[2, 0, 1]); // t^2 + 2, -2 = 3 is a non-residue mod 5
        let res = ExtensionField::with_modulus(&f5, pi.clone()).unwrap();
        assert_eq!(res.reduce(&pi), ExtElement::ZERO);
        let a = Poly::from_ints(&f5, &[1, 3, 4, 2]);
        let b = Poly::from_ints(&f5, &[4, 1, 1]);
        assert_eq!(res.reduce(&a.mul(&b, &f5)), res.mul(res.reduce(&a), res.reduce(&b)));
        assert!(ExtensionField::with_modulus(&f5, Poly::from_ints(&f5, &[-1, 0, 1])).is_err());
    }

    #[test]
    fn schoolbook_fallback_agrees() {
        let f3 = FieldParams::new(3, 1).unwrap();
        let ext = ExtensionField::new(&f3, 5).unwrap();
        let mut slow = ext.clone();
        slow.tables = None;
        for a in ext.elements().step_by(11) {
            for b in ext.elements().step_by(17) {
                assert_eq!(ext.mul(a, b), slow.mul(a, b));
            }
            assert_eq!(ext.quadratic_character(a), slow.quadratic_character(a));
            assert_eq!(ext.pow(a, 100), slow.pow(a, 100));
        }
        assert!(slow.log(ExtElement::ONE).is_err());
    }
}
