use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::{FieldElement, FieldParams};
use crate::{Error, Result};

/// A polynomial over `F_q`, coefficients low to high with no trailing zeros.
///
/// Arithmetic takes the field as an explicit argument; a `Poly` does not know
/// which field it lives over.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `t`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![FieldElement::ZERO, FieldElement::ONE])
    }

    /// `t - c`.
    pub fn linear(c: FieldElement, f: &FieldParams) -> Self {
        Self::from_coeffs(vec![f.neg(c), FieldElement::ONE])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Coefficients given as integers mapped into the prime subfield.
    pub fn from_ints(f: &FieldParams, coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| f.from_int(c)).collect())
    }

    /// Coefficients given as packed field-element indices.
    pub fn from_indices(f: &FieldParams, coeffs: &[u32]) -> Result<Self> {
        coeffs.iter().map(|&c| f.element(c)).collect::<Result<Vec<_>>>().map(Self::from_coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [FieldElement::ONE]
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    /// Position of a monic polynomial of degree `n` in [`enumerate_monic`]:
    /// the lower coefficients read as base-`q` digits.
    pub fn monic_index(&self, f: &FieldParams) -> u64 {
        let q = f.q() as u64;
        self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * q + c.0 as u64)
    }

    /// Inverse of [`Poly::monic_index`].
    pub fn monic_from_index(degree: usize, mut index: u64, f: &FieldParams) -> Self {
        let q = f.q() as u64;
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(FieldElement((index % q) as u32));
            index /= q;
        }
        coeffs.push(FieldElement::ONE);
        Poly { coeffs }
    }

    /// Packed index of a polynomial of degree `< n` (a residue modulo a
    /// polynomial of degree `n`).
    pub fn residue_index(&self, f: &FieldParams) -> u64 {
        let q = f.q() as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, c| acc * q + c.0 as u64)
    }

    pub fn from_residue_index(mut index: u64, len: usize, f: &FieldParams) -> Self {
        let q = f.q() as u64;
        let coeffs = (0..len)
            .map(|_| {
                let c = FieldElement((index % q) as u32);
                index /= q;
                c
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Sort key realising the canonical order: degree first, then packed
    /// coefficients from the top down.
    pub fn canonical_key(&self, f: &FieldParams) -> (usize, u64) {
        (self.coeffs.len(), self.residue_index(f))
    }

    pub fn eval(&self, x: FieldElement, f: &FieldParams) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Poly, f: &FieldParams) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &FieldParams) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: FieldElement, f: &FieldParams) -> Poly {
        Self::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &FieldParams) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, mut exp: u64, f: &FieldParams) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly, f: &FieldParams) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: &FieldParams) -> Poly {
        self.div_rem(divisor, f).1
    }

    pub fn make_monic(&self, f: &FieldParams) -> Poly {
        match f.inv(self.leading()) {
            Some(inv) => self.scale(inv, f),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly, f: &FieldParams) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly, f: &FieldParams) -> Poly {
        self.mul(other, f).rem(modulus, f)
    }

    pub fn pow_mod(&self, mut exp: u64, modulus: &Poly, f: &FieldParams) -> Poly {
        let mut base = self.rem(modulus, f);
        let mut acc = Poly::one().rem(modulus, f);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus, f);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_mod(&base, modulus, f);
            }
        }
        acc
    }

    pub fn derivative(&self, f: &FieldParams) -> Poly {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn is_square_free(&self, f: &FieldParams) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative(f);
                !d.is_zero() && self.gcd(&d, f).is_one()
            }
        }
    }

    fn check_monic_nonconstant(&self) -> Result<usize> {
        match self.degree() {
            Some(n) if n >= 1 && self.is_monic() => Ok(n),
            _ => Err(Error::input("expected a monic polynomial of degree at least 1")),
        }
    }

    /// Distinct-degree test: `f` of degree `n` is irreducible iff
    /// `gcd(t^(q^k) - t, f) = 1` for every `k <= n/2`.
    pub fn is_irreducible(&self, f: &FieldParams) -> Result<bool> {
        let n = self.check_monic_nonconstant()?;
        let t = Poly::var();
        let mut h = t.rem(self, f);
        for _ in 1..=n / 2 {
            h = h.pow_mod(f.q() as u64, self, f);
            if !h.sub(&t, f).gcd(self, f).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Writes `self = pi^m` with `pi` monic irreducible, if possible.
    ///
    /// The smallest `k` for which `gcd(t^(q^k) - t, f)` is nontrivial is the
    /// smallest degree of an irreducible factor, and that gcd is the product
    /// of all distinct factors of that degree. A prime power has exactly one.
    pub fn prime_power_decompose(&self, f: &FieldParams) -> Option<(Poly, u32)> {
        let n = self.check_monic_nonconstant().ok()?;
        let t = Poly::var();
        let mut h = t.rem(self, f);
        for k in 1..=n {
            h = h.pow_mod(f.q() as u64, self, f);
            let g = h.sub(&t, f).gcd(self, f);
            match g.degree() {
                Some(0) => continue,
                Some(d) if d == k => {
                    let mut rest = self.clone();
                    let mut m = 0;
                    loop {
                        let (quot, rem) = rest.div_rem(&g, f);
                        if !rem.is_zero() {
                            break;
                        }
                        rest = quot;
                        m += 1;
                    }
                    return rest.is_one().then_some((g, m));
                }
                _ => return None,
            }
        }
        None
    }

    /// Monic irreducible factors of a monic square-free polynomial, in
    /// canonical order. Factors of equal degree are separated by trial
    /// division, which is fine at the degrees used here.
    pub fn factor_square_free(&self, f: &FieldParams) -> Result<Vec<Poly>> {
        let n = self.check_monic_nonconstant()?;
        if !self.is_square_free(f) {
            return Err(Error::input("polynomial is not square-free"));
        }
        let t = Poly::var();
        let mut rest = self.clone();
        let mut h = t.rem(self, f);
        let mut out = Vec::new();
        for k in 1..=n {
            if rest.degree() == Some(0) {
                break;
            }
            h = h.pow_mod(f.q() as u64, self, f);
            let g = h.sub(&t, f).gcd(&rest, f);
            let gd = g.degree().unwrap_or(0);
            if gd == 0 {
                continue;
            }
            rest = rest.div_rem(&g, f).0;
            if gd == k {
                out.push(g);
                continue;
            }
            let mut g = g;
            for cand in enumerate_monic(f, k) {
                if g.degree() == Some(0) {
                    break;
                }
                let (quot, rem) = g.div_rem(&cand, f);
                if rem.is_zero() && cand.is_irreducible(f)? {
                    out.push(cand);
                    g = quot;
                }
            }
        }
        out.sort_by_key(|p| p.canonical_key(f));
        Ok(out)
    }
}

impl fmt::Display for Poly {
    /// Coefficients are printed as packed indices, highest degree first.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            match (i, c.0) {
                (0, v) => write!(out, "{v}")?,
                (1, 1) => write!(out, "t")?,
                (1, v) => write!(out, "{v}t")?,
                (_, 1) => write!(out, "t^{i}")?,
                (_, v) => write!(out, "{v}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// The `q^n` monic polynomials of degree `n`, in increasing
/// [`Poly::monic_index`] order.
#[derive(Clone, Debug)]
pub struct MonicPolys<'a> {
    field: &'a FieldParams,
    degree: usize,
    next: u64,
    count: u64,
}

pub fn enumerate_monic(field: &FieldParams, degree: usize) -> MonicPolys<'_> {
    let count = (field.q() as u64).pow(degree as u32);
    MonicPolys { field, degree, next: 0, count }
}

impl Iterator for MonicPolys<'_> {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.next >= self.count {
            return None;
        }
        let p = Poly::monic_from_index(self.degree, self.next, self.field);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.count - self.next) as usize;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for MonicPolys<'_> {}
