//! The unit group `(F_q[t]/Q)^x` of a square-free `Q` and its dual.
//!
//! By the Chinese remainder theorem the group is a product of the cyclic
//! groups `F_{pi_j}^x`. A unit is addressed by its tuple of discrete logs
//! `(l_j)` against fixed generators, and a character by an exponent tuple
//! `(k_j)`, with `chi(A) = prod_j exp(2 pi i k_j l_j / (q^{n_j} - 1))`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{FieldParams, Poly, ResidueField};
use crate::numeric::root_of_unity;
use crate::{Error, Result};

/// One CRT component `F_q[t]/pi` of the unit group.
#[derive(Clone, Debug)]
pub struct ResidueFactor {
    pub prime: Poly,
    pub field: ResidueField,
    /// `q^deg(pi) - 1`.
    pub order: u64,
}

#[derive(Clone, Debug)]
pub struct ResidueGroup {
    field: FieldParams,
    modulus: Poly,
    factors: Vec<ResidueFactor>,
    order: u64,
    lcm: u64,
    roots: Vec<Complex64>,
}

/// A Dirichlet character, stored as exponents against the group's
/// generators. Exponent `k_j` lives in `0..q^{n_j} - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    exponents: Vec<u64>,
}

impl Character {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Groups larger than this are refused; every character sum is `O(phi)`.
pub const MAX_GROUP_ORDER: u64 = 50_000_000;

impl ResidueGroup {
    pub fn new(field: &FieldParams, modulus: &Poly) -> Result<Self> {
        if !modulus.is_monic() || modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::input(format!("Q = {modulus} must be monic of degree >= 1")));
        }
        if !modulus.is_square_free(field) {
            return Err(Error::input(format!("Q = {modulus} is not square-free")));
        }
        let primes = modulus.factor_square_free(field)?;
        let mut factors = Vec::with_capacity(primes.len());
        let mut order = 1u64;
        let mut lcm = 1u64;
        for prime in primes {
            let rf = ResidueField::with_modulus(field, prime.clone())?;
            if !rf.has_log_tables() {
                return Err(Error::resource(format!("residue field of {prime} is too large for a log table")));
            }
            let n = rf.size() - 1;
            order = order.saturating_mul(n);
            lcm = lcm / gcd(lcm, n) * n;
            factors.push(ResidueFactor { prime, field: rf, order: n });
        }
        if order > MAX_GROUP_ORDER {
            return Err(Error::resource(format!("phi(Q) = {order} exceeds {MAX_GROUP_ORDER}")));
        }
        let roots = (0..lcm).map(|k| root_of_unity(k, lcm)).collect();
        Ok(ResidueGroup { field: field.clone(), modulus: modulus.clone(), factors, order, lcm, roots })
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn factors(&self) -> &[ResidueFactor] {
        &self.factors
    }

    /// `phi(Q)`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Discrete logs of `a mod Q`, or `None` if `gcd(a, Q) != 1`.
    pub fn logs(&self, a: &Poly) -> Option<Vec<u64>> {
        self.factors
            .iter()
            .map(|fac| {
                let r = fac.field.reduce(a);
                fac.field.log(r).ok().map(u64::from)
            })
            .collect()
    }

    /// Mixed-radix position of a log tuple, first factor least significant.
    pub fn unit_index(&self, logs: &[u64]) -> usize {
        self.factors
            .iter()
            .zip(logs)
            .rev()
            .fold(0u64, |acc, (fac, &l)| acc * fac.order + l % fac.order) as usize
    }

    pub fn index_logs(&self, mut index: usize) -> Vec<u64> {
        self.factors
            .iter()
            .map(|fac| {
                let l = index as u64 % fac.order;
                index /= fac.order as usize;
                l
            })
            .collect()
    }

    /// Every unit as a reduced residue, in residue-index order. Brute force
    /// over all `q^deg Q` residues.
    pub fn units(&self) -> Vec<Poly> {
        let deg = self.modulus.degree().unwrap();
        let count = (self.field.q() as u64).pow(deg as u32);
        (0..count)
            .map(|i| Poly::from_residue_index(i, deg, &self.field))
            .filter(|r| r.gcd(&self.modulus, &self.field).is_one())
            .collect()
    }

    pub fn trivial_character(&self) -> Character {
        Character { exponents: vec![0; self.factors.len()] }
    }

    pub fn character(&self, exponents: &[u64]) -> Result<Character> {
        if exponents.len() != self.factors.len() || exponents.iter().zip(&self.factors).any(|(&k, f)| k >= f.order) {
            return Err(Error::input("character exponents do not match the group"));
        }
        Ok(Character { exponents: exponents.to_vec() })
    }

    /// The `i`-th character in enumeration order.
    pub fn character_at(&self, index: usize) -> Character {
        Character { exponents: self.index_logs(index) }
    }

    pub fn character_index(&self, chi: &Character) -> usize {
        self.unit_index(&chi.exponents)
    }

    /// All `phi(Q)` characters, trivial first.
    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.order as usize).map(|i| self.character_at(i))
    }

    pub fn conj(&self, chi: &Character) -> Character {
        Character {
            exponents: chi
                .exponents
                .iter()
                .zip(&self.factors)
                .map(|(&k, f)| (f.order - k) % f.order)
                .collect(),
        }
    }

    /// `chi(A) = exp(2 pi i phase / lcm)` for `A` with the given logs.
    pub fn phase(&self, chi: &Character, logs: &[u64]) -> u64 {
        chi.exponents
            .iter()
            .zip(logs)
            .zip(&self.factors)
            .map(|((&k, &l), f)| (k as u128 * l as u128 % f.order as u128) as u64 * (self.lcm / f.order))
            .sum::<u64>()
            % self.lcm
    }

    pub fn eval_logs(&self, chi: &Character, logs: &[u64]) -> Complex64 {
        self.roots[self.phase(chi, logs) as usize]
    }

    /// Extension by zero: `chi(f mod Q)` on units, exactly `0` otherwise.
    pub fn chi_zero(&self, chi: &Character, f: &Poly) -> Complex64 {
        match self.logs(f) {
            Some(logs) => self.eval_logs(chi, &logs),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `chi` at every unit, indexed by [`ResidueGroup::unit_index`].
    pub fn values(&self, chi: &Character) -> Vec<Complex64> {
        (0..self.order as usize).map(|i| self.eval_logs(chi, &self.index_logs(i))).collect()
    }
}
