//! Irreducible monic polynomials by sieving out products.
//!
//! A monic `f` of degree `n` is reducible exactly when it has an irreducible
//! factor of degree `<= n/2`, so degree `n` is sieved by marking `pi * g` for
//! every irreducible `pi` of degree `d <= n/2` and every monic `g` of degree
//! `n - d`. The product is updated incrementally as `g` runs through the
//! odometer order of its coefficients, so each mark costs `O(d)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::field::{FieldElement, FieldParams};
use super::poly::Poly;
use crate::{Error, Result};

/// Largest `q^n` the sieve will allocate a bitmap for.
pub const SIEVE_LIMIT: u64 = 1 << 32;

#[derive(Clone, Debug)]
pub struct IrreducibleSieve {
    field: FieldParams,
    /// Bit `i` of degree `d` set when monic index `i` is reducible.
    reducible: Vec<Vec<u64>>,
    counts: Vec<u64>,
}

impl IrreducibleSieve {
    pub fn new(field: &FieldParams, max_degree: usize) -> Result<Self> {
        let q = field.q() as u64;
        q.checked_pow(max_degree as u32)
            .filter(|&n| n <= SIEVE_LIMIT)
            .ok_or_else(|| Error::resource(format!("sieve of degree {max_degree} over F_{q} is too large")))?;
        let mut sieve = IrreducibleSieve { field: field.clone(), reducible: Vec::new(), counts: Vec::new() };
        let mut primes: Vec<Vec<Vec<FieldElement>>> = Vec::new();
        for n in 1..=max_degree {
            let size = q.pow(n as u32);
            let mut bits = vec![0u64; size.div_ceil(64) as usize];
            for (d, list) in primes.iter().enumerate().take(n / 2) {
                for pi in list {
                    mark_multiples(field, pi, d + 1, n, &mut bits);
                }
            }
            let reducible: u64 = bits.iter().map(|w| w.count_ones() as u64).sum();
            sieve.counts.push(size - reducible);
            if n <= max_degree / 2 {
                let list = (0..size)
                    .filter(|&i| bits[(i / 64) as usize] >> (i % 64) & 1 == 0)
                    .map(|i| Poly::monic_from_index(n, i, field).coeffs().to_vec())
                    .collect();
                primes.push(list);
            }
            sieve.reducible.push(bits);
        }
        Ok(sieve)
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn max_degree(&self) -> usize {
        self.counts.len()
    }

    /// Number of monic irreducibles of degree `d`.
    pub fn count(&self, d: usize) -> u64 {
        self.counts[d - 1]
    }

    pub fn is_irreducible(&self, d: usize, index: u64) -> bool {
        self.reducible[d - 1][(index / 64) as usize] >> (index % 64) & 1 == 0
    }

    /// Monic indices of the irreducibles of degree `d`, ascending.
    pub fn irreducibles(&self, d: usize) -> impl Iterator<Item = u64> + '_ {
        let size = (self.field.q() as u64).pow(d as u32);
        (0..size).filter(move |&i| self.is_irreducible(d, i))
    }
}

fn set_bit(bits: &mut [u64], i: u64) {
    bits[(i / 64) as usize] |= 1 << (i % 64);
}

/// Marks `pi * g` for all monic `g` of degree `n - d`.
fn mark_multiples(field: &FieldParams, pi: &[FieldElement], d: usize, n: usize, bits: &mut [u64]) {
    let q = field.q() as usize;
    let m = n - d;
    let pow: Vec<i64> = (0..n).map(|k| (q as i64).pow(k as u32)).collect();
    // rows[delta][i] = delta * pi_i
    let rows: Vec<Vec<FieldElement>> = field.elements().map(|c| pi.iter().map(|&p| field.mul(c, p)).collect()).collect();
    let step: Vec<FieldElement> = (0..q)
        .map(|v| {
            let next = FieldElement(((v + 1) % q) as u32);
            field.sub(next, FieldElement(v as u32))
        })
        .collect();
    // start at g = t^m
    let mut c = vec![FieldElement::ZERO; n];
    c[m..n].copy_from_slice(&pi[..d]);
    let mut index: i64 = (m..n).map(|k| c[k].0 as i64 * pow[k]).sum();
    let mut digits = vec![0usize; m];
    loop {
        set_bit(bits, index as u64);
        let mut j = 0;
        loop {
            if j == m {
                return;
            }
            let row = &rows[step[digits[j]].0 as usize];
            for i in 0..=d {
                let k = j + i;
                if k >= n {
                    break;
                }
                let old = c[k];
                c[k] = field.add(old, row[i]);
                index += (c[k].0 as i64 - old.0 as i64) * pow[k];
            }
            digits[j] = (digits[j] + 1) % q;
            if digits[j] != 0 {
                break;
            }
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_monic;

    #[test]
    fn matches_irreducibility_test() {
        for q in [3u64, 5, 9] {
            let f = FieldParams::with_order(q).unwrap();
            let max = if q == 9 { 3 } else { 4 };
            let sieve = IrreducibleSieve::new(&f, max).unwrap();
            for d in 1..=max {
                for (i, p) in enumerate_monic(&f, d).enumerate() {
                    assert_eq!(sieve.is_irreducible(d, i as u64), p.is_irreducible(&f).unwrap(), "q={q} {p}");
                }
            }
        }
    }

    #[test]
    fn known_counts() {
        let f = FieldParams::new(3, 1).unwrap();
        let sieve = IrreducibleSieve::new(&f, 6).unwrap();
        let counts: Vec<u64> = (1..=6).map(|d| sieve.count(d)).collect();
        assert_eq!(counts, [3, 3, 8, 18, 48, 116]);
        assert_eq!(sieve.irreducibles(2).collect::<Vec<_>>().len(), 3);
    }

    #[test]
    fn refuses_huge_bitmaps() {
        let f = FieldParams::with_order(13).unwrap();
        assert!(IrreducibleSieve::new(&f, 10).is_err());
    }
}
