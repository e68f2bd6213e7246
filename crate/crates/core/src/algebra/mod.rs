//! Exact arithmetic over `GF(p^e)`, the polynomial ring `F_q[t]`, and the
//! finite extensions `F_{q^D}` that serve both as residue fields `F_q[t]/pi`
//! and as splitting fields for Frobenius-trace computations.
//!
//! Field elements use a polynomial basis and are packed into a single integer
//! `sum c_i * p^i`; comparisons of packed values are the canonical total order
//! used for every deterministic tie-break (smallest root, orbit representative,
//! first irreducible).

mod ext;
mod field;
mod poly;
mod sieve;

pub use ext::{ExtElement, ExtensionField, ResidueField, LOG_TABLE_LIMIT};
pub use field::{FieldElement, FieldParams, MAX_FIELD_ORDER};
pub use poly::{enumerate_monic, MonicPolys, Poly};
pub use sieve::{IrreducibleSieve, SIEVE_LIMIT};

use alloc::vec::Vec;

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Writes `q = p^e` with `p` prime, if possible.
pub fn prime_power_parts(q: u64) -> Option<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p as u32, e))
}
