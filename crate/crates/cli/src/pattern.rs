//! Reproducible per-field choice of the modulus for q-ladders.

use ffvar_core::algebra::{FieldParams, Poly};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `Q = t * pi`, with `pi` the first monic irreducible of degree `d`, coprime
/// to `s`, in a seeded shuffle of the monic polynomials of degree `d`.
pub fn t_times_irreducible(field: &FieldParams, d: usize, seed: u64, s: &Poly) -> Option<Poly> {
    let count = (field.q() as u64).checked_pow(d as u32)?;
    let mut order: Vec<u64> = (0..count).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order.into_iter().map(|i| Poly::monic_from_index(d, i, field)).find_map(|pi| {
        let ok = pi.is_irreducible(field).ok()? && pi.gcd(s, field).is_one() && pi.gcd(&Poly::var(), field).is_one();
        ok.then(|| Poly::var().mul(&pi, field))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_is_seeded_and_valid() {
        let f = FieldParams::with_order(7).unwrap();
        let s = Poly::from_ints(&f, &[0, -1, 1]);
        let a = t_times_irreducible(&f, 2, 3, &s).unwrap();
        assert_eq!(a, t_times_irreducible(&f, 2, 3, &s).unwrap());
        assert_eq!(a.degree(), Some(3));
        assert_eq!(a.gcd(&s, &f), Poly::var());
        // degree one: t and t - 1 are excluded
        for seed in 0..10 {
            let q1 = t_times_irreducible(&f, 1, seed, &s).unwrap();
            assert_eq!(q1.gcd(&s, &f), Poly::var());
            assert!(q1.is_square_free(&f));
        }
    }

    #[test]
    fn exhausted_choice() {
        let f = FieldParams::with_order(3).unwrap();
        // t(t-1)(t-2) kills every linear candidate
        let s = Poly::from_ints(&f, &[0, 2, 0, 1]);
        assert!(t_times_irreducible(&f, 1, 0, &s).is_none());
    }
}
