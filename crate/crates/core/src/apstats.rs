//! Sums of a von Mangoldt function over arithmetic progressions modulo `Q`,
//!
//! ```text
//! S_{n,Q}(A) = sum_{f in M_n, f = A mod Q} Lambda(f),
//! ```
//!
//! and their mean and variance over the units `A`. The variance is computed
//! twice: directly from the buckets (exact integers) and spectrally from the
//! character sums `b_n(chi)`. The two must agree at every finite `q`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{IrreducibleSieve, Poly};
use crate::curve::{CurveFamily, TraceTable};
use crate::dirichlet::ResidueGroup;
use crate::lfun::UnitBuckets;
use crate::numeric::{relative_error, CompensatedSum};
use crate::{Error, Result};

/// Brute-force and spectral variances must agree to this relative error.
pub const SPECTRAL_TOLERANCE: f64 = 1e-8;

/// Residue tables are dense over all `q^deg Q` residues.
pub const MAX_RESIDUES: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ProgressionSums {
    pub n: usize,
    pub modulus: Poly,
    /// Packed residue indices of the units, ascending.
    pub residues: Vec<u64>,
    /// `S_{n,Q}(A)` aligned with `residues`.
    pub sums: Vec<i64>,
    /// `Lambda` summed over prime powers of degree `n` sharing a factor with `Q`.
    pub excluded: i64,
}

impl ProgressionSums {
    pub fn phi(&self) -> u64 {
        self.residues.len() as u64
    }

    /// `sum_A S(A) = sum_{gcd(f,Q)=1} Lambda(f)`.
    pub fn total(&self) -> i64 {
        self.sums.iter().sum()
    }

    pub fn get(&self, residue_index: u64) -> Option<i64> {
        self.residues.binary_search(&residue_index).ok().map(|i| self.sums[i])
    }
}

/// Buckets every prime power of degree `n` by its residue `pi^m mod Q`.
pub fn progression_sums(table: &TraceTable, modulus: &Poly, n: usize) -> Result<ProgressionSums> {
    let field = table.field();
    let deg = modulus.degree().filter(|&d| d >= 1 && modulus.is_monic()).ok_or_else(|| Error::input("Q must be monic of degree >= 1"))?;
    let count = (field.q() as u64).checked_pow(deg as u32).filter(|&c| c <= MAX_RESIDUES).ok_or_else(|| {
        Error::resource(format!("q^deg Q residues exceed {MAX_RESIDUES}"))
    })?;
    let unit: Vec<bool> = (0..count)
        .map(|i| Poly::from_residue_index(i, deg, field).gcd(modulus, field).is_one())
        .collect();
    let mut dense = vec![0i64; count as usize];
    let mut excluded = 0i64;
    for e in &table.degree(n)?.entries {
        let r = e.prime.rem(modulus, field).pow_mod(e.exponent as u64, modulus, field);
        let idx = r.residue_index(field) as usize;
        if unit[idx] {
            dense[idx] += e.lambda();
        } else {
            excluded += e.lambda();
        }
    }
    let residues: Vec<u64> = (0..count).filter(|&i| unit[i as usize]).collect();
    let sums = residues.iter().map(|&i| dense[i as usize]).collect();
    Ok(ProgressionSums { n, modulus: modulus.clone(), residues, sums, excluded })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanVariance {
    pub phi: u64,
    /// `sum_A S(A) = phi E_A[S]`.
    pub total: i64,
    /// `phi sum_A S(A)^2 - (sum_A S(A))^2 = phi^2 Var_A[S]`, exact.
    pub scaled_variance: i128,
    pub mean: f64,
    pub variance: f64,
}

pub fn mean_variance(sums: &ProgressionSums) -> MeanVariance {
    let phi = sums.phi();
    let total = sums.total();
    let sum_sq: i128 = sums.sums.iter().map(|&s| s as i128 * s as i128).sum();
    let scaled_variance = phi as i128 * sum_sq - total as i128 * total as i128;
    MeanVariance {
        phi,
        total,
        scaled_variance,
        mean: total as f64 / phi as f64,
        variance: scaled_variance as f64 / (phi as f64 * phi as f64),
    }
}

/// `(1/phi^2) sum_{chi != chi0} |b_n(chi)|^2`, from the nontrivial sums.
pub fn spectral_variance<'a>(nontrivial: impl IntoIterator<Item = &'a Complex64>, phi: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    for b in nontrivial {
        acc.add(b.norm_sqr());
    }
    acc.value() / (phi as f64 * phi as f64)
}

/// `phi Var / q^{n(1+w)}`.
pub fn normalized_variance(variance: f64, phi: u64, q: u32, n: usize, weight: u32) -> f64 {
    phi as f64 * variance / libm::pow(q as f64, (n as f64) * (1.0 + weight as f64))
}

/// `min{n, R}`.
pub fn prediction(n: usize, r: usize) -> usize {
    n.min(r)
}

/// Classical `sum_A |S(A) - E|^2 ~ q^n (deg Q - 1)` for `2 <= deg Q <= n + 1`.
pub fn kr_prediction(q: u32, n: usize, deg_q: usize) -> f64 {
    libm::pow(q as f64, n as f64) * (deg_q as f64 - 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub n: usize,
    pub phi: u64,
    pub mean: f64,
    /// `b_n(chi0)`, which must equal `phi E_A[S]`.
    pub trivial_trace: i64,
    pub brute_variance: f64,
    pub spectral_variance: f64,
    pub normalized: f64,
    pub r_c: usize,
    pub prediction: usize,
}

impl VarianceReport {
    pub fn deviation(&self) -> f64 {
        (self.normalized - self.prediction as f64).abs()
    }
}

/// Mean and variance at degree `n`, both ways, with the mean formula and the
/// spectral identity enforced.
pub fn variance_report(
    table: &TraceTable,
    group: &ResidueGroup,
    buckets: &UnitBuckets,
    n: usize,
    r_c: usize,
) -> Result<VarianceReport> {
    let sums = progression_sums(table, group.modulus(), n)?;
    let mv = mean_variance(&sums);
    if mv.phi != group.order() {
        return Err(Error::inconsistent(format!("{} unit residues but phi(Q) = {}", mv.phi, group.order())));
    }
    let bucket = buckets.degree(n)?;
    let trivial: i64 = bucket.iter().sum();
    if trivial != mv.total {
        return Err(Error::inconsistent(format!(
            "mean formula fails at n = {n}: phi E_A[S] = {} but b_n(chi0) = {trivial}",
            mv.total
        )));
    }
    let chars: Vec<Complex64> = (1..group.order() as usize)
        .map(|i| character_sum(buckets, group, i, n))
        .collect::<Result<_>>()?;
    let spectral = spectral_variance(&chars, mv.phi);
    let floor = 1.0 / (mv.phi as f64 * mv.phi as f64);
    let err = relative_error(mv.variance, spectral, floor);
    if err > SPECTRAL_TOLERANCE {
        return Err(Error::inconsistent(format!(
            "spectral identity fails at n = {n}: brute force {} vs spectral {spectral} (relative {err:.3e})",
            mv.variance
        )));
    }
    Ok(VarianceReport {
        n,
        phi: mv.phi,
        mean: mv.mean,
        trivial_trace: trivial,
        brute_variance: mv.variance,
        spectral_variance: spectral,
        normalized: normalized_variance(mv.variance, mv.phi, table.field().q(), n, table.weight()),
        r_c,
        prediction: prediction(n, r_c),
    })
}

fn character_sum(buckets: &UnitBuckets, group: &ResidueGroup, index: usize, n: usize) -> Result<Complex64> {
    let chi = group.character_at(index);
    let bucket = buckets.degree(n)?;
    let values = group.values(&chi);
    Ok(bucket.iter().zip(&values).filter(|(&s, _)| s != 0).map(|(&s, &v)| v * s as f64).sum())
}

/// `sum_{f in M_n, gcd(f,Q)=1} Lambda(f)` by enumerating `M_n` and computing
/// each `Lambda(f)` from scratch. Independent of every table.
pub fn direct_coprime_sum(curve: &CurveFamily, modulus: &Poly, n: usize) -> Result<i64> {
    let field = curve.field();
    crate::algebra::enumerate_monic(field, n)
        .filter(|f| f.gcd(modulus, field).is_one())
        .map(|f| curve.von_mangoldt(&f))
        .sum()
}

/// `sum_{f in M_n} Lambda(f) = sum_{d | n} d N_d` for the classical von
/// Mangoldt function, with `N_d` counted by the sieve.
pub fn classical_lambda_sum(sieve: &IrreducibleSieve, n: usize) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d as u64 * sieve.count(d)).sum()
}

/// The same sum by factoring every monic polynomial.
pub fn classical_lambda_sum_by_factoring(field: &crate::algebra::FieldParams, n: usize) -> u64 {
    crate::algebra::enumerate_monic(field, n)
        .filter_map(|f| f.prime_power_decompose(field))
        .map(|(pi, _)| pi.degree().unwrap() as u64)
        .sum()
}

/// All characters' `b_n` for one `n`, trivial first. Used by reports that
/// want the individual terms.
pub fn character_sums(buckets: &UnitBuckets, group: &ResidueGroup, n: usize) -> Result<Vec<Complex64>> {
    (0..group.order() as usize)
        .map(|i| character_sum(buckets, group, i, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldParams;
    use crate::curve::TraceMode;
    use proptest::prelude::*;

    fn sums_of(values: &[i64]) -> ProgressionSums {
        ProgressionSums {
            n: 1,
            modulus: Poly::var(),
            residues: (1..=values.len() as u64).collect(),
            sums: values.to_vec(),
            excluded: 0,
        }
    }

    #[test]
    fn mean_variance_examples() {
        let mv = mean_variance(&sums_of(&[4, 4, 4]));
        assert_eq!(mv.variance, 0.0);
        assert_eq!(mv.mean, 4.0);
        let mv = mean_variance(&sums_of(&[0, 2]));
        assert_eq!((mv.mean, mv.variance), (1.0, 1.0));
    }

    #[test]
    fn spectral_examples() {
        let zero = [Complex64::new(0.0, 0.0); 3];
        assert_eq!(spectral_variance(&zero, 4), 0.0);
        let b = Complex64::from_polar(3.0, 0.7);
        let pair = [b, b.conj(), Complex64::new(0.0, 0.0)];
        assert!((spectral_variance(&pair, 4) - 2.0 * 9.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn predictions() {
        assert_eq!(prediction(7, 5), 5);
        assert_eq!(prediction(1, 5), 1);
        assert_eq!(kr_prediction(9, 4, 3), 2.0 * 6561.0);
    }

    #[test]
    fn legendre_q3_modulus_t_buckets() {
        let f = FieldParams::new(3, 1).unwrap();
        let curve = CurveFamily::legendre(&f);
        let table = TraceTable::for_curve(&curve, 1, TraceMode::Naive).unwrap();
        let s = progression_sums(&table, &Poly::var(), 1).unwrap();
        assert_eq!(s.residues, [1, 2]);
        // t - 1 = 2 mod t carries Lambda = 1, t - 2 = 1 mod t carries 0
        assert_eq!(s.sums, [0, 1]);
        assert_eq!(s.total(), 1);
        assert_eq!(s.total(), direct_coprime_sum(&curve, &Poly::var(), 1).unwrap());
    }

    #[test]
    fn classical_sums_include_excluded_primes() {
        let f = FieldParams::new(5, 1).unwrap();
        let table = TraceTable::classical(&f, 4).unwrap();
        let q = Poly::from_ints(&f, &[0, 2, 0, 1]);
        for n in 1..=4 {
            let s = progression_sums(&table, &q, n).unwrap();
            assert_eq!(s.total() + s.excluded, 5i64.pow(n as u32));
        }
    }

    #[test]
    fn prime_polynomial_theorem_small() {
        for (q, max) in [(3u64, 6), (5, 4), (9, 3)] {
            let f = FieldParams::with_order(q).unwrap();
            let sieve = IrreducibleSieve::new(&f, max).unwrap();
            for n in 1..=max {
                let s = classical_lambda_sum(&sieve, n);
                assert_eq!(s, q.pow(n as u32));
                assert_eq!(s, classical_lambda_sum_by_factoring(&f, n));
            }
        }
    }

    fn full_check(curve: &CurveFamily, modulus: &Poly, max_n: usize) {
        let f = curve.field();
        let table = TraceTable::for_curve(curve, max_n, TraceMode::Auto).unwrap();
        let group = ResidueGroup::new(f, modulus).unwrap();
        let buckets = UnitBuckets::new(&table, &group, max_n).unwrap();
        let r = curve.reduction_profile(modulus).unwrap().r_c;
        for n in 1..=max_n {
            let rep = variance_report(&table, &group, &buckets, n, r).unwrap();
            assert_eq!(rep.trivial_trace, direct_coprime_sum(curve, modulus, n).unwrap());
            assert!(relative_error(rep.brute_variance, rep.spectral_variance, 1e-12) < SPECTRAL_TOLERANCE);
        }
    }

    #[test]
    fn spectral_identity_small_moduli() {
        let f3 = FieldParams::new(3, 1).unwrap();
        full_check(&CurveFamily::legendre(&f3), &Poly::from_ints(&f3, &[0, 1, 0, 1]), 4);
        let f5 = FieldParams::new(5, 1).unwrap();
        full_check(&CurveFamily::legendre(&f5), &Poly::from_ints(&f5, &[0, -1, 1]), 3);
        full_check(&CurveFamily::genus_two_example(&f3), &Poly::from_ints(&f3, &[0, 1]), 3);
    }

    #[test]
    fn classical_variance_report() {
        let f = FieldParams::new(5, 1).unwrap();
        let table = TraceTable::classical(&f, 3).unwrap();
        let modulus = Poly::from_ints(&f, &[0, 2, 0, 1]);
        let group = ResidueGroup::new(&f, &modulus).unwrap();
        let buckets = UnitBuckets::new(&table, &group, 3).unwrap();
        for n in 1..=3 {
            let rep = variance_report(&table, &group, &buckets, n, 2).unwrap();
            assert_eq!(rep.trivial_trace as f64, rep.mean * rep.phi as f64);
        }
    }

    proptest! {
        #[test]
        fn spectral_identity_on_random_buckets(values in proptest::collection::vec(-40i64..40, 16)) {
            // arbitrary integer data on the 16 units of t(t^2+1) over F_3
            let f = FieldParams::new(3, 1).unwrap();
            let group = ResidueGroup::new(&f, &Poly::from_ints(&f, &[0, 1, 0, 1])).unwrap();
            let sums = sums_of(&values);
            let mv = mean_variance(&sums);
            let b: Vec<Complex64> = group
                .characters()
                .skip(1)
                .map(|chi| group.values(&chi).iter().zip(&values).map(|(v, &s)| v * s as f64).sum())
                .collect();
            let spectral = spectral_variance(&b, 16);
            prop_assert!(relative_error(mv.variance, spectral, 1.0 / 256.0) < SPECTRAL_TOLERANCE);
        }
    }
}
