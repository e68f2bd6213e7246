//! Twisted partial L-functions `L_C(T, rho x chi)`.
//!
//! The log-derivative coefficients are character sums of the von Mangoldt
//! function,
//!
//! ```text
//! b_n(chi) = sum_{f in M_n} chi0(f) Lambda(f),
//! ```
//!
//! so once the prime powers of degree `n` are bucketed by their class in
//! `(F_q[t]/Q)^x`, each `b_n(chi)` is an inner product with a row of the
//! character table. The polynomial follows by Newton's identities and its
//! inverse roots by Aberth iteration.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::curve::TraceTable;
use crate::dirichlet::{Character, ResidueGroup};
use crate::{par, Error, Result};

/// Relative tolerance on `|gamma| / q^{(1+w)/2}` for purity.
pub const PURITY_TOLERANCE: f64 = 1e-4;

/// Newton round trip tolerance, measured against `q^{n(1+w)/2}`.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-6;

/// Coefficient reconstruction tolerance for [`extract_roots`].
pub const ROOT_TOLERANCE: f64 = 1e-8;

const ABERTH_MAX_ITER: usize = 2000;

/// Sums of `Lambda` over prime powers of degree `n` coprime to `Q`, bucketed
/// by unit index (see [`ResidueGroup::unit_index`]).
#[derive(Clone, Debug)]
pub struct UnitBuckets {
    q: u32,
    weight: u32,
    degrees: Vec<Vec<i64>>,
}

impl UnitBuckets {
    pub fn new(table: &TraceTable, group: &ResidueGroup, max_degree: usize) -> Result<Self> {
        let phi = group.order() as usize;
        let degrees = (1..=max_degree)
            .map(|n| {
                let dt = table.degree(n)?;
                let keyed = par::map_slice(&dt.entries, |e| {
                    group.logs(&e.prime).map(|logs| {
                        let scaled: Vec<u64> = logs.iter().map(|l| l * e.exponent as u64).collect();
                        (group.unit_index(&scaled), e.lambda())
                    })
                });
                let mut bucket = vec![0i64; phi];
                for (idx, lambda) in keyed.into_iter().flatten() {
                    bucket[idx] += lambda;
                }
                Ok(bucket)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UnitBuckets { q: table.field().q(), weight: table.weight(), degrees })
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, n: usize) -> Result<&[i64]> {
        n.checked_sub(1)
            .and_then(|i| self.degrees.get(i))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::resource(format!("no bucketed trace data for degree {n}")))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// `q^{(1+w)/2}`, the common absolute value of pure inverse roots.
    pub fn scale(&self) -> f64 {
        weil_scale(self.q, self.weight)
    }
}

pub fn weil_scale(q: u32, weight: u32) -> f64 {
    libm::pow(q as f64, (1.0 + weight as f64) / 2.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceSequence {
    pub character: Character,
    /// `b_1..b_R`.
    pub b: Vec<Complex64>,
    /// `b_n / q^{n(1+w)/2}`.
    pub normalized: Vec<Complex64>,
}

/// `b_n(chi)` for `n = 1..len`.
pub fn trace_sequence(buckets: &UnitBuckets, group: &ResidueGroup, chi: &Character, len: usize) -> Result<TraceSequence> {
    let values = group.values(chi);
    let scale = buckets.scale();
    let mut b = Vec::with_capacity(len);
    let mut normalized = Vec::with_capacity(len);
    for n in 1..=len {
        let bucket = buckets.degree(n)?;
        let bn: Complex64 = bucket
            .iter()
            .zip(&values)
            .filter(|(&s, _)| s != 0)
            .map(|(&s, &v)| v * s as f64)
            .sum();
        b.push(bn);
        normalized.push(bn / libm::pow(scale, n as f64));
    }
    Ok(TraceSequence { character: chi.clone(), b, normalized })
}

/// Coefficients `c_0 = 1, ..., c_N` of `prod (1 - gamma_i T)` from the power
/// sums `p_n = sum gamma_i^n`, `n = 1..N`.
pub fn polynomial_from_power_sums(p: &[Complex64]) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(p.len() + 1);
    c.push(Complex64::new(1.0, 0.0));
    for k in 1..=p.len() {
        let s: Complex64 = (1..=k).map(|i| c[k - i] * p[i - 1]).sum();
        c.push(-s / k as f64);
    }
    c
}

/// `p_n = sum gamma_i^n` for `n = 1..count`.
pub fn power_sums(roots: &[Complex64], count: usize) -> Vec<Complex64> {
    let mut powers = roots.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(powers.iter().sum());
        for (x, r) in powers.iter_mut().zip(roots) {
            *x *= r;
        }
    }
    out
}

/// `prod (1 - gamma_i T)`.
pub fn polynomial_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &g in roots {
        c.push(Complex64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            let prev = c[k - 1];
            c[k] -= g * prev;
        }
    }
    c
}

/// The L-polynomial with log-derivative coefficients `b`: its inverse roots
/// have power sums `-b_n`.
pub fn newton_to_polynomial(b: &[Complex64]) -> Vec<Complex64> {
    let p: Vec<Complex64> = b.iter().map(|x| -x).collect();
    let mut c = polynomial_from_power_sums(&p);
    while c.len() > 1 && c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    c
}

fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in a {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Inverse roots of `c_0 + c_1 T + ... + c_R T^R` (`c_0 = 1`), found as the
/// roots of `u^R + (c_1/s) u^{R-1} + ... + c_R/s^R` with `gamma = s u`.
/// `scale` should be the expected root size; it only conditions the problem.
pub fn extract_roots(coeffs: &[Complex64], scale: f64) -> Result<Vec<Complex64>> {
    if coeffs.is_empty() || (coeffs[0] - 1.0).norm() > 1e-12 {
        return Err(Error::input("L-polynomial must have c_0 = 1"));
    }
    let r = coeffs.len() - 1;
    if r == 0 {
        return Ok(Vec::new());
    }
    let a: Vec<Complex64> = coeffs.iter().enumerate().map(|(k, c)| c / libm::pow(scale, k as f64)).collect();
    if a[r].norm() == 0.0 {
        return Err(Error::input("leading coefficient is zero"));
    }
    let mut z: Vec<Complex64> = (0..r)
        .map(|j| Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * j as f64 / r as f64 + 0.4))
        .collect();
    let mut last_step = f64::INFINITY;
    let mut iterations = 0;
    while iterations < ABERTH_MAX_ITER {
        iterations += 1;
        last_step = 0.0;
        for j in 0..r {
            let (p, dp) = horner(&a, z[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..r).filter(|&k| k != j).map(|k| (z[j] - z[k]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[j] -= w;
            last_step = last_step.max(w.norm() / z[j].norm().max(1.0));
        }
        if last_step < 1e-15 {
            break;
        }
    }
    for zj in z.iter_mut() {
        let (p, dp) = horner(&a, *zj);
        if dp.norm() > 0.0 {
            let polished = *zj - p / dp;
            if horner(&a, polished).0.norm() < p.norm() {
                *zj = polished;
            }
        }
    }
    let size = a.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let residual_of = |roots: &[Complex64]| {
        polynomial_from_roots(roots).iter().zip(&a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / size
    };
    let mut residual = residual_of(&z);
    if residual > ROOT_TOLERANCE {
        // a cluster of m roots is only located to ~eps^(1/m), but its mean is
        // well conditioned
        let merged = merge_clusters(&a, &z, 1e-3);
        let merged_residual = residual_of(&merged);
        if merged_residual < residual {
            z = merged;
            residual = merged_residual;
        }
    }
    if residual > ROOT_TOLERANCE {
        return Err(Error::NoConvergence(format!(
            "Aberth iteration on a degree {r} polynomial: coefficient residual {residual:.3e} after {iterations} iterations (last step {last_step:.3e})"
        )));
    }
    Ok(z.into_iter().map(|u| u * scale).collect())
}

/// Replaces each cluster of `m` nearby roots by one root of `P^(m-1)`, where
/// a root of multiplicity `m` is simple, repeated `m` times.
fn merge_clusters(a: &[Complex64], z: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = z.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (z[i] - z[j]).norm() < radius * z[i].norm().max(1.0) {
                let (from, to) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut out = z.to_vec();
    for i in 0..n {
        if label[i] != i {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&k| label[k] == i).collect();
        let m = members.len();
        if m == 1 {
            continue;
        }
        let mut d = a.to_vec();
        for _ in 0..m - 1 {
            let deg = d.len() - 1;
            d = d[..deg].iter().enumerate().map(|(k, c)| c * (deg - k) as f64).collect();
        }
        let mut x = members.iter().map(|&k| z[k]).sum::<Complex64>() / m as f64;
        for _ in 0..50 {
            let (p, dp) = horner(&d, x);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            x -= step;
            if step.norm() <= 1e-17 * x.norm().max(1.0) {
                break;
            }
        }
        for &k in &members {
            out[k] = x;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    /// Every inverse root has absolute value `q^{(1+w)/2}`.
    Good,
    /// Some inverse root is smaller, none larger.
    Mixed,
    /// Some inverse root is larger.
    Heavy,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Good => "good",
            Classification::Mixed => "mixed",
            Classification::Heavy => "heavy",
        }
    }
}

pub fn classify(roots: &[Complex64], scale: f64) -> Classification {
    let ratios = roots.iter().map(|g| g.norm() / scale);
    let mut class = Classification::Good;
    for r in ratios {
        if r > 1.0 + PURITY_TOLERANCE {
            return Classification::Heavy;
        }
        if (r - 1.0).abs() >= PURITY_TOLERANCE {
            class = Classification::Mixed;
        }
    }
    class
}

#[derive(Clone, Debug, PartialEq)]
pub struct LPolynomial {
    pub character: Character,
    /// `c_0 = 1, ..., c_R`.
    pub coeffs: Vec<Complex64>,
    pub roots: Vec<Complex64>,
    pub classification: Classification,
    /// `q^{(1+w)/2}`.
    pub scale: f64,
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `|c_R| / scale^R`, the leading coefficient on the root-magnitude scale.
    pub fn normalized_leading(&self) -> f64 {
        self.coeffs[self.degree()].norm() / libm::pow(self.scale, self.degree() as f64)
    }

    /// True when `c_R` is a genuine leading coefficient. Inverse roots have
    /// absolute value at least 1, so `|c_R| >= 1` up to rounding.
    pub fn has_full_degree(&self, expected: usize) -> bool {
        self.degree() == expected && (expected == 0 || self.coeffs[expected].norm() >= 0.5)
    }

    /// `max_n |(-sum gamma^n) - b_n| / scale^n`.
    pub fn round_trip_error(&self, b: &[Complex64]) -> f64 {
        power_sums(&self.roots, b.len())
            .iter()
            .zip(b)
            .enumerate()
            .map(|(i, (p, bn))| (-p - bn).norm() / libm::pow(self.scale, (i + 1) as f64))
            .fold(0.0, f64::max)
    }
}

/// Polynomial, roots and classification for one trace sequence. The
/// polynomial has degree `len(b)`, which callers set to `r_C`.
pub fn analyze(seq: &TraceSequence, scale: f64) -> Result<LPolynomial> {
    let mut coeffs = polynomial_from_power_sums(&seq.b.iter().map(|x| -x).collect::<Vec<_>>());
    let r = seq.b.len();
    if r > 0 && coeffs[r].norm() / libm::pow(scale, r as f64) == 0.0 {
        coeffs.truncate(r);
    }
    let roots = extract_roots(&coeffs, scale)?;
    let l = LPolynomial {
        character: seq.character.clone(),
        classification: classify(&roots, scale),
        coeffs,
        roots,
        scale,
    };
    let err = l.round_trip_error(&seq.b);
    if err > ROUND_TRIP_TOLERANCE {
        return Err(Error::inconsistent(format!("Newton round trip misses b_n by {err:.3e} (relative to q^(n(1+w)/2))")));
    }
    Ok(l)
}

/// Every character's L-polynomial of degree `r_c`, in character order.
pub fn analyze_all(buckets: &UnitBuckets, group: &ResidueGroup, r_c: usize) -> Result<Vec<(TraceSequence, LPolynomial)>> {
    let scale = buckets.scale();
    par::map_range(group.order() as usize, |i| {
        let seq = trace_sequence(buckets, group, &group.character_at(i), r_c)?;
        let l = analyze(&seq, scale)?;
        Ok((seq, l))
    })
    .into_iter()
    .collect()
}

/// Eigenvalues of the unitarized Frobenius class `theta`: `gamma / scale`,
/// pushed onto the unit circle.
pub fn theta_class(l: &LPolynomial) -> Result<Vec<Complex64>> {
    if l.classification != Classification::Good {
        return Err(Error::input(format!(
            "theta class needs a good character, got {}",
            l.classification.as_str()
        )));
    }
    Ok(l.roots.iter().map(|g| g / g.norm()).collect())
}
