//! Haar-random unitary matrices and Monte Carlo trace moments.
//!
//! For Haar-distributed `U` in `U(R)`, `E|Tr U^n|^2 = min{n, R}` for
//! `n >= 1`, and `E[Tr U^n] = 0`. Samples come from a complex Ginibre matrix
//! orthonormalized column by column (QR with positive diagonal).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::numeric::CompensatedSum;
use crate::{par, Error, Result};

/// Samples per independent RNG stream. Fixed, so results do not depend on
/// the thread count.
pub const STREAM_CHUNK: usize = 4096;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Matrix { dim: n, data }
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let data = (0..n * n).map(|idx| self.data[(idx % n) * n + idx / n].conj()).collect();
        Matrix { dim: n, data }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `max |(U U*)_{ij} - delta_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.mul(&self.adjoint());
        let id = Matrix::identity(self.dim);
        p.data.iter().zip(&id.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).unwrap();
            if a[pivot * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for row in col + 1..n {
                let f = a[row * n + col] / d;
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// `Tr U^n` for `n = 1..=max_n`.
    pub fn power_traces(&self, max_n: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(max_n);
        let mut p = self.clone();
        for n in 1..=max_n {
            out.push(p.trace());
            if n < max_n {
                p = p.mul(self);
            }
        }
        out
    }
}

/// Draws Haar-distributed unitaries of a fixed dimension from a seeded stream.
#[derive(Clone, Debug)]
pub struct HaarSampler {
    dim: usize,
    rng: ChaCha8Rng,
}

impl HaarSampler {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        Self::with_stream(dim, seed, 0)
    }

    pub fn with_stream(dim: usize, seed: u64, stream: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("unitary dimension must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(HaarSampler { dim, rng })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sample(&mut self) -> Matrix {
        let n = self.dim;
        let scale = core::f64::consts::FRAC_1_SQRT_2;
        // columns of a Ginibre matrix
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut self.rng);
                        let im: f64 = StandardNormal.sample(&mut self.rng);
                        Complex64::new(re * scale, im * scale)
                    })
                    .collect()
            })
            .collect();
        // modified Gram-Schmidt, twice for orthogonality to rounding level;
        // the implied triangular factor has a positive real diagonal
        for j in 0..n {
            for _ in 0..2 {
                for k in 0..j {
                    let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                    let (done, rest) = cols.split_at_mut(j);
                    for (x, y) in rest[0].iter_mut().zip(&done[k]) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = libm::sqrt(cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>());
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
        let data = (0..n * n).map(|idx| cols[idx % n][idx / n]).collect();
        Matrix { dim: n, data }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentEstimate {
    pub n: usize,
    pub dim: usize,
    pub samples: usize,
    /// Mean of `|Tr U^n|^2`.
    pub mean: f64,
    pub std_error: f64,
    /// `min{n, R}`.
    pub exact: usize,
}

impl MomentEstimate {
    /// `|mean - min{n,R}|` in standard errors; `0` when the difference is at
    /// rounding level.
    pub fn z_score(&self) -> f64 {
        let diff = (self.mean - self.exact as f64).abs();
        if diff <= 1e-12 * self.exact as f64 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// `E|Tr U^n|^2` for `n = 1..=max_n` from the same `samples` Haar draws.
pub fn trace_moments(dim: usize, max_n: usize, samples: usize, seed: u64) -> Result<Vec<MomentEstimate>> {
    if samples == 0 || max_n == 0 {
        return Err(Error::input("need at least one sample and one power"));
    }
    HaarSampler::new(dim, seed)?;
    let chunks = samples.div_ceil(STREAM_CHUNK);
    let partial = par::map_range(chunks, |c| {
        let mut sampler = HaarSampler::with_stream(dim, seed, c as u64).expect("dimension checked");
        let count = STREAM_CHUNK.min(samples - c * STREAM_CHUNK);
        let mut sums = vec![(CompensatedSum::new(), CompensatedSum::new()); max_n];
        for _ in 0..count {
            for (k, (acc, t)) in sums.iter_mut().zip(sampler.sample().power_traces(max_n)).enumerate() {
                // shifted by the exact value to avoid cancellation in the variance
                let x = t.norm_sqr() - (k + 1).min(dim) as f64;
                acc.0.add(x);
                acc.1.add(x * x);
            }
        }
        sums
    });
    let mut total = vec![(CompensatedSum::new(), CompensatedSum::new()); max_n];
    for chunk in &partial {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.0.merge(&c.0);
            t.1.merge(&c.1);
        }
    }
    let count = samples as f64;
    Ok(total
        .iter()
        .enumerate()
        .map(|(i, (s, s2))| {
            let exact = (i + 1).min(dim);
            let shifted = s.value() / count;
            let var = if samples > 1 { ((s2.value() - count * shifted * shifted) / (count - 1.0)).max(0.0) } else { 0.0 };
            MomentEstimate { n: i + 1, dim, samples, mean: exact as f64 + shifted, std_error: libm::sqrt(var / count), exact }
        })
        .collect())
}

pub fn trace_moment(dim: usize, n: usize, samples: usize, seed: u64) -> Result<MomentEstimate> {
    if n == 0 {
        return Err(Error::input("power n must be at least 1"));
    }
    Ok(trace_moments(dim, n, samples, seed)?.pop().unwrap())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistributionRow {
    pub n: usize,
    pub dim: usize,
    pub classes: usize,
    /// Empirical mean of `Tr theta^n`; the Haar value is `0`.
    pub mean_trace: Complex64,
    /// Empirical mean of `|Tr theta^n|^2`; the Haar value is `min{n, R}`.
    pub mean_abs2: f64,
    pub haar_abs2: usize,
}

impl EquidistributionRow {
    pub fn relative_deviation(&self) -> f64 {
        (self.mean_abs2 - self.haar_abs2 as f64).abs() / self.haar_abs2 as f64
    }
}

/// Empirical trace moments of a family of unitary classes, given by their
/// eigenvalues, next to the Haar values.
pub fn equidistribution_report(classes: &[Vec<Complex64>], max_n: usize) -> Result<Vec<EquidistributionRow>> {
    let first = classes.first().ok_or_else(|| Error::input("no good characters to compare with Haar measure"))?;
    let dim = first.len();
    if classes.iter().any(|c| c.len() != dim) {
        return Err(Error::input(format!("classes have differing dimensions (expected {dim})")));
    }
    let count = classes.len() as f64;
    Ok((1..=max_n)
        .map(|n| {
            let mut re = CompensatedSum::new();
            let mut im = CompensatedSum::new();
            let mut abs2 = CompensatedSum::new();
            for eig in classes {
                let tr: Complex64 = eig.iter().map(|z| z.powu(n as u32)).sum();
                re.add(tr.re);
                im.add(tr.im);
                abs2.add(tr.norm_sqr());
            }
            EquidistributionRow {
                n,
                dim,
                classes: classes.len(),
                mean_trace: Complex64::new(re.value() / count, im.value() / count),
                mean_abs2: abs2.value() / count,
                haar_abs2: n.min(dim),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfun::{extract_roots, polynomial_from_power_sums};

    #[test]
    fn samples_are_unitary() {
        for dim in 1..=8 {
            let mut s = HaarSampler::new(dim, 7).unwrap();
            for _ in 0..50 {
                let u = s.sample();
                assert!(u.unitarity_defect() < 1e-10);
                assert!((u.determinant().norm() - 1.0).abs() < 1e-8);
            }
        }
        let mut s = HaarSampler::new(1, 3).unwrap();
        assert!((s.sample().get(0, 0).norm() - 1.0).abs() < 1e-15);
        assert!(HaarSampler::new(0, 1).is_err());
    }

    #[test]
    fn eigenvalues_on_unit_circle() {
        let mut s = HaarSampler::new(5, 11).unwrap();
        for _ in 0..20 {
            let u = s.sample();
            // characteristic polynomial from power traces
            let coeffs = polynomial_from_power_sums(&u.power_traces(5));
            for z in extract_roots(&coeffs, 1.0).unwrap() {
                assert!((z.norm() - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn seeded_and_deterministic() {
        let a = HaarSampler::new(4, 99).unwrap().sample();
        let b = HaarSampler::new(4, 99).unwrap().sample();
        assert_eq!(a, b);
        assert_ne!(a, HaarSampler::new(4, 100).unwrap().sample());
        assert_eq!(trace_moments(3, 4, 5000, 1).unwrap(), trace_moments(3, 4, 5000, 1).unwrap());
    }

    #[test]
    fn dimension_one_moments_are_exactly_one() {
        for m in trace_moments(1, 12, 2000, 5).unwrap() {
            assert!((m.mean - 1.0).abs() < 1e-12);
            assert!(m.std_error < 1e-12);
        }
    }

    #[test]
    fn moments_match_min_n_r() {
        let ms = trace_moments(5, 7, 20_000, 2024).unwrap();
        for m in &ms {
            assert!(m.z_score() < 4.0, "{m:?}");
        }
        assert_eq!(ms[2].exact, 3);
        assert_eq!(ms[6].exact, 5);
    }

    #[test]
    fn left_multiplication_invariance() {
        // moments of V U agree with those of U for a fixed unitary V
        let v = HaarSampler::new(3, 555).unwrap().sample();
        let mut s = HaarSampler::new(3, 556).unwrap();
        let mut acc = [0.0f64; 4];
        let n = 20_000;
        for _ in 0..n {
            let vu = v.mul(&s.sample());
            for (a, t) in acc.iter_mut().zip(vu.power_traces(4)) {
                *a += t.norm_sqr();
            }
        }
        for (k, a) in acc.iter().enumerate() {
            let mean = a / n as f64;
            assert!((mean - (k + 1).min(3) as f64).abs() < 0.15, "n={} mean={mean}", k + 1);
        }
    }

    #[test]
    fn equidistribution_rows() {
        let classes = vec![vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)], vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]];
        let rows = equidistribution_report(&classes, 2).unwrap();
        assert_eq!(rows[0].mean_abs2, 0.0);
        assert_eq!(rows[0].haar_abs2, 1);
        // Tr theta^2 = 2 and -2
        assert!((rows[1].mean_abs2 - 4.0).abs() < 1e-12);
        assert!(rows[1].mean_trace.norm() < 1e-12);
        assert!(equidistribution_report(&[], 3).is_err());
    }
}
