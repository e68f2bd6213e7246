//! Discrete Fourier transform over the additive group `(Z/p)^k`.
//!
//! A vector of length `p^k` is indexed by base-`p` digit vectors, which is
//! exactly how [`crate::algebra::ExtElement`] packs the coordinates of
//! `F_{q^D}` over `F_p`. The transform is a product of length-`p` transforms,
//! one per axis; `p` is small here, so each axis uses a direct `O(p^2)` sum.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numeric::root_of_unity;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `exp(-2 pi i <k, x> / p)`.
    Forward,
    /// Kernel `exp(+2 pi i <k, x> / p)`, unnormalized.
    Inverse,
}

/// In-place transform of `data`, which must have length `p^axes`.
pub fn transform(data: &mut [Complex64], p: usize, axes: usize, direction: Direction) {
    assert_eq!(data.len(), p.pow(axes as u32), "length must be p^axes");
    let twiddles: Vec<Complex64> = (0..p)
        .map(|j| {
            let w = root_of_unity(j as u64, p as u64);
            match direction {
                Direction::Forward => w.conj(),
                Direction::Inverse => w,
            }
        })
        .collect();
    let mut line = vec![Complex64::new(0.0, 0.0); p];
    let mut out = vec![Complex64::new(0.0, 0.0); p];
    let mut stride = 1usize;
    for _ in 0..axes {
        let block = stride * p;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + t * stride];
                }
                for (k, o) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (t, &x) in line.iter().enumerate() {
                        acc += x * twiddles[(k * t) % p];
                    }
                    *o = acc;
                }
                for (t, &y) in out.iter().enumerate() {
                    data[base + t * stride] = y;
                }
            }
        }
        stride = block;
    }
}

/// Correlation `c(s) = sum_x g(x) h(x - s)` over `(Z/p)^axes` for real `g`, `h`.
pub fn correlate(g: &[f64], h: &[f64], p: usize, axes: usize) -> Vec<f64> {
    let to_complex = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    let mut gf = to_complex(g);
    let mut hf = to_complex(h);
    transform(&mut gf, p, axes, Direction::Forward);
    transform(&mut hf, p, axes, Direction::Forward);
    for (a, b) in gf.iter_mut().zip(&hf) {
        *a *= b.conj();
    }
    transform(&mut gf, p, axes, Direction::Inverse);
    let n = gf.len() as f64;
    gf.iter().map(|z| z.re / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits(mut x: usize, p: usize, axes: usize) -> Vec<usize> {
        (0..axes)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    fn sub_index(x: usize, s: usize, p: usize, axes: usize) -> usize {
        let (dx, ds) = (digits(x, p, axes), digits(s, p, axes));
        dx.iter().zip(&ds).rev().fold(0, |acc, (a, b)| acc * p + (a + p - b) % p)
    }

    #[test]
    fn correlation_matches_direct_sum() {
        for (p, axes) in [(3usize, 1usize), (3, 3), (5, 2), (7, 1), (2, 4)] {
            let n = p.pow(axes as u32);
            let g: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) % 5) as f64 - 2.0).collect();
            let h: Vec<f64> = (0..n).map(|i| ((i * i + 1) % 3) as f64 - 1.0).collect();
            let fast = correlate(&g, &h, p, axes);
            for s in 0..n {
                let direct: f64 = (0..n).map(|x| g[x] * h[sub_index(x, s, p, axes)]).sum();
                assert!((fast[s] - direct).abs() < 1e-9, "p={p} axes={axes} s={s}");
            }
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let (p, axes) = (5, 3);
        let orig: Vec<Complex64> = (0..125).map(|i| Complex64::new(i as f64, (i % 7) as f64)).collect();
        let mut data = orig.clone();
        transform(&mut data, p, axes, Direction::Forward);
        transform(&mut data, p, axes, Direction::Inverse);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / 125.0 - b).norm() < 1e-10);
        }
    }
}
