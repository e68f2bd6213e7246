//! Small floating-point helpers shared by the numerical modules.

use num_complex::Complex64;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `exp(2 pi i k / n)`.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let angle = 2.0 * core::f64::consts::PI * ((k % n) as f64) / (n as f64);
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_error(a: f64, b: f64, floor: f64) -> f64 {
    let scale = libm::fabs(a).max(libm::fabs(b)).max(floor);
    libm::fabs(a - b) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn roots_of_unity() {
        let z = root_of_unity(1, 4);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((root_of_unity(5, 5) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
