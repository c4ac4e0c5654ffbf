//! Shared numerical primitives: compensated summation and argument-reduced
//! trigonometry for oscillatory sums with large integer frequencies.

use rustfft::num_complex::Complex64;

/// Neumaier-compensated accumulator.
///
/// Keeps the running error term even when the addend is larger than the sum,
/// which plain Kahan summation loses.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // x slightly below an integer can round the subtraction up to exactly 1.
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Signed reduction to `[-1/2, 1/2)`.
#[inline]
pub fn signed_frac(x: f64) -> f64 {
    let f = frac(x);
    if f >= 0.5 {
        f - 1.0
    } else {
        f
    }
}

/// Distance to the nearest integer.
#[inline]
pub fn torus_distance(x: f64) -> f64 {
    signed_frac(x).abs()
}

/// `cos(2*pi*x)` after reduction of `x` to `[-1/2, 1/2)`.
#[inline]
pub fn cos_two_pi(x: f64) -> f64 {
    (std::f64::consts::TAU * signed_frac(x)).cos()
}

/// `sin(2*pi*x)` after reduction of `x` to `[-1/2, 1/2)`.
#[inline]
pub fn sin_two_pi(x: f64) -> f64 {
    (std::f64::consts::TAU * signed_frac(x)).sin()
}

/// `e(x) = exp(2*pi*i*x)` with reduced argument.
#[inline]
pub fn e_two_pi(x: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * signed_frac(x)).sin_cos();
    Complex64::new(c, s)
}

/// `frac(n * xi)` computed without the catastrophic loss that a plain
/// `n as f64 * xi` suffers once `n * xi` is large.
///
/// `xi` is split into a 26-bit head `k / 2^26` plus a small tail; `n * k` is
/// reduced modulo `2^26` in integer arithmetic, which is exact, and only the
/// tiny tail product carries rounding error.
#[inline]
pub fn frac_int_times(n: u64, xi: f64) -> f64 {
    const SCALE: f64 = (1u64 << 26) as f64;
    let x = frac(xi);
    let k = (x * SCALE).round();
    let lo = x - k / SCALE; // exact: k/2^26 is within one ulp-scale of x
    let ki = k as u64;
    let m = ((n as u128 * ki as u128) % (1u128 << 26)) as u64;
    frac(m as f64 / SCALE + n as f64 * lo)
}

/// `frac(j * n / k)` for grid points `xi = j / k`, exact in integer arithmetic.
#[inline]
pub fn frac_grid(j: u64, n: u64, k: u64) -> f64 {
    ((j as u128 * n as u128) % k as u128) as f64 / k as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_basics() {
        assert_eq!(frac(0.25), 0.25);
        assert!((frac(-1.3) - 0.7).abs() < 1e-15);
        assert_eq!(frac(3.0), 0.0);
        assert_eq!(signed_frac(0.75), -0.25);
        assert!((torus_distance(2.9) - torus_distance(0.1)).abs() < 1e-15);
    }

    #[test]
    fn compensated_beats_naive() {
        // 1 + 1e-16 added 1e6 times: naive summation loses the tail entirely.
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1_000_000 {
            acc.add(1e-16);
        }
        assert!((acc.value() - (1.0 + 1e-10)).abs() < 1e-14);
    }

    #[test]
    fn split_phase_matches_exact_rational() {
        // xi = j/k grid points admit an exact integer path to compare against.
        let k = 1u64 << 20;
        for &j in &[1u64, 7, 12345, 524_287] {
            let xi = j as f64 / k as f64;
            for &n in &[1u64, 1023, 1 << 15, (1 << 20) - 1] {
                let exact = frac_grid(j, n, k);
                let split = frac_int_times(n, xi);
                let d = torus_distance(exact - split);
                assert!(d < 1e-12, "j={j} n={n}: {exact} vs {split}");
            }
        }
    }

    #[test]
    fn cos_reduction_consistent() {
        for i in 0..1000 {
            let x = i as f64 * 0.37;
            let direct = (std::f64::consts::TAU * x).cos();
            assert!((cos_two_pi(x) - direct).abs() < 1e-9);
        }
    }
}
