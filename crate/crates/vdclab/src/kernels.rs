//! Fejér and Dirichlet kernels on the integers and on the circle, their closed
//! forms, and the convolution identities used by the main-term analysis.
//!
//! Closed forms switch to truncated series near the removable singularities so
//! the acceptance grids can include points arbitrarily close to 0.

use std::f64::consts::PI;

use crate::numeric::signed_frac;

/// Kernel families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelFamily {
    FejerZ,
    FejerT,
    Dirichlet,
}

/// A kernel with its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub order: u32,
}

impl KernelSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self.family {
            KernelFamily::FejerZ => fejer_z(self.order, x.round() as i64),
            KernelFamily::FejerT => fejer_t(self.order, x),
            KernelFamily::Dirichlet => dirichlet(self.order, x),
        }
    }
}

/// Triangular Fejér weight on the integers: `(1 - |n|/N)_+`.
pub fn fejer_z(n_order: u32, n: i64) -> f64 {
    let nf = n_order as f64;
    (1.0 - (n.unsigned_abs() as f64) / nf).max(0.0)
}

/// Switch to series this close to the removable singularity of the closed
/// forms; `|sin(pi u)|` is then below ~3e-9 and the quotient would lose
/// every significant digit.
const SERIES_CUTOFF: f64 = 1e-9;

/// Fejér kernel on the circle: `(1/N) (sin(pi N xi) / sin(pi xi))^2`, with the
/// removable singularity at `xi == 0 (mod 1)` evaluating to `N`.
pub fn fejer_t(n_order: u32, xi: f64) -> f64 {
    let n = n_order as f64;
    let u = signed_frac(xi);
    if u == 0.0 {
        return n;
    }
    if u.abs() < SERIES_CUTOFF {
        // sin(pi N u)/sin(pi u) = N (1 - (pi u)^2 (N^2-1)/6 + O(u^4))
        let r = n * (1.0 - (PI * u).powi(2) * (n * n - 1.0) / 6.0);
        return r * r / n;
    }
    let denom = (PI * u).sin();
    // reduce N*u before taking the sine; the square kills the sign
    let num = (PI * signed_frac(n * u)).sin();
    (num / denom).powi(2) / n
}

/// Dirichlet kernel: `sin((2N+1) pi xi) / sin(pi xi)`, with the removable
/// singularity evaluating to `2N + 1`.
pub fn dirichlet(n_order: u32, xi: f64) -> f64 {
    let m = 2.0 * n_order as f64 + 1.0;
    let u = signed_frac(xi);
    if u == 0.0 {
        return m;
    }
    if u.abs() < SERIES_CUTOFF {
        return m * (1.0 - (PI * u).powi(2) * (m * m - 1.0) / 6.0);
    }
    let denom = (PI * u).sin();
    let x = m * u;
    let k = x.round();
    let w = x - k;
    let num = (PI * w).sin();
    // sin(pi(k + w)) = (-1)^k sin(pi w)
    let sign = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
    sign * num / denom
}

/// Fourier coefficients `c_0, c_1, ..., c_K` (symmetric, `c_{-k} = c_k`) of a
/// kernel on the circle.
pub fn kernel_coeffs(spec: KernelSpec) -> Vec<f64> {
    let n = spec.order;
    match spec.family {
        KernelFamily::FejerZ | KernelFamily::FejerT => {
            (0..=n).map(|k| fejer_z(n, k as i64)).collect()
        }
        KernelFamily::Dirichlet => vec![1.0; n as usize + 1],
    }
}

/// Convolution on the circle in coefficient space: pointwise product of the
/// symmetric coefficient sequences. Exact at integer frequencies.
pub fn convolve_coeffs(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len().min(b.len());
    (0..len).map(|k| a[k] * b[k]).collect()
}

/// Evaluate a symmetric coefficient sequence at `xi`:
/// `c_0 + 2 sum_k c_k cos(2 pi k xi)`.
pub fn eval_coeffs(coeffs: &[f64], xi: f64) -> f64 {
    let mut acc = crate::numeric::CompensatedSum::new();
    acc.add(coeffs[0]);
    for (k, &ck) in coeffs.iter().enumerate().skip(1) {
        acc.add(2.0 * ck * crate::numeric::cos_two_pi(k as f64 * xi));
    }
    acc.value()
}
