//! The Fejér-weighted indicator `Psi_N(n) = (1 - n/N) 1_S(n)`, the measured
//! pair `(delta1, delta2)`, and the witness cosine polynomial
//!
//! `T(xi) = (delta1 + E Psi cos(2 pi n xi)) / (delta1 + E Psi)`
//!
//! whose constant term `gamma_hat = delta1 / (delta1 + delta2)` certifies an
//! upper bound for the least constant term over non-negative cosine
//! polynomials supported on `S ∩ [N]`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::constants::{PATH_AGREEMENT_TOL, T0_TOL};
use crate::error::{Error, Result};
use crate::growth::GrowthFunction;
use crate::numeric::{cos_two_pi, frac_int_times, CompensatedSum};
use crate::sequence::{generate, IntegerSet};

/// Weighted indicator sequence on `[1, N]`, stored sparsely on its support.
#[derive(Clone, Debug)]
pub struct Psi {
    scale: u64,
    /// `(n, Psi(n))` sorted by `n`; zero weights (e.g. at `n = N`) kept so the
    /// support set is visible.
    weights: Vec<(u64, f64)>,
    source: String,
}

impl Psi {
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn weights(&self) -> &[(u64, f64)] {
        &self.weights
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Value at a point (zero off the support).
    pub fn value(&self, n: u64) -> f64 {
        match self.weights.binary_search_by_key(&n, |&(k, _)| k) {
            Ok(i) => self.weights[i].1,
            Err(_) => 0.0,
        }
    }

    /// `E_{n in [N]} Psi(n)`, compensated. This is `delta2`.
    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &(_, w) in &self.weights {
            acc.add(w);
        }
        acc.value() / self.scale as f64
    }

    /// Largest supported frequency with a nonzero weight.
    pub fn degree(&self) -> u64 {
        self.weights
            .iter()
            .rev()
            .find(|&&(_, w)| w != 0.0)
            .map_or(0, |&(n, _)| n)
    }

    /// `G(xi) = (1/N) sum_n Psi(n) cos(2 pi xi n)` by direct compensated
    /// summation with exact phase reduction.
    pub fn cosine_transform_at(&self, xi: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for &(n, w) in &self.weights {
            if w != 0.0 {
                acc.add(w * cos_two_pi(frac_int_times(n, xi)));
            }
        }
        acc.value() / self.scale as f64
    }
}

/// The default weight: `Psi = F_N^Z . 1_S` on `[1, N]`.
pub fn build_psi(f: &GrowthFunction, n: u64) -> Result<Psi> {
    build_psi_with_weight(f, n, fejer_weight)
}

/// Fejér weight `(1 - n/N)` on `[1, N]`.
pub fn fejer_weight(n: u64, scale: u64) -> f64 {
    1.0 - n as f64 / scale as f64
}

/// Weight hook: the non-negative transform weight is pluggable, but only the
/// Fejér weight ships.
pub fn build_psi_with_weight(
    f: &GrowthFunction,
    n: u64,
    weight: impl Fn(u64, u64) -> f64,
) -> Result<Psi> {
    let set = generate(f, n)?;
    Ok(psi_from_set(&set, weight))
}

/// Weighted indicator from an explicit set.
pub fn psi_from_set(set: &IntegerSet, weight: impl Fn(u64, u64) -> f64) -> Psi {
    let n = set.upper_bound();
    let weights = set.elements().iter().map(|&s| (s, weight(s, n))).collect();
    Psi {
        scale: n,
        weights,
        source: set.source().to_string(),
    }
}

/// Result of the grid minimization of the cosine transform.
#[derive(Clone, Copy, Debug)]
pub struct GridMin {
    /// `delta1 = max(0, -min_grid G)`.
    pub delta1: f64,
    /// Grid point achieving the minimum.
    pub argmin_xi: f64,
    /// Derivative-based bound: the true minimum is above
    /// `grid_min - cert_slack`.
    pub cert_slack: f64,
    pub grid_size: u64,
    /// Raw grid minimum of `G`.
    pub grid_min: f64,
    /// Minimum after local refinement around the argmin (always <= grid_min).
    pub refined_min: f64,
    pub refined_xi: f64,
}

/// Evaluate `G` on the uniform grid `{j/grid_size}` (fast transform) and
/// return the certified minimum data.
///
/// The FFT route is cross-checked against direct compensated summation on a
/// subsample; disagreement beyond the path tolerance is a hard error.
pub fn min_cosine_transform(psi: &Psi, grid_size: u64) -> Result<GridMin> {
    if grid_size < 8 * psi.scale() {
        return Err(Error::Config(format!(
            "grid_size {grid_size} below 8N = {}",
            8 * psi.scale()
        )));
    }
    if grid_size > (1u64 << 28) {
        return Err(Error::Overflow(format!("grid_size {grid_size} too large")));
    }
    let g = grid_values(psi, grid_size);

    let mut min = f64::INFINITY;
    let mut argmin = 0usize;
    for (j, &v) in g.iter().enumerate() {
        if v < min {
            min = v;
            argmin = j;
        }
    }

    // spot-check the transform against the direct route
    let step = (grid_size / 16).max(1) as usize;
    for j in (0..g.len()).step_by(step).chain([argmin]) {
        let xi = j as f64 / grid_size as f64;
        let direct = psi.cosine_transform_at(xi);
        if (direct - g[j]).abs() > PATH_AGREEMENT_TOL {
            return Err(Error::CheckFailed(format!(
                "transform paths disagree at j={j}: fft {} vs direct {direct}",
                g[j]
            )));
        }
    }

    let argmin_xi = argmin as f64 / grid_size as f64;
    let (refined_xi, refined_min) = refine_minimum(psi, argmin_xi, 1.0 / grid_size as f64);
    let sum_abs: f64 = psi.weights().iter().map(|&(_, w)| w.abs()).sum();
    let cert_slack = PI * psi.degree() as f64 * (sum_abs / psi.scale() as f64) / grid_size as f64;

    Ok(GridMin {
        delta1: (-min).max(0.0),
        argmin_xi,
        cert_slack,
        grid_size,
        grid_min: min,
        refined_min: refined_min.min(min),
        refined_xi,
    })
}

/// `G` on the whole grid via one FFT of the sparse weight vector.
pub fn grid_values(psi: &Psi, grid_size: u64) -> Vec<f64> {
    let k = grid_size as usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for &(n, w) in psi.weights() {
        buf[(n % grid_size) as usize].re += w;
    }
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let inv_n = 1.0 / psi.scale() as f64;
    buf.iter().map(|z| z.re * inv_n).collect()
}

/// Ternary search of `G` on a bracket around the grid argmin; a 10x finer
/// local scan seeds the bracket.
fn refine_minimum(psi: &Psi, xi: f64, h: f64) -> (f64, f64) {
    let mut best_x = xi;
    let mut best = psi.cosine_transform_at(xi);
    for i in -10i32..=10 {
        let x = xi + i as f64 * h / 10.0;
        let v = psi.cosine_transform_at(x);
        if v < best {
            best = v;
            best_x = x;
        }
    }
    let (mut lo, mut hi) = (best_x - h / 10.0, best_x + h / 10.0);
    for _ in 0..60 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if psi.cosine_transform_at(m1) <= psi.cosine_transform_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    let v = psi.cosine_transform_at(x);
    if v < best {
        (x, v)
    } else {
        (best_x, best)
    }
}

/// Real even cosine polynomial `a0 + sum_h a_h cos(2 pi h xi)` with sparse
/// support.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosinePoly {
    pub a0: f64,
    /// frequency -> coefficient, sparse
    pub coeffs: BTreeMap<u64, f64>,
}

impl CosinePoly {
    pub fn constant(a0: f64) -> Self {
        Self { a0, coeffs: BTreeMap::new() }
    }

    pub fn degree(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .find(|&(_, &a)| a != 0.0)
            .map_or(0, |(&h, _)| h)
    }

    /// `T(0) = a0 + sum a_h`, compensated.
    pub fn value_at_zero(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.add(self.a0);
        for &a in self.coeffs.values() {
            acc.add(a);
        }
        acc.value()
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.add(self.a0);
        for (&h, &a) in &self.coeffs {
            if a != 0.0 {
                acc.add(a * cos_two_pi(frac_int_times(h, xi)));
            }
        }
        acc.value()
    }

    /// `sup |T'| <= 2 pi sum h |a_h|`.
    pub fn derivative_bound(&self) -> f64 {
        2.0 * PI
            * self
                .coeffs
                .iter()
                .map(|(&h, &a)| h as f64 * a.abs())
                .sum::<f64>()
    }

    /// Support is contained in the given set.
    pub fn support_in(&self, set: &IntegerSet) -> bool {
        self.coeffs
            .iter()
            .all(|(&h, &a)| a == 0.0 || set.contains(h))
    }
}

/// Certificate of grid-checked near-non-negativity.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Certificate {
    /// Minimum of `T` over the certification grid.
    pub grid_min: f64,
    /// Lipschitz gap: the true minimum is above `grid_min - slack`.
    pub slack: f64,
    pub grid_size: u64,
}

/// A cosine polynomial together with its non-negativity certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifiedPoly {
    pub poly: CosinePoly,
    pub cert: Certificate,
}

/// Witness data at one scale.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub function: String,
    pub c: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub delta1: f64,
    pub delta2: f64,
    pub gamma_hat: f64,
    pub argmin_xi: f64,
    pub cert_slack: f64,
    pub grid_size: u64,
}

/// Assemble the witness polynomial from the measured pair:
/// `a0 = delta1/(delta1+delta2)`, `a_h = Psi(h) / (N (delta1 + delta2))`.
/// `T(0) = 1` holds by construction since `delta2` is the mean of `Psi`.
pub fn assemble_witness(delta1: f64, psi: &Psi, grid: &GridMin) -> Result<CertifiedPoly> {
    let delta2 = psi.mean();
    let denom = delta1 + delta2;
    if !(denom > 0.0) {
        return Err(Error::Degenerate(format!(
            "delta1 + delta2 = {denom}, no witness polynomial exists"
        )));
    }
    let n = psi.scale() as f64;
    let coeffs = psi
        .weights()
        .iter()
        .filter(|&&(_, w)| w != 0.0)
        .map(|&(h, w)| (h, w / (n * denom)))
        .collect();
    let poly = CosinePoly { a0: delta1 / denom, coeffs };
    let t0 = poly.value_at_zero();
    if (t0 - 1.0).abs() > T0_TOL {
        return Err(Error::CheckFailed(format!("T(0) = {t0} deviates from 1")));
    }
    // T = (delta1 + G)/(delta1 + delta2): the certificate transfers linearly
    let cert = Certificate {
        grid_min: (delta1 + grid.grid_min) / denom,
        slack: grid.cert_slack / denom,
        grid_size: grid.grid_size,
    };
    Ok(CertifiedPoly { poly, cert })
}

/// Full pipeline at one scale: generate, weigh, minimize, assemble.
pub fn witness_report(
    f: &GrowthFunction,
    n: u64,
    grid_mult: u32,
) -> Result<(WitnessReport, CertifiedPoly, Psi)> {
    let psi = build_psi(f, n)?;
    let delta2 = psi.mean();
    if !(delta2 > 0.0) {
        return Err(Error::Degenerate(format!(
            "mean of Psi at N = {n} is {delta2}; report flagged degenerate"
        )));
    }
    let grid = min_cosine_transform(&psi, grid_mult as u64 * n)?;
    let certified = assemble_witness(grid.delta1, &psi, &grid)?;
    let report = WitnessReport {
        function: f.to_string(),
        c: f.c(),
        n,
        delta1: grid.delta1,
        delta2,
        gamma_hat: certified.poly.a0,
        argmin_xi: grid.argmin_xi,
        cert_slack: grid.cert_slack,
        grid_size: grid.grid_size,
    };
    Ok((report, certified, psi))
}
