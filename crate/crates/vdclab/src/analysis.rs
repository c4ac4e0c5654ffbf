//! Numerical verification of the analytic skeleton: the generalized
//! Van der Corput inequality, the sawtooth decomposition with its error
//! budgets, the second-derivative exponential-sum test, the main-term floor,
//! and the bridge between extremal density and the witness constant term.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::constants::{
    BRIDGE_TOL, DECOMPOSITION_BUDGET_C, EXPSUM_C, EXPSUM_PATH_TOL, GVDC_REL_TOL,
    SECOND_DERIVATIVE_C,
};
use crate::error::{Error, Result};
use crate::extremal::ExtremalResult;
use crate::growth::GrowthFunction;
use crate::numeric::{cos_two_pi, e_two_pi, frac, frac_int_times, torus_distance, CompensatedSum};
use crate::witness::{CertifiedPoly, Psi};

/// Sawtooth `phi(xi) = {xi} - 1/2`, exact from the fractional part.
pub fn sawtooth(xi: f64) -> f64 {
    frac(xi) - 0.5
}

/// Outcome of the generalized inequality check
/// `|sum y_n|^2 <= (N+H) (a0 sum |y_n|^2 + sum_h |a_h| |sum y_{n+h} conj(y_n)|)`.
#[derive(Clone, Copy, Debug)]
pub struct GvdcCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; must be >= -tol * rhs.
    pub slack: f64,
}

/// Evaluate both sides for a certified non-negative polynomial with `T(0)=1`.
/// Uncertified input is rejected.
pub fn check_gvdc_inequality(y: &[Complex64], t: &CertifiedPoly) -> Result<GvdcCheck> {
    let t0 = t.poly.value_at_zero();
    if (t0 - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("T(0) = {t0}, not normalized")));
    }
    if t.cert.grid_min < -1e-6 {
        return Err(Error::Domain(format!(
            "polynomial not certified non-negative (grid min {})",
            t.cert.grid_min
        )));
    }
    let n = y.len();
    let h_max = t.poly.degree() as usize;

    let mut total = Complex64::new(0.0, 0.0);
    let mut sq = CompensatedSum::new();
    for &v in y {
        total += v;
        sq.add(v.norm_sqr());
    }
    let lhs = total.norm_sqr();

    let mut rhs = CompensatedSum::new();
    rhs.add(t.poly.a0 * sq.value());
    for (&h, &a) in &t.poly.coeffs {
        if a == 0.0 {
            continue;
        }
        let h = h as usize;
        let mut corr = Complex64::new(0.0, 0.0);
        if h < n {
            for i in 0..n - h {
                corr += y[i + h] * y[i].conj();
            }
        }
        rhs.add(a.abs() * corr.norm());
    }
    let rhs = (n + h_max) as f64 * rhs.value();
    Ok(GvdcCheck { lhs, rhs, slack: rhs - lhs })
}

/// One sawtooth-decomposition evaluation.
///
/// Above the verified identity point `n_lo`, the indicator splits exactly as
/// `1_S(n) = (eta(n+1) - eta(n)) + phi(-eta(n+1)) - phi(-eta(n))`, and the
/// truncated Fourier expansion of `phi` turns the sawtooth part into the
/// explicit double sum `I1` plus a remainder controlled by `budget`. Below
/// `n_lo` the indicator is used directly, so `main + I1 + residual = lhs`
/// holds identically with `residual` the Fourier-truncation error alone.
#[derive(Clone, Copy, Debug)]
pub struct DecompositionReport {
    pub n: u64,
    pub m: u64,
    pub xi: f64,
    /// `E Psi(n) cos(2 pi xi n)`, all of `[N]`.
    pub lhs: f64,
    /// Weighted difference-term mean plus the exact sub-identity part.
    pub main: f64,
    /// The explicit double sum over `0 < |m| <= M`.
    pub i1: f64,
    /// `lhs - main - i1`.
    pub residual: f64,
    /// `C * (E min(1, 1/(M dist(eta(n)))) + E min(1, 1/(M dist(eta(n+1)))))`.
    pub budget: f64,
    /// First index from which the floor identity was applied.
    pub identity_start: u64,
}

impl DecompositionReport {
    pub fn within_budget(&self) -> bool {
        self.residual.abs() <= self.budget
    }
}

/// Decompose the weighted cosine mean at `xi` with truncation level `m_level`.
pub fn decompose(
    f: &GrowthFunction,
    psi: &Psi,
    m_level: u64,
    xi: f64,
    budget_c: f64,
) -> Result<DecompositionReport> {
    let n = psi.scale();
    if m_level < 1 {
        return Err(Error::Config("truncation level M must be >= 1".into()));
    }
    let n_lo = f.identity_from().max(1);
    let lhs = psi.cosine_transform_at(xi);

    // exact part below the identity point
    let mut main_acc = CompensatedSum::new();
    for &(s, w) in psi.weights() {
        if s < n_lo && w != 0.0 {
            main_acc.add(w * cos_two_pi(frac_int_times(s, xi)));
        }
    }

    if n_lo > n {
        // the whole range is below the identity point: exact, no remainder
        let main = main_acc.value() / n as f64;
        return Ok(DecompositionReport {
            n,
            m: m_level,
            xi,
            lhs,
            main,
            i1: 0.0,
            residual: lhs - main,
            budget: 0.0,
            identity_start: n_lo,
        });
    }

    let count = (n - n_lo + 1) as usize;
    let mut eta = Vec::with_capacity(count + 1);
    for k in n_lo..=(n + 1) {
        eta.push(f.inverse(k as f64)?);
    }

    let nf = n as f64;
    let mut budget_acc = CompensatedSum::new();
    let mut fejer_cos = Vec::with_capacity(count);
    for (i, k) in (n_lo..=n).enumerate() {
        let w = 1.0 - k as f64 / nf;
        fejer_cos.push(w * cos_two_pi(frac_int_times(k, xi)));
        main_acc.add(fejer_cos[i] * (eta[i + 1] - eta[i]));
        let d0 = torus_distance(eta[i]);
        let d1 = torus_distance(eta[i + 1]);
        let mf = m_level as f64;
        budget_acc.add(if d0 == 0.0 { 1.0 } else { (1.0 / (mf * d0)).min(1.0) });
        budget_acc.add(if d1 == 0.0 { 1.0 } else { (1.0 / (mf * d1)).min(1.0) });
    }
    let main = main_acc.value() / nf;
    let budget = budget_c * budget_acc.value() / nf;

    // I1 = sum_{m=1}^{M} Im(w_m) / (pi m),
    // w_m = E F(n) cos(2 pi xi n) (e(m eta(n+1)) - e(m eta(n)))
    let base_a: Vec<Complex64> = eta[..count].iter().map(|&x| e_two_pi(x)).collect();
    let base_b: Vec<Complex64> = eta[1..].iter().map(|&x| e_two_pi(x)).collect();
    let mut za = base_a.clone();
    let mut zb = base_b.clone();
    let mut i1 = CompensatedSum::new();
    for m in 1..=m_level {
        if m > 1 {
            for i in 0..count {
                za[i] *= base_a[i];
                zb[i] *= base_b[i];
            }
        }
        // pairing m with -m leaves only the imaginary part:
        // (1/(2 pi i m)) (w - conj(w)) = Im(w) / (pi m)
        let mut wim = CompensatedSum::new();
        for i in 0..count {
            wim.add(fejer_cos[i] * (zb[i].im - za[i].im));
        }
        i1.add(wim.value() / (nf * PI * m as f64));
    }
    let i1 = i1.value();

    Ok(DecompositionReport {
        n,
        m: m_level,
        xi,
        lhs,
        main,
        i1,
        residual: lhs - main - i1,
        budget,
        identity_start: n_lo,
    })
}

/// Grid minimum of the main term `E F_N(n) cos(2 pi xi n) (eta(n+1) - eta(n))`.
#[derive(Clone, Copy, Debug)]
pub struct MainTermMin {
    pub min: f64,
    pub argmin_xi: f64,
    pub grid_size: u64,
}

pub fn main_term_min(f: &GrowthFunction, n: u64, grid_size: u64) -> Result<MainTermMin> {
    if grid_size < 8 * n {
        return Err(Error::Config(format!("grid {grid_size} below 8N = {}", 8 * n)));
    }
    let n_lo = {
        let start = f.evaluate(f.mono_start() as f64)?;
        (start.ceil() as u64).max(1)
    };
    let nf = n as f64;
    let k = grid_size as usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    let mut eta_prev = f.inverse(n_lo as f64)?;
    for i in n_lo..=n {
        let eta_next = f.inverse((i + 1) as f64)?;
        let w = (1.0 - i as f64 / nf) * (eta_next - eta_prev);
        buf[(i % grid_size) as usize].re += w;
        eta_prev = eta_next;
    }
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let mut min = f64::INFINITY;
    let mut argmin = 0usize;
    for (j, z) in buf.iter().enumerate() {
        let v = z.re / nf;
        if v < min {
            min = v;
            argmin = j;
        }
    }
    Ok(MainTermMin {
        min,
        argmin_xi: argmin as f64 / grid_size as f64,
        grid_size,
    })
}

/// Exponential sum `sum_{n in [lo, hi]} e(m eta(n))` computed two ways:
/// direct compensated summation and dyadic-block partial sums. Both use the
/// same phases, so disagreement indicates a summation fault.
#[derive(Clone, Copy, Debug)]
pub struct ExpsumCheck {
    pub direct: Complex64,
    pub dyadic: Complex64,
    /// `|direct - dyadic|`.
    pub path_gap: f64,
    /// Dyadically summed second-derivative-test budget with the frozen
    /// constant; `|direct| <= bound` is the tested claim.
    pub bound: f64,
}

pub fn expsum(f: &GrowthFunction, m: i64, lo: u64, hi: u64) -> Result<ExpsumCheck> {
    if m == 0 {
        return Err(Error::Config("m must be nonzero".into()));
    }
    if lo < f.mono_start().max(1) || hi < lo {
        return Err(Error::Domain(format!(
            "range [{lo}, {hi}] outside the validity of the inverse"
        )));
    }
    let mf = m as f64;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    // dyadic blocks [2^j, 2^{j+1}) intersected with [lo, hi]
    let mut dy_re = CompensatedSum::new();
    let mut dy_im = CompensatedSum::new();
    let mut bound = 0.0f64;
    let mut j = 63 - lo.leading_zeros();
    loop {
        let a = lo.max(1u64 << j);
        let b = hi.min((1u64 << (j + 1)) - 1);
        if a > b {
            break;
        }
        let mut block_re = CompensatedSum::new();
        let mut block_im = CompensatedSum::new();
        for k in a..=b {
            let z = e_two_pi(mf * f.inverse(k as f64)?);
            re.add(z.re);
            im.add(z.im);
            block_re.add(z.re);
            block_im.add(z.im);
        }
        dy_re.add(block_re.value());
        dy_im.add(block_im.value());
        // Second-derivative budget on the block. The phase second derivative
        // is eta''(y) = -h''(x)/h'(x)^3 at x = eta(y); |eta''| decreases, so
        // its extremes over the block sit at the endpoints.
        let eta2_abs = |y: f64| -> Result<f64> {
            let x = f.inverse(y)?;
            let h1 = f.derivative(1, x)?;
            let h2 = f.derivative(2, x)?;
            Ok((h2 / (h1 * h1 * h1)).abs())
        };
        let lam_hi = eta2_abs(a as f64)?;
        let lam_lo = eta2_abs(b as f64)?;
        let lambda = mf.abs() * lam_lo;
        let alpha = (lam_hi / lam_lo).max(1.0);
        let len = (b - a + 1) as f64;
        bound += EXPSUM_C * (alpha * len * lambda.sqrt() + 1.0 / lambda.sqrt());
        if b == hi {
            break;
        }
        j += 1;
    }
    let direct = Complex64::new(re.value(), im.value());
    let dyadic = Complex64::new(dy_re.value(), dy_im.value());
    let gap = (direct - dyadic).norm();
    let span = (hi - lo + 1) as f64;
    if gap > EXPSUM_PATH_TOL * span {
        return Err(Error::CheckFailed(format!(
            "direct and dyadic exponential sums disagree by {gap}"
        )));
    }
    Ok(ExpsumCheck { direct, dyadic, path_gap: gap, bound })
}

/// A twice continuously differentiable phase for the second-derivative test.
pub trait Phase {
    fn value(&self, t: f64) -> f64;
    fn second_derivative(&self, t: f64) -> f64;
}

/// Quadratic phase `t^2 / (2 q)`.
pub struct QuadraticPhase {
    pub q: f64,
}

impl Phase for QuadraticPhase {
    fn value(&self, t: f64) -> f64 {
        t * t / (2.0 * self.q)
    }
    fn second_derivative(&self, _t: f64) -> f64 {
        1.0 / self.q
    }
}

/// Phase `m * eta(t)`.
pub struct EtaPhase<'a> {
    pub f: &'a GrowthFunction,
    pub m: f64,
}

impl Phase for EtaPhase<'_> {
    fn value(&self, t: f64) -> f64 {
        self.m * self.f.inverse(t).expect("eta in range")
    }
    fn second_derivative(&self, t: f64) -> f64 {
        // eta'' (y) = -h''(x)/h'(x)^3 at x = eta(y)
        let x = self.f.inverse(t).expect("eta in range");
        let h1 = self.f.derivative(1, x).expect("h' in range");
        let h2 = self.f.derivative(2, x).expect("h'' in range");
        -self.m * h2 / (h1 * h1 * h1)
    }
}

/// Outcome of the second-derivative exponential-sum test.
#[derive(Clone, Copy, Debug)]
pub struct SecondDerivativeCheck {
    pub sum_abs: f64,
    pub bound: f64,
    /// `bound - sum_abs`; non-negative when the test passes.
    pub margin: f64,
}

/// Verify `0 < lambda <= |f''| <= alpha lambda` by sampling, then check
/// `|sum_{n in I} e(f(n))| <= C'' (alpha |I| sqrt(lambda) + 1/sqrt(lambda))`.
///
/// Premise violations are reported as domain errors, bound violations as
/// check failures; the two must stay distinguishable.
pub fn check_second_derivative_test(
    phase: &dyn Phase,
    a: f64,
    b: f64,
    lambda: f64,
    alpha: f64,
) -> Result<SecondDerivativeCheck> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    if !(alpha >= 1.0) {
        return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
    }
    let samples = 1024;
    for i in 0..=samples {
        let t = a + (b - a) * i as f64 / samples as f64;
        let d2 = phase.second_derivative(t).abs();
        if !(d2 >= lambda * (1.0 - 1e-9) && d2 <= alpha * lambda * (1.0 + 1e-9)) {
            return Err(Error::Domain(format!(
                "premise violated at t = {t}: |f''| = {d2} outside [{lambda}, {}]",
                alpha * lambda
            )));
        }
    }
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    let lo = a.ceil() as i64;
    let hi = b.floor() as i64;
    for n in lo..=hi {
        let z = e_two_pi(phase.value(n as f64));
        re.add(z.re);
        im.add(z.im);
    }
    let sum_abs = Complex64::new(re.value(), im.value()).norm();
    let bound = SECOND_DERIVATIVE_C * (alpha * (b - a) * lambda.sqrt() + 1.0 / lambda.sqrt());
    let margin = bound - sum_abs;
    if margin < 0.0 {
        return Err(Error::CheckFailed(format!(
            "second-derivative bound violated: |sum| = {sum_abs} > {bound}"
        )));
    }
    Ok(SecondDerivativeCheck { sum_abs, bound, margin })
}

/// Outcome of the bridge check `|A|/N <= 2 a0`.
#[derive(Clone, Copy, Debug)]
pub struct BridgeCheck {
    pub density: f64,
    pub two_a0: f64,
    pub margin: f64,
}

/// The density-to-witness bridge. A violation contradicts a theorem, so it is
/// a hard failure carrying full diagnostics.
pub fn check_delta_leq_2gamma(extremal: &ExtremalResult, t: &CertifiedPoly) -> Result<BridgeCheck> {
    let density = extremal.density();
    let two_a0 = 2.0 * t.poly.a0;
    let margin = two_a0 + BRIDGE_TOL - density;
    if margin < 0.0 {
        return Err(Error::CheckFailed(format!(
            "bridge violated at N = {}: |A|/N = {density} > 2 a0 = {two_a0} \
             (best_size = {}, witness = {:?}, cert grid min = {}, slack = {})",
            extremal.n, extremal.best_size, extremal.witness_set, t.cert.grid_min, t.cert.slack
        )));
    }
    Ok(BridgeCheck { density, two_a0, margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::generate;
    use crate::witness::{build_psi, witness_report, Certificate, CosinePoly};
    use rand::Rng;
    use rand::SeedableRng;

    const HORIZON: u64 = 1 << 16;

    fn power(c: f64) -> GrowthFunction {
        GrowthFunction::power(c, HORIZON).unwrap()
    }

    #[test]
    fn sawtooth_examples() {
        assert_eq!(sawtooth(0.25), -0.25);
        assert_eq!(sawtooth(0.0), -0.5);
        assert!((sawtooth(-1.3) - 0.2).abs() < 1e-15);
        assert!((0.0..0.5).contains(&sawtooth(0.9999)));
    }

    /// Exact splitting at integer points: wherever the floor identity holds,
    /// `1_S(n) = (eta(n+1)-eta(n)) + phi(-eta(n+1)) - phi(-eta(n))`.
    #[test]
    fn indicator_splits_exactly() {
        let f = power(1.1);
        let n = 4096u64;
        let s = generate(&f, n).unwrap();
        for k in f.identity_from()..=n {
            let e0 = f.inverse(k as f64).unwrap();
            let e1 = f.inverse((k + 1) as f64).unwrap();
            let split = (e1 - e0) + sawtooth(-e1) - sawtooth(-e0);
            let ind = if s.contains(k) { 1.0 } else { 0.0 };
            assert!(
                (split - ind).abs() < 1e-10,
                "n={k}: split {split} vs indicator {ind}"
            );
        }
    }

    #[test]
    fn gvdc_zero_sequence() {
        let f = power(1.1);
        let (_, t, _) = witness_report(&f, 256, 16).unwrap();
        let y = vec![Complex64::new(0.0, 0.0); 64];
        let chk = check_gvdc_inequality(&y, &t).unwrap();
        assert_eq!(chk.lhs, 0.0);
        assert_eq!(chk.rhs, 0.0);
    }

    #[test]
    fn gvdc_recovers_classical_inequality() {
        // normalized Fejér coefficients: a0 = 1/(H+1), a_h = 2(1-h/(H+1))/(H+1)
        let h_max = 12u64;
        let hp1 = (h_max + 1) as f64;
        let mut coeffs = std::collections::BTreeMap::new();
        for h in 1..=h_max {
            coeffs.insert(h, 2.0 * (1.0 - h as f64 / hp1) / hp1);
        }
        let poly = CosinePoly { a0: 1.0 / hp1, coeffs };
        assert!((poly.value_at_zero() - 1.0).abs() < 1e-12);
        let t = CertifiedPoly {
            poly,
            cert: Certificate { grid_min: 0.0, slack: 0.0, grid_size: 0 },
        };
        let n = 100;
        let y = vec![Complex64::new(1.0, 0.0); n];
        let chk = check_gvdc_inequality(&y, &t).unwrap();
        assert_eq!(chk.lhs, (n * n) as f64);
        assert!(chk.slack >= 0.0, "slack {}", chk.slack);
    }

    #[test]
    fn gvdc_random_trials_nonnegative_slack() {
        let f = power(1.1);
        let (_, t, _) = witness_report(&f, 128, 32).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(4..=256);
            let y: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let chk = check_gvdc_inequality(&y, &t).unwrap();
            assert!(chk.slack >= -GVDC_REL_TOL * chk.rhs, "slack {}", chk.slack);
        }
    }

    #[test]
    fn gvdc_rejects_uncertified() {
        let poly = CosinePoly::constant(1.0);
        let t = CertifiedPoly {
            poly,
            cert: Certificate { grid_min: -0.5, slack: 0.0, grid_size: 0 },
        };
        let y = vec![Complex64::new(1.0, 0.0); 4];
        assert!(check_gvdc_inequality(&y, &t).is_err());
    }

    #[test]
    fn decompose_reconstructs_lhs() {
        let f = power(1.1);
        let psi = build_psi(&f, 1 << 10).unwrap();
        for &xi in &[0.0, 0.1234, 0.5, 0.876] {
            let rep = decompose(&f, &psi, 64, xi, DECOMPOSITION_BUDGET_C).unwrap();
            let g = psi.cosine_transform_at(xi);
            assert!((rep.lhs - g).abs() < 1e-10);
            assert!(rep.within_budget(), "residual {} budget {}", rep.residual, rep.budget);
        }
    }

    #[test]
    fn decompose_main_term_at_zero_positive() {
        let f = power(1.1);
        let psi = build_psi(&f, 512).unwrap();
        let rep = decompose(&f, &psi, 16, 0.0, DECOMPOSITION_BUDGET_C).unwrap();
        assert!(rep.main > 0.0);
    }

    #[test]
    fn decompose_residual_shrinks_with_m() {
        let f = power(1.1);
        let psi = build_psi(&f, 1 << 10).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let xis: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mut medians = Vec::new();
        for mp in [4u32, 8, 12, 16] {
            let m = 1u64 << mp;
            let mut resids: Vec<f64> = xis
                .iter()
                .map(|&xi| {
                    decompose(&f, &psi, m, xi, DECOMPOSITION_BUDGET_C)
                        .unwrap()
                        .residual
                        .abs()
                })
                .collect();
            resids.sort_by(f64::total_cmp);
            medians.push(resids[resids.len() / 2]);
        }
        for w in medians.windows(2) {
            assert!(w[1] <= w[0] * 1.5, "medians not trending down: {medians:?}");
        }
        assert!(medians.last().unwrap() < &(medians[0] * 0.5), "{medians:?}");
    }

    #[test]
    fn main_term_constant_weight_identity() {
        // with the weight replaced by 1 the transform collapses to
        // E F cos = (F_T(xi) - 1) / (2N), which stays above -1/N
        let n = 256u64;
        let nf = n as f64;
        for j in 0..64 {
            let xi = j as f64 / 64.0;
            let mut acc = CompensatedSum::new();
            for k in 1..=n {
                acc.add((1.0 - k as f64 / nf) * cos_two_pi(k as f64 * xi));
            }
            let lhs = acc.value() / nf;
            let rhs = (crate::kernels::fejer_t(n as u32, xi) - 1.0) / (2.0 * nf);
            assert!((lhs - rhs).abs() < 1e-12, "xi={xi}: {lhs} vs {rhs}");
            assert!(lhs >= -1.0 / nf);
        }
    }

    #[test]
    fn main_term_min_floor() {
        let f = power(1.1);
        for np in [10u32, 12] {
            let n = 1u64 << np;
            let r = main_term_min(&f, n, 8 * n).unwrap();
            assert!(
                r.min * n as f64 >= -crate::constants::MAIN_TERM_C,
                "N={n}: min*N = {}",
                r.min * n as f64
            );
        }
    }

    #[test]
    fn main_term_positive_at_zero() {
        let f = power(1.1);
        let n = 1u64 << 10;
        let k = 8 * n;
        // value at grid point 0 is eta-telescoping-positive
        let n_lo = 1u64;
        let mut acc = 0.0;
        let mut prev = f.inverse(n_lo as f64).unwrap();
        for i in n_lo..=n {
            let next = f.inverse((i + 1) as f64).unwrap();
            acc += (1.0 - i as f64 / n as f64) * (next - prev);
            prev = next;
        }
        assert!(acc > 0.0);
        let r = main_term_min(&f, n, k).unwrap();
        assert!(r.min <= acc / n as f64);
    }

    #[test]
    fn expsum_paths_agree_and_conjugate() {
        let f = power(1.1);
        let a = expsum(&f, 3, 1, 4096).unwrap();
        assert!(a.path_gap <= EXPSUM_PATH_TOL * 4096.0);
        let b = expsum(&f, -3, 1, 4096).unwrap();
        assert!((a.direct - b.direct.conj()).norm() < 1e-9);
        // bound holds
        assert!(a.direct.norm() <= a.bound, "{} vs {}", a.direct.norm(), a.bound);
    }

    #[test]
    fn expsum_trivial_phases() {
        // a tiny range where all phases are nearly constant: sum ~ |range|
        let f = power(1.05);
        let r = expsum(&f, 1, 1, 2).unwrap();
        assert!(r.direct.norm() <= 2.0 + 1e-12);
    }

    #[test]
    fn second_derivative_quadratic_family() {
        for q in [16.0, 64.0, 256.0, 1024.0, 4096.0] {
            let phase = QuadraticPhase { q };
            let chk =
                check_second_derivative_test(&phase, 1.0, q, 1.0 / q, 1.0).unwrap();
            // classical quadratic scale: |sum| ~ sqrt(q), bound = 20 sqrt(q)
            assert!(chk.sum_abs <= 20.0 * q.sqrt());
            assert!(chk.margin >= 0.0);
        }
    }

    #[test]
    fn second_derivative_rejects_linear_phase() {
        struct Linear;
        impl Phase for Linear {
            fn value(&self, t: f64) -> f64 {
                0.37 * t
            }
            fn second_derivative(&self, _: f64) -> f64 {
                0.0
            }
        }
        assert!(matches!(
            check_second_derivative_test(&Linear, 1.0, 100.0, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        // premise violation (lambda too large for the actual |f''|) is also a
        // domain error, distinct from a bound violation
        assert!(matches!(
            check_second_derivative_test(&QuadraticPhase { q: 100.0 }, 1.0, 100.0, 1.0, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn second_derivative_eta_dyadic_blocks() {
        let f = power(1.1);
        for j in [4u32, 8, 12] {
            for m in [1.0f64, 16.0, 256.0] {
                let a = (1u64 << j) as f64;
                let b = (1u64 << (j + 1)) as f64 - 1.0;
                let phase = EtaPhase { f: &f, m };
                let lam_lo = phase.second_derivative(b).abs();
                let lam_hi = phase.second_derivative(a).abs();
                let chk = check_second_derivative_test(
                    &phase,
                    a,
                    b,
                    lam_lo,
                    lam_hi / lam_lo * (1.0 + 1e-12),
                )
                .unwrap();
                assert!(chk.margin >= 0.0, "j={j} m={m}");
            }
        }
    }

    #[test]
    fn bridge_cases() {
        // S = {1}, N = 4: exact best 2, analytic gamma = 1/2
        let s = crate::sequence::IntegerSet::from_elements(vec![1], 4, "{1}".into()).unwrap();
        let ex = crate::extremal::solve_exact(&s, 4, 1 << 20).unwrap();
        let mut coeffs = std::collections::BTreeMap::new();
        coeffs.insert(1u64, 0.5);
        let t = CertifiedPoly {
            poly: CosinePoly { a0: 0.5, coeffs },
            cert: Certificate { grid_min: 0.0, slack: 0.0, grid_size: 8 },
        };
        let chk = check_delta_leq_2gamma(&ex, &t).unwrap();
        assert!((chk.density - 0.5).abs() < 1e-15);
        assert!(chk.margin >= 0.0);

        // witness-vs-extremal on a generated set
        let f = power(1.1);
        let (_, t, _) = witness_report(&f, 40, 64).unwrap();
        let s = generate(&f, 40).unwrap();
        let ex = crate::extremal::solve_exact(&s, 40, 1 << 30).unwrap();
        assert!(check_delta_leq_2gamma(&ex, &t).is_ok());
    }
}
