//! Catalog of eventually-positive, eventually-increasing growth functions with
//! growth rate `c > 1`, their exact derivatives, the inverse `eta`, and the
//! scan that detects the validity threshold.
//!
//! Evaluation near integers is the correctness-critical path: a single
//! misrounded floor corrupts the generated set and every downstream check.
//! Whenever a value lands inside the guard band around an integer, it is
//! re-evaluated at 160-bit precision before flooring or comparing.

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::constants::{
    FLOOR_GUARD_BAND, HP_PRECISION_BITS, HP_SNAP_REL, INVERSE_SOLVE_REL_TOL,
};
use crate::error::{Error, Result};

/// Catalog entry.
///
/// All entries share the leading factor `t^c`; the families differ in the
/// slowly-varying correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GrowthKind {
    /// `t^c`
    Power,
    /// `t^c * (ln t)^a`
    PowerLog { a: f64 },
    /// `t^c * exp(a * (ln t)^b)`, `b` in `(0, 1)`
    PowerSubexp { a: f64, b: f64 },
    /// `t^c * l_m(t)` with `l_m` the m-fold iterated logarithm
    PowerIterLog { m: u32 },
}

impl GrowthKind {
    /// Largest real below which the formula (or its derivatives) is undefined.
    fn real_domain_start(&self) -> f64 {
        match self {
            GrowthKind::Power => 0.0,
            GrowthKind::PowerLog { .. } | GrowthKind::PowerSubexp { .. } => 1.0,
            GrowthKind::PowerIterLog { m } => {
                // need l_m(t) > 0, i.e. t > e^^(m-1)
                let mut v = 1.0f64;
                for _ in 1..*m {
                    v = v.exp();
                }
                v
            }
        }
    }

    /// Smallest integer at which the entry can be evaluated.
    fn domain_start(&self) -> u64 {
        let r = self.real_domain_start();
        (r.floor() as u64) + 1
    }
}

impl fmt::Display for GrowthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthKind::Power => write!(f, "t^c"),
            GrowthKind::PowerLog { a } => write!(f, "t^c*(ln t)^{a}"),
            GrowthKind::PowerSubexp { a, b } => write!(f, "t^c*exp({a}*(ln t)^{b})"),
            GrowthKind::PowerIterLog { m } => write!(f, "t^c*l_{m}(t)"),
        }
    }
}

/// Thresholds found by the verification scan.
#[derive(Clone, Copy, Debug)]
pub struct Thresholds {
    /// Smallest integer at which the formula is defined.
    pub domain_start: u64,
    /// `h` verified positive and strictly increasing on `[mono_start, horizon]`.
    pub mono_start: u64,
    /// Full validity point `N_h`: additionally `h' > 1` and the inverse spacing
    /// `eta(n+1) - eta(n) < 1/2` hold on the verified range.
    pub threshold: u64,
    /// Smallest value `n` from which the floor identity is trusted:
    /// spacing `eta(n+1) - eta(n) < 1` verified, and above every floor
    /// produced by the pre-monotone branch.
    pub identity_from: u64,
    /// Scan horizon the verification covered.
    pub horizon: u64,
}

/// A catalog growth function with verified thresholds.
#[derive(Clone, Debug)]
pub struct GrowthFunction {
    kind: GrowthKind,
    c: f64,
    thresholds: Thresholds,
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GrowthKind::Power => write!(f, "t^{}", self.c),
            GrowthKind::PowerLog { a } => write!(f, "t^{}*(ln t)^{a}", self.c),
            GrowthKind::PowerSubexp { a, b } => {
                write!(f, "t^{}*exp({a}*(ln t)^{b})", self.c)
            }
            GrowthKind::PowerIterLog { m } => write!(f, "t^{}*l_{m}(t)", self.c),
        }
    }
}

/// Raw f64 evaluation of `h(t)`; caller is responsible for the domain.
fn eval_raw(kind: GrowthKind, c: f64, t: f64) -> f64 {
    match kind {
        GrowthKind::Power => t.powf(c),
        GrowthKind::PowerLog { a } => t.powf(c) * t.ln().powf(a),
        GrowthKind::PowerSubexp { a, b } => t.powf(c) * (a * t.ln().powf(b)).exp(),
        GrowthKind::PowerIterLog { m } => t.powf(c) * iter_log(t, m),
    }
}

/// m-fold iterated logarithm.
fn iter_log(t: f64, m: u32) -> f64 {
    let mut v = t;
    for _ in 0..m {
        v = v.ln();
    }
    v
}

/// Logarithmic derivative `w'(t)` of `w = ln h`.
fn log_deriv1(kind: GrowthKind, c: f64, t: f64) -> f64 {
    match kind {
        GrowthKind::Power => c / t,
        GrowthKind::PowerLog { a } => {
            let l = t.ln();
            c / t + a / (t * l)
        }
        GrowthKind::PowerSubexp { a, b } => {
            let l = t.ln();
            c / t + a * b * l.powf(b - 1.0) / t
        }
        GrowthKind::PowerIterLog { m } => {
            // w' = c/t + 1/(t * l_1 * ... * l_m)
            let mut prod = 1.0;
            let mut v = t;
            for _ in 0..m {
                v = v.ln();
                prod *= v;
            }
            c / t + 1.0 / (t * prod)
        }
    }
}

/// Second logarithmic derivative `w''(t)`.
fn log_deriv2(kind: GrowthKind, c: f64, t: f64) -> f64 {
    match kind {
        GrowthKind::Power => -c / (t * t),
        GrowthKind::PowerLog { a } => {
            let l = t.ln();
            -c / (t * t) - a * (l + 1.0) / (t * t * l * l)
        }
        GrowthKind::PowerSubexp { a, b } => {
            let l = t.ln();
            -c / (t * t) + a * b / (t * t) * ((b - 1.0) * l.powf(b - 2.0) - l.powf(b - 1.0))
        }
        GrowthKind::PowerIterLog { m } => {
            // w'' = -c/t^2 - (1 + sum_k 1/(l_1..l_k)) / (t^2 * l_1..l_m)
            let mut prod = 1.0;
            let mut q = 0.0;
            let mut v = t;
            for _ in 0..m {
                v = v.ln();
                prod *= v;
                q += 1.0 / prod;
            }
            -c / (t * t) - (1.0 + q) / (t * t * prod)
        }
    }
}

/// Extended-precision evaluation of `h(t)` at an integer argument.
fn eval_hp(kind: GrowthKind, c: f64, t: u64) -> BigFloat {
    let p = HP_PRECISION_BITS;
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().expect("constants cache");
    let bt = BigFloat::from_u64(t, p);
    let bc = BigFloat::from_f64(c, p);
    let ln_t = bt.ln(p, rm, &mut cc);
    let pow_part = ln_t.mul(&bc, p, rm).exp(p, rm, &mut cc);
    match kind {
        GrowthKind::Power => pow_part,
        GrowthKind::PowerLog { a } => {
            let ba = BigFloat::from_f64(a, p);
            let ln_ln = ln_t.ln(p, rm, &mut cc);
            let corr = ln_ln.mul(&ba, p, rm).exp(p, rm, &mut cc);
            pow_part.mul(&corr, p, rm)
        }
        GrowthKind::PowerSubexp { a, b } => {
            let ba = BigFloat::from_f64(a, p);
            let bb = BigFloat::from_f64(b, p);
            let ln_ln = ln_t.ln(p, rm, &mut cc);
            let lb = ln_ln.mul(&bb, p, rm).exp(p, rm, &mut cc); // (ln t)^b
            let corr = lb.mul(&ba, p, rm).exp(p, rm, &mut cc);
            pow_part.mul(&corr, p, rm)
        }
        GrowthKind::PowerIterLog { m } => {
            let mut v = ln_t;
            for _ in 1..m {
                v = v.ln(p, rm, &mut cc);
            }
            pow_part.mul(&v, p, rm)
        }
    }
}

/// Floor of an extended-precision value with snap-to-integer, compared against
/// the nearest integer `r` found at f64 precision.
fn hp_floor_near(hp: &BigFloat, r: u64) -> u64 {
    let p = HP_PRECISION_BITS;
    let br = BigFloat::from_u64(r, p);
    let d = hp.sub(&br, p, RoundingMode::ToEven);
    let snap = BigFloat::from_f64(HP_SNAP_REL * (r.max(1) as f64), p);
    if matches!(d.abs().cmp(&snap), Some(s) if s < 0) {
        r
    } else if d.is_negative() {
        r - 1
    } else {
        r
    }
}

impl GrowthFunction {
    /// Build a catalog function and verify its thresholds by scan.
    ///
    /// `c > 1` is required; the theorem-mode restriction `c < 6/5` is enforced
    /// by the experiment layer, not here.
    pub fn new(kind: GrowthKind, c: f64, horizon: u64) -> Result<Self> {
        if !(c > 1.0) || !c.is_finite() {
            return Err(Error::Config(format!("growth rate c must exceed 1, got {c}")));
        }
        if let GrowthKind::PowerSubexp { b, .. } = kind {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::Config(format!(
                    "subexponential parameter b must lie in (0,1), got {b}"
                )));
            }
        }
        if let GrowthKind::PowerIterLog { m } = kind {
            if m == 0 {
                return Err(Error::Config("iterated-log order m must be >= 1".into()));
            }
        }
        let thresholds = detect_threshold_scan(kind, c, horizon)?;
        Ok(Self { kind, c, thresholds })
    }

    /// Convenience constructor for the pure power `t^c`.
    pub fn power(c: f64, horizon: u64) -> Result<Self> {
        Self::new(GrowthKind::Power, c, horizon)
    }

    pub fn kind(&self) -> GrowthKind {
        self.kind
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn thresholds(&self) -> Thresholds {
        self.thresholds
    }

    /// The validity point `N_h`.
    pub fn threshold(&self) -> u64 {
        self.thresholds.threshold
    }

    /// Smallest value from which the floor identity is trusted.
    pub fn identity_from(&self) -> u64 {
        self.thresholds.identity_from
    }

    pub fn domain_start(&self) -> u64 {
        self.thresholds.domain_start
    }

    pub fn mono_start(&self) -> u64 {
        self.thresholds.mono_start
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t <= self.kind.real_domain_start() {
            return Err(Error::Domain(format!(
                "t = {t} below the domain of {} (starts after {})",
                self,
                self.kind.real_domain_start()
            )));
        }
        Ok(())
    }

    /// `h(t)`. Relative error is a few ulps, well inside the 1e-12 contract.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(eval_raw(self.kind, self.c, t))
    }

    /// `h'(t)` or `h''(t)` from the exact closed forms
    /// `h' = h * w'` and `h'' = h * (w'' + w'^2)` with `w = ln h`.
    pub fn derivative(&self, order: u32, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let h = eval_raw(self.kind, self.c, t);
        let w1 = log_deriv1(self.kind, self.c, t);
        match order {
            1 => Ok(h * w1),
            2 => Ok(h * (log_deriv2(self.kind, self.c, t) + w1 * w1)),
            _ => Err(Error::Domain(format!("unsupported derivative order {order}"))),
        }
    }

    /// The inverse `eta(y)`, defined for `y >= h(mono_start)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let lo0 = self.thresholds.mono_start as f64;
        let h_lo = eval_raw(self.kind, self.c, lo0);
        if !(y >= h_lo * (1.0 - 1e-12)) {
            return Err(Error::Domain(format!(
                "inverse argument {y} below h(mono_start) = {h_lo}"
            )));
        }
        if let GrowthKind::Power = self.kind {
            return Ok(y.powf(1.0 / self.c));
        }
        // Bracket by doubling, then Newton guarded by bisection.
        let mut lo = lo0;
        let mut hi = lo0.max(1.0) * 2.0;
        let mut guard = 0;
        while eval_raw(self.kind, self.c, hi) < y {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 2000 {
                return Err(Error::Overflow(format!("inverse bracket for y = {y}")));
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let hx = eval_raw(self.kind, self.c, x);
            if hx < y {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.derivative(1, x).unwrap_or(f64::INFINITY);
            let step = (hx - y) / d;
            let mut next = x - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= INVERSE_SOLVE_REL_TOL * x.abs() {
                x = next;
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// `floor(h(n))` with the guard band: values near an integer are decided
    /// in extended precision.
    pub fn guarded_floor(&self, n: u64) -> Result<u64> {
        let h = self.evaluate(n as f64)?;
        if !(h >= 0.0) {
            return Err(Error::Domain(format!("h({n}) = {h} is negative")));
        }
        if h >= 9.0e15 {
            return Err(Error::Overflow(format!("h({n}) = {h} exceeds exact integer range")));
        }
        let r = h.round();
        if (h - r).abs() >= FLOOR_GUARD_BAND {
            return Ok(h.floor() as u64);
        }
        if r < 1.0 {
            // near zero: floor is 0 unless the value is (snapped) exactly 0
            let hp = eval_hp(self.kind, self.c, n);
            return Ok(hp_floor_near(&hp, 0).min(0));
        }
        let hp = eval_hp(self.kind, self.c, n);
        Ok(hp_floor_near(&hp, r as u64))
    }

    /// Compare `h(m)` with the integer `n`, guard-banded. Values snapped to an
    /// integer in extended precision compare `Equal`.
    pub fn guarded_cmp(&self, m: u64, n: u64) -> Result<Ordering> {
        let h = self.evaluate(m as f64)?;
        let nf = n as f64;
        if (h - nf).abs() >= FLOOR_GUARD_BAND {
            return Ok(if h < nf { Ordering::Less } else { Ordering::Greater });
        }
        let p = HP_PRECISION_BITS;
        let hp = eval_hp(self.kind, self.c, m);
        let bn = BigFloat::from_u64(n, p);
        let d = hp.sub(&bn, p, RoundingMode::ToEven);
        let snap = BigFloat::from_f64(HP_SNAP_REL * (n.max(1) as f64), p);
        if matches!(d.abs().cmp(&snap), Some(s) if s < 0) {
            Ok(Ordering::Equal)
        } else if d.is_negative() {
            Ok(Ordering::Less)
        } else {
            Ok(Ordering::Greater)
        }
    }

    /// `ceil(eta(n))`: the smallest integer `m >= mono_start` with `h(m) >= n`.
    /// Exact, via guarded comparisons of `h` at integer arguments.
    pub fn ceil_eta(&self, n: u64) -> Result<u64> {
        let lo = self.thresholds.mono_start;
        if self.guarded_cmp(lo, n)? == Ordering::Greater {
            return Err(Error::Domain(format!(
                "ceil_eta({n}) below h(mono_start), no preimage in the monotone range"
            )));
        }
        let est = self.inverse(n as f64)?;
        let mut m = (est.round() as u64).max(lo);
        let mut guard = 0u32;
        while self.guarded_cmp(m, n)? == Ordering::Less {
            m += 1;
            guard += 1;
            if guard > 1000 {
                return Err(Error::CheckFailed(format!("ceil_eta walk diverged at n = {n}")));
            }
        }
        while m > lo && self.guarded_cmp(m - 1, n)? != Ordering::Less {
            m -= 1;
            guard += 1;
            if guard > 2000 {
                return Err(Error::CheckFailed(format!("ceil_eta walk diverged at n = {n}")));
            }
        }
        Ok(m)
    }
}

/// Verification scan behind [`GrowthFunction::new`] and the public
/// [`detect_threshold`]. Records the last violation of each condition over
/// one pass, so the smallest valid starting point is violation + 1.
fn detect_threshold_scan(kind: GrowthKind, c: f64, horizon: u64) -> Result<Thresholds> {
    if horizon < 10 {
        return Err(Error::Config(format!("horizon must be >= 10, got {horizon}")));
    }
    let domain_start = kind.domain_start();
    if domain_start.saturating_add(4) >= horizon {
        return Err(Error::Domain(format!(
            "domain of {kind} starts at {domain_start}, beyond horizon {horizon}"
        )));
    }

    let hf = horizon as f64;
    let mut last_pos: Option<u64> = None;
    let mut last_mono: Option<u64> = None;
    let mut last_deriv: Option<u64> = None;
    // largest integer t with h(t) <= horizon; spacing conditions only matter there
    let mut eta_cap = domain_start;

    let mut prev = eval_raw(kind, c, domain_start as f64);
    for t in domain_start..horizon {
        let cur = eval_raw(kind, c, (t + 1) as f64);
        if !(prev > 0.0) || !prev.is_finite() {
            last_pos = Some(t);
        }
        if !(cur > prev) {
            last_mono = Some(t);
        }
        let h1 = prev * log_deriv1(kind, c, t as f64);
        if !(h1 > 1.0) {
            last_deriv = Some(t);
        }
        if prev <= hf {
            eta_cap = t;
        }
        prev = cur;
    }

    // Spacing scans at half-integer resolution on [domain_start, eta_cap]:
    //   h(t + 1/2) - h(t) > 1  realizes eta(n+1) - eta(n) < 1/2,
    //   h(t + 1)  -  h(t) > 1  realizes eta(n+1) - eta(n) < 1.
    let mut last_half: Option<f64> = None;
    let mut last_full: Option<f64> = None;
    {
        let n_steps = (eta_cap - domain_start) * 2;
        let base = domain_start as f64;
        let mut window = [
            eval_raw(kind, c, base),
            eval_raw(kind, c, base + 0.5),
            eval_raw(kind, c, base + 1.0),
        ];
        for i in 0..=n_steps {
            let t = base + i as f64 * 0.5;
            if !(window[1] - window[0] > 1.0) {
                last_half = Some(t);
            }
            if !(window[2] - window[0] > 1.0) {
                last_full = Some(t);
            }
            window[0] = window[1];
            window[1] = window[2];
            window[2] = eval_raw(kind, c, t + 2.0);
        }
    }

    let bump = |v: Option<u64>| v.map_or(domain_start, |x| x + 1);
    let bump_f = |v: Option<f64>| v.map_or(domain_start, |x| x.floor() as u64 + 1);

    let mono_start = bump(last_pos).max(bump(last_mono)).max(domain_start);
    let threshold = mono_start.max(bump(last_deriv)).max(bump_f(last_half));
    let identity_t = mono_start.max(bump_f(last_full));
    if threshold >= horizon {
        return Err(Error::Domain(format!(
            "no validity threshold for {kind} with c = {c} below horizon {horizon}"
        )));
    }

    // Floors produced by the pre-monotone branch can collide with the identity
    // range; start the identity strictly above all of them.
    let probe = GrowthFunction {
        kind,
        c,
        thresholds: Thresholds {
            domain_start,
            mono_start,
            threshold,
            identity_from: 0,
            horizon,
        },
    };
    let mut premono_max = 0u64;
    for m in domain_start..mono_start {
        let h = eval_raw(kind, c, m as f64);
        if h.is_finite() && h >= 1.0 {
            premono_max = premono_max.max(probe.guarded_floor(m)?);
        }
    }
    let at_identity = probe.guarded_floor(identity_t)?;
    let exact = probe.guarded_cmp(identity_t, at_identity)? == Ordering::Equal;
    let ceil_h_identity = if exact { at_identity } else { at_identity + 1 };
    let identity_from = ceil_h_identity.max(premono_max + 1).max(1);

    Ok(Thresholds {
        domain_start,
        mono_start,
        threshold,
        identity_from,
        horizon,
    })
}

/// The threshold-detection operation: smallest integer `T <= horizon` from
/// which all invariants hold on a verification scan up to `horizon`.
pub fn detect_threshold(kind: GrowthKind, c: f64, horizon: u64) -> Result<u64> {
    Ok(detect_threshold_scan(kind, c, horizon)?.threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EVAL_REL_TOL;

    const HORIZON: u64 = 1 << 16;

    fn power(c: f64) -> GrowthFunction {
        GrowthFunction::power(c, HORIZON).unwrap()
    }

    #[test]
    fn evaluate_power_examples() {
        let f = power(1.1);
        assert_eq!(f.evaluate(1.0).unwrap(), 1.0);
        // 1024^1.1 = 2^11 up to the f64 representation of 1.1
        let v = f.evaluate(1024.0).unwrap();
        assert!((v - 2048.0).abs() <= EVAL_REL_TOL * 2048.0, "{v}");
        let h6 = f.evaluate(6.0).unwrap();
        assert!((h6 - 7.177387193107894).abs() < 1e-12 * 7.2, "{h6}");
        assert_eq!(f.guarded_floor(6).unwrap(), 7);
    }

    #[test]
    fn derivative_power_examples() {
        let f = power(1.1);
        assert!((f.derivative(1, 1.0).unwrap() - 1.1).abs() < 1e-15);
        assert!((f.derivative(2, 1.0).unwrap() - 0.11).abs() < 1e-14);
        let d = f.derivative(1, 1024.0).unwrap();
        assert!((d - 2.2).abs() < 1e-12, "{d}");
        assert!(f.derivative(3, 2.0).is_err());
        assert!(f.derivative(1, -1.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        let f = power(1.1);
        let v = f.inverse(2048.0).unwrap();
        assert!((v - 1024.0).abs() < 1e-9, "{v}");
        assert!((f.inverse(1.0).unwrap() - 1.0).abs() < 1e-12);

        let g = GrowthFunction::new(GrowthKind::PowerLog { a: 1.0 }, 1.05, HORIZON).unwrap();
        let y = 1e6;
        let x = g.inverse(y).unwrap();
        let back = g.evaluate(x).unwrap();
        assert!((back - y).abs() <= 1e-4, "round trip off by {}", back - y);
        assert!(g.inverse(0.01).is_err());
    }

    #[test]
    fn inverse_monotone_and_roundtrip() {
        for kind in [
            GrowthKind::Power,
            GrowthKind::PowerLog { a: 2.0 },
            GrowthKind::PowerLog { a: -0.2 },
            GrowthKind::PowerSubexp { a: 1.0, b: 0.5 },
            GrowthKind::PowerIterLog { m: 2 },
        ] {
            let f = GrowthFunction::new(kind, 1.1, HORIZON).unwrap();
            let start = f.evaluate(f.mono_start() as f64).unwrap();
            let mut prev = -f64::INFINITY;
            for i in 1..=50 {
                let y = start + i as f64 * 37.5;
                let x = f.inverse(y).unwrap();
                assert!(x > prev);
                prev = x;
                let back = f.evaluate(x).unwrap();
                assert!(
                    (back - y).abs() <= 1e-10 * y,
                    "{kind:?}: h(eta({y})) = {back}"
                );
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for kind in [
            GrowthKind::Power,
            GrowthKind::PowerLog { a: 1.5 },
            GrowthKind::PowerSubexp { a: 0.7, b: 0.4 },
            GrowthKind::PowerIterLog { m: 1 },
        ] {
            let f = GrowthFunction::new(kind, 1.15, HORIZON).unwrap();
            for &t in &[13.0, 97.0, 1024.0, 30_000.0] {
                if t < f.mono_start() as f64 {
                    continue;
                }
                let h = t * 1e-6;
                let d1 = f.derivative(1, t).unwrap();
                let fd1 =
                    (f.evaluate(t + h).unwrap() - f.evaluate(t - h).unwrap()) / (2.0 * h);
                assert!(
                    ((d1 - fd1) / d1).abs() < 1e-6,
                    "{kind:?} t={t}: {d1} vs {fd1}"
                );
                // wider step for the second difference: at h ~ t*1e-6 the
                // eps/h^2 cancellation noise would swamp the truncation term
                let h2 = t * 2e-4;
                let d2 = f.derivative(2, t).unwrap();
                let fd2 = (f.evaluate(t + h2).unwrap() - 2.0 * f.evaluate(t).unwrap()
                    + f.evaluate(t - h2).unwrap())
                    / (h2 * h2);
                assert!(
                    ((d2 - fd2) / d2).abs() < 1e-4,
                    "{kind:?} t={t}: {d2} vs {fd2}"
                );
            }
        }
    }

    #[test]
    fn growth_rate_sandwich() {
        // t^(c-eps) <= h(t) <= t^(c+eps) with eps = 0.05 past a per-entry
        // burn-in. Only parameters whose burn-in fits below the horizon are
        // sampled; e.g. a full (ln t)^1.0 factor stays above t^0.05 until
        // t ~ e^90 and is untestable at desk scale.
        let eps = 0.05;
        for (kind, burn_in) in [
            (GrowthKind::Power, 2.0f64),
            (GrowthKind::PowerLog { a: 0.2 }, 3e4),
            (GrowthKind::PowerLog { a: -0.2 }, 3e4),
            (GrowthKind::PowerSubexp { a: 0.3, b: 0.2 }, 3e4),
        ] {
            let c = 1.1;
            let f = GrowthFunction::new(kind, c, HORIZON).unwrap();
            let mut t = burn_in.max(f.mono_start() as f64);
            assert!(t < HORIZON as f64 / 2.0, "burn-in beyond horizon");
            while t <= HORIZON as f64 {
                let h = f.evaluate(t).unwrap();
                assert!(
                    t.powf(c - eps) <= h && h <= t.powf(c + eps),
                    "{kind:?} at t={t}: h={h}"
                );
                t *= 1.37;
            }
        }
    }

    #[test]
    fn threshold_examples() {
        // h' = 1.1 t^0.1 > 1 everywhere; the eta-spacing < 1/2 condition binds
        // around t with h(t+1/2)-h(t) = 1, near (2/1.1)^10.
        let t = detect_threshold(GrowthKind::Power, 1.1, 1_000_000).unwrap();
        assert!((300..500).contains(&t), "threshold {t}");

        let t19 = detect_threshold(GrowthKind::Power, 1.19, 1_000_000).unwrap();
        assert!((10..30).contains(&t19), "threshold {t19}");
        let f = GrowthFunction::power(1.19, 1_000_000).unwrap();
        assert!(f.derivative(1, t19 as f64).unwrap() > 1.0);

        // error path: conditions unmet below a tiny horizon
        let bad = GrowthFunction::new(GrowthKind::PowerLog { a: -2.0 }, 1.05, 10);
        assert!(bad.is_err());
    }

    #[test]
    fn eta_spacing_below_half_above_threshold() {
        for c in [1.05, 1.1, 1.19] {
            let f = GrowthFunction::power(c, 1 << 20).unwrap();
            let start = f.evaluate(f.threshold() as f64).unwrap().ceil() as u64;
            let mut n = start;
            let top = (start + 20_000).min(1 << 20);
            while n < top {
                let gap = f.inverse((n + 1) as f64).unwrap() - f.inverse(n as f64).unwrap();
                assert!(gap < 0.5, "c={c} n={n}: gap {gap}");
                n += 137;
            }
        }
    }

    #[test]
    fn guarded_floor_exact_power_cases() {
        // 1024^1.1 sits 1.3e-12 above 2048 for the f64 value of 1.1; the floor
        // must see through it either way.
        let f = power(1.1);
        assert_eq!(f.guarded_floor(1024).unwrap(), 2048);
        assert_eq!(f.guarded_floor(59049).unwrap(), 177_147);
        // c = 1.125 is exactly 9/8, so 256^c = 512 exactly; the snap decides.
        let g = GrowthFunction::power(1.125, HORIZON).unwrap();
        assert_eq!(g.guarded_floor(256).unwrap(), 512);
        assert_eq!(g.guarded_cmp(256, 512).unwrap(), Ordering::Equal);
        assert_eq!(g.guarded_cmp(256, 511).unwrap(), Ordering::Greater);
        assert_eq!(g.guarded_cmp(256, 513).unwrap(), Ordering::Less);
    }

    #[test]
    fn ceil_eta_matches_float_inverse() {
        let f = power(1.1);
        for n in [1u64, 2, 7, 100, 2048, 2049, 40_000] {
            let m = f.ceil_eta(n).unwrap();
            let eta = f.inverse(n as f64).unwrap();
            assert!((m as f64 - eta.ceil()).abs() <= 1.0, "n={n}: {m} vs {eta}");
            // definition: h(m) >= n, h(m-1) < n
            assert_ne!(f.guarded_cmp(m, n).unwrap(), Ordering::Less);
            if m > f.mono_start() {
                assert_eq!(f.guarded_cmp(m - 1, n).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GrowthFunction::power(0.9, HORIZON).is_err());
        assert!(GrowthFunction::power(1.0, HORIZON).is_err());
        assert!(GrowthFunction::new(GrowthKind::PowerSubexp { a: 1.0, b: 1.5 }, 1.1, HORIZON)
            .is_err());
        assert!(GrowthFunction::new(GrowthKind::PowerIterLog { m: 0 }, 1.1, HORIZON).is_err());
        assert!(GrowthFunction::power(1.1, 5).is_err());
    }
}
