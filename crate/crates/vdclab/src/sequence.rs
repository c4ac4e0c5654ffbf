//! Generation of `S ∩ [N]` for `S = { floor(h(n)) : n }`, plus the
//! floor-identity membership test, cross-validated against enumeration.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::growth::GrowthFunction;

/// A sorted, strictly increasing set of positive integers in `[1, N]` with
/// generation provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerSet {
    elements: Vec<u64>,
    upper_bound: u64,
    source: String,
}

impl IntegerSet {
    /// Build from raw elements; sorts, deduplicates and range-checks.
    pub fn from_elements(mut elements: Vec<u64>, upper_bound: u64, source: String) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&first) = elements.first() {
            if first < 1 {
                return Err(Error::Domain("set elements must be positive".into()));
            }
        }
        if let Some(&last) = elements.last() {
            if last > upper_bound {
                return Err(Error::Domain(format!(
                    "element {last} exceeds upper bound {upper_bound}"
                )));
            }
        }
        Ok(Self { elements, upper_bound, source })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn upper_bound(&self) -> u64 {
        self.upper_bound
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elements.binary_search(&n).is_ok()
    }

    /// Restriction to `[1, n]`.
    pub fn restrict(&self, n: u64) -> IntegerSet {
        let cut = self.elements.partition_point(|&x| x <= n);
        IntegerSet {
            elements: self.elements[..cut].to_vec(),
            upper_bound: n,
            source: format!("{} | restricted to [1,{n}]", self.source),
        }
    }

    /// Newline-delimited decimal serialization with a one-line JSON header.
    pub fn write_to(&self, w: &mut dyn Write) -> Result<()> {
        let header = serde_json::json!({
            "function": self.source,
            "N": self.upper_bound,
            "method": "guarded-floor-enumeration",
        });
        writeln!(w, "{header}")?;
        for &x in &self.elements {
            writeln!(w, "{x}")?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut dyn BufRead) -> Result<Self> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let meta: serde_json::Value = serde_json::from_str(header.trim())
            .map_err(|e| Error::Domain(format!("bad set header: {e}")))?;
        let upper = meta["N"]
            .as_u64()
            .ok_or_else(|| Error::Domain("set header missing N".into()))?;
        let source = meta["function"].as_str().unwrap_or("unknown").to_string();
        let mut elements = Vec::new();
        for line in r.lines() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            elements.push(
                t.parse::<u64>()
                    .map_err(|e| Error::Domain(format!("bad set element {t:?}: {e}")))?,
            );
        }
        Self::from_elements(elements, upper, source)
    }
}

/// Generate `S ∩ [N]`: every `floor(h(n)) <= N` over the full integer domain
/// of `h`, small-`n` values included by direct guarded evaluation.
pub fn generate(f: &GrowthFunction, n: u64) -> Result<IntegerSet> {
    if n < 1 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    // the index eta(N) of the largest generator must stay enumerable
    let top_estimate = if n as f64 >= f.evaluate(f.mono_start() as f64)? {
        f.inverse(n as f64)?
    } else {
        f.mono_start() as f64
    };
    if top_estimate > 4.0e9 {
        return Err(Error::Overflow(format!(
            "eta({n}) ~ {top_estimate:.3e} generators exceed the index capacity"
        )));
    }

    let mut elements = Vec::new();
    let mut m = f.domain_start();
    loop {
        let h = f.evaluate(m as f64)?;
        if h.is_finite() && h >= 1.0 - 1e-9 {
            let v = f.guarded_floor(m)?;
            if (1..=n).contains(&v) {
                elements.push(v);
            }
            // in the monotone region, floors only grow
            if m >= f.mono_start() && v > n {
                break;
            }
        }
        m += 1;
        if m > f.mono_start() && (m - f.mono_start()) as f64 > top_estimate + 8.0 {
            break;
        }
    }

    let th = f.thresholds();
    IntegerSet::from_elements(
        elements,
        n,
        format!(
            "{f} (threshold={}, identity_from={}, small-n by enumeration)",
            th.threshold, th.identity_from
        ),
    )
}

/// Membership via the floor identity: `n` is in `S` iff
/// `floor(-eta(n)) - floor(-eta(n+1)) = 1`, i.e. `ceil(eta(n+1)) - ceil(eta(n)) = 1`.
///
/// Below the verified identity range this falls back to direct enumeration.
/// The difference is asserted to lie in `{0, 1}`; anything else is a bug or a
/// precision fault and reported as a check failure.
pub fn member_by_identity(f: &GrowthFunction, n: u64) -> Result<bool> {
    if n < f.identity_from() {
        return member_by_enumeration(f, n);
    }
    let d = f.ceil_eta(n + 1)? - f.ceil_eta(n)?;
    if d > 1 {
        return Err(Error::CheckFailed(format!(
            "floor-identity difference {d} outside {{0,1}} at n = {n}"
        )));
    }
    Ok(d == 1)
}

/// Direct scan: is there an integer `m` with `floor(h(m)) = n`?
fn member_by_enumeration(f: &GrowthFunction, n: u64) -> Result<bool> {
    let mut m = f.domain_start();
    loop {
        let h = f.evaluate(m as f64)?;
        if h.is_finite() && h >= 1.0 - 1e-9 {
            let v = f.guarded_floor(m)?;
            if v == n {
                return Ok(true);
            }
            if m >= f.mono_start() && v > n {
                return Ok(false);
            }
        }
        m += 1;
        if m > f.mono_start() + n + 8 {
            return Ok(false);
        }
    }
}
