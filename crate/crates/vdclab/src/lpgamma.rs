//! The optimization oracle: minimize the constant term `a0` over cosine
//! polynomials supported on `S ∩ [N]` with `T(0) = 1` and `T >= 0` imposed on
//! a finite grid, refined by cutting planes until the off-grid negativity is
//! certifiably small.
//!
//! Eliminating `a0 = 1 - sum a_h` turns the instance into
//!
//! `max sum_h a_h  s.t.  sum_h a_h (1 - cos(2 pi h xi_j)) <= 1`
//!
//! whose slack basis is immediately feasible, so a single-phase dense simplex
//! suffices. Instance sizes stay in the hundreds of rows; a textbook tableau
//! with Bland's rule (anti-cycling) is deliberate, not an oversight.

use serde::{Deserialize, Serialize};

use crate::constants::{LP_PIVOT_TOL, LP_VAR_BOX};
use crate::error::{Error, Result};
use crate::numeric::{cos_two_pi, frac_int_times};
use crate::sequence::IntegerSet;
use crate::witness::{Certificate, CertifiedPoly, CosinePoly};

/// A grid-discretized instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpInstance {
    /// Supported frequencies (subset of `S ∩ [N]`).
    pub support: Vec<u64>,
    /// Number of uniform circle points; evenness is enforced so the
    /// antipode `1/2` is always a constraint.
    pub grid_points: u64,
    /// Extra constraint points appended by grid refinement.
    pub cuts: Vec<f64>,
    pub set_id: String,
}

impl LpInstance {
    /// Instance over the given support with `grid_points` uniform points.
    pub fn new(set: &IntegerSet, grid_points: u64) -> Self {
        Self {
            support: set.elements().to_vec(),
            grid_points: grid_points.max(2).next_multiple_of(2),
            cuts: Vec::new(),
            set_id: set.source().to_string(),
        }
    }

    /// Default grid: `8 * max(support)` points.
    pub fn for_set(set: &IntegerSet) -> Self {
        let max = set.elements().last().copied().unwrap_or(1);
        Self::new(set, 8 * max)
    }

    /// Grid resolves the highest frequency.
    pub fn grid_adequate(&self) -> bool {
        let max = self.support.last().copied().unwrap_or(1);
        self.grid_points >= 8 * max
    }

    /// All constraint abscissas: the symmetry half `j/K, j = 0..=K/2` plus
    /// cut points (cosines are even, so the other half duplicates rows).
    fn points(&self) -> Vec<f64> {
        let k = self.grid_points;
        let mut pts: Vec<f64> = (0..=k / 2).map(|j| j as f64 / k as f64).collect();
        pts.extend_from_slice(&self.cuts);
        pts
    }
}

/// Solution of one instance.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub a0: f64,
    pub poly: CertifiedPoly,
    /// Certified off-grid negativity: the true minimum of the polynomial is
    /// above `-cert_slack`.
    pub cert_slack: f64,
    pub pivots: u64,
    /// Deepest certified-evaluation points below zero, fodder for cuts.
    violations: Vec<f64>,
}

/// Solve the instance: grid-optimal `a0`, the optimizing polynomial, and the
/// certified off-grid slack.
pub fn solve(instance: &LpInstance) -> Result<LpSolution> {
    if instance.support.is_empty() {
        // no cosine terms: T = a0 = 1 by convention
        let poly = CosinePoly::constant(1.0);
        return Ok(LpSolution {
            a0: 1.0,
            poly: CertifiedPoly {
                poly,
                cert: Certificate { grid_min: 1.0, slack: 0.0, grid_size: instance.grid_points },
            },
            cert_slack: 0.0,
            pivots: 0,
            violations: Vec::new(),
        });
    }
    let (coeffs, pivots) = match solve_reduced(instance, false) {
        Ok(v) => v,
        // an under-resolved grid can leave an unbounded ray; re-solve inside
        // a box so the cutting loop has a polynomial to refine against
        Err(Error::Solver(_)) => solve_reduced(instance, true)?,
        Err(e) => return Err(e),
    };

    let mut map = std::collections::BTreeMap::new();
    let mut sum = crate::numeric::CompensatedSum::new();
    for (&h, &a) in instance.support.iter().zip(&coeffs) {
        if a != 0.0 {
            map.insert(h, a);
            sum.add(a);
        }
    }
    let a0 = 1.0 - sum.value();
    let poly = CosinePoly { a0, coeffs: map };

    let cert = certify(&poly, 1e-12, 2_000_000);
    let slack = (-cert.lower_bound).max(0.0);
    Ok(LpSolution {
        a0,
        poly: CertifiedPoly {
            poly,
            cert: Certificate {
                grid_min: cert.lower_bound,
                slack: 0.0,
                grid_size: instance.grid_points,
            },
        },
        cert_slack: slack,
        pivots,
        violations: cert.violations,
    })
}

/// One cutting-plane step: locate off-grid negativity minima of the solved
/// polynomial and append them as constraint points. No violations, no change.
pub fn refine_grid(instance: &LpInstance, solution: &LpSolution) -> LpInstance {
    let mut next = instance.clone();
    for &xi in solution.violations.iter().take(16) {
        next.cuts.push(xi);
    }
    next
}

/// Cutting-plane loop: solve, certify, cut, until the certified off-grid
/// negativity drops below `tol` or the iteration cap is reached.
pub fn solve_with_refinement(
    instance: LpInstance,
    tol: f64,
    max_iter: u32,
) -> Result<(LpSolution, LpInstance, u32)> {
    let mut inst = instance;
    let mut last = solve(&inst)?;
    for it in 0..max_iter {
        if last.cert_slack < tol || last.violations.is_empty() {
            return Ok((last, inst, it));
        }
        inst = refine_grid(&inst, &last);
        last = solve(&inst)?;
    }
    Ok((last, inst, max_iter))
}

/// Feasibility of an external polynomial for this instance (used to check
/// that the witness construction is a feasible point, hence an upper bound).
pub fn is_feasible(instance: &LpInstance, poly: &CosinePoly, tol: f64) -> bool {
    if (poly.value_at_zero() - 1.0).abs() > 1e-9 {
        return false;
    }
    let support: std::collections::BTreeSet<u64> = instance.support.iter().copied().collect();
    if poly.coeffs.iter().any(|(&h, &a)| a != 0.0 && !support.contains(&h)) {
        return false;
    }
    instance.points().iter().all(|&xi| poly.eval(xi) >= -tol)
}

/// Reduced-form solve; returns the split-recombined coefficients `a_h`
/// aligned with `instance.support` and the pivot count.
fn solve_reduced(instance: &LpInstance, boxed: bool) -> Result<(Vec<f64>, u64)> {
    let pts = instance.points();
    let s = instance.support.len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(pts.len() + if boxed { 2 * s } else { 0 });
    let mut rhs: Vec<f64> = Vec::new();
    for &xi in &pts {
        let mut row = Vec::with_capacity(2 * s);
        for &h in &instance.support {
            let g = 1.0 - cos_two_pi(frac_int_times(h, xi));
            row.push(g);
        }
        for j in 0..s {
            let g = row[j];
            row.push(-g);
        }
        rows.push(row);
        rhs.push(1.0);
    }
    if boxed {
        for j in 0..2 * s {
            let mut row = vec![0.0; 2 * s];
            row[j] = 1.0;
            rows.push(row);
            rhs.push(LP_VAR_BOX);
        }
    }
    let mut c = vec![1.0; s];
    c.extend(std::iter::repeat_n(-1.0, s));

    let sol = simplex_max(&rows, &rhs, &c)?;
    let coeffs: Vec<f64> = (0..s).map(|j| sol.x[j] - sol.x[s + j]).collect();
    Ok((coeffs, sol.pivots))
}

/// Solution of the raw standard-form LP.
#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: u64,
}

/// Textbook dense full-tableau primal simplex for
/// `max c'x  s.t.  A x <= b, x >= 0` with `b >= 0`.
///
/// Steepest reduced cost (Dantzig) drives the pivot normally; a stall with no
/// objective progress switches the entering rule to Bland's smallest index,
/// which guarantees escape from any cycle, and progress switches it back.
pub fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<SimplexSolution> {
    let m = a.len();
    let n = c.len();
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::Solver("negative right-hand side".into()));
    }
    let cols = n + m; // structural + slack
    let width = cols + 1; // + rhs
    let mut t = vec![0.0f64; (m + 1) * width];
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[i * width + j] = v;
        }
        t[i * width + n + i] = 1.0;
        t[i * width + cols] = b[i];
    }
    // objective row holds reduced costs c_j - z_j; its rhs cell accumulates
    // the negated objective value
    for (j, &v) in c.iter().enumerate() {
        t[m * width + j] = v;
    }
    let mut basis: Vec<usize> = (n..cols).collect();

    let mut pivots = 0u64;
    let mut stall = 0u32;
    let mut bland = false;
    loop {
        let obj_row = &t[m * width..m * width + cols];
        let entering = if bland {
            obj_row.iter().position(|&rc| rc > LP_PIVOT_TOL)
        } else {
            let (mut best, mut arg) = (LP_PIVOT_TOL, None);
            for (j, &rc) in obj_row.iter().enumerate() {
                if rc > best {
                    best = rc;
                    arg = Some(j);
                }
            }
            arg
        };
        let Some(e) = entering else { break };

        // leaving: minimum ratio, ties to the smallest basis variable (Bland)
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aie = t[i * width + e];
            if aie > LP_PIVOT_TOL {
                let ratio = t[i * width + cols] / aie;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-12
                            || (ratio < lr + 1e-12 && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            return Err(Error::Solver(format!(
                "unbounded: no ratio for entering column {e}"
            )));
        };

        let before = t[m * width + cols];

        // pivot on (l, e)
        let piv = t[l * width + e];
        let (head, tail) = t.split_at_mut(l * width);
        let (lrow, rest) = tail.split_at_mut(width);
        for v in lrow.iter_mut() {
            *v /= piv;
        }
        for row in head
            .chunks_exact_mut(width)
            .chain(rest.chunks_exact_mut(width))
        {
            let factor = row[e];
            if factor != 0.0 {
                for (rv, lv) in row.iter_mut().zip(lrow.iter()) {
                    *rv -= factor * lv;
                }
            }
        }
        basis[l] = e;
        pivots += 1;

        let progressed = t[m * width + cols] < before - 1e-13;
        if progressed {
            stall = 0;
            bland = false;
        } else {
            stall += 1;
            if stall > 64 {
                bland = true;
            }
        }
        if pivots > 5_000_000 {
            return Err(Error::Solver("pivot budget exhausted".into()));
        }
    }

    let mut x = vec![0.0; cols];
    for (i, &bi) in basis.iter().enumerate() {
        x[bi] = t[i * width + cols];
    }
    let objective = c.iter().zip(&x).map(|(&cj, &xj)| cj * xj).sum();
    Ok(SimplexSolution { x: x[..n].to_vec(), objective, pivots })
}

/// Rigorous global lower bound for a cosine polynomial by adaptive interval
/// subdivision on `[0, 1/2]` with the Lipschitz bound `|T'| <= 2 pi sum h|a_h|`.
struct Certification {
    lower_bound: f64,
    violations: Vec<f64>,
}

fn certify(poly: &CosinePoly, target_gap: f64, eval_budget: usize) -> Certification {
    let lip = poly.derivative_bound();
    if lip == 0.0 {
        return Certification { lower_bound: poly.a0, violations: Vec::new() };
    }
    let mut evals = 0usize;
    let x0 = 0.0;
    let x1 = 0.5;
    let mut best_eval = f64::INFINITY;
    let mut minima: Vec<(f64, f64)> = Vec::new();
    let mut settled_bound = f64::INFINITY;
    // seed with a grid fine enough to see every frequency
    let seed = (8 * poly.degree().max(1)) as usize;
    let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut prev_x = x0;
    let mut prev_v = poly.eval(x0);
    evals += 1;
    best_eval = best_eval.min(prev_v);
    for i in 1..=seed {
        let x = x0 + (x1 - x0) * i as f64 / seed as f64;
        let v = poly.eval(x);
        evals += 1;
        best_eval = best_eval.min(v);
        stack.push((prev_x, x, prev_v, v));
        prev_x = x;
        prev_v = v;
    }
    while let Some((a, b, va, vb)) = stack.pop() {
        let bound = va.min(vb) - lip * (b - a) / 2.0;
        if bound >= best_eval - target_gap || evals >= eval_budget {
            settled_bound = settled_bound.min(bound);
            if va.min(vb) < -1e-12 {
                let (x, v) = if va <= vb { (a, va) } else { (b, vb) };
                minima.push((x, v));
            }
            continue;
        }
        let mid = 0.5 * (a + b);
        let vm = poly.eval(mid);
        evals += 1;
        best_eval = best_eval.min(vm);
        stack.push((a, mid, va, vm));
        stack.push((mid, b, vm, vb));
    }
    let lower_bound = settled_bound.min(best_eval);

    // deepest violation points, separated so one dip yields one cut
    minima.sort_by(|p, q| p.1.total_cmp(&q.1));
    let min_sep = 0.25 / (poly.degree().max(1) as f64);
    let mut violations: Vec<f64> = Vec::new();
    for (x, _) in minima {
        if violations.iter().all(|&y| (y - x).abs() > min_sep) {
            violations.push(x);
        }
        if violations.len() >= 64 {
            break;
        }
    }
    Certification { lower_bound, violations }
}
