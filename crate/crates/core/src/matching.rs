//! Continuity at `z = 0` turns each half-orbit into a polynomial condition
//! on its leading amplitude:
//!
//! ```text
//! x + phi_2 x^2 + ... + phi_K x^K = 0
//! ```
//!
//! Every nonzero root gives a half-orbit with `u(0) = 0`. The roots are not
//! unique, so all of them are computed and ranked afterwards.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyroots::{aberth, AberthOptions};
use crate::recurrence::CoefficientTable;
use crate::verify::VerificationReport;

/// Polynomial tolerance after the Newton polish, scaled by `(1 + |r|)^K`.
pub const POLY_TOLERANCE: f64 = 1e-10;

/// The truncated matching polynomial of one coefficient table.
#[derive(Debug, Clone)]
pub struct MatchingProblem {
    table: CoefficientTable,
    scale: f64,
    /// `c_j = phi_{j+1} scale^j`, so that `P(scale w) = scale w sum c_j w^j`.
    reduced: Vec<Complex64>,
}

impl MatchingProblem {
    pub fn new(table: CoefficientTable) -> Self {
        let scale = balancing_scale(&table);
        let reduced = table
            .coefficients()
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, phi)| scaled(*phi, scale, j))
            .collect();
        MatchingProblem { table, scale, reduced }
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    /// Truncation order, which is also the polynomial degree.
    pub fn order(&self) -> usize {
        self.table.order()
    }

    /// Variable scale `x = scale * w` used to balance the coefficients.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        Ok(self.eval_with_derivative(x)?.0)
    }

    /// `P(x)` and `P'(x)`.
    pub fn eval_with_derivative(&self, x: Complex64) -> Result<(Complex64, Complex64)> {
        let w = x / self.scale;
        // Horner from the top so the failing order can be reported
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        for (j, &c) in self.reduced.iter().enumerate().rev() {
            dq = dq * w + q;
            q = q * w + c;
            if !(q.re.is_finite() && q.im.is_finite() && dq.re.is_finite() && dq.im.is_finite()) {
                return Err(Error::Overflow { k: j + 1 });
            }
        }
        // P = scale w Q(w), dP/dx = Q(w) + w Q'(w)
        let value = x * q;
        let deriv = q + w * dq;
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Overflow { k: 1 });
        }
        Ok((value, deriv))
    }
}

/// `x + sum_{k=2}^{K} phi_k x^k`.
pub fn matching_polynomial_eval(table: &CoefficientTable, x: Complex64) -> Result<Complex64> {
    MatchingProblem::new(table.clone()).eval(x)
}

fn scaled(phi: Complex64, scale: f64, power: usize) -> Complex64 {
    if phi.norm() == 0.0 {
        return phi;
    }
    let log_mod = phi.norm().ln() + power as f64 * scale.ln();
    Complex64::from_polar(log_mod.exp(), phi.arg())
}

/// `1 / |phi_2|`, or the geometric mean of `|phi_k|^{-1/(k-1)}` when
/// `phi_2` vanishes.
fn balancing_scale(table: &CoefficientTable) -> f64 {
    let coeffs = table.coefficients();
    if coeffs.len() > 2 && coeffs[2].norm() > 0.0 {
        let s = 1.0 / coeffs[2].norm();
        if s.is_finite() {
            return s;
        }
    }
    let logs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(2)
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| -c.norm().ln() / (k as f64 - 1.0))
        .collect();
    if logs.is_empty() {
        1.0
    } else {
        (logs.iter().sum::<f64>() / logs.len() as f64).exp()
    }
}

/// One nonzero root of the matching polynomial with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RootCandidate {
    pub value: Complex64,
    /// `|P(value)|`.
    pub polynomial_residual: f64,
    /// Relative ODE residual of the resulting half-orbit, once verified.
    pub orbit_residual: Option<f64>,
    /// `log10(|a_K| / |a_1|)` for `a_k = phi_k value^k`. Negative when the
    /// realized coefficients decay by the truncation order; candidates with
    /// a non-negative margin sit outside the disk where the series is useful.
    pub decay_margin: f64,
}

impl RootCandidate {
    pub fn is_decaying(&self) -> bool {
        self.decay_margin < 0.0
    }
}

#[derive(Debug, Clone)]
pub struct MatchingRoots {
    pub candidates: Vec<RootCandidate>,
    /// Set when there is nothing to solve.
    pub diagnostic: Option<String>,
    pub iterations: usize,
}

pub const LINEAR_DIAGNOSTIC: &str = "linear system: no nontrivial homoclinic series";

/// Every nonzero root of the matching polynomial, sorted by `(re, im)`.
pub fn solve_matching(table: &CoefficientTable) -> Result<MatchingRoots> {
    solve_matching_with(table, AberthOptions::default())
}

pub fn solve_matching_with(table: &CoefficientTable, opts: AberthOptions) -> Result<MatchingRoots> {
    if table.order() < 2 || table.is_linear() {
        return Ok(MatchingRoots {
            candidates: Vec::new(),
            diagnostic: Some(LINEAR_DIAGNOSTIC.to_string()),
            iterations: 0,
        });
    }
    let problem = MatchingProblem::new(table.clone());

    // drop trailing zero functionals: they lower the degree
    let degree = problem.reduced.iter().rposition(|c| c.norm() > 0.0).unwrap_or(0);
    let reduced = &problem.reduced[..=degree];
    let solved = aberth(reduced, opts)?;

    let order = table.order();
    let mut candidates = Vec::with_capacity(solved.roots.len());
    for w in solved.roots {
        let mut x = w * problem.scale;
        let (mut value, deriv) = problem.eval_with_derivative(x)?;
        let polished = x - value / deriv;
        if polished.re.is_finite() && polished.im.is_finite() {
            if let Ok(v) = problem.eval(polished) {
                if v.norm() <= value.norm() {
                    x = polished;
                    value = v;
                }
            }
        }
        candidates.push(RootCandidate {
            value: x,
            polynomial_residual: value.norm(),
            orbit_residual: None,
            decay_margin: decay_margin(table, x, order),
        });
    }
    candidates.sort_by(|a, b| cmp_complex(a.value, b.value));
    Ok(MatchingRoots {
        candidates,
        diagnostic: None,
        iterations: solved.iterations,
    })
}

fn decay_margin(table: &CoefficientTable, x: Complex64, order: usize) -> f64 {
    let last = table.phi(order).norm();
    if last == 0.0 {
        return f64::NEG_INFINITY;
    }
    last.log10() + (order as f64 - 1.0) * x.norm().log10()
}

fn cmp_complex(a: Complex64, b: Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn key(x: Option<f64>) -> f64 {
    match x {
        Some(v) if !v.is_nan() => v,
        _ => f64::INFINITY,
    }
}

/// Order candidates by orbit residual, then decay margin, then polynomial
/// residual, ties broken by `(re, im)`. `reports[i]` belongs to
/// `candidates[i]`; its `residual_sup` becomes the orbit residual.
///
/// # Panics
///
/// If the two slices differ in length.
pub fn rank_candidates(candidates: &[RootCandidate], reports: &[VerificationReport]) -> Vec<RootCandidate> {
    assert_eq!(candidates.len(), reports.len(), "one report per candidate");
    let mut ranked: Vec<RootCandidate> = candidates
        .iter()
        .zip(reports)
        .map(|(c, r)| RootCandidate {
            orbit_residual: Some(r.residual_sup),
            ..c.clone()
        })
        .collect();
    ranked.sort_by(|a, b| {
        key(a.orbit_residual)
            .total_cmp(&key(b.orbit_residual))
            .then(nan_last(a.decay_margin).total_cmp(&nan_last(b.decay_margin)))
            .then(nan_last(a.polynomial_residual).total_cmp(&nan_last(b.polynomial_residual)))
            .then(cmp_complex(a.value, b.value))
    });
    ranked
}

fn nan_last(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}
