//! Simultaneous all-roots iteration (Aberth–Ehrlich) for complex
//! polynomials.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct AberthOptions {
    pub max_iterations: usize,
    /// Relative correction size below which a root is frozen.
    pub tolerance: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        AberthOptions {
            max_iterations: 2000,
            tolerance: 1e-14,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AberthRoots {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
}

/// Value and derivative of `sum coeffs[i] x^i` by Horner's rule.
pub fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        deriv = deriv * x + value;
        value = value * x + c;
    }
    (value, deriv)
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(i, ln|c_i|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();

    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (i1, y1) = hull[hull.len() - 2];
            let (i2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly above the chord
            let cross = (i2 as f64 - i1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let mut guesses = Vec::with_capacity(n);
    // a zero constant term is not expected here, but keep the count right
    for _ in 0..pts.first().map_or(0, |p| p.0) {
        guesses.push(Complex64::new(0.0, 0.0));
    }
    for w in hull.windows(2) {
        let (i, yi) = w[0];
        let (j, yj) = w[1];
        let m = j - i;
        let radius = ((yi - yj) / m as f64).exp();
        for t in 0..m {
            let angle = TAU * t as f64 / m as f64 + TAU * i as f64 / n as f64 + 0.4;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

/// All `n` roots of `sum coeffs[i] x^i` with `coeffs[n] != 0`.
pub fn aberth(coeffs: &[Complex64], opts: AberthOptions) -> Result<AberthRoots> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(AberthRoots {
            roots: Vec::new(),
            iterations: 0,
        });
    }
    if coeffs[n].norm() == 0.0 {
        return Err(Error::invalid("leading coefficient is zero"));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::invalid("non-finite polynomial coefficient"));
    }
    if n == 1 {
        return Ok(AberthRoots {
            roots: vec![-coeffs[0] / coeffs[1]],
            iterations: 0,
        });
    }

    let mut z = initial_guesses(coeffs);
    let mut frozen = vec![false; n];
    let mut max_step = f64::INFINITY;
    for iter in 1..=opts.max_iterations {
        max_step = 0.0;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                frozen[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // nudge off a coincident iterate and try again next sweep
                let nudge = Complex64::from_polar(opts.tolerance.sqrt() * (1.0 + z[i].norm()), i as f64);
                z[i] += nudge;
                max_step = f64::INFINITY;
                continue;
            }
            z[i] -= step;
            let rel = step.norm() / z[i].norm().max(f64::MIN_POSITIVE);
            max_step = max_step.max(rel);
            if rel <= opts.tolerance {
                frozen[i] = true;
            }
        }
        if frozen.iter().all(|&f| f) {
            return Ok(AberthRoots {
                roots: z,
                iterations: iter,
            });
        }
    }
    Err(Error::RootsNotConverged {
        iterations: opts.max_iterations,
        max_step,
        best: z,
    })
}
