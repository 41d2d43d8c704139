//! Coefficient recurrence for the exponential series
//! `u(z) = sum_k a_k e^{k alpha z}`.
//!
//! Matching powers of `e^{alpha z}` after substitution gives, for `k > 1`,
//!
//! ```text
//! p(k alpha) a_k = F1(k) + F2(k) + F3(k)
//! ```
//!
//! with `p` the characteristic quartic and `F1`, `F2`, `F3` the quadratic,
//! cubic and quartic contributions of the nonlinearity, each built only from
//! `a_1 .. a_{k-1}`. Every `Fn(k)` is a degree-`k` monomial sum in those
//! coefficients, so with `a_1 = 1` the recurrence yields functionals
//! `phi_k` and the realized coefficients are `a_k = phi_k a_1^k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::spectrum::resonance_poly;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 30;

/// Below this `|p(k alpha)|` the division is refused.
const RESONANCE_FLOOR: f64 = 1e-300;

/// Which half-line a table is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// `Re(alpha) < 0`, series converges for `z > 0`.
    ForwardDecaying,
    /// `Re(alpha) > 0`, series converges for `z < 0`.
    BackwardGrowing,
}

/// Functionals `phi_1 = 1, phi_2, .., phi_K` for one base rate `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    alpha: Complex64,
    kind: SeriesKind,
    /// `phi[0] = 0` and `phi[1] = 1`, so `phi` doubles as the coefficient
    /// vector of the matching polynomial `x + sum phi_k x^k`.
    phi: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.phi.len() - 1
    }

    /// `phi_k` for `1 <= k <= K`.
    pub fn phi(&self, k: usize) -> Complex64 {
        assert!(k >= 1 && k <= self.order(), "phi index {k} out of 1..={}", self.order());
        self.phi[k]
    }

    /// All functionals indexed by `k`, with a zero in slot 0.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.phi
    }

    /// True when every `phi_k`, `k >= 2`, vanishes.
    pub fn is_linear(&self) -> bool {
        self.phi[2..].iter().all(|p| *p == Complex64::new(0.0, 0.0))
    }

    /// Realized coefficients `a_k = phi_k x^k`, indexed by `k` (slot 0 is 0).
    pub fn realize(&self, amplitude: Complex64) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.phi.len());
        out.push(Complex64::new(0.0, 0.0));
        let mut power = Complex64::new(1.0, 0.0);
        for (k, phi) in self.phi.iter().enumerate().skip(1) {
            power *= amplitude;
            let a_k = if *phi == Complex64::new(0.0, 0.0) {
                *phi
            } else {
                *phi * power
            };
            if !a_k.re.is_finite() || !a_k.im.is_finite() {
                return Err(Error::Overflow { k });
            }
            out.push(a_k);
        }
        Ok(out)
    }
}

fn check_prefix(k: usize, min_k: usize, coeffs: &[Complex64]) -> Result<()> {
    if k < min_k {
        return Err(Error::invalid(format!("order k = {k} must be at least {min_k}")));
    }
    if coeffs.len() < k {
        return Err(Error::invalid(format!(
            "need coefficients a_1..a_{} but got {} slots",
            k - 1,
            coeffs.len()
        )));
    }
    Ok(())
}

/// Quadratic part `F1(k)`.
///
/// ```text
/// sum_{i=1}^{k-1} [ p m^3 alpha^3 + m^2 (c + i q alpha) alpha^2 + r m alpha
///                   + d m i alpha^2 + g ] a_m a_i,        m = k - i
/// ```
///
/// `i` is the summation index throughout. `coeffs[n]` holds `a_n`; slot 0 is
/// ignored.
pub fn rhs_quadratic(k: usize, alpha: Complex64, params: &SystemParams, coeffs: &[Complex64]) -> Result<Complex64> {
    check_prefix(k, 2, coeffs)?;
    let SystemParams { c, d, g, p, q, r, .. } = *params;
    let alpha2 = alpha * alpha;
    let alpha3 = alpha2 * alpha;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 1..k {
        let m = (k - i) as f64;
        let fi = i as f64;
        let bracket = alpha3 * (p * m * m * m)
            + (alpha * (fi * q) + c) * alpha2 * (m * m)
            + alpha * (r * m)
            + alpha2 * (d * m * fi)
            + g;
        acc += bracket * coeffs[k - i] * coeffs[i];
    }
    Ok(acc)
}

/// Cubic part `F2(k) = h sum_{j=2}^{k-1} sum_{l=1}^{j-1} a_{k-j} a_{j-l} a_l`.
pub fn rhs_cubic(k: usize, params: &SystemParams, coeffs: &[Complex64]) -> Result<Complex64> {
    check_prefix(k, 3, coeffs)?;
    if params.h == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 2..k {
        for l in 1..j {
            acc += coeffs[k - j] * coeffs[j - l] * coeffs[l];
        }
    }
    Ok(acc * params.h)
}

/// Quartic part
/// `F3(k) = s sum_{i=3}^{k-1} sum_{j=2}^{i-1} sum_{l=1}^{j-1} a_{k-i} a_{j-l} a_l a_{i-j}`.
pub fn rhs_quartic(k: usize, params: &SystemParams, coeffs: &[Complex64]) -> Result<Complex64> {
    check_prefix(k, 4, coeffs)?;
    if params.s == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 3..k {
        for j in 2..i {
            for l in 1..j {
                acc += coeffs[k - i] * coeffs[j - l] * coeffs[l] * coeffs[i - j];
            }
        }
    }
    Ok(acc * params.s)
}

/// Table for the `z > 0` half-line; `alpha` must have negative real part.
pub fn phi_table(params: &SystemParams, alpha: Complex64, order: usize) -> Result<CoefficientTable> {
    if alpha.re >= 0.0 {
        return Err(Error::invalid(format!(
            "forward table needs Re(alpha) < 0, got alpha = {alpha}"
        )));
    }
    build_table(params, alpha, order, SeriesKind::ForwardDecaying)
}

/// Table for the `z < 0` half-line; `alpha` (normally `alpha4 = -alpha1`)
/// must have positive real part.
pub fn psi_table(params: &SystemParams, alpha: Complex64, order: usize) -> Result<CoefficientTable> {
    if alpha.re <= 0.0 {
        return Err(Error::invalid(format!(
            "backward table needs Re(alpha) > 0, got alpha = {alpha}"
        )));
    }
    build_table(params, alpha, order, SeriesKind::BackwardGrowing)
}

fn build_table(params: &SystemParams, alpha: Complex64, order: usize, kind: SeriesKind) -> Result<CoefficientTable> {
    params.validate()?;
    if order < 1 {
        return Err(Error::invalid("truncation order must be at least 1"));
    }
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::invalid(format!("alpha = {alpha} is not finite")));
    }

    let mut phi = vec![Complex64::new(0.0, 0.0); order + 1];
    phi[1] = Complex64::new(1.0, 0.0);
    for k in 2..=order {
        let mut rhs = rhs_quadratic(k, alpha, params, &phi)?;
        if k >= 3 {
            rhs += rhs_cubic(k, params, &phi)?;
        }
        if k >= 4 {
            rhs += rhs_quartic(k, params, &phi)?;
        }
        let denom = resonance_poly(k, alpha, params.a, params.b);
        if denom.norm() < RESONANCE_FLOOR {
            return Err(Error::Resonance {
                k,
                modulus: denom.norm(),
            });
        }
        let value = rhs / denom;
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::Overflow { k });
        }
        phi[k] = value;
    }
    Ok(CoefficientTable { alpha, kind, phi })
}
