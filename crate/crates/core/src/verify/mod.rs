//! Quality measures for a computed orbit: ODE residual, joins at `z = 0`,
//! coefficient decay, and distance to an independently integrated orbit.

mod shooting;

pub use shooting::{
    compare, compare_aligned, shooting_oracle, OracleSample, ShootingControls, ShootingOrbit, ShootingResult,
};

use crate::error::{Error, Result};
use crate::model::{residual_at, residual_scale, Jet, JetScalar, SystemParams};
use crate::orbit::{grid, HalfOrbit, HomoclinicOrbit, Side};
use crate::recurrence::CoefficientTable;

/// Residuals below `ROUNDOFF_ULPS * eps * (sum of term moduli)` are noise and
/// are left out of the slope fit.
pub const ROUNDOFF_ULPS: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    /// `max |residual| / max |u|` over the grid, real orbit.
    pub residual_sup: f64,
    /// Least-squares slope of `ln |residual|` against `z` on the plus side.
    pub residual_slope: f64,
    /// As `residual_sup` for the complex branch series alone (no conjugate).
    pub series_residual_sup: f64,
    pub series_residual_slope: f64,
    /// `max(|u(0+)|, |u(0-)|)`.
    pub continuity_gap: f64,
    /// `|u^(n)(0+) - u^(n)(0-)|` for `n = 1..=4`.
    pub derivative_jumps: [f64; 4],
    /// `log10(|a_k| / (10^{-(k+1)} |a_1|^k))` for `k = 5..=K`.
    pub decay_margins: Vec<f64>,
    pub oracle_distance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualFit {
    /// `max |residual| / max |u|`.
    pub sup: f64,
    /// Slope of `ln |residual|` in `z`; NaN when fewer than two points lie
    /// above the roundoff floor.
    pub slope: f64,
    /// Grid points that entered the fit.
    pub fitted: usize,
}

/// ODE residual of the real orbit on one side of the origin:
/// `0 < z_min < z_max` or `z_max < z_min < 0`.
pub fn ode_residual(
    orbit: &HomoclinicOrbit,
    params: &SystemParams,
    z_min: f64,
    z_max: f64,
    n: usize,
) -> Result<ResidualFit> {
    let half = one_side(orbit, z_min, z_max)?;
    fit_residual(params, &side_grid(z_min, z_max, n)?, |z| half.jet(z))
}

/// Same as [`ode_residual`] for the complex branch series
/// `sum a_k e^{k alpha z}` on its own.
pub fn series_residual(
    orbit: &HomoclinicOrbit,
    params: &SystemParams,
    z_min: f64,
    z_max: f64,
    n: usize,
) -> Result<ResidualFit> {
    let half = one_side(orbit, z_min, z_max)?;
    fit_residual(params, &side_grid(z_min, z_max, n)?, |z| half.branch_jet(z))
}

fn one_side(orbit: &HomoclinicOrbit, z_min: f64, z_max: f64) -> Result<&HalfOrbit> {
    if 0.0 < z_min && z_min < z_max {
        Ok(&orbit.plus)
    } else if z_max < z_min && z_min < 0.0 {
        Ok(&orbit.minus)
    } else {
        Err(Error::invalid(format!(
            "residual range [{z_min}, {z_max}] must lie strictly on one side of 0"
        )))
    }
}

fn side_grid(z_min: f64, z_max: f64, n: usize) -> Result<Vec<f64>> {
    grid(z_min.min(z_max), z_min.max(z_max), n)
}

fn fit_residual<T: JetScalar>(params: &SystemParams, zs: &[f64], jet: impl Fn(f64) -> Jet<T>) -> Result<ResidualFit> {
    let mut max_u: f64 = 0.0;
    let mut max_res: f64 = 0.0;
    let mut pts = Vec::with_capacity(zs.len());
    for &z in zs {
        let j = jet(z);
        let res = residual_at(params, &j).modulus();
        max_u = max_u.max(j.u.modulus());
        max_res = max_res.max(res);
        let floor = ROUNDOFF_ULPS * f64::EPSILON * residual_scale(params, &j);
        if res > floor && res.is_finite() {
            pts.push((z, res.ln()));
        }
    }
    let sup = if max_res == 0.0 { 0.0 } else { max_res / max_u };
    Ok(ResidualFit {
        sup,
        slope: least_squares_slope(&pts),
        fitted: pts.len(),
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `log10 |phi_k a^k| - log10(10^{-(k+1)} |a|^k)` for `k = 5..=K`, which
/// reduces to `log10 |phi_k| + k + 1`: the amplitude cancels. Negative
/// entries mean the bound `|a_k| < 10^{-(k+1)} |a_1|^k` holds; a vanishing
/// `phi_k` gives negative infinity. Empty when `K <= 4`.
pub fn decay_check(table: &CoefficientTable, _amplitude: num_complex::Complex64) -> Vec<f64> {
    (5..=table.order())
        .map(|k| {
            let phi = table.phi(k).norm();
            if phi == 0.0 {
                f64::NEG_INFINITY
            } else {
                phi.log10() + (k + 1) as f64
            }
        })
        .collect()
}

/// `(max(|u(0+)|, |u(0-)|), [|u^(n)(0+) - u^(n)(0-)|; n = 1..=4])`.
pub fn continuity_report(orbit: &HomoclinicOrbit) -> (f64, [f64; 4]) {
    let plus = orbit.plus.jet(0.0).to_array();
    let minus = orbit.minus.jet(0.0).to_array();
    let gap = plus[0].abs().max(minus[0].abs());
    let mut jumps = [0.0; 4];
    for n in 1..=4 {
        jumps[n - 1] = (plus[n] - minus[n]).abs();
    }
    (gap, jumps)
}

/// Full report over `z_min <= |z| <= z_max` on both sides.
pub fn verify_orbit(
    orbit: &HomoclinicOrbit,
    params: &SystemParams,
    z_min: f64,
    z_max: f64,
    n: usize,
) -> Result<VerificationReport> {
    let plus = ode_residual(orbit, params, z_min, z_max, n)?;
    let minus = ode_residual(orbit, params, -z_min, -z_max, n)?;
    let splus = series_residual(orbit, params, z_min, z_max, n)?;
    let sminus = series_residual(orbit, params, -z_min, -z_max, n)?;
    let (continuity_gap, derivative_jumps) = continuity_report(orbit);
    Ok(VerificationReport {
        residual_sup: plus.sup.max(minus.sup),
        residual_slope: plus.slope,
        series_residual_sup: splus.sup.max(sminus.sup),
        series_residual_slope: splus.slope,
        continuity_gap,
        derivative_jumps,
        decay_margins: decay_check(orbit.plus.table(), orbit.plus.amplitude()),
        oracle_distance: None,
    })
}

/// Report for a single half-orbit, used to rank matching candidates before
/// the two sides are paired. `z_min`, `z_max` are distances from the origin.
pub fn verify_half(
    half: &HalfOrbit,
    params: &SystemParams,
    z_min: f64,
    z_max: f64,
    n: usize,
) -> Result<VerificationReport> {
    if !(0.0 < z_min && z_min < z_max) {
        return Err(Error::invalid(format!(
            "need 0 < z_min < z_max, got [{z_min}, {z_max}]"
        )));
    }
    let sign = match half.side() {
        Side::Positive => 1.0,
        Side::Negative => -1.0,
    };
    let zs: Vec<f64> = grid(z_min, z_max, n)?.into_iter().map(|z| sign * z).collect();
    let real = fit_residual(params, &zs, |z| half.jet(z))?;
    let series = fit_residual(params, &zs, |z| half.branch_jet(z))?;
    Ok(VerificationReport {
        residual_sup: real.sup,
        residual_slope: real.slope,
        series_residual_sup: series.sup,
        series_residual_slope: series.slope,
        continuity_gap: half.eval(0.0, 0).abs(),
        derivative_jumps: [0.0; 4],
        decay_margins: decay_check(half.table(), half.amplitude()),
        oracle_distance: None,
    })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::matching::{matching_polynomial_eval, solve_matching};
    use crate::recurrence::phi_table;
    use crate::spectrum::Spectrum;

    fn paper_reversible() -> SystemParams {
        SystemParams::reversible(0.8, 1.5, 0.2, 0.1, 0.05, 0.02)
    }

    fn paper_root(order: usize) -> Complex64 {
        let alpha = Spectrum::new(0.8, 1.5).alpha1().unwrap();
        let table = phi_table(&paper_reversible(), alpha, order).unwrap();
        let quoted = Complex64::new(40.4440, -14.2061);
        solve_matching(&table)
            .unwrap()
            .candidates
            .into_iter()
            .map(|c| c.value)
            .min_by(|x, y| (x - quoted).norm().total_cmp(&(y - quoted).norm()))
            .unwrap()
    }

    #[test]
    fn linear_mode_has_zero_residual() {
        let params = SystemParams::linear(0.8, 1.5);
        let orbit = HomoclinicOrbit::reversible(&params, 10, Complex64::new(1.0, 0.5)).unwrap();
        let fit = ode_residual(&orbit, &params, 0.5, 10.0, 200).unwrap();
        assert!(fit.sup < 1e-13, "{}", fit.sup);
        let fit = ode_residual(&orbit, &params, -0.5, -10.0, 200).unwrap();
        assert!(fit.sup < 1e-13);
    }

    #[test]
    fn residual_range_must_be_one_sided() {
        let params = SystemParams::linear(0.8, 1.5);
        let orbit = HomoclinicOrbit::reversible(&params, 5, Complex64::new(1.0, 0.0)).unwrap();
        assert!(ode_residual(&orbit, &params, -1.0, 1.0, 10).is_err());
        assert!(ode_residual(&orbit, &params, 0.0, 1.0, 10).is_err());
    }

    #[test]
    fn slope_of_pure_exponential() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, -2.5 * i as f64 + 3.0)).collect();
        assert!((least_squares_slope(&pts) + 2.5).abs() < 1e-14);
        assert!(least_squares_slope(&pts[..1]).is_nan());
    }

    #[test]
    fn linear_decay_margins_are_sentinels() {
        let params = SystemParams::linear(0.8, 1.5);
        let alpha = Spectrum::new(0.8, 1.5).alpha1().unwrap();
        let table = phi_table(&params, alpha, 12).unwrap();
        let m = decay_check(&table, Complex64::new(3.0, 0.0));
        assert_eq!(m.len(), 8);
        assert!(m.iter().all(|x| *x == f64::NEG_INFINITY));
        let short = phi_table(&params, alpha, 4).unwrap();
        assert!(decay_check(&short, Complex64::new(1.0, 0.0)).is_empty());
    }

    #[test]
    fn paper_root_satisfies_decay_bound() {
        let order = 30;
        let a1 = paper_root(20);
        let alpha = Spectrum::new(0.8, 1.5).alpha1().unwrap();
        let table = phi_table(&paper_reversible(), alpha, order).unwrap();
        let margins = decay_check(&table, a1);
        assert_eq!(margins.len(), 26);
        assert!(margins.iter().all(|m| *m < 0.0), "{margins:?}");
        // direct form of the same inequality
        for k in 5..=order {
            let ak = table.phi(k) * a1.powu(k as u32);
            assert!(ak.norm() < 10f64.powi(-(k as i32 + 1)) * a1.norm().powi(k as i32));
        }
    }

    #[test]
    fn margins_do_not_depend_on_amplitude() {
        let alpha = Spectrum::new(0.8, 1.5).alpha1().unwrap();
        let table = phi_table(&paper_reversible(), alpha, 20).unwrap();
        let a1 = Complex64::new(40.4440, -14.2061);
        assert_eq!(decay_check(&table, a1), decay_check(&table, a1 * 10.0));
    }

    #[test]
    fn symmetric_orbit_jump_pattern() {
        let params = paper_reversible();
        let orbit = HomoclinicOrbit::reversible(&params, 20, paper_root(20)).unwrap();
        let (gap, jumps) = continuity_report(&orbit);
        let jet = orbit.plus.jet(0.0);
        assert!(gap <= 1e-10 * orbit.plus.tail_constant());
        assert!((jumps[0] - 2.0 * jet.u1.abs()).abs() <= 1e-12 * jet.u1.abs().max(1.0));
        assert!((jumps[2] - 2.0 * jet.u3.abs()).abs() <= 1e-12 * jet.u3.abs().max(1.0));
        assert!(jumps[1] <= 1e-12 * jet.u2.abs().max(1.0));
        assert!(jumps[3] <= 1e-12 * jet.u4.abs().max(1.0));
    }

    #[test]
    fn gap_is_matching_polynomial_for_arbitrary_amplitude() {
        let params = paper_reversible();
        let x = Complex64::new(3.0, 1.0);
        let orbit = HomoclinicOrbit::reversible(&params, 15, x).unwrap();
        let (gap, _) = continuity_report(&orbit);
        let p = matching_polynomial_eval(orbit.plus.table(), x).unwrap();
        assert!((gap - 2.0 * p.re.abs()).abs() <= 1e-12 * gap.max(1.0));
    }

    #[test]
    fn report_fields_are_populated() {
        let params = paper_reversible();
        let orbit = HomoclinicOrbit::reversible(&params, 20, paper_root(20)).unwrap();
        let r = verify_orbit(&orbit, &params, 0.5, 10.0, 200).unwrap();
        assert!(r.residual_sup.is_finite() && r.residual_sup >= 0.0);
        assert!(r.residual_slope.is_finite());
        assert_eq!(r.decay_margins.len(), 16);
        assert!(r.oracle_distance.is_none());
        let h = verify_half(&orbit.minus, &params, 0.5, 10.0, 200).unwrap();
        assert!((h.residual_sup - r.residual_sup).abs() <= 1e-9 * r.residual_sup);
    }
}
