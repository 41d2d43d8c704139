use std::f64::consts::TAU;

use homoclinic::{Complex64, SystemParams};

/// Mode amplitudes `r_k` of the ODE residual of `w(z) = sum a_k e^{k alpha z}`
/// for `k = 1..=modes`, with the size of the largest term in each mode.
///
/// The series is evaluated at complex `z_j = ln(zeta_j) / alpha` where
/// `zeta_j` runs over `n` points of the circle `|zeta| = rho`. There the
/// basis `e^{k alpha z}` is `zeta^k`, orthogonal over the grid, so the
/// least-squares mode fit is a discrete Fourier transform and is exact as
/// long as `n` exceeds the highest mode present.
pub fn mode_residuals(
    params: &SystemParams,
    alpha: Complex64,
    coeffs: &[Complex64],
    rho: f64,
    n: usize,
    modes: usize,
) -> Vec<(Complex64, f64)> {
    let SystemParams {
        a,
        b,
        c,
        d,
        g,
        h,
        p,
        q,
        r,
        s,
    } = *params;
    let mut lin = vec![Complex64::new(0.0, 0.0); modes + 1];
    let mut non = vec![Complex64::new(0.0, 0.0); modes + 1];
    for j in 0..n {
        let zeta = Complex64::from_polar(rho, TAU * j as f64 / n as f64);
        let z = zeta.ln() / alpha;
        let mut w = [Complex64::new(0.0, 0.0); 5];
        for (k, ak) in coeffs.iter().enumerate().skip(1) {
            let rate = alpha * k as f64;
            let e = *ak * (rate * z).exp();
            for (order, slot) in w.iter_mut().enumerate() {
                *slot += e * rate.powu(order as u32);
            }
        }
        let [u, u1, u2, u3, u4] = w;
        let linear = u4 - u2 * b + u * a;
        let f = u * u2 * c
            + u1 * u1 * d
            + u * u * g
            + u * u * u * h
            + u * u3 * p
            + u * u2 * q
            + u * u1 * r
            + u * u * u * u1 * s;
        for k in 1..=modes {
            let basis = zeta.powi(-(k as i32)) / n as f64;
            lin[k] += linear * basis;
            non[k] += f * basis;
        }
    }
    (1..=modes)
        .map(|k| {
            let amp = coeffs.get(k).copied().unwrap_or_default();
            let x = alpha * k as f64;
            let linear_size = amp.norm() * (x.norm().powi(4) + b.abs() * x.norm_sqr() + a.abs());
            (lin[k] - non[k], linear_size.max(non[k].norm()))
        })
        .collect()
}
