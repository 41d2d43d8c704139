//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::io::Write;
use std::time::{Duration, Instant};

use homoclinic::recurrence::CoefficientTable;
use homoclinic::verify::{compare_aligned, verify_half};
use homoclinic::*;
use nalgebra::{Matrix4, Schur};

mod common;

use common::mode_residuals;

fn reversible_set() -> SystemParams {
    SystemParams::reversible(0.8, 1.5, 0.2, 0.1, 0.05, 0.02)
}

fn general_set() -> SystemParams {
    SystemParams {
        a: 0.6,
        b: 1.5,
        c: 0.2,
        d: 0.3,
        g: 0.5,
        h: 0.2,
        p: 0.1,
        q: 0.3,
        r: 0.1,
        s: 0.1,
    }
}

const REVERSIBLE_ROOT: Complex64 = Complex64::new(40.4440, -14.2061);
const FORWARD_ROOT: Complex64 = Complex64::new(2.3840, -8.9933);
const BACKWARD_ROOT: Complex64 = Complex64::new(11.8609, 3.8370);

/// Written straight to the stderr handle so the verdict shows up even when
/// the harness captures output of passing tests.
fn report(n: u32, pass: bool, detail: impl std::fmt::Display) {
    let line = format!("\ncriterion {n}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn forward(params: &SystemParams, order: usize) -> CoefficientTable {
    let alpha = Spectrum::new(params.a, params.b).alpha1().unwrap();
    phi_table(params, alpha, order).unwrap()
}

fn backward(params: &SystemParams, order: usize) -> CoefficientTable {
    let alpha = Spectrum::new(params.a, params.b).alpha4().unwrap();
    psi_table(params, alpha, order).unwrap()
}

/// Candidate closest to `target` and its relative distance.
fn nearest(table: &CoefficientTable, target: Complex64) -> (Complex64, f64) {
    let best = solve_matching(table)
        .unwrap()
        .candidates
        .into_iter()
        .map(|c| c.value)
        .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
        .expect("non-empty candidate set");
    (best, (best - target).norm() / target.norm())
}

#[test]
fn criterion_1_reversible_root() {
    let start = Instant::now();
    let params = reversible_set();
    let mut pass = true;
    let mut detail = String::new();
    for order in [20, 30] {
        let (root, rel) = nearest(&forward(&params, order), REVERSIBLE_ROOT);
        pass &= rel <= 0.15;
        detail += &format!("K={order}: {root:.4} rel {rel:.2e}; ");
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    report(1, pass, format!("{detail}{elapsed:?}"));
    assert!(pass);
}

#[test]
fn criterion_2_general_roots() {
    let start = Instant::now();
    let params = general_set();
    let mut pass = true;
    let mut detail = String::new();
    for order in [20, 30] {
        let (a1, rel_a) = nearest(&forward(&params, order), FORWARD_ROOT);
        let (b1, rel_b) = nearest(&backward(&params, order), BACKWARD_ROOT);
        pass &= rel_a <= 0.15 && rel_b <= 0.15;
        detail += &format!("K={order}: a1 {a1:.4} rel {rel_a:.3}, b1 {b1:.4} rel {rel_b:.3}; ");
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(2);
    report(2, pass, format!("{detail}{elapsed:?}"));
    assert!(pass);
}

#[test]
fn criterion_3_residual_law() {
    let mut pass = true;
    let mut detail = String::new();

    // (label, params, table builder, quoted root, side)
    type Builder = fn(&SystemParams, usize) -> CoefficientTable;
    let cases: [(&str, SystemParams, Builder, Complex64, Side); 3] = [
        (
            "reversible a1",
            reversible_set(),
            forward,
            REVERSIBLE_ROOT,
            Side::Positive,
        ),
        ("general a1", general_set(), forward, FORWARD_ROOT, Side::Positive),
        ("general b1", general_set(), backward, BACKWARD_ROOT, Side::Negative),
    ];
    for (label, params, build, quoted, side) in cases {
        for order in [10, 20, 30] {
            let table = build(&params, order);
            let (root, rel) = nearest(&table, quoted);
            // only roots accepted by criteria 1-2 count
            if order >= 20 && rel > 0.15 {
                detail += &format!("{label} K={order}: not accepted (rel {rel:.2}); ");
                continue;
            }
            let alpha = table.alpha();
            let half = HalfOrbit::new(table, root, side).unwrap();
            let r = verify_half(&half, &params, 0.5, 10.0, 400).unwrap();
            // slope in the direction away from the origin
            let expected = (order as f64 + 1.0) * -alpha.re.abs();
            let slope = match side {
                Side::Positive => r.residual_slope,
                Side::Negative => -r.residual_slope,
            };
            let slope_ok = ((slope - expected) / expected).abs() <= 0.10;
            let sup_ok = order != 30 || r.residual_sup <= 1e-6;
            pass &= slope_ok && sup_ok;
            detail += &format!(
                "{label} K={order}: sup {:.2e} slope {:.3} want {:.3} (branch series sup {:.2e} slope {:.3}); ",
                r.residual_sup,
                slope,
                expected,
                r.series_residual_sup,
                match side {
                    Side::Positive => r.series_residual_slope,
                    Side::Negative => -r.series_residual_slope,
                }
            );
        }
    }
    report(3, pass, detail);
    assert!(pass);
}

#[test]
fn criterion_4_decay_bound() {
    let params = reversible_set();
    let table = forward(&params, 30);
    let (a1, _) = nearest(&table, REVERSIBLE_ROOT);
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for k in 5..=30 {
        let ak = table.phi(k) * a1.powu(k as u32);
        let bound = 10f64.powi(-(k as i32 + 1)) * a1.norm().powi(k as i32);
        pass &= ak.norm() < bound;
        worst = worst.max(ak.norm() / bound);
    }
    report(
        4,
        pass,
        format!("max |a_k| / bound = {worst:.3} over k = 5..30, a1 = {a1:.4}"),
    );
    assert!(pass);
}

#[test]
fn criterion_5_reversible_degeneration() {
    let sets = [
        reversible_set(),
        SystemParams::reversible(0.8, -1.5, 0.2, 0.1, 0.05, 0.02),
        SystemParams::reversible(15.0, 3.75, -7.5, -3.75, -11.25, 0.0),
        SystemParams::reversible(0.5, 1.0, 1.3, -0.7, 0.4, -0.9),
    ];
    let mut worst: f64 = 0.0;
    for params in sets {
        let phi = forward(&params, 30);
        let psi = backward(&params, 30);
        for k in 1..=30 {
            let (x, y) = (phi.phi(k), psi.phi(k));
            let scale = x.norm().max(y.norm());
            if scale > 0.0 {
                worst = worst.max((x - y).norm() / scale);
            }
        }
    }
    let pass = worst <= 1e-12;
    report(5, pass, format!("max relative |psi_k - phi_k| = {worst:.2e}"));
    assert!(pass);
}

/// The hand formulas for `a_2 .. a_4` with `a_1 = 1`.
fn hand_formulas(params: &SystemParams, alpha: Complex64) -> [Complex64; 3] {
    let SystemParams { a, b, c, d, g, h, .. } = *params;
    let p = |k: f64| {
        let x = alpha * k;
        x * x * x * x - x * x * b + a
    };
    let al2 = alpha * alpha;
    let a2 = (al2 * (c + d) + g) / p(2.0);
    let a3 = ((al2 * (5.0 * c + 4.0 * d) + 2.0 * g) * a2 + h) / p(3.0);
    let a4 =
        ((al2 * (10.0 * c + 6.0 * d) + 2.0 * g) * a3 + (al2 * (4.0 * (c + d)) + g) * a2 * a2 + a2 * (3.0 * h)) / p(4.0);
    [a2, a3, a4]
}

#[test]
fn criterion_6_closed_forms() {
    let mut pass = true;
    let mut detail = String::new();

    // hand formulas where they are degree-consistent
    let mut worst_hand: f64 = 0.0;
    for b in [1.5, -1.5] {
        let params = SystemParams::reversible(0.8, b, 0.2, 0.1, 0.05, 0.02);
        let alpha = Spectrum::new(0.8, b).alpha1().unwrap();
        let table = phi_table(&params, alpha, 5).unwrap();
        for (i, want) in hand_formulas(&params, alpha).iter().enumerate() {
            let got = table.phi(i + 2);
            worst_hand = worst_hand.max((got - want).norm() / want.norm());
        }
    }
    pass &= worst_hand <= 1e-12;
    detail += &format!("phi2..phi4 vs hand forms {worst_hand:.1e}; ");

    // the printed a_5 mixes a_1 a_3 and a_1 a_2 terms of degree 4 and 3, so
    // series substitution decides modes up to 8 instead
    for b in [1.5, -1.5] {
        let params = SystemParams::reversible(0.8, b, 0.2, 0.1, 0.05, 0.02);
        let order = 8;
        let table = forward(&params, order);
        let rho = 1.0 / table.phi(2).norm();
        let modes = mode_residuals(&params, table.alpha(), table.coefficients(), rho, 64, order);
        // mode 1 is the characteristic equation itself
        let worst = modes.iter().map(|(r, size)| r.norm() / size).fold(0.0, f64::max);
        pass &= worst <= 1e-8;
        detail += &format!("b={b}: modes 1..8 max rel {worst:.1e}; ");
    }
    report(6, pass, detail);
    assert!(pass);
}

#[test]
fn criterion_7_symmetry() {
    let params = reversible_set();
    let mut pass = true;
    let mut detail = String::new();
    for order in [20, 30] {
        let (a1, _) = nearest(&forward(&params, order), REVERSIBLE_ROOT);
        let orbit = HomoclinicOrbit::reversible(&params, order, a1).unwrap();
        let samples = orbit.sample(-10.0, 10.0, 2001).unwrap();
        let peak = samples.iter().map(|s| s.jet.u.abs()).fold(0.0, f64::max);
        let n = samples.len();
        let worst = (0..n)
            .map(|i| (samples[i].jet.u - samples[n - 1 - i].jet.u).abs())
            .fold(0.0, f64::max);
        pass &= worst <= 1e-10 * peak;
        detail += &format!("K={order}: max |u(z)-u(-z)| / max|u| = {:.1e}; ", worst / peak);
    }
    report(7, pass, detail);
    assert!(pass);
}

#[test]
fn criterion_8_shooting() {
    let start = Instant::now();
    let params = reversible_set();
    let spectrum = Spectrum::new(params.a, params.b);
    let (a1, _) = nearest(&forward(&params, 20), REVERSIBLE_ROOT);
    let orbit = HomoclinicOrbit::reversible(&params, 20, a1).unwrap();
    let peak = orbit
        .sample(-12.0, 12.0, 2401)
        .unwrap()
        .iter()
        .map(|s| s.jet.u.abs())
        .fold(0.0, f64::max);
    let (pass, detail) = match shooting_oracle(&params, &spectrum, 12.0, &ShootingControls::default()) {
        Ok(result) => {
            let (dist, shift) = result
                .orbits
                .iter()
                .map(|o| compare_aligned(&orbit, &o.samples))
                .min_by(|x, y| x.0.total_cmp(&y.0))
                .unwrap();
            let oracle_peak = result
                .orbits
                .iter()
                .flat_map(|o| o.samples.iter().map(|s| s.u))
                .fold(0.0, |m: f64, u| if u.abs() > m.abs() { u } else { m });
            (
                dist <= 1e-3 * peak,
                format!(
                    "{} oracle orbit(s), oracle extremum {oracle_peak:.4}, series max|u| {peak:.4}, \
                     distance {dist:.3e} at shift {shift:.3}, ratio {:.2e}",
                    result.orbits.len(),
                    dist / peak
                ),
            )
        }
        Err(e) => (false, format!("oracle failed: {e}")),
    };
    let elapsed = start.elapsed();
    let pass = pass && elapsed < Duration::from_secs(30);
    report(8, pass, format!("{detail}; {elapsed:?}"));
    assert!(pass);
}

#[derive(Debug, PartialEq)]
enum Structure {
    Saddle,
    SaddleFocus,
    SaddleCenter,
    Center,
    Degenerate,
}

/// Eigenvalues of the companion matrix of `u'''' - b u'' + a u`.
fn eigen_structure(a: f64, b: f64) -> Structure {
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        -a, 0.0, b, 0.0,
    );
    // the QR iteration stalls on the bare companion pattern for about half
    // of the grid; a fixed orthogonal similarity leaves the spectrum alone
    #[rustfmt::skip]
    let seed = Matrix4::new(
        0.3, -1.2, 0.5, 0.7,
        0.9, 0.1, -0.4, 0.2,
        -0.6, 0.8, 1.1, -0.3,
        0.2, 0.4, -0.7, 1.3,
    );
    let q = seed.qr().q();
    let m = q.transpose() * m * q;
    let Some(schur) = Schur::try_new(m, f64::EPSILON, 10_000) else {
        return Structure::Degenerate;
    };
    let eig = schur.complex_eigenvalues();
    let tol = 1e-7;
    let mut real = 0;
    let mut imaginary = 0;
    let mut complex = 0;
    for e in eig.iter() {
        let (on_real, on_imag) = (e.im.abs() <= tol, e.re.abs() <= tol);
        match (on_real, on_imag) {
            (true, true) => return Structure::Degenerate,
            (true, false) => real += 1,
            (false, true) => imaginary += 1,
            (false, false) => complex += 1,
        }
    }
    match (real, imaginary, complex) {
        (0, 0, 4) => Structure::SaddleFocus,
        (4, 0, 0) => Structure::Saddle,
        (2, 2, 0) => Structure::SaddleCenter,
        (0, 4, 0) => Structure::Center,
        _ => Structure::Degenerate,
    }
}

#[test]
fn criterion_9_region_grid() {
    let start = Instant::now();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for i in 0..=100 {
        let a = -1.0 + 4.0 * i as f64 / 100.0;
        for j in 0..=100 {
            let b = -3.0 + 6.0 * j as f64 / 100.0;
            let region = classify_region(a, b, spectrum::DEFAULT_BOUNDARY_TOL);
            if region.is_boundary() {
                continue;
            }
            checked += 1;
            let want = match eigen_structure(a, b) {
                Structure::SaddleFocus => Region::Region1,
                Structure::Saddle => Region::Region2,
                Structure::SaddleCenter => Region::Region3,
                Structure::Center => Region::Region4,
                Structure::Degenerate => {
                    mismatches.push((a, b, region, None));
                    continue;
                }
            };
            if want != region {
                mismatches.push((a, b, region, Some(want)));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < Duration::from_secs(5);
    report(
        9,
        pass,
        format!(
            "{checked} interior points, {} disagreements, {elapsed:?}",
            mismatches.len()
        ),
    );
    assert!(pass, "{mismatches:?}");
}
