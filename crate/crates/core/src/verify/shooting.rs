//! Independent check: integrate the first-order system numerically from the
//! unstable manifold of the origin and shoot for a homoclinic return.
//!
//! With reversible parameters a trajectory that reaches `u' = u''' = 0`
//! continues as its own mirror image, so one half-line and a phase `theta`
//! are enough. Otherwise the shot is scored by how little of the returning
//! state lies along the unstable directions.

use std::f64::consts::TAU;

use num_complex::Complex64;
use ode_solvers::{Dopri5, OutputType, System, Vector4};

use crate::error::{Error, Result};
use crate::model::{eval_nonlinearity, JetValue, SystemParams};
use crate::orbit::HomoclinicOrbit;
use crate::spectrum::Spectrum;

type State = Vector4<f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingControls {
    /// Distance from the origin of the starting point.
    pub epsilon: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Spacing of the dense output used for event search and samples.
    pub output_step: f64,
    /// Integration horizon for one shot.
    pub max_time: f64,
    /// Number of starting phases in `[0, 2 pi)`.
    pub theta_starts: usize,
    /// Iteration cap of each one-dimensional root or minimum search.
    pub max_iterations: usize,
    /// Accepted relative boundary mismatch.
    pub tolerance: f64,
    /// Shots leaving this ball are cut off.
    pub blowup: f64,
    /// Symmetry events closer than this to the origin are ignored.
    pub event_floor: f64,
    /// Symmetric points examined per shot.
    pub max_events: usize,
}

impl Default for ShootingControls {
    fn default() -> Self {
        ShootingControls {
            epsilon: 1e-6,
            rtol: 1e-11,
            atol: 1e-15,
            output_step: 0.01,
            max_time: 80.0,
            theta_starts: 48,
            max_iterations: 100,
            tolerance: 1e-7,
            blowup: 1e4,
            event_floor: 1e-2,
            max_events: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub z: f64,
    pub u: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl OracleSample {
    /// Jet including `u''''` from the equation itself.
    pub fn jet(&self, params: &SystemParams) -> JetValue {
        let mut jet = JetValue::from_array([self.u, self.u1, self.u2, self.u3, 0.0]);
        jet.u4 = params.b * self.u2 - params.a * self.u + eval_nonlinearity(params, &jet);
        jet
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingOrbit {
    /// Starting phase on the unstable manifold.
    pub theta: f64,
    /// Shooting time of the pulse centre, `z = 0` in `samples`.
    pub center: f64,
    /// Relative boundary mismatch at convergence.
    pub mismatch: f64,
    pub samples: Vec<OracleSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    /// Converged orbits ordered by starting phase.
    pub orbits: Vec<ShootingOrbit>,
}

struct Flow {
    params: SystemParams,
    blowup: f64,
}

impl System<f64, State> for Flow {
    fn system(&self, _t: f64, y: &State, dy: &mut State) {
        let jet = JetValue::from_array([y[0], y[1], y[2], y[3], 0.0]);
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = y[3];
        dy[3] = self.params.b * y[2] - self.params.a * y[0] + eval_nonlinearity(&self.params, &jet);
    }

    fn solout(&mut self, _t: f64, y: &State, _dy: &State) -> bool {
        !(y.norm() <= self.blowup)
    }
}

struct Shooter<'a> {
    params: &'a SystemParams,
    controls: &'a ShootingControls,
    /// Unstable eigenvector `(1, mu, mu^2, mu^3)` normalized.
    direction: [Complex64; 4],
}

struct Trajectory {
    t: Vec<f64>,
    y: Vec<State>,
}

impl Shooter<'_> {
    fn flow(&self) -> Flow {
        Flow {
            params: *self.params,
            blowup: self.controls.blowup,
        }
    }

    fn start(&self, theta: f64) -> State {
        let rot = Complex64::from_polar(self.controls.epsilon, theta);
        State::from_fn(|i, _| (rot * self.direction[i]).re)
    }

    /// Dense output on `0, dt, 2 dt, ..`, stopping early on blow-up.
    fn dense(&self, y0: State, t_end: f64, dt: f64) -> Result<Trajectory> {
        let c = self.controls;
        let mut solver = Dopri5::new(self.flow(), 0.0, t_end, dt, y0, c.rtol, c.atol);
        solver.integrate().map_err(|e| Error::Integration(e.to_string()))?;
        let (t, y) = solver.results().get();
        Ok(Trajectory {
            t: t.clone(),
            y: y.clone(),
        })
    }

    /// State after time `dt` (positive) from `y0`.
    fn advance(&self, y0: State, dt: f64) -> Result<State> {
        if dt == 0.0 {
            return Ok(y0);
        }
        let c = self.controls;
        let mut solver = Dopri5::new(self.flow(), 0.0, dt, dt, y0, c.rtol, c.atol);
        solver.set_output(OutputType::Sparse);
        solver.integrate().map_err(|e| Error::Integration(e.to_string()))?;
        let (t, y) = solver.results().get();
        match (t.last(), y.last()) {
            (Some(&tl), Some(yl)) if (tl - dt).abs() <= 1e-12 * dt.abs().max(1.0) => Ok(*yl),
            _ => Err(Error::Integration(format!("shot stopped before t = {dt}"))),
        }
    }

    /// Times and states where `u' = 0`, away from the origin.
    fn symmetry_events(&self, theta: f64) -> Result<Vec<(f64, State)>> {
        let c = self.controls;
        let traj = self.dense(self.start(theta), c.max_time, c.output_step)?;
        let mut events = Vec::new();
        for i in 0..traj.t.len().saturating_sub(1) {
            let (y0, y1) = (traj.y[i], traj.y[i + 1]);
            if y0.norm() < c.event_floor || y0[1] == 0.0 || y0[1].signum() == y1[1].signum() {
                continue;
            }
            let h = traj.t[i + 1] - traj.t[i];
            let mut s = h * y0[1] / (y0[1] - y1[1]);
            let mut y = self.advance(y0, s)?;
            for _ in 0..8 {
                if y[2] == 0.0 {
                    break;
                }
                let ds = -y[1] / y[2];
                if !(s + ds).is_finite() || s + ds < 0.0 || s + ds > 2.0 * h {
                    break;
                }
                s += ds;
                y = self.advance(y0, s)?;
                if ds.abs() <= 1e-14 * (1.0 + s) {
                    break;
                }
            }
            events.push((traj.t[i] + s, y));
            if events.len() == c.max_events {
                break;
            }
        }
        Ok(events)
    }

    /// `u'''` at the `j`-th symmetry event of the shot from `theta`.
    fn event_u3(&self, theta: f64, j: usize) -> Result<Option<(f64, f64, State)>> {
        Ok(self.symmetry_events(theta)?.get(j).map(|&(t, y)| (y[3], t, y)))
    }

    fn reversible(&self, half_width: f64) -> Result<ShootingResult> {
        let c = self.controls;
        let n = c.theta_starts.max(2);
        let thetas: Vec<f64> = (0..=n).map(|i| TAU * i as f64 / n as f64).collect();
        let scans: Vec<Vec<(f64, State)>> = thetas
            .iter()
            .map(|&th| self.symmetry_events(th))
            .collect::<Result<_>>()?;

        let mut best_mismatch = f64::INFINITY;
        let mut found: Vec<(f64, f64, State, f64)> = Vec::new();
        for j in 0..c.max_events {
            for i in 0..n {
                let (Some(l), Some(r)) = (scans[i].get(j), scans[i + 1].get(j)) else {
                    continue;
                };
                best_mismatch = best_mismatch.min(mismatch(&l.1)).min(mismatch(&r.1));
                if l.1[3].signum() == r.1[3].signum() {
                    continue;
                }
                let Some((theta, t, y)) = self.refine_phase(j, (thetas[i], l.1[3]), (thetas[i + 1], r.1[3]))? else {
                    continue;
                };
                let m = mismatch(&y);
                best_mismatch = best_mismatch.min(m);
                if m <= c.tolerance && !found.iter().any(|f| phase_distance(f.0, theta) < 1e-6) {
                    found.push((theta, t, y, m));
                }
            }
        }
        if found.is_empty() {
            return Err(Error::ShootingNotConverged {
                mismatch: best_mismatch,
            });
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        let orbits = found
            .into_iter()
            .map(|(theta, center, _, m)| {
                let samples = self.mirrored_samples(theta, center, half_width)?;
                Ok(ShootingOrbit {
                    theta,
                    center,
                    mismatch: m,
                    samples,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ShootingResult { orbits })
    }

    /// Illinois regula falsi on `theta -> u'''` at event `j`.
    fn refine_phase(&self, j: usize, mut lo: (f64, f64), mut hi: (f64, f64)) -> Result<Option<(f64, f64, State)>> {
        let mut side = 0i8;
        let mut last = None;
        for _ in 0..self.controls.max_iterations {
            let theta = (lo.0 * hi.1 - hi.0 * lo.1) / (hi.1 - lo.1);
            let Some((g, t, y)) = self.event_u3(theta, j)? else {
                return Ok(None);
            };
            last = Some((theta, t, y));
            if mismatch(&y) <= 1e-3 * self.controls.tolerance || (hi.0 - lo.0).abs() < 1e-15 {
                break;
            }
            if g.signum() == lo.1.signum() {
                lo = (theta, g);
                if side == -1 {
                    hi.1 *= 0.5;
                }
                side = -1;
            } else {
                hi = (theta, g);
                if side == 1 {
                    lo.1 *= 0.5;
                }
                side = 1;
            }
        }
        Ok(last)
    }

    /// Samples on `[-L, L]`, `L = min(center, half_width)`, with the left half
    /// integrated and the right half its mirror image.
    fn mirrored_samples(&self, theta: f64, center: f64, half_width: f64) -> Result<Vec<OracleSample>> {
        let c = self.controls;
        let steps = (center / c.output_step).round().max(1.0);
        let dt = center / steps;
        let traj = self.dense(self.start(theta), center, dt)?;
        let reach = half_width.min(center);
        let mut left: Vec<OracleSample> = traj
            .t
            .iter()
            .zip(&traj.y)
            .map(|(&t, y)| OracleSample {
                z: t - center,
                u: y[0],
                u1: y[1],
                u2: y[2],
                u3: y[3],
            })
            .filter(|s| s.z >= -reach - 1e-9 && s.z <= 1e-9)
            .collect();
        left.dedup_by(|a, b| (a.z - b.z).abs() < 0.5 * dt);
        if let Some(last) = left.last_mut() {
            // pin the centre exactly
            last.z = 0.0;
        }
        let mut out = left.clone();
        for s in left.iter().rev().skip(1) {
            out.push(OracleSample {
                z: -s.z,
                u: s.u,
                u1: -s.u1,
                u2: s.u2,
                u3: -s.u3,
            });
        }
        Ok(out)
    }

    /// `|w^T x| / (|w| |x|)` with `w` the left eigenvector of the unstable pair.
    fn unstable_fraction(&self, w: &[Complex64; 4], y: &State) -> f64 {
        let proj: Complex64 = (0..4).map(|i| w[i] * y[i]).sum();
        let wn = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        proj.norm() / (wn * y.norm())
    }

    /// Smallest unstable fraction after the excursion peak, with the time
    /// it is attained.
    fn return_score(&self, w: &[Complex64; 4], theta: f64) -> Result<(f64, f64, usize, Trajectory)> {
        let c = self.controls;
        let traj = self.dense(self.start(theta), c.max_time, c.output_step)?;
        let peak = traj
            .y
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map_or(0, |p| p.0);
        let mut best = (f64::INFINITY, 0.0);
        for (t, y) in traj.t.iter().zip(&traj.y).skip(peak) {
            let f = self.unstable_fraction(w, y);
            if f < best.0 {
                best = (f, *t);
            }
        }
        Ok((best.0, best.1, peak, traj))
    }

    fn general(&self, mu: Complex64, half_width: f64) -> Result<ShootingResult> {
        let c = self.controls;
        let b = self.params.b;
        let w = [mu * mu * mu - mu * b, mu * mu - b, mu, Complex64::new(1.0, 0.0)];
        let n = c.theta_starts.max(3);
        let score = |theta: f64| self.return_score(&w, theta).map(|s| s.0);
        let scores: Vec<f64> = (0..n)
            .map(|i| score(TAU * i as f64 / n as f64))
            .collect::<Result<_>>()?;
        let i = scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |p| p.0);
        let step = TAU / n as f64;
        let theta = golden_min(
            &score,
            TAU * i as f64 / n as f64 - step,
            TAU * i as f64 / n as f64 + step,
            c.max_iterations,
        )?;
        let (m, _, peak, traj) = self.return_score(&w, theta)?;
        if !(m <= c.tolerance) {
            return Err(Error::ShootingNotConverged {
                mismatch: m.min(scores[i]),
            });
        }
        let center = traj.t[peak];
        let samples = traj
            .t
            .iter()
            .zip(&traj.y)
            .map(|(&t, y)| OracleSample {
                z: t - center,
                u: y[0],
                u1: y[1],
                u2: y[2],
                u3: y[3],
            })
            .filter(|s| s.z.abs() <= half_width)
            .collect();
        Ok(ShootingResult {
            orbits: vec![ShootingOrbit {
                theta: theta.rem_euclid(TAU),
                center,
                mismatch: m,
                samples,
            }],
        })
    }
}

fn mismatch(y: &State) -> f64 {
    (y[1] * y[1] + y[3] * y[3]).sqrt() / y.norm()
}

fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn golden_min(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, iterations: usize) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iterations {
        if (hi - lo).abs() < 1e-12 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { x1 } else { x2 })
}

/// Shoot for homoclinic orbits of the origin and sample them on
/// `[-half_width, half_width]` around the pulse centre.
pub fn shooting_oracle(
    params: &SystemParams,
    spectrum: &Spectrum,
    half_width: f64,
    controls: &ShootingControls,
) -> Result<ShootingResult> {
    params.validate()?;
    let mu = spectrum.alpha3()?;
    if params.is_linear() {
        return Err(Error::NoConnection(
            "linear system: trajectories leaving the origin never return".into(),
        ));
    }
    if !(half_width > 0.0) || !(controls.epsilon > 0.0) || !(controls.output_step > 0.0) {
        return Err(Error::invalid("half_width, epsilon and output_step must be positive"));
    }
    let powers = [Complex64::new(1.0, 0.0), mu, mu * mu, mu * mu * mu];
    let norm = powers.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let shooter = Shooter {
        params,
        controls,
        direction: powers.map(|x| x / norm),
    };
    if params.is_reversible() {
        shooter.reversible(half_width)
    } else {
        shooter.general(mu, half_width)
    }
}

/// Sup-norm distance between the series orbit and oracle samples after the
/// best translation in `z`.
pub fn compare(orbit: &HomoclinicOrbit, samples: &[OracleSample]) -> f64 {
    compare_aligned(orbit, samples).0
}

/// Distance and the shift `s` minimizing `max_i |u(z_i + s) - u_i|`.
pub fn compare_aligned(orbit: &HomoclinicOrbit, samples: &[OracleSample]) -> (f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    let dist = |s: f64| {
        samples
            .iter()
            .map(|p| (orbit.eval(p.z + s, 0) - p.u).abs())
            .fold(0.0, f64::max)
    };
    let (zlo, zhi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.z), hi.max(p.z))
    });
    let reach = 0.5 * (zhi - zlo).max(1e-12);
    let n = 801;
    let mut best = (dist(0.0), 0.0);
    for k in 0..n {
        let s = reach * (2.0 * k as f64 - (n - 1) as f64) / (n - 1) as f64;
        let d = dist(s);
        if d < best.0 {
            best = (d, s);
        }
    }
    let step = 2.0 * reach / (n - 1) as f64;
    let refined = golden_min(&|s| Ok(dist(s)), best.1 - step, best.1 + step, 200).unwrap_or(best.1);
    let d = dist(refined);
    if d < best.0 {
        (d, refined)
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_system_has_no_connection() {
        let params = SystemParams::linear(0.8, 1.5);
        let err = shooting_oracle(&params, &Spectrum::new(0.8, 1.5), 10.0, &ShootingControls::default()).unwrap_err();
        assert!(matches!(err, Error::NoConnection(_)));
    }

    #[test]
    fn needs_region1() {
        let params = SystemParams::reversible(1.0, 2.0, 0.2, 0.0, 0.0, 0.0);
        let err = shooting_oracle(&params, &Spectrum::new(1.0, 2.0), 10.0, &ShootingControls::default()).unwrap_err();
        assert!(matches!(err, Error::NotRegion1 { .. }));
    }

    #[test]
    fn compare_self_and_shift_is_zero() {
        let params = SystemParams::linear(0.8, 1.5);
        let orbit = HomoclinicOrbit::reversible(&params, 5, Complex64::new(1.0, 0.3)).unwrap();
        let samples: Vec<OracleSample> = crate::orbit::grid(-6.0, 6.0, 121)
            .unwrap()
            .into_iter()
            .map(|z| OracleSample {
                z,
                u: orbit.eval(z, 0),
                u1: orbit.eval(z, 1),
                u2: orbit.eval(z, 2),
                u3: orbit.eval(z, 3),
            })
            .collect();
        assert_eq!(compare(&orbit, &samples), 0.0);
        let shifted: Vec<OracleSample> = samples.iter().map(|s| OracleSample { z: s.z - 0.737, ..*s }).collect();
        let (d, s) = compare_aligned(&orbit, &shifted);
        assert!((s - 0.737).abs() < 1e-6, "{s}");
        let peak = samples.iter().map(|s| s.u.abs()).fold(0.0, f64::max);
        assert!(d < 1e-6 * peak, "{d}");
    }

    #[test]
    fn finds_localized_pulse_for_comparison_set() {
        let params = SystemParams::reversible(15.0, 3.75, -7.5, -3.75, -11.25, 0.0);
        let spectrum = Spectrum::new(15.0, 3.75);
        let result = shooting_oracle(&params, &spectrum, 6.0, &ShootingControls::default()).unwrap();
        assert!(!result.orbits.is_empty());
        let pulse = result
            .orbits
            .iter()
            .map(|o| o.samples.iter().map(|s| s.u.abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        assert!(pulse > 0.1, "{pulse}");
        for o in &result.orbits {
            let ends = [o.samples.first().unwrap(), o.samples.last().unwrap()];
            for s in ends {
                assert!(s.u.abs() < 1e-3 * pulse, "not localized: {}", s.u);
            }
        }
    }
}
