//! Piecewise homoclinic orbit
//!
//! ```text
//! u(z) = sum_k a_k e^{k alpha1 z} + c.c.   z > 0
//! u(z) = sum_k b_k e^{k alpha4 z} + c.c.   z < 0
//! ```
//!
//! with `a_k = phi_k a_1^k` and `b_k = psi_k b_1^k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ComplexJet, JetValue, SystemParams};
use crate::recurrence::{phi_table, psi_table, CoefficientTable, SeriesKind};
use crate::spectrum::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

/// One branch of the orbit: a table, its leading amplitude and the realized
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfOrbit {
    table: CoefficientTable,
    amplitude: Complex64,
    side: Side,
    coeffs: Vec<Complex64>,
}

impl HalfOrbit {
    pub fn new(table: CoefficientTable, amplitude: Complex64, side: Side) -> Result<Self> {
        let expected = match side {
            Side::Positive => SeriesKind::ForwardDecaying,
            Side::Negative => SeriesKind::BackwardGrowing,
        };
        if table.kind() != expected {
            return Err(Error::invalid(format!(
                "{side:?} half-orbit needs a {expected:?} table"
            )));
        }
        let coeffs = table.realize(amplitude)?;
        Ok(HalfOrbit {
            table,
            amplitude,
            side,
            coeffs,
        })
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn alpha(&self) -> Complex64 {
        self.table.alpha()
    }

    /// `a_k` indexed by `k`, slot 0 is zero.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `sum_k a_k (k alpha)^n e^{k alpha z}` without the conjugate.
    pub fn branch(&self, z: f64, n: usize) -> Complex64 {
        let alpha = self.alpha();
        let w = (alpha * z).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = (acc + *a * (alpha * k as f64).powu(n as u32)) * w;
        }
        acc
    }

    /// Jet of the complex branch, orders 0..=4.
    pub fn branch_jet(&self, z: f64) -> ComplexJet {
        let alpha = self.alpha();
        let w = (alpha * z).exp();
        let mut acc = [Complex64::new(0.0, 0.0); 5];
        for (k, a) in self.coeffs.iter().enumerate().skip(1).rev() {
            let rate = alpha * k as f64;
            let mut term = *a;
            for slot in acc.iter_mut() {
                *slot = (*slot + term) * w;
                term *= rate;
            }
        }
        ComplexJet::from_array(acc)
    }

    /// `2 Re` of the branch: the real orbit on this side.
    pub fn eval(&self, z: f64, n: usize) -> f64 {
        2.0 * self.branch(z, n).re
    }

    pub fn jet(&self, z: f64) -> JetValue {
        JetValue::from_array(self.branch_jet(z).to_array().map(|c| 2.0 * c.re))
    }

    /// `2 sum |a_k|`, the constant in `|u(z)| <= C e^{Re(alpha) z}`.
    pub fn tail_constant(&self) -> f64 {
        2.0 * self.coeffs.iter().map(|a| a.norm()).sum::<f64>()
    }
}

/// Two half-orbits glued at `z = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomoclinicOrbit {
    pub plus: HalfOrbit,
    pub minus: HalfOrbit,
    /// Mirror image halves, so `u(z) = u(-z)`.
    pub symmetric: bool,
}

impl HomoclinicOrbit {
    /// Symmetric orbit with `b_1 = a_1`. Requires reversible parameters and a
    /// Region 1 origin.
    pub fn reversible(params: &SystemParams, order: usize, a1: Complex64) -> Result<Self> {
        if !params.is_reversible() {
            return Err(Error::invalid("symmetric orbit needs p = q = r = s = 0"));
        }
        Self::general(params, order, a1, a1)
    }

    /// Orbit from independent amplitudes `a_1` (for `z > 0`) and `b_1`
    /// (for `z < 0`).
    pub fn general(params: &SystemParams, order: usize, a1: Complex64, b1: Complex64) -> Result<Self> {
        let spectrum = Spectrum::new(params.a, params.b);
        let plus = phi_table(params, spectrum.alpha1()?, order)?;
        let minus = psi_table(params, spectrum.alpha4()?, order)?;
        let symmetric = params.is_reversible() && a1 == b1;
        Ok(HomoclinicOrbit {
            plus: HalfOrbit::new(plus, a1, Side::Positive)?,
            minus: HalfOrbit::new(minus, b1, Side::Negative)?,
            symmetric,
        })
    }

    pub fn from_halves(plus: HalfOrbit, minus: HalfOrbit) -> Result<Self> {
        if plus.side != Side::Positive || minus.side != Side::Negative {
            return Err(Error::invalid("halves must be (Positive, Negative)"));
        }
        let symmetric = plus.amplitude == minus.amplitude
            && plus.alpha() == -minus.alpha()
            && plus
                .table
                .coefficients()
                .iter()
                .zip(minus.table.coefficients())
                .all(|(x, y)| (x - y).norm() <= 1e-12 * x.norm().max(y.norm()));
        Ok(HomoclinicOrbit { plus, minus, symmetric })
    }

    /// Half serving `z`; `z = 0` belongs to the plus side.
    pub fn half(&self, z: f64) -> &HalfOrbit {
        if z < 0.0 {
            &self.minus
        } else {
            &self.plus
        }
    }

    /// `u^(n)(z)` for `n <= 4`.
    ///
    /// # Panics
    ///
    /// If `n > 4`.
    pub fn eval(&self, z: f64, n: usize) -> f64 {
        assert!(n <= 4, "derivative order {n} > 4");
        self.half(z).eval(z, n)
    }

    pub fn jet(&self, z: f64) -> JetValue {
        self.half(z).jet(z)
    }

    /// Uniform grid of `n` points on `[z_min, z_max]`.
    pub fn sample(&self, z_min: f64, z_max: f64, n: usize) -> Result<Vec<OrbitSample>> {
        Ok(grid(z_min, z_max, n)?
            .into_iter()
            .map(|z| OrbitSample { z, jet: self.jet(z) })
            .collect())
    }

    /// `u(x - speed t, 0)` for every `t` in `times` and `n` grid points in
    /// `[x_min, x_max]`, one block per time.
    pub fn traveling_wave(
        &self,
        speed: f64,
        x_min: f64,
        x_max: f64,
        n: usize,
        times: &[f64],
    ) -> Result<Vec<WaveSample>> {
        let xs = grid(x_min, x_max, n)?;
        let mut out = Vec::with_capacity(xs.len() * times.len());
        for &t in times {
            for &x in &xs {
                out.push(WaveSample {
                    t,
                    x,
                    u: self.eval(x - speed * t, 0),
                });
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSample {
    pub z: f64,
    pub jet: JetValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub t: f64,
    pub x: f64,
    pub u: f64,
}

/// `n` equally spaced points from `lo` to `hi`, both included.
pub fn grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!("bad range [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(Error::invalid("grid needs at least two points"));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect())
}
