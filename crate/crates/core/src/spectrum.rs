//! Linearization at the origin: roots of `alpha^4 - b alpha^2 + a = 0` and
//! the region of the `(b, a)` plane they place the origin in.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Half-width used to snap points onto the boundary curves.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

/// Eigenvalue structure of the origin.
///
/// Regions are open sets of the `(b, a)` plane; `C0`..`C3` are the curves
/// separating them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `±λ ± iω`: saddle-focus.
    Region1,
    /// `±λ1, ±λ2`: hyperbolic saddle.
    Region2,
    /// `±λ, ±iω`: saddle-center.
    Region3,
    /// `±iω1, ±iω2`: focus (all eigenvalues on the imaginary axis).
    Region4,
    /// `0, 0, ±λ` (`a = 0`, `b > 0`).
    C0,
    /// `0, 0, ±iω` (`a = 0`, `b < 0`).
    C1,
    /// `±iω` double (`b^2 = 4a`, `b < 0`).
    C2,
    /// `±λ` double (`b^2 = 4a`, `b > 0`).
    C3,
    /// `a = b = 0`, all four eigenvalues zero.
    Origin,
}

impl Region {
    pub fn is_boundary(self) -> bool {
        !matches!(
            self,
            Region::Region1 | Region::Region2 | Region::Region3 | Region::Region4
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Region1 => "Region1",
            Region::Region2 => "Region2",
            Region::Region3 => "Region3",
            Region::Region4 => "Region4",
            Region::C0 => "C0",
            Region::C1 => "C1",
            Region::C2 => "C2",
            Region::C3 => "C3",
            Region::Origin => "Origin",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Characteristic roots together with the region tag of `(b, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub a: f64,
    pub b: f64,
    /// In Region 1: `(-λ+iω, -λ-iω, λ+iω, λ-iω)`; otherwise sorted by
    /// `(re, im)`.
    pub roots: [Complex64; 4],
    pub region: Region,
}

impl Spectrum {
    pub fn new(a: f64, b: f64) -> Self {
        Self::with_tolerance(a, b, DEFAULT_BOUNDARY_TOL)
    }

    pub fn with_tolerance(a: f64, b: f64, tol: f64) -> Self {
        Spectrum {
            a,
            b,
            roots: char_roots(a, b),
            region: classify_region(a, b, tol),
        }
    }

    pub fn require_region1(&self) -> Result<()> {
        match self.region {
            Region::Region1 => Ok(()),
            region => Err(Error::NotRegion1 { region }),
        }
    }

    /// Decaying rate `-λ + iω` used for `z > 0`.
    pub fn alpha1(&self) -> Result<Complex64> {
        self.require_region1()?;
        Ok(self.roots[0])
    }

    /// Growing rate `λ - iω = -alpha1` used for `z < 0`.
    pub fn alpha4(&self) -> Result<Complex64> {
        self.require_region1()?;
        Ok(self.roots[3])
    }

    /// `λ + iω`, the unstable partner of `alpha4`.
    pub fn alpha3(&self) -> Result<Complex64> {
        self.require_region1()?;
        Ok(self.roots[2])
    }
}

/// The four roots `±sqrt((b ± sqrt(b^2 - 4a)) / 2)`.
pub fn char_roots(a: f64, b: f64) -> [Complex64; 4] {
    let disc = Complex64::new(b * b - 4.0 * a, 0.0).sqrt();
    let bc = Complex64::new(b, 0.0);
    // larger-modulus root of s^2 - b s + a first, the other from s1 s2 = a
    let s1 = if (bc + disc).norm() >= (bc - disc).norm() {
        (bc + disc) * 0.5
    } else {
        (bc - disc) * 0.5
    };
    let s2 = if s1.norm() > 0.0 {
        Complex64::new(a, 0.0) / s1
    } else {
        Complex64::new(0.0, 0.0)
    };
    let (r1, r2) = (s1.sqrt(), s2.sqrt());

    if b * b - 4.0 * a < 0.0 {
        // complex quartet: every root has the same |re| and |im|
        let lambda = r1.re.abs();
        let omega = r1.im.abs();
        return [
            Complex64::new(-lambda, omega),
            Complex64::new(-lambda, -omega),
            Complex64::new(lambda, omega),
            Complex64::new(lambda, -omega),
        ];
    }

    let mut roots = [r1, -r1, r2, -r2];
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    roots
}

/// Region tag of `(b, a)`; points within `tol` (relative) of a boundary
/// curve get the curve's tag.
pub fn classify_region(a: f64, b: f64, tol: f64) -> Region {
    if a == 0.0 && b == 0.0 {
        return Region::Origin;
    }
    let disc = b * b - 4.0 * a;
    let a_zero = a.abs() <= tol * (b * b + a.abs());
    let disc_zero = disc.abs() <= tol * (b * b + 4.0 * a.abs());

    if a_zero {
        if b > 0.0 {
            Region::C0
        } else if b < 0.0 {
            Region::C1
        } else {
            Region::Origin
        }
    } else if disc_zero {
        if b > 0.0 {
            Region::C3
        } else {
            Region::C2
        }
    } else if disc < 0.0 {
        Region::Region1
    } else if a < 0.0 {
        Region::Region3
    } else if b > 0.0 {
        Region::Region2
    } else {
        Region::Region4
    }
}

/// Characteristic quartic evaluated at `k * alpha`.
pub fn resonance_poly(k: usize, alpha: Complex64, a: f64, b: f64) -> Complex64 {
    let x = alpha * k as f64;
    let x2 = x * x;
    x2 * x2 - x2 * b + a
}
