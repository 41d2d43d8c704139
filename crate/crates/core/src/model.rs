//! The canonical fourth-order equation
//!
//! ```text
//! u'''' - b u'' + a u = c u u'' + d u'^2 + g u^2 + h u^3
//!                     + p u u''' + q u u'' + r u u' + s u^3 u'
//! ```
//!
//! The first four nonlinear terms keep the equation invariant under
//! `z -> -z`; `p`, `q`, `r` and `s` break that symmetry.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients of the equation.
///
/// `a` and `b` are the linear coefficients that place the origin in the
/// `(b, a)` plane; the remaining eight multiply the nonlinear terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SystemParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub g: f64,
    pub h: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
}

impl SystemParams {
    /// Parameters with only the symmetry-preserving nonlinearity.
    pub fn reversible(a: f64, b: f64, c: f64, d: f64, g: f64, h: f64) -> Self {
        SystemParams {
            a,
            b,
            c,
            d,
            g,
            h,
            ..Default::default()
        }
    }

    /// Purely linear equation `u'''' - b u'' + a u = 0`.
    pub fn linear(a: f64, b: f64) -> Self {
        SystemParams {
            a,
            b,
            ..Default::default()
        }
    }

    pub fn is_reversible(&self) -> bool {
        self.p == 0.0 && self.q == 0.0 && self.r == 0.0 && self.s == 0.0
    }

    pub fn is_linear(&self) -> bool {
        self.is_reversible() && self.c == 0.0 && self.d == 0.0 && self.g == 0.0 && self.h == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named() {
            if !v.is_finite() {
                return Err(Error::invalid(format!("coefficient {name} = {v} is not finite")));
            }
        }
        Ok(())
    }

    /// `(name, value)` pairs in declaration order.
    pub fn named(&self) -> [(&'static str, f64); 10] {
        [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("g", self.g),
            ("h", self.h),
            ("p", self.p),
            ("q", self.q),
            ("r", self.r),
            ("s", self.s),
        ]
    }

    /// Mutable access by coefficient name, used by configuration and sweeps.
    pub fn get_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "a" => &mut self.a,
            "b" => &mut self.b,
            "c" => &mut self.c,
            "d" => &mut self.d,
            "g" => &mut self.g,
            "h" => &mut self.h,
            "p" => &mut self.p,
            "q" => &mut self.q,
            "r" => &mut self.r,
            "s" => &mut self.s,
            _ => return None,
        })
    }
}

/// Value of a scalar that can sit in a [`Jet`].
pub trait JetScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self>
{
    fn modulus(self) -> f64;
}

impl JetScalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl JetScalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// `u` and its first four derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet<T> {
    pub u: T,
    pub u1: T,
    pub u2: T,
    pub u3: T,
    pub u4: T,
}

pub type JetValue = Jet<f64>;

/// Jet of a complex-valued branch series before the conjugate is added.
pub type ComplexJet = Jet<Complex64>;

impl<T: Copy> Jet<T> {
    pub fn from_array(v: [T; 5]) -> Self {
        Jet {
            u: v[0],
            u1: v[1],
            u2: v[2],
            u3: v[3],
            u4: v[4],
        }
    }

    pub fn to_array(&self) -> [T; 5] {
        [self.u, self.u1, self.u2, self.u3, self.u4]
    }

    pub fn order(&self, n: usize) -> T {
        self.to_array()[n]
    }
}

/// Right-hand side `f(u, u', u'', u''')`.
pub fn eval_nonlinearity<T: JetScalar>(params: &SystemParams, jet: &Jet<T>) -> T {
    nonlinear_terms(params, jet)
        .into_iter()
        .reduce(|acc, t| acc + t)
        .expect("eight terms")
}

fn nonlinear_terms<T: JetScalar>(p: &SystemParams, j: &Jet<T>) -> [T; 8] {
    let u = j.u;
    [
        u * j.u2 * p.c,
        j.u1 * j.u1 * p.d,
        u * u * p.g,
        u * u * u * p.h,
        u * j.u3 * p.p,
        u * j.u2 * p.q,
        u * j.u1 * p.r,
        u * u * u * j.u1 * p.s,
    ]
}

/// `u'''' - b u'' + a u - f`, zero exactly when the jet satisfies the equation.
pub fn residual_at<T: JetScalar>(params: &SystemParams, jet: &Jet<T>) -> T {
    jet.u4 - jet.u2 * params.b + jet.u * params.a - eval_nonlinearity(params, jet)
}

/// Sum of the moduli of every term entering [`residual_at`].
///
/// A computed residual smaller than a few ulps of this number carries no
/// information.
pub fn residual_scale<T: JetScalar>(params: &SystemParams, jet: &Jet<T>) -> f64 {
    let linear = jet.u4.modulus() + (jet.u2 * params.b).modulus() + (jet.u * params.a).modulus();
    nonlinear_terms(params, jet)
        .iter()
        .fold(linear, |acc, t| acc + t.modulus())
}

/// Real equilibria: the real roots of `a u - g u^2 - h u^3`, ascending, always
/// containing 0. Complex pairs are dropped.
pub fn fixed_points(params: &SystemParams) -> Vec<f64> {
    let SystemParams { a, g, h, .. } = *params;
    let mut points = vec![0.0];
    if h != 0.0 {
        // h u^2 + g u - a = 0
        let disc = g * g + 4.0 * a * h;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // avoid cancellation between -g and the square root
            let big = -0.5 * (g + g.signum() * sq);
            if big != 0.0 {
                // product of the two roots is -a / h
                points.push(big / h);
                points.push(-a / big);
            }
        }
    } else if g != 0.0 {
        points.push(a / g);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}
