//! Homoclinic orbits of
//!
//! ```text
//! u'''' - b u'' + a u = f(u, u', u'', u''')
//! ```
//!
//! as exponential series `sum_k a_k e^{k alpha z} + c.c.`, one per half-line,
//! glued at `z = 0`.
//!
//! The pipeline is: classify the origin ([`spectrum`]), build the
//! coefficient functionals ([`recurrence`]), solve the matching polynomial
//! for the leading amplitude ([`matching`]), assemble the orbit ([`orbit`])
//! and measure it ([`verify`]).
//!
//! ```
//! use homoclinic::{phi_table, solve_matching, HomoclinicOrbit, Spectrum, SystemParams};
//!
//! let params = SystemParams::reversible(0.8, 1.5, 0.2, 0.1, 0.05, 0.02);
//! let alpha = Spectrum::new(params.a, params.b).alpha1()?;
//! let table = phi_table(&params, alpha, 20)?;
//! let roots = solve_matching(&table)?;
//! assert_eq!(roots.candidates.len(), 19);
//!
//! let orbit = HomoclinicOrbit::reversible(&params, 20, roots.candidates[0].value)?;
//! assert_eq!(orbit.eval(1.5, 0), orbit.eval(-1.5, 0));
//! # Ok::<(), homoclinic::Error>(())
//! ```

// `!(x < y)` is how NaN gets rejected along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod matching;
pub mod model;
pub mod orbit;
pub mod polyroots;
pub mod recurrence;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use matching::{
    matching_polynomial_eval, rank_candidates, solve_matching, MatchingProblem, MatchingRoots, RootCandidate,
};
pub use model::{eval_nonlinearity, fixed_points, residual_at, ComplexJet, Jet, JetValue, SystemParams};
pub use num_complex::Complex64;
pub use orbit::{HalfOrbit, HomoclinicOrbit, OrbitSample, Side, WaveSample};
pub use recurrence::{phi_table, psi_table, rhs_cubic, rhs_quadratic, rhs_quartic, CoefficientTable, SeriesKind};
pub use spectrum::{char_roots, classify_region, resonance_poly, Region, Spectrum};
pub use verify::{
    compare, continuity_report, decay_check, ode_residual, shooting_oracle, verify_half, verify_orbit, OracleSample,
    ShootingControls, ShootingResult, VerificationReport,
};
