//! Spectrum, matching, ranking and assembly for one configuration.

use homoclinic::{
    phi_table, psi_table, rank_candidates, solve_matching, verify_half, verify_orbit, CoefficientTable, Complex64,
    Error, HalfOrbit, HomoclinicOrbit, Region, RootCandidate, Side, Spectrum, VerificationReport,
};

use crate::config::{Mode, RootSelect, RunConfig};
use crate::failure::Failure;

/// Residuals are measured from this distance to the origin outward; the
/// series is not expected to hold near the join.
pub const RESIDUAL_Z_MIN: f64 = 0.5;

/// Candidates of one half-line, in `(re, im)` order, with their orbit
/// residuals filled in.
#[derive(Debug, Clone)]
pub struct RootTable {
    pub table: CoefficientTable,
    pub candidates: Vec<RootCandidate>,
    pub chosen: usize,
    pub admissible: usize,
}

impl RootTable {
    pub fn chosen(&self) -> &RootCandidate {
        &self.candidates[self.chosen]
    }

    /// Smallest orbit residual over the candidates.
    pub fn best_residual(&self) -> f64 {
        self.candidates
            .iter()
            .filter_map(|c| c.orbit_residual)
            .filter(|r| !r.is_nan())
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub mode: Mode,
    pub spectrum: Spectrum,
    pub forward: RootTable,
    pub backward: Option<RootTable>,
    pub orbit: HomoclinicOrbit,
    pub report: VerificationReport,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Solved(Box<Solution>),
    /// Nothing to match; carries the diagnostic.
    Linear(String),
}

/// Upper end of the residual window.
pub fn residual_reach(config: &RunConfig) -> f64 {
    config.z_min.abs().max(config.z_max.abs())
}

pub fn region1(config: &RunConfig) -> Result<Spectrum, Failure> {
    let spectrum = Spectrum::new(config.params.a, config.params.b);
    if spectrum.region != Region::Region1 {
        return Err(Failure::from(Error::NotRegion1 {
            region: spectrum.region,
        }));
    }
    Ok(spectrum)
}

pub fn solve(config: &RunConfig) -> Result<Outcome, Failure> {
    config.validate().map_err(Failure::Config)?;
    let reach = residual_reach(config);
    if reach <= RESIDUAL_Z_MIN {
        return Err(Failure::Config(anyhow::anyhow!(
            "z range must extend beyond |z| = {RESIDUAL_Z_MIN} to measure residuals"
        )));
    }
    let spectrum = region1(config)?;
    let mode = config.resolved_mode();
    let params = &config.params;

    let alpha = spectrum.alpha1()?;
    let forward_table = phi_table(params, alpha, config.order)?;
    let roots = solve_matching(&forward_table)?;
    if let Some(diagnostic) = roots.diagnostic {
        return Ok(Outcome::Linear(diagnostic));
    }
    let forward = RootTable::build(
        config,
        forward_table,
        roots.candidates,
        Side::Positive,
        config.root_select,
    )?;

    let (orbit, backward) = match mode {
        Mode::Reversible => (
            HomoclinicOrbit::reversible(params, config.order, forward.chosen().value)?,
            None,
        ),
        Mode::General => {
            let table = psi_table(params, spectrum.alpha4()?, config.order)?;
            let roots = solve_matching(&table)?;
            let backward = RootTable::build(
                config,
                table,
                roots.candidates,
                Side::Negative,
                config.root_select_backward,
            )?;
            let orbit =
                HomoclinicOrbit::general(params, config.order, forward.chosen().value, backward.chosen().value)?;
            (orbit, Some(backward))
        }
    };
    let report = verify_orbit(&orbit, params, RESIDUAL_Z_MIN, reach, config.grid_n)?;
    Ok(Outcome::Solved(Box::new(Solution {
        mode,
        spectrum,
        forward,
        backward,
        orbit,
        report,
    })))
}

impl RootTable {
    fn build(
        config: &RunConfig,
        table: CoefficientTable,
        candidates: Vec<RootCandidate>,
        side: Side,
        select: RootSelect,
    ) -> Result<Self, Failure> {
        if candidates.is_empty() {
            return Err(Failure::Solver(anyhow::anyhow!(
                "matching polynomial has no nonzero root"
            )));
        }
        let reach = residual_reach(config);
        let reports: Vec<VerificationReport> = candidates
            .iter()
            .map(|c| {
                HalfOrbit::new(table.clone(), c.value, side)
                    .and_then(|half| verify_half(&half, &config.params, RESIDUAL_Z_MIN, reach, config.grid_n))
                    .unwrap_or(VerificationReport {
                        residual_sup: f64::NAN,
                        ..Default::default()
                    })
            })
            .collect();
        let ranked = rank_candidates(&candidates, &reports);
        // keep the table in (re, im) order so that index:N is stable
        let candidates: Vec<RootCandidate> = candidates
            .iter()
            .map(|c| {
                ranked
                    .iter()
                    .find(|r| r.value == c.value)
                    .cloned()
                    .unwrap_or_else(|| c.clone())
            })
            .collect();
        let position = |x: Complex64| candidates.iter().position(|c| c.value == x).unwrap_or(0);
        let chosen = match select {
            RootSelect::Auto => position(ranked[0].value),
            RootSelect::Index(n) if n < candidates.len() => n,
            RootSelect::Index(n) => {
                return Err(Failure::Config(anyhow::anyhow!(
                    "root index {n} out of range: {} candidates",
                    candidates.len()
                )))
            }
            RootSelect::Nearest(target) => candidates
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1.value - target).norm().total_cmp(&(b.1.value - target).norm()))
                .map(|(i, _)| i)
                .unwrap_or(0),
        };
        let admissible = candidates
            .iter()
            .filter(|c| is_admissible(config, table.order(), c))
            .count();
        Ok(RootTable {
            table,
            candidates,
            chosen,
            admissible,
        })
    }
}

/// Decaying coefficients, a small matching residual and a small orbit
/// residual.
pub fn is_admissible(config: &RunConfig, order: usize, c: &RootCandidate) -> bool {
    let poly_bound = config.tol_poly * (1.0 + c.value.norm()).powi(order as i32);
    c.is_decaying() && c.polynomial_residual <= poly_bound && c.orbit_residual.is_some_and(|r| r <= config.tol_residual)
}
