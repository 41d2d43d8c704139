use std::path::Path;

use homoclinic::spectrum::DEFAULT_BOUNDARY_TOL;
use homoclinic::verify::compare_aligned;
use homoclinic::{char_roots, classify_region, shooting_oracle, Complex64, ShootingControls, Spectrum};
use rayon::prelude::*;

use crate::config::{Axis, Mode, RunConfig};
use crate::failure::Failure;
use crate::output::{key_values, num, OutDir, PLOT_COMPARE, PLOT_ORBIT, PLOT_SWEEP, PLOT_TRAVEL};
use crate::pipeline::{self, Outcome, Solution};

fn cnum(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", num(c.re), num(c.im.abs()))
}

pub fn classify(a: f64, b: f64) -> String {
    let region = classify_region(a, b, DEFAULT_BOUNDARY_TOL);
    let mut pairs = vec![
        ("a", a.to_string()),
        ("b", b.to_string()),
        ("region", region.to_string()),
    ];
    let names = ["root1", "root2", "root3", "root4"];
    for (name, root) in names.into_iter().zip(char_roots(a, b)) {
        pairs.push((name, cnum(root)));
    }
    key_values(&pairs)
}

const SUMMARY_HEADER: [&str; 9] = [
    "region",
    "candidates",
    "admissible",
    "admissible_backward",
    "best_residual",
    "chosen_re",
    "chosen_im",
    "residual_sup",
    "error",
];

/// One summary row; the same columns close every sweep row.
fn summary_row(config: &RunConfig, result: &Result<Outcome, Failure>) -> Vec<String> {
    let region = Spectrum::new(config.params.a, config.params.b).region.to_string();
    let nan = num(f64::NAN);
    match result {
        Ok(Outcome::Solved(s)) => vec![
            region,
            s.forward.candidates.len().to_string(),
            s.forward.admissible.to_string(),
            s.backward.as_ref().map_or(String::new(), |b| b.admissible.to_string()),
            num(s.forward.best_residual()),
            num(s.forward.chosen().value.re),
            num(s.forward.chosen().value.im),
            num(s.report.residual_sup),
            String::new(),
        ],
        Ok(Outcome::Linear(msg)) => vec![
            region,
            "0".into(),
            "0".into(),
            String::new(),
            nan.clone(),
            nan.clone(),
            nan.clone(),
            nan,
            msg.clone(),
        ],
        Err(err) => vec![
            region,
            "0".into(),
            "0".into(),
            String::new(),
            nan.clone(),
            nan.clone(),
            nan.clone(),
            nan,
            err.to_string(),
        ],
    }
}

fn report(config: &RunConfig, s: &Solution, max_u: f64) -> String {
    let r = &s.report;
    let alpha = s.forward.table.alpha();
    let continuity = r.continuity_gap / max_u.max(f64::MIN_POSITIVE);
    let worst_decay = r.decay_margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut pairs = vec![
        ("mode", s.mode.to_string()),
        ("region", s.spectrum.region.to_string()),
        ("alpha1", cnum(alpha)),
        ("K", config.order.to_string()),
        ("a1", cnum(s.forward.chosen().value)),
        ("a1_index", s.forward.chosen.to_string()),
        ("candidates", s.forward.candidates.len().to_string()),
        ("admissible", s.forward.admissible.to_string()),
    ];
    if let Some(b) = &s.backward {
        pairs.extend([
            ("b1", cnum(b.chosen().value)),
            ("b1_index", b.chosen.to_string()),
            ("candidates_backward", b.candidates.len().to_string()),
            ("admissible_backward", b.admissible.to_string()),
        ]);
    }
    pairs.extend([
        (
            "residual_window",
            format!(
                "{} <= |z| <= {}",
                pipeline::RESIDUAL_Z_MIN,
                pipeline::residual_reach(config)
            ),
        ),
        ("residual_sup", num(r.residual_sup)),
        ("residual_ok", (r.residual_sup <= config.tol_residual).to_string()),
        ("residual_slope", num(r.residual_slope)),
        ("truncation_slope", num((config.order as f64 + 1.0) * alpha.re)),
        ("series_residual_sup", num(r.series_residual_sup)),
        ("series_residual_slope", num(r.series_residual_slope)),
        ("max_abs_u", num(max_u)),
        ("continuity_gap", num(r.continuity_gap)),
        ("continuity_ok", (continuity <= config.tol_continuity).to_string()),
    ]);
    for (name, jump) in ["jump_u1", "jump_u2", "jump_u3", "jump_u4"]
        .into_iter()
        .zip(r.derivative_jumps)
    {
        pairs.push((name, num(jump)));
    }
    pairs.push(("worst_decay_margin", num(worst_decay)));
    key_values(&pairs)
}

fn solved(
    config: &RunConfig,
    out: &OutDir,
    command: &str,
    extra: &[(&str, String)],
) -> Result<Option<Box<Solution>>, Failure> {
    out.manifest(command, config, extra)?;
    match pipeline::solve(config)? {
        Outcome::Solved(s) => Ok(Some(s)),
        Outcome::Linear(msg) => {
            out.text("report.txt", &key_values(&[("diagnostic", msg.clone())]))?;
            println!("{msg}");
            Ok(None)
        }
    }
}

pub fn solve(config: &RunConfig, out: &Path) -> Result<(), Failure> {
    let out = OutDir::create(out)?;
    out.manifest("solve", config, &[])?;
    let result = pipeline::solve(config);
    out.rows("summary.csv", &SUMMARY_HEADER, vec![summary_row(config, &result)])?;
    let s = match result? {
        Outcome::Solved(s) => s,
        Outcome::Linear(msg) => {
            out.text("report.txt", &key_values(&[("diagnostic", msg.clone())]))?;
            println!("{msg}");
            return Ok(());
        }
    };
    out.roots("roots.csv", &s.forward)?;
    if let Some(b) = &s.backward {
        out.roots("roots_backward.csv", b)?;
    }
    let samples = s.orbit.sample(config.z_min, config.z_max, config.grid_n)?;
    out.orbit("orbit.csv", &config.params, &samples)?;
    let max_u = samples.iter().map(|p| p.jet.u.abs()).fold(0.0, f64::max);
    let body = report(config, &s, max_u);
    out.text("report.txt", &body)?;
    out.plot_script(PLOT_ORBIT)?;
    print!("{body}");
    Ok(())
}

pub fn travel(config: &RunConfig, out: &Path, speed: f64, times: &[f64]) -> Result<(), Failure> {
    if times.is_empty() || times.iter().any(|t| !t.is_finite()) || !speed.is_finite() {
        return Err(Failure::Config(anyhow::anyhow!(
            "need finite speed and at least one finite time"
        )));
    }
    let out = OutDir::create(out)?;
    let times_text = times.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    let extra = [("speed", speed.to_string()), ("times", times_text)];
    let Some(s) = solved(config, &out, "travel", &extra)? else {
        return Ok(());
    };
    let wave = s
        .orbit
        .traveling_wave(speed, config.z_min, config.z_max, config.grid_n, times)?;
    out.travel("travel.csv", &wave)?;
    out.plot_script(PLOT_TRAVEL)?;
    println!("{} samples at {} times", wave.len(), times.len());
    Ok(())
}

pub fn compare(
    config: &RunConfig,
    out: &Path,
    half_width: Option<f64>,
    controls: &ShootingControls,
) -> Result<(), Failure> {
    let out = OutDir::create(out)?;
    let half_width = half_width.unwrap_or_else(|| pipeline::residual_reach(config));
    let extra = [
        ("half_width", half_width.to_string()),
        ("epsilon", controls.epsilon.to_string()),
        ("theta_starts", controls.theta_starts.to_string()),
        ("max_time", controls.max_time.to_string()),
    ];
    let Some(s) = solved(config, &out, "compare", &extra)? else {
        return Ok(());
    };
    let shot = shooting_oracle(&config.params, &s.spectrum, half_width, controls).map_err(Failure::oracle)?;
    let Some((best, (distance, shift))) = shot
        .orbits
        .iter()
        .map(|o| compare_aligned(&s.orbit, &o.samples))
        .enumerate()
        .min_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
    else {
        return Err(Failure::Oracle(anyhow::anyhow!("shooting found no orbit")));
    };

    let mut rows = Vec::new();
    for (i, o) in shot.orbits.iter().enumerate() {
        for p in &o.samples {
            let mut row = vec![i.to_string()];
            row.extend([p.z, p.u, p.u1, p.u2, p.u3].map(num));
            rows.push(row);
        }
    }
    out.rows("oracle.csv", &["orbit", "z", "u", "u1", "u2", "u3"], rows)?;
    let samples = s.orbit.sample(config.z_min, config.z_max, config.grid_n)?;
    out.orbit("orbit.csv", &config.params, &samples)?;
    let max_u = samples.iter().map(|p| p.jet.u.abs()).fold(0.0, f64::max);
    let chosen = &shot.orbits[best];
    let body = key_values(&[
        ("oracle_orbits", shot.orbits.len().to_string()),
        ("best_orbit", best.to_string()),
        ("theta", num(chosen.theta)),
        ("mismatch", num(chosen.mismatch)),
        ("distance", num(distance)),
        ("shift", num(shift)),
        ("max_abs_u", num(max_u)),
        ("relative_distance", num(distance / max_u.max(f64::MIN_POSITIVE))),
    ]);
    out.text("compare.txt", &body)?;
    out.plot_script(PLOT_COMPARE)?;
    print!("{body}");
    Ok(())
}

fn workers() -> Option<usize> {
    std::env::var("HOMOCLINIC_NUM_WORKERS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

pub fn sweep(template: &RunConfig, out: &Path, axes: &[Axis]) -> Result<(), Failure> {
    if axes.is_empty() {
        return Err(Failure::Config(anyhow::anyhow!("sweep needs at least one --grid axis")));
    }
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let configs: Vec<RunConfig> = points
        .iter()
        .map(|p| {
            let mut c = template.clone();
            for (axis, &v) in axes.iter().zip(p) {
                *c.params.get_mut(&axis.key).expect("axis keys are checked on parse") = v;
            }
            // a swept point may lose reversibility; let each point pick
            if c.mode == Some(Mode::Reversible) && !c.params.is_reversible() {
                c.mode = None;
            }
            c
        })
        .collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::Config(anyhow::Error::new(e).context("starting worker pool")))?;
    let rows: Vec<Vec<String>> = pool.install(|| {
        configs
            .par_iter()
            .zip(points.par_iter())
            .map(|(c, p)| {
                let mut row: Vec<String> = p.iter().map(|&v| num(v)).collect();
                row.extend(summary_row(c, &pipeline::solve(c)));
                row
            })
            .collect()
    });

    let out = OutDir::create(out)?;
    let axes_text = axes.iter().map(|a| a.key.as_str()).collect::<Vec<_>>().join(",");
    out.manifest(
        "sweep",
        template,
        &[("axes", axes_text), ("points", rows.len().to_string())],
    )?;
    let mut header: Vec<&str> = axes.iter().map(|a| a.key.as_str()).collect();
    header.extend(SUMMARY_HEADER);
    out.rows("sweep.csv", &header, rows)?;
    out.plot_script(PLOT_SWEEP)?;
    println!("{} points", points.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        assert!(classify(0.8, 1.5).contains("region = Region1"));
        assert!(classify(1.0, 2.0).contains("region = C3"));
        assert!(classify(0.5, 1.0).contains("region = Region1"));
        assert_eq!(classify(0.8, 1.5).lines().count(), 7);
    }
}
