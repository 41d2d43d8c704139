//! Run configuration: flat `key = value` files, overridden by flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use homoclinic::matching::POLY_TOLERANCE;
use homoclinic::recurrence::DEFAULT_ORDER;
use homoclinic::{Complex64, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Reversible,
    General,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Reversible => "reversible",
            Mode::General => "general",
        })
    }
}

/// Which matching root becomes the leading amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootSelect {
    /// Best ranked candidate.
    Auto,
    /// Position in the candidate table, which is sorted by `(re, im)`.
    Index(usize),
    Nearest(Complex64),
}

impl FromStr for RootSelect {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "auto" {
            return Ok(RootSelect::Auto);
        }
        if let Some(n) = s.strip_prefix("index:") {
            let n = n.trim().parse().with_context(|| format!("bad root index {n:?}"))?;
            return Ok(RootSelect::Index(n));
        }
        if let Some(c) = s.strip_prefix("nearest:") {
            let c: Complex64 = c.trim().parse().map_err(|_| anyhow!("bad complex number {c:?}"))?;
            return Ok(RootSelect::Nearest(c));
        }
        bail!("root selection must be auto, index:N or nearest:RE+IMi, got {s:?}")
    }
}

impl fmt::Display for RootSelect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSelect::Auto => f.write_str("auto"),
            RootSelect::Index(n) => write!(f, "index:{n}"),
            RootSelect::Nearest(c) => {
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "nearest:{}{sign}{}i", c.re, c.im.abs())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    /// Truncation order `K`.
    pub order: usize,
    /// `None` picks from the parameters.
    pub mode: Option<Mode>,
    pub z_min: f64,
    pub z_max: f64,
    pub grid_n: usize,
    pub root_select: RootSelect,
    /// Selection for the `z < 0` amplitude in general mode.
    pub root_select_backward: RootSelect,
    /// Matching residual allowed, scaled by `(1 + |x|)^K`.
    pub tol_poly: f64,
    /// Relative ODE residual allowed for an admissible root.
    pub tol_residual: f64,
    /// Allowed `|u(0)|` relative to `max |u|`.
    pub tol_continuity: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: SystemParams::default(),
            order: DEFAULT_ORDER,
            mode: None,
            z_min: -10.0,
            z_max: 10.0,
            grid_n: 401,
            root_select: RootSelect::Auto,
            root_select_backward: RootSelect::Auto,
            tol_poly: POLY_TOLERANCE,
            tol_residual: 1e-6,
            tol_continuity: 1e-8,
        }
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value.parse().with_context(|| format!("{key}: cannot parse {value:?}"))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        if let Some(slot) = self.params.get_mut(key) {
            *slot = number(key, value)?;
            return Ok(());
        }
        match key {
            "K" => self.order = number(key, value)?,
            "mode" => {
                self.mode = match value {
                    "reversible" => Some(Mode::Reversible),
                    "general" => Some(Mode::General),
                    "auto" => None,
                    _ => bail!("mode must be reversible, general or auto, got {value:?}"),
                }
            }
            "z_min" => self.z_min = number(key, value)?,
            "z_max" => self.z_max = number(key, value)?,
            "grid_n" => self.grid_n = number(key, value)?,
            "root_select" => self.root_select = value.parse()?,
            "root_select_backward" => self.root_select_backward = value.parse()?,
            "tol_poly" => self.tol_poly = number(key, value)?,
            "tol_residual" => self.tol_residual = number(key, value)?,
            "tol_continuity" => self.tol_continuity = number(key, value)?,
            _ => bail!("unknown key {key:?}"),
        }
        Ok(())
    }

    /// Apply every assignment of a config text. Blank lines and `#`
    /// comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", lineno + 1))?;
            self.set(key.trim(), value)
                .with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.apply_text(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn resolved_mode(&self) -> Mode {
        self.mode.unwrap_or(if self.params.is_reversible() {
            Mode::Reversible
        } else {
            Mode::General
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.order < 2 {
            bail!("K must be at least 2, got {}", self.order);
        }
        if self.grid_n < 2 {
            bail!("grid_n must be at least 2, got {}", self.grid_n);
        }
        if !(self.z_min < self.z_max) || !self.z_min.is_finite() || !self.z_max.is_finite() {
            bail!("need finite z_min < z_max, got [{}, {}]", self.z_min, self.z_max);
        }
        if self.mode == Some(Mode::Reversible) && !self.params.is_reversible() {
            bail!("mode = reversible needs p = q = r = s = 0");
        }
        for (key, v) in [
            ("tol_poly", self.tol_poly),
            ("tol_residual", self.tol_residual),
            ("tol_continuity", self.tol_continuity),
        ] {
            if !(v > 0.0) {
                bail!("{key} must be positive, got {v}");
            }
        }
        Ok(())
    }

    /// Every key with its value, in a form [`RunConfig::apply_text`] reads
    /// back to the same configuration.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .params
            .named()
            .iter()
            .map(|(k, v)| (k.to_string(), format!("{v:?}")))
            .collect();
        let mode = self.mode.map_or("auto".to_string(), |m| m.to_string());
        out.extend([
            ("K".into(), self.order.to_string()),
            ("mode".into(), mode),
            ("z_min".into(), format!("{:?}", self.z_min)),
            ("z_max".into(), format!("{:?}", self.z_max)),
            ("grid_n".into(), self.grid_n.to_string()),
            ("root_select".into(), self.root_select.to_string()),
            ("root_select_backward".into(), self.root_select_backward.to_string()),
            ("tol_poly".into(), format!("{:?}", self.tol_poly)),
            ("tol_residual".into(), format!("{:?}", self.tol_residual)),
            ("tol_continuity".into(), format!("{:?}", self.tol_continuity)),
        ]);
        out
    }
}

/// One swept coefficient: `key=lo:hi:n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<f64>,
}

impl FromStr for Axis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (key, range) = s
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=lo:hi:n, got {s:?}"))?;
        let key = key.trim().to_string();
        if SystemParams::default().get_mut(&key).is_none() {
            bail!("cannot sweep {key:?}: not a coefficient");
        }
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        let values = match parts.as_slice() {
            [v] => vec![number(&key, v)?],
            [lo, hi, n] => {
                let (lo, hi): (f64, f64) = (number(&key, lo)?, number(&key, hi)?);
                let n: usize = number(&key, n)?;
                match n {
                    0 => bail!("{key}: empty axis"),
                    1 => vec![lo],
                    _ => homoclinic::orbit::grid(lo, hi, n)?,
                }
            }
            _ => bail!("expected key=lo:hi:n or key=value, got {s:?}"),
        };
        Ok(Axis { key, values })
    }
}
