//! Files written by the commands. Numbers carry 17 significant digits and
//! nothing depends on the clock, so identical runs give identical bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use homoclinic::{residual_at, OrbitSample, SystemParams, WaveSample};

use crate::config::RunConfig;
use crate::failure::Failure;
use crate::pipeline::RootTable;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(root)
            .with_context(|| format!("creating {}", root.display()))
            .map_err(Failure::Config)?;
        Ok(OutDir {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn csv(&self, name: &str, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), Failure> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path)
            .with_context(|| format!("opening {}", path.display()))
            .map_err(Failure::Config)?;
        let io = |e: csv::Error| Failure::Config(anyhow::Error::new(e).context(format!("writing {}", path.display())));
        w.write_record(header).map_err(io)?;
        for row in rows {
            w.write_record(&row).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn roots(&self, name: &str, roots: &RootTable) -> Result<(), Failure> {
        self.csv(
            name,
            &["re", "im", "poly_residual", "orbit_residual", "decay_margin"],
            roots.candidates.iter().map(|c| {
                vec![
                    num(c.value.re),
                    num(c.value.im),
                    num(c.polynomial_residual),
                    num(c.orbit_residual.unwrap_or(f64::NAN)),
                    num(c.decay_margin),
                ]
            }),
        )
    }

    /// Samples with the absolute ODE residual of each jet.
    pub fn orbit(&self, name: &str, params: &SystemParams, samples: &[OrbitSample]) -> Result<(), Failure> {
        self.csv(
            name,
            &["z", "u", "u1", "u2", "u3", "u4", "residual"],
            samples.iter().map(|s| {
                let j = s.jet;
                [s.z, j.u, j.u1, j.u2, j.u3, j.u4, residual_at(params, &j)]
                    .map(num)
                    .to_vec()
            }),
        )
    }

    pub fn travel(&self, name: &str, samples: &[WaveSample]) -> Result<(), Failure> {
        self.csv(
            name,
            &["t", "x", "u"],
            samples.iter().map(|s| [s.t, s.x, s.u].map(num).to_vec()),
        )
    }

    pub fn rows(&self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), Failure> {
        self.csv(name, header, rows.into_iter())
    }

    pub fn text(&self, name: &str, body: &str) -> Result<(), Failure> {
        let path = self.path(name);
        let mut f = fs::File::create(&path)
            .with_context(|| format!("creating {}", path.display()))
            .map_err(Failure::Config)?;
        f.write_all(body.as_bytes())?;
        Ok(())
    }

    /// Every input as a config file that reproduces the run, headed by the
    /// command and any command-specific settings as comments.
    pub fn manifest(&self, command: &str, config: &RunConfig, extra: &[(&str, String)]) -> Result<(), Failure> {
        let mut body = format!("# homoclinic {} {command}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in extra {
            body.push_str(&format!("# {k} = {v}\n"));
        }
        for (k, v) in config.entries() {
            body.push_str(&format!("{k} = {v}\n"));
        }
        self.text("manifest.txt", &body)
    }

    pub fn plot_script(&self, body: &str) -> Result<(), Failure> {
        self.text("plot.py", body)
    }
}

/// `key = value` lines.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

pub const PLOT_ORBIT: &str = r#"# Plot orbit.csv written by `homoclinic solve`.
import csv
import matplotlib.pyplot as plt

with open("orbit.csv") as f:
    rows = list(csv.DictReader(f))
z = [float(r["z"]) for r in rows]
fig, (top, bottom) = plt.subplots(2, 1, sharex=True)
top.plot(z, [float(r["u"]) for r in rows])
top.set_ylabel("u")
bottom.semilogy(z, [abs(float(r["residual"])) + 1e-300 for r in rows])
bottom.set_ylabel("|residual|")
bottom.set_xlabel("z")
plt.show()
"#;

pub const PLOT_TRAVEL: &str = r#"# Plot travel.csv written by `homoclinic travel`.
import csv
from collections import defaultdict
import matplotlib.pyplot as plt

curves = defaultdict(list)
with open("travel.csv") as f:
    for r in csv.DictReader(f):
        curves[float(r["t"])].append((float(r["x"]), float(r["u"])))
for t, pts in sorted(curves.items()):
    plt.plot([p[0] for p in pts], [p[1] for p in pts], label=f"t = {t:g}")
plt.xlabel("x")
plt.ylabel("u")
plt.legend()
plt.show()
"#;

pub const PLOT_COMPARE: &str = r#"# Plot orbit.csv against oracle.csv written by `homoclinic compare`.
import csv
import matplotlib.pyplot as plt

with open("orbit.csv") as f:
    series = list(csv.DictReader(f))
with open("oracle.csv") as f:
    oracle = list(csv.DictReader(f))
plt.plot([float(r["z"]) for r in series], [float(r["u"]) for r in series], label="series")
plt.plot([float(r["z"]) for r in oracle], [float(r["u"]) for r in oracle], "--", label="shooting")
plt.xlabel("z")
plt.ylabel("u")
plt.legend()
plt.show()
"#;

pub const PLOT_SWEEP: &str = r#"# Plot sweep.csv written by `homoclinic sweep` (first swept column on x).
import csv
import matplotlib.pyplot as plt

with open("sweep.csv") as f:
    reader = csv.DictReader(f)
    key = reader.fieldnames[0]
    rows = list(reader)
x = [float(r[key]) for r in rows]
y = [float(r["best_residual"]) for r in rows]
plt.semilogy(x, y, "o")
plt.xlabel(key)
plt.ylabel("best residual")
plt.show()
"#;
