use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::BoundaryMode;

/// Environment variable holding the default master seed.
pub const SEED_ENV: &str = "CFTP_LAB_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Sample,
    Radius,
    Diagonal,
    Spacetime,
    Mixing,
    Potts,
    Validate,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Sample,
        Experiment::Radius,
        Experiment::Diagonal,
        Experiment::Spacetime,
        Experiment::Mixing,
        Experiment::Potts,
        Experiment::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Sample => "sample",
            Experiment::Radius => "radius",
            Experiment::Diagonal => "diagonal",
            Experiment::Spacetime => "spacetime",
            Experiment::Mixing => "mixing",
            Experiment::Potts => "potts",
            Experiment::Validate => "validate",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RandomCluster,
    Ising,
    LongRangeIsing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderChoice {
    Real,
    Digits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateChoice {
    Continuous,
    Finite,
}

/// Everything a run depends on; a run is reproducible from this alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub model: ModelKind,
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub alpha: f64,
    pub trunc: usize,
    /// Side lengths of the base box.
    pub extents: Vec<usize>,
    pub order: OrderChoice,
    /// Digit range; `None` means `3 * degree^2 + 1`.
    pub digits: Option<u32>,
    pub update: UpdateChoice,
    pub seed: u64,
    pub replicas: u64,
    pub horizon_cap: u64,
    /// `None` means the largest ball that avoids the box sides.
    pub radius_cap: Option<usize>,
    /// Largest abscissa of survival curves.
    pub max_r: usize,
    /// Largest `n` of the mixing experiment.
    pub n_max: usize,
    /// Window radius for `sample`; fixed radius for `mixing` when set.
    pub radius: Option<usize>,
    pub mode: BoundaryMode,
    /// Side of the vertex block coloured by `potts`.
    pub block: usize,
    pub boundary_color: u32,
    pub enum_cap_bits: u32,
    pub workers: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            model: ModelKind::RandomCluster,
            p: 0.3,
            q: 2.0,
            beta: 0.4,
            alpha: 3.0,
            trunc: 2,
            extents: vec![41, 41],
            order: OrderChoice::Real,
            digits: None,
            update: UpdateChoice::Continuous,
            seed: 0,
            replicas: 1000,
            horizon_cap: crate::cftp::DEFAULT_HORIZON_CAP,
            radius_cap: None,
            max_r: 6,
            n_max: 8,
            radius: None,
            mode: BoundaryMode::Plus,
            block: 2,
            boundary_color: 1,
            enum_cap_bits: 24,
            workers: 1,
            output: None,
        }
    }

    /// Defaults with the seed taken from [`SEED_ENV`] when set.
    pub fn from_env(experiment: Experiment) -> Result<Self> {
        let mut c = Self::new(experiment);
        if let Ok(s) = std::env::var(SEED_ENV) {
            c.set("seed", &s)?;
        }
        Ok(c)
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", no + 1, strip(e))))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("`{key}` cannot be `{v}`")))
        }
        fn opt<T: FromStr>(key: &str, v: &str) -> Result<Option<T>> {
            if v == "auto" || v == "none" {
                Ok(None)
            } else {
                num(key, v).map(Some)
            }
        }
        match key {
            "experiment" => self.experiment = value.parse()?,
            "model" => {
                self.model = match value {
                    "random_cluster" | "rc" => ModelKind::RandomCluster,
                    "ising" => ModelKind::Ising,
                    "long_range_ising" | "lr_ising" => ModelKind::LongRangeIsing,
                    _ => return Err(Error::Config(format!("unknown model `{value}`"))),
                }
            }
            "p" => self.p = num(key, value)?,
            "q" => self.q = num(key, value)?,
            "beta" => self.beta = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "trunc" => self.trunc = num(key, value)?,
            "extents" => {
                self.extents = value
                    .split(['x', ','])
                    .map(|s| num(key, s.trim()))
                    .collect::<Result<_>>()?
            }
            "order" => {
                self.order = match value {
                    "real" => OrderChoice::Real,
                    "digits" => OrderChoice::Digits,
                    _ => return Err(Error::Config(format!("unknown order `{value}`"))),
                }
            }
            "D" | "digits" => self.digits = opt(key, value)?,
            "update" => {
                self.update = match value {
                    "continuous" => UpdateChoice::Continuous,
                    "finite" => UpdateChoice::Finite,
                    _ => return Err(Error::Config(format!("unknown update rule `{value}`"))),
                }
            }
            "seed" => self.seed = num(key, value)?,
            "replicas" => self.replicas = num(key, value)?,
            "horizon_cap" => self.horizon_cap = num(key, value)?,
            "radius_cap" => self.radius_cap = opt(key, value)?,
            "max_r" => self.max_r = num(key, value)?,
            "n_max" => self.n_max = num(key, value)?,
            "radius" => self.radius = opt(key, value)?,
            "mode" => {
                self.mode = match value {
                    "plus" | "wired" | "+" => BoundaryMode::Plus,
                    "minus" | "free" | "-" => BoundaryMode::Minus,
                    _ => return Err(Error::Config(format!("unknown mode `{value}`"))),
                }
            }
            "block" => self.block = num(key, value)?,
            "boundary_color" => self.boundary_color = num(key, value)?,
            "enum_cap_bits" => self.enum_cap_bits = num(key, value)?,
            "workers" => self.workers = num(key, value)?,
            "output" => self.output = (value != "none").then(|| PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Checks ranges that do not depend on the model's own validation.
    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be positive".into()));
        }
        if self.extents.is_empty() || self.extents.contains(&0) {
            return Err(Error::Config("extents must be positive".into()));
        }
        if self.horizon_cap == 0 {
            return Err(Error::Config("horizon_cap must be positive".into()));
        }
        if self.block == 0 {
            return Err(Error::Config("block must be positive".into()));
        }
        if self.digits.is_some_and(|d| d < 2) {
            return Err(Error::Config("D must be at least 2".into()));
        }
        Ok(())
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(s) => s,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values() {
        let mut c = RunConfig::new(Experiment::Radius);
        c.apply_text("# comment\np = 0.25\nq=3 # trailing\nextents = 21x21\nmode = free\nD = 5\n").unwrap();
        assert_eq!(c.p, 0.25);
        assert_eq!(c.q, 3.0);
        assert_eq!(c.extents, vec![21, 21]);
        assert_eq!(c.mode, BoundaryMode::Minus);
        assert_eq!(c.digits, Some(5));
    }

    #[test]
    fn rejects_bad_lines() {
        let mut c = RunConfig::new(Experiment::Radius);
        assert!(matches!(c.apply_text("p 0.3"), Err(Error::Config(_))));
        assert!(matches!(c.apply_text("colour = 3"), Err(Error::Config(_))));
        assert!(matches!(c.apply_text("p = abc"), Err(Error::Config(_))));
    }

    #[test]
    fn round_trips_through_json() {
        let c = RunConfig::new(Experiment::Mixing);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&s).unwrap(), c);
    }
}
