//! Experiment configuration: defaults, then an INI file, then flags.

use crate::error::{CliError, Result};
use ini::Ini;
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "BEKENSTEIN_WORKERS";

/// Section read from the config file. Keys outside any section are accepted
/// too.
pub const INI_SECTION: &str = "experiment";

const INI_KEYS: [&str; 8] = ["suite", "n", "r", "alpha", "samples", "seed", "out", "timings"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Formcalc,
    Stdsubspace,
    Entropy,
    Chiralnet,
    BoundSweep,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Formcalc, Suite::Stdsubspace, Suite::Entropy, Suite::Chiralnet, Suite::BoundSweep];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Formcalc => "formcalc",
            Suite::Stdsubspace => "stdsubspace",
            Suite::Entropy => "entropy",
            Suite::Chiralnet => "chiralnet",
            Suite::BoundSweep => "bound-sweep",
        }
    }

    /// Sample count used when neither the file nor the flags give one.
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Formcalc | Suite::Stdsubspace | Suite::Entropy | Suite::Chiralnet => 100,
            Suite::BoundSweep => 20,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s.trim())
            .ok_or_else(|| CliError::Config(format!("unknown suite `{s}`")))
    }
}

/// A validated experiment. Lists are kept in the order given.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub suite: Option<Suite>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    #[serde(rename = "R")]
    pub r: Vec<f64>,
    pub alpha: Vec<f64>,
    /// `None` selects the suite's own default.
    pub samples: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Record wall times; off by default so that output is reproducible.
    pub timings: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suite: None,
            n: vec![128, 256],
            r: vec![0.5, 1.0, 2.0],
            alpha: vec![0.05, 0.1, 0.2],
            samples: None,
            seed: 1,
            out: None,
            timings: false,
        }
    }
}

/// Values that may override the defaults; every field is optional.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub suite: Option<Suite>,
    pub n: Option<Vec<usize>>,
    pub r: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub timings: Option<bool>,
}

impl Overrides {
    /// Parse the flat key-value text of a config file.
    pub fn from_ini_str(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Self::from_ini(&ini)
    }

    pub fn from_ini_file(path: &Path) -> Result<Self> {
        let ini = Ini::load_from_file(path).map_err(|source| CliError::ConfigFile { path: path.to_path_buf(), source })?;
        Self::from_ini(&ini)
    }

    fn from_ini(ini: &Ini) -> Result<Self> {
        let mut o = Overrides::default();
        for (section, props) in ini.iter() {
            match section {
                None | Some(INI_SECTION) => {}
                Some(other) => return Err(CliError::Config(format!("unknown section [{other}]"))),
            }
            for (key, value) in props.iter() {
                o.set(key, value)?;
            }
        }
        Ok(o)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().to_ascii_lowercase().as_str() {
            "suite" => self.suite = Some(value.parse()?),
            "n" => self.n = Some(parse_list(key, value)?),
            "r" => self.r = Some(parse_list(key, value)?),
            "alpha" => self.alpha = Some(parse_list(key, value)?),
            "samples" => self.samples = Some(parse_one(key, value)?),
            "seed" => self.seed = Some(parse_one(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "timings" => self.timings = Some(parse_one(key, value)?),
            other => {
                return Err(CliError::Config(format!("unknown key `{other}` (expected one of {})", INI_KEYS.join(", "))))
            }
        }
        Ok(())
    }

    /// Fields set in `other` win.
    pub fn then(self, other: Overrides) -> Overrides {
        Overrides {
            suite: other.suite.or(self.suite),
            n: other.n.or(self.n),
            r: other.r.or(self.r),
            alpha: other.alpha.or(self.alpha),
            samples: other.samples.or(self.samples),
            seed: other.seed.or(self.seed),
            out: other.out.or(self.out),
            timings: other.timings.or(self.timings),
        }
    }
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| CliError::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_one(key, s)).collect()
}

impl ExperimentConfig {
    /// Defaults, then `file`, then `flags`; the result is validated.
    pub fn resolve(file: Option<&Path>, flags: Overrides) -> Result<Self> {
        let from_file = match file {
            Some(path) => Overrides::from_ini_file(path)?,
            None => Overrides::default(),
        };
        ExperimentConfig::default().apply(from_file.then(flags))
    }

    pub fn apply(mut self, o: Overrides) -> Result<Self> {
        if o.suite.is_some() {
            self.suite = o.suite;
        }
        if let Some(n) = o.n {
            self.n = n;
        }
        if let Some(r) = o.r {
            self.r = r;
        }
        if let Some(alpha) = o.alpha {
            self.alpha = alpha;
        }
        if o.samples.is_some() {
            self.samples = o.samples;
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if o.out.is_some() {
            self.out = o.out;
        }
        if let Some(t) = o.timings {
            self.timings = t;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.r.is_empty() || self.alpha.is_empty() {
            return Err(CliError::Config("N, R and alpha lists must be non-empty".into()));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < 16) {
            return Err(CliError::Config(format!("grid size N = {n} is below 16")));
        }
        if let Some(&r) = self.r.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(CliError::Config(format!("width R = {r} must be positive")));
        }
        if let Some(&a) = self.alpha.iter().find(|a| !(**a > 0.0 && **a < 0.25)) {
            return Err(CliError::Config(format!("alpha = {a} must lie strictly inside (0, 1/4)")));
        }
        if self.samples == Some(0) {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        Ok(())
    }

    pub fn samples_for(&self, suite: Suite) -> usize {
        self.samples.unwrap_or_else(|| suite.default_samples())
    }

    /// The suite, or a usage error when none was given.
    pub fn require_suite(&self) -> Result<Suite> {
        self.suite.ok_or_else(|| CliError::Usage("no suite given (use --suite or `suite =` in the config)".into()))
    }
}

/// Worker count from [`WORKERS_ENV`]; `None` when unset.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Config(format!("{WORKERS_ENV}: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}
