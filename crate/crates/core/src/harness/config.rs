//! Flat key-value experiment configuration.
//!
//! ```ini
//! env = episodic-rl          # or pmc-gd
//! instance = random:3,2,3    # or a path to an instance file
//! instance_seed = 11
//! oracle = optimistic-vi     # extended-vi | optimistic-vi | pmc-greedy | baseline-per-dimension
//! rounds = 20000
//! replications = 8
//! seed = 1
//! delta = 0.001              # overrides the oracle's default δ'
//! output = out/rl
//! ```
//!
//! Values are resolved defaults < file < explicit overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::{EscapePolicy, Ini, ParseOption, WriteOption};

use crate::error::{Error, Result};
use crate::pmc::GreedyMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvKind {
    EpisodicRl,
    PmcGd,
}

impl FromStr for EnvKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "episodic-rl" => Ok(EnvKind::EpisodicRl),
            "pmc-gd" => Ok(EnvKind::PmcGd),
            other => Err(Error::Config(format!("unknown env `{other}`"))),
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvKind::EpisodicRl => "episodic-rl",
            EnvKind::PmcGd => "pmc-gd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    ExtendedVi,
    OptimisticVi,
    PmcGreedy,
    BaselinePerDimension,
}

impl OracleKind {
    pub fn env(self) -> EnvKind {
        match self {
            OracleKind::ExtendedVi | OracleKind::OptimisticVi => EnvKind::EpisodicRl,
            OracleKind::PmcGreedy | OracleKind::BaselinePerDimension => EnvKind::PmcGd,
        }
    }
}

impl FromStr for OracleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extended-vi" => Ok(OracleKind::ExtendedVi),
            "optimistic-vi" => Ok(OracleKind::OptimisticVi),
            "pmc-greedy" => Ok(OracleKind::PmcGreedy),
            "baseline-per-dimension" => Ok(OracleKind::BaselinePerDimension),
            other => Err(Error::Config(format!("unknown oracle `{other}`"))),
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::ExtendedVi => "extended-vi",
            OracleKind::OptimisticVi => "optimistic-vi",
            OracleKind::PmcGreedy => "pmc-greedy",
            OracleKind::BaselinePerDimension => "baseline-per-dimension",
        })
    }
}

/// Where the instance comes from: a file, or the seeded generator with
/// `(S, A, H)` or `(U, V, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceSource {
    File(PathBuf),
    Random { dims: [usize; 3], seed: u64 },
}

impl InstanceSource {
    /// Parses `random:a,b,c` or a path. `seed` is used for the generator.
    pub fn parse(spec: &str, seed: u64) -> Result<Self> {
        match spec.strip_prefix("random:") {
            Some(dims) => Ok(InstanceSource::Random {
                dims: parse_dims(dims)?,
                seed,
            }),
            None if spec.is_empty() => Err(Error::Config("empty instance".into())),
            None => Ok(InstanceSource::File(PathBuf::from(spec))),
        }
    }
}

impl fmt::Display for InstanceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSource::File(p) => write!(f, "{}", p.display()),
            InstanceSource::Random { dims, .. } => write!(f, "random:{},{},{}", dims[0], dims[1], dims[2]),
        }
    }
}

/// Parses a generator triple such as `3,2,3` (parentheses optional).
pub(crate) fn parse_dims(text: &str) -> Result<[usize; 3]> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("expected three sizes, got `{text}`")));
    }
    let mut dims = [0; 3];
    for (d, p) in dims.iter_mut().zip(&parts) {
        *d = p
            .parse()
            .map_err(|_| Error::Config(format!("invalid size `{p}` in `{text}`")))?;
        if *d == 0 {
            return Err(Error::Config(format!("sizes must be positive in `{text}`")));
        }
    }
    Ok(dims)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub env: EnvKind,
    pub instance: InstanceSource,
    pub oracle: OracleKind,
    pub rounds: u64,
    pub replications: usize,
    pub seed: u64,
    pub delta: Option<f64>,
    pub output: PathBuf,
    /// Compute the per-round truth-based audit flags.
    pub audit: bool,
    /// PMC-GD: play each unobserved source once before using the oracle.
    pub warm_start: bool,
    pub greedy: GreedyMode,
    pub jobs: usize,
    /// Seeded draws per check in the `audit` suites.
    pub audit_trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            env: EnvKind::EpisodicRl,
            instance: InstanceSource::Random {
                dims: [3, 2, 3],
                seed: 0,
            },
            oracle: OracleKind::ExtendedVi,
            rounds: 1000,
            replications: 1,
            seed: 0,
            delta: None,
            output: PathBuf::from("out"),
            audit: true,
            warm_start: true,
            greedy: GreedyMode::Lazy,
            jobs: 1,
            audit_trials: 1000,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean `{value}` for `{key}`"))),
    }
}

impl ExperimentConfig {
    /// Parses a config file's text on top of the defaults and validates.
    pub fn from_ini_str(text: &str) -> Result<Self> {
        let mut config = Self::default();
        config.apply_ini(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Reads and validates a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let config = Self::read(path)?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file over the defaults without validating, so that
    /// overrides can still be applied. A relative instance path is resolved
    /// against the file's directory.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::default();
        config.apply_ini(&text)?;
        if let InstanceSource::File(p) = &config.instance {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    config.instance = InstanceSource::File(dir.join(p));
                }
            }
        }
        Ok(config)
    }

    /// Applies `key = value` pairs from INI text. Keys may sit at top level
    /// or under an `[experiment]` section.
    pub fn apply_ini(&mut self, text: &str) -> Result<()> {
        // quotes are ordinary characters; backslash escapes are honoured
        let option = ParseOption {
            enabled_quote: false,
            ..ParseOption::default()
        };
        let ini = Ini::load_from_str_opt(text, option).map_err(|e| Error::Config(e.to_string()))?;
        let mut instance_spec = None;
        for (section, props) in ini.iter() {
            if let Some(name) = section {
                if name != "experiment" {
                    return Err(Error::Config(format!("unknown section `[{name}]`")));
                }
            }
            for (key, value) in props.iter() {
                if key == "instance" {
                    // applied after instance_seed so the order of keys does not matter
                    instance_spec = Some(value.to_string());
                } else {
                    self.set(key, value)?;
                }
            }
        }
        if let Some(spec) = instance_spec {
            self.set("instance", &spec)?;
        }
        Ok(())
    }

    /// Sets one key. Used for both file entries and CLI overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "env" => self.env = value.parse()?,
            "oracle" => self.oracle = value.parse()?,
            "instance" => {
                let seed = match &self.instance {
                    InstanceSource::Random { seed, .. } => *seed,
                    InstanceSource::File(_) => 0,
                };
                self.instance = InstanceSource::parse(value, seed)?;
            }
            "instance_seed" => {
                let s = parse_value(key, value)?;
                if let InstanceSource::Random { seed, .. } = &mut self.instance {
                    *seed = s;
                }
            }
            "rounds" | "T" => self.rounds = parse_value(key, value)?,
            "replications" => self.replications = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "delta" => {
                self.delta = match value {
                    "" | "default" => None,
                    v => Some(parse_value(key, v)?),
                }
            }
            "output" => self.output = PathBuf::from(value),
            "audit" => self.audit = parse_bool(key, value)?,
            "warm_start" => self.warm_start = parse_bool(key, value)?,
            "greedy" => {
                self.greedy = match value {
                    "lazy" => GreedyMode::Lazy,
                    "plain" => GreedyMode::Plain,
                    _ => return Err(Error::Config(format!("invalid greedy mode `{value}`"))),
                }
            }
            "jobs" => self.jobs = parse_value(key, value)?,
            "audit_trials" => self.audit_trials = parse_value(key, value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::Config(format!("delta must lie in (0, 1), got {d}")));
            }
        }
        if self.oracle.env() != self.env {
            return Err(Error::IncompatibleOracle {
                env: self.env.to_string(),
                oracle: self.oracle.to_string(),
            });
        }
        Ok(())
    }

    /// Resolved configuration in the same INI format.
    pub fn to_ini_string(&self) -> String {
        let mut pairs = vec![
            ("env", self.env.to_string()),
            ("instance", self.instance.to_string()),
        ];
        if let InstanceSource::Random { seed, .. } = &self.instance {
            pairs.push(("instance_seed", seed.to_string()));
        }
        pairs.extend([
            ("oracle", self.oracle.to_string()),
            ("rounds", self.rounds.to_string()),
            ("replications", self.replications.to_string()),
            ("seed", self.seed.to_string()),
            ("delta", self.delta.map_or("default".to_string(), |d| format!("{d:?}"))),
            ("output", self.output.display().to_string()),
            ("audit", self.audit.to_string()),
            ("warm_start", self.warm_start.to_string()),
            (
                "greedy",
                match self.greedy {
                    GreedyMode::Lazy => "lazy",
                    GreedyMode::Plain => "plain",
                }
                .to_string(),
            ),
            ("jobs", self.jobs.to_string()),
            ("audit_trials", self.audit_trials.to_string()),
        ]);
        let mut ini = Ini::new();
        let mut section = ini.with_general_section();
        for (key, value) in pairs {
            section.set(key, value);
        }
        let mut buf = Vec::new();
        let option = WriteOption {
            escape_policy: EscapePolicy::Everything,
            kv_separator: " = ",
            ..WriteOption::default()
        };
        ini.write_to_opt(&mut buf, option).expect("writing to memory");
        String::from_utf8(buf).expect("INI output is UTF-8")
    }
}
