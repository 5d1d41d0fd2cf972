//! The TOML run configuration. Every table rejects unknown keys, and flags
//! given on the command line replace the file's values.
//!
//! ```toml
//! seed = 42
//! out = "runs"
//! jobs = 1
//!
//! [game]            # instance template: n, alpha, beta, gamma, rho, mu, ...
//! n = 10
//! mu = [100.0]
//!
//! [costs]           # coefficients, or a range to sample them from
//! range = [1.0, 10.0]
//!
//! [solver]          # max_iters, step, tol, init, grad_clip, tie_eps
//! tol = 1e-4
//!
//! [inclusive]       # search = "targeted" | "arbitrary", round_cap
//! [theory]          # instances
//! [sweep]           # a full sweep spec, used when no preset is given
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tullock_genai::experiments::{sample_costs, BaseParams, SweepSpec};
use tullock_genai::game::Game;
use tullock_genai::solver::{SolverConfig, DEFAULT_ROUND_CAP};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub jobs: usize,
    pub game: BaseParams,
    pub costs: CostSource,
    pub solver: SolverConfig,
    pub inclusive: InclusiveConfig,
    pub theory: TheoryConfig,
    pub sweep: Option<SweepSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            out: PathBuf::from("runs"),
            jobs: 1,
            game: BaseParams::default(),
            costs: CostSource::default(),
            solver: SolverConfig::default(),
            inclusive: InclusiveConfig::default(),
            theory: TheoryConfig::default(),
            sweep: None,
        }
    }
}

/// Explicit cost coefficients win; otherwise `game.n` of them are drawn
/// from `U[range)` with the run seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostSource {
    pub range: [f64; 2],
    pub values: Option<Vec<f64>>,
}

impl Default for CostSource {
    fn default() -> Self {
        CostSource {
            range: [1.0, 10.0],
            values: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Search {
    #[default]
    Targeted,
    Arbitrary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InclusiveConfig {
    pub search: Search,
    pub round_cap: usize,
}

impl Default for InclusiveConfig {
    fn default() -> Self {
        InclusiveConfig {
            search: Search::Targeted,
            round_cap: DEFAULT_ROUND_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TheoryConfig {
    /// Seeded instances checked, starting at the run seed.
    pub instances: usize,
}

impl Default for TheoryConfig {
    fn default() -> Self {
        TheoryConfig { instances: 3 }
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads `path` (or starts from the defaults) and applies `over`.
    pub fn load(path: Option<&Path>, over: &Overrides) -> Result<Self, CliError> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("reading {}: {e}", p.display())))?;
                Self::parse(&text)?
            }
            None => Self::default(),
        };
        config.apply(over);
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, over: &Overrides) {
        if let Some(seed) = over.seed {
            self.seed = seed;
        }
        if let Some(out) = &over.out {
            self.out.clone_from(out);
        }
        if let Some(jobs) = over.jobs {
            self.jobs = jobs;
        }
        let solvers = std::iter::once(&mut self.solver).chain(self.sweep.as_mut().map(|s| &mut s.solver));
        for solver in solvers {
            if let Some(tol) = over.tol {
                solver.tol = tol;
            }
            if let Some(max_iters) = over.max_iters {
                solver.max_iters = max_iters;
            }
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.jobs == 0 {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        self.solver.validate()?;
        if let Some(spec) = &self.sweep {
            spec.validate()?;
        }
        Ok(())
    }

    /// Cost coefficients for the instance with the given seed.
    pub fn costs(&self, seed: u64) -> Result<Vec<f64>, CliError> {
        match &self.costs.values {
            Some(v) => Ok(v.clone()),
            None => {
                let [lo, hi] = self.costs.range;
                Ok(sample_costs(self.game.n, lo, hi, seed)?)
            }
        }
    }

    pub fn game(&self, seed: u64, inclusive: bool) -> Result<Game, CliError> {
        Ok(self.game.game(&self.costs(seed)?, inclusive)?)
    }
}
