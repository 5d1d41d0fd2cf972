use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Action, CostForm, CostModel, Game, InclusiveProfile, TopicParams};
use crate::solver::{
    arbitrary_inclusive_pne, mmd_solve, targeted_inclusive_pne, verify_first_order,
    EquilibriumReport, SolverConfig, DEFAULT_ROUND_CAP,
};

use super::metrics::{occupation_ratio, per_topic_gain, sample_costs, OccupationMetric};

/// First-order residual below which an exclusive row counts as verified.
pub const VERIFY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Exclusive game solved by mirror descent.
    Q1Exclusive,
    /// Inclusive game, cost-ordered search.
    Q2Targeted,
    /// Inclusive game, randomized search.
    Q2Arbitrary,
    /// Inclusive game, cost-ordered search, human against GenAI totals.
    Q3Inclusive,
    /// Multi-topic exclusive game.
    Q4Multitopic,
}

impl SweepKind {
    pub fn is_inclusive(self) -> bool {
        matches!(self, Self::Q2Targeted | Self::Q2Arbitrary | Self::Q3Inclusive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    N,
    Alpha,
    Beta,
    Gamma,
    Rho,
    Mu,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::N => "n",
            Self::Alpha => "alpha",
            Self::Beta => "beta",
            Self::Gamma => "gamma",
            Self::Rho => "rho",
            Self::Mu => "mu",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Replaces the shared exponents or efficiency on one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopicOverride {
    pub topic: usize,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
}

/// The instance template every grid point starts from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaseParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub rho: f64,
    /// One trendiness per topic.
    pub mu: Vec<f64>,
    pub cost_form: CostForm,
    /// Standalone GenAI agents (exclusive kinds only).
    pub genai_agents: usize,
    pub overrides: Vec<TopicOverride>,
}

impl Default for BaseParams {
    fn default() -> Self {
        BaseParams {
            n: 10,
            alpha: 1.0,
            beta: 0.5,
            gamma: 0.9,
            rho: 1.5,
            mu: vec![100.0],
            cost_form: CostForm::Separable,
            genai_agents: 1,
            overrides: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: SweepKind,
    #[serde(default)]
    pub base: BaseParams,
    #[serde(default)]
    pub grid: Vec<GridAxis>,
    /// Creator costs are drawn from `U[lo, hi)`.
    #[serde(default = "default_cost_range")]
    pub cost_range: [f64; 2],
    /// One instance per seed at every grid point; the seed drives the costs
    /// and, for the randomized search, the creator order.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_round_cap")]
    pub round_cap: usize,
    #[serde(default)]
    pub occupation: OccupationMetric,
}

fn default_cost_range() -> [f64; 2] {
    [1.0, 10.0]
}

pub const DEFAULT_BASE_SEED: u64 = 42;

fn default_seeds() -> Vec<u64> {
    seed_range(DEFAULT_BASE_SEED, 10)
}

fn default_round_cap() -> usize {
    DEFAULT_ROUND_CAP
}

/// `count` consecutive seeds starting at `base`.
pub fn seed_range(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base + i).collect()
}

impl SweepSpec {
    pub fn new(kind: SweepKind) -> Self {
        SweepSpec {
            kind,
            base: BaseParams::default(),
            grid: Vec::new(),
            cost_range: default_cost_range(),
            seeds: default_seeds(),
            solver: SolverConfig::default(),
            round_cap: DEFAULT_ROUND_CAP,
            occupation: OccupationMetric::default(),
        }
    }

    pub fn axis(mut self, param: SweepParam, values: &[f64]) -> Self {
        self.grid.push(GridAxis {
            param,
            values: values.to_vec(),
        });
        self
    }

    /// Keeps the number of seeds but restarts them at `base`.
    pub fn with_base_seed(mut self, base: u64) -> Self {
        self.seeds = seed_range(base, self.seeds.len());
        self
    }

    pub fn topic_count(&self) -> usize {
        self.base.mu.len()
    }

    pub fn param_names(&self) -> Vec<&'static str> {
        self.grid.iter().map(|a| a.param.name()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if self.seeds.is_empty() {
            return Err(Error::invalid("sweep needs at least one seed"));
        }
        if self.base.mu.is_empty() {
            return Err(Error::invalid("base.mu needs one entry per topic"));
        }
        if self.kind.is_inclusive() && self.topic_count() != 1 {
            return Err(Error::invalid(format!(
                "{:?} sweeps need a single topic, got {}",
                self.kind,
                self.topic_count()
            )));
        }
        for (i, axis) in self.grid.iter().enumerate() {
            if axis.values.is_empty() {
                return Err(Error::invalid(format!("grid axis {} has no values", axis.param.name())));
            }
            if self.grid[..i].iter().any(|a| a.param == axis.param) {
                return Err(Error::invalid(format!("grid axis {} repeated", axis.param.name())));
            }
            if axis.param == SweepParam::N
                && axis.values.iter().any(|v| !(v.fract() == 0.0 && *v >= 1.0))
            {
                return Err(Error::invalid("grid values for n must be positive integers"));
            }
        }
        for o in &self.base.overrides {
            if o.topic >= self.topic_count() {
                return Err(Error::invalid(format!("override for missing topic {}", o.topic)));
            }
        }
        // every grid point must describe a valid game
        for point in self.points() {
            self.game(&point, &[1.0])?;
        }
        let [lo, hi] = self.cost_range;
        sample_costs(0, lo, hi, 0)?;
        Ok(())
    }

    /// Grid points in canonical order (last axis varies fastest).
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for axis in &self.grid {
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
        points
    }

    fn creators_at(&self, point: &[f64]) -> usize {
        self.grid
            .iter()
            .zip(point)
            .find(|(a, _)| a.param == SweepParam::N)
            .map_or(self.base.n, |(_, &v)| v as usize)
    }

    /// Builds the instance at `point` with the given cost coefficients.
    fn game(&self, point: &[f64], costs: &[f64]) -> Result<Game> {
        let mut b = self.base.clone();
        for (axis, &v) in self.grid.iter().zip(point) {
            match axis.param {
                SweepParam::N => {}
                SweepParam::Alpha => b.alpha = v,
                SweepParam::Beta => b.beta = v,
                SweepParam::Gamma => b.gamma = v,
                SweepParam::Rho => b.rho = v,
                SweepParam::Mu => b.mu.iter_mut().for_each(|m| *m = v),
            }
        }
        b.game(costs, self.kind.is_inclusive())
    }
}

impl BaseParams {
    /// The instance these parameters describe, with the given cost
    /// coefficients. `n` is not consulted; `costs` sets the population.
    pub fn game(&self, costs: &[f64], inclusive: bool) -> Result<Game> {
        let mut topics = Vec::with_capacity(self.mu.len());
        for (k, &m) in self.mu.iter().enumerate() {
            let o = self.overrides.iter().find(|o| o.topic == k);
            let pick = |f: fn(&TopicOverride) -> Option<f64>, d: f64| o.and_then(f).unwrap_or(d);
            topics.push(TopicParams::new(
                pick(|o| o.alpha, self.alpha),
                pick(|o| o.beta, self.beta),
                pick(|o| o.gamma, self.gamma),
                m,
            )?);
        }
        let costs = CostModel::new(self.cost_form, costs.to_vec(), self.rho)?;
        if inclusive {
            Game::inclusive(topics, costs)
        } else {
            Game::new(topics, costs, self.genai_agents)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicStats {
    pub s: f64,
    pub occupation: Option<f64>,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub instance_id: usize,
    pub seed: u64,
    /// Swept values, in grid-axis order.
    pub params: Vec<f64>,
    pub s_star: f64,
    pub welfare: f64,
    pub genai_fraction: f64,
    pub iterations: usize,
    pub residual: f64,
    pub verified: bool,
    pub topics: Vec<TopicStats>,
    pub human_welfare: f64,
    pub genai_welfare: f64,
    /// Total GenAI content across adopters and standalone agents.
    pub genai_content: f64,
    pub human_count: usize,
    pub costs: Vec<f64>,
    /// Which creators play GenAI.
    pub adopters: Vec<bool>,
    /// Why the row is not verified, when a solver gave up.
    pub note: Option<String>,
}

/// Runs every (grid point, seed) pair. Solver failures land in the row
/// (`verified = false`, `note` set) instead of aborting the sweep. Rows come
/// back in canonical order whatever `jobs` is.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.points();
    let tasks: Vec<(usize, &[f64], usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(p, point)| (0..spec.seeds.len()).map(move |s| (p, point.as_slice(), s)))
        .collect();
    let run = |&(p, point, s): &(usize, &[f64], usize)| {
        evaluate(spec, point, spec.seeds[s], p * spec.seeds.len() + s)
    };
    if jobs <= 1 {
        tasks.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        pool.install(|| tasks.par_iter().map(run).collect())
    }
}

fn evaluate(spec: &SweepSpec, point: &[f64], seed: u64, instance_id: usize) -> Result<SweepRow> {
    let n = spec.creators_at(point);
    let [lo, hi] = spec.cost_range;
    let costs = sample_costs(n, lo, hi, seed)?;
    let game = spec.game(point, &costs)?;
    let config = &spec.solver;

    let (report, note) = match spec.kind {
        SweepKind::Q1Exclusive | SweepKind::Q4Multitopic => settle(mmd_solve(&game, config))?,
        SweepKind::Q2Targeted | SweepKind::Q3Inclusive => {
            settle(targeted_inclusive_pne(&game, config))?
        }
        SweepKind::Q2Arbitrary => match arbitrary_inclusive_pne(&game, seed, spec.round_cap, config) {
            Err(Error::CycleSuspected { rounds, recent }) => {
                let last = recent
                    .last()
                    .cloned()
                    .unwrap_or_else(|| InclusiveProfile::new(vec![Action::GenAi; n]));
                let mut r = EquilibriumReport::inclusive(&game, last, false, rounds, f64::NAN)?;
                r.verified = Some(false);
                (r, Some(format!("cycle suspected after {rounds} rounds")))
            }
            other => settle(other)?,
        },
    };

    let efforts = report.efforts();
    let verified = match report.verified {
        Some(v) => v,
        None => {
            report.converged && verify_first_order(&game, &efforts, config.grad_clip)? < VERIFY_TOL
        }
    };
    let adopters: Vec<bool> = match report.inclusive_profile() {
        Some(p) => p.actions().iter().map(Action::is_genai).collect(),
        None => vec![false; n],
    };
    let m_total = (game.genai_agents() + report.genai_count) as f64;
    let occupation = occupation_ratio(&efforts, &game, spec.occupation);
    let gain = per_topic_gain(&efforts, &game);
    let topics = report
        .topic_totals
        .iter()
        .zip(occupation)
        .zip(gain)
        .map(|((&s, occupation), gain)| TopicStats { s, occupation, gain })
        .collect();
    let genai_content = m_total
        * game
            .topics()
            .iter()
            .zip(&report.topic_totals)
            .map(|(t, &s)| t.genai_output(s))
            .sum::<f64>();
    let (mut human_welfare, mut genai_welfare) = (0.0, 0.0);
    for (u, &a) in report.utilities.iter().zip(&adopters) {
        if a {
            genai_welfare += u;
        } else {
            human_welfare += u;
        }
    }

    Ok(SweepRow {
        instance_id,
        seed,
        params: point.to_vec(),
        s_star: report.s_star(),
        welfare: report.welfare,
        genai_fraction: report.genai_count as f64 / n as f64,
        iterations: report.iterations,
        residual: report.residual,
        verified: verified && note.is_none(),
        topics,
        human_welfare,
        genai_welfare,
        genai_content,
        human_count: n - report.genai_count,
        costs,
        adopters,
        note,
    })
}

/// Turns a non-convergence with a partial report into an unverified row;
/// any other error is fatal for the row's sweep.
fn settle(result: Result<EquilibriumReport>) -> Result<(EquilibriumReport, Option<String>)> {
    match result {
        Ok(r) => Ok((r, None)),
        Err(Error::NonConvergence {
            solver,
            iterations,
            residual,
            partial: Some(r),
        }) => Ok((
            *r,
            Some(format!("{solver} stopped after {iterations} iterations at residual {residual:e}")),
        )),
        Err(e) => Err(e),
    }
}

/// GenAI adoption frequency per cost group (group 0 = cheapest), pooled over
/// rows: the share of creators in each group who adopt.
pub fn adoption_by_group(rows: &[SweepRow], groups: usize) -> Vec<f64> {
    let mut adopted = vec![0usize; groups];
    let mut seen = vec![0usize; groups];
    for row in rows {
        let n = row.costs.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| row.costs[a].total_cmp(&row.costs[b]).then(a.cmp(&b)));
        for (rank, &i) in order.iter().enumerate() {
            let g = rank * groups / n;
            seen[g] += 1;
            adopted[g] += usize::from(row.adopters[i]);
        }
    }
    adopted
        .iter()
        .zip(&seen)
        .map(|(&a, &s)| if s > 0 { a as f64 / s as f64 } else { f64::NAN })
        .collect()
}

/// Named sweep bundles. Each entry is `(file stem, spec)`.
pub const PRESETS: [&str; 5] = ["q1", "q2t", "q2a", "q3", "q4"];

/// Mirror-descent budget for presets whose grids reach `mu = 10^4`.
const SWEEP_MAX_ITERS: usize = 20_000;

pub fn preset(name: &str) -> Result<Vec<(String, SweepSpec)>> {
    let solver = SolverConfig::default().with_max_iters(SWEEP_MAX_ITERS);
    let exclusive = || SweepSpec {
        solver,
        ..SweepSpec::new(SweepKind::Q1Exclusive)
    };
    let inclusive = |kind| {
        let mut s = SweepSpec {
            solver,
            ..SweepSpec::new(kind)
        };
        s.base.n = 100;
        s.base.mu = vec![1000.0];
        s
    };
    let alphas = [0.1, 1.0, 10.0];
    let betas = [0.1, 0.5, 0.9];
    let mus = [1e2, 1e3, 1e4];
    let named = |stem: &str, s: SweepSpec| (stem.to_string(), s);
    Ok(match name {
        "q1" => vec![
            named("q1_mu_n", exclusive().axis(SweepParam::N, &[10.0, 100.0]).axis(SweepParam::Mu, &mus)),
            named(
                "q1_alpha_beta",
                exclusive().axis(SweepParam::Alpha, &alphas).axis(SweepParam::Beta, &betas),
            ),
        ],
        "q2t" => vec![
            named("q2t_alpha", inclusive(SweepKind::Q2Targeted).axis(SweepParam::Alpha, &alphas)),
            named("q2t_beta", inclusive(SweepKind::Q2Targeted).axis(SweepParam::Beta, &betas)),
            named("q2t_mu", inclusive(SweepKind::Q2Targeted).axis(SweepParam::Mu, &mus)),
            named(
                "q2t_n",
                inclusive(SweepKind::Q2Targeted).axis(SweepParam::N, &[25.0, 50.0, 100.0]),
            ),
        ],
        "q2a" => {
            let mut s = inclusive(SweepKind::Q2Arbitrary);
            s.seeds = seed_range(DEFAULT_BASE_SEED, 100);
            vec![named("q2a", s)]
        }
        "q3" => {
            let betas: Vec<f64> = (1..=9).map(|b| b as f64 / 10.0).collect();
            vec![named("q3_beta", inclusive(SweepKind::Q3Inclusive).axis(SweepParam::Beta, &betas))]
        }
        "q4" => {
            let betas: Vec<f64> = (1..=9).map(|b| b as f64 / 10.0).collect();
            let multi = |lo: f64, hi: f64| {
                let mut s = SweepSpec {
                    solver,
                    ..SweepSpec::new(SweepKind::Q4Multitopic)
                };
                s.base.mu = vec![200.0, 100.0, 50.0, 20.0, 10.0];
                s.base.cost_form = CostForm::L1Power;
                s.cost_range = [lo, hi];
                s.axis(SweepParam::Alpha, &[0.1, 1.0]).axis(SweepParam::Beta, &betas)
            };
            vec![named("q4_low_cost", multi(0.1, 1.0)), named("q4_high_cost", multi(1.0, 10.0))]
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    })
}
