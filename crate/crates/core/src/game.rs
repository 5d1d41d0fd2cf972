//! Contest instances and payoff evaluation.
//!
//! A game has `n` human creators competing over `K` topics. Creator `i`
//! puts effort `x[i][k] >= 0` into topic `k`; the topic total is
//! `s[k] = sum_i x[i][k]`. Topic `k` splits its traffic among humans in
//! proportion to effort, with `m` GenAI agents sharing the denominator:
//!
//! ```text
//! u_i = sum_k x[i][k] * mu_k / (m * alpha_k * s_k^beta_k + s_k^gamma_k) - cost_i(x_i)
//! ```
//!
//! Exponents are stored in reduced form (`beta = beta_raw - gamma_raw`,
//! `gamma = 1 - gamma_raw`); see [`reduce_exponents`].
//!
//! A topic with `s_k = 0` contributes nothing to any payoff. Equilibria are
//! interior, so this only matters off equilibrium.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maps raw GenAI convergence and traffic growth rates to the reduced
/// exponents `(beta, gamma) = (beta_raw - gamma_raw, 1 - gamma_raw)`.
pub fn reduce_exponents(beta_raw: f64, gamma_raw: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&beta_raw) || !(0.0..=1.0).contains(&gamma_raw) {
        return Err(Error::invalid(format!(
            "raw exponents must lie in [0, 1], got ({beta_raw}, {gamma_raw})"
        )));
    }
    Ok((beta_raw - gamma_raw, 1.0 - gamma_raw))
}

/// Inverse of [`reduce_exponents`].
pub fn expand_exponents(beta: f64, gamma: f64) -> (f64, f64) {
    let gamma_raw = 1.0 - gamma;
    (beta + gamma_raw, gamma_raw)
}

/// Per-topic contest constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTopic", into = "RawTopic")]
pub struct TopicParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    mu: f64,
}

#[derive(Serialize, Deserialize)]
struct RawTopic {
    alpha: f64,
    beta: f64,
    gamma: f64,
    mu: f64,
}

impl TryFrom<RawTopic> for TopicParams {
    type Error = Error;
    fn try_from(t: RawTopic) -> Result<Self> {
        TopicParams::new(t.alpha, t.beta, t.gamma, t.mu)
    }
}

impl From<TopicParams> for RawTopic {
    fn from(t: TopicParams) -> Self {
        RawTopic {
            alpha: t.alpha,
            beta: t.beta,
            gamma: t.gamma,
            mu: t.mu,
        }
    }
}

impl TopicParams {
    /// `alpha`: GenAI data efficiency, `beta`/`gamma`: reduced exponents,
    /// `mu`: topic trendiness.
    pub fn new(alpha: f64, beta: f64, gamma: f64, mu: f64) -> Result<Self> {
        let finite = [alpha, beta, gamma, mu].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("topic parameters must be finite"));
        }
        if alpha < 0.0 {
            return Err(Error::invalid(format!("alpha must be >= 0, got {alpha}")));
        }
        if mu <= 0.0 {
            return Err(Error::invalid(format!("mu must be > 0, got {mu}")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::invalid(format!("beta must lie in [-1, 1], got {beta}")));
        }
        let (beta_raw, _) = expand_exponents(beta, gamma);
        if !(0.0..=1.0).contains(&beta_raw) {
            return Err(Error::invalid(format!(
                "beta + 1 - gamma must lie in [0, 1], got {beta_raw}"
            )));
        }
        Ok(TopicParams {
            alpha,
            beta,
            gamma,
            mu,
        })
    }

    /// Builds a topic from the raw GenAI convergence rate and traffic growth rate.
    pub fn from_raw(alpha: f64, beta_raw: f64, gamma_raw: f64, mu: f64) -> Result<Self> {
        let (beta, gamma) = reduce_exponents(beta_raw, gamma_raw)?;
        TopicParams::new(alpha, beta, gamma, mu)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// GenAI convergence rate `beta + 1 - gamma`.
    pub fn beta_raw(&self) -> f64 {
        expand_exponents(self.beta, self.gamma).0
    }

    /// Traffic growth rate `1 - gamma`.
    pub fn gamma_raw(&self) -> f64 {
        1.0 - self.gamma
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        TopicParams::new(alpha, self.beta, self.gamma, self.mu)
    }
    pub fn with_beta(self, beta: f64) -> Result<Self> {
        TopicParams::new(self.alpha, beta, self.gamma, self.mu)
    }
    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        TopicParams::new(self.alpha, self.beta, gamma, self.mu)
    }
    pub fn with_mu(self, mu: f64) -> Result<Self> {
        TopicParams::new(self.alpha, self.beta, self.gamma, mu)
    }

    /// Body of content the GenAI produces from `s` units of human content.
    pub fn genai_output(&self, s: f64) -> f64 {
        let b = self.beta_raw();
        if s == 0.0 && b > 0.0 {
            return 0.0;
        }
        self.alpha * s.powf(b)
    }

    /// Total user traffic attracted by `s` units of content.
    pub fn topic_traffic(&self, s: f64) -> f64 {
        self.mu * s.powf(self.gamma_raw())
    }

    /// Contest denominator `m*alpha*s^beta + s^gamma`.
    pub fn denominator(&self, s: f64, m: f64) -> f64 {
        m * self.alpha * s.powf(self.beta) + s.powf(self.gamma)
    }

    pub fn denominator_d1(&self, s: f64, m: f64) -> f64 {
        let ai = if m * self.alpha == 0.0 || self.beta == 0.0 {
            0.0
        } else {
            m * self.alpha * self.beta * s.powf(self.beta - 1.0)
        };
        let human = if self.gamma == 0.0 {
            0.0
        } else {
            self.gamma * s.powf(self.gamma - 1.0)
        };
        ai + human
    }

    pub fn denominator_d2(&self, s: f64, m: f64) -> f64 {
        let ai = if m * self.alpha == 0.0 || self.beta == 0.0 || self.beta == 1.0 {
            0.0
        } else {
            m * self.alpha * self.beta * (self.beta - 1.0) * s.powf(self.beta - 2.0)
        };
        let human = if self.gamma == 0.0 || self.gamma == 1.0 {
            0.0
        } else {
            self.gamma * (self.gamma - 1.0) * s.powf(self.gamma - 2.0)
        };
        ai + human
    }

    /// Traffic per unit of effort, `mu / g(s)`; zero on an empty topic.
    pub fn unit_reward(&self, s: f64, m: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        self.mu / self.denominator(s, m)
    }

    /// Traffic captured by one GenAI adopter, `alpha*s^beta*mu / g(s)`.
    pub fn genai_reward(&self, s: f64, m: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        self.alpha * s.powf(self.beta) * self.mu / self.denominator(s, m)
    }

    /// Marginal traffic gain of a creator holding `x` of the topic total `s`.
    /// An empty topic returns `+clip`: any entrant captures the whole topic.
    pub fn marginal_reward(&self, x: f64, s: f64, m: f64, clip: f64) -> f64 {
        if s <= 0.0 {
            return clip;
        }
        let g = self.denominator(s, m);
        let d = self.mu / g - self.mu * x * self.denominator_d1(s, m) / (g * g);
        if d.is_finite() {
            d.clamp(-clip, clip)
        } else {
            clip
        }
    }
}

/// How a creator's effort vector turns into cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostForm {
    /// `c_i * sum_k x_k^rho`
    Separable,
    /// `c_i * (sum_k x_k)^rho`
    L1Power,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    form: CostForm,
    coeffs: Vec<f64>,
    rho: f64,
}

impl CostModel {
    pub fn new(form: CostForm, coeffs: Vec<f64>, rho: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("cost model needs at least one creator"));
        }
        if let Some(c) = coeffs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::invalid(format!("cost coefficients must be > 0, got {c}")));
        }
        if !(rho.is_finite() && rho >= 1.0) {
            return Err(Error::invalid(format!("rho must be >= 1, got {rho}")));
        }
        Ok(CostModel { form, coeffs, rho })
    }

    pub fn separable(coeffs: Vec<f64>, rho: f64) -> Result<Self> {
        CostModel::new(CostForm::Separable, coeffs, rho)
    }

    pub fn l1_power(coeffs: Vec<f64>, rho: f64) -> Result<Self> {
        CostModel::new(CostForm::L1Power, coeffs, rho)
    }

    pub fn form(&self) -> CostForm {
        self.form
    }
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn creators(&self) -> usize {
        self.coeffs.len()
    }

    pub fn cost(&self, i: usize, x: &[f64]) -> f64 {
        let c = self.coeffs[i];
        match self.form {
            CostForm::Separable => c * x.iter().map(|v| v.powf(self.rho)).sum::<f64>(),
            CostForm::L1Power => c * x.iter().sum::<f64>().powf(self.rho),
        }
    }

    /// `d cost_i / d x_k`.
    pub fn marginal(&self, i: usize, x: &[f64], k: usize) -> f64 {
        let c = self.coeffs[i];
        let base = match self.form {
            CostForm::Separable => x[k],
            CostForm::L1Power => x.iter().sum(),
        };
        if self.rho == 1.0 {
            c
        } else {
            c * self.rho * base.powf(self.rho - 1.0)
        }
    }

    /// `d^2 cost_i / d x_k d x_l`. Unbounded at zero effort when `rho < 2`.
    pub fn curvature(&self, i: usize, x: &[f64], k: usize, l: usize) -> f64 {
        let c = self.coeffs[i];
        let r = self.rho;
        if r == 1.0 {
            return 0.0;
        }
        match self.form {
            CostForm::Separable if k != l => 0.0,
            CostForm::Separable => c * r * (r - 1.0) * x[k].powf(r - 2.0),
            CostForm::L1Power => c * r * (r - 1.0) * x.iter().sum::<f64>().powf(r - 2.0),
        }
    }
}

/// A contest instance: topics, creator costs and the number of standalone
/// GenAI agents sharing each topic's denominator.
///
/// Creators keep the order they were given in; [`Game::cost_order`] exposes
/// the permutation that sorts them by ascending cost coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    topics: Vec<TopicParams>,
    costs: CostModel,
    genai_agents: usize,
    cost_order: Vec<usize>,
}

impl Game {
    pub fn new(topics: Vec<TopicParams>, costs: CostModel, genai_agents: usize) -> Result<Self> {
        if topics.is_empty() {
            return Err(Error::invalid("game needs at least one topic"));
        }
        let mut cost_order: Vec<usize> = (0..costs.creators()).collect();
        // stable sort keeps ties in user order
        cost_order.sort_by(|&a, &b| costs.coeffs[a].total_cmp(&costs.coeffs[b]));
        Ok(Game {
            topics,
            costs,
            genai_agents,
            cost_order,
        })
    }

    /// Exclusive competition: one standalone GenAI competitor.
    pub fn exclusive(topics: Vec<TopicParams>, costs: CostModel) -> Result<Self> {
        Game::new(topics, costs, 1)
    }

    /// Base for inclusive competition: GenAI enters only through creators
    /// choosing [`Action::GenAi`].
    pub fn inclusive(topics: Vec<TopicParams>, costs: CostModel) -> Result<Self> {
        Game::new(topics, costs, 0)
    }

    pub fn creators(&self) -> usize {
        self.costs.creators()
    }
    pub fn topic_count(&self) -> usize {
        self.topics.len()
    }
    pub fn topics(&self) -> &[TopicParams] {
        &self.topics
    }
    pub fn costs(&self) -> &CostModel {
        &self.costs
    }
    pub fn genai_agents(&self) -> usize {
        self.genai_agents
    }
    /// Creator indices sorted by ascending cost coefficient.
    pub fn cost_order(&self) -> &[usize] {
        &self.cost_order
    }

    pub fn with_costs(&self, costs: CostModel) -> Result<Self> {
        Game::new(self.topics.clone(), costs, self.genai_agents)
    }

    pub fn with_genai_agents(&self, m: usize) -> Self {
        Game {
            genai_agents: m,
            ..self.clone()
        }
    }

    pub(crate) fn check_profile(&self, p: &StrategyProfile) -> Result<()> {
        if p.creators() != self.creators() {
            return Err(Error::DimensionMismatch {
                what: "profile creators",
                expected: self.creators(),
                got: p.creators(),
            });
        }
        if p.topic_count() != self.topic_count() {
            return Err(Error::DimensionMismatch {
                what: "profile topics",
                expected: self.topic_count(),
                got: p.topic_count(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_inclusive(&self, p: &InclusiveProfile) -> Result<()> {
        if p.creators() != self.creators() {
            return Err(Error::DimensionMismatch {
                what: "profile creators",
                expected: self.creators(),
                got: p.creators(),
            });
        }
        for a in p.actions() {
            if let Action::Human(x) = a {
                if x.len() != self.topic_count() {
                    return Err(Error::DimensionMismatch {
                        what: "effort vector",
                        expected: self.topic_count(),
                        got: x.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Payoff of a human creator with effort `x` given topic totals and the
    /// GenAI multiplier `m`.
    pub(crate) fn human_payoff(&self, i: usize, x: &[f64], totals: &[f64], m: f64) -> f64 {
        let traffic: f64 = self
            .topics
            .iter()
            .zip(x)
            .zip(totals)
            .map(|((t, &xk), &s)| xk * t.unit_reward(s, m))
            .sum();
        traffic - self.costs.cost(i, x)
    }

    pub(crate) fn genai_payoff(&self, totals: &[f64], m: f64) -> f64 {
        self.topics
            .iter()
            .zip(totals)
            .map(|(t, &s)| t.genai_reward(s, m))
            .sum()
    }

    /// Per-topic pieces of the marginal reward: `mu/g` and `mu*g'/g^2`.
    /// `None` marks an empty topic.
    pub(crate) fn topic_margins(&self, totals: &[f64], m: f64, out: &mut Vec<Option<TopicMargin>>) {
        out.clear();
        out.extend(self.topics.iter().zip(totals).map(|(t, &s)| {
            if s <= 0.0 {
                return None;
            }
            let g = t.denominator(s, m);
            Some(TopicMargin {
                base: t.mu / g,
                slope: t.mu * t.denominator_d1(s, m) / (g * g),
            })
        }));
    }

    /// Writes `d u_i / d x_i` into `out`, each component clamped to `±clip`.
    pub(crate) fn gradient_with(
        &self,
        i: usize,
        x: &[f64],
        margins: &[Option<TopicMargin>],
        clip: f64,
        out: &mut [f64],
    ) {
        for (k, margin) in margins.iter().enumerate() {
            let reward = match margin {
                Some(tm) => tm.base - x[k] * tm.slope,
                None => clip,
            };
            let d = reward - self.costs.marginal(i, x, k);
            out[k] = if d.is_finite() {
                d.clamp(-clip, clip)
            } else if reward.is_finite() {
                -clip
            } else {
                clip
            };
        }
    }

    pub(crate) fn own_gradient(
        &self,
        i: usize,
        x: &[f64],
        totals: &[f64],
        m: f64,
        clip: f64,
        out: &mut [f64],
    ) {
        let mut margins = Vec::with_capacity(self.topic_count());
        self.topic_margins(totals, m, &mut margins);
        self.gradient_with(i, x, &margins, clip, out);
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TopicMargin {
    base: f64,
    slope: f64,
}

/// `n x K` matrix of nonnegative efforts, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    creators: usize,
    topics: usize,
    efforts: Vec<f64>,
}

impl StrategyProfile {
    pub fn new(creators: usize, topics: usize, efforts: Vec<f64>) -> Result<Self> {
        if efforts.len() != creators * topics {
            return Err(Error::DimensionMismatch {
                what: "effort matrix",
                expected: creators * topics,
                got: efforts.len(),
            });
        }
        if let Some(v) = efforts.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid(format!(
                "efforts must be finite and >= 0, got {v}"
            )));
        }
        Ok(StrategyProfile {
            creators,
            topics,
            efforts,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let creators = rows.len();
        let topics = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != topics) {
            return Err(Error::DimensionMismatch {
                what: "effort row",
                expected: topics,
                got: r.len(),
            });
        }
        StrategyProfile::new(creators, topics, rows.concat())
    }

    pub fn uniform(creators: usize, topics: usize, value: f64) -> Result<Self> {
        StrategyProfile::new(creators, topics, vec![value; creators * topics])
    }

    pub fn zeros(creators: usize, topics: usize) -> Self {
        StrategyProfile {
            creators,
            topics,
            efforts: vec![0.0; creators * topics],
        }
    }

    pub fn creators(&self) -> usize {
        self.creators
    }
    pub fn topic_count(&self) -> usize {
        self.topics
    }
    pub fn row(&self, i: usize) -> &[f64] {
        &self.efforts[i * self.topics..(i + 1) * self.topics]
    }
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.efforts[i * self.topics..(i + 1) * self.topics]
    }
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.efforts[i * self.topics + k]
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.efforts
    }
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.efforts.chunks(self.topics.max(1))
    }

    /// `s_k` for every topic.
    pub fn topic_totals(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.topics];
        for row in self.rows() {
            for (acc, v) in s.iter_mut().zip(row) {
                *acc += v;
            }
        }
        s
    }

    /// Total body of content over all creators and topics.
    pub fn total(&self) -> f64 {
        self.efforts.iter().sum()
    }

    pub fn to_inclusive(&self) -> InclusiveProfile {
        InclusiveProfile::new(self.rows().map(|r| Action::Human(r.to_vec())).collect())
    }
}

/// A creator's move in the inclusive game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Action {
    Human(Vec<f64>),
    GenAi,
}

impl Action {
    pub fn is_genai(&self) -> bool {
        matches!(self, Action::GenAi)
    }
    pub fn effort(&self) -> Option<&[f64]> {
        match self {
            Action::Human(x) => Some(x),
            Action::GenAi => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusiveProfile {
    actions: Vec<Action>,
}

impl InclusiveProfile {
    pub fn new(actions: Vec<Action>) -> Self {
        InclusiveProfile { actions }
    }

    pub fn creators(&self) -> usize {
        self.actions.len()
    }
    pub fn actions(&self) -> &[Action] {
        &self.actions
    }
    pub fn action(&self, i: usize) -> &Action {
        &self.actions[i]
    }
    pub fn set(&mut self, i: usize, a: Action) {
        self.actions[i] = a;
    }

    /// Number of creators choosing GenAI.
    pub fn genai_count(&self) -> usize {
        self.actions.iter().filter(|a| a.is_genai()).count()
    }

    pub fn genai_set(&self) -> Vec<usize> {
        (0..self.actions.len())
            .filter(|&i| self.actions[i].is_genai())
            .collect()
    }

    /// Human-only topic totals; GenAI output does not feed `s_k`.
    pub fn topic_totals(&self, topics: usize) -> Vec<f64> {
        let mut s = vec![0.0; topics];
        for x in self.actions.iter().filter_map(Action::effort) {
            for (acc, v) in s.iter_mut().zip(x) {
                *acc += v;
            }
        }
        s
    }

    /// Effort matrix with zero rows for GenAI creators.
    pub fn human_efforts(&self, topics: usize) -> StrategyProfile {
        let mut p = StrategyProfile::zeros(self.actions.len(), topics);
        for (i, a) in self.actions.iter().enumerate() {
            if let Action::Human(x) = a {
                p.row_mut(i).copy_from_slice(x);
            }
        }
        p
    }
}

/// Payoff of creator `i` when a standalone GenAI competes (multiplier
/// `game.genai_agents()`).
pub fn utility_exclusive(game: &Game, i: usize, profile: &StrategyProfile) -> Result<f64> {
    game.check_profile(profile)?;
    check_index(game, i)?;
    let totals = profile.topic_totals();
    Ok(game.human_payoff(i, profile.row(i), &totals, game.genai_agents() as f64))
}

/// Payoff of creator `i` in the inclusive game. GenAI adopters pay no cost
/// and each receive the GenAI share of every topic.
pub fn utility_inclusive(game: &Game, i: usize, profile: &InclusiveProfile) -> Result<f64> {
    game.check_inclusive(profile)?;
    check_index(game, i)?;
    let totals = profile.topic_totals(game.topic_count());
    let m = (game.genai_agents() + profile.genai_count()) as f64;
    Ok(match profile.action(i) {
        Action::Human(x) => game.human_payoff(i, x, &totals, m),
        Action::GenAi => game.genai_payoff(&totals, m),
    })
}

/// `d u_i / d x_i` in the exclusive game, components clamped to `±clip`.
pub fn grad_exclusive(
    game: &Game,
    i: usize,
    profile: &StrategyProfile,
    clip: f64,
) -> Result<Vec<f64>> {
    game.check_profile(profile)?;
    check_index(game, i)?;
    let totals = profile.topic_totals();
    let mut g = vec![0.0; game.topic_count()];
    game.own_gradient(
        i,
        profile.row(i),
        &totals,
        game.genai_agents() as f64,
        clip,
        &mut g,
    );
    Ok(g)
}

pub fn utilities_exclusive(game: &Game, profile: &StrategyProfile) -> Result<Vec<f64>> {
    (0..game.creators())
        .map(|i| utility_exclusive(game, i, profile))
        .collect()
}

pub fn utilities_inclusive(game: &Game, profile: &InclusiveProfile) -> Result<Vec<f64>> {
    (0..game.creators())
        .map(|i| utility_inclusive(game, i, profile))
        .collect()
}

/// Sum of all creator utilities.
pub fn welfare(game: &Game, profile: &StrategyProfile) -> Result<f64> {
    Ok(utilities_exclusive(game, profile)?.iter().sum())
}

pub fn welfare_inclusive(game: &Game, profile: &InclusiveProfile) -> Result<f64> {
    Ok(utilities_inclusive(game, profile)?.iter().sum())
}

fn check_index(game: &Game, i: usize) -> Result<()> {
    if i >= game.creators() {
        return Err(Error::invalid(format!(
            "creator index {i} out of range for {} creators",
            game.creators()
        )));
    }
    Ok(())
}
