use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::{
    utilities_exclusive, utilities_inclusive, Game, InclusiveProfile, StrategyProfile,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SolvedProfile {
    Exclusive(StrategyProfile),
    Inclusive(InclusiveProfile),
}

/// Outcome of an equilibrium solve together with the quantities every
/// downstream check needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub profile: SolvedProfile,
    pub converged: bool,
    /// Mirror-descent iterations, or deviation rounds for the inclusive
    /// searches.
    pub iterations: usize,
    pub residual: f64,
    pub utilities: Vec<f64>,
    /// Human content per topic.
    pub topic_totals: Vec<f64>,
    pub welfare: f64,
    /// Creators playing GenAI (always 0 for exclusive solves).
    pub genai_count: usize,
    /// `Some(true)` when the profile passed the inclusive equilibrium checker.
    pub verified: Option<bool>,
    /// False when some topic has `beta` outside `[0, 1]`, where uniqueness
    /// is not guaranteed.
    pub monotone_regime: bool,
}

impl EquilibriumReport {
    pub(crate) fn exclusive(
        game: &Game,
        profile: StrategyProfile,
        converged: bool,
        iterations: usize,
        residual: f64,
    ) -> Result<Self> {
        let utilities = utilities_exclusive(game, &profile)?;
        Ok(EquilibriumReport {
            topic_totals: profile.topic_totals(),
            welfare: utilities.iter().sum(),
            utilities,
            profile: SolvedProfile::Exclusive(profile),
            converged,
            iterations,
            residual,
            genai_count: 0,
            verified: None,
            monotone_regime: in_monotone_regime(game),
        })
    }

    pub(crate) fn inclusive(
        game: &Game,
        profile: InclusiveProfile,
        converged: bool,
        iterations: usize,
        residual: f64,
    ) -> Result<Self> {
        let utilities = utilities_inclusive(game, &profile)?;
        Ok(EquilibriumReport {
            topic_totals: profile.topic_totals(game.topic_count()),
            welfare: utilities.iter().sum(),
            utilities,
            genai_count: profile.genai_count(),
            profile: SolvedProfile::Inclusive(profile),
            converged,
            iterations,
            residual,
            verified: None,
            monotone_regime: in_monotone_regime(game),
        })
    }

    /// Human efforts as a matrix; GenAI creators show up as zero rows.
    pub fn efforts(&self) -> StrategyProfile {
        match &self.profile {
            SolvedProfile::Exclusive(p) => p.clone(),
            SolvedProfile::Inclusive(p) => p.human_efforts(self.topic_totals.len()),
        }
    }

    pub fn inclusive_profile(&self) -> Option<&InclusiveProfile> {
        match &self.profile {
            SolvedProfile::Inclusive(p) => Some(p),
            SolvedProfile::Exclusive(_) => None,
        }
    }

    /// Total human content `s*`.
    pub fn s_star(&self) -> f64 {
        self.topic_totals.iter().sum()
    }
}

pub(crate) fn in_monotone_regime(game: &Game) -> bool {
    game.topics()
        .iter()
        .all(|t| (0.0..=1.0).contains(&t.beta()))
}
