//! Equilibrium search for the inclusive game, where any creator may switch
//! to the zero-cost GenAI action.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{utility_inclusive, Action, Game, InclusiveProfile};

use super::best_response::{best_response, deviation_payoff};
use super::mmd::{first_order_residual, subgame_solve, subgame_solve_from};
use super::{EquilibriumReport, SolverConfig};

/// Round budget for [`arbitrary_inclusive_pne`].
pub const DEFAULT_ROUND_CAP: usize = 5000;
/// Recent states kept for cycle diagnosis.
const CYCLE_WINDOW: usize = 12;
/// Grid used when comparing profiles for repeats.
const STATE_RESOLUTION: f64 = 1e-6;

/// Creator `i`'s payoff from switching to GenAI while everyone else stays put.
pub fn genai_deviation_payoff(game: &Game, i: usize, profile: &InclusiveProfile) -> Result<f64> {
    let mut dev = profile.clone();
    dev.set(i, Action::GenAi);
    utility_inclusive(game, i, &dev)
}

/// Best move for creator `i` over the full action set: its best human effort
/// unless GenAI pays strictly more (by `tie_eps`). Returns the action with
/// its payoff.
pub fn best_action(
    game: &Game,
    i: usize,
    profile: &InclusiveProfile,
    config: &SolverConfig,
) -> Result<(Action, f64)> {
    let x = best_response(game, i, profile, config)?;
    let human = deviation_payoff(game, i, &x, profile)?;
    let genai = genai_deviation_payoff(game, i, profile)?;
    if genai > human + config.tie_eps {
        Ok((Action::GenAi, genai))
    } else {
        Ok((Action::Human(x), human))
    }
}

/// Holds `keep` and every GenAI adopter fixed; all other humans are free.
fn resolve_others(
    game: &Game,
    profile: &InclusiveProfile,
    keep: usize,
    config: &SolverConfig,
) -> Result<InclusiveProfile> {
    let fixed: Vec<Option<Action>> = profile
        .actions()
        .iter()
        .enumerate()
        .map(|(j, a)| (j == keep || a.is_genai()).then(|| a.clone()))
        .collect();
    Ok(subgame_solve(game, &fixed, config)?.profile)
}

/// One pass of the equilibrium checker over creators in `order`.
///
/// A human switches to GenAI, or a GenAI adopter to its best human effort,
/// when that pays strictly more. The first such deviation is applied, the
/// other humans re-solve their subgame, and `(false, updated)` is returned.
/// `(true, profile)` means nobody wanted to move.
pub fn inclusive_pne_check(
    game: &Game,
    profile: &InclusiveProfile,
    order: &[usize],
    config: &SolverConfig,
) -> Result<(bool, InclusiveProfile)> {
    config.validate()?;
    game.check_inclusive(profile)?;
    for &i in order {
        let current = utility_inclusive(game, i, profile)?;
        let deviation = match profile.action(i) {
            Action::Human(_) => {
                let alt = genai_deviation_payoff(game, i, profile)?;
                (alt > current + config.tie_eps).then_some(Action::GenAi)
            }
            Action::GenAi => {
                let x = best_response(game, i, profile, config)?;
                let alt = deviation_payoff(game, i, &x, profile)?;
                (alt > current + config.tie_eps).then_some(Action::Human(x))
            }
        };
        if let Some(action) = deviation {
            let mut next = profile.clone();
            next.set(i, action);
            return Ok((false, resolve_others(game, &next, i, config)?));
        }
    }
    Ok((true, profile.clone()))
}

/// Searches for the equilibrium in which the `m` highest-cost creators use
/// GenAI and the rest play the exclusive subgame equilibrium.
///
/// Starting from the all-human equilibrium, creators are examined from the
/// highest cost down; each one switches while GenAI pays strictly more, and
/// the remaining humans re-solve. The first creator who stays human ends the
/// search. The result is always passed through [`inclusive_pne_check`]; the
/// report's `verified` flag carries the outcome.
pub fn targeted_inclusive_pne(game: &Game, config: &SolverConfig) -> Result<EquilibriumReport> {
    config.validate()?;
    if game.topic_count() != 1 {
        return Err(Error::invalid(format!(
            "targeted search needs a single topic, got {}",
            game.topic_count()
        )));
    }
    let n = game.creators();
    let all_free = vec![None; n];
    let first = subgame_solve(game, &all_free, config)?;
    let mut profile = first.profile;
    let mut iterations = first.iterations;
    let mut residual = first.residual;

    for &i in game.cost_order().iter().rev() {
        let stay = utility_inclusive(game, i, &profile)?;
        let switch = genai_deviation_payoff(game, i, &profile)?;
        if switch <= stay + config.tie_eps {
            break;
        }
        profile.set(i, Action::GenAi);
        let fixed: Vec<Option<Action>> = profile
            .actions()
            .iter()
            .map(|a| a.is_genai().then_some(Action::GenAi))
            .collect();
        let solved = subgame_solve_from(game, &fixed, Some(&profile), config)?;
        profile = solved.profile;
        iterations += solved.iterations;
        residual = solved.residual;
    }

    let order: Vec<usize> = (0..n).collect();
    let (verified, _) = inclusive_pne_check(game, &profile, &order, config)?;
    let mut report = EquilibriumReport::inclusive(game, profile, true, iterations, residual)?;
    report.verified = Some(verified);
    Ok(report)
}

/// Searches for some equilibrium by repeatedly applying the checker with a
/// seeded random creator order, starting from the all-human equilibrium.
///
/// Returns a verified equilibrium, or [`Error::CycleSuspected`] once a state
/// repeats (the checker is deterministic, so a repeat means a loop) or
/// `round_cap` deviations have been applied.
pub fn arbitrary_inclusive_pne(
    game: &Game,
    seed: u64,
    round_cap: usize,
    config: &SolverConfig,
) -> Result<EquilibriumReport> {
    config.validate()?;
    let n = game.creators();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut profile = subgame_solve(game, &vec![None; n], config)?.profile;
    let mut recent: VecDeque<(Vec<i64>, InclusiveProfile)> = VecDeque::with_capacity(CYCLE_WINDOW + 1);
    recent.push_back((state_key(&profile), profile.clone()));

    for round in 0..round_cap {
        let (is_pne, next) = inclusive_pne_check(game, &profile, &order, config)?;
        if is_pne {
            let residual = first_order_residual(game, &profile, config.grad_clip)?;
            let mut report = EquilibriumReport::inclusive(game, profile, true, round, residual)?;
            report.verified = Some(true);
            return Ok(report);
        }
        let key = state_key(&next);
        if recent.iter().any(|(k, _)| *k == key) {
            recent.push_back((key, next));
            return Err(cycle(round + 1, recent));
        }
        recent.push_back((key, next.clone()));
        if recent.len() > CYCLE_WINDOW {
            recent.pop_front();
        }
        profile = next;
    }
    Err(cycle(round_cap, recent))
}

fn cycle(rounds: usize, recent: VecDeque<(Vec<i64>, InclusiveProfile)>) -> Error {
    Error::CycleSuspected {
        rounds,
        recent: recent.into_iter().map(|(_, p)| p).collect(),
    }
}

/// Profile quantized to `STATE_RESOLUTION`; GenAI rows get a sentinel.
pub(crate) fn state_key(profile: &InclusiveProfile) -> Vec<i64> {
    let mut key = Vec::new();
    for a in profile.actions() {
        match a {
            Action::GenAi => key.push(i64::MIN),
            Action::Human(x) => {
                key.push(i64::MAX);
                key.extend(x.iter().map(|v| (v / STATE_RESOLUTION).round() as i64));
            }
        }
    }
    key
}
