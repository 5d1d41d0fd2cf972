//! A two-creator, two-topic inclusive game with no pure equilibrium: the
//! best-response dynamic cycles through six states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{utility_inclusive, Action, CostModel, Game, InclusiveProfile, TopicParams};
use crate::solver::{
    arbitrary_inclusive_pne, best_action, best_response, genai_deviation_payoff, state_key,
    subgame_solve, SolverConfig, DEFAULT_ROUND_CAP,
};

/// `alpha = 0.25`, `beta = 0.5`, `gamma = 1`, `mu = (3, 2)`, cost `7 (x_1 + x_2)^2`.
pub fn counterexample_game() -> Result<Game> {
    let topic = |mu| TopicParams::new(0.25, 0.5, 1.0, mu);
    Game::inclusive(
        vec![topic(3.0)?, topic(2.0)?],
        CostModel::l1_power(vec![7.0, 7.0], 2.0)?,
    )
}

/// Recommended solver settings: tight enough that repeated states quantize
/// to the same key.
pub fn counterexample_config() -> SolverConfig {
    SolverConfig::default().with_tol(1e-9).with_max_iters(200_000)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    pub left: f64,
    pub right: f64,
    /// `left > right`.
    pub holds: bool,
}

impl Comparison {
    fn greater(label: &str, left: f64, right: f64) -> Self {
        Comparison {
            label: label.into(),
            left,
            right,
            holds: left > right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleTrace {
    /// Each creator's effort at the equilibrium where nobody uses GenAI.
    pub all_human: Vec<f64>,
    pub all_human_utility: f64,
    /// Creator 0 switching to GenAI there.
    pub genai_vs_all_human: f64,
    /// Best human reply to a GenAI opponent.
    pub reply_to_genai: Vec<f64>,
    /// Best human reply to `reply_to_genai`.
    pub reply_to_reply: Vec<f64>,
    pub human_vs_reply: f64,
    pub genai_vs_reply: f64,
    /// Best human reply to `reply_to_reply`.
    pub reply_to_second: Vec<f64>,
    pub human_vs_second: f64,
    pub genai_vs_second: f64,
    pub comparisons: Vec<Comparison>,
    /// States of the alternating best-response loop, in visiting order.
    pub loop_states: Vec<InclusiveProfile>,
    /// Outcome of the randomized equilibrium search: `Some(rounds)` when it
    /// gave up with a suspected cycle.
    pub search_cycle_rounds: Option<usize>,
}

/// Replays the no-equilibrium argument numerically.
pub fn run_counterexample(config: &SolverConfig) -> Result<CounterexampleTrace> {
    let game = counterexample_game()?;
    let human = |x: &[f64]| Action::Human(x.to_vec());

    let degenerate = subgame_solve(&game, &[None, None], config)?.profile;
    let all_human = degenerate.action(0).effort().map(<[f64]>::to_vec).unwrap_or_default();
    let all_human_utility = utility_inclusive(&game, 0, &degenerate)?;
    let genai_vs_all_human = genai_deviation_payoff(&game, 0, &degenerate)?;

    let vs_genai = InclusiveProfile::new(vec![Action::GenAi, human(&all_human)]);
    let reply_to_genai = best_response(&game, 1, &vs_genai, config)?;

    let vs_reply = InclusiveProfile::new(vec![Action::GenAi, human(&reply_to_genai)]);
    let reply_to_reply = best_response(&game, 0, &vs_reply, config)?;
    let genai_vs_reply = utility_inclusive(&game, 0, &vs_reply)?;
    let mut played = vs_reply.clone();
    played.set(0, human(&reply_to_reply));
    let human_vs_reply = utility_inclusive(&game, 0, &played)?;

    let reply_to_second = best_response(&game, 1, &played, config)?;
    let genai_vs_second = genai_deviation_payoff(&game, 1, &played)?;
    played.set(1, human(&reply_to_second));
    let human_vs_second = utility_inclusive(&game, 1, &played)?;

    let comparisons = vec![
        Comparison::greater("genai beats the all-human equilibrium", genai_vs_all_human, all_human_utility),
        Comparison::greater("human reply beats staying on genai", human_vs_reply, genai_vs_reply),
        Comparison::greater("genai beats the human reply", genai_vs_second, human_vs_second),
    ];

    let loop_states = best_response_loop(&game, &vs_reply, 64, config)?;
    let search_cycle_rounds = match arbitrary_inclusive_pne(&game, 0, DEFAULT_ROUND_CAP, config) {
        Err(Error::CycleSuspected { rounds, .. }) => Some(rounds),
        Ok(_) => None,
        Err(e) => return Err(e),
    };

    Ok(CounterexampleTrace {
        all_human,
        all_human_utility,
        genai_vs_all_human,
        reply_to_genai,
        reply_to_reply,
        human_vs_reply,
        genai_vs_reply,
        reply_to_second,
        human_vs_second,
        genai_vs_second,
        comparisons,
        loop_states,
        search_cycle_rounds,
    })
}

/// Alternating best-response dynamic (creator 0 moves first, then 1, ...),
/// run until a state repeats. Returns the states of the detected loop; a
/// single state means the dynamic reached a fixed point.
pub fn best_response_loop(
    game: &Game,
    start: &InclusiveProfile,
    max_moves: usize,
    config: &SolverConfig,
) -> Result<Vec<InclusiveProfile>> {
    game.check_inclusive(start)?;
    let n = game.creators();
    let mut states = vec![start.clone()];
    let mut keys = vec![state_key(start)];
    let mut current = start.clone();
    let mut silent = 0;
    for step in 0..max_moves {
        let mover = step % n;
        let (action, _) = best_action(game, mover, &current, config)?;
        current.set(mover, action);
        let key = state_key(&current);
        if key == keys[keys.len() - 1] {
            silent += 1;
            if silent == n {
                return Ok(vec![current]);
            }
            continue;
        }
        silent = 0;
        if let Some(at) = keys.iter().position(|k| *k == key) {
            return Ok(states.split_off(at));
        }
        keys.push(key);
        states.push(current.clone());
    }
    Err(Error::NonConvergence {
        solver: "best-response loop search",
        iterations: max_moves,
        residual: f64::NAN,
        partial: None,
    })
}
