//! Equilibrium solvers for the exclusive and inclusive games.

mod best_response;
mod config;
mod inclusive;
mod mmd;
mod report;

pub use best_response::{best_response, best_response_oracle, deviation_payoff};
pub use config::SolverConfig;
pub use inclusive::{
    arbitrary_inclusive_pne, best_action, genai_deviation_payoff, inclusive_pne_check,
    targeted_inclusive_pne, DEFAULT_ROUND_CAP,
};
pub(crate) use inclusive::state_key;
pub use mmd::{
    first_order_residual, mmd_solve, subgame_solve, subgame_solve_from, verify_first_order,
    SubgameSolution,
};
pub use report::{EquilibriumReport, SolvedProfile};
