//! Numerical checks of the structural results: uniqueness through diagonal
//! strict concavity, equilibrium scaling bounds, comparative statics, GenAI
//! adoption bounds, and the cycling counterexample.

mod bounds;
mod counterexample;
mod dsc;
mod monotonicity;

pub use bounds::{
    check_max_share, check_cost_balance, check_content_scaling, hadamard_inverse_norm, adoption_bound,
    adoption_hypothesis, BoundReport, STRICT_SLACK,
};
pub use counterexample::{
    best_response_loop, counterexample_config, counterexample_game, run_counterexample, Comparison,
    CounterexampleTrace,
};
pub use dsc::{dsc_min_eigenvalue, negated_game_jacobian, psd_scalar_condition};
pub use monotonicity::{check_monotonicity, log_log_slope, MonotonicityOutcome, ORDER_TOL};
