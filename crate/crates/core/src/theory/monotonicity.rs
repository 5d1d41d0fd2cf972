//! Comparative statics of the single-topic exclusive equilibrium.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CostModel, Game};
use crate::solver::{mmd_solve, SolverConfig};

/// Tolerance for ties when checking the cost ordering.
pub const ORDER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityOutcome {
    /// Efforts and utilities are nonincreasing in cost.
    pub sorted: bool,
    /// Raising the highest cost by half strictly lowers that creator's utility.
    pub cost_bump_lowers_utility: bool,
    /// A new creator costlier than everyone strictly shrinks the incumbents' total.
    pub entrant_shrinks_incumbents: bool,
}

impl MonotonicityOutcome {
    pub fn all(&self) -> bool {
        self.sorted && self.cost_bump_lowers_utility && self.entrant_shrinks_incumbents
    }
}

/// Solves `game`, then the cost-bumped and entrant variants, and reports the
/// three monotonicity properties.
pub fn check_monotonicity(game: &Game, config: &SolverConfig) -> Result<MonotonicityOutcome> {
    if game.topic_count() != 1 {
        return Err(Error::invalid("monotonicity checks need a single topic"));
    }
    let base = mmd_solve(game, config)?;
    let efforts = base.efforts();
    let order = game.cost_order();

    let sorted = order.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        efforts.get(a, 0) >= efforts.get(b, 0) - ORDER_TOL
            && base.utilities[a] >= base.utilities[b] - ORDER_TOL
    });

    let costs = game.costs();
    let last = *order.last().expect("games have at least one creator");
    let mut bumped = costs.coeffs().to_vec();
    bumped[last] *= 1.5;
    let bumped_game = game.with_costs(CostModel::new(costs.form(), bumped, costs.rho())?)?;
    let after = mmd_solve(&bumped_game, config)?;
    let cost_bump_lowers_utility = after.utilities[last] < base.utilities[last];

    let mut extended = costs.coeffs().to_vec();
    extended.push(costs.coeffs()[last] * 1.1);
    let entrant_game = game.with_costs(CostModel::new(costs.form(), extended, costs.rho())?)?;
    let entered = mmd_solve(&entrant_game, config)?;
    let n = game.creators();
    let incumbents: f64 = (0..n).map(|i| entered.efforts().get(i, 0)).sum();
    let entrant_shrinks_incumbents = incumbents < base.s_star();

    Ok(MonotonicityOutcome {
        sorted,
        cost_bump_lowers_utility,
        entrant_shrinks_incumbents,
    })
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("need at least two paired points"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("x values must not all coincide"));
    }
    Ok(sxy / sxx)
}
