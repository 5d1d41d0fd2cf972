use crate::error::{Error, Result};
use crate::game::{Action, Game, InclusiveProfile};

use super::SolverConfig;

/// Safety factor applied to the zero-utility bracket in the 1-D solve.
const BRACKET_SAFETY: f64 = 10.0;
/// Sufficient-increase constant for the backtracking line search.
const ARMIJO: f64 = 1e-4;

/// What creator `i` faces: everyone else's content and the GenAI multiplier.
struct Opponents {
    offset: Vec<f64>,
    multiplier: f64,
}

fn opponents(game: &Game, i: usize, profile: &InclusiveProfile) -> Result<Opponents> {
    game.check_inclusive(profile)?;
    if i >= game.creators() {
        return Err(Error::invalid(format!("creator index {i} out of range")));
    }
    let mut offset = vec![0.0; game.topic_count()];
    let mut genai = game.genai_agents();
    for (j, a) in profile.actions().iter().enumerate() {
        if j == i {
            continue;
        }
        match a {
            Action::GenAi => genai += 1,
            Action::Human(x) => {
                for (acc, v) in offset.iter_mut().zip(x) {
                    *acc += v;
                }
            }
        }
    }
    Ok(Opponents {
        offset,
        multiplier: genai as f64,
    })
}

impl Opponents {
    fn payoff(&self, game: &Game, i: usize, x: &[f64]) -> f64 {
        let totals: Vec<f64> = self.offset.iter().zip(x).map(|(o, v)| o + v).collect();
        game.human_payoff(i, x, &totals, self.multiplier)
    }

    fn gradient(&self, game: &Game, i: usize, x: &[f64], clip: f64, out: &mut [f64]) {
        let totals: Vec<f64> = self.offset.iter().zip(x).map(|(o, v)| o + v).collect();
        game.own_gradient(i, x, &totals, self.multiplier, clip, out);
    }
}

/// Payoff creator `i` would get by playing effort `x` against the rest of
/// `profile` (its own entry is ignored).
pub fn deviation_payoff(game: &Game, i: usize, x: &[f64], profile: &InclusiveProfile) -> Result<f64> {
    Ok(opponents(game, i, profile)?.payoff(game, i, x))
}

/// Best human effort for creator `i` against the rest of `profile` (its own
/// entry is ignored). GenAI adopters among the others raise the multiplier.
///
/// One topic: bisection on the decreasing marginal utility. Several topics:
/// projected gradient ascent with a backtracking line search.
pub fn best_response(
    game: &Game,
    i: usize,
    profile: &InclusiveProfile,
    config: &SolverConfig,
) -> Result<Vec<f64>> {
    config.validate()?;
    let opp = opponents(game, i, profile)?;
    if game.topic_count() == 1 {
        bisect_1d(game, i, &opp, config).map(|x| vec![x])
    } else {
        ascend(game, i, &opp, config)
    }
}

fn bisect_1d(game: &Game, i: usize, opp: &Opponents, config: &SolverConfig) -> Result<f64> {
    let topic = &game.topics()[0];
    let clip = config.grad_clip;
    let others = opp.offset[0];
    let slope = |x: f64| {
        topic.marginal_reward(x, x + others, opp.multiplier, clip) - game.costs().marginal(i, &[x], 0)
    };
    if slope(0.0) <= 0.0 {
        return Ok(0.0);
    }

    let c = game.costs().coeffs()[i];
    let rho = game.costs().rho();
    let mut hi = if others > 0.0 && rho > 1.0 {
        let bound = (topic.mu() / (c * rho * others.powf(topic.gamma())) + 1.0).powf(1.0 / (rho - 1.0));
        bound * BRACKET_SAFETY
    } else {
        1.0
    };
    let mut expansions = 0;
    while slope(hi) > 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(Error::NonConvergence {
                solver: "best-response bracket",
                iterations: expansions,
                residual: slope(hi),
                partial: None,
            });
        }
    }

    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ascend(game: &Game, i: usize, opp: &Opponents, config: &SolverConfig) -> Result<Vec<f64>> {
    let k = game.topic_count();
    let mut x = vec![config.init; k];
    let mut g = vec![0.0; k];
    let mut y = vec![0.0; k];
    let mut residual = f64::INFINITY;
    // accepted steps only shrink, so an overshooting step is never retried
    let mut step = config.step;
    for _ in 0..config.max_iters {
        opp.gradient(game, i, &x, config.grad_clip, &mut g);
        let project = |step: f64, y: &mut [f64]| {
            for ((yv, xv), gv) in y.iter_mut().zip(&x).zip(&g) {
                *yv = (xv + step * gv).max(0.0);
            }
        };

        project(step, &mut y);
        residual = dist(&y, &x) / step;
        if residual < config.tol {
            return Ok(x);
        }

        let current = opp.payoff(game, i, &x);
        // near the optimum the payoff change drops below rounding noise
        let noise = 1e-14 * current.abs().max(1.0);
        loop {
            project(step, &mut y);
            let gain: f64 = g.iter().zip(&y).zip(&x).map(|((gv, yv), xv)| gv * (yv - xv)).sum();
            if opp.payoff(game, i, &y) >= current + ARMIJO * gain - noise || step < 1e-14 {
                break;
            }
            step *= 0.5;
        }
        x.copy_from_slice(&y);
    }
    Err(Error::NonConvergence {
        solver: "best-response ascent",
        iterations: config.max_iters,
        residual,
        partial: None,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Exhaustive grid search for creator `i`'s best effort, for `K <= 2`.
///
/// The search box is `[0, L]^K` where `L` is the smallest effort beyond
/// which utility is certainly negative (traffic gain is at most
/// `sum_k mu_k * L^(1 - gamma_k)`), so any better point lies inside.
pub fn best_response_oracle(
    game: &Game,
    i: usize,
    profile: &InclusiveProfile,
    grid_step: f64,
) -> Result<Vec<f64>> {
    let k = game.topic_count();
    if k > 2 {
        return Err(Error::invalid(format!("grid oracle supports K <= 2, got {k}")));
    }
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::invalid("grid step must be positive"));
    }
    let opp = opponents(game, i, profile)?;
    let limit = zero_utility_bound(game, i)?;
    let points = (limit / grid_step).ceil() as usize + 1;
    if points.saturating_pow(k as u32) > 50_000_000 {
        return Err(Error::invalid(format!(
            "grid of {points}^{k} points is too large; use a coarser step"
        )));
    }

    let mut best = vec![0.0; k];
    let mut best_u = opp.payoff(game, i, &best);
    let mut x = vec![0.0; k];
    let mut visit = |x: &[f64]| {
        let u = opp.payoff(game, i, x);
        if u > best_u {
            best_u = u;
            best.copy_from_slice(x);
        }
    };
    if k == 1 {
        for a in 0..points {
            x[0] = a as f64 * grid_step;
            visit(&x);
        }
    } else {
        for a in 0..points {
            for b in 0..points {
                x[0] = a as f64 * grid_step;
                x[1] = b as f64 * grid_step;
                visit(&x);
            }
        }
    }
    Ok(best)
}

/// Effort level past which every coordinate makes utility negative.
fn zero_utility_bound(game: &Game, i: usize) -> Result<f64> {
    let c = game.costs().coeffs()[i];
    let rho = game.costs().rho();
    let excess = |l: f64| {
        let gain: f64 = game.topics().iter().map(|t| t.mu() * l.powf(1.0 - t.gamma())).sum();
        c * l.powf(rho) - gain
    };
    let mut hi = 1.0;
    let mut doublings = 0;
    while excess(hi) <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::invalid("utility is not eventually negative; no finite search box"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{CostModel, TopicParams};

    fn single() -> Game {
        let t = TopicParams::new(0.0, 0.0, 0.5, 4.0).unwrap();
        Game::exclusive(vec![t], CostModel::separable(vec![1.0], 2.0).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_single_creator() {
        let g = single();
        let p = InclusiveProfile::new(vec![Action::Human(vec![0.0])]);
        let x = best_response(&g, 0, &p, &SolverConfig::default()).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-9);
        let grid = best_response_oracle(&g, 0, &p, 1e-3).unwrap();
        assert!((grid[0] - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn prohibitive_cost_gives_zero() {
        // rho = 1 with c above the marginal reward everywhere
        let t = TopicParams::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let g = Game::exclusive(vec![t], CostModel::separable(vec![5.0, 1.0], 1.0).unwrap())
            .unwrap();
        let p = InclusiveProfile::new(vec![Action::Human(vec![1.0]), Action::Human(vec![1.0])]);
        let x = best_response(&g, 0, &p, &SolverConfig::default()).unwrap();
        assert_eq!(x, vec![0.0]);
    }

    #[test]
    fn oracle_rejects_three_topics() {
        let t = TopicParams::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let g = Game::exclusive(vec![t; 3], CostModel::separable(vec![1.0], 2.0).unwrap()).unwrap();
        let p = InclusiveProfile::new(vec![Action::Human(vec![0.0; 3])]);
        assert!(best_response_oracle(&g, 0, &p, 0.1).is_err());
    }
}
