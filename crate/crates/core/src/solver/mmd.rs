//! Simultaneous projected gradient ascent ("multi-agent mirror descent" with
//! the Euclidean mirror map) for the exclusive game and its subgames.

use crate::error::{Error, Result};
use crate::game::{Action, Game, InclusiveProfile, StrategyProfile};

use super::{EquilibriumReport, SolverConfig};

/// Smallest step the emptied-topic safeguard will retreat to.
const MIN_STEP: f64 = 1e-12;

/// Creators optimized jointly while everyone else is held fixed.
pub(crate) struct Subgame<'a> {
    game: &'a Game,
    free: Vec<usize>,
    /// Content contributed by fixed human creators.
    offset: Vec<f64>,
    /// GenAI agents sharing every denominator.
    multiplier: f64,
}

impl<'a> Subgame<'a> {
    pub(crate) fn whole(game: &'a Game) -> Self {
        Subgame {
            game,
            free: (0..game.creators()).collect(),
            offset: vec![0.0; game.topic_count()],
            multiplier: game.genai_agents() as f64,
        }
    }

    /// `fixed[i] = None` marks creator `i` as free.
    pub(crate) fn from_fixed(game: &'a Game, fixed: &[Option<Action>]) -> Result<Self> {
        if fixed.len() != game.creators() {
            return Err(Error::DimensionMismatch {
                what: "fixed assignment",
                expected: game.creators(),
                got: fixed.len(),
            });
        }
        let k = game.topic_count();
        let mut offset = vec![0.0; k];
        let mut genai = game.genai_agents();
        let mut free = Vec::new();
        for (i, slot) in fixed.iter().enumerate() {
            match slot {
                None => free.push(i),
                Some(Action::GenAi) => genai += 1,
                Some(Action::Human(x)) => {
                    if x.len() != k {
                        return Err(Error::DimensionMismatch {
                            what: "effort vector",
                            expected: k,
                            got: x.len(),
                        });
                    }
                    for (acc, v) in offset.iter_mut().zip(x) {
                        *acc += v;
                    }
                }
            }
        }
        Ok(Subgame {
            game,
            free,
            offset,
            multiplier: genai as f64,
        })
    }

    pub(crate) fn free(&self) -> &[usize] {
        &self.free
    }
}

pub(crate) struct MmdOutcome {
    /// Free creators' efforts, row-major in `Subgame::free` order.
    pub efforts: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

pub(crate) fn run_mmd(sub: &Subgame<'_>, start: Option<&[f64]>, config: &SolverConfig) -> MmdOutcome {
    let game = sub.game;
    let k = game.topic_count();
    let nf = sub.free.len();
    let mut x = match start {
        Some(s) => s.to_vec(),
        None => vec![config.init; nf * k],
    };
    if nf == 0 {
        return MmdOutcome {
            efforts: x,
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
    }

    let mut next = vec![0.0; nf * k];
    let mut grad = vec![0.0; nf * k];
    let mut totals = vec![0.0; k];
    let mut next_totals = vec![0.0; k];
    let mut margins = Vec::with_capacity(k);
    let mut step = config.step;
    let mut residual = f64::INFINITY;
    let mut previous = f64::INFINITY;

    column_totals(&sub.offset, &x, k, &mut totals);
    for it in 1..=config.max_iters {
        game.topic_margins(&totals, sub.multiplier, &mut margins);
        for (r, &i) in sub.free.iter().enumerate() {
            let row = r * k..(r + 1) * k;
            game.gradient_with(i, &x[row.clone()], &margins, config.grad_clip, &mut grad[row]);
        }

        // A topic emptied by an overshoot would stay empty forever under the
        // zero-content convention, so such steps are retried with half the step.
        loop {
            for ((n, &xv), &g) in next.iter_mut().zip(&x).zip(&grad) {
                *n = (xv + step * g).max(0.0);
            }
            column_totals(&sub.offset, &next, k, &mut next_totals);
            let emptied = totals
                .iter()
                .zip(&next_totals)
                .any(|(&before, &after)| before > 0.0 && after <= 0.0);
            if emptied && step > MIN_STEP {
                step *= 0.5;
                continue;
            }
            break;
        }

        residual = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            / step;
        if residual < config.tol {
            return MmdOutcome {
                efforts: x,
                iterations: it,
                residual,
                converged: true,
            };
        }
        // a residual that fails to shrink means the step overshoots a stiff
        // direction; halving it damps the resulting two-cycle
        if residual >= previous && step > MIN_STEP {
            step *= 0.5;
        }
        previous = residual;
        std::mem::swap(&mut x, &mut next);
        std::mem::swap(&mut totals, &mut next_totals);
    }
    MmdOutcome {
        efforts: x,
        iterations: config.max_iters,
        residual,
        converged: false,
    }
}

fn column_totals(offset: &[f64], x: &[f64], k: usize, out: &mut [f64]) {
    out.copy_from_slice(offset);
    for row in x.chunks(k) {
        for (acc, v) in out.iter_mut().zip(row) {
            *acc += v;
        }
    }
}

/// Solves the exclusive game by simultaneous projected gradient ascent from
/// the uniform starting profile.
pub fn mmd_solve(game: &Game, config: &SolverConfig) -> Result<EquilibriumReport> {
    config.validate()?;
    let out = run_mmd(&Subgame::whole(game), None, config);
    let profile = StrategyProfile::new(game.creators(), game.topic_count(), out.efforts)?;
    let report = EquilibriumReport::exclusive(game, profile, out.converged, out.iterations, out.residual)?;
    if !out.converged {
        return Err(Error::NonConvergence {
            solver: "mirror descent",
            iterations: out.iterations,
            residual: out.residual,
            partial: Some(Box::new(report)),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubgameSolution {
    pub profile: InclusiveProfile,
    pub iterations: usize,
    pub residual: f64,
}

/// Re-solves the equilibrium among the free creators (`None` entries) while
/// the others keep their actions. Fixed GenAI adopters add to the denominator
/// multiplier; fixed humans add to the topic totals.
pub fn subgame_solve(
    game: &Game,
    fixed: &[Option<Action>],
    config: &SolverConfig,
) -> Result<SubgameSolution> {
    subgame_solve_from(game, fixed, None, config)
}

/// Like [`subgame_solve`], starting the free creators from their efforts in
/// `start` instead of the uniform profile.
pub fn subgame_solve_from(
    game: &Game,
    fixed: &[Option<Action>],
    start: Option<&InclusiveProfile>,
    config: &SolverConfig,
) -> Result<SubgameSolution> {
    config.validate()?;
    let sub = Subgame::from_fixed(game, fixed)?;
    let k = game.topic_count();
    let warm: Option<Vec<f64>> = start.map(|p| {
        sub.free()
            .iter()
            .flat_map(|&i| match p.action(i) {
                Action::Human(x) => x.clone(),
                Action::GenAi => vec![config.init; k],
            })
            .collect()
    });
    let out = run_mmd(&sub, warm.as_deref(), config);
    if !out.converged {
        return Err(Error::NonConvergence {
            solver: "subgame mirror descent",
            iterations: out.iterations,
            residual: out.residual,
            partial: None,
        });
    }
    let mut actions: Vec<Action> = fixed
        .iter()
        .map(|a| a.clone().unwrap_or(Action::GenAi))
        .collect();
    for (r, &i) in sub.free().iter().enumerate() {
        actions[i] = Action::Human(out.efforts[r * k..(r + 1) * k].to_vec());
    }
    Ok(SubgameSolution {
        profile: InclusiveProfile::new(actions),
        iterations: out.iterations,
        residual: out.residual,
    })
}

/// Largest first-order violation over all human creators of an inclusive
/// profile: `|du/dx|` at positive coordinates, `max(0, du/dx)` at zeros.
pub fn first_order_residual(game: &Game, profile: &InclusiveProfile, clip: f64) -> Result<f64> {
    game.check_inclusive(profile)?;
    let k = game.topic_count();
    let totals = profile.topic_totals(k);
    let m = (game.genai_agents() + profile.genai_count()) as f64;
    let mut margins = Vec::with_capacity(k);
    game.topic_margins(&totals, m, &mut margins);
    let mut g = vec![0.0; k];
    let mut worst: f64 = 0.0;
    for (i, a) in profile.actions().iter().enumerate() {
        let Action::Human(x) = a else { continue };
        game.gradient_with(i, x, &margins, clip, &mut g);
        for (&xv, &gv) in x.iter().zip(&g) {
            let v = if xv > 0.0 { gv.abs() } else { gv.max(0.0) };
            worst = worst.max(v);
        }
    }
    Ok(worst)
}

/// First-order certificate for an exclusive profile; a small value certifies
/// an approximate equilibrium.
pub fn verify_first_order(game: &Game, profile: &StrategyProfile, clip: f64) -> Result<f64> {
    game.check_profile(profile)?;
    first_order_residual(game, &profile.to_inclusive(), clip)
}
