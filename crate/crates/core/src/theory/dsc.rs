//! Diagonal strict concavity: the symmetrized negated game Jacobian of the
//! exclusive game must be positive definite for the equilibrium to be unique.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile, TopicParams};

/// `-d^2 u_i / (d x_ik d x_jl)`, indexed by `(i*K + k, j*K + l)`.
///
/// Writing `f = mu / g(s)` for each topic,
/// `d^2 u_i / d x_ik d x_jl = [k == l] * ((1 + [i == j]) f' + x_ik f'') - [i == j] * cost_i''`.
pub fn negated_game_jacobian(game: &Game, profile: &StrategyProfile) -> Result<DMatrix<f64>> {
    game.check_profile(profile)?;
    let n = game.creators();
    let k = game.topic_count();
    let totals = profile.topic_totals();
    if let Some(q) = totals.iter().position(|&s| s <= 0.0) {
        return Err(Error::Singular(format!("topic {q} has no content")));
    }
    let m = game.genai_agents() as f64;
    let (d1, d2): (Vec<f64>, Vec<f64>) = game
        .topics()
        .iter()
        .zip(&totals)
        .map(|(t, &s)| reward_derivatives(t, s, m))
        .unzip();

    let mut jac = DMatrix::zeros(n * k, n * k);
    for i in 0..n {
        let xi = profile.row(i);
        for j in 0..n {
            for a in 0..k {
                for b in 0..k {
                    let mut h = 0.0;
                    if a == b {
                        let own = if i == j { 2.0 } else { 1.0 };
                        h += own * d1[a] + xi[a] * d2[a];
                    }
                    if i == j {
                        h -= game.costs().curvature(i, xi, a, b);
                    }
                    jac[(i * k + a, j * k + b)] = -h;
                }
            }
        }
    }
    if jac.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular(
            "cost curvature is unbounded at a zero coordinate".into(),
        ));
    }
    Ok(jac)
}

/// `(f', f'')` for `f(s) = mu / g(s)`.
fn reward_derivatives(t: &TopicParams, s: f64, m: f64) -> (f64, f64) {
    let g = t.denominator(s, m);
    let g1 = t.denominator_d1(s, m);
    let g2 = t.denominator_d2(s, m);
    let mu = t.mu();
    (-mu * g1 / (g * g), mu * (2.0 * g1 * g1 - g * g2) / (g * g * g))
}

/// Smallest eigenvalue of the symmetrized negated game Jacobian at
/// `profile`. Positive means the game is strictly monotone there.
pub fn dsc_min_eigenvalue(game: &Game, profile: &StrategyProfile) -> Result<f64> {
    let jac = negated_game_jacobian(game, profile)?;
    let sym = (&jac + jac.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// The scalar sufficient condition `0 <= 2s g'^2 - s g'' g <= 2 g' g` on the
/// topic denominator `g(s) = s^gamma + m*alpha*s^beta`.
pub fn psd_scalar_condition(topic: &TopicParams, m: f64, s: f64) -> Result<(bool, bool)> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::invalid(format!("s must be > 0, got {s}")));
    }
    let g = topic.denominator(s, m);
    let g1 = topic.denominator_d1(s, m);
    let g2 = topic.denominator_d2(s, m);
    let middle = 2.0 * s * g1 * g1 - s * g2 * g;
    Ok((0.0 <= middle, middle <= 2.0 * g1 * g))
}
