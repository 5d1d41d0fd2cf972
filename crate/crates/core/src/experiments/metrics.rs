use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile};

/// `n` i.i.d. draws from `U[lo, hi)`, reproducible per seed.
pub fn sample_costs(n: usize, lo: f64, hi: f64, seed: u64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::invalid(format!(
            "cost range needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| rng.gen_range(lo..hi)).collect())
}

/// How engagement with a topic is measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OccupationMetric {
    /// `(s_k / sum_j s_j) / (mu_k / sum_j mu_j)`: human effort share over
    /// trendiness share.
    #[default]
    EffortShare,
    /// `s_k^gamma / (s_k^gamma + m alpha s_k^beta)`: the humans' share of the
    /// topic's traffic.
    TrafficShare,
}

/// Per-topic occupation ratio; `None` where it is undefined (no content).
pub fn occupation_ratio(
    profile: &StrategyProfile,
    game: &Game,
    metric: OccupationMetric,
) -> Vec<Option<f64>> {
    let totals = profile.topic_totals();
    let topics = game.topics();
    match metric {
        OccupationMetric::EffortShare => {
            let content: f64 = totals.iter().sum();
            let trend: f64 = topics.iter().map(|t| t.mu()).sum();
            totals
                .iter()
                .zip(topics)
                .map(|(s, t)| (content > 0.0).then(|| (s / content) / (t.mu() / trend)))
                .collect()
        }
        OccupationMetric::TrafficShare => {
            let m = game.genai_agents() as f64;
            totals
                .iter()
                .zip(topics)
                .map(|(&s, t)| {
                    (s > 0.0).then(|| {
                        let human = s.powf(t.gamma());
                        human / (human + m * t.alpha() * s.powf(t.beta()))
                    })
                })
                .collect()
        }
    }
}

/// Gross traffic revenue per topic averaged over creators:
/// `(1/n) sum_i x_ik mu_k / (m alpha_k s_k^beta_k + s_k^gamma_k)`. Costs are
/// left out because a non-separable cost has no per-topic split.
pub fn per_topic_gain(profile: &StrategyProfile, game: &Game) -> Vec<f64> {
    let n = game.creators() as f64;
    let m = game.genai_agents() as f64;
    profile
        .topic_totals()
        .iter()
        .zip(game.topics())
        .map(|(&s, t)| if s > 0.0 { s * t.unit_reward(s, m) / n } else { 0.0 })
        .collect()
}

/// Mean, sample standard deviation and standard error.
pub fn mean_std_err(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let std = var.sqrt();
    (mean, std, std / (n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{CostModel, TopicParams};

    #[test]
    fn costs_are_deterministic_and_in_range() {
        let a = sample_costs(10, 1.0, 10.0, 42).unwrap();
        assert_eq!(a, sample_costs(10, 1.0, 10.0, 42).unwrap());
        assert_ne!(a, sample_costs(10, 1.0, 10.0, 43).unwrap());
        assert!(a.iter().all(|c| (1.0..10.0).contains(c)));
        let narrow = sample_costs(5, 1.0, 1.0 + 1e-12, 0).unwrap();
        assert!(narrow.iter().all(|c| (c - 1.0).abs() < 1e-11));
        assert!(sample_costs(3, 2.0, 2.0, 0).is_err());
        assert!(sample_costs(3, 0.0, 2.0, 0).is_err());
    }

    #[test]
    fn uniform_mean() {
        let c = sample_costs(100_000, 1.0, 10.0, 7).unwrap();
        let (mean, _, _) = mean_std_err(&c);
        assert!((mean - 5.5).abs() < 0.05);
    }

    fn two_topics(mu: [f64; 2]) -> Game {
        let ts = mu.iter().map(|&m| TopicParams::new(0.0, 0.0, 1.0, m).unwrap()).collect();
        Game::exclusive(ts, CostModel::l1_power(vec![1.0, 1.0], 2.0).unwrap()).unwrap()
    }

    #[test]
    fn occupation_examples() {
        let g = two_topics([3.0, 1.0]);
        let prop = StrategyProfile::from_rows(vec![vec![3.0, 1.0], vec![0.3, 0.1]]).unwrap();
        for r in occupation_ratio(&prop, &g, OccupationMetric::EffortShare) {
            assert!((r.unwrap() - 1.0).abs() < 1e-12);
        }
        let g = two_topics([1.0, 1.0]);
        let one = StrategyProfile::from_rows(vec![vec![2.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let r = occupation_ratio(&one, &g, OccupationMetric::EffortShare);
        assert_eq!(r, vec![Some(2.0), Some(0.0)]);
        let none = StrategyProfile::zeros(2, 2);
        assert_eq!(occupation_ratio(&none, &g, OccupationMetric::EffortShare), vec![None, None]);
    }

    #[test]
    fn gain_splits_traffic() {
        let t = TopicParams::new(0.0, 0.0, 1.0, 12.0).unwrap();
        let g = Game::exclusive(vec![t], CostModel::separable(vec![1.0; 3], 2.0).unwrap()).unwrap();
        let p = StrategyProfile::from_rows(vec![vec![1.0], vec![2.0], vec![5.0]]).unwrap();
        assert!((per_topic_gain(&p, &g)[0] - 4.0).abs() < 1e-12);
        assert_eq!(per_topic_gain(&StrategyProfile::zeros(3, 1), &g), vec![0.0]);
    }
}
