use proptest::prelude::*;

use tullock_genai::experiments::{fmt_float, occupation_ratio, sample_costs, OccupationMetric};
use tullock_genai::game::{
    expand_exponents, grad_exclusive, reduce_exponents, utility_exclusive, Action, CostModel, Game,
    InclusiveProfile, StrategyProfile, TopicParams,
};
use tullock_genai::solver::{
    best_response, best_response_oracle, deviation_payoff, inclusive_pne_check, mmd_solve,
    subgame_solve, targeted_inclusive_pne, verify_first_order, SolverConfig,
};
use tullock_genai::theory::{check_cost_balance, dsc_min_eigenvalue};

fn topic() -> impl Strategy<Value = TopicParams> {
    // the raw exponents stay in [0, 1] only while beta <= gamma. Small gamma
    // and rho push the equilibrium into the thousands, where a fixed step
    // needs far more iterations than a test should spend.
    (0.0..5.0f64, 0.0..=1.0f64, 0.6..=1.0f64, 10.0..200.0f64)
        .prop_map(|(a, u, g, mu)| TopicParams::new(a, u * g, g, mu).unwrap())
}

fn costs(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.0..10.0f64, n)
}

fn one_topic_game() -> impl Strategy<Value = Game> {
    (topic(), costs(2..8), 1.3..2.0f64).prop_map(|(t, c, rho)| {
        Game::exclusive(vec![t], CostModel::separable(c, rho).unwrap()).unwrap()
    })
}

fn config() -> SolverConfig {
    SolverConfig::default().with_max_iters(20_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exponents_round_trip(b in 0.0..=1.0f64, g in 0.0..=1.0f64) {
        let (beta, gamma) = reduce_exponents(b, g).unwrap();
        let (b2, g2) = expand_exponents(beta, gamma);
        prop_assert!((b - b2).abs() < 1e-12 && (g - g2).abs() < 1e-12);
    }

    #[test]
    fn floats_round_trip_through_csv_format(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_float(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn sampled_costs_are_reproducible(n in 1usize..50, seed in any::<u64>()) {
        let a = sample_costs(n, 1.0, 10.0, seed).unwrap();
        prop_assert_eq!(&a, &sample_costs(n, 1.0, 10.0, seed).unwrap());
        prop_assert!(a.iter().all(|c| (1.0..10.0).contains(c)));
    }

    #[test]
    fn empty_topic_pays_nothing(game in one_topic_game()) {
        let zero = StrategyProfile::zeros(game.creators(), 1);
        for i in 0..game.creators() {
            prop_assert_eq!(utility_exclusive(&game, i, &zero).unwrap(), 0.0);
            let g = grad_exclusive(&game, i, &zero, 1e6).unwrap();
            prop_assert_eq!(g[0], 1e6);
        }
    }

    #[test]
    fn converged_solve_is_a_first_order_point(game in one_topic_game()) {
        let c = config();
        let r = mmd_solve(&game, &c).unwrap();
        prop_assert!(r.converged);
        let v = verify_first_order(&game, &r.efforts(), c.grad_clip).unwrap();
        prop_assert!(v < 1e-3, "residual {}", v);
    }

    #[test]
    fn cheaper_creators_produce_more(game in one_topic_game()) {
        let r = mmd_solve(&game, &config()).unwrap();
        let x = r.efforts();
        let order = game.cost_order();
        for w in order.windows(2) {
            prop_assert!(x.get(w[0], 0) >= x.get(w[1], 0) - 1e-6);
        }
    }

    // the bounds need every share to be small, so only larger populations
    #[test]
    fn cost_balance_at_equilibrium(t in topic(), c in costs(20..40)) {
        let game = Game::exclusive(vec![t], CostModel::separable(c, 1.5).unwrap()).unwrap();
        let r = mmd_solve(&game, &config()).unwrap();
        for b in check_cost_balance(&r, &game).unwrap() {
            prop_assert!(b.pass, "{}", b);
        }
    }

    #[test]
    fn empty_subgame_matches_full_solve(game in one_topic_game()) {
        let c = config();
        let full = mmd_solve(&game, &c).unwrap().efforts();
        let sub = subgame_solve(&game, &vec![None; game.creators()], &c).unwrap();
        let sub = sub.profile.human_efforts(1);
        for (a, b) in full.as_slice().iter().zip(sub.as_slice()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn best_response_matches_grid(game in one_topic_game(), others in prop::collection::vec(0.0..3.0f64, 8)) {
        let n = game.creators();
        let actions = (0..n).map(|j| Action::Human(vec![others[j]])).collect();
        let profile = InclusiveProfile::new(actions);
        let c = SolverConfig::default();
        let x = best_response(&game, 0, &profile, &c).unwrap();
        let g = best_response_oracle(&game, 0, &profile, 1e-3).unwrap();
        let ux = deviation_payoff(&game, 0, &x, &profile).unwrap();
        let ug = deviation_payoff(&game, 0, &g, &profile).unwrap();
        // the grid can never do better than the exact reply
        prop_assert!(ux >= ug - 1e-9, "{} < {}", ux, ug);
        prop_assert!((x[0] - g[0]).abs() <= 2e-3, "{:?} vs {:?}", x, g);
    }

    #[test]
    fn targeted_search_switches_a_cost_suffix(game in one_topic_game()) {
        let c = config();
        let game = Game::inclusive(game.topics().to_vec(), game.costs().clone()).unwrap();
        let r = targeted_inclusive_pne(&game, &c).unwrap();
        let p = r.inclusive_profile().unwrap();
        let order = game.cost_order();
        let n = order.len();
        for (rank, &i) in order.iter().enumerate() {
            prop_assert_eq!(p.action(i).is_genai(), rank >= n - r.genai_count);
        }
        prop_assert!(r.genai_count < n);
        // a verified report is a fixed point of the checker
        if r.verified == Some(true) {
            let all: Vec<usize> = (0..n).collect();
            prop_assert!(inclusive_pne_check(&game, p, &all, &c).unwrap().0);
        }
    }

    #[test]
    fn effort_share_occupation_averages_to_one(
        mus in prop::collection::vec(1.0..200.0f64, 2..6),
        seed in any::<u64>(),
    ) {
        let k = mus.len();
        let topics = mus.iter().map(|&m| TopicParams::new(1.0, 0.5, 0.9, m).unwrap()).collect();
        let game = Game::exclusive(topics, CostModel::l1_power(vec![1.0; 3], 1.5).unwrap()).unwrap();
        let efforts = sample_costs(3 * k, 0.1, 5.0, seed).unwrap();
        let p = StrategyProfile::new(3, k, efforts).unwrap();
        let occ = occupation_ratio(&p, &game, OccupationMetric::EffortShare);
        let total: f64 = mus.iter().sum();
        let weighted: f64 = occ.iter().zip(&mus).map(|(o, m)| o.unwrap() * m / total).sum();
        prop_assert!((weighted - 1.0).abs() < 1e-9);
    }

    #[test]
    fn game_is_strictly_monotone(
        t in (0.1..5.0f64, 0.0..=1.0f64, 0.0..=1.0f64, 10.0..500.0f64),
        c in costs(2..5),
        l1 in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let topic = TopicParams::new(t.0, t.1 * t.2, t.2, t.3).unwrap();
        let n = c.len();
        let model = if l1 { CostModel::l1_power(c, 1.5) } else { CostModel::separable(c, 1.5) };
        let game = Game::exclusive(vec![topic; 3], model.unwrap()).unwrap();
        let efforts = sample_costs(n * 3, 0.01, 10.0, seed).unwrap();
        let p = StrategyProfile::new(n, 3, efforts).unwrap();
        prop_assert!(dsc_min_eigenvalue(&game, &p).unwrap() > 0.0);
    }
}
