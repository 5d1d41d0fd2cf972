use tullock_genai::game::{Action, InclusiveProfile};
use tullock_genai::solver::{arbitrary_inclusive_pne, inclusive_pne_check};
use tullock_genai::theory::{best_response_loop, counterexample_config, counterexample_game, run_counterexample};
use tullock_genai::Error;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn replays_the_cycle() {
    let t = run_counterexample(&counterexample_config()).unwrap();
    assert!(close(&t.all_human, &[0.179, 0.120], 5e-3));
    assert!((t.all_human_utility - 1.875).abs() < 0.01);
    assert!((t.genai_vs_all_human - 1.953).abs() < 0.01);
    assert!(close(&t.reply_to_genai, &[0.124, 0.085], 5e-3));
    assert!(close(&t.reply_to_reply, &[0.176, 0.118], 5e-3));
    assert!(t.comparisons.iter().all(|c| c.holds), "{:?}", t.comparisons);
    assert_eq!(t.loop_states.len(), 6);
    assert!(t.search_cycle_rounds.is_some());
}

#[test]
fn checker_moves_off_the_all_human_point() {
    let game = counterexample_game().unwrap();
    let config = counterexample_config();
    let t = run_counterexample(&config).unwrap();
    let start = InclusiveProfile::new(vec![
        Action::Human(t.all_human.clone()),
        Action::Human(t.all_human.clone()),
    ]);
    let (pne, next) = inclusive_pne_check(&game, &start, &[0, 1], &config).unwrap();
    assert!(!pne);
    assert!(next.action(0).is_genai());
}

#[test]
fn randomized_search_reports_a_cycle_for_every_seed() {
    let game = counterexample_game().unwrap();
    for seed in 0..5 {
        match arbitrary_inclusive_pne(&game, seed, 5000, &counterexample_config()) {
            Err(Error::CycleSuspected { recent, .. }) => assert!(!recent.is_empty()),
            other => panic!("seed {seed}: expected a cycle, got {other:?}"),
        }
    }
}

#[test]
fn loop_never_settles() {
    let game = counterexample_game().unwrap();
    let config = counterexample_config();
    let start = InclusiveProfile::new(vec![
        Action::GenAi,
        Action::Human(vec![0.124, 0.085]),
    ]);
    let states = best_response_loop(&game, &start, 50, &config).unwrap();
    assert_eq!(states.len(), 6);
}
