use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tullock_genai::experiments::{
    adoption_by_group, preset, run_sweep, sample_costs, write_groups, write_rows, write_summary,
    write_welfare_split, SweepKind, SweepSpec, VERIFY_TOL,
};
use tullock_genai::game::{Game, StrategyProfile};
use tullock_genai::solver::{
    arbitrary_inclusive_pne, first_order_residual, inclusive_pne_check, mmd_solve,
    targeted_inclusive_pne, verify_first_order, EquilibriumReport,
};
use tullock_genai::theory::{
    adoption_bound, check_content_scaling, check_cost_balance, check_max_share,
    check_monotonicity, counterexample_config, dsc_min_eigenvalue, run_counterexample,
    BoundReport,
};

use crate::config::{Overrides, RunConfig, Search};
use crate::error::CliError;
use crate::profile::{read_profile, write_profile};

pub const MANIFEST: &str = "run-manifest.toml";

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    preset: Option<&'a str>,
    config: &'a RunConfig,
    sweeps: Vec<ManifestSweep<'a>>,
}

#[derive(Serialize)]
struct ManifestSweep<'a> {
    stem: &'a str,
    spec: &'a SweepSpec,
}

fn out_dir(config: &RunConfig) -> Result<&Path, CliError> {
    fs::create_dir_all(&config.out)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", config.out.display())))?;
    Ok(&config.out)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Records the resolved configuration next to the outputs.
pub fn write_manifest(
    config: &RunConfig,
    command: &str,
    preset: Option<&str>,
    sweeps: &[(String, SweepSpec)],
) -> Result<PathBuf, CliError> {
    let manifest = Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        preset,
        config,
        sweeps: sweeps
            .iter()
            .map(|(stem, spec)| ManifestSweep { stem, spec })
            .collect(),
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    let path = out_dir(config)?.join(MANIFEST);
    fs::write(&path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

fn print_report(report: &EquilibriumReport) {
    println!("converged:   {}", report.converged);
    println!("iterations:  {}", report.iterations);
    println!("residual:    {:.3e}", report.residual);
    println!("s*:          {:.6}", report.s_star());
    println!("welfare:     {:.6}", report.welfare);
    println!("genai:       {}", report.genai_count);
    if let Some(v) = report.verified {
        println!("verified:    {v}");
    }
    if !report.monotone_regime {
        println!("note: some topic has beta outside [0, 1]; the equilibrium may not be unique");
    }
}

fn save_report(config: &RunConfig, report: &EquilibriumReport, game: &Game) -> Result<(), CliError> {
    let path = out_dir(config)?.join("profile.csv");
    write_profile(create(&path)?, report, game.costs().coeffs())?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn solve_ex(config: &RunConfig) -> Result<(), CliError> {
    let game = config.game(config.seed, false)?;
    let report = mmd_solve(&game, &config.solver)?;
    print_report(&report);
    save_report(config, &report, &game)
}

pub fn solve_in(config: &RunConfig) -> Result<(), CliError> {
    let game = config.game(config.seed, true)?;
    let report = match config.inclusive.search {
        Search::Targeted => targeted_inclusive_pne(&game, &config.solver)?,
        Search::Arbitrary => {
            arbitrary_inclusive_pne(&game, config.seed, config.inclusive.round_cap, &config.solver)?
        }
    };
    print_report(&report);
    save_report(config, &report, &game)
}

/// Re-checks a stored profile against the configured game. `threshold`
/// bounds the first-order residual.
pub fn verify(config: &RunConfig, profile: &Path, threshold: Option<f64>) -> Result<(), CliError> {
    let file = File::open(profile)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", profile.display())))?;
    let stored = read_profile(file)?;
    let game = config.game.game(&stored.costs, stored.inclusive)?;
    let threshold = threshold.unwrap_or(VERIFY_TOL);
    let clip = config.solver.grad_clip;

    let residual = if stored.inclusive {
        first_order_residual(&game, &stored.profile, clip)?
    } else {
        verify_first_order(&game, &stored.profile.human_efforts(game.topic_count()), clip)?
    };
    println!("first-order residual: {residual:.3e} (threshold {threshold:.1e})");
    let mut failures = Vec::new();
    if residual >= threshold {
        failures.push(format!("first-order residual {residual:.3e} >= {threshold:.1e}"));
    }
    if stored.inclusive {
        let order: Vec<usize> = (0..game.creators()).collect();
        let (stable, _) = inclusive_pne_check(&game, &stored.profile, &order, &config.solver)?;
        println!("no profitable switch: {stable}");
        if !stable {
            failures.push("some creator gains by switching action".into());
        }
    }
    if failures.is_empty() {
        println!("verified");
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}

/// `count` positive effort profiles with entries in `[0.01, 10)`.
fn random_profiles(game: &Game, seed: u64, count: usize) -> Result<Vec<StrategyProfile>, CliError> {
    let (n, k) = (game.creators(), game.topic_count());
    (0..count as u64)
        .map(|i| {
            let efforts = sample_costs(n * k, 0.01, 10.0, seed.wrapping_mul(31).wrapping_add(i))?;
            Ok(StrategyProfile::new(n, k, efforts)?)
        })
        .collect()
}

fn record(failures: &mut Vec<String>, report: &BoundReport) {
    println!("  {report}");
    if !report.pass {
        failures.push(report.name.clone());
    }
}

/// Runs every applicable structural check on `theory.instances` seeded
/// instances of the configured family.
pub fn theory_check(config: &RunConfig) -> Result<(), CliError> {
    let mut failures = Vec::new();
    for seed in (0..config.theory.instances as u64).map(|i| config.seed + i) {
        let game = config.game(seed, false)?;
        println!("instance seed {seed}:");
        let report = mmd_solve(&game, &config.solver)?;
        let efforts = report.efforts();
        match dsc_min_eigenvalue(&game, &efforts) {
            Ok(v) => {
                println!("  strict monotonicity at the equilibrium: min eigenvalue {v:.4e}");
                if v <= 0.0 {
                    failures.push(format!("seed {seed}: monotonicity"));
                }
            }
            Err(e) => println!("  strict monotonicity skipped: {e}"),
        }
        for (i, p) in random_profiles(&game, seed, 5)?.iter().enumerate() {
            let v = dsc_min_eigenvalue(&game, p)?;
            if v <= 0.0 {
                failures.push(format!("seed {seed}: monotonicity at random profile {i}"));
            }
        }
        if game.topic_count() > 1 {
            continue;
        }
        record(&mut failures, &check_content_scaling(&report, &game)?);
        let balance = check_cost_balance(&report, &game)?;
        let outside: Vec<&BoundReport> = balance.iter().filter(|b| !b.pass).collect();
        println!("  cost balance: {}/{} creators inside their bounds", balance.len() - outside.len(), balance.len());
        for b in outside {
            record(&mut failures, b);
        }
        record(&mut failures, &check_max_share(&report));
        let m = check_monotonicity(&game, &config.solver)?;
        println!("  comparative statics: {m:?}");
        if !m.all() {
            failures.push(format!("seed {seed}: comparative statics"));
        }
        let inclusive = config.game(seed, true)?;
        let adoption = targeted_inclusive_pne(&inclusive, &config.solver)?;
        println!("  targeted search: {} adopters, verified {:?}", adoption.genai_count, adoption.verified);
        record(&mut failures, &adoption_bound(adoption.genai_count, &inclusive)?);
    }
    if failures.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(CliError::Check(failures.join(", ")))
    }
}

pub fn counterexample(config: &RunConfig) -> Result<(), CliError> {
    let trace = run_counterexample(&counterexample_config())?;
    println!("all-human equilibrium: {:?} each, utility {:.4}", trace.all_human, trace.all_human_utility);
    for c in &trace.comparisons {
        let sign = if c.holds { ">" } else { "<=" };
        println!("  {}: {:.4} {sign} {:.4}", c.label, c.left, c.right);
    }
    println!("best-response loop ({} states):", trace.loop_states.len());
    let path = out_dir(config)?.join("counterexample_loop.csv");
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(&path)?);
    w.write_record(["state", "creator", "action", "x0", "x1"])?;
    for (s, state) in trace.loop_states.iter().enumerate() {
        let cells: Vec<String> = state
            .actions()
            .iter()
            .map(|a| match a.effort() {
                Some(x) => format!("({:.3}, {:.3})", x[0], x[1]),
                None => "GenAI".into(),
            })
            .collect();
        println!("  {s}: [{}]", cells.join(", "));
        for (i, a) in state.actions().iter().enumerate() {
            let (action, x) = match a.effort() {
                Some(x) => ("human", x.iter().map(|v| v.to_string()).collect()),
                None => ("genai", vec![String::new(); 2]),
            };
            w.write_record([s.to_string(), i.to_string(), action.into(), x[0].clone(), x[1].clone()])?;
        }
    }
    w.flush()?;
    match trace.search_cycle_rounds {
        Some(r) => println!("randomized search: cycle suspected after {r} rounds"),
        None => println!("randomized search: no cycle reported"),
    }
    println!("wrote {}", path.display());
    let holds = trace.comparisons.iter().all(|c| c.holds);
    if holds && trace.search_cycle_rounds.is_some() && trace.loop_states.len() > 1 {
        Ok(())
    } else {
        Err(CliError::Check("the counterexample did not reproduce".into()))
    }
}

/// Sweeps to run: the named preset, or the config's `[sweep]` table. Presets
/// restart their seeds at the run seed and take the solver flags.
pub fn sweep_specs(
    config: &RunConfig,
    preset_name: Option<&str>,
    over: &Overrides,
) -> Result<Vec<(String, SweepSpec)>, CliError> {
    match (preset_name, &config.sweep) {
        (Some(name), _) => Ok(preset(name)?
            .into_iter()
            .map(|(stem, mut spec)| {
                spec = spec.with_base_seed(config.seed);
                if let Some(tol) = over.tol {
                    spec.solver.tol = tol;
                }
                if let Some(max_iters) = over.max_iters {
                    spec.solver.max_iters = max_iters;
                }
                (stem, spec)
            })
            .collect()),
        (None, Some(spec)) => Ok(vec![("sweep".to_string(), spec.clone())]),
        (None, None) => Err(CliError::Usage(
            "sweep needs --preset or a [sweep] table in the config".into(),
        )),
    }
}

pub fn sweep(config: &RunConfig, specs: &[(String, SweepSpec)]) -> Result<(), CliError> {
    let dir = out_dir(config)?;
    for (stem, spec) in specs {
        let rows = run_sweep(spec, config.jobs)?;
        let verified = rows.iter().filter(|r| r.verified).count();
        let mut written = vec![dir.join(format!("{stem}.csv")), dir.join(format!("{stem}_summary.csv"))];
        write_rows(create(&written[0])?, spec, &rows)?;
        write_summary(create(&written[1])?, spec, &rows)?;
        if spec.kind.is_inclusive() {
            written.push(dir.join(format!("{stem}_welfare_split.csv")));
            write_welfare_split(create(&written[2])?, &rows)?;
        }
        if spec.kind == SweepKind::Q2Arbitrary {
            let path = dir.join(format!("{stem}_groups.csv"));
            write_groups(create(&path)?, &adoption_by_group(&rows, 10))?;
            written.push(path);
        }
        println!("{stem}: {} rows, {verified} verified", rows.len());
        for p in written {
            println!("  wrote {}", p.display());
        }
    }
    Ok(())
}
