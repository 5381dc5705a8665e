//! Subcommand implementations.

use crate::output::{out_dir, render_run_csv, run_stem, save_strategy, write_file, RUN_CSV_HEADER};
use crate::{CliError, CompareArgs, EvalArgs, SolveArgs, SweepArgs};
use std::io::Write;
use std::time::Instant;
use zerosum_core::exact::{dominated_error, exploitability, kuhn_squared_error, CfrRun};
use zerosum_core::game::{Game, Player};
use zerosum_core::mccfr::{MccfrConfig, MccfrRun};
use zerosum_core::mcts::{MctsConfig, MctsRun};
use zerosum_core::probability::expected_value;
use zerosum_core::record::{Metric, RunRecord, RunRow};
use zerosum_core::rnr::{
    convergence_compare, tradeoff_sweep, CompareConfig, McrnrRun, RestrictionMode,
    RestrictionSpec, RnrGame, SweepConfig,
};
use zerosum_core::strategy::{
    complete_profile, load_profile, validate_profile, StrategyProfile,
};

fn parse_game(spec: &str) -> Result<Box<dyn Game>, CliError> {
    zerosum_core::games::from_spec(spec).map_err(|e| CliError::Args(e.to_string()))
}

fn parse_restricted(raw: u8) -> Result<Player, CliError> {
    match raw {
        1 => Ok(Player::One),
        2 => Ok(Player::Two),
        other => Err(CliError::Args(format!(
            "restricted player must be 1 or 2, got {other}"
        ))),
    }
}

fn parse_mode(raw: &str) -> Result<RestrictionMode, CliError> {
    match raw {
        "root-coin" => Ok(RestrictionMode::RootCoin),
        "mix" => Ok(RestrictionMode::PerInfosetMix),
        other => Err(CliError::Args(format!(
            "mode must be root-coin or mix, got {other:?}"
        ))),
    }
}

fn load_model(game: &dyn Game, path: &std::path::Path) -> Result<StrategyProfile, CliError> {
    let profile = load_profile(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    validate_profile(game, &profile).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(profile)
}

/// Whether the Kuhn-specific metrics apply (Kuhn itself or its OCP(3) alias).
fn kuhn_metrics_apply(game: &dyn Game) -> bool {
    game.name() == "kuhn" || game.name() == "ocp:3"
}

/// One solver bound to a game, stepped in batches between checkpoints.
enum Solver<'a> {
    Cfr(CfrRun<'a>),
    Mccfr(MccfrRun<'a>),
    Mcts(MctsRun<'a>),
    Rnr(CfrRun<'a>),
    Mcrnr(McrnrRun<'a>),
}

impl Solver<'_> {
    fn step(&mut self, iterations: u64) -> Result<(), CliError> {
        match self {
            Solver::Cfr(run) | Solver::Rnr(run) => {
                run.run(iterations);
                Ok(())
            }
            Solver::Mccfr(run) => run.run(iterations).map_err(CliError::from),
            Solver::Mcts(run) => {
                run.run(iterations);
                Ok(())
            }
            Solver::Mcrnr(run) => run.run(iterations).map_err(CliError::from),
        }
    }

    fn nodes_visited(&self) -> u64 {
        match self {
            Solver::Cfr(run) | Solver::Rnr(run) => run.nodes_visited(),
            Solver::Mccfr(run) => run.nodes_visited(),
            Solver::Mcts(run) => run.nodes_visited(),
            Solver::Mcrnr(run) => run.nodes_visited(),
        }
    }

    fn profile(&self) -> StrategyProfile {
        match self {
            Solver::Cfr(run) | Solver::Rnr(run) => run.average_profile(),
            Solver::Mccfr(run) => run.average_profile(),
            Solver::Mcts(run) => run.visit_profile(),
            Solver::Mcrnr(run) => run.average_profile(),
        }
    }
}

pub fn solve(args: SolveArgs) -> Result<(), CliError> {
    if args.parallel_seeds == 0 {
        return Err(CliError::Args("parallel-seeds must be at least 1".into()));
    }
    if args.parallel_seeds > 1 && (args.out_csv.is_some() || args.out_strategy.is_some()) {
        return Err(CliError::Args(
            "explicit output paths clash across parallel seeds; use --out-dir".into(),
        ));
    }
    if args.parallel_seeds == 1 {
        return solve_one(&args, args.seed);
    }
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for seed in args.seed..args.seed + args.parallel_seeds {
            let args = &args;
            handles.push(scope.spawn(move || solve_one(args, seed)));
        }
        for handle in handles {
            handle.join().expect("solver thread panicked")?;
        }
        Ok(())
    })
}

fn solve_one(args: &SolveArgs, seed: u64) -> Result<(), CliError> {
    let game = parse_game(&args.game)?;
    let game = game.as_ref();
    let mccfr_config =
        MccfrConfig::new(args.epsilon).map_err(|e| CliError::Args(e.to_string()))?;

    // rnr/mcrnr need a model; with p = 0 the restriction never fires and a
    // uniform model stands in.
    let needs_model = matches!(args.algo.as_str(), "rnr" | "mcrnr");
    let model: Option<StrategyProfile> = if needs_model {
        match &args.sigma_fix {
            Some(path) => Some(load_model(game, path)?),
            None if args.p == 0.0 => {
                Some(complete_profile(game, &StrategyProfile::uniform()))
            }
            None => {
                return Err(CliError::Args(
                    "rnr/mcrnr with p > 0 requires --sigma-fix".into(),
                ))
            }
        }
    } else {
        None
    };
    let restricted = parse_restricted(args.restricted)?;
    let mode = parse_mode(&args.mode)?;

    let spec = |model: &StrategyProfile| {
        RestrictionSpec::new(model.strategy(restricted).clone(), args.p, mode)
            .map_err(|e| CliError::Args(e.to_string()))
    };

    // The transformed game must outlive the solver that runs on it.
    let rnr_game: Option<RnrGame<'_>>;
    let rnr_spec: Option<RestrictionSpec>;
    let mut solver = match args.algo.as_str() {
        "cfr" => Solver::Cfr(CfrRun::new(game)),
        "mccfr" => Solver::Mccfr(MccfrRun::new(game, mccfr_config, seed)),
        "mcts" => Solver::Mcts(MctsRun::new(
            game,
            MctsConfig {
                exploration: args.exploration,
            },
            seed,
        )),
        "rnr" => {
            if mode != RestrictionMode::RootCoin {
                return Err(CliError::Args(
                    "exact rnr supports only the root-coin mode".into(),
                ));
            }
            rnr_spec = Some(spec(model.as_ref().unwrap())?);
            rnr_game = Some(
                zerosum_core::rnr::transform_rnr_game(game, rnr_spec.as_ref().unwrap(), restricted)
                    .map_err(|e| CliError::Validation(e.to_string()))?,
            );
            Solver::Rnr(CfrRun::new(rnr_game.as_ref().unwrap()))
        }
        "mcrnr" => Solver::Mcrnr(
            McrnrRun::new(
                game,
                spec(model.as_ref().unwrap())?,
                restricted,
                mccfr_config,
                seed,
            )
            .map_err(|e| CliError::Validation(e.to_string()))?,
        ),
        other => return Err(CliError::Args(format!("unknown algorithm {other:?}"))),
    };

    let started = Instant::now();
    let mut record = RunRecord::new();
    let batch = if args.eval_every == 0 {
        args.iters
    } else {
        args.eval_every
    };
    let mut done = 0;
    while done < args.iters {
        let step = batch.min(args.iters - done);
        solver.step(step)?;
        done += step;
        let profile = solver.profile();
        let elapsed_ms = started.elapsed().as_millis() as u64;
        let nodes = solver.nodes_visited();
        record.push(RunRow {
            iteration: done,
            metric: Metric::Exploitability,
            value: exploitability(game, &profile),
            elapsed_ms,
            nodes_visited: nodes,
        });
        if kuhn_metrics_apply(game) {
            record.push(RunRow {
                iteration: done,
                metric: Metric::SquaredError,
                value: kuhn_squared_error(&profile)
                    .map_err(|e| CliError::Validation(e.to_string()))?,
                elapsed_ms,
                nodes_visited: nodes,
            });
            record.push(RunRow {
                iteration: done,
                metric: Metric::DominatedError,
                value: dominated_error(&profile)
                    .map_err(|e| CliError::Validation(e.to_string()))?,
                elapsed_ms,
                nodes_visited: nodes,
            });
        }
    }

    let dir = out_dir(&args.out_dir);
    let stem = run_stem(&args.game, &args.algo, seed);
    let csv_path = args.out_csv.clone().unwrap_or_else(|| dir.join(format!("{stem}.csv")));
    let strategy_path = args
        .out_strategy
        .clone()
        .unwrap_or_else(|| dir.join(format!("{stem}.strategy.tsv")));

    write_file(&csv_path, &render_run_csv(&record, seed, &args.game, &args.algo))?;
    save_strategy(&strategy_path, &complete_profile(game, &solver.profile()))?;
    println!(
        "solve {} {} seed={seed}: {} iterations, {} nodes, csv={}, strategy={}",
        args.game,
        args.algo,
        done,
        solver.nodes_visited(),
        csv_path.display(),
        strategy_path.display()
    );
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<(), CliError> {
    let game = parse_game(&args.game)?;
    let game = game.as_ref();
    let p1 = load_model(game, &args.p1)?;
    let p2 = load_model(game, &args.p2)?;
    let profile = StrategyProfile::new(
        p1.strategy(Player::One).clone(),
        p2.strategy(Player::Two).clone(),
    );

    let started = Instant::now();
    let mut rows: Vec<(Metric, f64)> = Vec::new();
    for metric in args.metrics.split(',') {
        match metric.trim() {
            "exploitability" => {
                rows.push((Metric::Exploitability, exploitability(game, &profile)));
            }
            "ev" | "ev_p1" => {
                rows.push((Metric::EvPlayerOne, expected_value(game, &profile, Player::One)));
            }
            "sqre" => {
                if !kuhn_metrics_apply(game) {
                    return Err(CliError::Validation(format!(
                        "sqre applies only to kuhn/ocp:3, not {}",
                        game.name()
                    )));
                }
                rows.push((
                    Metric::SquaredError,
                    kuhn_squared_error(&profile).map_err(|e| CliError::Validation(e.to_string()))?,
                ));
            }
            "dom_e" => {
                if !kuhn_metrics_apply(game) {
                    return Err(CliError::Validation(format!(
                        "dom_e applies only to kuhn/ocp:3, not {}",
                        game.name()
                    )));
                }
                rows.push((
                    Metric::DominatedError,
                    dominated_error(&profile).map_err(|e| CliError::Validation(e.to_string()))?,
                ));
            }
            other => return Err(CliError::Args(format!("unknown metric {other:?}"))),
        }
    }

    let mut record = RunRecord::new();
    let elapsed_ms = started.elapsed().as_millis() as u64;
    for &(metric, value) in &rows {
        println!("{metric} = {value:.9}");
        record.push(RunRow {
            iteration: 0,
            metric,
            value,
            elapsed_ms,
            nodes_visited: 0,
        });
    }
    if let Some(path) = &args.out_csv {
        write_file(path, &render_run_csv(&record, 0, &args.game, "eval"))?;
    } else {
        let mut buf = Vec::new();
        buf.extend_from_slice(render_run_csv(&record, 0, &args.game, "eval").as_slice());
        print!("{}", String::from_utf8_lossy(&buf));
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| CliError::Args(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let game = parse_game(&args.game)?;
    let game = game.as_ref();
    let model = load_model(game, &args.sigma_fix)?;
    let p_values: Vec<f64> = match &args.p_list {
        Some(raw) => parse_list(raw, "p")?,
        None => SweepConfig::default_p_values(),
    };
    if p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(CliError::Args("p values must lie in [0, 1]".into()));
    }
    let seeds: Vec<u64> = parse_list(&args.seeds, "seed")?;

    // One shared equilibrium baseline for every point of the sweep.
    let baseline = match &args.ne {
        Some(path) => {
            println!("baseline: loaded from {}", path.display());
            load_model(game, path)?
        }
        None => {
            let iters = args.ne_iters.unwrap_or(args.iters);
            let seed = seeds[0] ^ 0x5eed_ba5e;
            let mut run = MccfrRun::new(
                game,
                MccfrConfig::new(args.epsilon).map_err(|e| CliError::Args(e.to_string()))?,
                seed,
            );
            run.run(iters).map_err(CliError::from)?;
            println!("baseline: computed by mccfr, iters={iters}, seed={seed}");
            complete_profile(game, &run.average_profile())
        }
    };

    let mut csv = Vec::new();
    writeln!(csv, "p,seed,exploitation,exploitability,iterations,game").unwrap();
    for &seed in &seeds {
        let config = SweepConfig {
            p_values: p_values.clone(),
            iterations_per_run: args.iters,
            epsilon: args.epsilon,
            seed,
        };
        let points =
            tradeoff_sweep(game, &model, &baseline, &config).map_err(CliError::from)?;
        for point in &points {
            writeln!(
                csv,
                "{},{},{:.9e},{:.9e},{},{}",
                point.p, seed, point.exploitation, point.exploitability, args.iters, args.game
            )
            .unwrap();
            println!(
                "p={:<5} seed={seed} exploitation={:+.4} exploitability={:.4}",
                point.p, point.exploitation, point.exploitability
            );
        }
    }

    let path = args.out_csv.clone().unwrap_or_else(|| {
        out_dir(&args.out_dir).join(format!(
            "{}_sweep_seed{}.csv",
            args.game.replace([':', 'x'], "-"),
            seeds[0]
        ))
    });
    write_file(&path, &csv)?;
    println!("sweep csv: {}", path.display());
    Ok(())
}

pub fn compare(args: CompareArgs) -> Result<(), CliError> {
    let game = parse_game(&args.game)?;
    let game = game.as_ref();
    let model = load_model(game, &args.sigma_fix)?;
    let config = CompareConfig {
        p: args.p,
        rnr_iterations: args.rnr_iters,
        mcrnr_iterations: args.mcrnr_iters,
        checkpoints: args.checkpoints,
        epsilon: args.epsilon,
        seed: args.seed,
    };
    let (exact, sampled) =
        convergence_compare(game, &model, &config).map_err(CliError::from)?;

    let dir = out_dir(&args.out_dir);
    let stem = args.game.replace([':', 'x'], "-");
    let rnr_path = args
        .out_rnr
        .clone()
        .unwrap_or_else(|| dir.join(format!("{stem}_rnr_seed{}.csv", args.seed)));
    let mcrnr_path = args
        .out_mcrnr
        .clone()
        .unwrap_or_else(|| dir.join(format!("{stem}_mcrnr_seed{}.csv", args.seed)));
    write_file(&rnr_path, &render_run_csv(&exact, args.seed, &args.game, "rnr"))?;
    write_file(
        &mcrnr_path,
        &render_run_csv(&sampled, args.seed, &args.game, "mcrnr"),
    )?;

    let last = |record: &RunRecord| {
        record
            .series(Metric::Exploitability)
            .last()
            .map(|r| (r.value, r.nodes_visited))
            .unwrap_or((f64::NAN, 0))
    };
    let (ev, en) = last(&exact);
    let (sv, sn) = last(&sampled);
    println!("rnr:   final exploitability {ev:.5} after {en} nodes -> {}", rnr_path.display());
    println!("mcrnr: final exploitability {sv:.5} after {sn} nodes -> {}", mcrnr_path.display());
    debug_assert_eq!(RUN_CSV_HEADER.split(',').count(), 8);
    Ok(())
}
