//! Restricted Nash response: robust counter-strategies to a fixed opponent
//! model, computed exactly (CFR on a transformed game) or by outcome
//! sampling (MCRNR).
//!
//! The transformation adds a root chance node whose outcome is hidden from
//! the unrestricted player: with probability `p` play enters a copy of the
//! game where the restricted player's decision nodes are chance nodes
//! following the model strategy, and with probability `1 - p` the unmodified
//! game. The unrestricted player's information sets merge across the two
//! copies; the restricted player's sets in the unmodified copy are
//! unchanged.

use crate::error::{Error, Result};
use crate::exact::{best_response, cfr_iteration, CfrState};
use crate::game::{Game, History, InfoSetKey, Player};
use crate::mccfr::{
    apply_episode, average_strategy, sample_episode_restricted, MccfrConfig, RegretTables,
    Restriction,
};
use crate::probability::{enumerate_infosets, expected_value};
use crate::record::{Metric, RunRecord, RunRow};
use crate::strategy::{BehaviorStrategy, StrategyProfile};
use rand::Rng;
use std::time::Instant;

/// How the restricted player's play is blended with the model.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RestrictionMode {
    /// A hidden root coin sends the whole episode to the model with
    /// probability p (the game transformation above).
    RootCoin,
    /// Every information set mixes p * model + (1 - p) * regret matching
    /// (the fixed-confidence variant).
    PerInfosetMix,
}

/// The opponent model for one restricted player, with confidence p.
#[derive(Clone, Debug)]
pub struct RestrictionSpec {
    pub fixed: BehaviorStrategy,
    pub p: f64,
    pub mode: RestrictionMode,
}

impl RestrictionSpec {
    pub fn new(fixed: BehaviorStrategy, p: f64, mode: RestrictionMode) -> Result<RestrictionSpec> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!(
                "confidence p must lie in [0, 1], got {p}"
            )));
        }
        Ok(RestrictionSpec { fixed, p, mode })
    }

    /// Checks the model covers every information set of the restricted
    /// player.
    pub fn validate_coverage(&self, game: &dyn Game, restricted: Player) -> Result<()> {
        for (key, n) in enumerate_infosets(game, restricted) {
            match self.fixed.get(&key) {
                None => return Err(Error::IncompleteModel(key)),
                Some(probs) if probs.len() != n => {
                    return Err(Error::GameMismatch(format!(
                        "model at {key} has {} actions, game has {n}",
                        probs.len()
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// The transformed game G': a root coin, a restricted copy where the model
/// plays as chance, and the unmodified copy. Used by the exact solver.
pub struct RnrGame<'a> {
    base: &'a dyn Game,
    spec: &'a RestrictionSpec,
    restricted: Player,
    name: String,
}

/// Coin outcomes at the root of the transformed game.
const RESTRICTED_BRANCH: u32 = 0;
const FREE_BRANCH: u32 = 1;

/// Builds the transformed game. The model must cover the restricted player.
pub fn transform_rnr_game<'a>(
    game: &'a dyn Game,
    spec: &'a RestrictionSpec,
    restricted: Player,
) -> Result<RnrGame<'a>> {
    if spec.mode != RestrictionMode::RootCoin {
        return Err(Error::InvalidParams(
            "only the root-coin mode has a game transformation".into(),
        ));
    }
    spec.validate_coverage(game, restricted)?;
    Ok(RnrGame {
        base: game,
        spec,
        restricted,
        name: format!("rnr({}, p={}, r={})", game.name(), spec.p, restricted),
    })
}

impl RnrGame<'_> {
    fn split(&self, h: &History) -> (u32, History) {
        let coin = h.actions()[0].0;
        debug_assert!(coin == RESTRICTED_BRANCH || coin == FREE_BRANCH);
        (coin, History::from_actions(h.actions()[1..].to_vec()))
    }

    /// Whether the acting node belongs to the restricted player inside the
    /// restricted copy, i.e. is now a chance node following the model.
    fn is_model_node(&self, coin: u32, inner: &History) -> bool {
        coin == RESTRICTED_BRANCH
            && !self.base.is_terminal(inner)
            && self.base.current_player(inner) == self.restricted
    }
}

impl Game for RnrGame<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn num_actions(&self, h: &History) -> usize {
        if h.is_empty() {
            return 2;
        }
        let (_, inner) = self.split(h);
        self.base.num_actions(&inner)
    }

    fn current_player(&self, h: &History) -> Player {
        if h.is_empty() {
            return Player::Chance;
        }
        let (coin, inner) = self.split(h);
        if self.is_model_node(coin, &inner) {
            Player::Chance
        } else {
            self.base.current_player(&inner)
        }
    }

    fn chance_probs(&self, h: &History) -> Vec<f64> {
        if h.is_empty() {
            return vec![self.spec.p, 1.0 - self.spec.p];
        }
        let (coin, inner) = self.split(h);
        if self.is_model_node(coin, &inner) {
            let key = self.base.infoset_key(&inner, self.restricted);
            self.spec
                .fixed
                .get(&key)
                .expect("coverage validated at construction")
                .to_vec()
        } else {
            self.base.chance_probs(&inner)
        }
    }

    fn utility(&self, z: &History, player: Player) -> f64 {
        let (_, inner) = self.split(z);
        self.base.utility(&inner, player)
    }

    fn infoset_key(&self, h: &History, player: Player) -> InfoSetKey {
        // Base-game keys on the inner history: the unrestricted player
        // cannot see the coin, so its sets merge across the two copies, and
        // the restricted player's sets in the free copy keep their names.
        let (_, inner) = self.split(h);
        self.base.infoset_key(&inner, player)
    }

    fn max_abs_utility(&self) -> f64 {
        self.base.max_abs_utility()
    }
}

/// One sampled MCRNR iteration.
///
/// The episode is sampled as in MCCFR except for the restricted player: in
/// root-coin mode a hidden per-episode coin decides whether their actions
/// come from the model, and in mix mode their distribution at every set is
/// p * model + (1 - p) * regret matching. Updates mirror MCCFR at every
/// visited information set. With p = 0 no coin is drawn, so the iteration
/// consumes the random stream exactly like `mccfr_iteration`.
pub fn mcrnr_iteration<R: Rng>(
    game: &dyn Game,
    spec: &RestrictionSpec,
    restricted: Player,
    tables: &mut RegretTables,
    config: &MccfrConfig,
    rng: &mut R,
) -> Result<crate::mccfr::SampleRecord> {
    let t = tables.iteration() + 1;
    let restriction = match spec.mode {
        RestrictionMode::RootCoin => {
            if spec.p > 0.0 && rng.gen::<f64>() < spec.p {
                Restriction::Fixed {
                    player: restricted,
                    strategy: &spec.fixed,
                }
            } else {
                Restriction::None
            }
        }
        RestrictionMode::PerInfosetMix => {
            if spec.p > 0.0 {
                Restriction::Mixed {
                    player: restricted,
                    strategy: &spec.fixed,
                    p: spec.p,
                }
            } else {
                Restriction::None
            }
        }
    };
    let record = sample_episode_restricted(game, tables, config, restriction, rng)?;
    apply_episode(tables, &record, t);
    Ok(record)
}

/// A sampled MCRNR run with one restricted player.
pub struct McrnrRun<'a> {
    game: &'a dyn Game,
    spec: RestrictionSpec,
    restricted: Player,
    tables: RegretTables,
    config: MccfrConfig,
    rng: rand::rngs::StdRng,
    nodes_visited: u64,
}

impl<'a> McrnrRun<'a> {
    pub fn new(
        game: &'a dyn Game,
        spec: RestrictionSpec,
        restricted: Player,
        config: MccfrConfig,
        seed: u64,
    ) -> Result<McrnrRun<'a>> {
        if spec.p > 0.0 {
            spec.validate_coverage(game, restricted)?;
        }
        Ok(McrnrRun {
            game,
            spec,
            restricted,
            tables: RegretTables::new(),
            config,
            rng: crate::rng::run_rng(seed),
            nodes_visited: 0,
        })
    }

    pub fn run(&mut self, iterations: u64) -> Result<()> {
        for _ in 0..iterations {
            let record = mcrnr_iteration(
                self.game,
                &self.spec,
                self.restricted,
                &mut self.tables,
                &self.config,
                &mut self.rng,
            )?;
            self.nodes_visited += record.nodes_touched();
        }
        Ok(())
    }

    pub fn tables(&self) -> &RegretTables {
        &self.tables
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited
    }

    pub fn iteration(&self) -> u64 {
        self.tables.iteration()
    }

    /// The unrestricted player's average strategy, the run's product.
    pub fn unrestricted_average(&self) -> BehaviorStrategy {
        average_strategy(&self.tables)
            .strategy(self.restricted.opponent())
            .clone()
    }

    pub fn average_profile(&self) -> StrategyProfile {
        average_strategy(&self.tables)
    }
}

/// Exact RNR: vanilla CFR on the transformed game. Returns the unrestricted
/// player's average strategy.
pub fn solve_rnr_exact(
    game: &dyn Game,
    spec: &RestrictionSpec,
    restricted: Player,
    iterations: u64,
) -> Result<BehaviorStrategy> {
    let transformed = transform_rnr_game(game, spec, restricted)?;
    let mut state = CfrState::new();
    for _ in 0..iterations {
        cfr_iteration(&transformed, &mut state);
    }
    Ok(state
        .average_profile()
        .strategy(restricted.opponent())
        .clone())
}

/// One point of the exploitation/exploitability trade-off.
#[derive(Clone, Copy, Debug)]
pub struct TradeoffPoint {
    pub p: f64,
    pub exploitation: f64,
    pub exploitability: f64,
}

/// Settings for a trade-off sweep.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub p_values: Vec<f64>,
    pub iterations_per_run: u64,
    pub epsilon: f64,
    pub seed: u64,
}

impl SweepConfig {
    /// The eight confidence values used by the frontier experiments.
    pub fn default_p_values() -> Vec<f64> {
        vec![0.0, 0.5, 0.7, 0.8, 0.9, 0.93, 0.97, 1.0]
    }
}

/// Sweeps p over `config.p_values`: for each p, two MCRNR runs (restricted
/// player 1 and 2) assemble the counter-profile σ* from the unrestricted
/// averages. Exploitation is the payoff gain of σ* over the equilibrium
/// baseline against the model, summed over both seats; exploitability is
/// ε of σ*.
pub fn tradeoff_sweep(
    game: &dyn Game,
    model: &StrategyProfile,
    baseline: &StrategyProfile,
    config: &SweepConfig,
) -> Result<Vec<TradeoffPoint>> {
    let mccfr = MccfrConfig::new(config.epsilon)?;
    let mut out = Vec::with_capacity(config.p_values.len());
    for (pi, &p) in config.p_values.iter().enumerate() {
        let mut counter = StrategyProfile::uniform();
        for (ri, restricted) in Player::BOTH.into_iter().enumerate() {
            let spec = RestrictionSpec::new(
                model.strategy(restricted).clone(),
                p,
                RestrictionMode::RootCoin,
            )?;
            let seed = crate::rng::stream_rng(config.seed, (pi * 2 + ri) as u64)
                .gen::<u64>();
            let mut run = McrnrRun::new(game, spec, restricted, mccfr, seed)?;
            run.run(config.iterations_per_run)?;
            *counter.strategy_mut(restricted.opponent()) = run.unrestricted_average();
        }
        out.push(measure_tradeoff(game, model, baseline, &counter, p));
    }
    Ok(out)
}

fn measure_tradeoff(
    game: &dyn Game,
    model: &StrategyProfile,
    baseline: &StrategyProfile,
    counter: &StrategyProfile,
    p: f64,
) -> TradeoffPoint {
    let mut exploitation = 0.0;
    for player in Player::BOTH {
        let versus_model = |strategy: &BehaviorStrategy| {
            let profile = match player {
                Player::One => {
                    StrategyProfile::new(strategy.clone(), model.strategy(Player::Two).clone())
                }
                _ => StrategyProfile::new(model.strategy(Player::One).clone(), strategy.clone()),
            };
            expected_value(game, &profile, player)
        };
        exploitation +=
            versus_model(counter.strategy(player)) - versus_model(baseline.strategy(player));
    }
    let exploitability = crate::exact::exploitability(game, counter);
    TradeoffPoint {
        p,
        exploitation,
        exploitability,
    }
}

/// Settings for the exact-versus-sampled convergence comparison.
#[derive(Clone, Debug)]
pub struct CompareConfig {
    pub p: f64,
    pub rnr_iterations: u64,
    pub mcrnr_iterations: u64,
    pub checkpoints: usize,
    pub epsilon: f64,
    pub seed: u64,
}

/// Runs exact RNR and MCRNR side by side against the same model, recording
/// ε of the assembled unrestricted profile at matched checkpoints against
/// cumulative node visits. Returns (exact record, sampled record).
pub fn convergence_compare(
    game: &dyn Game,
    model: &StrategyProfile,
    config: &CompareConfig,
) -> Result<(RunRecord, RunRecord)> {
    let spec_for = |restricted: Player| {
        RestrictionSpec::new(
            model.strategy(restricted).clone(),
            config.p,
            RestrictionMode::RootCoin,
        )
    };

    // Exact side: two CFR runs on the transformed games, advanced together.
    let spec1 = spec_for(Player::One)?;
    let spec2 = spec_for(Player::Two)?;
    let exact1 = transform_rnr_game(game, &spec1, Player::One)?;
    let exact2 = transform_rnr_game(game, &spec2, Player::Two)?;
    let mut exact_states = (CfrState::new(), CfrState::new());
    let mut exact_record = RunRecord::new();
    let mut exact_nodes = 0;
    let started = Instant::now();
    let step = (config.rnr_iterations / config.checkpoints as u64).max(1);
    let mut done = 0;
    while done < config.rnr_iterations {
        let batch = step.min(config.rnr_iterations - done);
        for _ in 0..batch {
            exact_nodes += cfr_iteration(&exact1, &mut exact_states.0);
            exact_nodes += cfr_iteration(&exact2, &mut exact_states.1);
        }
        done += batch;
        // σ̄ = (σ̄_1 from the run restricting player two, σ̄_2 from the run
        // restricting player one).
        let assembled = StrategyProfile::new(
            exact_states.1.average_profile().strategy(Player::One).clone(),
            exact_states.0.average_profile().strategy(Player::Two).clone(),
        );
        exact_record.push(RunRow {
            iteration: done,
            metric: Metric::Exploitability,
            value: crate::exact::exploitability(game, &assembled),
            elapsed_ms: started.elapsed().as_millis() as u64,
            nodes_visited: exact_nodes,
        });
    }

    // Sampled side.
    let mccfr = MccfrConfig::new(config.epsilon)?;
    let mut run1 = McrnrRun::new(
        game,
        spec_for(Player::One)?,
        Player::One,
        mccfr,
        crate::rng::stream_rng(config.seed, 0).gen(),
    )?;
    let mut run2 = McrnrRun::new(
        game,
        spec_for(Player::Two)?,
        Player::Two,
        mccfr,
        crate::rng::stream_rng(config.seed, 1).gen(),
    )?;
    let mut sampled_record = RunRecord::new();
    let started = Instant::now();
    let step = (config.mcrnr_iterations / config.checkpoints as u64).max(1);
    let mut done = 0;
    while done < config.mcrnr_iterations {
        let batch = step.min(config.mcrnr_iterations - done);
        run1.run(batch)?;
        run2.run(batch)?;
        done += batch;
        let assembled = StrategyProfile::new(
            run2.unrestricted_average(),
            run1.unrestricted_average(),
        );
        sampled_record.push(RunRow {
            iteration: done,
            metric: Metric::Exploitability,
            value: crate::exact::exploitability(game, &assembled),
            elapsed_ms: started.elapsed().as_millis() as u64,
            nodes_visited: run1.nodes_visited() + run2.nodes_visited(),
        });
    }

    Ok((exact_record, sampled_record))
}

/// First cumulative node count at which a record's exploitability falls
/// within `ratio` of its final value.
pub fn nodes_to_reach_ratio(record: &RunRecord, ratio: f64) -> Option<u64> {
    let series = record.series(Metric::Exploitability);
    let last = series.last()?;
    let target = last.value * ratio;
    series
        .iter()
        .find(|row| row.value <= target)
        .map(|row| row.nodes_visited)
}

/// Exact best-response value of `responder` against the model — the p = 1
/// target for sanity checks.
pub fn best_response_value(game: &dyn Game, model: &StrategyProfile, responder: Player) -> f64 {
    best_response(game, model.strategy(responder.opponent()), responder).value
}
