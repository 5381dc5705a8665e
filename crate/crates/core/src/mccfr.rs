//! Outcome-sampling Monte-Carlo counterfactual regret minimization.
//!
//! Each iteration samples a single terminal history under an ε-greedy
//! version of the current regret-matching strategies, then walks the sampled
//! path backward applying importance-weighted counterfactual regrets to
//! every visited information set of either player, with optimistic (lazy)
//! average-strategy accumulation.

use crate::error::{Error, Result};
use crate::game::{ActionId, Game, History, InfoSetKey, Player};
use crate::strategy::{uniform, BehaviorStrategy, StrategyProfile};
use rand::RngCore;
use std::collections::BTreeMap;

/// Regret matching: probabilities proportional to positive cumulative
/// regrets; uniform when no regret is positive.
pub fn regret_matching(regrets: &[f64]) -> Vec<f64> {
    assert!(!regrets.is_empty(), "regret matching over an empty action set");
    let positive_sum: f64 = regrets.iter().map(|&r| r.max(0.0)).sum();
    if positive_sum > 0.0 {
        regrets.iter().map(|&r| r.max(0.0) / positive_sum).collect()
    } else {
        uniform(regrets.len())
    }
}

/// Per-information-set accumulators: cumulative regret r_I, cumulative
/// average-strategy weight s_I, the last-update iteration marker c_I, and
/// the owner's reach recorded at the last visit (for the lazy catch-up).
#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub regrets: Vec<f64>,
    pub strategy_sum: Vec<f64>,
    pub last_update: u64,
    pub last_reach: f64,
}

impl TableEntry {
    fn new(num_actions: usize) -> TableEntry {
        TableEntry {
            regrets: vec![0.0; num_actions],
            strategy_sum: vec![0.0; num_actions],
            last_update: 0,
            last_reach: 0.0,
        }
    }
}

/// Regret and average-strategy tables for both players.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RegretTables {
    entries: BTreeMap<InfoSetKey, TableEntry>,
    iteration: u64,
}

impl RegretTables {
    pub fn new() -> RegretTables {
        RegretTables::default()
    }

    /// Iterations applied so far (the t of the next update is this plus 1).
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn entry(&self, key: &InfoSetKey) -> Option<&TableEntry> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Current regret-matching strategy at a key (uniform before any data).
    pub fn current_probs(&self, key: &InfoSetKey, num_actions: usize) -> Vec<f64> {
        match self.entries.get(key) {
            Some(e) => regret_matching(&e.regrets),
            None => uniform(num_actions),
        }
    }
}

/// Outcome-sampling configuration.
#[derive(Clone, Copy, Debug)]
pub struct MccfrConfig {
    /// Exploration floor of the ε-greedy sampling scheme, in (0, 1].
    pub epsilon: f64,
}

impl MccfrConfig {
    pub fn new(epsilon: f64) -> Result<MccfrConfig> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        Ok(MccfrConfig { epsilon })
    }
}

impl Default for MccfrConfig {
    fn default() -> MccfrConfig {
        MccfrConfig { epsilon: 0.6 }
    }
}

/// How the restricted player's on-policy distribution is formed during an
/// episode, if anyone is restricted at all.
#[derive(Clone, Copy)]
pub(crate) enum Restriction<'a> {
    /// Plain MCCFR: both players use regret matching.
    None,
    /// The restricted player follows the fixed strategy for this episode.
    Fixed {
        player: Player,
        strategy: &'a BehaviorStrategy,
    },
    /// The restricted player mixes p * fixed + (1 - p) * regret matching at
    /// every information set.
    Mixed {
        player: Player,
        strategy: &'a BehaviorStrategy,
        p: f64,
    },
}

/// One sampled step of an episode.
#[derive(Clone, Debug)]
pub(crate) enum Step {
    Chance {
        prob: f64,
    },
    Decision {
        key: InfoSetKey,
        owner: Player,
        /// On-policy distribution σ at sample time.
        policy: Vec<f64>,
        sampled: usize,
        /// Owner's own reach π_i^σ to this point.
        reach_own: f64,
        /// Everyone else's reach π_{-i}^σ to this point (includes chance).
        reach_others: f64,
    },
}

/// A sampled terminal history with everything needed for the update walk.
#[derive(Clone, Debug)]
pub struct SampleRecord {
    pub(crate) steps: Vec<Step>,
    pub terminal: History,
    /// π^{σ'}(z): the product of every sampling probability, chance included.
    pub sample_prob: f64,
    /// Terminal utility for player one.
    pub utility_p1: f64,
    /// Player whose nodes played a fixed strategy this episode. Those nodes
    /// are chance nodes of the transformed game, so they take no table
    /// updates.
    pub(crate) fixed_player: Option<Player>,
}

impl SampleRecord {
    /// Number of decision points on the sampled path.
    pub fn num_decisions(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Decision { .. }))
            .count()
    }

    /// Histories touched by the episode (every prefix of the terminal).
    pub fn nodes_touched(&self) -> u64 {
        self.terminal.len() as u64 + 1
    }
}

/// ε-greedy mixture over the on-policy distribution.
fn explore(policy: &[f64], epsilon: f64) -> Vec<f64> {
    let u = 1.0 / policy.len() as f64;
    policy
        .iter()
        .map(|&p| epsilon * u + (1.0 - epsilon) * p)
        .collect()
}

/// Samples one episode from the root: chance from its true distribution,
/// decisions from the ε-greedy mixture over the on-policy strategy.
pub fn sample_episode<R: RngCore>(
    game: &dyn Game,
    tables: &RegretTables,
    config: &MccfrConfig,
    rng: &mut R,
) -> Result<SampleRecord> {
    sample_episode_restricted(game, tables, config, Restriction::None, rng)
}

pub(crate) fn sample_episode_restricted<R: RngCore>(
    game: &dyn Game,
    tables: &RegretTables,
    config: &MccfrConfig,
    restriction: Restriction<'_>,
    rng: &mut R,
) -> Result<SampleRecord> {
    let mut h = History::root();
    let mut steps = Vec::new();
    let mut sample_prob = 1.0;
    let mut reach = [1.0f64; 2];
    let mut reach_chance = 1.0;

    loop {
        let n = game.num_actions(&h);
        if n == 0 {
            break;
        }
        let actor = game.current_player(&h);
        if actor.is_chance() {
            let probs = game.chance_probs(&h);
            let outcome = crate::rng::sample_index(&probs, rng);
            sample_prob *= probs[outcome];
            reach_chance *= probs[outcome];
            steps.push(Step::Chance {
                prob: probs[outcome],
            });
            h.push(ActionId(outcome as u32));
            continue;
        }

        let key = game.infoset_key(&h, actor);
        let matched = tables.current_probs(&key, n);
        // In root-coin restriction the restricted player's nodes behave
        // like chance nodes of the transformed game: their actions are
        // sampled from the model itself, with no exploration floor.
        let (policy, sampling) = match restriction {
            Restriction::Fixed { player, strategy } if player == actor => {
                let fixed = strategy
                    .get(&key)
                    .ok_or_else(|| Error::IncompleteModel(key.clone()))?
                    .to_vec();
                (fixed.clone(), fixed)
            }
            Restriction::Mixed { player, strategy, p } if player == actor => {
                let fixed = strategy
                    .get(&key)
                    .ok_or_else(|| Error::IncompleteModel(key.clone()))?;
                let mixed: Vec<f64> = fixed
                    .iter()
                    .zip(&matched)
                    .map(|(&f, &m)| p * f + (1.0 - p) * m)
                    .collect();
                let sampling = explore(&mixed, config.epsilon);
                (mixed, sampling)
            }
            _ => {
                let sampling = explore(&matched, config.epsilon);
                (matched, sampling)
            }
        };
        let sampled = crate::rng::sample_index(&sampling, rng);
        steps.push(Step::Decision {
            key,
            owner: actor,
            reach_own: reach[actor.index()],
            reach_others: reach[actor.opponent().index()] * reach_chance,
            sampled,
            policy: policy.clone(),
        });
        sample_prob *= sampling[sampled];
        reach[actor.index()] *= policy[sampled];
        h.push(ActionId(sampled as u32));
    }

    let utility_p1 = game.utility(&h, Player::One);
    let fixed_player = match restriction {
        Restriction::Fixed { player, .. } => Some(player),
        _ => None,
    };
    Ok(SampleRecord {
        steps,
        terminal: h,
        sample_prob,
        utility_p1,
        fixed_player,
    })
}

/// Tail products π^σ(z[I], z) and π^σ(z[I]a, z) for every decision point of
/// a record, indexed in path order.
pub(crate) fn decision_tails(record: &SampleRecord) -> Vec<(f64, f64)> {
    let mut tails = vec![(0.0, 0.0); record.num_decisions()];
    let mut tail = 1.0;
    let mut idx = record.num_decisions();
    for step in record.steps.iter().rev() {
        match step {
            Step::Chance { prob } => tail *= prob,
            Step::Decision { policy, sampled, .. } => {
                idx -= 1;
                let tail_after = tail;
                tail *= policy[*sampled];
                tails[idx] = (tail, tail_after);
            }
        }
    }
    tails
}

/// The sampled counterfactual regret vector at one visited decision point.
pub(crate) fn regrets_at(record: &SampleRecord, idx: usize, tails: &[(f64, f64)]) -> Vec<f64> {
    let decision = record
        .steps
        .iter()
        .filter(|s| matches!(s, Step::Decision { .. }))
        .nth(idx)
        .expect("decision index in range");
    let Step::Decision {
        owner,
        policy,
        sampled,
        reach_others,
        ..
    } = decision
    else {
        unreachable!()
    };
    let utility = match owner {
        Player::One => record.utility_p1,
        _ => -record.utility_p1,
    };
    let weight = utility * reach_others / record.sample_prob;
    let (tail_keep, tail_after) = tails[idx];
    (0..policy.len())
        .map(|a| {
            if a == *sampled {
                weight * (tail_after - tail_keep)
            } else {
                -weight * tail_keep
            }
        })
        .collect()
}

/// Sampled counterfactual regret of one action at a visited information set:
/// w_I (π^σ(z[I]a, z) - π^σ(z[I], z)) on the sampled branch and
/// -w_I π^σ(z[I], z) off it. Errors if `key` was not visited.
pub fn sampled_regret(record: &SampleRecord, key: &InfoSetKey, action: ActionId) -> Result<f64> {
    let tails = decision_tails(record);
    let idx = record
        .steps
        .iter()
        .filter_map(|s| match s {
            Step::Decision { key: k, .. } => Some(k),
            _ => None,
        })
        .position(|k| k == key)
        .ok_or_else(|| {
            Error::GameMismatch(format!("information set {key} is not on the sampled path"))
        })?;
    let row = regrets_at(record, idx, &tails);
    row.get(action.index()).copied().ok_or_else(|| {
        Error::GameMismatch(format!("action {action} out of range at {key}"))
    })
}

/// Applies a sampled episode to the tables at iteration `t`: regrets via the
/// importance-weighted estimator, average strategy via optimistic averaging
/// with the (t - c_I) gap weight, then c_I <- t.
pub(crate) fn apply_episode(tables: &mut RegretTables, record: &SampleRecord, t: u64) {
    let tails = decision_tails(record);
    let mut idx = record.num_decisions();
    for step in record.steps.iter().rev() {
        let Step::Decision {
            key,
            owner,
            policy,
            reach_own,
            ..
        } = step
        else {
            continue;
        };
        idx -= 1;
        if record.fixed_player == Some(*owner) {
            continue;
        }
        let regrets = regrets_at(record, idx, &tails);
        let entry = tables
            .entries
            .entry(key.clone())
            .or_insert_with(|| TableEntry::new(policy.len()));
        let gap = t - entry.last_update;
        for a in 0..policy.len() {
            entry.regrets[a] += regrets[a];
            entry.strategy_sum[a] += gap as f64 * reach_own * policy[a];
        }
        entry.last_update = t;
        entry.last_reach = *reach_own;
    }
    tables.iteration = t;
}

/// One outcome-sampling iteration: sample an episode, update every visited
/// information set of both players. Returns the record for inspection.
pub fn mccfr_iteration<R: RngCore>(
    game: &dyn Game,
    tables: &mut RegretTables,
    config: &MccfrConfig,
    rng: &mut R,
) -> Result<SampleRecord> {
    let t = tables.iteration + 1;
    let record = sample_episode(game, tables, config, rng)?;
    apply_episode(tables, &record, t);
    Ok(record)
}

/// The average strategy profile: s_I normalized per information set, after a
/// lazy catch-up that extends each entry's last-visit weight through the
/// final iteration. All-zero rows read as uniform.
pub fn average_strategy(tables: &RegretTables) -> StrategyProfile {
    let mut out = StrategyProfile::uniform();
    let t = tables.iteration;
    for (key, entry) in &tables.entries {
        let gap = (t - entry.last_update) as f64;
        let policy = regret_matching(&entry.regrets);
        let caught_up: Vec<f64> = entry
            .strategy_sum
            .iter()
            .zip(&policy)
            .map(|(&s, &p)| s + gap * entry.last_reach * p)
            .collect();
        let total: f64 = caught_up.iter().sum();
        let probs = if total > 0.0 {
            caught_up.iter().map(|s| s / total).collect()
        } else {
            uniform(entry.strategy_sum.len())
        };
        out.strategy_mut(key.owner).insert(key.clone(), probs).unwrap();
    }
    out
}

/// An outcome-sampling MCCFR run bound to one game.
pub struct MccfrRun<'a> {
    game: &'a dyn Game,
    tables: RegretTables,
    config: MccfrConfig,
    rng: rand::rngs::StdRng,
    nodes_visited: u64,
}

impl<'a> MccfrRun<'a> {
    pub fn new(game: &'a dyn Game, config: MccfrConfig, seed: u64) -> MccfrRun<'a> {
        MccfrRun {
            game,
            tables: RegretTables::new(),
            config,
            rng: crate::rng::run_rng(seed),
            nodes_visited: 0,
        }
    }

    pub fn run(&mut self, iterations: u64) -> Result<()> {
        for _ in 0..iterations {
            let record =
                mccfr_iteration(self.game, &mut self.tables, &self.config, &mut self.rng)?;
            self.nodes_visited += record.nodes_touched();
        }
        Ok(())
    }

    pub fn tables(&self) -> &RegretTables {
        &self.tables
    }

    pub fn iteration(&self) -> u64 {
        self.tables.iteration()
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited
    }

    pub fn average_profile(&self) -> StrategyProfile {
        average_strategy(&self.tables)
    }
}
