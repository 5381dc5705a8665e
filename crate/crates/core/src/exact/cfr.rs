//! Vanilla counterfactual regret minimization by full-tree traversal with
//! simultaneous updates for both players.

use crate::game::{ActionId, Game, History, InfoSetKey, Player};
use crate::mccfr::regret_matching;
use crate::strategy::StrategyProfile;
use std::collections::BTreeMap;

/// Cumulative regret and average-strategy tables for both players.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CfrState {
    regrets: BTreeMap<InfoSetKey, Vec<f64>>,
    strategy_sums: BTreeMap<InfoSetKey, Vec<f64>>,
    iteration: u64,
}

impl CfrState {
    pub fn new() -> CfrState {
        CfrState::default()
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// The regret-matching strategy at a key (uniform before any update).
    pub fn current_probs(&self, key: &InfoSetKey, num_actions: usize) -> Vec<f64> {
        match self.regrets.get(key) {
            Some(r) => regret_matching(r),
            None => crate::strategy::uniform(num_actions),
        }
    }

    /// Normalized average strategy profile accumulated so far.
    pub fn average_profile(&self) -> StrategyProfile {
        let mut out = StrategyProfile::uniform();
        for (key, sums) in &self.strategy_sums {
            let total: f64 = sums.iter().sum();
            let probs = if total > 0.0 {
                sums.iter().map(|s| s / total).collect()
            } else {
                crate::strategy::uniform(sums.len())
            };
            out.strategy_mut(key.owner).insert(key.clone(), probs).unwrap();
        }
        out
    }
}

/// How the traversal looks up the acting policy.
trait PolicySource {
    fn probs(&self, key: &InfoSetKey, num_actions: usize) -> Vec<f64>;
}

impl PolicySource for CfrState {
    fn probs(&self, key: &InfoSetKey, num_actions: usize) -> Vec<f64> {
        self.current_probs(key, num_actions)
    }
}

impl PolicySource for StrategyProfile {
    fn probs(&self, key: &InfoSetKey, num_actions: usize) -> Vec<f64> {
        self.strategy(key.owner).probs_or_uniform(key, num_actions)
    }
}

/// What one full traversal produces.
struct Pass {
    /// Immediate counterfactual regrets accumulated this pass.
    regrets: BTreeMap<InfoSetKey, Vec<f64>>,
    /// Reach-weighted current strategy, for average-strategy accumulation.
    strategy_weights: BTreeMap<InfoSetKey, Vec<f64>>,
    nodes: u64,
}

struct Traversal<'a, P: PolicySource> {
    game: &'a dyn Game,
    policy: &'a P,
    pass: Pass,
}

impl<P: PolicySource> Traversal<'_, P> {
    /// Walks the subtree at `h`, returning the expected utility for player
    /// one under the current policy. `reach_1`/`reach_2` are the players'
    /// own contributions to reaching `h`; `reach_chance` is chance's.
    fn walk(&mut self, h: &mut History, reach_1: f64, reach_2: f64, reach_chance: f64) -> f64 {
        self.pass.nodes += 1;
        let n = self.game.num_actions(h);
        if n == 0 {
            return self.game.utility(h, Player::One);
        }
        let actor = self.game.current_player(h);
        if actor.is_chance() {
            let probs = self.game.chance_probs(h);
            let mut value = 0.0;
            for (a, &p) in probs.iter().enumerate() {
                h.push(ActionId(a as u32));
                value += p * self.walk(h, reach_1, reach_2, reach_chance * p);
                h.pop();
            }
            return value;
        }

        let key = self.game.infoset_key(h, actor);
        let probs = self.policy.probs(&key, n);
        let mut action_values = vec![0.0; n];
        let mut value = 0.0;
        for (a, &p) in probs.iter().enumerate() {
            h.push(ActionId(a as u32));
            let (r1, r2) = match actor {
                Player::One => (reach_1 * p, reach_2),
                _ => (reach_1, reach_2 * p),
            };
            action_values[a] = self.walk(h, r1, r2, reach_chance);
            h.pop();
            value += p * action_values[a];
        }

        // Immediate counterfactual regret for the actor, and reach-weighted
        // strategy mass for the average.
        let (own_reach, other_reach, sign) = match actor {
            Player::One => (reach_1, reach_2 * reach_chance, 1.0),
            _ => (reach_2, reach_1 * reach_chance, -1.0),
        };
        let regret_row = self
            .pass
            .regrets
            .entry(key.clone())
            .or_insert_with(|| vec![0.0; n]);
        for a in 0..n {
            regret_row[a] += other_reach * sign * (action_values[a] - value);
        }
        let weight_row = self
            .pass
            .strategy_weights
            .entry(key)
            .or_insert_with(|| vec![0.0; n]);
        for a in 0..n {
            weight_row[a] += own_reach * probs[a];
        }

        value
    }
}

fn traverse_with<P: PolicySource>(game: &dyn Game, policy: &P) -> Pass {
    let mut t = Traversal {
        game,
        policy,
        pass: Pass {
            regrets: BTreeMap::new(),
            strategy_weights: BTreeMap::new(),
            nodes: 0,
        },
    };
    t.walk(&mut History::root(), 1.0, 1.0, 1.0);
    t.pass
}

/// Immediate counterfactual regrets of every information set under a fixed
/// profile: r(I, a) = v(σ_{I→a}, I) - v(σ, I).
pub fn immediate_regrets(
    game: &dyn Game,
    profile: &StrategyProfile,
) -> BTreeMap<InfoSetKey, Vec<f64>> {
    traverse_with(game, profile).regrets
}

/// One full CFR iteration: both players' regrets accumulate from the same
/// pre-update strategies, then the averages take this iteration's
/// reach-weighted strategy mass. Returns the number of histories touched.
pub fn cfr_iteration(game: &dyn Game, state: &mut CfrState) -> u64 {
    let pass = traverse_with(game, &*state);
    for (key, row) in pass.regrets {
        let entry = state
            .regrets
            .entry(key)
            .or_insert_with(|| vec![0.0; row.len()]);
        for (slot, delta) in entry.iter_mut().zip(row) {
            *slot += delta;
        }
    }
    for (key, row) in pass.strategy_weights {
        let entry = state
            .strategy_sums
            .entry(key)
            .or_insert_with(|| vec![0.0; row.len()]);
        for (slot, delta) in entry.iter_mut().zip(row) {
            *slot += delta;
        }
    }
    state.iteration += 1;
    pass.nodes
}

/// A vanilla CFR run bound to one game, tracking node-visit cost.
pub struct CfrRun<'a> {
    game: &'a dyn Game,
    state: CfrState,
    nodes_visited: u64,
}

impl<'a> CfrRun<'a> {
    pub fn new(game: &'a dyn Game) -> CfrRun<'a> {
        CfrRun {
            game,
            state: CfrState::new(),
            nodes_visited: 0,
        }
    }

    pub fn run(&mut self, iterations: u64) {
        for _ in 0..iterations {
            self.nodes_visited += cfr_iteration(self.game, &mut self.state);
        }
    }

    pub fn state(&self) -> &CfrState {
        &self.state
    }

    pub fn iteration(&self) -> u64 {
        self.state.iteration()
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited
    }

    pub fn average_profile(&self) -> StrategyProfile {
        self.state.average_profile()
    }
}
