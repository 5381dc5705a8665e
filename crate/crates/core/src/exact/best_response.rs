//! Exact best response by bottom-up traversal over information sets.

use crate::game::{ActionId, Game, History, InfoSetKey, Player};
use crate::strategy::{BehaviorStrategy, StrategyProfile};
use std::collections::{BTreeMap, HashMap};

/// The value b_i and a pure best-response strategy achieving it.
#[derive(Clone, Debug)]
pub struct BestResponseResult {
    pub value: f64,
    pub strategy: BehaviorStrategy,
}

/// Computes the exact best-response value b_i against `opponent` and one
/// pure strategy attaining it.
///
/// Action values at each of the responder's information sets aggregate
/// continuation values over member histories weighted by opponent-and-chance
/// reach; ties break toward the lowest action id.
pub fn best_response(
    game: &dyn Game,
    opponent: &BehaviorStrategy,
    responder: Player,
) -> BestResponseResult {
    debug_assert!(!responder.is_chance());
    let opponent_profile =
        StrategyProfile::uniform().with_strategy(responder.opponent(), opponent.clone());

    // Group the responder's histories by information set, with the
    // opponent-and-chance reach of each member.
    let mut members: BTreeMap<InfoSetKey, Vec<(History, f64)>> = BTreeMap::new();
    collect_members(
        game,
        &opponent_profile,
        responder,
        &mut History::root(),
        1.0,
        &mut members,
    );

    let mut solver = Solver {
        game,
        opponent: &opponent_profile,
        responder,
        members: &members,
        values: HashMap::new(),
        choices: HashMap::new(),
    };

    let mut strategy = BehaviorStrategy::new();
    for (key, histories) in &members {
        let n = game.num_actions(&histories[0].0);
        let best = solver.best_action(key);
        let mut probs = vec![0.0; n];
        probs[best.index()] = 1.0;
        strategy.insert(key.clone(), probs).unwrap();
    }

    let value = solver.history_value(&History::root());
    BestResponseResult { value, strategy }
}

/// ε_σ = b_1(σ_2) + b_2(σ_1); non-negative for zero-sum games and zero
/// exactly at a Nash equilibrium.
pub fn exploitability(game: &dyn Game, profile: &StrategyProfile) -> f64 {
    let br1 = best_response(game, profile.strategy(Player::Two), Player::One);
    let br2 = best_response(game, profile.strategy(Player::One), Player::Two);
    br1.value + br2.value
}

fn collect_members(
    game: &dyn Game,
    opponent: &StrategyProfile,
    responder: Player,
    h: &mut History,
    counterfactual_reach: f64,
    members: &mut BTreeMap<InfoSetKey, Vec<(History, f64)>>,
) {
    let n = game.num_actions(h);
    if n == 0 {
        return;
    }
    let actor = game.current_player(h);
    if actor == responder {
        members
            .entry(game.infoset_key(h, responder))
            .or_default()
            .push((h.clone(), counterfactual_reach));
        for a in 0..n {
            h.push(ActionId(a as u32));
            collect_members(game, opponent, responder, h, counterfactual_reach, members);
            h.pop();
        }
    } else {
        let probs = if actor.is_chance() {
            game.chance_probs(h)
        } else {
            opponent.action_probs(game, h)
        };
        for (a, &p) in probs.iter().enumerate() {
            h.push(ActionId(a as u32));
            collect_members(game, opponent, responder, h, counterfactual_reach * p, members);
            h.pop();
        }
    }
}

struct Solver<'a> {
    game: &'a dyn Game,
    opponent: &'a StrategyProfile,
    responder: Player,
    members: &'a BTreeMap<InfoSetKey, Vec<(History, f64)>>,
    values: HashMap<History, f64>,
    choices: HashMap<InfoSetKey, ActionId>,
}

impl Solver<'_> {
    /// Expected value for the responder from `h` when the responder plays
    /// the best response and the opponent plays its fixed strategy.
    fn history_value(&mut self, h: &History) -> f64 {
        if let Some(&v) = self.values.get(h) {
            return v;
        }
        let n = self.game.num_actions(h);
        let value = if n == 0 {
            self.game.utility(h, self.responder)
        } else {
            let actor = self.game.current_player(h);
            if actor == self.responder {
                let key = self.game.infoset_key(h, self.responder);
                let best = self.best_action(&key);
                self.history_value(&h.child(best))
            } else {
                let probs = if actor.is_chance() {
                    self.game.chance_probs(h)
                } else {
                    self.opponent.action_probs(self.game, h)
                };
                probs
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(a, &p)| p * self.history_value(&h.child(ActionId(a as u32))))
                    .sum()
            }
        };
        self.values.insert(h.clone(), value);
        value
    }

    /// Argmax action at an information set, aggregated over members.
    fn best_action(&mut self, key: &InfoSetKey) -> ActionId {
        if let Some(&a) = self.choices.get(key) {
            return a;
        }
        let histories = &self.members[key];
        let n = self.game.num_actions(&histories[0].0);
        let mut best = ActionId(0);
        let mut best_value = f64::NEG_INFINITY;
        for a in 0..n {
            let action = ActionId(a as u32);
            let mut value = 0.0;
            for (h, reach) in histories {
                if *reach > 0.0 {
                    value += reach * self.history_value(&h.child(action));
                }
            }
            if value > best_value {
                best_value = value;
                best = action;
            }
        }
        self.choices.insert(key.clone(), best);
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::kuhn::KuhnEquilibrium;
    use crate::games::{bluff::bluff, one_card::kuhn};
    use crate::probability::expected_value;
    use rand::SeedableRng;

    #[test]
    fn equilibrium_is_unimprovable() {
        let g = kuhn();
        for gamma in [0.0, 0.5, 1.0] {
            let profile = KuhnEquilibrium::new(gamma).profile();
            let b1 = best_response(&g, profile.strategy(Player::Two), Player::One);
            assert!((b1.value - (-1.0 / 18.0)).abs() < 1e-12, "gamma={gamma}");
            assert!(exploitability(&g, &profile).abs() < 1e-12, "gamma={gamma}");
        }
    }

    #[test]
    fn response_value_dominates_arbitrary_strategies() {
        let g = kuhn();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let opponent = StrategyProfile::random(&g, &mut rng)
            .strategy(Player::Two)
            .clone();
        let br = best_response(&g, &opponent, Player::One);
        for _ in 0..50 {
            let candidate = StrategyProfile::random(&g, &mut rng)
                .strategy(Player::One)
                .clone();
            let profile = StrategyProfile::new(candidate, opponent.clone());
            let value = expected_value(&g, &profile, Player::One);
            assert!(br.value >= value - 1e-9);
        }
        // The returned pure strategy attains the reported value.
        let profile = StrategyProfile::new(br.strategy.clone(), opponent);
        let attained = expected_value(&g, &profile, Player::One);
        assert!((attained - br.value).abs() < 1e-9);
    }

    /// Independent oracle: enumerate every pure strategy of the responder.
    fn brute_force_best_response(game: &dyn Game, opponent: &BehaviorStrategy, responder: Player) -> f64 {
        let infosets = crate::probability::enumerate_infosets(game, responder);
        let keys: Vec<_> = infosets.keys().cloned().collect();
        let sizes: Vec<usize> = keys.iter().map(|k| infosets[k]).collect();
        let mut assignment = vec![0usize; keys.len()];
        let mut best = f64::NEG_INFINITY;
        loop {
            let mut pure = BehaviorStrategy::new();
            for (i, key) in keys.iter().enumerate() {
                let mut probs = vec![0.0; sizes[i]];
                probs[assignment[i]] = 1.0;
                pure.insert(key.clone(), probs).unwrap();
            }
            let profile = match responder {
                Player::One => StrategyProfile::new(pure, opponent.clone()),
                _ => StrategyProfile::new(opponent.clone(), pure),
            };
            best = best.max(expected_value(game, &profile, responder));

            // Advance the mixed-radix counter.
            let mut i = 0;
            loop {
                if i == keys.len() {
                    return best;
                }
                assignment[i] += 1;
                if assignment[i] < sizes[i] {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn kuhn_uniform_exploitability_frozen() {
        // b1 = 1/2 and b2 = 5/12 against uniform play, so epsilon = 11/12.
        let g = kuhn();
        let uniform = StrategyProfile::uniform();
        let b1 = best_response(&g, uniform.strategy(Player::Two), Player::One);
        let b2 = best_response(&g, uniform.strategy(Player::One), Player::Two);
        assert!((b1.value - 0.5).abs() < 1e-12);
        assert!((b2.value - 5.0 / 12.0).abs() < 1e-12);
        let eps = exploitability(&g, &uniform);
        assert!(eps > 0.0);
        assert!((eps - 11.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn matches_pure_enumeration_on_bluff() {
        let g = bluff(2).unwrap();
        let uniform = BehaviorStrategy::new();
        for responder in Player::BOTH {
            let br = best_response(&g, &uniform, responder);
            let oracle = brute_force_best_response(&g, &uniform, responder);
            assert!(
                (br.value - oracle).abs() < 1e-9,
                "responder {responder}: {} vs oracle {oracle}",
                br.value
            );
        }
    }
}
