//! Reach probabilities, tail probabilities, and exact expected payoff — the
//! probability calculus every solver builds on.

use crate::error::Result;
use crate::game::{Game, History, InfoSetKey, Player};
use crate::strategy::StrategyProfile;
use std::collections::BTreeMap;

/// A probability factored into the two players' and chance's contributions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReachProbs {
    pub p1: f64,
    pub p2: f64,
    pub chance: f64,
}

impl ReachProbs {
    pub const ONE: ReachProbs = ReachProbs {
        p1: 1.0,
        p2: 1.0,
        chance: 1.0,
    };

    pub const ZERO: ReachProbs = ReachProbs {
        p1: 0.0,
        p2: 0.0,
        chance: 0.0,
    };

    /// The joint probability π^σ.
    pub fn total(&self) -> f64 {
        self.p1 * self.p2 * self.chance
    }

    /// Contribution of one player alone, π_i^σ.
    pub fn of(&self, player: Player) -> f64 {
        match player {
            Player::One => self.p1,
            Player::Two => self.p2,
            Player::Chance => self.chance,
        }
    }

    /// Everyone's contribution except `player`'s, π_{-i}^σ (includes chance).
    pub fn excluding(&self, player: Player) -> f64 {
        match player {
            Player::One => self.p2 * self.chance,
            Player::Two => self.p1 * self.chance,
            Player::Chance => self.p1 * self.p2,
        }
    }

    fn apply(&mut self, player: Player, prob: f64) {
        match player {
            Player::One => self.p1 *= prob,
            Player::Two => self.p2 *= prob,
            Player::Chance => self.chance *= prob,
        }
    }
}

/// Per-step action probability along a history under a profile.
fn step_prob(game: &dyn Game, profile: &StrategyProfile, at: &History, action: usize) -> (Player, f64) {
    let player = game.current_player(at);
    let prob = if player.is_chance() {
        game.chance_probs(at)[action]
    } else {
        profile.action_probs(game, at)[action]
    };
    (player, prob)
}

/// Probability of reaching `h`, factored per contributor.
///
/// The product of the three components is π^σ(h); the opponent-and-chance
/// part π_{-i}^σ(h) is [`ReachProbs::excluding`].
pub fn reach_probability(
    game: &dyn Game,
    profile: &StrategyProfile,
    h: &History,
) -> Result<ReachProbs> {
    game.validate_history(h)?;
    let mut reach = ReachProbs::ONE;
    let mut prefix = History::root();
    for &a in h.actions() {
        let (player, prob) = step_prob(game, profile, &prefix, a.index());
        reach.apply(player, prob);
        prefix.push(a);
    }
    Ok(reach)
}

/// Probability of the segment from `h` to terminal `z`, factored per
/// contributor: π^σ(h, z) = π^σ(z)/π^σ(h), zero when `h` is not a prefix
/// of `z`.
pub fn tail_probability(
    game: &dyn Game,
    profile: &StrategyProfile,
    h: &History,
    z: &History,
) -> Result<ReachProbs> {
    game.validate_history(z)?;
    if !h.is_prefix_of(z) {
        return Ok(ReachProbs::ZERO);
    }
    let mut reach = ReachProbs::ONE;
    let mut prefix = h.clone();
    for &a in &z.actions()[h.len()..] {
        let (player, prob) = step_prob(game, profile, &prefix, a.index());
        reach.apply(player, prob);
        prefix.push(a);
    }
    Ok(reach)
}

/// Exact expected payoff u_i(σ) by full tree traversal; no sampling.
pub fn expected_value(game: &dyn Game, profile: &StrategyProfile, player: Player) -> f64 {
    debug_assert!(!player.is_chance());
    let mut h = History::root();
    expected_value_rec(game, profile, player, &mut h)
}

fn expected_value_rec(
    game: &dyn Game,
    profile: &StrategyProfile,
    player: Player,
    h: &mut History,
) -> f64 {
    let n = game.num_actions(h);
    if n == 0 {
        return game.utility(h, player);
    }
    let probs = if game.current_player(h).is_chance() {
        game.chance_probs(h)
    } else {
        profile.action_probs(game, h)
    };
    let mut value = 0.0;
    for (a, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        h.push(crate::game::ActionId(a as u32));
        value += p * expected_value_rec(game, profile, player, h);
        h.pop();
    }
    value
}

/// All terminal histories of the game, in depth-first action order.
pub fn enumerate_terminals(game: &dyn Game) -> Vec<History> {
    let mut out = Vec::new();
    let mut h = History::root();
    collect_terminals(game, &mut h, &mut out);
    out
}

fn collect_terminals(game: &dyn Game, h: &mut History, out: &mut Vec<History>) {
    let n = game.num_actions(h);
    if n == 0 {
        out.push(h.clone());
        return;
    }
    for a in 0..n {
        h.push(crate::game::ActionId(a as u32));
        collect_terminals(game, h, out);
        h.pop();
    }
}

/// Every information set of `player`, with its action count, found by a full
/// tree walk.
pub fn enumerate_infosets(game: &dyn Game, player: Player) -> BTreeMap<InfoSetKey, usize> {
    let mut out = BTreeMap::new();
    let mut h = History::root();
    collect_infosets(game, player, &mut h, &mut out);
    out
}

fn collect_infosets(
    game: &dyn Game,
    player: Player,
    h: &mut History,
    out: &mut BTreeMap<InfoSetKey, usize>,
) {
    let n = game.num_actions(h);
    if n == 0 {
        return;
    }
    if game.current_player(h) == player {
        out.entry(game.infoset_key(h, player)).or_insert(n);
    }
    for a in 0..n {
        h.push(crate::game::ActionId(a as u32));
        collect_infosets(game, player, h, out);
        h.pop();
    }
}

/// Total number of histories (all nodes including terminals).
pub fn count_histories(game: &dyn Game) -> u64 {
    let mut h = History::root();
    count_rec(game, &mut h)
}

fn count_rec(game: &dyn Game, h: &mut History) -> u64 {
    let n = game.num_actions(h);
    let mut total = 1;
    for a in 0..n {
        h.push(crate::game::ActionId(a as u32));
        total += count_rec(game, h);
        h.pop();
    }
    total
}
