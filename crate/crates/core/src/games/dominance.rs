//! Exhaustive dominance oracle for small games.
//!
//! An action is reported dominated when iterated elimination removes it:
//! in each round, action `a` at information set `I` falls if, for every
//! pure completion of the owner's play below `I`, some mixture of the
//! surviving alternatives (each with its own completion below `I`) does at
//! least as well against every surviving opponent pure strategy and
//! strictly better against one. One elimination round alone certifies
//! one-shot dominated actions such as folding a King; the iteration is what
//! also catches plays like opening with a bet on a Queen, which only lose
//! once the opponent's dominated replies are gone.

use crate::error::{Error, Result};
use crate::game::{ActionId, Game, History, InfoSetKey, Player};
use crate::probability::enumerate_infosets;
use std::collections::{BTreeMap, BTreeSet};

/// Upper bound on opponent pure strategies times own completions per test.
const ENUMERATION_BUDGET: u64 = 1 << 22;

const TOLERANCE: f64 = 1e-9;

/// Surviving action indices per information set.
type Survivors = BTreeMap<InfoSetKey, Vec<usize>>;

/// A pure assignment of one action index per information set.
type Assignment = BTreeMap<InfoSetKey, usize>;

/// True iff iterated elimination removes `action` at `key`.
pub fn verify_dominated(game: &dyn Game, key: &InfoSetKey, action: ActionId) -> Result<bool> {
    let n_here = *enumerate_infosets(game, key.owner)
        .get(key)
        .ok_or_else(|| Error::GameMismatch(format!("{key} does not occur in {}", game.name())))?;
    if action.index() >= n_here {
        return Err(Error::GameMismatch(format!(
            "action {action} out of range at {key}"
        )));
    }
    Ok(dominated_set(game)?.contains(&(key.clone(), action)))
}

/// Every (information set, action) pair removed by iterated elimination.
pub fn dominated_set(game: &dyn Game) -> Result<BTreeSet<(InfoSetKey, ActionId)>> {
    let mut survivors: [Survivors; 2] = [Survivors::new(), Survivors::new()];
    for player in Player::BOTH {
        for (key, n) in enumerate_infosets(game, player) {
            survivors[player.index()].insert(key, (0..n).collect());
        }
    }
    let mut eliminated = BTreeSet::new();
    loop {
        // Simultaneous rounds: every test in a round sees the same survivor
        // snapshot.
        let snapshot = survivors.clone();
        let mut removed_any = false;
        for player in Player::BOTH {
            for (key, actions) in &snapshot[player.index()] {
                if actions.len() < 2 {
                    continue;
                }
                for &a in actions {
                    if check_dominated(game, &snapshot, key, a)? {
                        eliminated.insert((key.clone(), ActionId(a as u32)));
                        survivors[player.index()]
                            .get_mut(key)
                            .unwrap()
                            .retain(|&x| x != a);
                        removed_any = true;
                    }
                }
            }
        }
        if !removed_any {
            return Ok(eliminated);
        }
    }
}

/// One elimination test against a survivor snapshot.
fn check_dominated(
    game: &dyn Game,
    survivors: &[Survivors; 2],
    key: &InfoSetKey,
    action: usize,
) -> Result<bool> {
    let owner = key.owner;
    let own = &survivors[owner.index()];
    let opp = &survivors[owner.opponent().index()];

    let opponents = all_assignments(opp, ENUMERATION_BUDGET)?;

    // Own play splits into: actions forced along the path to `key`
    // (ancestors), free completions below it (descendants), and irrelevant
    // information sets pinned to an arbitrary survivor — they cancel in
    // every payoff difference.
    let member = find_member(game, key).expect("key occurs in game");
    let ancestors = path_actions(game, &member, owner);
    let descendants = descendant_sets(game, key);

    let mut base = Assignment::new();
    for (k, acts) in own {
        base.insert(k.clone(), acts[0]);
    }
    for (k, a) in &ancestors {
        if let Some(&forced) = own.get(k).and_then(|acts| acts.iter().find(|&&x| x == *a)) {
            base.insert(k.clone(), forced);
        } else {
            // The path into this set was already eliminated; nothing to do.
            return Ok(false);
        }
    }

    let mut completion_space = Survivors::new();
    for k in &descendants {
        completion_space.insert(k.clone(), own[k].clone());
    }
    let completions = all_assignments(&completion_space, ENUMERATION_BUDGET)?;
    if (completions.len() as u64).saturating_mul(opponents.len() as u64) > ENUMERATION_BUDGET {
        return Err(Error::SizeLimit(format!(
            "{} completions x {} opponent strategies",
            completions.len(),
            opponents.len()
        )));
    }

    let alternatives: Vec<usize> = own[key].iter().copied().filter(|&b| b != action).collect();

    // Payoff vector over opponent pures for one own subtree choice.
    let payoffs = |at_key: usize, completion: &Assignment| -> Vec<f64> {
        let mut assignment = base.clone();
        assignment.insert(key.clone(), at_key);
        for (k, &a) in completion {
            assignment.insert(k.clone(), a);
        }
        opponents
            .iter()
            .map(|o| pure_ev(game, owner, &assignment, o, &mut History::root()))
            .collect()
    };

    let rows: Vec<Vec<f64>> = alternatives
        .iter()
        .flat_map(|&b| completions.iter().map(move |c| (b, c)))
        .map(|(b, c)| payoffs(b, c))
        .collect();

    // Every pure strategy playing `action` must be beaten by some mixture
    // of at most two rows.
    for c_a in &completions {
        let target = payoffs(action, c_a);
        if !some_mixture_dominates(&rows, &target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether some mixture of up to two rows weakly exceeds `target` on every
/// coordinate and strictly on one.
fn some_mixture_dominates(rows: &[Vec<f64>], target: &[f64]) -> bool {
    for (i, r1) in rows.iter().enumerate() {
        if dominates(r1, target) {
            return true;
        }
        for r2 in rows.iter().skip(i + 1) {
            // Mixture lambda r1 + (1 - lambda) r2: each coordinate is a
            // linear constraint on lambda; intersect the feasible intervals.
            let mut lo: f64 = 0.0;
            let mut hi: f64 = 1.0;
            for ((&a, &b), &t) in r1.iter().zip(r2).zip(target) {
                let slope = a - b;
                let offset = b - t;
                // Need slope * lambda + offset >= -tolerance.
                if slope.abs() <= TOLERANCE {
                    if offset < -TOLERANCE {
                        lo = 1.0;
                        hi = 0.0;
                        break;
                    }
                } else if slope > 0.0 {
                    lo = lo.max((-offset - TOLERANCE) / slope);
                } else {
                    hi = hi.min((-offset - TOLERANCE) / slope);
                }
            }
            if lo > hi {
                continue;
            }
            // Check a strict coordinate at some feasible lambda.
            for lambda in [lo, 0.5 * (lo + hi), hi] {
                let strict = r1
                    .iter()
                    .zip(r2)
                    .zip(target)
                    .any(|((&a, &b), &t)| lambda * a + (1.0 - lambda) * b > t + TOLERANCE);
                let feasible = r1
                    .iter()
                    .zip(r2)
                    .zip(target)
                    .all(|((&a, &b), &t)| lambda * a + (1.0 - lambda) * b >= t - TOLERANCE);
                if feasible && strict {
                    return true;
                }
            }
        }
    }
    false
}

fn dominates(row: &[f64], target: &[f64]) -> bool {
    let weak = row.iter().zip(target).all(|(&r, &t)| r >= t - TOLERANCE);
    let strict = row.iter().zip(target).any(|(&r, &t)| r > t + TOLERANCE);
    weak && strict
}

/// Expected payoff for `player` under pure play, averaging over chance.
fn pure_ev(
    game: &dyn Game,
    player: Player,
    own: &Assignment,
    opp: &Assignment,
    h: &mut History,
) -> f64 {
    let n = game.num_actions(h);
    if n == 0 {
        return game.utility(h, player);
    }
    let actor = game.current_player(h);
    if actor.is_chance() {
        let probs = game.chance_probs(h);
        let mut value = 0.0;
        for (a, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            h.push(ActionId(a as u32));
            value += p * pure_ev(game, player, own, opp, h);
            h.pop();
        }
        return value;
    }
    let key = game.infoset_key(h, actor);
    let table = if actor == player { own } else { opp };
    let choice = *table.get(&key).expect("assignment covers game");
    h.push(ActionId(choice as u32));
    let value = pure_ev(game, player, own, opp, h);
    h.pop();
    value
}

/// Cartesian product of surviving actions, budget-checked.
fn all_assignments(space: &Survivors, budget: u64) -> Result<Vec<Assignment>> {
    let count: u64 = space
        .values()
        .fold(1u64, |acc, acts| acc.saturating_mul(acts.len() as u64));
    if count > budget {
        return Err(Error::SizeLimit(format!(
            "{count} pure strategies exceed the enumeration budget"
        )));
    }
    let mut out = vec![Assignment::new()];
    for (key, actions) in space {
        let mut next = Vec::with_capacity(out.len() * actions.len());
        for partial in &out {
            for &a in actions {
                let mut extended = partial.clone();
                extended.insert(key.clone(), a);
                next.push(extended);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Any history whose acting player sits in `key`.
fn find_member(game: &dyn Game, key: &InfoSetKey) -> Option<History> {
    fn walk(game: &dyn Game, key: &InfoSetKey, h: &mut History) -> Option<History> {
        let n = game.num_actions(h);
        if n == 0 {
            return None;
        }
        let actor = game.current_player(h);
        if actor == key.owner && game.infoset_key(h, actor) == *key {
            return Some(h.clone());
        }
        for a in 0..n {
            h.push(ActionId(a as u32));
            if let Some(found) = walk(game, key, h) {
                h.pop();
                return Some(found);
            }
            h.pop();
        }
        None
    }
    walk(game, key, &mut History::root())
}

/// The owner's decisions along `member`, keyed by information set. Perfect
/// recall makes these consistent across members of one set.
fn path_actions(game: &dyn Game, member: &History, owner: Player) -> Assignment {
    let mut out = Assignment::new();
    let mut prefix = History::root();
    for &a in member.actions() {
        if !game.is_terminal(&prefix) && game.current_player(&prefix) == owner {
            out.insert(game.infoset_key(&prefix, owner), a.index());
        }
        prefix.push(a);
    }
    out
}

/// Own information sets strictly below members of `key`.
fn descendant_sets(game: &dyn Game, key: &InfoSetKey) -> BTreeSet<InfoSetKey> {
    fn walk(
        game: &dyn Game,
        key: &InfoSetKey,
        h: &mut History,
        inside: bool,
        out: &mut BTreeSet<InfoSetKey>,
    ) {
        let n = game.num_actions(h);
        if n == 0 {
            return;
        }
        let actor = game.current_player(h);
        let mut now_inside = inside;
        if actor == key.owner {
            let here = game.infoset_key(h, actor);
            if inside && here != *key {
                out.insert(here.clone());
            }
            if here == *key {
                now_inside = true;
            }
        }
        for a in 0..n {
            h.push(ActionId(a as u32));
            walk(game, key, h, now_inside, out);
            h.pop();
        }
    }
    let mut out = BTreeSet::new();
    walk(game, key, &mut History::root(), false, &mut out);
    out
}
