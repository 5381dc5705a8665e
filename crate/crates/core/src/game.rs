//! The extensive-form game abstraction: players, actions, histories,
//! information-set keys, and the `Game` trait every solver works against.

use crate::error::{Error, Result};
use std::fmt;

/// One of the two strategic players, or the chance player.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Player {
    One,
    Two,
    Chance,
}

impl Player {
    /// The other strategic player. Panics for `Chance`.
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
            Player::Chance => panic!("chance has no opponent"),
        }
    }

    /// 0 for player one, 1 for player two. Panics for `Chance`.
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
            Player::Chance => panic!("chance has no strategy index"),
        }
    }

    pub fn is_chance(self) -> bool {
        self == Player::Chance
    }

    /// Both strategic players, in order.
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::One => write!(f, "1"),
            Player::Two => write!(f, "2"),
            Player::Chance => write!(f, "c"),
        }
    }
}

/// Index of an action (or chance outcome) local to one decision point.
///
/// Always satisfies `index < num_actions(h)` at the point where it is used.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ActionId(pub u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A sequence of actions from the root; the universal game-state handle.
///
/// Every prefix of a `History` built through [`History::child`] against a
/// fixed game is itself a valid history of that game.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct History(Vec<ActionId>);

impl History {
    /// The empty history at the game root.
    pub fn root() -> History {
        History(Vec::new())
    }

    pub fn from_actions(actions: Vec<ActionId>) -> History {
        History(actions)
    }

    /// Convenience constructor from raw indices.
    pub fn from_indices(indices: &[u32]) -> History {
        History(indices.iter().map(|&i| ActionId(i)).collect())
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The history extended by one action.
    pub fn child(&self, action: ActionId) -> History {
        let mut actions = self.0.clone();
        actions.push(action);
        History(actions)
    }

    pub fn push(&mut self, action: ActionId) {
        self.0.push(action);
    }

    pub fn pop(&mut self) -> Option<ActionId> {
        self.0.pop()
    }

    /// Prefix relation: `self` ⊑ `other`.
    pub fn is_prefix_of(&self, other: &History) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", a.0)?;
        }
        write!(f, "]")
    }
}

/// Identifies what a player knows at a decision point.
///
/// The observation is a game-defined deterministic byte serialization of the
/// owner's private chance outcomes plus the public action/signal sequence.
/// Two histories map to the same key for a player exactly when that player
/// cannot distinguish them, and the encoding respects perfect recall.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct InfoSetKey {
    pub owner: Player,
    pub observation: Vec<u8>,
}

impl InfoSetKey {
    pub fn new(owner: Player, observation: Vec<u8>) -> InfoSetKey {
        InfoSetKey { owner, observation }
    }

    /// Lowercase hex of the observation bytes, as used in strategy files.
    pub fn observation_hex(&self) -> String {
        let mut s = String::with_capacity(self.observation.len() * 2);
        for b in &self.observation {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    pub fn from_hex(owner: Player, hex: &str) -> Option<InfoSetKey> {
        if !hex.len().is_multiple_of(2) {
            return None;
        }
        let mut bytes = Vec::with_capacity(hex.len() / 2);
        for i in (0..hex.len()).step_by(2) {
            bytes.push(u8::from_str_radix(&hex[i..i + 2], 16).ok()?);
        }
        Some(InfoSetKey::new(owner, bytes))
    }
}

impl fmt::Display for InfoSetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}:{}", self.owner, self.observation_hex())
    }
}

/// A two-player zero-sum extensive-form game described by pure functions on
/// histories.
///
/// Implementations must guarantee, for every reachable history:
/// - `utility(z, One) == -utility(z, Two)` at terminals (zero-sum);
/// - `chance_probs(h)` sums to 1 at chance nodes;
/// - `infoset_key` is constant across histories of one information set and
///   respects perfect recall;
/// - `num_actions(h) == 0` exactly when `is_terminal(h)`.
pub trait Game {
    fn name(&self) -> &str;

    /// Number of legal actions (or chance outcomes); 0 at terminals.
    fn num_actions(&self, h: &History) -> usize;

    fn is_terminal(&self, h: &History) -> bool {
        self.num_actions(h) == 0
    }

    /// Who acts at `h`. Unspecified at terminals.
    fn current_player(&self, h: &History) -> Player;

    /// Outcome distribution at a chance node, indexed by `ActionId`.
    fn chance_probs(&self, h: &History) -> Vec<f64>;

    /// Payoff for `player` at terminal `z`, in game-native units.
    fn utility(&self, z: &History, player: Player) -> f64;

    /// The information-set key of `player` at `h`.
    fn infoset_key(&self, h: &History, player: Player) -> InfoSetKey;

    /// Largest |utility| over terminals; the game's payoff scale.
    fn max_abs_utility(&self) -> f64;

    /// Checks that `h` is reachable action-by-action.
    fn validate_history(&self, h: &History) -> Result<()> {
        let mut prefix = History::root();
        for (depth, &a) in h.actions().iter().enumerate() {
            if a.index() >= self.num_actions(&prefix) {
                return Err(Error::InvalidHistory { depth, action: a });
            }
            prefix.push(a);
        }
        Ok(())
    }
}
