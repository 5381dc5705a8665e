//! Analytic knowledge about Kuhn Poker: the one-parameter equilibrium
//! family and the seven strictly dominated actions.
//!
//! Player one's equilibria form the family (alpha, beta, gamma) =
//! (gamma/3, (1 + gamma)/3, gamma) where
//! - alpha = P(bet | J, first action),
//! - beta  = P(bet | Q, third action, calling a bet),
//! - gamma = P(bet | K, first action).
//!
//! Player two has a unique equilibrium: eta = P(bet | J, facing a pass) and
//! xi = P(bet | Q, facing a bet), both 1/3. Under any family member the
//! first player loses 1/18 per hand.

use super::one_card::{kuhn, BET, PASS};
use crate::game::{ActionId, InfoSetKey, Player};
use crate::strategy::{BehaviorStrategy, StrategyProfile};

pub const JACK: u32 = 0;
pub const QUEEN: u32 = 1;
pub const KING: u32 = 2;

/// A point of the Kuhn equilibrium family, derived from gamma.
#[derive(Clone, Copy, Debug)]
pub struct KuhnEquilibrium {
    pub gamma: f64,
}

impl KuhnEquilibrium {
    pub fn new(gamma: f64) -> KuhnEquilibrium {
        assert!((0.0..=1.0).contains(&gamma), "gamma must lie in [0, 1]");
        KuhnEquilibrium { gamma }
    }

    pub fn alpha(&self) -> f64 {
        self.gamma / 3.0
    }

    pub fn beta(&self) -> f64 {
        (1.0 + self.gamma) / 3.0
    }

    pub fn eta(&self) -> f64 {
        1.0 / 3.0
    }

    pub fn xi(&self) -> f64 {
        1.0 / 3.0
    }

    /// The full behavior profile for this family member.
    pub fn profile(&self) -> StrategyProfile {
        let mut p1 = BehaviorStrategy::new();
        let mut p2 = BehaviorStrategy::new();
        let bet = |p: f64| vec![1.0 - p, p];

        // Player one, first action.
        p1.insert(round1_key(JACK), bet(self.alpha())).unwrap();
        p1.insert(round1_key(QUEEN), bet(0.0)).unwrap();
        p1.insert(round1_key(KING), bet(self.gamma)).unwrap();
        // Player one, third action (facing a bet after passing).
        p1.insert(round3_key(JACK), bet(0.0)).unwrap();
        p1.insert(round3_key(QUEEN), bet(self.beta())).unwrap();
        p1.insert(round3_key(KING), bet(1.0)).unwrap();
        // Player two facing a bet.
        p2.insert(facing_bet_key(JACK), bet(0.0)).unwrap();
        p2.insert(facing_bet_key(QUEEN), bet(self.xi())).unwrap();
        p2.insert(facing_bet_key(KING), bet(1.0)).unwrap();
        // Player two facing a pass.
        p2.insert(facing_pass_key(JACK), bet(self.eta())).unwrap();
        p2.insert(facing_pass_key(QUEEN), bet(0.0)).unwrap();
        p2.insert(facing_pass_key(KING), bet(1.0)).unwrap();

        StrategyProfile::new(p1, p2)
    }
}

/// Player one's first-action information set for `card`.
pub fn round1_key(card: u32) -> InfoSetKey {
    kuhn().key(Player::One, card, &[])
}

/// Player one's third-action information set (after pass, bet) for `card`.
pub fn round3_key(card: u32) -> InfoSetKey {
    kuhn().key(Player::One, card, &[PASS, BET])
}

/// Player two's information set facing a bet with `card`.
pub fn facing_bet_key(card: u32) -> InfoSetKey {
    kuhn().key(Player::Two, card, &[BET])
}

/// Player two's information set facing a pass with `card`.
pub fn facing_pass_key(card: u32) -> InfoSetKey {
    kuhn().key(Player::Two, card, &[PASS])
}

/// The seven strictly dominated (information set, action) pairs of Kuhn
/// Poker, confirmed by the dominance oracle in this crate's tests.
pub fn dominated_actions() -> Vec<(InfoSetKey, ActionId)> {
    vec![
        // Betting a Queen as a first action.
        (round1_key(QUEEN), ActionId(BET)),
        // Calling the third action with a Jack.
        (round3_key(JACK), ActionId(BET)),
        // Folding a King on the third action.
        (round3_key(KING), ActionId(PASS)),
        // Calling a bet with a Jack.
        (facing_bet_key(JACK), ActionId(BET)),
        // Folding a King to a bet.
        (facing_bet_key(KING), ActionId(PASS)),
        // Betting a Queen after the first player passes.
        (facing_pass_key(QUEEN), ActionId(BET)),
        // Passing a King after the first player passes.
        (facing_pass_key(KING), ActionId(PASS)),
    ]
}
