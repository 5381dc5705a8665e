//! One-card poker with an N-card deck. Kuhn Poker is the 3-card case.
//!
//! Each player antes one chip, is dealt one card, and has one more chip to
//! bet with. Actions are pass (0) and bet (1). Player one acts, player two
//! responds, and after (pass, bet) player one acts once more. A called bet
//! goes to showdown for 2 chips, a showdown after pass/pass is worth 1, and
//! folding loses the ante.

use crate::error::{Error, Result};
use crate::game::{ActionId, Game, History, InfoSetKey, Player};

pub const PASS: u32 = 0;
pub const BET: u32 = 1;

#[derive(Clone, Debug)]
pub struct OneCardPoker {
    deck: u32,
    name: String,
}

/// Kuhn Poker: the 3-card game with cards J < Q < K.
pub fn kuhn() -> OneCardPoker {
    OneCardPoker {
        deck: 3,
        name: "kuhn".to_string(),
    }
}

/// One-card poker over an N-card deck; `one_card(3)` is isomorphic to Kuhn.
pub fn one_card(deck: u32) -> Result<OneCardPoker> {
    if deck < 2 {
        return Err(Error::InvalidParams(format!(
            "one-card poker needs a deck of at least 2 cards, got {deck}"
        )));
    }
    Ok(OneCardPoker {
        deck,
        name: format!("ocp:{deck}"),
    })
}

impl OneCardPoker {
    pub fn deck(&self) -> u32 {
        self.deck
    }

    /// Number of ordered deals.
    pub fn num_deals(&self) -> u32 {
        self.deck * (self.deck - 1)
    }

    /// Decodes a deal outcome into (player-one card, player-two card).
    pub fn deal_cards(&self, deal: u32) -> (u32, u32) {
        let c1 = deal / (self.deck - 1);
        let r = deal % (self.deck - 1);
        let c2 = if r >= c1 { r + 1 } else { r };
        (c1, c2)
    }

    /// Encodes a card pair back into a deal outcome.
    pub fn deal_index(&self, c1: u32, c2: u32) -> ActionId {
        assert!(c1 != c2 && c1 < self.deck && c2 < self.deck);
        let r = if c2 > c1 { c2 - 1 } else { c2 };
        ActionId(c1 * (self.deck - 1) + r)
    }

    fn card_of(&self, h: &History, player: Player) -> u32 {
        let deal = h.actions()[0].0;
        let (c1, c2) = self.deal_cards(deal);
        match player {
            Player::One => c1,
            Player::Two => c2,
            Player::Chance => unreachable!("chance holds no card"),
        }
    }

    /// Key for a decision point of `player` holding `card` after the public
    /// betting sequence `bets`.
    pub fn key(&self, player: Player, card: u32, bets: &[u32]) -> InfoSetKey {
        let mut obs = Vec::with_capacity(2 + bets.len());
        obs.extend_from_slice(&(card as u16).to_be_bytes());
        obs.extend(bets.iter().map(|&b| b as u8));
        InfoSetKey::new(player, obs)
    }
}

/// Betting state after the deal: who acts or how the hand ended.
enum BetState {
    ToAct(Player),
    Fold(Player),
    Showdown(f64),
}

fn bet_state(bets: &[ActionId]) -> BetState {
    match bets {
        [] => BetState::ToAct(Player::One),
        [_] => BetState::ToAct(Player::Two),
        [a, b] => match (a.0, b.0) {
            (PASS, PASS) => BetState::Showdown(1.0),
            (PASS, BET) => BetState::ToAct(Player::One),
            (BET, PASS) => BetState::Fold(Player::Two),
            (BET, BET) => BetState::Showdown(2.0),
            _ => unreachable!("binary actions"),
        },
        [_, _, c] => match c.0 {
            PASS => BetState::Fold(Player::One),
            BET => BetState::Showdown(2.0),
            _ => unreachable!("binary actions"),
        },
        _ => unreachable!("betting ends after three actions"),
    }
}

impl Game for OneCardPoker {
    fn name(&self) -> &str {
        &self.name
    }

    fn num_actions(&self, h: &History) -> usize {
        if h.is_empty() {
            return self.num_deals() as usize;
        }
        match bet_state(&h.actions()[1..]) {
            BetState::ToAct(_) => 2,
            _ => 0,
        }
    }

    fn current_player(&self, h: &History) -> Player {
        if h.is_empty() {
            return Player::Chance;
        }
        match bet_state(&h.actions()[1..]) {
            BetState::ToAct(p) => p,
            _ => unreachable!("no player at terminal"),
        }
    }

    fn chance_probs(&self, h: &History) -> Vec<f64> {
        debug_assert!(h.is_empty());
        vec![1.0 / self.num_deals() as f64; self.num_deals() as usize]
    }

    fn utility(&self, z: &History, player: Player) -> f64 {
        let u1 = match bet_state(&z.actions()[1..]) {
            BetState::Fold(Player::One) => -1.0,
            BetState::Fold(Player::Two) => 1.0,
            BetState::Showdown(stake) => {
                let (c1, c2) = self.deal_cards(z.actions()[0].0);
                if c1 > c2 {
                    stake
                } else {
                    -stake
                }
            }
            _ => unreachable!("utility queried at non-terminal"),
        };
        match player {
            Player::One => u1,
            Player::Two => -u1,
            Player::Chance => 0.0,
        }
    }

    fn infoset_key(&self, h: &History, player: Player) -> InfoSetKey {
        let bets: Vec<u32> = h.actions()[1..].iter().map(|a| a.0).collect();
        self.key(player, self.card_of(h, player), &bets)
    }

    fn max_abs_utility(&self) -> f64 {
        2.0
    }
}
