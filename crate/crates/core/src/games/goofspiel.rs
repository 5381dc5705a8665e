//! Goofspiel with a fixed, strictly decreasing point stack (N, N-1, ..., 1).
//!
//! Each player holds cards 1..=N and secretly bids one per round for the top
//! prize card. Players observe only the round outcome (win/lose/tie from
//! their own perspective), never the opponent's card. Tied bids discard the
//! prize. Whoever holds more points at the end wins (+1/-1, 0 on a tie).
//!
//! Simultaneous bids are modeled as player one moving, then player two
//! moving inside one information set: player two's key never includes player
//! one's pending bid.

use crate::error::{Error, Result};
use crate::game::{Game, History, InfoSetKey, Player};

#[derive(Clone, Debug)]
pub struct Goofspiel {
    hand: u32,
    name: String,
}

pub fn goofspiel(hand: u32) -> Result<Goofspiel> {
    if hand < 2 {
        return Err(Error::InvalidParams(format!(
            "goofspiel needs a hand of at least 2 cards, got {hand}"
        )));
    }
    Ok(Goofspiel {
        hand,
        name: format!("goof:{hand}"),
    })
}

/// Outcome signal from one player's perspective.
const LOSE: u8 = 0;
const TIE: u8 = 1;
const WIN: u8 = 2;

impl Goofspiel {
    pub fn hand(&self) -> u32 {
        self.hand
    }

    /// Card values a player still holds, ascending, after playing `played`.
    fn remaining(&self, played: &[u32]) -> Vec<u32> {
        (1..=self.hand).filter(|v| !played.contains(v)).collect()
    }

    /// Card values each player has bid so far, in round order.
    fn bids(&self, h: &History) -> (Vec<u32>, Vec<u32>) {
        let mut p1 = Vec::new();
        let mut p2 = Vec::new();
        for (i, a) in h.actions().iter().enumerate() {
            let mine = if i % 2 == 0 { &mut p1 } else { &mut p2 };
            let pool = self.remaining(mine);
            mine.push(pool[a.index()]);
        }
        (p1, p2)
    }

    /// Point totals over completed rounds.
    fn scores(&self, p1_bids: &[u32], p2_bids: &[u32]) -> (u32, u32) {
        let mut s1 = 0;
        let mut s2 = 0;
        for (round, (&b1, &b2)) in p1_bids.iter().zip(p2_bids).enumerate() {
            let prize = self.hand - round as u32;
            if b1 > b2 {
                s1 += prize;
            } else if b2 > b1 {
                s2 += prize;
            }
        }
        (s1, s2)
    }
}

impl Game for Goofspiel {
    fn name(&self) -> &str {
        &self.name
    }

    fn num_actions(&self, h: &History) -> usize {
        if h.len() == 2 * self.hand as usize {
            0
        } else {
            (self.hand as usize) - h.len() / 2
        }
    }

    fn current_player(&self, h: &History) -> Player {
        if h.len().is_multiple_of(2) {
            Player::One
        } else {
            Player::Two
        }
    }

    fn chance_probs(&self, _h: &History) -> Vec<f64> {
        unreachable!("goofspiel has no chance nodes")
    }

    fn utility(&self, z: &History, player: Player) -> f64 {
        let (b1, b2) = self.bids(z);
        let (s1, s2) = self.scores(&b1, &b2);
        let u1 = match s1.cmp(&s2) {
            std::cmp::Ordering::Greater => 1.0,
            std::cmp::Ordering::Less => -1.0,
            std::cmp::Ordering::Equal => 0.0,
        };
        match player {
            Player::One => u1,
            Player::Two => -u1,
            Player::Chance => 0.0,
        }
    }

    fn infoset_key(&self, h: &History, player: Player) -> InfoSetKey {
        let (b1, b2) = self.bids(h);
        let completed = b1.len().min(b2.len());
        let own = match player {
            Player::One => &b1,
            Player::Two => &b2,
            Player::Chance => unreachable!("chance does not observe goofspiel"),
        };
        // Own bid and own-perspective signal per completed round; an own bid
        // pending resolution is included without a signal.
        let mut obs = Vec::with_capacity(own.len() * 2);
        for round in 0..own.len() {
            obs.push(own[round] as u8);
            if round < completed {
                let (mine, theirs) = match player {
                    Player::One => (b1[round], b2[round]),
                    _ => (b2[round], b1[round]),
                };
                obs.push(match mine.cmp(&theirs) {
                    std::cmp::Ordering::Greater => WIN,
                    std::cmp::Ordering::Less => LOSE,
                    std::cmp::Ordering::Equal => TIE,
                });
            }
        }
        InfoSetKey::new(player, obs)
    }

    fn max_abs_utility(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::ActionId;
    use crate::probability::enumerate_infosets;

    /// Plays out full rounds given card values (not action indices).
    fn play(g: &Goofspiel, p1: &[u32], p2: &[u32]) -> History {
        let mut h = History::root();
        for round in 0..p1.len() {
            for (player_bids, card) in [(0, p1[round]), (1, p2[round])] {
                let played: Vec<u32> = (0..round).map(|r| [p1, p2][player_bids][r]).collect();
                let pool = g.remaining(&played);
                let idx = pool.iter().position(|&v| v == card).expect("card in hand");
                h.push(ActionId(idx as u32));
            }
        }
        h
    }

    #[test]
    fn rejects_tiny_hand() {
        assert!(goofspiel(1).is_err());
    }

    #[test]
    fn identical_bids_tie_everywhere() {
        let g = goofspiel(3).unwrap();
        let z = play(&g, &[3, 1, 2], &[3, 1, 2]);
        assert!(g.is_terminal(&z));
        assert_eq!(g.utility(&z, Player::One), 0.0);
        assert_eq!(g.utility(&z, Player::Two), 0.0);
    }

    #[test]
    fn goof2_high_bid_takes_big_prize() {
        // P1 plays (2 then 1), P2 plays (1 then 2): P1 wins prize 2, P2 wins
        // prize 1, so P1 wins the game.
        let g = goofspiel(2).unwrap();
        let z = play(&g, &[2, 1], &[1, 2]);
        assert_eq!(g.utility(&z, Player::One), 1.0);
        assert_eq!(g.utility(&z, Player::Two), -1.0);
    }

    #[test]
    fn p2_key_hides_pending_bid() {
        let g = goofspiel(3).unwrap();
        // Player two to act in round one: key must not depend on P1's bid.
        let keys: Vec<InfoSetKey> = (0..3)
            .map(|b| {
                let h = History::from_indices(&[b]);
                g.infoset_key(&h, Player::Two)
            })
            .collect();
        assert!(keys.iter().all(|k| *k == keys[0]));
    }

    #[test]
    fn goof3_infoset_count_frozen_by_tree_walk() {
        let g = goofspiel(3).unwrap();
        let n1 = enumerate_infosets(&g, Player::One).len();
        let n2 = enumerate_infosets(&g, Player::Two).len();
        // Round 1: one key each. Round 2: 7 (own bid x feasible signal:
        // bidding 3 cannot lose, bidding 1 cannot win). Round 3: 28
        // feasible (bid pair, signal pair) combinations. Frozen from the
        // tree walk.
        assert_eq!((n1, n2), (36, 36));
    }
}
