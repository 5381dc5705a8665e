//! Bluff(1,1,N): each player privately rolls one N-sided die, then players
//! alternate raising the bid or calling.
//!
//! A bid claims (quantity q in {1,2}, face f in 1..=N) about both dice
//! together; bids are totally ordered lexicographically by (q, f). The
//! highest face N is wild: a bid on face f < N counts dice showing f or N,
//! while a bid on face N counts only dice showing N. The caller wins one
//! chip if the outstanding bid is incorrect and loses one otherwise.

use crate::error::{Error, Result};
use crate::game::{ActionId, Game, History, InfoSetKey, Player};

#[derive(Clone, Debug)]
pub struct Bluff {
    faces: u32,
    name: String,
}

pub fn bluff(faces: u32) -> Result<Bluff> {
    if faces < 2 {
        return Err(Error::InvalidParams(format!(
            "bluff needs dice with at least 2 faces, got {faces}"
        )));
    }
    if faces > 100 {
        return Err(Error::InvalidParams(format!(
            "bluff supports at most 100 faces, got {faces}"
        )));
    }
    Ok(Bluff {
        faces,
        name: format!("bluff:{faces}"),
    })
}

/// Marker for the call action in observation encodings.
const CALL_CODE: u8 = 0xff;

impl Bluff {
    pub fn faces(&self) -> u32 {
        self.faces
    }

    /// Total number of distinct bids: quantities {1, 2} times N faces.
    pub fn num_bids(&self) -> u32 {
        2 * self.faces
    }

    /// Decodes a bid id into (quantity, face), both 1-based.
    pub fn bid_parts(&self, bid: u32) -> (u32, u32) {
        (bid / self.faces + 1, bid % self.faces + 1)
    }

    /// Bid id for (quantity, face), both 1-based.
    pub fn bid_id(&self, quantity: u32, face: u32) -> u32 {
        debug_assert!((1..=2).contains(&quantity) && (1..=self.faces).contains(&face));
        (quantity - 1) * self.faces + (face - 1)
    }

    /// The public betting actions of `h` as global codes: bid ids, or
    /// `CALL_CODE` for a call.
    fn public_codes(&self, h: &History) -> Vec<u8> {
        let mut codes = Vec::new();
        let mut highest: Option<u32> = None;
        for a in &h.actions()[2.min(h.len())..] {
            match self.resolve(highest, *a) {
                Move::Bid(b) => {
                    codes.push(b as u8);
                    highest = Some(b);
                }
                Move::Call => codes.push(CALL_CODE),
            }
        }
        codes
    }

    /// Maps a local action index to a bid above `highest` or a call.
    fn resolve(&self, highest: Option<u32>, action: ActionId) -> Move {
        match highest {
            None => Move::Bid(action.0),
            Some(h) => {
                let above = self.num_bids() - 1 - h;
                if action.0 < above {
                    Move::Bid(h + 1 + action.0)
                } else {
                    Move::Call
                }
            }
        }
    }

    /// Highest bid so far and whether the last action was a call.
    fn betting_state(&self, h: &History) -> (Option<u32>, bool) {
        let mut highest = None;
        let mut called = false;
        for a in &h.actions()[2.min(h.len())..] {
            match self.resolve(highest, *a) {
                Move::Bid(b) => highest = Some(b),
                Move::Call => called = true,
            }
        }
        (highest, called)
    }

    /// Whether a bid holds given both dice (1-based faces).
    pub fn bid_correct(&self, bid: u32, die1: u32, die2: u32) -> bool {
        let (quantity, face) = self.bid_parts(bid);
        let wild = self.faces;
        let matches = |d: u32| d == face || (face != wild && d == wild);
        let count = matches(die1) as u32 + matches(die2) as u32;
        count >= quantity
    }
}

enum Move {
    Bid(u32),
    Call,
}

impl Game for Bluff {
    fn name(&self) -> &str {
        &self.name
    }

    fn num_actions(&self, h: &History) -> usize {
        if h.len() < 2 {
            return self.faces as usize;
        }
        let (highest, called) = self.betting_state(h);
        if called {
            return 0;
        }
        match highest {
            None => self.num_bids() as usize,
            // Bids strictly above the current one, plus the call.
            Some(b) => (self.num_bids() - 1 - b) as usize + 1,
        }
    }

    fn current_player(&self, h: &History) -> Player {
        match h.len() {
            0 | 1 => Player::Chance,
            n if n % 2 == 0 => Player::One,
            _ => Player::Two,
        }
    }

    fn chance_probs(&self, _h: &History) -> Vec<f64> {
        vec![1.0 / self.faces as f64; self.faces as usize]
    }

    fn utility(&self, z: &History, player: Player) -> f64 {
        let die1 = z.actions()[0].0 + 1;
        let die2 = z.actions()[1].0 + 1;
        // The caller made the last action; the bid under challenge is the
        // highest bid.
        let caller = self.current_player(&{
            let mut prefix = z.clone();
            prefix.pop();
            prefix
        });
        let (highest, called) = self.betting_state(z);
        debug_assert!(called, "utility queried at non-terminal");
        let bid = highest.expect("call requires an outstanding bid");
        let caller_wins = !self.bid_correct(bid, die1, die2);
        let u_caller = if caller_wins { 1.0 } else { -1.0 };
        let u1 = if caller == Player::One {
            u_caller
        } else {
            -u_caller
        };
        match player {
            Player::One => u1,
            Player::Two => -u1,
            Player::Chance => 0.0,
        }
    }

    fn infoset_key(&self, h: &History, player: Player) -> InfoSetKey {
        let own_die = match player {
            Player::One => h.actions()[0].0,
            Player::Two => h.actions()[1].0,
            Player::Chance => unreachable!("chance holds no die"),
        };
        let mut obs = vec![own_die as u8];
        obs.extend(self.public_codes(h));
        InfoSetKey::new(player, obs)
    }

    fn max_abs_utility(&self) -> f64 {
        1.0
    }
}
