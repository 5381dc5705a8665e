//! Princess-and-monster pursuit on a 4-connected R x C grid, in the dark:
//! neither player ever observes the other's position or moves.
//!
//! Chance places the two players on distinct cells. The monster (player one)
//! and evader (player two) then alternate moving to an adjacent cell —
//! staying put is not legal. Capture is checked after every half-move, and
//! also triggers when the evader steps onto the monster. The evader scores
//! one point per completed half-move, up to the horizon H; the monster
//! scores the negation.

use crate::error::{Error, Result};
use crate::game::{Game, History, InfoSetKey, Player};

#[derive(Clone, Debug)]
pub struct PursuitGrid {
    rows: u32,
    cols: u32,
    horizon: u32,
    name: String,
}

pub fn pursuit(rows: u32, cols: u32, horizon: u32) -> Result<PursuitGrid> {
    if rows * cols < 2 {
        return Err(Error::InvalidParams(format!(
            "pursuit grid needs at least 2 cells, got {rows}x{cols}"
        )));
    }
    if horizon < 1 {
        return Err(Error::InvalidParams("pursuit horizon must be at least 1".into()));
    }
    Ok(PursuitGrid {
        rows,
        cols,
        horizon,
        name: format!("pam:{rows}x{cols}x{horizon}"),
    })
}

impl PursuitGrid {
    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    fn cells(&self) -> u32 {
        self.rows * self.cols
    }

    fn num_starts(&self) -> u32 {
        self.cells() * (self.cells() - 1)
    }

    /// Decodes a chance outcome into (monster cell, evader cell).
    fn start_cells(&self, outcome: u32) -> (u32, u32) {
        let m = outcome / (self.cells() - 1);
        let r = outcome % (self.cells() - 1);
        let e = if r >= m { r + 1 } else { r };
        (m, e)
    }

    /// Adjacent cells in ascending cell-id order.
    fn neighbors(&self, cell: u32) -> Vec<u32> {
        let (r, c) = (cell / self.cols, cell % self.cols);
        let mut out = Vec::with_capacity(4);
        if r > 0 {
            out.push(cell - self.cols);
        }
        if c > 0 {
            out.push(cell - 1);
        }
        if c + 1 < self.cols {
            out.push(cell + 1);
        }
        if r + 1 < self.rows {
            out.push(cell + self.cols);
        }
        out
    }

    /// Replays `h`, returning current positions, half-moves completed, and
    /// whether a capture has occurred.
    fn replay(&self, h: &History) -> (u32, u32, u32, bool) {
        let (mut monster, mut evader) = self.start_cells(h.actions()[0].0);
        let mut moves = 0;
        for (i, a) in h.actions()[1..].iter().enumerate() {
            let mover_is_monster = i % 2 == 0;
            let pos = if mover_is_monster { monster } else { evader };
            let dest = self.neighbors(pos)[a.index()];
            if mover_is_monster {
                monster = dest;
            } else {
                evader = dest;
            }
            moves += 1;
            if monster == evader {
                return (monster, evader, moves, true);
            }
        }
        (monster, evader, moves, false)
    }
}

impl Game for PursuitGrid {
    fn name(&self) -> &str {
        &self.name
    }

    fn num_actions(&self, h: &History) -> usize {
        if h.is_empty() {
            return self.num_starts() as usize;
        }
        let (monster, evader, moves, captured) = self.replay(h);
        if captured || moves == self.horizon {
            return 0;
        }
        let mover = if moves % 2 == 0 { monster } else { evader };
        self.neighbors(mover).len()
    }

    fn current_player(&self, h: &History) -> Player {
        if h.is_empty() {
            Player::Chance
        } else if (h.len() - 1).is_multiple_of(2) {
            Player::One
        } else {
            Player::Two
        }
    }

    fn chance_probs(&self, _h: &History) -> Vec<f64> {
        vec![1.0 / self.num_starts() as f64; self.num_starts() as usize]
    }

    fn utility(&self, z: &History, player: Player) -> f64 {
        let (_, _, moves, captured) = self.replay(z);
        // Completed half-moves before capture; H when never captured.
        let evader_payoff = if captured {
            (moves - 1) as f64
        } else {
            self.horizon as f64
        };
        match player {
            Player::One => -evader_payoff,
            Player::Two => evader_payoff,
            Player::Chance => 0.0,
        }
    }

    fn infoset_key(&self, h: &History, player: Player) -> InfoSetKey {
        // A player knows only their own start cell and their own moves.
        let (m_start, e_start) = self.start_cells(h.actions()[0].0);
        let own_start = match player {
            Player::One => m_start,
            Player::Two => e_start,
            Player::Chance => unreachable!("chance does not move"),
        };
        let own_parity = match player {
            Player::One => 0,
            _ => 1,
        };
        let mut obs = Vec::new();
        obs.extend_from_slice(&(own_start as u16).to_be_bytes());
        let mut pos = own_start;
        for (i, a) in h.actions()[1..].iter().enumerate() {
            if i % 2 == own_parity {
                pos = self.neighbors(pos)[a.index()];
                obs.extend_from_slice(&(pos as u16).to_be_bytes());
            }
        }
        InfoSetKey::new(player, obs)
    }

    fn max_abs_utility(&self) -> f64 {
        self.horizon as f64
    }
}
