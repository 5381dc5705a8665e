//! Behavior strategies, strategy profiles, and the strategy text-file format.

use crate::error::{Error, Result};
use crate::game::{Game, History, InfoSetKey, Player};
use rand::Rng;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

const SUM_TOLERANCE: f64 = 1e-9;

/// Per-information-set probability distributions over legal actions for one
/// player. Entries are validated on insert; lookups at missing keys fall back
/// to the uniform distribution so partially-trained strategies stay evaluable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BehaviorStrategy {
    table: BTreeMap<InfoSetKey, Vec<f64>>,
}

impl BehaviorStrategy {
    pub fn new() -> BehaviorStrategy {
        BehaviorStrategy::default()
    }

    /// Inserts a distribution, validating non-negativity and normalization.
    pub fn insert(&mut self, key: InfoSetKey, probs: Vec<f64>) -> Result<()> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution(format!(
                "empty probability vector for {key}"
            )));
        }
        if probs.iter().any(|&p| !(0.0..=1.0 + SUM_TOLERANCE).contains(&p)) {
            return Err(Error::InvalidDistribution(format!(
                "probability outside [0, 1] for {key}"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities for {key} sum to {sum}, expected 1"
            )));
        }
        self.table.insert(key, probs);
        Ok(())
    }

    pub fn get(&self, key: &InfoSetKey) -> Option<&[f64]> {
        self.table.get(key).map(|v| v.as_slice())
    }

    /// The stored distribution, or uniform over `num_actions` if absent.
    pub fn probs_or_uniform(&self, key: &InfoSetKey, num_actions: usize) -> Vec<f64> {
        match self.table.get(key) {
            Some(v) => v.clone(),
            None => uniform(num_actions),
        }
    }

    pub fn contains(&self, key: &InfoSetKey) -> bool {
        self.table.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InfoSetKey, &Vec<f64>)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Uniform distribution over `n` actions.
pub fn uniform(n: usize) -> Vec<f64> {
    assert!(n > 0, "uniform distribution needs at least one action");
    vec![1.0 / n as f64; n]
}

/// One behavior strategy per strategic player.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrategyProfile {
    strategies: [BehaviorStrategy; 2],
}

impl StrategyProfile {
    pub fn new(p1: BehaviorStrategy, p2: BehaviorStrategy) -> StrategyProfile {
        StrategyProfile {
            strategies: [p1, p2],
        }
    }

    pub fn strategy(&self, player: Player) -> &BehaviorStrategy {
        &self.strategies[player.index()]
    }

    pub fn strategy_mut(&mut self, player: Player) -> &mut BehaviorStrategy {
        &mut self.strategies[player.index()]
    }

    /// Replaces one side, keeping the other.
    pub fn with_strategy(mut self, player: Player, strategy: BehaviorStrategy) -> StrategyProfile {
        self.strategies[player.index()] = strategy;
        self
    }

    /// Action distribution of the player to act at `h` (uniform fallback).
    pub fn action_probs(&self, game: &dyn Game, h: &History) -> Vec<f64> {
        let player = game.current_player(h);
        debug_assert!(!player.is_chance());
        let key = game.infoset_key(h, player);
        self.strategy(player)
            .probs_or_uniform(&key, game.num_actions(h))
    }

    /// A profile that stores nothing and therefore reads as uniform
    /// everywhere.
    pub fn uniform() -> StrategyProfile {
        StrategyProfile::default()
    }

    /// Random behavior at every information set of both players.
    pub fn random<R: Rng>(game: &dyn Game, rng: &mut R) -> StrategyProfile {
        let mut profile = StrategyProfile::uniform();
        for player in Player::BOTH {
            for (key, n) in crate::probability::enumerate_infosets(game, player) {
                let mut weights: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-3..1.0)).collect();
                let sum: f64 = weights.iter().sum();
                for w in &mut weights {
                    *w /= sum;
                }
                profile.strategy_mut(player).insert(key, weights).unwrap();
            }
        }
        profile
    }
}

/// Fills in an explicit uniform distribution at every information set the
/// profile does not cover, producing a profile that stores every decision
/// point of the game.
pub fn complete_profile(game: &dyn Game, profile: &StrategyProfile) -> StrategyProfile {
    let mut out = StrategyProfile::uniform();
    for player in Player::BOTH {
        for (key, n) in crate::probability::enumerate_infosets(game, player) {
            let probs = profile.strategy(player).probs_or_uniform(&key, n);
            out.strategy_mut(player).insert(key, probs).unwrap();
        }
    }
    out
}

/// Checks that every stored key belongs to the game and has the right arity.
/// Reports the first offending key.
pub fn validate_profile(game: &dyn Game, profile: &StrategyProfile) -> Result<()> {
    for player in Player::BOTH {
        let known = crate::probability::enumerate_infosets(game, player);
        for (key, probs) in profile.strategy(player).iter() {
            match known.get(key) {
                None => {
                    return Err(Error::GameMismatch(format!(
                        "information set {key} does not occur in game {}",
                        game.name()
                    )))
                }
                Some(&n) if n != probs.len() => {
                    return Err(Error::GameMismatch(format!(
                        "information set {key} has {n} actions in game {}, file stores {}",
                        game.name(),
                        probs.len()
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Writes a profile in the strategy text format: one line per information
/// set, `player \t key_hex \t p0,p1,...`, probabilities at 17 significant
/// digits, lines sorted lexicographically. Round-trips bit-exactly.
pub fn write_profile<W: Write>(w: &mut W, profile: &StrategyProfile) -> Result<()> {
    let mut lines = Vec::new();
    for player in Player::BOTH {
        for (key, probs) in profile.strategy(player).iter() {
            let rendered: Vec<String> = probs.iter().map(|p| format!("{p:.16e}")).collect();
            lines.push(format!(
                "{}\t{}\t{}",
                player,
                key.observation_hex(),
                rendered.join(",")
            ));
        }
    }
    lines.sort();
    for line in lines {
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Parses the strategy text format. Lines may cover one or both players.
pub fn read_profile<R: BufRead>(r: R) -> Result<StrategyProfile> {
    let mut profile = StrategyProfile::uniform();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (player_field, hex_field, probs_field) =
            match (fields.next(), fields.next(), fields.next(), fields.next()) {
                (Some(p), Some(h), Some(v), None) => (p, h, v),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "expected 3 tab-separated fields".into(),
                    })
                }
            };
        let player = match player_field {
            "1" => Player::One,
            "2" => Player::Two,
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unknown player {other:?}"),
                })
            }
        };
        let key = InfoSetKey::from_hex(player, hex_field).ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("bad hex key {hex_field:?}"),
        })?;
        let probs: Vec<f64> = probs_field
            .split(',')
            .map(|s| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad probability {s:?}"),
                })
            })
            .collect::<Result<_>>()?;
        profile
            .strategy_mut(player)
            .insert(key, probs)
            .map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
    }
    Ok(profile)
}

/// Writes a profile to a file path.
pub fn save_profile(path: &std::path::Path, profile: &StrategyProfile) -> Result<()> {
    let mut buf = Vec::new();
    write_profile(&mut buf, profile)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// Reads a profile from a file path.
pub fn load_profile(path: &std::path::Path) -> Result<StrategyProfile> {
    let file = std::fs::File::open(path)?;
    read_profile(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(owner: Player, bytes: &[u8]) -> InfoSetKey {
        InfoSetKey::new(owner, bytes.to_vec())
    }

    #[test]
    fn insert_rejects_bad_vectors() {
        let mut s = BehaviorStrategy::new();
        assert!(s.insert(key(Player::One, &[1]), vec![]).is_err());
        assert!(s.insert(key(Player::One, &[1]), vec![0.5, 0.6]).is_err());
        assert!(s.insert(key(Player::One, &[1]), vec![-0.1, 1.1]).is_err());
        assert!(s.insert(key(Player::One, &[1]), vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn missing_key_reads_uniform() {
        let s = BehaviorStrategy::new();
        assert_eq!(s.probs_or_uniform(&key(Player::One, &[9]), 4), vec![0.25; 4]);
    }

    #[test]
    fn file_round_trip_is_bit_exact() {
        let mut profile = StrategyProfile::uniform();
        profile
            .strategy_mut(Player::One)
            .insert(key(Player::One, &[0, 2]), vec![1.0 / 3.0, 2.0 / 3.0])
            .unwrap();
        profile
            .strategy_mut(Player::Two)
            .insert(key(Player::Two, &[7]), vec![0.1, 0.2, 0.7])
            .unwrap();

        let mut first = Vec::new();
        write_profile(&mut first, &profile).unwrap();
        let reread = read_profile(&first[..]).unwrap();
        assert_eq!(reread, profile);
        let mut second = Vec::new();
        write_profile(&mut second, &reread).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn read_reports_offending_line() {
        let text = "1\t00\t0.5,0.5\nbogus line\n";
        match read_profile(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
