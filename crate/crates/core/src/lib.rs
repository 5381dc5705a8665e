//! Solvers and exact evaluation for two-player zero-sum extensive-form
//! games with imperfect information.
//!
//! The crate provides:
//! - a game abstraction over histories and information sets ([`game`]),
//!   with behavior strategies and a text persistence format ([`strategy`]);
//! - five bundled small games ([`games`]);
//! - exact evaluation: best response, exploitability, and vanilla
//!   counterfactual regret minimization ([`exact`]);
//! - outcome-sampling Monte-Carlo CFR ([`mccfr`]);
//! - information-set MCTS with UCT selection ([`mcts`]);
//! - restricted Nash response, both exact and sampled ([`rnr`]).

pub mod error;
pub mod exact;
pub mod game;
pub mod games;
pub mod mccfr;
pub mod mcts;
pub mod probability;
pub mod record;
pub mod rng;
pub mod rnr;
pub mod strategy;

pub use error::{Error, Result};
