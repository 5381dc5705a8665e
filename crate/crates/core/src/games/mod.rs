//! Concrete games: one-card poker (Kuhn and OCP), Goofspiel, Bluff, and
//! princess-and-monster pursuit, plus analytic Kuhn knowledge and a
//! dominance oracle.

pub mod bluff;
pub mod dominance;
pub mod goofspiel;
pub mod kuhn;
pub mod one_card;
pub mod pursuit;

use crate::error::{Error, Result};
use crate::game::Game;

/// Builds a game from its selection string:
/// `kuhn`, `ocp:N`, `goof:N`, `bluff:N`, or `pam:RxCxH`.
pub fn from_spec(spec: &str) -> Result<Box<dyn Game>> {
    let mut parts = spec.splitn(2, ':');
    let kind = parts.next().unwrap_or_default();
    let args = parts.next();
    let want_int = |s: &str| -> Result<u32> {
        s.parse()
            .map_err(|_| Error::InvalidParams(format!("bad number {s:?} in game spec {spec:?}")))
    };
    match (kind, args) {
        ("kuhn", None) => Ok(Box::new(one_card::kuhn())),
        ("ocp", Some(n)) => Ok(Box::new(one_card::one_card(want_int(n)?)?)),
        ("goof", Some(n)) => Ok(Box::new(goofspiel::goofspiel(want_int(n)?)?)),
        ("bluff", Some(n)) => Ok(Box::new(bluff::bluff(want_int(n)?)?)),
        ("pam", Some(dims)) => {
            let fields: Vec<&str> = dims.split('x').collect();
            if fields.len() != 3 {
                return Err(Error::InvalidParams(format!(
                    "pam spec must be pam:RxCxH, got {spec:?}"
                )));
            }
            Ok(Box::new(pursuit::pursuit(
                want_int(fields[0])?,
                want_int(fields[1])?,
                want_int(fields[2])?,
            )?))
        }
        _ => Err(Error::InvalidParams(format!("unknown game spec {spec:?}"))),
    }
}
