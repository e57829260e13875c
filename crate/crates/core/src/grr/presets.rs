//! Ring presentations shipped with the crate.

use crate::error::{Error, Result};
use crate::io::ring::parse_ring;

use super::ring::RingSpec;

pub const PROJECTIVE_PLANE: &str = include_str!("../../rings/projective_plane.toml");
pub const ELLIPTIC_CY3_OVER_P2: &str = include_str!("../../rings/elliptic_cy3_over_p2.toml");

pub fn names() -> &'static [&'static str] {
    &["projective-plane", "elliptic-cy3-over-p2"]
}

pub fn text(name: &str) -> Option<&'static str> {
    match name {
        "projective-plane" => Some(PROJECTIVE_PLANE),
        "elliptic-cy3-over-p2" => Some(ELLIPTIC_CY3_OVER_P2),
        _ => None,
    }
}

/// A shipped ring together with its fibration base, if any.
pub fn load(name: &str) -> Result<(RingSpec, Option<RingSpec>)> {
    let t = text(name).ok_or_else(|| Error::Config(format!("no shipped ring named {name}")))?;
    parse_ring(t, |b| load(b).ok().map(|(r, _)| r))
}

pub fn projective_plane() -> RingSpec {
    load("projective-plane").expect("shipped ring parses").0
}

/// The elliptic Calabi–Yau threefold and its base plane.
pub fn elliptic_cy3() -> (RingSpec, RingSpec) {
    let (x, base) = load("elliptic-cy3-over-p2").expect("shipped ring parses");
    (x, base.expect("fibration base"))
}
