//! Text formats: single-line JSON records for classes and kernels, TOML for
//! bundles, rings, sample sets and scan configurations.
//!
//! Rationals are written as strings (`"3/4"`, `"-2"`) so no precision is
//! lost in either format.

pub mod bundle;
pub mod records;
pub mod ring;
pub mod samples;

use crate::arith::{parse_q, Q};
use crate::error::{Error, Result};

pub fn rational(s: &str) -> Result<Q> {
    parse_q(s).ok_or_else(|| Error::Parse(format!("not a rational number: {s:?}")))
}

pub(crate) fn toml_error(e: toml::de::Error) -> Error {
    Error::Parse(e.message().to_string())
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Any TOML document with a serde representation, such as a scan
/// configuration.
pub fn from_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(toml_error)
}
