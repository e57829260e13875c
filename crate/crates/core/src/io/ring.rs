//! TOML presentation of a cohomology ring.
//!
//! ```toml
//! name = "projective-plane"
//! basis = [{ name = "1", degree = 0 }, { name = "h", degree = 2 }, { name = "pt", degree = 4 }]
//! products = [{ left = "h", right = "h", result = { pt = "1" } }]
//! [chern]
//! c1 = { h = "3" }
//! c2 = { pt = "3" }
//! ```
//!
//! A `[fibration]` table names its base ring; the caller resolves that name.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{rational, toml_error};
use crate::arith::Q;
use crate::error::{Error, Result};
use crate::grr::{RingBuilder, RingSpec};

type Terms = BTreeMap<String, String>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub name: String,
    #[serde(default)]
    pub calabi_yau: bool,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default)]
    pub pairing: Vec<PairingEntry>,
    #[serde(default)]
    pub chern: ChernEntry,
    #[serde(default)]
    pub fibration: Option<FibrationEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Terms,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernEntry {
    #[serde(default)]
    pub c1: Terms,
    #[serde(default)]
    pub c2: Terms,
    #[serde(default)]
    pub c3: Terms,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationEntry {
    pub base: String,
    #[serde(default)]
    pub pushforward: Option<BTreeMap<String, Terms>>,
    #[serde(default)]
    pub pullback: Option<BTreeMap<String, Terms>>,
    #[serde(default)]
    pub relative_todd: Option<Terms>,
}

fn terms(t: &Terms) -> Result<Vec<(String, Q)>> {
    t.iter().map(|(k, v)| Ok((k.clone(), rational(v)?))).collect()
}

fn rows(t: &BTreeMap<String, Terms>) -> Result<Vec<(String, Vec<(String, Q)>)>> {
    t.iter().map(|(k, v)| Ok((k.clone(), terms(v)?))).collect()
}

impl RingFile {
    pub fn parse(text: &str) -> Result<RingFile> {
        toml::from_str(text).map_err(toml_error)
    }

    pub fn base_name(&self) -> Option<&str> {
        self.fibration.as_ref().map(|f| f.base.as_str())
    }

    /// Builds the ring; `base` must be supplied when the file declares
    /// pushforward or pullback tables.
    pub fn build(&self, base: Option<&RingSpec>) -> Result<RingSpec> {
        let mut b = RingBuilder::new(&self.name).calabi_yau(self.calabi_yau);
        for e in &self.basis {
            b = b.basis(&e.name, e.degree);
        }
        for p in &self.products {
            b = b.product_terms(p.left.clone(), p.right.clone(), terms(&p.result)?);
        }
        for p in &self.pairing {
            b = b.pairing(p.left.clone(), p.right.clone(), rational(&p.value)?);
        }
        b = b
            .chern(1, terms(&self.chern.c1)?)
            .chern(2, terms(&self.chern.c2)?)
            .chern(3, terms(&self.chern.c3)?);
        if let Some(f) = &self.fibration {
            if let Some(base) = base {
                if base.name() != f.base {
                    return Err(Error::Config(format!(
                        "fibration base is {} but ring {} was supplied",
                        f.base,
                        base.name()
                    )));
                }
            }
            b = b.fibration(
                f.base.clone(),
                f.pushforward.as_ref().map(rows).transpose()?,
                f.pullback.as_ref().map(rows).transpose()?,
                f.relative_todd.as_ref().map(terms).transpose()?,
            );
        }
        b.build_over(base)
    }
}

/// Parses a ring, resolving its fibration base by name through `lookup`.
pub fn parse_ring(
    text: &str,
    lookup: impl Fn(&str) -> Option<RingSpec>,
) -> Result<(RingSpec, Option<RingSpec>)> {
    let file = RingFile::parse(text)?;
    let base = match file.base_name() {
        None => None,
        Some(name) => Some(
            lookup(name).ok_or_else(|| Error::Config(format!("unknown base ring {name}")))?,
        ),
    };
    let ring = file.build(base.as_ref())?;
    Ok((ring, base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RingFile::parse("name = 3"), Err(Error::Parse(_))));
        let unknown = r#"
name = "x"
basis = [{ name = "1", degree = 0 }, { name = "pt", degree = 2 }]
products = [{ left = "pt", right = "pt", result = { q = "1" } }]
"#;
        let f = RingFile::parse(unknown).unwrap();
        assert!(matches!(f.build(None), Err(Error::Config(_))));
        let badq = r#"
name = "x"
basis = [{ name = "1", degree = 0 }, { name = "pt", degree = 2 }]
[chern]
c1 = { pt = "1/0" }
"#;
        assert!(matches!(RingFile::parse(badq).unwrap().build(None), Err(Error::Parse(_))));
    }

    #[test]
    fn missing_base_is_config_error() {
        let t = r#"
name = "x"
basis = [{ name = "1", degree = 0 }, { name = "pt", degree = 2 }]
[fibration]
base = "nowhere"
"#;
        assert!(matches!(parse_ring(t, |_| None), Err(Error::Config(_))));
    }
}
