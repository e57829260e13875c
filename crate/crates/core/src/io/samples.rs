//! TOML sample sets for the moduli-invariant solver.
//!
//! ```toml
//! base = "projective-plane"
//!
//! [constraints]
//! "c2*H" = "36"
//!
//! [[samples]]
//! label = "P_X(5, 9) = pi_*(V_M(1, 5) x V_M(2, -1))"
//! twist = "0"
//! x_side = { h = "3", pt = "-9/2" }
//! factors = [{ rank = "1", theta = "5", h = "0" }, { rank = "2", theta = "-1", h = "1" }]
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{rational, toml_error};
use crate::error::Result;
use crate::grr::{Factor, RingSpec, Sample};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSetFile {
    pub base: String,
    #[serde(default)]
    pub constraints: BTreeMap<String, String>,
    pub samples: Vec<SampleEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleEntry {
    #[serde(default)]
    pub label: String,
    #[serde(default = "zero")]
    pub twist: String,
    pub x_side: BTreeMap<String, String>,
    pub factors: Vec<FactorEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub rank: String,
    pub theta: String,
    #[serde(default = "zero")]
    pub h: String,
}

fn zero() -> String {
    "0".into()
}

impl SampleSetFile {
    pub fn parse(text: &str) -> Result<SampleSetFile> {
        toml::from_str(text).map_err(toml_error)
    }

    pub fn constraints(&self) -> Result<BTreeMap<String, crate::arith::Q>> {
        self.constraints.iter().map(|(k, v)| Ok((k.clone(), rational(v)?))).collect()
    }

    pub fn samples(&self, base: &RingSpec) -> Result<Vec<Sample>> {
        self.samples
            .iter()
            .map(|s| {
                let terms = s
                    .x_side
                    .iter()
                    .map(|(k, v)| Ok((k.as_str(), rational(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Sample {
                    label: s.label.clone(),
                    factors: s
                        .factors
                        .iter()
                        .map(|f| {
                            Ok(Factor {
                                rank: rational(&f.rank)?,
                                theta: rational(&f.theta)?,
                                h: rational(&f.h)?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?,
                    x_side: base.class(&terms)?,
                    twist: rational(&s.twist)?,
                })
            })
            .collect()
    }

    pub fn from_samples(base: &RingSpec, samples: &[Sample]) -> Self {
        SampleSetFile {
            base: base.name().to_string(),
            constraints: BTreeMap::new(),
            samples: samples
                .iter()
                .map(|s| SampleEntry {
                    label: s.label.clone(),
                    twist: s.twist.to_string(),
                    x_side: base.named_coordinates(&s.x_side),
                    factors: s
                        .factors
                        .iter()
                        .map(|f| FactorEntry {
                            rank: f.rank.to_string(),
                            theta: f.theta.to_string(),
                            h: f.h.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}
