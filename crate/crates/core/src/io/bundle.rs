//! TOML description of a bundle on an `I_n` cycle.
//!
//! ```toml
//! n = 2
//! splits = [[1, 0], [0, 0]]
//! gluings = [[["1", "0"], ["0", "1"]], [["0", "1"], ["1", "0"]]]
//! polarization = [{ component = 0, coordinate = "1", weight = 1 }]
//! ```
//!
//! `gluings[j]` identifies the fibers at node `j`; `polarization` is
//! optional.

use serde::{Deserialize, Serialize};

use super::{rational, toml_error};
use crate::cycle::{CycleBundle, Mark, PolarizedCycle};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub n: usize,
    pub splits: Vec<Vec<i64>>,
    pub gluings: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<Vec<MarkEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkEntry {
    pub component: usize,
    pub coordinate: String,
    pub weight: i64,
}

impl BundleFile {
    pub fn parse(text: &str) -> Result<BundleFile> {
        toml::from_str(text).map_err(toml_error)
    }

    pub fn bundle(&self) -> Result<CycleBundle> {
        if self.splits.len() != self.n || self.gluings.len() != self.n {
            return Err(Error::InvalidBundle(format!(
                "n = {} but {} split types and {} gluings given",
                self.n,
                self.splits.len(),
                self.gluings.len()
            )));
        }
        let gluings = self
            .gluings
            .iter()
            .map(|g| {
                g.iter()
                    .map(|row| row.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CycleBundle::new(self.splits.clone(), gluings)
    }

    pub fn polarization(&self) -> Result<Option<PolarizedCycle>> {
        let Some(marks) = &self.polarization else {
            return Ok(None);
        };
        let marks = marks
            .iter()
            .map(|m| {
                Ok(Mark {
                    component: m.component,
                    coordinate: rational(&m.coordinate)?,
                    weight: m.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PolarizedCycle::new(self.n, marks).map(Some)
    }

    pub fn from_bundle(e: &CycleBundle, c: Option<&PolarizedCycle>) -> Self {
        BundleFile {
            n: e.n(),
            splits: e.splits().to_vec(),
            gluings: e
                .gluings()
                .iter()
                .map(|g| g.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect())
                .collect(),
            polarization: c.map(|c| {
                c.marks
                    .iter()
                    .map(|m| MarkEntry {
                        component: m.component,
                        coordinate: m.coordinate.to_string(),
                        weight: m.weight,
                    })
                    .collect()
            }),
        }
    }
}

pub fn parse_bundle(text: &str) -> Result<(CycleBundle, Option<PolarizedCycle>)> {
    let f = BundleFile::parse(text)?;
    Ok((f.bundle()?, f.polarization()?))
}
