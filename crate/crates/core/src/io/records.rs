//! JSON records for fiber classes, P-classes and transform kernels.

use serde::{Deserialize, Serialize};

use super::json_error;
use crate::error::Result;
use crate::lattice::{FiberClass, KernelData, PClass};

/// `{"r":1,"d":5,"space":"X","shift":0,"dual":false}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRecord {
    pub r: i64,
    pub d: i64,
    #[serde(default = "default_space")]
    pub space: String,
    #[serde(default)]
    pub shift: i64,
    #[serde(default)]
    pub dual: bool,
}

fn default_space() -> String {
    "X".into()
}

impl ClassRecord {
    pub fn fiber_class(&self) -> Result<FiberClass> {
        FiberClass::with_shift(self.r, self.d, self.space.clone(), self.shift)
    }

    /// The record as a P-class; `dual` and `shift` are kept as given.
    pub fn p_class(&self) -> Result<PClass> {
        let mut p = PClass::new(self.r, self.d, self.space.clone())?;
        p.dual = self.dual;
        p.shift = self.shift;
        Ok(p)
    }

    pub fn from_fiber_class(v: &FiberClass) -> Self {
        ClassRecord {
            r: v.r(),
            d: v.d(),
            space: v.space().to_string(),
            shift: v.shift(),
            dual: false,
        }
    }

    pub fn from_p_class(p: &PClass) -> Self {
        ClassRecord {
            r: p.r,
            d: p.d,
            space: p.space.clone(),
            shift: p.shift,
            dual: p.dual,
        }
    }
}

/// Records are JSON objects; serde would also accept positional arrays.
fn object(line: &str) -> Result<serde_json::Value> {
    let v: serde_json::Value = serde_json::from_str(line).map_err(json_error)?;
    if v.is_object() {
        Ok(v)
    } else {
        Err(crate::Error::Parse("record must be a JSON object".into()))
    }
}

pub fn parse_class(line: &str) -> Result<ClassRecord> {
    serde_json::from_value(object(line)?).map_err(json_error)
}

/// Kernel records may omit `e`, in which case it is derived from
/// `e = (bc - 1)/a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelRecord {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<i64>,
    pub n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

impl KernelRecord {
    pub fn kernel(&self) -> Result<KernelData> {
        let source = self.source.as_deref().unwrap_or("M");
        let target = self.target.as_deref().unwrap_or("X");
        let k = crate::lattice::kernel_between(self.a, self.b, self.c, self.n, source, target)?;
        if let Some(e) = self.e {
            if e != k.e {
                return Err(crate::Error::HypothesisViolation(format!(
                    "e = {e} contradicts ae = bc - 1 (expected {})",
                    k.e
                )));
            }
        }
        Ok(k)
    }

    pub fn from_kernel(k: &KernelData) -> Self {
        KernelRecord {
            a: k.a,
            b: k.b,
            c: k.c,
            e: Some(k.e),
            n: k.n,
            source: Some(k.source.clone()),
            target: Some(k.target.clone()),
        }
    }
}

pub fn parse_kernel(line: &str) -> Result<KernelRecord> {
    serde_json::from_value(object(line)?).map_err(json_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn class_round_trip() {
        let rec = parse_class(r#"{"r":1,"d":5,"space":"X","shift":0,"dual":false}"#).unwrap();
        assert_eq!(rec.fiber_class().unwrap().d(), 5);
        let line = serde_json::to_string(&rec).unwrap();
        assert_eq!(parse_class(&line).unwrap(), rec);
        assert_eq!(parse_class(r#"{"r":2,"d":4}"#).unwrap().fiber_class().unwrap_err().exit_code(), 2);
        assert!(matches!(parse_class("{\"r\":1}"), Err(Error::Parse(_))));
    }

    #[test]
    fn kernel_with_and_without_e() {
        let k = parse_kernel(r#"{"a":1,"b":2,"c":0,"n":5}"#).unwrap().kernel().unwrap();
        assert_eq!(k.e, -1);
        assert!(parse_kernel(r#"{"a":1,"b":2,"c":0,"e":3,"n":5}"#).unwrap().kernel().is_err());
        assert!(matches!(
            parse_kernel(r#"{"a":2,"b":1,"c":0,"n":1}"#).unwrap().kernel(),
            Err(Error::NonIntegralE { .. })
        ));
    }
}
