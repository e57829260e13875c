use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical class of a fiberwise (possibly shifted) stable bundle
/// `V(r, d)` on the fibration named by `space`.
///
/// A negative rank encodes an odd shift; `shift` counts the explicit shift
/// operations applied, of which only the parity is meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiberClass {
    r: i64,
    d: i64,
    space: String,
    #[serde(default)]
    shift: i64,
}

impl FiberClass {
    pub fn new(r: i64, d: i64, space: impl Into<String>) -> Result<Self> {
        Self::with_shift(r, d, space, 0)
    }

    pub fn with_shift(r: i64, d: i64, space: impl Into<String>, shift: i64) -> Result<Self> {
        validate(r, d)?;
        Ok(FiberClass {
            r,
            d,
            space: space.into(),
            shift,
        })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn space(&self) -> &str {
        &self.space
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn shift_parity(&self) -> i64 {
        self.shift.rem_euclid(2)
    }

    /// The dual of a `V(r, d)` is a `V(r, -d)`.
    pub fn dualize(&self) -> FiberClass {
        FiberClass {
            d: -self.d,
            ..self.clone()
        }
    }

    /// `E[1]` is a `V(-r, -d)`.
    pub fn shifted(&self) -> FiberClass {
        FiberClass {
            r: -self.r,
            d: -self.d,
            space: self.space.clone(),
            shift: self.shift + 1,
        }
    }

    pub(crate) fn relabel(&self, r: i64, d: i64, space: &str) -> Result<FiberClass> {
        FiberClass::with_shift(r, d, space, self.shift)
    }

    /// Same numerical class up to an even shift.
    pub fn same_class(&self, other: &FiberClass) -> bool {
        self.r == other.r
            && self.d == other.d
            && self.space == other.space
            && self.shift_parity() == other.shift_parity()
    }
}

pub(crate) fn validate(r: i64, d: i64) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidClass {
            r,
            d,
            reason: "rank must be nonzero",
        });
    }
    if r.gcd(&d) != 1 {
        return Err(Error::InvalidClass {
            r,
            d,
            reason: "rank and degree must be coprime",
        });
    }
    Ok(())
}
