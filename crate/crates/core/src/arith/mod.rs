//! Exact arithmetic: rationals, prime fields, algebraic extensions of Q,
//! univariate polynomials and the linear algebra built on them.

pub mod field;
pub mod linalg;
pub mod poly;
pub mod polymat;

use num_bigint::BigInt;
use num_rational::BigRational;


/// Exact rational number used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() || s.len() > 4096 {
        return None;
    }
    let r: Q = s.parse().ok()?;
    Some(r)
}

/// `Some(n)` when the rational is an integer that fits in an `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}
