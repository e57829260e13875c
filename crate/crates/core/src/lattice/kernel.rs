use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::class::FiberClass;
use crate::error::{Error, Result};

/// Integer 2×2 matrix `[[p, q], [s, t]]` acting on column vectors `(r, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sl2(pub [[i64; 2]; 2]);

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2([[1, 0], [0, 1]]);

    pub fn det(&self) -> i64 {
        let [[p, q], [s, t]] = self.0;
        p * t - q * s
    }

    pub fn mul(&self, o: &Sl2) -> Result<Sl2> {
        let a = self.0;
        let b = o.0;
        let mut out = [[0i64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0]
                    .checked_mul(b[0][j])
                    .and_then(|u| a[i][1].checked_mul(b[1][j]).and_then(|v| u.checked_add(v)))
                    .ok_or(Error::Overflow)?;
            }
        }
        Ok(Sl2(out))
    }

    pub fn apply(&self, r: i64, d: i64) -> Result<(i64, i64)> {
        let [[p, q], [s, t]] = self.0;
        let row = |x: i64, y: i64| {
            x.checked_mul(r)
                .and_then(|u| y.checked_mul(d).and_then(|v| u.checked_add(v)))
                .ok_or(Error::Overflow)
        };
        Ok((row(p, q)?, row(s, t)?))
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Sl2 {
        let [[p, q], [s, t]] = self.0;
        Sl2([[t, -q], [-s, p]])
    }

    /// Acts on a fiber class, landing on `target`.
    pub fn transform(&self, v: &FiberClass, target: &str) -> Result<FiberClass> {
        let (r, d) = self.apply(v.r(), v.d())?;
        if r == 0 {
            return Err(Error::TorsionTransform { r, d });
        }
        v.relabel(r, d, target)
    }
}

/// Numerical data `(a, b, c, e)` of the kernel of a relative Fourier–Mukai
/// transform `D(source) -> D(target)`, acting by `[[c, a], [e, b]]`.
///
/// `c` depends on the chosen universal sheaf: twisting it by a line bundle of
/// fiber degree `k` replaces `(c, e)` by `(c + k a, e + k b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelData {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub e: i64,
    pub n: i64,
    #[serde(default = "default_source")]
    pub source: String,
    #[serde(default = "default_target")]
    pub target: String,
}

fn default_source() -> String {
    "M".into()
}

fn default_target() -> String {
    "X".into()
}

/// Builds the kernel of the relative moduli space of stable sheaves of rank
/// `a`, degree `b` on the fibers of a fibration with multisection degree `n`.
pub fn kernel_from_moduli(a: i64, b: i64, c: i64, n: i64) -> Result<KernelData> {
    kernel_between(a, b, c, n, "M", "X")
}

pub fn kernel_between(a: i64, b: i64, c: i64, n: i64, source: &str, target: &str) -> Result<KernelData> {
    if a <= 0 {
        return Err(Error::HypothesisViolation(format!("a = {a} must be positive")));
    }
    if n <= 0 {
        return Err(Error::HypothesisViolation(format!("n = {n} must be positive")));
    }
    let na = n.checked_mul(a).ok_or(Error::Overflow)?;
    if na.gcd(&b) != 1 {
        return Err(Error::HypothesisViolation(format!(
            "gcd(n a, b) = gcd({na}, {b}) must be 1"
        )));
    }
    let numerator = b
        .checked_mul(c)
        .and_then(|x| x.checked_sub(1))
        .ok_or(Error::Overflow)?;
    if numerator % a != 0 {
        return Err(Error::NonIntegralE { a, numerator });
    }
    Ok(KernelData {
        a,
        b,
        c,
        e: numerator / a,
        n,
        source: source.into(),
        target: target.into(),
    })
}

impl KernelData {
    pub fn matrix(&self) -> Sl2 {
        Sl2([[self.c, self.a], [self.e, self.b]])
    }

    /// Checks `b c - a e = 1`; used on deserialized kernels.
    pub fn validate(&self) -> Result<()> {
        if self.n <= 0 {
            return Err(Error::HypothesisViolation(format!("n = {} must be positive", self.n)));
        }
        let det = (self.b as i128) * (self.c as i128) - (self.a as i128) * (self.e as i128);
        if det != 1 {
            return Err(Error::HypothesisViolation(format!(
                "kernel determinant b c - a e = {det}, expected 1"
            )));
        }
        Ok(())
    }

    /// `(r, d) -> (c r + a d, e r + b d)`, from `source` to `target`.
    pub fn transform(&self, v: &FiberClass) -> Result<FiberClass> {
        if v.space() != self.source {
            return Err(Error::TagMismatch {
                expected: self.source.clone(),
                found: v.space().into(),
            });
        }
        self.matrix().transform(v, &self.target)
    }

    /// The inverse transform `target -> source`, matrix `[[b, -a], [-e, c]]`.
    pub fn invert(&self) -> KernelData {
        KernelData {
            a: -self.a,
            b: self.c,
            c: self.b,
            e: -self.e,
            n: self.n,
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// Replaces the universal sheaf by its twist by a fiber-degree `k` line
    /// bundle pulled back from the moduli side.
    pub fn retwist(&self, k: i64) -> Result<KernelData> {
        let c = k.checked_mul(self.a).and_then(|x| x.checked_add(self.c));
        let e = k.checked_mul(self.b).and_then(|x| x.checked_add(self.e));
        match (c, e) {
            (Some(c), Some(e)) => Ok(KernelData { c, e, ..self.clone() }),
            _ => Err(Error::Overflow),
        }
    }
}

/// Matrix of `first ∘ second`, i.e. apply `second` then `first`.
pub fn compose_kernels(first: &KernelData, second: &KernelData) -> Result<Sl2> {
    if first.source != second.target {
        return Err(Error::TagMismatch {
            expected: first.source.clone(),
            found: second.target.clone(),
        });
    }
    first.matrix().mul(&second.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(r: i64, d: i64, s: &str) -> FiberClass {
        FiberClass::new(r, d, s).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_from_moduli(1, 0, 0, 1).unwrap();
        assert_eq!(k.e, -1);
        assert_eq!(k.matrix(), Sl2([[0, 1], [-1, 0]]));

        let k = kernel_from_moduli(1, 2, 0, 5).unwrap();
        assert_eq!(k.matrix(), Sl2([[0, 1], [-1, 2]]));

        assert_eq!(
            kernel_from_moduli(2, 1, 0, 1),
            Err(Error::NonIntegralE { a: 2, numerator: -1 })
        );
        assert!(matches!(
            kernel_from_moduli(1, 5, 0, 5),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            kernel_from_moduli(0, 1, 0, 1),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn transform_examples() {
        let mukai = kernel_from_moduli(1, 0, 0, 1).unwrap();
        assert_eq!(mukai.transform(&v(2, 1, "M")).unwrap(), v(1, -2, "X"));
        assert_eq!(
            mukai.transform(&v(1, 0, "M")),
            Err(Error::TorsionTransform { r: 0, d: -1 })
        );
        let k = kernel_from_moduli(1, 2, 0, 5).unwrap();
        assert_eq!(k.transform(&v(1, 5, "M")).unwrap(), v(5, 9, "X"));
        assert!(matches!(
            k.transform(&v(1, 5, "X")),
            Err(Error::TagMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        let k = kernel_from_moduli(1, 0, 0, 1).unwrap();
        assert_eq!(k.invert().matrix(), Sl2([[0, -1], [1, 0]]));
        let k = kernel_from_moduli(1, 2, 0, 5).unwrap();
        assert_eq!(k.invert().matrix(), Sl2([[2, -1], [1, 0]]));
        // [[3, 2], [1, 1]]: c = 3, a = 2, e = 1, b = 1
        let k = kernel_from_moduli(2, 1, 3, 1).unwrap();
        assert_eq!(k.matrix(), Sl2([[3, 2], [1, 1]]));
        assert_eq!(k.invert().invert(), k);
    }

    #[test]
    fn composition_examples() {
        let k = kernel_from_moduli(1, 2, 0, 5).unwrap();
        assert_eq!(compose_kernels(&k, &k.invert()).unwrap(), Sl2::IDENTITY);
        let mut m1 = kernel_from_moduli(1, 0, 0, 1).unwrap();
        let m2 = m1.clone();
        m1.source = "X".into();
        m1.target = "Y".into();
        let sq = compose_kernels(&m1, &m2).unwrap();
        assert_eq!(sq, Sl2([[-1, 0], [0, -1]]));
        assert_eq!(sq.det(), 1);
        assert!(compose_kernels(&m2, &m2).is_err());
    }

    #[test]
    fn retwist_keeps_determinant() {
        let k = kernel_from_moduli(2, 3, 1, 1).unwrap();
        for t in -3..=3 {
            assert_eq!(k.retwist(t).unwrap().matrix().det(), 1);
        }
    }
}
