//! Exact rational scalars and their JSON representation.
//!
//! All Gram data, cone vectors and incidence quantities are carried as
//! arbitrary-precision rationals; floating point enters only in the
//! numerical optimization and quadrature layers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Sign of a rational as an integer in {-1, 0, 1}.
pub fn sign(r: &Rat) -> i64 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of truncated parts for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Nearest rational with the given denominator; used to seed exact
/// constructions from floating-point candidates.
pub fn from_f64_approx(x: f64, den: i64) -> Rat {
    let num = (x * den as f64).round();
    assert!(num.is_finite());
    Rat::new(BigInt::from(num as i64), BigInt::from(den))
}

/// Renders "p/q", or just "p" when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|e| format!("invalid rational {s:?}: {e}"))?;
        let den: BigInt = den.trim().parse().map_err(|e| format!("invalid rational {s:?}: {e}"))?;
        if den.is_zero() {
            return Err(format!("invalid rational {s:?}: zero denominator"));
        }
        Ok(Rat::new(num, den))
    } else {
        let n: BigInt = t.parse().map_err(|e| format!("invalid rational {s:?}: {e}"))?;
        Ok(Rat::from_integer(n))
    }
}

/// Serde adapter: rationals serialize as "p/q" strings and deserialize
/// from either strings or bare JSON integers.
pub mod rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        RatRepr::deserialize(d)?.try_into().map_err(D::Error::custom)
    }
}

/// JSON-facing representation accepted in input files.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum RatRepr {
    Int(i64),
    Str(String),
}

impl TryFrom<RatRepr> for Rat {
    type Error = String;
    fn try_from(v: RatRepr) -> Result<Rat, String> {
        match v {
            RatRepr::Int(n) => Ok(rat_int(n)),
            RatRepr::Str(s) => rat_from_str(&s),
        }
    }
}

/// Wrapper giving `Vec<RatStr>` the string codec in derived serde types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatStr(pub Rat);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r: Rat = RatRepr::deserialize(d)?.try_into().map_err(D::Error::custom)?;
        Ok(RatStr(r))
    }
}
