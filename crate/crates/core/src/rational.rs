//! Exact rational scalars and their string encoding.
//!
//! Every quantity in the engine is an exact rational. On the wire a rational
//! is a string: `"13/3"`, `"-1/2"`, or `"4"` when the denominator is one.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Q = num_rational::Ratio<i128>;

pub fn q(numer: i128, denom: i128) -> Q {
    Q::new(numer, denom)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => s.parse::<i128>().map(Q::from_integer).map_err(|_| bad()),
    }
}

/// `Some(n)` when `x` is an integer.
pub fn as_integer(x: &Q) -> Option<i128> {
    x.is_integer().then(|| x.to_integer())
}

/// Largest integer `<= x`.
pub fn floor(x: &Q) -> i128 {
    x.numer().div_floor(x.denom())
}

/// Compare `sqrt(a)` against `b` exactly for `a >= 0`.
pub fn sqrt_lt(a: &Q, b: &Q) -> bool {
    debug_assert!(!a.is_negative());
    b.is_positive() && *a < b * b
}

/// Serde adapter: `Q` as a `"p/q"` string, also accepting bare JSON integers.
pub mod serde_q {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_q, Q};

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Raw {
        Int(i64),
        Str(String),
    }

    impl Raw {
        pub(crate) fn into_q(self) -> Result<Q, String> {
            match self {
                Raw::Int(n) => Ok(Q::from_integer(n as i128)),
                Raw::Str(s) => parse_q(&s).map_err(|e| e.to_string()),
            }
        }
    }

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        Raw::deserialize(d)?.into_q().map_err(serde::de::Error::custom)
    }
}

pub mod serde_opt_q {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::serde_q::Raw;
    use super::Q;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<Raw>::deserialize(d)?
            .map(|r| r.into_q().map_err(serde::de::Error::custom))
            .transpose()
    }
}
