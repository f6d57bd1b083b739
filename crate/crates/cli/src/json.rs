//! Exact numbers in JSON: integers as JSON numbers of any size, rationals as
//! `"p/q"` strings.

use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use torifan_core::linalg::{Int, Rat};
use torifan_core::{LatticeVector, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z(pub Int);

impl Serialize for Z {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&self.0.to_string())
            .expect("integers are valid JSON numbers")
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Z {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        parse_int(&n).map(Z).map_err(serde::de::Error::custom)
    }
}

/// Integers only; `1.0` and `1e3` are rejected rather than rounded.
pub fn parse_int(n: &serde_json::Number) -> Result<Int, String> {
    let s = n.to_string();
    Int::from_str(&s).map_err(|_| format!("expected an integer, found {s}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rat);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map(Q).map_err(serde::de::Error::custom)
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s.trim()).map_err(|_| format!("expected a rational \"p/q\", found {s:?}"))
}

pub fn zvec(v: &LatticeVector) -> Vec<Z> {
    v.coords().iter().cloned().map(Z).collect()
}

pub fn qvec(v: &RationalVector) -> Vec<Q> {
    v.coords().iter().cloned().map(Q).collect()
}

pub fn lattice(v: &[Z]) -> LatticeVector {
    LatticeVector::new(v.iter().map(|z| z.0.clone()).collect())
}

pub fn rational(v: &[Q]) -> RationalVector {
    RationalVector::new(v.iter().map(|q| q.0.clone()).collect())
}
