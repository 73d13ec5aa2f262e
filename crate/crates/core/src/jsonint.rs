//! Serde adapter for exact integers: JSON numbers up to 2^53 in magnitude,
//! decimal strings above that.

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serializer};

const SAFE: i64 = 1 << 53;

pub fn to_value(x: &BigInt) -> serde_json::Value {
    match i64::try_from(x) {
        Ok(v) if (-SAFE..=SAFE).contains(&v) => serde_json::Value::from(v),
        _ => serde_json::Value::String(x.to_string()),
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) if (-SAFE..=SAFE).contains(&v) => s.serialize_i64(v),
        _ => s.serialize_str(&x.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(i64),
        Str(String),
    }
    match Repr::deserialize(d)? {
        Repr::Num(v) => Ok(BigInt::from(v)),
        Repr::Str(s) => s.parse().map_err(de::Error::custom),
    }
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&to_value(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<serde_json::Value> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|v| match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| de::Error::custom("non-integer number")),
                serde_json::Value::String(s) => s.parse().map_err(de::Error::custom),
                _ => Err(de::Error::custom("expected integer")),
            })
            .collect()
    }
}
