//! Serde adapters writing big integers as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    String::deserialize(d)?
        .parse()
        .map_err(serde::de::Error::custom)
}

/// `Option<(BigInt, i64)>` as `null` or `["coeff", exponent]`.
pub mod opt_pair {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<(BigInt, i64)>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|(c, e)| (c.to_string(), *e)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<(BigInt, i64)>, D::Error> {
        Option::<(String, i64)>::deserialize(d)?
            .map(|(c, e)| c.parse().map(|c| (c, e)).map_err(serde::de::Error::custom))
            .transpose()
    }
}
