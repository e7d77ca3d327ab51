//! The `compute` result document and JSON helpers for big integers.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::euler::{compute_both, compute_c_normal_bundle, relative_sign};
use crate::factor::factorize;
use crate::seed::SeedData;

/// Writes an integer as a bare JSON number of arbitrary size.
pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde_json::Number::from_str(&x.to_string())
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

pub fn ser_biguint<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_bigint(&BigInt::from(x.clone()), s)
}

pub fn ser_bigint_vec<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(
            &serde_json::Number::from_str(&x.to_string()).map_err(serde::ser::Error::custom)?,
        )?;
    }
    seq.end()
}

pub fn de_bigint<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    let n = serde_json::Number::deserialize(d)?;
    n.to_string().parse().map_err(serde::de::Error::custom)
}

/// `[p, e]` pair with `p` as an arbitrary-size number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower(pub BigUint, pub u32);

impl Serialize for PrimePower {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(
            &serde_json::Number::from_str(&self.0.to_string())
                .map_err(serde::ser::Error::custom)?,
        )?;
        t.serialize_element(&self.1)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for PrimePower {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (p, e) = <(serde_json::Number, u32)>::deserialize(d)?;
        Ok(PrimePower(
            p.to_string().parse().map_err(serde::de::Error::custom)?,
            e,
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComputeReport {
    pub seed: SeedData,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub len_x: usize,
    #[serde(
        rename = "C_direct",
        serialize_with = "ser_bigint",
        deserialize_with = "de_bigint"
    )]
    pub c_direct: BigInt,
    #[serde(
        rename = "C_euler",
        serialize_with = "ser_bigint",
        deserialize_with = "de_bigint"
    )]
    pub c_euler: BigInt,
    /// `C_euler = sign · C_direct`.
    pub sign: i8,
    /// Push-forward of the literal normal-bundle weight class equals
    /// `normal_bundle_sign · C_direct`.
    pub normal_bundle_sign: i8,
    #[serde(
        rename = "C_abs",
        serialize_with = "ser_bigint",
        deserialize_with = "de_bigint"
    )]
    pub c_abs: BigInt,
    pub factorization: Vec<PrimePower>,
    pub verdict: String,
}

pub fn compute_report(seed: &SeedData) -> Result<ComputeReport> {
    let routes = compute_both(seed)?;
    let normal = compute_c_normal_bundle(seed)?;
    let normal_bundle_sign = relative_sign(&normal, &routes.direct).ok_or_else(|| {
        crate::error::Error::RouteDisagreement {
            seed: serde_json::to_string(seed).unwrap_or_default(),
            direct: routes.direct.to_string(),
            euler: normal.to_string(),
        }
    })?;
    let c_abs = routes.abs();
    let factorization: Vec<PrimePower> = if c_abs == BigInt::from(0) {
        Vec::new()
    } else {
        factorize(&c_abs)?
            .into_iter()
            .map(|(p, e)| PrimePower(p, e))
            .collect()
    };
    let verdict = verdict(&c_abs, &factorization);
    Ok(ComputeReport {
        seed: seed.clone(),
        big_n: seed.ambient(),
        len_x: seed.expected_x_length(),
        c_direct: routes.direct,
        c_euler: routes.euler,
        sign: routes.sign,
        normal_bundle_sign,
        c_abs,
        factorization,
        verdict,
    })
}

fn verdict(c_abs: &BigInt, factors: &[PrimePower]) -> String {
    if *c_abs == BigInt::from(0) {
        "C = 0: no conclusion".to_string()
    } else if factors.is_empty() {
        "no torsion detected".to_string()
    } else {
        let primes: Vec<String> = factors.iter().map(|f| f.0.to_string()).collect();
        format!(
            "decomposition theorem fails with Z/{c_abs}Z coefficients at w_I; p-torsion for p in {{{}}}",
            primes.join(", ")
        )
    }
}
