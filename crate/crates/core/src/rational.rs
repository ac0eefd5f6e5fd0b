//! Exact rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub type Ratio = BigRational;

pub fn int(v: usize) -> Ratio {
    Ratio::from_integer(BigInt::from(v))
}

pub fn frac(num: usize, den: usize) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `a` or `a/b`.
pub fn parse(text: &str) -> Option<Ratio> {
    let text = text.trim();
    match text.split_once('/') {
        Some((a, b)) => {
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Ratio::new(a.trim().parse().ok()?, den))
        }
        None => Some(Ratio::from_integer(text.parse().ok()?)),
    }
}

/// Serializes a rational as `"a/b"` (or `"a"` when integral).
pub mod serde_str {
    use super::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

pub mod serde_vec {
    use super::Ratio;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Ratio], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Ratio>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| super::parse(t).ok_or_else(|| serde::de::Error::custom(format!("bad rational {t:?}"))))
            .collect()
    }
}

/// `None` stands for an unbounded value and is written as `"inf"`.
pub mod serde_opt {
    use super::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Ratio>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.collect_str(r),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio>, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            return Ok(None);
        }
        super::parse(&text)
            .map(Some)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}
