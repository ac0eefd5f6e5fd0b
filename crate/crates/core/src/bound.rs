use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A non-negative limit that may be absent.
///
/// `Finite(k) < Unbounded` for every `k`, so the derived ordering is total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(u32),
    Unbounded,
}

impl Bound {
    pub const INF: Bound = Bound::Unbounded;

    pub fn finite(self) -> Option<u32> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Bound::Unbounded)
    }

    /// `value <= self`.
    pub fn admits(self, value: usize) -> bool {
        match self {
            Bound::Finite(v) => value <= v as usize,
            Bound::Unbounded => true,
        }
    }

    /// Finite value, or `fallback` when unbounded.
    pub fn or_cap(self, fallback: usize) -> usize {
        match self {
            Bound::Finite(v) => v as usize,
            Bound::Unbounded => fallback,
        }
    }
}

impl From<u32> for Bound {
    fn from(v: u32) -> Self {
        Bound::Finite(v)
    }
}

impl PartialEq<u32> for Bound {
    fn eq(&self, other: &u32) -> bool {
        *self == Bound::Finite(*other)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => s.serialize_u32(*v),
            Bound::Unbounded => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct BoundVisitor;

        impl Visitor<'_> for BoundVisitor {
            type Value = Bound;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Bound, E> {
                u32::try_from(v)
                    .map(Bound::Finite)
                    .map_err(|_| E::custom("bound too large; use \"inf\""))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Bound, E> {
                if v < 0 {
                    return Err(E::custom("bounds are non-negative"));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Bound, E> {
                match v {
                    "inf" | "infinity" | "∞" => Ok(Bound::Unbounded),
                    other => other
                        .parse::<u32>()
                        .map(Bound::Finite)
                        .map_err(|_| E::custom(format!("invalid bound {other:?}"))),
                }
            }
        }

        d.deserialize_any(BoundVisitor)
    }
}
