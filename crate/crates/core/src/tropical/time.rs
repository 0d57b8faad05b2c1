use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arrival time of a rising edge, in integer ticks of the machine clock.
///
/// `Infinity` is an edge that never arrives. It is the additive identity
/// (`min`) and absorbing for tropical multiplication (`+`). The derived
/// ordering places every finite tick before `Infinity`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeValue {
    Finite(u64),
    Infinity,
}

pub use TimeValue::Infinity as INF;

impl TimeValue {
    pub const ZERO: TimeValue = TimeValue::Finite(0);

    pub const fn ticks(t: u64) -> Self {
        TimeValue::Finite(t)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, TimeValue::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            TimeValue::Finite(t) => Some(t),
            TimeValue::Infinity => None,
        }
    }

    /// Tropical product (delay) that reports tick-counter overflow instead of wrapping.
    pub fn checked_delay(self, other: TimeValue) -> Option<TimeValue> {
        match (self, other) {
            (TimeValue::Finite(a), TimeValue::Finite(b)) => a.checked_add(b).map(TimeValue::Finite),
            _ => Some(TimeValue::Infinity),
        }
    }

    /// Ordinary subtraction of a finite offset; infinity is unchanged.
    pub(crate) fn advance_origin(self, by: u64) -> TimeValue {
        match self {
            TimeValue::Finite(t) => TimeValue::Finite(t - by),
            TimeValue::Infinity => TimeValue::Infinity,
        }
    }
}

impl Default for TimeValue {
    fn default() -> Self {
        TimeValue::Infinity
    }
}

impl From<u64> for TimeValue {
    fn from(t: u64) -> Self {
        TimeValue::Finite(t)
    }
}

impl fmt::Debug for TimeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TimeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeValue::Finite(t) => write!(f, "{t}"),
            TimeValue::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid time value {0:?}")]
pub struct ParseTimeError(String);

impl FromStr for TimeValue {
    type Err = ParseTimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(TimeValue::Infinity);
        }
        s.parse::<u64>()
            .map(TimeValue::Finite)
            .map_err(|_| ParseTimeError(s.to_string()))
    }
}

// JSON has no portable infinity, so it travels as the string "inf".
impl Serialize for TimeValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TimeValue::Finite(t) => serializer.serialize_u64(*t),
            TimeValue::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for TimeValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TimeVisitor;

        impl Visitor<'_> for TimeVisitor {
            type Value = TimeValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<TimeValue, E> {
                Ok(TimeValue::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<TimeValue, E> {
                u64::try_from(v)
                    .map(TimeValue::Finite)
                    .map_err(|_| E::custom(format!("negative time value {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<TimeValue, E> {
                if v == "inf" {
                    Ok(TimeValue::Infinity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(TimeVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_infinity_last() {
        assert!(TimeValue::Finite(u64::MAX) < INF);
        assert!(TimeValue::Finite(0) < TimeValue::Finite(1));
    }

    #[test]
    fn json_uses_inf_string() {
        let v = vec![TimeValue::Finite(3), INF];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[3,"inf"]"#);
        let back: Vec<TimeValue> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<TimeValue>("-1").is_err());
        assert!(serde_json::from_str::<TimeValue>(r#""infinity""#).is_err());
    }

    #[test]
    fn parse_text() {
        assert_eq!("inf".parse::<TimeValue>().unwrap(), INF);
        assert_eq!(" 12 ".parse::<TimeValue>().unwrap(), TimeValue::Finite(12));
        assert!("-3".parse::<TimeValue>().is_err());
    }
}
