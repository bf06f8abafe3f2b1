//! Exponents in `[1, ∞]` with an exact representation of infinity.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Lebesgue exponent `p ∈ [1, ∞]`.
///
/// Infinity is its own variant and is never approximated by a large float,
/// so `1 ↔ ∞` conjugation is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(format!("{p} is not in [1, inf]")));
        }
        if p.is_infinite() {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    /// Value as `f64` (`f64::INFINITY` for ∞); only for comparisons.
    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn min(self, other: Exponent) -> Exponent {
        if self.as_f64() <= other.as_f64() {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Exponent) -> Exponent {
        if self.as_f64() >= other.as_f64() {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidExponent(format!("cannot parse {t:?}")))?;
                if p.is_infinite() {
                    // "1e999" and friends: refuse rather than silently mapping to ∞
                    return Err(Error::InvalidExponent(format!(
                        "{t:?} overflows; write `inf` for infinity"
                    )));
                }
                Exponent::new(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

/// One exponent per coordinate of a multilinear form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PExponents(Vec<Exponent>);

impl PExponents {
    pub fn new(ps: Vec<Exponent>) -> Result<Self> {
        if ps.is_empty() {
            return Err(Error::InvalidExponent("exponent list is empty".into()));
        }
        Ok(Self(ps))
    }

    pub fn uniform(p: Exponent, d: usize) -> Self {
        Self(vec![p; d.max(1)])
    }

    /// Parse a comma separated list such as `2,4,inf`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let ps = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Exponent>>>()?;
        Self::new(ps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Exponent] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Exponent> + '_ {
        self.0.iter().copied()
    }

    pub fn get(&self, k: usize) -> Exponent {
        self.0[k]
    }

    /// `max_k p_k`.
    pub fn max(&self) -> Exponent {
        self.iter().fold(Exponent::ONE, Exponent::max)
    }

    /// `|1/p| = Σ 1/p_k`.
    pub fn recip_sum(&self) -> f64 {
        self.iter().map(Exponent::recip).sum()
    }

    pub fn all_at_least(&self, bound: f64) -> bool {
        self.iter().all(|p| p.as_f64() >= bound)
    }

    pub fn all_infinite(&self) -> bool {
        self.iter().all(Exponent::is_infinite)
    }
}

impl fmt::Display for PExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_is_exact_at_the_ends() {
        assert_eq!(Exponent::ONE.conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.conjugate(), Exponent::ONE);
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
        for p in [1.25, 1.5, 3.0, 7.5] {
            let q = Exponent::Finite(p).conjugate();
            assert!((1.0 / p + q.recip() - 1.0).abs() < 1e-15);
            assert!((q.conjugate().as_f64() - p).abs() < 1e-12 * p);
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!(" INF ".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("1e999".parse::<Exponent>().is_err());
        assert!("nan".parse::<Exponent>().is_err());
        let ps = PExponents::parse_list("2,inf,4").unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.to_string(), "2,inf,4");
        assert!((ps.recip_sum() - 0.75).abs() < 1e-15);
        assert_eq!(ps.max(), Exponent::Infinity);
    }

    #[test]
    fn json_uses_inf_token() {
        let ps = PExponents::parse_list("2,inf").unwrap();
        let s = serde_json::to_string(&ps).unwrap();
        assert_eq!(s, r#"[2.0,"inf"]"#);
        let back: PExponents = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ps);
        let ints: PExponents = serde_json::from_str("[3, \"inf\"]").unwrap();
        assert_eq!(ints.get(0), Exponent::Finite(3.0));
    }
}
