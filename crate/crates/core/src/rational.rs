//! Exact rational helpers shared by every module.
//!
//! Densities, thresholds and user-facing probabilities are kept as
//! [`BigRational`]. Decimal inputs such as `0.08` are parsed exactly
//! (`2/25`), so comparisons never depend on float rounding.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn from_biguint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn to_f64(q: &Rational) -> f64 {
    // Ratio::to_f64 handles big numerators without overflowing to inf.
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3/40"`, `"0.075"`, `"1e-3"`-free decimals and integers exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, fracpart) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fracpart.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !fracpart.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{fracpart}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10u32), fracpart.len());
    let q = Rational::new(num, den);
    Ok(if neg { -q } else { q })
}

/// Parses a probability in `[0, 1]`.
pub fn parse_probability(s: &str) -> Result<Rational> {
    let q = parse_rational(s)?;
    if q.is_negative() || q > Rational::one() {
        return Err(Error::Parse(format!("probability out of [0,1]: {s}")));
    }
    Ok(q)
}

/// `⌈q⌉` for nonnegative `q`, as usize.
pub fn ceil_usize(q: &Rational) -> usize {
    q.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

pub fn floor_usize(q: &Rational) -> usize {
    q.floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Serializes a rational as its `a/b` string (`a` when integral).
pub mod serde_fraction {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_fraction_vec {
    use super::{parse_rational, Rational};
    use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// Optional rational; `None` serializes as `null`.
pub mod serde_fraction_opt {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&q.to_string()),
            None => s.serialize_none(),
        }
    }
}

pub mod serde_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("0.08").unwrap(), frac(2, 25));
        assert_eq!(parse_rational("3/40").unwrap(), frac(3, 40));
        assert_eq!(parse_rational("1").unwrap(), int(1));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), frac(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_probability("1.5").is_err());
    }

    #[test]
    fn ceil_floor() {
        assert_eq!(ceil_usize(&frac(5, 4)), 2);
        assert_eq!(ceil_usize(&int(3)), 3);
        assert_eq!(floor_usize(&frac(7, 4)), 1);
    }
}
