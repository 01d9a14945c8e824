//! Exact rational helpers and their canonical `p/q` text form.
//!
//! Every rational that leaves the crate (JSON, CSV) is written as `p/q` with
//! the fraction in lowest terms and a positive denominator, including
//! integers (`3/1`). Parsing accepts the same form plus bare integers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_uint(value: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(value.clone()))
}

pub fn uint_ratio(num: &BigUint, den: &BigUint) -> Rational {
    Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn format_ratio(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.125` (read
/// exactly, not through `f64`).
pub fn parse_ratio(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    if let Some((int, frac)) = text.trim().split_once('.') {
        let negative = int.starts_with('-');
        let int = int.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let value = Rational::new(int * &scale + frac, scale);
        return Ok(if negative { -value } else { value });
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Nearest `f64`, computed without overflowing on huge numerators and
/// denominators.
pub fn to_f64(value: &Rational) -> f64 {
    if let Some(v) = value.to_f64() {
        if v.is_finite() && (v != 0.0 || value.is_zero()) {
            return v;
        }
    }
    // Scale both parts down to 1000-ish bits before dividing.
    let num = value.numer().abs();
    let den = value.denom().clone();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift_n = (nb - 1000).max(0) as usize;
    let shift_d = (db - 1000).max(0) as usize;
    let n = (num >> shift_n).to_f64().unwrap_or(f64::MAX);
    let d = (den >> shift_d).to_f64().unwrap_or(f64::MAX);
    let exp = shift_n as i64 - shift_d as i64;
    let mag = (n / d) * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if value.is_negative() {
        -mag
    } else {
        mag
    }
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Serde adapter writing a [`Rational`] as its `p/q` string.
pub mod serde_ratio {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_ratio, parse_ratio, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_ratio(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_opt_ratio {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_ratio, parse_ratio, Rational};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format_ratio(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_ratio(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integers_keep_their_denominator() {
        assert_eq!(format_ratio(&ratio(6, 2)), "3/1");
        assert_eq!(format_ratio(&ratio(-2, 6)), "-1/3");
        assert_eq!(parse_ratio("7").unwrap(), ratio(7, 1));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_ratio("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_ratio("-2.50").unwrap(), ratio(-5, 2));
        assert_eq!(parse_ratio(".5").unwrap(), ratio(1, 2));
        assert!(parse_ratio("1.").is_err());
        assert!(parse_ratio("1.2.3").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("a/b").is_err());
        assert!(parse_ratio("").is_err());
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let f = factorial(400);
        let r = uint_ratio(&(f.clone() * 3u32), &(f * 7u32));
        assert!((to_f64(&r) - 3.0 / 7.0).abs() < 1e-15);
        let tiny = uint_ratio(&BigUint::one(), &factorial(300));
        assert_eq!(to_f64(&tiny), 0.0);
    }

    proptest! {
        #[test]
        fn text_form_round_trips(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let r = ratio(n, d);
            let text = format_ratio(&r);
            prop_assert_eq!(parse_ratio(&text).unwrap(), r);
            prop_assert_eq!(format_ratio(&parse_ratio(&text).unwrap()), text);
        }
    }
}
