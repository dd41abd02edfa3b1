//! Exact rational helpers: parsing, `"p/q"` formatting, serde adapters and
//! floating-point logarithms of big rationals.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{invalid, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"-p/q"`, `"+p/q"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        t.parse::<BigInt>()
            .or_else(|_| invalid(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return invalid(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Lowest-terms `"p/q"`; integers are still written with `/1` so that every
/// rational field has one shape on the wire.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (n, d) = (x.numer().abs(), x.denom().clone());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // keep ~60 significant bits on each side before dividing
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let nf = (&n >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let df = (&d >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    let v = nf / df * 2f64.powi((shift_n - shift_d) as i32);
    if x.is_negative() {
        -v
    } else {
        v
    }
}

/// Natural logarithm of a positive rational, accurate to f64 precision even
/// when numerator and denominator are far outside the f64 range.
pub fn ln_rational(x: &Rational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_big(x.numer().magnitude()) - ln_big(x.denom().magnitude())
}

fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits() as i64;
    let shift = (bits - 60).max(0);
    let mantissa = (n >> shift as usize).to_f64().unwrap_or(f64::NAN);
    mantissa.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

/// Rounds a float to the nearest multiple of `1/den`, the form used for
/// search candidates before exact confirmation.
pub fn round_to_denominator(x: f64, den: u64) -> Rational {
    let scaled = (x * den as f64).round() as i64;
    Rational::new(BigInt::from(scaled), BigInt::from(den))
}

pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).map_err(serde::de::Error::custom)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod table {
    use super::*;

    pub fn serialize<S: Serializer>(
        rows: &[Vec<Rational>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = rows
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        serde::Serialize::serialize(&strings, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&format_rational(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(format_rational(&rat(4, -6)), "-2/3");
        assert_eq!(format_rational(&int(0)), "0/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn float_conversions_handle_huge_values() {
        let big = pow(&rat(27, 26), 4000);
        let expected = 4000.0 * (27.0f64 / 26.0).ln();
        assert!((ln_rational(&big) - expected).abs() < 1e-9 * expected);
        assert!((to_f64(&rat(-1, 3)) + 1.0 / 3.0).abs() < 1e-16);
        let tiny = pow(&rat(1, 3), 50);
        assert!((to_f64(&tiny) / 3f64.powi(-50) - 1.0).abs() < 1e-14);
    }
}
