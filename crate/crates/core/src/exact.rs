//! Rational helpers and the `{"num", "den", "float"}` JSON encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn int(x: impl Into<BigInt>) -> Rational {
    Rational::from_integer(x.into())
}

pub fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Float view of an exact value (correctly rounded for huge numerators and
/// denominators as well).
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Wire form of an exact rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
    float: f64,
}

impl From<&Rational> for Wire {
    fn from(x: &Rational) -> Self {
        Wire {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
            float: to_f64(x),
        }
    }
}

impl Wire {
    fn into_rational<E: serde::de::Error>(self) -> Result<Rational, E> {
        let num: BigInt = self.num.parse().map_err(E::custom)?;
        let den: BigInt = self.den.parse().map_err(E::custom)?;
        if den.is_zero() {
            return Err(E::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

/// `#[serde(with = "crate::exact::wire")]` for a single rational.
pub mod wire {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Wire::from(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Wire::deserialize(d)?.into_rational()
    }
}

/// `#[serde(with = "crate::exact::wire_vec")]` for a sequence of rationals.
pub mod wire_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let wires: Vec<Wire> = xs.iter().map(Wire::from).collect();
        wires.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .into_iter()
            .map(Wire::into_rational)
            .collect()
    }
}

/// `#[serde(with = "crate::exact::wire_opt")]` for an optional rational.
pub mod wire_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(Wire::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<Wire>::deserialize(d)?
            .map(Wire::into_rational)
            .transpose()
    }
}

/// Parses "3/4", "0.75", "-2" or "1e-3" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fracpart) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && fracpart.is_empty() {
        return None;
    }
    if !whole.chars().chain(fracpart.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{fracpart}").parse().ok()?;
    let scale = exponent - fracpart.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.75"), Some(frac(3, 4)));
        assert_eq!(parse_rational("3/4"), Some(frac(3, 4)));
        assert_eq!(parse_rational("1e-3"), Some(frac(1, 1000)));
        assert_eq!(parse_rational("-2"), Some(int(-2)));
        assert_eq!(parse_rational("1.0"), Some(int(1)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn wire_round_trip() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct Holder {
            #[serde(with = "wire")]
            x: Rational,
            #[serde(with = "wire_vec")]
            xs: Vec<Rational>,
        }
        let h = Holder {
            x: frac(-2, 3),
            xs: vec![int(0), frac(7, 5)],
        };
        let text = serde_json::to_string(&h).unwrap();
        assert!(text.contains(r#""num":"-2","den":"3""#));
        let back: Holder = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn huge_values_still_have_a_float_view() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let x = Rational::new(big.clone() * 3, big * 4);
        assert!((to_f64(&x) - 0.75).abs() < 1e-12);
        let y = Rational::new(num_traits::pow(BigInt::from(10), 400) + 1, num_traits::pow(BigInt::from(10), 399));
        assert!((to_f64(&y) - 10.0).abs() < 1e-9);
    }
}
