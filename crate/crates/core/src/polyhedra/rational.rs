//! Arbitrary-precision rationals and the handful of helpers the rest of the
//! crate needs on top of `num-rational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p/q` or an integer. Whitespace around the token is not accepted.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales `v` by a positive factor so that its first nonzero entry has
/// absolute value one. Returns the factor used (one for the zero vector).
pub fn normalize_leading(v: &mut [Rational]) -> Rational {
    let Some(lead) = v.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
        return Rational::one();
    };
    let factor = lead.recip();
    for x in v.iter_mut() {
        *x = &*x * &factor;
    }
    factor
}

/// Serde adapters: rationals travel as `"p/q"` strings in every JSON format.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| D::Error::custom(format!("bad rational {text:?}")))
    }
}

pub mod serde_rational_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).ok_or_else(|| D::Error::custom(format!("bad rational {t:?}"))))
            .collect()
    }
}

pub mod serde_rational_matrix {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let text = Vec::<Vec<String>>::deserialize(d)?;
        text.iter()
            .map(|row| {
                row.iter()
                    .map(|t| {
                        parse_rational(t)
                            .ok_or_else(|| D::Error::custom(format!("bad rational {t:?}")))
                    })
                    .collect()
            })
            .collect()
    }
}
