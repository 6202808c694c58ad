//! Exact rational helpers shared by every module.
//!
//! Values are `BigRational`; on the wire they travel as `"p/q"` strings (or a
//! bare integer when the denominator is one).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^{-n}`.
pub fn pow2_neg(n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n)
}

pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::Syntax(format!("bad rational {text:?}")))?;
    let den: BigInt = den.parse().map_err(|_| Error::Syntax(format!("bad rational {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Syntax(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format(q: &Rational) -> String {
    q.to_string()
}

/// Exact decimal expansion truncated toward zero after `digits` places.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let q = q.abs();
    let (whole, mut rem) = q.numer().div_rem(q.denom());
    let mut out = String::new();
    if neg && !q.is_zero() {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        out.push('.');
        let ten = BigInt::from(10);
        for _ in 0..digits {
            rem *= &ten;
            let (d, r) = rem.div_rem(q.denom());
            out.push(char::from(b'0' + d.to_u8().unwrap_or(0)));
            rem = r;
        }
    }
    out
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_str_vec {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&super::format(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts.iter().map(|t| super::parse(t).map_err(serde::de::Error::custom)).collect()
    }
}
