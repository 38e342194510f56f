//! Integer and rational encodings shared by the JSON formats.
//!
//! Integers that fit in an `i64` are written as JSON numbers and anything
//! larger as a decimal string; both forms are accepted on input. Rationals are
//! `"num/den"` strings (or a bare integer).

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::scalar::{Int, Rat};

pub fn int_to_value<T: Int>(v: &T) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::from(v.to_string()),
    }
}

pub fn value_to_int<T: Int>(v: &Value) -> Option<T> {
    match v {
        Value::Number(n) => n.as_i64().and_then(T::from_i64),
        Value::String(s) => T::parse_decimal(s),
        _ => None,
    }
}

pub fn rat_to_string<T: Int>(r: &Rat<T>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat<T: Int>(s: &str) -> Option<Rat<T>> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d = T::parse_decimal(d)?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(T::parse_decimal(n)?, d))
        }
        None => Some(Rat::from_integer(T::parse_decimal(s)?)),
    }
}

pub fn serialize_ints<T: Int, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    let values: Vec<Value> = v.iter().map(int_to_value).collect();
    values.serialize(s)
}

pub fn deserialize_ints<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
    let values = Vec::<Value>::deserialize(d)?;
    values.iter().map(|v| value_to_int(v).ok_or_else(|| D::Error::custom(format!("not an integer: {v}")))).collect()
}

pub fn serialize_int<T: Int, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    int_to_value(v).serialize(s)
}

pub fn deserialize_int<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
    let v = Value::deserialize(d)?;
    value_to_int(&v).ok_or_else(|| D::Error::custom(format!("not an integer: {v}")))
}

pub fn serialize_rat<T: Int, S: Serializer>(v: &Rat<T>, s: S) -> Result<S::Ok, S::Error> {
    rat_to_string(v).serialize(s)
}

pub fn deserialize_rat<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<Rat<T>, D::Error> {
    let v = Value::deserialize(d)?;
    match &v {
        Value::String(s) => parse_rat(s),
        Value::Number(_) => value_to_int(&v).map(Rat::from_integer),
        _ => None,
    }
    .ok_or_else(|| D::Error::custom(format!("not a rational: {v}")))
}

/// Integer matrices as arrays of integer rows.
pub fn serialize_rows<T: Int, S: Serializer>(rows: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
    let values: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(int_to_value).collect()).collect();
    values.serialize(s)
}

pub fn deserialize_rows<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<T>>, D::Error> {
    let values = Vec::<Vec<Value>>::deserialize(d)?;
    values
        .iter()
        .map(|r| {
            r.iter().map(|v| value_to_int(v).ok_or_else(|| D::Error::custom(format!("not an integer: {v}")))).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn big_integers_survive_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = int_to_value(&big);
        assert!(v.is_string());
        assert_eq!(value_to_int::<BigInt>(&v), Some(big));
        assert_eq!(int_to_value(&BigInt::from(-7)), Value::from(-7));
    }

    #[test]
    fn rationals_round_trip() {
        let r: Rat<BigInt> = Rat::new(BigInt::from(-2116), BigInt::from(413));
        assert_eq!(rat_to_string(&r), "-2116/413");
        assert_eq!(parse_rat::<BigInt>("-2116/413"), Some(r));
        assert_eq!(parse_rat::<BigInt>("4"), Some(Rat::from_integer(BigInt::from(4))));
        assert_eq!(parse_rat::<BigInt>("1/0"), None);
    }
}
