//! Exact rational scalars and their JSON encoding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn lcm_denominators(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Positive multiplier `s` such that `s * v` is a primitive integer vector.
/// Returns `None` for the zero vector.
pub fn primitive_scale(v: &[Rat]) -> Option<Rat> {
    let l = lcm_denominators(v);
    let mut g = BigInt::zero();
    for x in v {
        let n = x.numer() * (&l / x.denom());
        g = g.gcd(&n);
    }
    if g.is_zero() {
        None
    } else {
        Some(Rat::new(l, g))
    }
}

pub fn to_integers(v: &[Rat]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

pub fn from_integers(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn is_primitive_integer(v: &[Rat]) -> bool {
    match to_integers(v) {
        Some(ints) => ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).is_one(),
        None => false,
    }
}

/// A machine integer where it fits, a decimal string otherwise.
pub fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(n.to_string()),
    }
}

/// `[num, den]` with machine integers where they fit and decimal strings otherwise.
pub fn to_json(x: &Rat) -> Value {
    Value::Array(vec![int_json(x.numer()), int_json(x.denom())])
}

pub fn vec_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(to_json).collect())
}

fn parse_int(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(format!("non-integer number {n}"))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| format!("bad integer string {s:?}")),
        other => Err(format!("expected integer, found {other}")),
    }
}

/// Accepts `[num, den]`, a bare integer, or a string `"p/q"`.
pub fn from_json(v: &Value) -> Result<Rat, String> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            let n = parse_int(&parts[0])?;
            let d = parse_int(&parts[1])?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Rat::new(n, d))
        }
        Value::Number(_) => Ok(Rat::from_integer(parse_int(v)?)),
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((n, d)) => {
                    let n: BigInt = n.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
                    let d: BigInt = d.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
                    if d.is_zero() {
                        return Err("zero denominator".into());
                    }
                    Ok(Rat::new(n, d))
                }
                None => Ok(Rat::from_integer(parse_int(v)?)),
            }
        }
        other => Err(format!("expected rational, found {other}")),
    }
}

pub fn vec_from_json(v: &Value) -> Result<Vec<Rat>, String> {
    match v {
        Value::Array(items) => items.iter().map(from_json).collect(),
        other => Err(format!("expected array of rationals, found {other}")),
    }
}

/// Serde adapter for a single rational in `[num, den]` form.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        to_json(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let v = Value::deserialize(d)?;
        from_json(&v).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&to_json(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Value::deserialize(d)?;
        vec_from_json(&v).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Vec<Rat>>`.
pub mod serde_mat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            seq.serialize_element(&vec_to_json(row))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let v = Value::deserialize(d)?;
        match v {
            Value::Array(rows) => rows
                .iter()
                .map(vec_from_json)
                .collect::<Result<_, _>>()
                .map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("expected matrix, found {other}"))),
        }
    }
}

/// Human-readable form used in text reports: `3`, `-1/2`.
pub fn show(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn show_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(show).collect();
    format!("({})", parts.join(", "))
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
