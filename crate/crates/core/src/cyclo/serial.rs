use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Cyclotomic;

/// Integer that serializes as a JSON number when it fits in i64, else as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match IntRepr::deserialize(d)? {
            IntRepr::Small(v) => Ok(JsonInt(BigInt::from(v))),
            IntRepr::Big(s) => s.parse().map(JsonInt).map_err(D::Error::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    conductor: u32,
    terms: Vec<(usize, JsonInt, JsonInt)>,
    #[serde(default, skip_deserializing)]
    approx: (f64, f64),
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            conductor: self.conductor(),
            terms: self
                .terms()
                .map(|(k, c)| (k, JsonInt(c.numer().clone()), JsonInt(c.denom().clone())))
                .collect(),
            approx: self.approx(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let mut coeffs = vec![BigRational::zero(); w.conductor as usize];
        for (k, num, den) in w.terms {
            if k >= w.conductor as usize {
                return Err(D::Error::custom(format!("exponent {k} not below conductor {}", w.conductor)));
            }
            if den.0.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs[k] += BigRational::new(num.0, den.0);
        }
        Ok(Cyclotomic::from_coeffs(w.conductor, &coeffs))
    }
}
