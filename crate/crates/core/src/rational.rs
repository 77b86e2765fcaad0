//! Rational helpers: binomials and the `{"num": "..", "den": ".."}` wire form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `C(n, k)`, and 0 whenever `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Wire form of a rational: decimal strings in lowest terms, positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(q: &BigRational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<RationalJson> for BigRational {
    type Error = String;

    fn try_from(raw: RationalJson) -> Result<Self, String> {
        let num: BigInt = raw.num.parse().map_err(|e| format!("numerator {:?}: {e}", raw.num))?;
        let den: BigInt = raw.den.parse().map_err(|e| format!("denominator {:?}: {e}", raw.den))?;
        if !den.is_positive() {
            return Err(format!("denominator {den} must be positive"));
        }
        Ok(BigRational::new(num, den))
    }
}

pub fn serialize<S: Serializer>(q: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
    RationalJson::from(q).serialize(serializer)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigRational, D::Error> {
    RationalJson::deserialize(deserializer)?
        .try_into()
        .map_err(serde::de::Error::custom)
}

pub(crate) mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(qs: &[BigRational], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(qs.iter().map(RationalJson::from))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<RationalJson>::deserialize(deserializer)?
            .into_iter()
            .map(|r| r.try_into().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Nearest `f64`, for reporting only.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 3), BigInt::from(4));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(60, 30), "118264581564861424".parse().unwrap());
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn json_form_is_canonical() {
        let q = BigRational::new(BigInt::from(2), BigInt::from(-4));
        let j = RationalJson::from(&q);
        assert_eq!((j.num.as_str(), j.den.as_str()), ("-1", "2"));
        assert!(BigRational::try_from(RationalJson { num: "1".into(), den: "0".into() }).is_err());
        assert!(BigRational::try_from(RationalJson { num: "x".into(), den: "1".into() }).is_err());
    }
}
