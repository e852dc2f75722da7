//! Exact arithmetic in Q/Z.
//!
//! A value is a reduced fraction p/q with 0 <= p < q, q >= 1. Addition is
//! addition of rationals modulo 1. Zero is 0/1. The canonical rendering is
//! the string `"p/q"`, which is also the JSON encoding.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Element of Q/Z as a reduced fraction p/q in [0, 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    /// Builds p/q mod 1, reducing to canonical form. `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> QmodZ {
        assert!(den != 0, "QmodZ denominator must be nonzero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        num = num.rem_euclid(den);
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        QmodZ { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    /// Additive order: the smallest k >= 1 with k * self == 0.
    pub fn order(&self) -> i64 {
        self.den
    }

    /// The canonical rational lift into [0, 1).
    pub fn lift(&self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }

    /// Reduction of an arbitrary rational modulo 1.
    pub fn from_ratio(r: Ratio<i64>) -> QmodZ {
        QmodZ::new(*r.numer(), *r.denom())
    }

    /// Integer scalar multiple k * self.
    pub fn scale(&self, k: i64) -> QmodZ {
        // (k mod den) keeps the product within i64 range for sane inputs.
        let k = k.rem_euclid(self.den);
        QmodZ::new(self.num.checked_mul(k).expect("QmodZ scale overflow"), self.den)
    }

    /// Parses the canonical form "p/q" (also accepts a bare integer as p/1).
    pub fn parse(s: &str) -> Result<QmodZ> {
        let parse_int = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::schema("", format!("not an integer: `{t}`")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let den = parse_int(q)?;
                if den == 0 {
                    return Err(Error::schema("", "zero denominator"));
                }
                Ok(QmodZ::new(parse_int(p)?, den))
            }
            None => Ok(QmodZ::new(parse_int(s)?, 1)),
        }
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        QmodZ::from_ratio(self.lift() + rhs.lift())
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, rhs: QmodZ) -> QmodZ {
        QmodZ::from_ratio(self.lift() - rhs.lift())
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(-self.num, self.den)
    }
}

impl Mul<i64> for QmodZ {
    type Output = QmodZ;
    fn mul(self, k: i64) -> QmodZ {
        self.scale(k)
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QmodZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<QmodZ, D::Error> {
        let s = String::deserialize(d)?;
        QmodZ::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(QmodZ::new(3, 6).to_string(), "1/2");
        assert_eq!(QmodZ::new(-1, 4).to_string(), "3/4");
        assert_eq!(QmodZ::new(7, -4).to_string(), "1/4");
        assert_eq!(QmodZ::new(8, 4), QmodZ::ZERO);
        assert_eq!(QmodZ::ZERO.to_string(), "0/1");
    }

    #[test]
    fn arithmetic_mod_one() {
        let a = QmodZ::new(2, 3);
        let b = QmodZ::new(1, 2);
        assert_eq!(a + b, QmodZ::new(1, 6));
        assert_eq!(a - a, QmodZ::ZERO);
        assert_eq!(-a, QmodZ::new(1, 3));
        assert_eq!(a.scale(3), QmodZ::ZERO);
        assert_eq!(a.order(), 3);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0/1", "1/2", "5/7"] {
            assert_eq!(QmodZ::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(QmodZ::parse("9/6").unwrap(), QmodZ::new(1, 2));
        assert!(QmodZ::parse("1/0").is_err());
        assert!(QmodZ::parse("x").is_err());
    }
}
