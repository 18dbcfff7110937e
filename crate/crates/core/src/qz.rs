//! Exact elements of Q/Z.
//!
//! Character values are stored additively: `a/d` stands for `exp(2 pi i a/d)`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::gcd;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QZ {
    num: u64,
    den: u64,
}

impl QZ {
    pub const ZERO: QZ = QZ { num: 0, den: 1 };
    pub const HALF: QZ = QZ { num: 1, den: 2 };

    /// The class of `num/den` modulo 1. Panics on a zero denominator.
    pub fn new(num: i128, den: u64) -> QZ {
        assert!(den > 0, "zero denominator in Q/Z");
        let r = num.rem_euclid(den as i128) as u64;
        let g = gcd(r, den);
        if r == 0 {
            return QZ::ZERO;
        }
        QZ { num: r / g, den: den / g }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    /// Order of the element in Q/Z.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn times(self, k: i64) -> QZ {
        let n = (self.num as i128) * (k as i128);
        QZ::new(n.rem_euclid(self.den as i128), self.den)
    }

    /// Numerator of this value written over the denominator `d`, if `d` is a
    /// multiple of the order.
    pub fn over(self, d: u64) -> Option<u64> {
        if d % self.den != 0 {
            return None;
        }
        Some(self.num * (d / self.den))
    }

    /// The `k` solutions `x` of `k x = self`, sorted.
    pub fn divide(self, k: u64) -> Vec<QZ> {
        let base = QZ::new(self.num as i128, self.den * k);
        (0..k).map(|j| base + QZ::new(j as i128, k)).collect::<std::collections::BTreeSet<_>>().into_iter().collect()
    }
}

impl Add for QZ {
    type Output = QZ;
    fn add(self, rhs: QZ) -> QZ {
        let g = gcd(self.den, rhs.den);
        let den = self.den / g * rhs.den;
        let n = self.num as u128 * (den / self.den) as u128 + rhs.num as u128 * (den / rhs.den) as u128;
        QZ::new((n % den as u128) as i128, den)
    }
}

impl AddAssign for QZ {
    fn add_assign(&mut self, rhs: QZ) {
        *self = *self + rhs;
    }
}

impl Neg for QZ {
    type Output = QZ;
    fn neg(self) -> QZ {
        QZ::new(-(self.num as i128), self.den)
    }
}

impl Sub for QZ {
    type Output = QZ;
    fn sub(self, rhs: QZ) -> QZ {
        self + (-rhs)
    }
}

impl std::iter::Sum for QZ {
    fn sum<I: Iterator<Item = QZ>>(iter: I) -> QZ {
        iter.fold(QZ::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse `{0}` as an element of Q/Z")]
pub struct ParseQZError(String);

impl FromStr for QZ {
    type Err = ParseQZError;

    fn from_str(s: &str) -> Result<QZ, ParseQZError> {
        let err = || ParseQZError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let a: i128 = a.trim().parse().map_err(|_| err())?;
                let b: u64 = b.trim().parse().map_err(|_| err())?;
                if b == 0 {
                    return Err(err());
                }
                Ok(QZ::new(a, b))
            }
            None => {
                let a: i128 = s.parse().map_err(|_| err())?;
                Ok(QZ::new(a, 1))
            }
        }
    }
}

impl Serialize for QZ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<QZ, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_mod_one() {
        assert_eq!(QZ::new(7, 4), QZ::new(3, 4));
        assert_eq!(QZ::new(-1, 4), QZ::new(3, 4));
        assert_eq!(QZ::new(2, 4).order(), 2);
        assert!(QZ::new(6, 3).is_zero());
        assert_eq!(QZ::HALF + QZ::HALF, QZ::ZERO);
        assert_eq!("3/12".parse::<QZ>().unwrap(), QZ::new(1, 4));
    }

    #[test]
    fn halves_of_a_value() {
        let h = QZ::new(1, 3).divide(2);
        assert_eq!(h.len(), 2);
        for x in h {
            assert_eq!(x + x, QZ::new(1, 3));
        }
    }

    proptest! {
        #[test]
        fn group_laws(a in -50i128..50, b in 1u64..40, c in -50i128..50, d in 1u64..40, k in -9i64..9) {
            let x = QZ::new(a, b);
            let y = QZ::new(c, d);
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!(x - x, QZ::ZERO);
            prop_assert_eq!((x + y).times(k), x.times(k) + y.times(k));
            prop_assert_eq!(x.times(x.order() as i64), QZ::ZERO);
        }
    }
}
