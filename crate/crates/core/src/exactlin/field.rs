use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground field. Either the prime field F_p or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u32),
    Rationals,
}

/// A field element. Over F_p the value is `num` reduced into `[0, p)` and
/// `den == 1`; over Q it is a reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Scalar {
    num: i64,
    den: i64,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { num: 0, den: 1 };
    pub const ONE: Scalar = Scalar { num: 1, den: 1 };

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Schema(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rationals => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Number of elements, `None` for Q.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(*p as u64),
            Field::Rationals => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar { num: v.rem_euclid(*p as i64), den: 1 },
            Field::Rationals => Scalar { num: v, den: 1 },
        }
    }

    pub fn from_frac(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Schema("zero denominator".into()));
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        let inv = self
            .inv(d)
            .ok_or_else(|| Error::Schema(format!("denominator {den} vanishes in the field")))?;
        Ok(self.mul(n, inv))
    }

    fn make_rational(num: i128, den: i128) -> Scalar {
        assert!(den != 0);
        let g = gcd(num, den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let n = i64::try_from(n).expect("rational numerator overflow");
        let d = i64::try_from(d).expect("rational denominator overflow");
        Scalar { num: n, den: d }
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            Field::Prime(p) => {
                let s = a.num + b.num;
                let p = *p as i64;
                Scalar { num: if s >= p { s - p } else { s }, den: 1 }
            }
            Field::Rationals => {
                if a.den == 1 && b.den == 1 {
                    return Self::make_rational(a.num as i128 + b.num as i128, 1);
                }
                Self::make_rational(
                    a.num as i128 * b.den as i128 + b.num as i128 * a.den as i128,
                    a.den as i128 * b.den as i128,
                )
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        match self {
            Field::Prime(p) => Scalar { num: if a.num == 0 { 0 } else { *p as i64 - a.num }, den: 1 },
            Field::Rationals => Scalar { num: -a.num, den: a.den },
        }
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            Field::Prime(p) => Scalar { num: (a.num * b.num) % (*p as i64), den: 1 },
            Field::Rationals => {
                Self::make_rational(a.num as i128 * b.num as i128, a.den as i128 * b.den as i128)
            }
        }
    }

    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a.num == 0 {
            return None;
        }
        match self {
            Field::Prime(p) => {
                let p = *p as i64;
                // extended Euclid
                let (mut r0, mut r1) = (p, a.num);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                Some(Scalar { num: t0.rem_euclid(p), den: 1 })
            }
            Field::Rationals => Some(Self::make_rational(a.den as i128, a.num as i128)),
        }
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// All elements in a fixed order (0, 1, ..., p-1). Empty for Q.
    pub fn elements(&self) -> Vec<Scalar> {
        match self {
            Field::Prime(p) => (0..*p as i64).map(|v| Scalar { num: v, den: 1 }).collect(),
            Field::Rationals => Vec::new(),
        }
    }

    /// Uniform element over F_p; small integers over Q.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Prime(p) => Scalar { num: rng.gen_range(0..*p as i64), den: 1 },
            Field::Rationals => Scalar { num: rng.gen_range(-9..=9), den: 1 },
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn sum<I: IntoIterator<Item = Scalar>>(&self, it: I) -> Scalar {
        it.into_iter().fold(Scalar::ZERO, |acc, x| self.add(acc, x))
    }

    /// Canonical signed integer representative, used when printing F_p values.
    pub fn signed(&self, a: Scalar) -> Scalar {
        match self {
            Field::Prime(p) => {
                let p = *p as i64;
                if a.num > p / 2 {
                    Scalar { num: a.num - p, den: 1 }
                } else {
                    a
                }
            }
            Field::Rationals => a,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_inverse_roundtrip() {
        let f = Field::Prime(101);
        for a in f.elements().into_iter().skip(1) {
            let ai = f.inv(a).unwrap();
            assert_eq!(f.mul(a, ai), f.one());
        }
    }

    #[test]
    fn rationals_reduce() {
        let q = Field::Rationals;
        let a = q.from_frac(2, 4).unwrap();
        let b = q.from_frac(-1, -2).unwrap();
        assert_eq!(a, b);
        assert_eq!(q.add(a, b), q.one());
        assert_eq!(q.inv(q.from_i64(-3)).unwrap(), q.from_frac(-1, 3).unwrap());
    }

    #[test]
    fn non_prime_rejected() {
        assert!(Field::prime(100).is_err());
        assert!(Field::prime(5).is_ok());
    }

    #[test]
    fn frac_in_prime_field() {
        let f = Field::Prime(5);
        // 1/2 = 3 mod 5
        assert_eq!(f.from_frac(1, 2).unwrap(), f.from_i64(3));
        assert!(f.from_frac(1, 5).is_err());
    }
}
