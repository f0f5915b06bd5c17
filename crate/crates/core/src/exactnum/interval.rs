use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidIsolator);
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// Sign shared by every point of the interval, if there is one.
    pub fn strict_sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn add_scalar(&self, c: &Rational) -> Interval {
        Interval { lo: &self.lo + c, hi: &self.hi + c }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        if self.lo.signum() >= 0 && other.lo.signum() >= 0 {
            return Interval { lo: &self.lo * &other.lo, hi: &self.hi * &other.hi };
        }
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.signum() >= 0 {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Left and right halves split at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let mid = self.midpoint();
        (
            Interval { lo: self.lo.clone(), hi: mid.clone() },
            Interval { lo: mid, hi: self.hi.clone() },
        )
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(a: &str, b: &str) -> Interval {
        Interval::new(q(a), q(b)).unwrap()
    }

    #[test]
    fn rejects_reversed_endpoints() {
        assert!(Interval::new(q("1"), q("0")).is_err());
    }

    #[test]
    fn multiplication_covers_sign_cases() {
        assert_eq!(iv("-1", "2").mul(&iv("-3", "1")), iv("-6", "3"));
        assert_eq!(iv("1", "2").mul(&iv("3", "4")), iv("3", "8"));
        assert_eq!(iv("-2", "-1").mul(&iv("3", "4")), iv("-8", "-3"));
        assert_eq!(iv("1", "2").scale(&q("-1")), iv("-2", "-1"));
    }

    #[test]
    fn strict_sign() {
        assert_eq!(iv("1/3", "1").strict_sign(), Some(1));
        assert_eq!(iv("-1", "-1/3").strict_sign(), Some(-1));
        assert_eq!(iv("-1", "0").strict_sign(), None);
        assert!(iv("0", "0").contains_zero());
    }
}
