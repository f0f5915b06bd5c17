use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::base::Digit;
use crate::error::{Error, Result};

/// An eventually periodic infinite digit sequence `u v^ω`.
///
/// An empty period means the word ends in `0^ω`. Words are always held in
/// canonical form: an all-zero period is folded into the finite form, trailing
/// zeros of a finite word are dropped, the period is primitive, and the
/// preperiod is as short as possible.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DigitWord {
    preperiod: Vec<Digit>,
    period: Vec<Digit>,
}

impl DigitWord {
    pub fn new(preperiod: Vec<Digit>, period: Vec<Digit>) -> Self {
        let mut w = DigitWord { preperiod, period };
        w.canonicalize();
        w
    }

    pub fn finite(digits: Vec<Digit>) -> Self {
        Self::new(digits, Vec::new())
    }

    pub fn purely_periodic(period: Vec<Digit>) -> Self {
        Self::new(Vec::new(), period)
    }

    /// The word `0^ω`.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.preperiod.is_empty() && self.period.is_empty()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty() && !self.period.is_empty()
    }

    fn canonicalize(&mut self) {
        if self.period.iter().all(|&d| d == 0) {
            self.period.clear();
        }
        if self.period.is_empty() {
            while self.preperiod.last() == Some(&0) {
                self.preperiod.pop();
            }
            return;
        }
        let n = self.period.len();
        let root = (1..=n)
            .find(|&s| n % s == 0 && (s..n).all(|i| self.period[i] == self.period[i - s]))
            .expect("n itself qualifies");
        self.period.truncate(root);
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().expect("nonempty") {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    /// Digit at 0-based position `k` of the infinite sequence.
    pub fn digit(&self, k: usize) -> Digit {
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `n` digits.
    pub fn prefix(&self, n: usize) -> Vec<Digit> {
        (0..n).map(|k| self.digit(k)).collect()
    }

    /// The suffix starting at 0-based position `n`.
    pub fn tail(&self, n: usize) -> DigitWord {
        if n <= self.preperiod.len() {
            return DigitWord::new(self.preperiod[n..].to_vec(), self.period.clone());
        }
        if self.period.is_empty() {
            return DigitWord::zero();
        }
        let mut p = self.period.clone();
        let shift = (n - self.preperiod.len()) % p.len();
        p.rotate_left(shift);
        DigitWord::new(Vec::new(), p)
    }

    /// `prefix · self`.
    pub fn with_prefix(&self, prefix: &[Digit]) -> DigitWord {
        let mut pre = prefix.to_vec();
        pre.extend_from_slice(&self.preperiod);
        DigitWord::new(pre, self.period.clone())
    }

    /// Length of a window after which both words repeat in lockstep.
    fn comparison_horizon(&self, other: &DigitWord) -> usize {
        let s1 = self.period.len().max(1);
        let s2 = other.period.len().max(1);
        self.preperiod.len().max(other.preperiod.len()) + s1.lcm(&s2)
    }

    /// Lexicographic order on the infinite sequences.
    pub fn cmp_infinite(&self, other: &DigitWord) -> Ordering {
        (0..self.comparison_horizon(other))
            .map(|k| self.digit(k).cmp(&other.digit(k)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// Lexicographic comparison against a finite prefix of some other word,
    /// `None` when they agree on the whole prefix.
    pub fn cmp_prefix(&self, prefix: &[Digit]) -> Option<Ordering> {
        prefix.iter().enumerate().map(|(k, d)| self.digit(k).cmp(d)).find(|o| o.is_ne())
    }

    /// Preperiod and period unrolled to lengths that are multiples of `p`.
    pub fn padded(&self, p: usize) -> (Vec<Digit>, Vec<Digit>) {
        let r = self.preperiod.len().div_ceil(p) * p;
        if self.period.is_empty() {
            return (self.prefix(r), Vec::new());
        }
        let s = self.period.len().lcm(&p);
        let pre = self.prefix(r);
        let per = (r..r + s).map(|k| self.digit(k)).collect();
        (pre, per)
    }

    pub fn max_digit(&self) -> Digit {
        self.preperiod.iter().chain(&self.period).copied().max().unwrap_or(0)
    }
}

fn join(ds: &[Digit]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.preperiod))?;
        if !self.period.is_empty() {
            write!(f, "({})", join(&self.period))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitWord(\"{self}\")")
    }
}

fn parse_digits(s: &str) -> Result<Vec<Digit>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<Digit>().map_err(|_| Error::ParseWord(format!("bad digit {t:?}"))))
        .collect()
}

impl FromStr for DigitWord {
    type Err = Error;

    /// Accepts `"1,0,2"`, `"(1,0)"`, `"2,1(0,1)"` and the empty word `""`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            None => {
                if s.contains(')') {
                    return Err(Error::ParseWord("unmatched ')'".into()));
                }
                Ok(DigitWord::finite(parse_digits(s)?))
            }
            Some(open) => {
                let rest = &s[open + 1..];
                let close = rest.find(')').ok_or_else(|| Error::ParseWord("missing ')'".into()))?;
                if !rest[close + 1..].trim().is_empty() {
                    return Err(Error::ParseWord("text after period".into()));
                }
                let pre = s[..open].trim().trim_end_matches(',');
                let period = parse_digits(&rest[..close])?;
                if period.is_empty() {
                    return Err(Error::ParseWord("empty period".into()));
                }
                Ok(DigitWord::new(parse_digits(pre)?, period))
            }
        }
    }
}

impl Serialize for DigitWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DigitWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
