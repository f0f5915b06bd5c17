//! Greedy and quasi-greedy expansions in an alternate base.
//!
//! The greedy recurrence is `r₀ = x`, `a_{k+1} = ⌊β_{k+1} r_k⌋`,
//! `r_{k+1} = β_{k+1} r_k − a_{k+1}`, run with exact remainders in `Q(δ)`.
//! Periodicity is detected exactly: the state `(r_k, k mod p)` determines the
//! rest of the expansion, so a repeated state closes the word.

mod codec;
mod word;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

pub use codec::{
    block_decode, block_encode, delta_value, expand_nonneg, is_b_integer, pointed_value, value_of,
    value_of_report, DeltaWord, PointedWord,
};
pub use word::DigitWord;

use crate::base::{AlternateBase, Digit};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::numberfield::FieldElement;

/// Digit steps allowed before an expansion is reported as truncated.
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionKind {
    Finite,
    PurelyPeriodic,
    EventuallyPeriodic,
    Truncated,
}

/// Outcome of running the greedy recurrence.
///
/// For a truncated run `word` holds the digits produced so far as a finite
/// word and `remainder_at_cutoff` the exact remainder after them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub word: DigitWord,
    pub kind: ExpansionKind,
    pub steps_used: usize,
    pub remainder_at_cutoff: Option<FieldElement>,
    /// Digits actually emitted; differs from `word` only for truncated runs
    /// whose prefix ends in zeros.
    pub emitted: Vec<Digit>,
}

impl ExpansionReport {
    pub fn is_truncated(&self) -> bool {
        self.kind == ExpansionKind::Truncated
    }
}

impl Serialize for ExpansionReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ExpansionReport", 6)?;
        st.serialize_field("word", &self.word)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("preperiod_length", &self.word.preperiod().len())?;
        st.serialize_field("period_length", &self.word.period().len())?;
        st.serialize_field("steps_used", &self.steps_used)?;
        st.serialize_field(
            "remainder_at_cutoff",
            &self.remainder_at_cutoff.as_ref().map(FieldElement::coord_strings),
        )?;
        st.end()
    }
}

fn kind_of(word: &DigitWord) -> ExpansionKind {
    if word.is_finite() {
        ExpansionKind::Finite
    } else if word.is_purely_periodic() {
        ExpansionKind::PurelyPeriodic
    } else {
        ExpansionKind::EventuallyPeriodic
    }
}

/// One greedy step at 0-based position `k`: returns the digit and the new remainder.
pub(crate) fn greedy_step(base: &AlternateBase, k: usize, r: &FieldElement) -> (Digit, FieldElement) {
    let t = base.beta_at(k) * r;
    let a = t.floor();
    let next = t.add_rational(&-Rational::from(a.clone()));
    (a.to_u32().expect("greedy digit fits in u32"), next)
}

fn run_greedy(base: &AlternateBase, x: &FieldElement, cap: usize) -> ExpansionReport {
    let p = base.period();
    let mut seen: HashMap<(Vec<Rational>, usize), usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut r = x.clone();
    for k in 0..cap {
        if r.is_zero() {
            let word = DigitWord::finite(digits.clone());
            return ExpansionReport { word, kind: ExpansionKind::Finite, steps_used: k, remainder_at_cutoff: None, emitted: digits };
        }
        if let Some(&start) = seen.get(&(r.coords().to_vec(), k % p)) {
            let word = DigitWord::new(digits[..start].to_vec(), digits[start..].to_vec());
            let kind = kind_of(&word);
            return ExpansionReport { word, kind, steps_used: k, remainder_at_cutoff: None, emitted: digits };
        }
        seen.insert((r.coords().to_vec(), k % p), k);
        let (a, next) = greedy_step(base, k, &r);
        digits.push(a);
        r = next;
    }
    if r.is_zero() {
        let word = DigitWord::finite(digits.clone());
        return ExpansionReport { word, kind: ExpansionKind::Finite, steps_used: cap, remainder_at_cutoff: None, emitted: digits };
    }
    ExpansionReport {
        word: DigitWord::finite(digits.clone()),
        kind: ExpansionKind::Truncated,
        steps_used: cap,
        remainder_at_cutoff: Some(r),
        emitted: digits,
    }
}

/// The greedy B-expansion of `x ∈ [0, 1)`.
///
/// ```
/// use altbase::{base::pp_family, expansion::greedy_expand, exactnum::Rational};
/// use altbase::numberfield::FieldElement;
///
/// let b = pp_family(2);
/// let x = FieldElement::from_rational(b.field(), Rational::new(3, 4).unwrap());
/// let rep = greedy_expand(&b, &x, 1000).unwrap();
/// assert_eq!(rep.word.to_string(), "(1,0,0,0,0,1,1,0,0,2,0,0)");
/// ```
pub fn greedy_expand(base: &AlternateBase, x: &FieldElement, cap: usize) -> Result<ExpansionReport> {
    if x.field() != base.field() {
        return Err(Error::FieldMismatch);
    }
    if x.sign() < 0 || x.add_rational(&-Rational::one()).sign() >= 0 {
        return Err(Error::OutOfRange("greedy expansion needs 0 <= x < 1".into()));
    }
    Ok(run_greedy(base, x, cap.max(1)))
}

/// Greedy expansion of a rational in `[0, 1)`.
pub fn greedy_expand_rational(base: &AlternateBase, x: &Rational, cap: usize) -> Result<ExpansionReport> {
    greedy_expand(base, &FieldElement::from_rational(base.field(), x.clone()), cap)
}

/// `d_B(1)`: the same recurrence started at `r₀ = 1`.
pub fn expansion_of_one(base: &AlternateBase, cap: usize) -> ExpansionReport {
    run_greedy(base, &FieldElement::one(base.field()), cap.max(1))
}

/// The quasi-greedy expansion `d*_B(1)`, either closed into an eventually
/// periodic word or known only up to a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiGreedy {
    Periodic(DigitWord),
    Truncated(Vec<Digit>),
}

impl QuasiGreedy {
    pub fn word(&self) -> Option<&DigitWord> {
        match self {
            QuasiGreedy::Periodic(w) => Some(w),
            QuasiGreedy::Truncated(_) => None,
        }
    }

    /// The first `n` digits, or fewer if only a shorter prefix is known.
    pub fn prefix(&self, n: usize) -> Vec<Digit> {
        match self {
            QuasiGreedy::Periodic(w) => w.prefix(n),
            QuasiGreedy::Truncated(d) => d.iter().take(n).copied().collect(),
        }
    }
}

impl Serialize for QuasiGreedy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuasiGreedy", 2)?;
        match self {
            QuasiGreedy::Periodic(w) => {
                st.serialize_field("kind", "periodic")?;
                st.serialize_field("word", &w.to_string())?;
            }
            QuasiGreedy::Truncated(d) => {
                st.serialize_field("kind", "truncated")?;
                st.serialize_field("word", &d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))?;
            }
        }
        st.end()
    }
}

/// `d*_B(1)`.
///
/// When `d_{B⁽ⁱ⁾}(1) = t₁⋯t_m` is finite, the quasi-greedy word continues as
/// `t₁⋯t_{m−1}(t_m − 1)` followed by `d*_{B⁽ⁱ⁺ᵐ⁾}(1)`. Shift indices are
/// tracked, and a repeated index closes the word. `depth` bounds both the
/// greedy runs and the total length explored.
pub fn quasi_greedy_one(base: &AlternateBase, depth: usize) -> QuasiGreedy {
    let p = base.period();
    let depth = depth.max(1);
    let mut digits: Vec<Digit> = Vec::new();
    let mut visited: HashMap<usize, usize> = HashMap::new();
    let mut shift = 0usize;
    loop {
        if let Some(&start) = visited.get(&shift) {
            return QuasiGreedy::Periodic(DigitWord::new(digits[..start].to_vec(), digits[start..].to_vec()));
        }
        if digits.len() >= depth {
            digits.truncate(depth);
            return QuasiGreedy::Truncated(digits);
        }
        visited.insert(shift, digits.len());
        let rep = expansion_of_one(&base.shift(shift + 1), depth);
        match rep.kind {
            ExpansionKind::Finite => {
                let mut t = rep.emitted;
                let m = t.len();
                *t.last_mut().expect("d(1) has a nonzero digit") -= 1;
                digits.extend(t);
                shift = (shift + m) % p;
            }
            ExpansionKind::Truncated => {
                digits.extend(rep.emitted);
                digits.truncate(depth);
                return QuasiGreedy::Truncated(digits);
            }
            _ => return QuasiGreedy::Periodic(rep.word.with_prefix(&digits)),
        }
    }
}

/// `d*_{B⁽ⁱ⁾}(1)` for `i = 1, …, p`.
pub fn quasi_greedy_all(base: &AlternateBase, depth: usize) -> Vec<QuasiGreedy> {
    (1..=base.period()).map(|i| quasi_greedy_one(&base.shift(i), depth)).collect()
}
