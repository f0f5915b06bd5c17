//! Exact values of digit words and the block codec between B-words and
//! δ-words over the alphabet `D`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{run_greedy, DigitWord, ExpansionKind, ExpansionReport};
use crate::base::{AlternateBase, Digit};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::numberfield::{FieldElement, NumberField};

/// A word over the δ-digit alphabet: preperiod `d₁⋯d_r`, period `d_{r+1}⋯d_{r+s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaWord {
    pub field: Arc<NumberField>,
    pub preperiod: Vec<FieldElement>,
    pub period: Vec<FieldElement>,
}

impl DeltaWord {
    pub fn is_zero(&self) -> bool {
        self.preperiod.iter().chain(&self.period).all(FieldElement::is_zero)
    }
}

fn check_digits(base: &AlternateBase, pre: &[Digit], per: &[Digit]) -> Result<()> {
    for (k, &d) in pre.iter().chain(per).enumerate() {
        if d > base.max_digit_at(k) {
            return Err(Error::DigitOutOfRange { position: k + 1, digit: d });
        }
    }
    Ok(())
}

/// Group the word into blocks of `p` digits and map each to `(a₁, …, a_p)·v`.
pub fn block_encode(base: &AlternateBase, w: &DigitWord) -> Result<DeltaWord> {
    let p = base.period();
    let (pre, per) = w.padded(p);
    check_digits(base, &pre, &per)?;
    let v = base.digit_vector();
    let enc = |ds: &[Digit]| ds.chunks(p).map(|c| v.dot_digits(c)).collect::<Vec<_>>();
    Ok(DeltaWord { field: base.field().clone(), preperiod: enc(&pre), period: enc(&per) })
}

/// Inverse of [`block_encode`].
pub fn block_decode(base: &AlternateBase, w: &DeltaWord) -> Result<DigitWord> {
    let alphabet = base.digit_alphabet();
    let dec = |ds: &[FieldElement]| -> Result<Vec<Digit>> {
        let mut out = Vec::with_capacity(ds.len() * base.period());
        for d in ds {
            out.extend_from_slice(alphabet.tuple_of(d).ok_or(Error::DigitNotInAlphabet)?);
        }
        Ok(out)
    };
    Ok(DigitWord::new(dec(&w.preperiod)?, dec(&w.period)?))
}

fn horner(delta: &FieldElement, ds: &[FieldElement]) -> FieldElement {
    ds.iter().fold(FieldElement::zero(delta.field()), |acc, d| &(&acc * delta) + d)
}

/// Value of a δ-word: `x δ^r (δ^s − 1) = (δ^s − 1) Σ d_k δ^{r−k} + Σ d_{r+k} δ^{s−k}`.
pub fn delta_value(w: &DeltaWord) -> FieldElement {
    let delta = FieldElement::generator(&w.field);
    let r = u32::try_from(w.preperiod.len()).expect("preperiod length fits in u32");
    let head = horner(&delta, &w.preperiod);
    let dr = delta.pow(r);
    if w.period.is_empty() {
        return head.checked_div(&dr).expect("δ is nonzero");
    }
    let s = u32::try_from(w.period.len()).expect("period length fits in u32");
    let ds1 = delta.pow(s).add_rational(&-Rational::one());
    let tail = horner(&delta, &w.period);
    let num = &(&ds1 * &head) + &tail;
    num.checked_div(&(&dr * &ds1)).expect("δ > 1 so δ^s − 1 is nonzero")
}

/// The exact value `Σ x_k / (β₁ ⋯ β_k)` of an eventually periodic word.
pub fn value_of(base: &AlternateBase, w: &DigitWord) -> Result<FieldElement> {
    Ok(delta_value(&block_encode(base, w)?))
}

/// Value of the word in a report; truncated reports have no exact value.
pub fn value_of_report(base: &AlternateBase, rep: &ExpansionReport) -> Result<FieldElement> {
    if rep.kind == ExpansionKind::Truncated {
        return Err(Error::NonPeriodicWord);
    }
    value_of(base, &rep.word)
}

/// `d_B(x) = a₁⋯a_{pk} · a_{pk+1}⋯` for `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointedWord {
    pub integer_part: Vec<Digit>,
    pub fractional_part: DigitWord,
    pub kind: ExpansionKind,
}

impl PointedWord {
    /// Number of full blocks before the radix point.
    pub fn blocks(&self, p: usize) -> usize {
        self.integer_part.len() / p
    }
}

impl fmt::Display for PointedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let int: Vec<String> = self.integer_part.iter().map(|d| d.to_string()).collect();
        let int = if int.is_empty() { "0".to_string() } else { int.join(",") };
        if self.fractional_part.is_zero() {
            write!(f, "{int}.0")
        } else {
            write!(f, "{int}.{}", self.fractional_part)
        }
    }
}

/// Expand `x ≥ 0` by expanding `x / δ^k ∈ [0, 1)` for the least such `k` and
/// placing the radix point after `pk` digits.
///
/// `cap` bounds the digit steps spent after the radix point.
pub fn expand_nonneg(base: &AlternateBase, x: &FieldElement, cap: usize) -> Result<PointedWord> {
    if x.field() != base.field() {
        return Err(Error::FieldMismatch);
    }
    if x.sign() < 0 {
        return Err(Error::OutOfRange("expansion needs x >= 0".into()));
    }
    let p = base.period();
    let inv = base.delta().inverse()?;
    let mut z = x.clone();
    let mut k = 0usize;
    while z.add_rational(&-Rational::one()).sign() >= 0 {
        z = &z * &inv;
        k += 1;
    }
    let split = p * k;
    let rep = run_greedy(base, &z, cap.max(1) + split);
    let integer_part = (0..split).map(|i| rep.emitted.get(i).copied().unwrap_or(0)).collect();
    let (fractional_part, kind) = if rep.kind == ExpansionKind::Truncated {
        (DigitWord::finite(rep.emitted.get(split..).unwrap_or_default().to_vec()), ExpansionKind::Truncated)
    } else {
        let frac = rep.word.tail(split);
        let kind = super::kind_of(&frac);
        (frac, kind)
    };
    Ok(PointedWord { integer_part, fractional_part, kind })
}

/// Exact value of a pointed word.
pub fn pointed_value(base: &AlternateBase, w: &PointedWord) -> Result<FieldElement> {
    if w.kind == ExpansionKind::Truncated {
        return Err(Error::NonPeriodicWord);
    }
    let p = base.period();
    if w.integer_part.len() % p != 0 {
        return Err(Error::MalformedConfig("integer part is not a whole number of blocks".into()));
    }
    let full = w.fractional_part.with_prefix(&w.integer_part);
    let k = u32::try_from(w.blocks(p)).expect("block count fits in u32");
    Ok(&value_of(base, &full)? * &base.delta().pow(k))
}

/// Whether `x ≥ 0` has an expansion with only zeros after the radix point.
pub fn is_b_integer(base: &AlternateBase, x: &FieldElement, cap: usize) -> Result<bool> {
    let w = expand_nonneg(base, x, cap)?;
    match w.kind {
        ExpansionKind::Truncated => Err(Error::Undecided),
        _ => Ok(w.fractional_part.is_zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::pp_family;
    use crate::expansion::greedy_expand_rational;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn w(s: &str) -> DigitWord {
        s.parse().unwrap()
    }

    #[test]
    fn values_of_known_words() {
        let b = pp_family(2);
        let three_quarters = FieldElement::from_rational(b.field(), q("3/4"));
        assert_eq!(value_of(&b, &w("(1,0,0,0,0,1,1,0,0,2,0,0)")).unwrap(), three_quarters);
        assert!(value_of(&b, &DigitWord::zero()).unwrap().is_zero());
        for m in 1..=5 {
            let b = pp_family(m);
            assert!(value_of(&b, &w("1,1")).unwrap().is_one());
            assert!(value_of(&b, &w("(1,0)")).unwrap().is_one());
            assert!(value_of(&b.shift(2), &format!("{m},0,1").parse().unwrap()).unwrap().is_one());
            assert!(value_of(&b.shift(2), &format!("{m},0(0,1)").parse().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn digit_bounds_enforced() {
        let b = pp_family(2);
        assert_eq!(value_of(&b, &w("2")), Err(Error::DigitOutOfRange { position: 1, digit: 2 }));
        assert_eq!(value_of(&b, &w("(0,3)")), Err(Error::DigitOutOfRange { position: 2, digit: 3 }));
        assert!(value_of(&b, &w("1,2")).is_ok());
    }

    #[test]
    fn block_codec_examples() {
        let b = pp_family(2);
        let enc = block_encode(&b, &w("0,2,1,0")).unwrap();
        assert_eq!(enc.preperiod[0], FieldElement::from_integer(b.field(), 2));
        assert_eq!(enc.preperiod[1], b.betas()[1]);
        assert_eq!(block_decode(&b, &enc).unwrap(), w("0,2,1,0"));
        let zero = block_encode(&b, &w("(0,0)")).unwrap();
        assert!(zero.is_zero());
        // δ = β₂ + 1 is a digit, 3 is not
        assert_eq!(b.digit_alphabet().tuple_of(b.delta()), Some(&[1, 1][..]));
        let three = FieldElement::from_integer(b.field(), 3);
        let bad = DeltaWord { field: b.field().clone(), preperiod: vec![three], period: vec![] };
        assert_eq!(block_decode(&b, &bad), Err(Error::DigitNotInAlphabet));
    }

    #[test]
    fn nonneg_expansions_round_trip() {
        let b = pp_family(2);
        let f = b.field().clone();
        let small = FieldElement::from_rational(&f, q("3/4"));
        let pw = expand_nonneg(&b, &small, 1000).unwrap();
        assert!(pw.integer_part.is_empty());
        assert_eq!(pw.fractional_part, greedy_expand_rational(&b, &q("3/4"), 1000).unwrap().word);
        for x in [
            FieldElement::one(&f),
            b.delta().clone(),
            FieldElement::from_rational(&f, q("7/2")),
            FieldElement::from_integer(&f, 20),
            b.delta().pow(3).add_rational(&q("1/3")),
        ] {
            let pw = expand_nonneg(&b, &x, 10_000).unwrap();
            assert_eq!(pw.integer_part.len() % 2, 0);
            assert!(pw.integer_part[..2].iter().any(|&d| d != 0));
            assert_eq!(pointed_value(&b, &pw).unwrap(), x, "{pw}");
        }
        let one = expand_nonneg(&b, &FieldElement::one(&f), 100).unwrap();
        assert_eq!(one.integer_part.len(), 2);
    }

    #[test]
    fn b_integers() {
        let b = pp_family(2);
        let f = b.field().clone();
        assert!(is_b_integer(&b, &FieldElement::zero(&f), 100).unwrap());
        assert!(!is_b_integer(&b, &FieldElement::from_rational(&f, q("3/4")), 100).unwrap());
        assert!(is_b_integer(&b, &FieldElement::one(&f), 100).unwrap());
        assert!(is_b_integer(&b, b.delta(), 100).unwrap());
        assert_eq!(is_b_integer(&b, &FieldElement::from_rational(&f, q("3/4")), 3), Err(Error::Undecided));
        for e in b.digit_alphabet().entries() {
            let pw = expand_nonneg(&b, &e.value, 100).unwrap();
            assert_eq!(pointed_value(&b, &pw).unwrap(), e.value);
        }
    }
}
