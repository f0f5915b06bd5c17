//! Random search for sums and differences of finite expansions that are not
//! finite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admissibility::is_admissible_with;
use crate::base::{AlternateBase, Digit};
use crate::expansion::{greedy_expand, quasi_greedy_all, value_of, DigitWord, ExpansionKind};
use crate::exactnum::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct SumViolation {
    pub x: DigitWord,
    pub y: DigitWord,
    /// `"+"` or `"-"` (larger minus smaller).
    pub op: &'static str,
    pub result: DigitWord,
    pub kind: ExpansionKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessReport {
    pub samples: usize,
    pub seed: u64,
    pub cap: usize,
    /// Sums and differences that landed in `[0, 1)` and were expanded.
    pub tested: usize,
    /// Expansions that did not finish within `cap`; neither finite nor refuted.
    pub undecided: usize,
    pub violations: Vec<SumViolation>,
    pub summary: String,
}

const MAX_WORD_LEN: usize = 8;

fn random_finite_word(base: &AlternateBase, limits: &[crate::expansion::QuasiGreedy], rng: &mut ChaCha8Rng) -> DigitWord {
    loop {
        let len = rng.gen_range(1..=MAX_WORD_LEN);
        let digits: Vec<Digit> = (0..len).map(|k| rng.gen_range(0..=base.max_digit_at(k))).collect();
        let w = DigitWord::finite(digits);
        if is_admissible_with(limits, &w, 200).is_admissible() {
            return w;
        }
    }
}

/// Sample `samples` pairs of finite expansions `x, y` and test whether
/// `x + y` and `|x − y|` have finite expansions whenever they lie in `[0, 1)`.
///
/// Finding no violation is evidence, not proof.
pub fn finiteness_sample_check(base: &AlternateBase, samples: usize, cap: usize, seed: u64) -> FinitenessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limits = quasi_greedy_all(base, 200);
    let one = Rational::one();
    let mut tested = 0;
    let mut undecided = 0;
    let mut violations = Vec::new();
    for _ in 0..samples {
        let wx = random_finite_word(base, &limits, &mut rng);
        let wy = random_finite_word(base, &limits, &mut rng);
        let x = value_of(base, &wx).expect("digits in range");
        let y = value_of(base, &wy).expect("digits in range");
        let sum = &x + &y;
        let diff = if x.try_cmp(&y).expect("same field").is_ge() { &x - &y } else { &y - &x };
        for (op, z) in [("+", sum), ("-", diff)] {
            if z.add_rational(&-one.clone()).sign() >= 0 {
                continue;
            }
            tested += 1;
            let rep = greedy_expand(base, &z, cap).expect("0 <= z < 1");
            match rep.kind {
                ExpansionKind::Finite => {}
                ExpansionKind::Truncated => undecided += 1,
                kind => violations.push(SumViolation { x: wx.clone(), y: wy.clone(), op, result: rep.word, kind }),
            }
        }
    }
    let summary = if violations.is_empty() {
        format!("no violation found in {samples} samples")
    } else {
        format!("{} violations found in {samples} samples", violations.len())
    };
    FinitenessReport { samples, seed, cap, tested, undecided, violations, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::pp_family;
    use crate::numberfield::{FieldElement, NumberField};

    #[test]
    fn empty_sample() {
        let r = finiteness_sample_check(&pp_family(2), 0, 100, 1);
        assert_eq!(r.tested, 0);
        assert!(r.violations.is_empty());
        assert_eq!(r.summary, "no violation found in 0 samples");
    }

    #[test]
    fn square_of_golden_ratio_has_infinite_sums() {
        // δ² − 3δ + 1 = 0 is a Pisot unit of norm +1; sums of finite
        // expansions need not be finite there
        let f = NumberField::from_ints(&[1, -3, 1], "2".parse().unwrap(), "3".parse().unwrap()).unwrap();
        let b = AlternateBase::new(&f, vec![FieldElement::generator(&f)]).unwrap();
        let r = finiteness_sample_check(&b, 100, 1000, 7);
        assert!(!r.violations.is_empty());
        let v = &r.violations[0];
        let x = value_of(&b, &v.x).unwrap();
        let y = value_of(&b, &v.y).unwrap();
        let z = if v.op == "+" { &x + &y } else { &x - &y };
        let z = if z.sign() < 0 { -&z } else { z };
        assert_eq!(value_of(&b, &v.result).unwrap(), z);
        assert!(!v.result.is_finite());
    }

    #[test]
    fn family_sample_is_clean() {
        let r = finiteness_sample_check(&pp_family(2), 200, 10_000, 11);
        assert!(r.violations.is_empty(), "{:?}", r.violations.first());
        assert!(r.tested > 0);
    }
}
