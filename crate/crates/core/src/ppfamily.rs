//! The family `δ² = (m+1)δ + 1`, `B = (δ/(δ−1), δ−1)`.
//!
//! Here a rational's purely periodic δ-expansion can be turned into its
//! B-expansion by grouping: a δ-digit `aβ₂ + b` is the block `(a, b)`. The
//! grouped word is then repaired with three value-preserving rules:
//!
//! - `(0,m+1)(0,0) → (1,0)(1,0)`, applied everywhere first;
//! - `(0,m)(0,b) → (1,0)(0,b−1)` for `1 ≤ b ≤ m`;
//! - `(0,m)(1,0)(1,0) → (1,0)(0,m)(0,0)`;
//!
//! with the last two applied at the leftmost forbidden factor until none is
//! left.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::admissibility::{is_admissible, Verdict};
use crate::base::{pp_family, AlternateBase, Digit};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::expansion::{
    greedy_expand_rational, value_of, DigitWord, ExpansionKind, ExpansionReport,
};
use crate::numberfield::FieldElement;

/// A digit block `(a, b)` standing for the δ-digit `aβ₂ + b`.
pub type Block = (Digit, Digit);

fn render_blocks(blocks: &[Block]) -> String {
    blocks.iter().map(|(a, b)| format!("({a},{b})")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `(0,m+1)(0,0) → (1,0)(1,0)`
    Carry,
    /// `(0,m)(0,b) → (1,0)(0,b−1)`
    TypeA,
    /// `(0,m)(1,0)(1,0) → (1,0)(0,m)(0,0)`
    TypeB,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub rule: Rule,
    /// 0-based block index of the rewritten factor in the doubled period.
    pub position: usize,
    /// Blocks from the leftmost forbidden factor to the end of the word,
    /// measured before this step.
    pub measure: usize,
    /// The doubled block word after the step, kept only when tracing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<String>,
}

/// The result of rewriting a δ-expansion into a B-expansion.
#[derive(Clone, Debug, Serialize)]
pub struct RewriteReport {
    pub m: u32,
    pub x: Rational,
    pub delta_expansion: DigitWord,
    pub initial_blocks: String,
    pub steps: Vec<RewriteStep>,
    pub step_count: usize,
    pub result: ExpansionReport,
}

/// Admissible-period blocks for the family base, as a block word.
#[derive(Clone, PartialEq, Eq)]
pub struct BlockWord {
    pub blocks: Vec<Block>,
}

impl fmt::Display for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_blocks(&self.blocks))
    }
}

impl fmt::Debug for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockWord({self})")
    }
}

impl BlockWord {
    pub fn digits(&self) -> Vec<Digit> {
        self.blocks.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Leftmost factor that one of the two repair rules applies to.
    pub fn leftmost_forbidden(&self, m: Digit) -> Option<(usize, Rule)> {
        let bl = &self.blocks;
        (0..bl.len()).find_map(|i| {
            if bl[i] != (0, m) {
                return None;
            }
            match (bl.get(i + 1), bl.get(i + 2)) {
                (Some(&(0, b)), _) if (1..=m).contains(&b) => Some((i, Rule::TypeA)),
                (Some(&(1, 0)), Some(&(1, 0))) => Some((i, Rule::TypeB)),
                _ => None,
            }
        })
    }

    fn replace(&mut self, at: usize, new: &[Block]) {
        self.blocks[at..at + new.len()].copy_from_slice(new);
    }
}

/// Exact checker for `Σ blockᵢ δ^{−i}` equality of two factors.
struct LocalValue<'a> {
    base: &'a AlternateBase,
    inv_delta: FieldElement,
}

impl LocalValue<'_> {
    fn value(&self, blocks: &[Block]) -> FieldElement {
        let beta2 = &self.base.betas()[1];
        let mut acc = FieldElement::zero(self.base.field());
        let mut w = self.inv_delta.clone();
        for &(a, b) in blocks {
            let d = beta2.scale(&Rational::from_integer(a)).add_rational(&Rational::from_integer(b));
            acc = &acc + &(&d * &w);
            w = &w * &self.inv_delta;
        }
        acc
    }
}

/// Turn the δ-expansion of `x ∈ [0, 1)` into its B-expansion in `pp_family(m)`.
///
/// The period is rewritten twice over, so that factors crossing the seam
/// between copies are seen, and the result must again be a square `w·w`.
/// Each step is checked to preserve the exact value of the factor it
/// replaces, and the leftmost forbidden position must move strictly right.
pub fn pp_rewrite(m: u32, x: &Rational, cap: usize, trace: bool) -> Result<RewriteReport> {
    if m == 0 {
        return Err(Error::MalformedConfig("pp family needs m >= 1".into()));
    }
    if x.signum() < 0 || x >= &Rational::one() {
        return Err(Error::OutOfRange("pp_rewrite needs 0 <= x < 1".into()));
    }
    let base = pp_family(m);
    let field = base.field().clone();
    let single = AlternateBase::new(&field, vec![base.delta().clone()])?;
    let dexp = greedy_expand_rational(&single, x, cap)?;
    let zero_report = |steps| RewriteReport {
        m,
        x: x.clone(),
        delta_expansion: DigitWord::zero(),
        initial_blocks: String::new(),
        steps,
        step_count: 0,
        result: ExpansionReport {
            word: DigitWord::zero(),
            kind: ExpansionKind::Finite,
            steps_used: 0,
            remainder_at_cutoff: None,
            emitted: Vec::new(),
        },
    };
    match dexp.kind {
        ExpansionKind::Truncated => return Err(Error::PeriodDidNotClose),
        ExpansionKind::Finite if dexp.word.is_zero() => return Ok(zero_report(Vec::new())),
        ExpansionKind::PurelyPeriodic => {}
        _ => return Err(Error::RewriteFailed(format!("δ-expansion {} is not purely periodic", dexp.word))),
    }
    // Parry condition: the δ-word must be below ((m+1)0)^ω at every shift
    if !is_admissible(&single, &dexp.word, 100).is_admissible() {
        return Err(Error::RewriteFailed("δ-expansion violates the Parry condition".into()));
    }
    let period = dexp.word.period();
    if period.last() != Some(&0) {
        return Err(Error::RewriteFailed(format!("last period digit of {} is not 0", dexp.word)));
    }

    let z: Vec<Block> = period.iter().map(|&d| (0, d)).collect();
    let mut word = BlockWord { blocks: [z.clone(), z].concat() };
    let initial_blocks = render_blocks(&word.blocks[..period.len()]);
    let checker = LocalValue { base: &base, inv_delta: base.delta().inverse()? };
    let mut steps = Vec::new();
    let mut step_count = 0usize;
    let mut record = |rule, position, measure, word: &BlockWord, steps: &mut Vec<RewriteStep>| {
        step_count += 1;
        if trace {
            steps.push(RewriteStep { rule, position, measure, blocks: Some(word.to_string()) });
        }
    };

    let checked_replace = |word: &mut BlockWord, at: usize, new: &[Block]| -> Result<()> {
        let old = &word.blocks[at..at + new.len()];
        if checker.value(old) != checker.value(new) {
            return Err(Error::RewriteFailed(format!(
                "{} -> {} changes the value",
                render_blocks(old),
                render_blocks(new)
            )));
        }
        word.replace(at, new);
        Ok(())
    };

    let len = word.blocks.len();
    let mut i = 0;
    while i + 1 < len {
        if word.blocks[i] == (0, m + 1) && word.blocks[i + 1] == (0, 0) {
            checked_replace(&mut word, i, &[(1, 0), (1, 0)])?;
            record(Rule::Carry, i, len - i, &word, &mut steps);
            i += 2;
        } else {
            i += 1;
        }
    }
    if word.blocks.iter().any(|&(a, b)| a == 0 && b > m) {
        return Err(Error::RewriteFailed("digit m+1 survived the carry step".into()));
    }

    let budget = len * len + 16;
    let mut last_measure = usize::MAX;
    let mut iterations = 0;
    while let Some((pos, rule)) = word.leftmost_forbidden(m) {
        let measure = len - pos;
        if measure >= last_measure {
            return Err(Error::RewriteFailed(format!("no progress at block {pos}")));
        }
        last_measure = measure;
        iterations += 1;
        if iterations > budget {
            return Err(Error::RewriteFailed("rewrite exceeded its step budget".into()));
        }
        match rule {
            Rule::TypeA => {
                let b = word.blocks[pos + 1].1;
                checked_replace(&mut word, pos, &[(1, 0), (0, b - 1)])?;
            }
            Rule::TypeB => checked_replace(&mut word, pos, &[(1, 0), (0, m), (0, 0)])?,
            Rule::Carry => unreachable!("carries are applied before repair"),
        }
        record(rule, pos, measure, &word, &mut steps);
    }

    let half = len / 2;
    if word.blocks[..half] != word.blocks[half..] {
        return Err(Error::PeriodDidNotClose);
    }
    let result_word = DigitWord::purely_periodic(BlockWord { blocks: word.blocks[..half].to_vec() }.digits());
    let verdict = is_admissible(&base, &result_word, 100);
    if verdict != Verdict::Admissible {
        return Err(Error::RewriteFailed(format!("result {result_word} is {verdict:?}")));
    }
    if value_of(&base, &result_word)?.as_rational() != Some(x) {
        return Err(Error::RewriteFailed("result does not reproduce x".into()));
    }
    let kind = if result_word.is_zero() { ExpansionKind::Finite } else { ExpansionKind::PurelyPeriodic };
    Ok(RewriteReport {
        m,
        x: x.clone(),
        delta_expansion: dexp.word,
        initial_blocks,
        steps,
        step_count,
        result: ExpansionReport {
            steps_used: result_word.period().len(),
            word: result_word,
            kind,
            remainder_at_cutoff: None,
            emitted: Vec::new(),
        },
    })
}

/// The expansion of `1/2` in the shifted family base `B⁽²⁾`:
/// `k(000k0(k+1))^ω` for `m = 2k` and `k(0(k+1))^ω` for `m = 2k+1`.
pub fn half_expansion_formula(m: u32) -> DigitWord {
    let k = m / 2;
    if m % 2 == 0 {
        DigitWord::new(vec![k], vec![0, 0, 0, k, 0, k + 1])
    } else {
        DigitWord::new(vec![k], vec![0, k + 1])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanFailure {
    pub x: Rational,
    pub value_approx: f64,
    pub report: ExpansionReport,
}

/// Outcome of scanning rationals in increasing order for pure periodicity.
#[derive(Clone, Debug, Serialize)]
pub struct GammaScanReport {
    /// Every rational below this with denominator at most `qmax` has a
    /// purely periodic expansion.
    pub verified_lower: Rational,
    pub first_failure: Option<ScanFailure>,
    /// A rational whose expansion did not close within `cap`; the scan
    /// stops there.
    pub undecided: Option<Rational>,
    pub qmax: u64,
    pub cap: usize,
    pub scanned: usize,
}

/// The Farey sequence of order `n` restricted to `(0, 1)`, in increasing order.
pub fn farey_interior(n: u64) -> impl Iterator<Item = (u64, u64)> {
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n.max(1));
    std::iter::from_fn(move || {
        if c >= d {
            return None;
        }
        let out = (c, d);
        let k = (n + b) / d;
        let (na, nb) = (c, d);
        c = k * c - a;
        d = k * d - b;
        a = na;
        b = nb;
        Some(out)
    })
}

const SCAN_CHUNK: usize = 512;

/// Scan `p/q ∈ (0, 1)`, `q ≤ qmax`, in increasing order and stop at the first
/// one whose expansion is not purely periodic (or does not close).
pub fn gamma_scan(base: &AlternateBase, qmax: u64, cap: usize) -> GammaScanReport {
    let fractions: Vec<(u64, u64)> = farey_interior(qmax).collect();
    let mut scanned = 0;
    for chunk in fractions.chunks(SCAN_CHUNK) {
        let reports: Vec<(Rational, ExpansionReport)> = chunk
            .par_iter()
            .map(|&(p, q)| {
                let x = Rational::new(p, q).expect("q > 0");
                let rep = greedy_expand_rational(base, &x, cap).expect("0 < p/q < 1");
                (x, rep)
            })
            .collect();
        for (x, rep) in reports {
            scanned += 1;
            match rep.kind {
                ExpansionKind::PurelyPeriodic => {}
                ExpansionKind::Truncated => {
                    return GammaScanReport {
                        verified_lower: x.clone(),
                        first_failure: None,
                        undecided: Some(x),
                        qmax,
                        cap,
                        scanned,
                    };
                }
                _ => {
                    return GammaScanReport {
                        verified_lower: x.clone(),
                        first_failure: Some(ScanFailure { value_approx: x.to_f64(), x, report: rep }),
                        undecided: None,
                        qmax,
                        cap,
                        scanned,
                    };
                }
            }
        }
    }
    GammaScanReport { verified_lower: Rational::one(), first_failure: None, undecided: None, qmax, cap, scanned }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn three_quarters_derivation() {
        let r = pp_rewrite(2, &q("3/4"), 1000, true).unwrap();
        assert_eq!(r.delta_expansion.to_string(), "(2,1,1,2,3,0)");
        assert_eq!(r.initial_blocks, "(0,2)(0,1)(0,1)(0,2)(0,3)(0,0)");
        let first_copy: Vec<String> =
            r.steps.iter().map(|s| s.blocks.as_ref().unwrap()[..30].to_string()).collect();
        assert_eq!(first_copy[0], "(0,2)(0,1)(0,1)(0,2)(1,0)(1,0)");
        assert_eq!(r.steps[0].rule, Rule::Carry);
        let typed: Vec<_> = r.steps.iter().filter(|s| s.rule != Rule::Carry).collect();
        assert_eq!(typed[0].rule, Rule::TypeA);
        assert_eq!(&typed[0].blocks.as_ref().unwrap()[..30], "(1,0)(0,0)(0,1)(0,2)(1,0)(1,0)");
        assert_eq!(typed[1].rule, Rule::TypeB);
        assert_eq!(&typed[1].blocks.as_ref().unwrap()[..30], "(1,0)(0,0)(0,1)(1,0)(0,2)(0,0)");
        assert_eq!(r.result.word.to_string(), "(1,0,0,0,0,1,1,0,0,2,0,0)");
        for w in r.steps.windows(2).filter(|w| w[0].rule != Rule::Carry) {
            assert!(w[1].measure < w[0].measure);
        }
    }

    #[test]
    fn zero_rewrites_to_zero() {
        let r = pp_rewrite(3, &q("0"), 10, false).unwrap();
        assert!(r.result.word.is_zero());
        assert!(matches!(pp_rewrite(2, &q("1"), 10, false), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn rewrite_agrees_with_greedy() {
        for m in 1..=3 {
            let b = pp_family(m);
            for den in 2..=25i64 {
                for num in 1..den {
                    let x = Rational::new(num, den).unwrap();
                    let r = pp_rewrite(m, &x, 10_000, false).unwrap();
                    let g = greedy_expand_rational(&b, &x, 10_000).unwrap();
                    assert_eq!(r.result.word, g.word, "m={m} x={x}");
                }
            }
        }
    }

    #[test]
    fn half_formula_matches_greedy() {
        assert_eq!(half_expansion_formula(2).to_string(), "1(0,0,0,1,0,2)");
        assert_eq!(half_expansion_formula(1).to_string(), "0(0,1)");
        assert_eq!(half_expansion_formula(3).to_string(), "1(0,2)");
        for m in 2..=8 {
            let b = pp_family(m).shift(2);
            let g = greedy_expand_rational(&b, &q("1/2"), 10_000).unwrap();
            assert_eq!(g.word, half_expansion_formula(m), "m={m}");
        }
    }

    #[test]
    fn half_formula_for_m1_is_a_representation_but_not_greedy() {
        // with k = 0 the word 0(0,1)^ω still has value 1/2, but the suffix
        // 1,0,1,… exceeds d*(1) = 1,0,0,1,… of the shifted base
        let b = pp_family(1).shift(2);
        let formula = half_expansion_formula(1);
        assert_eq!(value_of(&b, &formula).unwrap().as_rational(), Some(&q("1/2")));
        assert_eq!(is_admissible(&b, &formula, 100), Verdict::NotAdmissible { position: 3 });
        let g = greedy_expand_rational(&b, &q("1/2"), 10_000).unwrap();
        assert_eq!(g.word.to_string(), "(0,1,0,0)");
        assert_eq!(g.kind, ExpansionKind::PurelyPeriodic);
    }

    #[test]
    fn farey_order() {
        let f: Vec<_> = farey_interior(5).collect();
        assert_eq!(f, vec![(1, 5), (1, 4), (1, 3), (2, 5), (1, 2), (3, 5), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(farey_interior(1).count(), 0);
        // |F_n| − 2 interior terms: 1 + Σ φ(k) − 2 for n = 12 is 45
        assert_eq!(farey_interior(12).count(), 45);
    }

    #[test]
    fn small_scans() {
        let b = pp_family(2);
        let r = gamma_scan(&b, 20, 10_000);
        assert!(r.first_failure.is_none() && r.undecided.is_none());
        assert_eq!(r.verified_lower, Rational::one());
        let s = gamma_scan(&b.shift(2), 30, 10_000);
        let fail = s.first_failure.unwrap();
        assert!(fail.x <= q("1/2"));
        let t = gamma_scan(&b.shift(2), 30, 3);
        assert!(t.undecided.is_some());
    }
}
