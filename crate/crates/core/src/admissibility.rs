//! Deciding whether a digit word is the greedy expansion of some `x ∈ [0, 1)`.
//!
//! A word `x₁x₂⋯` is a B-expansion iff every suffix `xᵢxᵢ₊₁⋯` is
//! lexicographically below `d*_{B⁽ⁱ⁾}(1)`. For an eventually periodic word the
//! pairs (suffix, shift) repeat after the preperiod plus `p` periods, so the
//! check terminates.

use std::cmp::Ordering;

use serde::Serialize;

use crate::base::AlternateBase;
use crate::expansion::{quasi_greedy_all, DigitWord, QuasiGreedy};

/// Outcome of an admissibility check. Positions are 1-based suffix starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    NotAdmissible { position: usize },
    Undecided { position: usize },
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible)
    }
}

/// Check `w` against precomputed `d*_{B⁽ⁱ⁾}(1)` for `i = 1, …, p`.
pub fn is_admissible_with(limits: &[QuasiGreedy], w: &DigitWord, depth: usize) -> Verdict {
    let p = limits.len();
    let horizon = w.preperiod().len() + w.period().len().max(1) * p;
    let mut undecided = None;
    for n in 0..horizon {
        let suffix = w.tail(n);
        let order = match &limits[n % p] {
            QuasiGreedy::Periodic(star) => Some(suffix.cmp_infinite(star)),
            QuasiGreedy::Truncated(prefix) => {
                let window = &prefix[..prefix.len().min(depth.max(1))];
                suffix.cmp_prefix(window)
            }
        };
        match order {
            Some(Ordering::Less) => {}
            Some(_) => return Verdict::NotAdmissible { position: n + 1 },
            None => {
                undecided.get_or_insert(n + 1);
            }
        }
    }
    match undecided {
        Some(position) => Verdict::Undecided { position },
        None => Verdict::Admissible,
    }
}

/// Whether `w` is the B-expansion of a number in `[0, 1)`.
///
/// ```
/// use altbase::{admissibility::{is_admissible, Verdict}, base::pp_family};
///
/// let b = pp_family(2);
/// let w = "(1,0,0,0,0,1,1,0,0,2,0,0)".parse().unwrap();
/// assert_eq!(is_admissible(&b, &w, 1000), Verdict::Admissible);
/// let w = "0,2,0,1".parse().unwrap();
/// assert_eq!(is_admissible(&b, &w, 1000), Verdict::NotAdmissible { position: 2 });
/// ```
pub fn is_admissible(base: &AlternateBase, w: &DigitWord, depth: usize) -> Verdict {
    is_admissible_with(&quasi_greedy_all(base, depth), w, depth)
}
