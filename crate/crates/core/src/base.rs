//! Alternate bases `B = (β₁, …, β_p)` over a common number field `Q(δ)`.
//!
//! A base stores its betas as exact field elements, the product `δ`, and the
//! largest digit allowed at each phase (`⌈βᵢ⌉ − 1`). The field's designated
//! root must be the product of the betas, so every value the expansion code
//! touches lives in the one field `Q(δ)`.

use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Interval, Polynomial, Rational};
use crate::numberfield::{FieldElement, NumberField};

/// A single digit of a base expansion.
pub type Digit = u32;

/// A periodic Cantor real base.
#[derive(Clone, Debug)]
pub struct AlternateBase {
    field: Arc<NumberField>,
    betas: Vec<FieldElement>,
    delta: FieldElement,
    max_digits: Vec<Digit>,
}

impl PartialEq for AlternateBase {
    fn eq(&self, other: &Self) -> bool {
        self.betas == other.betas
    }
}

impl Eq for AlternateBase {}

impl AlternateBase {
    /// Validate and assemble a base from betas living in `field`.
    pub fn new(field: &Arc<NumberField>, betas: Vec<FieldElement>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::MalformedConfig("a base needs at least one beta".into()));
        }
        let one = FieldElement::one(field);
        for (i, b) in betas.iter().enumerate() {
            if b.field() != field {
                return Err(Error::FieldMismatch);
            }
            if (b - &one).sign() <= 0 {
                return Err(Error::BetaNotGreaterThanOne(i + 1));
            }
        }
        let delta = betas.iter().skip(1).fold(betas[0].clone(), |acc, b| &acc * b);
        if delta != FieldElement::generator(field) {
            return Err(Error::DeltaMismatch);
        }
        let max_digits = betas
            .iter()
            .map(|b| {
                let fl = b.floor();
                let is_int = b.as_rational().is_some_and(Rational::is_integer);
                let top = if is_int { fl - 1 } else { fl };
                top.to_u32().ok_or_else(|| Error::MalformedConfig("beta too large".into()))
            })
            .collect::<Result<_>>()?;
        Ok(AlternateBase { field: field.clone(), betas, delta, max_digits })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn period(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[FieldElement] {
        &self.betas
    }

    /// `β` at 0-based position `k` of an expansion (indices taken mod p).
    pub fn beta_at(&self, k: usize) -> &FieldElement {
        &self.betas[k % self.betas.len()]
    }

    /// The largest digit the greedy algorithm can emit at 0-based position `k`.
    pub fn max_digit_at(&self, k: usize) -> Digit {
        self.max_digits[k % self.max_digits.len()]
    }

    pub fn max_digits(&self) -> &[Digit] {
        &self.max_digits
    }

    /// `δ = β₁ ⋯ β_p`.
    pub fn delta(&self) -> &FieldElement {
        &self.delta
    }

    /// The shifted base `B⁽ⁱ⁾ = (βᵢ, βᵢ₊₁, …)`, with `i` 1-based and taken mod p.
    pub fn shift(&self, i: usize) -> AlternateBase {
        assert!(i >= 1, "shift index is 1-based");
        let r = (i - 1) % self.period();
        let mut betas = self.betas.clone();
        betas.rotate_left(r);
        let mut max_digits = self.max_digits.clone();
        max_digits.rotate_left(r);
        AlternateBase { field: self.field.clone(), betas, delta: self.delta.clone(), max_digits }
    }

    /// `v = (β₂⋯β_p, β₃⋯β_p, …, β_p, 1)`.
    pub fn digit_vector(&self) -> DigitVector {
        let p = self.period();
        let mut entries = vec![FieldElement::one(&self.field); p];
        for i in (0..p.saturating_sub(1)).rev() {
            entries[i] = &self.betas[i + 1] * &entries[i + 1];
        }
        DigitVector { entries }
    }

    /// The δ-digit alphabet `D = {(a₁, …, a_p)·v : 0 ≤ aᵢ < βᵢ}`, sorted ascending.
    pub fn digit_alphabet(&self) -> Alphabet {
        let v = self.digit_vector();
        let mut tuples: Vec<Vec<Digit>> = vec![Vec::new()];
        for &top in &self.max_digits {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..=top).map(move |a| {
                        let mut t = t.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        let mut entries: Vec<AlphabetEntry> = Vec::new();
        for t in tuples {
            let value = v.dot_digits(&t);
            if !entries.iter().any(|e| e.value == value) {
                entries.push(AlphabetEntry { value, tuple: t });
            }
        }
        entries.sort_by(|a, b| a.value.try_cmp(&b.value).expect("same field"));
        Alphabet { entries }
    }

    /// Construct from a parsed configuration.
    pub fn from_config(cfg: &BaseConfig) -> Result<Self> {
        match cfg {
            BaseConfig::Family { pp_family, shift } => {
                if *pp_family == 0 {
                    return Err(Error::MalformedConfig("pp_family parameter must be at least 1".into()));
                }
                let base = pp_family_base(*pp_family)?;
                Ok(match shift {
                    Some(k) if *k >= 1 => base.shift(*k),
                    Some(_) => return Err(Error::MalformedConfig("shift is 1-based".into())),
                    None => base,
                })
            }
            BaseConfig::Explicit { minpoly, root_interval, betas } => {
                let poly = Polynomial::from_ints(minpoly);
                let iv = Interval::new(root_interval[0].clone(), root_interval[1].clone())
                    .map_err(|_| Error::MalformedConfig("root_interval has lo > hi".into()))?;
                let field = NumberField::new(poly, iv)?;
                let betas = betas
                    .iter()
                    .map(|c| FieldElement::from_coords(&field, c.clone()))
                    .collect::<Result<Vec<_>>>()?;
                AlternateBase::new(&field, betas)
            }
        }
    }

    pub fn to_config(&self) -> BaseConfig {
        let minpoly = self
            .field
            .minpoly()
            .coeffs()
            .iter()
            .map(|c| c.numer().to_i64().expect("minpoly coefficients fit in i64"))
            .collect();
        let iso = self.field.isolator();
        BaseConfig::Explicit {
            minpoly,
            root_interval: [iso.lo().clone(), iso.hi().clone()],
            betas: self.betas.iter().map(|b| b.coords().to_vec()).collect(),
        }
    }
}

/// Build the base named by [`make_base`]'s configuration.
pub fn make_base(cfg: &BaseConfig) -> Result<AlternateBase> {
    AlternateBase::from_config(cfg)
}

/// The family `β₁ = δ/(δ−1)`, `β₂ = δ−1` over `δ² = (m+1)δ + 1`.
///
/// For every `m ≥ 1`, all rationals in `[0, 1)` have purely periodic
/// expansions in this base.
pub fn pp_family(m: u32) -> AlternateBase {
    pp_family_base(m).expect("pp family is valid for m >= 1")
}

fn pp_family_base(m: u32) -> Result<AlternateBase> {
    if m == 0 {
        return Err(Error::MalformedConfig("pp family needs m >= 1".into()));
    }
    let m = i64::from(m);
    // x² − (m+1)x − 1 is −1 at m+1 and m+1 at m+2
    let field = NumberField::from_ints(
        &[-1, -(m + 1), 1],
        Rational::from_integer(m + 1),
        Rational::from_integer(m + 2),
    )?;
    let delta = FieldElement::generator(&field);
    let beta2 = delta.add_rational(&-Rational::one());
    let beta1 = delta.checked_div(&beta2)?;
    AlternateBase::new(&field, vec![beta1, beta2])
}

/// `v` together with its telescoping structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVector {
    pub entries: Vec<FieldElement>,
}

impl DigitVector {
    /// `(a₁, …, a_p)·v`
    pub fn dot_digits(&self, digits: &[Digit]) -> FieldElement {
        let field = self.entries[0].field();
        digits
            .iter()
            .zip(&self.entries)
            .filter(|(&a, _)| a != 0)
            .fold(FieldElement::zero(field), |acc, (&a, e)| {
                &acc + &e.scale(&Rational::from_integer(i64::from(a)))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetEntry {
    pub value: FieldElement,
    pub tuple: Vec<Digit>,
}

/// The δ-digit alphabet with its inverse map back to digit blocks.
#[derive(Clone, Debug)]
pub struct Alphabet {
    entries: Vec<AlphabetEntry>,
}

impl Alphabet {
    pub fn entries(&self) -> &[AlphabetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &FieldElement> {
        self.entries.iter().map(|e| &e.value)
    }

    /// The digit block `(a₁, …, a_p)` whose value is `d`.
    pub fn tuple_of(&self, d: &FieldElement) -> Option<&[Digit]> {
        self.entries.iter().find(|e| &e.value == d).map(|e| e.tuple.as_slice())
    }

    pub fn contains(&self, d: &FieldElement) -> bool {
        self.tuple_of(d).is_some()
    }
}

/// Base configuration as read from JSON.
///
/// Either an explicit field and betas:
/// `{"minpoly": [-1, -3, 1], "root_interval": ["3", "4"], "betas": [["1/3", "1/3"], ["-1", "1"]]}`
/// or the pure-periodicity family: `{"pp_family": 2}` (optionally `"shift": 2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseConfig {
    Family {
        pp_family: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shift: Option<usize>,
    },
    Explicit {
        minpoly: Vec<i64>,
        root_interval: [Rational; 2],
        betas: Vec<Vec<Rational>>,
    },
}

impl BaseConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedConfig(e.to_string()))
    }
}
