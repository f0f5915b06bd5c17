//! Exact expansions of numbers in alternate bases.
//!
//! An alternate base is a periodic sequence `B = (β₁, …, β_p)` of reals
//! greater than 1, all living in one number field `Q(δ)` with
//! `δ = β₁ ⋯ β_p`. A number `x ∈ [0, 1)` is written as
//! `x = Σ x_k / (β₁ ⋯ β_k)` (indices mod p) by the greedy algorithm.
//!
//! Everything here is exact: field elements are rational coordinate vectors,
//! the designated real embedding is pinned by a rational isolating interval,
//! and signs are decided by certified interval evaluation. Floating point is
//! used only for the conjugate embeddings, which are labelled as
//! approximations wherever they are reported.
//!
//! ```
//! use altbase::prelude::*;
//!
//! let base = pp_family(2);
//! let x = Rational::new(3, 4)?;
//! let rep = greedy_expand_rational(&base, &x, DEFAULT_CAP)?;
//! assert_eq!(rep.kind, ExpansionKind::PurelyPeriodic);
//! assert_eq!(rep.word.to_string(), "(1,0,0,0,0,1,1,0,0,2,0,0)");
//! assert_eq!(value_of(&base, &rep.word)?.as_rational(), Some(&x));
//! # Ok::<(), altbase::Error>(())
//! ```
//!
//! Modules, bottom up:
//!
//! - [`exactnum`]: rationals, intervals, polynomials, real root isolation.
//! - [`numberfield`]: `Q(δ)` with exact sign and floor, and numeric embeddings.
//! - [`base`]: alternate bases, shifts, the digit alphabet, the family
//!   `δ² = (m+1)δ + 1`.
//! - [`expansion`]: greedy and quasi-greedy expansions, exact values, the
//!   block codec.
//! - [`admissibility`]: which digit words are expansions.
//! - [`certify`]: classification of δ, positivity of conjugates, the matrix
//!   certificate, the finiteness sampler.
//! - [`ppfamily`]: the rewriting system for the family and γ-scans.

pub mod admissibility;
pub mod base;
pub mod certify;
pub mod error;
pub mod exactnum;
pub mod expansion;
pub mod numberfield;
pub mod ppfamily;

pub use error::{Error, Result};

/// The names most programs need.
pub mod prelude {
    pub use crate::admissibility::{is_admissible, Verdict};
    pub use crate::base::{make_base, pp_family, AlternateBase, BaseConfig, Digit};
    pub use crate::exactnum::{Interval, Polynomial, Rational};
    pub use crate::expansion::{
        expand_nonneg, expansion_of_one, greedy_expand, greedy_expand_rational, quasi_greedy_one,
        value_of, DigitWord, ExpansionKind, ExpansionReport, QuasiGreedy, DEFAULT_CAP,
    };
    pub use crate::numberfield::{FieldElement, NumberField};
    pub use crate::{Error, Result};
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/bases.md")]
    mod bases {}
    #[doc = include_str!("../../../book/src/expansions.md")]
    mod expansions {}
    #[doc = include_str!("../../../book/src/admissibility.md")]
    mod admissibility {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/family.md")]
    mod family {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
