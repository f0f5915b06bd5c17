//! Checkable necessary conditions for purely periodic rationals: what kind of
//! algebraic number δ is, whether the conjugate betas are positive, and an
//! explicit matrix certificate tying rational expansions to δ.

mod certificate;
mod finiteness;

use std::sync::Arc;

use serde::Serialize;

pub use certificate::{
    bareiss_determinant, periodicity_certificate, prefix_rationals, pure_periodic_identity_check,
    CertificateChecks, CertifiedRational, PeriodicityCertificate,
};
pub use finiteness::{finiteness_sample_check, FinitenessReport, SumViolation};

use crate::base::AlternateBase;
use crate::error::{Error, Result};
use crate::exactnum::{Interval, Polynomial};
use crate::numberfield::{FieldElement, NumberField};

/// Moduli within this distance of 1 are treated as possibly on the unit circle.
pub const MODULUS_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NumberKind {
    Pisot,
    Salem,
    Neither,
    Borderline,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugateModulus {
    pub re_approx: f64,
    pub im_approx: f64,
    pub modulus_approx: f64,
    /// `|modulus − 1| ≤ MODULUS_TOLERANCE`
    pub near_unit_circle: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraicClassification {
    pub minpoly: Vec<String>,
    pub degree: usize,
    pub delta_approx: f64,
    pub is_algebraic_integer: bool,
    pub is_unit: bool,
    /// Palindromic minimal polynomial of even degree.
    pub self_reciprocal: bool,
    pub kind: NumberKind,
    /// `1 − max |conjugate|` over non-identity embeddings (positive for Pisot).
    pub margin_approx: Option<f64>,
    pub conjugate_moduli: Vec<ConjugateModulus>,
}

/// Classify the root of `minpoly` isolated by `isolator`.
///
/// Integrality and unit tests are exact on the primitive integer minimal
/// polynomial. Conjugate moduli are numeric, and a Salem verdict also needs
/// the exact self-reciprocity certificate. The polynomial is assumed
/// irreducible; a reducible input classifies the whole root set.
pub fn classify_delta(minpoly: &Polynomial, isolator: &Interval) -> Result<AlgebraicClassification> {
    let field = NumberField::new(minpoly.clone(), isolator.clone()).map_err(|e| match e {
        Error::RootNotGreaterThanOne => Error::NoRootAboveOne,
        other => other,
    })?;
    classify_field(&field)
}

/// [`classify_delta`] for an already constructed field.
pub fn classify_field(field: &Arc<NumberField>) -> Result<AlgebraicClassification> {
    let ints = field.minpoly().primitive_integer();
    let n = ints.len() - 1;
    let one = num_bigint::BigInt::from(1);
    let is_algebraic_integer = ints[n] == one;
    let is_unit = is_algebraic_integer && (ints[0] == one || ints[0] == -one.clone());
    let self_reciprocal = n % 2 == 0 && (0..=n).all(|i| ints[i] == ints[n - i]);

    let conjugate_moduli: Vec<ConjugateModulus> = field
        .embeddings()?
        .iter()
        .filter(|e| !e.is_identity)
        .map(|e| {
            let modulus = e.conjugate.norm();
            ConjugateModulus {
                re_approx: e.conjugate.re,
                im_approx: e.conjugate.im,
                modulus_approx: modulus,
                near_unit_circle: (modulus - 1.0).abs() <= MODULUS_TOLERANCE,
            }
        })
        .collect();
    let inside = conjugate_moduli.iter().all(|c| c.modulus_approx < 1.0 - MODULUS_TOLERANCE);
    let closed = conjugate_moduli.iter().all(|c| c.modulus_approx <= 1.0 + MODULUS_TOLERANCE);
    let touches = conjugate_moduli.iter().any(|c| c.near_unit_circle);
    let kind = if !is_algebraic_integer {
        NumberKind::Neither
    } else if inside {
        NumberKind::Pisot
    } else if closed && touches && self_reciprocal {
        NumberKind::Salem
    } else if touches {
        NumberKind::Borderline
    } else {
        NumberKind::Neither
    };
    let margin_approx = conjugate_moduli
        .iter()
        .map(|c| 1.0 - c.modulus_approx)
        .reduce(f64::min);
    Ok(AlgebraicClassification {
        minpoly: field.minpoly().coeffs().iter().map(|c| c.numer().to_string()).collect(),
        degree: n,
        delta_approx: FieldElement::generator(field).approx(),
        is_algebraic_integer,
        is_unit,
        self_reciprocal,
        kind,
        margin_approx,
        conjugate_moduli,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityVerdict {
    AllPositive,
    NotAllPositive,
}

/// The vector `(ψ(β₁), …, ψ(β_p))` for one embedding `ψ`.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingRow {
    pub is_identity: bool,
    pub is_real: bool,
    pub conjugate_re_approx: f64,
    pub conjugate_im_approx: f64,
    pub betas_re_approx: Vec<f64>,
    pub betas_im_approx: Vec<f64>,
    /// Entries whose real value is within `MODULUS_TOLERANCE` of 0.
    pub near_zero: Vec<bool>,
    /// Only real embeddings carry a verdict.
    pub verdict: Option<PositivityVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub rows: Vec<EmbeddingRow>,
    /// Whether some non-identity real embedding keeps every beta positive.
    pub some_conjugate_all_positive: bool,
}

/// Sign pattern of the betas under every embedding of `Q(δ)`.
///
/// The identity row is decided exactly; the others are numeric.
pub fn positivity_report(base: &AlternateBase) -> Result<PositivityReport> {
    let embeddings = base.field().embeddings()?;
    let mut rows = Vec::with_capacity(embeddings.len());
    for e in embeddings {
        let images: Vec<_> = base.betas().iter().map(|b| b.embed(e)).collect();
        let near_zero: Vec<bool> = images.iter().map(|z| z.re.abs() <= MODULUS_TOLERANCE).collect();
        let verdict = if e.is_identity {
            let all = base.betas().iter().all(|b| b.sign() > 0);
            Some(if all { PositivityVerdict::AllPositive } else { PositivityVerdict::NotAllPositive })
        } else if e.is_real() {
            let all = images.iter().all(|z| z.re > MODULUS_TOLERANCE);
            Some(if all { PositivityVerdict::AllPositive } else { PositivityVerdict::NotAllPositive })
        } else {
            None
        };
        rows.push(EmbeddingRow {
            is_identity: e.is_identity,
            is_real: e.is_real(),
            conjugate_re_approx: e.conjugate.re,
            conjugate_im_approx: e.conjugate.im,
            betas_re_approx: images.iter().map(|z| z.re).collect(),
            betas_im_approx: images.iter().map(|z| z.im).collect(),
            near_zero,
            verdict,
        });
    }
    let some_conjugate_all_positive = rows
        .iter()
        .any(|r| !r.is_identity && matches!(r.verdict, Some(PositivityVerdict::AllPositive)));
    Ok(PositivityReport { rows, some_conjugate_all_positive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::pp_family;
    use crate::exactnum::Rational;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn classify(c: &[i64], lo: &str, hi: &str) -> AlgebraicClassification {
        classify_delta(&Polynomial::from_ints(c), &Interval::new(q(lo), q(hi)).unwrap()).unwrap()
    }

    #[test]
    fn family_is_pisot_unit() {
        for m in 1..=10i64 {
            let c = classify(&[-1, -(m + 1), 1], &(m + 1).to_string(), &(m + 2).to_string());
            assert!(c.is_algebraic_integer && c.is_unit);
            assert_eq!(c.kind, NumberKind::Pisot);
            // the conjugate is −1/δ
            let expected = 1.0 / c.delta_approx;
            assert!((c.conjugate_moduli[0].modulus_approx - expected).abs() < 1e-12);
            assert!(c.margin_approx.unwrap() >= 0.2);
        }
    }

    #[test]
    fn non_unit_pisot() {
        // 1 ± √3
        let c = classify(&[-2, -2, 1], "2", "3");
        assert!(c.is_algebraic_integer && !c.is_unit);
        assert_eq!(c.kind, NumberKind::Pisot);
        assert!((c.conjugate_moduli[0].modulus_approx - (3f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn salem_quartic() {
        let c = classify(&[1, -1, -1, -1, 1], "3/2", "2");
        assert!(c.is_unit && c.self_reciprocal);
        assert_eq!(c.kind, NumberKind::Salem);
        assert!((c.delta_approx - 1.722083805739043).abs() < 1e-9);
        assert_eq!(c.conjugate_moduli.iter().filter(|m| m.near_unit_circle).count(), 2);
        let inner = c.conjugate_moduli.iter().find(|m| !m.near_unit_circle).unwrap();
        assert!((inner.modulus_approx - 0.580691831).abs() < 1e-8);
    }

    #[test]
    fn other_kinds() {
        // 2x² − 3x − 1: not an algebraic integer
        let c = classify(&[-1, -3, 2], "1", "2");
        assert!(!c.is_algebraic_integer && !c.is_unit);
        assert_eq!(c.kind, NumberKind::Neither);
        // x² − 3: conjugate −√3 outside the disk
        assert_eq!(classify(&[-3, 0, 1], "1", "2").kind, NumberKind::Neither);
        // x − 2 has no other embeddings
        let c = classify(&[-2, 1], "1", "3");
        assert_eq!(c.kind, NumberKind::Pisot);
        assert!(!c.is_unit && c.conjugate_moduli.is_empty());
        // x³ − x − 1 ... plastic number, complex conjugates inside
        assert_eq!(classify(&[-1, -1, 0, 1], "1", "2").kind, NumberKind::Pisot);
        // (x² + 1)(x − 2): conjugates on the circle without reciprocity
        assert_eq!(classify(&[-2, 1, -2, 1], "1", "3").kind, NumberKind::Borderline);
        let err = classify_delta(&Polynomial::from_ints(&[-1, -3, 1]), &Interval::new(q("-1"), q("0")).unwrap());
        assert_eq!(err.unwrap_err(), Error::NoRootAboveOne);
        let err = classify_delta(&Polynomial::from_ints(&[1, 2, 1]), &Interval::new(q("-2"), q("0")).unwrap());
        assert_eq!(err.unwrap_err(), Error::NotSquarefree);
    }

    #[test]
    fn family_conjugates_are_not_all_positive() {
        for m in 1..=5 {
            let r = positivity_report(&pp_family(m)).unwrap();
            assert_eq!(r.rows.len(), 2);
            assert!(matches!(r.rows[0].verdict, Some(PositivityVerdict::AllPositive)));
            let conj = &r.rows[1];
            assert!(conj.is_real);
            assert!(conj.betas_re_approx[1] < 0.0);
            assert!(matches!(conj.verdict, Some(PositivityVerdict::NotAllPositive)));
            assert!(!r.some_conjugate_all_positive);
        }
    }

    #[test]
    fn golden_ratio_conjugate() {
        let f = NumberField::from_ints(&[-1, -1, 1], q("1"), q("2")).unwrap();
        let b = AlternateBase::new(&f, vec![FieldElement::generator(&f)]).unwrap();
        let r = positivity_report(&b).unwrap();
        assert!((r.rows[1].betas_re_approx[0] - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(matches!(r.rows[1].verdict, Some(PositivityVerdict::NotAllPositive)));
    }
}
