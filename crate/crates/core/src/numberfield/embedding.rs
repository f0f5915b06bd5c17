use num_complex::Complex64;
use serde::Serialize;

use super::NumberField;
use crate::error::{Error, Result};

/// A field monomorphism `Q(δ) → C`, given by the conjugate `δ` is sent to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Embedding {
    #[serde(serialize_with = "serialize_complex")]
    pub conjugate: Complex64,
    pub is_identity: bool,
}

impl Embedding {
    /// Imaginary part negligible relative to the modulus.
    pub fn is_real(&self) -> bool {
        self.conjugate.im.abs() <= REAL_TOLERANCE * (1.0 + self.conjugate.norm())
    }
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re_approx", &z.re)?;
    st.serialize_field("im_approx", &z.im)?;
    st.end()
}

const REAL_TOLERANCE: f64 = 1e-9;
const MAX_DEGREE: usize = 64;
const MAX_ITERATIONS: usize = 2000;

/// All complex roots of a polynomial with `f64` coefficients (ascending), by
/// Aberth–Ehrlich simultaneous iteration followed by Newton polishing.
pub fn all_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_DEGREE || coeffs[n] == 0.0 {
        return Err(Error::RootFindingFailed);
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };

    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(0.5 * radius, angle)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 =
                (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootFindingFailed);
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *zi - p / dp;
            if next.is_finite() {
                *zi = next;
            }
        }
    }
    Ok(z)
}

pub(super) fn compute_embeddings(field: &NumberField) -> Result<Vec<Embedding>> {
    let coeffs: Vec<f64> = field.minpoly().coeffs().iter().map(|c| c.to_f64()).collect();
    let deg = field.degree() as i32;
    let roots = all_roots(&coeffs)?;
    for r in &roots {
        let val = field.minpoly().coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * r + c.to_f64()
        });
        let scale: f64 = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())) / coeffs[coeffs.len() - 1].abs();
        if val.norm() > 1e-10 * (1.0 + r.norm()).powi(deg) * scale.max(1.0) {
            return Err(Error::RootFindingFailed);
        }
    }
    let target = field.current_isolator().midpoint().to_f64();
    let identity = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.im.abs() <= REAL_TOLERANCE * (1.0 + r.norm()))
        .min_by(|(_, a), (_, b)| (a.re - target).abs().total_cmp(&(b.re - target).abs()))
        .map(|(i, _)| i)
        .ok_or(Error::RootFindingFailed)?;
    let mut out: Vec<Embedding> = roots
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            if r.im.abs() <= REAL_TOLERANCE * (1.0 + r.norm()) {
                r.im = 0.0;
            }
            Embedding { conjugate: r, is_identity: i == identity }
        })
        .collect();
    // identity first, then by decreasing modulus and argument, for stable output
    out.sort_by(|a, b| {
        b.is_identity
            .cmp(&a.is_identity)
            .then(b.conjugate.norm().total_cmp(&a.conjugate.norm()))
            .then(b.conjugate.im.total_cmp(&a.conjugate.im))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;
    use crate::numberfield::FieldElement;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn quadratic_conjugate_matches_formula() {
        let f = NumberField::from_ints(&[-1, -3, 1], q("3"), q("4")).unwrap();
        let e = f.embeddings().unwrap();
        assert_eq!(e.len(), 2);
        assert!(e[0].is_identity && !e[1].is_identity);
        assert!((e[0].conjugate.re - (3.0 + 13f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((e[1].conjugate.re - (3.0 - 13f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(e[1].is_real());
    }

    #[test]
    fn quartic_salem_roots() {
        let roots = all_roots(&[1.0, -1.0, -1.0, -1.0, 1.0]).unwrap();
        let mut moduli: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
        moduli.sort_by(f64::total_cmp);
        assert!((moduli[3] - 1.722083805739043).abs() < 1e-9);
        assert!((moduli[1] - 1.0).abs() < 1e-9 && (moduli[2] - 1.0).abs() < 1e-9);
        assert!((moduli[0] * moduli[3] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f = NumberField::from_ints(&[1, -1, -1, -1, 1], q("3/2"), q("2")).unwrap();
        let a = FieldElement::from_coords(&f, vec![q("1/2"), q("-3"), q("2/7"), q("1")]).unwrap();
        let b = FieldElement::from_coords(&f, vec![q("-2"), q("1/3"), q("0"), q("5/4")]).unwrap();
        for e in f.embeddings().unwrap() {
            let ab = (&a * &b).embed(e);
            assert!((ab - a.embed(e) * b.embed(e)).norm() < 1e-9);
            let s = (&a + &b).embed(e);
            assert!((s - a.embed(e) - b.embed(e)).norm() < 1e-9);
        }
        let id = f.embeddings().unwrap().iter().find(|e| e.is_identity).unwrap();
        assert!((a.embed(id).re - a.approx()).abs() < 1e-9);
    }

    #[test]
    fn rational_field_has_only_identity() {
        let f = NumberField::from_ints(&[-2, 1], q("1"), q("3")).unwrap();
        let e = f.embeddings().unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].is_identity);
        assert!((e[0].conjugate.re - 2.0).abs() < 1e-12);
    }
}
