//! Exact arithmetic in `Q(δ) = Q[X]/(P)` with a designated real root `δ`.
//!
//! A [`NumberField`] owns an integer minimal polynomial and an interval that
//! isolates the real root `δ > 1` the field is embedded by. Elements are
//! coordinate vectors in the power basis `1, δ, …, δ^{n-1}`.
//!
//! Comparisons go through [`FieldElement::sign`]: the element's polynomial
//! is evaluated over the isolating interval in exact interval arithmetic and
//! the interval is bisected until the enclosure excludes zero. A nonzero
//! element of a field with irreducible minimal polynomial never vanishes at
//! `δ`, so this terminates. The narrowest isolator seen so far is cached on
//! the field, so long greedy runs pay for refinement once.

mod element;
mod embedding;

use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

pub use element::{field_arithmetic, ArithOp, FieldElement};
pub use embedding::{all_roots, Embedding};

use crate::error::{Error, Result};
use crate::exactnum::roots::{count_roots, sturm_sequence};
use crate::exactnum::{refine_root, Interval, Polynomial, Rational};

/// The number field `Q(δ)`, with `δ` pinned by an isolating interval.
pub struct NumberField {
    minpoly: Polynomial,
    isolator: Interval,
    degree: usize,
    /// `δ^k` reduced to the power basis, for `k = degree .. 2·degree - 1`.
    reductions: Vec<Vec<Rational>>,
    tight: RwLock<Interval>,
    /// `δ` as an `f64` midpoint and a radius covering the true root.
    root_f64: (f64, f64),
    embeddings: OnceLock<Result<Vec<Embedding>>>,
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumberField")
            .field("minpoly", &self.minpoly)
            .field("isolator", &self.isolator)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.minpoly == other.minpoly && self.isolator == other.isolator)
    }
}

impl Eq for NumberField {}

const INITIAL_ISOLATOR_BITS: u32 = 24;

impl NumberField {
    /// Build `Q(δ)` from a squarefree minimal polynomial with rational
    /// coefficients (normalized to a primitive integer polynomial) and an
    /// interval isolating the real root `δ > 1`.
    pub fn new(minpoly: Polynomial, isolator: Interval) -> Result<Arc<Self>> {
        if minpoly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if minpoly.is_constant() {
            return Err(Error::MalformedConfig("minimal polynomial must have degree at least 1".into()));
        }
        let minpoly = Polynomial::from_bigints(&minpoly.primitive_integer());
        if !minpoly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let isolator = normalize_isolator(&minpoly, isolator)?;
        let degree = minpoly.degree().expect("nonzero");

        let one = Rational::one();
        let root_above_one = if isolator.is_point() {
            isolator.lo() > &one
        } else if isolator.lo() >= &one {
            true
        } else if isolator.hi() <= &one {
            false
        } else {
            // 1 lies strictly inside; the root is above it iff there is no
            // sign change on [lo, 1]
            let s1 = minpoly.sign_at(&one);
            s1 != 0 && s1 == minpoly.sign_at(isolator.lo())
        };
        if !root_above_one {
            return Err(Error::RootNotGreaterThanOne);
        }

        let reductions = power_reductions(&minpoly, degree);
        let width = Rational::new(1, num_bigint::BigInt::from(1u64) << INITIAL_ISOLATOR_BITS)?;
        let tight = refine_root(&minpoly, &isolator, &width)?;
        let fine = refine_root(&minpoly, &tight, &Rational::new(1, num_bigint::BigInt::from(1u64) << 80)?)?;
        let (lo, hi) = (fine.lo().to_f64(), fine.hi().to_f64());
        let mid = 0.5 * (lo + hi);
        let root_f64 = (mid, 0.5 * (hi - lo) + 4.0 * f64::EPSILON * mid.abs());
        Ok(Arc::new(NumberField {
            minpoly,
            isolator,
            degree,
            reductions,
            tight: RwLock::new(tight),
            root_f64,
            embeddings: OnceLock::new(),
        }))
    }

    /// Convenience: integer coefficients (ascending) and a rational bracket.
    pub fn from_ints(minpoly: &[i64], lo: Rational, hi: Rational) -> Result<Arc<Self>> {
        NumberField::new(Polynomial::from_ints(minpoly), Interval::new(lo, hi)?)
    }

    pub fn minpoly(&self) -> &Polynomial {
        &self.minpoly
    }

    pub fn isolator(&self) -> &Interval {
        &self.isolator
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The narrowest isolating interval for `δ` computed so far.
    pub fn current_isolator(&self) -> Interval {
        self.tight.read().expect("isolator lock").clone()
    }

    /// Floating-point value at `δ` with a rigorous bound on its error, or
    /// `None` when the coordinates do not fit comfortably in `f64`.
    ///
    /// The bound covers rounding of the coordinates, the Horner rounding
    /// error `γ_{2n} Σ|cᵢ||δ|ⁱ`, and the distance from the `f64` root to `δ`
    /// via the derivative; each term is doubled for slack.
    pub(crate) fn approx_at_root(&self, coords: &[Rational]) -> Option<(f64, f64)> {
        const U: f64 = f64::EPSILON / 2.0;
        let (x, rad) = self.root_f64;
        let big = x.abs() + rad;
        let mut value = 0.0f64;
        let mut abs_sum = 0.0f64;
        let mut deriv_sum = 0.0f64;
        for c in coords.iter().rev() {
            let cf = c.to_f64();
            if !cf.is_finite() || (cf != 0.0 && cf.abs() < 1e-280) || cf.abs() > 1e280 {
                return None;
            }
            deriv_sum = deriv_sum * big + abs_sum;
            abs_sum = abs_sum * big + cf.abs();
            value = value * x + cf;
        }
        let n = coords.len() as f64;
        let err = 2.0 * ((4.0 * n + 8.0) * U * abs_sum + rad * deriv_sum) + 1e-300;
        (value.is_finite() && err.is_finite()).then_some((value, err))
    }

    /// Exact sign at `δ` of the polynomial with the given power-basis
    /// coordinates.
    pub(crate) fn sign_at_root(&self, coords: &[Rational]) -> i32 {
        if let Some((v, err)) = self.approx_at_root(coords) {
            if v.abs() > err {
                return if v > 0.0 { 1 } else { -1 };
            }
        }
        self.sign_at_root_exact(coords)
    }

    /// [`Self::sign_at_root`] without the floating-point filter.
    pub(crate) fn sign_at_root_exact(&self, coords: &[Rational]) -> i32 {
        let poly = Polynomial::new(coords.to_vec());
        if poly.is_zero() {
            return 0;
        }
        if poly.is_constant() {
            return poly.coeff(0).signum();
        }
        {
            let iv = self.tight.read().expect("isolator lock");
            if let Some(s) = poly.eval_interval(&iv).strict_sign() {
                return s;
            }
        }
        let mut iv = self.current_isolator();
        loop {
            if iv.is_point() {
                return poly.eval(iv.lo()).signum();
            }
            iv = self.halve(&iv);
            if let Some(s) = poly.eval_interval(&iv).strict_sign() {
                self.offer_isolator(iv);
                return s;
            }
        }
    }

    /// An enclosure of the value at `δ` with width below `max_width`
    /// (or a point, when `δ` is rational).
    pub(crate) fn enclose(&self, coords: &[Rational], max_width: &Rational) -> Interval {
        let poly = Polynomial::new(coords.to_vec());
        if poly.is_constant() {
            return Interval::point(poly.coeff(0));
        }
        {
            let iv = self.tight.read().expect("isolator lock");
            let enc = poly.eval_interval(&iv);
            if &enc.width() < max_width {
                return enc;
            }
        }
        let mut iv = self.current_isolator();
        loop {
            let enc = poly.eval_interval(&iv);
            if &enc.width() < max_width || iv.is_point() {
                self.offer_isolator(iv);
                return enc;
            }
            iv = self.halve(&iv);
        }
    }

    fn halve(&self, iv: &Interval) -> Interval {
        let mid = iv.midpoint();
        let s = self.minpoly.sign_at(&mid);
        if s == 0 {
            return Interval::point(mid);
        }
        let (left, right) = iv.bisect();
        if s == self.minpoly.sign_at(iv.lo()) {
            right
        } else {
            left
        }
    }

    fn offer_isolator(&self, iv: Interval) {
        let mut cur = self.tight.write().expect("isolator lock");
        if iv.width() < cur.width() && cur.contains_interval(&iv) {
            *cur = iv;
        }
    }

    /// Reduce an arbitrary coefficient vector modulo the minimal polynomial.
    pub(crate) fn reduce(&self, mut c: Vec<Rational>) -> Vec<Rational> {
        let n = self.degree;
        if c.len() > n {
            for k in (n..c.len()).rev() {
                let ck = std::mem::take(&mut c[k]);
                if ck.is_zero() {
                    continue;
                }
                if k < 2 * n {
                    for (i, r) in self.reductions[k - n].iter().enumerate() {
                        if !r.is_zero() {
                            c[i] += &(&ck * r);
                        }
                    }
                } else {
                    // beyond the table: peel one power of the leading relation
                    let lead = self.minpoly.leading().expect("nonzero");
                    for (i, a) in self.minpoly.coeffs()[..n].iter().enumerate() {
                        c[k - n + i] -= &(&(&ck * a) / lead);
                    }
                }
            }
            c.truncate(n);
        }
        c.resize(n, Rational::zero());
        c
    }

    /// Embeddings `Q(δ) → C`, computed once per field.
    pub fn embeddings(&self) -> Result<&[Embedding]> {
        self.embeddings
            .get_or_init(|| embedding::compute_embeddings(self))
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    pub fn report(&self) -> FieldReport {
        FieldReport {
            minpoly: self.minpoly.coeffs().iter().map(|c| c.numer().to_string()).collect(),
            root_interval: [self.isolator.lo().clone(), self.isolator.hi().clone()],
            degree: self.degree,
            approx_root: self.current_isolator().midpoint().to_f64(),
        }
    }
}

/// Serializable description of a field.
#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub minpoly: Vec<String>,
    pub root_interval: [Rational; 2],
    pub degree: usize,
    pub approx_root: f64,
}

fn normalize_isolator(p: &Polynomial, iv: Interval) -> Result<Interval> {
    if iv.is_point() {
        return if p.sign_at(iv.lo()) == 0 { Ok(iv) } else { Err(Error::InvalidIsolator) };
    }
    let seq = sturm_sequence(p);
    let slo = p.sign_at(iv.lo());
    let shi = p.sign_at(iv.hi());
    if slo == 0 {
        // roots in (lo, hi] must be absent for lo to be the isolated root
        return if count_roots(&seq, iv.lo(), iv.hi()) == 0 {
            Ok(Interval::point(iv.lo().clone()))
        } else {
            Err(Error::InvalidIsolator)
        };
    }
    if count_roots(&seq, iv.lo(), iv.hi()) != 1 {
        return Err(Error::InvalidIsolator);
    }
    if shi == 0 {
        return Ok(Interval::point(iv.hi().clone()));
    }
    Ok(iv)
}

fn power_reductions(minpoly: &Polynomial, n: usize) -> Vec<Vec<Rational>> {
    let lead = minpoly.leading().expect("nonzero").clone();
    // X^n = -(a_0 + … + a_{n-1} X^{n-1}) / a_n
    let base: Vec<Rational> = minpoly.coeffs()[..n].iter().map(|a| -(a / &lead)).collect();
    let mut out = vec![base.clone()];
    for _ in 1..n.max(1) {
        let prev = out.last().expect("nonempty");
        // multiply by X and fold the overflow coefficient back in
        let mut next = vec![Rational::zero(); n];
        for i in 1..n {
            next[i] = prev[i - 1].clone();
        }
        let top = &prev[n - 1];
        for i in 0..n {
            next[i] += &(top * &base[i]);
        }
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    proptest! {
        #[test]
        fn float_filter_never_contradicts_exact_sign(
            a in -2000i64..2000, b in -2000i64..2000, c in -2000i64..2000, d in 1i64..500,
        ) {
            let f = NumberField::from_ints(&[-1, -3, 1], q("3"), q("4")).unwrap();
            let g = NumberField::from_ints(&[1, -1, -1, -1, 1], q("3/2"), q("2")).unwrap();
            let r = |n: i64| Rational::new(n, d).unwrap();
            let quad = [r(a), r(b)];
            prop_assert_eq!(f.sign_at_root(&quad), f.sign_at_root_exact(&quad));
            let quart = [r(a), r(b), r(c), r(1)];
            prop_assert_eq!(g.sign_at_root(&quart), g.sign_at_root_exact(&quart));
            // near-cancellation: a√13-type values close to zero
            let near = [r(c * 3), r(-c)];
            prop_assert_eq!(f.sign_at_root(&near), f.sign_at_root_exact(&near));
        }
    }

    #[test]
    fn normalizes_minpoly_to_primitive_integers() {
        let f = NumberField::new(
            Polynomial::new(vec![q("-1/2"), q("-3/2"), q("1/2")]),
            Interval::new(q("3"), q("4")).unwrap(),
        )
        .unwrap();
        assert_eq!(f.minpoly(), &Polynomial::from_ints(&[-1, -3, 1]));
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn rejects_bad_isolators() {
        assert_eq!(
            NumberField::from_ints(&[-1, -3, 1], q("-1"), q("4")).unwrap_err(),
            Error::InvalidIsolator
        );
        assert_eq!(
            NumberField::from_ints(&[-1, -3, 1], q("-1"), q("0")).unwrap_err(),
            Error::RootNotGreaterThanOne
        );
        assert_eq!(NumberField::from_ints(&[1, 2, 1], q("-2"), q("0")).unwrap_err(), Error::NotSquarefree);
        assert_eq!(NumberField::from_ints(&[-1, 1], q("0"), q("2")).unwrap_err(), Error::RootNotGreaterThanOne);
    }

    #[test]
    fn rational_root_fields() {
        let f = NumberField::from_ints(&[-2, 1], q("1"), q("3")).unwrap();
        assert_eq!(f.degree(), 1);
        let f = NumberField::from_ints(&[-2, 1], q("2"), q("5")).unwrap();
        assert!(f.isolator().is_point());
    }

    #[test]
    fn reductions_match_direct_division() {
        let f = NumberField::from_ints(&[1, -1, -1, -1, 1], q("3/2"), q("2")).unwrap();
        for k in 0..12 {
            let direct = Polynomial::monomial(Rational::one(), k).div_rem(f.minpoly()).unwrap().1;
            let mut mono = vec![Rational::zero(); k + 1];
            mono[k] = Rational::one();
            assert_eq!(Polynomial::new(f.reduce(mono)), direct, "X^{k}");
        }
    }
}
