//! The polynomial matrix certificate built from `p` rational expansions.
//!
//! For rationals `x_j = p_j/q_j` whose expansions share preperiod `r` and
//! period `s` blocks, with
//! `g_i(X) = Σ_{k≤r} x_{p(k−1)+i} X^{r−k}`,
//! `f_i(X) = Σ_{r<k≤r+s} x_{p(k−1)+i} X^{r+s−k}` and
//! `h_i = (X^s − 1) g_i + f_i`, every expansion satisfies
//! `Σ_i q_j h_i(δ) v_i = p_j δ^r (δ^s − 1)`. Stacking the `p` equations gives
//! a matrix `M(X)` with `M(δ) v = 0`, so `det M` vanishes at `δ`.

use nalgebra::DMatrix;
use num_integer::Integer;
use serde::Serialize;

use crate::base::{AlternateBase, Digit};
use crate::error::{Error, Result};
use crate::exactnum::{Polynomial, Rational};
use crate::expansion::{greedy_expand_rational, DigitWord, ExpansionKind, ExpansionReport};
use crate::numberfield::FieldElement;

/// Determinant over `Q[X]` by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(matrix: &[Vec<Polynomial>]) -> Polynomial {
    let n = matrix.len();
    if n == 0 {
        return Polynomial::one();
    }
    let mut a: Vec<Vec<Polynomial>> = matrix.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Polynomial::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

fn poly_from_digits(ds: impl DoubleEndedIterator<Item = Digit>) -> Polynomial {
    // most significant digit first
    Polynomial::new(ds.rev().map(Rational::from_integer).collect())
}

fn x_pow_minus_one(s: usize) -> Polynomial {
    &Polynomial::monomial(Rational::one(), s) - &Polynomial::one()
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifiedRational {
    pub x: Rational,
    pub expansion: ExpansionReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateChecks {
    pub matrix_kills_v: bool,
    pub det_vanishes_at_delta: bool,
    pub det_nonzero_poly: bool,
    /// Numeric rank of `M(δ)` equals `p − 1` and some `(p−1)`-minor is
    /// exactly nonzero at `δ`.
    pub rank_p_minus_1: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicityCertificate {
    pub rationals: Vec<CertifiedRational>,
    /// Common preperiod, in blocks of `p` digits.
    pub r: usize,
    /// Common period, in blocks of `p` digits.
    pub s: usize,
    /// `matrix[j][i]`, polynomial coefficients ascending as `p/q` strings.
    pub matrix: Vec<Vec<Vec<String>>>,
    pub detpoly: Vec<String>,
    pub numeric_rank: usize,
    pub singular_values_approx: Vec<f64>,
    /// Row and column removed from the first exactly nonzero `(p−1)`-minor.
    pub nonzero_minor: Option<(usize, usize)>,
    pub checks: CertificateChecks,
}

/// Common `(r, s)` in blocks: largest preperiod and lcm of periods, each
/// rounded up to whole blocks.
fn common_shape(words: &[DigitWord], p: usize) -> (usize, usize) {
    let pre = words.iter().map(|w| w.preperiod().len()).max().unwrap_or(0);
    let per = words.iter().map(|w| w.period().len().max(1)).fold(1usize, |a, b| a.lcm(&b));
    (pre.div_ceil(p), per.lcm(&p) / p)
}

fn coeff_strings(p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

const RANK_THRESHOLD: f64 = 1e-8;

/// Build and check the certificate matrix for `p` rationals in `[0, 1)`.
pub fn periodicity_certificate(base: &AlternateBase, xs: &[Rational], cap: usize) -> Result<PeriodicityCertificate> {
    let p = base.period();
    if xs.len() != p {
        return Err(Error::WrongArity { expected: p, got: xs.len() });
    }
    let mut rationals = Vec::with_capacity(p);
    for (j, x) in xs.iter().enumerate() {
        let rep = greedy_expand_rational(base, x, cap)?;
        if rep.kind == ExpansionKind::Truncated {
            return Err(Error::ExpansionDidNotClose(j + 1));
        }
        rationals.push(CertifiedRational { x: x.clone(), expansion: rep });
    }
    let words: Vec<DigitWord> = rationals.iter().map(|c| c.expansion.word.clone()).collect();
    let (r, s) = common_shape(&words, p);
    let xr_xs1 = &Polynomial::monomial(Rational::one(), r) * &x_pow_minus_one(s);

    let mut matrix = vec![vec![Polynomial::zero(); p]; p];
    for (j, (w, x)) in words.iter().zip(xs).enumerate() {
        let q = Rational::from(x.denom().clone());
        let num = Rational::from(x.numer().clone());
        for i in 0..p {
            let g = poly_from_digits((0..r).map(|k| w.digit(p * k + i)));
            let f = poly_from_digits((r..r + s).map(|k| w.digit(p * k + i)));
            let h = &(&x_pow_minus_one(s) * &g) + &f;
            let mut entry = h.scale(&q);
            if i == p - 1 {
                entry = &entry - &xr_xs1.scale(&num);
            }
            matrix[j][i] = entry;
        }
    }

    let field = base.field();
    let at_delta: Vec<Vec<FieldElement>> = matrix
        .iter()
        .map(|row| row.iter().map(|e| FieldElement::from_polynomial(field, e)).collect())
        .collect();
    let v = base.digit_vector();
    let matrix_kills_v = at_delta.iter().all(|row| {
        row.iter()
            .zip(&v.entries)
            .fold(FieldElement::zero(field), |acc, (m, vi)| &acc + &(m * vi))
            .is_zero()
    });

    let detpoly = bareiss_determinant(&matrix);
    if detpoly.is_zero() {
        return Err(Error::DegenerateChoice);
    }
    let det_vanishes_at_delta = FieldElement::from_polynomial(field, &detpoly).is_zero();

    let numeric = DMatrix::from_fn(p, p, |j, i| at_delta[j][i].approx());
    let singular_values_approx: Vec<f64> = numeric.svd(false, false).singular_values.iter().copied().collect();
    let smax = singular_values_approx.iter().copied().fold(0.0f64, f64::max);
    let numeric_rank = singular_values_approx.iter().filter(|&&sv| sv > RANK_THRESHOLD * smax && sv > 0.0).count();

    let nonzero_minor = (0..p)
        .flat_map(|row| (0..p).map(move |col| (row, col)))
        .find(|&(row, col)| {
            let minor: Vec<Vec<Polynomial>> = (0..p)
                .filter(|&j| j != row)
                .map(|j| (0..p).filter(|&i| i != col).map(|i| matrix[j][i].clone()).collect())
                .collect();
            !FieldElement::from_polynomial(field, &bareiss_determinant(&minor)).is_zero()
        });
    let rank_p_minus_1 = numeric_rank + 1 == p && nonzero_minor.is_some() && det_vanishes_at_delta;

    Ok(PeriodicityCertificate {
        rationals,
        r,
        s,
        matrix: matrix.iter().map(|row| row.iter().map(coeff_strings).collect()).collect(),
        detpoly: coeff_strings(&detpoly),
        numeric_rank,
        singular_values_approx,
        nonzero_minor,
        checks: CertificateChecks { matrix_kills_v, det_vanishes_at_delta, det_nonzero_poly: true, rank_p_minus_1 },
    })
}

/// Check `x (δ^s − 1) = (f₁(δ), …, f_p(δ))·v` for a purely periodic expansion.
///
/// The zero expansion counts as one zero block.
pub fn pure_periodic_identity_check(base: &AlternateBase, x: &Rational, report: &ExpansionReport) -> Result<bool> {
    let p = base.period();
    let w = &report.word;
    let digits: Vec<Digit> = match report.kind {
        ExpansionKind::PurelyPeriodic => {
            let n = w.period().len().lcm(&p);
            w.prefix(n)
        }
        ExpansionKind::Finite if w.is_zero() => vec![0; p],
        _ => return Err(Error::NotPurelyPeriodic),
    };
    let s = digits.len() / p;
    let field = base.field();
    let v = base.digit_vector();
    let rhs = (0..p).fold(FieldElement::zero(field), |acc, i| {
        let f = poly_from_digits((0..s).map(|k| digits[p * k + i]));
        &acc + &(&FieldElement::from_polynomial(field, &f) * &v.entries[i])
    });
    let lhs = FieldElement::from_polynomial(field, &x_pow_minus_one(s).scale(x));
    Ok(lhs == rhs)
}

/// For each `j = 1, …, p`, the simplest rational whose expansion starts with
/// `0^{j−1} 1 0^{pm−j}` and closes within `cap`.
///
/// Candidates are searched by increasing denominator inside a floating-point
/// window, but each is accepted only after its greedy prefix is verified
/// exactly.
pub fn prefix_rationals(base: &AlternateBase, m: usize, cap: usize) -> Result<Vec<Rational>> {
    let p = base.period();
    let n = p * m;
    let mut out = Vec::with_capacity(p);
    for j in 0..p {
        let mut prefix = vec![0; n];
        prefix[j] = 1;
        let word = DigitWord::finite(prefix.clone());
        let lo = crate::expansion::value_of(base, &word)?.approx();
        let weight: f64 = (0..n).map(|k| base.beta_at(k).approx()).product::<f64>().recip();
        let hi = lo + weight;
        let found = (2..=200_000u64).find_map(|den| {
            let start = (lo * den as f64).floor() as u64;
            (start..=start + 2).find_map(|num| {
                let x = Rational::new(num, den).ok()?;
                let xf = x.to_f64();
                if xf <= lo || xf >= hi {
                    return None;
                }
                let rep = greedy_expand_rational(base, &x, cap).ok()?;
                (rep.kind != ExpansionKind::Truncated && rep.word.prefix(n) == prefix).then_some(x)
            })
        });
        out.push(found.ok_or_else(|| Error::OutOfRange(format!("no rational found with prefix {word}")))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::pp_family;
    use crate::numberfield::NumberField;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pi(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    /// Leibniz expansion, as an independent check of the elimination.
    fn leibniz(m: &[Vec<Polynomial>]) -> Polynomial {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Polynomial::zero();
        fn heap(k: usize, perm: &mut Vec<usize>, m: &[Vec<Polynomial>], total: &mut Polynomial) {
            if k == 1 {
                let inversions = (0..perm.len())
                    .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| perm[i] > perm[j])
                    .count();
                let term = (0..perm.len()).fold(Polynomial::one(), |acc, i| &acc * &m[i][perm[i]]);
                *total = if inversions % 2 == 0 { &*total + &term } else { &*total - &term };
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, m, total);
                let swap = if k % 2 == 0 { i } else { 0 };
                perm.swap(swap, k - 1);
            }
        }
        heap(n, &mut perm, m, &mut total);
        total
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let m = vec![
            vec![pi(&[1, 2]), pi(&[0, 0, 1]), pi(&[3])],
            vec![pi(&[0]), pi(&[-1, 1]), pi(&[2, 0, 1])],
            vec![pi(&[5, -1]), pi(&[1]), pi(&[0, 1])],
        ];
        assert_eq!(bareiss_determinant(&m), leibniz(&m));
        let pivot_swap = vec![vec![pi(&[0]), pi(&[1])], vec![pi(&[1]), pi(&[0, 1])]];
        assert_eq!(bareiss_determinant(&pivot_swap), pi(&[-1]));
        assert_eq!(bareiss_determinant(&[]), Polynomial::one());
        let singular = vec![vec![pi(&[1, 1]), pi(&[2, 2])], vec![pi(&[1]), pi(&[2])]];
        assert!(bareiss_determinant(&singular).is_zero());
    }

    #[test]
    fn single_base_reduces_to_one_equation() {
        let f = NumberField::from_ints(&[-1, -3, 1], q("3"), q("4")).unwrap();
        let b = AlternateBase::new(&f, vec![FieldElement::generator(&f)]).unwrap();
        let c = periodicity_certificate(&b, &[q("1/2")], 1000).unwrap();
        assert!(c.checks.matrix_kills_v && c.checks.det_vanishes_at_delta && c.checks.det_nonzero_poly);
        // rank 0 = p − 1 for a 1×1 matrix vanishing at δ
        assert_eq!(c.numeric_rank, 0);
        assert!(c.checks.rank_p_minus_1);
    }

    #[test]
    fn family_pair_certificate() {
        let b = pp_family(2);
        let xs = prefix_rationals(&b, 3, 10_000).unwrap();
        assert_eq!(xs.len(), 2);
        let c = periodicity_certificate(&b, &xs, 10_000).unwrap();
        assert!(c.checks.matrix_kills_v);
        assert!(c.checks.det_vanishes_at_delta);
        assert!(c.checks.det_nonzero_poly);
        assert!(c.checks.rank_p_minus_1, "{:?}", c.singular_values_approx);
        // det M is divisible by the minimal polynomial
        let det = Polynomial::new(c.detpoly.iter().map(|s| s.parse().unwrap()).collect());
        assert!(det.div_rem(b.field().minpoly()).unwrap().1.is_zero());
    }

    #[test]
    fn zero_rationals_are_degenerate() {
        let b = pp_family(2);
        assert_eq!(periodicity_certificate(&b, &[q("0"), q("0")], 100).unwrap_err(), Error::DegenerateChoice);
        assert_eq!(
            periodicity_certificate(&b, &[q("1/2")], 100).unwrap_err(),
            Error::WrongArity { expected: 2, got: 1 }
        );
        assert_eq!(periodicity_certificate(&b, &[q("3/4"), q("1/2")], 5).unwrap_err(), Error::ExpansionDidNotClose(1));
    }

    #[test]
    fn identity_check() {
        let b = pp_family(2);
        let rep = greedy_expand_rational(&b, &q("3/4"), 1000).unwrap();
        assert_eq!(rep.word.period().len(), 12);
        assert!(pure_periodic_identity_check(&b, &q("3/4"), &rep).unwrap());
        assert!(!pure_periodic_identity_check(&b, &q("2/3"), &rep).unwrap());
        let zero = greedy_expand_rational(&b, &q("0"), 10).unwrap();
        assert!(pure_periodic_identity_check(&b, &q("0"), &zero).unwrap());
        let eventually = greedy_expand_rational(&b.shift(2), &q("1/2"), 1000).unwrap();
        assert_eq!(
            pure_periodic_identity_check(&b.shift(2), &q("1/2"), &eventually).unwrap_err(),
            Error::NotPurelyPeriodic
        );
    }
}
