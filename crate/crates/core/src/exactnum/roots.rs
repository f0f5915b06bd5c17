//! Certified real-root isolation with Sturm sequences over exact rationals.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Interval, Polynomial, Rational};
use crate::error::{Error, Result};

/// The Sturm chain `p, p', -rem(p, p'), …` ending at the last nonzero term.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    let mut seq = vec![p.clone()];
    let mut next = p.derivative();
    while !next.is_zero() {
        let (_, r) = seq.last().expect("nonempty").div_rem(&next).expect("nonzero divisor");
        seq.push(next);
        next = -&r;
    }
    seq
}

/// Number of sign changes along the chain at `x`, zeros skipped.
pub fn sign_variations(seq: &[Polynomial], x: &Rational) -> usize {
    let mut changes = 0;
    let mut last = 0;
    for s in seq.iter().map(|q| q.sign_at(x)).filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots in `(a, b]`, for `a` not a root.
pub fn count_roots(seq: &[Polynomial], a: &Rational, b: &Rational) -> usize {
    sign_variations(seq, a).saturating_sub(sign_variations(seq, b))
}

/// Isolate every real root of a squarefree polynomial.
///
/// Intervals are returned in increasing order and are pairwise disjoint. Each
/// either has endpoints where `p` is nonzero with opposite signs, or is a
/// single point holding an exact rational root. Rational roots are found by
/// the rational root test when the polynomial's extreme coefficients are
/// small enough to enumerate divisors of; otherwise they may still come back
/// as proper intervals.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<Interval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let rational = rational_roots(p);
    let mut rest = p.clone();
    for r in &rational {
        let linear = Polynomial::new(vec![-r, Rational::one()]);
        rest = rest.exact_div(&linear).expect("rational root divides");
    }
    let mut out: Vec<Interval> = rational.iter().cloned().map(Interval::point).collect();
    for iv in bisect_isolate(&rest)? {
        let mut iv = iv;
        // keep irrational brackets clear of the rational roots so the sign
        // of `p` itself changes across them
        while !iv.is_point() && rational.iter().any(|r| iv.contains(r)) {
            iv = refine_root(&rest, &iv, &(iv.width() / Rational::from_integer(2)))?;
        }
        out.push(iv);
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    // shared endpoints from bisection are not roots; shrink them apart
    for k in 1..out.len() {
        while out[k - 1].hi() >= out[k].lo() {
            let half = |iv: &Interval| iv.width() / Rational::from_integer(2);
            let (a, b) = (out[k - 1].clone(), out[k].clone());
            if !a.is_point() {
                out[k - 1] = refine_root(p, &a, &half(&a))?;
            }
            if !b.is_point() {
                out[k] = refine_root(p, &b, &half(&b))?;
            }
        }
    }
    Ok(out)
}

fn bisect_isolate(p: &Polynomial) -> Result<Vec<Interval>> {
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let seq = sturm_sequence(p);
    let bound = p.cauchy_bound()?;
    let mut out = Vec::new();
    let mut stack = vec![(-&bound, bound)];
    while let Some((a, b)) = stack.pop() {
        let n = count_roots(&seq, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            if p.sign_at(&b) == 0 {
                out.push(Interval::point(b));
            } else {
                out.push(Interval::new(a, b)?);
            }
            continue;
        }
        let mid = a.midpoint(&b);
        if p.sign_at(&mid) == 0 {
            // Carve a root-free neighbourhood around the rational root so
            // that neither half has a root as an endpoint.
            let mut eps = (&b - &a) / Rational::from_integer(4);
            loop {
                let l = &mid - &eps;
                let r = &mid + &eps;
                if p.sign_at(&l) != 0 && p.sign_at(&r) != 0 && count_roots(&seq, &l, &r) == 1 {
                    out.push(Interval::point(mid.clone()));
                    stack.push((r, b));
                    stack.push((a, l));
                    break;
                }
                eps = eps / Rational::from_integer(2);
            }
        } else {
            stack.push((mid.clone(), b));
            stack.push((a, mid));
        }
    }
    Ok(out)
}

const DIVISOR_LIMIT: u64 = 1_000_000;

/// Rational roots by the rational root test, for polynomials whose constant
/// and leading integer coefficients are at most `DIVISOR_LIMIT`.
fn rational_roots(p: &Polynomial) -> Vec<Rational> {
    let ints = p.primitive_integer();
    let mut roots = Vec::new();
    let mut low = 0;
    while ints[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Rational::zero());
    }
    let small = |c: &BigInt| c.abs().to_u64().filter(|&v| v <= DIVISOR_LIMIT);
    let (Some(a0), Some(an)) = (small(&ints[low]), small(&ints[ints.len() - 1])) else {
        return roots;
    };
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let r = Rational::new(sign * num as i64, den as i64).expect("nonzero");
                if p.sign_at(&r) == 0 && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    (1..).take_while(|d| d * d <= n).filter(|d| n % d == 0).flat_map(|d| [d, n / d]).collect()
}

/// Shrink an isolating interval to width at most `width` by bisection.
///
/// The result contains the same root and is a subset of `iv`.
pub fn refine_root(p: &Polynomial, iv: &Interval, width: &Rational) -> Result<Interval> {
    if iv.is_point() {
        return if p.sign_at(iv.lo()) == 0 { Ok(iv.clone()) } else { Err(Error::InvalidIsolator) };
    }
    let mut lo = iv.lo().clone();
    let mut hi = iv.hi().clone();
    let slo = p.sign_at(&lo);
    let shi = p.sign_at(&hi);
    if slo == 0 {
        return Ok(Interval::point(lo));
    }
    if shi == 0 {
        return Ok(Interval::point(hi));
    }
    if slo == shi {
        return Err(Error::InvalidIsolator);
    }
    while &(&hi - &lo) > width {
        let mid = lo.midpoint(&hi);
        let s = p.sign_at(&mid);
        if s == 0 {
            return Ok(Interval::point(mid));
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn assert_sound(poly: &Polynomial, ivs: &[Interval]) {
        for iv in ivs {
            if iv.is_point() {
                assert_eq!(poly.sign_at(iv.lo()), 0);
            } else {
                assert_eq!(poly.sign_at(iv.lo()) * poly.sign_at(iv.hi()), -1);
            }
        }
        for w in ivs.windows(2) {
            assert!(w[0].hi() < w[1].lo());
        }
    }

    #[test]
    fn quadratic_roots_land_in_hand_checked_brackets() {
        // p(-1)=3, p(0)=-1, p(3)=-1, p(4)=3
        let poly = p(&[-1, -3, 1]);
        let ivs = isolate_real_roots(&poly).unwrap();
        assert_eq!(ivs.len(), 2);
        assert_sound(&poly, &ivs);
        let neg = Interval::new(q("-1"), q("0")).unwrap();
        let pos = Interval::new(q("3"), q("4")).unwrap();
        let r0 = refine_root(&poly, &ivs[0], &q("1/8")).unwrap();
        let r1 = refine_root(&poly, &ivs[1], &q("1/8")).unwrap();
        assert!(neg.contains_interval(&r0));
        assert!(pos.contains_interval(&r1));
    }

    #[test]
    fn rational_root_is_a_point() {
        assert_eq!(isolate_real_roots(&p(&[-1, 1])).unwrap(), vec![Interval::point(q("1"))]);
        // (x)(x-1)(x+2): the first midpoint of the Cauchy bracket is 0
        let poly = p(&[0, -2, 1, 1]);
        let ivs = isolate_real_roots(&poly).unwrap();
        assert_eq!(ivs.len(), 3);
        assert_sound(&poly, &ivs);
        assert!(ivs.contains(&Interval::point(q("0"))));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        assert_eq!(isolate_real_roots(&Polynomial::zero()), Err(Error::ZeroPolynomial));
        assert_eq!(isolate_real_roots(&p(&[1, 2, 1])), Err(Error::NotSquarefree));
        let iv = Interval::new(q("0"), q("1")).unwrap();
        assert_eq!(refine_root(&p(&[-1, -3, 1]), &iv, &q("1/10")), Err(Error::InvalidIsolator));
    }

    #[test]
    fn refines_to_requested_width() {
        // (3 + sqrt 13)/2 = 3.302775637731995; sqrt(13) from f64 as an independent value
        let target = (3.0 + 13f64.sqrt()) / 2.0;
        let poly = p(&[-1, -3, 1]);
        let iv = Interval::new(q("3"), q("4")).unwrap();
        let r = refine_root(&poly, &iv, &q("1/100")).unwrap();
        assert!(r.width() <= q("1/100"));
        let (lo, hi) = r.to_f64_bounds();
        assert!(lo <= target && target <= hi);

        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let iv = Interval::new(q("1"), q("2")).unwrap();
        let r = refine_root(&p(&[-1, -1, 1]), &iv, &q("1/1000000")).unwrap();
        let (lo, hi) = r.to_f64_bounds();
        assert!(lo <= golden && golden <= hi && hi - lo <= 1e-6);
        assert!((lo - 1.6180339).abs() < 1e-6);

        let pt = Interval::point(q("1"));
        assert_eq!(refine_root(&p(&[-1, 1]), &pt, &q("1/2")).unwrap(), pt);
    }

    #[test]
    fn bisection_output_is_nested() {
        let poly = p(&[-2, 0, 1]);
        let iv = Interval::new(q("1"), q("2")).unwrap();
        let mut prev = iv.clone();
        for k in 1..20 {
            let w = Rational::new(1, 1i64 << k).unwrap();
            let r = refine_root(&poly, &iv, &w).unwrap();
            assert!(iv.contains_interval(&r));
            assert!(prev.contains_interval(&r));
            assert!(r.width() <= w);
            prev = r;
        }
    }
}
