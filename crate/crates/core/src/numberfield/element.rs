use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;

use super::{Embedding, NumberField};
use crate::error::{Error, Result};
use crate::exactnum::{Interval, Polynomial, Rational};

/// An element of `Q(δ)` in the power basis `1, δ, …, δ^{n-1}`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn from_coords(field: &Arc<NumberField>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::MalformedConfig(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                coords.len()
            )));
        }
        Ok(FieldElement { field: field.clone(), coords })
    }

    /// Reduce an arbitrary polynomial in `δ` into the field.
    pub fn from_polynomial(field: &Arc<NumberField>, p: &Polynomial) -> Self {
        FieldElement { field: field.clone(), coords: field.reduce(p.coeffs().to_vec()) }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[0] = q;
        FieldElement { field: field.clone(), coords }
    }

    pub fn from_integer(field: &Arc<NumberField>, n: i64) -> Self {
        FieldElement::from_rational(field, Rational::from_integer(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement::from_rational(field, Rational::zero())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        FieldElement::from_rational(field, Rational::one())
    }

    /// The designated root `δ` itself.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        FieldElement::from_polynomial(field, &Polynomial::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Rational::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(Rational::is_zero).then(|| &self.coords[0])
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let n = self.coords.len();
        if let Some(a) = self.as_rational() {
            return Ok(other.scale(a));
        }
        if let Some(b) = other.as_rational() {
            return Ok(self.scale(b));
        }
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        Ok(FieldElement { field: self.field.clone(), coords: self.field.reduce(prod) })
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against the
    /// minimal polynomial.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.to_polynomial().extended_gcd(self.field.minpoly());
        if !g.is_constant() {
            return Err(Error::NotInvertible);
        }
        Ok(FieldElement::from_polynomial(&self.field, &s))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn scale(&self, c: &Rational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|a| a * c).collect() }
    }

    pub fn add_rational(&self, c: &Rational) -> FieldElement {
        let mut coords = self.coords.clone();
        coords[0] += c;
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn pow(&self, mut exp: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = FieldElement::one(&self.field);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Exact sign of the real value under the identity embedding.
    pub fn sign(&self) -> i32 {
        self.field.sign_at_root(&self.coords)
    }

    /// Exact comparison of real values.
    pub fn try_cmp(&self, other: &FieldElement) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.sign().cmp(&0))
    }

    /// The unique integer `n` with `n ≤ self < n + 1`.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.floor();
        }
        if let Some((v, err)) = self.field.approx_at_root(&self.coords) {
            let (lo, hi) = ((v - err).floor(), (v + err).floor());
            if lo == hi && lo.abs() < 9.0e15 {
                return BigInt::from(lo as i64);
            }
        }
        let enc = self.field.enclose(&self.coords, &Rational::one());
        let lo = enc.lo().floor();
        let hi = enc.hi().floor();
        if lo == hi {
            return lo;
        }
        // exactly one integer candidate `hi` lies in (enc.lo, enc.hi]
        let diff = self.add_rational(&-Rational::from_integer(hi.clone()));
        if diff.is_zero() || diff.sign() > 0 {
            hi
        } else {
            lo
        }
    }

    /// Rational enclosure of the value with width below `width`.
    pub fn enclosure(&self, width: &Rational) -> Interval {
        self.field.enclose(&self.coords, width)
    }

    pub fn approx(&self) -> f64 {
        let w = Rational::new(1, BigInt::from(1u64) << 60).expect("nonzero");
        self.enclosure(&w).midpoint().to_f64()
    }

    /// Image under an embedding, by Horner's scheme at the conjugate.
    pub fn embed(&self, e: &Embedding) -> Complex64 {
        self.coords
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * e.conjugate + c.to_f64())
    }

    /// Coordinates rendered as `p/q` strings.
    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(ToString::to_string).collect()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other).is_ok() && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_polynomial())?;
        if self.coords.len() > 1 {
            write!(f, " (≈{:.6})", self.approx())?;
        }
        Ok(())
    }
}

/// The four field operations, for [`field_arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arithmetic(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

// Operator forms panic on mixing fields or dividing by zero; library code
// only uses them on elements it built from one base.
macro_rules! field_binop {
    ($Trait:ident, $method:ident, $checked:ident) => {
        impl $Trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect(concat!("field ", stringify!($method)))
            }
        }
        impl $Trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect(concat!("field ", stringify!($method)))
            }
        }
    };
}

field_binop!(Add, add, checked_add);
field_binop!(Sub, sub, checked_sub);
field_binop!(Mul, mul, checked_mul);
field_binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
