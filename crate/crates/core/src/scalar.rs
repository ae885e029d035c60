//! Exact arithmetic in the biquadratic field ℚ(√2, √3).
//!
//! Every element is stored as `q + r2·√2 + r3·√3 + r6·√6` with four
//! big rationals. Since `1, √2, √3, √6` are linearly independent over ℚ and
//! each rational is kept in lowest terms, two elements are equal exactly when
//! their stored components are equal.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

/// An element `q + r2·√2 + r3·√3 + r6·√6` of ℚ(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    c: [Rational; 4],
}

// Basis products e_i·e_j = factor·e_k for the basis (1, √2, √3, √6).
const BASIS_PRODUCT: [[(i64, usize); 4]; 4] = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (2, 0), (1, 3), (2, 2)],
    [(1, 2), (1, 3), (3, 0), (3, 1)],
    [(1, 3), (2, 2), (3, 1), (6, 0)],
];

impl FieldElem {
    pub fn new(q: Rational, r2: Rational, r3: Rational, r6: Rational) -> Self {
        FieldElem {
            c: [q, r2, r3, r6],
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `numer/denom` as a field element. Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(q: Rational) -> Self {
        FieldElem {
            c: [q, Rational::zero(), Rational::zero(), Rational::zero()],
        }
    }

    pub fn sqrt2() -> Self {
        Self::basis(1)
    }

    pub fn sqrt3() -> Self {
        Self::basis(2)
    }

    pub fn sqrt6() -> Self {
        Self::basis(3)
    }

    fn basis(k: usize) -> Self {
        let mut e = Self::zero();
        e.c[k] = Rational::one();
        e
    }

    /// Rational part.
    pub fn q(&self) -> &Rational {
        &self.c[0]
    }

    /// Coefficient of √2.
    pub fn r2(&self) -> &Rational {
        &self.c[1]
    }

    /// Coefficient of √3.
    pub fn r3(&self) -> &Rational {
        &self.c[2]
    }

    /// Coefficient of √6.
    pub fn r6(&self) -> &Rational {
        &self.c[3]
    }

    pub fn components(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        FieldElem {
            c: [
                &self.c[0] * k,
                &self.c[1] * k,
                &self.c[2] * k,
                &self.c[3] * k,
            ],
        }
    }

    /// The automorphism √3 ↦ −√3 (fixes √2, sends √6 ↦ −√6).
    fn conj3(&self) -> Self {
        FieldElem {
            c: [
                self.c[0].clone(),
                self.c[1].clone(),
                -&self.c[2],
                -&self.c[3],
            ],
        }
    }

    /// The automorphism √2 ↦ −√2 (fixes √3, sends √6 ↦ −√6).
    fn conj2(&self) -> Self {
        FieldElem {
            c: [
                self.c[0].clone(),
                -&self.c[1],
                self.c[2].clone(),
                -&self.c[3],
            ],
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x·σ₃(x) lies in ℚ(√2); multiplying by its σ₂-conjugate lands in ℚ.
        let c3 = self.conj3();
        let y = self * &c3;
        debug_assert!(y.c[2].is_zero() && y.c[3].is_zero());
        let c2 = y.conj2();
        let z = &y * &c2;
        debug_assert!(z.is_rational() && !z.c[0].is_zero());
        let num = &c3 * &c2;
        Ok(num.scale(&z.c[0].recip()))
    }

    /// Nearest binary64 value.
    ///
    /// Works with rational approximations of the square roots until the
    /// approximation error is below 2⁻⁶⁰ of the magnitude, so the result is
    /// within one unit in the last place even under heavy cancellation.
    pub fn to_f64(&self) -> Result<f64> {
        if self.is_rational() {
            return rational_to_f64(&self.c[0]);
        }
        let irr_weight: Rational = self.c[1..].iter().map(|r| r.abs()).sum();
        let mut bits = 96u32;
        loop {
            let scale = BigInt::one() << bits;
            let approx_root = |n: u32| {
                let radicand = BigInt::from(n) << (2 * bits);
                Rational::new(radicand.sqrt(), scale.clone())
            };
            let approx = &self.c[0]
                + &self.c[1] * approx_root(2)
                + &self.c[2] * approx_root(3)
                + &self.c[3] * approx_root(6);
            // each truncated root is within 2^-bits of the true value
            let err = &irr_weight / Rational::from_integer(scale.clone());
            let margin = Rational::from_integer(BigInt::one() << 60u32);
            if approx.abs() > err * margin || bits > 1 << 16 {
                return rational_to_f64(&approx);
            }
            bits *= 2;
        }
    }
}

fn rational_to_f64(r: &Rational) -> Result<f64> {
    match r.to_f64() {
        Some(f) if f.is_finite() => Ok(f),
        _ => Err(Error::FloatOverflow),
    }
}

fn mul_into(out: &mut [Rational; 4], a: &FieldElem, b: &FieldElem) {
    for (i, x) in a.c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.c.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let (factor, k) = BASIS_PRODUCT[i][j];
            let p = x * y;
            if factor == 1 {
                out[k] += p;
            } else {
                out[k] += p * Rational::from_integer(BigInt::from(factor));
            }
        }
    }
}

impl Default for FieldElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for FieldElem {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &'a FieldElem) -> FieldElem {
        FieldElem {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &'a FieldElem) -> FieldElem {
        FieldElem {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
                &self.c[3] - &rhs.c[3],
            ],
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &'a FieldElem) -> FieldElem {
        let mut out = FieldElem::zero();
        mul_into(&mut out.c, self, rhs);
        out
    }
}

impl<'a> Div<&'a FieldElem> for &FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero, like the underlying rationals.
    fn div(self, rhs: &'a FieldElem) -> FieldElem {
        self * &rhs.inv().expect("division by zero in ℚ(√2,√3)")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &'a FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                self.$m(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl<'a> AddAssign<&'a FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &'a FieldElem) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl AddAssign for FieldElem {
    fn add_assign(&mut self, rhs: FieldElem) {
        *self += &rhs;
    }
}

impl<'a> SubAssign<&'a FieldElem> for FieldElem {
    fn sub_assign(&mut self, rhs: &'a FieldElem) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl SubAssign for FieldElem {
    fn sub_assign(&mut self, rhs: FieldElem) {
        *self -= &rhs;
    }
}

impl<'a> MulAssign<&'a FieldElem> for FieldElem {
    fn mul_assign(&mut self, rhs: &'a FieldElem) {
        *self = &*self * rhs;
    }
}

impl FieldElem {
    /// `self += a·b` without materialising the product.
    pub fn add_mul(&mut self, a: &FieldElem, b: &FieldElem) {
        mul_into(&mut self.c, a, b);
    }
}

impl Sum for FieldElem {
    fn sum<I: Iterator<Item = FieldElem>>(iter: I) -> Self {
        iter.fold(FieldElem::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a FieldElem> for FieldElem {
    fn sum<I: Iterator<Item = &'a FieldElem>>(iter: I) -> Self {
        let mut acc = FieldElem::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl Product for FieldElem {
    fn product<I: Iterator<Item = FieldElem>>(iter: I) -> Self {
        iter.fold(FieldElem::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["", "√2", "√3", "√6"];
        let mut first = true;
        for (r, name) in self.c.iter().zip(NAMES) {
            if r.is_zero() {
                continue;
            }
            let (sign, mag) = if r.is_negative() {
                ("-", -r)
            } else {
                ("+", r.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{mag}·{name}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `"p/q"` with the denominator always written, e.g. `"0/1"`.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, rejecting anything not in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("rational {s:?} is not of the form \"p/q\""));
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
    let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
    if !q.is_positive() {
        return Err(Error::Parse(format!(
            "rational {s:?} needs a positive denominator"
        )));
    }
    let r = Rational::new(p.clone(), q.clone());
    if r.numer() != &p || r.denom() != &q {
        return Err(Error::Parse(format!("rational {s:?} is not in lowest terms")));
    }
    Ok(r)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldElemWire {
    q: String,
    r2: String,
    r3: String,
    r6: String,
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldElemWire {
            q: rational_to_string(&self.c[0]),
            r2: rational_to_string(&self.c[1]),
            r3: rational_to_string(&self.c[2]),
            r6: rational_to_string(&self.c[3]),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let w = FieldElemWire::deserialize(deserializer)?;
        let p = |s: &str| parse_rational(s).map_err(D::Error::custom);
        Ok(FieldElem::new(p(&w.q)?, p(&w.r2)?, p(&w.r3)?, p(&w.r6)?))
    }
}
