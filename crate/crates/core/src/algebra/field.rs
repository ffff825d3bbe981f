//! Exact scalars: rationals, optionally adjoined with a single square root.
//!
//! A [`FieldElement`] is `a + b·√d` with `a, b ∈ ℚ` and `d` a square-free
//! integer. Elements with `b = 0` are plain rationals and combine freely with
//! elements of any extension; two irrational elements must share the same `d`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Marker for "no extension" in the `d` slot.
const RATIONAL: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    re: BigRational,
    im: BigRational,
    d: i64,
}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.re.numer().hash(state);
        self.re.denom().hash(state);
        self.im.numer().hash(state);
        self.im.denom().hash(state);
        self.d.hash(state);
    }
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        FieldElement { re: q, im: BigRational::zero(), d: RATIONAL }
    }

    /// `a + b·√d`. `d` must be square-free and different from 0 and 1.
    pub fn quadratic(a: BigRational, b: BigRational, d: i64) -> Self {
        assert!(d != 0 && d != 1 && is_square_free(d), "d = {d} is not a square-free integer ≠ 0, 1");
        if b.is_zero() {
            Self::from_rational(a)
        } else {
            FieldElement { re: a, im: b, d }
        }
    }

    /// Exact square root of a rational number, in `ℚ` or `ℚ(√d)`.
    pub fn sqrt_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        // √(p/r) = √(p·r)/r, then pull square factors out of p·r.
        let pr: BigInt = q.numer() * q.denom();
        let (square_part, free) = split_square_free(&pr);
        let coeff = BigRational::new(square_part, q.denom().clone());
        let free_i = free.to_i64().expect("square-free part exceeds i64");
        if free_i == 1 {
            Self::from_rational(coeff)
        } else {
            Self::quadratic(BigRational::zero(), coeff, free_i)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// The rational value, if the irrational part vanishes.
    pub fn to_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.re)
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.re
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.im
    }

    /// The square-free radicand, or `None` for a rational element.
    pub fn radicand(&self) -> Option<i64> {
        if self.is_rational() {
            None
        } else {
            Some(self.d)
        }
    }

    pub fn conjugate(&self) -> Self {
        FieldElement { re: self.re.clone(), im: -self.im.clone(), d: self.d }
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> BigRational {
        if self.is_rational() {
            &self.re * &self.re
        } else {
            &self.re * &self.re - BigRational::from_integer(BigInt::from(self.d)) * &self.im * &self.im
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        if self.is_rational() {
            return Self::from_rational(self.re.recip());
        }
        let n = self.norm();
        FieldElement { re: &self.re / &n, im: -(&self.im / &n), d: self.d }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn join_d(&self, other: &Self) -> i64 {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => RATIONAL,
            (false, true) => self.d,
            (true, false) => other.d,
            (false, false) => {
                assert_eq!(self.d, other.d, "mixed quadratic extensions √{} and √{}", self.d, other.d);
                self.d
            }
        }
    }

    fn normalised(re: BigRational, im: BigRational, d: i64) -> Self {
        if im.is_zero() {
            FieldElement { re, im, d: RATIONAL }
        } else {
            FieldElement { re, im, d }
        }
    }

    /// Total order used only to make printed output deterministic.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.d.cmp(&other.d)).then_with(|| self.im.cmp(&other.im))
    }

    /// Exact rational string `n` or `n/d`; quadratic elements print as
    /// `a + b*sqrt(d)`.
    pub fn to_exact_string(&self) -> String {
        if self.is_rational() {
            rational_string(&self.re)
        } else if self.re.is_zero() {
            format!("{}*sqrt({})", rational_string(&self.im), self.d)
        } else {
            format!("{} + {}*sqrt({})", rational_string(&self.re), rational_string(&self.im), self.d)
        }
    }
}

pub(crate) fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

/// Parses `n`, `n/d` (rational elements only).
impl FromStr for FieldElement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("invalid rational `{s}`"))?;
        let d: BigInt = d.parse().map_err(|_| format!("invalid rational `{s}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(Self::from_rational(BigRational::new(n, d)))
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement::zero()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::one()
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

impl From<BigRational> for FieldElement {
    fn from(q: BigRational) -> Self {
        FieldElement::from_rational(q)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.is_rational() && rhs.is_rational() {
            return FieldElement::from_rational(&self.re + &rhs.re);
        }
        let d = self.join_d(rhs);
        FieldElement::normalised(&self.re + &rhs.re, &self.im + &rhs.im, d)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        if self.is_rational() && rhs.is_rational() {
            return FieldElement::from_rational(&self.re - &rhs.re);
        }
        let d = self.join_d(rhs);
        FieldElement::normalised(&self.re - &rhs.re, &self.im - &rhs.im, d)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (self.is_rational(), rhs.is_rational()) {
            (true, true) => FieldElement::from_rational(&self.re * &rhs.re),
            (true, false) => FieldElement::normalised(&self.re * &rhs.re, &self.re * &rhs.im, rhs.d),
            (false, true) => FieldElement::normalised(&self.re * &rhs.re, &self.im * &rhs.re, self.d),
            (false, false) => {
                let d = self.join_d(rhs);
                let dq = BigRational::from_integer(BigInt::from(d));
                let re = &self.re * &rhs.re + dq * &self.im * &rhs.im;
                let im = &self.re * &rhs.im + &self.im * &rhs.re;
                FieldElement::normalised(re, im, d)
            }
        }
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        if self.is_rational() && rhs.is_rational() {
            assert!(!rhs.re.is_zero(), "division by zero");
            return FieldElement::from_rational(&self.re / &rhs.re);
        }
        self * &rhs.inv()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { re: -self.re.clone(), im: -self.im.clone(), d: self.d }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { re: -self.re, im: -self.im, d: self.d }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        if self.is_rational() && rhs.is_rational() {
            self.re += &rhs.re;
        } else {
            *self = &*self + rhs;
        }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self += &rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        if self.is_rational() && rhs.is_rational() {
            self.re -= &rhs.re;
        } else {
            *self = &*self - rhs;
        }
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self -= &rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        if self.is_rational() && rhs.is_rational() {
            self.re *= &rhs.re;
        } else {
            *self = &*self * rhs;
        }
    }
}

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::zero(), |acc, x| acc + x)
    }
}

fn is_square_free(d: i64) -> bool {
    let (sq, _) = split_square_free(&BigInt::from(d));
    sq.abs().is_one()
}

/// Writes `n = s²·f` with `f` square-free (sign carried by `f`).
fn split_square_free(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            square *= &p;
        }
        if count % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    free *= rest;
    (square, free * sign)
}

/// Binomial coefficient as a field element.
pub fn binomial(n: u64, k: u64) -> FieldElement {
    if k > n {
        return FieldElement::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    FieldElement::from_bigint(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `gcd` of two big integers, exposed for the oracles.
pub fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::frac(n, d)
    }

    #[test]
    fn rational_arithmetic_is_reduced() {
        let a = q(2, 4);
        assert_eq!(a, q(1, 2));
        assert_eq!(&a + &q(1, 3), q(5, 6));
        assert_eq!(&a * &q(-4, 3), q(-2, 3));
        assert_eq!(&a / &q(1, 4), FieldElement::from_int(2));
        assert_eq!(q(3, -6).to_exact_string(), "-1/2");
    }

    #[test]
    fn quadratic_extension() {
        let r2 = FieldElement::sqrt_rational(&BigRational::from_integer(BigInt::from(2)));
        assert_eq!(r2.radicand(), Some(2));
        assert_eq!(&r2 * &r2, FieldElement::from_int(2));
        let x = &FieldElement::one() + &r2;
        assert_eq!(&x * &x.inv(), FieldElement::one());
        let i = FieldElement::sqrt_rational(&BigRational::from_integer(BigInt::from(-1)));
        assert_eq!(&i * &i, FieldElement::from_int(-1));
        let s = FieldElement::sqrt_rational(&BigRational::new(BigInt::from(9), BigInt::from(8)));
        // √(9/8) = 3/(2√2) = (3/4)√2
        assert_eq!(s, FieldElement::quadratic(BigRational::zero(), BigRational::new(3.into(), 4.into()), 2));
        assert_eq!(FieldElement::sqrt_rational(&BigRational::from_integer(4.into())), FieldElement::from_int(2));
    }

    #[test]
    #[should_panic(expected = "mixed quadratic extensions")]
    fn mixed_extensions_panic() {
        let a = FieldElement::sqrt_rational(&BigRational::from_integer(2.into()));
        let b = FieldElement::sqrt_rational(&BigRational::from_integer(3.into()));
        let _ = &a + &b;
    }

    #[test]
    fn parse_and_print() {
        let x: FieldElement = "-6/4".parse().unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert!("1/0".parse::<FieldElement>().is_err());
        assert_eq!(binomial(6, 3), FieldElement::from_int(20));
    }
}
