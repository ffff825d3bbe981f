//! Truncated Laurent series with explicit precision.
//!
//! A [`LaurentSeries`] stores the coefficients of `s^low, …, s^trunc`; every
//! term of order `≤ trunc` is exact and nothing is claimed beyond it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::FieldElement;
use super::poly::Polynomial;
use crate::error::AlgebraError;

/// Where a series was expanded. Arithmetic only combines like centres.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    /// Expansion in `s = z − a`.
    Point(FieldElement),
    /// Expansion in `w = 1/z`.
    Infinity,
    /// A local coordinate not tied to a global parameter.
    Local,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    center: Center,
    low: i64,
    /// `coeffs[i]` multiplies `s^(low + i)`; length `trunc − low + 1`.
    coeffs: Vec<FieldElement>,
    trunc: i64,
}

impl LaurentSeries {
    /// Build from coefficients starting at `low`, exact through `trunc`.
    /// Coefficients past `trunc` are dropped, missing ones are zero.
    pub fn new(center: Center, low: i64, mut coeffs: Vec<FieldElement>, trunc: i64) -> Self {
        if trunc < low {
            return Self::zero_with(center, trunc);
        }
        let len = (trunc - low + 1) as usize;
        coeffs.resize(len, FieldElement::zero());
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero_with(center, trunc),
            Some(p) => {
                coeffs.drain(..p);
                LaurentSeries { center, low: low + p as i64, coeffs, trunc }
            }
        }
    }

    pub fn local(low: i64, coeffs: Vec<FieldElement>, trunc: i64) -> Self {
        Self::new(Center::Local, low, coeffs, trunc)
    }

    /// The zero series, known through order `trunc`.
    pub fn zero_with(center: Center, trunc: i64) -> Self {
        LaurentSeries { center, low: trunc + 1, coeffs: Vec::new(), trunc }
    }

    pub fn zero(trunc: i64) -> Self {
        Self::zero_with(Center::Local, trunc)
    }

    /// `c · s^k` known through `trunc`.
    pub fn monomial(c: FieldElement, k: i64, trunc: i64) -> Self {
        Self::local(k, vec![c], trunc)
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(FieldElement::one(), 0, trunc)
    }

    /// The local coordinate `s` itself.
    pub fn var(trunc: i64) -> Self {
        Self::monomial(FieldElement::one(), 1, trunc)
    }

    /// A polynomial in `s`, truncated.
    pub fn from_poly(p: &Polynomial, trunc: i64) -> Self {
        Self::local(0, p.coeffs().to_vec(), trunc)
    }

    pub fn center(&self) -> &Center {
        &self.center
    }

    pub fn with_center(mut self, c: Center) -> Self {
        self.center = c;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest order with a nonzero coefficient (`trunc + 1` for zero).
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Relative precision: number of exact terms after the leading one.
    pub fn precision(&self) -> i64 {
        self.trunc - self.low
    }

    /// Coefficient of `s^k`; errors if `k` is beyond the truncation.
    pub fn coeff(&self, k: i64) -> Result<FieldElement, AlgebraError> {
        if k > self.trunc {
            return Err(AlgebraError::Truncation { wanted: k, known: self.trunc });
        }
        Ok(self.coeff_unchecked(k))
    }

    fn coeff_unchecked(&self, k: i64) -> FieldElement {
        if k < self.low || k > self.trunc {
            FieldElement::zero()
        } else {
            self.coeffs[(k - self.low) as usize].clone()
        }
    }

    /// Coefficient of `s^-1`.
    pub fn residue(&self) -> Result<FieldElement, AlgebraError> {
        self.coeff(-1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.first().cloned().unwrap_or_else(FieldElement::zero)
    }

    /// Drop everything above order `n`.
    pub fn truncate(&self, n: i64) -> Self {
        if n >= self.trunc {
            return self.clone();
        }
        Self::new(self.center.clone(), self.low, self.coeffs.clone(), n)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero_with(self.center.clone(), self.trunc);
        }
        LaurentSeries {
            center: self.center.clone(),
            low: self.low,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiply by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            center: self.center.clone(),
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            trunc: self.trunc + k,
        }
    }

    fn check_center(&self, other: &Self) {
        assert!(
            self.center == other.center || self.center == Center::Local || other.center == Center::Local,
            "series at different centres"
        );
    }

    fn joined_center(&self, other: &Self) -> Center {
        if self.center == Center::Local {
            other.center.clone()
        } else {
            self.center.clone()
        }
    }

    /// Product known through `min(cap, natural truncation)`.
    pub fn mul_trunc(&self, other: &Self, cap: i64) -> Self {
        self.check_center(other);
        let center = self.joined_center(other);
        let trunc = (self.trunc + other.low).min(other.trunc + self.low).min(cap);
        if self.is_zero() || other.is_zero() {
            return Self::zero_with(center, trunc);
        }
        let low = self.low + other.low;
        if trunc < low {
            return Self::zero_with(center, trunc);
        }
        let len = (trunc - low + 1) as usize;
        let mut out = vec![FieldElement::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            let jmax = (len - i).min(other.coeffs.len());
            for (j, b) in other.coeffs[..jmax].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += &(a * b);
            }
        }
        Self::new(center, low, out, trunc)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.precision();
        let a0inv = self.leading().inv();
        let mut b: Vec<FieldElement> = Vec::with_capacity(n as usize + 1);
        b.push(a0inv.clone());
        for k in 1..=n as usize {
            let mut acc = FieldElement::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc += &(&self.coeffs[j] * &b[k - j]);
            }
            b.push(-(&acc * &a0inv));
        }
        Ok(Self::new(self.center.clone(), -self.low, b, -self.low + n))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut acc = Self::monomial(FieldElement::one(), 0, self.precision()).with_center(self.center.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero_with(self.center.clone(), self.trunc - 1);
        }
        let coeffs =
            self.coeffs.iter().enumerate().map(|(i, c)| c * &FieldElement::from_int(self.low + i as i64)).collect();
        Self::new(self.center.clone(), self.low - 1, coeffs, self.trunc - 1)
    }

    /// Term-wise antiderivative with zero constant; fails on an `s^-1` term.
    pub fn integral(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Ok(Self::zero_with(self.center.clone(), self.trunc + 1));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            if k == -1 {
                if !c.is_zero() {
                    return Err(AlgebraError::LogarithmicTerm);
                }
                coeffs.push(FieldElement::zero());
            } else {
                coeffs.push(c / &FieldElement::from_int(k + 1));
            }
        }
        let mut s = Self::new(self.center.clone(), self.low + 1, coeffs, self.trunc + 1);
        if self.low < 0 && self.trunc >= -1 {
            // The constant slot is exactly zero by convention.
            s = s.truncate(self.trunc + 1);
        }
        Ok(s)
    }

    /// `log u` for `u = 1 + O(s)`, via `∫ u′/u`.
    pub fn log(&self) -> Result<Self, AlgebraError> {
        if self.low != 0 || !self.leading().is_one() {
            return Err(AlgebraError::LogConstantTerm);
        }
        if self.precision() == 0 {
            return Ok(Self::zero_with(self.center.clone(), self.trunc));
        }
        let q = self.derivative().div(self)?;
        q.integral()
    }

    /// `exp f` for `f = O(s)`.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if self.low <= 0 && !self.is_zero() {
            return Err(AlgebraError::ExpConstantTerm);
        }
        let n = self.trunc.max(0);
        // e' = f' e, solved term by term.
        let mut e = vec![FieldElement::one()];
        for k in 1..=n {
            let mut acc = FieldElement::zero();
            for j in 1..=k {
                let fj = self.coeff_unchecked(j);
                if fj.is_zero() {
                    continue;
                }
                acc += &(&(&fj * &FieldElement::from_int(j)) * &e[(k - j) as usize]);
            }
            e.push(&acc / &FieldElement::from_int(k));
        }
        Ok(Self::new(self.center.clone(), 0, e, n))
    }

    /// Square root of a series with even leading order and a leading
    /// coefficient whose square root lies in the working field.
    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Ok(Self::zero_with(self.center.clone(), self.trunc / 2));
        }
        if self.low % 2 != 0 {
            return Err(AlgebraError::OddSquareRoot);
        }
        let lead = self.leading();
        let rq = lead.to_rational().ok_or(AlgebraError::OddSquareRoot)?;
        let r = FieldElement::sqrt_rational(rq);
        let n = self.precision();
        // u = self / (lead s^low) = 1 + ..., sqrt(u) by b² = u.
        let u: Vec<FieldElement> = self.coeffs.iter().map(|c| c / &lead).collect();
        let mut b = vec![FieldElement::one()];
        let half = FieldElement::frac(1, 2);
        for k in 1..=n as usize {
            let mut acc = u[k].clone();
            for j in 1..k {
                acc -= &(&b[j] * &b[k - j]);
            }
            b.push(&acc * &half);
        }
        let out = Self::new(self.center.clone(), 0, b, n).scale(&r);
        Ok(out.shift(self.low / 2))
    }

    /// `self(g(s))` where `g` has positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self, AlgebraError> {
        if g.is_zero() || g.low < 1 {
            return Err(AlgebraError::BadComposition);
        }
        let l = g.low;
        let rel = g.precision();
        let top = self.trunc;
        // g^k is known through k·l + rel; f's own tail is O(g^(top+1)).
        let mut target = l * (top + 1) - 1;
        if !self.is_zero() && top >= 1 {
            target = target.min(l + rel);
        }
        if !self.is_zero() && self.low < 0 {
            target = target.min(self.low * l + rel);
        }
        let gt = g.truncate(target.max(l));
        let mut acc = Self::zero_with(Center::Local, target);
        if top >= 0 {
            let mut horner = Self::zero_with(Center::Local, target);
            for k in (0..=top).rev() {
                horner = horner.mul_trunc(&gt, target);
                let c = self.coeff_unchecked(k);
                if !c.is_zero() {
                    horner = &horner + &Self::monomial(c, 0, target);
                }
            }
            acc = &acc + &horner;
        }
        if self.low < 0 {
            let ginv = g.inverse()?;
            let mut p = ginv.clone();
            for k in 1..=(-self.low) {
                let c = self.coeff_unchecked(-k);
                if !c.is_zero() {
                    acc = &acc + &p.scale(&c);
                }
                if k < -self.low {
                    p = &p * &ginv;
                }
            }
        }
        Ok(acc.truncate(target).with_center(g.center.clone()))
    }

    /// Compositional inverse of `g = a₁s + …` (`a₁ ≠ 0`).
    pub fn reversion(&self) -> Result<Self, AlgebraError> {
        if self.low != 1 {
            return Err(AlgebraError::BadComposition);
        }
        let n = self.trunc;
        let a1inv = self.leading().inv();
        // Fixed-point iteration h ← h − (g(h) − t)/a₁, one order per pass.
        let mut h = Self::monomial(a1inv.clone(), 1, 1);
        for m in 2..=n {
            let hm = Self::new(Center::Local, h.low, h.coeffs.clone(), m);
            let gh = self.truncate(m).compose(&hm)?;
            let err = gh.coeff_unchecked(m);
            let mut coeffs = hm.coeffs.clone();
            let idx = (m - hm.low) as usize;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, FieldElement::zero());
            }
            coeffs[idx] = &coeffs[idx] - &(&err * &a1inv);
            h = Self::new(Center::Local, hm.low, coeffs, m);
        }
        Ok(h)
    }

    /// Coefficients from `low` through `trunc`.
    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Principal part as `(order, coeff)` pairs with order < 0.
    pub fn principal_part(&self) -> Vec<(i64, FieldElement)> {
        (self.low..0)
            .filter_map(|k| {
                let c = self.coeff_unchecked(k);
                (!c.is_zero()).then_some((k, c))
            })
            .collect()
    }
}

impl<'a> Add<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.check_center(rhs);
        let center = self.joined_center(rhs);
        let trunc = self.trunc.min(rhs.trunc);
        let low = self.low.min(rhs.low);
        if low > trunc {
            return LaurentSeries::zero_with(center, trunc);
        }
        let len = (trunc - low + 1) as usize;
        let mut v = vec![FieldElement::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            if k > trunc {
                break;
            }
            v[(k - low) as usize] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let k = rhs.low + i as i64;
            if k > trunc {
                break;
            }
            v[(k - low) as usize] += c;
        }
        LaurentSeries::new(center, low, v, trunc)
    }
}

impl<'a> Sub<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_trunc(rhs, i64::MAX)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(&FieldElement::from_int(-1))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})*s^{}", c, self.low + i as i64)?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(s^{})", self.trunc + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    fn geometric(n: i64) -> LaurentSeries {
        // 1/(1 − s)
        LaurentSeries::local(0, vec![q(1), q(-1)], n).inverse().unwrap()
    }

    #[test]
    fn inverse_of_one_minus_s() {
        let g = geometric(3);
        assert_eq!(g.coefficients(), &[q(1), q(1), q(1), q(1)]);
    }

    #[test]
    fn mercator() {
        let u = LaurentSeries::local(0, vec![q(1), q(1)], 3);
        let l = u.log().unwrap();
        assert_eq!(l.coeff(1).unwrap(), q(1));
        assert_eq!(l.coeff(2).unwrap(), FieldElement::frac(-1, 2));
        assert_eq!(l.coeff(3).unwrap(), FieldElement::frac(1, 3));
        assert!(LaurentSeries::one(4).log().unwrap().is_zero());
        let bad = LaurentSeries::local(0, vec![q(2), q(1)], 3);
        assert!(matches!(bad.log(), Err(AlgebraError::LogConstantTerm)));
    }

    #[test]
    fn exp_log_roundtrip() {
        let f = LaurentSeries::local(1, vec![q(2), q(-1), FieldElement::frac(1, 3)], 6);
        let back = f.exp().unwrap().log().unwrap();
        assert_eq!(back.truncate(6), f);
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let a = LaurentSeries::local(-1, vec![q(1), q(1)], 3);
        let b = LaurentSeries::local(0, vec![q(1)], 5);
        assert_eq!((&a * &b).trunc(), 3);
        assert_eq!((&a + &b).trunc(), 3);
        assert!(a.coeff(4).is_err());
    }

    #[test]
    fn reversion_of_s_over_one_plus_s2() {
        // ξ = w/(1+w²) ⇒ w = ξ + ξ³ + 2ξ⁵ + 5ξ⁷ + …
        let g = LaurentSeries::local(0, vec![q(1), q(0), q(1)], 8).inverse().unwrap().shift(1);
        let h = g.reversion().unwrap();
        assert_eq!(h.coeff(1).unwrap(), q(1));
        assert_eq!(h.coeff(3).unwrap(), q(1));
        assert_eq!(h.coeff(5).unwrap(), q(2));
        assert_eq!(h.coeff(7).unwrap(), q(5));
    }

    #[test]
    fn sqrt_and_compose() {
        let f = LaurentSeries::local(2, vec![q(4), q(4), q(1)], 6);
        let r = f.sqrt().unwrap();
        assert_eq!(&r * &r, f);
        let g = LaurentSeries::local(1, vec![q(1), q(1)], 5);
        let inv = LaurentSeries::local(-1, vec![q(1)], 5);
        let c = inv.compose(&g).unwrap();
        assert_eq!(c.coeff(-1).unwrap(), q(1));
        assert_eq!(c.coeff(0).unwrap(), q(-1));
    }
}
