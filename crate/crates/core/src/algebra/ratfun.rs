//! Univariate rational functions in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::FieldElement;
use super::poly::Polynomial;
use super::series::{Center, LaurentSeries};
use crate::error::AlgebraError;

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Expansion point for [`RationalFunction::series_expand`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionPoint {
    At(FieldElement),
    Infinity,
}

/// Principal parts at each pole plus the polynomial part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub polynomial: Polynomial,
    /// `(γ, [(j, c)])` meaning `Σ c·(z − γ)^(−j)`.
    pub poles: Vec<(FieldElement, Vec<(usize, FieldElement)>)>,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (mut n, mut d) =
            if g.degree().unwrap_or(0) > 0 { (num.div_rem(&g).0, den.div_rem(&g).0) } else { (num, den) };
        let lead = d.leading();
        if !lead.is_one() {
            let li = lead.inv();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RationalFunction { num: n, den: d }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::one())
    }

    pub fn constant(c: FieldElement) -> Self {
        RationalFunction { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(FieldElement::from_int(n))
    }

    pub fn z() -> Self {
        Self::from_poly(Polynomial::z())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    /// `(z − a)^k` for any integer `k`.
    pub fn power_of_linear(a: &FieldElement, k: i64) -> Self {
        let lin = Polynomial::linear_root(a);
        if k >= 0 {
            Self::from_poly(lin.pow(k as u32))
        } else {
            RationalFunction { num: Polynomial::one(), den: lin.pow((-k) as u32) }
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The constant value if this is constant.
    pub fn as_constant(&self) -> Option<FieldElement> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        Ok(RationalFunction { num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::canonical(n, &self.den * &self.den)
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, z: &FieldElement) -> Option<FieldElement> {
        let d = self.den.eval(z);
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval(z) / &d)
        }
    }

    /// Substitute another rational function for the variable.
    pub fn compose(&self, inner: &RationalFunction) -> Result<Self, AlgebraError> {
        // Homogenise: p(n/d) = P(n, d)/d^deg p.
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let top = dn.max(dd);
        let hom = |p: &Polynomial| -> Polynomial {
            let mut acc = Polynomial::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = &inner.num.pow(i as u32) * &inner.den.pow((top - i) as u32);
                acc = &acc + &term.scale(c);
            }
            acc
        };
        let n = hom(&self.num);
        let d = hom(&self.den);
        Self::new(n, d)
    }

    /// Value at `z = ∞`, `None` for a pole.
    pub fn eval_at_infinity(&self) -> Option<FieldElement> {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        if self.num.is_zero() || dn < dd {
            Some(FieldElement::zero())
        } else if dn == dd {
            Some(&self.num.leading() / &self.den.leading())
        } else {
            None
        }
    }

    /// Order of vanishing at `a` (negative for a pole).
    pub fn order_at(&self, a: &FieldElement) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64
    }

    /// Order at `z = ∞` in the coordinate `1/z`.
    pub fn order_at_infinity(&self) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64
    }

    /// Exact Laurent coefficients through `order` at a point or at `∞`.
    pub fn series_expand(&self, at: &ExpansionPoint, order: i64) -> LaurentSeries {
        let (num, den, center) = match at {
            ExpansionPoint::At(a) => {
                let shift = Polynomial::new(vec![a.clone(), FieldElement::one()]);
                (self.num.compose(&shift), self.den.compose(&shift), Center::Point(a.clone()))
            }
            ExpansionPoint::Infinity => {
                // f(1/w) = w^(dd − dn) rev(num)/rev(den)
                let dn = self.num.degree().unwrap_or(0);
                let dd = self.den.degree().unwrap_or(0);
                let rn: Vec<_> = self.num.coeffs().iter().rev().cloned().collect();
                let rd: Vec<_> = self.den.coeffs().iter().rev().cloned().collect();
                let top = dn.max(dd);
                let mut rnp = vec![FieldElement::zero(); top - dn];
                rnp.extend(rn);
                let mut rdp = vec![FieldElement::zero(); top - dd];
                rdp.extend(rd);
                (Polynomial::new(rnp), Polynomial::new(rdp), Center::Infinity)
            }
        };
        if num.is_zero() {
            return LaurentSeries::zero_with(center, order);
        }
        let vn = num.coeffs().iter().position(|c| !c.is_zero()).unwrap() as i64;
        let vd = den.coeffs().iter().position(|c| !c.is_zero()).unwrap() as i64;
        let rel = order - (vn - vd);
        if rel < 0 {
            return LaurentSeries::zero_with(center, order);
        }
        let ns = LaurentSeries::new(center.clone(), 0, num.coeffs().to_vec(), vn + rel);
        let ds = LaurentSeries::new(center, 0, den.coeffs().to_vec(), vd + rel);
        &ns * &ds.inverse().expect("nonzero denominator")
    }

    /// Partial fraction decomposition over the working field.
    pub fn partial_fractions(&self) -> Result<PartialFractions, AlgebraError> {
        let (q, _) = self.num.div_rem(&self.den);
        let roots = self.den.roots().map_err(|p| AlgebraError::OutsideField(p.to_string()))?;
        let mut poles = Vec::new();
        for (g, m) in roots {
            let s = self.series_expand(&ExpansionPoint::At(g.clone()), -1);
            let mut terms = Vec::new();
            for j in 1..=m {
                let c = s.coeff(-(j as i64)).expect("principal part in range");
                if !c.is_zero() {
                    terms.push((j, c));
                }
            }
            poles.push((g, terms));
        }
        Ok(PartialFractions { polynomial: q, poles })
    }

    /// Radicand of any irrational coefficient.
    pub fn radicand(&self) -> Option<i64> {
        self.num.radicand().or_else(|| self.den.radicand())
    }

    /// Printer in the expression grammar.
    pub fn to_expr(&self, var: &str) -> String {
        if self.den.is_constant() {
            return self.num.to_expr(var);
        }
        let n = self.num.to_expr(var);
        let nstr = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || n.starts_with('-') {
            format!("({n})")
        } else {
            n
        };
        format!("{nstr}/({})", self.den.to_expr(var))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("z"))
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::canonical(n, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "rational function division by zero");
        RationalFunction::canonical(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_rf {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_rf!(Add, add);
forward_rf!(Sub, sub);
forward_rf!(Mul, mul);
forward_rf!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan_x() -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(&[1, 0, 1]), Polynomial::from_ints(&[0, 1])).unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = RationalFunction::new(Polynomial::from_ints(&[-2, 0, 2]), Polynomial::from_ints(&[2, 2])).unwrap();
        assert_eq!(a, RationalFunction::from_poly(Polynomial::from_ints(&[-1, 1])));
        assert!(RationalFunction::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn expansions() {
        let g = RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[1, -1])).unwrap();
        let s = g.series_expand(&ExpansionPoint::At(FieldElement::zero()), 3);
        assert_eq!(s.coefficients(), &[1, 1, 1, 1].map(FieldElement::from_int));
        let inv = RationalFunction::z().inv().unwrap();
        let s = inv.series_expand(&ExpansionPoint::At(FieldElement::zero()), 2);
        assert_eq!(s.low(), -1);
        assert_eq!(s.coeff(0).unwrap(), FieldElement::zero());
        let s = catalan_x().series_expand(&ExpansionPoint::Infinity, 3);
        assert_eq!(s.low(), -1);
        assert_eq!(s.coeff(-1).unwrap(), FieldElement::one());
        assert_eq!(s.coeff(0).unwrap(), FieldElement::zero());
        assert_eq!(s.coeff(1).unwrap(), FieldElement::one());
        assert_eq!(s.coeff(3).unwrap(), FieldElement::zero());
    }

    #[test]
    fn derivative_and_compose() {
        let x = catalan_x();
        let dx = x.derivative();
        let expect =
            RationalFunction::new(Polynomial::from_ints(&[-1, 0, 1]), Polynomial::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(dx, expect);
        let inv = RationalFunction::z().inv().unwrap();
        assert_eq!(x.compose(&inv).unwrap(), x);
    }

    #[test]
    fn partial_fractions_catalan() {
        let f = RationalFunction::new(Polynomial::from_ints(&[0, 0, 1]), Polynomial::from_ints(&[-1, 0, 1])).unwrap();
        let pf = f.partial_fractions().unwrap();
        assert_eq!(pf.polynomial, Polynomial::one());
        assert_eq!(pf.poles.len(), 2);
        for (g, t) in &pf.poles {
            assert_eq!(t.len(), 1);
            assert_eq!(&t[0].1 * &FieldElement::from_int(2), g.clone());
        }
    }
}
