//! Functions of the form `R(z) + Σ cᵢ(z)·log rᵢ(z)`.

use std::fmt;

use super::field::FieldElement;
use super::poly::Polynomial;
use super::ratfun::{ExpansionPoint, RationalFunction};
use super::series::LaurentSeries;
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogAugmentedFunction {
    rational: RationalFunction,
    /// `(coefficient, argument)`, arguments nonconstant and pairwise distinct,
    /// sorted by printed argument.
    logs: Vec<(RationalFunction, RationalFunction)>,
}

/// Local expansion of a log-augmented function at a finite point.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    /// Everything except the constants `c·log r(a)`.
    pub series: LaurentSeries,
    /// `(c, r(a))` with `r(a) ≠ 1`: the dropped constant is `Σ c·log r(a)`.
    pub log_constants: Vec<(FieldElement, FieldElement)>,
}

impl LocalExpansion {
    /// Coefficient of `s^k`; the constant term is refused when it hides a
    /// transcendental log constant.
    pub fn coeff(&self, k: i64) -> Result<FieldElement, AlgebraError> {
        if k == 0 && !self.log_constants.is_empty() {
            let (c, r) = &self.log_constants[0];
            return Err(AlgebraError::Transcendental(format!("{c}*log({r})")));
        }
        self.series.coeff(k)
    }
}

impl LogAugmentedFunction {
    pub fn zero() -> Self {
        Self::from_rational(RationalFunction::zero())
    }

    pub fn from_rational(r: RationalFunction) -> Self {
        LogAugmentedFunction { rational: r, logs: Vec::new() }
    }

    /// `c · log(arg)`; `arg` must be nonconstant.
    pub fn log_term(c: RationalFunction, arg: RationalFunction) -> Result<Self, AlgebraError> {
        if arg.is_constant() {
            return Err(AlgebraError::NotRepresentable("log of a constant".into()));
        }
        let mut f = Self::zero();
        f.push_log(c, arg);
        Ok(f)
    }

    fn push_log(&mut self, c: RationalFunction, arg: RationalFunction) {
        if c.is_zero() {
            return;
        }
        if let Some(slot) = self.logs.iter_mut().find(|(_, a)| *a == arg) {
            slot.0 = &slot.0 + &c;
        } else {
            self.logs.push((c, arg));
        }
        self.logs.retain(|(c, _)| !c.is_zero());
        self.logs.sort_by_key(|(_, a)| a.to_expr("z"));
    }

    pub fn rational_part(&self) -> &RationalFunction {
        &self.rational
    }

    pub fn log_terms(&self) -> &[(RationalFunction, RationalFunction)] {
        &self.logs
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.logs.is_empty() && self.rational.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = LogAugmentedFunction { rational: &self.rational + &other.rational, logs: self.logs.clone() };
        for (c, a) in &other.logs {
            out.push_log(c.clone(), a.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.mul_rational(&RationalFunction::from_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_rational(&self, r: &RationalFunction) -> Self {
        let mut out = Self::from_rational(&self.rational * r);
        for (c, a) in &self.logs {
            out.push_log(c * r, a.clone());
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        self.mul_rational(&RationalFunction::constant(c.clone()))
    }

    /// Product, defined when at least one factor is rational.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if let Some(r) = other.as_rational() {
            Ok(self.mul_rational(r))
        } else if let Some(r) = self.as_rational() {
            Ok(other.mul_rational(r))
        } else {
            Err(AlgebraError::NotRepresentable("product of two logarithmic expressions".into()))
        }
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::from_rational(self.rational.derivative());
        for (c, a) in &self.logs {
            let extra = &(c * &a.derivative()) / a;
            out.rational = &out.rational + &extra;
            out.push_log(c.derivative(), a.clone());
        }
        out
    }

    /// `d/dx = (1/x′(z)) d/dz`.
    pub fn d_dx(&self, x: &RationalFunction) -> Self {
        let xp = x.derivative();
        self.derivative().mul_rational(&xp.inv().expect("x nonconstant"))
    }

    /// Antiderivative in `z`. Rational parts integrate via partial fractions;
    /// `c·log r` terms by parts, which needs a rational primitive of `c`.
    pub fn antiderivative(&self) -> Result<Self, AlgebraError> {
        let mut out = integrate_rational(&self.rational)?;
        for (c, a) in &self.logs {
            let big_c = integrate_rational(c)?;
            let cr = big_c.as_rational().ok_or_else(|| {
                AlgebraError::NotRepresentable("log term whose coefficient has a logarithmic primitive".into())
            })?;
            out = out.add(&Self::log_term(cr.clone(), a.clone())?);
            let rest = &(cr * &a.derivative()) / a;
            out = out.sub(&integrate_rational(&rest)?);
        }
        Ok(out)
    }

    /// Substitute a rational function for the variable.
    pub fn compose(&self, inner: &RationalFunction) -> Result<Self, AlgebraError> {
        let mut out = Self::from_rational(self.rational.compose(inner)?);
        for (c, a) in &self.logs {
            let na = a.compose(inner)?;
            if na.is_constant() {
                return Err(AlgebraError::NotRepresentable("log argument became constant".into()));
            }
            out.push_log(c.compose(inner)?, na);
        }
        Ok(out)
    }

    /// Laurent expansion at a finite point through `order`. Log arguments
    /// must be regular and nonzero there.
    pub fn local_series(&self, a: &FieldElement, order: i64) -> Result<LocalExpansion, AlgebraError> {
        let at = ExpansionPoint::At(a.clone());
        let mut series = self.rational.series_expand(&at, order);
        let mut log_constants = Vec::new();
        for (c, r) in &self.logs {
            let ra = r
                .eval(a)
                .filter(|v| !v.is_zero())
                .ok_or_else(|| AlgebraError::NotRepresentable(format!("log({}) is singular at {a}", r.to_expr("z"))))?;
            let cs = c.series_expand(&at, order);
            let margin = (-cs.low()).max(0);
            let unit = r.series_expand(&at, order + margin).scale(&ra.inv());
            let lg = unit.log()?;
            series = &series + &cs.mul_trunc(&lg, order);
            if !ra.is_one() {
                match c.as_constant() {
                    Some(cc) => log_constants.push((cc, ra)),
                    None => {
                        return Err(AlgebraError::Transcendental(format!("({})*log({ra}) at z = {a}", c.to_expr("z"))))
                    }
                }
            }
        }
        Ok(LocalExpansion { series, log_constants })
    }

    /// Value of `exp(self)` when it is rational: a rational part of zero and
    /// integer log coefficients.
    pub fn exp_rational(&self) -> Result<RationalFunction, AlgebraError> {
        if !self.rational.is_zero() {
            return Err(AlgebraError::NotRepresentable("exp of a nonzero rational part".into()));
        }
        let mut acc = RationalFunction::one();
        for (c, a) in &self.logs {
            let e = c
                .as_constant()
                .and_then(|v| v.to_rational().cloned())
                .filter(|q| q.is_integer())
                .and_then(|q| num_traits::ToPrimitive::to_i64(&q.to_integer()))
                .ok_or_else(|| AlgebraError::NotRepresentable("exp of a non-integer log multiple".into()))?;
            acc = &acc * &a.pow(e)?;
        }
        Ok(acc)
    }

    /// Printer in the expression grammar.
    pub fn to_expr(&self, var: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        if !self.rational.is_zero() || self.logs.is_empty() {
            parts.push(self.rational.to_expr(var));
        }
        for (c, a) in &self.logs {
            let arg = a.to_expr(var);
            let body = match c.as_constant() {
                Some(k) if k.is_one() => format!("log({arg})"),
                Some(k) if k.is_rational() => format!("{}*log({arg})", k.to_exact_string()),
                _ => format!("({})*log({arg})", c.to_expr(var)),
            };
            parts.push(body);
        }
        let mut out = String::new();
        for p in parts {
            if out.is_empty() {
                out = p;
            } else if let Some(rest) = p.strip_prefix('-') {
                out = format!("{out} - {rest}");
            } else {
                out = format!("{out} + {p}");
            }
        }
        out
    }
}

impl fmt::Display for LogAugmentedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("z"))
    }
}

impl From<RationalFunction> for LogAugmentedFunction {
    fn from(r: RationalFunction) -> Self {
        Self::from_rational(r)
    }
}

/// `∫ r dz` via partial fractions; simple poles become logarithms.
pub fn integrate_rational(r: &RationalFunction) -> Result<LogAugmentedFunction, AlgebraError> {
    if r.is_zero() {
        return Ok(LogAugmentedFunction::zero());
    }
    let pf = r.partial_fractions()?;
    let mut poly = vec![FieldElement::zero()];
    for (i, c) in pf.polynomial.coeffs().iter().enumerate() {
        poly.push(c / &FieldElement::from_int(i as i64 + 1));
    }
    let mut rat = RationalFunction::from_poly(Polynomial::new(poly));
    let mut out = LogAugmentedFunction::zero();
    for (g, terms) in &pf.poles {
        for (j, c) in terms {
            if *j == 1 {
                out = out.add(&LogAugmentedFunction::log_term(
                    RationalFunction::constant(c.clone()),
                    RationalFunction::from_poly(Polynomial::linear_root(g)),
                )?);
            } else {
                let k = *j as i64 - 1;
                let coef = c / &FieldElement::from_int(-k);
                rat = &rat + &RationalFunction::power_of_linear(g, -k).scale(&coef);
            }
        }
    }
    Ok(out.add(&LogAugmentedFunction::from_rational(rat)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RationalFunction {
        RationalFunction::z()
    }

    #[test]
    fn catalan_s0() {
        // ∫ (1/z)(1 − 1/z²) dz = log z + 1/(2z²)
        let zi = z().inv().unwrap();
        let integrand = &zi - &zi.pow(3).unwrap();
        let s0 = integrate_rational(&integrand).unwrap();
        assert_eq!(s0.log_terms().len(), 1);
        assert_eq!(s0.rational_part(), &zi.pow(2).unwrap().scale(&FieldElement::frac(1, 2)));
        assert_eq!(s0.derivative().as_rational().unwrap(), &integrand);
    }

    #[test]
    fn gw_s0_by_parts() {
        // ∫ log z · (1 − 1/z²) dz = (z + 1/z) log z − z + 1/z
        let y = LogAugmentedFunction::log_term(RationalFunction::one(), z()).unwrap();
        let xp = &RationalFunction::one() - &z().pow(-2).unwrap();
        let s0 = y.mul_rational(&xp).antiderivative().unwrap();
        assert_eq!(s0.derivative(), y.mul_rational(&xp));
        let x = &z() + &z().inv().unwrap();
        assert_eq!(s0.log_terms()[0].0, x);
    }

    #[test]
    fn local_series_tracks_constants() {
        let y = LogAugmentedFunction::log_term(RationalFunction::one(), z()).unwrap();
        let e = y.local_series(&FieldElement::from_int(-1), 3).unwrap();
        assert_eq!(e.log_constants.len(), 1);
        assert!(e.coeff(0).is_err());
        assert_eq!(e.coeff(1).unwrap(), FieldElement::from_int(-1));
        let e = y.local_series(&FieldElement::one(), 3).unwrap();
        assert!(e.log_constants.is_empty());
        assert_eq!(e.coeff(2).unwrap(), FieldElement::frac(-1, 2));
    }

    #[test]
    fn exp_of_integer_logs() {
        let y = LogAugmentedFunction::log_term(RationalFunction::from_int(-1), z()).unwrap();
        assert_eq!(y.exp_rational().unwrap(), z().inv().unwrap());
    }
}
