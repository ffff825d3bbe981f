//! Degree-zero and low-degree Gromov–Witten data of `P¹`.
//!
//! `ψ_0` is handled through `F_0 = log ψ_0` as a series in `u = ħ/x` whose
//! coefficients are polynomials in `t`. Ratios `r_d = ψ_d/ψ_0` are rational
//! in `w = x/ħ − t` with `q` normalised so that `r_d → 1/d!` as `w → ∞`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::zeta_negative_odd;
use crate::algebra::{binomial, factorial, FieldElement, Polynomial, RationalFunction};
use crate::error::OracleError;

pub const MAX_PSI0_ORDER: usize = 8;
pub const MAX_RATIO_DEGREE: usize = 6;

/// `c_g = (1 − 2^{1−2g}) ζ(1−2g)/(2g−1)`, the coefficient of `(ħ/x)^{2g−1}` in `φ`.
pub fn phi_coefficient(g: usize) -> FieldElement {
    let two = FieldElement::from_int(2);
    let f = &FieldElement::one() - &two.pow(1 - 2 * g as i64);
    &(&f * &zeta_negative_odd(g)) / &FieldElement::from_int(2 * g as i64 - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GwPsi0 {
    pub order: usize,
    /// `coeffs[k]` multiplies `u^k` in `log ψ_0`, as a polynomial in `t`.
    pub coeffs: Vec<Polynomial>,
    /// `F_0(t−1) − F_0(t) − log(1 − (t−½)u)` by powers of `u`.
    pub residual: Vec<Polynomial>,
}

impl GwPsi0 {
    pub fn recursion_holds(&self) -> bool {
        self.residual.iter().all(|p| p.is_zero())
    }
}

fn t_monomial(c: FieldElement, k: usize) -> Polynomial {
    Polynomial::monomial(c, k)
}

/// `F_0 = φ(x − ħt) + ħ⁻¹(x − ħt) log(1 − tħ/x) + t` through `u^K`.
pub fn gw_psi0(order: usize) -> Result<GwPsi0, OracleError> {
    if order > MAX_PSI0_ORDER {
        return Err(OracleError::Guard(format!("gw_psi0 needs K ≤ {MAX_PSI0_ORDER}")));
    }
    let mut coeffs = vec![Polynomial::zero(); order + 1];
    for (k, ck) in coeffs.iter_mut().enumerate().skip(1) {
        // φ(x−ħt) = Σ c_g (u/(1−tu))^{2g−1}
        let mut acc = Polynomial::zero();
        for g in 1..=k.div_ceil(2) {
            let j = k + 1 - 2 * g;
            acc = &acc + &t_monomial(&phi_coefficient(g) * &binomial(k as u64 - 1, j as u64), j);
        }
        // (1/u − t) log(1 − tu)
        let lg = &FieldElement::frac(1, k as i64) - &FieldElement::frac(1, k as i64 + 1);
        acc = &acc + &t_monomial(lg, k + 1);
        *ck = acc;
    }
    let shift = Polynomial::from_ints(&[-1, 1]);
    let mut residual = Vec::with_capacity(order);
    let base = Polynomial::new(vec![FieldElement::frac(-1, 2), FieldElement::one()]);
    for (m, ck) in coeffs.iter().enumerate().skip(1) {
        let diff = &ck.compose(&shift) - ck;
        // log(1 − (t−½)u) = −Σ (t−½)^m u^m/m
        let lg = base.pow(m as u32).scale(&FieldElement::frac(-1, m as i64));
        residual.push(&diff - &lg);
    }
    Ok(GwPsi0 { order, coeffs, residual })
}

/// `1/(w − a)`.
fn simple_pole(a: &FieldElement) -> RationalFunction {
    RationalFunction::power_of_linear(a, -1)
}

fn pole(i: usize) -> FieldElement {
    &FieldElement::from_int(i as i64) - &FieldElement::frac(1, 2)
}

fn inv_factorial(d: usize) -> FieldElement {
    FieldElement::from_rational(BigRational::new(BigInt::from(1), factorial(d as u64)))
}

fn assemble(d: usize, a: &[FieldElement]) -> RationalFunction {
    let mut r = RationalFunction::constant(inv_factorial(d));
    for (i, ai) in a.iter().enumerate().skip(1) {
        if !ai.is_zero() {
            r = &r + &simple_pole(&pole(i)).scale(ai);
        }
    }
    r
}

fn check_degree(d: usize) -> Result<(), OracleError> {
    if d > MAX_RATIO_DEGREE {
        return Err(OracleError::Guard(format!("gw_psi_ratio needs d ≤ {MAX_RATIO_DEGREE}")));
    }
    Ok(())
}

/// `r_d(w) = 1/d! + Σ_i a_{i,d}/(w − i + ½)` from the residue system
/// `a_{i,d} = a_{i+1,d} + a_{i−1,d−1}/(i(i−1))`, `a_{1,d} = a_{2,d} + r_{d−1}(−½)`.
pub fn gw_psi_ratio(d: usize) -> Result<RationalFunction, OracleError> {
    check_degree(d)?;
    let mut prev: Vec<FieldElement> = vec![FieldElement::zero()];
    let mut r = RationalFunction::one();
    for dd in 1..=d {
        let mut a = vec![FieldElement::zero(); dd + 2];
        for i in (2..=dd).rev() {
            let below = prev.get(i - 1).cloned().unwrap_or_else(FieldElement::zero);
            a[i] = &a[i + 1] + &(&below / &FieldElement::from_int((i * (i - 1)) as i64));
        }
        let at = r.eval(&FieldElement::frac(-1, 2)).expect("r_{d−1} is regular at −½");
        a[1] = &a[2] + &at;
        a.truncate(dd + 1);
        r = assemble(dd, &a);
        prev = a;
    }
    Ok(r)
}

/// `r_d` from `(w+½)(r_d(w+1) − r_d(w)) + r_{d−1}(w−1)/(w−½) = 0`, solved
/// for the residues with the constant term fixed at `1/d!`.
pub fn gw_psi_ratio_from_equation(d: usize) -> Result<RationalFunction, OracleError> {
    check_degree(d)?;
    let up = Polynomial::from_ints(&[1, 1]);
    let down = Polynomial::from_ints(&[-1, 1]);
    let shift = |f: &RationalFunction, p: &Polynomial| f.compose(&RationalFunction::from_poly(p.clone()));
    let plus_half = RationalFunction::from_poly(Polynomial::new(vec![FieldElement::frac(1, 2), FieldElement::one()]));
    let mut r = RationalFunction::one();
    for dd in 1..=d {
        let mut funcs = Vec::with_capacity(dd);
        for i in 1..=dd {
            let f = simple_pole(&pole(i));
            funcs.push(&plus_half * &(&shift(&f, &up)? - &f));
        }
        let rhs = -&(&shift(&r, &down)? * &simple_pole(&FieldElement::frac(1, 2)));
        let (a, b) = crate::wkb::linear_system(&funcs, &rhs);
        let sol = crate::algebra::linsolve::solve(&a, &b, dd)
            .ok_or_else(|| OracleError::Range(format!("no rational r_{dd} of the expected shape")))?;
        if !sol.kernel.is_empty() {
            return Err(OracleError::Range(format!("r_{dd} is not determined by its residues")));
        }
        let mut coeffs = vec![FieldElement::zero()];
        coeffs.extend(sol.particular);
        r = assemble(dd, &coeffs);
    }
    Ok(r)
}

type QSeries = Vec<RationalFunction>;

fn q_mul(a: &QSeries, b: &QSeries, n: usize) -> QSeries {
    let mut out = vec![RationalFunction::zero(); n];
    for i in 0..n.min(a.len()) {
        for j in 0..(n - i).min(b.len()) {
            out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
        }
    }
    out
}

/// Inverse of a series with constant term 1.
fn q_inv(a: &QSeries, n: usize) -> QSeries {
    let mut out = vec![RationalFunction::zero(); n];
    out[0] = RationalFunction::one();
    for k in 1..n {
        let mut acc = RationalFunction::zero();
        for j in 1..=k.min(a.len() - 1) {
            acc = &acc - &(&a[j] * &out[k - j]);
        }
        out[k] = acc;
    }
    out
}

/// `log` of a series with constant term 1, via `(log a)′ = a′/a`.
fn q_log(a: &QSeries, n: usize) -> QSeries {
    let mut da = vec![RationalFunction::zero(); n];
    for k in 1..n.min(a.len()) {
        da[k - 1] = a[k].scale(&FieldElement::from_int(k as i64));
    }
    let quot = q_mul(&da, &q_inv(a, n), n);
    let mut out = vec![RationalFunction::zero(); n];
    for k in 1..n {
        out[k] = quot[k - 1].scale(&FieldElement::frac(1, k as i64));
    }
    out
}

/// Coefficients of `q^0, …, q^{m−1}` in
/// `ψ(t−1)ψ(t+1)/ψ(t)² − d/dq(q d/dq log ψ)` for `ψ = ψ_0 Σ q^d r_d`.
pub fn toda_residuals(m: usize) -> Result<Vec<RationalFunction>, OracleError> {
    let n = m + 1;
    let r: QSeries = (0..n).map(gw_psi_ratio).collect::<Result<_, _>>()?;
    let shift = |p: Polynomial| -> Result<QSeries, OracleError> {
        let inner = RationalFunction::from_poly(p);
        r.iter().map(|f| f.compose(&inner).map_err(OracleError::from)).collect()
    };
    let plus = shift(Polynomial::from_ints(&[1, 1]))?;
    let minus = shift(Polynomial::from_ints(&[-1, 1]))?;
    let inv = q_inv(&r, n);
    let lhs = q_mul(&q_mul(&plus, &minus, n), &q_mul(&inv, &inv, n), n);
    let rho = &RationalFunction::from_poly(Polynomial::new(vec![FieldElement::frac(1, 2), FieldElement::one()]))
        / &RationalFunction::from_poly(Polynomial::new(vec![FieldElement::frac(-1, 2), FieldElement::one()]));
    let lg = q_log(&r, n);
    // d/dq(q d/dq Σ L_k q^k) = Σ (k+1)² L_{k+1} q^k
    Ok((0..m)
        .map(|k| {
            let rhs = lg[k + 1].scale(&FieldElement::from_int(((k + 1) * (k + 1)) as i64));
            &(&rho * &lhs[k]) - &rhs
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_phi_coefficient() {
        assert_eq!(phi_coefficient(1), FieldElement::frac(-1, 24));
    }
}
