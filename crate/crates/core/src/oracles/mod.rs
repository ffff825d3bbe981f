//! Ground truth computed without the recursion: closed forms, permutation
//! brute force and the degree-zero Gromov–Witten series.

mod gw;
mod perm;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{binomial, factorial, FieldElement, HbarLaurent, Polynomial};
use crate::error::OracleError;

pub use gw::{
    gw_psi0, gw_psi_ratio, gw_psi_ratio_from_equation, phi_coefficient, toda_residuals, GwPsi0, MAX_PSI0_ORDER,
    MAX_RATIO_DEGREE,
};
pub use perm::{
    belyi_count, belyi_table, dessin_count, dessin_table, BelyiTable, DessinCount, DessinTable, MAX_BELYI_SIZE,
    MAX_DESSIN_EDGES,
};

/// `(1/(n+1))·binom(2n, n)`.
pub fn catalan(n: u64) -> FieldElement {
    &binomial(2 * n, n) / &FieldElement::from_int(n as i64 + 1)
}

/// Unsigned Stirling numbers of the first kind, read off `x(x+1)⋯(x+n−1)`.
pub fn stirling_first(n: u64, k: u64) -> Result<BigInt, OracleError> {
    if k > n {
        return Err(OracleError::Range(format!("stirling_first({n}, {k}) needs k ≤ n")));
    }
    let mut row = vec![BigInt::from(1)];
    for m in 0..n {
        let mut next = vec![BigInt::from(0); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * BigInt::from(m);
        }
        row = next;
    }
    Ok(row[k as usize].clone())
}

/// `(2k − 1)!!`, with `(−1)!! = 1`.
pub fn double_factorial_odd(k: u64) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(2 * i - 1))
}

/// `B_0, …, B_n` from `Σ_{k ≤ m} binom(m+1, k) B_k = 0`, so `B_1 = −1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<FieldElement> {
    let mut b = vec![FieldElement::one()];
    for m in 1..=n {
        let mut acc = FieldElement::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += &(&binomial(m as u64 + 1, k as u64) * bk);
        }
        b.push(-&(&acc / &FieldElement::from_int(m as i64 + 1)));
    }
    b
}

pub fn bernoulli(n: usize) -> FieldElement {
    bernoulli_numbers(n).pop().unwrap()
}

/// `ζ(1 − 2g) = −B_{2g}/(2g)` for `g ≥ 1`.
pub fn zeta_negative_odd(g: usize) -> FieldElement {
    -&(&bernoulli(2 * g) / &FieldElement::from_int(2 * g as i64))
}

/// `H_N(x) = Σ_k (−1)^k binom(N, 2k) (2k−1)!! 2^{N−k} x^{N−2k}`.
pub fn hermite(n: u32) -> Polynomial {
    let mut c = vec![FieldElement::zero(); n as usize + 1];
    for k in 0..=(n / 2) as u64 {
        let mag = binomial(n as u64, 2 * k).to_rational().unwrap().numer().clone()
            * double_factorial_odd(k)
            * BigInt::from(2).pow(n - k as u32);
        let v = if k % 2 == 0 { mag } else { -mag };
        c[n as usize - 2 * k as usize] = FieldElement::from_bigint(v);
    }
    Polynomial::new(c)
}

/// Coefficient of `x^{−2e}` in `ψ̄`: `(−1)^e ħ^e/(2^e e!)·∏_{j<2e}(ħ⁻¹ − j)`.
pub fn wave_x_coefficient_closed(e: u32) -> HbarLaurent {
    // ∏ (ħ⁻¹ − j) as a polynomial in ħ⁻¹
    let mut p = vec![FieldElement::one()];
    for j in 0..2 * e as i64 {
        let mut next = vec![FieldElement::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &(c * &FieldElement::from_int(j));
        }
        p = next;
    }
    let den = BigInt::from(2).pow(e) * factorial(e as u64);
    let sign = if e.is_multiple_of(2) { 1 } else { -1 };
    let pre = FieldElement::from_rational(BigRational::new(BigInt::from(sign), den));
    let mut out = HbarLaurent::zero();
    for (i, c) in p.iter().enumerate() {
        out.add_term(e as i64 - i as i64, &(c * &pre));
    }
    out
}

/// Entries `e = 0..=e_max`, entry `e` multiplying `x^{−2e}`.
pub fn wave_x_expansion_closed(e_max: u32) -> Vec<HbarLaurent> {
    (0..=e_max).map(wave_x_coefficient_closed).collect()
}

/// Outcome of comparing `ψ(x, 1/N)` with the scaled Hermite polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteCheck {
    pub n: u32,
    /// `(2N)^{−N/2} H_N(x√(N/2))`.
    pub scaled: Polynomial,
    /// `x^N Σ_{2e ≤ N} ψ̄_e(1/N) x^{−2e}`.
    pub truncation: Polynomial,
    /// `[(N⁻¹d/dx)² − xN⁻¹d/dx + 1]` applied to `scaled`.
    pub equation_residual: Polynomial,
    /// `ψ̄_e(1/N)` for `N/2 < e ≤ depth`; all zero when the series terminates.
    pub tail: Vec<FieldElement>,
}

impl HermiteCheck {
    pub fn passed(&self) -> bool {
        self.scaled == self.truncation && self.equation_residual.is_zero() && self.tail.iter().all(|c| c.is_zero())
    }
}

pub fn hermite_wave_check(n: u32, depth: u32) -> Result<HermiteCheck, OracleError> {
    if n == 0 {
        return Err(OracleError::Range("the Hermite check needs N ≥ 1".into()));
    }
    let h = hermite(n);
    let nn = BigRational::from_integer(BigInt::from(n));
    let c = FieldElement::sqrt_rational(&(&nn / BigRational::from_integer(BigInt::from(2))));
    let s = FieldElement::sqrt_rational(&(&nn * BigRational::from_integer(BigInt::from(2)))).pow(-(n as i64));
    let scaled_coeffs: Vec<FieldElement> =
        h.coeffs().iter().enumerate().map(|(j, hj)| &(hj * &c.pow(j as i64)) * &s).collect();
    if scaled_coeffs.iter().any(|v| !v.is_rational()) {
        return Err(OracleError::Range("scaled Hermite polynomial left ℚ".into()));
    }
    let scaled = Polynomial::new(scaled_coeffs);

    let hbar = FieldElement::frac(1, n as i64);
    let mut t = vec![FieldElement::zero(); n as usize + 1];
    let mut tail = Vec::new();
    for e in 0..=depth.max(n / 2) {
        let v = wave_x_coefficient_closed(e).eval(&hbar);
        if 2 * e <= n {
            t[(n - 2 * e) as usize] = v;
        } else {
            tail.push(v);
        }
    }
    let truncation = Polynomial::new(t);

    let d1 = scaled.derivative();
    let d2 = d1.derivative();
    let equation_residual = &(&d2.scale(&hbar.pow(2)) - &(&Polynomial::z() * &d1.scale(&hbar))) + &scaled;
    Ok(HermiteCheck { n, scaled, truncation, equation_residual, tail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_rows() {
        assert_eq!(stirling_first(4, 2).unwrap(), BigInt::from(11));
        assert!(stirling_first(2, 3).is_err());
    }

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli(1), FieldElement::frac(-1, 2));
        assert_eq!(bernoulli(2), FieldElement::frac(1, 6));
        assert_eq!(bernoulli(3), FieldElement::zero());
        assert_eq!(zeta_negative_odd(1), FieldElement::frac(-1, 12));
    }
}
