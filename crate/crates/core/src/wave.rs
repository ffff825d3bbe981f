//! Wave functions `ψ = exp(Σ ħ^{k−1} S_k)` assembled from the invariants.
//!
//! `S_0 = ∫ y dx`, `S_1 = −½ log x′(z)` and, for `k ≥ 2`,
//! `S_k = Σ_{2g−1+n=k} (−1)ⁿ/n! · F^g_n(z, …, z)` with principal-part
//! primitives. The sign `(−1)ⁿ` undoes the `−y dx` normalisation of `ω⁰₁`,
//! so that `S_0` keeps the orientation `dS_0/dx = y`.

use std::collections::BTreeMap;

use crate::algebra::{factorial, FieldElement, HbarLaurent, LogAugmentedFunction, RationalFunction};
use crate::curve::{validate_curve, SpectralCurve};
use crate::error::RecursionError;
use crate::recursion::{inverse_x_series, order_of, phi, point_of, x_expansion, BasisIndex, Engine, Multidifferential};

#[derive(Clone, Debug, PartialEq)]
pub enum PrimitiveChoice {
    /// Each slot integrated to its principal part, no constants.
    Principal,
    /// Each slot integrated from a fixed basepoint `q`.
    Basepoint(FieldElement),
}

/// A primitive `F^g_n` of a stable invariant, slot by slot.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveFunction {
    pub g: usize,
    pub n: usize,
    pub points: Vec<FieldElement>,
    pub terms: BTreeMap<Vec<BasisIndex>, FieldElement>,
    pub choice: PrimitiveChoice,
}

impl PrimitiveFunction {
    /// Primitive of `(z − α)^{−k−1}dz` for one basis index.
    pub fn slot(&self, b: BasisIndex) -> Result<RationalFunction, RecursionError> {
        let alpha = &self.points[point_of(b)];
        let k = order_of(b) as i64;
        let c = FieldElement::frac(-1, k);
        let f = RationalFunction::power_of_linear(alpha, -k).scale(&c);
        match &self.choice {
            PrimitiveChoice::Principal => Ok(f),
            PrimitiveChoice::Basepoint(q) => {
                let fq = f.eval(q).ok_or_else(|| {
                    RecursionError::Other(format!("basepoint {} is a branch point", q.to_exact_string()))
                })?;
                Ok(&f - &RationalFunction::constant(fq))
            }
        }
    }

    /// `F(z, …, z)`, summing every ordering of each key.
    pub fn diagonal(&self) -> Result<RationalFunction, RecursionError> {
        let mut slots: BTreeMap<BasisIndex, RationalFunction> = BTreeMap::new();
        let mut acc = RationalFunction::zero();
        for (key, c) in &self.terms {
            let mut prod = RationalFunction::constant(c * &Multidifferential::orderings(key));
            for &b in key {
                if let std::collections::btree_map::Entry::Vacant(e) = slots.entry(b) {
                    e.insert(self.slot(b)?);
                }
                prod = &prod * &slots[&b];
            }
            acc = &acc + &prod;
        }
        Ok(acc)
    }
}

fn primitive(w: &Multidifferential, choice: PrimitiveChoice) -> Result<PrimitiveFunction, RecursionError> {
    if w.terms.keys().any(|k| k.iter().any(|&b| order_of(b) == 0)) {
        return Err(RecursionError::ResidueTerm);
    }
    Ok(PrimitiveFunction { g: w.g, n: w.n, points: w.points.clone(), terms: w.terms.clone(), choice })
}

pub fn primitive_principal(w: &Multidifferential) -> Result<PrimitiveFunction, RecursionError> {
    primitive(w, PrimitiveChoice::Principal)
}

pub fn primitive_basepoint(w: &Multidifferential, q: &FieldElement) -> Result<PrimitiveFunction, RecursionError> {
    primitive(w, PrimitiveChoice::Basepoint(q.clone()))
}

/// `S_0, …, S_K` together with how they were normalised.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveExpansion {
    pub curve: SpectralCurve,
    pub s: Vec<LogAugmentedFunction>,
    pub choice: PrimitiveChoice,
    /// `S_0` is the antiderivative of `y x′` with no added constant.
    pub s0_normalisation: String,
}

impl WaveExpansion {
    /// A wave given directly by its `S_k`, e.g. for operator reconstruction.
    pub fn from_parts(curve: SpectralCurve, s: Vec<LogAugmentedFunction>) -> Self {
        WaveExpansion { curve, s, choice: PrimitiveChoice::Principal, s0_normalisation: "given".into() }
    }

    pub fn order(&self) -> usize {
        self.s.len().saturating_sub(1)
    }

    /// `dS_k/dx` for every `k`.
    pub fn derivatives(&self) -> Vec<LogAugmentedFunction> {
        self.s.iter().map(|f| f.d_dx(self.curve.x())).collect()
    }
}

/// `S_1 = −½ log x′(z)`.
pub fn s1_closed(curve: &SpectralCurve) -> Result<LogAugmentedFunction, RecursionError> {
    let xp = curve.dx();
    if xp.is_constant() {
        return Ok(LogAugmentedFunction::zero());
    }
    Ok(LogAugmentedFunction::log_term(RationalFunction::constant(FieldElement::frac(-1, 2)), xp)?)
}

pub fn s_coefficient(
    engine: &Engine,
    k: usize,
    choice: &PrimitiveChoice,
) -> Result<LogAugmentedFunction, RecursionError> {
    match k {
        0 => phi(engine.curve()),
        1 => s1_closed(engine.curve()),
        _ => {
            let mut acc = RationalFunction::zero();
            for g in 0..=k / 2 {
                let n = k + 1 - 2 * g;
                let w = engine.stable(g, n)?;
                let f = primitive(&w, choice.clone())?.diagonal()?;
                let sign = if n.is_multiple_of(2) { 1 } else { -1 };
                let c = FieldElement::from_rational(num_rational::BigRational::new(sign.into(), factorial(n as u64)));
                acc = &acc + &f.scale(&c);
            }
            Ok(LogAugmentedFunction::from_rational(acc))
        }
    }
}

pub fn wave_expansion(engine: &Engine, kmax: usize, choice: PrimitiveChoice) -> Result<WaveExpansion, RecursionError> {
    let s = (0..=kmax).map(|k| s_coefficient(engine, k, &choice)).collect::<Result<Vec<_>, _>>()?;
    Ok(WaveExpansion {
        curve: engine.curve().clone(),
        s,
        choice,
        s0_normalisation: "S_0 = antiderivative of y dx with zero constant".into(),
    })
}

/// `½ Σ M_{0,2}(μ) x^{−|μ|} − S_1(z(x))` coefficientwise through `x^{−depth}`,
/// i.e. the regularised double integral of `ω⁰₂ − dx₁dx₂/(x₁−x₂)²` on the
/// diagonal against the closed form. All entries vanish when they agree.
pub fn s1_cross_check(engine: &Engine, depth: u32) -> Result<Vec<FieldElement>, RecursionError> {
    let table = x_expansion(engine, 0, 2, depth)?;
    let diag = table.diagonal();
    let xp = inverse_x_series(engine, &engine.curve().dx(), depth as i64)?;
    let lead = xp.coeff(0)?;
    let s1 = xp.scale(&lead.inv()).log()?.scale(&FieldElement::frac(-1, 2));
    (0..=depth as i64).map(|m| Ok(&(&diag[m as usize] * &FieldElement::frac(1, 2)) - &s1.coeff(m)?)).collect()
}

/// `L_p(f) = Σ_α Res_{z=α} f dy`.
pub fn loop_functional(curve: &SpectralCurve, f: &LogAugmentedFunction) -> Result<FieldElement, RecursionError> {
    let branch = validate_curve(curve)?;
    let dy = curve.dy()?;
    let mut total = FieldElement::zero();
    for bp in &branch.points {
        let order = (-f.rational_part().order_at(&bp.alpha)).max(0) + 2;
        let fl = f.local_series(&bp.alpha, order)?;
        let yl = dy.series_expand(&crate::algebra::ExpansionPoint::At(bp.alpha.clone()), order + 2);
        // Log constants multiply the analytic dy and leave no residue.
        total += &fl.series.mul_trunc(&yl, 1).coeff(-1)?;
    }
    Ok(total)
}

/// `S_k(t) = Σ_m t^m/m! (d/dx)^m S_{k−m}` as polynomials in `t`, the
/// exponent of `e^{tħ d/dx} ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TWave {
    pub curve: SpectralCurve,
    /// `coeffs[k][m]` multiplies `t^m` in `S_k(t)`.
    pub coeffs: Vec<Vec<LogAugmentedFunction>>,
}

impl TWave {
    pub fn at(&self, t: &FieldElement) -> WaveExpansion {
        let s = self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(LogAugmentedFunction::zero(), |acc, (m, f)| acc.add(&f.scale(&t.pow(m as i64))))
            })
            .collect();
        WaveExpansion::from_parts(self.curve.clone(), s)
    }
}

pub fn t_shift(wave: &WaveExpansion, kmax: usize) -> Result<TWave, RecursionError> {
    if kmax > wave.order() {
        return Err(RecursionError::Other(format!("wave known through S_{} only", wave.order())));
    }
    let x = wave.curve.x();
    // iterates[j][m] = (d/dx)^m S_j
    let mut iterates: Vec<Vec<LogAugmentedFunction>> = Vec::new();
    for j in 0..=kmax {
        let mut row = vec![wave.s[j].clone()];
        for m in 1..=kmax - j {
            let next = row[m - 1].d_dx(x);
            row.push(next);
        }
        iterates.push(row);
    }
    let coeffs = (0..=kmax)
        .map(|k| {
            (0..=k)
                .map(|m| {
                    let c = FieldElement::from_rational(num_rational::BigRational::new(1.into(), factorial(m as u64)));
                    iterates[k - m][m].scale(&c)
                })
                .collect()
        })
        .collect();
    Ok(TWave { curve: wave.curve.clone(), coeffs })
}

/// `log ψ̄ = Σ ħ^{2g−2+n}/n! (−1)ⁿ Σ_μ M_{g,n}(μ) x^{−|μ|}` over
/// `2g−2+n ≤ max_chi`, with `log x` dropped from `S_0`, exponentiated as a
/// series in `1/x` through `x^{−depth}`. Entry `m` multiplies `x^{−m}`.
pub fn wave_x_expansion(engine: &Engine, depth: u32, max_chi: usize) -> Result<Vec<HbarLaurent>, RecursionError> {
    let d = depth as usize;
    let mut log_psi = vec![HbarLaurent::zero(); d + 1];
    for chi in -1..=max_chi as i64 {
        for g in 0..=((chi + 2) / 2) as usize {
            let n = chi + 2 - 2 * g as i64;
            if n < 1 {
                continue;
            }
            let n = n as usize;
            let table = x_expansion(engine, g, n, depth)?;
            let sign = if n.is_multiple_of(2) { 1 } else { -1 };
            let c = FieldElement::from_rational(num_rational::BigRational::new(sign.into(), factorial(n as u64)));
            for (m, v) in table.diagonal().iter().enumerate() {
                log_psi[m].add_term(chi, &(v * &c));
            }
        }
    }
    Ok(exp_series(&log_psi))
}

/// `exp` of a series in `1/x` with zero constant term.
pub fn exp_series(l: &[HbarLaurent]) -> Vec<HbarLaurent> {
    let d = l.len().saturating_sub(1);
    let mut e = vec![HbarLaurent::zero(); d + 1];
    e[0] = HbarLaurent::one();
    for m in 1..=d {
        let mut acc = HbarLaurent::zero();
        for j in 1..=m {
            acc = acc.add(&l[j].mul(&e[m - j]).scale(&FieldElement::from_int(j as i64)));
        }
        e[m] = acc.scale(&FieldElement::frac(1, m as i64));
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_linear_series() {
        let l = vec![HbarLaurent::zero(), HbarLaurent::one(), HbarLaurent::zero(), HbarLaurent::zero()];
        let e = exp_series(&l);
        assert_eq!(e[3].coeff(0), FieldElement::frac(1, 6));
    }
}
