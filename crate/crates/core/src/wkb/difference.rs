//! The Gromov–Witten curve of `P¹`: `x = z + q/z`, `y = log z`.
//!
//! The wave function is the recursion wave shifted by `e^{−tħ d/dx}`; its
//! `S_0 = x log z − z + q/z` and `S_1 = −½ log(1 − q/z²)` already contain
//! the unstable factor `exp((x ln x − x)/ħ)`, and the shift supplies `x^{−t}`
//! at leading order.

use super::solve::{verify_quantum_curve, ResidualLedger};
use super::{Flavour, OpTerms, OperatorPolynomial};
use crate::algebra::FieldElement;
use crate::error::WkbError;
use crate::recursion::Engine;
use crate::wave::{t_shift, wave_expansion, PrimitiveChoice, WaveExpansion};

/// `e^{ħd/dx} + q e^{−ħd/dx} − x + (t − ½)ħ`.
pub fn gw_operator(q: &FieldElement, t: &FieldElement) -> OperatorPolynomial {
    let mut p0 = OpTerms::new();
    p0.insert((0, 1), FieldElement::one());
    p0.insert((0, -1), q.clone());
    p0.insert((1, 0), FieldElement::from_int(-1));
    let mut p1 = OpTerms::new();
    let c = t - &FieldElement::frac(1, 2);
    if !c.is_zero() {
        p1.insert((0, 0), c);
    }
    OperatorPolynomial::new(Flavour::Difference, vec![p0, p1]).expect("the GW operator is well formed")
}

/// `S_0(t), …, S_K(t)` for the curve held by `engine`.
pub fn gw_wave(engine: &Engine, kmax: usize, t: &FieldElement) -> Result<WaveExpansion, WkbError> {
    let wave = wave_expansion(engine, kmax, PrimitiveChoice::Principal)?;
    Ok(t_shift(&wave, kmax)?.at(&-t))
}

/// Residuals of `op` on the shifted wave through `ħ^K`.
pub fn difference_wkb_check(
    op: &OperatorPolynomial,
    engine: &Engine,
    kmax: usize,
    t: &FieldElement,
) -> Result<ResidualLedger, WkbError> {
    if op.flavour != Flavour::Difference {
        return Err(WkbError::Flavour("expected a difference operator".into()));
    }
    verify_quantum_curve(op, &gw_wave(engine, kmax, t)?, kmax)
}
