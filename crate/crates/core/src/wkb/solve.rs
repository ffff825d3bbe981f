//! `e^{−S/ħ} P̂ e^{S/ħ}` order by order in `ħ`, with `S = Σ ħ^k S_k`.

use std::fmt;

use super::{Flavour, OpTerms, OperatorPolynomial};
use crate::algebra::{FieldElement, LogAugmentedFunction, RationalFunction};
use crate::curve::SpectralCurve;
use crate::error::WkbError;
use crate::wave::WaveExpansion;

/// `y` itself for differential operators, `e^{y}` for difference operators.
pub(crate) fn y_power_base(flavour: Flavour, curve: &SpectralCurve) -> Result<RationalFunction, WkbError> {
    base_of(flavour, curve.y())
}

fn base_of(flavour: Flavour, u0: &LogAugmentedFunction) -> Result<RationalFunction, WkbError> {
    match flavour {
        Flavour::Differential => u0
            .as_rational()
            .cloned()
            .ok_or_else(|| WkbError::Flavour("dS_0/dx has log terms; use a difference operator".into())),
        Flavour::Difference => u0
            .exp_rational()
            .map_err(|_| WkbError::Flavour("exp(dS_0/dx) is not rational; use a differential operator".into())),
    }
}

/// Coefficients of `ħ^0, …, ħ^K` of `e^{−S/ħ} P̂ e^{S/ħ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualLedger {
    pub orders: Vec<RationalFunction>,
}

impl ResidualLedger {
    pub fn all_zero(&self) -> bool {
        self.orders.iter().all(|r| r.is_zero())
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.orders.iter().position(|r| !r.is_zero())
    }
}

impl fmt::Display for ResidualLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.orders.iter().enumerate() {
            writeln!(f, "hbar^{k}: {}", r.to_expr("z"))?;
        }
        Ok(())
    }
}

/// `dS_k/dx` for `k = 0..=K` with its residual ledger.
#[derive(Clone, Debug, PartialEq)]
pub struct WkbSystem {
    pub curve: SpectralCurve,
    pub flavour: Flavour,
    /// `dS_0/dx` (may carry logs for difference operators), then rational `dS_k/dx`.
    pub ds: Vec<LogAugmentedFunction>,
    pub ledger: ResidualLedger,
}

struct Exponent<'a> {
    x: &'a RationalFunction,
    xp: RationalFunction,
    u0: &'a LogAugmentedFunction,
    /// `u[k]` is `dS_k/dx` for `k ≥ 1`; `u[0]` is unused.
    u: &'a [RationalFunction],
}

impl Exponent<'_> {
    fn ddx(&self, f: &RationalFunction) -> RationalFunction {
        &f.derivative() / &self.xp
    }

    fn uk(&self, k: usize) -> RationalFunction {
        self.u.get(k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// `(d/dx)^m U_k` for `(k, m) ≠ (0, 0)`.
    fn derivatives(&self, kmax: usize) -> Result<Vec<Vec<RationalFunction>>, WkbError> {
        let mut out = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let mut row = Vec::with_capacity(kmax + 2 - k);
            if k == 0 {
                row.push(RationalFunction::zero());
                let d1 = self.u0.d_dx(self.x);
                let d1 = d1
                    .as_rational()
                    .cloned()
                    .ok_or_else(|| WkbError::Unsupported("d²S_0/dx² is not rational".into()))?;
                row.push(d1);
            } else {
                row.push(self.uk(k));
            }
            while row.len() < kmax + 2 - k {
                let next = self.ddx(row.last().unwrap());
                row.push(next);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// `Y_b[j]`: coefficient of `ħ^j` in `e^{−S/ħ} ŷ^b e^{S/ħ}` for `b ∈ [−bmax, bmax]`.
    fn y_series(
        &self,
        flavour: Flavour,
        bmin: i32,
        bmax: i32,
        kmax: usize,
    ) -> Result<Vec<Vec<RationalFunction>>, WkbError> {
        let base = base_of(flavour, self.u0)?;
        let mut out = Vec::new();
        match flavour {
            Flavour::Differential => {
                let mut y = vec![RationalFunction::zero(); kmax + 1];
                y[0] = RationalFunction::one();
                let mut u = vec![base];
                u.extend((1..=kmax).map(|k| self.uk(k)));
                for _ in 0..=bmax {
                    out.push(y.clone());
                    let mut next = vec![RationalFunction::zero(); kmax + 1];
                    for k in 0..=kmax {
                        let mut acc = RationalFunction::zero();
                        for i in 0..=k {
                            if !u[i].is_zero() && !y[k - i].is_zero() {
                                acc = &acc + &(&u[i] * &y[k - i]);
                            }
                        }
                        if k >= 1 && !y[k - 1].is_zero() {
                            acc = &acc + &self.ddx(&y[k - 1]);
                        }
                        next[k] = acc;
                    }
                    y = next;
                }
            }
            Flavour::Difference => {
                let d = self.derivatives(kmax)?;
                for b in bmin..=bmax {
                    let bf = FieldElement::from_int(b as i64);
                    // E[j] = Σ_{m ≥ 1} b^m/m! (d/dx)^{m−1} U_{j+1−m}, j ≥ 1
                    let mut e = vec![RationalFunction::zero(); kmax + 1];
                    for (j, ej) in e.iter_mut().enumerate().skip(1) {
                        let mut fact = FieldElement::one();
                        for m in 1..=j + 1 {
                            fact = &fact * &FieldElement::from_int(m as i64);
                            let k = j + 1 - m;
                            let term = &d[k][m - 1];
                            if !term.is_zero() {
                                *ej = &*ej + &term.scale(&(&bf.pow(m as i64) / &fact));
                            }
                        }
                    }
                    let mut ex = vec![RationalFunction::zero(); kmax + 1];
                    ex[0] = RationalFunction::one();
                    for n in 1..=kmax {
                        let mut acc = RationalFunction::zero();
                        for i in 1..=n {
                            if !e[i].is_zero() && !ex[n - i].is_zero() {
                                acc = &acc + &(&e[i] * &ex[n - i]).scale(&FieldElement::from_int(i as i64));
                            }
                        }
                        ex[n] = acc.scale(&FieldElement::frac(1, n as i64));
                    }
                    let bb = base.pow(b as i64)?;
                    out.push(ex.iter().map(|f| &bb * f).collect());
                }
            }
        }
        Ok(out)
    }
}

fn b_range(op: &OperatorPolynomial) -> (i32, i32) {
    let bs = op.parts.iter().flat_map(|p| p.keys().map(|k| k.1));
    let (mut lo, mut hi) = (0, 0);
    for b in bs {
        lo = lo.min(b);
        hi = hi.max(b);
    }
    (lo, hi)
}

fn residual_series(op: &OperatorPolynomial, ex: &Exponent<'_>, kmax: usize) -> Result<Vec<RationalFunction>, WkbError> {
    let (lo, hi) = b_range(op);
    let ys = ex.y_series(op.flavour, lo, hi, kmax)?;
    let mut xpow: Vec<RationalFunction> = vec![RationalFunction::one()];
    let mut out = vec![RationalFunction::zero(); kmax + 1];
    for (j, part) in op.parts.iter().enumerate() {
        for ((a, b), c) in part {
            while xpow.len() <= *a as usize {
                let next = &xpow[xpow.len() - 1] * ex.x;
                xpow.push(next);
            }
            let yb = &ys[(*b - lo) as usize];
            let xa = xpow[*a as usize].scale(c);
            for k in j..=kmax {
                if !yb[k - j].is_zero() {
                    out[k] = &out[k] + &(&xa * &yb[k - j]);
                }
            }
        }
    }
    Ok(out)
}

/// `∂P_0/∂y` on the curve, the coefficient of the new unknown at each order.
fn p_y(
    part: &OpTerms,
    flavour: Flavour,
    x: &RationalFunction,
    base: &RationalFunction,
) -> Result<RationalFunction, WkbError> {
    let mut acc = RationalFunction::zero();
    for ((a, b), c) in part {
        if *b == 0 {
            continue;
        }
        let yb = match flavour {
            Flavour::Differential => base.pow(*b as i64 - 1)?,
            Flavour::Difference => base.pow(*b as i64)?,
        };
        let t = &x.pow(*a as i64)? * &yb;
        acc = &acc + &t.scale(&(c * &FieldElement::from_int(*b as i64)));
    }
    Ok(acc)
}

/// Residuals `R_0..R_K` for the given `dS_k/dx`.
pub fn residuals(
    op: &OperatorPolynomial,
    curve: &SpectralCurve,
    u0: &LogAugmentedFunction,
    u: &[RationalFunction],
    kmax: usize,
) -> Result<ResidualLedger, WkbError> {
    let x = curve.x();
    let ex = Exponent { x, xp: curve.dx(), u0, u };
    Ok(ResidualLedger { orders: residual_series(op, &ex, kmax)? })
}

/// Solve the triangular system for `dS_1/dx, …, dS_K/dx`.
pub fn wkb_solve(op: &OperatorPolynomial, curve: &SpectralCurve, kmax: usize) -> Result<WkbSystem, WkbError> {
    let u0 = curve.y().clone();
    let base = base_of(op.flavour, &u0)?;
    let mut u = vec![RationalFunction::zero()];
    let r0 = residuals(op, curve, &u0, &u, 0)?;
    if !r0.orders[0].is_zero() {
        return Err(WkbError::SemiclassicalMismatch(r0.orders[0].to_expr("z")));
    }
    let py = p_y(&op.parts[0], op.flavour, curve.x(), &base)?;
    if py.is_zero() {
        return Err(WkbError::DegenerateDerivative);
    }
    for k in 1..=kmax {
        u.push(RationalFunction::zero());
        let r = residuals(op, curve, &u0, &u, k)?;
        u[k] = -&(&r.orders[k] / &py);
    }
    let ledger = residuals(op, curve, &u0, &u, kmax)?;
    let mut ds = vec![u0];
    ds.extend(u.into_iter().skip(1).map(LogAugmentedFunction::from_rational));
    Ok(WkbSystem { curve: curve.clone(), flavour: op.flavour, ds, ledger })
}

/// Residuals of `P̂` on `exp(Σ ħ^{k−1} S_k)` through `ħ^K`.
pub fn verify_quantum_curve(
    op: &OperatorPolynomial,
    wave: &WaveExpansion,
    kmax: usize,
) -> Result<ResidualLedger, WkbError> {
    if wave.order() < kmax {
        return Err(WkbError::Unsupported(format!("wave known through S_{} only", wave.order())));
    }
    let ds = wave.derivatives();
    base_of(op.flavour, &ds[0])?;
    let mut u = vec![RationalFunction::zero()];
    for (k, d) in ds.iter().enumerate().take(kmax + 1).skip(1) {
        let r = d.as_rational().cloned().ok_or_else(|| WkbError::Unsupported(format!("dS_{k}/dx is not rational")))?;
        u.push(r);
    }
    residuals(op, &wave.curve, &ds[0], &u, kmax)
}
