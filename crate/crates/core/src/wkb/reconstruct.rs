//! Recover `P_0, P_1, …` from a wave function by exact linear algebra.

use super::solve::residuals;
use super::{add_term, Flavour, OpTerms, OperatorPolynomial, PlanePolynomial};
use crate::algebra::linsolve::solve;
use crate::algebra::{FieldElement, Polynomial, RationalFunction};
use crate::error::WkbError;
use crate::wave::WaveExpansion;

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub operator: OperatorPolynomial,
    /// Dimension of the solution space at each order; the basic solution
    /// (free coefficients zero) is the one returned.
    pub kernel_dims: Vec<usize>,
}

fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let g = Polynomial::gcd(a, b);
    (a * b).div_rem(&g).0.monic()
}

/// Rows of the system `Σ c_m f_m(z) = rhs(z)` after clearing denominators.
pub(crate) fn linear_system(
    funcs: &[RationalFunction],
    rhs: &RationalFunction,
) -> (Vec<Vec<FieldElement>>, Vec<FieldElement>) {
    let mut den = rhs.den().clone();
    for f in funcs {
        den = lcm(&den, f.den());
    }
    let scaled = |f: &RationalFunction| -> Polynomial { f.num() * &den.div_rem(f.den()).0 };
    let cols: Vec<Polynomial> = funcs.iter().map(scaled).collect();
    let b = scaled(rhs);
    let deg = cols.iter().chain(std::iter::once(&b)).filter_map(|p| p.degree()).max().unwrap_or(0);
    let a = (0..=deg).map(|i| cols.iter().map(|p| p.coeff(i)).collect()).collect();
    let bv = (0..=deg).map(|i| b.coeff(i)).collect();
    (a, bv)
}

/// Find `P̂ = Σ_{k ≤ K} ħ^k P_k` with `deg_x ≤ dx`, `|deg_y| ≤ dy` annihilating
/// the wave through `ħ^K`. `P_0` is taken from `p0` when given, otherwise from
/// the kernel at `ħ^0`, normalised to 1 on its highest `(y, x)` monomial.
pub fn reconstruct_operator(
    wave: &WaveExpansion,
    flavour: Flavour,
    bounds: (u32, u32),
    kmax: usize,
    p0: Option<&PlanePolynomial>,
) -> Result<Reconstruction, WkbError> {
    let curve = &wave.curve;
    let ds = wave.derivatives();
    if wave.order() < kmax {
        return Err(WkbError::Unsupported(format!("wave known through S_{} only", wave.order())));
    }
    let mut u = vec![RationalFunction::zero()];
    for (k, d) in ds.iter().enumerate().take(kmax + 1).skip(1) {
        u.push(d.as_rational().cloned().ok_or_else(|| WkbError::Unsupported(format!("dS_{k}/dx is not rational")))?);
    }
    let base = match flavour {
        Flavour::Differential => ds[0].as_rational().cloned(),
        Flavour::Difference => ds[0].exp_rational().ok(),
    }
    .ok_or_else(|| WkbError::Flavour("wave does not match the operator flavour".into()))?;

    let (dx, dy) = bounds;
    let blo = if flavour == Flavour::Difference { -(dy as i32) } else { 0 };
    let mut monos: Vec<(u32, i32)> = Vec::new();
    for b in blo..=dy as i32 {
        for a in 0..=dx {
            monos.push((a, b));
        }
    }
    let x = curve.x();
    let funcs: Vec<RationalFunction> =
        monos.iter().map(|&(a, b)| Ok(&x.pow(a as i64)? * &base.pow(b as i64)?)).collect::<Result<_, WkbError>>()?;

    let mut parts: Vec<OpTerms> = Vec::new();
    let mut dims = Vec::new();
    // ħ⁰
    let (a0, b0) = linear_system(&funcs, &RationalFunction::zero());
    let sol0 = solve(&a0, &b0, monos.len()).expect("homogeneous systems are consistent");
    dims.push(sol0.kernel.len());
    match p0 {
        Some(p) => {
            if p.flavour != flavour {
                return Err(WkbError::Flavour("P_0 flavour differs from the requested one".into()));
            }
            let on = p.on_curve(curve)?;
            if !on.is_zero() {
                return Err(WkbError::SemiclassicalMismatch(on.to_expr("z")));
            }
            parts.push(p.terms.clone());
        }
        None => {
            let best = sol0
                .kernel
                .iter()
                .min_by_key(|v| v.iter().filter(|c| !c.is_zero()).count())
                .ok_or(WkbError::Inconsistent { order: 0 })?;
            let top =
                (0..monos.len()).filter(|&i| !best[i].is_zero()).max_by_key(|&i| (monos[i].1, monos[i].0)).unwrap();
            let norm = best[top].inv();
            let mut p = OpTerms::new();
            for (i, c) in best.iter().enumerate() {
                add_term(&mut p, monos[i], &(c * &norm));
            }
            parts.push(p);
        }
    }
    for k in 1..=kmax {
        parts.push(OpTerms::new());
        let op = OperatorPolynomial { flavour, parts: parts.clone() };
        let r = residuals(&op, curve, &ds[0], &u, k)?;
        let rhs = -&r.orders[k];
        let (a, b) = linear_system(&funcs, &rhs);
        let sol = solve(&a, &b, monos.len()).ok_or(WkbError::Inconsistent { order: k })?;
        dims.push(sol.kernel.len());
        let mut p = OpTerms::new();
        for (i, c) in sol.particular.iter().enumerate() {
            add_term(&mut p, monos[i], c);
        }
        parts[k] = p;
    }
    Ok(Reconstruction { operator: OperatorPolynomial::new(flavour, parts)?, kernel_dims: dims })
}
