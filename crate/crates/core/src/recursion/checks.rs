//! String and dilaton equations, free energies, pole bounds and the Airy limit.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{multiplicities, order_of, point_of, remove_one, BasisIndex, Engine, Multidifferential};
use crate::algebra::{FieldElement, LogAugmentedFunction, RationalFunction};
use crate::curve::SpectralCurve;
use crate::error::RecursionError;

/// One-slot differentials that string-equation right-hand sides need:
/// `(z − γ)^{−j−1} dz` at any point, and `zⁱ dz`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtIndex {
    Pole(FieldElement, u32),
    Mono(u32),
}

impl Ord for ExtIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtIndex::Pole(a, j), ExtIndex::Pole(b, k)) => a.canonical_cmp(b).then(j.cmp(k)),
            (ExtIndex::Pole(..), ExtIndex::Mono(_)) => Ordering::Less,
            (ExtIndex::Mono(_), ExtIndex::Pole(..)) => Ordering::Greater,
            (ExtIndex::Mono(i), ExtIndex::Mono(j)) => i.cmp(j),
        }
    }
}

impl PartialOrd for ExtIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtIndex::Pole(a, j) => write!(f, "(z-({}))^-{}", a.to_exact_string(), j + 1),
            ExtIndex::Mono(i) => write!(f, "z^{i}"),
        }
    }
}

/// A symmetric tensor over [`ExtIndex`], keyed by sorted multisets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExtTensor {
    pub terms: BTreeMap<Vec<ExtIndex>, FieldElement>,
}

impl ExtTensor {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&mut self, key: Vec<ExtIndex>, c: &FieldElement) {
        let e = self.terms.entry(key).or_insert_with(FieldElement::zero);
        *e += c;
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, v| !v.is_zero());
        self
    }

    fn from_stable(w: &Multidifferential, scale: &FieldElement) -> Self {
        let mut out = ExtTensor::default();
        for (k, c) in &w.terms {
            let key: Vec<ExtIndex> = k.iter().map(|&b| to_ext(w, b)).collect();
            out.add(key, &(c * scale));
        }
        out
    }

    fn sub(mut self, other: &ExtTensor) -> Self {
        for (k, c) in &other.terms {
            self.add(k.clone(), &-c);
        }
        self.prune()
    }
}

impl fmt::Display for ExtTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (k, c) in &self.terms {
            let labels: Vec<String> = k.iter().map(|e| e.to_string()).collect();
            writeln!(f, "  {} : {}", labels.join(" ⊗ "), c.to_exact_string())?;
        }
        Ok(())
    }
}

fn to_ext(w: &Multidifferential, b: BasisIndex) -> ExtIndex {
    ExtIndex::Pole(w.points[point_of(b)].clone(), order_of(b))
}

fn sorted(mut v: Vec<ExtIndex>) -> Vec<ExtIndex> {
    v.sort();
    v
}

/// `Σ_α Res_{z=α} f(z)·ω_{n+1}(z, ·)`: contract the first slot against `f`.
fn contract_first(w: &Multidifferential, f: &LogAugmentedFunction) -> Result<ExtTensor, RecursionError> {
    let top = w.max_pole_order() as i64;
    let mut local: HashMap<usize, crate::algebra::LocalExpansion> = HashMap::new();
    for (i, a) in w.points.iter().enumerate() {
        local.insert(i, f.local_series(a, top)?);
    }
    let mut out = ExtTensor::default();
    for (key, c) in &w.terms {
        for (b, _) in multiplicities(key) {
            // Res (z−α)^{−k−1} f dz = [s^k] f, k ≥ 1, so log constants never enter.
            let fk = local[&point_of(b)].coeff(order_of(b) as i64)?;
            if fk.is_zero() {
                continue;
            }
            let rest: Vec<ExtIndex> = remove_one(key, b).iter().map(|&r| to_ext(w, r)).collect();
            out.add(rest, &(c * &fk));
        }
    }
    Ok(out.prune())
}

fn require_stable(g: usize, n: usize) -> Result<(), RecursionError> {
    if n == 0 || 2 * g + n <= 2 {
        return Err(RecursionError::Unstable { g, n });
    }
    Ok(())
}

/// `d/dz [x^m (z−β)^{−k−1} / x′(z)] dz` in the extended basis.
fn string_image(
    curve: &SpectralCurve,
    beta: &FieldElement,
    k: u32,
    m: u32,
) -> Result<Vec<(ExtIndex, FieldElement)>, RecursionError> {
    let x = curve.x();
    let xm = x.pow(m as i64)?;
    let f = &(&xm * &RationalFunction::power_of_linear(beta, -(k as i64) - 1)) / &curve.dx();
    let pf = f.partial_fractions()?;
    let mut out = Vec::new();
    for (i, c) in pf.polynomial.coeffs().iter().enumerate().skip(1) {
        if !c.is_zero() {
            out.push((ExtIndex::Mono(i as u32 - 1), c * &FieldElement::from_int(i as i64)));
        }
    }
    for (gamma, terms) in &pf.poles {
        for (j, c) in terms {
            out.push((ExtIndex::Pole(gamma.clone(), *j as u32), c * &FieldElement::from_int(-(*j as i64))));
        }
    }
    Ok(out)
}

/// Residual of the string equation for `m ∈ {0, 1}`: zero iff it holds.
pub fn check_string(engine: &Engine, g: usize, n: usize, m: u32) -> Result<ExtTensor, RecursionError> {
    if m > 1 {
        return Err(RecursionError::BadStringIndex(m));
    }
    require_stable(g, n)?;
    let curve = engine.curve();
    let xm = LogAugmentedFunction::from_rational(curve.x().pow(m as i64)?);
    let f = curve.y().mul(&xm)?;
    let lhs = contract_first(&*engine.stable(g, n + 1)?, &f)?;

    let w = engine.stable(g, n)?;
    let mut images: HashMap<BasisIndex, Vec<(ExtIndex, FieldElement)>> = HashMap::new();
    let mut rhs = ExtTensor::default();
    for (key, c) in &w.terms {
        let ext: Vec<ExtIndex> = key.iter().map(|&b| to_ext(&w, b)).collect();
        for (b, _) in multiplicities(key) {
            if let std::collections::hash_map::Entry::Vacant(e) = images.entry(b) {
                e.insert(string_image(curve, &w.points[point_of(b)], order_of(b), m)?);
            }
            let pos = key.iter().position(|&v| v == b).unwrap();
            for (e, d) in &images[&b] {
                let mut mk = ext.clone();
                mk.remove(pos);
                mk.push(e.clone());
                let mk = sorted(mk);
                let mult = mk.iter().filter(|v| *v == e).count() as i64;
                // The right side carries an overall minus sign.
                let v = &(c * d) * &FieldElement::from_int(-mult);
                rhs.add(mk, &v);
            }
        }
    }
    Ok(lhs.sub(&rhs.prune()))
}

/// A fixed antiderivative `Φ` of `y dx`.
pub fn phi(curve: &SpectralCurve) -> Result<LogAugmentedFunction, RecursionError> {
    Ok(curve.y().mul_rational(&curve.dx()).antiderivative()?)
}

/// Residual of the dilaton equation: zero iff it holds.
pub fn check_dilaton(engine: &Engine, g: usize, n: usize) -> Result<ExtTensor, RecursionError> {
    require_stable(g, n)?;
    let f = phi(engine.curve())?;
    let lhs = contract_first(&*engine.stable(g, n + 1)?, &f)?;
    let factor = FieldElement::from_int(2 * g as i64 - 2 + n as i64);
    let rhs = ExtTensor::from_stable(&*engine.stable(g, n)?, &factor);
    Ok(lhs.sub(&rhs))
}

/// `F_g = Σ_α Res Φ ω^g_1` for `g ≥ 1`; the value at `g = 1` is not normative.
pub fn free_energy(engine: &Engine, g: usize) -> Result<FieldElement, RecursionError> {
    free_energy_with(engine, g, &phi(engine.curve())?)
}

/// Same with a caller-supplied antiderivative.
pub fn free_energy_with(engine: &Engine, g: usize, phi: &LogAugmentedFunction) -> Result<FieldElement, RecursionError> {
    if g == 0 {
        return Err(RecursionError::Unstable { g, n: 0 });
    }
    let t = contract_first(&*engine.stable(g, 1)?, phi)?;
    Ok(t.terms.get(&Vec::new()).cloned().unwrap_or_else(FieldElement::zero))
}

#[derive(Clone, Debug)]
pub struct PoleReport {
    pub g: usize,
    pub n: usize,
    pub max_slot_order: u32,
    pub max_total_order: u32,
    /// `6g − 6 + 4n`.
    pub bound: u32,
    pub slot_within_bound: bool,
    pub total_within_bound: bool,
}

pub fn pole_report(w: &Multidifferential) -> PoleReport {
    let bound = (6 * w.g + 4 * w.n - 6) as u32;
    let ms = w.max_pole_order();
    let mt = w.max_total_pole_order();
    PoleReport {
        g: w.g,
        n: w.n,
        max_slot_order: ms,
        max_total_order: mt,
        bound,
        slot_within_bound: ms <= bound,
        total_within_bound: mt <= bound,
    }
}

#[derive(Clone, Debug)]
pub struct AiryComparison {
    pub point: FieldElement,
    /// `k` of the top basis element `(z − α)^{−k−1}dz`.
    pub k: u32,
    pub coefficient: FieldElement,
    pub airy_coefficient: FieldElement,
    pub predicted: FieldElement,
    pub matches: bool,
}

/// Compare the top pole coefficient of `ω^g_1` at every branch point with the
/// Airy curve `x = z², y = z`, rescaled to the local `x″` and `y′`.
///
/// In the coordinate `ζ` with `x − x(α) = ζ²`, the claim is
/// `ω^g_1 ≈ (dy/dζ)^{1−2g} ω^g_1{}^{Airy}(ζ)`. Rewriting `ζ^{−k−1}dζ` in
/// `s = z − α` turns every square root into an integer power, giving
/// `c = (2/(x″y′))^{2g−1}·c_Airy` with `k = 6g − 3`.
pub fn airy_leading_check(engine: &Engine, g: usize) -> Result<Vec<AiryComparison>, RecursionError> {
    if g == 0 {
        return Err(RecursionError::Unstable { g, n: 1 });
    }
    let airy = Engine::new(SpectralCurve::airy())?;
    let k = (6 * g - 3) as u32;
    let ca = airy.stable(g, 1)?.coefficient(&[super::pack(0, k)]);
    let w = engine.stable(g, 1)?;
    let mut out = Vec::new();
    for (i, bp) in engine.analysed().branch.points.iter().enumerate() {
        let c = w.coefficient(&[super::pack(i, k)]);
        let scale = (&FieldElement::from_int(2) / &(&bp.x2 * &bp.y1)).pow(2 * g as i64 - 1);
        let predicted = &scale * &ca;
        out.push(AiryComparison {
            point: bp.alpha.clone(),
            k,
            matches: predicted == c,
            coefficient: c,
            airy_coefficient: ca.clone(),
            predicted,
        });
    }
    Ok(out)
}
