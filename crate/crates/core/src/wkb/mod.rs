//! Normal-ordered quantum curves and the WKB expansion of their solutions.
//!
//! Operator file format, one statement per line, `#` starts a comment:
//!
//! ```text
//! const q = 1
//! hbar^0 : Yp + q*Ym - x
//! hbar^1 : t - 1/2
//! ```
//!
//! Differential operators are polynomials in `x, y` with `y = ħ d/dx`;
//! difference operators use `Yp = e^{ħ d/dx}` and `Ym = e^{−ħ d/dx}`.
//! In every monomial the `x` factors act after the `y` factors.

mod difference;
mod reconstruct;
mod solve;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::parse::{eval_multipoly, parse_ast, parse_constant, print_multipoly, MultiPoly};
use crate::algebra::{binomial, FieldElement, Polynomial, RationalFunction};
use crate::curve::SpectralCurve;
use crate::error::WkbError;

pub use difference::{difference_wkb_check, gw_operator, gw_wave};
pub(crate) use reconstruct::linear_system;
pub use reconstruct::{reconstruct_operator, Reconstruction};
pub use solve::{residuals, verify_quantum_curve, wkb_solve, ResidualLedger, WkbSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavour {
    Differential,
    Difference,
}

/// `(a, b) ↦ c` for `c·x̂^a ŷ^b`, or `c·x̂^a e^{bħd/dx}` for differences.
pub type OpTerms = BTreeMap<(u32, i32), FieldElement>;

/// `P̂ = Σ_k ħ^k P_k(x̂, ŷ)`, each `P_k` normal ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPolynomial {
    pub flavour: Flavour,
    pub parts: Vec<OpTerms>,
}

/// Symbol of an operator: `P_0` read as an ordinary function of `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanePolynomial {
    pub flavour: Flavour,
    pub terms: OpTerms,
}

impl OperatorPolynomial {
    pub fn new(flavour: Flavour, mut parts: Vec<OpTerms>) -> Result<Self, WkbError> {
        for p in parts.iter_mut() {
            p.retain(|_, c| !c.is_zero());
        }
        while parts.len() > 1 && parts.last().is_some_and(|p| p.is_empty()) {
            parts.pop();
        }
        if parts.first().is_none_or(|p| p.is_empty()) {
            return Err(WkbError::Format { line: 0, message: "P_0 is zero".into() });
        }
        if flavour == Flavour::Differential && parts.iter().any(|p| p.keys().any(|&(_, b)| b < 0)) {
            return Err(WkbError::Flavour("negative power of y in a differential operator".into()));
        }
        Ok(OperatorPolynomial { flavour, parts })
    }

    /// `ħ²y² − x ħ y + 1`.
    pub fn catalan() -> Self {
        let mut p = OpTerms::new();
        p.insert((0, 2), FieldElement::one());
        p.insert((1, 1), FieldElement::from_int(-1));
        p.insert((0, 0), FieldElement::one());
        OperatorPolynomial { flavour: Flavour::Differential, parts: vec![p] }
    }

    pub fn from_text(text: &str) -> Result<Self, WkbError> {
        let mut consts: HashMap<String, FieldElement> = HashMap::new();
        let mut lines: Vec<(usize, usize, String)> = Vec::new();
        let mut flavour: Option<Flavour> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| WkbError::Format { line: i + 1, message: m.into() };
            if let Some(rest) = line.strip_prefix("const ") {
                let (name, value) = rest.split_once('=').ok_or_else(|| err("expected `const name = value`"))?;
                let v = parse_constant(value.trim(), &consts).map_err(|e| err(&e.to_string()))?;
                consts.insert(name.trim().to_string(), v);
            } else if let Some(rest) = line.strip_prefix("flavour") {
                let v = rest.trim_start().strip_prefix('=').ok_or_else(|| err("expected `flavour = ...`"))?;
                flavour = Some(match v.trim() {
                    "differential" => Flavour::Differential,
                    "difference" => Flavour::Difference,
                    other => return Err(err(&format!("unknown flavour `{other}`"))),
                });
            } else {
                let (lhs, rhs) = line.split_once(':').ok_or_else(|| err("expected `hbar^k : polynomial`"))?;
                let k = match lhs.trim() {
                    "1" => 0,
                    "hbar" => 1,
                    s => s
                        .strip_prefix("hbar^")
                        .and_then(|e| e.trim().parse::<usize>().ok())
                        .ok_or_else(|| err("expected `hbar^k` with k ≥ 0"))?,
                };
                lines.push((i + 1, k, rhs.trim().to_string()));
            }
        }
        let flavour = flavour.unwrap_or_else(|| {
            let uses_shift = lines
                .iter()
                .any(|(_, _, s)| s.split(|c: char| !c.is_alphanumeric() && c != '_').any(|w| w == "Yp" || w == "Ym"));
            if uses_shift {
                Flavour::Difference
            } else {
                Flavour::Differential
            }
        });
        let kmax =
            lines.iter().map(|l| l.1).max().ok_or(WkbError::Format { line: 0, message: "no operator lines".into() })?;
        let mut parts = vec![OpTerms::new(); kmax + 1];
        for (line, k, rhs) in lines {
            let err = |m: String| WkbError::Format { line, message: m };
            let ast = parse_ast(&rhs).map_err(|e| err(e.to_string()))?;
            match flavour {
                Flavour::Differential => {
                    let p = eval_multipoly(&ast, &["x", "y"], &consts).map_err(|e| err(e.to_string()))?;
                    for (e, c) in p {
                        add_term(&mut parts[k], (e[0], e[1] as i32), &c);
                    }
                }
                Flavour::Difference => {
                    let p = eval_multipoly(&ast, &["x", "Yp", "Ym"], &consts).map_err(|e| err(e.to_string()))?;
                    for (e, c) in p {
                        add_term(&mut parts[k], (e[0], e[1] as i32 - e[2] as i32), &c);
                    }
                }
            }
        }
        Self::new(flavour, parts)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.flavour == Flavour::Difference {
            out.push_str("flavour = difference\n");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            out.push_str(&format!("hbar^{k} : {}\n", print_terms(self.flavour, p)));
        }
        out
    }

    /// Highest power of `ħ`.
    pub fn order(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn part(&self, k: usize) -> Option<&OpTerms> {
        self.parts.get(k)
    }
}

impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for PlanePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_terms(self.flavour, &self.terms))
    }
}

pub(crate) fn add_term(p: &mut OpTerms, k: (u32, i32), c: &FieldElement) {
    let e = p.entry(k).or_insert_with(FieldElement::zero);
    *e += c;
    if e.is_zero() {
        p.remove(&k);
    }
}

fn print_terms(flavour: Flavour, p: &OpTerms) -> String {
    let mut m = MultiPoly::new();
    match flavour {
        Flavour::Differential => {
            for ((a, b), c) in p {
                m.insert(vec![*a, *b as u32], c.clone());
            }
            print_multipoly(&m, &["x", "y"])
        }
        Flavour::Difference => {
            for ((a, b), c) in p {
                let (yp, ym) = if *b >= 0 { (*b as u32, 0) } else { (0, (-*b) as u32) };
                m.insert(vec![*a, yp, ym], c.clone());
            }
            print_multipoly(&m, &["x", "Yp", "Ym"])
        }
    }
}

/// `ħ → 0` symbol: `P_0` with `x̂ ↦ x`, `ŷ ↦ y` (or `e^{±ŷ} ↦ e^{±y}`).
pub fn semiclassical_limit(op: &OperatorPolynomial) -> PlanePolynomial {
    PlanePolynomial { flavour: op.flavour, terms: op.parts[0].clone() }
}

impl PlanePolynomial {
    /// The symbol evaluated on a curve: `P(x(z), y(z))`, with `e^{y}` for
    /// the difference flavour.
    pub fn on_curve(&self, curve: &SpectralCurve) -> Result<RationalFunction, WkbError> {
        let ybase = solve::y_power_base(self.flavour, curve)?;
        let x = curve.x();
        let mut acc = RationalFunction::zero();
        for ((a, b), c) in &self.terms {
            let t = &x.pow(*a as i64)? * &ybase.pow(*b as i64)?;
            acc = &acc + &t.scale(c);
        }
        Ok(acc)
    }
}

/// Elements of the Weyl algebra `[x̂, ŷ] = −ħ` in normal order:
/// `(k, a, b) ↦ c` for `c·ħ^k x̂^a ŷ^b`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeylElement {
    pub terms: BTreeMap<(u32, u32, u32), FieldElement>,
}

impl WeylElement {
    pub fn from_operator(op: &OperatorPolynomial) -> Result<Self, WkbError> {
        if op.flavour != Flavour::Differential {
            return Err(WkbError::Flavour("Weyl algebra needs a differential operator".into()));
        }
        let mut out = WeylElement::default();
        for (k, p) in op.parts.iter().enumerate() {
            for ((a, b), c) in p {
                out.add((k as u32, *a, *b as u32), c);
            }
        }
        Ok(out)
    }

    pub fn to_operator(&self) -> Result<OperatorPolynomial, WkbError> {
        let kmax = self.terms.keys().map(|t| t.0).max().unwrap_or(0) as usize;
        let mut parts = vec![OpTerms::new(); kmax + 1];
        for ((k, a, b), c) in &self.terms {
            add_term(&mut parts[*k as usize], (*a, *b as i32), c);
        }
        OperatorPolynomial::new(Flavour::Differential, parts)
    }

    /// `p(x̂)` for a polynomial `p`.
    pub fn from_x_polynomial(p: &Polynomial) -> Self {
        let mut out = WeylElement::default();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add((0, i as u32, 0), c);
        }
        out
    }

    pub fn y() -> Self {
        let mut out = WeylElement::default();
        out.add((0, 0, 1), &FieldElement::one());
        out
    }

    fn add(&mut self, k: (u32, u32, u32), c: &FieldElement) {
        let e = self.terms.entry(k).or_insert_with(FieldElement::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add(*k, c);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add(*k, &-c);
        }
        out
    }

    /// Product, moving `ŷ^b` past `x̂^c` by
    /// `ŷ^b x̂^c = Σ_j C(b,j) c!/(c−j)! ħ^j x̂^{c−j} ŷ^{b−j}`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = WeylElement::default();
        for ((i, a, b), u) in &self.terms {
            for ((j, c, d), v) in &other.terms {
                let uv = u * v;
                let mut falling = FieldElement::one();
                for l in 0..=(*b).min(*c) {
                    if l > 0 {
                        falling = &falling * &FieldElement::from_int((*c - l + 1) as i64);
                    }
                    let coeff = &(&uv * &binomial(*b as u64, l as u64)) * &falling;
                    out.add((i + j + l, a + c - l, b - l + d), &coeff);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = WeylElement::default();
        acc.add((0, 0, 0), &FieldElement::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `P̂(x̂, ŷ − g′(x̂))` in normal order; it annihilates `e^{g/ħ}ψ` whenever
/// `P̂` annihilates `ψ`.
pub fn conjugate_by_potential(op: &OperatorPolynomial, g_prime: &Polynomial) -> Result<OperatorPolynomial, WkbError> {
    let w = WeylElement::from_operator(op)?;
    let shifted_y = WeylElement::y().minus(&WeylElement::from_x_polynomial(g_prime));
    let mut out = WeylElement::default();
    let mut powers: BTreeMap<u32, WeylElement> = BTreeMap::new();
    for ((k, a, b), c) in &w.terms {
        let yb = powers.entry(*b).or_insert_with(|| shifted_y.pow(*b)).clone();
        let mut left = WeylElement::default();
        left.add((*k, *a, 0), c);
        out = out.plus(&left.mul(&yb));
    }
    out.to_operator()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_commutator() {
        let x = WeylElement::from_x_polynomial(&Polynomial::z());
        let y = WeylElement::y();
        let comm = x.mul(&y).minus(&y.mul(&x));
        let mut expected = WeylElement::default();
        expected.add((1, 0, 0), &FieldElement::from_int(-1));
        assert_eq!(comm, expected);
    }

    #[test]
    fn operator_text_round_trip() {
        let op = OperatorPolynomial::from_text("hbar^0 : y^2 - x*y + 1\n").unwrap();
        assert_eq!(op, OperatorPolynomial::catalan());
        assert_eq!(OperatorPolynomial::from_text(&op.to_text()).unwrap(), op);
        let gw = OperatorPolynomial::from_text("const q = 1\nhbar^0 : Yp + q*Ym - x\nhbar^1 : 0\n").unwrap();
        assert_eq!(gw.flavour, Flavour::Difference);
        assert_eq!(gw.parts[0][&(0, -1)], FieldElement::one());
        assert_eq!(OperatorPolynomial::from_text(&gw.to_text()).unwrap(), gw);
    }
}
