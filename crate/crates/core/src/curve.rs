//! Rational spectral curves `(P¹, B, x, y)` and their branch points.
//!
//! File format, one statement per line, `#` starts a comment:
//!
//! ```text
//! param = z
//! const q = 1
//! x = z + q/z
//! y = log(z)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::parse::{parse_constant, parse_expr_with};
use crate::algebra::{ExpansionPoint, FieldElement, LaurentSeries, LogAugmentedFunction, RationalFunction};
use crate::error::{AlgebraError, CurveError};

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCurve {
    param: String,
    x: RationalFunction,
    y: LogAugmentedFunction,
    constants: Vec<(String, FieldElement)>,
}

impl SpectralCurve {
    pub fn new(x: RationalFunction, y: LogAugmentedFunction) -> Result<Self, CurveError> {
        Self::with_param("z", x, y, Vec::new())
    }

    pub fn with_param(
        param: &str,
        x: RationalFunction,
        y: LogAugmentedFunction,
        constants: Vec<(String, FieldElement)>,
    ) -> Result<Self, CurveError> {
        if x.is_constant() {
            return Err(CurveError::ConstantX);
        }
        if y.is_zero() {
            return Err(CurveError::ZeroY);
        }
        Ok(SpectralCurve { param: param.to_string(), x, y, constants })
    }

    /// `x = z + 1/z`, `y = 1/z`: the curve `y² − xy + 1 = 0`.
    pub fn catalan() -> Self {
        Self::from_text("x = z + 1/z\ny = 1/z\n").unwrap()
    }

    /// `x = z²`, `y = z`.
    pub fn airy() -> Self {
        Self::from_text("x = z^2\ny = z\n").unwrap()
    }

    /// `x = z + q/z`, `y = log z`.
    pub fn gw(q: FieldElement) -> Self {
        let text = format!("const q = {}\nx = z + q/z\ny = log(z)\n", q.to_exact_string());
        Self::from_text(&text).unwrap()
    }

    /// Parse the line-oriented curve format.
    pub fn from_text(text: &str) -> Result<Self, CurveError> {
        let mut param = "z".to_string();
        let mut consts: HashMap<String, FieldElement> = HashMap::new();
        let mut order: Vec<(String, FieldElement)> = Vec::new();
        let mut x_src: Option<(usize, String)> = None;
        let mut y_src: Option<(usize, String)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let fmt_err = |m: &str| CurveError::Format { line: line_no, message: m.to_string() };
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| fmt_err("expected `name = value`"))?;
            let lhs = lhs.trim();
            let rhs = rhs.trim().to_string();
            if let Some(name) = lhs.strip_prefix("const ") {
                let name = name.trim().to_string();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(fmt_err("bad constant name"));
                }
                let v = parse_constant(&rhs, &consts)?;
                consts.insert(name.clone(), v.clone());
                order.push((name, v));
                continue;
            }
            match lhs {
                "param" => {
                    if rhs.is_empty() || !rhs.chars().all(|c| c.is_alphanumeric() || c == '_') {
                        return Err(fmt_err("bad parameter name"));
                    }
                    param = rhs;
                }
                "x" => x_src = Some((line_no, rhs)),
                "y" => y_src = Some((line_no, rhs)),
                _ => return Err(fmt_err(&format!("unknown key `{lhs}`"))),
            }
        }
        let (_, xs) = x_src.ok_or(CurveError::Format { line: 0, message: "missing `x =` line".into() })?;
        let (_, ys) = y_src.ok_or(CurveError::Format { line: 0, message: "missing `y =` line".into() })?;
        let x = parse_expr_with(&xs, &param, &consts)?;
        let x = x
            .as_rational()
            .cloned()
            .ok_or_else(|| CurveError::Format { line: 0, message: "x must be rational".into() })?;
        let y = parse_expr_with(&ys, &param, &consts)?;
        Self::with_param(&param, x, y, order)
    }

    /// Print in the file format; constants are already substituted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "param = {}", self.param).unwrap();
        writeln!(out, "x = {}", self.x.to_expr(&self.param)).unwrap();
        writeln!(out, "y = {}", self.y.to_expr(&self.param)).unwrap();
        out
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    pub fn x(&self) -> &RationalFunction {
        &self.x
    }

    pub fn y(&self) -> &LogAugmentedFunction {
        &self.y
    }

    pub fn constants(&self) -> &[(String, FieldElement)] {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<&FieldElement> {
        self.constants.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// `dx/dz`.
    pub fn dx(&self) -> RationalFunction {
        self.x.derivative()
    }

    /// `dy/dz`, rational because log coefficients are constant.
    pub fn dy(&self) -> Result<RationalFunction, CurveError> {
        self.y
            .derivative()
            .as_rational()
            .cloned()
            .ok_or_else(|| CurveError::Algebra(AlgebraError::NotRepresentable("dy/dz is not rational".into())))
    }

    /// The same `x` with `y` replaced.
    pub fn with_y(&self, y: LogAugmentedFunction) -> Result<Self, CurveError> {
        Self::with_param(&self.param, self.x.clone(), y, self.constants.clone())
    }

    /// Local expansion of `y` at a branch point, log constants dropped.
    pub fn y_local(&self, a: &FieldElement, order: i64) -> Result<LaurentSeries, CurveError> {
        Ok(self.y.local_series(a, order)?.series)
    }
}

/// One validated zero of `dx`.
#[derive(Clone, Debug)]
pub struct BranchPoint {
    pub alpha: FieldElement,
    /// `x″(α)`.
    pub x2: FieldElement,
    /// `y′(α)`.
    pub y1: FieldElement,
}

#[derive(Clone, Debug)]
pub struct BranchData {
    pub points: Vec<BranchPoint>,
    pub radicand: Option<i64>,
}

impl BranchData {
    pub fn index_of(&self, a: &FieldElement) -> Option<usize> {
        self.points.iter().position(|p| &p.alpha == a)
    }
}

/// Find and validate all zeros of `dx`.
pub fn validate_curve(curve: &SpectralCurve) -> Result<BranchData, CurveError> {
    let x = curve.x();
    // dx has a zero at ∞ exactly when x is regular there to order ≥ 2.
    let mut xinf = x.clone();
    if let Some(c) = x.eval_at_infinity() {
        xinf = &xinf - &RationalFunction::constant(c);
        if xinf.order_at_infinity() >= 2 {
            return Err(CurveError::BranchAtInfinity);
        }
    }
    let dx = curve.dx();
    let roots = dx.num().roots().map_err(|p| CurveError::OutsideField(p.to_expr(curve.param())))?;
    let mut radicand = None;
    for (a, _) in &roots {
        if let Some(d) = a.radicand() {
            if radicand.is_some_and(|r| r != d) {
                return Err(CurveError::MixedExtensions);
            }
            radicand = Some(d);
        }
    }
    for coeff_d in [x.radicand(), curve.y().rational_part().radicand()].into_iter().flatten() {
        if radicand.is_some_and(|r| r != coeff_d) {
            return Err(CurveError::MixedExtensions);
        }
    }
    let d2x = dx.derivative();
    let dy = curve.dy()?;
    for (c, _) in curve.y().log_terms() {
        if !c.is_constant() {
            return Err(CurveError::Algebra(AlgebraError::NotRepresentable(
                "log terms of y need constant coefficients".into(),
            )));
        }
    }
    let mut points = Vec::new();
    let mut sorted = roots;
    sorted.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    for (a, m) in sorted {
        if m > 1 {
            return Err(CurveError::NonSimpleZero { point: a.to_exact_string(), multiplicity: m });
        }
        let name = a.to_exact_string();
        if curve.y().rational_part().den().eval(&a).is_zero() {
            return Err(CurveError::YSingular(name));
        }
        for (_, arg) in curve.y().log_terms() {
            match arg.eval(&a) {
                Some(v) if !v.is_zero() => {}
                _ => return Err(CurveError::YSingular(name)),
            }
        }
        let y1 = dy.eval(&a).ok_or_else(|| CurveError::YSingular(name.clone()))?;
        if y1.is_zero() {
            return Err(CurveError::DyVanishes(name));
        }
        let x2 = d2x.eval(&a).expect("x regular at a zero of dx");
        points.push(BranchPoint { alpha: a, x2, y1 });
    }
    Ok(BranchData { points, radicand })
}

/// The local involution `σ` with `x(α + σ(s)) = x(α + s)`, exact through `s^order`.
pub fn deck_transform(curve: &SpectralCurve, alpha: &FieldElement, order: i64) -> Result<LaurentSeries, CurveError> {
    if order < 1 {
        return Err(CurveError::BadOrder);
    }
    let dx = curve.dx();
    if !dx.num().eval(alpha).is_zero() || dx.den().eval(alpha).is_zero() {
        return Err(CurveError::NotBranchPoint(alpha.to_exact_string()));
    }
    Ok(deck_series(curve.x(), alpha, order)?)
}

/// `x(α+s) − x(α) = a·t(s)²` with `t = s + …`; then `σ = t⁻¹(−t(s))`.
pub(crate) fn deck_series(
    x: &RationalFunction,
    alpha: &FieldElement,
    order: i64,
) -> Result<LaurentSeries, AlgebraError> {
    let xs = x.series_expand(&ExpansionPoint::At(alpha.clone()), order + 2);
    let c0 = xs.coeff(0)?;
    let shifted = &xs - &LaurentSeries::monomial(c0, 0, order + 2).with_center(xs.center().clone());
    let shifted = shifted.with_center(crate::algebra::Center::Local);
    let a2 = shifted.coeff(2)?;
    if a2.is_zero() || shifted.low() != 2 {
        return Err(AlgebraError::NotRepresentable("zero of dx is not simple".into()));
    }
    let u = shifted.shift(-2).scale(&a2.inv());
    let t = u.sqrt()?.shift(1);
    let tinv = t.reversion()?;
    let neg_t = t.scale(&FieldElement::from_int(-1));
    Ok(tinv.compose(&neg_t)?.truncate(order))
}

/// Cached branch data plus deck transforms of growing precision.
#[derive(Debug)]
pub struct AnalysedCurve {
    pub curve: SpectralCurve,
    pub branch: BranchData,
    sigma: std::sync::Mutex<Vec<Arc<LaurentSeries>>>,
}

impl AnalysedCurve {
    pub fn new(curve: SpectralCurve) -> Result<Self, CurveError> {
        let branch = validate_curve(&curve)?;
        let n = branch.points.len();
        let zero = Arc::new(LaurentSeries::zero(-1));
        Ok(AnalysedCurve { curve, branch, sigma: std::sync::Mutex::new(vec![zero; n]) })
    }

    /// `σ_α` at branch point index `i`, exact through at least `order`.
    pub fn sigma(&self, i: usize, order: i64) -> Result<Arc<LaurentSeries>, AlgebraError> {
        let mut guard = self.sigma.lock().unwrap();
        if guard[i].trunc() < order {
            let grow = order.max(guard[i].trunc() * 3 / 2);
            let s = deck_series(self.curve.x(), &self.branch.points[i].alpha, grow)?;
            guard[i] = Arc::new(s);
        }
        Ok(guard[i].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_branch_points() {
        let b = validate_curve(&SpectralCurve::catalan()).unwrap();
        let pts: Vec<_> = b.points.iter().map(|p| p.alpha.to_exact_string()).collect();
        assert_eq!(pts, vec!["-1", "1"]);
    }

    #[test]
    fn cubic_is_rejected() {
        let c = SpectralCurve::from_text("x = z^3\ny = z").unwrap();
        match validate_curve(&c) {
            Err(CurveError::NonSimpleZero { point, multiplicity }) => {
                assert_eq!(point, "0");
                assert_eq!(multiplicity, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deck_transform_catalan() {
        let c = SpectralCurve::catalan();
        let s = deck_transform(&c, &FieldElement::one(), 4).unwrap();
        let want: Vec<FieldElement> = [-1, 1, -1, 1].iter().map(|&v| FieldElement::from_int(v)).collect();
        assert_eq!(s.low(), 1);
        assert_eq!(s.coefficients(), &want[..]);
        let airy = deck_transform(&SpectralCurve::airy(), &FieldElement::zero(), 6).unwrap();
        assert_eq!(airy.coeff(1).unwrap(), FieldElement::from_int(-1));
        assert!((2..=6).all(|k| airy.coeff(k).unwrap().is_zero()));
        let gw = deck_transform(&SpectralCurve::gw(FieldElement::one()), &FieldElement::from_int(-1), 4).unwrap();
        let want: Vec<FieldElement> = [-1, -1, -1, -1].iter().map(|&v| FieldElement::from_int(v)).collect();
        assert_eq!(gw.coefficients(), &want[..]);
    }
}
