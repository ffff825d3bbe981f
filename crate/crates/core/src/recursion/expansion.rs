//! Expansion of `ω^g_n` at `z = ∞` in powers of `1/x`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{multiplicities, order_of, point_of, BasisIndex, Engine, Omega};
use crate::algebra::{Center, ExpansionPoint, FieldElement, LaurentSeries, RationalFunction};
use crate::error::RecursionError;

/// `M_{g,n}(μ)` for ordered `μ` with `Σμ ≤ depth`; the primitive of `ω`
/// vanishing at `x = ∞` is `Σ M(μ) x₁^{−μ₁}⋯xₙ^{−μₙ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTable {
    pub g: usize,
    pub n: usize,
    pub depth: u32,
    pub entries: BTreeMap<Vec<u32>, FieldElement>,
    /// For `(0,1)`: coefficients of `x^{−1}, x^{−2}, …` in `y`.
    pub disk_series: Option<Vec<FieldElement>>,
}

impl ExpansionTable {
    pub fn get(&self, mu: &[u32]) -> FieldElement {
        self.entries.get(mu).cloned().unwrap_or_else(FieldElement::zero)
    }

    /// `Σ_{|μ| = m} M(μ)` for `m = 0..=depth`.
    pub fn diagonal(&self) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::zero(); self.depth as usize + 1];
        for (mu, c) in &self.entries {
            let m: u32 = mu.iter().sum();
            out[m as usize] += c;
        }
        out
    }
}

impl fmt::Display for ExpansionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "M[{},{}] with |mu| <= {}", self.g, self.n, self.depth)?;
        if let Some(ds) = &self.disk_series {
            let parts: Vec<String> = ds.iter().map(|c| c.to_exact_string()).collect();
            writeln!(f, "dF/dx coefficients of x^-1, x^-2, ...: {}", parts.join(", "))?;
        }
        for (mu, c) in &self.entries {
            let m: Vec<String> = mu.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  ({}) : {}", m.join(","), c.to_exact_string())?;
        }
        Ok(())
    }
}

/// `w = 1/z` as a series in `ξ = 1/x`, exact through `ξ^order`.
pub(crate) fn w_of_xi(engine: &Engine, order: i64) -> Result<LaurentSeries, RecursionError> {
    let x = engine.curve().x();
    if x.order_at_infinity() != -1 {
        return Err(RecursionError::NoSimplePoleAtInfinity);
    }
    let xs = x.series_expand(&ExpansionPoint::Infinity, order).with_center(Center::Local);
    let xi = xs.inverse()?;
    Ok(xi.reversion()?.truncate(order))
}

/// `f(z)` on the branch `z → ∞` as a series in `ξ = 1/x`, exact through `ξ^order`.
pub fn inverse_x_series(engine: &Engine, f: &RationalFunction, order: i64) -> Result<LaurentSeries, RecursionError> {
    let w = w_of_xi(engine, order + 2)?;
    let lead = (-f.order_at_infinity()).max(0);
    let fs = f.series_expand(&ExpansionPoint::Infinity, order + lead).with_center(Center::Local);
    Ok(fs.compose(&w)?.truncate(order))
}

/// Table of `M_{g,n}(μ)` for `Σμ ≤ depth`.
pub fn x_expansion(engine: &Engine, g: usize, n: usize, depth: u32) -> Result<ExpansionTable, RecursionError> {
    if depth < 1 {
        return Err(RecursionError::BadDepth);
    }
    let d = depth as i64;
    let w = w_of_xi(engine, d + 3)?;
    let wp = w.derivative();
    let mut table = ExpansionTable { g, n, depth, entries: BTreeMap::new(), disk_series: None };
    match engine.omega(g, n)? {
        Omega::Disk(_) => {
            let y = engine.curve().y();
            let yr = y
                .as_rational()
                .ok_or_else(|| RecursionError::Other("y has logarithmic terms and no expansion at z = ∞".into()))?;
            let ys = yr.series_expand(&ExpansionPoint::Infinity, d + 2).with_center(Center::Local);
            let yx = ys.compose(&w)?;
            let coeffs: Vec<FieldElement> = (1..=d + 1).map(|m| yx.coeff(m)).collect::<Result<_, _>>()?;
            for mu in 1..=depth {
                let c = &coeffs[mu as usize] / &FieldElement::from_int(mu as i64);
                if !c.is_zero() {
                    table.entries.insert(vec![mu], c);
                }
            }
            table.disk_series = Some(coeffs);
        }
        Omega::Cylinder => {
            for (mu, c) in cylinder_expansion(&w, depth)? {
                table.entries.insert(mu, c);
            }
        }
        Omega::Stable(om) => {
            let mut basis_cache: HashMap<BasisIndex, Vec<FieldElement>> = HashMap::new();
            for key in om.terms.keys() {
                for &b in key {
                    if order_of(b) <= depth && !basis_cache.contains_key(&b) {
                        let beta = &om.points[point_of(b)];
                        basis_cache.insert(b, basis_at_infinity(&w, &wp, beta, order_of(b), depth)?);
                    }
                }
            }
            let mus = ordered_profiles(n, depth);
            for mu in mus {
                let mut c_omega = FieldElement::zero();
                for (key, c) in &om.terms {
                    let ksum: u32 = key.iter().map(|&b| order_of(b)).sum();
                    if ksum > mu.iter().sum::<u32>() {
                        continue;
                    }
                    let mut acc = FieldElement::zero();
                    for perm in distinct_permutations(key) {
                        let mut prod = FieldElement::one();
                        for (b, &m) in perm.iter().zip(&mu) {
                            if order_of(*b) > m {
                                prod = FieldElement::zero();
                                break;
                            }
                            let e = &basis_cache[b][m as usize];
                            if e.is_zero() {
                                prod = FieldElement::zero();
                                break;
                            }
                            prod = &prod * e;
                        }
                        acc += &prod;
                    }
                    if !acc.is_zero() {
                        c_omega += &(c * &acc);
                    }
                }
                let denom: i64 = mu.iter().map(|&m| m as i64).product();
                let sign = if n.is_multiple_of(2) { 1 } else { -1 };
                let m = &c_omega / &FieldElement::from_int(sign * denom);
                if !m.is_zero() {
                    table.entries.insert(mu, m);
                }
            }
        }
    }
    Ok(table)
}

/// `e(μ)` for `μ = 0..=depth` with `(z−β)^{−k−1}dz = Σ e(μ) x^{−μ−1} dx`.
fn basis_at_infinity(
    w: &LaurentSeries,
    wp: &LaurentSeries,
    beta: &FieldElement,
    k: u32,
    depth: u32,
) -> Result<Vec<FieldElement>, RecursionError> {
    let d = depth as i64 + 2;
    // w^{k−1}(1 − βw)^{−k−1} in the variable w
    let one_minus = &LaurentSeries::one(d) - &LaurentSeries::monomial(beta.clone(), 1, d);
    let inner = one_minus.pow(-(k as i64) - 1)?.shift(k as i64 - 1).truncate(d);
    let composed = inner.compose(w)?;
    let g = composed.mul_trunc(wp, d).shift(2);
    (0..=depth as i64).map(|mu| g.coeff(mu + 1)).collect::<Result<_, _>>().map_err(Into::into)
}

/// `M₀,₂` from `log(W₁·A/(A₁A₂))`, where `A = (w(ξ₁) − w(ξ₂))/(ξ₁ − ξ₂)`.
fn cylinder_expansion(w: &LaurentSeries, depth: u32) -> Result<Vec<(Vec<u32>, FieldElement)>, RecursionError> {
    let d = depth as usize;
    let wk: Vec<FieldElement> = (0..=d as i64 + 1).map(|k| w.coeff(k)).collect::<Result<_, _>>()?;
    let w1 = wk[1].clone();
    // A(ξ₁, ξ₂) = Σ_k W_k h_{k−1}(ξ₁, ξ₂), truncated to total degree d.
    let mut a = Bivariate::zero(d);
    for (k, wkv) in wk.iter().enumerate().skip(1) {
        let deg = k - 1;
        if deg > d {
            break;
        }
        for i in 0..=deg {
            a.add_at(i, deg - i, wkv);
        }
    }
    let mut a1 = Bivariate::zero(d);
    let mut a2 = Bivariate::zero(d);
    for (k, wkv) in wk.iter().enumerate().skip(1) {
        if k - 1 <= d {
            a1.add_at(k - 1, 0, wkv);
            a2.add_at(0, k - 1, wkv);
        }
    }
    let ratio = a.scale(&w1).mul(&a1.mul(&a2).inverse());
    let lg = ratio.log_unit();
    let mut out = Vec::new();
    for i in 1..=d {
        for j in 1..=d - i {
            let c = lg.get(i, j);
            if !c.is_zero() {
                out.push((vec![i as u32, j as u32], c));
            }
        }
    }
    Ok(out)
}

/// Series in two variables truncated by total degree.
#[derive(Clone)]
struct Bivariate {
    d: usize,
    c: Vec<Vec<FieldElement>>,
}

impl Bivariate {
    fn zero(d: usize) -> Self {
        Bivariate { d, c: (0..=d).map(|i| vec![FieldElement::zero(); d + 1 - i]).collect() }
    }

    fn get(&self, i: usize, j: usize) -> FieldElement {
        self.c[i][j].clone()
    }

    fn add_at(&mut self, i: usize, j: usize, v: &FieldElement) {
        if i + j <= self.d {
            self.c[i][j] += v;
        }
    }

    fn scale(&self, s: &FieldElement) -> Self {
        let mut out = self.clone();
        for row in &mut out.c {
            for v in row.iter_mut() {
                *v = &*v * s;
            }
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Bivariate::zero(self.d);
        for i in 0..=self.d {
            for j in 0..=self.d - i {
                if self.c[i][j].is_zero() {
                    continue;
                }
                for k in 0..=self.d - i - j {
                    for l in 0..=self.d - i - j - k {
                        if !o.c[k][l].is_zero() {
                            out.c[i + k][j + l] += &(&self.c[i][j] * &o.c[k][l]);
                        }
                    }
                }
            }
        }
        out
    }

    /// `1/f` for `f(0,0) ≠ 0`.
    fn inverse(&self) -> Self {
        let c0 = self.c[0][0].inv();
        let mut u = self.scale(&c0);
        u.c[0][0] = FieldElement::zero();
        // 1/(1+u) = Σ (−u)^m
        let mut out = Bivariate::zero(self.d);
        out.c[0][0] = FieldElement::one();
        let mut p = out.clone();
        let neg = u.scale(&FieldElement::from_int(-1));
        for _ in 0..self.d {
            p = p.mul(&neg);
            out = out.add(&p);
        }
        out.scale(&c0)
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..=self.d {
            for j in 0..=self.d - i {
                out.c[i][j] += &o.c[i][j];
            }
        }
        out
    }

    /// `log f` for `f(0,0) = 1`.
    fn log_unit(&self) -> Self {
        assert!(self.c[0][0].is_one());
        let mut u = self.clone();
        u.c[0][0] = FieldElement::zero();
        let mut out = Bivariate::zero(self.d);
        let mut p = out.clone();
        p.c[0][0] = FieldElement::one();
        for m in 1..=self.d as i64 {
            p = p.mul(&u);
            let sign = if m % 2 == 1 { 1 } else { -1 };
            out = out.add(&p.scale(&FieldElement::frac(sign, m)));
        }
        out
    }
}

/// Ordered `μ ∈ ℤ_{≥1}^n` with `Σμ ≤ depth`.
pub(crate) fn ordered_profiles(n: usize, depth: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let slots_after = (n - cur.len() - 1) as u32;
        if left < 1 + slots_after {
            return;
        }
        for m in 1..=left - slots_after {
            cur.push(m);
            rec(n, left - m, cur, out);
            cur.pop();
        }
    }
    rec(n, depth, &mut cur, &mut out);
    out
}

/// All distinct orderings of a sorted multiset.
fn distinct_permutations(key: &[BasisIndex]) -> Vec<Vec<BasisIndex>> {
    let runs = multiplicities(key);
    let mut counts: Vec<(BasisIndex, usize)> = runs;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(key.len());
    fn rec(counts: &mut [(BasisIndex, usize)], n: usize, cur: &mut Vec<BasisIndex>, out: &mut Vec<Vec<BasisIndex>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i].1 > 0 {
                counts[i].1 -= 1;
                cur.push(counts[i].0);
                rec(counts, n, cur, out);
                cur.pop();
                counts[i].1 += 1;
            }
        }
    }
    rec(&mut counts, key.len(), &mut cur, &mut out);
    out
}

/// Series in `1/x`: entry `m` multiplies `x^{−m}`.
type XiSeries = Vec<FieldElement>;

fn xi_deriv(a: &[FieldElement]) -> XiSeries {
    let mut out = vec![FieldElement::zero(); a.len()];
    for m in 1..a.len() - 1 {
        out[m + 1] = &a[m] * &FieldElement::from_int(-(m as i64));
    }
    out
}

fn xi_mul(a: &[FieldElement], b: &[FieldElement]) -> XiSeries {
    let mut out = vec![FieldElement::zero(); a.len()];
    for (i, u) in a.iter().enumerate().filter(|(_, u)| !u.is_zero()) {
        for (j, v) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] += &(u * v);
        }
    }
    out
}

fn xi_axpy(acc: &mut [FieldElement], c: &FieldElement, a: &[FieldElement]) {
    for (s, v) in acc.iter_mut().zip(a) {
        *s += &(c * v);
    }
}

/// Diagonal data of `F^g_n = (−1)ⁿ Σ M(μ) x^{−μ}` (plus `log x` for `(0,1)`).
struct Specialised {
    /// `d/dx F(x, …, x)`.
    d1: XiSeries,
    /// `d²/du² F(u, x, …, x)` at `u = x`.
    e: XiSeries,
}

fn specialised(engine: &Engine, g: usize, n: usize, len: usize) -> Result<Specialised, RecursionError> {
    let t = x_expansion(engine, g, n, len as u32)?;
    let mut d1 = vec![FieldElement::zero(); len];
    let mut e = vec![FieldElement::zero(); len];
    if let Some(disk) = &t.disk_series {
        for (m, c) in disk.iter().enumerate().take(len - 1) {
            d1[m + 1] = c.clone();
        }
        e = xi_deriv(&d1);
        return Ok(Specialised { d1, e });
    }
    let sign = FieldElement::from_int(if n.is_multiple_of(2) { 1 } else { -1 });
    let mut diag = vec![FieldElement::zero(); len];
    for (mu, c) in &t.entries {
        let m: u32 = mu.iter().sum();
        let c = &sign * c;
        if (m as usize) < len {
            diag[m as usize] += &c;
        }
        if (m as usize + 2) < len {
            e[m as usize + 2] += &(&c * &FieldElement::from_int((mu[0] * (mu[0] + 1)) as i64));
        }
    }
    d1 = xi_deriv(&diag);
    Ok(Specialised { d1, e })
}

/// Coefficients of `x^0, …, x^{−depth}` in the specialised loop equation for
/// `F^g_n(x, …, x)`: `(1/n) x F′` minus the products of lower `F′`, the
/// second-derivative terms and, for `(0, 1)`, the constant 1.
pub fn loop_equation_check(
    engine: &Engine,
    g: usize,
    n: usize,
    depth: u32,
) -> Result<Vec<FieldElement>, RecursionError> {
    if n == 0 {
        return Err(RecursionError::BadIndex { g, n });
    }
    if depth < 1 {
        return Err(RecursionError::BadDepth);
    }
    let len = depth as usize + 2;
    let mut cache: HashMap<(usize, usize), Specialised> = HashMap::new();
    let mut need = vec![(g, n)];
    for g1 in 0..=g {
        for i in 0..n {
            need.push((g1, i + 1));
            need.push((g - g1, n - i));
        }
    }
    if g >= 1 {
        need.push((g - 1, n + 1));
    }
    if n >= 2 {
        need.push((g, n - 1));
    }
    for key in need {
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            e.insert(specialised(engine, key.0, key.1, len)?);
        }
    }
    let frac = |a: i64, b: i64| FieldElement::frac(a, b);
    let nn = n as i64;

    // (1/n) x F′: multiplying by x lowers the index by one
    let own = &cache[&(g, n)].d1;
    let mut res: XiSeries =
        (0..len).map(|m| own.get(m + 1).map(|c| c * &frac(1, nn)).unwrap_or_else(FieldElement::zero)).collect();
    for g1 in 0..=g {
        for i in 0..n {
            let a = &cache[&(g1, i + 1)].d1;
            let b = &cache[&(g - g1, n - i)].d1;
            let c = &crate::algebra::binomial(n as u64 - 1, i as u64) * &frac(1, ((i + 1) * (n - i)) as i64);
            xi_axpy(&mut res, &-c, &xi_mul(a, b));
        }
    }
    if g >= 1 {
        let up = &cache[&(g - 1, n + 1)];
        xi_axpy(&mut res, &frac(-1, nn * (nn + 1)), &xi_deriv(&up.d1));
        xi_axpy(&mut res, &frac(1, nn), &up.e);
    }
    if n >= 2 {
        xi_axpy(&mut res, &FieldElement::from_int(-(nn - 1)), &cache[&(g, n - 1)].e);
    }
    if g == 0 && n == 1 {
        res[0] -= &FieldElement::one();
    }
    res.truncate(depth as usize + 1);
    Ok(res)
}
