use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use super::{insert_one, multiplicities, order_of, pack, remove_one, submultisets, BasisIndex, Multidifferential};
use crate::algebra::{Center, ExpansionPoint, FieldElement, LaurentSeries, LogAugmentedFunction};
use crate::curve::{AnalysedCurve, SpectralCurve};
use crate::error::{AlgebraError, RecursionError};

#[derive(Clone, Debug, Default)]
pub struct EngineOptions {
    /// Extra room above the pole bound `6g − 6 + 4n` when enumerating keys.
    /// Zero prunes by the bound; a positive value lets tests confirm the bound.
    pub budget_slack: u32,
}

/// `ω^g_n` in whichever representation fits.
#[derive(Clone, Debug)]
pub enum Omega {
    /// `ω⁰₁ = f(z) dz` with `f = −y·x′`.
    Disk(LogAugmentedFunction),
    /// `ω⁰₂ = dz₁dz₂/(z₁ − z₂)²`.
    Cylinder,
    Stable(Arc<Multidifferential>),
}

type SeriesMap = HashMap<Vec<BasisIndex>, LaurentSeries>;
type Contribution = Result<Vec<(Vec<BasisIndex>, FieldElement)>, RecursionError>;

/// Memoised recursion on one curve.
pub struct Engine {
    curve: Arc<AnalysedCurve>,
    opts: EngineOptions,
    memo: RwLock<HashMap<(usize, usize), Arc<Multidifferential>>>,
}

fn is_stable(g: usize, n: usize) -> bool {
    2 * g + n > 2
}

impl Engine {
    pub fn new(curve: SpectralCurve) -> Result<Self, RecursionError> {
        Self::with_options(curve, EngineOptions::default())
    }

    pub fn with_options(curve: SpectralCurve, opts: EngineOptions) -> Result<Self, RecursionError> {
        let analysed = AnalysedCurve::new(curve)?;
        Ok(Engine { curve: Arc::new(analysed), opts, memo: RwLock::new(HashMap::new()) })
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve.curve
    }

    pub fn analysed(&self) -> &AnalysedCurve {
        &self.curve
    }

    pub fn points(&self) -> Vec<FieldElement> {
        self.curve.branch.points.iter().map(|p| p.alpha.clone()).collect()
    }

    pub fn omega(&self, g: usize, n: usize) -> Result<Omega, RecursionError> {
        if n == 0 || 2 * g + n < 1 {
            return Err(RecursionError::BadIndex { g, n });
        }
        match (g, n) {
            (0, 1) => {
                let xp = self.curve().dx();
                Ok(Omega::Disk(self.curve().y().mul_rational(&xp).neg()))
            }
            (0, 2) => Ok(Omega::Cylinder),
            _ => Ok(Omega::Stable(self.stable(g, n)?)),
        }
    }

    /// A stable invariant, computing and caching its dependencies first.
    pub fn stable(&self, g: usize, n: usize) -> Result<Arc<Multidifferential>, RecursionError> {
        if n == 0 || !is_stable(g, n) {
            return Err(RecursionError::Unstable { g, n });
        }
        if let Some(w) = self.memo.read().unwrap().get(&(g, n)) {
            return Ok(w.clone());
        }
        for (dg, dn) in dependencies(g, n) {
            self.stable(dg, dn)?;
        }
        let w = Arc::new(self.compute(g, n)?);
        self.memo.write().unwrap().insert((g, n), w.clone());
        Ok(w)
    }

    fn compute(&self, g: usize, n: usize) -> Result<Multidifferential, RecursionError> {
        let deps: Vec<(usize, usize)> = dependencies(g, n);
        let factors: HashMap<(usize, usize), Arc<Multidifferential>> = {
            let memo = self.memo.read().unwrap();
            deps.iter().map(|k| (*k, memo[k].clone())).collect()
        };
        let budget = (6 * g + 4 * n - 6) as u32 + self.opts.budget_slack;
        let npts = self.curve.branch.points.len();
        let candidates = spectator_keys(npts, n - 1, budget.saturating_sub(2));
        let pole = factors.values().map(|w| w.max_pole_order()).max().unwrap_or(0).max(2) as i64;

        // key → (value, number of slot-1 routes that produced it)
        let mut routes: BTreeMap<Vec<BasisIndex>, (FieldElement, usize)> = BTreeMap::new();
        for ai in 0..npts {
            let local = LocalData::new(&self.curve, ai, pole, budget)?;
            let mut lz: HashMap<(usize, usize), SeriesMap> = HashMap::new();
            let mut lzh: HashMap<(usize, usize), SeriesMap> = HashMap::new();
            for (key, w) in &factors {
                let (a, b) = local.contractions(w);
                lz.insert(*key, a);
                lzh.insert(*key, b);
            }
            let (lz02, lzh02) = local.cylinder_maps(ai);

            let results: Vec<Contribution> = candidates
                .par_iter()
                .map(|u| {
                    let bracket = local.bracket(g, n, u, &lz, &lzh, &lz02, &lzh02)?;
                    let Some(b) = bracket else { return Ok(Vec::new()) };
                    let used: u32 = u.iter().map(|&x| order_of(x) + 1).sum();
                    let jmax = (budget - used - 1).min(local.kappa.len() as u32);
                    let mut out = Vec::new();
                    for j in 1..=jmax {
                        let kappa = &local.kappa[j as usize - 1];
                        let c = residue_pairing(kappa, &b)?;
                        out.push((insert_one(u, pack(ai, j)), c));
                    }
                    Ok(out)
                })
                .collect();
            for r in results {
                for (key, c) in r? {
                    match routes.get_mut(&key) {
                        Some((v, count)) => {
                            if *v != c {
                                return Err(RecursionError::Symmetry(format!(
                                    "omega[{g},{n}] key {key:?}: {} vs {}",
                                    v.to_exact_string(),
                                    c.to_exact_string()
                                )));
                            }
                            *count += 1;
                        }
                        None => {
                            routes.insert(key, (c, 1));
                        }
                    }
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (key, (c, count)) in routes {
            if c.is_zero() {
                continue;
            }
            let distinct = multiplicities(&key).len();
            if count != distinct {
                return Err(RecursionError::Symmetry(format!(
                    "omega[{g},{n}] key {key:?} reached by {count} of {distinct} slots"
                )));
            }
            terms.insert(key, c);
        }
        Ok(Multidifferential { g, n, points: self.points(), terms })
    }
}

/// Stable invariants that `ω^g_n` needs.
fn dependencies(g: usize, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if g >= 1 && is_stable(g - 1, n + 1) {
        out.push((g - 1, n + 1));
    }
    for g1 in 0..=g {
        for n1 in 1..=n {
            if is_stable(g1, n1) && (g1, n1) != (g, n) && !out.contains(&(g1, n1)) {
                out.push((g1, n1));
            }
        }
    }
    out
}

/// Sorted keys of `size` spectator slots with `Σ (k + 1) ≤ budget`.
fn spectator_keys(npts: usize, size: usize, budget: u32) -> Vec<Vec<BasisIndex>> {
    let mut elems: Vec<BasisIndex> = Vec::new();
    for p in 0..npts {
        for k in 1..budget.max(1) {
            elems.push(pack(p, k));
        }
    }
    elems.sort_unstable();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        elems: &[BasisIndex],
        start: usize,
        left: usize,
        budget: u32,
        cur: &mut Vec<BasisIndex>,
        out: &mut Vec<Vec<BasisIndex>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..elems.len() {
            let cost = order_of(elems[i]) + 1;
            // Each remaining slot costs at least 2.
            if cost + 2 * (left as u32 - 1) > budget {
                continue;
            }
            cur.push(elems[i]);
            rec(elems, i, left - 1, budget - cost, cur, out);
            cur.pop();
        }
    }
    rec(&elems, 0, size, budget, &mut cur, &mut out);
    out
}

/// `Σ_i κ[i]·b[−1−i]`, refusing to read past either truncation.
fn residue_pairing(kappa: &LaurentSeries, b: &LaurentSeries) -> Result<FieldElement, RecursionError> {
    if b.is_zero() && b.trunc() >= -1 - kappa.low() {
        return Ok(FieldElement::zero());
    }
    let hi = -1 - b.low();
    if kappa.trunc() < hi {
        return Err(AlgebraError::Truncation { wanted: hi, known: kappa.trunc() }.into());
    }
    let mut acc = FieldElement::zero();
    for i in kappa.low()..=hi {
        let bk = -1 - i;
        if bk > b.trunc() {
            return Err(AlgebraError::Truncation { wanted: bk, known: b.trunc() }.into());
        }
        let (ki, bi) = (kappa.coeff(i)?, b.coeff(bk)?);
        if !ki.is_zero() && !bi.is_zero() {
            acc += &(&ki * &bi);
        }
    }
    Ok(acc)
}

/// Everything local to one branch point for one target `(g, n)`.
struct LocalData {
    alpha_index: usize,
    pole: i64,
    sigma: LaurentSeries,
    sigma_prime: LaurentSeries,
    /// `zb[p][k]` = `(α − α_p + s)^{−k−1}`, `zh[p][k]` = same at `σ(s)` times `σ′`.
    zb: Vec<Vec<LaurentSeries>>,
    zh: Vec<Vec<LaurentSeries>>,
    /// `κ_j` for `j = 1, 2, …`.
    kappa: Vec<LaurentSeries>,
}

impl LocalData {
    fn new(curve: &AnalysedCurve, ai: usize, pole: i64, budget: u32) -> Result<Self, RecursionError> {
        let top = 2 * pole + 4;
        let alpha = curve.branch.points[ai].alpha.clone();
        let sigma = curve.sigma(ai, top)?.truncate(top).with_center(Center::Local);
        let sigma_prime = sigma.derivative();
        let npts = curve.branch.points.len();
        let mut zb = Vec::with_capacity(npts);
        let mut zh = Vec::with_capacity(npts);
        for p in 0..npts {
            let c = &alpha - &curve.branch.points[p].alpha;
            let mut row_z = vec![LaurentSeries::zero(pole)];
            let mut row_h = vec![LaurentSeries::zero(pole)];
            let base_z = &LaurentSeries::monomial(c.clone(), 0, top) + &LaurentSeries::var(top);
            let base_h = &LaurentSeries::monomial(c, 0, top) + &sigma;
            let inv_z = base_z.inverse()?;
            let inv_h = base_h.inverse()?;
            let mut pz = inv_z.clone();
            let mut ph = inv_h.clone();
            for _k in 1..pole {
                pz = &pz * &inv_z;
                ph = &ph * &inv_h;
                row_z.push(pz.truncate(pole));
                row_h.push((&ph * &sigma_prime).truncate(pole));
            }
            zb.push(row_z);
            zh.push(row_h);
        }

        // D(s) = 2·(y(α+s) − y(α+σ))·x′(α+s)
        let y = curve.curve.y_local(&alpha, top)?.with_center(Center::Local);
        let y_sigma = y.compose(&sigma)?;
        let dy = &y - &y_sigma;
        let xp = curve.curve.dx().series_expand(&ExpansionPoint::At(alpha.clone()), top).with_center(Center::Local);
        let d = (&dy * &xp).scale(&FieldElement::from_int(2));
        if d.low() != 2 {
            return Err(RecursionError::Other(format!(
                "y(p) − y(p̂) has the wrong order at z = {}",
                alpha.to_exact_string()
            )));
        }
        let dinv = d.inverse()?;
        let jmax = (budget as i64 - 1).min(2 * pole + 1).max(1);
        let mut kappa = Vec::new();
        let mut sp = sigma.clone();
        for j in 1..=jmax {
            if j > 1 {
                sp = &sp * &sigma;
            }
            let sj = LaurentSeries::monomial(FieldElement::one(), j, sp.trunc());
            let num = &sj - &sp;
            kappa.push((&num * &dinv).scale(&FieldElement::from_int(-1)).truncate(2 * pole));
        }
        Ok(LocalData { alpha_index: ai, pole, sigma, sigma_prime, zb, zh, kappa })
    }

    fn basis_z(&self, b: BasisIndex) -> Option<&LaurentSeries> {
        self.zb[super::point_of(b)].get(order_of(b) as usize)
    }

    fn basis_h(&self, b: BasisIndex) -> Option<&LaurentSeries> {
        self.zh[super::point_of(b)].get(order_of(b) as usize)
    }

    /// Contract one slot of `ω` with `z = α + s` and with `ẑ = α + σ(s)`.
    fn contractions(&self, w: &Multidifferential) -> (SeriesMap, SeriesMap) {
        let mut lz: SeriesMap = HashMap::new();
        let mut lh: SeriesMap = HashMap::new();
        for (key, c) in &w.terms {
            for (a, _) in multiplicities(key) {
                let rest = remove_one(key, a);
                let (Some(bz), Some(bh)) = (self.basis_z(a), self.basis_h(a)) else {
                    unreachable!("basis index beyond the pole bound")
                };
                let tz = bz.scale(c);
                let th = bh.scale(c);
                match lz.get_mut(&rest) {
                    Some(s) => *s = &*s + &tz,
                    None => {
                        lz.insert(rest.clone(), tz);
                    }
                }
                match lh.get_mut(&rest) {
                    Some(s) => *s = &*s + &th,
                    None => {
                        lh.insert(rest, th);
                    }
                }
            }
        }
        (lz, lh)
    }

    /// `ω⁰₂(z, zᵢ)` expanded in the spectator's basis at this point.
    fn cylinder_maps(&self, ai: usize) -> (SeriesMap, SeriesMap) {
        let mut lz = HashMap::new();
        let mut lh = HashMap::new();
        let mut sp = LaurentSeries::one(self.sigma.trunc());
        for m in 0..=self.pole {
            let k = FieldElement::from_int(m + 1);
            let key = vec![pack(ai, (m + 1) as u32)];
            lz.insert(key.clone(), LaurentSeries::monomial(k.clone(), m, self.pole));
            lh.insert(key, (&sp * &self.sigma_prime).scale(&k).truncate(self.pole));
            sp = &sp * &self.sigma;
        }
        (lz, lh)
    }

    #[allow(clippy::too_many_arguments)]
    fn bracket(
        &self,
        g: usize,
        n: usize,
        u: &[BasisIndex],
        lz: &HashMap<(usize, usize), SeriesMap>,
        lzh: &HashMap<(usize, usize), SeriesMap>,
        lz02: &SeriesMap,
        lzh02: &SeriesMap,
    ) -> Result<Option<LaurentSeries>, RecursionError> {
        let mut acc: Option<LaurentSeries> = None;
        let mut add = |t: LaurentSeries| {
            acc = Some(match acc.take() {
                Some(a) => &a + &t,
                None => t,
            });
        };
        if g >= 1 {
            if (g - 1, n + 1) == (0, 2) {
                // ω⁰₂(z, ẑ) = σ′/(s − σ)²
                let diff = &LaurentSeries::var(self.sigma.trunc()) - &self.sigma;
                let t = self.sigma_prime.mul_trunc(&diff.pow(-2)?, 0);
                add(t);
            } else if let Some(map) = lzh.get(&(g - 1, n + 1)) {
                for (p, row) in self.zb.iter().enumerate() {
                    for (k, bz) in row.iter().enumerate().skip(1) {
                        let v = insert_one(u, pack(p, k as u32));
                        if let Some(l) = map.get(&v) {
                            add(bz.mul_trunc(l, 0));
                        }
                    }
                }
            }
        }
        for (a, b, w) in submultisets(u) {
            let n1 = a.len() + 1;
            let n2 = b.len() + 1;
            for g1 in 0..=g {
                let g2 = g - g1;
                if (g1, n1) == (0, 1) || (g2, n2) == (0, 1) {
                    continue;
                }
                let f1 = if (g1, n1) == (0, 2) { lz02.get(&a) } else { lz.get(&(g1, n1)).and_then(|m| m.get(&a)) };
                let f2 = if (g2, n2) == (0, 2) { lzh02.get(&b) } else { lzh.get(&(g2, n2)).and_then(|m| m.get(&b)) };
                if let (Some(f1), Some(f2)) = (f1, f2) {
                    let t = f1.mul_trunc(f2, 0);
                    add(if w == 1 { t } else { t.scale(&FieldElement::from_int(w as i64)) });
                }
            }
        }
        if let Some(b) = &acc {
            if b.trunc() < 0 {
                return Err(AlgebraError::Truncation { wanted: 0, known: b.trunc() }.into());
            }
        }
        let _ = self.alpha_index;
        Ok(acc)
    }
}
