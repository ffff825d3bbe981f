//! Permutation brute force for dessins and Belyi profile counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{double_factorial_odd, stirling_first};
use crate::algebra::{factorial, FieldElement};
use crate::error::OracleError;

pub const MAX_DESSIN_EDGES: u32 = 5;
pub const MAX_BELYI_SIZE: u32 = 10;

/// Calls `f` on every permutation of `0..n` whose first entry is `first`.
fn each_perm_with_first(n: usize, first: usize, mut f: impl FnMut(&[u8])) {
    let mut p: Vec<u8> = std::iter::once(first as u8).chain((0..n as u8).filter(|&i| i as usize != first)).collect();
    // Heap's algorithm on p[1..]
    let m = n - 1;
    let mut c = vec![0usize; m];
    f(&p);
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(1, 1 + i);
            } else {
                p.swap(1 + c[i], 1 + i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn each_perm(n: usize, mut f: impl FnMut(&[u8])) {
    for first in 0..n {
        each_perm_with_first(n, first, &mut f);
    }
}

fn cycle_lengths(p: &[u8]) -> Vec<u32> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out
}

fn find(parent: &mut [u8], mut i: usize) -> usize {
    while parent[i] as usize != i {
        parent[i] = parent[parent[i] as usize];
        i = parent[i] as usize;
    }
    i
}

/// Whether `⟨a, b⟩` acts transitively.
fn transitive(a: &[u8], b: &[u8]) -> bool {
    let n = a.len();
    let mut parent: Vec<u8> = (0..n as u8).collect();
    let mut comps = n;
    for perm in [a, b] {
        for (i, &j) in perm.iter().enumerate() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j as usize));
            if ri != rj {
                parent[ri] = rj as u8;
                comps -= 1;
            }
        }
    }
    comps == 1
}

/// All fixed-point-free involutions of `0..2e`.
fn matchings(n: usize) -> Vec<Vec<u8>> {
    fn go(p: &mut Vec<u8>, free: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if free.is_empty() {
            out.push(p.clone());
            return;
        }
        let a = free.remove(0);
        for k in 0..free.len() {
            let b = free.remove(k);
            p[a as usize] = b;
            p[b as usize] = a;
            go(p, free, out);
            free.insert(k, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    go(&mut vec![0; n], &mut (0..n as u8).collect(), &mut out);
    out
}

fn over_factorial(count: &BigInt, n: u64) -> FieldElement {
    FieldElement::from_rational(BigRational::new(count.clone(), factorial(n)))
}

/// `f•(v, e)` and `f(v, e)` for every `v` and every `e ≤ e_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct DessinTable {
    pub e_max: u32,
    /// `disconnected[e][v]`.
    pub disconnected: Vec<Vec<FieldElement>>,
    /// Connected part from the graded logarithm.
    pub connected: Vec<Vec<FieldElement>>,
    /// Connected part counted directly with a transitivity test.
    pub connected_direct: Vec<Vec<FieldElement>>,
}

/// One entry of a [`DessinTable`] with its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct DessinCount {
    pub v: u32,
    pub e: u32,
    pub disconnected: FieldElement,
    pub connected: FieldElement,
    pub connected_direct: FieldElement,
    /// `Stirling(2e, v)/(2^e e!)`.
    pub closed_form: FieldElement,
}

fn brute_force_dessins(e: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = 2 * e as usize;
    let zero = || (vec![BigInt::from(0); n + 1], vec![BigInt::from(0); n + 1]);
    matchings(n)
        .par_iter()
        .map(|s1| {
            let (mut all, mut conn) = zero();
            each_perm(n, |s0| {
                let v = cycle_lengths(s0).len();
                all[v] += 1;
                if transitive(s0, s1) {
                    conn[v] += 1;
                }
            });
            (all, conn)
        })
        .reduce(zero, |(mut a, mut c), (b, d)| {
            for v in 0..=n {
                a[v] += &b[v];
                c[v] += &d[v];
            }
            (a, c)
        })
}

/// `log` of `1 + Σ_{e ≥ 1} X_e(a) b^e`, each `X_e` a polynomial in `a`.
fn graded_log(x: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let mul = |p: &[FieldElement], q: &[FieldElement]| -> Vec<FieldElement> {
        let mut out = vec![FieldElement::zero(); p.len() + q.len()];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        out
    };
    let mut c: Vec<Vec<FieldElement>> = vec![Vec::new(); x.len()];
    for e in 1..x.len() {
        // e·C_e = e·X_e − Σ_{j<e} j·C_j·X_{e−j}
        let mut acc: Vec<FieldElement> = x[e].iter().map(|v| v * &FieldElement::from_int(e as i64)).collect();
        for j in 1..e {
            let t = mul(&c[j], &x[e - j]);
            if acc.len() < t.len() {
                acc.resize(t.len(), FieldElement::zero());
            }
            for (k, v) in t.iter().enumerate() {
                acc[k] -= &(v * &FieldElement::from_int(j as i64));
            }
        }
        let inv = FieldElement::frac(1, e as i64);
        c[e] = acc.iter().map(|v| v * &inv).collect();
        c[e].resize(2 * e + 1, FieldElement::zero());
    }
    c
}

pub fn dessin_table(e_max: u32) -> Result<DessinTable, OracleError> {
    if e_max > MAX_DESSIN_EDGES {
        return Err(OracleError::Guard(format!("dessin enumeration needs e ≤ {MAX_DESSIN_EDGES}")));
    }
    let mut disconnected = vec![vec![FieldElement::one()]];
    let mut connected_direct = vec![vec![FieldElement::zero()]];
    for e in 1..=e_max {
        let (all, conn) = brute_force_dessins(e);
        disconnected.push(all.iter().map(|c| over_factorial(c, 2 * e as u64)).collect());
        connected_direct.push(conn.iter().map(|c| over_factorial(c, 2 * e as u64)).collect());
    }
    let connected = graded_log(&disconnected);
    Ok(DessinTable { e_max, disconnected, connected, connected_direct })
}

pub fn dessin_count(v: u32, e: u32) -> Result<DessinCount, OracleError> {
    if e == 0 || v == 0 || v > 2 * e {
        return Err(OracleError::Range(format!("dessin_count({v}, {e}) needs 1 ≤ v ≤ 2e")));
    }
    let t = dessin_table(e)?;
    let (e_, v_) = (e as usize, v as usize);
    let closed_den = BigInt::from(2).pow(e) * factorial(e as u64);
    Ok(DessinCount {
        v,
        e,
        disconnected: t.disconnected[e_][v_].clone(),
        connected: t.connected[e_][v_].clone(),
        connected_direct: t.connected_direct[e_][v_].clone(),
        closed_form: FieldElement::from_rational(BigRational::new(stirling_first(2 * e as u64, v as u64)?, closed_den)),
    })
}

/// `M_{g,n}(μ)` for every connected triple on `2e` darts, keyed by genus and
/// the profile sorted in decreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct BelyiTable {
    pub e: u32,
    pub counts: BTreeMap<(usize, Vec<u32>), FieldElement>,
}

impl BelyiTable {
    /// `M_{g,n}(μ)` for `μ` in any order.
    pub fn get(&self, g: usize, mu: &[u32]) -> FieldElement {
        let mut key = mu.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        self.counts.get(&(g, key)).cloned().unwrap_or_else(FieldElement::zero)
    }
}

/// `σ₁` fixed to `(0 1)(2 3)⋯`; each `σ₀` gives `σ₂ = (σ₀σ₁)⁻¹`. Labelled
/// triples are `(2e−1)!!·Π mult!` times the unlabelled count with this `σ₁`.
pub fn belyi_table(e: u32) -> Result<BelyiTable, OracleError> {
    if 2 * e > MAX_BELYI_SIZE {
        return Err(OracleError::Guard(format!("belyi enumeration needs Σμ ≤ {MAX_BELYI_SIZE}")));
    }
    let n = 2 * e as usize;
    if n == 0 {
        return Ok(BelyiTable { e, counts: BTreeMap::new() });
    }
    let s1: Vec<u8> = (0..n as u8).map(|i| i ^ 1).collect();
    let raw = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut acc: BTreeMap<(usize, Vec<u32>), u64> = BTreeMap::new();
            let mut s2 = vec![0u8; n];
            each_perm_with_first(n, first, |s0| {
                if !transitive(s0, &s1) {
                    return;
                }
                // σ₂ = (σ₀σ₁)⁻¹ with σ₀σ₁ applying σ₁ first
                for i in 0..n {
                    s2[s0[s1[i] as usize] as usize] = i as u8;
                }
                let v = cycle_lengths(s0).len() as i64;
                let mut mu = cycle_lengths(&s2);
                let k = mu.len() as i64;
                let two_g = e as i64 - v - k + 2;
                mu.sort_unstable_by(|a, b| b.cmp(a));
                *acc.entry(((two_g / 2) as usize, mu)).or_insert(0) += 1;
            });
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let mut counts = BTreeMap::new();
    for ((g, mu), c) in raw {
        let mut labelled = BigInt::from(c) * double_factorial_odd(e as u64);
        let mut i = 0;
        while i < mu.len() {
            let j = (i..mu.len()).find(|&j| mu[j] != mu[i]).unwrap_or(mu.len());
            labelled *= factorial((j - i) as u64);
            i = j;
        }
        counts.insert((g, mu), over_factorial(&labelled, n as u64));
    }
    Ok(BelyiTable { e, counts })
}

pub fn belyi_count(g: usize, mu: &[u32]) -> Result<FieldElement, OracleError> {
    let total: u32 = mu.iter().sum();
    if total > MAX_BELYI_SIZE {
        return Err(OracleError::Guard(format!("belyi enumeration needs Σμ ≤ {MAX_BELYI_SIZE}")));
    }
    if mu.is_empty() || mu.contains(&0) {
        return Err(OracleError::Range("profile entries must be positive".into()));
    }
    if total % 2 == 1 {
        return Ok(FieldElement::zero());
    }
    Ok(belyi_table(total / 2)?.get(g, mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heap_visits_each_permutation_once() {
        let mut seen = std::collections::BTreeSet::new();
        each_perm(4, |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn matchings_count() {
        assert_eq!(matchings(6).len(), 15);
    }
}
