//! Topological recursion in a tensor basis of pole differentials.
//!
//! A stable `ω^g_n` is stored as `Σ c(K) ⊗ᵢ (z − α_{Kᵢ})^{−kᵢ−1} dz`, where a
//! key `K` is a sorted multiset of packed `(branch point, k)` indices and
//! `c(K)` is the coefficient of every ordering of `K`.

mod checks;
mod engine;
mod expansion;

use std::collections::BTreeMap;
use std::fmt;

pub use checks::{
    airy_leading_check, check_dilaton, check_string, free_energy, free_energy_with, phi, pole_report, AiryComparison,
    ExtIndex, ExtTensor, PoleReport,
};
pub use engine::{Engine, EngineOptions, Omega};
pub use expansion::{inverse_x_series, loop_equation_check, x_expansion, ExpansionTable};

use crate::algebra::{factorial, FieldElement};

/// `(branch point index, k)` packed into one word.
pub type BasisIndex = u32;

pub fn pack(point: usize, k: u32) -> BasisIndex {
    ((point as u32) << 16) | k
}

pub fn point_of(b: BasisIndex) -> usize {
    (b >> 16) as usize
}

pub fn order_of(b: BasisIndex) -> u32 {
    b & 0xffff
}

/// A stable multidifferential in the pole basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Multidifferential {
    pub g: usize,
    pub n: usize,
    /// Branch points, indexed by the point field of each basis index.
    pub points: Vec<FieldElement>,
    pub terms: BTreeMap<Vec<BasisIndex>, FieldElement>,
}

impl Multidifferential {
    pub fn coefficient(&self, key: &[BasisIndex]) -> FieldElement {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.terms.get(&k).cloned().unwrap_or_else(FieldElement::zero)
    }

    /// Largest `k + 1` over all slots.
    pub fn max_pole_order(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.iter().map(|&b| order_of(b) + 1)).max().unwrap_or(0)
    }

    /// Largest `Σ (kᵢ + 1)` over all keys.
    pub fn max_total_pole_order(&self) -> u32 {
        self.terms.keys().map(|k| k.iter().map(|&b| order_of(b) + 1).sum()).max().unwrap_or(0)
    }

    /// Number of orderings of a sorted key.
    pub fn orderings(key: &[BasisIndex]) -> FieldElement {
        let mut denom = num_bigint::BigInt::from(1);
        for (_, m) in multiplicities(key) {
            denom *= factorial(m as u64);
        }
        FieldElement::from_rational(num_rational::BigRational::new(factorial(key.len() as u64), denom))
    }

    /// Human-readable label `(α, k)` of a basis index.
    pub fn label(&self, b: BasisIndex) -> String {
        format!("({}, {})", self.points[point_of(b)].to_exact_string(), order_of(b))
    }
}

impl fmt::Display for Multidifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "omega[{},{}]: {} terms", self.g, self.n, self.terms.len())?;
        for (k, c) in &self.terms {
            let labels: Vec<String> = k.iter().map(|&b| self.label(b)).collect();
            writeln!(f, "  {} : {}", labels.join(" "), c.to_exact_string())?;
        }
        Ok(())
    }
}

/// Run-length encoding of a sorted key.
pub(crate) fn multiplicities(key: &[BasisIndex]) -> Vec<(BasisIndex, usize)> {
    let mut out: Vec<(BasisIndex, usize)> = Vec::new();
    for &b in key {
        match out.last_mut() {
            Some((v, m)) if *v == b => *m += 1,
            _ => out.push((b, 1)),
        }
    }
    out
}

/// Sorted key with one element removed.
pub(crate) fn remove_one(key: &[BasisIndex], b: BasisIndex) -> Vec<BasisIndex> {
    let mut out = key.to_vec();
    let i = out.iter().position(|&v| v == b).expect("element present");
    out.remove(i);
    out
}

/// Sorted key with one element inserted.
pub(crate) fn insert_one(key: &[BasisIndex], b: BasisIndex) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(key.len() + 1);
    let i = key.partition_point(|&v| v <= b);
    out.extend_from_slice(&key[..i]);
    out.push(b);
    out.extend_from_slice(&key[i..]);
    out
}

/// Every sub-multiset `A ⊆ U` with `Π C(m_U, m_A)` and the complement.
pub(crate) fn submultisets(u: &[BasisIndex]) -> Vec<(Vec<BasisIndex>, Vec<BasisIndex>, u64)> {
    let runs = multiplicities(u);
    let mut out = vec![(Vec::new(), Vec::new(), 1u64)];
    for (v, m) in runs {
        let mut next = Vec::with_capacity(out.len() * (m + 1));
        for (a, b, w) in &out {
            for take in 0..=m {
                let mut a2 = a.clone();
                let mut b2 = b.clone();
                a2.extend(std::iter::repeat_n(v, take));
                b2.extend(std::iter::repeat_n(v, m - take));
                next.push((a2, b2, w * binom_u64(m as u64, take as u64)));
            }
        }
        out = next;
    }
    out
}

fn binom_u64(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_helpers() {
        let u = vec![pack(0, 1), pack(0, 1), pack(1, 3)];
        let subs = submultisets(&u);
        assert_eq!(subs.len(), 6);
        let total: u64 = subs.iter().map(|s| s.2).sum();
        assert_eq!(total, 8);
        assert_eq!(insert_one(&u, pack(0, 2)), vec![pack(0, 1), pack(0, 1), pack(0, 2), pack(1, 3)]);
        assert_eq!(remove_one(&u, pack(0, 1)), vec![pack(0, 1), pack(1, 3)]);
        assert_eq!(Multidifferential::orderings(&u), FieldElement::from_int(3));
    }
}
