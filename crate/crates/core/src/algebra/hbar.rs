//! Laurent polynomials in a single formal variable `ħ`.

use std::collections::BTreeMap;
use std::fmt;

use super::field::FieldElement;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HbarLaurent {
    terms: BTreeMap<i64, FieldElement>,
}

impl HbarLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(FieldElement::one(), 0)
    }

    pub fn monomial(c: FieldElement, k: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(k, &c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<i64, FieldElement> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> FieldElement {
        self.terms.get(&k).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: i64, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(FieldElement::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&FieldElement::from_int(-1)))
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, &(v * c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                out.add_term(a + b, &(u * v));
            }
        }
        out
    }

    pub fn eval(&self, h: &FieldElement) -> FieldElement {
        self.terms.iter().map(|(k, c)| c * &h.pow(*k)).sum()
    }
}

impl fmt::Display for HbarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| match k {
                0 => c.to_exact_string(),
                1 => format!("({})*hbar", c.to_exact_string()),
                _ => format!("({})*hbar^{k}", c.to_exact_string()),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_eval() {
        let a = HbarLaurent::monomial(FieldElement::one(), -1).add(&HbarLaurent::one());
        let b = a.mul(&a);
        assert_eq!(b.coeff(-2), FieldElement::one());
        assert_eq!(b.coeff(-1), FieldElement::from_int(2));
        assert_eq!(b.eval(&FieldElement::frac(1, 2)), FieldElement::from_int(9));
        assert!(a.sub(&a).is_zero());
    }
}
