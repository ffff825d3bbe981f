//! Dense univariate polynomials over [`FieldElement`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::FieldElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    /// `coeffs[i]` multiplies `z^i`; no trailing zeros.
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::one())
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![FieldElement::zero(), FieldElement::one()])
    }

    /// `c · z^k`.
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let mut v = vec![FieldElement::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `z − a`.
    pub fn linear_root(a: &FieldElement) -> Self {
        Self::new(vec![-a, FieldElement::one()])
    }

    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| FieldElement::from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().inv())
    }

    pub fn eval(&self, z: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &FieldElement::from_int(i as i64)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Polynomial long division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead_inv = d.leading().inv();
        let mut q = vec![FieldElement::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = &r[i] * &lead_inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                r[i - dd + j] -= &t;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Substitute a polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &FieldElement) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::linear_root(a);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }

    /// The radicand if any coefficient is irrational.
    pub fn radicand(&self) -> Option<i64> {
        self.coeffs.iter().find_map(|c| c.radicand())
    }

    /// Exact roots with multiplicity. Roots must lie in `ℚ` or a single
    /// `ℚ(√d)`; otherwise the irreducible leftover factor is returned as error.
    pub fn roots(&self) -> Result<Vec<(FieldElement, usize)>, Polynomial> {
        let mut out: Vec<(FieldElement, usize)> = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let mut rest = self.monic();
        if rest.coeffs.iter().all(|c| c.is_rational()) {
            for r in rational_root_candidates(&rest) {
                let m = rest.root_multiplicity(&r);
                if m > 0 {
                    for _ in 0..m {
                        rest = rest.div_rem(&Self::linear_root(&r)).0;
                    }
                    out.push((r, m));
                }
                if rest.degree() == Some(0) {
                    break;
                }
            }
        } else {
            // Quadratic coefficients: only linear and quadratic leftovers are solvable.
            for (r, m) in linear_factors_generic(&rest) {
                for _ in 0..m {
                    rest = rest.div_rem(&Self::linear_root(&r)).0;
                }
                out.push((r, m));
            }
        }
        match rest.degree() {
            Some(0) | None => {}
            Some(2) => {
                // Repeated quadratic factors are peeled off one at a time.
                let (r1, r2) = quadratic_roots(&rest).ok_or_else(|| rest.clone())?;
                out.push((r1, 1));
                out.push((r2, 1));
            }
            Some(_) => {
                // Try a square of an irreducible quadratic, else give up.
                let g = Self::gcd(&rest, &rest.derivative());
                if g.degree() == Some(2) {
                    let (q, r) = rest.div_rem(&g);
                    if r.is_zero() && q.monic() == g {
                        let (r1, r2) = quadratic_roots(&g).ok_or_else(|| g.clone())?;
                        out.push((r1, 2));
                        out.push((r2, 2));
                        return Ok(sorted_roots(out));
                    }
                }
                return Err(rest);
            }
        }
        Ok(sorted_roots(out))
    }
}

fn sorted_roots(mut v: Vec<(FieldElement, usize)>) -> Vec<(FieldElement, usize)> {
    v.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    v
}

/// Roots of a monic quadratic in `ℚ(√disc)`.
fn quadratic_roots(p: &Polynomial) -> Option<(FieldElement, FieldElement)> {
    let b = p.coeff(1);
    let c = p.coeff(0);
    let disc = &(&b * &b) - &(&c * &FieldElement::from_int(4));
    let disc_q = disc.to_rational()?.clone();
    let sq = FieldElement::sqrt_rational(&disc_q);
    let half = FieldElement::frac(1, 2);
    let r1 = &(&(-&b) + &sq) * &half;
    let r2 = &(&(-&b) - &sq) * &half;
    Some((r1, r2))
}

/// Linear factors of a polynomial with coefficients in `ℚ(√d)`: take the
/// norm polynomial `p·p̄ ∈ ℚ[z]`, find its roots in `ℚ(√d)`, keep those of `p`.
fn linear_factors_generic(p: &Polynomial) -> Vec<(FieldElement, usize)> {
    let conj = Polynomial::new(p.coeffs.iter().map(|c| c.conjugate()).collect());
    let norm = p * &conj;
    let mut cands: Vec<FieldElement> = Vec::new();
    if let Ok(rs) = norm.roots() {
        cands.extend(rs.into_iter().map(|(r, _)| r));
    }
    let mut out = Vec::new();
    for r in cands {
        if r.radicand().is_some() && p.radicand().is_some() && r.radicand() != p.radicand() {
            continue;
        }
        let m = p.root_multiplicity(&r);
        if m > 0 && !out.iter().any(|(q, _): &(FieldElement, usize)| q == &r) {
            out.push((r, m));
        }
    }
    out
}

/// Candidate rational roots `p/q` of a rational polynomial.
fn rational_root_candidates(p: &Polynomial) -> Vec<FieldElement> {
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.rational_part().denom());
    }
    let ints: Vec<BigInt> =
        p.coeffs().iter().map(|c| (c.rational_part() * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut out = Vec::new();
    // Zero root.
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        out.push(FieldElement::zero());
    }
    let a0 = ints[low].abs();
    let an = ints.last().unwrap().abs();
    let num_divs = divisors(&a0);
    let den_divs = divisors(&an);
    for n in &num_divs {
        for d in &den_divs {
            if !n.gcd(d).is_one() {
                continue;
            }
            let q = BigRational::new(n.clone(), d.clone());
            out.push(FieldElement::from_rational(q.clone()));
            out.push(FieldElement::from_rational(-q));
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let limit = n.to_u64().unwrap_or(u64::MAX);
    let mut out = Vec::new();
    let mut i: u64 = 1;
    while (i as u128) * (i as u128) <= limit as u128 {
        let bi = BigInt::from(i);
        if (&n % &bi).is_zero() {
            out.push(bi.clone());
            let other = &n / &bi;
            if other != bi {
                out.push(other);
            }
        }
        i += 1;
        if i > 10_000_000 {
            break;
        }
    }
    out
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => v.push(a + b),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Polynomial::new(v)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut v = vec![FieldElement::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] += &(a * b);
            }
        }
        Polynomial::new(v)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

impl Polynomial {
    /// Printer in the expression grammar, e.g. `3/2*z^2 - z + 1`.
    pub fn to_expr(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) =
                if c.is_rational() && c.rational_part().is_negative() { (true, -c) } else { (false, c.clone()) };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = if mag.is_rational() {
                if mag.is_one() && i > 0 {
                    String::new()
                } else {
                    mag.to_exact_string()
                }
            } else {
                format!("({})", mag.to_exact_string())
            };
            let body = match (coef.is_empty(), mono.is_empty()) {
                (true, _) => mono,
                (false, true) => coef,
                (false, false) => format!("{coef}*{mono}"),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn division_and_gcd() {
        let a = &p(&[-1, 0, 1]) * &p(&[2, 1]);
        let (q, r) = a.div_rem(&p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, &p(&[1, 1]) * &p(&[2, 1]));
        assert_eq!(Polynomial::gcd(&a, &p(&[1, 1])), p(&[1, 1]));
    }

    #[test]
    fn rational_and_quadratic_roots() {
        let r = p(&[-1, 0, 1]).roots().unwrap();
        assert_eq!(r, vec![(FieldElement::from_int(-1), 1), (FieldElement::from_int(1), 1)]);
        let r = p(&[0, 0, 0, 1]).roots().unwrap();
        assert_eq!(r, vec![(FieldElement::zero(), 3)]);
        let r = p(&[-2, 0, 1]).roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|(x, _)| x.radicand() == Some(2)));
        assert!(p(&[-2, 0, 0, 1]).roots().is_err());
        let r = p(&[1, 0, 2, 0, 1]).roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|(_, m)| *m == 2));
    }

    #[test]
    fn printer() {
        assert_eq!(p(&[1, -1, 3]).to_expr("z"), "3*z^2 - z + 1");
        assert_eq!(p(&[0, -1]).to_expr("z"), "-z");
    }
}
