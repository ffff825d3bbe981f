use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qcurve::algebra::{FieldElement, HbarLaurent, LaurentSeries, Polynomial, RationalFunction};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sqrt2_elem() -> impl Strategy<Value = FieldElement> {
    (-20i64..20, 1i64..6, -20i64..20, 1i64..6).prop_map(|(a, b, c, d)| FieldElement::quadratic(q(a, b), q(c, d), 2))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-6i64..6, 1..5).prop_map(|c| Polynomial::from_ints(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_axioms(a in sqrt2_elem(), b in sqrt2_elem(), c in sqrt2_elem()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn norm_is_multiplicative(a in sqrt2_elem(), b in sqrt2_elem()) {
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn polynomial_division(p in poly(), d in poly()) {
        prop_assume!(!d.is_zero());
        let (quo, rem) = p.div_rem(&d);
        prop_assert_eq!(&(&quo * &d) + &rem, p.clone());
        prop_assert!(rem.is_zero() || rem.degree() < d.degree());
        let g = Polynomial::gcd(&p, &d);
        prop_assert!(d.div_rem(&g).1.is_zero());
    }

    #[test]
    fn product_rule(p in poly(), r in poly(), s in poly()) {
        prop_assume!(!s.is_zero());
        let f = RationalFunction::from_poly(p);
        let g = RationalFunction::new(r, s).unwrap();
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_expansion_is_a_ring_map(p in poly(), r in poly(), s in poly()) {
        prop_assume!(!s.coeff(0).is_zero());
        let f = RationalFunction::from_poly(p);
        let g = RationalFunction::new(r, s).unwrap();
        let at = qcurve::algebra::ExpansionPoint::At(FieldElement::zero());
        let lhs = (&f * &g).series_expand(&at, 8);
        let rhs = &f.series_expand(&at, 8) * &g.series_expand(&at, 8);
        for k in 0..=8 {
            prop_assert_eq!(lhs.coeff(k).unwrap(), rhs.coeff(k).unwrap());
        }
    }

    #[test]
    fn exp_inverts_log(c in prop::collection::vec(-4i64..4, 1..5)) {
        let mut coeffs = vec![FieldElement::one()];
        coeffs.extend(c.iter().map(|&v| FieldElement::from_int(v)));
        let f = LaurentSeries::local(0, coeffs, 8);
        let back = f.log().unwrap().exp().unwrap();
        for k in 0..=6 {
            prop_assert_eq!(back.coeff(k).unwrap(), f.coeff(k).unwrap());
        }
    }

    #[test]
    fn reversion_inverts(c in prop::collection::vec(-3i64..3, 1..4)) {
        let mut coeffs = vec![FieldElement::one()];
        coeffs.extend(c.iter().map(|&v| FieldElement::from_int(v)));
        let f = LaurentSeries::local(1, coeffs, 8);
        let g = f.reversion().unwrap();
        let id = f.compose(&g).unwrap();
        for k in 1..=6 {
            let want = if k == 1 { FieldElement::one() } else { FieldElement::zero() };
            prop_assert_eq!(id.coeff(k).unwrap(), want);
        }
    }

    #[test]
    fn hbar_laurent_ring(a in prop::collection::vec((-3i64..3, -4i64..4), 0..4),
                         b in prop::collection::vec((-3i64..3, -4i64..4), 0..4)) {
        let mk = |v: &[(i64, i64)]| v.iter().fold(HbarLaurent::zero(), |acc, &(k, c)| acc.add(&HbarLaurent::monomial(FieldElement::from_int(c), k)));
        let (x, y) = (mk(&a), mk(&b));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        let h = FieldElement::frac(2, 3);
        prop_assert_eq!(x.mul(&y).eval(&h), &x.eval(&h) * &y.eval(&h));
    }
}
