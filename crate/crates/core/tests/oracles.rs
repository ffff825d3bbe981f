use num_bigint::BigInt;
use proptest::prelude::*;
use qcurve::algebra::{FieldElement, Polynomial, RationalFunction};
use qcurve::error::OracleError;
use qcurve::oracles::*;

#[test]
fn catalan_values() {
    assert_eq!(catalan(0), FieldElement::one());
    assert_eq!(catalan(3), FieldElement::from_int(5));
    assert_eq!(catalan(4), FieldElement::from_int(14));
}

#[test]
fn stirling_values() {
    assert_eq!(stirling_first(1, 1).unwrap(), BigInt::from(1));
    assert_eq!(stirling_first(3, 2).unwrap(), BigInt::from(3));
    assert_eq!(stirling_first(3, 1).unwrap(), BigInt::from(2));
    assert_eq!(stirling_first(4, 2).unwrap(), BigInt::from(11));
    assert!(matches!(stirling_first(1, 2), Err(OracleError::Range(_))));
}

proptest! {
    #[test]
    fn stirling_recurrence(n in 1u64..12, k in 1u64..12) {
        prop_assume!(k <= n);
        let lhs = stirling_first(n, k).unwrap();
        let rhs = stirling_first(n - 1, k - 1).unwrap() + BigInt::from(n - 1) * stirling_first(n - 1, k).unwrap_or_default();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn small_dessins() {
    let a = dessin_count(1, 1).unwrap();
    assert_eq!(a.disconnected, FieldElement::frac(1, 2));
    let b = dessin_count(2, 1).unwrap();
    assert_eq!(b.disconnected, FieldElement::frac(1, 2));
    assert!(matches!(dessin_count(1, 6), Err(OracleError::Guard(_))));
    assert!(dessin_count(5, 2).is_err());
}

#[test]
fn dessin_table_matches_closed_form_and_transitivity() {
    let t = dessin_table(3).unwrap();
    for e in 1..=3u32 {
        for v in 1..=2 * e {
            let c = dessin_count(v, e).unwrap();
            assert_eq!(c.disconnected, c.closed_form);
            assert_eq!(t.connected[e as usize][v as usize], t.connected_direct[e as usize][v as usize]);
        }
    }
}

#[test]
fn belyi_examples() {
    assert_eq!(belyi_count(0, &[2]).unwrap(), FieldElement::frac(1, 2));
    assert_eq!(belyi_count(0, &[4]).unwrap(), FieldElement::frac(1, 2));
    assert_eq!(belyi_count(0, &[3]).unwrap(), FieldElement::zero());
    assert_eq!(belyi_count(0, &[1, 1]).unwrap(), FieldElement::one());
    assert!(matches!(belyi_count(0, &[6, 6]), Err(OracleError::Guard(_))));
}

#[test]
fn belyi_catalan_relation() {
    for m in 1..=4u64 {
        let mu = 2 * m as u32;
        let lhs = &FieldElement::from_int(mu as i64) * &belyi_count(0, &[mu]).unwrap();
        assert_eq!(lhs, catalan(m));
    }
}

#[test]
fn belyi_counts_are_symmetric() {
    let t = belyi_table(3).unwrap();
    assert_eq!(t.get(0, &[1, 2, 3]), t.get(0, &[3, 1, 2]));
}

#[test]
fn hermite_polynomials() {
    assert_eq!(hermite(0), Polynomial::one());
    assert_eq!(hermite(1), Polynomial::from_ints(&[0, 2]));
    assert_eq!(hermite(2), Polynomial::from_ints(&[-2, 0, 4]));
    // H_{N+1} = 2x H_N − 2N H_{N−1}
    for n in 1..8u32 {
        let rhs = &(&Polynomial::from_ints(&[0, 2]) * &hermite(n))
            - &hermite(n - 1).scale(&FieldElement::from_int(2 * n as i64));
        assert_eq!(hermite(n + 1), rhs);
    }
}

#[test]
fn hermite_wave_n_two() {
    let c = hermite_wave_check(2, 4).unwrap();
    assert_eq!(c.scaled, Polynomial::new(vec![FieldElement::frac(-1, 2), FieldElement::zero(), FieldElement::one()]));
    assert!(c.passed());
    assert!(hermite_wave_check(0, 2).is_err());
}

#[test]
fn closed_wave_matches_dessins() {
    let t = dessin_table(4).unwrap();
    for e in 1..=4u32 {
        let c = wave_x_coefficient_closed(e);
        for v in 1..=2 * e {
            let sign = if (e + v) % 2 == 0 { 1 } else { -1 };
            let want = &t.disconnected[e as usize][v as usize] * &FieldElement::from_int(sign);
            assert_eq!(c.coeff(e as i64 - v as i64), want);
        }
    }
}

#[test]
fn bernoulli_and_phi() {
    assert_eq!(bernoulli(4), FieldElement::frac(-1, 30));
    assert_eq!(zeta_negative_odd(2), FieldElement::frac(1, 120));
    assert_eq!(phi_coefficient(1), FieldElement::frac(-1, 24));
}

#[test]
fn degree_zero_recursion() {
    let p = gw_psi0(6).unwrap();
    assert!(p.recursion_holds());
    assert!(gw_psi0(9).is_err());
}

#[test]
fn psi_ratios() {
    let half = FieldElement::frac(1, 2);
    let pole = |a: FieldElement| RationalFunction::power_of_linear(&a, -1);
    let r1 = &RationalFunction::one() + &pole(half.clone());
    let r2 = &(&RationalFunction::constant(half.clone()) + &pole(half.clone()).scale(&half))
        + &pole(FieldElement::frac(3, 2)).scale(&half);
    assert_eq!(gw_psi_ratio(1).unwrap(), r1);
    assert_eq!(gw_psi_ratio(2).unwrap(), r2);
    for d in 1..=5 {
        let r = gw_psi_ratio(d).unwrap();
        assert_eq!(r, gw_psi_ratio_from_equation(d).unwrap());
        let mut roots = r.den().roots().unwrap();
        roots.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let want: Vec<(FieldElement, usize)> =
            (1..=d).map(|i| (&FieldElement::from_int(i as i64) - &half, 1)).collect();
        assert_eq!(roots, want);
    }
    assert!(gw_psi_ratio(7).is_err());
}

#[test]
fn toda_equation() {
    assert!(toda_residuals(2).unwrap().iter().all(|r| r.is_zero()));
}
