use proptest::prelude::*;
use qcurve::algebra::{FieldElement, LogAugmentedFunction, RationalFunction};
use qcurve::curve::SpectralCurve;
use qcurve::oracles::wave_x_coefficient_closed;
use qcurve::recursion::Engine;
use qcurve::wave::*;

fn catalan_engine() -> Engine {
    Engine::new(SpectralCurve::catalan()).unwrap()
}

#[test]
fn s1_matches_the_cylinder_expansion() {
    let diffs = s1_cross_check(&catalan_engine(), 8).unwrap();
    assert!(diffs.iter().all(|d| d.is_zero()));
}

#[test]
fn s2_has_triple_poles_at_the_branch_points() {
    let s2 = s_coefficient(&catalan_engine(), 2, &PrimitiveChoice::Principal).unwrap();
    let r = s2.as_rational().unwrap();
    for a in [1, -1] {
        assert_eq!(r.order_at(&FieldElement::from_int(a)), -3);
    }
    assert_eq!(r.order_at_infinity(), 4);
}

#[test]
fn one_point_primitives_differ_by_a_constant() {
    let e = catalan_engine();
    let w = e.stable(1, 1).unwrap();
    let a = primitive_principal(&w).unwrap().diagonal().unwrap();
    let b = primitive_basepoint(&w, &FieldElement::zero()).unwrap().diagonal().unwrap();
    let diff = &a - &b;
    assert!(diff.is_constant() && !diff.is_zero());
    assert!(b.eval(&FieldElement::zero()).unwrap().is_zero());
}

#[test]
fn loop_functional_of_a_simple_pole() {
    let curve = SpectralCurve::catalan();
    let f = LogAugmentedFunction::from_rational(RationalFunction::power_of_linear(&FieldElement::one(), -1));
    assert_eq!(loop_functional(&curve, &f).unwrap(), FieldElement::from_int(-1));
}

#[test]
fn wave_x_expansion_low_orders() {
    let got = wave_x_expansion(&catalan_engine(), 4, 1).unwrap();
    assert_eq!(got[2], wave_x_coefficient_closed(1));
    assert_eq!(got[4], wave_x_coefficient_closed(2));
    assert!(got[1].is_zero() && got[3].is_zero());
}

#[test]
fn first_closed_coefficient() {
    let c = wave_x_coefficient_closed(1);
    assert_eq!(c.coeff(0), FieldElement::frac(1, 2));
    assert_eq!(c.coeff(-1), FieldElement::frac(-1, 2));
    // ħ⁻¹ = N < 2e kills the coefficient
    assert!(wave_x_coefficient_closed(2).eval(&FieldElement::frac(1, 3)).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn t_shift_group_law(a in -3i64..3, b in -3i64..3, d in 1i64..4) {
        let e = catalan_engine();
        let k = 2;
        let w = wave_expansion(&e, k, PrimitiveChoice::Principal).unwrap();
        let (t1, t2) = (FieldElement::frac(a, d), FieldElement::frac(b, d));
        let once = t_shift(&w, k).unwrap().at(&(&t1 + &t2));
        let twice = t_shift(&t_shift(&w, k).unwrap().at(&t1), k).unwrap().at(&t2);
        prop_assert_eq!(once.derivatives(), twice.derivatives());
    }
}
