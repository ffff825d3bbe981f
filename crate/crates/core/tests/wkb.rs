use qcurve::algebra::{FieldElement, LogAugmentedFunction, Polynomial, RationalFunction};
use qcurve::curve::SpectralCurve;
use qcurve::error::WkbError;
use qcurve::recursion::Engine;
use qcurve::wave::{wave_expansion, PrimitiveChoice, WaveExpansion};
use qcurve::wkb::*;

/// `S_k = ∫ (dS_k/dx) x′ dz`.
fn wave_from_system(sys: &WkbSystem) -> WaveExpansion {
    let xp = sys.curve.dx();
    let s = sys.ds.iter().map(|d| d.mul_rational(&xp).antiderivative().unwrap()).collect();
    WaveExpansion::from_parts(sys.curve.clone(), s)
}

#[test]
fn first_correction_on_the_catalan_curve() {
    let sys = wkb_solve(&OperatorPolynomial::catalan(), &SpectralCurve::catalan(), 1).unwrap();
    let want =
        RationalFunction::new(Polynomial::from_ints(&[0, -1]), Polynomial::from_ints(&[1, 0, -2, 0, 1])).unwrap();
    assert_eq!(sys.ds[1].as_rational().unwrap(), &want);
    assert!(sys.ledger.all_zero());
}

#[test]
fn higher_corrections_have_poles_only_at_branch_points() {
    let sys = wkb_solve(&OperatorPolynomial::catalan(), &SpectralCurve::catalan(), 4).unwrap();
    for d in &sys.ds[2..] {
        let roots = d.as_rational().unwrap().den().roots().unwrap();
        for (r, _) in roots {
            assert!(r == FieldElement::one() || r == FieldElement::from_int(-1), "pole at {r}");
        }
    }
}

#[test]
fn recursion_wave_satisfies_the_catalan_operator() {
    let e = Engine::new(SpectralCurve::catalan()).unwrap();
    let w = wave_expansion(&e, 3, PrimitiveChoice::Principal).unwrap();
    let l = verify_quantum_curve(&OperatorPolynomial::catalan(), &w, 3).unwrap();
    assert!(l.all_zero(), "{l}");
}

#[test]
fn wrong_operator_is_detected() {
    let e = Engine::new(SpectralCurve::catalan()).unwrap();
    let w = wave_expansion(&e, 2, PrimitiveChoice::Principal).unwrap();
    let op = OperatorPolynomial::from_text("hbar^0 : y^2 - x*y + 1\nhbar^1 : y\n").unwrap();
    let l = verify_quantum_curve(&op, &w, 2).unwrap();
    assert_eq!(l.first_nonzero(), Some(1));
}

#[test]
fn semiclassical_mismatch_is_an_error() {
    let op = OperatorPolynomial::from_text("hbar^0 : y^2 - x*y + 2\n").unwrap();
    assert!(matches!(wkb_solve(&op, &SpectralCurve::catalan(), 1), Err(WkbError::SemiclassicalMismatch(_))));
}

#[test]
fn catalan_round_trip() {
    let op = OperatorPolynomial::catalan();
    let sys = wkb_solve(&op, &SpectralCurve::catalan(), 3).unwrap();
    let r = reconstruct_operator(&wave_from_system(&sys), Flavour::Differential, (1, 2), 3, None).unwrap();
    assert_eq!(r.operator, op);
}

#[test]
fn power_of_x_round_trip() {
    // ψ = x^{1/ħ} on x = z, y = 1/z is killed by x ħ d/dx − 1.
    let curve = SpectralCurve::from_text("x = z\ny = 1/z\n").unwrap();
    let log_z = LogAugmentedFunction::log_term(RationalFunction::one(), RationalFunction::z()).unwrap();
    let s = vec![log_z, LogAugmentedFunction::zero(), LogAugmentedFunction::zero()];
    let w = WaveExpansion::from_parts(curve, s);
    let r = reconstruct_operator(&w, Flavour::Differential, (1, 1), 2, None).unwrap();
    assert_eq!(r.operator, OperatorPolynomial::from_text("hbar^0 : x*y - 1\n").unwrap());
}

#[test]
fn conjugation_by_a_potential() {
    // y ↦ y − x on the operator, e^{x²/2ħ} on the wave, y ↦ y + x on the curve.
    let op = conjugate_by_potential(&OperatorPolynomial::catalan(), &Polynomial::z()).unwrap();
    let curve = SpectralCurve::catalan();
    let shifted = curve.with_y(curve.y().add(&LogAugmentedFunction::from_rational(curve.x().clone()))).unwrap();
    let e = Engine::new(curve.clone()).unwrap();
    let mut w = wave_expansion(&e, 3, PrimitiveChoice::Principal).unwrap();
    let half_x2 = curve.x().pow(2).unwrap().scale(&FieldElement::frac(1, 2));
    w.s[0] = w.s[0].add(&LogAugmentedFunction::from_rational(half_x2));
    w.curve = shifted.clone();
    assert!(verify_quantum_curve(&op, &w, 3).unwrap().all_zero());
    let sys = wkb_solve(&op, &shifted, 3).unwrap();
    let base = wkb_solve(&OperatorPolynomial::catalan(), &curve, 3).unwrap();
    assert_eq!(sys.ds[1..], base.ds[1..]);
}

#[test]
fn gw_curve_through_hbar_three() {
    let one = FieldElement::one();
    let half = FieldElement::frac(1, 2);
    let e = Engine::new(SpectralCurve::gw(one.clone())).unwrap();
    assert!(difference_wkb_check(&gw_operator(&one, &half), &e, 3, &half).unwrap().all_zero());
}

#[test]
fn gw_family_and_missing_t_term() {
    let one = FieldElement::one();
    let t = FieldElement::frac(1, 3);
    let e = Engine::new(SpectralCurve::gw(one.clone())).unwrap();
    assert!(difference_wkb_check(&gw_operator(&one, &t), &e, 2, &t).unwrap().all_zero());
    let bad = difference_wkb_check(&gw_operator(&one, &FieldElement::frac(1, 2)), &e, 2, &t).unwrap();
    assert_eq!(bad.first_nonzero(), Some(1));
    assert!(difference_wkb_check(&OperatorPolynomial::catalan(), &e, 1, &t).is_err());
}

#[test]
fn operator_files() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../curves/");
    let cat = OperatorPolynomial::from_text(&std::fs::read_to_string(format!("{dir}catalan.op")).unwrap()).unwrap();
    assert_eq!(cat, OperatorPolynomial::catalan());
    let gw = OperatorPolynomial::from_text(&std::fs::read_to_string(format!("{dir}gw.op")).unwrap()).unwrap();
    assert_eq!(gw, gw_operator(&FieldElement::one(), &FieldElement::frac(1, 2)));
    assert!(OperatorPolynomial::from_text("hbar^x : y\n").is_err());
}
