use qcurve::algebra::FieldElement;
use qcurve::curve::{deck_transform, SpectralCurve};
use qcurve::oracles::{belyi_table, catalan};
use qcurve::recursion::*;

fn catalan_engine() -> Engine {
    Engine::new(SpectralCurve::catalan()).unwrap()
}

#[test]
fn disk_series_gives_catalan_numbers() {
    let e = catalan_engine();
    let t = x_expansion(&e, 0, 1, 22).unwrap();
    let disk = t.disk_series.unwrap();
    for n in 0..=10u64 {
        assert_eq!(disk[2 * n as usize], catalan(n));
        assert!(disk[2 * n as usize + 1].is_zero());
    }
}

#[test]
fn cylinder_and_pants_tables() {
    let e = catalan_engine();
    let m02 = x_expansion(&e, 0, 2, 6).unwrap();
    assert_eq!(m02.get(&[1, 1]), FieldElement::one());
    assert_eq!(m02.get(&[2, 2]), FieldElement::frac(1, 2));
    assert_eq!(m02.get(&[3, 1]), FieldElement::one());
    assert_eq!(m02.get(&[3, 3]), FieldElement::frac(4, 3));
    let m03 = x_expansion(&e, 0, 3, 6).unwrap();
    assert_eq!(m03.get(&[2, 1, 1]), FieldElement::one());
    assert_eq!(m03.get(&[1, 1, 4]), FieldElement::from_int(3));
}

#[test]
fn torus_with_one_face_matches_brute_force() {
    let e = catalan_engine();
    let m11 = x_expansion(&e, 1, 1, 8).unwrap();
    for (k, table) in [(2, belyi_table(2).unwrap()), (4, belyi_table(4).unwrap())] {
        assert_eq!(m11.get(&[2 * k]), table.get(1, &[2 * k]));
    }
    assert!(!m11.get(&[4]).is_zero());
}

#[test]
fn omega_0_3_is_the_pants_formula() {
    let w = catalan_engine().stable(0, 3).unwrap();
    assert_eq!(w.terms.len(), 2);
    assert_eq!(w.max_pole_order(), 2);
}

#[test]
fn unstable_and_invalid_indices() {
    let e = catalan_engine();
    assert!(matches!(e.omega(0, 1).unwrap(), Omega::Disk(_)));
    assert!(matches!(e.omega(0, 2).unwrap(), Omega::Cylinder));
    assert!(e.omega(0, 0).is_err());
    assert!(e.stable(0, 2).is_err());
}

#[test]
fn pole_orders_within_bound() {
    let e = catalan_engine();
    for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)] {
        let r = pole_report(&e.stable(g, n).unwrap());
        assert!(r.slot_within_bound, "({g},{n}) slot order {} > {}", r.max_slot_order, r.bound);
    }
}

#[test]
fn free_energy_genus_two() {
    assert_eq!(free_energy(&catalan_engine(), 2).unwrap(), FieldElement::frac(-1, 120));
}

#[test]
fn string_and_dilaton_low_orders() {
    let e = catalan_engine();
    for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
        assert!(check_string(&e, g, n, 0).unwrap().is_zero());
        assert!(check_string(&e, g, n, 1).unwrap().is_zero());
        assert!(check_dilaton(&e, g, n).unwrap().is_zero());
    }
    assert!(check_string(&e, 0, 3, 2).is_err());
}

#[test]
fn airy_scaling_genus_one() {
    let c = airy_leading_check(&catalan_engine(), 1).unwrap();
    assert!(c.iter().all(|c| c.matches));
    let vals: Vec<FieldElement> = c.iter().map(|c| c.coefficient.clone()).collect();
    assert!(vals.contains(&FieldElement::frac(1, 16)) && vals.contains(&FieldElement::frac(-1, 16)));
}

#[test]
fn deck_transform_is_an_involution() {
    let curve = SpectralCurve::catalan();
    for a in [1, -1] {
        let s = deck_transform(&curve, &FieldElement::from_int(a), 8).unwrap();
        assert_eq!(s.coeff(1).unwrap(), FieldElement::from_int(-1));
        let ss = s.compose(&s).unwrap();
        for k in 1..=6 {
            let want = if k == 1 { FieldElement::one() } else { FieldElement::zero() };
            assert_eq!(ss.coeff(k).unwrap(), want);
        }
    }
    assert!(deck_transform(&curve, &FieldElement::from_int(2), 4).is_err());
}

#[test]
fn shifting_y_by_x_keeps_the_invariants() {
    let curve = SpectralCurve::catalan();
    let y = curve.y().add(&qcurve::algebra::LogAugmentedFunction::from_rational(curve.x().clone()));
    let a = Engine::new(curve.clone()).unwrap();
    let b = Engine::new(curve.with_y(y).unwrap()).unwrap();
    assert_eq!(*a.stable(1, 1).unwrap(), *b.stable(1, 1).unwrap());
    assert_eq!(*a.stable(0, 4).unwrap(), *b.stable(0, 4).unwrap());
}

#[test]
fn specialised_loop_equations() {
    let e = catalan_engine();
    for (g, n) in [(0, 1), (0, 2), (0, 3), (0, 4), (1, 1), (1, 2)] {
        let r = loop_equation_check(&e, g, n, 10).unwrap();
        let bad: Vec<String> =
            r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(m, c)| format!("x^-{m}: {c}")).collect();
        assert!(bad.is_empty(), "({g},{n}): {bad:?}");
    }
}
