use quatlat::linalg::{frac, int, rat};
use quatlat::quat::*;

fn order(name: &str) -> Order {
    preset(name).unwrap().order
}

#[test]
fn unit_counts_follow_the_mass_formula() {
    for (name, units) in [("hurwitz", 24), ("d3", 12), ("d5", 6), ("d7", 4), ("d13", 2)] {
        let o = order(name);
        let u = unit_group(&o).unwrap();
        assert_eq!(u.len(), units, "{name}");
        // 1/|O^×| = (p-1)/24
        assert_eq!(24 / (o.discriminant() as usize - 1), units);
        for x in &u {
            assert!(u.contains(&o.algebra.inverse(x).unwrap()));
            for y in &u {
                assert!(u.contains(&o.mul(x, y)));
            }
        }
    }
    let d13 = order("d13");
    assert_eq!(unit_group(&d13).unwrap(), vec![QuatElement::from_i64([-1, 0, 0, 0]), QuatElement::one()]);
}

#[test]
fn d13_has_56_elements_of_norm_12() {
    let o = order("d13");
    let els = enumerate_by_norm(&o, 12, false).unwrap();
    assert_eq!(els.len(), 56);
    let p = preset("d13").unwrap();
    for l in p.lambdas.values() {
        assert!(els.contains(l));
    }
}

#[test]
fn second_d11_order_contains_six_units() {
    let o = order("d11-b");
    let alg = &o.algebra;
    let t = QuatElement([frac(-1, 2), frac(1, 4), rat(0), frac(1, 4)]);
    let t2 = alg.mul(&t, &t);
    let u = unit_group(&o).unwrap();
    for x in [QuatElement::one(), t.clone(), t2.clone()] {
        assert!(u.contains(&x) && u.contains(&-&x));
    }
    assert!(u.len() >= 6);
    assert!(!o.same_lattice(&order("d11-a")));
}

#[test]
fn pi_lambda_for_small_discriminants() {
    let cases = [
        ("hurwitz", [1, 1, 0, 0], QuatElement::one()),
        ("d3", [0, 0, 1, 0], QuatElement::from_i64([1, 1, 0, 0])),
        ("d5", [0, 0, 1, 0], QuatElement::from_i64([2, 0, 0, 0])),
        ("d7", [0, 0, 1, 0], QuatElement::from_frac([4, 1, 0, 1], 2)),
    ];
    for (name, pi, lambda) in cases {
        let o = order(name);
        let (p, l) = find_pi_lambda(&o).unwrap();
        assert_eq!(p, QuatElement::from_i64(pi), "{name}");
        assert_eq!(l, lambda, "{name}");
        assert_eq!(o.norm(&p), rat(o.discriminant() as i64));
        assert_eq!(o.norm(&l), rat(o.discriminant() as i64 - 1));
    }
}

#[test]
fn differents_of_the_presets() {
    for p in all_presets().unwrap() {
        let o = &p.order;
        let d = o.discriminant();
        let m = different(o).unwrap();
        assert_eq!(m.index(), int((d * d) as i64));
        assert!(m.is_two_sided());
        for x in m.elements() {
            assert!((o.norm(&x) / rat(d as i64)).is_integer());
        }
        // the witness path and the norm-D path agree
        let w = principal_different_witness(o).unwrap();
        let by_norm = enumerate_by_norm(o, d, false).unwrap();
        assert_eq!(w.is_some(), !enumerate_by_norm(o, d, true).unwrap().is_empty());
        if d > 3 {
            assert!(by_norm.iter().all(|x| x.trace() == rat(0)), "{}", p.name);
        }
        assert!(w.is_some(), "{}", p.name);
    }
    for name in ["d11-a", "d11-b"] {
        let o = order(name);
        let w = principal_different_witness(&o).unwrap().unwrap();
        let j = QuatElement::basis(2);
        assert!(o.contains(&j));
        assert_eq!(Sublattice::right_ideal(&o, &j).unwrap(), different(&o).unwrap());
        assert_eq!(o.mul(&w, &w), QuatElement::scalar(rat(-11)));
    }
}

#[test]
fn hilbert_symbols_for_d11() {
    assert_eq!(hilbert_symbol(&rat(-1), &rat(-11), Place::Finite(11)), -1);
    assert_eq!(hilbert_symbol(&rat(-1), &rat(-11), Place::Finite(2)), 1);
    let alg = QuaternionAlgebra::from_i64(-1, -11).unwrap();
    assert_eq!(alg.trace_norm(&QuatElement::basis(2)), (rat(0), rat(11)));
}
