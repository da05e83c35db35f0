use std::collections::BTreeSet;

use num_bigint::BigInt;
use tricover_core::ecurve::{
    count_points, enumerate_classes, trace, trace_power_sum, two_torsion_rational, waterhouse_admissible,
    EllipticModel,
};
use tricover_core::ff::field_of_order;
use tricover_core::{Fel, Poly};

/// Every squarefree monic cubic over F_q, plus its twist by the least non-square.
fn all_models(q: u64) -> Vec<EllipticModel> {
    let k = field_of_order(q).unwrap();
    let el: Vec<Fel> = k.elements().collect();
    let d = k.least_nonsquare();
    let mut out = Vec::new();
    for a in &el {
        for b in &el {
            for c in &el {
                if let Ok(m) = EllipticModel::new(k.clone(), Poly::new(vec![*c, *b, *a, k.one()])) {
                    out.push(m.scaled(&d).unwrap());
                    out.push(m);
                }
            }
        }
    }
    out
}

#[test]
fn realized_traces_match_the_classification() {
    for q in [7u64, 9, 11, 13, 25, 27] {
        let realized: BTreeSet<i64> = enumerate_classes(q).unwrap().iter().map(|c| c.t.value()).collect();
        let bound = (2.0 * (q as f64).sqrt()) as i64 + 1;
        let admissible: BTreeSet<i64> = (-bound..=bound).filter(|&t| waterhouse_admissible(q, t)).collect();
        assert_eq!(realized, admissible, "q = {q}");
    }
}

#[test]
fn weil_hasse_and_two_torsion_on_every_model() {
    for q in [7u64, 9, 11] {
        for m in all_models(q) {
            let t = trace(&m).unwrap().value();
            assert!(t * t <= 4 * q as i64);
            for k in 1..=3 {
                let n = BigInt::from(count_points(&m, k).unwrap());
                assert_eq!(n, BigInt::from(q.pow(k as u32) + 1) - trace_power_sum(t, q, k));
            }
            let n1 = (q as i64 + 1 + t) as u64;
            match two_torsion_rational(&m).unwrap() {
                4 => assert_eq!(n1 % 4, 0),
                2 => assert_eq!(n1 % 2, 0),
                _ => assert_eq!(n1 % 2, 1),
            }
            assert_eq!(trace(&m.quadratic_twist()).unwrap().value(), -t);
        }
    }
}

#[test]
fn classes_cover_every_model() {
    // The restricted scan behind enumerate_classes must reach each (j, t, 2-torsion).
    for q in [7u64, 11, 13] {
        let classes: BTreeSet<(i64, u8, Fel)> = enumerate_classes(q)
            .unwrap()
            .iter()
            .map(|c| (c.t.value(), c.two_torsion, c.j))
            .collect();
        let seen: BTreeSet<(i64, u8, Fel)> = all_models(q)
            .iter()
            .map(|m| (trace(m).unwrap().value(), two_torsion_rational(m).unwrap(), m.weierstrass_j().unwrap()))
            .collect();
        assert_eq!(classes, seen, "q = {q}");
    }
}

#[test]
fn full_two_torsion_classes_at_13() {
    use tricover_core::legendre::{orbit, ram_set};
    let orbits: BTreeSet<Vec<Fel>> = enumerate_classes(13)
        .unwrap()
        .iter()
        .filter(|c| c.two_torsion == 4)
        .map(|c| {
            let rs = ram_set(&c.representative).unwrap();
            let t = rs.tower().clone();
            orbit(t.base(), &t.lower(&rs.lambda()).unwrap()).unwrap()
        })
        .collect();
    let k = field_of_order(13).unwrap();
    let expect: BTreeSet<Vec<Fel>> = [vec![2, 7, 12], vec![4, 10], vec![3, 5, 6, 8, 9, 11]]
        .into_iter()
        .map(|o| o.into_iter().map(|v| k.from_int(v)).collect())
        .collect();
    assert_eq!(orbits, expect);
    // Each orbit shows up with both signs of its trace.
    let traces: Vec<i64> = enumerate_classes(13)
        .unwrap()
        .iter()
        .filter(|c| c.two_torsion == 4)
        .map(|c| c.t.value())
        .collect();
    assert_eq!(traces.len(), 6);
    assert_eq!(traces.iter().sum::<i64>(), 0);
}
