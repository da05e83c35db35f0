use proptest::prelude::*;
use tricover_core::construct::Genus3Cover;
use tricover_core::ff::make_field;
use tricover_core::legendre::{case1_lambda, lambda_of_four, legendre_equivalent, Mobius, ProjPoint};
use tricover_core::zeta::count_cover;
use tricover_core::{Fel, FieldDesc, Poly};

const FIELDS: [(u64, usize); 5] = [(3, 2), (5, 1), (7, 2), (11, 1), (13, 1)];

fn elem(k: &FieldDesc, i: u64) -> Fel {
    k.element_at(i % k.order())
}

proptest! {
    #[test]
    fn field_identities(f in 0usize..FIELDS.len(), a in any::<u64>(), b in any::<u64>()) {
        let (p, n) = FIELDS[f];
        let k = make_field(p, n).unwrap();
        let (u, v) = (elem(&k, a), elem(&k, b));
        prop_assert_eq!(k.pow(&k.add(&u, &v), p), k.add(&k.pow(&u, p), &k.pow(&v, p)));
        if !u.is_zero() {
            prop_assert_eq!(k.mul(&u, &k.inv(&u).unwrap()), k.one());
            prop_assert_eq!(k.pow(&u, k.order() - 1), k.one());
        }
        if !u.is_zero() && !v.is_zero() {
            prop_assert_eq!(k.qchar(&k.mul(&u, &v)), k.qchar(&u) * k.qchar(&v));
        }
    }

    /// Transporting four points by a Möbius map keeps the Legendre class.
    #[test]
    fn lambda_is_pgl_invariant(f in 0usize..FIELDS.len(), pts in proptest::array::uniform4(any::<u64>()),
                               m in proptest::array::uniform4(any::<u64>())) {
        let (p, n) = FIELDS[f];
        let k = make_field(p, n).unwrap();
        let four: Vec<ProjPoint> = pts.iter().map(|&i| ProjPoint::Finite(elem(&k, i))).collect();
        let distinct = (0..4).all(|i| (0..i).all(|j| four[i] != four[j]));
        prop_assume!(distinct);
        let Ok(sigma) = Mobius::new(&k, elem(&k, m[0]), elem(&k, m[1]), elem(&k, m[2]), elem(&k, m[3])) else {
            return Ok(());
        };
        let moved: Vec<ProjPoint> = four.iter().map(|x| sigma.apply(&k, x)).collect();
        let l = lambda_of_four(&k, &[four[0], four[1], four[2], four[3]]).unwrap();
        let lm = lambda_of_four(&k, &[moved[0], moved[1], moved[2], moved[3]]).unwrap();
        prop_assert!(legendre_equivalent(&k, &l, &lm).unwrap());
        prop_assert_eq!(l, lm);
        let back = Mobius::from_triple(&k, &[four[0], four[1], four[2]], &[moved[0], moved[1], moved[2]]).unwrap();
        prop_assert_eq!(back, sigma);
    }

    /// The weak-case coefficient is the Legendre coefficient of the inverted
    /// points `1/(p_i - p3)`.
    #[test]
    fn case1_matches_inverted_points(f in 0usize..FIELDS.len(), pts in proptest::array::uniform4(any::<u64>())) {
        let (p, n) = FIELDS[f];
        let k = make_field(p, n).unwrap();
        let x: Vec<Fel> = pts.iter().map(|&i| elem(&k, i)).collect();
        let distinct = (0..4).all(|i| (0..i).all(|j| x[i] != x[j]));
        prop_assume!(distinct);
        let ratio = |a: &Fel, b: &Fel, c: &Fel| k.div(&k.sub(a, c), &k.sub(b, c)).unwrap();
        let l1 = ratio(&x[2], &x[1], &x[0]);
        let l2 = ratio(&x[3], &x[1], &x[0]);
        let inv = |i: usize| k.inv(&k.sub(&x[i], &x[2])).unwrap();
        let sigma = ratio(&inv(3), &inv(1), &inv(0));
        prop_assert_eq!(case1_lambda(&k, &l1, &l2).unwrap(), sigma);
    }
}

#[test]
fn cover_counts_are_pgl_invariant() {
    // Moving all five branch points of the worked q = 13 cover by x -> 1/(x - 5)
    // yields an isomorphic cover over F_13, so the counts agree.
    let k = make_field(13, 1).unwrap();
    let roots = [[0, 1, 12], [0, 1, 3], [0, 12, 3]];
    let polys = roots.map(|r| Poly::from_roots(&k, &r.map(|v| k.from_int(v))));
    let orig = Genus3Cover::new(k.clone(), polys).unwrap();
    let sigma = Mobius::new(&k, Fel::ZERO, k.one(), k.one(), k.from_int(-5)).unwrap();
    // Substituting x = (5u + 1)/u into y^2 = f(x) and clearing u^4 gives
    // y^2 = c * prod(u - sigma(r)) * (u - sigma(inf)) with c = prod(5 - r).
    let moved = roots.map(|r| {
        let mut pts: Vec<Fel> = r
            .iter()
            .map(|&v| *sigma.apply(&k, &ProjPoint::Finite(k.from_int(v))).finite().unwrap())
            .collect();
        pts.push(*sigma.apply(&k, &ProjPoint::Infinity).finite().unwrap());
        let c = r.iter().fold(k.one(), |acc, &v| k.mul(&acc, &k.from_int(5 - v)));
        Poly::from_roots(&k, &pts).scale(&k, &c)
    });
    let trans = Genus3Cover::new(k.clone(), moved).unwrap();
    for deg in 1..=4 {
        assert_eq!(count_cover(&orig, deg).unwrap(), count_cover(&trans, deg).unwrap(), "k = {deg}");
    }
}
