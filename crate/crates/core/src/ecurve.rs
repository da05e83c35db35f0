//! Genus-1 double covers `y^2 = f(x)` of the projective line, their point
//! counts and Frobenius traces, and the classification of realizable traces.
//!
//! Traces follow the convention `#E(F_q) = q + 1 + t`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{embedding, make_field, prime_power, Fel, Field, Poly};
use crate::kernel::{SquareTable, Walker};

/// A squarefree cubic or quartic `f` over `F_q` defining `y^2 = f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticModel {
    base: Field,
    f: Poly,
}

impl EllipticModel {
    pub fn new(base: Field, f: Poly) -> Result<EllipticModel> {
        match f.degree() {
            Some(3) | Some(4) => {}
            d => {
                return Err(Error::InvalidModel(format!(
                    "degree {d:?}, expected 3 or 4"
                )))
            }
        }
        let g = Poly::gcd(&base, &f, &f.derivative(&base))?;
        if g.degree() != Some(0) {
            return Err(Error::InvalidModel("polynomial is not squarefree".into()));
        }
        Ok(EllipticModel { base, f })
    }

    /// `y^2 = x(x-1)(x-lambda)`.
    pub fn legendre(base: Field, lambda: &Fel) -> Result<EllipticModel> {
        let f = Poly::from_roots(&base, &[Fel::ZERO, base.one(), *lambda]);
        EllipticModel::new(base, f)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("validated nonzero")
    }

    pub fn lead(&self) -> Fel {
        *self.f.lead().expect("validated nonzero")
    }

    pub fn q(&self) -> u64 {
        self.base.order()
    }

    /// The model `y^2 = d f(x)`.
    pub fn scaled(&self, d: &Fel) -> Result<EllipticModel> {
        EllipticModel::new(self.base.clone(), self.f.scale(&self.base, d))
    }

    /// Quadratic twist by the least non-square of `F_q`.
    pub fn quadratic_twist(&self) -> EllipticModel {
        let d = self.base.least_nonsquare();
        self.scaled(&d).expect("scaling by a unit keeps the model valid")
    }

    /// j-invariant from the Weierstrass coefficients of a cubic model.
    pub fn weierstrass_j(&self) -> Option<Fel> {
        (self.degree() == 3).then(|| cubic_j(&self.base, &self.f))
    }
}

/// j-invariant of `y^2 = f(x)` for a squarefree cubic `f` over `k`.
pub(crate) fn cubic_j(k: &crate::ff::FieldDesc, f: &Poly) -> Fel {
    // y^2 = l(x^3 + A x^2 + B x + C) is isomorphic to y^2 = x^3 + lA x^2 + l^2 B x + l^3 C.
    let l = *f.lead().expect("cubic");
    let li = k.inv(&l).expect("nonzero lead");
    let a = k.mul(&f.coeff(2), &li);
    let b = k.mul(&f.coeff(1), &li);
    let c = k.mul(&f.coeff(0), &li);
    let a2 = k.mul(&l, &a);
    let a4 = k.mul(&k.square(&l), &b);
    let a6 = k.mul(&k.pow(&l, 3), &c);
    let n = |v: i64| k.from_int(v);
    let b2 = k.mul(&n(4), &a2);
    let b4 = k.mul(&n(2), &a4);
    let b6 = k.mul(&n(4), &a6);
    let b8 = k.sub(&k.mul(&n(4), &k.mul(&a2, &a6)), &k.square(&a4));
    let c4 = k.sub(&k.square(&b2), &k.mul(&n(24), &b4));
    let disc = {
        let t1 = k.neg(&k.mul(&k.square(&b2), &b8));
        let t2 = k.mul(&n(8), &k.pow(&b4, 3));
        let t3 = k.mul(&n(27), &k.square(&b6));
        let t4 = k.mul(&n(9), &k.mul(&b2, &k.mul(&b4, &b6)));
        k.add(&k.sub(&k.sub(&t1, &t2), &t3), &t4)
    };
    k.div(&k.pow(&c4, 3), &disc).expect("squarefree cubic has nonzero discriminant")
}

/// Frobenius trace `t` with the Hasse bound `t^2 <= 4q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceParam(i64);

impl TraceParam {
    pub fn new(q: u64, t: i64) -> Result<TraceParam> {
        if (t as i128) * (t as i128) > 4 * q as i128 {
            return Err(Error::Inadmissible {
                q,
                t,
                reason: format!("Hasse bound: {t}^2 > 4*{q}"),
            });
        }
        Ok(TraceParam(t))
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

/// An `F_q`-class of elliptic curves as seen by the construction: curves
/// sharing `(j, t)` and the number of rational 2-torsion points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    pub j: Fel,
    pub t: TraceParam,
    pub two_torsion: u8,
    pub representative: EllipticModel,
}

/// `#` of points of the smooth model of `y^2 = f(x)` over `F_{q^k}`.
pub fn count_points(m: &EllipticModel, k: usize) -> Result<u64> {
    if !(1..=6).contains(&k) {
        return Err(Error::Precondition(format!("extension degree {k} not in 1..=6")));
    }
    let base = m.base();
    let ext = make_field(base.p(), base.degree() * k)?;
    let squares = SquareTable::for_field(&ext)?;
    let emb = embedding(base, &ext)?;
    let f = m.poly().map(|c| emb.apply(c));
    let affine = Walker::new(&ext, std::slice::from_ref(&f))
        .sum(|_, v| 1 + squares.qchar(&v[0]) as i64);
    let at_infinity = if m.degree() == 3 {
        1
    } else {
        1 + squares.qchar(&emb.apply(&m.lead())) as i64
    };
    Ok((affine + at_infinity) as u64)
}

pub fn trace(m: &EllipticModel) -> Result<TraceParam> {
    let n = count_points(m, 1)? as i64;
    TraceParam::new(m.q(), n - (m.q() as i64 + 1))
}

/// `|E(F_q) ∩ E[2]|` for a cubic model: the identity plus the rational roots.
pub fn two_torsion_rational(m: &EllipticModel) -> Result<u8> {
    if m.degree() != 3 {
        return Err(Error::InvalidModel(
            "2-torsion count needs a cubic model".into(),
        ));
    }
    Ok(1 + m.poly().roots_in(m.base())?.len() as u8)
}

/// A clause of the trace classification for elliptic curves over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WaterhouseClause {
    /// `gcd(p, t) = 1`.
    Coprime,
    /// `r` even, `t = ±2√q`.
    TwiceRoot,
    /// `r` even, `p ≢ 1 mod 3`, `t = ±√q`.
    Root,
    /// `r` odd, `p ∈ {2, 3}`, `t = ±√(pq)`.
    RootPq,
    /// `r` odd, `t = 0`.
    ZeroOddDegree,
    /// `r` even, `p ≢ 1 mod 4`, `t = 0`.
    ZeroEvenDegree,
}

impl WaterhouseClause {
    pub fn label(self) -> &'static str {
        match self {
            WaterhouseClause::Coprime => "i",
            WaterhouseClause::TwiceRoot => "ii",
            WaterhouseClause::Root => "iii",
            WaterhouseClause::RootPq => "iv",
            WaterhouseClause::ZeroOddDegree => "v",
            WaterhouseClause::ZeroEvenDegree => "vi",
        }
    }
}

fn exact_sqrt(v: u64) -> Option<u64> {
    let r = (v as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == v)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Every clause satisfied by `t` over `F_q` (empty when `t` is not realizable).
pub fn waterhouse_clauses(q: u64, t: i64) -> Vec<WaterhouseClause> {
    let Some((p, r)) = prime_power(q) else {
        return Vec::new();
    };
    if (t as i128) * (t as i128) > 4 * q as i128 {
        return Vec::new();
    }
    let a = t.unsigned_abs();
    let even = r % 2 == 0;
    let root = exact_sqrt(q);
    let mut out = Vec::new();
    if gcd(p, a) == 1 {
        out.push(WaterhouseClause::Coprime);
    }
    if even && root.is_some_and(|s| a == 2 * s) {
        out.push(WaterhouseClause::TwiceRoot);
    }
    if even && p % 3 != 1 && root.is_some_and(|s| a == s) {
        out.push(WaterhouseClause::Root);
    }
    if !even && (p == 2 || p == 3) && exact_sqrt(p * q).is_some_and(|s| a == s) {
        out.push(WaterhouseClause::RootPq);
    }
    if !even && t == 0 {
        out.push(WaterhouseClause::ZeroOddDegree);
    }
    if even && p % 4 != 1 && t == 0 {
        out.push(WaterhouseClause::ZeroEvenDegree);
    }
    out
}

/// Whether some elliptic curve over `F_q` has `q + 1 + t` points.
pub fn waterhouse_admissible(q: u64, t: i64) -> bool {
    !waterhouse_clauses(q, t).is_empty()
}

/// Upper bound on `(number of models) * q` for [`enumerate_classes`].
pub const ENUMERATION_WORK_CAP: u64 = 200_000_000;

/// All classes `(j, t, 2-torsion)` of elliptic curves over `F_q`, sorted by
/// `(t, 2-torsion, j)`. Representatives are the first model met in the scan
/// over monic cubics (each followed by its twist by the least non-square).
///
/// For `p != 3` the scan is restricted to depressed cubics `x^3 + bx + c`,
/// which reach every class by translation.
pub fn enumerate_classes(q: u64) -> Result<Vec<CurveClass>> {
    let base = crate::ff::field_of_order(q)?;
    let depressed = base.p() != 3;
    let models = if depressed { q * q } else { q * q * q };
    if models.saturating_mul(q) > ENUMERATION_WORK_CAP {
        return Err(Error::EnumerationCapExceeded {
            q,
            cap: ENUMERATION_WORK_CAP,
        });
    }
    let elems: Vec<Fel> = base.elements().collect();
    let squares = SquareTable::for_field(&base)?;
    let twist = base.least_nonsquare();

    let found: Vec<(usize, CurveClass)> = (0..models as usize)
        .into_par_iter()
        .flat_map_iter(|idx| {
            let (a, b, c) = if depressed {
                (Fel::ZERO, elems[idx / q as usize], elems[idx % q as usize])
            } else {
                let qq = q as usize;
                (elems[idx / (qq * qq)], elems[idx / qq % qq], elems[idx % qq])
            };
            let f = Poly::new(vec![c, b, a, base.one()]);
            let Ok(m) = EllipticModel::new(base.clone(), f) else {
                return Vec::new().into_iter();
            };
            let mut sum = 0i64;
            let mut roots = 0u8;
            for x in &elems {
                let v = m.poly().eval(&base, x);
                if v.is_zero() {
                    roots += 1;
                } else {
                    sum += squares.qchar(&v) as i64;
                }
            }
            let j = m.weierstrass_j().expect("cubic");
            let tw = m.scaled(&twist).expect("unit scaling");
            let class = |t: i64, model: EllipticModel| CurveClass {
                j,
                t: TraceParam::new(q, t).expect("Hasse bound holds for curves"),
                two_torsion: 1 + roots,
                representative: model,
            };
            vec![(2 * idx, class(sum, m)), (2 * idx + 1, class(-sum, tw))].into_iter()
        })
        .collect();

    let mut classes: BTreeMap<(i64, u8, Fel), (usize, CurveClass)> = BTreeMap::new();
    for (order, class) in found {
        let key = (class.t.value(), class.two_torsion, class.j);
        match classes.get(&key) {
            Some((prev, _)) if *prev <= order => {}
            _ => {
                classes.insert(key, (order, class));
            }
        }
    }
    Ok(classes.into_values().map(|(_, c)| c).collect())
}

/// `s_k = α^k + ᾱ^k` for the roots of `T^2 + tT + q`, so that
/// `#E(F_{q^k}) = q^k + 1 - s_k`.
pub fn trace_power_sum(t: i64, q: u64, k: usize) -> BigInt {
    let t = BigInt::from(t);
    let q = BigInt::from(q);
    let mut prev = BigInt::from(2);
    if k == 0 {
        return prev;
    }
    let mut cur = -t.clone();
    for _ in 1..k {
        let next = -&t * &cur - &q * &prev;
        prev = cur;
        cur = next;
    }
    cur
}
