//! Legendre coefficients, their six-element orbits, j-invariants, ramification
//! sets on the projective line and the Möbius action used to move them.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::ecurve::{cubic_j, two_torsion_rational, EllipticModel};
use crate::error::{Error, Result};
use crate::ff::{embedding, make_field, Embedding, Fel, Field, FieldDesc, Poly};

/// `F_q` together with its quadratic extension, where all ramification
/// points handled here live.
#[derive(Clone, Debug)]
pub struct Tower {
    base: Field,
    ext: Field,
    emb: Arc<Embedding>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Tower) -> bool {
        self.base == other.base
    }
}

impl Eq for Tower {}

impl Tower {
    pub fn new(base: &Field) -> Result<Tower> {
        let ext = make_field(base.p(), 2 * base.degree())?;
        let emb = embedding(base, &ext)?;
        Ok(Tower {
            base: base.clone(),
            ext,
            emb,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn q(&self) -> u64 {
        self.base.order()
    }

    pub fn lift(&self, u: &Fel) -> Fel {
        self.emb.apply(u)
    }

    pub fn lower(&self, u: &Fel) -> Result<Fel> {
        self.emb.preimage(u)
    }

    pub fn conj(&self, u: &Fel) -> Fel {
        self.ext.frobenius(u, self.q())
    }

    pub fn is_rational(&self, u: &Fel) -> bool {
        self.conj(u) == *u
    }

    /// Lifts a polynomial over `F_q` to `F_{q^2}`.
    pub fn lift_poly(&self, f: &Poly) -> Poly {
        f.map(|c| self.lift(c))
    }

    pub fn lower_poly(&self, f: &Poly) -> Result<Poly> {
        f.try_map(|c| self.lower(c))
    }
}

/// A point of the projective line in the canonical form `[a : 1]` or `[1 : 0]`.
///
/// Infinity sorts first; finite points follow the field enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Infinity,
    Finite(Fel),
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &ProjPoint) -> Ordering {
        match (self, other) {
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ordering::Equal,
            (ProjPoint::Infinity, _) => Ordering::Less,
            (_, ProjPoint::Infinity) => Ordering::Greater,
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &ProjPoint) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ProjPoint {
    fn coords(&self, k: &FieldDesc) -> (Fel, Fel) {
        match self {
            ProjPoint::Infinity => (k.one(), Fel::ZERO),
            ProjPoint::Finite(a) => (*a, k.one()),
        }
    }

    fn from_coords(k: &FieldDesc, x: &Fel, y: &Fel) -> ProjPoint {
        match k.inv(y) {
            None => ProjPoint::Infinity,
            Some(yi) => ProjPoint::Finite(k.mul(x, &yi)),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&Fel> {
        match self {
            ProjPoint::Infinity => None,
            ProjPoint::Finite(a) => Some(a),
        }
    }

    pub fn conj(&self, tower: &Tower) -> ProjPoint {
        match self {
            ProjPoint::Infinity => ProjPoint::Infinity,
            ProjPoint::Finite(a) => ProjPoint::Finite(tower.conj(a)),
        }
    }

    pub fn is_rational(&self, tower: &Tower) -> bool {
        self.conj(tower) == *self
    }
}

/// An element of `PGL(2)` acting by `x -> (a x + b) / (c x + d)`, scaled so
/// that its first nonzero entry is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mobius {
    m: [Fel; 4],
}

impl Mobius {
    pub fn new(k: &FieldDesc, a: Fel, b: Fel, c: Fel, d: Fel) -> Result<Mobius> {
        let det = k.sub(&k.mul(&a, &d), &k.mul(&b, &c));
        if det.is_zero() {
            return Err(Error::Precondition("singular matrix".into()));
        }
        let m = [a, b, c, d];
        let first = m.iter().find(|e| !e.is_zero()).expect("nonzero determinant");
        let s = k.inv(first).expect("nonzero");
        Ok(Mobius {
            m: m.map(|e| k.mul(&e, &s)),
        })
    }

    pub fn identity(k: &FieldDesc) -> Mobius {
        Mobius {
            m: [k.one(), Fel::ZERO, Fel::ZERO, k.one()],
        }
    }

    /// Entries `[a, b, c, d]`.
    pub fn entries(&self) -> &[Fel; 4] {
        &self.m
    }

    pub fn apply(&self, k: &FieldDesc, pt: &ProjPoint) -> ProjPoint {
        let (x, y) = pt.coords(k);
        let [a, b, c, d] = &self.m;
        let nx = k.add(&k.mul(a, &x), &k.mul(b, &y));
        let ny = k.add(&k.mul(c, &x), &k.mul(d, &y));
        ProjPoint::from_coords(k, &nx, &ny)
    }

    pub fn compose(&self, k: &FieldDesc, inner: &Mobius) -> Mobius {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &inner.m;
        let dot = |x: &Fel, y: &Fel, z: &Fel, w: &Fel| k.add(&k.mul(x, y), &k.mul(z, w));
        Mobius::new(
            k,
            dot(a, e, b, g),
            dot(a, f, b, h),
            dot(c, e, d, g),
            dot(c, f, d, h),
        )
        .expect("product of invertible matrices")
    }

    pub fn inverse(&self, k: &FieldDesc) -> Mobius {
        let [a, b, c, d] = &self.m;
        Mobius::new(k, *d, k.neg(b), k.neg(c), *a).expect("invertible")
    }

    /// The map sending `(0, 1, ∞)` to `pts` in order.
    fn from_standard(k: &FieldDesc, pts: &[ProjPoint; 3]) -> Result<Mobius> {
        let (x0, y0) = pts[0].coords(k);
        let (x1, y1) = pts[1].coords(k);
        let (x2, y2) = pts[2].coords(k);
        // Solve alpha*v0 + beta*v2 = v1 by Cramer's rule.
        let det = k.sub(&k.mul(&x0, &y2), &k.mul(&x2, &y0));
        if det.is_zero() {
            return Err(Error::CoincidentPoints);
        }
        let alpha = k.div(&k.sub(&k.mul(&x1, &y2), &k.mul(&x2, &y1)), &det)?;
        let beta = k.div(&k.sub(&k.mul(&x0, &y1), &k.mul(&x1, &y0)), &det)?;
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::CoincidentPoints);
        }
        // Columns beta*v2 (image of ∞) and alpha*v0 (image of 0).
        Mobius::new(
            k,
            k.mul(&beta, &x2),
            k.mul(&alpha, &x0),
            k.mul(&beta, &y2),
            k.mul(&alpha, &y0),
        )
    }

    /// The unique map carrying `src` to `dst` in order.
    pub fn from_triple(k: &FieldDesc, src: &[ProjPoint; 3], dst: &[ProjPoint; 3]) -> Result<Mobius> {
        let s = Mobius::from_standard(k, src)?;
        let d = Mobius::from_standard(k, dst)?;
        Ok(d.compose(k, &s.inverse(k)))
    }
}

pub fn mobius_apply(k: &FieldDesc, sigma: &Mobius, pt: &ProjPoint) -> ProjPoint {
    sigma.apply(k, pt)
}

pub fn mobius_from_triple(k: &FieldDesc, src: &[ProjPoint; 3], dst: &[ProjPoint; 3]) -> Result<Mobius> {
    Mobius::from_triple(k, src, dst)
}

/// `λ = (p3 - p1) / (p2 - p1)` for finite points, the fourth point being ∞.
pub fn lambda_from_points(k: &FieldDesc, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<Fel> {
    let (Some(a), Some(b), Some(c)) = (p1.finite(), p2.finite(), p3.finite()) else {
        return Err(Error::Precondition("points must be finite".into()));
    };
    if a == b || a == c || b == c {
        return Err(Error::CoincidentPoints);
    }
    k.div(&k.sub(c, a), &k.sub(b, a))
}

/// The Legendre coefficient of four distinct points: the image of `pts[2]`
/// under the map sending `pts[0], pts[1], pts[3]` to `0, 1, ∞`.
pub fn lambda_of_four(k: &FieldDesc, pts: &[ProjPoint; 4]) -> Result<Fel> {
    let sigma = Mobius::from_triple(
        k,
        &[pts[0], pts[1], pts[3]],
        &[ProjPoint::Finite(Fel::ZERO), ProjPoint::Finite(k.one()), ProjPoint::Infinity],
    )?;
    match sigma.apply(k, &pts[2]) {
        ProjPoint::Finite(l) if !l.is_zero() && l != k.one() => Ok(l),
        _ => Err(Error::CoincidentPoints),
    }
}

fn check_lambda(k: &FieldDesc, l: &Fel) -> Result<()> {
    if l.is_zero() || *l == k.one() {
        return Err(Error::DegenerateLambda);
    }
    Ok(())
}

/// `{λ, 1-λ, 1/λ, 1/(1-λ), (λ-1)/λ, λ/(λ-1)}`, sorted and deduplicated.
pub fn orbit(k: &FieldDesc, l: &Fel) -> Result<Vec<Fel>> {
    check_lambda(k, l)?;
    let one = k.one();
    let oml = k.sub(&one, l);
    let li = k.inv(l).expect("nonzero");
    let omli = k.inv(&oml).expect("nonzero");
    let lm1 = k.neg(&oml);
    let mut out = vec![
        *l,
        oml,
        li,
        omli,
        k.mul(&lm1, &li),
        k.neg(&k.mul(l, &omli)),
    ];
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn legendre_equivalent(k: &FieldDesc, l1: &Fel, l2: &Fel) -> Result<bool> {
    check_lambda(k, l2)?;
    Ok(orbit(k, l1)?.contains(l2))
}

/// `j = 2^8 (λ^2 - λ + 1)^3 / (λ^2 (λ - 1)^2)`.
pub fn j_invariant(k: &FieldDesc, l: &Fel) -> Result<Fel> {
    check_lambda(k, l)?;
    let one = k.one();
    let num = k.add(&k.sub(&k.square(l), l), &one);
    let den = k.square(&k.mul(l, &k.sub(l, &one)));
    k.div(&k.mul(&k.from_int(256), &k.pow(&num, 3)), &den)
}

/// `λ2 (1 - λ1) / (λ2 - λ1)`.
pub fn case1_lambda(k: &FieldDesc, l1: &Fel, l2: &Fel) -> Result<Fel> {
    check_lambda(k, l1)?;
    check_lambda(k, l2)?;
    if l1 == l2 {
        return Err(Error::Precondition("equal Legendre coefficients".into()));
    }
    k.div(&k.mul(l2, &k.sub(&k.one(), l1)), &k.sub(l2, l1))
}

/// `λ2 / λ1`.
pub fn case2_lambda(k: &FieldDesc, l1: &Fel, l2: &Fel) -> Result<Fel> {
    if l1.is_zero() {
        return Err(Error::DegenerateLambda);
    }
    if l1 == l2 {
        return Err(Error::Precondition("equal Legendre coefficients".into()));
    }
    k.div(l2, l1)
}

/// Whether a Legendre coefficient in `F_{q^2}` satisfies `μ + μ^q = 1`, i.e.
/// it comes from a ramification set with a conjugate pair sent to `0, 1`
/// and both remaining points rational.
pub fn conjugate_pair_lambda(tower: &Tower, mu: &Fel) -> bool {
    let e = tower.ext();
    e.add(mu, &tower.conj(mu)) == e.one()
}

/// Four distinct ramification points over `F_{q^2}`, permuted by Frobenius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamSet {
    tower: Tower,
    pts: [ProjPoint; 4],
}

impl RamSet {
    pub fn new(tower: &Tower, pts: &[ProjPoint]) -> Result<RamSet> {
        let mut v = pts.to_vec();
        v.sort();
        v.dedup();
        if v.len() != 4 || pts.len() != 4 {
            return Err(Error::CoincidentPoints);
        }
        if v.iter().any(|pt| v.binary_search(&pt.conj(tower)).is_err()) {
            return Err(Error::Precondition("point set is not Frobenius-stable".into()));
        }
        Ok(RamSet {
            tower: tower.clone(),
            pts: [v[0], v[1], v[2], v[3]],
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn points(&self) -> &[ProjPoint; 4] {
        &self.pts
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.pts.contains(pt)
    }

    pub fn intersection(&self, other: &RamSet) -> Vec<ProjPoint> {
        self.pts.iter().filter(|p| other.contains(p)).copied().collect()
    }

    pub fn transform(&self, sigma: &Mobius) -> Result<RamSet> {
        let e = self.tower.ext();
        let img: Vec<ProjPoint> = self.pts.iter().map(|p| sigma.apply(e, p)).collect();
        RamSet::new(&self.tower, &img)
    }

    /// `∏ (x - a)` over the finite points, with coefficients in `F_q`.
    pub fn poly(&self) -> Poly {
        let e = self.tower.ext();
        let roots: Vec<Fel> = self.pts.iter().filter_map(|p| p.finite().copied()).collect();
        self.tower
            .lower_poly(&Poly::from_roots(e, &roots))
            .expect("Frobenius-stable roots give an F_q polynomial")
    }

    /// The model `y^2 = lead * ∏ (x - a)`.
    pub fn model(&self, lead: &Fel) -> Result<EllipticModel> {
        let b = self.tower.base();
        EllipticModel::new(b.clone(), self.poly().scale(b, lead))
    }

    /// Legendre coefficient of the points in stored order (in `F_{q^2}`).
    pub fn lambda(&self) -> Fel {
        lambda_of_four(self.tower.ext(), &self.pts).expect("distinct points")
    }

    /// The least element of the Legendre orbit of [`RamSet::lambda`].
    pub fn canonical_lambda(&self) -> Fel {
        orbit(self.tower.ext(), &self.lambda()).expect("distinct points")[0]
    }
}

/// Ramification points of `y^2 = f(x)`: the roots of `f` in `F_{q^2}`, plus ∞
/// when `f` is a cubic.
pub fn ram_set(m: &EllipticModel) -> Result<RamSet> {
    let tower = Tower::new(m.base())?;
    let f = tower.lift_poly(m.poly());
    let roots = f.roots_in(tower.ext())?;
    if roots.len() != m.degree() {
        return Err(Error::RamificationOutsideQuadratic);
    }
    let mut pts: Vec<ProjPoint> = roots.into_iter().map(ProjPoint::Finite).collect();
    if m.degree() == 3 {
        pts.push(ProjPoint::Infinity);
    }
    RamSet::new(&tower, &pts)
}

/// j-invariant computed from Weierstrass coefficients after moving one
/// ramification point to ∞.
fn weierstrass_j(rs: &RamSet) -> Fel {
    let e = rs.tower().ext();
    let p = rs.points();
    let pts: Vec<ProjPoint> = if p[0].is_infinity() {
        p.to_vec()
    } else {
        let sigma = Mobius::from_triple(e, &[p[0], p[1], p[2]], &[p[1], p[2], ProjPoint::Infinity])
            .expect("distinct points");
        p.iter().map(|x| sigma.apply(e, x)).collect()
    };
    let roots: Vec<Fel> = pts.iter().filter_map(|x| x.finite().copied()).collect();
    cubic_j(e, &Poly::from_roots(e, &roots))
}

/// Geometric isomorphism of the two genus-1 covers, decided by Legendre
/// equivalence and cross-checked against Weierstrass j-invariants.
pub fn isomorphic_curves(m1: &EllipticModel, m2: &EllipticModel) -> Result<bool> {
    let r1 = ram_set(m1)?;
    let r2 = ram_set(m2)?;
    if r1.tower() != r2.tower() {
        return Err(Error::CharacteristicMismatch(m1.base().p(), m2.base().p()));
    }
    let e = r1.tower().ext();
    let by_orbit = legendre_equivalent(e, &r1.lambda(), &r2.lambda())?;
    let by_j = weierstrass_j(&r1) == weierstrass_j(&r2);
    assert_eq!(by_orbit, by_j, "orbit and j-invariant tests disagree");
    Ok(by_orbit)
}

fn ordered_triples(pts: &[ProjPoint; 4]) -> Vec<[ProjPoint; 3]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && b != c && a != c {
                    out.push([pts[a], pts[b], pts[c]]);
                }
            }
        }
    }
    out
}

/// Every Frobenius-stable image of `R2` under a map sending three of its
/// points onto three points of `R1`, sharing exactly three points with `R1`.
/// `R2` itself comes first when it already qualifies; the rest follow the
/// enumeration order of (source triple, target triple).
pub fn alignments(r1: &RamSet, r2: &RamSet) -> Vec<RamSet> {
    let e = r1.tower().ext();
    let mut out: Vec<RamSet> = Vec::new();
    if r1.intersection(r2).len() == 3 {
        out.push(r2.clone());
    }
    for src in ordered_triples(r2.points()) {
        for dst in ordered_triples(r1.points()) {
            let Ok(sigma) = Mobius::from_triple(e, &src, &dst) else {
                continue;
            };
            let Ok(img) = r2.transform(&sigma) else {
                continue;
            };
            if r1.intersection(&img).len() == 3 && !out.contains(&img) {
                out.push(img);
            }
        }
    }
    out
}

/// A model over `F_q` geometrically isomorphic to `m2` whose ramification set
/// shares exactly three points with that of `m1`.
pub fn align_third_curve(m1: &EllipticModel, m2: &EllipticModel) -> Result<EllipticModel> {
    let c1 = two_torsion_rational(m1)?;
    let c2 = two_torsion_rational(m2)?;
    if c1 != c2 || !(c1 == 2 || c1 == 4) {
        return Err(Error::Precondition(format!(
            "2-torsion counts {c1} and {c2} must agree and lie in {{2, 4}}"
        )));
    }
    if isomorphic_curves(m1, m2)? {
        return Err(Error::Precondition("curves are isomorphic".into()));
    }
    let r1 = ram_set(m1)?;
    let r2 = ram_set(m2)?;
    let aligned = alignments(&r1, &r2)
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoAlignment("no Frobenius-stable image shares three points".into()))?;
    let m3 = aligned.model(&m1.base().one())?;
    if !isomorphic_curves(&m3, m2)? || ram_set(&m3)?.intersection(&r1).len() != 3 {
        return Err(Error::NoAlignment("postconditions failed".into()));
    }
    Ok(m3)
}
