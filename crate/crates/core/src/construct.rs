//! Arranging three elliptic curves so that their ramification sets overlap in
//! the pattern required for a genus-3 `(Z/2)^3` cover, and building that cover.

use std::collections::BTreeSet;

use crate::ecurve::{enumerate_classes, trace, two_torsion_rational, waterhouse_admissible, CurveClass, EllipticModel};
use crate::error::{Error, Result};
use crate::ff::{field_of_order, Fel, Field, FieldDesc, Poly};
use crate::legendre::{
    alignments, case1_lambda, case2_lambda, conjugate_pair_lambda, isomorphic_curves, legendre_equivalent,
    orbit, ram_set, Mobius, ProjPoint, RamSet, Tower,
};
use crate::zeta::CharPoly;

/// Which arrangement applies: curves with two rational 2-torsion points
/// (`Weak`) or with full rational 2-torsion (`Strong`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    Weak,
    Strong,
}

impl Case {
    pub fn two_torsion(self) -> u8 {
        match self {
            Case::Weak => 2,
            Case::Strong => 4,
        }
    }

    /// Required residue of `q + 1 + t` modulo 4.
    pub fn residue(self) -> u64 {
        match self {
            Case::Weak => 2,
            Case::Strong => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::Weak => "weak",
            Case::Strong => "strong",
        }
    }
}

/// Requested consistency notion; `Auto` picks the case from `q + 1 + t mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Weak,
    Strong,
    Auto,
}

/// A Legendre coefficient in `F_{q^2}` and how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaRecord {
    pub value: Fel,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionCertificate {
    pub q: u64,
    pub case: Case,
    /// `p1 .. p4` in `F_{q^2}`; with ∞ they make up the five branch points.
    pub points: [ProjPoint; 4],
    pub models: [EllipticModel; 3],
    pub lambdas: [LambdaRecord; 3],
    pub traces: [i64; 3],
    /// Position `i` holds the caller's index of the curve placed at `i`.
    pub roles: [usize; 3],
    /// Sizes of `R1∩R2`, `R1∩R3`, `R2∩R3`.
    pub pairwise: [usize; 3],
    pub triple: usize,
    pub union: usize,
}

impl ConstructionCertificate {
    pub fn tower(&self) -> Result<Tower> {
        Tower::new(self.models[0].base())
    }

    /// The ramification sets prescribed by the points.
    pub fn expected_ram_sets(&self) -> Result<[RamSet; 3]> {
        prescribed_ram_sets(&self.tower()?, self.case, &self.points)
    }

    /// Checks every structural invariant of the certificate.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        let base = self.models[0].base();
        if self.models.iter().any(|m| m.base() != base) || base.order() != self.q {
            return bad("models over different fields".into());
        }
        let tower = self.tower()?;
        let rational: Vec<bool> = self.points.iter().map(|p| p.is_rational(&tower)).collect();
        let shape_ok = match self.case {
            Case::Strong => rational.iter().all(|&r| r),
            Case::Weak => {
                !rational[0] && !rational[1] && rational[2] && rational[3]
                    && self.points[0].conj(&tower) == self.points[1]
            }
        };
        if !shape_ok {
            return bad(format!("points do not fit the {} case", self.case.name()));
        }
        let actual: Vec<RamSet> = self.models.iter().map(ram_set).collect::<Result<_>>()?;
        let expected = self
            .expected_ram_sets()
            .map_err(|e| Error::InvalidCertificate(e.to_string()))?;
        if actual.as_slice() != expected.as_slice() {
            return bad("model ramification differs from the points".into());
        }
        let (pairwise, triple, union) = overlaps(&expected);
        if pairwise != [3, 3, 3] || triple != 2 || union != 5 {
            return bad(format!("overlaps {pairwise:?}, triple {triple}, union {union}"));
        }
        if (pairwise, triple, union) != (self.pairwise, self.triple, self.union) {
            return bad("recorded overlap sizes are stale".into());
        }
        let e = tower.ext();
        if !legendre_equivalent(e, &self.lambdas[2].value, &expected[2].lambda())? {
            return bad("third Legendre coefficient does not match the third curve".into());
        }
        for (m, t) in self.models.iter().zip(self.traces) {
            if trace(m)?.value() != t {
                return bad("recorded trace differs from the model".into());
            }
        }
        Ok(())
    }
}

fn prescribed_ram_sets(t: &Tower, case: Case, points: &[ProjPoint; 4]) -> Result<[RamSet; 3]> {
    let [p1, p2, p3, p4] = *points;
    let inf = ProjPoint::Infinity;
    let third = match case {
        Case::Strong => [inf, p1, p3, p4],
        Case::Weak => [p1, p2, p3, p4],
    };
    Ok([
        RamSet::new(t, &[inf, p1, p2, p3])?,
        RamSet::new(t, &[inf, p1, p2, p4])?,
        RamSet::new(t, &third)?,
    ])
}

fn overlaps(r: &[RamSet; 3]) -> ([usize; 3], usize, usize) {
    let pairwise = [
        r[0].intersection(&r[1]).len(),
        r[0].intersection(&r[2]).len(),
        r[1].intersection(&r[2]).len(),
    ];
    let triple = r[0].intersection(&r[1]).iter().filter(|p| r[2].contains(p)).count();
    let union: BTreeSet<ProjPoint> = r.iter().flat_map(|s| s.points().iter().copied()).collect();
    (pairwise, triple, union.len())
}

fn sqrt_in(k: &FieldDesc, v: &Fel) -> Option<Fel> {
    k.elements().find(|x| k.square(x) == *v)
}

/// The map sending `s` to ∞ and the conjugate pair to the roots of `x^2 - n`,
/// `n` the least non-square of `F_q`.
fn weak_normalizer(tower: &Tower, s: &ProjPoint, pair: [ProjPoint; 2]) -> Mobius {
    let e = tower.ext();
    let to_inf = match s {
        ProjPoint::Infinity => Mobius::identity(e),
        ProjPoint::Finite(a) => Mobius::new(e, Fel::ZERO, e.one(), e.one(), e.neg(a)).expect("invertible"),
    };
    let z = *to_inf.apply(e, &pair[0]).finite().expect("pair is finite after moving s");
    let zb = *to_inf.apply(e, &pair[1]).finite().expect("pair is finite after moving s");
    let half = e.inv(&e.from_int(2)).expect("odd characteristic");
    let mid = e.mul(&e.add(&z, &zb), &half);
    let d = e.square(&e.mul(&e.sub(&z, &zb), &half));
    let b = tower.base();
    let n = b.least_nonsquare();
    let ratio = tower.lower(&e.div(&tower.lift(&n), &d).expect("distinct pair")).expect("rational ratio");
    let c = tower.lift(&sqrt_in(b, &ratio).expect("ratio of non-squares is a square"));
    let affine = Mobius::new(e, c, e.neg(&e.mul(&c, &mid)), Fel::ZERO, e.one()).expect("c nonzero");
    affine.compose(e, &to_inf)
}

/// Places three pairwise non-isomorphic curves with equal 2-torsion count on
/// ramification sets `{∞,p1,p2,p3}`, `{∞,p1,p2,p4}` and `{∞,p1,p3,p4}`
/// (full 2-torsion) or `{p1,p2,p3,p4}` with `p1, p2` conjugate (two rational
/// 2-torsion points). Models are monic; their traces are whatever the
/// arrangement produces, possibly a twist of the inputs.
pub fn arrange_triple(m1: &EllipticModel, m2: &EllipticModel, m3: &EllipticModel) -> Result<ConstructionCertificate> {
    let base = m1.base().clone();
    if m2.base() != &base || m3.base() != &base {
        return Err(Error::Precondition("models over different fields".into()));
    }
    let c: Vec<u8> = [m1, m2, m3].iter().map(|m| two_torsion_rational(m)).collect::<Result<_>>()?;
    let case = match (c[0], c[1], c[2]) {
        (4, 4, 4) => Case::Strong,
        (2, 2, 2) => Case::Weak,
        _ => {
            return Err(Error::Precondition(format!(
                "2-torsion counts {c:?} must all be 2 or all be 4"
            )))
        }
    };
    for (a, b) in [(m1, m2), (m1, m3), (m2, m3)] {
        if isomorphic_curves(a, b)? {
            return Err(Error::Precondition("input curves are not pairwise non-isomorphic".into()));
        }
    }
    let r1 = ram_set(m1)?;
    let r2 = ram_set(m2)?;
    let r3 = ram_set(m3)?;
    let tower = r1.tower().clone();
    let e = tower.ext().clone();
    let target = r3.lambda();

    for r2a in alignments(&r1, &r2) {
        let shared = r1.intersection(&r2a);
        let extra1 = *r1.points().iter().find(|p| !shared.contains(p)).expect("one point left");
        let extra2 = *r2a.points().iter().find(|p| !shared.contains(p)).expect("one point left");
        for s in shared.iter().filter(|s| s.is_rational(&tower)) {
            let rest: Vec<ProjPoint> = shared.iter().filter(|p| *p != s).copied().collect();
            let cand = RamSet::new(&tower, &[rest[0], rest[1], extra1, extra2])?;
            if !legendre_equivalent(&e, &cand.lambda(), &target)? {
                continue;
            }
            let tau = match case {
                Case::Strong => Mobius::from_triple(
                    &e,
                    &[rest[0], rest[1], *s],
                    &[ProjPoint::Infinity, ProjPoint::Finite(Fel::ZERO), ProjPoint::Finite(e.one())],
                )?,
                Case::Weak => weak_normalizer(&tower, s, [rest[0], rest[1]]),
            };
            let img = |p: &ProjPoint| tau.apply(&e, p);
            let mut points = match case {
                Case::Strong => [img(&rest[1]), img(s), img(&extra1), img(&extra2)],
                Case::Weak => [img(&rest[0]), img(&rest[1]), img(&extra1), img(&extra2)],
            };
            if case == Case::Weak && points[1] < points[0] {
                points.swap(0, 1);
            }
            return certificate(&base, case, points, [0, 1, 2], m3);
        }
    }
    Err(Error::ThirdCurveMismatch(
        "no aligned configuration realizes the third curve".into(),
    ))
}

fn certificate(
    base: &Field,
    case: Case,
    points: [ProjPoint; 4],
    roles: [usize; 3],
    m3: &EllipticModel,
) -> Result<ConstructionCertificate> {
    let tower = Tower::new(base)?;
    let e = tower.ext();
    let coords: Vec<Fel> = points
        .iter()
        .map(|p| p.finite().copied().ok_or_else(|| Error::InvalidCertificate("p_i must be finite".into())))
        .collect::<Result<_>>()?;
    let ratio = |a: &Fel, b: &Fel| e.div(&e.sub(a, &coords[0]), &e.sub(b, &coords[0]));
    let l1 = ratio(&coords[2], &coords[1])?;
    let l2 = ratio(&coords[3], &coords[1])?;
    let (l3, how) = match case {
        Case::Strong => (case2_lambda(e, &l1, &l2)?, "l2 / l1"),
        Case::Weak => (case1_lambda(e, &l1, &l2)?, "l2 (1 - l1) / (l2 - l1)"),
    };
    let sets = prescribed_ram_sets(&tower, case, &points)?;
    let one = base.one();
    let models = [sets[0].model(&one)?, sets[1].model(&one)?, sets[2].model(&one)?];
    if !isomorphic_curves(&models[2], m3)? {
        return Err(Error::ThirdCurveMismatch("third model is not isomorphic to the input".into()));
    }
    let mut traces = [0; 3];
    for (t, m) in traces.iter_mut().zip(&models) {
        *t = trace(m)?.value();
    }
    let (pairwise, triple, union) = overlaps(&sets);
    let cert = ConstructionCertificate {
        q: base.order(),
        case,
        points,
        models,
        lambdas: [
            LambdaRecord { value: l1, provenance: "l1 = (p3 - p1) / (p2 - p1)".into() },
            LambdaRecord { value: l2, provenance: "l2 = (p4 - p1) / (p2 - p1)".into() },
            LambdaRecord { value: l3, provenance: format!("l3 = {how}") },
        ],
        traces,
        roles,
        pairwise,
        triple,
        union,
    };
    cert.validate()?;
    Ok(cert)
}

/// `|R1 ∪ R2 ∪ R3|` by inclusion–exclusion.
pub fn hurwitz_ram_count(sets: &[RamSet; 3]) -> usize {
    let (pairwise, triple, _) = overlaps(sets);
    12 - pairwise.iter().sum::<usize>() + triple
}

/// Whether no nonempty product of the `f_i` is a constant times a square.
pub fn degree8_check(k: &FieldDesc, f: &[Poly; 3]) -> Result<bool> {
    for mask in 1u8..8 {
        let prod = (0..3)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Poly::constant(k.one()), |acc, i| acc.mul(k, &f[i]));
        if prod.square_class_part(k)?.degree() == Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `(Z/2)^3` cover of the line given by `y_i^2 = f_i(x)`, accepted only if
/// it has five branch points and degree 8.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genus3Cover {
    base: Field,
    f: [Poly; 3],
    ram: [RamSet; 3],
}

impl Genus3Cover {
    pub fn new(base: Field, f: [Poly; 3]) -> Result<Genus3Cover> {
        let models: Vec<EllipticModel> = f
            .iter()
            .map(|g| EllipticModel::new(base.clone(), g.clone()))
            .collect::<Result<_>>()?;
        let ram: Vec<RamSet> = models.iter().map(ram_set).collect::<Result<_>>()?;
        let ram = [ram[0].clone(), ram[1].clone(), ram[2].clone()];
        let branch = hurwitz_ram_count(&ram);
        if branch != 5 {
            return Err(Error::NotGenus3(format!("{branch} branch points, expected 5")));
        }
        if !degree8_check(&base, &f)? {
            return Err(Error::NotGenus3("a product of the f_i is a square times a constant".into()));
        }
        Ok(Genus3Cover { base, f, ram })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn q(&self) -> u64 {
        self.base.order()
    }

    pub fn polys(&self) -> &[Poly; 3] {
        &self.f
    }

    pub fn ram_sets(&self) -> &[RamSet; 3] {
        &self.ram
    }

    pub fn hurwitz_ram_count(&self) -> usize {
        hurwitz_ram_count(&self.ram)
    }

    pub fn degree8_check(&self) -> bool {
        degree8_check(&self.base, &self.f).expect("polynomials are nonzero")
    }
}

pub fn build_cover(cert: &ConstructionCertificate) -> Result<Genus3Cover> {
    cert.validate()?;
    let base = cert.models[0].base().clone();
    let f = cert.models.clone().map(|m| m.poly().clone());
    let cover = Genus3Cover::new(base, f)?;
    assert_eq!(cover.hurwitz_ram_count(), 5);
    assert!(cover.degree8_check());
    Ok(cover)
}

/// A witness of Legendre consistency: classes in arrangement order, the
/// chosen Legendre representatives `l1, l2` and the derived `l3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyWitness {
    pub case: Case,
    /// `perm[i]` is the index of the trace placed at position `i`.
    pub perm: [usize; 3],
    pub lambdas: [Fel; 3],
    pub classes: [CurveClass; 3],
    pub searched: u64,
}

/// Validates the traces and returns the cases to search, in order.
///
/// Strict mode requires distinct traces and the residue of `q + 1 + t_i`
/// mod 4 demanded by the case (2 for weak, 0 for strong). Relaxed mode keeps
/// only what the arrangement itself needs: pairwise non-isomorphic curves with
/// a common 2-torsion count, so equal traces and any residues are allowed.
pub fn check_traces(q: u64, t: [i64; 3], mode: Mode, relaxed: bool) -> Result<Vec<Case>> {
    field_of_order(q)?;
    for &ti in &t {
        if ti * ti > 4 * q as i64 {
            return Err(Error::Inadmissible { q, t: ti, reason: format!("Hasse bound: {ti}^2 > 4*{q}") });
        }
        if !waterhouse_admissible(q, ti) {
            return Err(Error::Inadmissible { q, t: ti, reason: "no clause of the classification holds".into() });
        }
    }
    if !relaxed && (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) {
        return Err(Error::Precondition(format!("traces {t:?} are not distinct")));
    }
    let res: Vec<u64> = t.iter().map(|&ti| (q as i64 + 1 + ti).rem_euclid(4) as u64).collect();
    // Full rational 2-torsion forces 4 | q + 1 + t in every mode.
    let cases = match mode {
        Mode::Weak => vec![Case::Weak],
        Mode::Strong => vec![Case::Strong],
        Mode::Auto => vec![Case::Strong, Case::Weak],
    };
    Ok(cases
        .into_iter()
        .filter(|c| match c {
            Case::Strong => res.iter().all(|&r| r == 0),
            Case::Weak => relaxed || res.iter().all(|&r| r == 2),
        })
        .collect())
}

fn candidate_lambdas(tower: &Tower, class: &CurveClass, case: Case) -> Result<Vec<Fel>> {
    let rs = ram_set(&class.representative)?;
    let all = orbit(tower.ext(), &rs.lambda())?;
    Ok(match case {
        Case::Strong => all,
        Case::Weak => all.into_iter().filter(|l| conjugate_pair_lambda(tower, l)).collect(),
    })
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Searches `classes` for curves with traces `t` whose Legendre coefficients
/// satisfy the relation of the applicable case. The first hit in the order
/// (permutation, classes, representatives) is returned.
pub fn decide_consistency_in(
    classes: &[CurveClass],
    q: u64,
    t: [i64; 3],
    mode: Mode,
    relaxed: bool,
) -> Result<ConsistencyWitness> {
    let cases = check_traces(q, t, mode, relaxed)?;
    let base = field_of_order(q)?;
    let tower = Tower::new(&base)?;
    let mut searched = 0u64;
    for case in cases {
        if let Some(w) = search_case(classes, &tower, t, case, &mut searched)? {
            return Ok(w);
        }
    }
    Err(Error::NotConsistent { searched })
}

fn search_case(
    classes: &[CurveClass],
    tower: &Tower,
    t: [i64; 3],
    case: Case,
    searched: &mut u64,
) -> Result<Option<ConsistencyWitness>> {
    let e = tower.ext();
    let mut cands: Vec<Vec<(&CurveClass, Vec<Fel>)>> = Vec::new();
    for &ti in &t {
        let mut v = Vec::new();
        for c in classes.iter().filter(|c| c.t.value() == ti && c.two_torsion == case.two_torsion()) {
            v.push((c, candidate_lambdas(tower, c, case)?));
        }
        cands.push(v);
    }
    for perm in PERMS {
        for (c1, reps1) in &cands[perm[0]] {
            for (c2, reps2) in &cands[perm[1]] {
                if c1.j == c2.j {
                    continue;
                }
                for (c3, reps3) in &cands[perm[2]] {
                    if c3.j == c1.j || c3.j == c2.j {
                        continue;
                    }
                    let Some(l3) = reps3.first() else { continue };
                    for l1 in reps1 {
                        for l2 in reps2 {
                            *searched += 1;
                            let derived = match case {
                                Case::Weak => case1_lambda(e, l1, l2),
                                Case::Strong => case2_lambda(e, l1, l2),
                            };
                            let Ok(d) = derived else { continue };
                            if d.is_zero() || d == e.one() {
                                continue;
                            }
                            if legendre_equivalent(e, l3, &d)? {
                                return Ok(Some(ConsistencyWitness {
                                    case,
                                    perm,
                                    lambdas: [*l1, *l2, d],
                                    classes: [(*c1).clone(), (*c2).clone(), (*c3).clone()],
                                    searched: *searched,
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn decide_consistency(q: u64, t: [i64; 3], mode: Mode, relaxed: bool) -> Result<ConsistencyWitness> {
    let classes = enumerate_classes(q)?;
    decide_consistency_in(&classes, q, t, mode, relaxed)
}

/// Output of the trace-triple pipeline.
#[derive(Clone, Debug)]
pub struct Construction {
    pub witness: ConsistencyWitness,
    pub certificate: ConstructionCertificate,
    pub cover: Genus3Cover,
    pub claimed: CharPoly,
}

/// Replaces each model by its quadratic twist where the measured trace has
/// the opposite sign of the target.
pub fn reconcile_twists(cert: &mut ConstructionCertificate, targets: [i64; 3]) -> Result<()> {
    for i in 0..3 {
        let measured = cert.traces[i];
        if measured == targets[i] {
            continue;
        }
        if measured != -targets[i] {
            return Err(Error::IrreconcilableTwist { target: targets[i], measured });
        }
        cert.models[i] = cert.models[i].quadratic_twist();
        cert.traces[i] = trace(&cert.models[i])?.value();
        if cert.traces[i] != targets[i] {
            return Err(Error::IrreconcilableTwist { target: targets[i], measured: cert.traces[i] });
        }
    }
    cert.validate()
}

pub fn construct_from_classes(
    classes: &[CurveClass],
    q: u64,
    t: [i64; 3],
    mode: Mode,
    relaxed: bool,
) -> Result<Construction> {
    let witness = decide_consistency_in(classes, q, t, mode, relaxed)?;
    let [a, b, c] = &witness.classes;
    let mut certificate = arrange_triple(&a.representative, &b.representative, &c.representative)?;
    certificate.roles = witness.perm;
    let targets = witness.perm.map(|i| t[i]);
    reconcile_twists(&mut certificate, targets)?;
    let cover = build_cover(&certificate)?;
    let claimed = CharPoly::from_traces(q, targets);
    Ok(Construction { witness, certificate, cover, claimed })
}

pub fn construct_from_traces(q: u64, t: [i64; 3], mode: Mode, relaxed: bool) -> Result<Construction> {
    let classes = enumerate_classes(q)?;
    construct_from_classes(&classes, q, t, mode, relaxed)
}

/// Every trace triple `t1 <= t2 <= t3` (strictly increasing unless
/// `relaxed`) that is consistent in the given case, with its witness.
pub fn enumerate_triples(
    classes: &[CurveClass],
    q: u64,
    case: Case,
    relaxed: bool,
) -> Result<Vec<([i64; 3], ConsistencyWitness)>> {
    let mode = match case {
        Case::Weak => Mode::Weak,
        Case::Strong => Mode::Strong,
    };
    let traces: BTreeSet<i64> = classes
        .iter()
        .filter(|c| c.two_torsion == case.two_torsion())
        .map(|c| c.t.value())
        .filter(|&t| relaxed || (q as i64 + 1 + t).rem_euclid(4) as u64 == case.residue())
        .collect();
    let traces: Vec<i64> = traces.into_iter().collect();
    let mut out = Vec::new();
    for (a, &t1) in traces.iter().enumerate() {
        for (b, &t2) in traces.iter().enumerate().skip(a) {
            for &t3 in traces.iter().skip(b) {
                let t = [t1, t2, t3];
                if !relaxed && (t1 == t2 || t2 == t3) {
                    continue;
                }
                match decide_consistency_in(classes, q, t, mode, relaxed) {
                    Ok(w) => out.push((t, w)),
                    Err(Error::NotConsistent { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn legendre(k: &Field, l: i64) -> EllipticModel {
        EllipticModel::legendre(k.clone(), &k.from_int(l)).unwrap()
    }

    fn worked() -> (Field, ConstructionCertificate) {
        let k = make_field(13, 1).unwrap();
        let cert = arrange_triple(&legendre(&k, 12), &legendre(&k, 3), &legendre(&k, 10)).unwrap();
        (k, cert)
    }

    #[test]
    fn strong_arrangement_over_f13() {
        let (k, cert) = worked();
        let t = cert.tower().unwrap();
        let pts: Vec<Fel> = cert.points.iter().map(|p| t.lower(p.finite().unwrap()).unwrap()).collect();
        assert_eq!(pts, [0, 1, 12, 3].map(|v| k.from_int(v)));
        assert_eq!(cert.case, Case::Strong);
        assert_eq!(cert.models[2].poly(), &Poly::from_roots(&k, &[0, 12, 3].map(|v| k.from_int(v))));
        assert_eq!(t.lower(&cert.lambdas[2].value).unwrap(), k.from_int(10));
        assert_eq!((cert.pairwise, cert.triple, cert.union), ([3, 3, 3], 2, 5));
        assert_eq!(cert.traces, [-6, 2, 2]);
        assert!(arrange_triple(&legendre(&k, 12), &legendre(&k, 2), &legendre(&k, 10)).is_err());
    }

    #[test]
    fn worked_cover() {
        let (k, cert) = worked();
        let cover = build_cover(&cert).unwrap();
        let f = |r: &[i64]| Poly::from_roots(&k, &r.iter().map(|&v| k.from_int(v)).collect::<Vec<_>>());
        assert_eq!(cover.polys(), &[f(&[0, 1, 12]), f(&[0, 1, 3]), f(&[0, 12, 3])]);
        assert_eq!(cover.hurwitz_ram_count(), 5);
        assert!(cover.degree8_check());
        let sq = cover.polys()[0].mul(&k, &cover.polys()[1]).square_class_part(&k).unwrap();
        assert_eq!(sq.monic(&k).unwrap(), f(&[12, 3]));
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let (k, cert) = worked();
        let mut bad = cert.clone();
        bad.models[1] = bad.models[0].clone();
        assert!(build_cover(&bad).is_err());
        let mut bad = cert.clone();
        bad.traces[0] = 6;
        assert!(build_cover(&bad).is_err());
        let f1 = cert.models[0].poly().clone();
        assert!(!degree8_check(&k, &[f1.clone(), f1.clone(), cert.models[2].poly().clone()]).unwrap());
        let f12 = f1.mul(&k, cert.models[1].poly());
        let four = Poly::constant(k.from_int(4));
        assert!(!degree8_check(&k, &[f1, cert.models[1].poly().clone(), f12.mul(&k, &four)]).unwrap());
    }

    #[test]
    fn hurwitz_degenerate_counts() {
        let k = make_field(13, 1).unwrap();
        let r = ram_set(&legendre(&k, 2)).unwrap();
        assert_eq!(hurwitz_ram_count(&[r.clone(), r.clone(), r.clone()]), 4);
        let t = r.tower().clone();
        let pts = |v: [i64; 4]| {
            let p: Vec<ProjPoint> = v.iter().map(|&a| ProjPoint::Finite(t.lift(&k.from_int(a)))).collect();
            RamSet::new(&t, &p).unwrap()
        };
        assert_eq!(hurwitz_ram_count(&[pts([1, 2, 3, 4]), pts([5, 6, 7, 8]), pts([9, 10, 11, 12])]), 12);
    }

    #[test]
    fn relaxed_strong_consistency_at_13() {
        let w = decide_consistency(13, [-6, 2, 2], Mode::Strong, true).unwrap();
        assert_eq!(w.case, Case::Strong);
        assert!(decide_consistency(13, [-6, 2, 2], Mode::Strong, false).is_err());
        let again = decide_consistency(13, [-6, 2, 2], Mode::Strong, true).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn inadmissible_traces() {
        assert!(matches!(
            decide_consistency(7, [6, 1, 2], Mode::Auto, false),
            Err(Error::Inadmissible { t: 6, .. })
        ));
    }

    #[test]
    fn relaxed_pipeline_at_13() {
        let c = construct_from_traces(13, [-6, 2, 2], Mode::Auto, true).unwrap();
        assert_eq!(c.cover.hurwitz_ram_count(), 5);
        let targets = c.witness.perm.map(|i| [-6, 2, 2][i]);
        assert_eq!(c.certificate.traces, targets);
    }
}
