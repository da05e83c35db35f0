//! JSON and TSV renderings of core values.
//!
//! Field elements are arrays of base-`p` digits, constant first. Points are
//! `{"x": digits}` or `"inf"`. Values living in `F_{q^2}` are written over
//! `F_q` when rational and over `F_{q^2}` otherwise, so the digit count tells
//! the two apart. Every other integer is a decimal string.

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};
use tricover_core::construct::LambdaRecord;
use tricover_core::legendre::Tower;
use tricover_core::zeta::{verify, ZetaReport};
use tricover_core::{
    CharPoly, ConsistencyWitness, Construction, ConstructionCertificate, Fel, FieldDesc, Genus3Cover, Poly,
    ProjPoint, Verdict,
};

pub const SCHEMA: u32 = 1;

pub fn int(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn ints<T: ToString>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| int(x.to_string())).collect())
}

pub fn fel(k: &FieldDesc, x: &Fel) -> Value {
    json!(x.digits(k.degree()))
}

pub fn poly(k: &FieldDesc, f: &Poly) -> Value {
    Value::Array(f.coeffs().iter().map(|c| fel(k, c)).collect())
}

pub fn tower_fel(tower: &Tower, x: &Fel) -> Value {
    match tower.lower(x) {
        Ok(y) => fel(tower.base(), &y),
        Err(_) => fel(tower.ext(), x),
    }
}

pub fn point(tower: &Tower, p: &ProjPoint) -> Value {
    match p {
        ProjPoint::Infinity => json!("inf"),
        ProjPoint::Finite(x) => json!({ "x": tower_fel(tower, x) }),
    }
}

/// Digits joined by `:` for TSV cells.
pub fn tower_cell(tower: &Tower, x: &Fel) -> String {
    let digits = match tower.lower(x) {
        Ok(y) => y.digits(tower.base().degree()),
        Err(_) => x.digits(tower.ext().degree()),
    };
    digits.iter().map(u32::to_string).collect::<Vec<_>>().join(":")
}

fn field_info(k: &FieldDesc) -> Value {
    json!({ "q": int(k.order()), "p": int(k.p()), "r": int(k.degree()), "modulus": k.modulus() })
}

pub fn witness(tower: &Tower, w: &ConsistencyWitness) -> Value {
    json!({
        "case": w.case.name(),
        "perm": ints(&w.perm),
        "lambdas": w.lambdas.iter().map(|l| tower_fel(tower, l)).collect::<Vec<_>>(),
        "traces": ints(&w.classes.each_ref().map(|c| c.t.value())),
        "searched": int(w.searched),
    })
}

fn lambda(tower: &Tower, l: &LambdaRecord) -> Value {
    json!({ "value": tower_fel(tower, &l.value), "provenance": l.provenance })
}

pub fn certificate(tower: &Tower, c: &ConstructionCertificate) -> Value {
    let k = tower.base();
    json!({
        "case": c.case.name(),
        "points": c.points.iter().map(|p| point(tower, p)).collect::<Vec<_>>(),
        "models": c.models.iter().map(|m| poly(k, m.poly())).collect::<Vec<_>>(),
        "lambdas": c.lambdas.iter().map(|l| lambda(tower, l)).collect::<Vec<_>>(),
        "traces": ints(&c.traces),
        "roles": ints(&c.roles),
        "pairwise": ints(&c.pairwise),
        "triple": int(c.triple),
        "union": int(c.union),
        "ext_modulus": tower.ext().modulus(),
    })
}

pub fn cover(c: &Genus3Cover) -> Value {
    let k = c.base();
    json!({
        "f": c.polys().iter().map(|f| poly(k, f)).collect::<Vec<_>>(),
        "hurwitz_ram_count": int(c.hurwitz_ram_count()),
        "degree8_check": c.degree8_check(),
    })
}

pub fn char_poly(cp: &CharPoly) -> Value {
    json!({
        "traces": ints(&cp.traces),
        "char_poly": ints(&cp.char_coeffs),
        "lpoly": ints(cp.lpoly.coeffs()),
    })
}

pub fn construction(tower: &Tower, input: [i64; 3], c: &Construction) -> Value {
    let mut v = field_info(tower.base());
    let m = v.as_object_mut().expect("object");
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("kind".into(), json!("construction"));
    m.insert("input_traces".into(), ints(&input));
    m.insert("witness".into(), witness(tower, &c.witness));
    m.insert("certificate".into(), certificate(tower, &c.certificate));
    m.insert("cover".into(), cover(&c.cover));
    m.insert("claimed".into(), char_poly(&c.claimed));
    v
}

pub fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Match => "match",
        Verdict::CountMismatch(_) => "count_mismatch",
        Verdict::PolyMismatch => "poly_mismatch",
    }
}

pub fn report(r: &ZetaReport) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "kind": "zeta_report",
        "q": int(r.q),
        "traces": ints(&r.claimed.traces),
        "k": int(r.counts.len()),
        "counts": ints(&r.counts),
        "expected": ints(&r.expected),
        "reconstructed": r.reconstructed.as_ref().map(|l| ints(l.coeffs())),
        "claimed": char_poly(&r.claimed),
        "verdict": verdict_name(&r.verdict),
    });
    if let Verdict::CountMismatch(k) = r.verdict {
        v["mismatch_k"] = int(k);
    }
    v
}

pub fn expected_table(q: u64, traces: [i64; 3], counts: &[BigInt]) -> Value {
    let cp = CharPoly::from_traces(q, traces);
    let mut v = char_poly(&cp);
    v["schema"] = json!(SCHEMA);
    v["kind"] = json!("zeta");
    v["q"] = int(q);
    v["expected"] = ints(counts);
    v
}

/// The part of a construction file that `verify` reads back.
#[derive(Deserialize)]
pub struct VerifyInput {
    pub schema: u32,
    pub q: String,
    pub cover: CoverInput,
    pub claimed: ClaimedInput,
}

#[derive(Deserialize)]
pub struct CoverInput {
    pub f: Vec<Vec<Vec<u64>>>,
}

#[derive(Deserialize)]
pub struct ClaimedInput {
    pub traces: [String; 3],
}

pub fn decode_poly(k: &FieldDesc, coeffs: &[Vec<u64>]) -> Result<Poly, String> {
    let fels = coeffs
        .iter()
        .map(|d| {
            if d.len() != k.degree() || d.iter().any(|&x| x >= k.p()) {
                return Err(format!("bad element digits {d:?} for F_{}", k.order()));
            }
            k.from_digits(d).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(fels))
}

/// Runs the verifier; kept here so the report and its rendering stay together.
pub fn verify_report(cover: &Genus3Cover, traces: [i64; 3], k: usize) -> tricover_core::Result<(Value, Verdict)> {
    let r = verify(cover, traces, k)?;
    Ok((report(&r), r.verdict))
}
