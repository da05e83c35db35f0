//! On-disk cache of `enumerate_classes`, one file per `q`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tricover_core::ecurve::{enumerate_classes, trace, two_torsion_rational, TraceParam};
use tricover_core::{CurveClass, EllipticModel, Field};

use crate::encode::{decode_poly, SCHEMA};
use crate::write_atomic;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: u32,
    q: String,
    modulus: Vec<u32>,
    classes: Vec<CachedClass>,
}

#[derive(Serialize, Deserialize)]
struct CachedClass {
    t: String,
    two_torsion: String,
    j: Vec<u64>,
    f: Vec<Vec<u64>>,
}

fn encode(k: &Field, classes: &[CurveClass]) -> CacheFile {
    let digits = |x: &tricover_core::Fel| x.digits(k.degree()).into_iter().map(u64::from).collect();
    CacheFile {
        schema: SCHEMA,
        q: k.order().to_string(),
        modulus: k.modulus().to_vec(),
        classes: classes
            .iter()
            .map(|c| CachedClass {
                t: c.t.value().to_string(),
                two_torsion: c.two_torsion.to_string(),
                j: digits(&c.j),
                f: c.representative.poly().coeffs().iter().map(digits).collect(),
            })
            .collect(),
    }
}

/// Rebuilds the classes, recomputing each invariant; `None` if anything is off.
fn decode(k: &Field, file: CacheFile) -> Option<Vec<CurveClass>> {
    if file.schema != SCHEMA || file.q != k.order().to_string() || file.modulus != k.modulus() {
        return None;
    }
    file.classes
        .into_iter()
        .map(|c| {
            let f = decode_poly(k, &c.f).ok()?;
            let m = EllipticModel::new(k.clone(), f).ok()?;
            let t: i64 = c.t.parse().ok()?;
            let two: u8 = c.two_torsion.parse().ok()?;
            let j = k.from_digits(&c.j).ok()?;
            let ok = trace(&m).ok()?.value() == t && two_torsion_rational(&m).ok()? == two && m.weierstrass_j()? == j;
            let t = TraceParam::new(k.order(), t).ok()?;
            ok.then_some(CurveClass { j, t, two_torsion: two, representative: m })
        })
        .collect()
}

/// Classes over `k`, read from `dir` when a valid entry exists and written
/// there otherwise.
pub fn classes(k: &Field, dir: Option<&Path>) -> Result<Vec<CurveClass>, crate::Failure> {
    let Some(dir) = dir else {
        return Ok(enumerate_classes(k.order())?);
    };
    let path = dir.join(format!("classes-q{}.json", k.order()));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Some(found) = serde_json::from_str(&text).ok().and_then(|f| decode(k, f)) {
            return Ok(found);
        }
    }
    let classes = enumerate_classes(k.order())?;
    fs::create_dir_all(dir).map_err(|e| crate::Failure::Io(format!("{}: {e}", dir.display())))?;
    let text = serde_json::to_string(&encode(k, &classes)).expect("serializable");
    write_atomic(&path, text.as_bytes())?;
    Ok(classes)
}
