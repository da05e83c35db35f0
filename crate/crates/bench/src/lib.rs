//! Fixtures shared by the benchmarks.

use tricover_core::{make_field, Genus3Cover, Poly};

/// The q = 13 cover with quotients of traces -6, 2, 2.
pub fn worked_cover() -> Genus3Cover {
    let k = make_field(13, 1).expect("F_13");
    let f = |r: [i64; 3]| Poly::from_roots(&k, &r.map(|v| k.from_int(v)));
    Genus3Cover::new(k.clone(), [f([0, 1, 12]), f([0, 1, 3]), f([0, 12, 3])]).expect("genus 3")
}
