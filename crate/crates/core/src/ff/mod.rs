//! Exact arithmetic in `F_{p^n}` for odd `p`, polynomials over it, and
//! subfield embeddings.

mod embed;
mod field;
mod fp_poly;
mod poly;

pub use embed::{embed, embedding, Embedding};
pub use field::{make_field, Fel, Field, FieldDesc, MAX_DEGREE};
pub use poly::Poly;

pub(crate) use field::is_prime;

use crate::error::{Error, Result};

/// `(p, r)` with `q = p^r`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0 || d * d > q).map(|d| if q % d == 0 { d } else { q })?;
    let mut r = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, r))
}

/// The field `F_q` for an odd prime power `q`.
pub fn field_of_order(q: u64) -> Result<Field> {
    match prime_power(q) {
        Some((p, r)) if p != 2 => make_field(p, r as usize),
        Some((p, _)) => Err(Error::NotOddPrime(p)),
        None => Err(Error::NotOddPrime(q)),
    }
}
