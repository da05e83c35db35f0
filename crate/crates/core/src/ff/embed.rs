use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::field::{Fel, Field, FieldDesc};
use crate::error::{Error, Result};

/// The fixed embedding `F_{p^a} -> F_{p^b}` determined by sending the source
/// generator to the first root (in enumeration order) of the source modulus.
#[derive(Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    /// Images of `1, g, g^2, .., g^{a-1}` for the source generator `g`.
    basis: Vec<Fel>,
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, u: &Fel) -> Fel {
        let t = &self.target;
        let a = self.source.degree();
        let mut acc = Fel::ZERO;
        for (d, img) in u.coeffs()[..a].iter().zip(&self.basis) {
            if *d != 0 {
                acc = t.add(&acc, &t.scale(img, *d));
            }
        }
        acc
    }

    /// Inverse image of `v`, if `v` lies in the embedded subfield.
    pub fn preimage(&self, v: &Fel) -> Result<Fel> {
        let p = self.source.p();
        let a = self.source.degree();
        let b = self.target.degree();
        // Solve sum_i c_i basis_i = v over F_p: b equations, a unknowns.
        let mut rows: Vec<Vec<u64>> = (0..b)
            .map(|r| {
                let mut row: Vec<u64> = self.basis.iter().map(|e| e.coeffs()[r] as u64).collect();
                row.push(v.coeffs()[r] as u64);
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::with_capacity(a);
        for col in 0..a {
            let Some(sel) = (pivot_row..b).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(pivot_row, sel);
            let inv = inv_mod(rows[pivot_row][col], p);
            for x in rows[pivot_row].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..b {
                if r != pivot_row && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..=a {
                        rows[r][c] = (rows[r][c] + (p - f) * rows[pivot_row][c]) % p;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|row| row[a] != 0) {
            return Err(Error::NotInSubfield);
        }
        let mut digits = vec![0u64; a];
        for (r, &col) in pivots.iter().enumerate() {
            digits[col] = rows[r][a];
        }
        self.source.from_digits(&digits)
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// The cached embedding between two fields of the same characteristic.
pub fn embedding(source: &Field, target: &Field) -> Result<Arc<Embedding>> {
    if source.p() != target.p() {
        return Err(Error::CharacteristicMismatch(source.p(), target.p()));
    }
    let (a, b) = (source.degree(), target.degree());
    if b % a != 0 {
        return Err(Error::NotASubfield { from: a, to: b });
    }
    type Cache = Mutex<HashMap<(u64, usize, usize), Arc<Embedding>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (source.p(), a, b);
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    // Computed outside the lock; concurrent fills produce the same value.
    let root = if a == 1 {
        Fel::ZERO
    } else if a == b {
        target.generator()
    } else {
        first_root_of_modulus(source, target)
    };
    let mut basis = Vec::with_capacity(a);
    let mut pw = target.one();
    for _ in 0..a {
        basis.push(pw);
        pw = target.mul(&pw, &root);
    }
    let emb = Arc::new(Embedding {
        source: source.clone(),
        target: target.clone(),
        basis,
    });
    Ok(cache.lock().unwrap().entry(key).or_insert(emb).clone())
}

fn first_root_of_modulus(source: &FieldDesc, target: &FieldDesc) -> Fel {
    let m: Vec<Fel> = source
        .modulus()
        .iter()
        .map(|&c| target.from_int(c as i64))
        .collect();
    target
        .elements()
        .find(|x| {
            m.iter()
                .rev()
                .fold(Fel::ZERO, |acc, c| target.add(&target.mul(&acc, x), c))
                .is_zero()
        })
        .expect("a finite field contains every subfield")
}

/// `u` viewed in `target`.
pub fn embed(u: &Fel, source: &Field, target: &Field) -> Result<Fel> {
    Ok(embedding(source, target)?.apply(u))
}
