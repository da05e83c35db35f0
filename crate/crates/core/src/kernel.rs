//! Exhaustive evaluation kernels for point counting.
//!
//! A polynomial `f` with coefficients in `F_Q` is a polynomial of total degree
//! `deg f` in the base-`p` digits of its argument. Walking the field in digit
//! order therefore only needs a table of mixed forward differences, updated by
//! additions, instead of a Horner evaluation per point.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{Fel, Field, FieldDesc, Poly, MAX_DEGREE};

/// Largest field order the counting loops accept.
pub const COUNT_CAP: u64 = 100_000_000;

/// Low digits walked inside one parallel chunk: the smallest block with at
/// least this many points.
const CHUNK_POINTS: u64 = 1 << 12;

type Multi = [u8; MAX_DEGREE];

/// Integer index of an element with `c_0` as the least significant digit.
#[inline]
fn index_of(x: &Fel, n: usize, pows: &[u64]) -> usize {
    let c = x.coeffs();
    let mut idx = 0u64;
    for i in 0..n {
        idx += c[i] as u64 * pows[i];
    }
    idx as usize
}

fn digit_powers(k: &FieldDesc) -> Vec<u64> {
    let mut pows = Vec::with_capacity(k.degree());
    let mut acc = 1u64;
    for _ in 0..k.degree() {
        pows.push(acc);
        acc *= k.p();
    }
    pows
}

/// Bitmap of the nonzero squares of `F_Q`.
pub struct SquareTable {
    field: Field,
    pows: Vec<u64>,
    bits: Vec<u64>,
}

impl SquareTable {
    /// The cached table for `k`, built on first use.
    pub fn for_field(k: &Field) -> Result<Arc<SquareTable>> {
        check_cap(k)?;
        type Cache = Mutex<HashMap<(u64, usize), Arc<SquareTable>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (k.p(), k.degree());
        if let Some(t) = cache.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let table = Arc::new(SquareTable::build(k));
        Ok(cache.lock().unwrap().entry(key).or_insert(table).clone())
    }

    fn build(k: &Field) -> SquareTable {
        let words = (k.order() as usize).div_ceil(64);
        let bits: Vec<AtomicU64> = (0..words).map(|_| AtomicU64::new(0)).collect();
        let pows = digit_powers(k);
        let n = k.degree();
        let x_squared = Poly::new(vec![Fel::ZERO, Fel::ZERO, k.one()]);
        Walker::new(k, std::slice::from_ref(&x_squared)).sum(|_, vals| {
            let v = &vals[0];
            if !v.is_zero() {
                let i = index_of(v, n, &pows);
                bits[i / 64].fetch_or(1 << (i % 64), Ordering::Relaxed);
            }
            0
        });
        SquareTable {
            field: k.clone(),
            pows,
            bits: bits.into_iter().map(AtomicU64::into_inner).collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Quadratic character by table lookup.
    #[inline]
    pub fn qchar(&self, v: &Fel) -> i8 {
        if v.is_zero() {
            return 0;
        }
        let i = index_of(v, self.field.degree(), &self.pows);
        if self.bits[i / 64] >> (i % 64) & 1 == 1 {
            1
        } else {
            -1
        }
    }
}

pub(crate) fn check_cap(k: &FieldDesc) -> Result<()> {
    if k.order() > COUNT_CAP {
        return Err(Error::CountingCapExceeded {
            order: k.order(),
            cap: COUNT_CAP,
        });
    }
    Ok(())
}

/// Evaluates a fixed set of polynomials at every element of a field.
pub struct Walker<'a> {
    field: &'a FieldDesc,
    polys: &'a [Poly],
    /// Digits handled by the difference table inside one chunk.
    low: usize,
    entries: Vec<Multi>,
    /// `prefix[j]`: number of entries supported on digits `0..j`.
    prefix: Vec<usize>,
    /// Per digit `j`: `(entry, entry + e_j)` in increasing order of the `j`-th index.
    steps: Vec<Vec<(usize, usize)>>,
    /// Per digit `j`, per entry: position of that entry with its `j`-th index set to `b`.
    lowered: Vec<Vec<Vec<usize>>>,
}

impl<'a> Walker<'a> {
    pub fn new(field: &'a FieldDesc, polys: &'a [Poly]) -> Walker<'a> {
        let n = field.degree();
        let p = field.p();
        let d = polys.iter().filter_map(Poly::degree).max().unwrap_or(0);
        let mut low = n;
        for l in 1..=n {
            if p.saturating_pow(l as u32) >= CHUNK_POINTS {
                low = l;
                break;
            }
        }

        // Multi-indices on `low` digits with total at most d, grouped by highest support digit.
        let mut entries: Vec<Multi> = vec![[0; MAX_DEGREE]];
        let mut prefix = vec![1usize];
        for j in 0..low {
            let mut next = Vec::new();
            for e in &entries {
                let used: usize = e.iter().map(|&v| v as usize).sum();
                for mj in 1..=(d - used.min(d)) {
                    let mut m = *e;
                    m[j] = mj as u8;
                    next.push(m);
                }
            }
            entries.extend(next);
            prefix.push(entries.len());
        }
        let pos: HashMap<Multi, usize> = entries.iter().enumerate().map(|(i, m)| (*m, i)).collect();

        let mut steps = Vec::with_capacity(low);
        let mut lowered = Vec::with_capacity(low);
        for j in 0..low {
            let mut s: Vec<(usize, usize)> = (0..prefix[j + 1])
                .filter_map(|i| {
                    let mut up = entries[i];
                    up[j] += 1;
                    pos.get(&up).map(|&t| (i, t))
                })
                .collect();
            s.sort_by_key(|&(i, _)| entries[i][j]);
            steps.push(s);
            lowered.push(
                entries
                    .iter()
                    .map(|m| {
                        (0..=m[j])
                            .map(|b| {
                                let mut mm = *m;
                                mm[j] = b;
                                pos[&mm]
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        Walker {
            field,
            polys,
            low,
            entries,
            prefix,
            steps,
            lowered,
        }
    }

    /// `sum_x visit(x, [f_1(x), ..])` over every `x` in the field, in parallel.
    pub fn sum<F>(&self, visit: F) -> i64
    where
        F: Fn(&Fel, &[Fel]) -> i64 + Sync,
    {
        let n = self.field.degree();
        let chunks = self.field.p().pow((n - self.low) as u32);
        (0..chunks)
            .into_par_iter()
            .map(|h| self.chunk_sum(h, &visit))
            .sum()
    }

    fn chunk_sum<F>(&self, high: u64, visit: &F) -> i64
    where
        F: Fn(&Fel, &[Fel]) -> i64,
    {
        let k = self.field;
        let n = k.degree();
        let p = k.p();
        let mut start = [0u64; MAX_DEGREE];
        let mut h = high;
        for slot in start.iter_mut().take(n).skip(self.low) {
            *slot = h % p;
            h /= p;
        }
        let x0 = k.from_digits(&start[..n]).expect("digit count matches degree");

        let np = self.polys.len();
        let ne = self.entries.len();
        // Table layout: entry-major, polynomial-minor.
        let mut table = vec![Fel::ZERO; ne * np];
        for (i, m) in self.entries.iter().enumerate() {
            let mut digits = start;
            for j in 0..self.low {
                digits[j] = m[j] as u64;
            }
            let x = k.from_digits(&digits[..n]).expect("digit count matches degree");
            for (pi, f) in self.polys.iter().enumerate() {
                table[i * np + pi] = f.eval(k, &x);
            }
        }
        // Forward differences along each digit: D[m] = sum_b (-1)^(m_j-b) C(m_j,b) V[m_j := b].
        for j in 0..self.low {
            let old = table.clone();
            for (i, m) in self.entries.iter().enumerate() {
                let mj = m[j] as usize;
                if mj == 0 {
                    continue;
                }
                for pi in 0..np {
                    let mut acc = Fel::ZERO;
                    for (b, &src) in self.lowered[j][i].iter().enumerate() {
                        let c = binomial(mj, b) % p;
                        let term = k.scale(&old[src * np + pi], c as u32);
                        acc = if (mj - b) % 2 == 0 { k.add(&acc, &term) } else { k.sub(&acc, &term) };
                    }
                    table[i * np + pi] = acc;
                }
            }
        }

        let mut saved: Vec<Vec<Fel>> = (0..self.low)
            .map(|j| vec![Fel::ZERO; self.prefix[j] * np])
            .collect();
        let mut x = x0;
        let mut acc = 0i64;
        self.walk(self.low - 1, &mut table, &mut saved, &mut x, visit, &mut acc);
        acc
    }

    fn walk<F>(
        &self,
        j: usize,
        table: &mut [Fel],
        saved: &mut [Vec<Fel>],
        x: &mut Fel,
        visit: &F,
        acc: &mut i64,
    ) where
        F: Fn(&Fel, &[Fel]) -> i64,
    {
        let k = self.field;
        let p = k.p() as u32;
        let np = self.polys.len();
        let one_at_j = {
            let mut digits = [0u64; MAX_DEGREE];
            digits[j] = 1;
            k.from_digits(&digits[..k.degree()]).expect("valid digits")
        };
        let base = *x;
        for dj in 0..p {
            if j == 0 {
                *acc += visit(x, &table[..np]);
            } else {
                let len = self.prefix[j] * np;
                saved[j].copy_from_slice(&table[..len]);
                self.walk(j - 1, table, saved, x, visit, acc);
                table[..len].copy_from_slice(&saved[j]);
            }
            if dj + 1 < p {
                for &(e, t) in &self.steps[j] {
                    for pi in 0..np {
                        let s = k.add(&table[e * np + pi], &table[t * np + pi]);
                        table[e * np + pi] = s;
                    }
                }
                *x = k.add(x, &one_at_j);
            }
        }
        *x = base;
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}
