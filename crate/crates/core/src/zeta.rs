//! Point counts of the genus-3 cover over `F_{q^k}` and the L-polynomial they
//! determine, compared against `∏ (T^2 + t_i T + q)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::construct::Genus3Cover;
use crate::ecurve::trace_power_sum;
use crate::error::{Error, Result};
use crate::ff::{embedding, make_field, Fel, Field, Poly};
use crate::kernel::{SquareTable, Walker};
use crate::legendre::ProjPoint;

/// `P(T) = c_0 + c_1 T + .. + c_6 T^6` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    coeffs: Vec<BigInt>,
}

impl LPoly {
    pub fn new(coeffs: Vec<BigInt>) -> LPoly {
        LPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `c_{6-i} = q^{3-i} c_i` for `i = 0..3` and `c_0 = 1`.
    pub fn satisfies_functional_equation(&self, q: u64) -> bool {
        if self.coeffs.len() != 7 || !self.coeffs[0].is_one() {
            return false;
        }
        let q = BigInt::from(q);
        (0..=3).all(|i| self.coeffs[6 - i] == q.pow(3 - i as u32) * &self.coeffs[i])
    }

    /// `T^6 P(1/T)`.
    pub fn reversal(&self) -> Vec<BigInt> {
        let mut c = self.coeffs.clone();
        c.resize(7, BigInt::zero());
        c.reverse();
        c
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The characteristic polynomial `∏ (T^2 + t_i T + q)` and its reversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub q: u64,
    pub traces: [i64; 3],
    /// Constant term first; monic of degree 6.
    pub char_coeffs: Vec<BigInt>,
    pub lpoly: LPoly,
}

impl CharPoly {
    pub fn from_traces(q: u64, traces: [i64; 3]) -> CharPoly {
        let char_coeffs = traces.iter().fold(vec![BigInt::one()], |acc, &t| {
            poly_mul(&acc, &[BigInt::from(q), BigInt::from(t), BigInt::one()])
        });
        let mut rev = char_coeffs.clone();
        rev.reverse();
        let lpoly = LPoly::new(rev);
        debug_assert!(lpoly.satisfies_functional_equation(q));
        CharPoly { q, traces, char_coeffs, lpoly }
    }
}

pub fn claimed_char_poly(q: u64, traces: [i64; 3]) -> CharPoly {
    CharPoly::from_traces(q, traces)
}

/// `q^k + 1 - Σ s_k(t_i)`.
pub fn expected_count(q: u64, traces: [i64; 3], k: usize) -> BigInt {
    let qk = BigInt::from(q).pow(k as u32);
    traces
        .iter()
        .fold(qk + 1, |acc, &t| acc - trace_power_sum(t, q, k))
}

/// Smallest `K >= 3` with `q^K >= 10^5`, capped at 6.
pub fn default_k(q: u64) -> usize {
    (3..=6)
        .find(|&k| (q as u128).pow(k as u32) >= 100_000)
        .unwrap_or(6)
}

/// The cover's polynomials over `F_{q^k}` with the matching square table.
struct Splitting {
    field: Field,
    f: [Poly; 3],
    squares: std::sync::Arc<SquareTable>,
}

impl Splitting {
    fn new(cover: &Genus3Cover, k: usize) -> Result<Splitting> {
        if !(1..=6).contains(&k) {
            return Err(Error::Precondition(format!("extension degree {k} not in 1..=6")));
        }
        let base = cover.base();
        let field = make_field(base.p(), base.degree() * k)?;
        let squares = SquareTable::for_field(&field)?;
        let emb = embedding(base, &field)?;
        let f = cover.polys().clone().map(|g| g.map(|c| emb.apply(c)));
        Ok(Splitting { field, f, squares })
    }

    /// Degree-one places above `x0`: each `f_i` contributes a valuation and a
    /// unit residue; subsets with even total valuation form a subgroup, and the
    /// place splits completely in it exactly when every residue product there
    /// is a square.
    fn places(&self, x0: &ProjPoint) -> Result<u32> {
        let k = &self.field;
        let mut val = [0usize; 3];
        let mut res = [Fel::ZERO; 3];
        for i in 0..3 {
            (val[i], res[i]) = match x0 {
                ProjPoint::Finite(x) => self.f[i].valuation_at(k, x)?,
                ProjPoint::Infinity => {
                    let f = &self.f[i];
                    (f.degree().ok_or(Error::ZeroPolynomial)?, *f.lead().expect("nonzero"))
                }
            };
        }
        let mut even = 0u32;
        let mut ramified = false;
        for mask in 0u8..8 {
            let members = (0..3).filter(|i| mask >> i & 1 == 1);
            let v: usize = members.clone().map(|i| val[i]).sum();
            if v % 2 == 1 {
                ramified = true;
                continue;
            }
            let r = members.fold(k.one(), |acc, i| k.mul(&acc, &res[i]));
            if self.squares.qchar(&r) != 1 {
                return Ok(0);
            }
            even += 1;
        }
        debug_assert!(!ramified || even == 4, "ramified place with {even} split subsets");
        Ok(even)
    }
}

/// Number of `F_{q^k}`-rational points of the cover above `x0`, a point of
/// the line over `F_{q^k}`.
pub fn local_splitting(cover: &Genus3Cover, x0: &ProjPoint, k: usize) -> Result<u32> {
    Splitting::new(cover, k)?.places(x0)
}

/// `N_k`, the number of `F_{q^k}`-points on the smooth model of the cover.
pub fn count_cover(cover: &Genus3Cover, k: usize) -> Result<u64> {
    let s = Splitting::new(cover, k)?;
    let affine = Walker::new(&s.field, &s.f).sum(|x, v| {
        if v.iter().any(Fel::is_zero) {
            return s.places(&ProjPoint::Finite(*x)).expect("nonzero polynomials") as i64;
        }
        v.iter().map(|y| 1 + s.squares.qchar(y) as i64).product()
    });
    Ok((affine + s.places(&ProjPoint::Infinity)? as i64) as u64)
}

/// Newton's identities on `S_k = q^k + 1 - N_k`, requiring exact division and
/// the genus-3 functional equation.
pub fn reconstruct_lpoly(counts: &[u64], q: u64) -> Result<LPoly> {
    if counts.len() < 6 {
        return Err(Error::Precondition(format!("need 6 counts, got {}", counts.len())));
    }
    let qb = BigInt::from(q);
    let s: Vec<BigInt> = counts[..6]
        .iter()
        .enumerate()
        .map(|(i, &n)| qb.pow(i as u32 + 1) + 1 - BigInt::from(n))
        .collect();
    let mut e = vec![BigInt::one()];
    for k in 1..=6usize {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let kb = BigInt::from(k);
        if !(&acc % &kb).is_zero() {
            return Err(Error::NotGenus3(format!("inexact division at k = {k}")));
        }
        e.push(acc / kb);
    }
    let coeffs: Vec<BigInt> = e
        .into_iter()
        .enumerate()
        .map(|(k, ek)| if k % 2 == 1 { -ek } else { ek })
        .collect();
    let lp = LPoly::new(coeffs);
    if !lp.satisfies_functional_equation(q) {
        return Err(Error::NotGenus3("functional equation fails".into()));
    }
    Ok(lp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    CountMismatch(usize),
    PolyMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaReport {
    pub q: u64,
    pub counts: Vec<u64>,
    pub expected: Vec<BigInt>,
    pub reconstructed: Option<LPoly>,
    pub claimed: CharPoly,
    pub verdict: Verdict,
}

/// Counts the cover over `F_{q^k}` for `k = 1..=max_k` and compares with the
/// counts and (for `max_k = 6`) the L-polynomial implied by `traces`.
pub fn verify(cover: &Genus3Cover, traces: [i64; 3], max_k: usize) -> Result<ZetaReport> {
    if !(1..=6).contains(&max_k) {
        return Err(Error::Precondition(format!("K = {max_k} not in 1..=6")));
    }
    let q = cover.q();
    let claimed = CharPoly::from_traces(q, traces);
    let counts: Vec<u64> = (1..=max_k).map(|k| count_cover(cover, k)).collect::<Result<_>>()?;
    let expected: Vec<BigInt> = (1..=max_k).map(|k| expected_count(q, traces, k)).collect();
    let mismatch = counts
        .iter()
        .zip(&expected)
        .position(|(n, e)| BigInt::from(*n) != *e);
    let reconstructed = (max_k == 6).then(|| reconstruct_lpoly(&counts, q).ok()).flatten();
    let verdict = match mismatch {
        Some(i) => Verdict::CountMismatch(i + 1),
        None if max_k == 6 && reconstructed.as_ref() != Some(&claimed.lpoly) => Verdict::PolyMismatch,
        None => Verdict::Match,
    };
    Ok(ZetaReport { q, counts, expected, reconstructed, claimed, verdict })
}
