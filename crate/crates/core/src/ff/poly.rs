use std::fmt;

use super::field::{Fel, FieldDesc};
use crate::error::{Error, Result};

/// Dense univariate polynomial over a [`FieldDesc`], constant term first,
/// without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<Fel>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fel>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fel) -> Poly {
        Poly::new(vec![c])
    }

    /// `x - r`.
    pub fn linear(k: &FieldDesc, r: &Fel) -> Poly {
        Poly::new(vec![k.neg(r), k.one()])
    }

    /// Polynomial with small-integer coefficients, constant first.
    pub fn from_ints(k: &FieldDesc, ints: &[i64]) -> Poly {
        Poly::new(ints.iter().map(|&v| k.from_int(v)).collect())
    }

    /// Monic polynomial `prod (x - r)`.
    pub fn from_roots(k: &FieldDesc, roots: &[Fel]) -> Poly {
        roots
            .iter()
            .fold(Poly::constant(k.one()), |acc, r| acc.mul(k, &Poly::linear(k, r)))
    }

    pub fn coeffs(&self) -> &[Fel] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Fel> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Fel {
        self.coeffs.get(i).copied().unwrap_or(Fel::ZERO)
    }

    pub fn eval(&self, k: &FieldDesc, x: &Fel) -> Fel {
        self.coeffs
            .iter()
            .rev()
            .fold(Fel::ZERO, |acc, c| k.add(&k.mul(&acc, x), c))
    }

    pub fn add(&self, k: &FieldDesc, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..len)
                .map(|i| k.add(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, k: &FieldDesc, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..len)
                .map(|i| k.sub(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &FieldDesc, c: &Fel) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, k: &FieldDesc, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fel::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self, k: &FieldDesc) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| k.scale(c, (i as u64 % k.p()) as u32))
                .collect(),
        )
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, k: &FieldDesc, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dl = divisor.lead().ok_or(Error::DivisionByZero)?;
        let inv = k.inv(dl).ok_or(Error::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Fel::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = k.mul(&rem[i + dd], &inv);
            if c.is_zero() {
                continue;
            }
            quot[i] = c;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = k.sub(&rem[i + j], &k.mul(&c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn monic(&self, k: &FieldDesc) -> Result<Poly> {
        let inv = k
            .inv(self.lead().ok_or(Error::ZeroPolynomial)?)
            .ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(k, &inv))
    }

    /// Monic greatest common divisor; errors when both inputs are zero.
    pub fn gcd(k: &FieldDesc, a: &Poly, b: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(k, &b)?;
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Square-free factorization: pairs `(g, m)` with `g` monic square-free,
    /// pairwise coprime, and `self = lead * prod g^m`. Handles `f' = 0` in
    /// characteristic `p` by extracting `p`-th roots.
    pub fn squarefree_factorization(&self, k: &FieldDesc) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic(k)?;
        let mut out = Vec::new();
        sff(k, &f, 1, &mut out)?;
        out.sort_by_key(|(_, m)| *m);
        Ok(out)
    }

    /// The radical: product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self, k: &FieldDesc) -> Result<Poly> {
        Ok(self
            .squarefree_factorization(k)?
            .into_iter()
            .fold(Poly::constant(k.one()), |acc, (g, _)| acc.mul(k, &g)))
    }

    /// Product of the irreducible factors of odd multiplicity, monic: the
    /// representative of `self` modulo squares and constants.
    pub fn square_class_part(&self, k: &FieldDesc) -> Result<Poly> {
        Ok(self
            .squarefree_factorization(k)?
            .into_iter()
            .filter(|(_, m)| m % 2 == 1)
            .fold(Poly::constant(k.one()), |acc, (g, _)| acc.mul(k, &g)))
    }

    pub fn is_squarefree(&self, k: &FieldDesc) -> Result<bool> {
        Ok(self.squarefree_factorization(k)?.iter().all(|(_, m)| *m == 1))
    }

    /// Roots in `k` with multiplicity, by exhaustive scan in enumeration order.
    pub fn roots_in(&self, k: &FieldDesc) -> Result<Vec<Fel>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut roots = Vec::new();
        let mut rest = self.clone();
        for x in k.elements() {
            if rest.degree() == Some(0) {
                break;
            }
            while rest.eval(k, &x).is_zero() {
                rest = rest.div_rem(k, &Poly::linear(k, &x))?.0;
                roots.push(x);
            }
        }
        Ok(roots)
    }

    /// Order of vanishing at `x` and the value of `self / (X - x)^v` at `x`.
    pub fn valuation_at(&self, k: &FieldDesc, x: &Fel) -> Result<(usize, Fel)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut v = 0;
        let mut rest = self.clone();
        loop {
            let val = rest.eval(k, x);
            if !val.is_zero() {
                return Ok((v, val));
            }
            rest = rest.div_rem(k, &Poly::linear(k, x))?.0;
            v += 1;
        }
    }

    /// Coefficient-wise image under a map of coefficient fields.
    pub fn map(&self, f: impl Fn(&Fel) -> Fel) -> Poly {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Coefficient-wise fallible image.
    pub fn try_map(&self, f: impl Fn(&Fel) -> Result<Fel>) -> Result<Poly> {
        Ok(Poly::new(self.coeffs.iter().map(f).collect::<Result<_>>()?))
    }
}

fn sff(k: &FieldDesc, f: &Poly, mult: usize, out: &mut Vec<(Poly, usize)>) -> Result<()> {
    if f.degree() == Some(0) {
        return Ok(());
    }
    let one = Poly::constant(k.one());
    let df = f.derivative(k);
    let mut c = Poly::gcd(k, f, &df)?;
    let mut w = f.div_rem(k, &c)?.0;
    let mut i = 1;
    while w != one {
        let y = Poly::gcd(k, &w, &c)?;
        let fac = w.div_rem(k, &y)?.0.monic(k)?;
        if fac != one {
            push_factor(k, out, fac, i * mult)?;
        }
        w = y;
        c = c.div_rem(k, &w)?.0;
        i += 1;
    }
    if c != one {
        let root = pth_root(k, &c);
        sff(k, &root, mult * k.p() as usize, out)?;
    }
    Ok(())
}

fn push_factor(k: &FieldDesc, out: &mut Vec<(Poly, usize)>, fac: Poly, m: usize) -> Result<()> {
    if let Some(slot) = out.iter_mut().find(|(_, mm)| *mm == m) {
        slot.0 = slot.0.mul(k, &fac).monic(k)?;
    } else {
        out.push((fac, m));
    }
    Ok(())
}

/// `g` with `g^p = f`, given `f' = 0`.
fn pth_root(k: &FieldDesc, f: &Poly) -> Poly {
    let p = k.p() as usize;
    let e = k.order() / k.p();
    Poly::new(
        f.coeffs
            .iter()
            .step_by(p)
            .map(|c| k.pow(c, e))
            .collect(),
    )
}
