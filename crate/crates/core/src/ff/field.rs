use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported extension degree over the prime field.
pub const MAX_DEGREE: usize = 12;

/// Element of `F_{p^n}` in the polynomial basis of its field's modulus.
///
/// Coefficients are stored constant term first; positions `>= n` are zero.
/// The derived ordering is lexicographic on the coefficient vector with the
/// constant term most significant, which is the enumeration order used for
/// every deterministic choice in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fel {
    c: [u32; MAX_DEGREE],
}

impl Fel {
    pub const ZERO: Fel = Fel { c: [0; MAX_DEGREE] };

    pub fn coeffs(&self) -> &[u32; MAX_DEGREE] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&d| d == 0)
    }

    /// Digits `c_0 .. c_{n-1}` for a field of degree `n`.
    pub fn digits(&self, n: usize) -> Vec<u32> {
        self.c[..n].to_vec()
    }
}

impl fmt::Debug for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.c.iter().rposition(|&d| d != 0).unwrap_or(0);
        write!(f, "{:?}", &self.c[..=last])
    }
}

/// A finite field `F_{p^n}` with `p` odd, presented as `F_p[x]/(m(x))`.
///
/// The modulus is the lexicographically smallest monic irreducible of degree
/// `n` (constant term most significant), so every derived quantity is
/// reproducible across runs. For `n = 1` the modulus is `x`.
pub struct FieldDesc {
    p: u32,
    n: usize,
    modulus: Vec<u32>,
    order: u64,
}

pub type Field = Arc<FieldDesc>;

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.n, self.modulus)
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}

impl Eq for FieldDesc {}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds (or fetches from the process-wide registry) the field `F_{p^n}`.
pub fn make_field(p: u64, n: usize) -> Result<Field> {
    if p == 2 || !is_prime(p) || p > (1 << 31) {
        return Err(Error::NotOddPrime(p));
    }
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    let order = p
        .checked_pow(n as u32)
        .filter(|&o| o < (1u64 << 62))
        .ok_or(Error::FieldTooLarge { p, n })?;

    static REGISTRY: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    let registry = REGISTRY.get_or_init(Default::default);
    if let Some(f) = registry.lock().unwrap().get(&(p, n)) {
        return Ok(f.clone());
    }
    let modulus = if n == 1 {
        vec![0, 1]
    } else {
        super::fp_poly::smallest_irreducible(p as u32, n)
    };
    let field = Arc::new(FieldDesc {
        p: p as u32,
        n,
        modulus,
        order,
    });
    Ok(registry
        .lock()
        .unwrap()
        .entry((p, n))
        .or_insert(field)
        .clone())
}

impl FieldDesc {
    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus, constant term first (length `n + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fel {
        Fel::ZERO
    }

    pub fn one(&self) -> Fel {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Fel {
        let mut c = [0; MAX_DEGREE];
        c[0] = v.rem_euclid(self.p as i64) as u32;
        Fel { c }
    }

    /// Element from base-`p` digits (constant first). Digits are reduced mod `p`.
    pub fn from_digits(&self, digits: &[u64]) -> Result<Fel> {
        if digits.len() > self.n {
            return Err(Error::InvalidModel(format!(
                "{} digits for a degree-{} field",
                digits.len(),
                self.n
            )));
        }
        let mut c = [0; MAX_DEGREE];
        for (slot, &d) in c.iter_mut().zip(digits) {
            *slot = (d % self.p as u64) as u32;
        }
        Ok(Fel { c })
    }

    /// The class of `x` in `F_p[x]/(m)`; for `n = 1` this is the root of `x`, i.e. zero.
    pub fn generator(&self) -> Fel {
        let mut c = [0; MAX_DEGREE];
        if self.n > 1 {
            c[1] = 1;
        }
        Fel { c }
    }

    /// The `index`-th element in enumeration order.
    pub fn element_at(&self, mut index: u64) -> Fel {
        let p = self.p as u64;
        let mut c = [0; MAX_DEGREE];
        for i in (0..self.n).rev() {
            c[i] = (index % p) as u32;
            index /= p;
        }
        Fel { c }
    }

    /// All field elements in enumeration order (ascending [`Fel`] order).
    pub fn elements(&self) -> impl Iterator<Item = Fel> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    /// The prime-field value of `u`, if `u` lies in `F_p`.
    pub fn as_prime(&self, u: &Fel) -> Option<u32> {
        u.c[1..].iter().all(|&d| d == 0).then_some(u.c[0])
    }

    pub fn add(&self, a: &Fel, b: &Fel) -> Fel {
        let p = self.p;
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.n {
            let s = a.c[i] as u64 + b.c[i] as u64;
            c[i] = if s >= p as u64 { (s - p as u64) as u32 } else { s as u32 };
        }
        Fel { c }
    }

    pub fn neg(&self, a: &Fel) -> Fel {
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.n {
            c[i] = if a.c[i] == 0 { 0 } else { self.p - a.c[i] };
        }
        Fel { c }
    }

    pub fn sub(&self, a: &Fel, b: &Fel) -> Fel {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Fel, s: u32) -> Fel {
        let p = self.p as u64;
        let s = s as u64 % p;
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.n {
            c[i] = (a.c[i] as u64 * s % p) as u32;
        }
        Fel { c }
    }

    pub fn mul(&self, a: &Fel, b: &Fel) -> Fel {
        let n = self.n;
        let p = self.p as u64;
        if n == 1 {
            let mut c = [0; MAX_DEGREE];
            c[0] = (a.c[0] as u64 * b.c[0] as u64 % p) as u32;
            return Fel { c };
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        // Products stay below 2^56 when p < 2^26, so sums need no reduction.
        let lazy = p < (1 << 26);
        for i in 0..n {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..n {
                let t = a.c[i] as u64 * b.c[j] as u64;
                prod[i + j] = if lazy { prod[i + j] + t } else { (prod[i + j] + t) % p };
            }
        }
        for k in (n..2 * n - 1).rev() {
            let top = prod[k] % p;
            if top == 0 {
                continue;
            }
            for j in 0..n {
                let m = self.modulus[j] as u64;
                if m != 0 {
                    prod[k - n + j] = (prod[k - n + j] % p + top * (p - m)) % p;
                }
            }
        }
        let mut c = [0; MAX_DEGREE];
        for i in 0..n {
            c[i] = (prod[i] % p) as u32;
        }
        Fel { c }
    }

    pub fn square(&self, a: &Fel) -> Fel {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &Fel, mut e: u64) -> Fel {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &Fel) -> Option<Fel> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order - 2))
        }
    }

    pub fn div(&self, a: &Fel, b: &Fel) -> Result<Fel> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    pub fn qchar(&self, a: &Fel) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.n == 1 {
            return legendre_symbol(a.c[0] as u64, self.p as u64);
        }
        let r = self.pow(a, (self.order - 1) / 2);
        if r == self.one() {
            1
        } else {
            -1
        }
    }

    /// `u^q`, the `q`-power Frobenius.
    pub fn frobenius(&self, a: &Fel, q: u64) -> Fel {
        self.pow(a, q)
    }

    /// The least non-square of `F_p`, viewed in this field.
    pub fn least_prime_nonsquare(&self) -> u32 {
        let p = self.p as u64;
        (2..p)
            .find(|&d| legendre_symbol(d, p) == -1)
            .expect("odd prime has a non-square") as u32
    }

    /// The least non-square of this field in enumeration order.
    pub fn least_nonsquare(&self) -> Fel {
        self.elements()
            .find(|u| self.qchar(u) == -1)
            .expect("odd-order field has a non-square")
    }
}

/// Legendre symbol `(a | p)` for an odd prime `p`, by Euler's criterion.
pub(crate) fn legendre_symbol(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut e = (p - 1) / 2;
    let mut base = a as u128;
    let mut acc: u128 = 1;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_and_errors() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.order(), 7);
        assert_eq!(f7.modulus(), &[0, 1]);
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotOddPrime(4));
        assert_eq!(make_field(2, 3).unwrap_err(), Error::NotOddPrime(2));
        assert_eq!(make_field(7, 0).unwrap_err(), Error::DegreeOutOfRange(0));
        assert_eq!(make_field(7, 13).unwrap_err(), Error::DegreeOutOfRange(13));
    }

    #[test]
    fn f49_modulus_is_x2_plus_1() {
        let f = make_field(7, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let z = f.generator();
        assert_eq!(f.square(&z), f.from_int(-1));
    }

    #[test]
    fn qchar_mod_7() {
        let f = make_field(7, 1).unwrap();
        assert_eq!(f.qchar(&f.zero()), 0);
        assert_eq!(f.qchar(&f.from_int(2)), 1);
        assert_eq!(f.qchar(&f.from_int(5)), -1);
    }

    #[test]
    fn frobenius_conjugates_i() {
        let f = make_field(7, 2).unwrap();
        let z = f.generator();
        assert_eq!(f.frobenius(&z, 7), f.neg(&z));
        let three = f.from_int(3);
        assert_eq!(f.frobenius(&three, 7), three);
        for u in f.elements() {
            assert_eq!(f.frobenius(&f.frobenius(&u, 7), 7), u);
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, n) in [(3, 1), (3, 2), (5, 2), (7, 2), (3, 3), (3, 4)] {
            let f = make_field(p, n).unwrap();
            let q = f.order();
            let elems: Vec<Fel> = f.elements().collect();
            assert_eq!(elems.len() as u64, q);
            for u in &elems {
                assert_eq!(f.pow(u, q), *u);
                if !u.is_zero() {
                    assert_eq!(f.mul(u, &f.inv(u).unwrap()), f.one());
                    assert_eq!(f.pow(u, q - 1), f.one());
                }
            }
            for u in elems.iter().step_by(3) {
                for v in elems.iter().step_by(5) {
                    let lhs = f.pow(&f.add(u, v), p);
                    let rhs = f.add(&f.pow(u, p), &f.pow(v, p));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn qchar_is_multiplicative_and_balanced() {
        for (p, n) in [(7, 1), (13, 1), (3, 2), (7, 2), (5, 2), (7, 4)] {
            let f = make_field(p, n).unwrap();
            let q = f.order();
            let squares = f.elements().filter(|u| f.qchar(u) == 1).count() as u64;
            assert_eq!(squares, (q - 1) / 2);
            let sample: Vec<Fel> = f.elements().filter(|u| !u.is_zero()).step_by(7).collect();
            for u in &sample {
                for v in &sample {
                    assert_eq!(f.qchar(&f.mul(u, v)), f.qchar(u) * f.qchar(v));
                }
            }
        }
    }
}
