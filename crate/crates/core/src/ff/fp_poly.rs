//! Dense polynomials over a prime field, used only to pick field moduli.

type P = Vec<u64>;

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn mulmod(a: &P, b: &P, m: &P, p: u64) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(prod, m, p)
}

fn rem(mut a: P, m: &P, p: u64) -> P {
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    a = trim(a);
    while a.len() > dm {
        let k = a.len() - 1;
        let c = a[k] * lead_inv % p;
        for j in 0..=dm {
            let idx = k - dm + j;
            a[idx] = (a[idx] + (p - c) * m[j]) % p;
        }
        a = trim(a);
    }
    a
}

fn gcd(a: P, b: P, p: u64) -> P {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod(base: &P, mut e: u64, m: &P, p: u64) -> P {
    let mut acc = vec![1u64];
    let mut b = rem(base.clone(), m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(&b, &b, m, p);
        }
    }
    acc
}

/// `x^{p^d} - x mod m`.
fn frob_minus_x(m: &P, d: usize, p: u64) -> P {
    let mut h = rem(vec![0, 1], m, p);
    for _ in 0..d {
        h = pow_mod(&h, p, m, p);
    }
    let mut out = h;
    if out.len() < 2 {
        out.resize(2, 0);
    }
    out[1] = (out[1] + p - 1) % p;
    trim(out)
}

/// Irreducibility over `F_p`: `x^{p^n} = x mod m` and `gcd(x^{p^d} - x, m) = 1`
/// for every proper divisor `d` of `n`.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let m = trim(m.to_vec());
    let n = match m.len() {
        0 | 1 => return false,
        l => l - 1,
    };
    if n == 1 {
        return true;
    }
    if !frob_minus_x(&m, n, p).is_empty() {
        return false;
    }
    (1..n)
        .filter(|d| n % d == 0)
        .all(|d| gcd(m.clone(), frob_minus_x(&m, d, p), p).len() == 1)
}

/// The first monic irreducible of degree `n`, scanning `(c_0, .., c_{n-1})` lexicographically.
pub(crate) fn smallest_irreducible(p: u32, n: usize) -> Vec<u32> {
    let p64 = p as u64;
    // A zero constant term means x divides the candidate; start past that block.
    let mut coeffs = vec![0u64; n];
    coeffs[0] = 1;
    loop {
        let mut m = coeffs.clone();
        m.push(1);
        if coeffs[0] != 0 && is_irreducible(&m, p64) {
            return m.into_iter().map(|c| c as u32).collect();
        }
        // c_{n-1} is the least significant position.
        let mut i = n;
        loop {
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p64 {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "irreducible polynomials of every degree exist");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducible iff no monic factor of degree <= n/2 divides it.
    fn irreducible_by_trial_division(m: &[u64], p: u64) -> bool {
        let n = m.len() - 1;
        for d in 1..=n / 2 {
            let total = p.pow(d as u32);
            for idx in 0..total {
                let mut f = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    f.push(k % p);
                    k /= p;
                }
                f.push(1);
                if rem(m.to_vec(), &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn matches_trial_division() {
        for p in [3u64, 5, 7] {
            for n in 2..=4usize {
                for idx in 0..p.pow(n as u32) {
                    let mut m = Vec::new();
                    let mut k = idx;
                    for _ in 0..n {
                        m.push(k % p);
                        k /= p;
                    }
                    m.push(1);
                    assert_eq!(is_irreducible(&m, p), irreducible_by_trial_division(&m, p), "{m:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn smallest_quadratic_mod_7() {
        assert_eq!(smallest_irreducible(7, 2), vec![1, 0, 1]);
        // Mod 13: x^2+1, x^2+x+1, x^2+2x+1 split; x^2+3x+1 has discriminant 5, a non-square.
        assert_eq!(smallest_irreducible(13, 2), vec![1, 3, 1]);
    }
}
