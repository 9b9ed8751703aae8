//! Dense polynomial kernels over `F_q` on coefficient slices (ascending
//! degree, no trailing zeros after `trimmed`). Shared by the extension-field
//! and polynomial-ring layers.

use crate::gf2k::{FieldElem, Gf2k};

pub(crate) fn trimmed(mut a: Vec<FieldElem>) -> Vec<FieldElem> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[FieldElem]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn scale(f: Gf2k, a: &[FieldElem], c: FieldElem) -> Vec<FieldElem> {
    trimmed(a.iter().map(|x| f.mul(*x, c)).collect())
}

pub(crate) fn add(f: Gf2k, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = f.add(*o, *s);
    }
    trimmed(out)
}

pub(crate) fn mul(f: Gf2k, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(*x, *y));
        }
    }
    trimmed(out)
}

/// Long division; `b` must be nonzero.
pub(crate) fn divrem(f: Gf2k, a: &[FieldElem], b: &[FieldElem]) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = trimmed(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![FieldElem::ZERO; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        q[dr - db] = c;
        for (i, y) in b[..=db].iter().enumerate() {
            r[dr - db + i] = f.add(r[dr - db + i], f.mul(c, *y));
        }
    }
    (trimmed(q), trimmed(r))
}

pub(crate) fn rem(f: Gf2k, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    divrem(f, a, b).1
}

pub(crate) fn monic(f: Gf2k, a: &[FieldElem]) -> Vec<FieldElem> {
    match a.last() {
        Some(lc) => scale(f, a, f.inv(*lc).unwrap()),
        None => Vec::new(),
    }
}

pub(crate) fn gcd(f: Gf2k, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut a = trimmed(a.to_vec());
    let mut b = trimmed(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Returns `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
pub(crate) fn ext_gcd(f: Gf2k, a: &[FieldElem], b: &[FieldElem]) -> (Vec<FieldElem>, Vec<FieldElem>, Vec<FieldElem>) {
    let (mut r0, mut r1) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    let (mut s0, mut s1) = (vec![FieldElem::ONE], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![FieldElem::ONE]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = add(f, &s0, &mul(f, &q, &s1));
        let t = add(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        Some(&lc) => {
            let inv = f.inv(lc).unwrap();
            (scale(f, &r0, inv), scale(f, &s0, inv), scale(f, &t0, inv))
        }
        None => (r0, s0, t0),
    }
}

pub(crate) fn mulmod(f: Gf2k, a: &[FieldElem], b: &[FieldElem], m: &[FieldElem]) -> Vec<FieldElem> {
    rem(f, &mul(f, a, b), m)
}

/// `a^(2^times) mod m`.
pub(crate) fn square_times_mod(f: Gf2k, a: &[FieldElem], times: usize, m: &[FieldElem]) -> Vec<FieldElem> {
    let mut y = rem(f, a, m);
    for _ in 0..times {
        y = mulmod(f, &y, &y, m);
    }
    y
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `p` of degree `n` is irreducible iff `x^(q^n) = x mod p`
/// and `gcd(x^(q^(n/r)) - x, p) = 1` for every prime `r | n`.
pub(crate) fn is_irreducible(f: Gf2k, p: &[FieldElem]) -> bool {
    let Some(n) = degree(p) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let k = f.k() as usize;
    let x = vec![FieldElem::ZERO, FieldElem::ONE];
    // frob[i] = x^(q^i) mod p
    let mut frob = vec![rem(f, &x, p)];
    for i in 0..n {
        let next = square_times_mod(f, &frob[i], k, p);
        frob.push(next);
    }
    if frob[n] != rem(f, &x, p) {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let h = add(f, &frob[n / r], &x);
        gcd(f, &h, p).len() == 1
    })
}

/// Coefficient-wise square root of a polynomial in `t^2`; `None` if an odd
/// coefficient is nonzero.
pub(crate) fn sqrt(f: Gf2k, a: &[FieldElem]) -> Option<Vec<FieldElem>> {
    if a.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return None;
    }
    Some(trimmed(a.iter().step_by(2).map(|c| f.sqrt(*c)).collect()))
}

pub(crate) fn derivative(a: &[FieldElem]) -> Vec<FieldElem> {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| if i % 2 == 1 { *c } else { FieldElem::ZERO })
            .collect(),
    )
}
