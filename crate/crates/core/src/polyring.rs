//! Univariate polynomials over `F_q` and their factorization.
//!
//! Factorization runs the usual three stages: square-free decomposition (with
//! the characteristic-2 step that takes square roots of polynomials in `t^2`),
//! distinct-degree factorization, and equal-degree splitting with the additive
//! trace map `h + h^2 + h^4 + ... + h^(q^d/2)` in place of the odd-characteristic
//! exponent `(q^d - 1)/2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense;
use crate::error::{Error, Result};
use crate::gf2k::{FieldElem, Gf2k};

/// A polynomial in `t` over `F_q`, coefficients ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Gf2k,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero(field: Gf2k) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Gf2k) -> Self {
        Self::constant(field, FieldElem::ONE)
    }

    pub fn constant(field: Gf2k, c: FieldElem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The indeterminate `t`.
    pub fn t(field: Gf2k) -> Self {
        Self::monomial(field, FieldElem::ONE, 1)
    }

    pub fn monomial(field: Gf2k, c: FieldElem, degree: usize) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: Gf2k, coeffs: Vec<FieldElem>) -> Self {
        debug_assert!(coeffs.iter().all(|c| field.contains(*c)));
        Poly {
            field,
            coeffs: dense::trimmed(coeffs),
        }
    }

    /// Coefficients from bit patterns, ascending degree.
    pub fn from_bits(field: Gf2k, bits: &[u8]) -> Self {
        Self::from_coeffs(field, bits.iter().map(|b| FieldElem::from_bits(*b)).collect())
    }

    pub fn field(&self) -> Gf2k {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, convenient in valuation arithmetic.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn monic(&self) -> Poly {
        Poly {
            field: self.field,
            coeffs: dense::monic(self.field, &self.coeffs),
        }
    }

    pub fn scale(&self, c: FieldElem) -> Poly {
        Poly {
            field: self.field,
            coeffs: dense::scale(self.field, &self.coeffs, c),
        }
    }

    pub fn divmod(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = dense::divrem(self.field, &self.coeffs, &rhs.coeffs);
        Ok((Poly::from_coeffs(self.field, q), Poly::from_coeffs(self.field, r)))
    }

    pub fn rem(&self, rhs: &Poly) -> Poly {
        self.divmod(rhs).expect("nonzero modulus").1
    }

    /// Exact quotient; panics in debug builds if the division leaves a remainder.
    pub fn exact_div(&self, rhs: &Poly) -> Poly {
        let (q, r) = self.divmod(rhs).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, rhs: &Poly) -> bool {
        !self.is_zero() && rhs.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        Poly::from_coeffs(self.field, dense::gcd(self.field, &self.coeffs, &rhs.coeffs))
    }

    /// `(g, s, t)` with `s*self + t*rhs = g` monic.
    pub fn ext_gcd(&self, rhs: &Poly) -> (Poly, Poly, Poly) {
        let (g, s, t) = dense::ext_gcd(self.field, &self.coeffs, &rhs.coeffs);
        let f = self.field;
        (
            Poly::from_coeffs(f, g),
            Poly::from_coeffs(f, s),
            Poly::from_coeffs(f, t),
        )
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(self.field, dense::derivative(&self.coeffs))
    }

    pub fn square(&self) -> Poly {
        // Frobenius is additive: (sum c_i t^i)^2 = sum c_i^2 t^(2i)
        let mut coeffs = vec![FieldElem::ZERO; (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = self.field.square(*c);
        }
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, c| f.add(f.mul(acc, x), *c))
    }

    /// Coefficients reversed with respect to `degree`: `t^degree * p(1/t)`.
    pub fn reversed(&self, degree: usize) -> Poly {
        debug_assert!(self.degree().is_none_or(|d| d <= degree));
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, FieldElem::ZERO);
        coeffs.reverse();
        Poly::from_coeffs(self.field, coeffs)
    }

    /// `Some(g)` with `g^2 = self`, or `None` if `self` is not a square.
    pub fn square_root(&self) -> Option<Poly> {
        dense::sqrt(self.field, &self.coeffs).map(|c| Poly::from_coeffs(self.field, c))
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(dense::is_irreducible(self.field, &self.coeffs))
    }

    /// Multiplicity of the irreducible `p` in `self` (`self` nonzero).
    pub fn multiplicity(&self, p: &Poly) -> usize {
        debug_assert!(!self.is_zero());
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divmod(p).expect("nonzero");
            if !r.is_zero() {
                return n;
            }
            cur = q;
            n += 1;
        }
    }

    pub fn factorize(&self, seed: u64) -> Result<Factorization> {
        factorize(self, seed)
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.field, rhs.field);
        Poly {
            field: self.field,
            coeffs: dense::add(self.field, &self.coeffs, &rhs.coeffs),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.field, rhs.field);
        Poly {
            field: self.field,
            coeffs: dense::mul(self.field, &self.coeffs, &rhs.coeffs),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

pub(crate) fn format_field_elem(c: FieldElem) -> String {
    let b = c.bits();
    if b <= 1 {
        return b.to_string();
    }
    (0..8)
        .rev()
        .filter(|i| b >> i & 1 == 1)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect::<Vec<_>>()
        .join("+")
}

impl Poly {
    pub(crate) fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Poly {
    /// Sparse form, e.g. `t^3 + g*t + 1` or `(g+1)*t^2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = format_field_elem(*c);
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            terms.push(match (i, c.is_one(), c.bits().count_ones() > 1) {
                (0, _, _) => coeff,
                (_, true, _) => mono,
                (_, false, true) => format!("({coeff})*{mono}"),
                (_, false, false) => format!("{coeff}*{mono}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Operations accepted by [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    DivMod,
    Gcd,
    /// Derivative of the left operand.
    Derivative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyResult {
    Single(Poly),
    Pair(Poly, Poly),
}

pub fn poly_arith(lhs: &Poly, rhs: &Poly, op: PolyOp) -> Result<PolyResult> {
    if lhs.field != rhs.field {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        PolyOp::Add => PolyResult::Single(lhs + rhs),
        PolyOp::Mul => PolyResult::Single(lhs * rhs),
        PolyOp::DivMod => {
            let (q, r) = lhs.divmod(rhs)?;
            PolyResult::Pair(q, r)
        }
        PolyOp::Gcd => PolyResult::Single(lhs.gcd(rhs)),
        PolyOp::Derivative => PolyResult::Single(lhs.derivative()),
    })
}

/// `f = unit * prod p_i^e_i` with monic irreducible `p_i`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self, field: Gf2k) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (p, e)| &acc * &p.pow(*e as u64))
    }
}

fn square_free_parts(f: &Poly, mult: usize, out: &mut Vec<(Poly, usize)>) {
    if f.is_constant() {
        return;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i * mult));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        let root = c.square_root().expect("remaining part is a polynomial in t^2");
        square_free_parts(&root, 2 * mult, out);
    }
}

/// `x^(q^d) mod g` from `x^(q^(d-1)) mod g`.
fn frobenius_step(h: &Poly, g: &Poly) -> Poly {
    let f = g.field();
    Poly::from_coeffs(f, dense::square_times_mod(f, h.coeffs(), f.k() as usize, g.coeffs()))
}

fn distinct_degree(g: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut g = g.clone();
    let x = Poly::t(g.field());
    let mut h = x.rem(&g);
    let mut d = 1;
    while g.degree().unwrap_or(0) >= 2 * d {
        h = frobenius_step(&h, &g);
        let part = g.gcd(&(&h + &x));
        if !part.is_one() {
            g = g.exact_div(&part);
            h = h.rem(&g);
            out.push((part, d));
        }
        d += 1;
    }
    if g.degree().unwrap_or(0) >= 1 {
        let d = g.degree().unwrap();
        out.push((g, d));
    }
    out
}

fn equal_degree(g: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = g.degree().expect("nonzero");
    if n == d {
        out.push(g.clone());
        return;
    }
    let field = g.field();
    let steps = d * field.k() as usize;
    loop {
        let coeffs: Vec<_> = (0..n)
            .map(|_| FieldElem::from_bits(rng.gen_range(0..field.order()) as u8))
            .collect();
        let h = Poly::from_coeffs(field, coeffs);
        if h.is_constant() {
            continue;
        }
        // absolute trace map modulo g: lands in F_2 modulo each factor
        let mut tr = h.clone();
        let mut cur = h;
        for _ in 1..steps {
            cur = Poly::from_coeffs(field, dense::mulmod(field, cur.coeffs(), cur.coeffs(), g.coeffs()));
            tr = &tr + &cur;
        }
        let u = g.gcd(&tr);
        let du = u.degree().unwrap_or(0);
        if du > 0 && du < n {
            let v = g.exact_div(&u);
            equal_degree(&u, d, rng, out);
            equal_degree(&v, d, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles; `seed` fixes the random
/// choices of equal-degree splitting.
pub fn factorize(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = f.leading_coeff();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sqf = Vec::new();
    square_free_parts(&f.monic(), 1, &mut sqf);
    let mut factors: Vec<(Poly, usize)> = Vec::new();
    for (part, mult) in sqf {
        for (block, d) in distinct_degree(&part) {
            let mut irr = Vec::new();
            equal_degree(&block, d, &mut rng, &mut irr);
            for p in irr {
                match factors.iter_mut().find(|(q, _)| *q == p) {
                    Some(entry) => entry.1 += mult,
                    None => factors.push((p, mult)),
                }
            }
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Monic irreducible polynomials of the given degree, in [`Poly`] order.
pub fn monic_irreducibles(field: Gf2k, degree: usize) -> impl Iterator<Item = Poly> {
    let q = field.order() as u128;
    let count = q.checked_pow(degree as u32).unwrap_or(u128::MAX);
    (0..count).filter_map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(FieldElem::from_bits((idx % q) as u8));
            idx /= q;
        }
        coeffs.push(FieldElem::ONE);
        let p = Poly::from_coeffs(field, coeffs);
        dense::is_irreducible(field, p.coeffs()).then_some(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Gf2k {
        Gf2k::f2()
    }

    fn p2(bits: &[u8]) -> Poly {
        Poly::from_bits(f2(), bits)
    }

    #[test]
    fn arithmetic_examples() {
        // gcd(t^2 + t, t) = t
        assert_eq!(p2(&[0, 1, 1]).gcd(&p2(&[0, 1])), p2(&[0, 1]));
        // (t^2 + 1)' = 0
        assert!(p2(&[1, 0, 1]).derivative().is_zero());
        // t^3 = (t^2 + t + 1)(t + 1) + 1
        let (q, r) = p2(&[0, 0, 0, 1]).divmod(&p2(&[1, 1])).unwrap();
        assert_eq!(q, p2(&[1, 1, 1]));
        assert_eq!(r, p2(&[1]));
        assert_eq!(p2(&[1]).divmod(&Poly::zero(f2())), Err(Error::DivisionByZero));
        match poly_arith(&p2(&[0, 0, 0, 1]), &p2(&[1, 1]), PolyOp::DivMod).unwrap() {
            PolyResult::Pair(q2, r2) => assert_eq!((q2, r2), (q, r)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn long_division_oracle() {
        // multiply back: q * b + r == a with deg r < deg b
        let a = p2(&[1, 0, 1, 1, 0, 1, 1]);
        let b = p2(&[1, 1, 0, 1]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn factorization_examples() {
        let fac = p2(&[0, 1, 1]).factorize(0).unwrap();
        assert_eq!(fac.factors, vec![(p2(&[0, 1]), 1), (p2(&[1, 1]), 1)]);
        let fac = p2(&[0, 0, 1]).factorize(0).unwrap();
        assert_eq!(fac.factors, vec![(p2(&[0, 1]), 2)]);
        let fac = p2(&[1, 1, 0, 0, 1]).factorize(0).unwrap();
        assert_eq!(fac.factors, vec![(p2(&[1, 1, 0, 0, 1]), 1)]);
        assert_eq!(Poly::zero(f2()).factorize(0), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn t4_t_1_has_no_factor_of_degree_at_most_two() {
        // exhaustive trial division oracle
        let f = p2(&[1, 1, 0, 0, 1]);
        for bits in 2u8..8 {
            let d: Vec<u8> = (0..3).map(|i| bits >> i & 1).collect();
            assert!(!f.rem(&p2(&d)).is_zero());
        }
        assert!(f.is_irreducible().unwrap());
    }

    #[test]
    fn irreducibility_examples() {
        assert!(p2(&[1, 1, 1]).is_irreducible().unwrap());
        assert!(!p2(&[1, 0, 1]).is_irreducible().unwrap());
        assert!(Poly::t(Gf2k::new(2).unwrap()).is_irreducible().unwrap());
        assert_eq!(Poly::zero(f2()).is_irreducible(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn square_test_examples() {
        assert_eq!(p2(&[1, 0, 1]).square_root(), Some(p2(&[1, 1])));
        assert_eq!(p2(&[0, 1]).square_root(), None);
        assert_eq!(p2(&[0, 0, 1, 0, 1]).square_root(), Some(p2(&[0, 1, 1])));
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n over F_q is (1/n) sum_{d|n} mu(d) q^(n/d)
        let expected_f2 = [2, 1, 2, 3, 6, 9];
        for (i, e) in expected_f2.iter().enumerate() {
            assert_eq!(monic_irreducibles(f2(), i + 1).count(), *e);
        }
        let f4 = Gf2k::new(2).unwrap();
        assert_eq!(monic_irreducibles(f4, 1).count(), 4);
        assert_eq!(monic_irreducibles(f4, 2).count(), 6);
        assert_eq!(monic_irreducibles(f4, 3).count(), 20);
        let list: Vec<_> = monic_irreducibles(f2(), 4).collect();
        let mut sorted = list.clone();
        sorted.sort();
        assert_eq!(list, sorted);
    }

    #[test]
    fn display_is_sparse() {
        let f4 = Gf2k::new(2).unwrap();
        let g = f4.generator();
        let p = Poly::from_coeffs(f4, vec![FieldElem::ONE, g, FieldElem::ZERO, f4.add(g, FieldElem::ONE)]);
        assert_eq!(p.to_string(), "(g+1)*t^3 + g*t + 1");
        assert_eq!(Poly::zero(f4).to_string(), "0");
        assert_eq!(p2(&[1, 1]).to_string(), "t + 1");
    }

    fn arb_poly(max_k: u32, max_deg: usize) -> impl Strategy<Value = Poly> {
        (1..=max_k, proptest::collection::vec(any::<u8>(), 0..=max_deg + 1)).prop_map(|(k, raw)| {
            let f = Gf2k::new(k).unwrap();
            let mask = (f.order() - 1) as u8;
            Poly::from_coeffs(f, raw.into_iter().map(|b| FieldElem::from_bits(b & mask)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn factorization_remultiplies(p in arb_poly(4, 12), seed in any::<u64>()) {
            prop_assume!(!p.is_zero());
            let fac = p.factorize(seed).unwrap();
            prop_assert_eq!(fac.expand(p.field()), p.clone());
            for (q, e) in &fac.factors {
                prop_assert!(q.is_monic());
                prop_assert!(q.is_irreducible().unwrap());
                prop_assert!(*e >= 1);
            }
            let mut sorted = fac.factors.clone();
            sorted.sort();
            prop_assert_eq!(&sorted, &fac.factors);
            // deterministic in (f, seed), and the factor set does not depend on the seed
            prop_assert_eq!(p.factorize(seed).unwrap(), fac.clone());
            prop_assert_eq!(p.factorize(seed ^ 0x5555).unwrap(), fac);
        }

        #[test]
        fn squares_have_roots(p in arb_poly(8, 8)) {
            let sq = &p * &p;
            let root = sq.square_root().unwrap();
            prop_assert_eq!(&root * &root, sq);
            prop_assert_eq!(p.square(), &p * &p);
        }

        #[test]
        fn degrees_add(a in arb_poly(1, 10), b in arb_poly(1, 10)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
        }

        #[test]
        fn derivative_of_square_vanishes(p in arb_poly(3, 10)) {
            prop_assert!(p.square().derivative().is_zero());
        }
    }
}
