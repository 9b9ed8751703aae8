//! Exact arithmetic in `F_q`, `q = 2^k` with `1 <= k <= 8`, and in extensions
//! `F_{q^d} = F_q[x]/(pi)`.
//!
//! Elements of `F_q` are stored as bit patterns in the polynomial basis of a
//! fixed modulus: the numerically smallest irreducible polynomial of degree `k`
//! over `F_2` with nonzero constant term. The class of `x` is called `g` and is
//! the generator used by the expression grammar.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::dense;
use crate::error::{Error, Result};

pub const MAX_K: u32 = 8;

/// A coordinate vector of an element of `F_q` over `F_2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElem(pub(crate) u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn from_bits(bits: u8) -> Self {
        FieldElem(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

struct Tables {
    modulus: u16,
    exp: Vec<u8>,
    log: Vec<u16>,
    sqrt: Vec<u8>,
    trace: Vec<u8>,
}

fn clmul_mod(mut a: u16, mut b: u16, modulus: u16, k: u32) -> u16 {
    let mut acc = 0u16;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << k) != 0 {
            a ^= modulus;
        }
    }
    acc
}

fn f2_poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn f2_poly_rem(mut a: u32, b: u32) -> u32 {
    let db = f2_poly_degree(b);
    while a != 0 && f2_poly_degree(a) >= db {
        a ^= b << (f2_poly_degree(a) - db);
    }
    a
}

fn f2_irreducible(p: u32) -> bool {
    let d = f2_poly_degree(p);
    if d <= 0 {
        return false;
    }
    (2u32..(1 << (d / 2 + 1))).all(|q| f2_poly_degree(q) > d / 2 || f2_poly_rem(p, q) != 0)
}

fn build_tables(k: u32) -> Tables {
    let modulus = ((1u32 << k)..(1u32 << (k + 1)))
        .find(|&p| p & 1 == 1 && f2_irreducible(p))
        .expect("an irreducible polynomial exists in every degree") as u16;
    let order = 1usize << k;
    let mul = |a: u16, b: u16| clmul_mod(a, b, modulus, k);
    let group = order - 1;
    let primitive = (1..order as u16)
        .find(|&g| {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = mul(x, g);
                n += 1;
            }
            n == group
        })
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u8; 2 * group];
    let mut log = vec![0u16; order];
    let mut x = 1u16;
    for i in 0..group {
        exp[i] = x as u8;
        exp[i + group] = x as u8;
        log[x as usize] = i as u16;
        x = mul(x, primitive);
    }
    let mut sqrt = vec![0u8; order];
    let mut trace = vec![0u8; order];
    for a in 0..order as u16 {
        sqrt[mul(a, a) as usize] = a as u8;
        let mut t = 0u16;
        let mut y = a;
        for _ in 0..k {
            t ^= y;
            y = mul(y, y);
        }
        debug_assert!(t <= 1);
        trace[a as usize] = t as u8;
    }
    Tables {
        modulus,
        exp,
        log,
        sqrt,
        trace,
    }
}

static TABLES: [OnceLock<Tables>; MAX_K as usize] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// Handle on the field `F_{2^k}`. Cheap to copy; all tables are immutable
/// and built once per `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2k {
    k: u8,
}

impl fmt::Debug for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_2^{}", self.k)
    }
}

impl Gf2k {
    pub fn new(k: u32) -> Result<Self> {
        if !(1..=MAX_K).contains(&k) {
            return Err(Error::UnsupportedField(k));
        }
        let field = Gf2k { k: k as u8 };
        let t = field.tables();
        debug_assert!(f2_irreducible(t.modulus as u32));
        Ok(field)
    }

    /// The prime field `F_2`.
    pub fn f2() -> Self {
        Gf2k::new(1).unwrap()
    }

    fn tables(&self) -> &'static Tables {
        TABLES[self.k as usize - 1].get_or_init(|| build_tables(self.k as u32))
    }

    pub fn k(&self) -> u32 {
        self.k as u32
    }

    /// Number of elements `q`.
    pub fn order(&self) -> usize {
        1 << self.k
    }

    /// Defining polynomial over `F_2`, as a bit pattern (bit `i` = coefficient of `x^i`).
    pub fn modulus(&self) -> u16 {
        self.tables().modulus
    }

    /// The class of `x` in `F_2[x]/(modulus)`.
    pub fn generator(&self) -> FieldElem {
        if self.k == 1 {
            FieldElem::ONE
        } else {
            FieldElem(2)
        }
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        (a.0 as usize) < self.order()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(|b| FieldElem(b as u8))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = self.tables();
        FieldElem(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = self.tables();
        let group = self.order() - 1;
        let l = t.log[a.0 as usize] as usize;
        Ok(FieldElem(t.exp[(group - l) % group]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = self.tables();
        let group = (self.order() - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (e % group)) % group;
        FieldElem(t.exp[l as usize])
    }

    /// The unique square root (Frobenius inverse).
    pub fn sqrt(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.tables().sqrt[a.0 as usize])
    }

    /// Absolute trace `F_q -> F_2`.
    pub fn trace(&self, a: FieldElem) -> u8 {
        self.tables().trace[a.0 as usize]
    }

    /// Solves `y^2 + y = c` in `F_q`, returning the solution with clear bit 0.
    pub fn solve_artin_schreier(&self, c: FieldElem) -> Option<FieldElem> {
        if self.trace(c) != 0 {
            return None;
        }
        self.elements()
            .find(|&y| y.0 & 1 == 0 && self.add(self.square(y), y) == c)
    }
}

/// The extension `F_{q^d} = F_q[x]/(pi)` for a monic irreducible `pi` of degree `d`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtField {
    base: Gf2k,
    modulus: Vec<FieldElem>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[x]/({:?})", self.base, self.modulus)
    }
}

impl ExtField {
    /// Builds the extension, verifying that `modulus` (ascending coefficients)
    /// is monic and irreducible over `F_q`.
    pub fn new(base: Gf2k, modulus: &[FieldElem]) -> Result<Arc<Self>> {
        let modulus = dense::trimmed(modulus.to_vec());
        if modulus.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let lc = *modulus.last().unwrap();
        let modulus = dense::scale(base, &modulus, base.inv(lc)?);
        if !dense::is_irreducible(base, &modulus) {
            return Err(Error::NotIrreducible);
        }
        Ok(Arc::new(ExtField { base, modulus }))
    }

    /// Skips the irreducibility check; callers guarantee it.
    pub(crate) fn new_unchecked(base: Gf2k, modulus: Vec<FieldElem>) -> Arc<Self> {
        debug_assert_eq!(modulus.last(), Some(&FieldElem::ONE));
        Arc::new(ExtField { base, modulus })
    }

    pub fn base(&self) -> Gf2k {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[FieldElem] {
        &self.modulus
    }

    /// Degree over `F_2`.
    pub fn absolute_degree(&self) -> usize {
        self.degree() * self.base.k() as usize
    }

    fn reduce(&self, mut rep: Vec<FieldElem>) -> Vec<FieldElem> {
        if rep.len() >= self.modulus.len() {
            rep = dense::rem(self.base, &rep, &self.modulus);
        }
        rep.resize(self.degree(), FieldElem::ZERO);
        rep
    }

    fn mul_rep(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        self.reduce(dense::mul(self.base, a, b))
    }
}

/// An element of an [`ExtField`]: a polynomial of degree `< d` over `F_q`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElem {
    field: Arc<ExtField>,
    rep: Vec<FieldElem>,
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rep)
    }
}

/// Arithmetic operations accepted by [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    /// Inverse of the left operand; the right operand is ignored.
    Inv,
    /// Left operand raised to the exponent given by the right operand's
    /// coordinates read as a base-`q` integer.
    Pow,
}

/// Checked arithmetic in `F_{q^d}`.
pub fn field_arith(lhs: &ExtElem, rhs: &ExtElem, op: ArithOp) -> Result<ExtElem> {
    if lhs.field != rhs.field {
        return Err(Error::ModulusMismatch);
    }
    match op {
        ArithOp::Add => Ok(lhs.add(rhs)),
        ArithOp::Mul => Ok(lhs.mul(rhs)),
        ArithOp::Inv => lhs.inv(),
        ArithOp::Pow => {
            let q = lhs.field.base.order() as u128;
            let e = rhs
                .rep
                .iter()
                .rev()
                .fold(0u128, |acc, c| acc.saturating_mul(q).saturating_add(c.0 as u128));
            Ok(lhs.pow(e))
        }
    }
}

impl ExtElem {
    pub fn zero(field: &Arc<ExtField>) -> Self {
        ExtElem {
            field: field.clone(),
            rep: vec![FieldElem::ZERO; field.degree()],
        }
    }

    pub fn one(field: &Arc<ExtField>) -> Self {
        Self::from_base(field, FieldElem::ONE)
    }

    pub fn from_base(field: &Arc<ExtField>, c: FieldElem) -> Self {
        let mut e = Self::zero(field);
        if field.degree() > 0 {
            e.rep[0] = c;
        }
        e
    }

    /// Reduces an arbitrary polynomial (ascending coefficients) modulo `pi`.
    pub fn from_poly(field: &Arc<ExtField>, coeffs: &[FieldElem]) -> Self {
        ExtElem {
            field: field.clone(),
            rep: field.reduce(dense::trimmed(coeffs.to_vec())),
        }
    }

    /// The class of `x`, a root of `pi`.
    pub fn root(field: &Arc<ExtField>) -> Self {
        Self::from_poly(field, &[FieldElem::ZERO, FieldElem::ONE])
    }

    /// The `j`-th Frobenius conjugate `x^(q^j)` of the root.
    pub fn conjugate_root(field: &Arc<ExtField>, j: usize) -> Self {
        Self::root(field).frobenius(j)
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    /// Coordinates over `F_q` (length `d`, ascending powers of `x`).
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.rep.first().is_some_and(|c| c.is_one()) && self.rep[1..].iter().all(|c| c.is_zero())
    }

    /// `Some(c)` when the element lies in the base field `F_q`.
    pub fn as_base(&self) -> Option<FieldElem> {
        if self.rep[1..].iter().all(|c| c.is_zero()) {
            Some(self.rep[0])
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &ExtElem) -> ExtElem {
        assert!(self.field == rhs.field, "extension field mismatch");
        let f = self.field.base;
        ExtElem {
            field: self.field.clone(),
            rep: self.rep.iter().zip(&rhs.rep).map(|(a, b)| f.add(*a, *b)).collect(),
        }
    }

    pub fn mul(&self, rhs: &ExtElem) -> ExtElem {
        assert!(self.field == rhs.field, "extension field mismatch");
        ExtElem {
            field: self.field.clone(),
            rep: self.field.mul_rep(&self.rep, &rhs.rep),
        }
    }

    pub fn scale(&self, c: FieldElem) -> ExtElem {
        let f = self.field.base;
        ExtElem {
            field: self.field.clone(),
            rep: self.rep.iter().map(|a| f.mul(*a, c)).collect(),
        }
    }

    pub fn square(&self) -> ExtElem {
        self.mul(self)
    }

    pub fn inv(&self) -> Result<ExtElem> {
        let f = self.field.base;
        let a = dense::trimmed(self.rep.clone());
        if a.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = dense::ext_gcd(f, &a, &self.field.modulus);
        debug_assert_eq!(g, vec![FieldElem::ONE]);
        Ok(ExtElem::from_poly(&self.field, &s))
    }

    pub fn pow(&self, mut e: u128) -> ExtElem {
        let mut base = self.clone();
        let mut acc = ExtElem::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// `x -> x^(q^j)`.
    pub fn frobenius(&self, j: usize) -> ExtElem {
        let mut y = self.clone();
        for _ in 0..j * self.field.base.k() as usize {
            y = y.square();
        }
        y
    }

    /// The unique square root `x^(q^d / 2)`.
    pub fn sqrt(&self) -> ExtElem {
        let mut y = self.clone();
        for _ in 1..self.field.absolute_degree() {
            y = y.square();
        }
        y
    }

    /// `Tr_{F_{q^d}/F_2}`.
    pub fn trace_to_prime(&self) -> u8 {
        let mut acc = ExtElem::zero(&self.field);
        let mut y = self.clone();
        for _ in 0..self.field.absolute_degree() {
            acc = acc.add(&y);
            y = y.square();
        }
        let t = acc.as_base().expect("absolute trace lies in F_2");
        debug_assert!(t.0 <= 1);
        t.0
    }

    /// `Tr_{F_{q^d}/F_q}`.
    pub fn trace_to_base(&self) -> FieldElem {
        let mut acc = ExtElem::zero(&self.field);
        let mut y = self.clone();
        for _ in 0..self.field.degree() {
            acc = acc.add(&y);
            y = y.frobenius(1);
        }
        acc.as_base().expect("relative trace lies in F_q")
    }

    /// Solves `y^2 + y = self`. Returns the solution whose constant coordinate
    /// has clear bit 0 (the smaller of `{y, y + 1}`), or `None` when the
    /// absolute trace is nonzero.
    pub fn solve_artin_schreier(&self) -> Option<ExtElem> {
        if self.trace_to_prime() != 0 {
            return None;
        }
        let field = &self.field;
        let f = field.base;
        let k = f.k() as usize;
        let n = field.absolute_degree();
        // F_2-basis g^i x^j, flattened as j * k + i.
        let basis = |idx: usize| {
            let mut e = ExtElem::zero(field);
            e.rep[idx / k] = FieldElem(1 << (idx % k));
            e
        };
        let flatten = |e: &ExtElem| {
            let mut v = crate::bits::BitVec::zeros(n);
            for (j, c) in e.rep.iter().enumerate() {
                for i in 0..k {
                    if c.0 >> i & 1 == 1 {
                        v.set(j * k + i, true);
                    }
                }
            }
            v
        };
        let columns: Vec<_> = (0..n)
            .map(|idx| {
                let b = basis(idx);
                flatten(&b.square().add(&b))
            })
            .collect();
        let sol = crate::bits::solve(&columns, &flatten(self), n)?;
        let mut y = ExtElem::zero(field);
        for idx in 0..n {
            if sol.get(idx) {
                y = y.add(&basis(idx));
            }
        }
        if y.rep[0].0 & 1 == 1 {
            y = y.add(&ExtElem::one(field));
        }
        debug_assert_eq!(&y.square().add(&y), self);
        Some(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_over_f2() -> Arc<ExtField> {
        // F_2[w]/(w^2 + w + 1)
        ExtField::new(Gf2k::f2(), &[FieldElem::ONE, FieldElem::ONE, FieldElem::ONE]).unwrap()
    }

    #[test]
    fn builtin_moduli_are_smallest_irreducibles() {
        let expected = [
            0b11,
            0b111,
            0b1011,
            0b10011,
            0b100101,
            0b1000011,
            0b10000011,
            0b100011011,
        ];
        for k in 1..=8 {
            let f = Gf2k::new(k).unwrap();
            assert_eq!(f.modulus(), expected[k as usize - 1]);
            assert_eq!(f.order(), 1 << k);
        }
        assert_eq!(Gf2k::new(9), Err(Error::UnsupportedField(9)));
        assert_eq!(Gf2k::new(0), Err(Error::UnsupportedField(0)));
    }

    #[test]
    fn f4_examples() {
        let f4 = f4_over_f2();
        let w = ExtElem::root(&f4);
        let one = ExtElem::one(&f4);
        let w1 = w.add(&one);
        assert_eq!(w.mul(&w), w1);
        assert_eq!(w.inv().unwrap(), w1);
        assert!(w.add(&w).is_zero());
        assert_eq!(w.sqrt(), w1);
        assert_eq!(ExtElem::zero(&f4).sqrt(), ExtElem::zero(&f4));
        assert_eq!(one.sqrt(), one);
        assert_eq!(w.trace_to_prime(), 1);
        assert_eq!(one.trace_to_prime(), 0);
        assert_eq!(one.solve_artin_schreier(), Some(w.clone()));
        assert_eq!(ExtElem::zero(&f4).solve_artin_schreier(), Some(ExtElem::zero(&f4)));
        assert_eq!(ExtElem::zero(&f4).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn f2_examples() {
        let f2 = ExtField::new(Gf2k::f2(), &[FieldElem::ZERO, FieldElem::ONE]).unwrap();
        let one = ExtElem::one(&f2);
        assert_eq!(one.sqrt(), one);
        assert_eq!(one.trace_to_prime(), 1);
        assert_eq!(one.solve_artin_schreier(), None);
        let base = Gf2k::f2();
        assert_eq!(base.solve_artin_schreier(FieldElem::ONE), None);
        assert_eq!(base.solve_artin_schreier(FieldElem::ZERO), Some(FieldElem::ZERO));
    }

    #[test]
    fn base_field_matches_f4_extension_model() {
        let f = Gf2k::new(2).unwrap();
        let w = f.generator();
        let w1 = f.add(w, FieldElem::ONE);
        assert_eq!(f.mul(w, w), w1);
        assert_eq!(f.inv(w).unwrap(), w1);
        assert_eq!(f.sqrt(w), w1);
        assert_eq!(f.trace(w), 1);
        assert_eq!(f.solve_artin_schreier(FieldElem::ONE), Some(w));
        assert_eq!(f.inv(FieldElem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatched_moduli_are_rejected() {
        let f4 = f4_over_f2();
        let f2 = ExtField::new(Gf2k::f2(), &[FieldElem::ONE, FieldElem::ONE]).unwrap();
        let a = ExtElem::one(&f4);
        let b = ExtElem::one(&f2);
        assert_eq!(field_arith(&a, &b, ArithOp::Add), Err(Error::ModulusMismatch));
        assert_eq!(
            field_arith(&ExtElem::zero(&f4), &a, ArithOp::Inv),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        // x^2 + 1 = (x + 1)^2
        let r = ExtField::new(Gf2k::f2(), &[FieldElem::ONE, FieldElem::ZERO, FieldElem::ONE]);
        assert_eq!(r.unwrap_err(), Error::NotIrreducible);
    }

    fn all_elements(field: &Arc<ExtField>) -> Vec<ExtElem> {
        let f = field.base();
        let d = field.degree();
        let q = f.order();
        (0..q.pow(d as u32))
            .map(|mut idx| {
                let coeffs: Vec<_> = (0..d)
                    .map(|_| {
                        let c = FieldElem((idx % q) as u8);
                        idx /= q;
                        c
                    })
                    .collect();
                ExtElem::from_poly(field, &coeffs)
            })
            .collect()
    }

    #[test]
    fn exhaustive_small_fields() {
        let cases: Vec<(u32, Vec<u8>)> = vec![
            (1, vec![1, 1, 0, 1, 1, 0, 0, 0, 1]),
            (2, vec![2, 1, 1]),
            (2, vec![1, 1, 0, 1]),
            (4, vec![]),
            (8, vec![0, 1]),
        ];
        for (k, m) in cases {
            let base = Gf2k::new(k).unwrap();
            let mut modulus: Vec<_> = m.iter().map(|&b| FieldElem(b)).collect();
            if modulus.is_empty() {
                // x^2 + x + c is irreducible iff Tr(c) = 1
                let c = base.elements().find(|&c| base.trace(c) == 1).unwrap();
                modulus = vec![c, FieldElem::ONE, FieldElem::ONE];
            }
            let field = ExtField::new(base, &modulus).unwrap();
            let elems = all_elements(&field);
            let size = elems.len();
            let mut trace_ones = 0;
            for x in &elems {
                assert_eq!(&x.sqrt().square(), x);
                assert_eq!(x.pow(size as u128), *x);
                let t = x.trace_to_prime();
                trace_ones += t as usize;
                match x.solve_artin_schreier() {
                    Some(y) => {
                        assert_eq!(t, 0);
                        assert_eq!(&y.square().add(&y), x);
                        assert_eq!(y.coeffs()[0].0 & 1, 0);
                    }
                    None => assert_eq!(t, 1),
                }
                if !x.is_zero() {
                    assert!(x.mul(&x.inv().unwrap()).is_one());
                }
            }
            // the trace is onto F_2 with kernel of index 2
            assert_eq!(trace_ones * 2, size);
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        let base = Gf2k::new(2).unwrap();
        let modulus: Vec<_> = [1u8, 1, 0, 1].iter().map(|&b| FieldElem(b)).collect();
        let field = ExtField::new(base, &modulus).unwrap();
        let elems = all_elements(&field);
        for (i, a) in elems.iter().enumerate().step_by(5) {
            for b in elems.iter().skip(i % 7).step_by(9) {
                assert_eq!(a.add(b).square(), a.square().add(&b.square()));
                assert_eq!(a.mul(b).square(), a.square().mul(&b.square()));
                assert_eq!(a.add(b).trace_to_prime(), a.trace_to_prime() ^ b.trace_to_prime());
            }
        }
        // the conjugate roots of pi are exactly the Frobenius orbit of x
        let d = field.degree();
        for j in 0..d {
            let r = ExtElem::conjugate_root(&field, j);
            let value = modulus.iter().rev().fold(ExtElem::zero(&field), |acc, c| {
                acc.mul(&r).add(&ExtElem::from_base(&field, *c))
            });
            assert!(value.is_zero());
        }
        assert_eq!(ExtElem::conjugate_root(&field, d), ExtElem::root(&field));
    }

    #[test]
    fn relative_trace_lands_in_base() {
        let base = Gf2k::new(2).unwrap();
        let modulus: Vec<_> = [1u8, 1, 0, 1].iter().map(|&b| FieldElem(b)).collect();
        let field = ExtField::new(base, &modulus).unwrap();
        for x in all_elements(&field) {
            let t = x.trace_to_base();
            assert_eq!(base.trace(t), x.trace_to_prime());
        }
    }
}
