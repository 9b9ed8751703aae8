//! Random instance generators shared by the oracles, the self-test battery
//! and the test suites.

use rand::Rng;

use crate::funcfield::{Place, RatFunc};
use crate::gf2k::{FieldElem, Gf2k};
use crate::polyring::Poly;
use crate::qform::{normalize, GramInput, Matrix, QuadraticForm};

pub fn random_elem<R: Rng>(rng: &mut R, field: Gf2k) -> FieldElem {
    FieldElem::from_bits(rng.gen_range(0..field.order()) as u8)
}

pub fn random_nonzero_elem<R: Rng>(rng: &mut R, field: Gf2k) -> FieldElem {
    FieldElem::from_bits(rng.gen_range(1..field.order()) as u8)
}

/// Uniform polynomial of degree `<= max_deg` (possibly zero).
pub fn random_poly<R: Rng>(rng: &mut R, field: Gf2k, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs(field, (0..=deg).map(|_| random_elem(rng, field)).collect())
}

pub fn random_nonzero_poly<R: Rng>(rng: &mut R, field: Gf2k, max_deg: usize) -> Poly {
    loop {
        let p = random_poly(rng, field, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// `num/den` with both degrees `<= max_deg`; zero with small probability.
pub fn random_ratfunc<R: Rng>(rng: &mut R, field: Gf2k, max_deg: usize) -> RatFunc {
    let num = random_poly(rng, field, max_deg);
    let den = random_nonzero_poly(rng, field, max_deg);
    RatFunc::new(num, den).expect("nonzero denominator")
}

pub fn random_nonzero_ratfunc<R: Rng>(rng: &mut R, field: Gf2k, max_deg: usize) -> RatFunc {
    loop {
        let u = random_ratfunc(rng, field, max_deg);
        if !u.is_zero() {
            return u;
        }
    }
}

/// Infinity, or a monic irreducible of degree `1..=max_deg`.
pub fn random_place<R: Rng>(rng: &mut R, field: Gf2k, max_deg: usize) -> Place {
    if rng.gen_range(0..=max_deg) == 0 {
        return Place::Infinity;
    }
    let deg = rng.gen_range(1..=max_deg);
    loop {
        let mut coeffs: Vec<FieldElem> = (0..deg).map(|_| random_elem(rng, field)).collect();
        coeffs.push(FieldElem::ONE);
        let p = Poly::from_coeffs(field, coeffs);
        if p.is_irreducible().unwrap() {
            return Place::Finite(p);
        }
    }
}

/// Canonical form of the given rank; binary slots may be zero, the odd part
/// is not.
pub fn random_form<R: Rng>(rng: &mut R, field: Gf2k, rank: usize, max_deg: usize) -> QuadraticForm {
    let odd = (rank % 2 == 1).then(|| random_nonzero_ratfunc(rng, field, max_deg));
    let binaries = (0..rank / 2)
        .map(|_| (random_ratfunc(rng, field, max_deg), random_ratfunc(rng, field, max_deg)))
        .collect();
    QuadraticForm::new(field, odd, binaries).expect("odd part is nonzero")
}

/// Non-degenerate upper-triangular Gram input of rank `n`.
pub fn random_gram<R: Rng>(rng: &mut R, field: Gf2k, n: usize, max_deg: usize) -> GramInput {
    loop {
        let coeffs = (0..n)
            .map(|i| (i..n).map(|_| random_ratfunc(rng, field, max_deg)).collect())
            .collect();
        let g = GramInput::new(field, coeffs).expect("triangular shape");
        if normalize(&g).is_ok() {
            return g;
        }
    }
}

/// Invertible `n x n` matrix with polynomial entries of degree `<= max_deg`.
pub fn random_invertible<R: Rng>(rng: &mut R, field: Gf2k, n: usize, max_deg: usize) -> Matrix {
    loop {
        let m: Matrix = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| RatFunc::from_poly(random_poly(rng, field, max_deg)))
                    .collect()
            })
            .collect();
        if crate::qform::check_invertible(&m).is_ok() {
            return m;
        }
    }
}
