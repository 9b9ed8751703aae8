//! Per-place invariants: square classes and Artin-Schreier classes in the
//! completion `K_v`, the local quaternion symbol via the residue formula, and
//! the local classification and similarity tables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcfield::{
    global_square_test, principal_part, reduce_at_place, residue_of_differential_at_root, Place, RatFunc,
};
use crate::gf2k::{ExtElem, Gf2k};
use crate::polyring::Poly;
use crate::qform::{clifford_symbol_list, invariants, QuadraticForm};

/// The cyclic algebra `(x, y]`: adjoin `theta` with `theta^2 + theta = x` and
/// twist by `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolPair {
    pub as_slot: RatFunc,
    pub mult_slot: RatFunc,
}

impl SymbolPair {
    pub fn new(as_slot: RatFunc, mult_slot: RatFunc) -> Result<Self> {
        if mult_slot.is_zero() {
            return Err(Error::ZeroMultiplicativeSlot);
        }
        Ok(SymbolPair { as_slot, mult_slot })
    }

    /// The quaternion algebra `{a, b}` (`i^2 = a`, `j^2 = b`, `ij + ji = 1`)
    /// as `(ab, a]`; split pairs become `(0, 1]`.
    pub fn quaternion(a: &RatFunc, b: &RatFunc) -> Self {
        if a.is_zero() || b.is_zero() {
            return Self::split(a.field());
        }
        SymbolPair {
            as_slot: a * b,
            mult_slot: a.clone(),
        }
    }

    pub fn split(field: Gf2k) -> Self {
        SymbolPair {
            as_slot: RatFunc::zero(field),
            mult_slot: RatFunc::one(field),
        }
    }

    pub fn is_trivially_split(&self) -> bool {
        self.as_slot.is_zero() || self.mult_slot.is_constant()
    }
}

/// Local classification data of a form at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalProfile {
    pub place: Place,
    pub rank: usize,
    pub disc_trivial: bool,
    pub clifford_class: u8,
    pub anis_rank: usize,
    pub witt_index: usize,
}

/// `d1/d2 in K_v*^2`. For global elements this is the global square test:
/// `K_v` is separable over `K`, so `K_v*^2 ∩ K* = K*^2`.
pub fn local_square_equal(d1: &RatFunc, d2: &RatFunc, _v: &Place) -> Result<bool> {
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(global_square_test(&(d1 * d2))?.is_some())
}

/// `c in wp(K_v)`, by peeling even-order poles with explicit
/// Artin-Schreier corrections and finishing with a residue-field trace.
pub fn local_wp_member(c: &RatFunc, v: &Place) -> bool {
    if c.is_zero() {
        return true;
    }
    let field = c.field();
    let (pi, mut cur) = match v {
        Place::Finite(p) => (p.clone(), c.clone()),
        Place::Infinity => (Poly::t(field), c.invert_variable()),
    };
    let chart = Place::Finite(pi.clone());
    let residue = chart.residue_field(field);
    loop {
        let pp = principal_part(&cur, &chart);
        let Some((m, top)) = pp.last() else {
            break;
        };
        if m % 2 == 1 {
            return false;
        }
        let a = ExtElem::from_poly(&residue, top.rem(&pi).coeffs());
        let lift = Poly::from_coeffs(field, a.sqrt().coeffs().to_vec());
        let y = RatFunc::new(lift, pi.pow((m / 2) as u64)).expect("nonzero");
        cur = &cur + &y.wp();
    }
    reduce_at_place(&cur, &chart).trace_to_prime() == 0
}

/// `Tr_{k_v/F_2} Res_v(x dy/y)`, the local class of `(x, y]` in `F_2`.
pub fn schmid_symbol(p: &SymbolPair, v: &Place) -> Result<u8> {
    schmid_symbol_at_root(p, v, 0)
}

/// As [`schmid_symbol`], evaluating the residue at the `j`-th root of the
/// place polynomial.
pub fn schmid_symbol_at_root(p: &SymbolPair, v: &Place, root_index: usize) -> Result<u8> {
    if p.mult_slot.is_zero() {
        return Err(Error::ZeroMultiplicativeSlot);
    }
    if p.as_slot.is_zero() || p.mult_slot.is_constant() {
        return Ok(0);
    }
    // x integral and y a unit: x dy/y is regular at v
    if p.as_slot.valuation(v).unwrap() >= 0 && p.mult_slot.valuation(v) == Some(0) {
        return Ok(0);
    }
    let y = &p.mult_slot;
    let integrand = (&p.as_slot * &y.derivative()).div(y)?;
    Ok(residue_of_differential_at_root(&integrand, v, root_index).trace_to_prime())
}

/// Local class of the quaternion algebra `{a, b}`.
pub fn quaternion_class(a: &RatFunc, b: &RatFunc, v: &Place) -> u8 {
    schmid_symbol(&SymbolPair::quaternion(a, b), v).expect("quaternion pairs have a nonzero slot")
}

/// Local class of the Clifford invariant (even Clifford algebra at odd rank).
pub fn local_clifford_class(q: &QuadraticForm, v: &Place) -> u8 {
    clifford_symbol_list(q)
        .symbols
        .iter()
        .map(|s| schmid_symbol(s, v).expect("nonzero slot"))
        .fold(0, |acc, c| acc ^ c)
}

/// Whether the discriminant of `q` is trivial in `K_v`.
pub fn local_disc_trivial(q: &QuadraticForm, v: &Place) -> bool {
    let (rank, disc) = invariants(q);
    if rank % 2 == 1 {
        local_square_equal(&disc, &RatFunc::one(q.field()), v).expect("odd part is nonzero")
    } else {
        local_wp_member(&disc, v)
    }
}

/// Anisotropic rank from rank parity, local discriminant and Clifford class.
pub fn anisotropic_rank(rank: usize, disc_trivial: bool, clifford_class: u8) -> usize {
    match (rank % 2, disc_trivial, clifford_class) {
        (0, false, _) => 2,
        (0, true, 0) => 0,
        (0, true, _) => 4,
        (_, _, 0) => 1,
        _ => 3,
    }
}

pub fn local_profile(q: &QuadraticForm, v: &Place) -> Result<LocalProfile> {
    let rank = q.rank();
    let disc_trivial = local_disc_trivial(q, v);
    let clifford_class = local_clifford_class(q, v);
    let m = anisotropic_rank(rank, disc_trivial, clifford_class);
    if m > rank {
        return Err(Error::InconsistentLocalData {
            place: v.clone(),
            detail: format!("rank {rank} with anisotropic rank {m}"),
        });
    }
    Ok(LocalProfile {
        place: v.clone(),
        rank,
        disc_trivial,
        clifford_class,
        anis_rank: m,
        witt_index: (rank - m) / 2,
    })
}

/// Local discriminants agree: square classes at odd rank, Artin-Schreier
/// classes at even rank.
pub fn local_disc_equal(f: &QuadraticForm, g: &QuadraticForm, v: &Place) -> bool {
    let (rf, df) = invariants(f);
    let (_, dg) = invariants(g);
    if rf % 2 == 1 {
        local_square_equal(&df, &dg, v).expect("odd parts are nonzero")
    } else {
        local_wp_member(&(&df + &dg), v)
    }
}

pub fn local_isometric(f: &QuadraticForm, g: &QuadraticForm, v: &Place) -> Result<bool> {
    if f.rank() != g.rank() {
        return Ok(false);
    }
    Ok(local_disc_equal(f, g, v) && local_clifford_class(f, v) == local_clifford_class(g, v))
}

pub fn local_similar(f: &QuadraticForm, g: &QuadraticForm, v: &Place) -> Result<bool> {
    if f.rank() != g.rank() {
        return Err(Error::RankMismatch(f.rank(), g.rank()));
    }
    let pf = local_profile(f, v)?;
    let pg = local_profile(g, v)?;
    if pf.witt_index != pg.witt_index {
        return Ok(false);
    }
    Ok(f.rank() % 2 == 1 || local_disc_equal(f, g, v))
}
