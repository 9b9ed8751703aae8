//! Independent checks for the invariant machinery: exhaustive isotropic
//! vector search, exact transport comparison, symbol reciprocity, the
//! biquaternion (Albert form) dichotomy, and randomized normalization runs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{BitVec, Span};
use crate::error::{Error, Result};
use crate::funcfield::{global_as_test, global_square_test, Place, RatFunc};
use crate::gf2k::{FieldElem, Gf2k};
use crate::localinv::{local_clifford_class, local_profile, quaternion_class, schmid_symbol, SymbolPair};
use crate::polyring::Poly;
use crate::qform::{gram_of, invariants, normalize, support_places, transport, Matrix, QuadraticForm};
use crate::random::{random_gram, random_invertible};

/// Default limit on enumerated coordinate tuples per search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 24;

/// A nonzero polynomial vector with `q(x) = 0`, first nonzero coordinate
/// monic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorWitness {
    pub coords: Vec<Poly>,
    pub value: RatFunc,
}

/// All polynomials of degree `<= h`, in increasing order of their coefficient
/// bits.
fn polys_up_to(field: Gf2k, h: usize) -> Vec<Poly> {
    let q = field.order();
    let count = q.pow(h as u32 + 1);
    (0..count)
        .map(|mut idx| {
            let mut coeffs = Vec::with_capacity(h + 1);
            for _ in 0..=h {
                coeffs.push(FieldElem::from_bits((idx % q) as u8));
                idx /= q;
            }
            Poly::from_coeffs(field, coeffs)
        })
        .collect()
}

fn flatten(p: &Poly, len: usize) -> BitVec {
    let k = p.field().k() as usize;
    let mut v = BitVec::zeros(len * k);
    for (m, c) in p.coeffs().iter().enumerate() {
        for i in 0..k {
            if c.bits() >> i & 1 == 1 {
                v.set(m * k + i, true);
            }
        }
    }
    v
}

/// The form with denominators cleared: `D x0^2 + sum (A_i x_i^2 + L x_i y_i + B_i y_i^2)`.
struct ClearedForm {
    odd: Option<Poly>,
    pairs: Vec<(Poly, Poly)>,
    cross: Poly,
}

impl ClearedForm {
    fn new(q: &QuadraticForm) -> Self {
        let field = q.field();
        let lcm = q.coefficients().fold(Poly::one(field), |acc, c| {
            let g = acc.gcd(c.den());
            &acc * &c.den().exact_div(&g)
        });
        let clear = |c: &RatFunc| (c.num() * &lcm).exact_div(c.den());
        ClearedForm {
            odd: q.odd_part().map(clear),
            pairs: q.binaries().iter().map(|(a, b)| (clear(a), clear(b))).collect(),
            cross: lcm,
        }
    }

    fn pair_value(&self, i: usize, x: &Poly, y: &Poly) -> Poly {
        let (a, b) = &self.pairs[i];
        &(&(a * &x.square()) + &(&self.cross * &(x * y))) + &(b * &y.square())
    }
}

/// Searches polynomial vectors of degree `<= degree_bound` for a nontrivial
/// zero of `q`, in order of increasing height. The first coordinate of the
/// last binary pair is solved for by `F_2`-linear algebra; all other
/// coordinates are enumerated.
pub fn search_isotropic(q: &QuadraticForm, degree_bound: usize) -> Result<VectorWitness> {
    search_isotropic_with_budget(q, degree_bound, DEFAULT_SEARCH_BUDGET)
}

pub fn search_isotropic_with_budget(q: &QuadraticForm, degree_bound: usize, budget: u64) -> Result<VectorWitness> {
    let field = q.field();
    let m = q.binaries().len();
    if m == 0 {
        // d x^2 = 0 forces x = 0
        return Err(Error::NotFoundWithinBound(degree_bound));
    }
    let form = ClearedForm::new(q);
    let k = field.k() as usize;
    let mut spent = 0u64;
    let (a_last, b_last) = form.pairs[m - 1].clone();
    for h in 0..=degree_bound {
        let polys = polys_up_to(field, h);
        // free coordinates: odd part, then (x_i, y_i) for i < m - 1
        let n_free = form.odd.is_some() as usize + 2 * (m - 1);
        let out_len = [
            a_last.degree().unwrap_or(0) + 2 * h,
            form.cross.degree().unwrap() + 2 * h,
            b_last.degree().unwrap_or(0) + 2 * h,
            form.odd.as_ref().map_or(0, |d| d.degree().unwrap()) + 2 * h,
            form.pairs
                .iter()
                .map(|(a, b)| a.deg_i64().max(b.deg_i64()).max(0) as usize)
                .max()
                .unwrap_or(0)
                + 2 * h,
        ]
        .into_iter()
        .max()
        .unwrap()
            + 1;
        for y in &polys {
            // x -> A x^2 + L y x is F_2-linear in the coefficient bits of x
            let mut span = Span::new();
            let mut basis = Vec::new();
            for j in 0..=h {
                for i in 0..k {
                    let e = Poly::monomial(field, FieldElem::from_bits(1 << i), j);
                    let col = &(&a_last * &e.square()) + &(&form.cross * &(y * &e));
                    span.insert(flatten(&col, out_len));
                    basis.push(e);
                }
            }
            let by2 = &b_last * &y.square();
            let mut idx = vec![0usize; n_free];
            loop {
                spent += 1;
                if spent > budget {
                    return Err(Error::NotFoundWithinBound(degree_bound));
                }
                let free: Vec<&Poly> = idx.iter().map(|&i| &polys[i]).collect();
                let mut rest = by2.clone();
                let mut c = 0;
                if let Some(d) = &form.odd {
                    rest = &rest + &(d * &free[0].square());
                    c = 1;
                }
                for p in 0..m - 1 {
                    rest = &rest + &form.pair_value(p, free[c + 2 * p], free[c + 2 * p + 1]);
                }
                let all_zero = y.is_zero() && free.iter().all(|p| p.is_zero());
                let x = if all_zero {
                    // needs a nonzero x with A x^2 = 0
                    a_last.is_zero().then(|| Poly::one(field))
                } else {
                    span.express(&flatten(&rest, out_len))
                        .map(|combo| combo.ones().fold(Poly::zero(field), |acc, i| &acc + &basis[i]))
                };
                if let Some(x) = x {
                    let mut coords: Vec<Poly> = free.into_iter().cloned().collect();
                    coords.push(x);
                    coords.push(y.clone());
                    return Ok(make_witness(q, coords));
                }
                // odometer over the free coordinates
                let mut pos = 0;
                loop {
                    if pos == n_free {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < polys.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == n_free {
                    break;
                }
            }
        }
    }
    Err(Error::NotFoundWithinBound(degree_bound))
}

fn make_witness(q: &QuadraticForm, coords: Vec<Poly>) -> VectorWitness {
    let field = q.field();
    let lead = coords
        .iter()
        .find(|p| !p.is_zero())
        .expect("nontrivial vector")
        .leading_coeff();
    let inv = field.inv(lead).expect("nonzero");
    let coords: Vec<Poly> = coords.iter().map(|p| p.scale(inv)).collect();
    let value = q
        .evaluate(&coords.iter().cloned().map(RatFunc::from_poly).collect::<Vec<_>>())
        .expect("rank matches");
    assert!(value.is_zero(), "isotropic search produced a nonzero value");
    VectorWitness { coords, value }
}

/// `g(x) = f(T x)` as an identity of quadratic forms.
pub fn transport_check(f: &QuadraticForm, g: &QuadraticForm, t: &Matrix) -> Result<bool> {
    if f.rank() != g.rank() {
        return Err(Error::RankMismatch(f.rank(), g.rank()));
    }
    if t.len() != f.rank() || t.iter().any(|row| row.len() != f.rank()) {
        return Err(Error::RankMismatch(f.rank(), t.len()));
    }
    let moved = transport(&gram_of(f), t)?;
    Ok(moved.rows() == gram_of(g).rows())
}

/// Sum of the local classes of `p` over every place where it can be nonzero.
pub fn check_reciprocity(p: &SymbolPair) -> Result<bool> {
    if p.mult_slot.is_zero() {
        return Err(Error::ZeroMultiplicativeSlot);
    }
    let mut places = p.mult_slot.finite_support();
    if !p.as_slot.is_zero() {
        places.extend(p.as_slot.finite_support());
    }
    places.insert(Place::Infinity);
    let mut total = 0;
    for v in &places {
        total ^= schmid_symbol(p, v)?;
    }
    Ok(total == 0)
}

/// The Albert form `[1, a1 b1 + a2 b2] ⊥ [a1, b1] ⊥ [a2, b2]` of
/// `{a1, b1} ⊗ {a2, b2}`.
pub fn albert_form(a1: &RatFunc, b1: &RatFunc, a2: &RatFunc, b2: &RatFunc) -> QuadraticForm {
    let field = a1.field();
    let s = &(a1 * b1) + &(a2 * b2);
    QuadraticForm::new(
        field,
        None,
        vec![
            (RatFunc::one(field), s),
            (a1.clone(), b1.clone()),
            (a2.clone(), b2.clone()),
        ],
    )
    .expect("even rank")
}

/// At every support place, the Albert form has Witt index `> 1` exactly
/// when the two quaternion classes agree.
pub fn albert_check(a1: &RatFunc, b1: &RatFunc, a2: &RatFunc, b2: &RatFunc) -> bool {
    let phi = albert_form(a1, b1, a2, b2);
    support_places(&phi, &phi).iter().all(|v| {
        let split = quaternion_class(a1, b1, v) == quaternion_class(a2, b2, v);
        let i0 = local_profile(&phi, v).expect("consistent tables").witt_index;
        (i0 > 1) == split
    })
}

/// Compares rank, discriminant class and local Clifford classes; `None` when
/// everything agrees, otherwise a description of the first mismatch.
pub fn invariant_mismatch(a: &QuadraticForm, b: &QuadraticForm) -> Option<String> {
    if a.rank() != b.rank() {
        return Some(format!("rank {} vs {}", a.rank(), b.rank()));
    }
    let (n, da) = invariants(a);
    let (_, db) = invariants(b);
    let same_disc = if n % 2 == 1 {
        global_square_test(&(&da * &db)).ok().flatten().is_some()
    } else {
        global_as_test(&(&da + &db)).is_some()
    };
    if !same_disc {
        return Some(format!("discriminant {da} vs {db}"));
    }
    support_places(a, b).into_iter().find_map(|v| {
        let (ca, cb) = (local_clifford_class(a, &v), local_clifford_class(b, &v));
        (ca != cb).then(|| format!("Clifford class {ca} vs {cb} at {v}"))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzFailure {
    pub trial: usize,
    pub gram: Vec<Vec<String>>,
    pub transport: Vec<Vec<String>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<FuzzFailure>,
}

#[derive(Clone, Copy, Debug)]
pub struct FuzzConfig {
    pub field: Gf2k,
    pub max_rank: usize,
    pub entry_degree: usize,
    pub transport_degree: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            field: Gf2k::f2(),
            max_rank: 4,
            entry_degree: 3,
            transport_degree: 1,
        }
    }
}

pub fn fuzz_normalization(seed: u64, trials: usize) -> FuzzReport {
    fuzz_normalization_with(seed, trials, FuzzConfig::default())
}

/// Random Gram inputs against random invertible transports: both
/// normalizations must carry the same invariants.
pub fn fuzz_normalization_with(seed: u64, trials: usize, cfg: FuzzConfig) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport {
        seed,
        trials,
        passed: 0,
        failed: 0,
        first_failure: None,
    };
    for trial in 0..trials {
        let n = 1 + trial % cfg.max_rank;
        let gram = random_gram(&mut rng, cfg.field, n, cfg.entry_degree);
        let t = random_invertible(&mut rng, cfg.field, n, cfg.transport_degree);
        let detail = match (normalize(&gram), transport(&gram, &t).and_then(|g| normalize(&g))) {
            (Ok(a), Ok(b)) => invariant_mismatch(&a, &b),
            (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
        };
        match detail {
            None => report.passed += 1,
            Some(detail) => {
                report.failed += 1;
                if report.first_failure.is_none() {
                    report.first_failure = Some(FuzzFailure {
                        trial,
                        gram: render_rows(gram.rows()),
                        transport: render_rows(&t),
                        detail,
                    });
                }
            }
        }
    }
    report
}

fn render_rows(rows: &[Vec<RatFunc>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
}

/// Gram input of `f` moved by `t`, normalized.
pub fn transported_form(f: &QuadraticForm, t: &Matrix) -> Result<QuadraticForm> {
    normalize(&transport(&gram_of(f), t)?)
}
