//! Global decisions over `K`: isometry, isotropy, anisotropic dimension,
//! similarity, and construction of similarity factors.
//!
//! Only finitely many places can carry a nontrivial local invariant; they
//! are covered by `support_places`. The two conditions that range over all
//! places (equality of square classes and of Artin-Schreier classes) are
//! settled by the exact global tests.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::{BitVec, Span};
use crate::error::{Error, Result};
use crate::funcfield::{global_as_test, global_square_test, reduce_at_place, Place, RatFunc};
use crate::localinv::{
    local_clifford_class, local_profile, local_similar, local_square_equal, local_wp_member, schmid_symbol, SymbolPair,
};
use crate::polyring::{monic_irreducibles, Poly};
use crate::qform::{invariants, scale, support_places, QuadraticForm};

pub const DEFAULT_DEGREE_BOUND: usize = 6;

/// Upper limit on split primes tried by the factor search.
pub const DEFAULT_CANDIDATE_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    RankEquality,
    RankBound,
    GlobalSquare,
    GlobalArtinSchreier,
    LocalClifford,
    LocalArtinSchreier,
    LocalProfile,
    FactorSearch,
    FactorVerification,
}

/// One test that ran while reaching a decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub check: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<Place>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub passed: bool,
}

impl Step {
    fn new(check: CheckKind, passed: bool) -> Self {
        Step {
            check,
            place: None,
            subject: None,
            passed,
        }
    }

    fn at(mut self, place: &Place) -> Self {
        self.place = Some(place.clone());
        self
    }

    fn about(mut self, subject: impl ToString) -> Self {
        self.subject = Some(subject.to_string());
        self
    }
}

/// The failing test behind a negative verdict, in a form that can be re-run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    RankMismatch {
        left: usize,
        right: usize,
    },
    /// Rank one forms are anisotropic.
    RankBound {
        rank: usize,
    },
    /// `element` has odd valuation at `place`.
    NonSquare {
        element: RatFunc,
        place: Place,
    },
    /// `element` is not in `wp(K_v)`.
    NotArtinSchreier {
        element: RatFunc,
        place: Place,
    },
    CliffordMismatch {
        place: Place,
    },
    /// The local Witt index vanishes.
    AnisotropicPlace {
        place: Place,
    },
    /// The local similarity criterion fails.
    LocalSimilarity {
        place: Place,
    },
}

impl Obstruction {
    pub fn place(&self) -> Option<&Place> {
        match self {
            Obstruction::RankMismatch { .. } | Obstruction::RankBound { .. } => None,
            Obstruction::NonSquare { place, .. }
            | Obstruction::NotArtinSchreier { place, .. }
            | Obstruction::CliffordMismatch { place }
            | Obstruction::AnisotropicPlace { place }
            | Obstruction::LocalSimilarity { place } => Some(place),
        }
    }

    /// Re-runs the named local test; `true` when the failure is reproduced.
    /// Two-form obstructions need `g`.
    pub fn replay(&self, f: &QuadraticForm, g: Option<&QuadraticForm>) -> Result<bool> {
        let other = || g.ok_or_else(|| Error::Malformed("obstruction needs a second form".into()));
        Ok(match self {
            Obstruction::RankMismatch { .. } => f.rank() != other()?.rank(),
            Obstruction::RankBound { rank } => f.rank() == *rank && *rank <= 1,
            Obstruction::NonSquare { element, place } => {
                element.valuation(place).is_some_and(|e| e % 2 != 0)
                    && !local_square_equal(element, &RatFunc::one(element.field()), place)?
            }
            Obstruction::NotArtinSchreier { element, place } => !local_wp_member(element, place),
            Obstruction::CliffordMismatch { place } => {
                local_clifford_class(f, place) != local_clifford_class(other()?, place)
            }
            Obstruction::AnisotropicPlace { place } => local_profile(f, place)?.witt_index == 0,
            Obstruction::LocalSimilarity { place } => !local_similar(f, other()?, place)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FactorStatus {
    NotApplicable,
    Verified,
    /// The verdict follows from the local-global theorem but the bounded
    /// search produced no explicit factor.
    NotFoundWithinBound {
        degree_bound: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: bool,
    pub reason: String,
    pub factor: Option<RatFunc>,
    pub factor_status: FactorStatus,
    pub witness: Option<Place>,
    pub obstruction: Option<Obstruction>,
    pub certificate: Vec<Step>,
}

impl Decision {
    fn positive(reason: impl Into<String>, certificate: Vec<Step>) -> Self {
        Decision {
            verdict: true,
            reason: reason.into(),
            factor: None,
            factor_status: FactorStatus::NotApplicable,
            witness: None,
            obstruction: None,
            certificate,
        }
    }

    fn negative(reason: impl Into<String>, obstruction: Obstruction, certificate: Vec<Step>) -> Self {
        Decision {
            verdict: false,
            reason: reason.into(),
            factor: None,
            factor_status: FactorStatus::NotApplicable,
            witness: obstruction.place().cloned(),
            obstruction: Some(obstruction),
            certificate,
        }
    }
}

/// Search bounds for similarity factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorSearch {
    pub degree_bound: usize,
    pub candidate_cap: usize,
}

impl Default for FactorSearch {
    fn default() -> Self {
        FactorSearch {
            degree_bound: DEFAULT_DEGREE_BOUND,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

fn arf(q: &QuadraticForm) -> RatFunc {
    invariants(q).1
}

/// A place with odd valuation; exists for every non-square.
fn odd_valuation_place(u: &RatFunc) -> Option<Place> {
    u.finite_support()
        .into_iter()
        .chain([Place::Infinity])
        .find(|v| u.valuation(v).is_some_and(|e| e % 2 != 0))
}

/// A place where `c` is not locally an Artin-Schreier value. When
/// `c ∉ wp(K)` one lies in `supp(c) ∪ {inf}`: an extension unramified
/// everywhere and split at the degree-one place `inf` is trivial.
fn wp_obstruction_place(c: &RatFunc) -> Option<Place> {
    c.finite_support()
        .into_iter()
        .chain([Place::Infinity])
        .find(|v| !local_wp_member(c, v))
}

/// Global discriminant test: square classes at odd rank, Artin-Schreier
/// classes at even rank.
pub fn global_disc_equal(f: &QuadraticForm, g: &QuadraticForm) -> Result<bool> {
    Ok(disc_obstruction(f, g)?.0.is_none())
}

fn disc_obstruction(f: &QuadraticForm, g: &QuadraticForm) -> Result<(Option<Obstruction>, Step)> {
    if f.rank() != g.rank() {
        return Err(Error::RankMismatch(f.rank(), g.rank()));
    }
    let (df, dg) = (arf(f), arf(g));
    if f.rank() % 2 == 1 {
        let e = &df * &dg;
        let ok = global_square_test(&e)?.is_some();
        let step = Step::new(CheckKind::GlobalSquare, ok).about(&e);
        let ob = (!ok).then(|| Obstruction::NonSquare {
            place: odd_valuation_place(&e).expect("non-squares have an odd valuation"),
            element: e,
        });
        Ok((ob, step))
    } else {
        let c = &df + &dg;
        let ok = global_as_test(&c).is_some();
        let step = Step::new(CheckKind::GlobalArtinSchreier, ok).about(&c);
        let ob = (!ok).then(|| Obstruction::NotArtinSchreier {
            place: wp_obstruction_place(&c).expect("a local obstruction exists"),
            element: c,
        });
        Ok((ob, step))
    }
}

/// Compares local Clifford classes over the support; returns the places
/// where they differ.
pub fn global_clifford_equal(f: &QuadraticForm, g: &QuadraticForm) -> (bool, BTreeSet<Place>) {
    let diff: BTreeSet<Place> = support_places(f, g)
        .into_iter()
        .filter(|v| local_clifford_class(f, v) != local_clifford_class(g, v))
        .collect();
    (diff.is_empty(), diff)
}

pub fn isometric(f: &QuadraticForm, g: &QuadraticForm) -> Result<Decision> {
    let mut cert = vec![Step::new(CheckKind::RankEquality, f.rank() == g.rank())];
    if f.rank() != g.rank() {
        let ob = Obstruction::RankMismatch {
            left: f.rank(),
            right: g.rank(),
        };
        return Ok(Decision::negative("ranks differ", ob, cert));
    }
    let (ob, step) = disc_obstruction(f, g)?;
    cert.push(step);
    if let Some(ob) = ob {
        return Ok(Decision::negative("discriminants differ", ob, cert));
    }
    for v in support_places(f, g) {
        let same = local_clifford_class(f, &v) == local_clifford_class(g, &v);
        cert.push(Step::new(CheckKind::LocalClifford, same).at(&v));
        if !same {
            return Ok(Decision::negative(
                "Clifford invariants differ",
                Obstruction::CliffordMismatch { place: v },
                cert,
            ));
        }
    }
    Ok(Decision::positive(
        "rank, discriminant and Clifford invariant agree",
        cert,
    ))
}

/// First support place with local Clifford class 1 whose local discriminant
/// is trivial: the unique anisotropic rank-4 profile.
fn anisotropic_rank4_place(q: &QuadraticForm, cert: &mut Vec<Step>) -> Option<Place> {
    let c = arf(q);
    support_places(q, q).into_iter().find(|v| {
        let cl = local_clifford_class(q, v);
        let hit = cl == 1 && local_wp_member(&c, v);
        cert.push(Step::new(CheckKind::LocalProfile, !hit).at(v));
        hit
    })
}

fn nonsplit_clifford_place(q: &QuadraticForm, cert: &mut Vec<Step>) -> Option<Place> {
    support_places(q, q).into_iter().find(|v| {
        let cl = local_clifford_class(q, v);
        cert.push(Step::new(CheckKind::LocalClifford, cl == 0).at(v));
        cl == 1
    })
}

/// Hasse-Minkowski with the local classification tables.
pub fn global_isotropic(q: &QuadraticForm) -> Result<Decision> {
    let n = q.rank();
    let mut cert = Vec::new();
    match n {
        0 => Err(Error::Malformed("the zero form has no isotropy decision".into())),
        1 => {
            cert.push(Step::new(CheckKind::RankBound, false));
            Ok(Decision::negative("rank 1", Obstruction::RankBound { rank: 1 }, cert))
        }
        2 => {
            let c = arf(q);
            let ok = global_as_test(&c).is_some();
            cert.push(Step::new(CheckKind::GlobalArtinSchreier, ok).about(&c));
            if ok {
                return Ok(Decision::positive("Arf invariant is trivial", cert));
            }
            let place = wp_obstruction_place(&c).expect("a local obstruction exists");
            cert.push(Step::new(CheckKind::LocalArtinSchreier, false).at(&place).about(&c));
            Ok(Decision::negative(
                "Arf invariant is nontrivial",
                Obstruction::AnisotropicPlace { place },
                cert,
            ))
        }
        3 => match nonsplit_clifford_place(q, &mut cert) {
            None => Ok(Decision::positive("Clifford invariant splits everywhere", cert)),
            Some(place) => Ok(Decision::negative(
                "Clifford invariant is locally nonsplit",
                Obstruction::AnisotropicPlace { place },
                cert,
            )),
        },
        4 => match anisotropic_rank4_place(q, &mut cert) {
            None => Ok(Decision::positive("no place with anisotropic rank 4", cert)),
            Some(place) => Ok(Decision::negative(
                "locally anisotropic of rank 4",
                Obstruction::AnisotropicPlace { place },
                cert,
            )),
        },
        _ => {
            cert.push(Step::new(CheckKind::RankBound, true));
            Ok(Decision::positive("rank > 4", cert))
        }
    }
}

/// `n - 2 i_0(q)`, with the global Witt index the minimum of the local ones.
pub fn global_anisotropic_dimension(q: &QuadraticForm) -> Result<usize> {
    let n = q.rank();
    let mut scratch = Vec::new();
    Ok(if n % 2 == 1 {
        if n >= 3 && nonsplit_clifford_place(q, &mut scratch).is_some() {
            3
        } else {
            1
        }
    } else if n == 0 {
        0
    } else if n >= 4 && anisotropic_rank4_place(q, &mut scratch).is_some() {
        4
    } else if global_as_test(&arf(q)).is_none() {
        2
    } else {
        0
    })
}

pub fn similar_decide(f: &QuadraticForm, g: &QuadraticForm) -> Result<Decision> {
    similar_decide_with(f, g, FactorSearch::default())
}

fn verify_factor(f: &QuadraticForm, g: &QuadraticForm, a: &RatFunc, cert: &mut Vec<Step>) -> Result<()> {
    let ok = isometric(f, &scale(a, g)?)?.verdict;
    cert.push(Step::new(CheckKind::FactorVerification, ok).about(a));
    if ok {
        Ok(())
    } else {
        Err(Error::FactorVerificationFailed(a.to_string()))
    }
}

pub fn similar_decide_with(f: &QuadraticForm, g: &QuadraticForm, search: FactorSearch) -> Result<Decision> {
    let mut cert = vec![Step::new(CheckKind::RankEquality, f.rank() == g.rank())];
    if f.rank() != g.rank() {
        let ob = Obstruction::RankMismatch {
            left: f.rank(),
            right: g.rank(),
        };
        return Ok(Decision::negative("ranks differ", ob, cert));
    }
    let field = f.field();
    if f.rank() % 2 == 1 {
        let (_, diff) = global_clifford_equal(f, g);
        cert.push(Step::new(CheckKind::LocalClifford, diff.is_empty()));
        if let Some(place) = diff.into_iter().next() {
            cert.push(Step::new(CheckKind::LocalClifford, false).at(&place));
            return Ok(Decision::negative(
                "local Witt indices differ",
                Obstruction::LocalSimilarity { place },
                cert,
            ));
        }
        let a = f.odd_part().unwrap().div(g.odd_part().unwrap())?;
        verify_factor(f, g, &a, &mut cert)?;
        let mut d = Decision::positive("Clifford invariants agree", cert);
        d.factor = Some(a);
        d.factor_status = FactorStatus::Verified;
        return Ok(d);
    }
    let (ob, step) = disc_obstruction(f, g)?;
    cert.push(step);
    if let Some(ob) = ob {
        return Ok(Decision::negative("Arf invariants differ", ob, cert));
    }
    let c = arf(f);
    let (_, diff) = global_clifford_equal(f, g);
    for v in &diff {
        let trivial = local_wp_member(&c, v);
        cert.push(Step::new(CheckKind::LocalArtinSchreier, !trivial).at(v).about(&c));
        if trivial {
            return Ok(Decision::negative(
                "Clifford invariants differ where the discriminant is locally trivial",
                Obstruction::LocalSimilarity { place: v.clone() },
                cert,
            ));
        }
    }
    let mut d = Decision::positive("locally similar everywhere", cert);
    if diff.is_empty() {
        let one = RatFunc::one(field);
        verify_factor(f, g, &one, &mut d.certificate)?;
        d.factor = Some(one);
        d.factor_status = FactorStatus::Verified;
        return Ok(d);
    }
    match factor_search(f, g, search, &mut d.certificate) {
        Ok(a) => {
            d.factor = Some(a);
            d.factor_status = FactorStatus::Verified;
        }
        Err(Error::NotFoundWithinBound(bound)) => {
            d.reason = "decided-by-theorem, factor-not-found".into();
            d.factor_status = FactorStatus::NotFoundWithinBound { degree_bound: bound };
        }
        Err(e) => return Err(e),
    }
    Ok(d)
}

/// Finds `a` with `f ≅ a g` for even-rank forms with equal Arf invariants
/// whose Clifford invariants differ only where the discriminant is locally
/// nontrivial.
pub fn find_similarity_factor(f: &QuadraticForm, g: &QuadraticForm, degree_bound: usize) -> Result<RatFunc> {
    let search = FactorSearch {
        degree_bound,
        ..FactorSearch::default()
    };
    factor_search(f, g, search, &mut Vec::new())
}

/// `Clif(a g) = Clif(g) + (c, a]` with `c = Arf(g)`, so `a` must realize the
/// local profile `cl_v(f) + cl_v(g)` through the symbol `(c, a]`. The
/// profile of a product is the sum of the profiles, so the search is a
/// linear-algebra problem over `F_2` on generators: the support places and
/// primes outside the support at which `c` is locally trivial (their symbol
/// vanishes off the support).
fn factor_search(f: &QuadraticForm, g: &QuadraticForm, search: FactorSearch, cert: &mut Vec<Step>) -> Result<RatFunc> {
    if f.rank() != g.rank() {
        return Err(Error::RankMismatch(f.rank(), g.rank()));
    }
    if f.rank() % 2 == 1 {
        return Err(Error::Malformed("factor search applies to even rank".into()));
    }
    let field = f.field();
    let places: Vec<Place> = support_places(f, g).into_iter().collect();
    let mut target = BitVec::zeros(places.len());
    for (i, v) in places.iter().enumerate() {
        target.set(i, local_clifford_class(f, v) != local_clifford_class(g, v));
    }
    if target.is_zero() {
        let one = RatFunc::one(field);
        verify_factor(f, g, &one, cert)?;
        return Ok(one);
    }
    if target.ones().count() % 2 == 1 {
        return Err(Error::ReciprocityViolation(format!(
            "Clifford invariants differ at an odd number of places: {:?}",
            target.ones().map(|i| places[i].to_string()).collect::<Vec<_>>()
        )));
    }
    let c = arf(g);
    let profile = |pi: &Poly| -> BitVec {
        let pair = SymbolPair::new(c.clone(), RatFunc::from_poly(pi.clone())).expect("nonzero slot");
        let mut bits = BitVec::zeros(places.len());
        for (i, v) in places.iter().enumerate() {
            bits.set(i, schmid_symbol(&pair, v).expect("nonzero slot") == 1);
        }
        bits
    };
    let mut span = Span::new();
    let mut generators: Vec<Poly> = Vec::new();
    let try_finish = |span: &Span, generators: &[Poly], cert: &mut Vec<Step>| -> Option<Result<RatFunc>> {
        let combo = span.express(&target)?;
        let a = combo.ones().fold(Poly::one(field), |acc, i| &acc * &generators[i]);
        let a = RatFunc::from_poly(a);
        cert.push(Step::new(CheckKind::FactorSearch, true).about(&a));
        Some(verify_factor(f, g, &a, cert).map(|_| a))
    };
    for v in &places {
        if let Place::Finite(pi) = v {
            span.insert(profile(pi));
            generators.push(pi.clone());
        }
    }
    if let Some(done) = try_finish(&span, &generators, cert) {
        return done;
    }
    let support: BTreeSet<&Place> = places.iter().collect();
    let mut tried = 0usize;
    for deg in 1..=search.degree_bound {
        for pi in monic_irreducibles(field, deg) {
            let v = Place::Finite(pi.clone());
            if support.contains(&v) {
                continue;
            }
            if tried >= search.candidate_cap {
                break;
            }
            tried += 1;
            if reduce_at_place(&c, &v).trace_to_prime() != 0 {
                continue;
            }
            generators.push(pi.clone());
            if span.insert(profile(&pi)) {
                if let Some(done) = try_finish(&span, &generators, cert) {
                    return done;
                }
            }
        }
    }
    cert.push(Step::new(CheckKind::FactorSearch, false));
    Err(Error::NotFoundWithinBound(search.degree_bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2k::Gf2k;
    use crate::qform::direct_sum;
    use crate::random::{random_form, random_nonzero_ratfunc};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Gf2k {
        Gf2k::f2()
    }

    fn r(num: &[u8], den: &[u8]) -> RatFunc {
        RatFunc::new(Poly::from_bits(f2(), num), Poly::from_bits(f2(), den)).unwrap()
    }

    fn place(bits: &[u8]) -> Place {
        Place::finite(Poly::from_bits(f2(), bits)).unwrap()
    }

    fn h(n: usize) -> QuadraticForm {
        QuadraticForm::hyperbolic(f2(), n)
    }

    /// `[1+t, 1/(t(1+t))]`: Arf `1/t`, Clifford nonsplit exactly at `t` and `t+1`.
    fn twisted() -> QuadraticForm {
        QuadraticForm::binary(r(&[1, 1], &[1]), r(&[1], &[0, 1, 1]))
    }

    fn one_over_t() -> QuadraticForm {
        QuadraticForm::binary(r(&[1], &[1]), r(&[1], &[0, 1]))
    }

    #[test]
    fn disc_examples() {
        let q = twisted();
        assert!(global_disc_equal(&q, &q).unwrap());
        let one = QuadraticForm::diagonal(r(&[1], &[1])).unwrap();
        let t = QuadraticForm::diagonal(r(&[0, 1], &[1])).unwrap();
        assert!(!global_disc_equal(&one, &t).unwrap());
        let wp_t = QuadraticForm::binary(r(&[1], &[1]), r(&[0, 1, 1], &[1]));
        assert!(global_disc_equal(&wp_t, &h(1)).unwrap());
        assert_eq!(global_disc_equal(&one, &h(1)), Err(Error::RankMismatch(1, 2)));
    }

    #[test]
    fn clifford_equality_examples() {
        let q = twisted();
        assert_eq!(global_clifford_equal(&q, &q), (true, BTreeSet::new()));
        let g = direct_sum(&q, &h(1)).unwrap();
        assert_eq!(
            global_clifford_equal(&h(2), &g),
            (false, BTreeSet::from([place(&[0, 1]), place(&[1, 1])]))
        );
        let one = QuadraticForm::diagonal(r(&[1], &[1])).unwrap();
        let t = QuadraticForm::diagonal(r(&[0, 1], &[1])).unwrap();
        assert_eq!(global_clifford_equal(&one, &t), (true, BTreeSet::new()));
    }

    #[test]
    fn isometry_examples() {
        let q = twisted();
        assert!(isometric(&q, &q).unwrap().verdict);
        let iso = QuadraticForm::binary(r(&[1], &[1]), RatFunc::zero(f2()));
        assert!(isometric(&iso, &h(1)).unwrap().verdict);
        let d = isometric(&h(1), &one_over_t()).unwrap();
        assert!(!d.verdict);
        assert!(d
            .certificate
            .iter()
            .any(|s| s.check == CheckKind::GlobalArtinSchreier && !s.passed));
        assert_eq!(d.witness, Some(place(&[0, 1])));
        assert!(d.obstruction.unwrap().replay(&h(1), Some(&one_over_t())).unwrap());
    }

    #[test]
    fn isotropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q5 = random_form(&mut rng, f2(), 5, 3);
        let d = global_isotropic(&q5).unwrap();
        assert!(d.verdict);
        assert_eq!(d.reason, "rank > 4");
        let d = global_isotropic(&one_over_t()).unwrap();
        assert!(!d.verdict);
        assert_eq!(d.witness, Some(place(&[0, 1])));
        let q3 = direct_sum(&QuadraticForm::diagonal(r(&[1], &[1])).unwrap(), &twisted()).unwrap();
        let d = global_isotropic(&q3).unwrap();
        assert!(!d.verdict);
        assert_eq!(d.witness, Some(place(&[0, 1])));
        assert!(d.obstruction.unwrap().replay(&q3, None).unwrap());
        let d = global_isotropic(&QuadraticForm::diagonal(r(&[0, 1], &[1])).unwrap()).unwrap();
        assert!(!d.verdict);
    }

    #[test]
    fn anisotropic_dimension_examples() {
        assert_eq!(global_anisotropic_dimension(&h(3)).unwrap(), 0);
        let q = direct_sum(&one_over_t(), &h(1)).unwrap();
        assert_eq!(global_anisotropic_dimension(&q).unwrap(), 2);
        let one = QuadraticForm::diagonal(r(&[1], &[1])).unwrap();
        assert_eq!(global_anisotropic_dimension(&one).unwrap(), 1);
        // twisted ⊥ [1, 1/t]: Arf trivial, Clifford nonsplit at t+1 only... and at t
        let q = direct_sum(&twisted(), &one_over_t()).unwrap();
        let dim = global_anisotropic_dimension(&q).unwrap();
        assert!(dim == 0 || dim == 4);
    }

    #[test]
    fn similarity_examples() {
        let one = QuadraticForm::diagonal(r(&[1], &[1])).unwrap();
        let t = QuadraticForm::diagonal(r(&[0, 1], &[1])).unwrap();
        let d = similar_decide(&one, &t).unwrap();
        assert!(d.verdict);
        assert_eq!(d.factor, Some(r(&[1], &[0, 1])));

        let g = direct_sum(&twisted(), &h(1)).unwrap();
        let d = similar_decide(&h(2), &g).unwrap();
        assert!(!d.verdict);
        assert_eq!(d.witness, Some(place(&[0, 1])));
        assert!(d.obstruction.unwrap().replay(&h(2), Some(&g)).unwrap());

        // equal Arf, Clifford differing where the Arf is locally trivial
        let g = direct_sum(&twisted(), &one_over_t()).unwrap();
        let d = similar_decide(&h(2), &g).unwrap();
        assert!(!d.verdict);
        assert!(d.obstruction.unwrap().replay(&h(2), Some(&g)).unwrap());
    }

    #[test]
    fn planted_factor_is_recovered() {
        let g = direct_sum(&twisted(), &h(1)).unwrap();
        let t = r(&[0, 1], &[1]);
        let f = scale(&t, &g).unwrap();
        assert!(isometric(&f, &scale(&t, &g).unwrap()).unwrap().verdict);
        let a = find_similarity_factor(&f, &g, DEFAULT_DEGREE_BOUND).unwrap();
        assert!(isometric(&f, &scale(&a, &g).unwrap()).unwrap().verdict);
        assert!(similar_decide(&f, &g).unwrap().verdict);

        // (1/t, 1+t] is nonsplit at t and t+1, so the Clifford invariants differ there
        let g = direct_sum(&one_over_t(), &h(1)).unwrap();
        let f = scale(&r(&[1, 1], &[1]), &g).unwrap();
        let (_, diff) = global_clifford_equal(&f, &g);
        assert_eq!(diff, BTreeSet::from([place(&[0, 1]), place(&[1, 1])]));
        let d = similar_decide(&f, &g).unwrap();
        assert!(d.verdict);
        assert_eq!(d.factor_status, FactorStatus::Verified);
        let a = d.factor.unwrap();
        assert!(isometric(&f, &scale(&a, &g).unwrap()).unwrap().verdict);
        assert!(d
            .certificate
            .iter()
            .any(|s| s.check == CheckKind::FactorSearch && s.passed));
    }

    fn seeded(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn factors_are_sound_and_scaling_is_complete(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = seeded(seed);
            let field = Gf2k::new(1 + (seed % 2) as u32).unwrap();
            let q = random_form(&mut rng, field, n, 2);
            let a = random_nonzero_ratfunc(&mut rng, field, 2);
            let sq = scale(&a, &q).unwrap();
            let d = similar_decide(&q, &sq).unwrap();
            prop_assert!(d.verdict);
            if let Some(b) = &d.factor {
                prop_assert!(isometric(&q, &scale(b, &sq).unwrap()).unwrap().verdict);
            }
        }

        #[test]
        fn similarity_is_reflexive_and_symmetric(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = seeded(seed);
            let field = Gf2k::new(1 + (seed % 2) as u32).unwrap();
            let f = random_form(&mut rng, field, n, 2);
            let g = random_form(&mut rng, field, n, 2);
            prop_assert!(similar_decide(&f, &f).unwrap().verdict);
            prop_assert_eq!(similar_decide(&f, &g).unwrap().verdict, similar_decide(&g, &f).unwrap().verdict);
        }

        #[test]
        fn similarity_is_transitive_on_chains(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = seeded(seed);
            let q = random_form(&mut rng, f2(), n, 2);
            let g = scale(&random_nonzero_ratfunc(&mut rng, f2(), 2), &q).unwrap();
            let h = scale(&random_nonzero_ratfunc(&mut rng, f2(), 2), &g).unwrap();
            prop_assert!(similar_decide(&q, &g).unwrap().verdict);
            prop_assert!(similar_decide(&g, &h).unwrap().verdict);
            prop_assert!(similar_decide(&q, &h).unwrap().verdict);
        }

        #[test]
        fn negative_verdicts_replay(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = seeded(seed);
            let f = random_form(&mut rng, f2(), n, 2);
            let g = random_form(&mut rng, f2(), n, 2);
            for d in [similar_decide(&f, &g).unwrap(), isometric(&f, &g).unwrap()] {
                if !d.verdict {
                    prop_assert!(d.obstruction.unwrap().replay(&f, Some(&g)).unwrap());
                }
            }
            let d = global_isotropic(&f).unwrap();
            if !d.verdict {
                prop_assert!(d.obstruction.unwrap().replay(&f, None).unwrap());
            }
        }
    }
}
