//! Non-degenerate quadratic forms over `K` in the canonical shape
//! `<d> ⊥ [a_1, b_1] ⊥ ... ⊥ [a_m, b_m]`, Gram input, normalization by
//! symplectic reduction, scaling, and the global invariants.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcfield::{Place, RatFunc};
use crate::gf2k::Gf2k;
use crate::localinv::SymbolPair;

/// `d x_0^2 + sum_i (a_i x_i^2 + x_i y_i + b_i y_i^2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    field: Gf2k,
    odd: Option<RatFunc>,
    binaries: Vec<(RatFunc, RatFunc)>,
}

impl QuadraticForm {
    pub fn new(field: Gf2k, odd: Option<RatFunc>, binaries: Vec<(RatFunc, RatFunc)>) -> Result<Self> {
        if let Some(d) = &odd {
            if d.is_zero() {
                return Err(Error::DegenerateForm {
                    radical_dim: 1,
                    quadratic_radical: true,
                });
            }
        }
        let same_field = odd
            .iter()
            .chain(binaries.iter().flat_map(|(a, b)| [a, b]))
            .all(|x| x.field() == field);
        if !same_field {
            return Err(Error::FieldMismatch);
        }
        Ok(QuadraticForm { field, odd, binaries })
    }

    /// `[a, b] = a x^2 + xy + b y^2`.
    pub fn binary(a: RatFunc, b: RatFunc) -> Self {
        let field = a.field();
        QuadraticForm::new(field, None, vec![(a, b)]).expect("binary forms are non-degenerate")
    }

    /// `<d>`.
    pub fn diagonal(d: RatFunc) -> Result<Self> {
        QuadraticForm::new(d.field(), Some(d), Vec::new())
    }

    /// `H^count`, `H = [0, 0]`.
    pub fn hyperbolic(field: Gf2k, count: usize) -> Self {
        let h = (RatFunc::zero(field), RatFunc::zero(field));
        QuadraticForm {
            field,
            odd: None,
            binaries: vec![h; count],
        }
    }

    pub fn field(&self) -> Gf2k {
        self.field
    }

    pub fn odd_part(&self) -> Option<&RatFunc> {
        self.odd.as_ref()
    }

    pub fn binaries(&self) -> &[(RatFunc, RatFunc)] {
        &self.binaries
    }

    pub fn rank(&self) -> usize {
        self.odd.is_some() as usize + 2 * self.binaries.len()
    }

    /// All coefficients, odd part first.
    pub fn coefficients(&self) -> impl Iterator<Item = &RatFunc> {
        self.odd.iter().chain(self.binaries.iter().flat_map(|(a, b)| [a, b]))
    }

    /// `q(x)` in the Gram basis order (odd coordinate first, then pairs).
    pub fn evaluate(&self, x: &[RatFunc]) -> Result<RatFunc> {
        if x.len() != self.rank() {
            return Err(Error::RankMismatch(self.rank(), x.len()));
        }
        let mut acc = RatFunc::zero(self.field);
        let mut idx = 0;
        if let Some(d) = &self.odd {
            acc = &acc + &(d * &x[0].square());
            idx = 1;
        }
        for (a, b) in &self.binaries {
            let (u, w) = (&x[idx], &x[idx + 1]);
            acc = &(&acc + &(a * &u.square())) + &(&(u * w) + &(b * &w.square()));
            idx += 2;
        }
        Ok(acc)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(d) = &self.odd {
            parts.push(format!("<{d}>"));
        }
        for (a, b) in &self.binaries {
            parts.push(format!("[{a}, {b}]"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" ⊥ "))
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized as `{"odd": "d", "binaries": [["a", "b"], ...]}`.
impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadraticForm", 2)?;
        st.serialize_field("odd", &self.odd.as_ref().map(|d| d.to_string()))?;
        let bin: Vec<[String; 2]> = self
            .binaries
            .iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect();
        st.serialize_field("binaries", &bin)?;
        st.end()
    }
}

/// `q(x) = sum_{i <= j} c_ij x_i x_j`; row `i` of `coeffs` holds
/// `c_ii, c_i(i+1), ..., c_i(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramInput {
    field: Gf2k,
    coeffs: Vec<Vec<RatFunc>>,
}

/// Square matrix over `K`, row-major.
pub type Matrix = Vec<Vec<RatFunc>>;

impl GramInput {
    pub fn new(field: Gf2k, coeffs: Vec<Vec<RatFunc>>) -> Result<Self> {
        let n = coeffs.len();
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != n - i {
                return Err(Error::Malformed(format!(
                    "row {i} of an upper-triangular array of size {n} must have {} entries",
                    n - i
                )));
            }
            if row.iter().any(|c| c.field() != field) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(GramInput { field, coeffs })
    }

    pub fn field(&self) -> Gf2k {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn rows(&self) -> &[Vec<RatFunc>] {
        &self.coeffs
    }

    /// `c_ij` for `i <= j`.
    pub fn coeff(&self, i: usize, j: usize) -> &RatFunc {
        debug_assert!(i <= j);
        &self.coeffs[i][j - i]
    }

    pub fn evaluate(&self, x: &[RatFunc]) -> RatFunc {
        let n = self.rank();
        let mut acc = RatFunc::zero(self.field);
        for i in 0..n {
            for j in i..n {
                let c = self.coeff(i, j);
                if !c.is_zero() && !x[i].is_zero() && !x[j].is_zero() {
                    acc = &acc + &(c * &(&x[i] * &x[j]));
                }
            }
        }
        acc
    }

    /// Polar form `B(x, y) = q(x + y) - q(x) - q(y)`.
    pub fn polar(&self, x: &[RatFunc], y: &[RatFunc]) -> RatFunc {
        let n = self.rank();
        let mut acc = RatFunc::zero(self.field);
        for i in 0..n {
            for j in i + 1..n {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let cross = &(&x[i] * &y[j]) + &(&x[j] * &y[i]);
                if !cross.is_zero() {
                    acc = &acc + &(c * &cross);
                }
            }
        }
        acc
    }
}

fn combine(u: &[RatFunc], a: &RatFunc, w: &[RatFunc], b: &RatFunc) -> Vec<RatFunc> {
    u.iter().zip(w).map(|(x, y)| &(a * x) + &(b * y)).collect()
}

/// Symplectic reduction of the polar form to `<d> ⊥ [a_1, b_1] ⊥ ...`.
pub fn normalize(input: &GramInput) -> Result<QuadraticForm> {
    let n = input.rank();
    let field = input.field;
    let zero = RatFunc::zero(field);
    let one = RatFunc::one(field);
    let mut basis: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let mut binaries = Vec::new();
    loop {
        let pivot = (0..basis.len()).find_map(|i| {
            (i + 1..basis.len()).find_map(|j| {
                let b = input.polar(&basis[i], &basis[j]);
                (!b.is_zero()).then_some((i, j, b))
            })
        });
        let Some((i, j, b)) = pivot else {
            break;
        };
        let w = basis.remove(j);
        let u = basis.remove(i);
        let w: Vec<RatFunc> = combine(&w, &b.inv()?, &w, &zero);
        binaries.push((input.evaluate(&u), input.evaluate(&w)));
        for x in basis.iter_mut() {
            let bxw = input.polar(x, &w);
            let bxu = input.polar(x, &u);
            if bxw.is_zero() && bxu.is_zero() {
                continue;
            }
            let shifted = combine(&u, &bxw, &w, &bxu);
            *x = x.iter().zip(&shifted).map(|(a, s)| a + s).collect();
        }
    }
    let radical_values: Vec<RatFunc> = basis.iter().map(|z| input.evaluate(z)).collect();
    if basis.len() > 1 || radical_values.iter().any(|v| v.is_zero()) {
        return Err(Error::DegenerateForm {
            radical_dim: basis.len(),
            quadratic_radical: radical_values.iter().any(|v| v.is_zero()),
        });
    }
    QuadraticForm::new(field, radical_values.into_iter().next(), binaries)
}

/// Gram input of a canonical form: `<d>` first, then each pair on
/// consecutive coordinates.
pub fn gram_of(q: &QuadraticForm) -> GramInput {
    let n = q.rank();
    let field = q.field;
    let mut coeffs: Vec<Vec<RatFunc>> = (0..n).map(|i| vec![RatFunc::zero(field); n - i]).collect();
    let mut idx = 0;
    if let Some(d) = &q.odd {
        coeffs[0][0] = d.clone();
        idx = 1;
    }
    for (a, b) in &q.binaries {
        coeffs[idx][0] = a.clone();
        coeffs[idx][1] = RatFunc::one(field);
        coeffs[idx + 1][0] = b.clone();
        idx += 2;
    }
    GramInput { field, coeffs }
}

/// Gaussian elimination; `Err(SingularMatrix)` unless `t` is invertible.
pub fn check_invertible(t: &Matrix) -> Result<()> {
    let n = t.len();
    if t.iter().any(|row| row.len() != n) {
        return Err(Error::Malformed("transport matrix must be square".into()));
    }
    let mut m = t.clone();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::SingularMatrix);
        };
        m.swap(col, p);
        let inv = m[col][col].inv()?;
        let pivot = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] * &inv;
            for (x, p) in row.iter_mut().zip(&pivot).skip(col) {
                *x = &*x + &(&factor * p);
            }
        }
    }
    Ok(())
}

/// The form `x -> q(T x)`.
pub fn transport(input: &GramInput, t: &Matrix) -> Result<GramInput> {
    let n = input.rank();
    if t.len() != n {
        return Err(Error::RankMismatch(n, t.len()));
    }
    check_invertible(t)?;
    let cols: Vec<Vec<RatFunc>> = (0..n).map(|j| t.iter().map(|row| row[j].clone()).collect()).collect();
    let coeffs = (0..n)
        .map(|i| {
            (i..n)
                .map(|j| {
                    if i == j {
                        input.evaluate(&cols[i])
                    } else {
                        input.polar(&cols[i], &cols[j])
                    }
                })
                .collect()
        })
        .collect();
    Ok(GramInput {
        field: input.field,
        coeffs,
    })
}

/// `a q`: `<d> -> <ad>`, `[b, c] -> [ab, c/a]`.
pub fn scale(a: &RatFunc, q: &QuadraticForm) -> Result<QuadraticForm> {
    if a.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let inv = a.inv()?;
    Ok(QuadraticForm {
        field: q.field,
        odd: q.odd.as_ref().map(|d| a * d),
        binaries: q.binaries.iter().map(|(b, c)| (a * b, &inv * c)).collect(),
    })
}

/// `(rank, disc)`: `disc = d` (a square-class representative) at odd rank,
/// `sum a_i b_i` (an Artin-Schreier class representative) at even rank.
pub fn invariants(q: &QuadraticForm) -> (usize, RatFunc) {
    let disc = match &q.odd {
        Some(d) => d.clone(),
        None => q
            .binaries
            .iter()
            .fold(RatFunc::zero(q.field), |acc, (a, b)| &acc + &(a * b)),
    };
    (q.rank(), disc)
}

/// Symbol list whose local classes sum to the Clifford invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordData {
    pub symbols: Vec<SymbolPair>,
    pub support: BTreeSet<Place>,
}

/// One symbol per binary: `{a, b} -> (ab, a]` at even rank, and
/// `{da, b/d} -> (ab, da]` at odd rank (the even Clifford algebra).
pub fn clifford_symbol_list(q: &QuadraticForm) -> CliffordData {
    let symbols: Vec<SymbolPair> = q
        .binaries
        .iter()
        .map(|(a, b)| match &q.odd {
            Some(d) if !a.is_zero() && !b.is_zero() => SymbolPair {
                as_slot: a * b,
                mult_slot: d * a,
            },
            _ => SymbolPair::quaternion(a, b),
        })
        .collect();
    let mut support = BTreeSet::from([Place::Infinity]);
    for s in &symbols {
        if s.is_trivially_split() {
            continue;
        }
        support.extend(s.as_slot.finite_support());
        support.extend(s.mult_slot.finite_support());
    }
    CliffordData { symbols, support }
}

/// `f ⊥ g`; at most one operand may carry an odd part.
pub fn direct_sum(f: &QuadraticForm, g: &QuadraticForm) -> Result<QuadraticForm> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    if f.odd.is_some() && g.odd.is_some() {
        return Err(Error::TwoOddParts);
    }
    Ok(QuadraticForm {
        field: f.field,
        odd: f.odd.clone().or_else(|| g.odd.clone()),
        binaries: f.binaries.iter().chain(&g.binaries).cloned().collect(),
    })
}

/// Finite places dividing any coefficient, discriminant representative or
/// symbol slot of `f` and `g`, plus the infinite place.
pub fn support_places(f: &QuadraticForm, g: &QuadraticForm) -> BTreeSet<Place> {
    let mut out = BTreeSet::from([Place::Infinity]);
    for q in [f, g] {
        let mut elems: Vec<RatFunc> = q.coefficients().cloned().collect();
        elems.push(invariants(q).1);
        for s in clifford_symbol_list(q).symbols {
            elems.push(s.as_slot);
            elems.push(s.mult_slot);
        }
        for e in elems {
            if !e.is_zero() {
                out.extend(e.finite_support());
            }
        }
    }
    out
}
