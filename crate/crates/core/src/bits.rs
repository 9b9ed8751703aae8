//! Dense linear algebra over `F_2`.

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(n: usize) -> Self {
        BitVec {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }
}

/// Incrementally maintained row-echelon basis of a span, remembering for
/// each basis vector which inserted generators combine to it.
#[derive(Default)]
pub(crate) struct Span {
    rows: Vec<(usize, BitVec, BitVec)>,
    generators: usize,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce(&self, mut v: BitVec) -> (BitVec, BitVec) {
        let mut combo = BitVec::zeros(0);
        for (pivot, row, row_combo) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
                combo.xor_assign(row_combo);
            }
        }
        (v, combo)
    }

    /// Adds a generator; returns whether it enlarged the span.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let index = self.generators;
        self.generators += 1;
        let (v, mut combo) = self.reduce(v);
        combo.set(index, !combo.get(index));
        let Some(pivot) = v.first_one() else {
            return false;
        };
        // keep earlier rows reduced at the new pivot so `reduce` is order-free
        for (_, row, row_combo) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&v);
                row_combo.xor_assign(&combo);
            }
        }
        self.rows.push((pivot, v, combo));
        true
    }

    /// A set of generator indices summing to `target`, if one exists.
    pub fn express(&self, target: &BitVec) -> Option<BitVec> {
        let (rest, combo) = self.reduce(target.clone());
        rest.is_zero().then_some(combo)
    }
}

/// Solves `sum_j x_j columns[j] = target`, returning one solution.
pub(crate) fn solve(columns: &[BitVec], target: &BitVec, _rows: usize) -> Option<BitVec> {
    let mut span = Span::new();
    for c in columns {
        span.insert(c.clone());
    }
    span.express(target)
}
