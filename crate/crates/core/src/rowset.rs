//! Fixed-universe bitsets over row indices.
//!
//! Every column of a [`Dataset`](crate::Dataset) is stored as a `RowSet`, so
//! the frequency of a conjunction is the popcount of an intersection.

use std::fmt;

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RowSet {
    words: Vec<u64>,
    universe: usize,
}

impl RowSet {
    /// Empty set over rows `0..universe`.
    pub fn empty(universe: usize) -> Self {
        RowSet {
            words: vec![0; universe.div_ceil(WORD_BITS)],
            universe,
        }
    }

    /// The set of all rows `0..universe`.
    pub fn full(universe: usize) -> Self {
        let mut s = RowSet {
            words: vec![u64::MAX; universe.div_ceil(WORD_BITS)],
            universe,
        };
        s.clear_tail();
        s
    }

    pub fn from_indices(universe: usize, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut s = RowSet::empty(universe);
        for r in rows {
            s.insert(r);
        }
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.universe % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Panics if `row` is outside the universe.
    pub fn insert(&mut self, row: usize) {
        assert!(row < self.universe, "row {row} out of range {}", self.universe);
        self.words[row / WORD_BITS] |= 1u64 << (row % WORD_BITS);
    }

    pub fn remove(&mut self, row: usize) {
        if row < self.universe {
            self.words[row / WORD_BITS] &= !(1u64 << (row % WORD_BITS));
        }
    }

    #[inline]
    pub fn contains(&self, row: usize) -> bool {
        row < self.universe && self.words[row / WORD_BITS] & (1u64 << (row % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &RowSet) -> RowSet {
        debug_assert_eq!(self.universe, other.universe);
        RowSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            universe: self.universe,
        }
    }

    pub fn intersect_with(&mut self, other: &RowSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &RowSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `|self ∩ other|` without materialising the intersection.
    pub fn intersection_len(&self, other: &RowSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn complement(&self) -> RowSet {
        let mut s = RowSet {
            words: self.words.iter().map(|w| !w).collect(),
            universe: self.universe,
        };
        s.clear_tail();
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }
}

impl fmt::Debug for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_complement_respect_universe() {
        for n in [0, 1, 63, 64, 65, 130] {
            let full = RowSet::full(n);
            assert_eq!(full.len(), n);
            assert!(full.complement().is_empty());
            assert_eq!(RowSet::empty(n).complement().len(), n);
        }
    }

    #[test]
    fn intersection_counts() {
        let a = RowSet::from_indices(100, [1, 5, 64, 99]);
        let b = RowSet::from_indices(100, [5, 64, 70]);
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![5, 64]);
        let mut c = a.clone();
        c.union_with(&b);
        assert_eq!(c.len(), 5);
        c.remove(64);
        assert!(!c.contains(64));
    }
}
