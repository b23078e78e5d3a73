//! Dense index sets over a fixed universe `0..k`.
//!
//! These are the working currency of the whole machine: down-sets, excluded
//! up-sets, saturation sets and orbits are all `IndexSet`s. The ordering is
//! lexicographic on the ascending index sequence, which is what canonical
//! forms under a group action are minimized against.

use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    universe: usize,
    words: Vec<u64>,
}

impl IndexSet {
    pub fn empty(universe: usize) -> Self {
        IndexSet {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, iter: I) -> Self {
        let mut s = Self::empty(universe);
        for i in iter {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} out of universe {}", self.universe);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.universe);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_same_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "index sets over different universes"
        );
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_same_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        IndexSet { universe: self.universe, words }
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_same_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        IndexSet { universe: self.universe, words }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.check_same_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        IndexSet { universe: self.universe, words }
    }

    pub fn complement(&self) -> Self {
        Self::full(self.universe).minus(self)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_same_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.check_same_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl Ord for IndexSet {
    /// Lexicographic comparison of the ascending index sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_same_universe(other);
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = IndexSet::empty(70);
        s.insert(0);
        s.insert(65);
        s.insert(3);
        assert_eq!(s.to_vec(), vec![0, 3, 65]);
        assert_eq!(s.len(), 3);
        s.remove(3);
        assert!(!s.contains(3));
        let t = IndexSet::from_indices(70, [0, 1]);
        assert_eq!(s.union(&t).to_vec(), vec![0, 1, 65]);
        assert_eq!(s.intersection(&t).to_vec(), vec![0]);
        assert_eq!(s.minus(&t).to_vec(), vec![65]);
        assert!(IndexSet::empty(70).is_subset_of(&s));
        assert_eq!(s.complement().len(), 68);
    }

    #[test]
    fn sequence_lex_order() {
        let u = 10;
        let set = |v: &[usize]| IndexSet::from_indices(u, v.iter().copied());
        // prefix is smaller
        assert!(set(&[1]) < set(&[1, 2]));
        // first differing element decides
        assert!(set(&[0, 5]) < set(&[1]));
        assert!(set(&[1, 7]) < set(&[2]));
        assert!(set(&[]) < set(&[0]));
    }
}
