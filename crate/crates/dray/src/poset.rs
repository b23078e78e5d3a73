//! Finite partial orders over inequality indices.
//!
//! The full order relation is materialized as per-element down/up masks at
//! construction, so order queries and down-set closures are word operations.

use crate::error::{Error, Result};
use crate::sets::IndexSet;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtendMode {
    /// New elements are incomparable to everything.
    Disjoint,
    /// Each new element covers every maximal element of the original poset.
    AboveMaximals,
}

#[derive(Clone)]
pub struct Poset {
    size: usize,
    /// below[i] = {j : j ⪯ i}, including i.
    below: Vec<IndexSet>,
    /// above[i] = {j : j ⪰ i}, including i.
    above: Vec<IndexSet>,
}

impl Poset {
    /// Antichain of `size` elements.
    pub fn antichain(size: usize) -> Poset {
        let below = (0..size)
            .map(|i| IndexSet::from_indices(size, [i]))
            .collect::<Vec<_>>();
        Poset { size, below: below.clone(), above: below }
    }

    /// Chain `0 ≺ 1 ≺ ... ≺ size−1`.
    pub fn chain(size: usize) -> Poset {
        let covers: Vec<(usize, usize)> = (1..size).map(|i| (i - 1, i)).collect();
        Poset::from_covers(size, &covers).expect("chain covers are acyclic")
    }

    /// Build from cover pairs `(lower, upper)`; errors on cycles.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        for &(a, b) in covers {
            if a >= size || b >= size {
                return Err(Error::InvalidInput(format!(
                    "cover pair ({a},{b}) out of range for size {size}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("reflexive cover pair ({a},{b})")));
            }
        }
        let mut up_adj: Vec<Vec<usize>> = vec![Vec::new(); size];
        let mut indegree = vec![0usize; size];
        for &(a, b) in covers {
            up_adj[a].push(b);
            indegree[b] += 1;
        }
        // Topological order; transitive closure by sweeping in reverse.
        let mut order: Vec<usize> = (0..size).filter(|&i| indegree[i] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &up_adj[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    order.push(w);
                }
            }
        }
        if order.len() != size {
            return Err(Error::InvalidInput("cover relation contains a cycle".into()));
        }
        let mut above: Vec<IndexSet> = (0..size)
            .map(|i| IndexSet::from_indices(size, [i]))
            .collect();
        for &v in order.iter().rev() {
            let mut acc = above[v].clone();
            for &w in &up_adj[v] {
                acc.union_with(&above[w]);
            }
            above[v] = acc;
        }
        let mut below: Vec<IndexSet> = (0..size).map(|_| IndexSet::empty(size)).collect();
        for i in 0..size {
            for j in above[i].iter() {
                below[j].insert(i);
            }
        }
        Ok(Poset { size, below, above })
    }

    /// Build from an arbitrary relation; verifies the partial-order axioms.
    pub fn from_leq(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        let mut below: Vec<IndexSet> = (0..size).map(|_| IndexSet::empty(size)).collect();
        let mut above: Vec<IndexSet> = (0..size).map(|_| IndexSet::empty(size)).collect();
        for j in 0..size {
            for i in 0..size {
                if leq(i, j) {
                    below[j].insert(i);
                    above[i].insert(j);
                }
            }
        }
        for i in 0..size {
            if !below[i].contains(i) {
                return Err(Error::InvalidInput(format!("relation not reflexive at {i}")));
            }
            for j in above[i].iter() {
                if j != i && below[i].contains(j) {
                    return Err(Error::InvalidInput(format!(
                        "relation not antisymmetric on ({i},{j})"
                    )));
                }
                if !below[i].is_subset_of(&below[j]) {
                    return Err(Error::InvalidInput(format!(
                        "relation not transitive below ({i},{j})"
                    )));
                }
            }
        }
        Ok(Poset { size, below, above })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn down_mask(&self, i: usize) -> &IndexSet {
        &self.below[i]
    }

    pub fn up_mask(&self, i: usize) -> &IndexSet {
        &self.above[i]
    }

    /// Smallest down-set containing `x`.
    pub fn down_closure(&self, x: &IndexSet) -> IndexSet {
        let mut out = IndexSet::empty(self.size);
        for i in x.iter() {
            out.union_with(&self.below[i]);
        }
        out
    }

    /// Up-set generated by `x`.
    pub fn up_set_of(&self, x: &IndexSet) -> IndexSet {
        let mut out = IndexSet::empty(self.size);
        for i in x.iter() {
            out.union_with(&self.above[i]);
        }
        out
    }

    pub fn is_down_set(&self, x: &IndexSet) -> bool {
        x.iter().all(|i| self.below[i].is_subset_of(x))
    }

    pub fn is_up_set(&self, x: &IndexSet) -> bool {
        x.iter().all(|i| self.above[i].is_subset_of(x))
    }

    /// Elements of `x` with no strict upper bound inside `x`.
    pub fn maximal_of(&self, x: &IndexSet) -> IndexSet {
        let mut out = IndexSet::empty(self.size);
        for i in x.iter() {
            let mut strict_above = self.above[i].intersection(x);
            strict_above.remove(i);
            if strict_above.is_empty() {
                out.insert(i);
            }
        }
        out
    }

    pub fn minimal_of(&self, x: &IndexSet) -> IndexSet {
        let mut out = IndexSet::empty(self.size);
        for i in x.iter() {
            let mut strict_below = self.below[i].intersection(x);
            strict_below.remove(i);
            if strict_below.is_empty() {
                out.insert(i);
            }
        }
        out
    }

    pub fn maximal_elements(&self) -> IndexSet {
        self.maximal_of(&IndexSet::full(self.size))
    }

    pub fn minimal_elements(&self) -> IndexSet {
        self.minimal_of(&IndexSet::full(self.size))
    }

    /// Cover pairs `(lower, upper)`, derived from the closed relation.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut covers = Vec::new();
        for j in 0..self.size {
            for i in self.below[j].iter() {
                if i == j {
                    continue;
                }
                // i ⋖ j iff nothing sits strictly between them.
                let mut between = self.above[i].intersection(&self.below[j]);
                between.remove(i);
                between.remove(j);
                if between.is_empty() {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        covers
    }

    /// Add `count` new top elements (indices `size..size+count`).
    pub fn extend_with_top_antichain(&self, count: usize, mode: ExtendMode) -> Poset {
        let new_size = self.size + count;
        let grow = |s: &IndexSet| IndexSet::from_indices(new_size, s.iter());
        let mut below: Vec<IndexSet> = self.below.iter().map(&grow).collect();
        let mut above: Vec<IndexSet> = self.above.iter().map(&grow).collect();
        let maximals = self.maximal_elements();
        for t in self.size..new_size {
            let mut b = IndexSet::from_indices(new_size, [t]);
            if let ExtendMode::AboveMaximals = mode {
                for m in maximals.iter() {
                    b.union_with(&below[m]);
                    above[m].insert(t);
                    for a in below[m].clone().iter() {
                        above[a].insert(t);
                    }
                }
            }
            below.push(b);
            above.push(IndexSet::from_indices(new_size, [t]));
        }
        Poset { size: new_size, below, above }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(u: usize, v: &[usize]) -> IndexSet {
        IndexSet::from_indices(u, v.iter().copied())
    }

    #[test]
    fn chain_and_antichain() {
        let c = Poset::chain(3);
        assert!(c.leq(0, 2));
        assert!(!c.leq(2, 0));
        assert_eq!(c.maximal_of(&IndexSet::full(3)), set(3, &[2]));
        let a = Poset::antichain(4);
        let x = set(4, &[1, 3]);
        assert_eq!(a.maximal_of(&x), x);
        assert_eq!(a.down_closure(&x), x);
    }

    #[test]
    fn closure_axioms_on_a_diamond() {
        // 0 below 1 and 2, both below 3.
        let p = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let x = set(4, &[3]);
        let cl = p.down_closure(&x);
        assert_eq!(cl, IndexSet::full(4));
        assert!(x.is_subset_of(&cl));
        assert_eq!(p.down_closure(&cl), cl);
        assert!(p.is_down_set(&cl));
        assert!(p.down_closure(&IndexSet::empty(4)).is_empty());
        assert_eq!(p.up_set_of(&set(4, &[1])), set(4, &[1, 3]));
        // complement duality
        assert!(p.is_up_set(&cl.complement()));
    }

    #[test]
    fn cover_pairs_round_trip() {
        let covers = vec![(0, 2), (1, 2), (2, 3)];
        let p = Poset::from_covers(4, &covers).unwrap();
        assert_eq!(p.cover_pairs(), covers);
        assert!(p.leq(0, 3));
    }

    #[test]
    fn cycle_is_rejected() {
        assert!(Poset::from_covers(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn from_leq_validates() {
        assert!(Poset::from_leq(2, |_, _| true).is_err()); // not antisymmetric
        let p = Poset::from_leq(3, |a, b| a == b || (a == 0 && b == 2)).unwrap();
        assert!(p.leq(0, 2));
        assert!(!p.leq(0, 1));
    }

    #[test]
    fn extend_top_modes() {
        let chain2 = Poset::chain(2);
        let same = chain2.extend_with_top_antichain(0, ExtendMode::AboveMaximals);
        assert_eq!(same.size(), 2);

        let ext = chain2.extend_with_top_antichain(1, ExtendMode::AboveMaximals);
        assert_eq!(ext.size(), 3);
        assert!(ext.leq(1, 2));
        assert!(ext.leq(0, 2));
        assert_eq!(ext.cover_pairs(), vec![(0, 1), (1, 2)]);

        let anti = Poset::antichain(3).extend_with_top_antichain(2, ExtendMode::Disjoint);
        assert_eq!(anti.size(), 5);
        assert_eq!(anti.cover_pairs(), vec![]);
        assert_eq!(anti.maximal_elements().len(), 5);
    }
}
