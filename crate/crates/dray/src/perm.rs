//! Permutation groups acting on inequality indices.
//!
//! Groups are materialized as explicit element lists (the party groups topping
//! out at 7! = 5040 make this the simplest exact approach); stabilizers and
//! canonical forms are direct scans over the elements.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::closure::ClosureOp;
use crate::error::{Error, Result};
use crate::sets::IndexSet;

/// Default bound on materialized group order.
pub const GROUP_ORDER_BOUND: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// From the image list `i ↦ images[i]`; must be a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            let im = im as usize;
            if im >= n || seen[im] {
                return Err(Error::InvalidInput("not a bijection on 0..k".into()));
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    /// Transposition (a b).
    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Element-wise image of an index set.
    pub fn map_set(&self, x: &IndexSet) -> IndexSet {
        let mut out = IndexSet::empty(x.universe());
        for i in x.iter() {
            out.insert(self.images[i] as usize);
        }
        out
    }
}

#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Permutation::identity(degree)],
        }
    }

    /// Close the generators under composition; errors past `bound` elements.
    pub fn generate(degree: usize, generators: Vec<Permutation>, bound: usize) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DimensionMismatch { expected: degree, got: g.degree() });
            }
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut elements = vec![Permutation::identity(degree)];
        seen.insert(elements[0].images.to_vec());
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in &generators {
                let next = g.compose(&current);
                if seen.insert(next.images.to_vec()) {
                    if elements.len() >= bound {
                        return Err(Error::GroupTooLarge { bound });
                    }
                    elements.push(next);
                }
            }
        }
        Ok(PermGroup { degree, generators, elements })
    }

    /// Wrap an already-closed element list (identity must be present).
    pub fn from_closed_elements(
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
    ) -> Self {
        debug_assert!(elements.iter().any(|e| e.is_identity()));
        PermGroup { degree, generators, elements }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn orbit_of_element(&self, i: usize) -> IndexSet {
        assert!(i < self.degree);
        let mut out = IndexSet::empty(self.degree);
        for g in &self.elements {
            out.insert(g.apply(i));
        }
        out
    }

    /// Disjoint orbits covering `x`; errors unless `x` is G-invariant.
    /// Orbits come back sorted by their smallest member.
    pub fn partition_into_orbits(&self, x: &IndexSet) -> Result<Vec<IndexSet>> {
        let mut remaining = x.clone();
        let mut orbits = Vec::new();
        while let Some(i) = remaining.first() {
            let orbit = self.orbit_of_element(i);
            if !orbit.is_subset_of(x) {
                return Err(Error::NotInvariant);
            }
            remaining = remaining.minus(&orbit);
            orbits.push(orbit);
        }
        Ok(orbits)
    }

    /// Subgroup `{h : h(x) = x}`.
    pub fn set_stabilizer(&self, x: &IndexSet) -> PermGroup {
        let elements: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|g| g.map_set(x) == *x)
            .cloned()
            .collect();
        PermGroup {
            degree: self.degree,
            generators: elements.iter().filter(|g| !g.is_identity()).cloned().collect(),
            elements,
        }
    }

    /// Lexicographically smallest image of `x`; constant on G-orbits.
    pub fn canonical_set(&self, x: &IndexSet) -> IndexSet {
        self.canonical_set_with_witness(x).0
    }

    /// The canonical image together with a permutation realizing it.
    pub fn canonical_set_with_witness(&self, x: &IndexSet) -> (IndexSet, &Permutation) {
        let mut best = x.clone();
        let mut witness = &self.elements[0];
        for g in &self.elements {
            let image = g.map_set(x);
            if image < best {
                best = image;
                witness = g;
            }
        }
        // identity maps x to x; make sure the witness actually matches `best`
        if witness.map_set(x) != best {
            witness = self
                .elements
                .iter()
                .find(|g| g.map_set(x) == best)
                .expect("witness exists");
        }
        (best, witness)
    }

    /// Union of all images of `x` (orbit completion of a set).
    pub fn orbit_union(&self, x: &IndexSet) -> IndexSet {
        let mut out = x.clone();
        for g in &self.elements {
            out.union_with(&g.map_set(x));
        }
        out
    }

    /// Sampled check that every generator maps closed sets to closed sets and
    /// commutes with the closure on arbitrary sampled subsets.
    pub fn preserves_closed_family(&self, closure: &dyn ClosureOp, samples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<&Permutation> = if self.generators.is_empty() {
            self.elements.iter().take(1).collect()
        } else {
            self.generators.iter().collect()
        };
        for _ in 0..samples {
            let mut x = IndexSet::empty(self.degree);
            for i in 0..self.degree {
                if rng.gen_bool(0.3) {
                    x.insert(i);
                }
            }
            let cx = closure.close(&x);
            for g in &gens {
                let g_cx = g.map_set(&cx);
                if closure.close(&g_cx) != g_cx {
                    return false;
                }
                if closure.close(&g.map_set(&x)) != g_cx {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(u: usize, v: &[usize]) -> IndexSet {
        IndexSet::from_indices(u, v.iter().copied())
    }

    fn sym(n: usize) -> PermGroup {
        let gens = (0..n - 1).map(|i| Permutation::transposition(n, i, i + 1)).collect();
        PermGroup::generate(n, gens, GROUP_ORDER_BOUND).unwrap()
    }

    #[test]
    fn compose_inverse() {
        let a = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.compose(&a).images(), &[2, 0, 1]);
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn generate_symmetric_group() {
        let g = sym(4);
        assert_eq!(g.order(), 24);
        assert_eq!(g.orbit_of_element(2), IndexSet::full(4));
        let trivial = PermGroup::trivial(4);
        assert_eq!(trivial.orbit_of_element(2), set(4, &[2]));
    }

    #[test]
    fn order_bound_guard() {
        let gens = (0..7).map(|i| Permutation::transposition(8, i, i + 1)).collect();
        assert!(matches!(
            PermGroup::generate(8, gens, 10_000),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn orbits_and_stabilizer() {
        // Sym(3) acting on 0,1,2 with 3 fixed.
        let gens = vec![
            Permutation::transposition(4, 0, 1),
            Permutation::transposition(4, 1, 2),
        ];
        let g = PermGroup::generate(4, gens, 100).unwrap();
        assert_eq!(g.order(), 6);
        let orbits = g.partition_into_orbits(&IndexSet::full(4)).unwrap();
        assert_eq!(orbits, vec![set(4, &[0, 1, 2]), set(4, &[3])]);
        assert!(g.partition_into_orbits(&set(4, &[0, 3])).is_err());

        let stab = g.set_stabilizer(&set(4, &[0]));
        assert_eq!(stab.order(), 2);
        // orbit–stabilizer
        assert_eq!(g.orbit_of_element(0).len() * stab.order(), g.order());
    }

    #[test]
    fn canonical_forms() {
        let g = sym(5);
        let a = set(5, &[2, 4]);
        let b = set(5, &[1, 3]);
        assert_eq!(g.canonical_set(&a), g.canonical_set(&b));
        assert_eq!(g.canonical_set(&a), set(5, &[0, 1]));
        let (c, w) = g.canonical_set_with_witness(&a);
        assert_eq!(w.map_set(&a), c);
        // idempotent on the canonical representative
        assert_eq!(g.canonical_set(&c), c);
        // trivial group: canonical form is the set itself
        assert_eq!(PermGroup::trivial(5).canonical_set(&a), a);
    }

    #[test]
    fn closed_family_check_down_closure() {
        use crate::poset::Poset;
        // chain 0 < 1 with element 2 isolated; swapping 0,1 breaks the order,
        // swapping nothing preserves it.
        let p = Poset::from_covers(3, &[(0, 1)]).unwrap();
        let close = |x: &IndexSet| p.down_closure(x);
        let good = PermGroup::trivial(3);
        assert!(good.preserves_closed_family(&close, 50, 7));
        let bad = PermGroup::generate(
            3,
            vec![Permutation::transposition(3, 0, 1)],
            100,
        )
        .unwrap();
        assert!(!bad.preserves_closed_family(&close, 50, 7));
    }
}
