//! Exact polyhedral geometry for inequality systems `E_i(v) ≥ 0`.
//!
//! Face and linear-dependence closures, subspace reductions, extreme-ray
//! tests, redundant-member injection, and a dense double-description
//! conversion intended for the reduced desk-scale systems the engine produces.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, IntRow, RatMatrix, RatVector};
use crate::lp::{maximize, Constraint, LpOutcome, Rel};
use crate::rat::Rat;
use crate::sets::IndexSet;

/// A set of dual vectors cutting out a cone `{v : E_i(v) ≥ 0 ∀i}`.
#[derive(Clone)]
pub struct InequalitySystem {
    dim: usize,
    duals: Vec<RatVector>,
    pub(crate) int_duals: Vec<IntRow>,
    redundant: Vec<bool>,
}

impl InequalitySystem {
    /// Validated construction: duals nonzero, cone pointed (dual rank = dim)
    /// and full-dimensional (strictly interior point found by LP).
    pub fn new(dim: usize, duals: Vec<RatVector>, redundant: Option<Vec<bool>>) -> Result<Self> {
        let sys = Self::from_duals_unchecked(dim, duals, redundant)?;
        sys.check_pointed()?;
        if sys.interior_point().is_none() {
            return Err(Error::NotFullDimensional);
        }
        Ok(sys)
    }

    /// Validated construction with a caller-supplied strictly interior point,
    /// avoiding the LP on large systems.
    pub fn with_interior_witness(
        dim: usize,
        duals: Vec<RatVector>,
        redundant: Option<Vec<bool>>,
        witness: &RatVector,
    ) -> Result<Self> {
        let sys = Self::from_duals_unchecked(dim, duals, redundant)?;
        sys.check_pointed()?;
        for i in 0..sys.len() {
            if !crate::rat::is_positive(&sys.eval(i, witness)) {
                return Err(Error::NotFullDimensional);
            }
        }
        Ok(sys)
    }

    /// No geometric validation; used for reduced systems whose pointedness is
    /// established separately.
    pub fn from_duals_unchecked(
        dim: usize,
        duals: Vec<RatVector>,
        redundant: Option<Vec<bool>>,
    ) -> Result<Self> {
        for d in &duals {
            if d.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: d.len() });
            }
            if d.is_zero() {
                return Err(Error::InvalidInput("zero dual vector".into()));
            }
        }
        let redundant = match redundant {
            Some(f) => {
                if f.len() != duals.len() {
                    return Err(Error::InvalidInput("redundant flag count mismatch".into()));
                }
                f
            }
            None => vec![false; duals.len()],
        };
        let int_duals = duals.iter().map(|d| IntRow::from_rats(d.coords())).collect();
        Ok(InequalitySystem { dim, duals, int_duals, redundant })
    }

    fn check_pointed(&self) -> Result<()> {
        let mut ech = Echelon::new(self.dim);
        for d in &self.int_duals {
            ech.insert(d.clone());
        }
        if ech.rank() < self.dim {
            return Err(Error::NotPointed { rank: ech.rank(), dim: self.dim });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.duals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.duals.is_empty()
    }

    pub fn dual(&self, i: usize) -> &RatVector {
        &self.duals[i]
    }

    pub fn duals(&self) -> &[RatVector] {
        &self.duals
    }

    pub fn is_redundant_member(&self, i: usize) -> bool {
        self.redundant[i]
    }

    pub fn redundant_flags(&self) -> &[bool] {
        &self.redundant
    }

    pub fn all_indices(&self) -> IndexSet {
        IndexSet::full(self.len())
    }

    pub fn eval(&self, i: usize, v: &RatVector) -> Rat {
        self.duals[i].dot(v)
    }

    /// Strictly interior point, if the cone is full-dimensional.
    pub fn interior_point(&self) -> Option<RatVector> {
        // max t  s.t.  E_i(v) − t ≥ 0 ∀i,  t ≤ 1;  homogeneous, so the
        // optimum is 1 exactly when an interior point exists.
        let n = self.dim + 1;
        let mut constraints = Vec::with_capacity(self.len() + 1);
        for d in &self.duals {
            let mut c: Vec<Rat> = d.coords().to_vec();
            c.push(-Rat::one());
            constraints.push(Constraint::new(c, Rel::Ge, Rat::zero()));
        }
        let mut cap = vec![Rat::zero(); n];
        cap[self.dim] = Rat::one();
        constraints.push(Constraint::new(cap.clone(), Rel::Le, Rat::one()));
        match maximize(n, &cap, &constraints) {
            LpOutcome::Optimal { value, point } if value.is_positive() => {
                Some(RatVector::new(point[..self.dim].to_vec()))
            }
            _ => None,
        }
    }

    /// `(true, [])` or `(false, violated indices)`.
    pub fn satisfies_all(&self, v: &RatVector) -> (bool, Vec<usize>) {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let iv = IntRow::from_rats(v.coords());
        let violated: Vec<usize> = self
            .int_duals
            .iter()
            .enumerate()
            .filter(|(_, d)| d.dot_sign(&iv) < 0)
            .map(|(i, _)| i)
            .collect();
        (violated.is_empty(), violated)
    }

    /// Indices whose inequalities vanish on `v`.
    pub fn saturation_set(&self, v: &RatVector) -> IndexSet {
        assert_eq!(v.len(), self.dim);
        let iv = IntRow::from_rats(v.coords());
        let mut out = IndexSet::empty(self.len());
        for (i, d) in self.int_duals.iter().enumerate() {
            if d.dot_sign(&iv) == 0 {
                out.insert(i);
            }
        }
        out
    }

    /// `{i : E_i ∈ span{E_j : j ∈ x}}`.
    pub fn linear_closure(&self, x: &IndexSet) -> IndexSet {
        let mut ech = Echelon::new(self.dim);
        for j in x.iter() {
            ech.insert(self.int_duals[j].clone());
        }
        let mut out = x.clone();
        for i in 0..self.len() {
            if !out.contains(i) && ech.in_span(self.int_duals[i].clone()) {
                out.insert(i);
            }
        }
        out
    }

    /// All indices vanishing on the face `C ∩ {E_j = 0 ∀ j ∈ x}`, decided by
    /// one exact LP per undetermined candidate; optima strictly above zero
    /// yield witness points that eliminate every inequality positive there.
    pub fn face_closure(&self, x: &IndexSet) -> IndexSet {
        let mut closure = self.linear_closure(x);
        let mut eliminated = vec![false; self.len()];
        for i in 0..self.len() {
            if closure.contains(i) || eliminated[i] {
                continue;
            }
            match self.face_lp(x, i) {
                None => {
                    closure.insert(i);
                }
                Some(witness) => {
                    for j in 0..self.len() {
                        if !closure.contains(j)
                            && !eliminated[j]
                            && crate::rat::is_positive(&self.eval(j, &witness))
                        {
                            eliminated[j] = true;
                        }
                    }
                }
            }
        }
        closure
    }

    /// `None` when `E_i` vanishes on the whole face of `x`; otherwise a face
    /// point with `E_i > 0`.
    fn face_lp(&self, x: &IndexSet, i: usize) -> Option<RatVector> {
        let mut constraints = Vec::with_capacity(self.len() + 1);
        for j in 0..self.len() {
            let rel = if x.contains(j) { Rel::Eq } else { Rel::Ge };
            constraints.push(Constraint::new(self.duals[j].coords().to_vec(), rel, Rat::zero()));
        }
        constraints.push(Constraint::new(
            self.duals[i].coords().to_vec(),
            Rel::Le,
            Rat::one(),
        ));
        match maximize(self.dim, self.duals[i].coords(), &constraints) {
            LpOutcome::Optimal { value, point } if value.is_positive() => {
                Some(RatVector::new(point))
            }
            LpOutcome::Optimal { .. } => None,
            // infeasible cannot happen (0 is feasible); unbounded is ruled
            // out by the cap
            _ => unreachable!("capped face LP is feasible and bounded"),
        }
    }

    /// Dimension of `{v : E_j(v) = 0 ∀ j ∈ x}`.
    pub fn subspace_dim(&self, x: &IndexSet) -> usize {
        let mut ech = Echelon::new(self.dim);
        for j in x.iter() {
            ech.insert(self.int_duals[j].clone());
        }
        self.dim - ech.rank()
    }

    /// `subspace_dim(x) − rank of the duals of the complement of x ∪ u,
    /// reduced to the subspace of x`.
    pub fn rank_deficit(&self, x: &IndexSet, u: &IndexSet) -> usize {
        let mut ech = Echelon::new(self.dim);
        for j in x.iter() {
            ech.insert(self.int_duals[j].clone());
        }
        let base = ech.rank();
        let subspace_dim = self.dim - base;
        let mut rest_rank = 0;
        for i in 0..self.len() {
            if x.contains(i) || u.contains(i) {
                continue;
            }
            if ech.insert(self.int_duals[i].clone()) {
                rest_rank += 1;
                if rest_rank == subspace_dim {
                    break;
                }
            }
        }
        subspace_dim - rest_rank
    }

    /// Basis of the subspace `{v : E_j(v) = 0 ∀ j ∈ x}`, rows primitive.
    /// The rational and integer forms are the same vectors, so functional
    /// reduction and lifting share one coordinate system.
    pub fn subspace_basis(&self, x: &IndexSet) -> SubspaceBasis {
        let mut ech = Echelon::new(self.dim);
        for j in x.iter() {
            ech.insert(self.int_duals[j].clone());
        }
        let basis_int: Vec<IntRow> = ech
            .nullspace_basis()
            .rows()
            .iter()
            .map(|r| IntRow::from_rats(r.coords()))
            .collect();
        let basis = RatMatrix::new(
            self.dim,
            basis_int.iter().map(|r| r.to_rat_vector()).collect(),
        )
        .expect("basis rows have ambient length");
        SubspaceBasis { basis, basis_int }
    }

    /// Express the duals of `keep` in a basis of the subspace of `x`.
    /// Members reducing to zero are dropped; `kept` maps back to originals.
    pub fn reduced_system(&self, x: &IndexSet, keep: &IndexSet) -> Result<ReducedSystem> {
        if !keep.is_disjoint_from(x) {
            return Err(Error::Precondition("keep set intersects the saturated set".into()));
        }
        let sb = self.subspace_basis(x);
        let d = sb.basis.n_rows();
        let mut duals = Vec::new();
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        let mut flags = Vec::new();
        for i in keep.iter() {
            let reduced = sb.reduce_dual(&self.int_duals[i]);
            if reduced.is_zero() {
                dropped.push(i);
            } else {
                duals.push(reduced.to_rat_vector());
                flags.push(self.redundant[i]);
                kept.push(i);
            }
        }
        let system = InequalitySystem::from_duals_unchecked(d, duals, Some(flags))?;
        Ok(ReducedSystem { system, kept, dropped, subspace: sb })
    }

    /// Rank of the saturated duals equals `dim − 1` for a cone member.
    pub fn is_extreme_ray(&self, v: &RatVector) -> Result<bool> {
        let (ok, violated) = self.satisfies_all(v);
        if !ok {
            return Err(Error::Precondition(format!(
                "vector violates inequalities {violated:?}"
            )));
        }
        if v.is_zero() {
            return Ok(false);
        }
        let sat = self.saturation_set(v);
        let mut ech = Echelon::new(self.dim);
        for i in sat.iter() {
            ech.insert(self.int_duals[i].clone());
        }
        Ok(ech.rank() == self.dim - 1)
    }

    /// Append one σ-weighted sum of each face's duals, flagged redundant.
    pub fn inject_redundant(&self, faces: &[IndexSet], sigma: &Rat) -> Result<InequalitySystem> {
        if !sigma.is_positive() {
            return Err(Error::InvalidInput("sigma must be positive".into()));
        }
        let mut duals = self.duals.clone();
        let mut redundant = self.redundant.clone();
        for face in faces {
            if face.is_empty() {
                return Err(Error::InvalidInput("empty face set".into()));
            }
            let mut sum = RatVector::zeros(self.dim);
            for j in face.iter() {
                sum = sum.add(&self.duals[j].scaled(sigma));
            }
            duals.push(sum);
            redundant.push(true);
        }
        Self::from_duals_unchecked(self.dim, duals, Some(redundant))
    }

    /// LP check that inequality `i` is implied by the others.
    pub fn is_redundant_inequality(&self, i: usize) -> bool {
        let mut constraints = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            if j == i {
                continue;
            }
            constraints.push(Constraint::new(
                self.duals[j].coords().to_vec(),
                Rel::Ge,
                Rat::zero(),
            ));
        }
        let neg: Vec<Rat> = self.duals[i].coords().iter().map(|c| -c).collect();
        constraints.push(Constraint::new(neg.clone(), Rel::Le, Rat::one()));
        match maximize(self.dim, &neg, &constraints) {
            LpOutcome::Optimal { value, .. } => value.is_zero(),
            _ => unreachable!("capped redundancy LP is feasible and bounded"),
        }
    }

    /// All extreme rays of the cone, canonically normalized and sorted.
    /// Desk-scale double description; errors on non-pointed input.
    pub fn double_description(&self) -> Result<Vec<Ray>> {
        self.check_pointed()?;
        let m = self.len();
        let d = self.dim;
        // Pick d independent rows as the initial simplicial cone.
        let mut ech = Echelon::new(d);
        let mut basis_rows = Vec::with_capacity(d);
        for i in 0..m {
            if ech.insert(self.int_duals[i].clone()) {
                basis_rows.push(i);
                if basis_rows.len() == d {
                    break;
                }
            }
        }
        // Initial rays: columns of the inverse of the basis matrix.
        let inverse_cols = invert_rows(&basis_rows.iter().map(|&i| &self.duals[i]).collect::<Vec<_>>(), d);
        let mut rays: Vec<DdRay> = Vec::with_capacity(d);
        for (idx, col) in inverse_cols.into_iter().enumerate() {
            let mut zero = IndexSet::empty(m);
            for (j, &row) in basis_rows.iter().enumerate() {
                if j != idx {
                    zero.insert(row);
                }
            }
            rays.push(DdRay { vector: IntRow::from_rats(col.coords()), zero });
        }
        let mut processed: Vec<usize> = basis_rows.clone();
        for t in 0..m {
            if basis_rows.contains(&t) {
                continue;
            }
            let a = &self.int_duals[t];
            let signs: Vec<i8> = rays.iter().map(|r| a.dot_sign(&r.vector)).collect();
            let mut next: Vec<DdRay> = Vec::new();
            for (r, &s) in rays.iter().zip(&signs) {
                if s >= 0 {
                    let mut nr = r.clone();
                    if s == 0 {
                        nr.zero.insert(t);
                    }
                    next.push(nr);
                }
            }
            for (pi, rp) in rays.iter().enumerate() {
                if signs[pi] <= 0 {
                    continue;
                }
                for (ni, rn) in rays.iter().enumerate() {
                    if signs[ni] >= 0 {
                        continue;
                    }
                    let common = rp.zero.intersection(&rn.zero);
                    let adjacent = !rays.iter().enumerate().any(|(oi, ro)| {
                        oi != pi && oi != ni && common.is_subset_of(&ro.zero)
                    });
                    if !adjacent {
                        continue;
                    }
                    let cp = a.dot_big(&rp.vector);
                    let cn = a.dot_big(&rn.vector);
                    // cp > 0 > cn: cp·rn − cn·rp is a positive combination.
                    let vector = IntRow::combine(&cp, &rn.vector, &(-cn), &rp.vector);
                    let mut zero = common;
                    zero.insert(t);
                    // recover exact zero set against processed inequalities
                    for &q in &processed {
                        if self.int_duals[q].dot_sign(&vector) == 0 {
                            zero.insert(q);
                        }
                    }
                    next.push(DdRay { vector, zero });
                }
            }
            processed.push(t);
            rays = next;
        }
        let mut out: Vec<Ray> = rays
            .into_iter()
            .map(|r| Ray::from_primitive(r.vector))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Basis of a saturated subspace, with primitive integer rows for fast dots.
pub struct SubspaceBasis {
    pub basis: RatMatrix,
    pub(crate) basis_int: Vec<IntRow>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.n_rows()
    }

    /// Coordinates of a dual functional restricted to the subspace.
    pub(crate) fn reduce_dual(&self, dual: &IntRow) -> IntRow {
        let coords: Vec<BigInt> = self.basis_int.iter().map(|b| dual.dot_big(b)).collect();
        IntRow::from_bigints(coords)
    }

    /// Map subspace coordinates back to the ambient space.
    pub fn lift(&self, v: &RatVector) -> RatVector {
        assert_eq!(v.len(), self.basis.n_rows());
        let n = self.basis.cols();
        let mut out = RatVector::zeros(n);
        for (c, row) in v.iter().zip(self.basis.rows()) {
            if !c.is_zero() {
                out = out.add(&row.scaled(c));
            }
        }
        out
    }
}

/// Reduction of the `keep` duals onto the subspace saturated by `x`.
pub struct ReducedSystem {
    pub system: InequalitySystem,
    /// Original index of each reduced dual.
    pub kept: Vec<usize>,
    /// Members whose duals vanish identically on the subspace.
    pub dropped: Vec<usize>,
    pub subspace: SubspaceBasis,
}

impl ReducedSystem {
    pub fn lift(&self, v: &RatVector) -> RatVector {
        self.subspace.lift(v)
    }
}

#[derive(Clone)]
struct DdRay {
    vector: IntRow,
    zero: IndexSet,
}

/// A cone generator, primitive integer coordinates with content 1.
/// Orientation is meaningful (it is the cone side) and is preserved.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ray {
    generator: RatVector,
}

impl Ray {
    pub fn from_direction(v: &RatVector) -> Ray {
        Ray::from_primitive(IntRow::from_rats(v.coords()))
    }

    pub(crate) fn from_primitive(row: IntRow) -> Ray {
        Ray { generator: row.to_rat_vector() }
    }

    pub fn generator(&self) -> &RatVector {
        &self.generator
    }
}

impl PartialOrd for Ray {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ray {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.generator.coords();
        let b = other.generator.coords();
        for (x, y) in a.iter().zip(b.iter()) {
            match x.cmp(y) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        a.len().cmp(&b.len())
    }
}

/// Columns of the inverse of a nonsingular d×d row list.
fn invert_rows(rows: &[&RatVector], d: usize) -> Vec<RatVector> {
    assert_eq!(rows.len(), d);
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.coords().to_vec();
            row.extend((0..d).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for col in 0..d {
        let pivot = (col..d)
            .find(|&i| !aug[i][col].is_zero())
            .expect("rows are independent");
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..2 * d {
                    let t = &aug[col][j] * &f;
                    aug[i][j] -= t;
                }
            }
        }
    }
    (0..d)
        .map(|j| RatVector::new((0..d).map(|i| aug[i][d + j].clone()).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    /// 3-dimensional cone over a square: four facets, rays at the corners.
    /// Facet labels 1..4 (indices 0..3) run around the square so that the
    /// rays saturate {1,2}, {2,3}, {3,4}, {1,4}.
    pub(crate) fn square_cone() -> InequalitySystem {
        InequalitySystem::new(
            3,
            vec![
                RatVector::from_ints(&[0, -1, 1]), // z − y
                RatVector::from_ints(&[-1, 0, 1]), // z − x
                RatVector::from_ints(&[0, 1, 1]),  // z + y
                RatVector::from_ints(&[1, 0, 1]),  // z + x
            ],
            None,
        )
        .unwrap()
    }

    fn set(u: usize, v: &[usize]) -> IndexSet {
        IndexSet::from_indices(u, v.iter().copied())
    }

    #[test]
    fn construction_validates() {
        assert!(square_cone().interior_point().is_some());
        // not pointed: single inequality in 2 dims
        let err = InequalitySystem::new(2, vec![RatVector::from_ints(&[1, 0])], None);
        assert!(matches!(err, Err(Error::NotPointed { .. })));
        // not full-dimensional: x ≥ 0 and −x ≥ 0 and y free handled above;
        // here x ≥ 0, −x ≥ 0, y ≥ 0, −y ≥ 0 is pointed but flat... it is the
        // origin only, which is pointed yet has no interior
        let err = InequalitySystem::new(
            1,
            vec![RatVector::from_ints(&[1]), RatVector::from_ints(&[-1])],
            None,
        );
        assert!(matches!(err, Err(Error::NotFullDimensional)));
        assert!(InequalitySystem::new(1, vec![RatVector::from_ints(&[0])], None).is_err());
    }

    #[test]
    fn face_closure_square() {
        let sys = square_cone();
        // empty set: full-dimensional cone has an interior point
        assert!(sys.face_closure(&set(4, &[])).is_empty());
        // opposite facets meet only at the apex
        assert_eq!(sys.face_closure(&set(4, &[0, 2])), IndexSet::full(4));
        // adjacent facets meet in a ray, already closed
        assert_eq!(sys.face_closure(&set(4, &[0, 1])), set(4, &[0, 1]));
        // the apex saturates everything
        assert_eq!(sys.face_closure(&IndexSet::full(4)), IndexSet::full(4));
        // single facet is a face
        assert_eq!(sys.face_closure(&set(4, &[2])), set(4, &[2]));
    }

    #[test]
    fn linear_closure_contains_and_is_contained() {
        let sys = square_cone();
        assert!(sys.linear_closure(&set(4, &[])).is_empty());
        // E1 + E3 = (0,0,2) and E2 + E4 = (0,0,2): rank of {E1,E3,E2} is 3,
        // so E4 is in their span
        assert_eq!(sys.linear_closure(&set(4, &[0, 1, 2])), IndexSet::full(4));
        for x in [set(4, &[0]), set(4, &[0, 1]), set(4, &[1, 3])] {
            let lin = sys.linear_closure(&x);
            let face = sys.face_closure(&x);
            assert!(lin.is_subset_of(&face), "cl_L ⊆ cl_F violated at {x:?}");
        }
    }

    #[test]
    fn subspace_and_deficit() {
        let sys = square_cone();
        assert_eq!(sys.subspace_dim(&set(4, &[])), 3);
        assert_eq!(sys.subspace_dim(&set(4, &[0])), 2);
        assert_eq!(sys.subspace_dim(&set(4, &[0, 1])), 1);
        // nothing left outside x ∪ u: deficit equals the subspace dim
        assert_eq!(sys.rank_deficit(&set(4, &[0]), &set(4, &[1, 2, 3])), 2);
        // full complement keeps full rank
        assert_eq!(sys.rank_deficit(&set(4, &[]), &set(4, &[])), 0);
    }

    #[test]
    fn satisfies_and_extreme() {
        let sys = square_cone();
        let inner = RatVector::from_ints(&[0, 0, 1]);
        assert!(sys.satisfies_all(&inner).0);
        assert!(!sys.is_extreme_ray(&inner).unwrap());
        let corner = RatVector::from_ints(&[1, 1, 1]);
        assert!(sys.is_extreme_ray(&corner).unwrap());
        assert_eq!(sys.saturation_set(&corner), set(4, &[0, 1]));
        let sum = RatVector::from_ints(&[0, 2, 2]); // corner + adjacent corner
        assert!(!sys.is_extreme_ray(&sum).unwrap());
        let outside = RatVector::from_ints(&[0, 0, -1]);
        let (ok, violated) = sys.satisfies_all(&outside);
        assert!(!ok);
        assert_eq!(violated, vec![0, 1, 2, 3]);
        assert!(sys.is_extreme_ray(&outside).is_err());
        assert!(sys.satisfies_all(&RatVector::zeros(3)).0);
    }

    #[test]
    fn double_description_orthant_and_square() {
        let orthant = InequalitySystem::new(
            3,
            vec![
                RatVector::from_ints(&[1, 0, 0]),
                RatVector::from_ints(&[0, 1, 0]),
                RatVector::from_ints(&[0, 0, 1]),
            ],
            None,
        )
        .unwrap();
        let rays = orthant.double_description().unwrap();
        let mut got: Vec<Vec<i64>> = rays
            .iter()
            .map(|r| r.generator().coords().iter().map(|c| c.to_integer().try_into().unwrap()).collect())
            .collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);

        let sys = square_cone();
        let rays = sys.double_description().unwrap();
        assert_eq!(rays.len(), 4);
        let sats: Vec<IndexSet> = rays.iter().map(|r| sys.saturation_set(r.generator())).collect();
        for expect in [set(4, &[0, 1]), set(4, &[1, 2]), set(4, &[2, 3]), set(4, &[0, 3])] {
            assert!(sats.contains(&expect), "missing ray with saturation {expect:?}");
        }
        for r in &rays {
            assert!(sys.is_extreme_ray(r.generator()).unwrap());
        }
    }

    #[test]
    fn dd_cross_checks_exhaustive_scan() {
        // every extreme ray from the subset scan appears in the DD output
        let sys = square_cone();
        let rays = sys.double_description().unwrap();
        let mut found = Vec::new();
        for a in 0..sys.len() {
            for b in a + 1..sys.len() {
                let m = RatMatrix::new(3, vec![sys.dual(a).clone(), sys.dual(b).clone()]).unwrap();
                let ns = m.nullspace_basis();
                if ns.n_rows() != 1 {
                    continue;
                }
                let v = ns.row(0).clone();
                let cand = if sys.satisfies_all(&v).0 {
                    v
                } else {
                    v.scaled(&rat(-1))
                };
                if sys.satisfies_all(&cand).0 && sys.is_extreme_ray(&cand).unwrap() {
                    let r = Ray::from_direction(&cand);
                    if !found.contains(&r) {
                        found.push(r);
                    }
                }
            }
        }
        found.sort();
        assert_eq!(found, rays);
    }

    #[test]
    fn non_pointed_dd_rejected() {
        let half = InequalitySystem::from_duals_unchecked(
            2,
            vec![RatVector::from_ints(&[1, 0])],
            None,
        )
        .unwrap();
        assert!(matches!(half.double_description(), Err(Error::NotPointed { .. })));
    }

    #[test]
    fn inject_redundant_members() {
        let sys = square_cone();
        let bigger = sys
            .inject_redundant(&[set(4, &[0, 1]), set(4, &[2])], &rat(1))
            .unwrap();
        assert_eq!(bigger.len(), 6);
        assert!(bigger.is_redundant_member(4));
        assert!(bigger.is_redundant_member(5));
        // a singleton face with σ = 1 duplicates its dual
        assert_eq!(bigger.dual(5), sys.dual(2));
        // the new member saturates exactly the face it came from
        let corner = RatVector::from_ints(&[1, 1, 1]);
        assert!(bigger.eval(4, &corner).is_zero());
        assert!(bigger.is_redundant_inequality(4));
        assert!(!sys.is_redundant_inequality(0));
        // removing redundant members leaves satisfaction unchanged
        let v = RatVector::from_ints(&[1, -1, 2]);
        assert_eq!(sys.satisfies_all(&v).0, bigger.satisfies_all(&v).0);
        // empty faces leave the system unchanged
        let same = sys.inject_redundant(&[], &rat(1)).unwrap();
        assert_eq!(same.len(), sys.len());
    }

    #[test]
    fn reduced_system_round_trip() {
        let sys = square_cone();
        // reduce to the ray where E1 = E2 = 0
        let red = sys.reduced_system(&set(4, &[0, 1]), &set(4, &[2, 3])).unwrap();
        assert_eq!(red.system.dim(), 1);
        assert_eq!(red.kept.len() + red.dropped.len(), 2);
        let rays = red.system.double_description().unwrap();
        assert_eq!(rays.len(), 1);
        let lifted = red.lift(rays[0].generator());
        assert!(sys.satisfies_all(&lifted).0);
        assert!(sys.is_extreme_ray(&lifted).unwrap());
        // identity reduction
        let red0 = sys.reduced_system(&set(4, &[]), &IndexSet::full(4)).unwrap();
        assert_eq!(red0.system.dim(), 3);
        assert_eq!(red0.kept, vec![0, 1, 2, 3]);
        // empty keep set
        let rede = sys.reduced_system(&set(4, &[0, 1]), &set(4, &[])).unwrap();
        assert_eq!(rede.system.len(), 0);
        assert_eq!(rede.system.dim(), 1);
    }
}
