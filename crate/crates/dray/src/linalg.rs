//! Exact rational linear algebra: rank, span membership, nullspaces.
//!
//! The public surface works with `RatVector`/`RatMatrix`. Internally the hot
//! paths run on primitive integer rows (denominators cleared, content divided
//! out) with an `i128` fast path that escalates to `BigInt` on overflow, which
//! keeps coefficient growth in check without giving up exactness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatVector {
    coords: Vec<Rat>,
}

impl RatVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVector { coords }
    }

    pub fn zeros(n: usize) -> Self {
        RatVector { coords: vec![Rat::zero(); n] }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVector {
            coords: v.iter().map(|&x| crate::rat::rat(x)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        assert_eq!(self.len(), other.len(), "dot of unequal lengths");
        let mut acc = Rat::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn scaled(&self, c: &Rat) -> RatVector {
        RatVector {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        RatVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::fmt::Debug for RatVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", crate::rat::format_rat(c))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    cols: usize,
    rows: Vec<RatVector>,
}

impl RatMatrix {
    pub fn empty(cols: usize) -> Self {
        RatMatrix { cols, rows: Vec::new() }
    }

    pub fn new(cols: usize, rows: Vec<RatVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
        }
        Ok(RatMatrix { cols, rows })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        RatMatrix {
            cols,
            rows: rows.iter().map(|r| RatVector::from_ints(r)).collect(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &RatVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[RatVector] {
        &self.rows
    }

    pub fn push_row(&mut self, row: RatVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Row rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for r in &self.rows {
            ech.insert(IntRow::from_rats(r.coords()));
        }
        ech.rank()
    }

    /// Basis of `{v : rows · v = 0}`, one basis vector per returned row.
    /// The number of rows is `cols − rank`.
    pub fn nullspace_basis(&self) -> RatMatrix {
        let mut ech = Echelon::new(self.cols);
        for r in &self.rows {
            ech.insert(IntRow::from_rats(r.coords()));
        }
        ech.nullspace_basis()
    }
}

/// `v ∈ span(rows of m)`.
pub fn in_span(v: &RatVector, m: &RatMatrix) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch { expected: m.cols(), got: v.len() });
    }
    let mut ech = Echelon::new(m.cols());
    for r in m.rows() {
        ech.insert(IntRow::from_rats(r.coords()));
    }
    Ok(ech.in_span(IntRow::from_rats(v.coords())))
}

/// Coefficients `c` with `v = Σ c_i · row_i`, if any.
pub fn solve_combination(v: &RatVector, m: &RatMatrix) -> Result<Option<Vec<Rat>>> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch { expected: m.cols(), got: v.len() });
    }
    // Solve mᵀ c = v by rational RREF on the augmented system.
    let n = m.cols();
    let r = m.n_rows();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = (0..r).map(|j| m.row(j).get(i).clone()).collect();
            row.push(v.get(i).clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0;
    for col in 0..r {
        let Some(sel) = (prow..n).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(prow, sel);
        let inv = aug[prow][col].recip();
        for x in aug[prow].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != prow && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..=r {
                    let t = &aug[prow][j] * &f;
                    aug[i][j] -= t;
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == n {
            break;
        }
    }
    // Inconsistent iff a zero row has nonzero rhs.
    for i in prow..n {
        if !aug[i][r].is_zero() {
            return Ok(None);
        }
    }
    let mut c = vec![Rat::zero(); r];
    for &(row, col) in &pivots {
        c[col] = aug[row][r].clone();
    }
    Ok(Some(c))
}

// ---------------------------------------------------------------------------
// Primitive integer rows with adaptive width.
// ---------------------------------------------------------------------------

/// Normalize entry growth: down-scale by the content gcd once entries pass
/// this bound (small rows skip the gcd work).
const SMALL_NORM_BOUND: i128 = 1 << 44;

#[derive(Clone, Debug)]
pub(crate) enum IntRow {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl IntRow {
    /// Clear denominators and divide out the content.
    pub(crate) fn from_rats(coords: &[Rat]) -> IntRow {
        let mut lcm = BigInt::one();
        for c in coords {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut row = IntRow::Big(ints);
        row.normalize_content();
        row.shrink();
        row
    }

    pub(crate) fn from_i128(v: Vec<i128>) -> IntRow {
        let mut row = IntRow::Small(v);
        row.normalize_content();
        row
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            IntRow::Small(v) => v.len(),
            IntRow::Big(v) => v.len(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            IntRow::Small(v) => v.iter().all(|&x| x == 0),
            IntRow::Big(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub(crate) fn leading_col(&self) -> Option<usize> {
        match self {
            IntRow::Small(v) => v.iter().position(|&x| x != 0),
            IntRow::Big(v) => v.iter().position(|x| !x.is_zero()),
        }
    }

    pub(crate) fn entry_big(&self, i: usize) -> BigInt {
        match self {
            IntRow::Small(v) => BigInt::from(v[i]),
            IntRow::Big(v) => v[i].clone(),
        }
    }

    pub(crate) fn entry_sign(&self, i: usize) -> i8 {
        match self {
            IntRow::Small(v) => v[i].signum() as i8,
            IntRow::Big(v) => {
                if v[i].is_zero() {
                    0
                } else if v[i].is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub(crate) fn to_rat_vector(&self) -> RatVector {
        match self {
            IntRow::Small(v) => RatVector::new(
                v.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect(),
            ),
            IntRow::Big(v) => {
                RatVector::new(v.iter().map(|x| Rat::from_integer(x.clone())).collect())
            }
        }
    }

    fn to_big(&mut self) {
        if let IntRow::Small(v) = self {
            *self = IntRow::Big(v.iter().map(|&x| BigInt::from(x)).collect());
        }
    }

    /// Drop back to `i128` when everything fits.
    fn shrink(&mut self) {
        if let IntRow::Big(v) = self {
            let mut small = Vec::with_capacity(v.len());
            for x in v.iter() {
                match i128::try_from(x) {
                    Ok(y) if y.abs() < SMALL_NORM_BOUND => small.push(y),
                    _ => return,
                }
            }
            *self = IntRow::Small(small);
        }
    }

    /// Divide all entries by their gcd; sign is preserved.
    fn normalize_content(&mut self) {
        let was_big = match self {
            IntRow::Small(v) => {
                let mut g: i128 = 0;
                for &x in v.iter() {
                    g = gcd_i128(g, x);
                    if g == 1 {
                        return;
                    }
                }
                if g > 1 {
                    for x in v.iter_mut() {
                        *x /= g;
                    }
                }
                false
            }
            IntRow::Big(v) => {
                let mut g = BigInt::zero();
                for x in v.iter() {
                    g = g.gcd(x);
                    if g.is_one() {
                        break;
                    }
                }
                if !g.is_zero() && !g.is_one() {
                    for x in v.iter_mut() {
                        *x /= &g;
                    }
                }
                true
            }
        };
        if was_big {
            self.shrink();
        }
    }

    /// Sign of the dot product with `other`, with an `i128` fast path.
    pub(crate) fn dot_sign(&self, other: &IntRow) -> i8 {
        if let (IntRow::Small(a), IntRow::Small(b)) = (self, other) {
            let mut acc: i128 = 0;
            let mut ok = true;
            for (&x, &y) in a.iter().zip(b.iter()) {
                match x.checked_mul(y).and_then(|p| acc.checked_add(p)) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return acc.signum() as i8;
            }
        }
        let d = self.dot_big(other);
        if d.is_zero() {
            0
        } else if d.is_positive() {
            1
        } else {
            -1
        }
    }

    pub(crate) fn dot_big(&self, other: &IntRow) -> BigInt {
        assert_eq!(self.len(), other.len());
        let mut acc = BigInt::zero();
        for i in 0..self.len() {
            acc += self.entry_big(i) * other.entry_big(i);
        }
        acc
    }

    pub(crate) fn from_bigints(v: Vec<BigInt>) -> IntRow {
        let mut row = IntRow::Big(v);
        row.normalize_content();
        row.shrink();
        row
    }

    /// Value equality across representations.
    pub(crate) fn same_values(&self, other: &IntRow) -> bool {
        match (self, other) {
            (IntRow::Small(a), IntRow::Small(b)) => a == b,
            _ => {
                self.len() == other.len()
                    && (0..self.len()).all(|i| self.entry_big(i) == other.entry_big(i))
            }
        }
    }

    /// `c1·v1 + c2·v2`, content-normalized.
    pub(crate) fn combine(c1: &BigInt, v1: &IntRow, c2: &BigInt, v2: &IntRow) -> IntRow {
        assert_eq!(v1.len(), v2.len());
        let v: Vec<BigInt> = (0..v1.len())
            .map(|i| c1 * v1.entry_big(i) + c2 * v2.entry_big(i))
            .collect();
        IntRow::from_bigints(v)
    }

    /// Flip signs so the leading entry is positive.
    fn normalize_leading_sign(&mut self) {
        let Some(lead) = self.leading_col() else { return };
        if self.entry_sign(lead) < 0 {
            match self {
                IntRow::Small(v) => {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                }
                IntRow::Big(v) => {
                    for x in v.iter_mut() {
                        *x = -&*x;
                    }
                }
            }
        }
    }

    /// `self ← self·p − pivot·t` where `p = pivot[col]`, `t = self[col]`,
    /// clearing column `col`. Escalates to `BigInt` on overflow.
    fn eliminate(&mut self, pivot: &IntRow, col: usize) {
        if self.entry_sign(col) == 0 {
            return;
        }
        if let (IntRow::Small(v), IntRow::Small(pv)) = (&mut *self, pivot) {
            let p = pv[col];
            let t = v[col];
            let mut ok = true;
            let mut out = Vec::with_capacity(v.len());
            let mut maxabs: i128 = 0;
            for (x, y) in v.iter().zip(pv.iter()) {
                let a = x.checked_mul(p).and_then(|xp| {
                    y.checked_mul(t).and_then(|yt| xp.checked_sub(yt))
                });
                match a {
                    Some(a) => {
                        maxabs = maxabs.max(a.abs());
                        out.push(a);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                *v = out;
                if maxabs >= SMALL_NORM_BOUND {
                    self.normalize_content();
                }
                return;
            }
        }
        self.to_big();
        let p = pivot.entry_big(col);
        let t = self.entry_big(col);
        if let IntRow::Big(v) = self {
            match pivot {
                IntRow::Small(pv) => {
                    for (x, &y) in v.iter_mut().zip(pv.iter()) {
                        *x = &*x * &p - BigInt::from(y) * &t;
                    }
                }
                IntRow::Big(pv) => {
                    for (x, y) in v.iter_mut().zip(pv.iter()) {
                        *x = &*x * &p - y * &t;
                    }
                }
            }
        }
        self.normalize_content();
    }
}

/// Incremental row-echelon accumulator over the rationals.
///
/// Rows are primitive integer vectors; each stored row has a unique pivot
/// column and zeros to the left of it, so a single ascending reduction pass
/// decides span membership.
pub(crate) struct Echelon {
    cols: usize,
    /// Sorted by pivot column.
    rows: Vec<(usize, IntRow)>,
}

impl Echelon {
    pub(crate) fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, mut row: IntRow) -> IntRow {
        for (col, pivot) in &self.rows {
            row.eliminate(pivot, *col);
        }
        row
    }

    /// Returns true if the row enlarged the span.
    pub(crate) fn insert(&mut self, row: IntRow) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut row = self.reduce(row);
        row.normalize_content();
        match row.leading_col() {
            None => false,
            Some(col) => {
                row.normalize_leading_sign();
                row.shrink();
                let pos = self.rows.partition_point(|(c, _)| *c < col);
                self.rows.insert(pos, (col, row));
                true
            }
        }
    }

    pub(crate) fn in_span(&self, row: IntRow) -> bool {
        self.reduce(row).is_zero()
    }

    /// Nullspace basis of the accumulated rows, one vector per free column.
    pub(crate) fn nullspace_basis(&self) -> RatMatrix {
        // Back-substitute to a reduced echelon form over Q, pivots scaled to 1.
        let r = self.rows.len();
        let mut rref: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .map(|(_, row)| row.to_rat_vector().coords().to_vec())
            .collect();
        let pivots: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        for i in 0..r {
            let inv = rref[i][pivots[i]].recip();
            for x in rref[i].iter_mut() {
                *x *= &inv;
            }
        }
        for i in (0..r).rev() {
            for j in 0..i {
                let f = rref[j][pivots[i]].clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let t = &rref[i][c] * &f;
                    rref[j][c] -= t;
                }
            }
        }
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rref[i][f].clone();
            }
            basis.push(RatVector::new(v));
        }
        RatMatrix { cols: self.cols, rows: basis }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_frac};

    #[test]
    fn rank_basics() {
        assert_eq!(RatMatrix::empty(5).rank(), 0);
        let id3 = RatMatrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(id3.rank(), 3);
        let dep = RatMatrix::from_int_rows(&[&[1, 2], &[2, 4], &[3, 6]]);
        assert_eq!(dep.rank(), 1);
    }

    #[test]
    fn rank_invariant_under_scaling_and_permutation() {
        let m = RatMatrix::from_int_rows(&[&[1, 2, 3], &[0, 1, 1], &[1, 3, 4]]);
        assert_eq!(m.rank(), 2);
        let scaled = RatMatrix::new(
            3,
            vec![
                m.row(1).scaled(&rat_frac(7, 3)),
                m.row(0).scaled(&rat_frac(1, 2)),
                m.row(2).clone(),
            ],
        )
        .unwrap();
        assert_eq!(scaled.rank(), 2);
    }

    #[test]
    fn span_membership() {
        let m = RatMatrix::from_int_rows(&[&[1, 0], &[0, 1]]);
        assert!(in_span(&RatVector::from_ints(&[3, -7]), &m).unwrap());
        let m2 = RatMatrix::from_int_rows(&[&[0, 1]]);
        assert!(!in_span(&RatVector::from_ints(&[1, 0]), &m2).unwrap());
        assert!(in_span(&RatVector::zeros(2), &m2).unwrap());
        assert!(in_span(&RatVector::from_ints(&[1]), &m).is_err());
    }

    #[test]
    fn nullspace_simple() {
        let id = RatMatrix::from_int_rows(&[&[1, 0], &[0, 1]]);
        assert_eq!(id.nullspace_basis().n_rows(), 0);
        let m = RatMatrix::from_int_rows(&[&[1, -1]]);
        let ns = m.nullspace_basis();
        assert_eq!(ns.n_rows(), 1);
        let b = ns.row(0);
        assert_eq!(b.get(0), b.get(1));
        assert!(!b.is_zero());
    }

    #[test]
    fn nullspace_annihilates_and_is_independent() {
        let m = RatMatrix::from_int_rows(&[&[1, 2, 3, 4], &[0, 1, 1, 0], &[1, 3, 4, 4]]);
        let ns = m.nullspace_basis();
        assert_eq!(ns.n_rows(), 4 - m.rank());
        assert_eq!(ns.rank(), ns.n_rows());
        for b in ns.rows() {
            for r in m.rows() {
                assert!(r.dot(b).is_zero());
            }
        }
    }

    #[test]
    fn solve_combination_matches_in_span() {
        let m = RatMatrix::from_int_rows(&[&[1, 2, 0], &[0, 1, 1]]);
        let v = RatVector::new(vec![rat(2), rat(5), rat(1)]);
        let c = solve_combination(&v, &m).unwrap().unwrap();
        assert_eq!(c, vec![rat(2), rat(1)]);
        let w = RatVector::from_ints(&[0, 0, 5]);
        assert!(solve_combination(&w, &m).unwrap().is_none());
        assert!(!in_span(&w, &m).unwrap());
    }

    #[test]
    fn escalation_to_bigint_stays_exact() {
        // Hilbert-like matrix fragments force large intermediate numerators.
        let n = 7;
        let rows: Vec<RatVector> = (0..n)
            .map(|i| {
                RatVector::new((0..n).map(|j| rat_frac(1, (i + j + 1) as i64)).collect())
            })
            .collect();
        let m = RatMatrix::new(n, rows).unwrap();
        assert_eq!(m.rank(), n); // Hilbert matrices are nonsingular
        assert_eq!(m.nullspace_basis().n_rows(), 0);
    }
}
