//! The subadditivity cone of an N-party entropy space.
//!
//! Parties are labeled `1..=N` with the purifier as label `0`; entropy
//! coordinates are indexed by nonempty subsets of the parties (bitmask − 1).
//! A mutual-information instance `I(J:K) = S_J + S_K − S_JK` over disjoint
//! nonempty label subsets gives one inequality of the cone; instances are
//! partially ordered by simultaneous argument inclusion, and permutations of
//! the labels act both on instances and linearly on coordinates (subsets
//! containing the purifier are rewritten through their complements, so the
//! total state stays pure).

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::cone::InequalitySystem;
use crate::error::{Error, Result};
use crate::linalg::RatVector;
use crate::perm::{PermGroup, Permutation, GROUP_ORDER_BOUND};
use crate::poset::Poset;
use crate::rat::{format_rat, parse_rat, rat, Rat};
use crate::sets::IndexSet;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PartySystem {
    n: u32,
}

impl PartySystem {
    pub fn new(n_parties: u32) -> Result<Self> {
        if !(2..=14).contains(&n_parties) {
            return Err(Error::InvalidInput(format!(
                "party count {n_parties} outside supported range 2..=14"
            )));
        }
        Ok(PartySystem { n: n_parties })
    }

    pub fn n_parties(&self) -> u32 {
        self.n
    }

    /// 2^N − 1 coordinates, one per nonempty subset of the parties.
    pub fn ambient_dim(&self) -> usize {
        (1usize << self.n) - 1
    }

    /// All labels: parties plus the purifier bit 0.
    pub fn full_label_mask(&self) -> u32 {
        (1 << (self.n + 1)) - 1
    }

    /// Coordinate index of a nonempty party mask.
    pub fn coord_of_party_mask(&self, mask: u32) -> usize {
        debug_assert!(mask > 0 && mask < (1 << self.n));
        mask as usize - 1
    }

    /// Rewrite a label subset through its complement when it contains the
    /// purifier; `None` for the empty/full subset (entropy zero).
    pub fn purified_coord(&self, label_mask: u32) -> Option<usize> {
        let mask = if label_mask & 1 != 0 {
            self.full_label_mask() & !label_mask
        } else {
            label_mask
        };
        if mask == 0 {
            None
        } else {
            Some(self.coord_of_party_mask(mask >> 1))
        }
    }

    /// Display order of labels: parties ascending, purifier last.
    fn label_rank(&self, label: u32) -> u32 {
        if label == 0 {
            self.n
        } else {
            label - 1
        }
    }

    /// Rank-remapped mask (low bits = early display positions).
    fn rank_mask(&self, label_mask: u32) -> u32 {
        let mut out = 0;
        for l in 0..=self.n {
            if label_mask >> l & 1 == 1 {
                out |= 1 << self.label_rank(l);
            }
        }
        out
    }

    /// Subset order: by size, then lexicographically on the ranked labels.
    pub fn subset_cmp(&self, a: u32, b: u32) -> std::cmp::Ordering {
        let size = a.count_ones().cmp(&b.count_ones());
        if size != std::cmp::Ordering::Equal {
            return size;
        }
        let (ra, rb) = (self.rank_mask(a), self.rank_mask(b));
        if ra == rb {
            return std::cmp::Ordering::Equal;
        }
        let diff = ra ^ rb;
        let low = diff & diff.wrapping_neg();
        if ra & low != 0 {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    }

    pub fn subset_name(&self, label_mask: u32) -> String {
        let mut s = String::new();
        for l in (1..=self.n).chain([0]) {
            if label_mask >> l & 1 == 1 {
                s.push_str(&l.to_string());
            }
        }
        s
    }
}

/// One mutual-information instance over disjoint nonempty label subsets,
/// kept in canonical orientation (smaller argument first).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MIInstance {
    left: u32,
    right: u32,
}

impl MIInstance {
    pub fn new(ps: &PartySystem, a: u32, b: u32) -> Result<Self> {
        let full = ps.full_label_mask();
        if a == 0 || b == 0 || a & b != 0 || a & !full != 0 || b & !full != 0 {
            return Err(Error::InvalidInput(format!(
                "arguments {a:#b}, {b:#b} must be disjoint nonempty label subsets"
            )));
        }
        Ok(match ps.subset_cmp(a, b) {
            std::cmp::Ordering::Greater => MIInstance { left: b, right: a },
            _ => MIInstance { left: a, right: b },
        })
    }

    pub fn left(&self) -> u32 {
        self.left
    }

    pub fn right(&self) -> u32 {
        self.right
    }

    pub fn arg_size_sum(&self) -> u32 {
        (self.left | self.right).count_ones()
    }

    /// Maximal instances pair a subset with its full complement.
    pub fn is_maximal(&self, ps: &PartySystem) -> bool {
        self.left | self.right == ps.full_label_mask()
    }

    pub fn name(&self, ps: &PartySystem) -> String {
        format!("{}:{}", ps.subset_name(self.left), ps.subset_name(self.right))
    }
}

/// Parse `"12:34"` or `"I(12:34)"` (digits are labels, `0` the purifier).
pub fn parse_instance(ps: &PartySystem, s: &str) -> Result<MIInstance> {
    let inner = s
        .trim()
        .trim_start_matches("I(")
        .trim_end_matches(')')
        .trim();
    let (l, r) = inner
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("instance {s:?} lacks a colon")))?;
    let mask = |part: &str| -> Result<u32> {
        let mut m = 0u32;
        for ch in part.trim().chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad label {ch:?} in {s:?}")))?;
            if d > ps.n_parties() {
                return Err(Error::Parse(format!("label {d} out of range in {s:?}")));
            }
            m |= 1 << d;
        }
        Ok(m)
    };
    MIInstance::new(ps, mask(l)?, mask(r)?)
}

/// All canonical instances, sorted by total argument size then arguments.
pub fn enumerate_mi_instances(ps: &PartySystem) -> Vec<MIInstance> {
    let full = ps.full_label_mask();
    let mut out = Vec::new();
    for a in 1..=full {
        // enumerate nonempty subsets of the complement, keeping each
        // unordered pair once via the canonical orientation
        let comp = full & !a;
        let mut b = comp;
        while b > 0 {
            let inst = MIInstance::new(ps, a, b).expect("disjoint by construction");
            if inst.left == a {
                out.push(inst);
            }
            b = (b - 1) & comp;
        }
    }
    out.sort_by(|x, y| {
        x.arg_size_sum()
            .cmp(&y.arg_size_sum())
            .then_with(|| ps.subset_cmp(x.left, y.left))
            .then_with(|| ps.subset_cmp(x.right, y.right))
    });
    out.dedup();
    out
}

/// Dual vector of `S_J + S_K − S_JK` in purified coordinates.
pub fn mi_dual_vector(ps: &PartySystem, m: &MIInstance) -> RatVector {
    let mut coords = vec![Rat::zero(); ps.ambient_dim()];
    let mut add = |label_mask: u32, sign: i64| {
        if let Some(i) = ps.purified_coord(label_mask) {
            coords[i] += rat(sign);
        }
    };
    add(m.left, 1);
    add(m.right, 1);
    add(m.left | m.right, -1);
    RatVector::new(coords)
}

/// Instances ordered by simultaneous inclusion of the arguments.
pub fn build_mi_poset(ps: &PartySystem, instances: &[MIInstance]) -> Result<Poset> {
    let _ = ps;
    let leq = |a: usize, b: usize| {
        let (x, y) = (&instances[a], &instances[b]);
        (x.left & !y.left == 0 && x.right & !y.right == 0)
            || (x.left & !y.right == 0 && x.right & !y.left == 0)
    };
    Poset::from_leq(instances.len(), leq)
}

fn label_permutations(n_labels: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    let mut used = vec![false; n_labels as usize];
    fn rec(n: u32, cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n as usize {
            out.push(cur.clone());
            return;
        }
        for l in 0..n {
            if !used[l as usize] {
                used[l as usize] = true;
                cur.push(l);
                rec(n, cur, used, out);
                cur.pop();
                used[l as usize] = false;
            }
        }
    }
    rec(n_labels, &mut cur, &mut used, &mut out);
    out
}

fn apply_label_perm(sigma: &[u32], mask: u32) -> u32 {
    let mut out = 0;
    for (l, &im) in sigma.iter().enumerate() {
        if mask >> l & 1 == 1 {
            out |= 1 << im;
        }
    }
    out
}

/// The label-permutation group: its action on instance indices, and the
/// aligned linear action on entropy coordinates.
pub fn party_group(
    ps: &PartySystem,
    instances: &[MIInstance],
) -> Result<(PermGroup, Vec<Permutation>)> {
    let n_labels = ps.n_parties() + 1;
    let order: usize = (1..=n_labels as usize).product();
    if order > GROUP_ORDER_BOUND {
        return Err(Error::GroupTooLarge { bound: GROUP_ORDER_BOUND });
    }
    let index: HashMap<MIInstance, usize> = instances
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i))
        .collect();
    let mut elements = Vec::with_capacity(order);
    let mut coord_actions = Vec::with_capacity(order);
    let mut generators = Vec::new();
    for sigma in label_permutations(n_labels) {
        let inst_images: Vec<u32> = instances
            .iter()
            .map(|m| {
                let im = MIInstance::new(
                    ps,
                    apply_label_perm(&sigma, m.left),
                    apply_label_perm(&sigma, m.right),
                )
                .expect("images stay disjoint");
                index[&im] as u32
            })
            .collect();
        let coord_images: Vec<u32> = (1..1u32 << ps.n_parties())
            .map(|party_mask| {
                let labels = party_mask << 1;
                let image = apply_label_perm(&sigma, labels);
                ps.purified_coord(image).expect("image of a proper subset is proper") as u32
            })
            .collect();
        let inst_perm = Permutation::from_images(inst_images)?;
        // adjacent label transpositions generate the group
        let is_adjacent_swap = sigma
            .iter()
            .enumerate()
            .filter(|&(l, &im)| l as u32 != im)
            .count()
            == 2
            && sigma
                .iter()
                .enumerate()
                .all(|(l, &im)| im == l as u32 || im.abs_diff(l as u32) == 1);
        if is_adjacent_swap {
            generators.push(inst_perm.clone());
        }
        elements.push(inst_perm);
        coord_actions.push(Permutation::from_images(coord_images)?);
    }
    Ok((
        PermGroup::from_closed_elements(instances.len(), generators, elements),
        coord_actions,
    ))
}

/// Stirling number of the second kind.
pub fn stirling2(n: u32, k: u32) -> u128 {
    if k == 0 {
        return u128::from(n == 0);
    }
    let mut row = vec![0u128; k as usize + 1];
    row[0] = 1;
    for _ in 1..=n {
        for j in (1..=k as usize).rev() {
            row[j] = row[j - 1] + j as u128 * row[j];
        }
        row[0] = 0;
    }
    row[k as usize]
}

/// Number of mutual-information instances.
pub fn mi_instance_count(n_parties: u32) -> u128 {
    stirling2(n_parties + 2, 3)
}

/// Number of facets of the cone (the `S_J ≥ 0` members are not facets).
pub fn facet_count(n_parties: u32) -> u128 {
    stirling2(n_parties + 2, 3) - (1u128 << n_parties) + 1
}

/// Dimension of the face on which all pairwise instances vanish.
pub fn fstar_dim(n_parties: u32) -> u128 {
    let pairs = u128::from(n_parties + 1) * u128::from(n_parties) / 2;
    (1u128 << n_parties) - pairs - 1
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SacMode {
    /// Exclude maximal and next-to-maximal instances: genuine N-party rays.
    Genuine,
    /// Exclude only the maximal (redundant) instances.
    Full,
}

/// The assembled cone: instances, duals, poset, symmetry, and the actions
/// of every group element on entropy coordinates.
pub struct SacSystem {
    pub ps: PartySystem,
    pub instances: Vec<MIInstance>,
    pub system: InequalitySystem,
    pub poset: Poset,
    pub group: PermGroup,
    coord_actions: Vec<Permutation>,
    index: HashMap<MIInstance, usize>,
}

impl SacSystem {
    pub fn build(ps: PartySystem) -> Result<SacSystem> {
        let instances = enumerate_mi_instances(&ps);
        let duals: Vec<RatVector> = instances.iter().map(|m| mi_dual_vector(&ps, m)).collect();
        let redundant: Vec<bool> = instances.iter().map(|m| m.is_maximal(&ps)).collect();
        // S_J = |J|·(N+1−|J|) is strictly subadditive, so the cone is
        // full-dimensional without solving an LP.
        let witness = RatVector::new(
            (1..1u32 << ps.n_parties())
                .map(|mask| {
                    let j = u64::from(mask.count_ones());
                    rat((j * (u64::from(ps.n_parties()) + 1 - j)) as i64)
                })
                .collect(),
        );
        let system =
            InequalitySystem::with_interior_witness(ps.ambient_dim(), duals, Some(redundant), &witness)?;
        let poset = build_mi_poset(&ps, &instances)?;
        let (group, coord_actions) = party_group(&ps, &instances)?;
        let index = instances.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Ok(SacSystem { ps, instances, system, poset, group, coord_actions, index })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn instance_index(&self, m: &MIInstance) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn index_of_name(&self, name: &str) -> Result<usize> {
        let inst = parse_instance(&self.ps, name)?;
        self.instance_index(&inst)
            .ok_or_else(|| Error::InvalidInput(format!("unknown instance {name}")))
    }

    pub fn instance_name(&self, i: usize) -> String {
        self.instances[i].name(&self.ps)
    }

    /// All pairwise instances `I(ℓ:ℓ′)`.
    pub fn bell_face_downset(&self) -> IndexSet {
        IndexSet::from_indices(
            self.len(),
            self.instances
                .iter()
                .enumerate()
                .filter(|(_, m)| m.arg_size_sum() == 2)
                .map(|(i, _)| i),
        )
    }

    /// Instances with total argument size `N` or `N + 1`.
    pub fn genuine_excluded_upset(&self) -> IndexSet {
        let n = self.ps.n_parties();
        IndexSet::from_indices(
            self.len(),
            self.instances
                .iter()
                .enumerate()
                .filter(|(_, m)| {
                    let s = m.arg_size_sum();
                    s == n || s == n + 1
                })
                .map(|(i, _)| i),
        )
    }

    pub fn maximal_instances(&self) -> IndexSet {
        IndexSet::from_indices(
            self.len(),
            self.instances
                .iter()
                .enumerate()
                .filter(|(_, m)| m.is_maximal(&self.ps))
                .map(|(i, _)| i),
        )
    }

    /// Initial `(D⁰, U⁰)` for the requested mode.
    pub fn initial_sets(&self, mode: SacMode) -> Result<(IndexSet, IndexSet)> {
        let down = self.bell_face_downset();
        let excluded = match mode {
            SacMode::Genuine => {
                if self.ps.n_parties() < 3 {
                    return Err(Error::InvalidInput(
                        "genuine mode needs at least 3 parties: with 2, the excluded \
                         region covers the whole poset beyond the pairwise instances"
                            .into(),
                    ));
                }
                self.genuine_excluded_upset()
            }
            SacMode::Full => self.maximal_instances(),
        };
        Ok((down, excluded))
    }

    /// The coordinate action aligned with `group.elements()[i]`.
    pub fn coord_action(&self, element: usize) -> &Permutation {
        &self.coord_actions[element]
    }

    /// Apply the linear action of group element `g` to an entropy vector.
    pub fn apply_to_vector(&self, element: usize, v: &RatVector) -> RatVector {
        let perm = &self.coord_actions[element];
        let mut out = vec![Rat::zero(); v.len()];
        for (i, c) in v.iter().enumerate() {
            out[perm.apply(i)] = c.clone();
        }
        RatVector::new(out)
    }

    /// Do two entropy vectors lie in the same orbit of the label action?
    pub fn vectors_equivalent(&self, a: &RatVector, b: &RatVector) -> bool {
        (0..self.group.order()).any(|g| &self.apply_to_vector(g, a) == b)
    }
}

// ---------------------------------------------------------------------------
// Entropy vectors
// ---------------------------------------------------------------------------

/// Entropy coordinates in presentation order: by subset size, then
/// lexicographically on the party list.
pub fn presentation_order(ps: &PartySystem) -> Vec<usize> {
    let mut masks: Vec<u32> = (1..1u32 << ps.n_parties()).collect();
    masks.sort_by(|&a, &b| {
        a.count_ones().cmp(&b.count_ones()).then_with(|| {
            let diff = a ^ b;
            if diff == 0 {
                return std::cmp::Ordering::Equal;
            }
            let low = diff & diff.wrapping_neg();
            if a & low != 0 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    });
    masks.into_iter().map(|m| m as usize - 1).collect()
}

/// Format internal coordinates grouped by subset cardinality.
pub fn vector_to_line(ps: &PartySystem, v: &RatVector) -> String {
    let order = presentation_order(ps);
    let mut parts: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut cur_size = 0;
    for &idx in &order {
        let size = (idx as u32 + 1).count_ones();
        if size != cur_size && !cur.is_empty() {
            parts.push(cur.trim_end().to_string());
            cur = String::new();
        }
        cur_size = size;
        cur.push_str(&format_rat(v.get(idx)));
        cur.push(' ');
    }
    if !cur.is_empty() {
        parts.push(cur.trim_end().to_string());
    }
    parts.join("; ")
}

/// Parse a presentation-ordered line (semicolons optional) back into
/// internal coordinate order.
pub fn vector_from_line(ps: &PartySystem, line: &str) -> Result<RatVector> {
    let cleaned = line.replace(';', " ");
    let entries: Vec<Rat> = cleaned
        .split_whitespace()
        .map(parse_rat)
        .collect::<Result<_>>()?;
    if entries.len() != ps.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.ambient_dim(),
            got: entries.len(),
        });
    }
    let order = presentation_order(ps);
    let mut coords = vec![Rat::zero(); ps.ambient_dim()];
    for (pos, &idx) in order.iter().enumerate() {
        coords[idx] = entries[pos].clone();
    }
    Ok(RatVector::new(coords))
}

/// Entropy vector of a pure two-label entangled pair.
pub fn bell_pair_vector(ps: &PartySystem, a: u32, b: u32) -> Result<RatVector> {
    if a == b || a > ps.n_parties() || b > ps.n_parties() {
        return Err(Error::InvalidInput(format!("bad label pair ({a},{b})")));
    }
    let coords = (1..1u32 << ps.n_parties())
        .map(|party_mask| {
            // bit 0 (the purifier) is never set in a coordinate subset
            let labels = party_mask << 1;
            let in_a = labels >> a & 1 == 1;
            let in_b = labels >> b & 1 == 1;
            rat((in_a != in_b) as i64)
        })
        .collect();
    Ok(RatVector::new(coords))
}

/// Evaluate a purified entropy term `S_A` for a label subset.
fn entropy_term(ps: &PartySystem, v: &RatVector, label_mask: u32) -> Rat {
    match ps.purified_coord(label_mask) {
        Some(i) => v.get(i).clone(),
        None => Rat::zero(),
    }
}

/// Check every conditional-mutual-information instance
/// `S_IK + S_JK − S_IJK − S_K ≥ 0` over disjoint nonempty label subsets
/// (I, J unordered). Returns the verdict and the number of violations.
pub fn ssa_check(ps: &PartySystem, v: &RatVector) -> (bool, usize) {
    let full = ps.full_label_mask();
    let mut violated = 0;
    for i_mask in 1..=full {
        let rest_i = full & !i_mask;
        let mut j_mask = rest_i;
        while j_mask > 0 {
            if j_mask > i_mask {
                let rest_ij = rest_i & !j_mask;
                let mut k_mask = rest_ij;
                while k_mask > 0 {
                    let val = entropy_term(ps, v, i_mask | k_mask)
                        + entropy_term(ps, v, j_mask | k_mask)
                        - entropy_term(ps, v, i_mask | j_mask | k_mask)
                        - entropy_term(ps, v, k_mask);
                    if val.is_negative() {
                        violated += 1;
                    }
                    k_mask = (k_mask - 1) & rest_ij;
                }
            }
            j_mask = (j_mask - 1) & rest_i;
        }
    }
    (violated == 0, violated)
}

/// Evaluate every instance `S_J + S_K − S_JK` directly; the counterpart of
/// `InequalitySystem::satisfies_all` that does not need the built system.
pub fn sa_check(ps: &PartySystem, v: &RatVector) -> (bool, usize) {
    let full = ps.full_label_mask();
    let mut violated = 0;
    for a in 1..=full {
        let comp = full & !a;
        let mut b = comp;
        while b > 0 {
            if b > a {
                let val = entropy_term(ps, v, a) + entropy_term(ps, v, b)
                    - entropy_term(ps, v, a | b);
                if val.is_negative() {
                    violated += 1;
                }
            }
            b = (b - 1) & comp;
        }
    }
    (violated == 0, violated)
}

// ---------------------------------------------------------------------------
// Graph models
// ---------------------------------------------------------------------------

/// A weighted graph with party-labeled boundary vertices; min-cuts define an
/// entropy vector.
#[derive(Clone, Debug)]
pub struct GraphModel {
    labels: Vec<Option<u32>>,
    edges: Vec<(usize, usize, Rat)>,
}

impl GraphModel {
    pub fn new(labels: Vec<Option<u32>>, edges: Vec<(usize, usize, Rat)>) -> Result<Self> {
        for &(u, v, ref w) in &edges {
            if u >= labels.len() || v >= labels.len() || u == v {
                return Err(Error::InvalidInput(format!("bad edge ({u},{v})")));
            }
            if !w.is_positive() {
                return Err(Error::InvalidInput("edge weights must be positive".into()));
            }
        }
        Ok(GraphModel { labels, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Option<u32>] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize, Rat)] {
        &self.edges
    }

    /// Highest party label; parties 1..=N must all appear, the purifier
    /// label 0 is optional (absent means the party state is already pure).
    pub fn party_system(&self) -> Result<PartySystem> {
        let mut seen = 0u32;
        let mut max = 0;
        for l in self.labels.iter().flatten() {
            seen |= 1 << l;
            max = max.max(*l);
        }
        if max < 2 {
            return Err(Error::InvalidInput("need labels up to at least party 2".into()));
        }
        if seen | 1 != (1 << (max + 1)) - 1 {
            return Err(Error::InvalidInput(format!(
                "every party label in 1..={max} must appear on some vertex"
            )));
        }
        PartySystem::new(max)
    }

    fn is_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Exact max-flow (shortest augmenting paths) between vertex sets.
fn min_cut(g: &GraphModel, sources: &[usize], sinks: &[usize]) -> Rat {
    let n = g.n_vertices() + 2;
    let (s, t) = (n - 2, n - 1);
    let mut heads: Vec<usize> = Vec::new();
    let mut caps: Vec<Rat> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut add_edge = |adj: &mut Vec<Vec<usize>>,
                        heads: &mut Vec<usize>,
                        caps: &mut Vec<Rat>,
                        u: usize,
                        v: usize,
                        c: Rat,
                        c_rev: Rat| {
        adj[u].push(heads.len());
        heads.push(v);
        caps.push(c);
        adj[v].push(heads.len());
        heads.push(u);
        caps.push(c_rev);
    };
    let total: Rat = g
        .edges
        .iter()
        .fold(Rat::zero(), |acc, (_, _, w)| acc + w);
    let inf = total + rat(1);
    for &(u, v, ref w) in &g.edges {
        add_edge(&mut adj, &mut heads, &mut caps, u, v, w.clone(), w.clone());
    }
    for &u in sources {
        add_edge(&mut adj, &mut heads, &mut caps, s, u, inf.clone(), Rat::zero());
    }
    for &u in sinks {
        add_edge(&mut adj, &mut heads, &mut caps, u, t, inf.clone(), Rat::zero());
    }
    let mut flow = Rat::zero();
    loop {
        // BFS over positive-residual arcs
        let mut prev_arc = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        visited[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &adj[u] {
                let v = heads[e];
                if !visited[v] && caps[e].is_positive() {
                    visited[v] = true;
                    prev_arc[v] = e;
                    queue.push_back(v);
                }
            }
            if visited[t] {
                break;
            }
        }
        if !visited[t] {
            return flow;
        }
        // bottleneck along the path
        let mut bottleneck: Option<Rat> = None;
        let mut v = t;
        while v != s {
            let e = prev_arc[v];
            bottleneck = Some(match bottleneck {
                None => caps[e].clone(),
                Some(b) => b.min(caps[e].clone()),
            });
            v = heads[e ^ 1];
        }
        let push = bottleneck.expect("path has at least one arc");
        let mut v = t;
        while v != s {
            let e = prev_arc[v];
            caps[e] -= &push;
            let back = &caps[e ^ 1] + &push;
            caps[e ^ 1] = back;
            v = heads[e ^ 1];
        }
        flow += push;
    }
}

/// Min-cut entropies for every nonempty party subset.
pub fn graph_entropy(g: &GraphModel) -> Result<(PartySystem, RatVector)> {
    let ps = g.party_system()?;
    if !g.is_connected() {
        return Err(Error::InvalidInput("graph is not connected".into()));
    }
    let n_coords = ps.ambient_dim();
    let coords: Vec<Rat> = (1..=n_coords as u32)
        .map(|mask| {
            let sources: Vec<usize> = g
                .labels
                .iter()
                .enumerate()
                .filter(|(_, l)| matches!(l, Some(p) if *p > 0 && mask >> (p - 1) & 1 == 1))
                .map(|(i, _)| i)
                .collect();
            let sinks: Vec<usize> = g
                .labels
                .iter()
                .enumerate()
                .filter(|(_, l)| matches!(l, Some(p) if *p == 0 || mask >> (p - 1) & 1 == 0))
                .map(|(i, _)| i)
                .collect();
            min_cut(g, &sources, &sinks)
        })
        .collect();
    Ok((ps, RatVector::new(coords)))
}

/// Brute-force reference for `graph_entropy`: scan bulk-vertex assignments.
pub fn graph_entropy_bruteforce(g: &GraphModel) -> Result<(PartySystem, RatVector)> {
    let ps = g.party_system()?;
    if !g.is_connected() {
        return Err(Error::InvalidInput("graph is not connected".into()));
    }
    let bulk: Vec<usize> = g
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_none())
        .map(|(i, _)| i)
        .collect();
    if bulk.len() > 20 {
        return Err(Error::ResourceGuard(format!(
            "{} bulk vertices exceed the brute-force bound of 20",
            bulk.len()
        )));
    }
    let coords: Vec<Rat> = (1..=ps.ambient_dim() as u32)
        .map(|mask| {
            let side = |label: Option<u32>, assignment: usize, bulk_pos: Option<usize>| match label {
                Some(0) => false,
                Some(p) => mask >> (p - 1) & 1 == 1,
                None => assignment >> bulk_pos.expect("bulk vertex") & 1 == 1,
            };
            let mut best: Option<Rat> = None;
            for assignment in 0..1usize << bulk.len() {
                let vertex_side: Vec<bool> = g
                    .labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        side(*l, assignment, bulk.iter().position(|&b| b == i))
                    })
                    .collect();
                let cut = g
                    .edges
                    .iter()
                    .filter(|(u, v, _)| vertex_side[*u] != vertex_side[*v])
                    .fold(Rat::zero(), |acc, (_, _, w)| acc + w);
                best = Some(match best {
                    None => cut,
                    Some(b) => b.min(cut),
                });
            }
            best.expect("at least one assignment")
        })
        .collect();
    Ok((ps, RatVector::new(coords)))
}

/// Every vertex's total incident weight is even (integer weights required).
pub fn even_degree_check(g: &GraphModel) -> Result<bool> {
    let mut degree = vec![num_bigint::BigInt::from(0); g.n_vertices()];
    for (u, v, w) in &g.edges {
        if !w.is_integer() {
            return Err(Error::InvalidInput("even-degree check needs integer weights".into()));
        }
        degree[*u] += w.numer();
        degree[*v] += w.numer();
    }
    use num_integer::Integer;
    Ok(degree.iter().all(|d| d.is_even()))
}

// ---------------------------------------------------------------------------
// Inequality evaluation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default)]
pub struct EvalReport {
    pub saturated: usize,
    pub violated: usize,
    /// (tag, saturated, violated) per declared orbit tag.
    pub by_tag: Vec<(String, usize, usize)>,
}

/// Count saturations and violations of tagged dual vectors on `v`.
pub fn evaluate_inequalities(
    duals: &[(RatVector, Option<String>)],
    v: &RatVector,
) -> Result<EvalReport> {
    let mut report = EvalReport::default();
    let mut tags: Vec<(String, usize, usize)> = Vec::new();
    for (dual, tag) in duals {
        if dual.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: v.len(), got: dual.len() });
        }
        let val = dual.dot(v);
        let (sat, viol) = (val.is_zero() as usize, val.is_negative() as usize);
        report.saturated += sat;
        report.violated += viol;
        if let Some(tag) = tag {
            match tags.iter_mut().find(|(t, _, _)| t == tag) {
                Some(entry) => {
                    entry.1 += sat;
                    entry.2 += viol;
                }
                None => tags.push((tag.clone(), sat, viol)),
            }
        }
    }
    report.by_tag = tags;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: u32) -> PartySystem {
        PartySystem::new(n).unwrap()
    }

    #[test]
    fn instance_counts_match_formula() {
        for n in 2..=6 {
            let count = enumerate_mi_instances(&ps(n)).len() as u128;
            assert_eq!(count, mi_instance_count(n), "N={n}");
        }
        assert_eq!(mi_instance_count(2), 6);
        assert_eq!(mi_instance_count(3), 25);
        assert_eq!(mi_instance_count(5), 301);
        assert_eq!(mi_instance_count(6), 966);
    }

    #[test]
    fn count_formulas() {
        assert_eq!(facet_count(5), 270);
        assert_eq!(facet_count(6), 903);
        assert_eq!(fstar_dim(3), 1);
        assert_eq!(fstar_dim(5), 16);
        assert_eq!(fstar_dim(6), 42);
        assert_eq!(fstar_dim(2), 0);
    }

    #[test]
    fn dual_vectors_examples() {
        let p2 = ps(2);
        let i12 = parse_instance(&p2, "1:2").unwrap();
        assert_eq!(mi_dual_vector(&p2, &i12), RatVector::from_ints(&[1, 1, -1]));

        let p3 = ps(3);
        // coordinates: S1 S2 S12 S3 S13 S23 S123 (mask order)
        let i10 = parse_instance(&p3, "1:0").unwrap();
        assert_eq!(
            mi_dual_vector(&p3, &i10),
            RatVector::from_ints(&[1, 0, 0, 0, 0, -1, 1])
        );
        let imax = parse_instance(&p3, "1:230").unwrap();
        assert_eq!(
            mi_dual_vector(&p3, &imax),
            RatVector::from_ints(&[2, 0, 0, 0, 0, 0, 0])
        );
        assert!(imax.is_maximal(&p3));
    }

    #[test]
    fn canonical_orientation_and_names() {
        let p3 = ps(3);
        let a = parse_instance(&p3, "23:1").unwrap();
        let b = parse_instance(&p3, "1:23").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.name(&p3), "1:23");
        // purifier sorts last inside a subset and ranks after parties
        let c = parse_instance(&p3, "0:2").unwrap();
        assert_eq!(c.name(&p3), "2:0");
        let d = parse_instance(&p3, "02:13").unwrap();
        assert_eq!(d.name(&p3), "13:20");
    }

    #[test]
    fn mi_poset_small() {
        let p2 = ps(2);
        let instances = enumerate_mi_instances(&p2);
        let poset = build_mi_poset(&p2, &instances).unwrap();
        assert_eq!(poset.size(), 6);
        let names: Vec<String> = instances.iter().map(|m| m.name(&p2)).collect();
        let minimal: Vec<&str> = poset
            .minimal_elements()
            .iter()
            .map(|i| names[i].as_str())
            .collect();
        assert_eq!(minimal, vec!["1:2", "1:0", "2:0"]);
        let maximal: Vec<&str> = poset
            .maximal_elements()
            .iter()
            .map(|i| names[i].as_str())
            .collect();
        assert_eq!(maximal, vec!["1:20", "2:10", "0:12"]);
        // covers: every minimal sits under exactly two maximals here
        let idx = |n: &str| names.iter().position(|x| x == n).unwrap();
        assert!(poset.leq(idx("1:2"), idx("1:20")));
        assert!(!poset.leq(idx("1:2"), idx("0:12")));
    }

    #[test]
    fn party_group_orders() {
        let p3 = ps(3);
        let instances = enumerate_mi_instances(&p3);
        let (g, coord) = party_group(&p3, &instances).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(coord.len(), 24);
        // the identity is aligned
        let id_pos = g
            .elements()
            .iter()
            .position(|e| e.is_identity())
            .unwrap();
        assert!(coord[id_pos].is_identity());
    }

    #[test]
    fn transposition_example() {
        let p2 = ps(2);
        let sac = SacSystem::build(p2).unwrap();
        // swapping labels 0 and 1 sends I(1:2) to I(0:2) = canonical I(2:0)
        let sigma = vec![1u32, 0, 2];
        let from = sac.instance_index(&parse_instance(&p2, "1:2").unwrap()).unwrap();
        let to = sac.instance_index(&parse_instance(&p2, "2:0").unwrap()).unwrap();
        let elem = sac
            .group
            .elements()
            .iter()
            .find(|e| {
                // identify the group element realizing sigma via its action
                // on the pairwise instances
                (0..sac.len()).all(|i| {
                    let m = &sac.instances[i];
                    let im = MIInstance::new(
                        &p2,
                        apply_label_perm(&sigma, m.left()),
                        apply_label_perm(&sigma, m.right()),
                    )
                    .unwrap();
                    e.apply(i) == sac.instance_index(&im).unwrap()
                })
            })
            .unwrap();
        assert_eq!(elem.apply(from), to);
    }

    #[test]
    fn bell_face_and_excluded_counts() {
        for (n, bell, excluded) in [(3, 6, 19), (4, 10, 50), (5, 15, 121)] {
            let sac = SacSystem::build(ps(n)).unwrap();
            assert_eq!(sac.bell_face_downset().len(), bell, "N={n}");
            assert_eq!(sac.genuine_excluded_upset().len(), excluded, "N={n}");
            assert!(sac.poset.is_down_set(&sac.bell_face_downset()));
            let up = sac.genuine_excluded_upset();
            assert!(sac.poset.is_up_set(&up));
        }
        assert_eq!(SacSystem::build(ps(6)).unwrap().bell_face_downset().len(), 21);
    }

    #[test]
    fn n2_genuine_mode_is_degenerate() {
        let sac = SacSystem::build(ps(2)).unwrap();
        assert!(sac.initial_sets(SacMode::Genuine).is_err());
        let (down, excluded) = sac.initial_sets(SacMode::Full).unwrap();
        assert_eq!(down.len(), 3);
        assert_eq!(excluded.len(), 3);
    }

    #[test]
    fn presentation_round_trip() {
        let p3 = ps(3);
        let line = "1 1 1; 2 2 2; 1";
        let v = vector_from_line(&p3, line).unwrap();
        // S12 (mask 3, internal index 2) should be 2
        assert_eq!(v.get(2), &rat(2));
        assert_eq!(vector_to_line(&p3, &v), line);
    }

    #[test]
    fn ssa_and_sa_checks() {
        let p3 = ps(3);
        let star = vector_from_line(&p3, "1 1 1; 2 2 2; 1").unwrap();
        assert!(sa_check(&p3, &star).0);
        assert!(ssa_check(&p3, &star).0);
        // a vector violating subadditivity on I(1:2)
        let bad = vector_from_line(&p3, "1 1 1; 3 2 2; 1").unwrap();
        assert!(!sa_check(&p3, &bad).0);
        // sum of two Bell pairs on disjoint labels satisfies both
        let p4 = ps(4);
        let b12 = bell_pair_vector(&p4, 1, 2).unwrap();
        let b34 = bell_pair_vector(&p4, 3, 4).unwrap();
        let sum = b12.add(&b34);
        assert!(sa_check(&p4, &sum).0);
        assert!(ssa_check(&p4, &sum).0);
    }

    #[test]
    fn bell_pair_vectors() {
        let p2 = ps(2);
        let b = bell_pair_vector(&p2, 1, 2).unwrap();
        assert_eq!(vector_to_line(&p2, &b), "1 1; 0");
        let b0 = bell_pair_vector(&p2, 1, 0).unwrap();
        assert_eq!(vector_to_line(&p2, &b0), "1 0; 1");
    }

    #[test]
    fn sac_system_small_build() {
        let sac = SacSystem::build(ps(3)).unwrap();
        assert_eq!(sac.len(), 25);
        assert_eq!(sac.system.dim(), 7);
        assert_eq!(sac.maximal_instances().len(), 7);
        // redundant flags mark exactly the maximal instances
        for i in 0..sac.len() {
            assert_eq!(
                sac.system.is_redundant_member(i),
                sac.instances[i].is_maximal(&sac.ps)
            );
        }
        // the group action commutes with the dual map
        for (e, c) in sac.group.elements().iter().zip(0..) {
            for i in 0..sac.len() {
                let directly = mi_dual_vector(&sac.ps, &sac.instances[e.apply(i)]);
                let via_coords = sac.apply_to_vector(c, sac.system.dual(i));
                assert_eq!(directly, via_coords);
            }
        }
    }

    #[test]
    fn graph_bell_and_star() {
        // zero weight rejected
        assert!(GraphModel::new(vec![Some(1), Some(2)], vec![(0, 1, rat(0))]).is_err());
        // Bell pair: two vertices joined by a unit edge, purifier absent
        let bell = GraphModel::new(vec![Some(1), Some(2)], vec![(0, 1, rat(1))]).unwrap();
        let (p2, v) = graph_entropy(&bell).unwrap();
        assert_eq!(p2.n_parties(), 2);
        assert_eq!(vector_to_line(&p2, &v), "1 1; 0");

        // unit star: bulk center, leaves labeled 0..3
        let star = GraphModel::new(
            vec![None, Some(0), Some(1), Some(2), Some(3)],
            vec![
                (0, 1, rat(1)),
                (0, 2, rat(1)),
                (0, 3, rat(1)),
                (0, 4, rat(1)),
            ],
        )
        .unwrap();
        let (p3, v) = graph_entropy(&star).unwrap();
        assert_eq!(vector_to_line(&p3, &v), "1 1 1; 2 2 2; 1");
        let (_, bf) = graph_entropy_bruteforce(&star).unwrap();
        assert_eq!(v, bf);
        // homogeneity: doubled weights double the vector
        let scaled = GraphModel::new(
            star.labels().to_vec(),
            star.edges().iter().map(|(u, w, c)| (*u, *w, c * rat(2))).collect(),
        )
        .unwrap();
        let (_, v2) = graph_entropy(&scaled).unwrap();
        assert_eq!(vector_to_line(&p3, &v2), "2 2 2; 4 4 4; 2");
        // leaves have odd incident weight
        assert!(!even_degree_check(&star).unwrap());
        let two = GraphModel::new(
            vec![Some(1), Some(2), Some(0)],
            vec![(0, 1, rat(2)), (0, 2, rat(2)), (1, 2, rat(2))],
        )
        .unwrap();
        assert!(even_degree_check(&two).unwrap());
        let empty = GraphModel::new(vec![Some(1)], vec![]).unwrap();
        assert!(even_degree_check(&empty).unwrap());
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = GraphModel::new(
            vec![Some(1), Some(2), Some(0), None],
            vec![(0, 1, rat(1)), (0, 2, rat(1))],
        )
        .unwrap();
        assert!(graph_entropy(&g).is_err());
    }

    #[test]
    fn inequality_evaluation() {
        let duals = vec![
            (RatVector::from_ints(&[1, 1, -1]), Some("sa".to_string())),
            (RatVector::from_ints(&[1, 0, 0]), None),
        ];
        let v = RatVector::from_ints(&[1, 1, 2]);
        let rep = evaluate_inequalities(&duals, &v).unwrap();
        assert_eq!((rep.saturated, rep.violated), (1, 0));
        assert_eq!(rep.by_tag, vec![("sa".to_string(), 1, 0)]);
        let bad = RatVector::from_ints(&[1, 1]);
        assert!(evaluate_inequalities(&duals, &bad).is_err());
    }
}
